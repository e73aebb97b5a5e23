# -*- coding: utf-8 -*-
"""Gene-side data models: expression levels, reference statistics, spot maps and calls."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from ptree.utils.config import DEFAULT_PSEUDOCOUNT, DEFAULT_Z, MIN_REFERENCE_SPOTS
from ptree.utils.errors import InputError, SpotMapError


class Group(str, Enum):
    """X genes are binary expressed/not-expressed; Y genes carry an expression level."""

    X = "X"
    Y = "Y"


class Level(str, Enum):
    VERY_HIGH_EXPRESSION = "very_high_expression"
    HIGH_EXPRESSION = "high_expression"
    NEUTRAL = "neutral"
    HIGH_REPRESSION = "high_repression"
    VERY_HIGH_REPRESSION = "very_high_repression"

    @property
    def rank(self) -> int:
        return _LEVEL_RANK[self]


_LEVEL_RANK = {level: rank for rank, level in enumerate(Level)}
EXPRESSION_LEVELS = frozenset({Level.HIGH_EXPRESSION, Level.VERY_HIGH_EXPRESSION})
REPRESSION_LEVELS = frozenset({Level.HIGH_REPRESSION, Level.VERY_HIGH_REPRESSION})


@dataclass(frozen=True)
class ReferenceStats:
    """Mean and spread of pixel log2 ratios over reference spots."""

    mu: float
    sigma: float
    z: float = DEFAULT_Z
    pseudocount: float = DEFAULT_PSEUDOCOUNT

    def __post_init__(self) -> None:
        if not math.isfinite(self.mu):
            raise InputError(f"Reference mean must be finite, got {self.mu}.")
        if not math.isfinite(self.sigma) or self.sigma < 0:
            raise InputError(f"Reference sigma must be finite and non-negative, got {self.sigma}.")
        if not math.isfinite(self.z) or self.z <= 0:
            raise InputError(f"Threshold multiplier z must be positive, got {self.z}.")
        if not math.isfinite(self.pseudocount) or self.pseudocount <= 0:
            raise InputError(f"Pseudocount must be positive, got {self.pseudocount}.")

    @property
    def upper(self) -> float:
        return self.mu + self.z * self.sigma

    @property
    def lower(self) -> float:
        return self.mu - self.z * self.sigma


@dataclass(frozen=True)
class SpotEntry:
    """One spotted gene; the region is inclusive and uses a top-left origin."""

    gene_id: str
    x0: int
    y0: int
    x1: int
    y1: int
    group: Group
    is_reference: bool = False

    def __post_init__(self) -> None:
        if not self.gene_id:
            raise SpotMapError("Gene id must not be empty.")
        if self.x0 < 0 or self.y0 < 0 or self.x1 < self.x0 or self.y1 < self.y0:
            raise SpotMapError(
                f"Gene {self.gene_id}: region ({self.x0},{self.y0})-({self.x1},{self.y1}) is empty or negative."
            )

    @property
    def area(self) -> int:
        return (self.x1 - self.x0 + 1) * (self.y1 - self.y0 + 1)

    def fits(self, width: int, height: int) -> bool:
        return self.x1 < width and self.y1 < height


@dataclass(frozen=True)
class SpotMap:
    entries: Tuple[SpotEntry, ...]

    def __post_init__(self) -> None:
        seen = set()
        for entry in self.entries:
            if entry.gene_id in seen:
                raise SpotMapError(f"Duplicate gene id {entry.gene_id!r} in spot map.")
            seen.add(entry.gene_id)

    @property
    def references(self) -> Tuple[SpotEntry, ...]:
        return tuple(entry for entry in self.entries if entry.is_reference)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class GeneCatalog:
    """All genes K with their group assignment."""

    groups: Dict[str, Group]

    @property
    def total_genes(self) -> int:
        return len(self.groups)

    @classmethod
    def from_spots(cls, spots: SpotMap) -> "GeneCatalog":
        return cls({entry.gene_id: entry.group for entry in spots})

    @classmethod
    def from_calls(cls, calls: Iterable["GeneCall"]) -> "GeneCatalog":
        groups: Dict[str, Group] = {}
        for call in calls:
            known = groups.setdefault(call.gene_id, call.group)
            if known is not call.group:
                raise InputError(f"Gene {call.gene_id!r} is called as both {known.value} and {call.group.value}.")
        return cls(groups)


State = Union[bool, Level]


@dataclass(frozen=True)
class GeneCall:
    """Per-experiment state of one gene: a bool for X genes, a Level for Y genes."""

    experiment_id: str
    gene_id: str
    group: Group
    state: State
    ep_fraction: Optional[float] = None

    def __post_init__(self) -> None:
        if self.group is Group.X and not isinstance(self.state, bool):
            raise InputError(f"X gene {self.gene_id!r} needs a boolean state, got {self.state!r}.")
        if self.group is Group.Y and not isinstance(self.state, Level):
            raise InputError(f"Y gene {self.gene_id!r} needs a level state, got {self.state!r}.")

    @property
    def state_label(self) -> str:
        if isinstance(self.state, Level):
            return self.state.value
        return "1" if self.state else "0"


def validate_spot_map(spots: SpotMap, width: int, height: int, need_references: bool = False) -> Tuple[bool, List[str]]:
    """Validate a spot map against an image extent.

    Args:
        spots: Spot map to check.
        width: Original image width.
        height: Original image height.
        need_references: Whether reference statistics will be computed from it.

    Returns:
        Tuple of (is_valid, list_of_errors)
    """
    errors = []

    if len(spots) == 0:
        errors.append("Spot map has no entries.")

    for entry in spots:
        if not entry.fits(width, height):
            errors.append(
                f"Gene {entry.gene_id}: region ({entry.x0},{entry.y0})-({entry.x1},{entry.y1}) "
                f"outside the {width}x{height} image."
            )

    if need_references and len(spots.references) < MIN_REFERENCE_SPOTS:
        errors.append(
            f"At least {MIN_REFERENCE_SPOTS} reference spots are needed, found {len(spots.references)}."
        )

    return len(errors) == 0, errors


def validate_calls(calls: Sequence[GeneCall]) -> Tuple[bool, List[str]]:
    """Validate a batch of calls across experiments.

    Returns:
        Tuple of (is_valid, list_of_errors)
    """
    errors = []
    seen = set()
    groups: Dict[str, Group] = {}

    for call in calls:
        key = (call.experiment_id, call.gene_id)
        if key in seen:
            errors.append(f"Duplicate call for gene {call.gene_id!r} in experiment {call.experiment_id!r}.")
        seen.add(key)
        known = groups.setdefault(call.gene_id, call.group)
        if known is not call.group:
            errors.append(f"Gene {call.gene_id!r} is called as both {known.value} and {call.group.value}.")

    return len(errors) == 0, errors


@dataclass(frozen=True)
class Experiment:
    """One manifest row: a red/green image pair with optional reference overrides."""

    experiment_id: str
    red: Path
    green: Path
    mu: Optional[float] = None
    sigma: Optional[float] = None

    def __post_init__(self) -> None:
        if not self.experiment_id:
            raise InputError("Experiment id must not be empty.")
        if (self.mu is None) != (self.sigma is None):
            raise InputError(f"Experiment {self.experiment_id}: mu and sigma overrides must be given together.")

    def stats_override(self, z: float, pseudocount: float) -> Optional[ReferenceStats]:
        if self.mu is None:
            return None
        return ReferenceStats(self.mu, self.sigma, z=z, pseudocount=pseudocount)
