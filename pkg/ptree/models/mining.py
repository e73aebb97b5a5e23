# -*- coding: utf-8 -*-
"""Mining data models: items, parameters, frequent item sets and rules."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from ptree.models.genes import Group, Level
from ptree.utils.errors import InputError
from ptree.utils.validators import validate_fraction

EXPRESSED = "expressed"
MODES = ("any", "xy")


@dataclass(frozen=True, order=False)
class Item:
    """A gene-state pair; X genes only ever appear as ``expressed``."""

    gene_id: str
    state: str

    @property
    def group(self) -> Group:
        return Group.X if self.state == EXPRESSED else Group.Y

    @property
    def sort_key(self) -> Tuple[str, int]:
        if self.state == EXPRESSED:
            return self.gene_id, -1
        return self.gene_id, Level(self.state).rank

    def __lt__(self, other: "Item") -> bool:
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        return f"{self.gene_id}:{self.state}"


ItemSet = Tuple[Item, ...]


@dataclass(frozen=True)
class MiningParams:
    minsup: float
    minconf: float
    mode: str = "any"
    max_itemset_size: Optional[int] = None

    def __post_init__(self) -> None:
        validate_fraction(self.minsup, "minsup")
        validate_fraction(self.minconf, "minconf")
        if self.mode not in MODES:
            raise InputError(f"Mode must be one of {', '.join(MODES)}, got {self.mode!r}.")
        if self.max_itemset_size is not None and self.max_itemset_size < 2:
            raise InputError(f"Max itemset size must be at least 2, got {self.max_itemset_size}.")


@dataclass(frozen=True)
class FrequentItemset:
    items: ItemSet
    count: int
    n_transactions: int

    @property
    def support(self) -> float:
        return self.count / self.n_transactions


@dataclass(frozen=True)
class Rule:
    antecedent: ItemSet
    consequent: ItemSet
    count: int
    antecedent_count: int
    n_transactions: int

    @property
    def support(self) -> float:
        return self.count / self.n_transactions

    @property
    def confidence(self) -> float:
        return self.count / self.antecedent_count

    @property
    def sort_key(self):
        # support desc, confidence desc, then items
        return (
            -self.count,
            -Fraction(self.count, self.antecedent_count),
            tuple(item.sort_key for item in self.antecedent),
            tuple(item.sort_key for item in self.consequent),
        )

    def __str__(self) -> str:
        return (
            f"{'+'.join(map(str, self.antecedent))} => {'+'.join(map(str, self.consequent))} "
            f"(support={self.support:.6f}, confidence={self.confidence:.6f})"
        )
