# -*- coding: utf-8 -*-
"""Gene calling and the multi-experiment "super chip".

Spot regions are turned into per-experiment gene calls, and the calls of many
experiments are merged into a transaction matrix: one transaction per
experiment, one item column per gene state, every column stored as a P-tree
over the experiments laid out in Z-order.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ptree.models.genes import (
    GeneCall,
    GeneCatalog,
    Group,
    Level,
    ReferenceStats,
    SpotMap,
    validate_calls,
    validate_spot_map,
)
from ptree.models.mining import EXPRESSED, Item
from ptree.services.bitplane import pad_grid
from ptree.services.predicates import level_of
from ptree.services.ptree import PTree, and_, and_all, build_from_bits, rectangle_ptree, to_bits
from ptree.utils.errors import IncompatibleError, InputError, SpotMapError, UnknownItemError
from ptree.utils.validators import as_fraction, validate_fraction

logger = logging.getLogger(__name__)


def call_genes(
    ep: PTree,
    rp: PTree,
    ratios: np.ndarray,
    spots: SpotMap,
    rho: float,
    stats: ReferenceStats,
    experiment_id: str = "",
) -> List[GeneCall]:
    """Call every spotted gene of one experiment.

    X genes are expressed when at least ``rho`` of their region's pixels are in
    the EP tree; Y genes get the level of their region's mean log ratio.

    Raises:
        SpotMapError: If a region lies outside the image.
        IncompatibleError: If the trees do not cover the ratio grid.
    """
    rho = validate_fraction(rho, "rho")
    ratios = np.asarray(ratios, dtype=np.float64)
    height, width = ratios.shape
    is_valid, errors = validate_spot_map(spots, width, height)
    if not is_valid:
        raise SpotMapError("; ".join(errors))
    side = pad_grid(width, height)
    if ep.side != side or rp.side != side:
        raise IncompatibleError(
            f"EP/RP trees of side {ep.side}/{rp.side} do not match a {width}x{height} image (side {side})."
        )

    threshold = as_fraction(rho)
    calls = []
    for entry in spots:
        region = rectangle_ptree(side, entry.x0, entry.y0, entry.x1, entry.y1)
        ep_count = and_(ep, region).count
        rp_count = and_(rp, region).count
        if entry.group is Group.X:
            state = Fraction(ep_count, entry.area) >= threshold
        else:
            window = ratios[entry.y0:entry.y1 + 1, entry.x0:entry.x1 + 1]
            state = level_of(float(window.mean()), stats)
        call = GeneCall(
            experiment_id,
            entry.gene_id,
            entry.group,
            state,
            ep_fraction=ep_count / entry.area,
        )
        logger.debug("Experiment %s gene %s: ep=%d rp=%d area=%d -> %s",
                     experiment_id, entry.gene_id, ep_count, rp_count, entry.area, call.state_label)
        calls.append(call)
    return calls


def _item_of(call: GeneCall) -> Optional[Item]:
    if call.group is Group.X:
        return Item(call.gene_id, EXPRESSED) if call.state else None
    if call.state is Level.NEUTRAL:
        return None
    return Item(call.gene_id, call.state.value)


@dataclass(frozen=True)
class TransactionMatrix:
    """Experiments x gene-state items; each item column is a P-tree."""

    experiment_ids: Tuple[str, ...]
    items: Tuple[Item, ...]
    columns: Tuple[PTree, ...]
    catalog: GeneCatalog = field(default_factory=lambda: GeneCatalog({}))
    _index: Dict[Item, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.items) != len(self.columns):
            raise InputError(f"{len(self.items)} items but {len(self.columns)} columns.")
        object.__setattr__(self, "_index", {item: i for i, item in enumerate(self.items)})

    @property
    def n_transactions(self) -> int:
        return len(self.experiment_ids)

    def index(self, item: Item) -> int:
        try:
            return self._index[item]
        except KeyError:
            raise UnknownItemError(f"Item {item} is not in the matrix.") from None

    def column(self, item: Item) -> PTree:
        return self.columns[self.index(item)]

    def support_count(self, items: Iterable[Item], minimum: int = 0) -> int:
        """Number of transactions containing every item.

        AND-ing stops early once the running count falls below ``minimum``;
        a returned count below ``minimum`` is then only an upper bound.
        """
        trees = [self.column(item) for item in items]
        if not trees:
            return self.n_transactions
        return and_all(trees, minimum).count

    def support(self, items: Iterable[Item]) -> float:
        """Fraction of transactions containing every item; 1.0 for the empty set."""
        if self.n_transactions == 0:
            raise InputError("Support is undefined on a matrix without transactions.")
        return self.support_count(items) / self.n_transactions

    def transactions(self) -> List[FrozenSet[Item]]:
        """Decode the columns back into per-experiment item sets."""
        rows: List[set] = [set() for _ in self.experiment_ids]
        for item, tree in zip(self.items, self.columns):
            for position in np.flatnonzero(to_bits(tree)[:self.n_transactions]):
                rows[position].add(item)
        return [frozenset(row) for row in rows]

    @classmethod
    def from_transactions(
        cls,
        transactions: Sequence[Iterable[Item]],
        experiment_ids: Optional[Sequence[str]] = None,
    ) -> "TransactionMatrix":
        rows = [frozenset(row) for row in transactions]
        if experiment_ids is None:
            experiment_ids = [f"T{i + 1}" for i in range(len(rows))]
        if len(experiment_ids) != len(rows):
            raise InputError(f"{len(experiment_ids)} experiment ids for {len(rows)} transactions.")
        items = sorted(set().union(*rows)) if rows else []
        return cls(
            tuple(experiment_ids),
            tuple(items),
            tuple(_column(rows, item) for item in items),
            GeneCatalog({item.gene_id: item.group for item in items}),
        )


def _column(rows: Sequence[FrozenSet[Item]], item: Item) -> PTree:
    return build_from_bits(np.fromiter((item in row for row in rows), dtype=bool, count=len(rows)))


def build_superchip(
    calls: Sequence[GeneCall],
    experiment_order: Optional[Sequence[str]] = None,
) -> TransactionMatrix:
    """Merge per-experiment calls into a transaction matrix.

    Experiments keep the order given (or their first appearance in ``calls``).
    Every X gene gets an ``expressed`` column; Y genes get one column per
    non-neutral level observed. Missing calls simply leave bits unset.

    Raises:
        InputError: On duplicate (experiment, gene) calls or inconsistent groups.
    """
    is_valid, errors = validate_calls(calls)
    if not is_valid:
        raise InputError("; ".join(errors))

    if experiment_order is None:
        experiment_order = list(dict.fromkeys(call.experiment_id for call in calls))
    position = {experiment_id: i for i, experiment_id in enumerate(experiment_order)}
    if len(position) != len(experiment_order):
        raise InputError("Experiment order lists an experiment twice.")

    catalog = GeneCatalog.from_calls(calls)
    rows: List[set] = [set() for _ in experiment_order]
    items = {Item(gene_id, EXPRESSED) for gene_id, group in catalog.groups.items() if group is Group.X}
    for call in calls:
        if call.experiment_id not in position:
            raise InputError(f"Call for unknown experiment {call.experiment_id!r}.")
        item = _item_of(call)
        if item is not None:
            rows[position[call.experiment_id]].add(item)
            items.add(item)

    ordered = sorted(items)
    frozen_rows = [frozenset(row) for row in rows]
    matrix = TransactionMatrix(
        tuple(experiment_order),
        tuple(ordered),
        tuple(_column(frozen_rows, item) for item in ordered),
        catalog,
    )
    logger.info("Super chip: %d experiments, %d genes, %d items",
                matrix.n_transactions, catalog.total_genes, len(ordered))
    return matrix


def support(matrix: TransactionMatrix, items: Iterable[Item]) -> float:
    return matrix.support(items)


__all__ = [
    "TransactionMatrix",
    "build_superchip",
    "call_genes",
    "support",
]
