# -*- coding: utf-8 -*-
"""Apriori frequent item sets and association rules over a super chip.

Support of a candidate is the root count of the AND of its item columns, with
an early exit once the running count drops below the absolute threshold.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from itertools import combinations
from typing import Dict, FrozenSet, List, Sequence, Tuple

from ptree.models.genes import Group
from ptree.models.mining import FrequentItemset, Item, MiningParams, Rule
from ptree.services.superchip import TransactionMatrix
from ptree.utils.errors import InputError
from ptree.utils.validators import as_fraction

logger = logging.getLogger(__name__)

Candidate = Tuple[int, ...]


def min_support_count(minsup: float, n_transactions: int) -> int:
    """Smallest transaction count whose support reaches ``minsup``."""
    return max(1, math.ceil(as_fraction(minsup) * n_transactions))


def _join(frequent: Sequence[Candidate]) -> List[Candidate]:
    """Apriori candidate generation over lexicographically sorted index tuples."""
    known = set(frequent)
    candidates = []
    for i, left in enumerate(frequent):
        for right in frequent[i + 1:]:
            if left[:-1] != right[:-1]:
                break
            candidate = left + (right[-1],)
            if all(subset in known for subset in combinations(candidate, len(candidate) - 1)):
                candidates.append(candidate)
    return candidates


def frequent_itemsets(matrix: TransactionMatrix, params: MiningParams, workers: int = 1) -> List[FrequentItemset]:
    """All item sets with support at least ``params.minsup``, by size then lexicographically.

    Raises:
        InputError: If the matrix has no transactions.
    """
    n = matrix.n_transactions
    if n == 0:
        raise InputError("Cannot mine an empty transaction matrix.")
    threshold = min_support_count(params.minsup, n)

    level = [(i,) for i, tree in enumerate(matrix.columns) if tree.count >= threshold]
    counts: Dict[Candidate, int] = {(i,): matrix.columns[i].count for (i,) in level}
    size = 1
    logger.info("Apriori: %d transactions, threshold %d, %d frequent items", n, threshold, len(level))

    with ThreadPoolExecutor(max_workers=workers) as executor:
        while level and (params.max_itemset_size is None or size < params.max_itemset_size):
            candidates = _join(level)
            if not candidates:
                break
            supports = executor.map(
                lambda candidate: matrix.support_count((matrix.items[i] for i in candidate), threshold),
                candidates,
            )
            level = []
            for candidate, count in zip(candidates, supports):
                if count >= threshold:
                    level.append(candidate)
                    counts[candidate] = count
            size += 1
            logger.debug("Apriori size %d: %d candidates, %d frequent", size, len(candidates), len(level))

    ordered = sorted(counts, key=lambda candidate: (len(candidate), candidate))
    return [
        FrequentItemset(tuple(matrix.items[i] for i in candidate), counts[candidate], n)
        for candidate in ordered
    ]


def _allowed(antecedent: Sequence[Item], consequent: Sequence[Item], mode: str) -> bool:
    if mode != "xy":
        return True
    return (
        all(item.group is Group.X for item in antecedent)
        and all(item.group is Group.Y for item in consequent)
    )


def generate_rules(frequent: Sequence[FrequentItemset], params: MiningParams) -> List[Rule]:
    """Rules A => C over every frequent set, kept when confidence reaches ``params.minconf``."""
    counts: Dict[FrozenSet[Item], int] = {frozenset(entry.items): entry.count for entry in frequent}
    threshold = as_fraction(params.minconf)
    rules = []

    for entry in frequent:
        if len(entry.items) < 2:
            continue
        for size in range(1, len(entry.items)):
            for antecedent in combinations(entry.items, size):
                consequent = tuple(item for item in entry.items if item not in antecedent)
                if not _allowed(antecedent, consequent, params.mode):
                    continue
                antecedent_count = counts.get(frozenset(antecedent))
                if antecedent_count is None:
                    raise InputError(
                        f"Frequent list is not closed under subsets: {'+'.join(map(str, antecedent))} missing."
                    )
                if Fraction(entry.count, antecedent_count) >= threshold:
                    rules.append(Rule(antecedent, consequent, entry.count, antecedent_count, entry.n_transactions))

    rules.sort(key=lambda rule: rule.sort_key)
    return rules


def mine(matrix: TransactionMatrix, params: MiningParams, workers: int = 1) -> List[Rule]:
    """Frequent item sets followed by rule generation."""
    frequent = frequent_itemsets(matrix, params, workers=workers)
    rules = generate_rules(frequent, params)
    logger.info("Mined %d rules from %d frequent item sets", len(rules), len(frequent))
    return rules
