# -*- coding: utf-8 -*-
"""Peano count trees.

A P-tree records the number of 1-bits in every quadrant of a power-of-two
square, recursing NW, NE, SW, SE until a quadrant is pure (all 0 or all 1).
Trees are canonical: a node whose four children are the same pure kind is
stored as that pure node, so structural equality is set equality.
"""
from __future__ import annotations

import logging
import struct
from dataclasses import dataclass
from enum import IntEnum
from functools import lru_cache
from typing import Optional, Sequence, Tuple

import numpy as np

from ptree.models.bands import BitPlane, is_power_of_two
from ptree.services.bitplane import mask_to_bits, padding_popcount
from ptree.utils.config import MAX_SIDE, PTREE_MAGIC
from ptree.utils.errors import FormatError, IncompatibleError, InputError, PathError

logger = logging.getLogger(__name__)

_HEADER = struct.Struct("<4sHB")


class NodeKind(IntEnum):
    """Node kinds; the values are the serialized tags."""

    PURE0 = 0
    PURE1 = 1
    MIXED = 2


@dataclass(frozen=True, slots=True)
class PNode:
    kind: NodeKind
    count: int
    children: Tuple["PNode", ...] = ()

    @property
    def is_pure(self) -> bool:
        return self.kind is not NodeKind.MIXED


PURE0 = PNode(NodeKind.PURE0, 0)


@lru_cache(maxsize=64)
def _pure1(area: int) -> PNode:
    return PNode(NodeKind.PURE1, area)


def _pure(bit: bool, area: int) -> PNode:
    return _pure1(area) if bit else PURE0


def _mixed(children: Tuple[PNode, ...], area: int) -> PNode:
    """Assemble four children, collapsing uniform pure children."""
    first = children[0]
    if first.is_pure and all(child.kind is first.kind for child in children[1:]):
        return _pure(first.kind is NodeKind.PURE1, area)
    return PNode(NodeKind.MIXED, sum(child.count for child in children), children)


@dataclass(frozen=True, slots=True)
class PTree:
    """Canonical count tree over a side x side square."""

    side: int
    root: PNode

    def __post_init__(self) -> None:
        if not is_power_of_two(self.side) or self.side > MAX_SIDE:
            raise InputError(f"Tree side must be a power of two up to {MAX_SIDE}, got {self.side}.")

    @property
    def area(self) -> int:
        return self.side * self.side

    @property
    def depth(self) -> int:
        return self.side.bit_length() - 1

    @property
    def count(self) -> int:
        return self.root.count

    def __and__(self, other: "PTree") -> "PTree":
        return and_(self, other)

    def __or__(self, other: "PTree") -> "PTree":
        return or_(self, other)

    def __invert__(self) -> "PTree":
        return complement(self)


def pure_tree(side: int, bit: bool) -> PTree:
    return PTree(side, _pure(bit, side * side))


def build_from_bits(bits: np.ndarray | Sequence[bool], side: Optional[int] = None) -> PTree:
    """Build a tree from a Peano-ordered bit vector.

    Vectors shorter than the square are zero-padded; without ``side`` the
    smallest power-of-two square holding every bit is used.
    """
    vector = np.asarray(bits, dtype=bool).ravel()
    if side is None:
        side = 1
        while side * side < vector.size:
            side <<= 1
    if not is_power_of_two(side):
        raise InputError(f"Side must be a power of two, got {side}.")
    if vector.size > side * side:
        raise InputError(f"{vector.size} bits do not fit a square of side {side}.")
    if vector.size < side * side:
        vector = np.concatenate([vector, np.zeros(side * side - vector.size, dtype=bool)])

    prefix = np.zeros(vector.size + 1, dtype=np.int64)
    prefix[1:] = np.cumsum(vector, dtype=np.int64)

    def _build(start: int, area: int) -> PNode:
        ones = int(prefix[start + area] - prefix[start])
        if ones == 0:
            return PURE0
        if ones == area:
            return _pure1(area)
        quarter = area // 4
        return PNode(
            NodeKind.MIXED,
            ones,
            tuple(_build(start + i * quarter, quarter) for i in range(4)),
        )

    return PTree(side, _build(0, side * side))


def build_from_plane(plane: BitPlane) -> PTree:
    """Build the canonical tree of a bit plane."""
    if not is_power_of_two(plane.side):
        raise InputError(f"Plane side must be a power of two, got {plane.side}.")
    return build_from_bits(plane.bits, plane.side)


def build_from_mask(mask: np.ndarray) -> PTree:
    """Build a tree from a row-major boolean grid, zero-padding to a power-of-two square."""
    bits, side = mask_to_bits(mask)
    return build_from_bits(bits, side)


def rectangle_ptree(side: int, x0: int, y0: int, x1: int, y1: int) -> PTree:
    """Tree that is 1 exactly on columns x0..x1 and rows y0..y1 (inclusive)."""
    if not is_power_of_two(side):
        raise InputError(f"Side must be a power of two, got {side}.")
    if not (0 <= x0 <= x1 < side and 0 <= y0 <= y1 < side):
        raise InputError(f"Rectangle ({x0},{y0})-({x1},{y1}) is empty or outside side {side}.")

    def _build(qx: int, qy: int, size: int) -> PNode:
        if qx > x1 or qy > y1 or qx + size - 1 < x0 or qy + size - 1 < y0:
            return PURE0
        if x0 <= qx and qx + size - 1 <= x1 and y0 <= qy and qy + size - 1 <= y1:
            return _pure1(size * size)
        half = size // 2
        children = (
            _build(qx, qy, half),
            _build(qx + half, qy, half),
            _build(qx, qy + half, half),
            _build(qx + half, qy + half, half),
        )
        return _mixed(children, size * size)

    return PTree(side, _build(0, 0, side))


def extent_ptree(side: int, width: int, height: int) -> PTree:
    """Mask of the original width x height extent inside the padded square."""
    return rectangle_ptree(side, 0, 0, width - 1, height - 1)


def root_count(tree: PTree) -> int:
    return tree.root.count


def quadrant_count(tree: PTree, path: Sequence[int]) -> int:
    """1-bit count of the sub-quadrant reached by following child indices."""
    if len(path) > tree.depth:
        raise PathError(f"Path of length {len(path)} is deeper than tree depth {tree.depth}.")
    node = tree.root
    area = tree.area
    for index in path:
        if not 0 <= index <= 3:
            raise PathError(f"Child index must lie in [0, 3], got {index}.")
        area //= 4
        if node.kind is NodeKind.MIXED:
            node = node.children[index]
        else:
            node = _pure(node.kind is NodeKind.PURE1, area)
    return node.count


def _check_sides(a: PTree, b: PTree) -> None:
    if a.side != b.side:
        raise IncompatibleError(f"Cannot combine trees of side {a.side} and {b.side}.")


def _and(a: PNode, b: PNode, area: int) -> PNode:
    if a.kind is NodeKind.PURE0 or b.kind is NodeKind.PURE0:
        return PURE0
    if a.kind is NodeKind.PURE1:
        return b
    if b.kind is NodeKind.PURE1:
        return a
    quarter = area // 4
    return _mixed(tuple(_and(x, y, quarter) for x, y in zip(a.children, b.children)), area)


def _or(a: PNode, b: PNode, area: int) -> PNode:
    if a.kind is NodeKind.PURE1 or b.kind is NodeKind.PURE1:
        return _pure1(area)
    if a.kind is NodeKind.PURE0:
        return b
    if b.kind is NodeKind.PURE0:
        return a
    quarter = area // 4
    return _mixed(tuple(_or(x, y, quarter) for x, y in zip(a.children, b.children)), area)


def _complement(node: PNode, area: int) -> PNode:
    if node.kind is NodeKind.PURE0:
        return _pure1(area)
    if node.kind is NodeKind.PURE1:
        return PURE0
    quarter = area // 4
    return PNode(
        NodeKind.MIXED,
        area - node.count,
        tuple(_complement(child, quarter) for child in node.children),
    )


def and_(a: PTree, b: PTree) -> PTree:
    _check_sides(a, b)
    return PTree(a.side, _and(a.root, b.root, a.area))


def or_(a: PTree, b: PTree) -> PTree:
    _check_sides(a, b)
    return PTree(a.side, _or(a.root, b.root, a.area))


def complement(a: PTree) -> PTree:
    """Pointwise negation over the whole square (NOT and COMPLEMENT are the same operation)."""
    return PTree(a.side, _complement(a.root, a.area))


def and_all(trees: Sequence[PTree], minimum: int = 0) -> PTree:
    """AND trees left to right, stopping once the running count drops below ``minimum``."""
    if not trees:
        raise InputError("and_all needs at least one tree.")
    result = trees[0]
    for tree in trees[1:]:
        if result.count < minimum:
            break
        result = and_(result, tree)
    return result


def to_bits(tree: PTree) -> np.ndarray:
    """Materialize the Peano-ordered bit vector of a tree."""
    bits = np.zeros(tree.area, dtype=bool)

    def _fill(node: PNode, start: int, area: int) -> None:
        if node.kind is NodeKind.PURE1:
            bits[start:start + area] = True
        elif node.kind is NodeKind.MIXED:
            quarter = area // 4
            for i, child in enumerate(node.children):
                _fill(child, start + i * quarter, quarter)

    _fill(tree.root, 0, tree.area)
    return bits


def to_plane(
    tree: PTree,
    *,
    band_id: int = 0,
    bit_index: int = 1,
    width: Optional[int] = None,
    height: Optional[int] = None,
) -> BitPlane:
    """Invert a tree back into a bit plane carrying the given metadata.

    Raises:
        InputError: If the tree has 1-bits outside the requested extent.
    """
    plane = BitPlane(
        band_id,
        bit_index,
        tree.side,
        tree.side if width is None else width,
        tree.side if height is None else height,
        to_bits(tree),
    )
    outside = padding_popcount(plane)
    if outside:
        raise InputError(f"Tree has {outside} set bits outside the {plane.orig_width}x{plane.orig_height} extent.")
    return plane


def node_count(tree: PTree) -> int:
    def _walk(node: PNode) -> int:
        return 1 + sum(_walk(child) for child in node.children)

    return _walk(tree.root)


def iter_tags(tree: PTree):
    """Yield node tags in preorder."""
    stack = [tree.root]
    while stack:
        node = stack.pop()
        yield int(node.kind)
        stack.extend(reversed(node.children))


def serialize(tree: PTree) -> bytes:
    """Encode as magic, u16 side, reserved byte and the preorder tag stream."""
    return _HEADER.pack(PTREE_MAGIC, tree.side, 0) + bytes(iter_tags(tree))


def deserialize(data: bytes) -> PTree:
    """Decode a serialized tree; counts are recomputed from the tags.

    Raises:
        FormatError: On bad magic, truncation, unknown tags, non-canonical
            nodes or trailing bytes; ``offset`` points at the offending byte.
    """
    if len(data) < _HEADER.size:
        raise FormatError("Truncated P-tree header.", offset=len(data))
    magic, side, _reserved = _HEADER.unpack_from(data)
    if magic != PTREE_MAGIC:
        raise FormatError(f"Bad P-tree magic {magic!r}.", offset=0)
    if not is_power_of_two(side):
        raise FormatError(f"P-tree side {side} is not a power of two.", offset=4)

    position = _HEADER.size

    def _read(area: int) -> PNode:
        nonlocal position
        if position >= len(data):
            raise FormatError("Truncated P-tree tag stream.", offset=position)
        tag = data[position]
        offset = position
        position += 1
        if tag == NodeKind.PURE0:
            return PURE0
        if tag == NodeKind.PURE1:
            return _pure1(area)
        if tag != NodeKind.MIXED:
            raise FormatError(f"Unknown P-tree tag {tag}.", offset=offset)
        if area == 1:
            raise FormatError("Mixed node at the 1x1 leaf level.", offset=offset)
        quarter = area // 4
        children = tuple(_read(quarter) for _ in range(4))
        node = _mixed(children, area)
        if node.is_pure:
            raise FormatError("Non-canonical mixed node with four identical pure children.", offset=offset)
        return node

    root = _read(side * side)
    if position != len(data):
        raise FormatError(f"{len(data) - position} trailing bytes after P-tree.", offset=position)
    return PTree(side, root)
