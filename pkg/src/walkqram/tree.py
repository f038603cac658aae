"""Perfect binary tree arithmetic and the dual-rail path layout."""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass


def _check_node(w: int, level: int, depth: int | None = None) -> None:
    if level < 0 or (depth is not None and level > depth):
        raise ValueError(f"level {level} outside tree of depth {depth}")
    if not 0 <= w < 2 ** level:
        raise ValueError(f"node index w={w} out of range at level {level}")


def children(w: int, level: int, depth: int | None = None) -> tuple[tuple[int, int], tuple[int, int]]:
    """Left and right child of node ``(w, level)``.

    >>> children(1, 1)
    ((2, 2), (3, 2))
    """
    _check_node(w, level, depth)
    if depth is not None and level >= depth:
        raise ValueError(f"node ({w},{level}) is a leaf of a depth-{depth} tree")
    return (2 * w, level + 1), (2 * w + 1, level + 1)


def parent(w: int, level: int) -> tuple[int, int]:
    _check_node(w, level)
    if level == 0:
        raise ValueError("the root has no parent node")
    return w // 2, level - 1


def address_bit(address: int, level: int, depth: int) -> int:
    """The bit ``a_{n-1-level}`` that steers the router at ``level``."""
    return (address >> (depth - 1 - level)) & 1


@dataclass(frozen=True)
class TreeGeometry:
    depth: int

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("tree depth must be >= 1")

    @property
    def node_count(self) -> int:
        return 2 ** (self.depth + 1) - 1

    def nodes(self, level: int | None = None) -> Iterator[tuple[int, int]]:
        levels = range(self.depth + 1) if level is None else (level,)
        for lv in levels:
            for w in range(2 ** lv):
                yield w, lv

    def children(self, w: int, level: int):
        return children(w, level, self.depth)

    def parent(self, w: int, level: int):
        return parent(w, level)

    def path_to(self, address: int) -> list[tuple[int, int]]:
        """Nodes visited from the root to leaf ``(address, depth)``."""
        if not 0 <= address < 2 ** self.depth:
            raise ValueError(f"address {address} out of range")
        node = (0, 0)
        path = [node]
        for level in range(self.depth):
            node = self.children(*node)[address_bit(address, level, self.depth)]
            path.append(node)
        return path


def path_index(j: int, q: int) -> int:
    """Path carrying walker ``j`` when its qubit value is ``q``."""
    if q not in (0, 1):
        raise ValueError("qubit value must be 0 or 1")
    return 2 * j + q


def dual_rail_paths(word: str | Sequence[int]) -> set[int]:
    """Occupied paths for a ket written most-significant qubit first.

    >>> sorted(dual_rail_paths("110"))
    [0, 3, 5]
    """
    bits = [int(b) for b in word]
    return {path_index(j, q) for j, q in enumerate(reversed(bits))}


def subtree_leaf_counts(designated: Iterable[int], w: int, level: int, depth: int) -> tuple[int, int]:
    """Designated addresses below the left and the right child of ``(w, level)``."""
    _check_node(w, level, depth)
    if level >= depth:
        raise ValueError("leaf nodes have no subtrees")
    shift = depth - level - 1
    left = right = 0
    for a in designated:
        top = a >> shift
        if top == 2 * w:
            left += 1
        elif top == 2 * w + 1:
            right += 1
    return left, right
