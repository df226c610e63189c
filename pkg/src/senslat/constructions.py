"""Explicit function and coloring families.

Grouped lattice coordinates {i, j} (1 <= i <= n, 1 <= j <= 2n-1) are
flattened row-major by group: {i, j} -> (i-1)(2n-1) + (j-1), 0-based.
"""

from __future__ import annotations

import numpy as np

from .boolfn import BooleanOracle, TruthTable, parse_input
from .errors import PreconditionError
from .lattice import Slice, SlicedColoring

SLICE_CONSTANT = 3
SORTED_ACCEPTED = ("0000", "0001", "0011", "0111", "1000", "1100", "1110", "1111")


class GroupedCoordinates:
    """Bijection between pairs (i, j) and flat 0-based lattice axes."""

    def __init__(self, n: int):
        if n < 1:
            raise PreconditionError("n must be >= 1")
        self.n = n
        self.width = 2 * n - 1

    @property
    def d(self) -> int:
        return self.n * self.width

    def flat(self, i: int, j: int) -> int:
        if not 1 <= i <= self.n:
            raise PreconditionError(f"group index {i} out of range")
        j = (j - 1) % self.width + 1
        return (i - 1) * self.width + (j - 1)

    def pair(self, flat: int) -> tuple[int, int]:
        if not 0 <= flat < self.d:
            raise PreconditionError(f"flat index {flat} out of range")
        return flat // self.width + 1, flat % self.width + 1


def sorted_function() -> TruthTable:
    """1 exactly when x1..x4 is one of the eight listed strings."""
    return TruthTable.from_accepted(4, [parse_input(s) for s in SORTED_ACCEPTED])


def _check_even(n: int):
    if n < 2 or n % 2:
        raise PreconditionError("n must be even")


def _g_accepted(n: int) -> list[int]:
    return [3 << (2 * j) for j in range(n // 2)]


def rubinstein_g(n: int) -> TruthTable:
    """Accepts exactly the inputs with a single adjacent pair (x_{2j-1}, x_{2j}) of ones."""
    _check_even(n)
    return TruthTable.from_accepted(n, _g_accepted(n))


def rubinstein_f(n: int) -> TruthTable | BooleanOracle:
    """OR of n copies of ``rubinstein_g(n)`` on consecutive n-bit segments.

    Explicit table for n <= 4 (16 variables); an oracle beyond that.
    """
    _check_even(n)
    seg_mask = (1 << n) - 1
    accepted = frozenset(_g_accepted(n))
    nvars = n * n
    if nvars <= 24:
        g_table = np.zeros(1 << n, dtype=np.uint8)
        g_table[list(accepted)] = 1
        idx = np.arange(1 << nvars, dtype=np.int64)
        out = np.zeros(idx.shape[0], dtype=np.uint8)
        for c in range(n):
            out |= g_table[(idx >> (c * n)) & seg_mask]
        return TruthTable(nvars, out)

    def fn(x: int) -> int:
        return int(any(((x >> (c * n)) & seg_mask) in accepted for c in range(n)))

    return BooleanOracle(nvars, fn, name=f"rubinstein_f({n})")


def rubinstein_blocks(n: int) -> list[int]:
    """The n^2/2 disjoint pair blocks, all sensitive at the all-zeros input."""
    _check_even(n)
    return [3 << (c * n + 2 * j) for c in range(n) for j in range(n // 2)]


def _group_slices(coords: GroupedCoordinates, groups) -> list[Slice]:
    n = coords.n
    out = []
    for a in groups:
        for b in range(1, coords.width + 1):
            zeros = frozenset(coords.flat(a, b + t) for t in range(1, n))
            out.append(Slice(coords.flat(a, b), SLICE_CONSTANT, zeros))
    return out


def slice_coloring(n: int) -> SlicedColoring:
    """The n(2n-1)-dimensional sliced coloring with axis-sensitivity n.

    Slice S_{a,b}: x_{a,b} = 3 and x_{a,b+1} = ... = x_{a,b+n-1} = 0, with
    the second index taken cyclically in 1..2n-1.
    """
    coords = GroupedCoordinates(n)
    return SlicedColoring(coords.d, _group_slices(coords, range(1, n + 1)))


def slice_group(n: int) -> SlicedColoring:
    """One coordinate group of ``slice_coloring(n)``: the slices S_{1,j} in 2n-1 dimensions."""
    coords = GroupedCoordinates(n)
    return SlicedColoring(coords.width, _group_slices(coords, [1]))


def slice_table(c: SlicedColoring) -> list[str]:
    """One row per slice (ordered by axis): '3' on the axis, '0' on zeros, '*' elsewhere."""
    rows = []
    for s in sorted(c.slices, key=lambda s: s.axis):
        cells = ["*"] * c.d
        cells[s.axis] = str(s.c)
        for z in s.zeros:
            cells[z] = "0"
        rows.append("".join(cells))
    return rows


def red_axis_witness(n: int) -> list[int]:
    """Red point of ``slice_coloring(n)`` with axis-sensitivity n.

    The slices S_{a,1} meet at the point with x_{a,1} = 3 and zeros
    elsewhere; bumping each x_{a,1} to 4 gives a red point from which every
    one of those n coordinates steps back into a slice.
    """
    coords = GroupedCoordinates(n)
    p = [0] * coords.d
    for a in range(1, n + 1):
        p[coords.flat(a, 1)] = SLICE_CONSTANT + 1
    return p
