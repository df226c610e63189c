import numpy as np
import pytest

import oracles
from senslat import boolfn as bf
from senslat import lattice as lt
from senslat.constructions import (
    GroupedCoordinates,
    red_axis_witness,
    rubinstein_blocks,
    rubinstein_f,
    slice_coloring,
    slice_group,
    slice_table,
    sorted_function,
)
from senslat.errors import PreconditionError


def test_grouped_coordinates_cyclic():
    g = GroupedCoordinates(3)
    assert g.d == 15
    assert g.flat(1, 6) == g.flat(1, 1) == 0
    assert g.pair(14) == (3, 5)
    assert all(g.flat(*g.pair(i)) == i for i in range(g.d))


def test_slice_table_n3_frozen():
    assert slice_table(slice_coloring(3)) == oracles.SLICE_TABLE_3


def test_slice_colorings_conform():
    for n in (1, 2, 3, 4):
        c = slice_coloring(n)
        assert c.d == n * (2 * n - 1)
        assert c.conformance_problems() == []


def test_repeated_group_is_the_same_coloring():
    for n in (2, 3):
        assert lt.repeated_coloring(slice_group(n), n).to_spec()["inner"] == slice_group(n).to_spec()
        rc = lt.RepeatedColoring(slice_group(n), n)
        pts = np.random.default_rng(n).integers(-1, 5, size=(2000, rc.d))
        np.testing.assert_array_equal(rc.blue_batch(pts), slice_coloring(n).blue_batch(pts))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_red_axis_witness(n):
    c = slice_coloring(n)
    w = red_axis_witness(n)
    assert c.color(w) == lt.Color.RED
    assert lt.axis_sensitivity(c, w) == n


def test_rubinstein_blocks_sensitive_at_zero():
    f = rubinstein_f(2)
    for m in rubinstein_blocks(2):
        assert bf.is_sensitive(f, 0, m)
    big = rubinstein_f(6)
    blocks = rubinstein_blocks(6)
    assert len(blocks) == 18
    assert all(bf.is_sensitive(big, 0, m) for m in blocks)


def test_rubinstein_needs_even():
    with pytest.raises(PreconditionError):
        rubinstein_f(3)


def test_sorted_accepts_listed():
    f = sorted_function()
    assert sum(f.bits) == 8
