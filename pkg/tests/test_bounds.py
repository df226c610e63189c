from fractions import Fraction

import pytest

import oracles
from senslat import boolfn as bf
from senslat import bounds as bd
from senslat import lattice as lt
from senslat.constructions import rubinstein_f, slice_coloring, slice_group, sorted_function
from senslat.errors import PreconditionError, ResourceLimitError


@pytest.mark.parametrize("l", sorted(oracles.KK_C))
def test_kk_constant_exact(l):
    assert bd.kk_constant(l).value == Fraction(*oracles.KK_C[l])


def test_kk_constant_strict_bound():
    assert bd.kk_strict_check(50).passed


def test_e_bounds_bracket_e():
    lo, hi = bd.e_bounds()
    import math
    assert lo < hi and float(lo) <= math.e <= float(hi)


def test_kk_check_examples():
    rep = bd.kk_check(sorted_function())
    assert rep.passed and rep.details["bs_l"] == {"1": 2, "2": 3}
    rep = bd.kk_check(bf.TruthTable(2, [0, 0, 0, 0]))
    assert rep.passed and rep.findings


@pytest.mark.slow
def test_kk_check_rubinstein():
    rep = bd.kk_check(rubinstein_f(4))
    assert rep.passed
    assert rep.details["bs_l"]["2"] == 8


def test_sweep_deterministic_across_threads():
    a = bd.kk_sweep(3, threads=1)
    b = bd.kk_sweep(3, threads=2)
    assert a.passed and a.to_dict() == b.to_dict()
    with pytest.raises(ResourceLimitError):
        bd.kk_sweep(5)


def test_lattice_lower_bound():
    rep = lt.exact_report(slice_coloring(2))
    chk = bd.lattice_lower_bound_check(rep)
    assert chk.passed
    assert chk.details["bound"] == pytest.approx(6 ** (1 / 3) / 2.718281828459045**2)


def test_lattice_lower_bound_width_one():
    slices = [lt.Slice(j, 1) for j in range(5)]
    c = lt.SlicedColoring(5, slices)
    rep = lt.exact_report(c)
    assert rep.min_width == 1 and rep.s >= 5
    assert bd.lattice_lower_bound_check(rep).passed


def test_mis_small_graphs():
    tri = [0b110, 0b101, 0b011]
    assert bd.max_independent_set_masks(tri)[0] == 1
    assert bd.max_independent_set_masks([0] * 5) == (5, [0, 1, 2, 3, 4])
    two = tri + [m << 3 for m in tri]
    assert bd.max_independent_set_masks(two)[0] == 2
    with pytest.raises(ResourceLimitError):
        bd.max_independent_set_masks([0] * 33)


def test_mis_matches_naive():
    import numpy as np
    rng = np.random.default_rng(4)
    for _ in range(60):
        nv = int(rng.integers(1, 11))
        adj = [0] * nv
        for a in range(nv):
            for b in range(a + 1, nv):
                if rng.random() < 0.35:
                    adj[a] |= 1 << b
                    adj[b] |= 1 << a
        size, chosen = bd.max_independent_set_masks(adj)
        assert size == oracles.naive_mis(adj)
        assert all(not (adj[a] >> b) & 1 for a in chosen for b in chosen)


def test_slice_graph_slice2():
    g = bd.slice_graph(slice_coloring(2))
    assert sorted(map(sorted, g.components())) == [[0, 1, 2], [3, 4, 5]]
    assert g.in_degrees() == [1] * 6 and g.out_degrees() == [1] * 6
    assert bd.max_independent_set(g)[0] == 2


def test_edges_absent_iff_slices_intersect():
    c = slice_coloring(3)
    adj = bd.slice_graph(c).undirected
    for i in range(c.d):
        for j in range(c.d):
            if i != j:
                meet = c.slice_on_axis(i).intersects(c.slice_on_axis(j))
                assert meet == (not (adj[i] >> j) & 1)


def test_empty_zero_sets_give_empty_graph():
    c = lt.SlicedColoring(4, [lt.Slice(j, 3) for j in range(4)])
    assert bd.slice_graph(c).edges == []
    size, axes, point = bd.max_mutual_intersection(c)
    assert size == 4 and point == [3, 3, 3, 3]


@pytest.mark.parametrize("n", [2, 3])
def test_mutual_intersection(n):
    c = slice_coloring(n)
    size, axes, point = bd.max_mutual_intersection(c)
    assert size == n
    assert all(c.slice_on_axis(a).contains(point) for a in axes)


def test_single_slice():
    c = lt.SlicedColoring(1, [lt.Slice(0, 3)])
    assert bd.max_mutual_intersection(c)[0] == 1
    rep = bd.sliced_bound_check(c)
    assert rep.passed and rep.details["sR"] == rep.details["sB"] == 1


def test_nonconformant_rejected():
    with pytest.raises(PreconditionError):
        bd.slice_graph(lt.SlicedColoring(2, [lt.Slice(0, 3)]))
    with pytest.raises(PreconditionError):
        bd.slice_graph(lt.SlicedColoring(1, [lt.Slice(0, 2)]))


@pytest.mark.parametrize("n", [2, 3])
def test_sliced_chain_tight(n):
    rep = bd.sliced_bound_check(slice_coloring(n))
    assert rep.passed
    d = rep.details
    assert d["tight"] and d["independence_number"] == d["sR"] == d["max_mutual_intersection"] == n
    assert d["bumped_point_red"] and d["bumped_point_r"] == n


@pytest.mark.parametrize("n", [1, 2, 3])
def test_repeated_check(n):
    c = lt.repeated_coloring(slice_group(n), n)
    rep = bd.repeated_bound_check(c)
    assert rep.passed and not rep.findings
    assert rep.details["outer"]["sR"] == n


def test_repeated_single_copy():
    c = lt.repeated_coloring(slice_group(2), 1)
    rep = bd.repeated_bound_check(c)
    assert rep.passed and rep.details["inner_dimension_bound"]["holds"]
