import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from senslat import lattice as lt
from senslat.constructions import slice_coloring, slice_group
from senslat.errors import NonTrivialityError, PreconditionError, ResourceLimitError


@st.composite
def sliced(draw, max_d=3):
    d = draw(st.integers(1, max_d))
    slices = []
    for axis in draw(st.lists(st.integers(0, d - 1), min_size=1, max_size=d, unique=True)):
        c = draw(st.sampled_from([-4, -3, 1, 2, 3, 4]))
        others = [j for j in range(d) if j != axis]
        zeros = draw(st.lists(st.sampled_from(others), unique=True)) if others else []
        slices.append(lt.Slice(axis, c, frozenset(zeros)))
    return lt.SlicedColoring(d, slices)


def as_tuples(c):
    return [(s.axis, s.c, s.zeros) for s in c.slices]


def nearest_representative(reps, v):
    return v if v in reps else max(reps)


@settings(max_examples=40, deadline=None)
@given(sliced())
def test_exact_report_matches_naive_box(c):
    rep = lt.exact_report(c)
    blue = oracles.naive_sliced_blue(as_tuples(c))
    assert (rep.s, rep.r, rep.sR, rep.sB) == oracles.naive_box_maxima(blue, c.d, -6, 6)
    assert rep.replay(c)


@settings(max_examples=40, deadline=None)
@given(sliced(), st.data())
def test_representative_map_preserves_local_picture(c, data):
    reps = [set(r.tolist()) for r in c.representatives()]
    rng = np.random.default_rng(data.draw(st.integers(0, 1000)))
    pts = rng.integers(-12, 13, size=(200, c.d))
    mapped = np.array([[nearest_representative(reps[j], int(v)) if v not in reps[j]
                        else int(v) for j, v in enumerate(p)] for p in pts])
    a = lt._neighbor_diffs(c, pts)
    b = lt._neighbor_diffs(c, mapped)
    for x, y in zip(a, b):
        np.testing.assert_array_equal(x, y)


@settings(max_examples=40, deadline=None)
@given(sliced())
def test_pointwise_r_le_s_le_2r(c):
    pts = np.array(np.meshgrid(*[np.arange(-5, 6)] * c.d, indexing="ij")).reshape(c.d, -1).T
    _, s, r = lt._neighbor_diffs(c, pts)
    assert np.all(r <= s) and np.all(s <= 2 * r)


def test_pointwise_matches_naive():
    c = slice_coloring(2)
    blue = oracles.naive_sliced_blue(as_tuples(c))
    rng = np.random.default_rng(3)
    for p in rng.integers(-1, 5, size=(300, c.d)).tolist():
        assert lt.point_sensitivity(c, p) == oracles.naive_point_sensitivity(blue, p)
        assert lt.axis_sensitivity(c, p) == oracles.naive_axis_sensitivity(blue, p)


def test_slice2_exact_box_and_factorized_agree():
    c = slice_coloring(2)
    box = lt.exact_report(c, method="box")
    fac = lt.exact_report(c, method="factorized")
    assert box.points == 7**6
    for rep in (box, fac):
        assert (rep.s, rep.r, rep.sR, rep.sB, rep.min_width) == oracles.SLICE2
        assert rep.replay(c)


def test_slice3_factorized():
    c = slice_coloring(3)
    rep = lt.exact_report(c)
    assert (rep.s, rep.r, rep.sR, rep.sB, rep.min_width) == oracles.SLICE3
    assert rep.replay(c)


def test_checkerboard_and_constants():
    rep = lt.exact_report(lt.checkerboard(3))
    assert (rep.s, rep.r) == (6, 3)
    rep = lt.exact_report(lt.constant_coloring(4))
    assert (rep.s, rep.r, rep.sR, rep.sB) == (0, 0, 0, 0)


def test_doubling_turns_r_into_s():
    for c in (slice_coloring(2), slice_group(2), lt.checkerboard(2)):
        rep = lt.exact_report(c)
        dbl = lt.exact_report(lt.double_coloring(c))
        assert dbl.s == rep.r == dbl.r


def test_reflection_preserves_measures():
    c = slice_coloring(2)
    rep = lt.exact_report(c)
    ref = lt.exact_report(lt.reflect(c, [1, -1, 1, -1, -1, 1]))
    assert (rep.s, rep.r, rep.sR, rep.sB) == (ref.s, ref.r, ref.sR, ref.sB)


def test_min_width_and_nontriviality():
    w = lt.min_width(slice_coloring(2))
    assert w.k == 3 and w.distances == [3] * 6 and w.signs == [1] * 6
    refl = lt.reflect(slice_coloring(2), [-1] + [1] * 5)
    assert lt.min_width(refl).signs[0] == -1
    rep = lt.check_nontrivial(lt.constant_coloring(2))
    assert not rep.passed and "axis 1" in rep.reason
    with pytest.raises(NonTrivialityError):
        lt.require_nontrivial(lt.constant_coloring(2, blue=True))


def test_mirror_periodic_period_scan_matches_wider_box():
    rng = np.random.default_rng(5)
    base = rng.integers(0, 2, size=(3, 2)).astype(bool)
    base[0, 0] = False
    c = lt.MirrorPeriodicColoring([2, 1], base)
    exact = lt.exact_report(c)
    wide = lt.box_report(c, -9, 9)
    assert (exact.s, exact.r, exact.sR, exact.sB) == (wide.s, wide.r, wide.sR, wide.sB)


def test_repeated_requires_red_sensitivity_one():
    rc = lt.repeated_coloring(slice_group(2), 2)
    assert rc.d == 6
    rep = lt.exact_report(rc)
    assert (rep.sR, rep.sB) == (2, 2)
    with pytest.raises(PreconditionError):
        lt.repeated_coloring(slice_coloring(2), 2)


def test_probe_cap():
    with pytest.raises(ResourceLimitError):
        lt.exact_report(slice_coloring(2), probe_cap=1000, method="box")


def test_sampled_report_is_seeded():
    c = slice_coloring(3)
    vals = lt.representative_box(c)
    a = lt.sampled_report(c, samples=5000, seed=9, values=vals)
    b = lt.sampled_report(c, samples=5000, seed=9, values=vals)
    assert a.to_dict() == b.to_dict()
    assert a.seed == 9 and a.r <= 3


@pytest.mark.parametrize("c", [
    slice_coloring(2),
    lt.repeated_coloring(slice_group(2), 2),
    lt.double_coloring(slice_group(2)),
    lt.reflect(slice_group(2), [1, -1, 1]),
    lt.MirrorPeriodicColoring([1, 2], np.arange(6).reshape(2, 3) % 2 == 1),
], ids=repr)
def test_spec_roundtrip(c):
    spec = json.loads(lt.dump_coloring(c))
    back = lt.coloring_from_spec(spec)
    assert back.to_spec() == c.to_spec()
    assert back.fingerprint() == c.fingerprint()
    rng = np.random.default_rng(0)
    pts = rng.integers(-5, 8, size=(500, c.d))
    np.testing.assert_array_equal(back.blue_batch(pts), c.blue_batch(pts))


def test_spec_errors():
    with pytest.raises(PreconditionError):
        lt.coloring_from_spec({"kind": "spiral"})
    with pytest.raises(PreconditionError):
        lt.Slice(0, 0)
    with pytest.raises(PreconditionError):
        lt.Slice(1, 3, frozenset({1}))
