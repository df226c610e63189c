import json

import pytest

from senslat import boolfn as bf
from senslat import lattice as lt
from senslat.constructions import rubinstein_blocks, rubinstein_f, slice_coloring, slice_group, sorted_function
from senslat.errors import NonTrivialityError, NotSensitiveError, PreconditionError
from senslat.reductions import (
    ReductionCertificate,
    block_symmetry_check,
    coloring_to_function,
    function_to_coloring,
)


def test_sorted_to_coloring():
    f = sorted_function()
    c, cert = function_to_coloring(f, [0b1, 0b10, 0b1100], bf.parse_input("0100"))
    assert c.d == 3
    assert lt.check_nontrivial(c).passed
    rep = lt.exact_report(c)
    assert rep.s <= 2
    assert cert.holds and cert.verify() == []


def test_certificate_roundtrip_and_tamper():
    f = sorted_function()
    _, cert = function_to_coloring(f, [0b1, 0b10, 0b1100], bf.parse_input("0100"))
    back = ReductionCertificate.from_dict(json.loads(cert.dumps()))
    assert back.verify() == []
    back.witnesses["s_C"]["value"] += 1
    assert back.verify()


def test_rubinstein_to_coloring():
    f = rubinstein_f(2)
    c, cert = function_to_coloring(f, rubinstein_blocks(2), 0)
    assert c.d == 2 and cert.holds


def test_output_complemented_when_base_is_one():
    f = bf.complement_output(sorted_function())
    c, cert = function_to_coloring(f, [0b1, 0b10, 0b1100], bf.parse_input("0100"))
    assert cert.notes["output_complemented"]
    assert c.color([0, 0, 0]) == lt.Color.RED


def test_block_errors():
    f = sorted_function()
    with pytest.raises(NotSensitiveError):
        function_to_coloring(f, [0b11], 0)
    with pytest.raises(PreconditionError):
        function_to_coloring(f, [0b11, 0b10], 0)
    with pytest.raises(PreconditionError):
        function_to_coloring(f, [], 0)


def test_slice2_to_function():
    f, blocks, cert = coloring_to_function(slice_coloring(2))
    assert f.n == 18 and len(blocks) == 6
    assert bf.eval_at(f, 0) == 0
    assert bf.sensitivity(f).s <= 6
    assert cert.holds and cert.verify() == []
    assert block_symmetry_check(f, blocks, trials=5)


def test_small_coloring_to_function():
    slices = [lt.Slice(0, 3), lt.Slice(1, 3, frozenset({0}))]
    c = lt.SlicedColoring(2, slices)
    f, blocks, cert = coloring_to_function(c)
    assert f.n == 6 and cert.holds


def test_reflection_is_applied():
    c = lt.reflect(slice_group(2), [-1, 1, -1])
    f, blocks, cert = coloring_to_function(c)
    assert cert.witnesses["reflect_signs"] == [-1, 1, -1]
    assert cert.verify() == []


def test_trivial_coloring_rejected():
    with pytest.raises(NonTrivialityError):
        coloring_to_function(lt.SlicedColoring(2, [lt.Slice(0, 3)]))


def test_large_target_uses_oracle():
    f, blocks, cert = coloring_to_function(slice_coloring(3), samples=64)
    assert isinstance(f, bf.BooleanOracle) and f.n == 45
    assert cert.notes["s_f_mode"] == "sampled"
    assert cert.holds
    assert cert.verify() == []
