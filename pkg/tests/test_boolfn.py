import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from senslat import boolfn as bf
from senslat.constructions import rubinstein_f, rubinstein_g, sorted_function
from senslat.errors import NotSensitiveError, PreconditionError, ResourceLimitError

tables = st.integers(1, 4).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, (1 << (1 << n)) - 1)))


def test_sorted_table_and_measures():
    f = sorted_function()
    assert f.to_hex() == oracles.SORTED_HEX
    rep = bf.measure(f)
    assert (rep.s, rep.bs) == (oracles.SORTED_S, oracles.SORTED_BS)
    assert rep.bs_l == oracles.SORTED_BS_L
    assert rep.replay(f)


def test_sorted_witness_family():
    f = sorted_function()
    bs, x, family = bf.block_sensitivity(f)
    assert x == 0
    assert sorted(bf.block_vars(m) for m in family) == [(1, 4), (2,), (3,)]


def test_text_format_roundtrip():
    f = sorted_function()
    assert f.dumps() == "n=4\nD18B\n"
    assert bf.TruthTable.parse("# comment\nn=4\n0xd18b\n") == f


@pytest.mark.parametrize("text", ["n=4", "4\nD18B", "n=4\nXYZ", "n=2\nFFFF"])
def test_parse_rejects(text):
    with pytest.raises(PreconditionError):
        bf.TruthTable.parse(text)


def test_input_strings_are_x1_first():
    assert bf.parse_input("1000") == 1
    assert bf.parse_input("0001") == 8
    assert bf.format_input(8, 4) == "0001"


def test_constant_function():
    f = bf.TruthTable(3, [1] * 8)
    rep = bf.measure(f)
    assert (rep.s, rep.bs, rep.bs_l) == (0, 0, {})
    assert rep.replay(f)


def test_rubinstein_g_small():
    g = rubinstein_g(4)
    assert bf.sensitivity(g).s == 4
    assert bf.eval_at(g, bf.parse_input("1100")) == 1
    assert bf.eval_at(g, bf.parse_input("1111")) == 0


def test_oracle_refuses_whole_domain():
    f = rubinstein_f(6)
    assert isinstance(f, bf.BooleanOracle)
    with pytest.raises(ResourceLimitError):
        bf.sensitivity(f)
    assert bf.eval_at(f, 3) == 1
    assert bf.sensitivity_at(f, 0) == 0


def test_minimal_block_errors():
    f = sorted_function()
    with pytest.raises(NotSensitiveError):
        bf.is_minimal_block(f, 0, 1 << 0 | 1 << 1)
    assert bf.is_minimal_block(f, 0, 0b1001)


@settings(max_examples=150, deadline=None)
@given(tables)
def test_matches_naive(nv):
    n, value = nv
    f = bf.TruthTable.from_int(n, value)
    bits = oracles.table_bits(n, value)
    assert bf.sensitivity(f).s == oracles.naive_sensitivity(bits, n)
    assert bf.block_sensitivity(f)[0] == oracles.naive_block_sensitivity(bits, n)
    for l in range(1, n + 1):
        assert bf.l_block_sensitivity(f, l, max_size=n) == oracles.naive_block_sensitivity(bits, n, l)


@settings(max_examples=100, deadline=None)
@given(tables, st.data())
def test_invariant_under_symmetries(nv, data):
    n, value = nv
    f = bf.TruthTable.from_int(n, value)
    perm = data.draw(st.permutations(range(n)))
    mask = data.draw(st.integers(0, (1 << n) - 1))
    base = bf.measure(f)
    for g in (bf.permute_variables(f, perm), bf.complement_inputs(f, mask), bf.complement_output(f)):
        rep = bf.measure(g)
        assert (rep.s, rep.bs, rep.bs_l) == (base.s, base.bs, base.bs_l)
        assert {rep.s0, rep.s1} == {base.s0, base.s1}


@settings(max_examples=100, deadline=None)
@given(tables)
def test_report_replays(nv):
    f = bf.TruthTable.from_int(*nv)
    assert bf.measure(f).replay(f)


@settings(max_examples=60, deadline=None)
@given(tables)
def test_hex_roundtrip(nv):
    n, value = nv
    f = bf.TruthTable.from_int(n, value)
    assert bf.TruthTable.parse(f.dumps()) == f
    assert f.to_int() == value


def test_random_inputs_cover_high_bits():
    rng = np.random.default_rng(0)
    xs = bf.random_inputs(rng, 70, 200)
    assert max(xs) >> 64
    assert all(0 <= x < 1 << 70 for x in xs)
