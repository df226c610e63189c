import io

import pytest

import oracles
from senslat import search


@pytest.mark.parametrize("n", [1, 2, 3])
def test_exhaustive_small(n):
    res = search.exhaustive_scan(n, threads=1)
    assert res.maxima() == oracles.EXHAUSTIVE_MAXIMA[n]
    assert res.evaluated == 1 << (1 << n)
    assert res.tripwire == []


def test_exhaustive_two_has_bs_equal_s():
    import senslat.boolfn as bf
    for v in range(16):
        f = bf.TruthTable.from_int(2, v)
        assert bf.block_sensitivity(f)[0] == bf.sensitivity(f).s


@pytest.mark.slow
def test_exhaustive_four_and_threads():
    a = search.exhaustive_scan(4, threads=1)
    b = search.exhaustive_scan(4, threads=2)
    assert a.to_dict() == b.to_dict()
    assert a.maxima() == oracles.EXHAUSTIVE_MAXIMA[4]
    assert all(r.replay() for r in a.records())


def test_random_matches_exhaustive_n3():
    res = search.random_scan(3, 10**6, seed=0)
    assert res.maxima() == oracles.EXHAUSTIVE_MAXIMA[3]


def test_random_reproducible_and_replays():
    a = search.random_scan(5, 2000, seed=1)
    b = search.random_scan(5, 2000, seed=1)
    assert a.to_dict() == b.to_dict()
    best = a.best_record()
    assert best.replay()


def test_random_zero_samples():
    res = search.random_scan(4, 0, seed=0)
    assert res.records() == [] and res.best_record() is None


def test_record_lines_stable():
    rec = search.exhaustive_scan(2, threads=1).records()
    buf = io.StringIO()
    search.write_records(rec, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0].startswith('{"n":2,"table":')
    back = search.read_records(io.StringIO(buf.getvalue()))
    assert [r.to_dict() for r in back] == [r.to_dict() for r in rec]


def test_replay_detects_tampering():
    rec = search.exhaustive_scan(2, threads=1).records()[-1]
    rec.bs += 1
    assert not rec.replay()


def test_limits():
    from senslat.errors import ResourceLimitError
    with pytest.raises(ResourceLimitError):
        search.exhaustive_scan(5)
    with pytest.raises(ResourceLimitError):
        search.random_scan(13, 1)
