import sys

import numpy as np
import pytest

import oracles
from senslat import _kernels
from senslat import boolfn as bf

BACKENDS = [b for b in (_kernels.pure, _kernels.compiled) if b is not None]
needs_compiled = pytest.mark.skipif(_kernels.compiled is None, reason="extension not built")


@pytest.mark.parametrize("mod", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def test_sensitivity_counts_match_naive(mod):
    rng = np.random.default_rng(1)
    for trial in range(1000):
        n = int(rng.integers(1, 11))
        bits = oracles.random_table(rng, n)
        counts = mod.sensitivity_counts(bits, n)
        xs = rng.integers(0, 1 << n, size=4)
        for x in [0, (1 << n) - 1, *xs.tolist()]:
            assert counts[x] == oracles.naive_sensitivity_at(bits.tolist(), n, x)
        if n <= 6:
            assert counts.max() == oracles.naive_sensitivity(bits.tolist(), n)


@needs_compiled
def test_backends_agree_on_everything():
    rng = np.random.default_rng(7)
    for _ in range(60):
        n = int(rng.integers(1, 9))
        bits = oracles.random_table(rng, n)
        np.testing.assert_array_equal(_kernels.pure.sensitivity_counts(bits, n),
                                      _kernels.compiled.sensitivity_counts(bits, n))
        lmax = int(rng.integers(1, n + 1))
        masks = bf.candidate_masks(n, lmax)
        a = _kernels.pure.block_profile(bits, n, masks, lmax, 1 << 16)
        b = _kernels.compiled.block_profile(bits, n, masks, lmax, 1 << 16)
        np.testing.assert_array_equal(a[0], b[0])
        np.testing.assert_array_equal(a[1], b[1])
        x = int(rng.integers(0, 1 << n))
        ma = _kernels.pure.minimal_sensitive_blocks(bits, n, x, masks)
        mb = _kernels.compiled.minimal_sensitive_blocks(bits, n, x, masks)
        np.testing.assert_array_equal(ma, mb)
        va, ia = _kernels.pure.max_packing(ma)
        vb, ib = _kernels.compiled.max_packing(mb)
        assert (va, list(ia)) == (vb, list(ib))


@pytest.mark.parametrize("mod", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def test_max_packing_small_cases(mod):
    assert mod.max_packing(np.array([], dtype=np.int64))[0] == 0
    value, chosen = mod.max_packing(np.array([1, 2, 4], dtype=np.int64))
    assert (value, list(chosen)) == (3, [0, 1, 2])
    value, chosen = mod.max_packing(np.array([3, 5, 6, 8], dtype=np.int64))
    assert value == 2


@pytest.mark.parametrize("mod", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def test_block_profile_cap(mod):
    bits = np.array(oracles.table_bits(4, 0x6996), dtype=np.uint8)
    masks = bf.candidate_masks(4, 4)
    with pytest.raises(OverflowError):
        mod.block_profile(bits, 4, masks, 4, 1)


@pytest.mark.parametrize("mod", BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def test_sliced_blue(mod):
    pts = np.array([[3, 0, 9], [3, 1, 9], [0, 0, 0], [0, -4, 0]], dtype=np.int64)
    axes = np.array([0, 1], dtype=np.int64)
    cs = np.array([3, -4], dtype=np.int64)
    ptr = np.array([0, 1, 1], dtype=np.int64)
    idx = np.array([1], dtype=np.int64)
    assert mod.sliced_blue(pts, axes, cs, ptr, idx).tolist() == [1, 0, 0, 1]


def test_backend_name():
    assert _kernels.BACKEND in ("cython", "python")


def test_pure_fallback_selected_by_env():
    import os
    import subprocess
    code = ("from senslat import _kernels, measure, sorted_function;"
            "r = measure(sorted_function());"
            "print(_kernels.BACKEND, r.s, r.bs)")
    env = dict(os.environ, SENSLAT_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["python", "2", "3"]
