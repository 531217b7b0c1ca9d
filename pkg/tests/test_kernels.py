"""Backend agreement and schedule invariance of the factorization kernel."""

import os
import subprocess
import sys

import numpy as np
import pytest

import kfk
from kfk.primes import base_primes_for, icbrt_ceil, primes_upto

try:
    from kfk import _kernels_numba

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False
from kfk import _kernels_numpy

RANGES = [(1, 2), (1, 513), (97, 1500), (10**6 - 3, 10**6 + 500), (10**9, 10**9 + 64)]


@pytest.mark.skipif(not HAS_NUMBA, reason="numba unavailable")
@pytest.mark.parametrize("lo,hi", RANGES)
def test_backends_bit_identical(lo, hi):
    bp = base_primes_for(hi)
    got_nb = _kernels_numba.factor_segment(lo, hi, bp)
    got_np = _kernels_numpy.factor_segment(lo, hi, bp)
    for a, b in zip(got_nb, got_np):
        assert a.dtype == b.dtype == np.int64
        assert np.array_equal(a, b)


@pytest.mark.parametrize("seglen", [64, 4096, 2**22])
@pytest.mark.parametrize("workers", [1, 4])
def test_segmentation_and_thread_invariance(seglen, workers):
    cfg = kfk.SieveConfig(segment_length=seglen, worker_count=workers)
    reference = kfk.tabulate("sigma", (1, 30001))
    table = kfk.tabulate("sigma", (1, 30001), cfg)
    assert np.array_equal(table.values, reference.values)
    assert table.values.dtype == np.uint64


def test_stream_blocks_tile_the_range():
    cfg = kfk.SieveConfig(segment_length=100, worker_count=3)
    blocks = list(kfk.stream_factors(1, 1234, cfg, cuts=[500, 700]))
    assert blocks[0].lo == 1 and blocks[-1].hi == 1234
    for a, b in zip(blocks, blocks[1:]):
        assert a.hi == b.lo
    assert any(b.hi == 500 for b in blocks) and any(b.hi == 700 for b in blocks)


def test_numpy_backend_selected_via_env():
    code = "import kfk; print(kfk.BACKEND)"
    env = dict(os.environ, KFK_BACKEND="numpy")
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True
    )
    assert out.returncode == 0
    assert out.stdout.strip() == "numpy"


def test_bad_backend_env_rejected():
    code = "import kfk"
    env = dict(os.environ, KFK_BACKEND="cuda")
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True
    )
    assert out.returncode != 0


def test_primes_upto_matches_known_values():
    ps = primes_upto(100)
    assert ps.tolist()[:10] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert len(primes_upto(10**6)) == 78498
    assert primes_upto(1).size == 0


def test_icbrt_ceil():
    assert icbrt_ceil(1) == 1
    assert icbrt_ceil(8) == 2
    assert icbrt_ceil(9) == 3
    assert icbrt_ceil(10**6) == 100
    assert icbrt_ceil(10**6 + 1) == 101
