import random

import numpy as np
import pytest

from scrollsys import _kernels_py, kernels
from scrollsys.lattice import parse_spec
from scrollsys.oracle import PRIMES, basis, sample_points

compiled = pytest.importorskip("scrollsys._kernels")


def _inputs(spec, p, seed):
    s = parse_spec(spec)
    B = basis(s.n, s.a, s.b)
    pts = sample_points(s.r, p, random.Random(seed))
    return (
        np.array([i for i, _ in B.exponents], dtype=np.int64),
        np.array([k for _, k in B.exponents], dtype=np.int64),
        np.array([x for x, _ in pts], dtype=np.uint64),
        np.array([y for _, y in pts], dtype=np.uint64),
        np.array(s.mults, dtype=np.int64),
    )


@pytest.mark.parametrize("spec", ["L1(0,4,2^5)", "L6(0,4,3^11)", "L2(5,4,3^7)", "L0(3,3,1^4)", "L3(2,2)"])
@pytest.mark.parametrize("p", PRIMES + (101, 2**31 - 1))
def test_backends_agree(spec, p):
    args = _inputs(spec, p, 0)
    a = compiled.condition_matrix(*args, np.uint64(p))
    b = _kernels_py.condition_matrix(*args, np.uint64(p))
    assert a.dtype == np.uint64 and np.array_equal(a, b)
    assert compiled.rank_mod_p(a, np.uint64(p)) == _kernels_py.rank_mod_p(b, p)


def test_rank_random_matrices():
    rng = random.Random(0)
    for p in (2, 3, 7, PRIMES[2]):
        for _ in range(30):
            r, c = rng.randint(0, 9), rng.randint(0, 9)
            mat = np.array([[rng.randrange(p) for _ in range(c)] for _ in range(r)], dtype=np.uint64).reshape(r, c)
            assert compiled.rank_mod_p(mat, np.uint64(p)) == _kernels_py.rank_mod_p(mat, p)


def test_rank_of_dependent_rows():
    p = PRIMES[0]
    row = np.array([1, 2, 3, p - 1], dtype=np.uint64)
    mat = np.vstack([row, row, (row * 2) % p])
    assert kernels.rank_mod_p(mat, np.uint64(p)) == 1


def test_backend_flag():
    assert kernels.BACKEND in ("compiled", "python")


def test_pure_python_selected_by_environment():
    import os
    import subprocess
    import sys

    env = dict(os.environ, SCROLLSYS_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c",
         "from scrollsys import kernels, oracle, lattice;"
         "r = oracle.effective_dim_mc(lattice.parse_spec('L1(0,4,2^5)'));"
         "print(kernels.BACKEND, r.l_est, r.backend)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.split() == ["python", "0", "python"]
