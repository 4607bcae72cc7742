"""Interpolation oracle: the effective dimension by exact rank over a prime field.

Sections of aF + bH on F_n are, in the affine chart of the torus, the
polynomials sum c_ik x^i y^k with 0 <= k <= b and 0 <= i <= a + nk.  A point
of multiplicity m imposes the vanishing of every partial derivative of order
< m; with p larger than every multiplicity these are exactly the fat-point
conditions.

Ranks at random points can only fall below the generic rank, so
``l_est = h0 - 1 - max rank`` never underestimates the generic dimension
over F_p, and reduction mod p can only lower ranks further.  A report with
l_est equal to the expected dimension therefore certifies non-speciality in
characteristic 0.  A "special" verdict is a probabilistic statement whose
failure probability is bounded by Schwartz-Zippel and stored on the report.
"""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .errors import FieldTooSmallError, InvalidInputError
from .lattice import BlowupClass, expected_dim, format_system, h0_nef, DivisorClass

DEFAULT_PRIME = 2**61 - 1
PRIMES = (2**61 - 1, 2**62 - 57, 2**63 - 25)
MAX_PRIME = 2**63

CHAR0_NOTE = ("finite-field verdict: non-special transfers to characteristic 0; "
              "special holds over F_p with the stated failure bound")


@dataclass(frozen=True)
class MonomialBasis:
    n: int
    a: int
    b: int
    exponents: tuple[tuple[int, int], ...]

    def __len__(self):
        return len(self.exponents)


@lru_cache(maxsize=1024)
def basis(n: int, a: int, b: int) -> MonomialBasis:
    if n < 0 or a < 0 or b < 0:
        raise InvalidInputError(f"basis needs n, a, b >= 0; got ({n}, {a}, {b})")
    exps = tuple((i, k) for k in range(b + 1) for i in range(a + n * k + 1))
    expected = h0_nef(DivisorClass(n, a, b))
    if len(exps) != expected:  # pragma: no cover - identity
        raise AssertionError(f"basis size {len(exps)} != h0 {expected}")
    return MonomialBasis(n, a, b, exps)


@lru_cache(maxsize=64)
def _is_prime(p: int) -> bool:
    from sympy import isprime

    return bool(isprime(p))


def check_prime(p: int, max_mult: int = 0) -> int:
    if not 2 <= p < MAX_PRIME:
        raise InvalidInputError(f"modulus must lie in [2, 2^63), got {p}")
    if not _is_prime(p):
        raise InvalidInputError(f"{p} is not prime")
    if p <= max_mult:
        raise FieldTooSmallError(f"prime {p} does not exceed multiplicity {max_mult}")
    return p


def sample_points(r: int, p: int, rng: random.Random) -> list[tuple[int, int]]:
    """r points of the open torus with pairwise distinct x (distinct fibers)."""
    xs: set[int] = set()
    pts = []
    while len(pts) < r:
        x = rng.randrange(1, p)
        if x in xs:
            continue
        xs.add(x)
        pts.append((x, rng.randrange(1, p)))
    return pts


def condition_matrix(s: BlowupClass, points: Sequence[tuple[int, int]], p: int) -> np.ndarray:
    if len(points) != s.r:
        raise InvalidInputError(f"{s.r} points expected, got {len(points)}")
    if any(m < 0 for m in s.mults):
        raise InvalidInputError("negative multiplicity has no interpolation meaning")
    check_prime(p, max(s.mults, default=0))
    B = basis(s.n, s.a, s.b)
    ei = np.fromiter((i for i, _ in B.exponents), dtype=np.int64, count=len(B))
    ek = np.fromiter((k for _, k in B.exponents), dtype=np.int64, count=len(B))
    xs = np.fromiter((x % p for x, _ in points), dtype=np.uint64, count=len(points))
    ys = np.fromiter((y % p for _, y in points), dtype=np.uint64, count=len(points))
    ms = np.asarray(s.mults, dtype=np.int64)
    return kernels.condition_matrix(ei, ek, xs, ys, ms, np.uint64(p))


def rank_mod_p(mat: np.ndarray, p: int) -> int:
    return int(kernels.rank_mod_p(np.asarray(mat, dtype=np.uint64), np.uint64(p)))


@dataclass
class OracleReport:
    spec: str
    prime: int
    seeds: list[int]
    h0: int
    conditions: int
    rank_per_seed: list[int]
    l_est: int
    e: int
    deficiency: int
    verdict: str  # "special" | "non-special" | "inconclusive"
    failure_bound: float
    backend: str = kernels.BACKEND
    note: str = CHAR0_NOTE
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def _trial_rng(key: str, p: int, seed: int) -> random.Random:
    return random.Random(f"{key}|{p}|{seed}")


def effective_dim_mc(s: BlowupClass, p: int = DEFAULT_PRIME, trials: int = 3, seed: int = 0) -> OracleReport:
    """Monte Carlo estimate of the effective dimension over F_p.

    Each trial uses fresh points derived deterministically from (spec, p, seed + t).
    """
    if trials < 1:
        raise InvalidInputError("trials must be >= 1")
    if s.a < 0 or s.b < 0:
        raise InvalidInputError(f"{format_system(s)}: the oracle needs a, b >= 0")
    check_prime(p, max(s.mults, default=0))
    key = format_system(s)
    h0 = len(basis(s.n, s.a, s.b))
    conds = sum(m * (m + 1) // 2 for m in s.mults)
    seeds = [seed + t for t in range(trials)]
    ranks = []
    for sd in seeds:
        pts = sample_points(s.r, p, _trial_rng(key, p, sd))
        ranks.append(rank_mod_p(condition_matrix(s, pts, p), p))
    l_est = h0 - 1 - max(ranks)
    e = expected_dim(s)
    if l_est == e:
        verdict, bound = "non-special", 0.0
    elif len(set(ranks)) == 1:
        degree = s.a + (s.n + 1) * s.b
        per_trial = min(1.0, min(h0, conds) * max(degree, 1) / p)
        verdict, bound = "special", per_trial**trials
    else:
        verdict, bound = "inconclusive", 1.0
    return OracleReport(key, p, seeds, h0, conds, ranks, l_est, e, l_est - e, verdict, bound)


def robust_report(s: BlowupClass, primes: Sequence[int] = PRIMES[:2], trials: int = 1, seed: int = 0) -> OracleReport:
    """Escalating verdict: certify non-speciality on the first prime, confirm
    speciality on a second one, and move on to further primes with more
    trials while the outcome is inconclusive or the two disagree.
    """
    first = effective_dim_mc(s, primes[0], trials, seed)
    if first.verdict == "non-special":
        return first
    history = [first]
    for i, p in enumerate(primes[1:], start=1):
        rep = effective_dim_mc(s, p, trials + i, seed)
        history.append(rep)
        if rep.verdict == "non-special":
            rep.extra["escalated_from"] = [h.prime for h in history[:-1]]
            return rep
        specials = [h for h in history if h.verdict == "special"]
        if len(specials) >= 2 and len({h.l_est for h in specials}) == 1:
            rep.extra["confirmed_primes"] = [h.prime for h in specials]
            return rep
    last = history[-1]
    if last.verdict == "special":
        last.verdict = "inconclusive"
        last.extra["reason"] = "special on a single prime only"
    return last


def is_special_mc(s: BlowupClass, primes: Sequence[int] = PRIMES[:2], trials: int = 1, seed: int = 0) -> str:
    return robust_report(s, primes, trials, seed).verdict


def effective_dim_rational(s: BlowupClass, seed: int = 0, bound: int = 10**6) -> int:
    """Slow characteristic-0 cross-check: exact rank over Z at random integer points."""
    from sympy import ZZ
    from sympy.polys.matrices import DomainMatrix

    rng = random.Random(f"{format_system(s)}|QQ|{seed}")
    xs: set[int] = set()
    pts = []
    while len(pts) < s.r:
        x = rng.randrange(1, bound)
        if x not in xs:
            xs.add(x)
            pts.append((x, rng.randrange(1, bound)))
    B = basis(s.n, s.a, s.b)
    rows = []
    for (x, y), m in zip(pts, s.mults):
        for alpha in range(m):
            for beta in range(m - alpha):
                row = []
                for i, k in B.exponents:
                    if i < alpha or k < beta:
                        row.append(0)
                        continue
                    fx = 1
                    for t in range(alpha):
                        fx *= i - t
                    fy = 1
                    for t in range(beta):
                        fy *= k - t
                    row.append(fx * fy * x ** (i - alpha) * y ** (k - beta))
                rows.append(row)
    rank = 0
    if rows:
        rank = DomainMatrix([[ZZ(v) for v in row] for row in rows], (len(rows), len(B)), ZZ).rank()
    return len(B) - 1 - rank
