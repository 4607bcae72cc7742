"""(-1)-curve classes on blow-ups of F_n.

Homogeneous classes L_n(a, b, m^r) with m >= 2 come from the rational
parametrisation of the conic ``2b^2 - rmb - b + rm^2 - 1 = 0`` through its
integral point (r, b) = (0, 1).  Multiplicity one is handled by the closed
catalogue instead, since the conic degenerates there.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Optional

from .errors import InvalidInputError
from .lattice import BlowupClass, canonical_class, intersect


@dataclass(frozen=True)
class ConicParam:
    """Witness (p, q) for a point of the conic; ``b`` and ``r`` are the integral solution."""

    p: int
    q: int
    m: int
    b: int
    r: int

    @property
    def t(self) -> Fraction:
        return Fraction(self.p, self.q)


@dataclass(frozen=True)
class MinusOneCurveClass:
    cls: BlowupClass
    witness: Optional[ConicParam] = None
    family: str = ""

    def __str__(self):
        return str(self.cls)


def is_minus_one_class(c: BlowupClass) -> bool:
    """``E^2 = E.K = -1``; irreducibility is taken on trust for general points."""
    return intersect(c, c) == -1 and intersect(c, canonical_class(c.n, c.r)) == -1


def gamma_class(n: int, r: int = 0) -> BlowupClass:
    """The negative section Gamma_n = H - nF, which passes through none of the points."""
    if n < 1:
        raise InvalidInputError("F_0 has no negative section")
    return BlowupClass(n, -n, 1, (0,) * r)


def _divisors(k: int) -> list[int]:
    return [d for d in range(1, k + 1) if k % d == 0]


def _solve_a(n: int, m: int, b: int, r: int) -> Optional[int]:
    """Solve ``2a + nb + 2b - rm - 1 = 0``; None unless a is a non-negative integer."""
    twice = r * m + 1 - n * b - 2 * b
    if twice < 0 or twice % 2:
        return None
    return twice // 2


def homogeneous_equations_hold(n: int, a: int, b: int, m: int, r: int) -> bool:
    return (2 * a * b + n * b * b - r * m * m + 1 == 0
            and 2 * a + n * b + 2 * b - r * m - 1 == 0)


def enumerate_homogeneous(n: int, m: int, b_max: int) -> list[MinusOneCurveClass]:
    """All homogeneous (-1)-classes L_n(a, b, m^r) with m >= 2 and 0 <= b <= b_max.

    For fixed m the solution set is finite: integrality of b forces
    ``(mp - 2q) | q(2m + 1)``, which bounds p once q | m(m - 1) is fixed.
    """
    if m <= 1:
        raise InvalidInputError("multiplicity one is covered by mult_one_catalogue")
    if b_max < 1:
        raise InvalidInputError("b_max must be >= 1")
    found: dict[tuple[int, int, int], ConicParam] = {}
    for q in _divisors(m * (m - 1)):
        bound = q * (2 * m + 1)
        for p in range((2 * q - bound) // m - 1, (2 * q + bound) // m + 2):
            if gcd(p, q) != 1:
                continue
            den = m * p - 2 * q
            if den == 0:
                continue
            b_num = m * m * p + q
            r_num = p * (p * (m * m - m) + 3 * q)
            r_den = q * den
            if b_num % den or r_num % r_den:
                continue
            b, r = b_num // den, r_num // r_den
            if not 0 <= b <= b_max or r < 0:
                continue
            a = _solve_a(n, m, b, r)
            if a is None or not homogeneous_equations_hold(n, a, b, m, r):
                continue
            witness = ConicParam(p, q, m, b, r)
            key = (a, b, r)
            if key not in found or (q, p) < (found[key].q, found[key].p):
                found[key] = witness
    return [
        MinusOneCurveClass(BlowupClass(n, a, b, (m,) * r), found[(a, b, r)], f"homogeneous m={m}")
        for (a, b, r) in sorted(found)
    ]


def brute_force_homogeneous(n: int, m: int, b_max: int, r_max: Optional[int] = None) -> set[tuple[int, int, int]]:
    """Reference solution set by direct search over (b, r); independent of the parametrisation."""
    r_max = 10 * b_max if r_max is None else r_max
    out = set()
    for b in range(b_max + 1):
        for r in range(r_max + 1):
            if 2 * b * b - r * m * b - b + r * m * m - 1 != 0:
                continue
            a = _solve_a(n, m, b, r)
            if a is not None and homogeneous_equations_hold(n, a, b, m, r):
                out.add((a, b, r))
    return out


def mult_one_catalogue(n: int, e_max: int) -> list[MinusOneCurveClass]:
    """Every homogeneous multiplicity-one (-1)-class, up to e_max.

    On F_0 the families are also listed with F and H exchanged, since the
    surface is symmetric and the swapped classes are distinct classes.
    """
    if n < 0:
        raise InvalidInputError("n must be >= 0")
    out: dict[BlowupClass, MinusOneCurveClass] = {}

    def add(c: BlowupClass, family: str):
        out.setdefault(c, MinusOneCurveClass(c, None, family))

    add(BlowupClass(n, 1, 0, (1,)), "fiber")
    for e in range(e_max + 1):
        add(BlowupClass(n, e, 1, (1,) * (2 * e + n + 1)), "section")
    if n == 0:
        for e in range(e_max + 1):
            add(BlowupClass(0, 1, e, (1,) * (2 * e + 1)), "section (swapped)")
    if n == 1:
        add(BlowupClass(1, 0, 2, (1,) * 5), "conic")
    return list(out.values())


# -- candidate supply for the reduction procedure ---------------------------

@dataclass(frozen=True)
class CurveShape:
    """A (-1)-class up to permutation of the points: base plus descending multiplicities."""

    a: int
    b: int
    mults: tuple[int, ...]
    family: str


@lru_cache(maxsize=4096)
def curve_shapes(n: int, b_cap: int, m_cap: int, r: int, negative_points: bool = False) -> tuple[CurveShape, ...]:
    """Shapes whose placements on r points can meet a system with H-coefficient
    <= b_cap and largest multiplicity m_cap negatively.

    An irreducible E with L.E < 0 is a fixed component of L, so L - E stays
    effective; that gives b_E <= b_cap, and each point multiplicity of E is
    assumed not to exceed the largest multiplicity of L.
    """
    shapes: dict[tuple, CurveShape] = {}

    def add(a: int, b: int, ms: tuple[int, ...], family: str):
        if len(ms) <= r and b <= b_cap:
            shapes.setdefault((a, b, ms), CurveShape(a, b, ms, family))

    if negative_points and r:
        add(0, 0, (-1,), "exceptional")
    if r and m_cap >= 1:
        e_max = max(0, (r - n - 1) // 2)
        for c in mult_one_catalogue(n, max(e_max, b_cap)):
            add(c.cls.a, c.cls.b, c.cls.mults, c.family)
    for m in range(2, m_cap + 1):
        if b_cap < 1:
            break
        for c in enumerate_homogeneous(n, m, b_cap):
            if c.cls.r:
                add(c.cls.a, c.cls.b, c.cls.mults, c.family)
    return tuple(shapes[k] for k in sorted(shapes))


def best_placement(current: BlowupClass, shape: CurveShape, order: Optional[list[int]] = None) -> tuple[int, tuple[int, ...]]:
    """Placement of ``shape`` on the points of ``current`` minimising the product.

    Pairing the shape's multiplicities (padded with zeros, descending) with the
    points ordered by descending multiplicity maximises sum(m_i * mu_i), by the
    rearrangement inequality.  ``order`` breaks ties between equal points.
    """
    r = current.r
    idx = list(range(r)) if order is None else list(order)
    idx.sort(key=lambda i: -current.mults[i])
    mu = shape.mults + (0,) * (r - len(shape.mults))
    if any(x < 0 for x in shape.mults):
        mu = tuple(sorted(mu, reverse=True))
    placed = [0] * r
    for i, x in zip(idx, mu):
        placed[i] = x
    n = current.n
    prod = current.a * shape.b + shape.a * current.b + n * current.b * shape.b
    prod -= sum(m * x for m, x in zip(current.mults, placed))
    return prod, tuple(placed)


def candidate_curves(s: BlowupClass, b_cap: Optional[int] = None, m_cap: Optional[int] = None) -> list[MinusOneCurveClass]:
    """Every placement of the candidate shapes on the points of ``s`` (duplicate free).

    Placements are distinct per-point classes; the list grows like a binomial
    in r, so :func:`reduce` works with :func:`best_placement` instead.
    """
    b_cap = s.b if b_cap is None else b_cap
    m_cap = max(s.mults, default=0) if m_cap is None else m_cap
    neg = any(x < 0 for x in s.mults)
    out: list[MinusOneCurveClass] = []
    seen: set[tuple] = set()
    for shape in curve_shapes(s.n, b_cap, m_cap, s.r, neg):
        k = len(shape.mults)
        for pts in itertools.combinations(range(s.r), k):
            for ms in set(itertools.permutations(shape.mults)):
                placed = [0] * s.r
                for i, x in zip(pts, ms):
                    placed[i] = x
                key = (shape.a, shape.b, tuple(placed))
                if key in seen:
                    continue
                seen.add(key)
                out.append(MinusOneCurveClass(BlowupClass(s.n, shape.a, shape.b, tuple(placed)), None, shape.family))
    return out
