"""Picard lattice of a Hirzebruch surface F_n blown up at r general points.

A class is stored as ``aF + bH - sum(m_i E_i)`` with the products
``F.F = 0``, ``H.H = n``, ``F.H = 1`` and ``E_i.E_j = -delta_ij``.  Every
formula here is exact integer arithmetic; results that leave the signed
64-bit range raise instead of silently growing, so that the compiled oracle
kernels and any external consumer see the same values.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import groupby
from typing import Iterable, Optional

from .errors import InvalidInputError, NotEffectiveError, OutOfRangeError, ParseError

INT64_MAX = 2**63 - 1


def _checked(x: int) -> int:
    if not -INT64_MAX - 1 <= x <= INT64_MAX:
        raise OverflowError(f"intermediate value {x} leaves the signed 64-bit range")
    return x


@dataclass(frozen=True)
class DivisorClass:
    n: int
    a: int
    b: int

    def __post_init__(self):
        if self.n < 0:
            raise InvalidInputError(f"scroll index must be >= 0, got {self.n}")


@dataclass(frozen=True, eq=False)
class BlowupClass:
    """``aF + bH - sum m_i E_i`` on the blow-up of F_n.

    Multiplicities are kept per point, in order.  Equality and hashing use the
    canonical form (multiplicities sorted descending), because the points are
    general and therefore interchangeable.
    """

    n: int
    a: int
    b: int
    mults: tuple[int, ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise InvalidInputError(f"scroll index must be >= 0, got {self.n}")
        if not isinstance(self.mults, tuple):
            object.__setattr__(self, "mults", tuple(self.mults))

    @property
    def base(self) -> DivisorClass:
        return DivisorClass(self.n, self.a, self.b)

    @property
    def r(self) -> int:
        return len(self.mults)

    def key(self) -> tuple:
        return (self.n, self.a, self.b, tuple(sorted(self.mults, reverse=True)))

    def __eq__(self, other):
        if not isinstance(other, BlowupClass):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def canonical(self) -> "BlowupClass":
        return BlowupClass(self.n, self.a, self.b, tuple(sorted(self.mults, reverse=True)))

    def padded(self, r: int) -> tuple[int, ...]:
        if r < self.r:
            raise InvalidInputError("cannot pad to fewer points")
        return self.mults + (0,) * (r - self.r)

    def _binary(self, other: "BlowupClass", sign: int) -> "BlowupClass":
        if self.n != other.n:
            raise InvalidInputError(f"classes live on F_{self.n} and F_{other.n}")
        r = max(self.r, other.r)
        ms = tuple(x + sign * y for x, y in zip(self.padded(r), other.padded(r)))
        return BlowupClass(self.n, self.a + sign * other.a, self.b + sign * other.b, ms)

    def __add__(self, other: "BlowupClass") -> "BlowupClass":
        return self._binary(other, 1)

    def __sub__(self, other: "BlowupClass") -> "BlowupClass":
        return self._binary(other, -1)

    def __rmul__(self, t: int) -> "BlowupClass":
        return BlowupClass(self.n, t * self.a, t * self.b, tuple(t * m for m in self.mults))

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0 and not any(self.mults)

    def homogeneous_mult(self) -> Optional[int]:
        """The common multiplicity if every point carries the same one."""
        if not self.mults:
            return None
        first = self.mults[0]
        return first if all(m == first for m in self.mults) else None

    def as_system(self) -> "SystemSpec":
        return SystemSpec(self.n, self.a, self.b, self.mults)

    def __str__(self):
        return format_system(self)


class SystemSpec(BlowupClass):
    """A linear system L_n(a, b, m_1, ..., m_r) through general points."""

    def __post_init__(self):
        super().__post_init__()
        if any(m < 0 for m in self.mults):
            raise InvalidInputError(f"system multiplicities must be >= 0: {self.mults}")

    @classmethod
    def homogeneous(cls, n: int, a: int, b: int, m: int, r: int) -> "SystemSpec":
        return cls(n, a, b, (m,) * r)


@dataclass(frozen=True)
class DimensionTriple:
    v: int
    e: int
    l: Optional[int] = None

    def __post_init__(self):
        if self.v > self.e or (self.l is not None and self.e > self.l):
            raise InvalidInputError(f"violates v <= e <= l: {self}")


def intersect(c1: BlowupClass, c2: BlowupClass) -> int:
    """Intersection number; the shorter point list is padded with zeros."""
    if c1.n != c2.n:
        raise InvalidInputError(f"cannot intersect classes on F_{c1.n} and F_{c2.n}")
    total = c1.a * c2.b + c2.a * c1.b + c1.n * c1.b * c2.b
    total -= sum(x * y for x, y in zip(c1.mults, c2.mults))
    return _checked(total)


def canonical_class(n: int, r: int) -> BlowupClass:
    if n < 0 or r < 0:
        raise InvalidInputError("n and r must be non-negative")
    return BlowupClass(n, n - 2, -2, (-1,) * r)


def riemann_roch(c: BlowupClass) -> int:
    """``(L^2 - L.K)/2`` for an arbitrary class (always an integer)."""
    twice = intersect(c, c) - intersect(c, canonical_class(c.n, c.r))
    return twice // 2


def h0_nef(c: DivisorClass) -> int:
    """Number of sections of aF + bH, valid for a >= 0 and b >= -1."""
    if c.a < 0 or c.b < -1:
        raise OutOfRangeError(f"h0 formula holds only for a >= 0, b >= -1; got a={c.a}, b={c.b}")
    return _checked((c.b + 1) * (2 * c.a + 2 + c.n * c.b) // 2)


def _conditions(mults: Iterable[int]) -> int:
    return sum(m * (m + 1) // 2 for m in mults)


def virtual_dim(s: BlowupClass) -> int:
    if s.a < 0 or s.b < 0:
        raise OutOfRangeError(f"virtual dimension needs a, b >= 0; got {format_system(s)}")
    v = h0_nef(s.base) - 1 - _conditions(s.mults)
    rr = riemann_roch(s)
    if v != rr:  # pragma: no cover - algebraic identity
        raise AssertionError(f"dimension count {v} disagrees with Riemann-Roch {rr}")
    return v


def expected_dim(s: BlowupClass) -> int:
    return max(virtual_dim(s), -1)


def dimension_triple(s: BlowupClass, l: Optional[int] = None) -> DimensionTriple:
    v = virtual_dim(s)
    return DimensionTriple(v, max(v, -1), l)


def is_ample(c: DivisorClass) -> bool:
    return c.a > 0 and c.b > 0


def effective_decomposition(c: DivisorClass) -> tuple[int, DivisorClass]:
    """Split an effective aF + bH as ``q * Gamma_n + residual`` with residual base point free."""
    if c.b < 0:
        raise NotEffectiveError(f"b = {c.b} < 0 is never effective")
    if c.a >= 0:
        return 0, c
    if c.n == 0:
        raise NotEffectiveError("a < 0 is not effective on F_0")
    q = -(c.a // c.n)  # ceil(-a / n)
    residual = DivisorClass(c.n, q * c.n + c.a, c.b - q)
    if residual.b < 0:
        raise NotEffectiveError(f"aF + bH with a={c.a}, b={c.b} is not effective on F_{c.n}")
    return q, residual


# -- text form ---------------------------------------------------------------

def format_system(c: BlowupClass) -> str:
    """Canonical text ``L{n}({a},{b},{m}^{count},...)``, multiplicities descending."""
    parts = [str(c.a), str(c.b)]
    for m, grp in groupby(sorted(c.mults, reverse=True)):
        count = len(list(grp))
        parts.append(f"{m}^{count}" if count > 1 else str(m))
    return f"L{c.n}({','.join(parts)})"


_TOKEN = re.compile(r"\s*(-?\d+)(?:\s*\^\s*(\d+))?\s*")


def parse_system(text: str) -> BlowupClass:
    """Inverse of :func:`format_system`; also accepts ``m^1`` and whitespace."""
    s = text.strip()
    offset = len(text) - len(text.lstrip())
    head = re.match(r"L\s*(\d+)\s*\(", s)
    if not head:
        raise ParseError("expected 'L<n>('", text, offset)
    if not s.endswith(")"):
        raise ParseError("expected closing ')'", text, offset + len(s))
    n = int(head.group(1))
    body = s[head.end():-1]
    pos = offset + head.end()
    fields: list[tuple[int, Optional[int]]] = []
    for chunk in body.split(","):
        tok = _TOKEN.fullmatch(chunk)
        if not tok:
            raise ParseError("malformed entry", text, pos)
        if len(fields) < 2 and tok.group(2) is not None:
            raise ParseError("a and b take no exponent", text, pos)
        fields.append((int(tok.group(1)), None if tok.group(2) is None else int(tok.group(2))))
        pos += len(chunk) + 1
    if len(fields) < 2:
        raise ParseError("expected 'a,b' before the multiplicities", text, offset + head.end())
    mults: list[int] = []
    for value, count in fields[2:]:
        mults.extend([value] * (1 if count is None else count))
    return BlowupClass(n, fields[0][0], fields[1][0], tuple(sorted(mults, reverse=True)))


def parse_spec(text: str) -> SystemSpec:
    return parse_system(text).as_system()
