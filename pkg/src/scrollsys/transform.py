"""Elementary transformations F_n -> F_{n-1} acting on classes and systems.

Blowing up a point of multiplicity m and contracting the strict transform of
its fiber sends ``aF + bH - mE`` to ``(a - m + b)F' + bH' - (b - m)E'``.  On
the lattice this is an isometry carrying K to K, so virtual dimension and the
(-1)-conditions are preserved.  After the move the new point lies on a
special section, so transformed systems are no longer through general points.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .curves import is_minus_one_class
from .errors import InvalidInputError
from .lattice import BlowupClass, SystemSpec


@dataclass(frozen=True)
class TransformResult:
    spec: SystemSpec
    image: BlowupClass  # signed image, before clamping negative multiplicities
    moved_points: int
    excess: tuple[int, ...] = ()  # fiber components split off where b - m < 0
    special_position: bool = True

    @property
    def note(self) -> str:
        parts = [f"{self.moved_points} transformed point(s) lie on a distinguished section"]
        if any(self.excess):
            parts.append(f"excess fiber components {list(self.excess)} removed")
        return "; ".join(parts)


def transform_class(c: BlowupClass, indices: Sequence[int]) -> BlowupClass:
    """Signed class map for transformations centred at the given points, in order."""
    if len(set(indices)) != len(indices):
        raise InvalidInputError("centres must be distinct points")
    if len(indices) > c.n:
        raise InvalidInputError(f"only {c.n} transformation(s) available on F_{c.n}")
    n, a, b = c.n, c.a, c.b
    ms = list(c.mults)
    for i in indices:
        if not 0 <= i < len(ms):
            raise InvalidInputError(f"no point with index {i}")
        a += b - ms[i]
        ms[i] = b - ms[i]
        n -= 1
    return BlowupClass(n, a, b, tuple(ms))


def _result(s: BlowupClass, indices: Sequence[int]) -> TransformResult:
    image = transform_class(s, indices)
    excess = tuple(max(0, -image.mults[i]) for i in indices)
    clamped = tuple(max(0, x) for x in image.mults)
    return TransformResult(SystemSpec(image.n, image.a, image.b, clamped), image, len(indices), excess)


def elementary_transform_point(s: BlowupClass, index: int = 0) -> TransformResult:
    if s.n < 1:
        raise InvalidInputError("no elementary transformation starts from F_0 here")
    if s.b < 0:
        raise InvalidInputError("b must be >= 0")
    return _result(s, [index])


def elementary_transform(s: BlowupClass, k: int, indices: Optional[Sequence[int]] = None) -> TransformResult:
    """Transform k points of a homogeneous system: L_n(a,b,m^r) -> L_{n-k}(a+k(b-m), b, m^(r-k), (b-m)^k)."""
    if s.homogeneous_mult() is None:
        raise InvalidInputError("elementary_transform expects a homogeneous system")
    if not 1 <= k <= min(s.n, s.r):
        raise InvalidInputError(f"k must lie in [1, min(n, r)] = [1, {min(s.n, s.r)}], got {k}")
    idx = list(range(k)) if indices is None else list(indices)
    if len(idx) != k:
        raise InvalidInputError("need exactly k centres")
    return _result(s, idx)


def transform_preserves_minus_one(c: BlowupClass, indices: Sequence[int]) -> bool:
    """True when a (-1)-class is sent to a (-1)-class (an exceptional one in the fiber case)."""
    if not is_minus_one_class(c):
        raise InvalidInputError("input is not a (-1)-class")
    return is_minus_one_class(transform_class(c, indices))
