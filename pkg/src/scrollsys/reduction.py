"""Fixed-component reduction, (-1)-speciality and the m <= 3 classification."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import factorial
from typing import Optional

from .curves import CurveShape, best_placement, curve_shapes, gamma_class
from .errors import InvalidInputError, NonTerminationError, UnsupportedError
from .lattice import BlowupClass, SystemSpec, format_system, virtual_dim

MAX_STEPS = 10_000


@dataclass(frozen=True)
class Step:
    kind: str  # "minus-one" or "gamma"
    cls: BlowupClass
    coefficient: int
    family: str = ""

    def __str__(self):
        return f"{self.coefficient}*{format_system(self.cls)} [{self.kind}]"


@dataclass
class ReductionTrace:
    initial: BlowupClass
    steps: list[Step] = field(default_factory=list)
    final: Optional[BlowupClass] = None
    # set when a subtraction produced a class with b < 0 or a + nb < 0; the
    # original system is then empty
    non_effective: bool = False
    b_cap_rule: str = "b_E <= b, mu_E <= max mult"

    def total_subtracted(self) -> BlowupClass:
        total = BlowupClass(self.initial.n, 0, 0, (0,) * self.initial.r)
        for st in self.steps:
            total = total + st.coefficient * st.cls
        return total

    def conserves(self) -> bool:
        lhs = self.final + self.total_subtracted()
        return (lhs.n, lhs.a, lhs.b, lhs.mults) == (
            self.initial.n, self.initial.a, self.initial.b, self.initial.padded(lhs.r))


def _hopeless(c: BlowupClass) -> bool:
    # F and the pull-back of H are nef, so an effective class meets both non-negatively
    return c.b < 0 or c.a + c.n * c.b < 0


def _next_curve(current: BlowupClass, rng: Optional[random.Random]):
    neg = any(x < 0 for x in current.mults)
    m_cap = max(current.mults, default=0)
    shapes = list(curve_shapes(current.n, max(current.b, 0), m_cap, current.r, neg))
    order = None
    if rng is not None:
        rng.shuffle(shapes)
        order = list(range(current.r))
        rng.shuffle(order)
    best = None
    for shape in shapes:
        prod, placed = best_placement(current, shape, order)
        if prod >= 0:
            continue
        if rng is not None:
            return prod, shape, placed
        if best is None or prod < best[0]:
            best = (prod, shape, placed)
    return best


def reduce(s: BlowupClass, *, rng: Optional[random.Random] = None, max_steps: int = MAX_STEPS) -> ReductionTrace:
    """Strip fixed (-1)-curves and copies of Gamma_n until neither meets the class negatively.

    A (-1)-curve E with ``d = L.E < 0`` lies |d| times in the base locus, so
    |d| copies are removed.  When several curves qualify the most negative
    product wins, ties going to the first shape in canonical order; passing an
    ``rng`` picks a random qualifying curve instead, for order-independence checks.
    """
    trace = ReductionTrace(initial=s)
    current = BlowupClass(s.n, s.a, s.b, s.mults)
    for _ in range(max_steps):
        if _hopeless(current):
            trace.non_effective = True
            break
        found = _next_curve(current, rng)
        if found is not None:
            prod, shape, placed = found
            e = BlowupClass(current.n, shape.a, shape.b, placed)
            current = current - (-prod) * e
            trace.steps.append(Step("minus-one", e, -prod, shape.family))
            continue
        if current.n >= 1 and current.a < 0:
            g = gamma_class(current.n, current.r)
            current = current - g
            trace.steps.append(Step("gamma", g, 1, "negative section"))
            continue
        break
    else:
        trace.final = current
        raise NonTerminationError(f"reduction of {format_system(s)} exceeded {max_steps} steps", trace)
    trace.final = current
    return trace


@dataclass(frozen=True)
class Table1Match:
    row: int
    family: str
    v: int
    l: int
    printed_v: int
    note: str = ""


@dataclass
class SpecialityVerdict:
    minus_one_special: bool
    v_initial: int
    v_final: Optional[int]
    l_predicted: int
    trace: ReductionTrace
    table_row: Optional[Table1Match] = None

    @property
    def e_initial(self) -> int:
        return max(self.v_initial, -1)


def _residual_dim(trace: ReductionTrace) -> tuple[Optional[int], int]:
    if trace.non_effective:
        return None, -1
    v = virtual_dim(trace.final)
    return v, max(v, -1)


def is_minus_one_special(s: BlowupClass, *, rng: Optional[random.Random] = None) -> SpecialityVerdict:
    """Compare the original system with its reduced residual M.

    The fixed part does not change the dimension, so l(L) = l(M); M meets no
    (-1)-curve and not Gamma_n negatively and is predicted non-special, giving
    l(L) = max(v(M), -1).  L is (-1)-special when v(M) > v(L) and M is not
    empty.
    """
    if s.a < 0 or s.b < 0:
        raise InvalidInputError(f"{format_system(s)} is not a system with a, b >= 0")
    trace = reduce(s, rng=rng)
    v0 = virtual_dim(s)
    v_final, l_pred = _residual_dim(trace)
    special = v_final is not None and v_final >= 0 and v_final > v0
    row = None
    m = s.homogeneous_mult()
    if m is not None and m <= 3:
        row = classify_table1(s)
    return SpecialityVerdict(special, v0, v_final, l_pred, trace, row)


def predicted_dim(s: BlowupClass) -> int:
    """Effective dimension assuming every special system is (-1)-special."""
    if s.b < 0 or s.a + s.n * s.b < 0 or (s.n == 0 and s.a < 0):
        return -1
    if s.a < 0:
        # Gamma_n is fixed; the reduction's Gamma step handles it
        trace = reduce(s)
        return _residual_dim(trace)[1]
    return is_minus_one_special(s).l_predicted


# -- the family table ---------------------------------------------------------

TABLE1_FAMILIES = {
    1: "L1(0,4,2^5)",
    2: "L1(0,6,3^5)",
    3: "L5(1,4,3^10)",
    4: "L6(0,4,3^11)",
    5: "Ln(2e,2,2^(2e+n+1))",
    6: "Ln(e,0,2^r)",
    7: "Ln(4e+n+1,2,3^(2e+n+1))",
    8: "Ln(3e+1,3,3^(2e+n+1))",
    9: "Ln(3e,3,3^(2e+n+1))",
    10: "Ln(e,1,3^r)",
    11: "Ln(e,0,3^r)",
}

L6_NOTE = "tabulated v = -1; the dimension count gives v = -2 (e = -1)"


def _match_rows(n: int, a: int, b: int, m: int, r: int) -> Optional[tuple[int, int, int]]:
    """(row, tabulated v, tabulated l) for the first matching row."""
    if (n, a, b, m, r) == (1, 0, 4, 2, 5):
        return 1, -1, 0
    if (n, a, b, m, r) == (1, 0, 6, 3, 5):
        return 2, -3, 0
    if (n, a, b, m, r) == (5, 1, 4, 3, 10):
        return 3, -1, 0
    if (n, a, b, m, r) == (6, 0, 4, 3, 11):
        return 4, -1, 0
    if m == 2 and b == 2 and a % 2 == 0 and r == a + n + 1:
        return 5, -1, 0
    if m == 2 and b == 0 and r >= 1 and a >= 2 * r:
        return 6, a - 3 * r, a - 2 * r
    if m == 3 and b == 2 and (a - n - 1) >= 0 and (a - n - 1) % 4 == 0:
        e = (a - n - 1) // 4
        if r == 2 * e + n + 1:
            return 7, -1, 0
    if m == 3 and b == 3 and a % 3 == 1:
        e = (a - 1) // 3
        if r == 2 * e + n + 1:
            return 8, 1, 2
    if m == 3 and b == 3 and a % 3 == 0 and r == 2 * (a // 3) + n + 1:
        return 9, -3, 0
    if m == 3 and b == 1 and r >= 1 and a >= 2 * r and 2 * a + n - 5 * r + 1 >= 0:
        return 10, 2 * a + n - 6 * r + 1, 2 * a + n - 5 * r + 1
    if m == 3 and b == 0 and r >= 1 and a >= 3 * r:
        return 11, a - 6 * r, a - 3 * r
    return None


def classify_table1(s: BlowupClass) -> Optional[Table1Match]:
    """Match a homogeneous m <= 3 system against the eleven (-1)-special families.

    On F_0 both orientations (a, b) and (b, a) are tried.
    """
    if s.r == 0:
        return None
    m = s.homogeneous_mult()
    if m is None:
        raise InvalidInputError(f"{format_system(s)} is not homogeneous")
    if m > 3:
        raise UnsupportedError("the classification covers multiplicity <= 3 only")
    candidates = [(s.a, s.b)]
    if s.n == 0 and s.a != s.b:
        candidates.append((s.b, s.a))
    for a, b in candidates:
        hit = _match_rows(s.n, a, b, m, s.r)
        if hit is None:
            continue
        row, v_tab, l_tab = hit
        v = virtual_dim(s)
        note = L6_NOTE if row == 4 else ""
        return Table1Match(row, TABLE1_FAMILIES[row], v, l_tab, v_tab, note)
    return None


# -- orbit counting -----------------------------------------------------------

def _check_composition(r: int, k: list[int]):
    if any(x <= 0 for x in k) or sum(k) != r:
        raise InvalidInputError(f"{k} is not a composition of {r} into positive parts")


def orbit_count(r: int, k: list[int]) -> int:
    """Number of distinct point-permutations of a curve with multiplicity classes of sizes k."""
    _check_composition(r, k)
    out = factorial(r)
    for x in k:
        out //= factorial(x)
    return out


def orbit_bound_holds(r: int, k: list[int]) -> bool:
    _check_composition(r, k)
    prod = 1
    for x in k:
        prod *= factorial(x)
    return prod <= factorial(r - len(k) + 1)


@dataclass(frozen=True)
class Table1Instance:
    row: int
    system: SystemSpec
    v: int  # tabulated
    l: int  # tabulated


def table1_instances(e_max: int = 3, n_max: int = 6, r_max: int = 12) -> list[Table1Instance]:
    """Every row instantiated for e <= e_max, n <= n_max and, for the rows with a free
    number of points, 1 <= r <= r_max subject to the row's effectivity constraint."""
    H = SystemSpec.homogeneous
    out = [
        Table1Instance(1, H(1, 0, 4, 2, 5), -1, 0),
        Table1Instance(2, H(1, 0, 6, 3, 5), -3, 0),
        Table1Instance(3, H(5, 1, 4, 3, 10), -1, 0),
        Table1Instance(4, H(6, 0, 4, 3, 11), -1, 0),
    ]
    for n in range(n_max + 1):
        for e in range(e_max + 1):
            out.append(Table1Instance(5, H(n, 2 * e, 2, 2, 2 * e + n + 1), -1, 0))
            out.append(Table1Instance(7, H(n, 4 * e + n + 1, 2, 3, 2 * e + n + 1), -1, 0))
            out.append(Table1Instance(8, H(n, 3 * e + 1, 3, 3, 2 * e + n + 1), 1, 2))
            out.append(Table1Instance(9, H(n, 3 * e, 3, 3, 2 * e + n + 1), -3, 0))
            for r in range(1, r_max + 1):
                if e >= 2 * r:
                    out.append(Table1Instance(6, H(n, e, 0, 2, r), e - 3 * r, e - 2 * r))
                if e >= 2 * r and 2 * e + n - 5 * r + 1 >= 0:
                    out.append(Table1Instance(10, H(n, e, 1, 3, r), 2 * e + n - 6 * r + 1, 2 * e + n - 5 * r + 1))
                if e >= 3 * r:
                    out.append(Table1Instance(11, H(n, e, 0, 3, r), e - 6 * r, e - 3 * r))
    return out
