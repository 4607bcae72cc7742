"""Box scans comparing the oracle with the (-1)-speciality classifier."""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import asdict, dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

from .errors import InvalidInputError, ScrollsysError
from .lattice import SystemSpec, format_system, virtual_dim
from .oracle import DEFAULT_PRIME, PRIMES, robust_report
from .reduction import is_minus_one_special

FORMAT_VERSION = 1
COLUMNS = ("spec", "v", "e", "l_est", "verdict", "minus_one_special", "table1_row", "agree")


@dataclass(frozen=True)
class ScanConfig:
    n: tuple[int, int] = (0, 5)
    a: tuple[int, int] = (0, 12)
    b: tuple[int, int] = (0, 8)
    m: tuple[int, int] = (1, 3)
    r: tuple[int, int] = (1, 12)
    prime: int = DEFAULT_PRIME
    trials: int = 1
    seed: int = 0

    def __post_init__(self):
        for name in ("n", "a", "b", "m", "r"):
            lo, hi = getattr(self, name)
            if lo < 0 or hi < lo - 1:
                raise InvalidInputError(f"bad range for {name}: {lo}..{hi}")

    def primes(self) -> tuple[int, ...]:
        rest = [p for p in PRIMES if p != self.prime]
        return (self.prime, *rest)

    def fingerprint(self) -> str:
        blob = json.dumps(asdict(self), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:12]


def parse_range(text: str) -> tuple[int, int]:
    """'3' -> (3, 3); '0..5' -> (0, 5)."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return int(lo), int(hi)
        v = int(text)
        return v, v
    except ValueError:
        raise InvalidInputError(f"not a range: {text!r} (use N or LO..HI)") from None


def systems(cfg: ScanConfig) -> list[SystemSpec]:
    """The box in scan order: by matrix size (conditions x columns), ties broken lexicographically."""
    out = []
    for m in range(cfg.m[0], cfg.m[1] + 1):
        for n in range(cfg.n[0], cfg.n[1] + 1):
            for a in range(cfg.a[0], cfg.a[1] + 1):
                for b in range(cfg.b[0], cfg.b[1] + 1):
                    cols = h0_nef_ab(n, a, b)
                    for r in range(cfg.r[0], cfg.r[1] + 1):
                        rows = r * m * (m + 1) // 2
                        out.append(((rows * cols, m, n, a, b, r), SystemSpec.homogeneous(n, a, b, m, r)))
    out.sort(key=lambda t: t[0])
    return [s for _, s in out]


def h0_nef_ab(n: int, a: int, b: int) -> int:
    return (b + 1) * (2 * a + 2 + n * b) // 2


@dataclass
class ScanRow:
    spec: str
    v: int
    e: int
    l_est: Optional[int]
    verdict: str
    minus_one_special: bool
    table1_row: Optional[int]
    agree: str  # "yes" | "no" | "unknown"
    l_predicted: int = 0
    error: str = ""

    def csv_fields(self) -> list:
        return [self.spec, self.v, self.e, "" if self.l_est is None else self.l_est, self.verdict,
                int(self.minus_one_special), "" if self.table1_row is None else self.table1_row, self.agree]

    def json_obj(self) -> dict:
        return {c: getattr(self, c) for c in COLUMNS}


def evaluate(s: SystemSpec, primes: Sequence[int], trials: int, seed: int) -> ScanRow:
    ver = is_minus_one_special(s)
    v = virtual_dim(s)
    e = max(v, -1)
    row = ver.table_row.row if ver.table_row else None
    try:
        rep = robust_report(s, primes, trials, seed)
    except ScrollsysError as exc:  # recorded, not fatal
        return ScanRow(format_system(s), v, e, None, "error", ver.minus_one_special, row, "unknown",
                       ver.l_predicted, str(exc))
    if rep.verdict == "inconclusive":
        agree = "unknown"
    else:
        same = (rep.verdict == "special") == ver.minus_one_special and rep.l_est == ver.l_predicted
        agree = "yes" if same else "no"
    return ScanRow(format_system(s), v, e, rep.l_est, rep.verdict, ver.minus_one_special, row, agree,
                   ver.l_predicted)


def _work(args) -> tuple[SystemSpec, ScanRow]:
    s, primes, trials, seed = args
    return s, evaluate(s, primes, trials, seed)


def run(cfg: ScanConfig, offset: int = 0, limit: Optional[int] = None,
        workers: int = 1) -> Iterator[tuple[SystemSpec, ScanRow]]:
    """Rows in enumeration order starting at ``offset``; a worker pool keeps that order."""
    todo = systems(cfg)[offset:]
    if limit is not None:
        todo = todo[:limit]
    jobs = ((s, cfg.primes(), cfg.trials, cfg.seed) for s in todo)
    if workers <= 1:
        for job in jobs:
            yield _work(job)
        return
    import multiprocessing

    with multiprocessing.Pool(workers) as pool:
        yield from pool.imap(_work, jobs, chunksize=16)


def header_comment(cfg: ScanConfig) -> str:
    return f"# scrollsys-scan v{FORMAT_VERSION} config={cfg.fingerprint()} {json.dumps(asdict(cfg), sort_keys=True)}"


def resume_token(cfg: ScanConfig, offset: int) -> str:
    return f"{cfg.fingerprint()}:{offset}"


def parse_token(cfg: ScanConfig, token: str) -> int:
    fp, _, off = token.rpartition(":")
    if fp and fp != cfg.fingerprint():
        raise InvalidInputError(f"resume token belongs to a different configuration ({fp})")
    try:
        return int(off)
    except ValueError:
        raise InvalidInputError(f"bad resume token {token!r}") from None


@dataclass
class ScanSummary:
    total: int = 0
    special_oracle: int = 0
    special_classifier: int = 0
    disagreements: int = 0
    inconclusive: int = 0
    errors: int = 0
    m1_special: int = 0
    m1_total: int = 0
    few_points_total: int = 0
    few_points_disagreements: int = 0
    thin_total: int = 0
    thin_disagreements: int = 0
    disagreeing: list = field(default_factory=list)

    def add(self, row: ScanRow, s: SystemSpec):
        self.total += 1
        m = s.homogeneous_mult()
        bad = row.agree == "no"
        self.special_oracle += row.verdict == "special"
        self.special_classifier += row.minus_one_special
        self.disagreements += bad
        self.inconclusive += row.verdict == "inconclusive"
        self.errors += row.verdict == "error"
        if bad:
            self.disagreeing.append(row.spec)
        if m == 1:
            self.m1_total += 1
            self.m1_special += row.verdict == "special"
        if s.r <= s.n + 3:
            self.few_points_total += 1
            self.few_points_disagreements += bad
        if m is not None and s.b <= m + 1:
            self.thin_total += 1
            self.thin_disagreements += bad

    def lines(self) -> list[str]:
        return [
            f"systems: {self.total}  special (oracle): {self.special_oracle}  "
            f"(-1)-special: {self.special_classifier}",
            f"disagreements: {self.disagreements}  inconclusive: {self.inconclusive}  errors: {self.errors}",
            f"multiplicity one: {self.m1_special} special of {self.m1_total}",
            f"r <= n+3 slice: {self.few_points_disagreements} disagreements of {self.few_points_total}",
            f"b <= m+1 slice: {self.thin_disagreements} disagreements of {self.thin_total}",
        ]

    def exit_code(self) -> int:
        if self.disagreements:
            return 2
        if self.inconclusive or self.errors:
            return 3
        return 0


def write_scan(cfg: ScanConfig, rows: Iterable[tuple[SystemSpec, ScanRow]], csv_out: Optional[io.TextIOBase],
               json_out: Optional[io.TextIOBase], write_header: bool = True) -> ScanSummary:
    """Single writer: rows are serialised in the order received."""
    summary = ScanSummary()
    writer = csv.writer(csv_out, lineterminator="\n") if csv_out is not None else None
    if writer is not None and write_header:
        csv_out.write(header_comment(cfg) + "\n")
        writer.writerow(COLUMNS)
    for s, row in rows:
        summary.add(row, s)
        if writer is not None:
            writer.writerow(row.csv_fields())
        if json_out is not None:
            json_out.write(json.dumps(row.json_obj(), sort_keys=False) + "\n")
    return summary
