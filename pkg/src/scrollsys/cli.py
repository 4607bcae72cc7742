"""Command-line interface.

Exit codes: 0 all checks pass, 1 usage or I/O error, 2 mathematical
disagreement, 3 inconclusive results present.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import scan as scanmod
from .curves import candidate_curves, enumerate_homogeneous, mult_one_catalogue
from .degeneration import Prover, recombine_dim, split, verify_certificate
from .errors import OpenCaseError, ParseError, ScrollsysError
from .lattice import expected_dim, format_system, intersect, parse_spec, riemann_roch, virtual_dim
from .oracle import DEFAULT_PRIME, PRIMES, effective_dim_mc, robust_report
from .reduction import is_minus_one_special, table1_instances
from .transform import elementary_transform

OK, USAGE, DISAGREE, INCONCLUSIVE = 0, 1, 2, 3

NOTES = [
    ("transformation exponent",
     "k transformations send L_n(a,b,m^r) to L_{n-k}(a+k(b-m), b, m^(r-k), (b-m)^k); "
     "the untouched points keep exponent r-k, not n-k"),
    ("speciality sign",
     "(-1)-special means the residual M after removing fixed (-1)-curves and Gamma_n "
     "is non-empty with v(M) > v(L)"),
    ("L6(0,4,3^11)",
     "the family table lists v = -1; the dimension formula gives v = -2 (e = -1, l = 0)"),
    ("degeneration points",
     "the s points sent to the exceptional component are carried by L_exc = L_n(a+n(b-k), k, m^s)"),
    ("conic witness",
     "for a witness (p, q) of a homogeneous (-1)-curve the slope of the line through (0, 1) is q/p"),
]


def _emit(args, payload: dict, text: str):
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=False, default=str))
    else:
        print(text)


def _primes(args) -> tuple[int, ...]:
    return (args.prime, *[p for p in PRIMES if p != args.prime])


# -- commands -------------------------------------------------------------------

def cmd_dim(args) -> int:
    s = parse_spec(args.spec)
    ver = is_minus_one_special(s)
    v, e = virtual_dim(s), expected_dim(s)
    row = ver.table_row
    payload = {"spec": format_system(s), "v": v, "e": e, "minus_one_special": ver.minus_one_special,
               "l_predicted": ver.l_predicted, "table1_row": row.row if row else None}
    lines = [f"{format_system(s)}: v={v} e={e}",
             f"(-1)-special: {'yes' if ver.minus_one_special else 'no'}  predicted l={ver.l_predicted}"]
    if row:
        lines.append(f"family table row {row.row}: {row.family}  listed v={row.printed_v} l={row.l}")
        if row.note:
            lines.append(f"note: {row.note}")
            payload["note"] = row.note
    code = OK
    if args.oracle:
        rep = robust_report(s, _primes(args), args.trials, args.seed)
        payload["l_est"], payload["verdict"] = rep.l_est, rep.verdict
        lines.append(f"oracle: l_est={rep.l_est} verdict={rep.verdict}")
        if rep.verdict == "inconclusive":
            code = INCONCLUSIVE
        elif (rep.verdict == "special") != ver.minus_one_special or rep.l_est != ver.l_predicted:
            lines.append("DISAGREEMENT between oracle and classifier")
            code = DISAGREE
    _emit(args, payload, "\n".join(lines))
    return code


def cmd_classify(args) -> int:
    s = parse_spec(args.spec)
    ver = is_minus_one_special(s)
    tr = ver.trace
    payload = {
        "spec": format_system(s), "minus_one_special": ver.minus_one_special,
        "v_initial": ver.v_initial, "v_final": ver.v_final, "l_predicted": ver.l_predicted,
        "steps": [{"kind": st.kind, "curve": format_system(st.cls), "coefficient": st.coefficient,
                   "family": st.family} for st in tr.steps],
        "final": format_system(tr.final), "non_effective": tr.non_effective,
        "table1_row": ver.table_row.row if ver.table_row else None,
    }
    lines = [f"{format_system(s)}  v={ver.v_initial}"]
    lines += [f"  - {st}" for st in tr.steps]
    lines.append(f"residual {format_system(tr.final)}" + ("  (not effective)" if tr.non_effective else
                                                          f"  v={ver.v_final}"))
    lines.append(f"(-1)-special: {'yes' if ver.minus_one_special else 'no'}  predicted l={ver.l_predicted}")
    if ver.table_row:
        lines.append(f"family table row {ver.table_row.row}")
    _emit(args, payload, "\n".join(lines))
    return OK


def cmd_curves(args) -> int:
    if args.spec:
        s = parse_spec(args.spec)
        found = candidate_curves(s)
        items = [{"curve": format_system(c.cls), "family": c.family, "product": intersect(s, c.cls)}
                 for c in found]
        items = [it for it in items if it["product"] < 0] if args.negative else items
        text = "\n".join(f"{it['curve']}  [{it['family']}]  L.E={it['product']}" for it in items)
    elif args.m == 1:
        items = [{"curve": format_system(c.cls), "family": c.family} for c in mult_one_catalogue(args.n, args.b_max)]
        text = "\n".join(f"{it['curve']}  [{it['family']}]" for it in items)
    else:
        found = enumerate_homogeneous(args.n, args.m, args.b_max)
        items = [{"curve": format_system(c.cls), "family": c.family,
                  "witness": str(c.witness) if c.witness is not None else None} for c in found]
        text = "\n".join(f"{it['curve']}  [{it['family']}]" for it in items)
    _emit(args, {"curves": items}, text or "(none)")
    return OK


def cmd_transform(args) -> int:
    s = parse_spec(args.spec)
    idx = [int(x) for x in args.indices.split(",")] if args.indices else None
    res = elementary_transform(s, args.k, idx)
    payload = {"spec": format_system(s), "image": format_system(res.spec), "signed_image": format_system(res.image),
               "v_before": virtual_dim(s), "v_after": virtual_dim(res.image), "note": res.note}
    _emit(args, payload, f"{format_system(s)} -> {format_system(res.spec)}  v={virtual_dim(s)}\nnote: {res.note}")
    return OK


def cmd_split(args) -> int:
    s = parse_spec(args.spec)
    sp = split(s, args.k, args.s)
    payload = {name: format_system(piece) for name, piece in sp.pieces().items()}
    payload.update(spec=format_system(s), k=args.k, s=args.s, glue_degree=sp.glue_degree)
    lines = [f"{format_system(s)}  k={args.k} s={args.s}  a+n(b-k)={sp.glue_degree}"]
    for name, piece in sp.pieces().items():
        lines.append(f"  {name:11s} {format_system(piece)}  v={riemann_roch(piece)}")
    if args.oracle:
        dims = {}
        for name, piece in sp.pieces().items():
            dims[name] = -1 if piece.b < 0 else robust_report(piece, _primes(args), args.trials, args.seed).l_est
        l0, rule = recombine_dim(sp, dims["L_tilde"], dims["L_exc"], dims["Lhat_tilde"], dims["Lhat_exc"])
        payload.update(dims=dims, l0=l0, rule=rule)
        lines.append(f"  l0={l0} via {rule} rule")
    _emit(args, payload, "\n".join(lines))
    return OK


def cmd_prove(args) -> int:
    s = parse_spec(args.spec)
    prover = Prover(oracle_leaves=not args.no_oracle_leaves)
    try:
        cert = prover.prove(s)
    except OpenCaseError as exc:
        _emit(args, {"spec": format_system(s), "open_case": format_system(exc.stuck)},
              f"open case: {exc}")
        return INCONCLUSIVE
    ok = verify_certificate(cert)
    _emit(args, {"certificate": cert.to_dict(), "verified": ok}, cert.render())
    return OK if ok else DISAGREE


def cmd_oracle(args) -> int:
    s = parse_spec(args.spec)
    rep = effective_dim_mc(s, args.prime, args.trials, args.seed)
    d = rep.to_dict()
    text = "\n".join(f"{k}: {v}" for k, v in d.items() if k != "extra")
    _emit(args, d, text)
    return INCONCLUSIVE if rep.verdict == "inconclusive" else OK


def cmd_verify_table1(args) -> int:
    from .oracle import basis

    results, code = [], OK
    primes = _primes(args)
    for inst in table1_instances(args.e_max, args.n_max, args.r_max):
        s = inst.system
        if len(basis(s.n, s.a, s.b)) > args.max_columns:
            continue
        ver = is_minus_one_special(s)
        v = virtual_dim(s)
        l_ests, status = set(), "pass"
        # two primes at least, each with the requested number of seeds
        for p in primes[:2]:
            for sd in range(args.seed, args.seed + args.trials):
                l_ests.add(effective_dim_mc(s, p, 1, sd).l_est)
        if len(l_ests) > 1:
            l_ests = {robust_report(s, primes, args.trials, args.seed).l_est}
            if len(l_ests) > 1:
                status = "inconclusive"
        l_est = min(l_ests)
        note = ""
        if v != inst.v:
            if inst.row == 4 and v == -2:
                note = ver.table_row.note if ver.table_row else "v discrepancy"
            else:
                status = "fail"
        if status == "pass" and (l_est != inst.l or ver.l_predicted != inst.l or not ver.minus_one_special):
            status = "fail"
        if status == "fail":
            code = DISAGREE
        elif status == "inconclusive" and code == OK:
            code = INCONCLUSIVE
        results.append({"row": inst.row, "spec": format_system(s), "v": v, "v_table": inst.v,
                        "l_table": inst.l, "l_est": l_est, "l_classifier": ver.l_predicted,
                        "status": status, "note": note})
    lines = [f"row {r['row']:2d}  {r['spec']:24s} v={r['v']:4d} (table {r['v_table']:4d})  "
             f"l={r['l_est']:3d} (table {r['l_table']:3d})  {r['status']}" + (f"  [{r['note']}]" if r['note'] else "")
             for r in results]
    lines.append(f"{sum(r['status'] == 'pass' for r in results)}/{len(results)} instances pass")
    _emit(args, {"results": results, "exit": code}, "\n".join(lines))
    return code


def cmd_scan(args) -> int:
    cfg = scanmod.ScanConfig(
        n=scanmod.parse_range(args.n), a=scanmod.parse_range(args.a), b=scanmod.parse_range(args.b),
        m=scanmod.parse_range(args.m), r=scanmod.parse_range(args.r),
        prime=args.prime, trials=args.trials, seed=args.seed,
    )
    offset = scanmod.parse_token(cfg, args.resume) if args.resume else 0
    mode = "a" if offset else "w"
    csv_out = open(args.out, mode, newline="") if args.out else None
    json_out = open(args.json_out, mode) if args.json_out else None
    try:
        rows = scanmod.run(cfg, offset, args.limit, args.workers)
        summary = scanmod.write_scan(cfg, rows, csv_out if csv_out else (None if args.json else sys.stdout),
                                     json_out, write_header=not offset)
    finally:
        for f in (csv_out, json_out):
            if f is not None:
                f.close()
    end = offset + summary.total
    token = scanmod.resume_token(cfg, end)
    payload = {"summary": {k: v for k, v in vars(summary).items()}, "next_resume_token": token}
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        out = sys.stderr if not args.out else sys.stdout
        for line in summary.lines():
            print(line, file=out)
        print(f"resume token: {token}", file=out)
    return summary.exit_code()


def cmd_notes(args) -> int:
    _emit(args, {"notes": [{"topic": t, "note": n} for t, n in NOTES]},
          "\n".join(f"{t}: {n}" for t, n in NOTES))
    return OK


# -- parser ---------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--prime", type=int, default=DEFAULT_PRIME, help="field modulus for the oracle")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--config", help="key=value file mirroring the flags (flags win)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="scrollsys", description="Linear systems on Hirzebruch surfaces.")
    parser.add_argument("--notes", action="store_true", help="print documented discrepancies and exit")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("dim", parents=[common], help="virtual/expected dimension and classification")
    p.add_argument("spec")
    p.add_argument("--oracle", action="store_true", help="also compute l_est")
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("classify", parents=[common], help="fixed-component reduction trace")
    p.add_argument("spec")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("curves", parents=[common], help="(-1)-curves")
    p.add_argument("spec", nargs="?", help="list candidate curves for this system")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--b-max", type=int, default=10)
    p.add_argument("--negative", action="store_true", help="only curves meeting the system negatively")
    p.set_defaults(func=cmd_curves)

    p = sub.add_parser("transform", parents=[common], help="elementary transformations")
    p.add_argument("spec")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--indices", help="comma-separated point indices")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("split", parents=[common], help="(k,s)-degeneration pieces")
    p.add_argument("spec")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--oracle", action="store_true", help="recombine with oracle dimensions")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("prove", parents=[common], help="dimension certificate by degeneration")
    p.add_argument("spec")
    p.add_argument("--no-oracle-leaves", action="store_true")
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("oracle", parents=[common], help="interpolation-matrix rank report")
    p.add_argument("spec")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify-table1", parents=[common], help="check every instance of the (-1)-special family table")
    p.add_argument("--e-max", type=int, default=3)
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--r-max", type=int, default=12)
    p.add_argument("--max-columns", type=int, default=3000)
    p.set_defaults(func=cmd_verify_table1)

    p = sub.add_parser("scan", parents=[common], help="oracle vs classifier over a box")
    p.add_argument("--n", default="0..5")
    p.add_argument("--a", default="0..12")
    p.add_argument("--b", default="0..8")
    p.add_argument("--m", default="1..3")
    p.add_argument("--r", default="1..12")
    p.add_argument("--out", help="CSV path (default stdout)")
    p.add_argument("--json-out", help="JSON-lines mirror of the CSV rows")
    p.add_argument("--resume", help="token printed by an earlier run")
    p.add_argument("--limit", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_scan, trials=1)
    return parser


def _read_config(path: str) -> dict[str, str]:
    out = {}
    with open(path) as fh:
        for i, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ScrollsysError(f"{path}:{i}: expected key=value")
            k, v = line.split("=", 1)
            out[k.strip().lstrip("-").replace("-", "_")] = v.strip()
    return out


def _apply_config(parser: argparse.ArgumentParser, argv: Sequence[str], config: dict[str, str]):
    """Install config values as defaults on the chosen subcommand, so explicit flags still win."""
    sub = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    cmd = next((x for x in argv if x in sub.choices), None)
    if cmd is None:
        return
    sp = sub.choices[cmd]
    actions = {a.dest: a for a in sp._actions}
    defaults = {}
    for k, raw in config.items():
        act = actions.get(k)
        if act is None or k in ("config", "help", "spec"):
            raise ScrollsysError(f"unknown config key {k!r} for {cmd}")
        if isinstance(act, argparse._StoreTrueAction):
            defaults[k] = raw.lower() in ("1", "true", "yes", "on")
        else:
            defaults[k] = act.type(raw) if act.type else raw
    sp.set_defaults(**defaults)


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        pre = argparse.ArgumentParser(add_help=False)
        pre.add_argument("--config")
        known, _ = pre.parse_known_args(argv)
        if known.config:
            _apply_config(parser, argv, _read_config(known.config))
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:
            return OK if exc.code == 0 else USAGE
        if args.notes:
            args.json = getattr(args, "json", False)
            return cmd_notes(args)
        if not getattr(args, "func", None):
            parser.print_help()
            return USAGE
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        print(f"  {exc.text}\n  {' ' * exc.position}^", file=sys.stderr)
        return USAGE
    except (ScrollsysError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
