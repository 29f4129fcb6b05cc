"""Command-line front end emitting curves, bound reports, and certificates.

Subcommands:

  spectrum   eigenvalue table of a walk (hypercube, or cyclic with --m)
  tv         per-step exact TV and l^2 curve for the chosen walk
  bounds     every closed-form step bound plus the published-table comparison
  couple     Monte Carlo coupling tails next to the exact absorbing-chain tail
  verify     lemma certificates: probineq | general | eig34 | marginal | symmetry

Exit codes: 0 success, 1 invalid arguments or domain error, 2 a verifier
found a counterexample (the certificate file is still written).

Output is written atomically to --output, or to
$CUBEMIX_OUTPUT_DIR/<subcommand>.<format> when --output is omitted.  CSV
carries a header line; floats are printed with 17 significant digits and
rationals as "numerator/denominator", so identical invocations produce
byte-identical files.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import os
import sys
import tempfile
from fractions import Fraction

from . import bounds as bounds_mod
from .coupling import (
    coupling_tail_curve,
    marginal_check,
    simulate_coupling,
    verify_half_flip_pick_bounds,
    verify_pick_fraction_bounds,
)
from .exactdist import (
    WeightDistribution,
    evolve,
    flip_weight_kernel,
    l2_to_uniform,
    separation_tail,
    tv_to_uniform,
    zmn_exact_tv,
)
from .krawtchouk import verify_symmetry_sweep
from .numerics import EXACT_BACKEND_MAX_N
from .spectrum import (
    CyclicWalkSpec,
    WalkSpec,
    cube_spectrum,
    verify_eigenvalue_three_quarters,
    zmn_l2_upper_bound,
    zmn_spectrum,
)

OUTPUT_DIR_ENV = "CUBEMIX_OUTPUT_DIR"


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad flags; this tool reserves 2 for
    verification counterexamples, so remap argument errors to status 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _sanitize(obj):
    """Recursively convert to JSON-encodable data with stable key order."""
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: _sanitize(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".cubemix-tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _output_path(args, default_stem: str) -> str:
    if args.output:
        return args.output
    base = os.environ.get(OUTPUT_DIR_ENV, ".")
    return os.path.join(base, f"{default_stem}.{args.format}")


def _csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _json_text(payload) -> str:
    return json.dumps(_sanitize(payload), indent=2) + "\n"


def _kv_csv(payload: dict) -> str:
    """Flatten a certificate to field,value rows (values JSON-encoded)."""
    rows = [[k, json.dumps(_sanitize(v))] for k, v in payload.items()]
    return _csv_text(["field", "value"], rows)


def _emit(args, default_stem: str, header, rows, payload) -> str:
    path = _output_path(args, default_stem)
    if args.format == "csv":
        text = _csv_text(header, rows) if header is not None else _kv_csv(payload)
    else:
        text = _json_text(payload)
    _write_atomic(path, text)
    print(f"wrote {path}")
    return path


def _use_exact(backend: str, n: int) -> bool:
    if backend == "exact":
        return True
    if backend == "float":
        return False
    return n <= EXACT_BACKEND_MAX_N


# ---------------------------------------------------------------------------
# subcommands


def _cmd_spectrum(args) -> int:
    exact = _use_exact(args.backend, args.n)
    if args.m is not None:
        table = zmn_spectrum(CyclicWalkSpec(args.n, args.m, args.k))
        walk = {"kind": "cyclic", "n": args.n, "m": args.m, "k": args.k}
    else:
        table = cube_spectrum(WalkSpec(args.n, args.k, args.p))
        walk = {"kind": "cube", "n": args.n, "k": args.k, "p": _fmt(args.p)}
    rows = []
    for r in table.rows:
        val = r.value if exact else float(r.value)
        rows.append([r.level, val, r.multiplicity])
    payload = {
        "walk": walk,
        "backend": "exact" if exact else "float",
        "non_ergodic": table.non_ergodic,
        "max_nontrivial_magnitude": table.max_nontrivial_magnitude(),
        "rows": [
            {"level": lv, "eigenvalue": _fmt(v) if exact else v, "multiplicity": mu}
            for lv, v, mu in rows
        ],
    }
    _emit(args, "spectrum", ["level", "eigenvalue", "multiplicity"], rows, payload)
    return 0


def _cmd_tv(args) -> int:
    if args.m is not None:
        return _cmd_tv_cyclic(args)
    exact = _use_exact(args.backend, args.n)
    spec = WalkSpec(args.n, args.k, args.p)
    kernel = flip_weight_kernel(spec, exact=exact)
    dist = WeightDistribution.delta(args.n)
    if not exact:
        dist = dist.to_float()
    rows = []
    jrows = []
    for l in range(args.steps + 1):
        if l:
            dist = evolve(dist, kernel, 1)
        tv = tv_to_uniform(dist)
        l2 = l2_to_uniform(dist)
        if exact:
            rows.append([l, float(tv), float(l2), tv, l2])
            jrows.append(
                {
                    "l": l,
                    "tv": float(tv),
                    "l2_sq": float(l2),
                    "tv_exact": _fmt(tv),
                    "l2_sq_exact": _fmt(l2),
                }
            )
        else:
            rows.append([l, tv, l2])
            jrows.append({"l": l, "tv": tv, "l2_sq": l2})
    header = ["l", "tv", "l2_sq"] + (["tv_exact", "l2_sq_exact"] if exact else [])
    payload = {
        "walk": {"kind": "cube", "n": args.n, "k": args.k, "p": _fmt(args.p)},
        "backend": "exact" if exact else "float",
        "rows": jrows,
    }
    _emit(args, "tv", header, rows, payload)
    return 0


def _cmd_tv_cyclic(args) -> int:
    if args.backend == "float":
        raise ValueError("the cyclic TV curve is exact-only; use --backend exact or auto")
    cspec = CyclicWalkSpec(args.n, args.m, args.k)
    rows = []
    jrows = []
    for l in range(args.steps + 1):
        tv = zmn_exact_tv(cspec, l)
        sep = separation_tail(cspec, l)
        l2b = zmn_l2_upper_bound(cspec, l, exact=True)
        rows.append([l, float(tv), float(sep), float(l2b), tv, sep])
        jrows.append(
            {
                "l": l,
                "tv": float(tv),
                "separation_tail": float(sep),
                "l2_sq_bound": float(l2b),
                "tv_exact": _fmt(tv),
                "separation_tail_exact": _fmt(sep),
            }
        )
    header = ["l", "tv", "separation_tail", "l2_sq_bound", "tv_exact", "separation_tail_exact"]
    payload = {
        "walk": {"kind": "cyclic", "n": args.n, "m": args.m, "k": args.k},
        "backend": "exact",
        "rows": jrows,
    }
    _emit(args, "tv", header, rows, payload)
    return 0


def _report_payload(report) -> dict:
    return _sanitize(report)


def _cmd_bounds(args) -> int:
    n = args.n
    reports = []

    def skipped(op, reason):
        reports.append({"op": op, "skipped": reason})

    c_upper = args.c if args.c is not None else 1.0
    if args.k is not None and 2 * args.k <= n:
        for variant in ("stated", "summary"):
            reports.append(
                _report_payload(bounds_mod.coupling_upper_bound_steps(n, args.k, c_upper, variant))
            )
    else:
        skipped("coupling-upper", "requires --k with k <= n/2")

    if args.eps is not None:
        if n % 4 == 2:
            reports.append(_report_payload(bounds_mod.half_flip_step_bound(n, args.eps)))
        else:
            skipped("half-flip", "requires n = 2 mod 4")
    else:
        skipped("half-flip", "requires --eps")

    if args.k is not None:
        c_low = args.c if args.c is not None else min(1.0, math.log(n) / 4)
        if 0 < c_low <= math.log(n) / 4:
            reports.append(_report_payload(bounds_mod.second_moment_lower_bound(n, args.k, c_low)))
        else:
            skipped("second-moment-lower", f"c={c_low:g} outside (0, ln(n)/4]")
    else:
        skipped("second-moment-lower", "requires --k")

    if args.m is not None:
        c_cyc = args.c if args.c is not None else 1.0
        if args.k is not None:
            reports.append(_report_payload(bounds_mod.cyclic_step_bound(n, args.m, args.k, c_cyc)))
        else:
            skipped("cyclic", "requires --k")
        for variant in ("stated", "conservative"):
            reports.append(
                _report_payload(bounds_mod.comparison_step_bound(n, args.m, c_cyc, variant))
            )
    else:
        skipped("cyclic", "requires --m")
        skipped("comparison", "requires --m")

    table = [
        dataclasses.asdict(row) for row in bounds_mod.reported_steps_comparison()
    ]
    payload = {
        "params": {
            "n": n,
            "k": args.k,
            "m": args.m,
            "eps": args.eps,
            "c": args.c,
        },
        "log_convention": "natural (ln)",
        "reports": reports,
        "reported_steps_comparison": {
            "note": (
                "published upper-bound examples next to what the stated formula "
                "evaluates to at c -> 0; the published values are not reproduced "
                "by the formula under any logarithm convention tried"
            ),
            "rows": table,
        },
    }
    if args.format == "csv":
        header = ["op", "variant", "steps", "raw_steps", "bound", "bound_metric", "notes"]
        rows = []
        for rep in reports:
            if "skipped" in rep:
                rows.append([rep["op"], "skipped", "", "", "", "", rep["skipped"]])
            else:
                rows.append(
                    [
                        rep["op"],
                        rep["variant"],
                        rep["steps"],
                        rep["raw_steps"],
                        rep["bound"],
                        rep["bound_metric"],
                        "; ".join(rep["notes"]),
                    ]
                )
        for row in table:
            rows.append(
                [
                    "reported-comparison",
                    f"n={row['n']} k={row['k']}",
                    row["computed"],
                    "",
                    "",
                    "",
                    f"reported={row['reported']} difference={row['difference']}",
                ]
            )
        path = _output_path(args, "bounds")
        _write_atomic(path, _csv_text(header, rows))
        print(f"wrote {path}")
    else:
        _emit(args, "bounds", None, None, payload)
    return 0


def _cmd_couple(args) -> int:
    spec = WalkSpec(args.n, args.k)
    report = simulate_coupling(spec, trials=args.trials, max_steps=args.steps, seed=args.seed)
    exact = coupling_tail_curve(spec, args.steps)
    rows = []
    jrows = []
    for l in range(args.steps + 1):
        rows.append([l, report.survivors[l], report.tail(l), float(exact[l]), exact[l]])
        jrows.append(
            {
                "l": l,
                "mc_survivors": report.survivors[l],
                "mc_tail": report.tail(l),
                "exact_tail": float(exact[l]),
                "exact_tail_exact": _fmt(exact[l]),
            }
        )
    payload = {
        "walk": {"kind": "cube", "n": args.n, "k": args.k, "p": "1/2"},
        "trials": args.trials,
        "seed": args.seed,
        "max_steps": args.steps,
        "method": report.method,
        "censored": report.censored,
        "mc_mean_time": report.mean_time,
        "rows": jrows,
    }
    header = ["l", "mc_survivors", "mc_tail", "exact_tail", "exact_tail_exact"]
    _emit(args, "couple", header, rows, payload)
    return 0


def _cmd_verify(args) -> int:
    lemma = args.lemma

    def need(flag, value):
        if value is None:
            raise ValueError(f"verify --lemma {lemma} requires --{flag}")
        return value

    if lemma == "probineq":
        cert = verify_half_flip_pick_bounds(need("n", args.n))
        payload = _sanitize(cert)
        payload["lemma"] = lemma
        payload["counterexamples_found"] = cert.has_violations
        bad = cert.has_violations
    elif lemma == "general":
        parts = tuple(int(p) for p in args.parts.split(",")) if args.parts else tuple(range(1, 10))
        cert = verify_pick_fraction_bounds(args.n_max, parts)
        payload = _sanitize(cert)
        payload["lemma"] = lemma
        payload["counterexamples_found"] = cert.has_violations
        bad = cert.has_violations
    elif lemma == "eig34":
        cert = verify_eigenvalue_three_quarters(need("n", args.n))
        ok = cert.bound_holds and cert.odd_levels_equal_p and cert.closed_form_matches
        payload = _sanitize(cert)
        payload["lemma"] = lemma
        payload["counterexamples_found"] = not ok
        bad = not ok
    elif lemma == "marginal":
        cert = marginal_check(need("n", args.n), need("k", args.k))
        payload = _sanitize(cert)
        payload["lemma"] = lemma
        payload["counterexamples_found"] = not cert.ok
        bad = not cert.ok
    else:  # symmetry
        cert = verify_symmetry_sweep(need("n", args.n))
        payload = dict(_sanitize(cert))
        payload["lemma"] = lemma
        payload["counterexamples_found"] = not cert["ok"]
        bad = not cert["ok"]

    # fixed key order: lemma first, verdict second, certificate body after
    ordered = {"lemma": payload.pop("lemma"), "counterexamples_found": payload.pop("counterexamples_found")}
    ordered.update(payload)
    _emit(args, f"verify_{lemma}", None, None, ordered)
    print(f"verify {lemma}: {'counterexamples found' if bad else 'ok'}")
    return 2 if bad else 0


# ---------------------------------------------------------------------------
# parser


def _add_common(p, fmt_default: str) -> None:
    p.add_argument("--format", choices=("csv", "json"), default=fmt_default)
    p.add_argument("--output", help="output file path (default: $CUBEMIX_OUTPUT_DIR/<cmd>.<fmt>)")
    p.add_argument("--backend", choices=("exact", "float", "auto"), default="auto")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cubemix", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = sub.add_parser("spectrum", help="eigenvalue table with multiplicities")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--p", type=Fraction, default=Fraction(1, 2))
    p.add_argument("--m", type=int, help="modulus: report the cyclic walk instead")
    _add_common(p, "csv")
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("tv", help="per-step TV and l^2 distance curve")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--p", type=Fraction, default=Fraction(1, 2))
    p.add_argument("--m", type=int, help="modulus: curve for the cyclic walk instead")
    p.add_argument("--steps", type=int, required=True, help="curve covers l = 0..steps")
    _add_common(p, "csv")
    p.set_defaults(func=_cmd_tv)

    p = sub.add_parser("bounds", help="closed-form step bounds and table comparison")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--eps", type=float, help="target for 4*tv^2 in the half-flip bound")
    p.add_argument("--c", type=float, help="slack parameter shared by the bound families")
    _add_common(p, "json")
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("couple", help="Monte Carlo and exact coupling tails")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--steps", type=int, default=50)
    _add_common(p, "csv")
    p.set_defaults(func=_cmd_couple)

    p = sub.add_parser("verify", help="exact lemma certificates")
    p.add_argument(
        "--lemma",
        required=True,
        choices=("probineq", "general", "eig34", "marginal", "symmetry"),
    )
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--n-max", dest="n_max", type=int, default=150)
    p.add_argument("--parts", help="comma-separated subset of 1..9 (general only)")
    _add_common(p, "json")
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"cubemix: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
