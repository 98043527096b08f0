"""Command-line front end: JSON in, JSON/CSV reports out.

Commands: verify-richter, radius-identity, classify, gramian, moments,
gns.  Exit codes: 0 all checks passed, 1 a verification failed, 2 the
input could not be parsed.  Reports carry "schema": "spheridir/1", encode
rationals as "p/q" strings, and are byte-stable for a fixed seed and
configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import numpy as np

from .dirichlet import (
    RichterReport,
    VectorPolynomial,
    falsify_invariant_kernel,
    verify_radius_identity,
    verify_richter,
)
from .exactpoly import ComplexRational
from .gramian import check_theorem, defect, gramian_of
from .measures import (
    AtomicMeasure,
    PolyWeightMeasure,
    SurfaceMeasure,
    measure_from_json,
)
from .moment import (
    check_conditions,
    forward_moments,
    gns,
    kernel_to_json_dict,
    miso_kernel,
)
from .multiindex import enumerate_upto
from .poisson import McConfig
from .spaces import (
    Custom,
    DirichletBLambda,
    DirichletLambdaC,
    Hp,
    gram,
    space_from_json,
)
from .tables import GramTable, format_fraction, parse_fraction
from .tuples import TruncatedTuple, classify, mult_tuple

SCHEMA = "spheridir/1"

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2


class InputError(Exception):
    pass


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read JSON input {path!r}: {exc}") from exc


def _emit(report: dict, fmt: str, out: str | None) -> None:
    if fmt == "json":
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    else:
        text = _to_csv(report)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _to_csv(report: dict) -> str:
    rows = report.get("results", [])
    buf = io.StringIO()
    if not rows:
        buf.write("pass\n")
        buf.write(f"{report.get('pass')}\n")
        return buf.getvalue()
    flat_rows = [_flatten_record(r) for r in rows]
    fields = sorted({k for r in flat_rows for k in r})
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for r in flat_rows:
        writer.writerow(r)
    return buf.getvalue()


def _flatten_record(rec: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in rec.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten_record(v, prefix=f"{key}."))
        elif isinstance(v, list):
            out[key] = json.dumps(v)
        else:
            out[key] = v
    return out


def _mc_config(args) -> McConfig:
    return McConfig(sample_count=args.samples, seed=args.seed)


def _monomials(d: int, N: int):
    return [VectorPolynomial.monomial(d, a) for a in enumerate_upto(d, N)]


def _random_polys(d: int, N: int, seed: int, count: int = 3):
    rng = np.random.default_rng(seed)
    basis = enumerate_upto(d, min(N, 2))
    out = []
    for _ in range(count):
        coeffs = {}
        for a in basis:
            re, im = rng.integers(-2, 3, size=2)
            if re or im:
                coeffs[a] = (ComplexRational(int(re), int(im)),)
        if coeffs:
            out.append(VectorPolynomial(d, 1, coeffs))
    return out


def cmd_verify_richter(args) -> int:
    data = _load_json(args.input)
    mu = _parse_measure(data)
    cfg = _mc_config(args)
    polys = _monomials(mu.d, args.N)
    extras = _random_polys(mu.d, args.N, args.seed)
    results = []
    falsified = False
    all_pass = True
    for k in range(1, args.k + 1):
        pairs = [(p, q) for p in polys for q in polys]
        pairs += [(p, p) for p in extras]
        for p, q in pairs:
            if args.invariant_kernel:
                rep = falsify_invariant_kernel(mu, p, q, k, cfg)
                if rep.mode == "monte_carlo" and abs(rep.residual_complex()) > 10 * rep.std_error:
                    falsified = True
            else:
                rep = verify_richter(p, q, mu, k, cfg)
                all_pass = all_pass and rep.passes()
            results.append(rep.to_json_dict())
    ok = falsified if args.invariant_kernel else all_pass
    report = {
        "schema": SCHEMA,
        "command": "verify-richter",
        "config": _config_dict(args, ["input", "N", "k", "seed", "samples", "invariant_kernel"]),
        "results": results,
        "pass": ok,
    }
    _emit(report, args.format, args.out)
    return EXIT_OK if ok else EXIT_FAIL


RADIUS_GRID = (Fraction(1, 2), Fraction(2, 3), Fraction(3, 4))


def cmd_radius_identity(args) -> int:
    data = _load_json(args.input)
    mu = _parse_measure(data)
    cfg = _mc_config(args)
    polys = _monomials(mu.d, args.N)
    results = []
    all_pass = True
    for R in RADIUS_GRID:
        for p in polys:
            for q in polys:
                rep = verify_radius_identity(p, q, mu, R, cfg)
                rec = rep.to_json_dict()
                rec["R"] = format_fraction(R)
                results.append(rec)
                all_pass = all_pass and rep.passes()
    report = {
        "schema": SCHEMA,
        "command": "radius-identity",
        "config": _config_dict(args, ["input", "N", "seed", "samples"]),
        "results": results,
        "pass": all_pass,
    }
    _emit(report, args.format, args.out)
    return EXIT_OK if all_pass else EXIT_FAIL


def _parse_measure(data: dict):
    try:
        return measure_from_json(data)
    except (KeyError, ValueError) as exc:
        raise InputError(f"bad measure descriptor: {exc}") from exc


def _parse_space_or_tuple(data: dict, N: int):
    """Returns (tuple, gram table, description)."""
    try:
        if data.get("type") == "tuple":
            table = GramTable.from_json_dict(data["gram"])
            T = _tuple_from_json(data, table)
            return T, table, "tuple"
        spec = space_from_json(data)
        table = gram(spec, N)
        return mult_tuple(table), table, data.get("type", "space")
    except (KeyError, ValueError, TypeError) as exc:
        raise InputError(f"bad space/tuple descriptor: {exc}") from exc


def _tuple_from_json(data: dict, table: GramTable) -> TruncatedTuple:
    """Sparse-triplet multiplication matrices over the monomial basis."""
    d, N = table.d, table.N
    basis = table.labels()
    degrees = [sum(a) for a in basis]
    mult = []
    for triplets in data["mult"]:
        col: dict = {}
        for src, dst, re, im in triplets:
            c = ComplexRational(parse_fraction(re), parse_fraction(im))
            col.setdefault(basis[src], []).append((basis[dst], c))
        for a, dg in zip(basis, degrees):
            if dg <= N - 1:
                col.setdefault(a, [])
        mult.append(col)
    gram_dict = dict(table.entries)
    return TruncatedTuple(d, N, basis, degrees, mult, gram_dict)


def cmd_classify(args) -> int:
    data = _load_json(args.input)
    T, table, desc = _parse_space_or_tuple(data, args.N)
    results = []
    all_conclusive = True
    for m in range(1, args.m + 1):
        c = classify(T, m)
        results.append(
            {
                "m": m,
                "kind": c.kind,
                "window": c.window,
                "exact": c.exact,
                "max_residual": c.max_residual,
            }
        )
        if c.kind == "inconclusive":
            all_conclusive = False
    diag = all(a == b for (a, b) in table.entries)
    report = {
        "schema": SCHEMA,
        "command": "classify",
        "config": _config_dict(args, ["input", "N", "m"]),
        "space": desc,
        "monomials_orthogonal": diag,
        "results": results,
        "pass": all_conclusive,
    }
    _emit(report, args.format, args.out)
    return EXIT_OK if all_conclusive else EXIT_FAIL


def cmd_gramian(args) -> int:
    data = _load_json(args.input)
    T, _table, desc = _parse_space_or_tuple(data, args.N)
    try:
        G = gramian_of(T)
        rep = check_theorem(G, args.m, k_max=3)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    dm = defect(G, args.m)
    report = {
        "schema": SCHEMA,
        "command": "gramian",
        "config": _config_dict(args, ["input", "N", "m"]),
        "space": desc,
        "gramian": G.to_json_dict(),
        "defect_max_abs": dm.max_abs(),
        "theorem": rep.to_json_dict(),
        "results": [rep.to_json_dict()],
        "pass": rep.all_pass(),
    }
    _emit(report, args.format, args.out)
    return EXIT_OK if rep.all_pass() else EXIT_FAIL


def cmd_moments(args) -> int:
    data = _load_json(args.input)
    mu = _parse_measure(data)
    phi = forward_moments(mu, args.N)
    cond = check_conditions(phi)
    ok = cond.all_pass()
    report = {
        "schema": SCHEMA,
        "command": "moments",
        "config": _config_dict(args, ["input", "N", "extract"]),
        "conditions": cond.to_json_dict(),
        "table": kernel_to_json_dict(phi),
        "results": [cond.to_json_dict()],
        "pass": ok,
    }
    if args.extract:
        spec = _dirichlet_space_of(mu)
        T = mult_tuple(gram(spec, args.N + 1))
        extracted = miso_kernel(T, 2)
        W = min(extracted.N, phi.N)
        equal = extracted.restrict(W) == phi.restrict(W)
        report["extraction_equal"] = equal
        ok = ok and equal
        report["pass"] = ok
    _emit(report, args.format, args.out)
    return EXIT_OK if ok else EXIT_FAIL


def _dirichlet_space_of(mu):
    if isinstance(mu, SurfaceMeasure):
        return DirichletLambdaC(Fraction(1), tuple([Fraction(0)] * mu.d), mu.d)
    if isinstance(mu, PolyWeightMeasure):
        from .measures import _recognize_family

        lam, c, b = _recognize_family(mu)
        if c is not None:
            return DirichletLambdaC(lam, tuple(c), mu.d)
        if b is not None:
            return DirichletBLambda(lam, tuple(b), mu.d)
    raise InputError("extraction needs a sigma / lambda_c / b_lambda measure")


def cmd_gns(args) -> int:
    data = _load_json(args.input)
    mu = _parse_measure(data)
    phi = forward_moments(mu, args.N)
    cond = check_conditions(phi)
    if not cond.all_pass():
        report = {
            "schema": SCHEMA,
            "command": "gns",
            "config": _config_dict(args, ["input", "N"]),
            "conditions": cond.to_json_dict(),
            "results": [],
            "pass": False,
        }
        _emit(report, args.format, args.out)
        return EXIT_FAIL
    S = gns(phi)
    c = classify(S, 1)
    ok = c.is_isometry()
    report = {
        "schema": SCHEMA,
        "command": "gns",
        "config": _config_dict(args, ["input", "N"]),
        "conditions": cond.to_json_dict(),
        "quotient_dim": len(S.basis),
        "isometry": {"kind": c.kind, "window": c.window, "exact": c.exact},
        "results": [{"quotient_dim": len(S.basis), "kind": c.kind}],
        "pass": ok,
    }
    _emit(report, args.format, args.out)
    return EXIT_OK if ok else EXIT_FAIL


def _config_dict(args, keys) -> dict:
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="path to the JSON descriptor")
    p.add_argument("--d", type=int, default=None, help="ambient dimension override")
    p.add_argument("--N", type=int, default=3, help="degree bound of the basis grid")
    p.add_argument("--k", type=int, default=2, help="largest shift order")
    p.add_argument("--m", type=int, default=4, help="largest isometry order")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None, help="report path (default: stdout)")
    p.add_argument("--invariant-kernel", dest="invariant_kernel", action="store_true")
    p.add_argument("--extract", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spheridir",
        description="Verification toolkit for Dirichlet-type spaces on the unit ball",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        p = sub.add_parser(name)
        _add_common(p)
        p.set_defaults(fn=fn)
    return parser


COMMANDS = {
    "verify-richter": cmd_verify_richter,
    "radius-identity": cmd_radius_identity,
    "classify": cmd_classify,
    "gramian": cmd_gramian,
    "moments": cmd_moments,
    "gns": cmd_gns,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except InputError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
