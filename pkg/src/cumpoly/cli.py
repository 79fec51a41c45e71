"""Command-line front end: ``cumpoly <subcommand> [flags]``.

JSON is the canonical output. ``--format csv`` and ``--format pretty`` are
rendered from the JSON document alone, and every JSON document can be read
back with :func:`read_document`.

Exit codes: 0 on success, 2 on usage errors or unreadable input, 1 on
computation errors (one JSON line on stderr).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import mc
from .combinat import (
    MultiIndexPartition,
    SizeCapError,
    caps,
    enumerate_partitions,
    format_index,
    parse_index,
    set_caps,
)
from .cumulant import (
    SequenceTable,
    correlated_substitution,
    cumulant_polynomial,
    cumulants_from_moments,
    moments_from_cumulants,
    multivariable_cumulant_polynomial,
    random_sum_cumulants,
)
from .models import MertonSpec, VGSpec, hermite, merton_cumulants, merton_moments, nef_series, \
    sheffer_coefficients, vg_cumulants, vg_moments
from .ring import SparsePoly, decode_coeff, encode_coeff, format_rational, parse_rational
from .series import TruncatedSeries, compose_multi_outer, compose_uni_outer
from .symfunc import (
    TraceMomentTable,
    elementary_symmetric,
    matrix_cumulants_from_trace_moments,
    sampling_invariance_check,
    trace_moments_from_matrix_cumulants,
    weighted_sum_moment,
)

DEFAULT_SEED = 20261016


class UsageError(Exception):
    """Bad flags or unreadable input; maps to exit code 2."""


# -- input -------------------------------------------------------------------

def _load(arg: str, stdin) -> object:
    """JSON from a path, ``-`` for stdin, or an inline JSON literal."""
    try:
        if arg == "-":
            text = stdin.read()
        elif arg.lstrip()[:1] in ("{", "["):
            text = arg
        else:
            with open(arg, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {arg}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {arg}: {exc.msg} at line {exc.lineno}") from None


def _table(obj, kind: str) -> SequenceTable:
    if isinstance(obj, list):
        return SequenceTable.from_sequence([decode_coeff(v) for v in obj], kind=kind)
    if not isinstance(obj, dict):
        raise UsageError("a table must be a JSON object or a list")
    if "coeffs" in obj:
        return SequenceTable.from_series(TruncatedSeries.from_json(obj), kind=kind)
    try:
        t = SequenceTable.from_json({"kind": kind, **obj})
    except KeyError as exc:
        raise UsageError(f"table is missing field {exc}") from None
    if t.kind != kind:
        raise ValueError(f"expected a {kind} table, got a {t.kind} table")
    return t


def _series(obj) -> TruncatedSeries:
    if isinstance(obj, dict) and "coeffs" in obj:
        return TruncatedSeries.from_json(obj)
    t = _table(obj, obj.get("kind", "cumulant") if isinstance(obj, dict) else "cumulant")
    return t.to_series()


def _values(text: str) -> list[Fraction]:
    try:
        return [parse_rational(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"bad rational list {text!r}") from None


def _matrix(text: str) -> list[list[Fraction]]:
    return [_values(row) for row in text.split(";")]


def _index(args) -> tuple[int, ...]:
    if args.index is None:
        raise UsageError("--index is required")
    try:
        i = parse_index(args.index)
    except ValueError:
        raise UsageError(f"bad index {args.index!r}") from None
    _cap(len(i), sum(i))
    return i


def _cap(d: int, degree: int) -> None:
    c = caps()
    if d > c.max_dim or degree > c.max_degree:
        raise SizeCapError(f"size cap exceeded: d={d}, degree={degree} "
                           f"(caps d<={c.max_dim}, degree<={c.max_degree})")


def _input_table(args, stdin, kind: str, attr: str | None = None) -> SequenceTable:
    attr = attr or ("moments" if kind == "moment" else "cumulants")
    src = getattr(args, attr, None)
    if src is not None:
        t = _table(_load(src, stdin), kind)
    elif getattr(args, "symbolic", False):
        if args.dim is None or args.order is None:
            raise UsageError("--symbolic needs --dim and --order")
        name = "m" if kind == "moment" else "c"
        t = SequenceTable.symbolic(args.dim, args.order, name=name, kind=kind)
    else:
        raise UsageError(f"--{attr} FILE (or --symbolic) is required")
    _cap(t.d, t.order)
    if args.order is not None and src is not None:
        t.require(args.order)
        t = t.truncate(args.order)
    return t


# -- documents ----------------------------------------------------------------

def _partition_doc(lam: MultiIndexPartition) -> dict:
    return {"columns": [format_index(c) for c in lam.columns],
            "multiplicities": list(lam.multiplicities),
            "coefficient": format_rational(lam.coefficient)}


def _value_doc(index, value, **extra) -> dict:
    return {"index": format_index(index) if not isinstance(index, str) else index,
            "value": encode_coeff(value), **extra}


def read_document(obj):
    """Rebuild the library object behind a JSON document printed by the CLI."""
    if not isinstance(obj, dict):
        raise ValueError("CLI documents are JSON objects")
    if "partitions" in obj:
        target = parse_index(obj["index"])
        out = []
        for p in obj["partitions"]:
            cols = [parse_index(c) for c in p["columns"]]
            expanded = [c for c, m in zip(cols, p["multiplicities"]) for _ in range(m)]
            out.append(MultiIndexPartition.from_columns(target, expanded))
        return out
    if "results" in obj:
        return mc.estimates_from_json(obj["results"])
    if "coeffs" in obj:
        return TruncatedSeries.from_json(obj)
    if "entries" in obj:
        return SequenceTable.from_json(obj)
    if "vars" in obj and "terms" in obj:
        return SparsePoly.from_json(obj)
    if "full" in obj and "sample" in obj:
        return {"full": SequenceTable.from_json(obj["full"]),
                "sample": SequenceTable.from_json(obj["sample"]), "pass": obj["pass"]}
    if "moments" in obj and "n" in obj:
        return TraceMomentTable.from_json(obj)
    if "values" in obj:
        return [decode_coeff(v) for v in obj["values"]]
    if "value" in obj:
        return decode_coeff(obj["value"])
    raise ValueError("unrecognised document")


def _show(c) -> str:
    """Display form of an encoded coefficient."""
    if isinstance(c, dict):
        return str(SparsePoly.from_json(c))
    return str(c)


def _rows(doc: dict) -> tuple[list[str], list[list]]:
    if "partitions" in doc:
        return (["columns", "multiplicities", "coefficient"],
                [[" ".join(p["columns"]), " ".join(map(str, p["multiplicities"])), p["coefficient"]]
                 for p in doc["partitions"]])
    if "results" in doc:
        return (["index", "symbolic", "estimate", "se", "pass"],
                [[r["index"], r["symbolic"], r["estimate"], r["se"], r["pass"]] for r in doc["results"]])
    if "entries" in doc or "coeffs" in doc:
        entries = doc.get("entries", doc.get("coeffs"))
        return ["index", "value"], [[k, _show(v)] for k, v in entries.items()]
    if "vars" in doc:
        return (["exponent", "coefficient"], [[k, v] for k, v in doc["terms"].items()])
    if "full" in doc:
        rows = [[k, _show(v), _show(doc["sample"]["entries"].get(k, "0"))]
                for k, v in doc["full"]["entries"].items()]
        return ["index", "full", "sample"], rows
    if "moments" in doc:
        return ["index", "value"], [[str(k + 1), v] for k, v in enumerate(doc["moments"])]
    if "values" in doc:
        return ["index", "value"], [[str(k), _show(v)] for k, v in enumerate(doc["values"])]
    if "value" in doc:
        return ["index", "value"], [[doc["index"], _show(doc["value"])]]
    raise ValueError("no tabular form for this document")


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2)
    header, rows = _rows(doc)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue().rstrip("\n")
    lines = []
    if "partitions" in doc:
        for p in doc["partitions"]:
            body = " ".join(f"({c})^{m}" for c, m in zip(p["columns"], p["multiplicities"]))
            lines.append(f"{{{body}}}  coefficient {p['coefficient']}")
        return "\n".join(lines)
    if "power_sum" in doc:
        lines.append(f"power sums: {_show(doc['power_sum'])}")
    for row in rows:
        lines.append(f"{row[0]}: " + "  ".join(str(x) for x in row[1:]))
    if "pass" in doc:
        lines.append("PASS" if doc["pass"] else "FAIL")
    return "\n".join(lines)


# -- subcommands ----------------------------------------------------------------

def cmd_partitions(args, stdin):
    i = _index(args)
    return {"index": format_index(i), "partitions": [_partition_doc(p) for p in enumerate_partitions(i)]}


def cmd_m2c(args, stdin):
    return cumulants_from_moments(_input_table(args, stdin, "moment")).to_json()


def cmd_c2m(args, stdin):
    return moments_from_cumulants(_input_table(args, stdin, "cumulant")).to_json()


def cmd_cumpoly(args, stdin):
    i = _index(args)
    c = _input_table(args, stdin, "cumulant")
    p = cumulant_polynomial(i, c)
    if args.y is not None:
        ys = _values(args.y)
        if len(ys) != 1:
            raise UsageError("--y takes one value here")
        return _value_doc(i, p(ys[0]), y=format_rational(ys[0]))
    return _value_doc(i, p.value)


def cmd_randsum(args, stdin):
    if args.outer is None:
        raise UsageError("--outer FILE is required")
    g = _table(_load(args.outer, stdin), "cumulant")
    c = _input_table(args, stdin, "cumulant")
    if g.d != 1:
        raise UsageError("the outer table must be univariate")
    return random_sum_cumulants(g, c).to_json()


def cmd_multipoly(args, stdin):
    i = _index(args)
    if not args.tables:
        raise UsageError("--cumulants FILE [FILE ...] is required")
    cs = [_table(_load(f, stdin), "cumulant") for f in args.tables]
    if args.joint is not None:
        joint = _load(args.joint, stdin)
        kind = joint.get("kind", "moment") if isinstance(joint, dict) else "moment"
        value = correlated_substitution(i, cs, _table(joint, kind), args.mode)
        return _value_doc(i, value, mode=args.mode)
    p = multivariable_cumulant_polynomial(i, cs)
    if args.y is not None:
        ys = _values(args.y)
        if len(ys) != len(cs):
            raise UsageError(f"--y needs {len(cs)} values")
        return _value_doc(i, p.subs({f"y{k + 1}": v for k, v in enumerate(ys)}))
    return _value_doc(i, p)


def cmd_compose(args, stdin):
    if args.outer is None or not args.inner:
        raise UsageError("--outer FILE and --inner FILE [FILE ...] are required")
    G = _series(_load(args.outer, stdin))
    F = [_series(_load(f, stdin)) for f in args.inner]
    for s in [G] + F:
        _cap(s.d, s.order)
    if len(F) == 1 and G.d == 1:
        out = compose_uni_outer(G, F[0])
    else:
        out = compose_multi_outer(G, F)
    if args.order is not None:
        out = out.truncate(args.order)
    return out.to_json()


def cmd_hermite(args, stdin):
    i = _index(args)
    if args.cov is None:
        raise UsageError("--cov is required, e.g. --cov '1,1/2;1/2,1'")
    return _value_doc(i, hermite(i, _matrix(args.cov)))


def cmd_nef(args, stdin):
    if args.x is None:
        raise UsageError("--x VALUES is required")
    c = _input_table(args, stdin, "cumulant")
    return nef_series(_values(args.x), c).to_json()


def cmd_sheffer(args, stdin):
    if args.tilde is None:
        raise UsageError("--tilde FILE is required")
    c = _input_table(args, stdin, "cumulant")
    return sheffer_coefficients(_table(_load(args.tilde, stdin), "cumulant"), c).to_json()


def cmd_model(args, stdin):
    if args.params is None or args.order is None:
        raise UsageError("--params FILE and --order are required")
    obj = _load(args.params, stdin)
    spec_cls = MertonSpec if args.model == "merton" else VGSpec
    try:
        spec = spec_cls.from_json(obj)
    except KeyError as exc:
        raise UsageError(f"model parameters are missing field {exc}") from None
    _cap(spec.d, args.order)
    if args.model == "merton":
        table = merton_cumulants(spec, args.order) if args.output == "cumulant" else merton_moments(spec, args.order)
    else:
        table = vg_cumulants(spec, args.order) if args.output == "cumulant" else vg_moments(spec, args.order)
    return table.to_json()


def cmd_symfun(args, stdin):
    op = args.op
    if op == "elem":
        if args.n is None or args.order is None:
            raise UsageError("elem needs --n and --order")
        _cap(args.n, args.order)
        return {"n": args.n, "values": [encode_coeff(e) for e in elementary_symmetric(args.n, args.order)]}
    if op == "wsum":
        if args.n is None:
            raise UsageError("wsum needs --n")
        i = _index(args)
        if len(i) != 1:
            raise UsageError("wsum takes a univariate --index")
        ps, value = weighted_sum_moment(i[0], _input_table(args, stdin, "cumulant"), args.n)
        return {"index": format_index(i), "power_sum": ps.poly.to_json(), "value": encode_coeff(value)}
    if op == "trace":
        if args.moments is not None:
            obj = _load(args.moments, stdin)
            try:
                tm = TraceMomentTable.from_json(obj)
            except (KeyError, TypeError):
                raise UsageError("trace moments need {\"n\": ..., \"moments\": [...]}") from None
            return matrix_cumulants_from_trace_moments(tm).to_json()
        if args.n is None:
            raise UsageError("trace needs --n")
        return trace_moments_from_matrix_cumulants(_input_table(args, stdin, "cumulant"), args.n, args.order).to_json()
    if op == "invcheck":
        if args.n is None or args.m is None:
            raise UsageError("invcheck needs --n and --m")
        report = sampling_invariance_check(_input_table(args, stdin, "cumulant"), args.n, args.m, args.order)
        return report.to_json()
    raise UsageError(f"unknown symfun operation {op!r}")


def cmd_mc_validate(args, stdin):
    if args.params is None:
        raise UsageError("--params FILE is required")
    obj = _load(args.params, stdin)
    try:
        model = mc.MODELS[args.model].from_json(obj)
    except KeyError as exc:
        raise UsageError(f"model parameters are missing field {exc}") from None
    order = args.order or 4
    _cap(model.d, order)
    spec = mc.SampleSpec(model, args.samples, args.seed, order)
    return mc.validate(spec, args.k, args.workers).to_json()


# -- parser ---------------------------------------------------------------------

def _common(p: argparse.ArgumentParser, *flags: str) -> None:
    table = {
        "index": lambda: p.add_argument("--index", help="multi-index, e.g. 2,1"),
        "order": lambda: p.add_argument("--order", type=int, help="truncation order D"),
        "dim": lambda: p.add_argument("--dim", type=int, help="dimension d (with --symbolic)"),
        "cumulants": lambda: p.add_argument("--cumulants", metavar="FILE", help="cumulant table JSON, '-' for stdin"),
        "moments": lambda: p.add_argument("--moments", metavar="FILE", help="moment table JSON, '-' for stdin"),
        "symbolic": lambda: p.add_argument("--symbolic", action="store_true",
                                           help="use indeterminate entries c[i] (needs --dim and --order)"),
        "n": lambda: p.add_argument("--n", type=int),
        "m": lambda: p.add_argument("--m", type=int),
        "y": lambda: p.add_argument("--y", metavar="VALUES", help="comma-separated rationals"),
    }
    for f in flags:
        table[f]()


def build_parser() -> argparse.ArgumentParser:
    def output_flags(p, fmt_default, cap_default):
        p.add_argument("--format", choices=("json", "csv", "pretty"), default=fmt_default)
        p.add_argument("--max-dim", type=int, default=cap_default, help="override the dimension cap")
        p.add_argument("--max-degree", type=int, default=cap_default, help="override the degree cap")

    parser = argparse.ArgumentParser(prog="cumpoly", allow_abbrev=False,
                                     description="Exact cumulant polynomial computations.")
    output_flags(parser, "json", None)
    # the same flags after the subcommand; SUPPRESS keeps the top-level value unless given
    shared = argparse.ArgumentParser(add_help=False, allow_abbrev=False, argument_default=argparse.SUPPRESS)
    output_flags(shared, argparse.SUPPRESS, argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True, metavar="SUBCOMMAND")
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[shared], allow_abbrev=False, **kw)
    sub.add_parser = add_parser

    p = sub.add_parser("partitions", help="multi-index partitions of --index")
    _common(p, "index")
    p.set_defaults(fn=cmd_partitions)

    p = sub.add_parser("m2c", help="moments to cumulants")
    _common(p, "moments", "symbolic", "dim", "order")
    p.set_defaults(fn=cmd_m2c)

    p = sub.add_parser("c2m", help="cumulants to moments")
    _common(p, "cumulants", "symbolic", "dim", "order")
    p.set_defaults(fn=cmd_c2m)

    p = sub.add_parser("cumpoly", help="cumulant polynomial C_i(y)")
    _common(p, "index", "cumulants", "symbolic", "dim", "order", "y")
    p.set_defaults(fn=cmd_cumpoly)

    p = sub.add_parser("randsum", help="cumulants of a generalized random sum")
    _common(p, "cumulants", "symbolic", "dim", "order")
    p.add_argument("--outer", metavar="FILE", help="univariate cumulant table of the count")
    p.set_defaults(fn=cmd_randsum)

    p = sub.add_parser("multipoly", help="multivariable cumulant polynomial")
    _common(p, "index", "y")
    p.add_argument("--cumulants", dest="tables", nargs="+", metavar="FILE")
    p.add_argument("--joint", metavar="FILE", help="joint table of (Y1..Yn) to substitute")
    p.add_argument("--mode", choices=("moment", "cumulant"), default="moment")
    p.set_defaults(fn=cmd_multipoly)

    p = sub.add_parser("compose", help="compose truncated series")
    _common(p, "order")
    p.add_argument("--outer", metavar="FILE")
    p.add_argument("--inner", nargs="+", metavar="FILE")
    p.set_defaults(fn=cmd_compose)

    p = sub.add_parser("hermite", help="multivariate Hermite polynomial")
    _common(p, "index")
    p.add_argument("--cov", help="covariance rows, e.g. '1,1/2;1/2,1'")
    p.set_defaults(fn=cmd_hermite)

    p = sub.add_parser("nef", help="series of exp(<theta,x> - K(theta))")
    _common(p, "cumulants", "symbolic", "dim", "order")
    p.add_argument("--x", metavar="VALUES")
    p.set_defaults(fn=cmd_nef)

    p = sub.add_parser("sheffer", help="coefficients of exp(K~ + K)")
    _common(p, "cumulants", "symbolic", "dim", "order")
    p.add_argument("--tilde", metavar="FILE")
    p.set_defaults(fn=cmd_sheffer)

    p = sub.add_parser("model", help="moments or cumulants of a Levy model")
    p.add_argument("model", choices=("merton", "vg"))
    _common(p, "order")
    p.add_argument("--params", metavar="FILE")
    p.add_argument("--output", choices=("moment", "cumulant"), default="moment")
    p.set_defaults(fn=cmd_model)

    p = sub.add_parser("symfun", help="symmetric functions and random matrices")
    p.add_argument("op", choices=("wsum", "elem", "trace", "invcheck"))
    _common(p, "index", "cumulants", "moments", "symbolic", "dim", "order", "n", "m")
    p.set_defaults(fn=cmd_symfun)

    p = sub.add_parser("mc-validate", help="Monte Carlo check of exact moments")
    p.add_argument("--model", choices=tuple(mc.MODELS), required=True)
    _common(p, "order")
    p.add_argument("--params", metavar="FILE")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--samples", type=int, default=10 ** 6)
    p.add_argument("--k", type=float, default=4.0)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(fn=cmd_mc_validate)
    return parser


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None, stdin=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    stdin = stdin or sys.stdin
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    saved = caps()
    try:
        if args.max_dim is not None or args.max_degree is not None:
            set_caps(args.max_dim, args.max_degree)
        doc = args.fn(args, stdin)
        print(render(doc, args.format), file=stdout)
    except UsageError as exc:
        print(f"{parser.prog}: error: {exc}", file=stderr)
        return 2
    except (ValueError, KeyError, ArithmeticError, TypeError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        print(json.dumps({"error": type(exc).__name__, "message": str(msg)}), file=stderr)
        return 1
    finally:
        set_caps(saved.max_dim, saved.max_degree)
    if isinstance(doc, dict) and (doc.get("pass") is False or
                                  any(r.get("pass") is False for r in doc.get("results", []))):
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
