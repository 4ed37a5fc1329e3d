"""Batch command-line front end.

Subcommands mirror the verification targets: ``ideal`` exports a generator
set as JSON, ``reduce`` reduces an exported set modulo the boundary ideal,
``verify`` runs one of the named identity suites (``gl-lemma``, ``sp-hua``,
``upq-shilov``, ``upq-theorem``, ``upq-recursion``), ``cfun`` evaluates the
spherical e-/c-functions, and ``degrees`` queries the boundary degree table.

Exit status 0 means success (and PASS for ``verify``), 1 a verification
FAIL, 2 a usage error.  ``--json`` prints the report as canonical JSON on
standard output; ``--out FILE`` writes the same JSON to a file.  Identical
requests produce byte-identical JSON (timing fields are stripped).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .cfun import c_function, e_c_line_bundle, e_function
from .liedata import (glnr_root_system, make_algebra, make_upq, satake_table,
                      spnr_root_system, upq_root_system)
from .matop import GeneratorSet, ideal_generators
from .minpoly import THETA, THETA_BAR, ThetaData, upq_complexified_theta
from .params import ParamRing, as_fraction
from .pbw import EnvElement
from .reduce import (gl_lemma_check, hua_sp_system, reduce_iwasawa,
                     upq_reduction_spec, upq_scalar_recursion,
                     upq_shilov_identity, upq_theorem_case)

__all__ = ["build_parser", "run", "main"]

_UPQ_SYMBOL_HELP = (
    "bindings use sym=rational, e.g. --bind mu_1=3/2 --bind s=0")


class UsageError(Exception):
    """A request that is well-formed for argparse but invalid for the task."""


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

def _blocks(text: str) -> Tuple[int, ...]:
    try:
        out = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"blocks must be comma-separated integers, got {text!r}")
    return out


def _binding(text: str) -> Tuple[str, Fraction]:
    name, sep, value = text.partition("=")
    if not sep or not name:
        raise argparse.ArgumentTypeError(
            f"bindings must look like sym=rational, got {text!r}")
    try:
        return name, Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(
            f"cannot parse {value!r} as a rational for {name!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="huaops",
        description="exact generator-set construction and identity "
                    "verification for boundary ideals of classical forms")
    output = argparse.ArgumentParser(add_help=False)
    output.add_argument("--json", action="store_true",
                        help="print the full JSON report on stdout")
    output.add_argument("--out", metavar="FILE",
                        help="also write the JSON report to FILE")

    sub = parser.add_subparsers(dest="command", required=True)

    ideal = sub.add_parser(
        "ideal", parents=[output],
        help="export a generator set (matrix entries plus central elements)")
    ideal.add_argument("--form", required=True,
                       choices=("upq", "spnr", "glnr"))
    ideal.add_argument("--p", type=int)
    ideal.add_argument("--q", type=int)
    ideal.add_argument("--n", type=int)
    ideal.add_argument("--blocks", type=_blocks, required=True,
                       help="cumulative block ends a,b,c")
    ideal.add_argument("--restrict-columns", action="store_true",
                       help="keep only the entries in the last q columns")
    ideal.add_argument("--variant", choices=(THETA, THETA_BAR),
                       default=THETA)

    red = sub.add_parser(
        "reduce", parents=[output],
        help="reduce an exported upq generator set modulo the boundary "
             "ideal (JSON on stdin)")
    red.add_argument("--form", required=True, choices=("upq",))
    red.add_argument("--p", type=int, required=True)
    red.add_argument("--q", type=int, required=True)
    red.add_argument("--blocks", type=_blocks, required=True)
    red.add_argument("--bind", type=_binding, action="append", default=[],
                     metavar="SYM=RAT", help=_UPQ_SYMBOL_HELP)
    red.add_argument("--in", dest="infile", metavar="FILE",
                     help="read the generator-set JSON from FILE instead "
                          "of stdin")

    verify = sub.add_parser("verify", help="run one verification suite")
    target = verify.add_subparsers(dest="target", required=True)

    gl = target.add_parser("gl-lemma", parents=[output])
    gl.add_argument("--n", type=int, required=True)
    gl.add_argument("--m", type=int, required=True,
                    help="largest matrix power to verify")

    sp = target.add_parser("sp-hua", parents=[output])
    sp.add_argument("--n", type=int, required=True)

    shilov = target.add_parser("upq-shilov", parents=[output])
    shilov.add_argument("--p", type=int, required=True)
    shilov.add_argument("--q", type=int, required=True)

    theorem = target.add_parser("upq-theorem", parents=[output])
    theorem.add_argument("--p", type=int, required=True)
    theorem.add_argument("--q", type=int, required=True)
    theorem.add_argument("--blocks", type=_blocks, required=True)
    theorem.add_argument("--perturb", action="store_true",
                         help="shift the first eigenvalue by one (the "
                              "membership residues must then be nonzero)")

    recursion = target.add_parser("upq-recursion", parents=[output])
    recursion.add_argument("--p", type=int, required=True)
    recursion.add_argument("--q", type=int, required=True)
    recursion.add_argument("--blocks", type=_blocks, required=True)
    recursion.add_argument("--kernel", action="store_true",
                           help="also reduce the full matrix product "
                                "through the PBW kernel and compare")
    recursion.add_argument("--bind", type=_binding, action="append",
                           default=[], metavar="SYM=RAT",
                           help="numeric values for rendering the tables; "
                                + _UPQ_SYMBOL_HELP)

    cf = sub.add_parser(
        "cfun", parents=[output],
        help="evaluate the spherical e- and c-functions at an exact point")
    cf.add_argument("--form", required=True, choices=("upq", "spnr", "glnr"))
    cf.add_argument("--p", type=int)
    cf.add_argument("--q", type=int)
    cf.add_argument("--n", type=int)
    cf.add_argument("--bind", type=_binding, action="append", default=[],
                    metavar="SYM=RAT",
                    help="lambda_1..lambda_r coordinates (default: rho) "
                         "and optionally the level ell")

    deg = sub.add_parser(
        "degrees", parents=[output],
        help="boundary degrees at every node of a diagram row")
    deg.add_argument("--diagram", required=True,
                     help='row label, e.g. "A_n^1" or "BC_q^{2(p-q),2,1}"')
    deg.add_argument("--n", type=int, help="rank for parametric rows")
    deg.add_argument("--m", type=int,
                     help="extra row parameter when the label needs one")

    return parser


def _need(args: argparse.Namespace, *names: str) -> List[int]:
    out = []
    for name in names:
        value = getattr(args, name)
        if value is None:
            raise UsageError(
                f"--form {args.form} requires --{name}")
        out.append(value)
    return out


# ---------------------------------------------------------------------------
# subcommand handlers (each returns (report dict, exit code))
# ---------------------------------------------------------------------------

def _upq_ring_and_theta(p: int, q: int, blocks: Tuple[int, ...]):
    form = make_upq(
        p, q,
        symbols=tuple(f"mu_{j}" for j in range(1, len(blocks) + 1))
        + ("s", "t"))
    ring = form.ring
    mu = [ring.var(f"mu_{j}") for j in range(1, len(blocks) + 1)]
    theta = upq_complexified_theta(p, q, blocks, mu, ring.var("s"),
                                   ring.var("t"), ring=ring)
    return form, theta


def _build_generator_set(args: argparse.Namespace) -> GeneratorSet:
    if args.form == "upq":
        if args.variant != THETA:
            raise UsageError(
                "the upq construction fixes the plain variant; use "
                "--form spnr for the barred one")
        p, q = _need(args, "p", "q")
        form, theta = _upq_ring_and_theta(p, q, args.blocks)
        column_range = (p + 1, p + q) if args.restrict_columns else None
        return ideal_generators(make_algebra("gl", p + q), theta,
                                ring=form.ring, column_range=column_range)
    if args.restrict_columns:
        raise UsageError("--restrict-columns applies to --form upq only")
    (n,) = _need(args, "n")
    kind = {"spnr": "sp", "glnr": "gl"}[args.form]
    count = len(args.blocks)
    if args.variant == THETA_BAR:
        symbols = tuple(f"lambda_{j}" for j in range(1, count))
    else:
        symbols = tuple(f"lambda_{j}" for j in range(1, count + 1))
    ring = ParamRing(symbols)
    values = [ring.var(s) for s in symbols]
    if args.variant == THETA_BAR:
        values.append(ring.zero())
    theta = ThetaData(kind=kind, rank=n, blocks=tuple(args.blocks),
                      char_values=tuple(values), variant=args.variant)
    return ideal_generators(make_algebra(kind, n), theta, ring=ring)


def _cmd_ideal(args: argparse.Namespace) -> Tuple[dict, int]:
    gens = _build_generator_set(args)
    return gens.to_json_dict(), 0


def _cmd_reduce(args: argparse.Namespace) -> Tuple[dict, int]:
    if args.infile:
        with open(args.infile, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    else:
        doc = json.load(sys.stdin)
    p, q, blocks = args.p, args.q, tuple(args.blocks)
    form, theta = _upq_ring_and_theta(p, q, blocks)
    ambient = make_algebra("gl", p + q)
    meta = doc.get("metadata", {})
    if meta.get("basisId") != ambient.basis.basis_id:
        raise UsageError(
            f"generator set was built on basis {meta.get('basisId')!r}, "
            f"but --form upq --p {p} --q {q} expects "
            f"{ambient.basis.basis_id!r}")
    spec = upq_reduction_spec(form, blocks)
    bindings = {name: form.ring.const(value) for name, value in args.bind}
    entries = []
    all_zero = True
    for record in doc.get("entries", []):
        element = EnvElement.from_json_dict(record["element"], ambient.basis,
                                            form.ring)
        if bindings:
            element = element.substitute(bindings)
        residue = reduce_iwasawa(element, spec)
        zero = residue.is_zero()
        all_zero = all_zero and zero
        entries.append({
            "row": record["row"],
            "col": record["col"],
            "residue": str(residue),
            "zero": zero,
        })
    report = {
        "case": "reduce",
        "parameters": {"p": p, "q": q, "blocks": list(blocks),
                       "bindings": {k: str(v) for k, v in args.bind}},
        "metadata": meta,
        "entries": entries,
        "allZero": all_zero,
    }
    return report, 0


def _cmd_verify(args: argparse.Namespace) -> Tuple[dict, int]:
    if args.target == "gl-lemma":
        report = gl_lemma_check(args.n, args.m)
    elif args.target == "sp-hua":
        report = hua_sp_system(args.n)
    elif args.target == "upq-shilov":
        report = upq_shilov_identity(args.p, args.q)
    elif args.target == "upq-theorem":
        report = upq_theorem_case(args.p, args.q, args.blocks,
                                  perturb=args.perturb)
    else:
        report = upq_scalar_recursion(args.p, args.q, args.blocks,
                                      params=dict(args.bind) or None,
                                      compare_kernel=args.kernel)
    return report, 0 if report["pass"] else 1


def _root_system(args: argparse.Namespace):
    if args.form == "upq":
        p, q = _need(args, "p", "q")
        return upq_root_system(p, q)
    (n,) = _need(args, "n")
    return spnr_root_system(n) if args.form == "spnr" else glnr_root_system(n)


def _cmd_cfun(args: argparse.Namespace) -> Tuple[dict, int]:
    rs = _root_system(args)
    bindings = dict(args.bind)
    ell = bindings.pop("ell", None)
    unknown = [k for k in bindings
               if not (k.startswith("lambda_")
                       and k[7:].isdigit()
                       and 1 <= int(k[7:]) <= rs.rank)]
    if unknown:
        raise UsageError(
            f"unknown spectral coordinates {unknown}; expected "
            f"lambda_1..lambda_{rs.rank} and optionally ell")
    if bindings:
        missing = [f"lambda_{i}" for i in range(1, rs.rank + 1)
                   if f"lambda_{i}" not in bindings]
        if missing:
            raise UsageError(f"missing coordinates: {missing}")
        lam = [bindings[f"lambda_{i}"] for i in range(1, rs.rank + 1)]
    else:
        lam = list(rs.half_sum())
    e_rep = e_function(rs, lam)
    c_rep = c_function(rs, lam)
    report = {
        "rootSystem": rs.label,
        "lambda": [str(as_fraction(v)) for v in lam],
        "e": {"zero": e_rep["zero"], "witnessRoot": e_rep["witnessRoot"],
              "zeros": e_rep["zeros"], "value": e_rep["value"]},
        "c": {"defined": c_rep["defined"], "value": c_rep["value"],
              "C": c_rep["C"], "zeros": c_rep["zeros"],
              "poles": c_rep["poles"],
              "normalization": c_rep["normalization"]},
    }
    if ell is not None:
        report["lineBundle"] = e_c_line_bundle(rs, lam, ell)
    return report, 0


def _cmd_degrees(args: argparse.Namespace) -> Tuple[dict, int]:
    row = satake_table().row(args.diagram)
    nodes = row.node_degrees(args.n, args.m)
    report = {
        "diagram": row.full_label,
        "rank": args.n,
        "param": args.m,
        "degrees": [node.degree for node in nodes],
    }
    return report, 0


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _strip_timing(doc: object) -> object:
    if isinstance(doc, dict):
        return {k: _strip_timing(v) for k, v in doc.items()
                if k != "wallTime"}
    if isinstance(doc, list):
        return [_strip_timing(v) for v in doc]
    return doc


def _canonical_json(doc: dict) -> str:
    return json.dumps(_strip_timing(doc), indent=2, sort_keys=True) + "\n"


def _summarize(report: dict, stream) -> None:
    if "checks" in report:
        checks = report["checks"]
        failed = [c for c in checks if not c["pass"]]
        verdict = "PASS" if report.get("pass") else "FAIL"
        params = report.get("parameters", {})
        rendered = " ".join(f"{k}={v}" for k, v in params.items()
                            if not isinstance(v, dict))
        print(f"{verdict} {report.get('case', '?')} {rendered} "
              f"({len(checks)} checks, {len(failed)} failed)", file=stream)
        for check in failed:
            print(f"  FAIL {check['name']}: {check['residue']}", file=stream)
        for note in report.get("notes", []):
            print(f"  note: {note}", file=stream)
    elif "entries" in report and report.get("case") == "reduce":
        nonzero = [e for e in report["entries"] if not e["zero"]]
        print(f"reduce: {len(report['entries'])} entries, "
              f"{len(nonzero)} nonzero residues "
              f"(allZero={report['allZero']})", file=stream)
        for entry in nonzero:
            print(f"  entry[{entry['row']},{entry['col']}]: "
                  f"{entry['residue']}", file=stream)
    elif "degrees" in report:
        print(f"{report['diagram']}: {report['degrees']}", file=stream)
    elif "metadata" in report:
        meta = report["metadata"]
        print(f"generator set: kind={meta['kind']} rank={meta['rank']} "
              f"blocks={meta['blocks']} variant={meta['variant']} "
              f"entries={len(report['entries'])} "
              f"central={len(report['central'])}", file=stream)
    elif "e" in report and "c" in report:
        e_part, c_part = report["e"], report["c"]
        zero = (f"zero (witness {e_part['witnessRoot']})"
                if e_part["zero"] else f"value {e_part['value']}")
        print(f"{report['rootSystem']} at lambda="
              f"({', '.join(report['lambda'])}): e {zero}", file=stream)
        if c_part["defined"]:
            print(f"  c = {c_part['value']} (C = {c_part['C']})",
                  file=stream)
        else:
            print(f"  c undefined: poles {c_part['poles']}", file=stream)
        if "lineBundle" in report:
            lb = report["lineBundle"]
            print(f"  level ell={lb['ell']}: e "
                  f"{'zero' if lb['e']['zero'] else lb['e']['value']}, "
                  f"c {lb['c']['value']}", file=stream)
    else:
        print(json.dumps(_strip_timing(report), sort_keys=True), file=stream)


# ---------------------------------------------------------------------------
# entry points
# ---------------------------------------------------------------------------

def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "ideal": _cmd_ideal,
        "reduce": _cmd_reduce,
        "verify": _cmd_verify,
        "cfun": _cmd_cfun,
        "degrees": _cmd_degrees,
    }
    try:
        report, status = handlers[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(_canonical_json(report))
    if args.json:
        sys.stdout.write(_canonical_json(report))
    else:
        _summarize(report, sys.stdout)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
