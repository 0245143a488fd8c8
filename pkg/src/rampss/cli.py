"""Command-line front end.

Exit codes: 0 strong / ok, 2 input error, 3 ramp-valid but weak,
4 not a valid ramp scheme, 5 insufficient shares, 6 not PD,
7 transform infeasible.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import analysis, fileio, transform
from .access import AccessStructure, BadParameters, InvalidStructure, format_set, mask_of, threshold_structure
from .analysis import classify, decryptable_subspace, format_leak, report_dict, report_text
from .fileio import FormatError
from .gf import FieldMatrix
from .schemes import Insufficient, LinearScheme, builtin_fixture, encode, pd_concat, reconstruct, shamir_ramp

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_WEAK = 3
EXIT_INVALID = 4
EXIT_INSUFFICIENT = 5
EXIT_NOT_PD = 6
EXIT_INFEASIBLE = 7

T_EX = [[1, 1], [1, -1]]


class CliError(Exception):
    def __init__(self, msg: str, code: int = EXIT_INPUT):
        super().__init__(msg)
        self.code = code


def verdict_code(report: analysis.ClassificationReport) -> int:
    if not report.ramp_valid:
        return EXIT_INVALID
    return EXIT_OK if report.strong else EXIT_WEAK


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError:
        raise CliError(f"expected comma-separated integers, got {text!r}") from None


def _load_scheme(path) -> LinearScheme:
    return fileio.scheme_from_dict(fileio.load_json(path))


def _load_structure(path) -> AccessStructure:
    return fileio.structure_from_dict(fileio.load_json(path))


def _rates(scheme: LinearScheme) -> str:
    return ", ".join(f"{scheme.names[i]}={r}" for i, r in enumerate(analysis.coding_rates(scheme)))


def _write(prefix: str, scheme: LinearScheme | None = None, structure: AccessStructure | None = None,
           T: FieldMatrix | None = None) -> None:
    base = Path(prefix)
    if base.parent != Path("."):
        base.parent.mkdir(parents=True, exist_ok=True)
    for suffix, obj in (("scheme", scheme and fileio.scheme_to_dict(scheme)),
                        ("structure", structure and fileio.structure_to_dict(structure)),
                        ("T", T and fileio.matrix_to_dict(T))):
        if obj is not None:
            path = f"{base}.{suffix}.json"
            fileio.dump_json(obj, path)
            print(f"wrote {path}")


def share_expressions(scheme: LinearScheme, secret: str = "S") -> list[str]:
    """One ``V = {...}`` line per participant, in the style of hand-written schemes."""
    p, L = scheme.p, scheme.L

    def term(c, name):
        if c == 1:
            return f"+{name}"
        if c == p - 1:
            return f"-{name}"
        return f"+{c}{name}"

    lines = []
    for i in range(scheme.n):
        exprs = []
        for col in scheme.symbols_of(i):
            column = scheme.G.column(col)
            names = [f"{secret}{j + 1}" for j in range(L)] + [f"R{j + 1}" for j in range(scheme.m)]
            s = "".join(term(c, nm) for c, nm in zip(column, names) if c).lstrip("+")
            exprs.append(s or "0")
        lines.append(f"{scheme.names[i]} = {{{', '.join(exprs)}}}")
    return lines


# -- commands ---------------------------------------------------------------

def cmd_build(args) -> int:
    scheme = structure = None
    if args.kind == "threshold":
        _need(args, "k", "L", "n")
        structure = threshold_structure(args.k, args.L, args.n)
    elif args.kind == "shamir":
        _need(args, "k", "L", "n", "p")
        pts = _ints(args.points) if args.points else None
        scheme = shamir_ramp(args.k, args.L, args.n, args.p, pts)
        structure = threshold_structure(args.k, args.L, args.n)
    elif args.kind == "pd":
        _need(args, "structure", "p")
        structure = _load_structure(args.structure)
        scheme = pd_concat(structure, args.p)
        structure = None
    else:
        _need(args, "name")
        scheme, structure = builtin_fixture(args.name, args.p)
    default = args.name if args.kind == "fixture" else args.kind
    _write(args.out or default, scheme, structure)
    if scheme is not None:
        print(f"coding rates: {_rates(scheme)}")
    return EXIT_OK


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise CliError(f"build {args.kind} needs " + ", ".join(f"--{n}" for n in missing))


def cmd_encode(args) -> int:
    scheme = _load_scheme(args.scheme)
    secrets = _ints(args.secrets)
    if args.randoms is not None:
        randoms = _ints(args.randoms)
    else:
        if args.seed is None:
            raise CliError("--seed is required when --randoms is not given")
        rng = random.Random(args.seed)
        randoms = [rng.randrange(scheme.p) for _ in range(scheme.m)]
    bundle = encode(scheme, secrets, randoms)
    doc = fileio.bundle_to_dict(bundle, scheme)
    if args.out:
        fileio.dump_json(doc, args.out)
        print(f"wrote {args.out}")
    else:
        print(json.dumps(doc, indent=2))
    return EXIT_OK


def cmd_decode(args) -> int:
    scheme = _load_scheme(args.scheme)
    bundle = fileio.bundle_from_dict(fileio.load_json(args.bundle))
    if args.participants:
        bundle = bundle.subset(mask_of(i - 1 for i in _ints(args.participants)))
    if any(not 0 <= i < scheme.n for i in bundle.participants):
        raise CliError("bundle names a participant the scheme does not have")
    who = format_set(bundle.mask, scheme.names)
    try:
        secrets = reconstruct(scheme, bundle)
    except Insufficient as e:
        print(f"{who} cannot decrypt the secret")
        if not e.recoverable:
            print("recoverable subspace: {0}")
        for c, value in e.recoverable:
            support = [j for j, x in enumerate(c) if x]
            if len(support) == 1 and c[support[0]] == 1:
                print(f"S{support[0] + 1} recoverable: S{support[0] + 1} = {value}")
            else:
                lhs = " + ".join(f"{x}*S{j + 1}" for j, x in enumerate(c) if x)
                print(f"recoverable: {lhs} = {value}")
        return EXIT_INSUFFICIENT
    for j, s in enumerate(secrets):
        print(f"S{j + 1} = {s}")
    return EXIT_OK


def cmd_classify(args) -> int:
    scheme = _load_scheme(args.scheme)
    structure = _load_structure(args.structure)
    report = classify(scheme, structure)
    if args.json:
        print(json.dumps(report_dict(report), indent=2))
    else:
        print(report_text(scheme, report))
    return verdict_code(report)


def _load_T(path, p: int) -> FieldMatrix:
    return fileio.matrix_from_dict(fileio.load_json(path), p)


def cmd_strengthen(args) -> int:
    scheme = _load_scheme(args.scheme)
    structure = _load_structure(args.structure)
    T = _load_T(args.T, scheme.p) if args.T else None
    strong, T, report = transform.strengthen(scheme, structure, T, strict=args.strict_pd_witnesses)
    print("\n".join(share_expressions(strong, "S'")))
    print(f"T =\n{T}")
    print(f"verified strong over GF({report.p}); coding rates: {_rates(strong)}")
    _write(args.out or "strong", strong, None, T)
    return EXIT_OK


# -- demos ------------------------------------------------------------------

def demo_remark1(out=None) -> int:
    out = out or sys.stdout
    scheme, structure = builtin_fixture("remark1")
    report = classify(scheme, structure)
    print("(4,2,15) ramp scheme f(x) = S1 + S2 x + R1 x^2 + R2 x^3 over GF(17), V_i = f(i)", file=out)
    print(f"ramp_valid={report.ramp_valid} pd={report.pd} strong={report.strong}", file=out)
    A = mask_of([2, 5, 14])
    for leak in decryptable_subspace(scheme, A):
        print(f"{format_set(A)}: {format_leak(scheme, leak)}", file=out)
        print(f"{format_set(A)}: {format_leak(scheme, leak, 'unit_last')}", file=out)
        print(f"identity verified against G: {analysis.verify_leak(scheme, leak)}", file=out)
    B = mask_of([0, 1, 2])
    for j in range(2):
        print(f"H(S{j + 1} | {format_set(B)}) = {analysis.cond_entropy(scheme, [j], B)}", file=out)
    print(f"coding rates: {', '.join(sorted({str(r) for r in report.coding_rates}))} for every share", file=out)
    return verdict_code(report)


def _realized_summary(scheme, out):
    realized = analysis.realized_structure(scheme)
    print("realized structure (level = L - H(S|A)):", file=out)
    for l in range(1, realized.L + 1):
        mins = [format_set(m) for m in realized.cumulative_minimal[l - 1]]
        print(f"  A~_{l} minimal: {' '.join(mins)}", file=out)
    r = classify(scheme, realized)
    print(f"  against it: ramp_valid={r.ramp_valid} pd={r.pd} strong={r.strong}", file=out)
    return realized


def demo_example1(out=None) -> int:
    out = out or sys.stdout
    scheme, structure = builtin_fixture("example1")
    print("\n".join(share_expressions(scheme)), file=out)
    report = classify(scheme, structure)
    print(f"printed structure: ramp_valid={report.ramp_valid} pd={report.pd} strong={report.strong}", file=out)
    for m, level, h in report.ramp_violations:
        print(f"  {format_set(m)} is at level {level} but H(S|A) = {h}", file=out)
    A = mask_of([0, 3])
    print(f"H(S | {format_set(A)}) = {analysis.cond_entropy(scheme, [0, 1], A)}", file=out)
    for leak in decryptable_subspace(scheme, A):
        print(f"{format_set(A)} decrypts: {format_leak(scheme, leak)}", file=out)
    _realized_summary(scheme, out)
    return verdict_code(report)


def demo_example2(out=None) -> int:
    out = out or sys.stdout
    scheme, structure = builtin_fixture("example1")
    T = FieldMatrix.from_rows(T_EX, scheme.p)
    strong = transform.apply_T(scheme, T)
    print(f"T = [[1,1],[1,-1]] over GF({scheme.p})", file=out)
    print("\n".join(share_expressions(strong, "S'")), file=out)
    report = classify(strong, structure)
    print(f"printed structure: ramp_valid={report.ramp_valid} pd={report.pd} strong={report.strong}", file=out)
    realized = analysis.realized_structure(scheme)
    bad = transform.eq22_check(T, scheme, realized)
    print(f"rank condition on T^-1 against the realized structure: {'ok' if bad is None else bad.describe()}", file=out)
    r = classify(strong, realized)
    print(f"transformed scheme against the realized structure: strong={r.strong}", file=out)
    try:
        transform.strengthen(builtin_fixture("example1", 2)[0], realized,
                             FieldMatrix.from_rows(T_EX, 2))
    except transform.TransformError as e:
        print(f"over GF(2): {type(e).__name__}: {e}", file=out)
    return verdict_code(report)


def demo_remark3(out=None) -> int:
    out = out or sys.stdout
    scheme, structure = builtin_fixture("remark3")
    print("\n".join(share_expressions(scheme)), file=out)
    report = classify(scheme, structure)
    print(f"ramp_valid={report.ramp_valid} pd={report.pd} strong={report.strong}", file=out)
    T = FieldMatrix.from_rows(T_EX, scheme.p)
    try:
        transform.strengthen(scheme, structure, T)
    except transform.NotPD as e:
        print(f"strengthen refused: {e}", file=out)
    forced = transform.apply_T(scheme, T)
    print("forced T = [[1,1],[1,-1]]:", file=out)
    print("\n".join(share_expressions(forced, "S'")), file=out)
    r = classify(forced, structure)
    print(f"strong={r.strong}", file=out)
    for m, J in r.strong_violations:
        learned = "".join(f"S'{j + 1}" for j in J)
        print(f"  {format_set(m)} learns {learned}", file=out)
    return verdict_code(report)


DEMOS = {"remark1": demo_remark1, "example1": demo_example1, "example2": demo_example2, "remark3": demo_remark3}


def cmd_demo(args) -> int:
    return DEMOS[args.name]()


# -- entry point ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rampss", description="Ramp secret sharing toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="construct a scheme and/or structure")
    b.add_argument("kind", choices=["threshold", "pd", "shamir", "fixture"])
    b.add_argument("--k", type=int)
    b.add_argument("--L", type=int)
    b.add_argument("--n", type=int)
    b.add_argument("--p", type=int)
    b.add_argument("--points", help="comma-separated evaluation points (shamir)")
    b.add_argument("--structure", help="structure file (pd)")
    b.add_argument("--name", choices=["example1", "remark3", "remark1"])
    b.add_argument("--out", help="output path prefix")
    b.set_defaults(func=cmd_build)

    e = sub.add_parser("encode", help="compute shares")
    e.add_argument("--scheme", required=True)
    e.add_argument("--secrets", required=True)
    e.add_argument("--randoms")
    e.add_argument("--seed", type=int)
    e.add_argument("--out")
    e.set_defaults(func=cmd_encode)

    d = sub.add_parser("decode", help="reconstruct from a share bundle")
    d.add_argument("--scheme", required=True)
    d.add_argument("--bundle", required=True)
    d.add_argument("--participants", help="1-based indices to keep from the bundle")
    d.set_defaults(func=cmd_decode)

    c = sub.add_parser("classify", help="ramp / PD / strong verdicts")
    c.add_argument("--scheme", required=True)
    c.add_argument("--structure", required=True)
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_classify)

    s = sub.add_parser("strengthen", help="transform a PD scheme into a strong one")
    s.add_argument("--scheme", required=True)
    s.add_argument("--structure", required=True)
    s.add_argument("--T", help="matrix file; a bare JSON integer matrix is reduced mod p")
    s.add_argument("--out", help="output path prefix")
    s.add_argument("--strict-pd-witnesses", action="store_true")
    s.set_defaults(func=cmd_strengthen)

    m = sub.add_parser("demo", help="reproduce a worked example")
    m.add_argument("name", choices=sorted(DEMOS))
    m.set_defaults(func=cmd_demo)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except transform.NotPD as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NOT_PD
    except (transform.FieldTooSmall, transform.ConditionFailed) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (FormatError, BadParameters, InvalidStructure, analysis.DimensionMismatch, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
