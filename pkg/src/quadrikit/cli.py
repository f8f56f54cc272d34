"""Command-line front end.

Exit codes: 0 success, 2 parse error, 3 precondition failure,
4 verification failure.  Output is human text by default, --json emits a
machine-readable summary; identical command and seed give byte-identical
output."""

import argparse
import json
import sys
from fractions import Fraction

from quadrikit.polyalg import ParseError, PolyError
from quadrikit import quadform
from quadrikit.quadform import QuadFormError, Subbundle, load_qf
from quadrikit import clifford as cl
from quadrikit import cliffmod
from quadrikit import geometry

DEFAULT_SEED = 24237

SUITES = (
    "multiplication-iso",
    "cokernel",
    "flag",
    "duality",
    "matrix-factorization",
    "all",
)


def _parse_fraction(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a rational number: {text!r}") from None


def _parse_vector(text, n):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != n:
        raise QuadFormError(f"vector needs {n} entries, got {len(parts)}")
    return [_parse_fraction(p) for p in parts]


def _parse_subbundle(text, q):
    if not text:
        return Subbundle.empty(q.base, q.n)
    vectors = [_parse_vector(chunk, q.n) for chunk in text.split(";")]
    return Subbundle(vectors, q.base)


def _emit(args, payload, text_lines):
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def cmd_degeneration(args):
    q = load_qf(args.input)
    ideal = q.degeneration_locus(args.k)
    basis = ideal.groebner()
    rendered = "(" + ", ".join(str(g) for g in basis) + ")" if basis else "(0)"
    payload = {
        "command": "degeneration",
        "input": args.input,
        "k": args.k,
        "generators": [str(g) for g in ideal.generators],
        "groebner": [str(g) for g in basis],
    }
    _emit(args, payload, [rendered])
    return 0


def cmd_reduce(args):
    q = load_qf(args.input)
    v = _parse_vector(args.v, q.n)
    if args.w:
        w = _parse_vector(args.w, q.n)
    else:
        w = quadform.hyperbolic_pair(q, v)
    split = quadform.hyperbolic_reduce(q, v, w)
    pres = quadform.reduction_presentation(split)
    payload = {
        "command": "reduce",
        "input": args.input,
        "v": [str(x) for x in v],
        "w": [str(x) for x in w],
        "transform": [[str(p) for p in row] for row in split.transform.entries],
        "reduced": str(split.reduced.q_poly()) if split.reduced.n else "0",
        "presentation": pres.to_dict(),
        "certified": split.verify(),
    }
    lines = [
        f"v = ({', '.join(str(x) for x in v)})",
        f"w = ({', '.join(str(x) for x in w)})",
        "transform T with T^t b T = hyperbolic block + reduced block:",
        str(split.transform),
        f"reduced form: {payload['reduced']}",
        str(pres),
        f"certified: {payload['certified']}",
    ]
    _emit(args, payload, lines)
    return 0


def cmd_clifford(args):
    q = load_qf(args.input)
    ctx = cl.CliffordContext(q)
    if args.table is not None:
        basis = cl.graded_basis(ctx, args.table)
        names = [str(ctx.monomial(idx, m)) for idx, m in basis]
        payload = {
            "command": "clifford",
            "table": args.table,
            "size": len(names),
            "monomials": names,
        }
        _emit(args, payload, [f"degree {args.table}: {len(names)} monomials"] + names)
        return 0
    if args.center:
        rel = cl.center_element(ctx)
        ratio, scale = rel.discriminant_comparison()
        checks = cl.center_checks(ctx, rel)
        payload = {
            "command": "clifford",
            "center": str(rel.omega),
            "alpha": str(rel.alpha),
            "beta": str(rel.beta),
            "discriminant": str(rel.discriminant()),
            "det_bilinear": str(q.det_bilinear()),
            "ratio": None if ratio is None else str(ratio),
            "square_scale": None if scale is None else str(scale),
            "checks": checks,
        }
        lines = [
            f"omega = {rel.omega}",
            f"relation: omega^2 + ({rel.alpha})*omega + ({rel.beta}) = 0",
            f"discriminant alpha^2 - 4*beta = {rel.discriminant()}",
            f"det b_q = {q.det_bilinear()}",
            f"discriminant / det = {ratio} (square scale {scale})",
            f"commutes with degree-0 monomials: {checks['commutes_degree0']}",
            f"twisted law on degree-1 monomials: {checks['twisted_degree1']}",
        ]
        _emit(args, payload, lines)
        return 0
    if args.trace:
        elem = cl.parse_element(args.trace, ctx)
        value = cl.trace(elem)
        payload = {"command": "clifford", "trace": str(value), "element": str(elem)}
        _emit(args, payload, [str(value)])
        return 0
    raise QuadFormError("choose one of --table, --center, --trace")


def cmd_ideal(args):
    q = load_qf(args.input)
    ctx = cl.CliffordContext(q)
    w = _parse_subbundle(args.w, q)
    basis = cliffmod.clifford_ideal(ctx, w, args.n, args.side, seed=args.seed)
    payload = {
        "command": "ideal",
        "n": args.n,
        "side": args.side,
        "rank": basis.rank,
        "generators": [str(g) for g in basis.generators],
        "certification": basis.certification,
    }
    lines = [f"{args.side} ideal, degree {args.n}: {basis.rank} generators"]
    lines += [f"  {g}" for g in basis.generators]
    _emit(args, payload, lines)
    return 0


def cmd_spinor(args):
    q = load_qf(args.input)
    ctx = cl.CliffordContext(q)
    w = _parse_subbundle(args.w, q)
    pres = cliffmod.spinor_phi(ctx, w, args.n, seed=args.seed)
    payload = {
        "command": "spinor",
        "n": args.n,
        "size": pres.size,
        "phi": [[str(p) for p in row] for row in pres.phi.entries],
    }
    lines = [f"phi_{args.n}: {pres.size} x {pres.size}", str(pres.phi)]
    _emit(args, payload, lines)
    return 0


def cmd_lines(args):
    q = load_qf(args.input)
    pres = geometry.lines_chart(q)
    payload = {"command": "lines", "presentation": pres.to_dict()}
    _emit(args, payload, [str(pres)])
    return 0


def cmd_node_rank(args):
    lam = _parse_fraction(args.lam)
    mu = _parse_fraction(args.mu)
    rank = geometry.node_rank(lam, mu)
    degenerate = 1 - lam * mu == 0
    text = f"rank {rank}"
    if degenerate:
        text += " (degenerate: 1 - lambda*mu = 0)"
    payload = {
        "command": "node-rank",
        "lambda": str(lam),
        "mu": str(mu),
        "rank": rank,
        "degenerate": degenerate,
    }
    _emit(args, payload, [text])
    return 0


def cmd_fiber(args):
    q = load_qf(args.input)
    assignment = {}
    if args.point:
        for chunk in args.point.split(","):
            name, _, value = chunk.partition("=")
            if not value:
                raise ParseError(f"bad point entry {chunk!r}")
            assignment[name.strip()] = _parse_fraction(value.strip())
    point = cliffmod.Specialization(assignment)
    report = geometry.fiber_report(q, point)
    payload = {"command": "fiber", "report": report}
    lines = [
        f"corank {report['corank']}: {report['classification']}",
    ]
    if report.get("witnesses"):
        lines.append(f"witnesses: {report['witnesses']}")
    _emit(args, payload, lines)
    return 0


def cmd_net(args):
    forms = [load_qf(path) for path in args.inputs]
    net = geometry.net_of_quadrics(forms)
    degree = net.discriminant_degree_report()
    payload = {
        "command": "net",
        "inputs": list(args.inputs),
        "net_form": str(net.form.q_poly()),
        "parameters": list(net.form.base.variables),
        "discriminant_degree": degree,
    }
    lines = [
        f"net over Q[{','.join(net.form.base.variables)}]: {payload['net_form']}",
        f"det(b) degree in parameters: {degree['degree']} "
        f"(homogeneous: {degree['homogeneous']}, bound {degree['bound']})",
    ]
    _emit(args, payload, lines)
    return 0


def _pick_isotropic_generator(q):
    for i in range(q.n):
        vec = [Fraction(1) if k == i else Fraction(0) for k in range(q.n)]
        if q.apply(vec).is_zero():
            return Subbundle([vec], q.base)
    return None


def _run_suites(q, suite, seed, samples, jobs):
    ctx = cl.CliffordContext(q)
    w = _pick_isotropic_generator(q)
    empty = Subbundle.empty(q.base, q.n)
    reports = []
    wanted = SUITES[:-1] if suite == "all" else (suite,)

    if "multiplication-iso" in wanted:
        target = w or empty
        for m, n in ((1, 0), (1, 1), (2, 0)):
            reports.append(
                cliffmod.verify_multiplication_iso(
                    ctx, target, m, n, samples=samples, seed=seed, jobs=jobs
                )
            )
    if "cokernel" in wanted:
        target = w or empty
        for n in (0, 1):
            reports.append(
                cliffmod.verify_cokernel_sequence(
                    ctx, target, n, samples=samples, seed=seed, jobs=jobs
                )
            )
    if "flag" in wanted:
        if w is None:
            reports.append(
                cliffmod.Report(
                    operation="flag",
                    configuration={},
                    samples=[],
                    ok=True,
                    notes=["skipped: no isotropic coordinate generator"],
                )
            )
        else:
            for n in (0, 1):
                reports.append(
                    cliffmod.verify_flag_sequence(
                        ctx, empty, w, n, samples=samples, seed=seed, jobs=jobs
                    )
                )
    if "duality" in wanted:
        target = w or empty
        for k in range(target.r + 1):
            reports.append(
                cliffmod.verify_duality(
                    ctx, target, k, samples=samples, seed=seed, jobs=jobs
                )
            )
    if "matrix-factorization" in wanted:
        if w is not None:
            reports.append(cliffmod.verify_mf_report(ctx, w, [-1, 0, 1, 2], seed=seed))
        reports.append(cliffmod.verify_mf_report(ctx, empty, [-1, 0, 1], seed=seed))
    return reports


def cmd_verify(args):
    q = load_qf(args.input)
    reports = _run_suites(q, args.suite, args.seed, args.samples, args.jobs)
    ok = all(r.ok for r in reports)
    payload = {
        "command": "verify",
        "input": args.input,
        "suite": args.suite,
        "seed": args.seed,
        "ok": ok,
        "reports": [r.to_dict() for r in reports],
    }
    lines = []
    for r in reports:
        lines.append(r.to_text())
    lines.append(f"suite {args.suite}: {'PASS' if ok else 'FAIL'}")
    _emit(args, payload, lines)
    return 0 if ok else 4


def build_parser():
    parser = argparse.ArgumentParser(
        prog="quadrikit",
        description="exact computations for quadric surface bundles",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", help="emit JSON")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--samples", type=int, default=5)
        p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("degeneration", help="degeneration locus ideal")
    p.add_argument("input")
    p.add_argument("--k", type=int, required=True, help="corank bound k >= 1")
    common(p)
    p.set_defaults(func=cmd_degeneration)

    p = sub.add_parser("reduce", help="hyperbolic reduction by a pair")
    p.add_argument("input")
    p.add_argument("--v", required=True, help="isotropic vector, comma-separated")
    p.add_argument("--w", help="partner vector; computed when omitted")
    common(p)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("clifford", help="graded basis, center, or trace")
    p.add_argument("input")
    p.add_argument("--table", type=int, help="list the degree-n basis")
    p.add_argument("--center", action="store_true")
    p.add_argument("--trace", help="element expression to trace")
    common(p)
    p.set_defaults(func=cmd_clifford)

    p = sub.add_parser("ideal", help="one-sided ideal basis")
    p.add_argument("input")
    p.add_argument("--w", default="", help="subbundle vectors 'v1;v2;...'")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--side", choices=("left", "right"), default="left")
    common(p)
    p.set_defaults(func=cmd_ideal)

    p = sub.add_parser("spinor", help="presentation matrix in degree n")
    p.add_argument("input")
    p.add_argument("--w", default="")
    p.add_argument("--n", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_spinor)

    p = sub.add_parser("lines", help="chart equations for the scheme of lines")
    p.add_argument("input")
    common(p)
    p.set_defaults(func=cmd_lines)

    p = sub.add_parser("node-rank", help="rank of the chart node equation")
    p.add_argument("lam")
    p.add_argument("mu")
    common(p)
    p.set_defaults(func=cmd_node_rank)

    p = sub.add_parser("fiber", help="fiber classification at a base point")
    p.add_argument("input")
    p.add_argument("--point", default="", help="assignments 'a=1,b=0,c=-1'")
    common(p)
    p.set_defaults(func=cmd_fiber)

    p = sub.add_parser("net", help="net of quadrics from constant forms")
    p.add_argument("inputs", nargs="+")
    common(p)
    p.set_defaults(func=cmd_net)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("input")
    p.add_argument("--suite", choices=SUITES, default="all")
    common(p)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 2
    except FileNotFoundError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 2
    except (QuadFormError, cl.CliffordError, PolyError) as e:
        print(f"precondition failed: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
