"""Command-line front door.

One subcommand per operation family; all configuration is by flags so runs
are reproducible, and identical invocations print byte-identical output.
Exit codes: 0 success, 1 I/O failure, 2 usage error, 3 math-domain error
(illegal move, step mismatch, suspected divergence under
--strict-convergence).
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import engine, pachner, qnormal, surfaces
from .angles import (MissingCuspRows, rotational_holonomy,
                     solve_vanishing_holonomy, strict_exists_vanishing_holonomy)
from .linalg import StrictSolution
from .series import HalfInt, TruncatedSeries
from .tri import (GluingData, MalformedSignature, ParseError, ShapeError,
                  Triangulation, decode_isosig, edge_equation_matrix,
                  encode_isosig, gluing_data_from_triangulation,
                  load_gluing_matrix, qmatching_matrix)

USAGE_ERROR = 2
MATH_ERROR = 3
IO_ERROR = 1


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _parse_order(text):
    """Orders are q-exponents; halves are written like 21/2."""
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        if den.strip() != "2":
            raise CliError("order denominators must be 2", USAGE_ERROR)
        return HalfInt(int(num))
    return HalfInt.whole(int(text))


def _parse_coeff(tok):
    if "/" in tok:
        num, den = tok.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(int(tok))


def _load_gluing(args) -> GluingData:
    if getattr(args, "gluing", None):
        try:
            with open(args.gluing) as fh:
                text = fh.read()
        except OSError as e:
            raise CliError("cannot read %s: %s" % (args.gluing, e), IO_ERROR)
        try:
            return load_gluing_matrix(text)
        except (ParseError, ShapeError) as e:
            raise CliError("bad gluing file: %s" % e, USAGE_ERROR)
    if getattr(args, "isosig", None):
        return gluing_data_from_triangulation(_decode(args.isosig))
    raise CliError("give --gluing FILE or --isosig SIG", USAGE_ERROR)


def _decode(sig) -> Triangulation:
    try:
        return decode_isosig(sig)
    except MalformedSignature as e:
        raise CliError("bad signature: %s" % e, USAGE_ERROR)


def _print_series(result, args):
    if args.format == "machine":
        print(result.to_machine_json())
    else:
        print(result)


def _emit_index_result(res, args):
    _print_series(res.series, args)
    print("verdict: %s (terms %d, shells %d)" % (res.verdict, res.terms_included,
                                                 res.shells_explored))
    if res.witness_direction is not None:
        print("witness-direction: %s" % " ".join(str(x) for x in res.witness_direction))
    if args.strict_convergence and res.verdict != engine.VERDICT_CONVERGED:
        raise CliError("index sum did not converge", MATH_ERROR)


def _limits(args):
    return engine.EnumerationLimits(initial_radius=args.initial_radius,
                                    max_radius=args.max_radius,
                                    stabilization_shells=args.stabilization_shells)


def cmd_decode(args):
    t = _decode(args.isosig)
    print("tetrahedra: %d" % t.n)
    print("cusps: %d" % t.num_cusps())
    for i, tet in enumerate(t.gluings):
        bits = ["%d:%s" % (adj, "".join(str(v) for v in p)) for adj, p in tet]
        print("tet %d: %s" % (i, "  ".join(bits)))


def cmd_encode(args):
    print(encode_isosig(_decode(args.isosig)))


def cmd_edges(args):
    t = _decode(args.isosig)
    rows = edge_equation_matrix(t)
    from .tri import edge_classes
    degs = edge_classes(t).degrees
    for i, row in enumerate(rows):
        print("edge %d (degree %d): %s" % (i, degs[i], " ".join(str(x) for x in row)))


def cmd_qmatch(args):
    g = _load_gluing(args)
    for row in qmatching_matrix(g):
        print(" ".join(str(x) for x in row))


def cmd_index(args):
    g = _load_gluing(args)
    base = qnormal.parse_quad_vector(args.cls) if args.cls else None
    try:
        res = engine.index(engine.IndexRequest(gluing=g, order=_parse_order(args.order),
                                               base_class=base, limits=_limits(args)))
    except (engine.NonIntegerBaseClass, MissingCuspRows, ValueError) as e:
        raise CliError(str(e), MATH_ERROR)
    _emit_index_result(res, args)


def cmd_index_peripheral(args):
    g = _load_gluing(args)
    coeffs = [_parse_coeff(tok) for tok in args.peripheral.split()]
    try:
        res = engine.index_peripheral(g, coeffs, _parse_order(args.order), _limits(args))
    except (engine.NonIntegerBaseClass, MissingCuspRows, ValueError) as e:
        raise CliError(str(e), MATH_ERROR)
    _emit_index_result(res, args)


def cmd_angles(args):
    g = _load_gluing(args)
    try:
        alpha = solve_vanishing_holonomy(g)
    except MissingCuspRows as e:
        raise CliError(str(e), MATH_ERROR)
    print("alpha (pi-units): %s" % " ".join(str(a) for a in alpha))
    for k in range(g.r):
        rm = rotational_holonomy(g, alpha, [1 if i == 2 * k else 0 for i in range(2 * g.r)])
        rl = rotational_holonomy(g, alpha, [1 if i == 2 * k + 1 else 0 for i in range(2 * g.r)])
        print("cusp %d holonomy: mu %s, lambda %s" % (k, rm, rl))


def cmd_strict(args):
    g = _load_gluing(args)
    try:
        res = strict_exists_vanishing_holonomy(g)
    except MissingCuspRows as e:
        raise CliError(str(e), MATH_ERROR)
    if isinstance(res, StrictSolution):
        print("strict: yes")
        print("alpha (pi-units): %s" % " ".join(str(a) for a in res.x))
    else:
        print("strict: no")
        print("witness: %s" % " ".join(str(x) for x in res.quad_vector))
        print("witness-chi: %s" % res.chi)


def cmd_efficiency(args):
    g = _load_gluing(args)
    rep = surfaces.efficiency_report(g)
    print(surfaces.render_report(rep))


def cmd_move(args):
    t = _decode(args.isosig)
    positions = tuple(int(x) for x in args.positions.split(",")) if args.positions else (0, 1)
    spec = pachner.MoveSpec(kind=args.kind, target=args.target, positions=positions)
    try:
        t2 = pachner.apply_move(t, spec)
    except pachner.IllegalMove as e:
        raise CliError("illegal move: %s" % e, MATH_ERROR)
    print(encode_isosig(t2))


def cmd_verify_path(args):
    try:
        with open(args.file) as fh:
            steps = pachner.parse_path_file(fh.read())
    except OSError as e:
        raise CliError("cannot read %s: %s" % (args.file, e), IO_ERROR)
    except ValueError as e:
        raise CliError(str(e), USAGE_ERROR)
    try:
        rep = pachner.verify_path(steps, check_efficiency=not args.no_efficiency)
    except pachner.StepMismatch as e:
        raise CliError(str(e), MATH_ERROR)
    if not args.no_efficiency:
        for s in rep.steps:
            print("%s %s %s" % (s.signature, s.move, s.verdict))
    print("OK %d steps" % rep.n_moves)


def cmd_identities(args):
    from .tetindex import tet_index_I
    order = _parse_order(args.order)
    ok = True
    for m in range(-2, 3):
        for c in range(-2, 3):
            got = _quadratic_sum(m, c, order)
            want = TruncatedSeries.one(order) if c == 0 else TruncatedSeries.zero(order)
            good = got == want
            ok = ok and good
            print("quadratic m=%d c=%d: %s" % (m, c, "ok" if good else "FAIL"))
    print("identities: %s" % ("ok" if ok else "FAIL"))
    if not ok:
        raise CliError("identity failure", MATH_ERROR)


def _quadratic_sum(m, c, order):
    from .tetindex import j_min_degree, tet_index_I
    acc = {}
    for e in range(-60, 61):
        lead = 2 * e + j_min_degree(-m, e, 0)[0].twice + j_min_degree(-m, e + c, 0)[0].twice
        if lead >= order.twice:
            continue
        prod = tet_index_I(m, e, HalfInt(order.twice - 2 * e + 20)) \
            * tet_index_I(m, e + c, HalfInt(order.twice - 2 * e + 20))
        for t, co in prod.to_machine()["terms"]:
            t2 = t + 2 * e
            if t2 < order.twice:
                acc[t2] = acc.get(t2, 0) + co
    return TruncatedSeries(acc, order)


def build_parser():
    p = argparse.ArgumentParser(prog="index3d",
                                description="Exact 3D-index q-series of ideal triangulations")
    sub = p.add_subparsers(dest="command", required=True)

    def add_gluing_opts(sp):
        sp.add_argument("--gluing", help="gluing fixture file")
        sp.add_argument("--isosig", help="isomorphism signature")

    def add_series_opts(sp):
        sp.add_argument("--order", required=True, help="q-exponent truncation, e.g. 11 or 21/2")
        sp.add_argument("--format", choices=("text", "machine"), default="text")
        sp.add_argument("--strict-convergence", action="store_true")
        sp.add_argument("--initial-radius", type=int, default=4)
        sp.add_argument("--max-radius", type=int, default=24)
        sp.add_argument("--stabilization-shells", type=int, default=2)

    sp = sub.add_parser("decode", help="decode a signature to a labelled triangulation")
    sp.add_argument("--isosig", required=True)
    sp.set_defaults(func=cmd_decode)

    sp = sub.add_parser("encode", help="canonical signature of a triangulation")
    sp.add_argument("--isosig", required=True)
    sp.set_defaults(func=cmd_encode)

    sp = sub.add_parser("edges", help="edge classes and gluing-equation rows")
    sp.add_argument("--isosig", required=True)
    sp.set_defaults(func=cmd_edges)

    sp = sub.add_parser("qmatch", help="Q-matching equation matrix B = AC")
    add_gluing_opts(sp)
    sp.set_defaults(func=cmd_qmatch)

    sp = sub.add_parser("index", help="index sum over a base class (default 0)")
    add_gluing_opts(sp)
    add_series_opts(sp)
    sp.add_argument("--class", dest="cls", help="base quad vector, e.g. '0 1 0 0 0 1 0 0 1'")
    sp.set_defaults(func=cmd_index)

    sp = sub.add_parser("index-peripheral", help="index of a peripheral class")
    add_gluing_opts(sp)
    add_series_opts(sp)
    sp.add_argument("--peripheral", required=True,
                    help="per-cusp coefficients 'p1 q1 ...', halves like 1/2 allowed")
    sp.set_defaults(func=cmd_index_peripheral)

    sp = sub.add_parser("angles", help="vanishing-holonomy angle structure")
    add_gluing_opts(sp)
    sp.set_defaults(func=cmd_angles)

    sp = sub.add_parser("strict", help="strict vanishing-holonomy structure or witness")
    add_gluing_opts(sp)
    sp.set_defaults(func=cmd_strict)

    sp = sub.add_parser("efficiency", help="1-efficiency report from cone extreme rays")
    add_gluing_opts(sp)
    sp.set_defaults(func=cmd_efficiency)

    sp = sub.add_parser("move", help="apply a Pachner move and print the new signature")
    sp.add_argument("--isosig", required=True)
    sp.add_argument("--kind", required=True, choices=("2-3", "3-2", "0-2", "2-0"))
    sp.add_argument("--target", required=True, type=int, help="face index (2-3) or edge index")
    sp.add_argument("--positions", help="0-2 only: positions around the edge, e.g. 0,1")
    sp.set_defaults(func=cmd_move)

    sp = sub.add_parser("verify-path", help="verify a Pachner path file")
    sp.add_argument("--file", required=True)
    sp.add_argument("--no-efficiency", action="store_true")
    sp.set_defaults(func=cmd_verify_path)

    sp = sub.add_parser("identities", help="run the quadratic identity suite")
    sp.add_argument("--order", default="6")
    sp.set_defaults(func=cmd_identities)

    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return USAGE_ERROR if e.code not in (0, None) else 0
    try:
        args.func(args)
    except CliError as e:
        print("error: %s" % e, file=sys.stderr)
        return e.code
    return 0


if __name__ == "__main__":
    sys.exit(main())
