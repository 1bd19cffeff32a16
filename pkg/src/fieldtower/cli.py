"""Batch command-line front end.

Commands parse series/operator/divisor expressions, run the kernel
checkers, and print deterministic, golden-file-stable output: the first
line is always the format version header, every listing is sorted, and
randomized modes take explicit seeds.

Exit codes: 0 success, 1 a check failed, 2 usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import random
import shlex
import sys

from .adeles import (
    c1_structure,
    check_exactness,
    local_expansion,
    meet_join_identity,
    mult_by_function_certificate,
    quotient_dim,
    Adele,
    adele_membership,
)
from .errors import KernelError, PrecisionError
from .fields import parse_field_flag, PrimeField
from .grammar import (
    ParseError,
    parse_divisor,
    parse_operator,
    parse_rational_function,
    parse_series,
    _parse_point,
    Tokens,
)
from .localfield import as_zfiltered, filtration_member
from .operators import (
    check_band,
    counterexample_apply,
    counterexample_witness,
    SeriesMap,
)
from .samples import random_presentation
from .series import INF, Series
from .spaces import (
    ChainPresentation,
    LIGHT_POLICY,
    SamplePolicy,
    check_admissible_triple,
    check_filtered_axioms,
    check_morphism,
    complete,
    double_dual_compare,
    dualize,
    sub_quotient_triple,
)

VERSION_HEADER = "fieldtower.v1"


class Session:
    """Shared command context: field, depth, precision, seeds."""

    def __init__(self, args):
        self.field = parse_field_flag(args.field)
        self.depth = args.depth
        self.prec = args.prec
        self.seed = args.seed
        self.trials = args.trials
        self.fmt = args.format
        self.window = args.window

    def rng(self):
        return random.Random(self.seed)

    def require_prime_field(self):
        if not isinstance(self.field, PrimeField):
            raise KernelError("this command needs a prime field (--field p)")
        return self.field


def _common_flags(p, top=False):
    # subcommand copies use SUPPRESS so that flags given before the
    # subcommand are not clobbered by defaults
    dflt = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
    p.add_argument("--field", default=dflt("2"), help="prime p or Q")
    p.add_argument("--depth", type=int, default=dflt(1), help="number of series levels")
    p.add_argument("--prec", type=int, default=dflt(8), help="default precision window")
    p.add_argument("--seed", type=int, default=dflt(0), help="seed for --random modes")
    p.add_argument("--trials", type=int, default=dflt(20), help="trial count for --random modes")
    p.add_argument("--window", default=dflt("-4:4"), help="index window lo:hi for checks")
    p.add_argument("--format", choices=("text", "json"), default=dflt("text"))


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fieldtower",
        description="exact kernel for iterated Laurent fields, filtered spaces, "
        "banded operators, and adeles on the projective line",
    )
    _common_flags(parser, top=True)
    sub = parser.add_subparsers(dest="group", required=True)

    p_series = sub.add_parser("series", help="series arithmetic")
    _common_flags(p_series)
    p_series.add_argument("action", choices=("eval", "add", "mul", "inv", "val", "coeff"))
    p_series.add_argument("exprs", nargs="*")
    p_series.add_argument("--at", default="", help="exponent tuple for coeff")

    p_endo = sub.add_parser("endo", help="banded operators")
    _common_flags(p_endo)
    p_endo.add_argument(
        "action",
        choices=("apply", "compose", "check-band", "embed", "counterexample", "witness"),
    )
    p_endo.add_argument("exprs", nargs="*")
    p_endo.add_argument("--j", type=int, default=0, help="target level for witness")
    p_endo.add_argument("--m", type=int, default=1, help="matrix size for embed")

    p_cn = sub.add_parser("cn", help="filtered-space checkers")
    _common_flags(p_cn)
    p_cn.add_argument(
        "action",
        choices=(
            "check-axioms",
            "check-morphism",
            "check-admissible",
            "dualize",
            "complete",
            "double-dual",
        ),
    )
    p_cn.add_argument("--space", default="series", help="series | adele | chain:FILE")
    p_cn.add_argument("--file", default="", help="presentation JSON file")
    p_cn.add_argument("--random", action="store_true")
    p_cn.add_argument("--dim", type=int, default=4)

    p_adele = sub.add_parser("adele", help="adeles on the projective line")
    _common_flags(p_adele)
    p_adele.add_argument(
        "action",
        choices=("expand", "member", "qdim", "exact", "meetjoin", "certify-mult"),
    )
    p_adele.add_argument("exprs", nargs="*")
    p_adele.add_argument("--at", default="", help="closed point for expand")

    p_demo = sub.add_parser("demo", help="worked demonstrations")
    _common_flags(p_demo)
    p_demo.add_argument("action", choices=("counterexample",))

    p_script = sub.add_parser("script", help="run commands from a file")
    _common_flags(p_script)
    p_script.add_argument("path")

    return parser


def _need(exprs, n, what):
    if len(exprs) != n:
        raise KernelError(f"expected {n} argument(s): {what}")
    return exprs


def cmd_series(session, args, out):
    F, depth = session.field, session.depth
    act = args.action
    if act == "eval":
        (txt,) = _need(args.exprs, 1, "series")
        out.append(str(parse_series(txt, F, depth)))
    elif act == "add":
        a, b = _need(args.exprs, 2, "series series")
        out.append(str(parse_series(a, F, depth).add(parse_series(b, F, depth))))
    elif act == "mul":
        a, b = _need(args.exprs, 2, "series series")
        out.append(str(parse_series(a, F, depth).mul(parse_series(b, F, depth))))
    elif act == "inv":
        (txt,) = _need(args.exprs, 1, "series")
        x = parse_series(txt, F, depth)
        length = session.prec if x.prec == INF else None
        out.append(str(x.invert(length)))
    elif act == "val":
        (txt,) = _need(args.exprs, 1, "series")
        v = parse_series(txt, F, depth).valuation()
        out.append("(" + ", ".join(str(c) for c in v) + ")")
    elif act == "coeff":
        (txt,) = _need(args.exprs, 1, "series")
        exps = tuple(int(c) for c in args.at.split(",")) if args.at else ()
        x = parse_series(txt, F, depth)
        out.append(F.fmt(x.coefficient(exps)))
    return 0


def cmd_endo(session, args, out):
    F, depth = session.field, session.depth
    act = args.action
    if act == "apply":
        op_txt, s_txt = _need(args.exprs, 2, "operator series")
        A = parse_operator(op_txt, F, depth)
        x = parse_series(s_txt, F, depth)
        out.append(str(A.apply(x, prec=session.prec)))
    elif act == "compose":
        a_txt, b_txt = _need(args.exprs, 2, "operator operator")
        from .operators import compose

        A = parse_operator(a_txt, F, depth)
        B = parse_operator(b_txt, F, depth)
        C = compose(A, B)
        lo, hi = _window(session)
        out.append("band: " + " ".join(f"{i}->{C.band.a(i)}" for i in range(lo, hi + 1)))
        x = Series.monomial(F, depth, (0,) * depth)
        out.append("on 1: " + str(C.apply(x, prec=session.prec)))
    elif act == "check-band":
        (op_txt,) = _need(args.exprs, 1, "operator")
        A = parse_operator(op_txt, F, depth)
        lo, hi = _window(session)
        rep = check_band(A, range(lo, hi + 1))
        out.extend(rep.lines())
        return 0 if rep.passed else 1
    elif act == "embed":
        (grid_txt,) = _need(args.exprs, 1, "matrix")
        A = parse_operator(f"embed({args.m}; {grid_txt})", F, depth)
        lo, hi = _window(session)
        out.append("band: " + " ".join(f"{i}->{A.band.a(i)}" for i in range(lo, hi + 1)))
        rep = check_band(A, range(lo, hi + 1))
        out.append(rep.summary())
        return 0 if rep.passed else 1
    elif act == "counterexample":
        (s_txt,) = _need(args.exprs, 1, "series")
        x = parse_series(s_txt, F, 2)
        out.append(str(counterexample_apply(x)))
    elif act == "witness":
        x, image = counterexample_witness(F, args.j)
        out.append(f"x = {x} ; phi(x) = {image} ; not in E_{args.j}")
        ok = filtration_member(x, -1) and not filtration_member(image, args.j)
        return 0 if ok else 1
    return 0


def cmd_cn(session, args, out):
    F = session.field
    act = args.action
    policy = SamplePolicy(
        index_bound=3, generators=8, max_pairs=2, gen_extent=3
    )
    rng = session.rng()
    if act == "check-axioms":
        space = _resolve_space(session, args)
        rep = check_filtered_axioms(space, policy)
        out.extend(rep.lines())
        return 0 if rep.passed else 1
    if act == "check-morphism":
        if args.space == "series":
            from .operators import scalar_mult

            K = as_zfiltered(F, session.depth)
            fails = 0
            for _ in range(session.trials):
                u = Series.monomial(
                    F, session.depth,
                    tuple(rng.randint(-2, 2) for _ in range(session.depth)),
                    F.sample_nonzero(rng),
                )
                cert = SeriesMap.from_operator(scalar_mult(u))
                if not check_morphism(cert, K, K, policy).passed:
                    fails += 1
            out.append(f"{session.trials - fails}/{session.trials} pass")
            return 0 if fails == 0 else 1
        E1 = random_presentation(F, session.depth, args.dim, rng)
        E2 = random_presentation(F, session.depth, args.dim, rng)
        from .samples import random_chain_morphism

        fails = 0
        for _ in range(session.trials):
            cert = random_chain_morphism(E1, E2, rng)
            if not check_morphism(cert, E1, E2, policy).passed:
                fails += 1
        out.append(f"{session.trials - fails}/{session.trials} pass")
        return 0 if fails == 0 else 1
    if act == "check-admissible":
        fails = 0
        done = 0
        while done < session.trials:
            P = random_presentation(F, session.depth, args.dim, rng)
            if P.steps() < 2:
                continue
            T = sub_quotient_triple(P, 1)
            if not check_admissible_triple(T, policy).passed:
                fails += 1
            done += 1
        out.append(f"{session.trials - fails}/{session.trials} pass")
        return 0 if fails == 0 else 1
    if act in ("dualize", "complete"):
        P = _load_presentation(session, args, rng)
        if act == "dualize":
            out.append(dualize(P).dumps())
        else:
            Q, iso = complete(P)
            out.append(Q.dumps())
            out.append(f"iso: identity on k^{iso.nrows}")
        return 0
    if act == "double-dual":
        if args.random:
            fails = 0
            for _ in range(session.trials):
                P = random_presentation(
                    F, min(session.depth, 3), rng.randint(1, args.dim), rng
                )
                if not double_dual_compare(P):
                    fails += 1
            out.append(f"{session.trials - fails}/{session.trials} pass")
            return 0 if fails == 0 else 1
        P = _load_presentation(session, args, rng)
        ok = double_dual_compare(P)
        out.append("pass" if ok else "FAIL")
        return 0 if ok else 1
    return 0


def _resolve_space(session, args):
    if args.space == "series":
        return as_zfiltered(session.field, session.depth)
    if args.space == "adele":
        return c1_structure(session.require_prime_field())
    if args.space.startswith("chain:"):
        with open(args.space[6:], encoding="utf-8") as fh:
            return ChainPresentation.loads(fh.read())
    raise KernelError(f"unknown space {args.space!r}")


def _load_presentation(session, args, rng):
    if args.file:
        with open(args.file, encoding="utf-8") as fh:
            return ChainPresentation.loads(fh.read())
    if args.random:
        return random_presentation(session.field, session.depth, args.dim, rng)
    raise KernelError("pass --file FILE or --random")


def cmd_adele(session, args, out):
    F = session.require_prime_field()
    act = args.action
    if act == "expand":
        (f_txt,) = _need(args.exprs, 1, "function")
        num, den = parse_rational_function(f_txt, F)
        toks = Tokens(args.at or "inf")
        P = _parse_point(toks, F)
        x = local_expansion(F, num, den, P, session.prec)
        out.append(x.to_text({1: "u"}))
    elif act == "member":
        f_txt, d_txt = _need(args.exprs, 2, "function divisor")
        num, den = parse_rational_function(f_txt, F)
        D = parse_divisor(d_txt, F)
        a = Adele.diagonal(F, num, den)
        ok = adele_membership(a, D)
        out.append("member" if ok else "not a member")
        return 0 if ok else 1
    elif act == "qdim":
        d1_txt, d2_txt = _need(args.exprs, 2, "divisor divisor")
        D1 = parse_divisor(d1_txt, F)
        D2 = parse_divisor(d2_txt, F)
        out.append(str(quotient_dim(D1, D2)))
    elif act == "exact":
        d1_txt, d2_txt = _need(args.exprs, 2, "divisor divisor")
        rep = check_exactness(parse_divisor(d1_txt, F), parse_divisor(d2_txt, F))
        out.extend(rep.lines())
        return 0 if rep.passed else 1
    elif act == "meetjoin":
        d1_txt, d2_txt = _need(args.exprs, 2, "divisor divisor")
        rep = meet_join_identity(parse_divisor(d1_txt, F), parse_divisor(d2_txt, F))
        out.extend(rep.lines())
        return 0 if rep.passed else 1
    elif act == "certify-mult":
        (f_txt,) = _need(args.exprs, 1, "function")
        num, den = parse_rational_function(f_txt, F)
        cert = mult_by_function_certificate(F, num, den)
        out.append(f"poles: {cert.poles.fmt()}")
        space = c1_structure(F)
        rep = check_morphism(cert, space, space, LIGHT_POLICY)
        out.append(rep.summary())
        return 0 if rep.passed else 1
    return 0


def cmd_demo(session, args, out):
    F = session.field
    out.append("witness table for the unbanded continuous map")
    for j in range(-3, 4):
        x, image = counterexample_witness(F, j)
        out.append(f"j={j}: x = {x} ; phi(x) = {image} ; not in E_{j}")
    return 0


def cmd_script(session, args, out):
    worst = 0
    with open(args.path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            out.append(f"> {line}")
            code, lines = run_command(shlex.split(line))
            out.extend(lines[1:])  # drop the nested header
            worst = max(worst, code)
    return worst


def run_command(argv):
    """Execute one CLI invocation; returns (exit_code, output_lines)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (2 if exc.code not in (0, None) else 0), [VERSION_HEADER]
    out = [VERSION_HEADER]
    handlers = {
        "series": cmd_series,
        "endo": cmd_endo,
        "cn": cmd_cn,
        "adele": cmd_adele,
        "demo": cmd_demo,
        "script": cmd_script,
    }
    try:
        session = Session(args)
        code = handlers[args.group](session, args, out)
    except ParseError as exc:
        out.append(f"parse error: {exc}")
        code = 2
    except (PrecisionError,) as exc:
        out.append(f"precision error: {exc}")
        code = 1
    except (KernelError, ZeroDivisionError, OSError, ValueError) as exc:
        out.append(f"error: {exc}")
        code = 2
    if getattr(args, "format", "text") == "json":
        doc = json.dumps(
            {"version": VERSION_HEADER, "ok": code == 0, "lines": out[1:]},
            indent=1,
        )
        return code, [VERSION_HEADER, doc]
    return code, out


def _window(session):
    try:
        lo, hi = session.window.split(":")
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise KernelError(f"--window wants lo:hi, got {session.window!r}") from None
    if lo > hi:
        raise KernelError(f"--window is empty: {session.window!r}")
    return lo, hi


def main(argv=None):
    code, lines = run_command(sys.argv[1:] if argv is None else argv)
    print("\n".join(lines))
    return code


if __name__ == "__main__":
    sys.exit(main())
