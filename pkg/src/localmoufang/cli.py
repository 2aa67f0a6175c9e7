"""Command-line front end.

Every command builds a structure from its descriptor, runs an ordered list of
check suites and prints one line per check. ``--json PATH`` also writes the
report as JSON. Exit status: 0 when no check fails, 1 when a check fails,
2 on a malformed descriptor and 3 when a size cap is exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from .action import CLOSURE_CAP, CapExceeded
from .forms import QuadraticForm
from .hermitian import (FormRing, LambdaQuadraticModule, PreconditionError, build_hermitian,
                        build_orthogonal, mu_action_check)
from .jordan import (RequirementFailure, build_MV, jp_axioms, jp_basic_suite, locality,
                     make_pair, mv_suite, pair_info, roundtrip, verify_extra)
from .localring import ELEMENT_CAP, DescriptorError, NotLocalError, make_ring, ring_ops
from .moufang import (SeedError, hua_identity_suite, is_local_moufang, mu_identity_suite,
                      quasi_inverse_suite, special_suite, sum_formula_suite,
                      verify_hua_theorem)
from .projective import (RequirementError, build_MR, mu_closed_form_suite, reconstruct_ring,
                         ring_iso_check, verify_star)
from .report import SCHEMA, record, summary
from .tree import (TruncatedDVR, graph_check, kernel_checks, projection_checks, sphere,
                   to_dot, verify_sphere_iso)

EXIT_OK, EXIT_FAIL, EXIT_DESCRIPTOR, EXIT_CAP = 0, 1, 2, 3

Checks = List[dict]


class Report:
    """Ordered check records grouped by suite."""

    def __init__(self, command: str, descriptor: Dict[str, Any], seed: int):
        self.command = command
        self.descriptor = descriptor
        self.seed = seed
        self.checks: Checks = []
        self.info: Dict[str, Any] = {}
        self.error: Optional[Dict[str, Any]] = None

    def add(self, suite: str, checks: Checks) -> None:
        for c in checks:
            c = dict(c)
            if c["status"] == "fail" and c.get("witness") is None:
                c["witness"] = {"check": c["name"]}
            self.checks.append({"suite": suite, **c})

    def as_dict(self) -> Dict[str, Any]:
        out = {
            "schema": SCHEMA,
            "tool": "localmoufang",
            "version": __version__,
            "command": self.command,
            "descriptor": self.descriptor,
            "seed": self.seed,
            "info": self.info,
            "checks": self.checks,
            "summary": summary(self.checks),
        }
        if self.error is not None:
            out["error"] = self.error
        return out

    def failed(self) -> bool:
        return any(c["status"] == "fail" for c in self.checks)


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(report: Dict[str, Any]) -> str:
    return json.dumps(report, indent=2, default=_jsonable) + "\n"


def loads(text: str) -> Dict[str, Any]:
    return json.loads(text)


# structure builders -----------------------------------------------------------

def _cap(args) -> int:
    return args.cap if args.cap is not None else ELEMENT_CAP


def _ring(args):
    return make_ring(args.ring, _cap(args))


def _form_ring(args) -> Tuple[FormRing, LambdaQuadraticModule]:
    R = _ring(args)
    eps = R.parse(args.eps) if args.eps is not None else None
    FR = FormRing.from_option(R, args.lam, eps)
    mod = LambdaQuadraticModule.parse(FR, args.form or "", args.rank)
    return FR, mod


def _pair_desc(args) -> str:
    if args.pair:
        return args.pair
    if args.ring and args.form:
        return f"qform:{args.ring}:{args.form}"
    if args.ring:
        return f"ring:{args.ring}"
    raise DescriptorError("give --pair, or --ring with an optional --form")


def _orthogonal(args):
    R = _ring(args)
    if not args.form:
        raise DescriptorError("the orthogonal family needs --form")
    return build_orthogonal(R, QuadraticForm.parse(R, args.form))


def build_family(args, rep: Report):
    """Construct the local Moufang set named by ``--family`` and ``--ring``."""
    family = args.family
    if family == "projective":
        return build_MR(_ring(args))
    if family == "jordan":
        return build_MV(make_pair(_pair_desc(args), _cap(args)))
    if family == "hermitian":
        FR, mod = _form_ring(args)
        M = build_hermitian(FR, mod)
        rep.add("preconditions", M.precondition_checks)
        return M
    if family == "orthogonal":
        M = _orthogonal(args)
        rep.add("preconditions", M.precondition_checks)
        return M
    raise DescriptorError(f"unknown family {family!r}")


def _units(M, choice: Optional[str]) -> List[int]:
    if choice is None:
        return [M.least_unit()]
    if choice == "all":
        return list(M.units)
    try:
        x = M.point(choice)
    except (KeyError, ValueError):
        raise DescriptorError(f"unknown point {choice!r}")
    return [x]


def _moufang_info(M) -> Dict[str, Any]:
    return {"name": M.name, "points": M.n, "classes": len(M.space.classes),
            "units": len(M.units), "root_group_order": len(M.U)}


# commands ---------------------------------------------------------------------

def cmd_ring_info(args, rep: Report) -> None:
    R = make_ring(args.desc, _cap(args))
    rep.info = {"name": R.name, "order": R.n, "units": len(R.units), "ideal": len(R.ideal),
                "residue_characteristic": R.p, "involution": R.star_name,
                "eps": R.label(R.eps)}
    rep.add("ring", ring_ops(R, seed=args.seed))


def cmd_projective(args, rep: Report) -> None:
    M = build_MR(_ring(args))
    rep.info = _moufang_info(M)
    if args.action == "build":
        rep.add("axioms", is_local_moufang(M).checks)
        rep.add("mu closed form", mu_closed_form_suite(M))
        return
    R = M.line.R
    for e in _units(M, args.unit):
        label = M.label(e)
        if args.action == "reconstruct":
            R2, _, checks = reconstruct_ring(M, e)
            rep.add(f"reconstruct e={label}", checks)
            iso = ring_iso_check(R2, R)
            rep.add(f"reconstruct e={label}",
                    [record("ring isomorphism", "R(M(R), e) = R", iso is not None,
                            None if iso is not None else {"unit": label})])
        else:
            rep.add(f"star e={label}", verify_star(M, e))


def cmd_jordan(args, rep: Report) -> None:
    V = make_pair(_pair_desc(args), _cap(args))
    rep.info = pair_info(V)
    if args.action == "axioms":
        rep.add("axioms", jp_axioms(V))
        rep.add("locality", locality(V))
        rep.add("basic", jp_basic_suite(V))
    elif args.action == "build":
        M = build_MV(V)
        rep.info["projective_space"] = _moufang_info(M)
        rep.add("local Moufang", is_local_moufang(M).checks)
        rep.add("projective space", mv_suite(M))
    elif args.action == "roundtrip":
        rep.add("roundtrip", roundtrip(V))
    else:
        rep.add("extra condition", verify_extra(build_MV(V)))


def cmd_hermitian(args, rep: Report) -> None:
    FR, mod = _form_ring(args)
    M = build_hermitian(FR, mod)
    rep.info = _moufang_info(M)
    rep.add("preconditions", M.precondition_checks)
    if args.action == "build":
        rep.add("axioms", is_local_moufang(M).checks)
    else:
        rep.add("mu action", mu_action_check(M, seed=args.seed))


def cmd_orthogonal(args, rep: Report) -> None:
    M = _orthogonal(args)
    rep.info = _moufang_info(M)
    rep.add("preconditions", M.precondition_checks)
    rep.add("axioms", is_local_moufang(M).checks)


def cmd_tree(args, rep: Report) -> None:
    depth = args.depth if args.depth is not None else max(args.level, 1)
    if args.action == "verify-iso" and depth < args.level:
        depth = args.level
    T = TruncatedDVR(args.p, depth, args.kind)
    if args.action == "spheres":
        rep.info = {"valuation_ring": T.name, "depth": depth,
                    "sphere_sizes": [len(sphere(T, n)) for n in range(depth + 1)]}
        rep.add("reduction", T.reduction_checks())
        rep.add("tree", graph_check(T))
        rep.add("projections", projection_checks(T))
        level = min(args.level, depth)
        matrix_level = min(depth + 1, level + 1)
        rep.add(f"kernel n={level}", kernel_checks(T, level, matrix_level))
        if args.dot:
            with open(args.dot, "w") as fh:
                fh.write(to_dot(T))
    else:
        rep.info = {"valuation_ring": T.name, "level": args.level,
                    "points": len(sphere(T, args.level))}
        rep.add(f"sphere iso n={args.level}", verify_sphere_iso(T, args.level))


SUITES: Dict[str, Callable] = {
    "axioms": lambda M, a: is_local_moufang(M).checks,
    "mu": lambda M, a: mu_identity_suite(M),
    "hua": lambda M, a: hua_identity_suite(M),
    "sumform": lambda M, a: sum_formula_suite(M),
    "quasi-inverse": lambda M, a: quasi_inverse_suite(M),
    "special": lambda M, a: special_suite(M),
    "hua-theorem": lambda M, a: verify_hua_theorem(
        M, a.cap if a.cap is not None else CLOSURE_CAP, a.seed).checks,
    "reconstruct-ring": lambda M, a: reconstruct_ring(M)[2],
    "star": lambda M, a: verify_star(M),
}
DEFAULT_SUITES = ["axioms", "mu", "hua", "sumform", "quasi-inverse"]


def cmd_verify(args, rep: Report) -> None:
    M = build_family(args, rep)
    rep.info = _moufang_info(M)
    names = DEFAULT_SUITES if not args.suite else args.suite
    if names == ["all"]:
        names = list(SUITES)
    for name in names:
        if name not in SUITES:
            raise DescriptorError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    for name in names:
        rep.add(name, SUITES[name](M, args))


# argument parsing -------------------------------------------------------------

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--json", metavar="PATH", help="write the JSON report to PATH")
    p.add_argument("--cap", type=int, help="size cap for rings and group closures")
    p.add_argument("--seed", type=int, default=0, help="sampling seed")
    p.add_argument("--quiet", action="store_true", help="print only the summary line")


def _form_args(p: argparse.ArgumentParser, ring_required: bool = True) -> None:
    p.add_argument("--ring", required=ring_required, help="ring descriptor, e.g. zmod:9 or gf:9:frob")
    p.add_argument("--form", help="quadratic form q(x) or Hermitian matrix rows 'a,b;c,d'")
    p.add_argument("--lam", default="min", help="form parameter: min, max, zero or an element list")
    p.add_argument("--eps", help="the central element eps")
    p.add_argument("--rank", type=int, default=1, help="rank of W when --form is omitted")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="localmoufang",
                                     description="Build and verify local Moufang sets.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="group", required=True)

    ring = sub.add_parser("ring", help="finite local rings")
    rsub = ring.add_subparsers(dest="action", required=True)
    info = rsub.add_parser("info", help="ring invariants and axioms")
    info.add_argument("desc", help="ring descriptor")
    _common(info)
    info.set_defaults(func=cmd_ring_info)

    proj = sub.add_parser("projective", help="the projective line M(R)")
    psub = proj.add_subparsers(dest="action", required=True)
    for name in ("build", "reconstruct", "verify-star"):
        p = psub.add_parser(name)
        p.add_argument("--ring", required=True, help="ring descriptor")
        p.add_argument("--unit", help="point label of the unit e, or 'all'")
        _common(p)
        p.set_defaults(func=cmd_projective)

    jor = sub.add_parser("jordan", help="local Jordan pairs and M(V)")
    jsub = jor.add_subparsers(dest="action", required=True)
    for name in ("build", "axioms", "roundtrip", "verify-extra"):
        p = jsub.add_parser(name)
        p.add_argument("--pair", help="ring:<ring> or qform:<ring>:<q>")
        p.add_argument("--ring", help="ring descriptor (pair (R, R), or with --form)")
        p.add_argument("--form", help="quadratic form q(x)")
        _common(p)
        p.set_defaults(func=cmd_jordan)

    her = sub.add_parser("hermitian", help="Hermitian local Moufang sets")
    hsub = her.add_subparsers(dest="action", required=True)
    for name in ("build", "mu-check"):
        p = hsub.add_parser(name)
        _form_args(p)
        _common(p)
        p.set_defaults(func=cmd_hermitian)

    orth = sub.add_parser("orthogonal", help="orthogonal local Moufang sets")
    osub = orth.add_subparsers(dest="action", required=True)
    p = osub.add_parser("build")
    p.add_argument("--ring", required=True, help="ring descriptor")
    p.add_argument("--form", required=True, help="quadratic form q(x)")
    _common(p)
    p.set_defaults(func=cmd_orthogonal)

    tree = sub.add_parser("tree", help="spheres of the Bruhat-Tits tree")
    tsub = tree.add_subparsers(dest="action", required=True)
    for name in ("spheres", "verify-iso"):
        p = tsub.add_parser(name)
        p.add_argument("--p", type=int, required=True, help="residue characteristic")
        p.add_argument("--level", type=int, default=2, help="sphere level n")
        p.add_argument("--depth", type=int, help="deepest level N (default: the level)")
        p.add_argument("--kind", choices=("padic", "power"), default="padic",
                       help="Z_p or F_p[[t]]")
        if name == "spheres":
            p.add_argument("--dot", metavar="PATH", help="write the tree as Graphviz DOT")
        _common(p)
        p.set_defaults(func=cmd_tree)

    ver = sub.add_parser("verify", help="axiom and identity suites")
    vsub = ver.add_subparsers(dest="action", required=True)
    p = vsub.add_parser("moufang")
    _form_args(p, ring_required=False)
    p.add_argument("--pair", help="Jordan pair descriptor for --family jordan")
    p.add_argument("--family", default="projective",
                   choices=("projective", "jordan", "hermitian", "orthogonal"))
    p.add_argument("--suite", action="append",
                   help=f"suite to run (repeatable): {', '.join(SUITES)} or all")
    _common(p)
    p.set_defaults(func=cmd_verify)
    return parser


def _descriptor(args) -> Dict[str, Any]:
    skip = {"func", "json", "quiet", "seed", "group", "action"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


def _print(rep: Report, quiet: bool, out) -> None:
    if not quiet:
        for c in rep.checks:
            line = f"{c['status'].upper():8} {c['suite']}: {c['name']}  [{c['anchor']}]"
            if c["status"] == "fail":
                line += f"  witness={json.dumps(c['witness'], default=_jsonable)}"
            print(line, file=out)
    if rep.error is not None:
        print(f"error: {rep.error['message']}", file=out)
    s = summary(rep.checks)
    print(f"{rep.command}: {s['pass']} passed, {s['sampled']} sampled, {s['fail']} failed",
          file=out)


def run(argv: Optional[Sequence[str]] = None, out=None) -> Tuple[int, Dict[str, Any]]:
    """Run one command. Returns the exit code and the report dictionary."""
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_OK if exc.code == 0 else EXIT_DESCRIPTOR), {}
    command = f"{args.group} {args.action}"
    rep = Report(command, _descriptor(args), args.seed)
    code = EXIT_OK
    try:
        args.func(args, rep)
        code = EXIT_FAIL if rep.failed() else EXIT_OK
    except (DescriptorError, NotLocalError) as exc:
        rep.error = {"kind": "descriptor", "message": str(exc)}
        code = EXIT_DESCRIPTOR
    except CapExceeded as exc:
        rep.error = {"kind": "cap", "message": str(exc)}
        code = EXIT_CAP
    except (PreconditionError, RequirementError, RequirementFailure) as exc:
        name = getattr(exc, "condition", None) or getattr(exc, "requirement", "requirement")
        rep.add("preconditions", [c for c in getattr(exc, "checks", []) or []])
        if not rep.failed():
            rep.add("preconditions", [record(name, str(exc), False, exc.witness)])
        rep.error = {"kind": "precondition", "message": str(exc)}
        code = EXIT_FAIL
    except SeedError as exc:
        rep.add("seed", [record(exc.axiom, str(exc), False, exc.witness)])
        rep.error = {"kind": "seed", "message": str(exc)}
        code = EXIT_FAIL
    report = rep.as_dict()
    _print(rep, args.quiet, out)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(dumps(report))
    return code, report


def main(argv: Optional[Sequence[str]] = None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
