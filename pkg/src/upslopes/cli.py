"""
Command-line interface.

Subcommands ``quat``, ``act``, ``upmat``, ``spectral``, ``duality`` and
``run``.  Output is deterministic JSON (sorted keys); ``--format csv``
writes slope tables.  Exit codes: 0 pass, 1 check failure, 2 input error,
3 uncertified result under ``--strict``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import __version__
from .corpus import MATRIX_NAMES, load_fixture_matrix
from .duality import (ClassicalBlock, ResidualProjector, hodge_duality_check,
                      idempotent_limit, split_and_factor, verify_adjunction)
from .io import dumps, frac_str, load_json, matrix_from_json, matrix_to_json, parse_frac
from .padic import (Classical, CMatrix, CycloElt, DirichletCharacter, DiskPoint, PadicContext,
                    PrecisionError)
from .quatalg import delta_decomposition, elements_of_norm, unit_table
from .scenarios import (EXIT_FAIL, EXIT_INPUT, EXIT_PASS, EXIT_UNCERTIFIED, ScenarioError,
                        load_scenario, recipe_context, resolve_source, run_scenario)
from .spectral import (char_series, check_sharp_bound, check_theorem_A, hodge_polygon,
                       improved_bound_slopes, newton_polygon, progression_check)
from .upmat import UpRecipe, assemble
from .weightact import RESCALE_B, RESCALE_PI, MonoidElt, generating_matrix

RESCALES = {"none": None, "up": RESCALE_B, "B": RESCALE_B, "pi": RESCALE_PI}


class InputError(ValueError):
    pass


# -- argument helpers ------------------------------------------------------------

def parse_psi(text: str | None, p: int) -> DirichletCharacter:
    """``p,conductor_exp,tame,wild`` or a JSON file; trivial when omitted."""
    if text is None:
        return DirichletCharacter.trivial(p)
    if text.endswith(".json"):
        return DirichletCharacter.from_json(load_json(text))
    parts = [int(x) for x in text.split(",")]
    if len(parts) != 4:
        raise InputError("psi must be p,conductor_exp,tame,wild")
    return DirichletCharacter(*parts)


def parse_weight(spec, psi: DirichletCharacter):
    kind, value = spec
    if kind == "classical":
        return Classical(int(value), psi)
    if kind == "disk":
        return DiskPoint(psi, int(value))
    raise InputError("weight must be 'classical K' or 'disk W0'")


def load_matrix(ref: str, prec: int | None) -> CMatrix:
    if ref in MATRIX_NAMES:
        return load_fixture_matrix(ref, prec)
    data = load_json(ref)
    ctx = PadicContext.from_json(data["context"])
    if prec is not None:
        ctx = ctx.with_prec(prec)
    return matrix_from_json(data, ctx)


def slope_strs(slopes) -> list:
    return [frac_str(s) for s in slopes]


def emit(args, payload, rows=None):
    """Write ``payload`` as JSON, or ``rows`` as CSV when asked for."""
    if args.format == "csv":
        if rows is None:
            raise InputError("this command has no CSV form")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "index", "slope"])
        w.writerows(rows)
        sys.stdout.write(buf.getvalue())
    else:
        sys.stdout.write(dumps(payload))


# -- quat ----------------------------------------------------------------------

def cmd_quat(args):
    if args.action == "units":
        out = [{"unit": str(u), "doubled": u.to_json(), "image_mod_9": list(img)}
               for u, img in unit_table()]
    elif args.action == "norm-elements":
        if args.n is None:
            raise InputError("norm-elements needs --n")
        out = [{"element": str(q), "doubled": q.to_json()} for q in elements_of_norm(args.n)]
    else:
        out = [{"j": d.j, "delta": str(d.delta), "doubled": d.delta.to_json(),
                "image_mod_9": list(d.image_mod(9)), "delta_prime": str(d.delta_prime)}
               for d in delta_decomposition()]
    emit(args, out)
    return EXIT_PASS


# -- act -----------------------------------------------------------------------

def cmd_act(args):
    prec = args.prec or 40
    gamma = MonoidElt.parse(args.gamma, args.p, args.m)
    psi = parse_psi(args.psi, args.p)
    ctx = PadicContext(args.p, m=max(args.m, psi.conductor_exp), prec=prec)
    kappa = parse_weight(args.weight, psi)
    mat = generating_matrix(gamma, kappa, args.N, ctx, RESCALES[args.rescale])
    emit(args, mat.to_json())
    return EXIT_PASS


# -- upmat ---------------------------------------------------------------------

def _recipe_and_context(args):
    recipe = resolve_source(args.recipe, args.prec or 40)
    if not isinstance(recipe, UpRecipe):
        raise InputError("%s is not a recipe" % args.recipe)
    return recipe, recipe_context(recipe, args.prec or 40)


def cmd_upmat(args):
    recipe, ctx = _recipe_and_context(args)
    psi = parse_psi(args.psi, recipe.p) if args.psi else (
        recipe.psi or DirichletCharacter.trivial(recipe.p))
    kappa = parse_weight(args.weight, psi) if args.weight else DiskPoint(psi, 0)
    T = assemble(recipe, kappa, args.N, ctx, RESCALES[args.rescale])
    out = T.to_json()
    if args.slopes:
        np_ = newton_polygon(T.char_series())
        out["slopes"] = slope_strs(np_.certified_slopes())
    emit(args, out)
    return EXIT_PASS


# -- spectral ------------------------------------------------------------------

def _parse_alphas(text: str) -> list:
    return [[parse_frac(x) for x in part.split(",")] for part in text.split(";")]


def cmd_spectral(args):
    M = load_matrix(args.matrix, args.prec)
    action = args.action
    code = EXIT_PASS
    if action == "charpoly":
        cs = char_series(M)
        emit(args, cs.to_json())
        return code
    if action == "newton":
        np_ = newton_polygon(char_series(M))
        out = np_.to_json()
        out["slopes"] = slope_strs(np_.slopes())
        out["certified_length"] = np_.certified_length()
        emit(args, out, [("newton", i, s) for i, s in enumerate(out["slopes"])])
        if np_.certified_length() < np_.length and args.strict:
            code = EXIT_UNCERTIFIED
        return code
    if action == "hodge":
        hp = hodge_polygon(M)
        out = hp.to_json()
        out["slopes"] = slope_strs(hp.slopes())
        emit(args, out, [("hodge", i, s) for i, s in enumerate(out["slopes"])])
        return code
    if action == "verify-A":
        ok = check_theorem_A(char_series(M), args.t)
        emit(args, {"check": "theorem-A", "t": args.t, "passed": ok})
        return EXIT_PASS if ok else EXIT_FAIL
    if action == "verify-sharp":
        if args.alphas is None:
            raise InputError("verify-sharp needs --alphas")
        improved = improved_bound_slopes(_parse_alphas(args.alphas), args.t, M.nrows)
        rep = check_sharp_bound(char_series(M), improved, args.t, args.kmax)
        emit(args, rep.to_json())
        if not rep.passed:
            return EXIT_FAIL
        return EXIT_UNCERTIFIED if rep.uncertified and args.strict else EXIT_PASS
    # progression
    H = load_matrix(args.hodge_matrix, args.prec) if args.hodge_matrix else M
    rep = progression_check(newton_polygon(char_series(M)), hodge_polygon(H))
    emit(args, rep.to_json())
    return code


# -- duality -------------------------------------------------------------------

def cmd_duality(args):
    M = load_matrix(args.matrix, args.prec)
    if args.action == "verify-pairing":
        partner = load_matrix(args.partner, args.prec) if args.partner else M.conj()
        central = load_matrix(args.central, args.prec) if args.central else None
        B = ClassicalBlock(M, args.matrix, partner, central)
        adj = verify_adjunction(B)
        dual = hodge_duality_check(B) if adj else False
        emit(args, {"adjunction": adj, "hodge_duality": dual,
                    "alphas": slope_strs(B.alphas()),
                    "partner_alphas": slope_strs(hodge_polygon(partner).slopes())})
        return EXIT_PASS if adj and dual else EXIT_FAIL
    if not args.hecke or not args.eigen:
        raise InputError("project needs --hecke and --eigen")
    ctx = M.ctx
    heckes = [load_matrix(h, args.prec) for h in args.hecke.split(",")]
    spec = load_json(args.eigen)
    projs, labels = [], []
    for item in spec["projectors"]:
        data = [(heckes[int(c["hecke"])], CycloElt.parse(ctx, str(c["a"])),
                 [CycloElt.parse(ctx, str(x)) for x in c["others"]])
                for c in item["conditions"]]
        P = ResidualProjector.from_hecke(ctx, data, item.get("label", ""))
        projs.append(idempotent_limit(P))
        labels.append(P.label)
    sp = split_and_factor(M, projs)
    emit(args, {"labels": labels, "ranks": sp.ranks, "product_ok": sp.product_ok,
                "slopes": [slope_strs(s) for s in sp.slopes()],
                "projectors": [matrix_to_json(Q) for Q in projs]},
         [(labels[k], i, frac_str(s)) for k, sl in enumerate(sp.slopes())
          for i, s in enumerate(sl)])
    return EXIT_PASS if sp.product_ok else EXIT_FAIL


# -- run -----------------------------------------------------------------------

def cmd_run(args):
    s = load_scenario(args.scenario)
    if args.prec is not None:
        s.prec = args.prec
    if args.seed is not None:
        s.seed = args.seed
    rep = run_scenario(s, jobs=args.jobs)
    emit(args, rep.to_json(args.timings), rep.slope_rows())
    return rep.exit_code(args.strict)


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prec", type=int, default=None, help="absolute precision exponent")
    common.add_argument("--seed", type=int, default=None, help="seed for synthetic data")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for checks")
    common.add_argument("--strict", action="store_true",
                        help="exit 3 when a result is not certified")

    ap = argparse.ArgumentParser(prog="upslopes", parents=[common],
                                 description="U_p slopes by exact p-adic linear algebra")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    q = sub.add_parser("quat", parents=[common], help="Hurwitz order tables")
    q.add_argument("action", choices=("units", "norm-elements", "deltas"))
    q.add_argument("--n", type=int)
    q.set_defaults(func=cmd_quat)

    a = sub.add_parser("act", parents=[common], help="weight action matrix of one element")
    a.add_argument("--gamma", required=True, help="a,b,c,d")
    a.add_argument("--p", type=int, default=3)
    a.add_argument("--m", type=int, default=1)
    a.add_argument("--weight", nargs=2, default=("disk", "0"), metavar=("KIND", "VALUE"))
    a.add_argument("--psi", help="p,conductor_exp,tame,wild or a JSON file")
    a.add_argument("--N", type=int, default=6)
    a.add_argument("--rescale", choices=sorted(RESCALES), default="none")
    a.set_defaults(func=cmd_act)

    u = sub.add_parser("upmat", parents=[common], help="assemble a truncated operator")
    u.add_argument("action", choices=("assemble",))
    u.add_argument("--recipe", required=True, help="JSON file, example-5 or synthetic:SEED:T")
    u.add_argument("--weight", nargs=2, metavar=("KIND", "VALUE"))
    u.add_argument("--psi")
    u.add_argument("--N", type=int, default=12)
    u.add_argument("--rescale", choices=sorted(RESCALES), default="up")
    u.add_argument("--slopes", action="store_true", help="also report Newton slopes")
    u.set_defaults(func=cmd_upmat)

    s = sub.add_parser("spectral", parents=[common], help="characteristic series and polygons")
    s.add_argument("action", choices=("charpoly", "newton", "hodge", "verify-A",
                                      "verify-sharp", "progression"))
    s.add_argument("--matrix", required=True, help="JSON file, m3 or m4")
    s.add_argument("--t", type=int, default=1)
    s.add_argument("--alphas", help="per-twist Hodge slopes, e.g. '0,1/2;1/3,1'")
    s.add_argument("--kmax", type=int, default=3)
    s.add_argument("--hodge-matrix", help="matrix for the Hodge side of progression")
    s.set_defaults(func=cmd_spectral)

    d = sub.add_parser("duality", parents=[common], help="pairings and residual splittings")
    d.add_argument("action", choices=("verify-pairing", "project"))
    d.add_argument("--matrix", required=True)
    d.add_argument("--partner")
    d.add_argument("--central")
    d.add_argument("--hecke", help="comma-separated Hecke matrix files")
    d.add_argument("--eigen", help="JSON file with projector conditions")
    d.set_defaults(func=cmd_duality)

    r = sub.add_parser("run", parents=[common], help="run a built-in or file scenario")
    r.add_argument("scenario")
    r.add_argument("--timings", action="store_true", help="include wall-clock timings")
    r.set_defaults(func=cmd_run)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except PrecisionError as exc:
        print("uncertified: %s" % exc, file=sys.stderr)
        return EXIT_UNCERTIFIED if args.strict else EXIT_FAIL
    except (InputError, ScenarioError, OSError, KeyError, ValueError,
            json.JSONDecodeError) as exc:
        print("input error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
