"""
Scenarios: named lists of checks on fixture matrices and recipes, run into
a deterministic report.

A scenario file looks like::

    {"name": "m3-only", "prec": 40,
     "checks": [{"kind": "newton", "source": "m3",
                 "expect": ["1/6", "1/2", "5/6"]}]}

Sources are ``m3``, ``m4``, ``example-5``, ``identity``,
``synthetic:SEED:T`` or a path to a matrix or recipe JSON file.

Each check ends in one of the statuses ``pass``, ``fail``, ``report-only``
(nothing to compare against) or ``uncertified`` (the working precision did
not pin the answer down).
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .corpus import MATRIX_NAMES, load_fixture_matrix
from .duality import ClassicalBlock, hodge_duality_check, verify_adjunction
from .io import frac_str, load_json, matrix_from_json, parse_frac
from .padic import CMatrix, DirichletCharacter, DiskPoint, PrecisionError
from .spectral import (char_series, check_sharp_bound, check_theorem_A, hodge_polygon,
                       improved_bound_slopes, newton_polygon, progression_check)
from .upmat import (UpRecipe, alpha_lists, assemble, example53_context, example53_recipe,
                    identity_recipe, synthetic_context, synthetic_recipe,
                    truncation_stability)

STATUSES = ("pass", "fail", "report-only", "uncertified")

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_UNCERTIFIED = 0, 1, 2, 3


class ScenarioError(ValueError):
    """An unresolvable source or malformed scenario."""


# -- sources --------------------------------------------------------------------

def resolve_source(source: str, prec: int):
    """Return a :class:`CMatrix` or an :class:`UpRecipe` for ``source``."""
    if source in MATRIX_NAMES:
        return load_fixture_matrix(source, prec)
    if source == "example-5":
        return example53_recipe()
    if source == "identity":
        return identity_recipe()
    if source.startswith("synthetic:"):
        try:
            _, seed, t = source.split(":")
            return synthetic_recipe(int(seed), int(t))
        except ValueError as exc:
            raise ScenarioError("bad synthetic source %r: %s" % (source, exc)) from None
    path = Path(source)
    if not path.is_file():
        raise ScenarioError("unresolved source %r" % source)
    data = load_json(path)
    if "rows" in data:
        return matrix_from_json(data)
    if "entries" in data:
        return UpRecipe.from_json(data)
    raise ScenarioError("%s is neither a matrix nor a recipe" % source)


def recipe_context(recipe: UpRecipe, prec: int):
    if recipe.name == "example-5":
        return example53_context(prec)
    return synthetic_context(recipe, prec)


def recipe_weight(recipe: UpRecipe, w0):
    psi = recipe.psi if recipe.psi is not None else DirichletCharacter.trivial(recipe.p)
    return DiskPoint(psi, w0)


def seeded_w0(seed: int, p: int = 3) -> int:
    """``p`` times a seeded unit."""
    rng = np.random.default_rng(seed)
    u = int(rng.integers(1, p ** 8))
    while u % p == 0:
        u += 1
    return p * u


def _w0(spec: dict, seed: int, p: int) -> int:
    w0 = spec.get("w0", 0)
    return seeded_w0(seed, p) if w0 == "seeded" else int(w0)


def source_matrix(spec: dict, prec: int, seed: int) -> tuple:
    """The matrix a check runs on, with a description of how it was built."""
    src = resolve_source(spec["source"], prec)
    if isinstance(src, CMatrix):
        return src, {"source": spec["source"]}
    ctx = recipe_context(src, prec)
    w0 = _w0(spec, seed, src.p)
    N = int(spec.get("N", 12))
    T = assemble(src, recipe_weight(src, w0), N, ctx)
    return T.matrix, {"source": spec["source"], "N": N, "w0": w0}


# -- checks -------------------------------------------------------------------------

@dataclass
class CheckResult:
    name: str
    status: str
    data: dict = field(default_factory=dict)
    seconds: float | None = None

    def to_json(self, timings: bool = False) -> dict:
        out = {"name": self.name, "status": self.status, "data": self.data}
        if timings and self.seconds is not None:
            out["seconds"] = round(self.seconds, 3)
        return out


CHECKS = {}


def register(kind):
    def deco(fn):
        CHECKS[kind] = fn
        return fn
    return deco


def _compare(found, expect) -> str:
    if expect is None:
        return "report-only"
    return "pass" if found == [parse_frac(x) for x in expect] else "fail"


@register("newton")
def _newton(spec, prec, seed):
    M, info = source_matrix(spec, prec, seed)
    np_ = newton_polygon(char_series(M))
    count = int(spec.get("count", np_.length))
    slopes = np_.slopes()[:count]
    info["slopes"] = [frac_str(s) for s in slopes]
    info["polygon"] = np_.to_json()
    if np_.certified_length() < count:
        return "uncertified", info
    return _compare(slopes, spec.get("expect")), info


@register("hodge")
def _hodge(spec, prec, seed):
    M, info = source_matrix(spec, prec, seed)
    slopes = hodge_polygon(M).slopes()
    info["slopes"] = [frac_str(s) for s in slopes]
    return _compare(slopes, spec.get("expect")), info


@register("pairing")
def _pairing(spec, prec, seed):
    M, info = source_matrix(spec, prec, seed)
    B = ClassicalBlock.self_conjugate(M, spec["source"])
    adj = verify_adjunction(B)
    dual = hodge_duality_check(B)
    info.update(adjunction=adj, hodge_duality=dual)
    return ("pass" if adj and dual else "fail"), info


@register("theorem-A")
def _theorem_a(spec, prec, seed):
    M, info = source_matrix(spec, prec, seed)
    src = resolve_source(spec["source"], prec)
    t = int(spec.get("t", src.t if isinstance(src, UpRecipe) else 1))
    info["t"] = t
    return ("pass" if check_theorem_A(char_series(M), t) else "fail"), info


@register("sharp-bound")
def _sharp(spec, prec, seed):
    recipe = resolve_source(spec["source"], prec)
    if not isinstance(recipe, UpRecipe):
        raise ScenarioError("sharp-bound needs a recipe source")
    ctx = recipe_context(recipe, prec)
    N = int(spec.get("N", 5))
    kmax = int(spec.get("kmax", 3))
    T = assemble(recipe, recipe_weight(recipe, _w0(spec, seed, recipe.p)), N, ctx)
    alphas = alpha_lists(recipe, ctx)
    improved = improved_bound_slopes(alphas, recipe.t, recipe.t * N)
    rep = check_sharp_bound(T.char_series(), improved, recipe.t, kmax)
    info = {"source": spec["source"], "N": N, "alphas": [[frac_str(a) for a in r] for r in alphas]}
    info.update(rep.to_json())
    if not rep.passed:
        return "fail", info
    return ("uncertified" if rep.uncertified else "pass"), info


@register("progression")
def _progression(spec, prec, seed):
    M, info = source_matrix(spec, prec, seed)
    rep = progression_check(newton_polygon(char_series(M)), hodge_polygon(M))
    info.update(rep.to_json())
    expect = spec.get("expect_s0")
    if expect is None:
        return "report-only", info
    return ("pass" if rep.s0 == int(expect) else "fail"), info


@register("stability")
def _stability(spec, prec, seed):
    recipe = resolve_source(spec["source"], prec)
    if not isinstance(recipe, UpRecipe):
        raise ScenarioError("stability needs a recipe source")
    ctx = recipe_context(recipe, prec)
    kappa = recipe_weight(recipe, _w0(spec, seed, recipe.p))
    n = int(spec.get("count", 6))
    N = spec.get("N")
    try:
        rep = truncation_stability(recipe, kappa, n, ctx, None if N is None else int(N))
    except PrecisionError as exc:
        return "uncertified", {"source": spec["source"], "error": str(exc)}
    info = {"source": spec["source"]}
    info.update(rep.to_json())
    return ("pass" if rep.stable else "fail"), info


def _run_check(args) -> CheckResult:
    spec, prec, seed = args
    name = spec.get("name", spec["kind"])
    start = time.perf_counter()
    try:
        status, data = CHECKS[spec["kind"]](spec, prec, seed)
    except PrecisionError as exc:
        status, data = "uncertified", {"error": str(exc)}
    return CheckResult(name, status, data, time.perf_counter() - start)


# -- scenarios and reports -------------------------------------------------------------

@dataclass
class Scenario:
    name: str
    checks: list = field(default_factory=list)
    prec: int = 40
    seed: int = 0
    description: str = ""

    def validate(self):
        names = set()
        for spec in self.checks:
            kind = spec.get("kind")
            if kind not in CHECKS:
                raise ScenarioError("unknown check kind %r" % kind)
            if "source" not in spec:
                raise ScenarioError("check %r has no source" % kind)
            name = spec.get("name", kind)
            if name in names:
                raise ScenarioError("duplicate check name %r" % name)
            names.add(name)
            src = spec["source"]
            if (src not in MATRIX_NAMES and src not in ("example-5", "identity")
                    and not src.startswith("synthetic:") and not Path(src).is_file()):
                raise ScenarioError("unresolved source %r" % src)

    def to_json(self) -> dict:
        return {"name": self.name, "prec": self.prec, "seed": self.seed,
                "description": self.description, "checks": self.checks}

    @classmethod
    def from_json(cls, data: dict) -> "Scenario":
        if "name" not in data:
            raise ScenarioError("scenario without a name")
        return cls(data["name"], list(data.get("checks", [])), int(data.get("prec", 40)),
                   int(data.get("seed", 0)), data.get("description", ""))


@dataclass
class Report:
    scenario: str
    results: list

    @property
    def status(self) -> str:
        states = {r.status for r in self.results}
        if "fail" in states:
            return "fail"
        if "uncertified" in states:
            return "uncertified"
        return "pass"

    def exit_code(self, strict: bool = False) -> int:
        if self.status == "fail":
            return EXIT_FAIL
        if strict and self.status == "uncertified":
            return EXIT_UNCERTIFIED
        return EXIT_PASS

    def to_json(self, timings: bool = False) -> dict:
        return {"scenario": self.scenario, "status": self.status,
                "checks": [r.to_json(timings) for r in self.results]}

    def slope_rows(self) -> list:
        """``(check, index, slope)`` rows for CSV export."""
        rows = []
        for r in self.results:
            for i, s in enumerate(r.data.get("slopes", [])):
                rows.append((r.name, i, s))
        return rows


def run_scenario(s: Scenario, jobs: int = 1) -> Report:
    """
    Run every check of ``s``; with ``jobs > 1`` checks run in worker
    processes.  Results keep the order of the scenario.

    >>> run_scenario(Scenario("empty")).to_json()
    {'scenario': 'empty', 'status': 'pass', 'checks': []}
    """
    s.validate()
    args = [(spec, s.prec, s.seed) for spec in s.checks]
    if jobs > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_check, args))
    else:
        results = [_run_check(a) for a in args]
    return Report(s.name, results)


# -- built-in scenarios -----------------------------------------------------------------

SIX_SLOPES = ["1/2", "3/2", "5/2", "7/2", "9/2", "11/2"]


def builtin_scenarios() -> dict:
    ex5 = [{"kind": "newton", "name": "slopes-w0-%s" % w, "source": "example-5",
            "N": 12, "w0": w, "count": 6, "expect": SIX_SLOPES}
           for w in (0, 1, 3, "seeded")]
    ex5.append({"kind": "theorem-A", "source": "example-5", "N": 12})
    fix = []
    for name, np_, hp, s0 in (
            ("m3", ["1/6", "1/2", "5/6"], ["0", "1/2", "1"], 2),
            ("m4", ["%d/18" % (2 * i + 1) for i in range(9)],
             ["0"] * 3 + ["1/2"] * 3 + ["1"] * 3, 5)):
        fix += [
            {"kind": "newton", "name": name + "-newton", "source": name, "expect": np_},
            {"kind": "hodge", "name": name + "-hodge", "source": name, "expect": hp},
            {"kind": "pairing", "name": name + "-pairing", "source": name},
            {"kind": "progression", "name": name + "-progression", "source": name,
             "expect_s0": s0},
        ]
    return {
        "example-5": Scenario("example-5", ex5,
                              description="U_3 on the Hurwitz order, conductor-9 character"),
        "fixtures-6x": Scenario("fixtures-6x", fix,
                                description="weight-2 U_3 matrices at levels 27 and 81"),
        "empty": Scenario("empty"),
    }


def load_scenario(name_or_path: str) -> Scenario:
    builtins = builtin_scenarios()
    if name_or_path in builtins:
        return builtins[name_or_path]
    path = Path(name_or_path)
    if not path.is_file():
        raise ScenarioError("no built-in scenario or file named %r" % name_or_path)
    return Scenario.from_json(load_json(path))
