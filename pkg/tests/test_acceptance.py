"""
Acceptance gate: one line per criterion, ``PASS`` or ``FAIL``, with timings.

Run under pytest (lines appear in the terminal summary) or directly with
``python tests/test_acceptance.py``.
"""

import time
from fractions import Fraction as F

import numpy as np

from upslopes.corpus import load_fixture_matrix
from upslopes.duality import (ClassicalBlock, commuting_projector_family, idempotent_limit,
                              verify_adjunction)
from upslopes.padic import CMatrix, CycloElt, DirichletCharacter, DiskPoint, PadicContext, PrecisionError
from upslopes.quatalg import elements_of_norm
from upslopes.scenarios import builtin_scenarios, run_scenario, seeded_w0
from upslopes.spectral import (char_series, check_np_above_hp, check_sharp_bound,
                               check_theorem_A, hodge_polygon, hodge_polygon_minors,
                               improved_bound_slopes, newton_polygon, progression_check)
from upslopes.upmat import (EXAMPLE_PSI, alpha_lists, assemble, example53_context,
                            example53_recipe, example53_up, identity_recipe, synthetic_context,
                            synthetic_recipe, truncation_stability)

SIX = [F(2 * n + 1, 2) for n in range(6)]
SYNTHETIC = [(seed, 1 + seed % 3) for seed in range(25)]


def _line(num, ok, seconds, detail):
    return "criterion %d: %s  (%.2fs)  %s" % (num, "PASS" if ok else "FAIL", seconds, detail)


def _record(log, num, ok, start, detail):
    line = _line(num, ok, time.perf_counter() - start, detail)
    log.append(line)
    print(line)
    return ok


def _synthetic(seed, t, N=5, prec=20):
    r = synthetic_recipe(seed, t)
    ctx = synthetic_context(r, prec)
    T = assemble(r, DiskPoint(r.psi, 0), N, ctx)
    return r, ctx, T


# -- criteria -----------------------------------------------------------------------

def criterion_1(log):
    start = time.perf_counter()
    s = builtin_scenarios()["example-5"]
    s.checks = [c for c in s.checks if c.get("w0") == 0]
    rep = run_scenario(s)
    slopes = [F(x) for x in rep.results[0].data["slopes"]]
    elapsed = time.perf_counter() - start
    ok = rep.status == "pass" and slopes == SIX and elapsed < 10
    return _record(log, 1, ok, start, "slopes %s at w0=0, N=12, prec=40"
                   % [str(s) for s in slopes])


def criterion_2(log):
    start = time.perf_counter()
    found = {}
    for w0 in (0, 1, 3, seeded_w0(0)):
        T = example53_up(w0, N=12, prec=40)
        np_ = newton_polygon(T.char_series())
        found[w0] = np_.slopes()[:6] if np_.certified_length() >= 6 else None
    ok = all(v == SIX for v in found.values())
    return _record(log, 2, ok, start, "w0 in %s give identical first six slopes" % sorted(found))


def criterion_3(log):
    start = time.perf_counter()
    M = load_fixture_matrix("m3")
    np_ = newton_polygon(char_series(M)).slopes()
    hp = hodge_polygon(M).slopes()
    adj = M.conj().T @ M == CMatrix.identity(M.ctx, 3) * 3
    elapsed = time.perf_counter() - start
    ok = np_ == [F(1, 6), F(1, 2), F(5, 6)] and hp == [0, F(1, 2), 1] and adj and elapsed < 1
    return _record(log, 3, ok, start, "NP %s, HP %s, conj(M)^T M = 3I: %s"
                   % ([str(x) for x in np_], [str(x) for x in hp], adj))


def criterion_4(log):
    start = time.perf_counter()
    M = load_fixture_matrix("m4")
    np_ = newton_polygon(char_series(M)).slopes()
    hp = hodge_polygon(M).slopes()
    adj = M.conj().T @ M == CMatrix.identity(M.ctx, 9) * 3
    elapsed = time.perf_counter() - start
    ok = (np_ == [F(2 * i + 1, 18) for i in range(9)]
          and hp == [F(0)] * 3 + [F(1, 2)] * 3 + [F(1)] * 3 and adj and elapsed < 5)
    return _record(log, 4, ok, start, "NP (2i+1)/18: %s, HP: %s, conj(M)^T M = 3I: %s"
                   % (np_ == [F(2 * i + 1, 18) for i in range(9)], [str(x) for x in hp], adj))


def criterion_5(log):
    start = time.perf_counter()
    ex = check_theorem_A(example53_up(0, N=12, prec=40).char_series(), 1)
    bad = []
    for seed, t in SYNTHETIC:
        _, _, T = _synthetic(seed, t)
        if not check_theorem_A(T.char_series(), t):
            bad.append(seed)
    ok = ex and not bad
    return _record(log, 5, ok, start, "example t=1: %s; %d synthetic m=4 recipes, failures %s"
                   % (ex, len(SYNTHETIC), bad))


def criterion_6(log):
    start = time.perf_counter()
    bad, uncertified = [], []
    for seed, t in SYNTHETIC:
        r, ctx, T = _synthetic(seed, t)
        improved = improved_bound_slopes(alpha_lists(r, ctx), t, 5 * t)
        rep = check_sharp_bound(T.char_series(), improved, t, 3)
        if not rep.passed:
            bad.append(seed)
        if rep.uncertified:
            uncertified.append(seed)
    ok = not bad and not uncertified
    return _record(log, 6, ok, start, "touch points k=1..3 and floor bound on %d recipes; "
                   "failures %s, uncertified %s" % (len(SYNTHETIC), bad, uncertified))


def criterion_7(log):
    start = time.perf_counter()
    out = {}
    for name in ("m3", "m4"):
        M = load_fixture_matrix(name)
        np_, hp = newton_polygon(char_series(M)), hodge_polygon(M)
        out[name] = (progression_check(np_, hp), np_, hp)
    r3, r4 = out["m3"][0], out["m4"][0]
    _, np4, hp4 = out["m4"]
    flagged = 6 in r4.boundary and np4.y(6) == hp4.y(5) + 1 == 2
    ok = r3.s0 == 2 and r4.s0 == 5 and flagged
    return _record(log, 7, ok, start, "s0(M3)=%d, s0(M4)=%d strict; M4 boundary at %s "
                   "(NP(6)=HP(5)+1=2; non-strict rule gives %d)"
                   % (r3.s0, r4.s0, r4.boundary, r4.s0_nonstrict))


def _random_matrix(ctx, n, rng, spread=2):
    rows = [[CycloElt(ctx, [int(v) for v in rng.integers(-50, 50, size=ctx.e)])
             .mul_uniformizer_power(int(rng.integers(0, spread * ctx.e))) for _ in range(n)]
            for _ in range(n)]
    return CMatrix.from_entries(ctx, rows)


def criterion_8(log):
    start = time.perf_counter()
    rng = np.random.default_rng(8)
    ctx = PadicContext(3, m=3, prec=20)
    parts = {}

    np_hp = 0
    for _ in range(100):
        M = _random_matrix(ctx, 5, rng)
        try:
            np_hp += check_np_above_hp(M)
        except PrecisionError:
            np_hp += 1  # Hodge side undefined to precision; nothing to compare
    parts["np>=hp"] = np_hp == 100

    snf = True
    for n in range(1, 5):
        for _ in range(10):
            M = _random_matrix(ctx, n, rng)
            try:
                snf &= hodge_polygon(M).vertices == hodge_polygon_minors(M).vertices
            except PrecisionError:
                pass
    parts["snf=minors"] = snf

    mult = True
    for _ in range(20):
        A, B = _random_matrix(ctx, 3, rng), _random_matrix(ctx, 2, rng)
        mult &= (char_series(A) * char_series(B)).coeffs == \
            char_series(CMatrix.block_diag([A, B])).coeffs
    parts["block-mult"] = mult

    val = True
    for _ in range(1000):
        x = CycloElt(ctx, [int(v) for v in rng.integers(-10**6, 10**6, size=ctx.e)]) \
            .mul_uniformizer_power(int(rng.integers(0, 30)))
        y = CycloElt(ctx, [int(v) for v in rng.integers(-10**6, 10**6, size=ctx.e)]) \
            .mul_uniformizer_power(int(rng.integers(0, 30)))
        vx, vy = x.valuation(), y.valuation()
        val &= (x + y).valuation().value >= min(vx.value, vy.value)
        if vx.exact and vy.exact and vx.value != vy.value:
            val &= (x + y).valuation() == min(vx.value, vy.value)
        if vx.exact and vy.exact and vx.value + vy.value < ctx.prec:
            val &= (x * y).valuation() == vx.value + vy.value
    parts["valuation"] = val

    parts["norm-counts"] = all(
        len(elements_of_norm(n)) == 24 * sum(d for d in range(1, n + 1, 2) if n % d == 0)
        for n in range(1, 21))

    idem = True
    for seed in range(20):
        frng = np.random.default_rng(seed)
        sizes = [int(x) for x in frng.integers(1, 3, size=int(frng.integers(2, 4)))]
        projs, _ = commuting_projector_family(ctx, sizes, frng)
        Qs = [idempotent_limit(P) for P in projs]
        total = CMatrix.zeros(ctx, sum(sizes))
        for i, Q in enumerate(Qs):
            idem &= Q @ Q == Q
            idem &= all((Q @ R).is_zero() for j, R in enumerate(Qs) if j != i)
            total = total + Q
        idem &= total == CMatrix.identity(ctx, sum(sizes))
    parts["idempotents"] = idem

    stable = True
    ex = truncation_stability(example53_recipe(), DiskPoint(EXAMPLE_PSI, 0), 6,
                              example53_context(40), N=12)
    stable &= ex.stable and ex.slopes == SIX
    ident = truncation_stability(identity_recipe(), DiskPoint(DirichletCharacter.trivial(3), 0),
                                 6, PadicContext(3, prec=20))
    stable &= ident.stable
    parts["stability"] = stable

    elapsed = time.perf_counter() - start
    ok = all(parts.values()) and elapsed < 120
    return _record(log, 8, ok, start, " ".join("%s=%s" % kv for kv in parts.items()))


# -- pytest entry points --------------------------------------------------------------

def test_criterion_1_example_slopes(acceptance_log):
    assert criterion_1(acceptance_log)


def test_criterion_2_w_independence(acceptance_log):
    assert criterion_2(acceptance_log)


def test_criterion_3_m3(acceptance_log):
    assert criterion_3(acceptance_log)


def test_criterion_4_m4(acceptance_log):
    assert criterion_4(acceptance_log)


def test_criterion_5_weak_bound(acceptance_log):
    assert criterion_5(acceptance_log)


def test_criterion_6_sharp_bound(acceptance_log):
    assert criterion_6(acceptance_log)


def test_criterion_7_progression(acceptance_log):
    assert criterion_7(acceptance_log)


def test_criterion_8_properties(acceptance_log):
    assert criterion_8(acceptance_log)


if __name__ == "__main__":
    lines = []
    results = [c(lines) for c in (criterion_1, criterion_2, criterion_3, criterion_4,
                                  criterion_5, criterion_6, criterion_7, criterion_8)]
    raise SystemExit(0 if all(results) else 1)
