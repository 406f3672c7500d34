"""End-to-end acceptance checks, one test per criterion.

Each test prints a single ``[criterion N] PASS|FAIL ...`` line straight to the
terminal (bypassing capture) before asserting.
"""

import math
import random

import mpmath
import numpy as np
import pytest

from pantsfn.closure import approx_sequence, convergence_study, generator, study_floor
from pantsfn.curves import (
    CurveWord,
    apply_full_twists,
    beta_curve,
    crossing_cosines,
    geodesic_length,
    holonomy,
    random_word,
)
from pantsfn.families import chain_graph, genus_two_graph, one_holed_torus_graph, random_surface, tree_graph
from pantsfn.fn_map import FNVector, bilipschitz_probe, fn_inverse, unnormalized_twist_response
from pantsfn.hyp_core import (
    hexagon_loop,
    hexagon_opposite,
    hexagon_side,
    pentagon_side,
    translation_length,
)
from pantsfn.pants_surface import build_base
from pantsfn.spectrum import CurveFamily, cuff_family, default_family, dls_estimate
from pantsfn.twist_flow import (
    convexity_check,
    derivative_trials,
    k_full_twists,
    lengths_along,
    second_differences,
)

GRAPHS = [genus_two_graph(), one_holed_torus_graph(), chain_graph(3), tree_graph(4)]


@pytest.fixture
def verdict(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {n}] {'PASS' if ok else 'FAIL'} {detail}")
        return ok
    return emit


def bisect_root(f, lo, hi, steps=200):
    """Plain bisection at 50 digits; f(lo) and f(hi) must differ in sign."""
    with mpmath.workdps(50):
        lo, hi = mpmath.mpf(lo), mpmath.mpf(hi)
        flo = f(lo)
        assert flo * f(hi) < 0
        for _ in range(steps):
            mid = (lo + hi) / 2
            fm = f(mid)
            if fm == 0:
                return float(mid)
            if (fm < 0) == (flo < 0):
                lo, flo = mid, fm
            else:
                hi = mid
        return float((lo + hi) / 2)


def test_trig_kernel(verdict):
    rng = np.random.default_rng(1)
    loop_err = 0.0
    for a, b, c in np.exp(rng.uniform(math.log(0.05), math.log(3.0), (1000, 3))):
        s_ab = hexagon_opposite(a, b, c)
        s_bc = hexagon_opposite(b, c, a)
        s_ca = hexagon_opposite(c, a, b)
        m = hexagon_loop([a, s_ab, b, s_bc, c, s_ca])
        x = (m.a, m.b, m.c, m.d)
        e = min(max(abs(p - q) for p, q in zip(x, (1, 0, 0, 1))),
                max(abs(p + q) for p, q in zip(x, (1, 0, 0, 1))))
        loop_err = max(loop_err, e)

    solver_err = 0.0
    cosh, sinh = mpmath.cosh, mpmath.sinh
    for a, b, c in np.exp(rng.uniform(math.log(0.05), math.log(3.0), (100, 3))):
        a, b, c = float(a), float(b), float(c)
        s = hexagon_opposite(a, b, c)
        ref = bisect_root(lambda x: cosh(x) * sinh(a) * sinh(b) - cosh(c) - cosh(a) * cosh(b), 0, 60)
        solver_err = max(solver_err, abs(s - ref))

        # the side opposite the middle one of three consecutive sides
        s_bc, s_ca = hexagon_opposite(b, c, a), hexagon_opposite(c, a, b)
        got = hexagon_side(s_bc, c, s_ca)
        ref = bisect_root(lambda x: cosh(x) - sinh(s_bc) * sinh(s_ca) * cosh(c)
                          + cosh(s_bc) * cosh(s_ca), 0, 60)
        solver_err = max(solver_err, abs(got - ref))

    for x, y in rng.uniform(0.3, 4.0, (100, 2)):
        x, y = float(x), float(y)
        if math.sinh(x) * math.sinh(y) <= 1.0 + 1e-6:
            continue
        got = pentagon_side(x, y)
        ref = bisect_root(lambda z: cosh(z) - sinh(x) * sinh(y), 0, 60)
        solver_err = max(solver_err, abs(got - ref))

    ok = loop_err <= 1e-9 and solver_err <= 1e-10
    verdict(1, ok, f"hexagon loop max entry error {loop_err:.2e} (tol 1e-9); "
                   f"solver vs bisection {solver_err:.2e} (tol 1e-10)")
    assert ok


def test_length_round_trips(verdict):
    rng = np.random.default_rng(2)
    prng = random.Random(2)
    cuff_err = trace_err = short_trace_err = remark_err = 0.0
    for k in range(200):
        g = GRAPHS[k % len(GRAPHS)]
        s = random_surface(g, 1e-3, 1.0, rng)
        for c in g.cuffs:
            w = CurveWord.cuff_curve(c.id)
            l = s.length(c.id)
            cuff_err = max(cuff_err, abs(geodesic_length(s, w) - l))
            # the trace of a conjugated short translation loses about 2e-12 / l^2
            e = abs(translation_length(holonomy(s, w)) - l)
            if l >= 3e-3:
                trace_err = max(trace_err, e)
            else:
                short_trace_err = max(short_trace_err, e)
        w = random_word(g, prng, n_cross=prng.randint(1, 4), max_winding=2)
        cid = prng.choice(sorted(w.intersection))
        n = prng.randint(-3, 3)
        moved = s.replace(twists={cid: s.twist(cid) + n * s.length(cid)})
        L = geodesic_length(moved, w)
        remark_err = max(remark_err, abs(geodesic_length(s, apply_full_twists(w, cid, n)) - L) / L)
    ok = cuff_err <= 1e-9 and trace_err <= 1e-9 and remark_err <= 1e-9
    verdict(2, ok, f"cuff length error {cuff_err:.2e}; holonomy trace error {trace_err:.2e} "
                   f"for l >= 3e-3 ({short_trace_err:.2e} below); full-twist remarking rel error "
                   f"{remark_err:.2e} (tol 1e-9)")
    assert ok


def test_length_derivative(verdict):
    trials = derivative_trials(seed=3, trials=120, h=1e-4, lo=1e-3, hi=1.0)
    worst = max(t.error for t in trials)

    rng = np.random.default_rng(3)
    prng = random.Random(3)
    convex = True
    for k in range(40):
        g = GRAPHS[k % len(GRAPHS)]
        s = random_surface(g, 1e-3, 1.0, rng)
        w = random_word(g, prng, n_cross=prng.randint(1, 4))
        c = prng.choice(sorted(w.intersection))
        l = s.length(c)
        for grid in ([l * j / 10 for j in range(11)], list(np.linspace(-2.0, 2.0, 11))):
            convex &= convexity_check(s, w, c, grid, tol=1e-9)
    s = build_base(genus_two_graph(), [0.5, 1.0, 1.0], 1.0)
    grid = list(np.linspace(-1.0, 1.0, 11))
    min_second = min(second_differences(grid, lengths_along(s, beta_curve(s, 0), 0, grid)))

    ok = len(trials) >= 100 and worst <= 1e-5 and convex and min_second >= -1e-9
    verdict(3, ok, f"{len(trials)} trials, max |exact - FD| {worst:.2e} (tol 1e-5); "
                   f"convexity on 80 grids {'held' if convex else 'FAILED'}, "
                   f"sample min second difference {min_second:.3f}")
    assert ok


def test_full_twist_angle_guarantee(verdict):
    rng = np.random.default_rng(4)
    eps0 = 0.5
    worst_pos, worst_neg, checked = math.inf, -math.inf, 0
    surfaces = [random_surface(GRAPHS[k % len(GRAPHS)], 1e-6, 1.0, rng) for k in range(200)]
    g = genus_two_graph()
    for l in np.geomspace(1e-6, 1.0, 25):
        for t in (0.0, 0.3, 0.9):
            surfaces.append(build_base(g, [float(l), 1.0, 0.7], 1.0, [t * l, 0.0, 0.0]))
    for s in surfaces:
        for c in s.graph.interior_cuffs:
            l, t = s.length(c), s.twist(c)
            k = k_full_twists(l, eps0)
            base = beta_curve(s, c).with_windings(c, -math.floor(t / l))
            worst_pos = min(worst_pos, *crossing_cosines(s, apply_full_twists(base, c, k), c))
            worst_neg = max(worst_neg, *crossing_cosines(s, apply_full_twists(base, c, -k), c))
            checked += 1
    spot = k_full_twists(0.1, eps0)
    ok = worst_pos >= eps0 and worst_neg <= -eps0 and spot == 12
    verdict(4, ok, f"{checked} beta curves with l in [1e-6, 1]: min cos {worst_pos:.7f}, "
                   f"mirror max cos {worst_neg:.7f}; k(0.1) = {spot}")
    assert ok


def test_normalization_necessity(verdict):
    cases = {"genus2": build_base(genus_two_graph(), [1.0, 1.0, 1.0], 1.0),
             "torus": build_base(one_holed_torus_graph(), [1.0, 1.0], 1.0)}
    exps, bands = {}, {}
    for name, X0 in cases.items():
        exps[name] = unnormalized_twist_response(X0, 0, 1.0).exponent
        norm = unnormalized_twist_response(X0, 0, 1.0, normalized=True).responses
        bands[name] = (min(norm), max(norm))
    exp_ok = all(e is not None and abs(e + 1.0) <= 0.15 for e in exps.values())
    band_ok = all(0 < lo < hi < math.inf for lo, hi in bands.values())
    ok = exp_ok and band_ok
    verdict(5, ok, "fitted exponents " + ", ".join(f"{k} {v:.3f}" for k, v in exps.items())
            + " (target -1 +- 0.15); normalized bands "
            + ", ".join(f"{k} [{lo:.3f}, {hi:.3f}]" for k, (lo, hi) in bands.items()))
    assert ok


def test_probe_scale_stability(verdict):
    g = chain_graph(50)
    u = np.random.default_rng(6).uniform(0.0, 1.0, len(g.cuffs))
    dist = {}
    for m in (1e-2, 1e-4, 1e-6):
        X0 = build_base(g, [float(x) for x in np.exp(u * math.log(m))], 1.0)
        fam = default_family(X0, (1,), eps0=0.5)
        rep = bilipschitz_probe(X0, FNVector.zero(X0), 0.25, 200, fam, seed=6)
        dist[m] = rep.distortion
    spread = max(dist.values()) / min(dist.values())
    ok = all(math.isfinite(d) for d in dist.values()) and spread < 4.0
    verdict(6, ok, "distortion " + ", ".join(f"m={m:g}: {d:.3f}" for m, d in dist.items())
            + f"; spread {spread:.3f} (limit 4)")
    assert ok


def test_beta_length_bound(verdict):
    sweep = np.geomspace(1e-8, 1.0, 33)
    worst, tails = 0.0, []
    configs = [(genus_two_graph(), [1.0, 1.0]), (genus_two_graph(), [0.05, 1.0]),
               (one_holed_torus_graph(), [1.0]), (one_holed_torus_graph(), [0.05]),
               (chain_graph(5), None)]
    rng = np.random.default_rng(7)
    for g, others in configs:
        n = len(g.cuffs)
        rest = others if others is not None else list(np.exp(rng.uniform(math.log(0.05), 0.0, n - 1)))
        c = g.interior_cuffs[0]
        ratios = []
        for l in sweep:
            lengths = list(rest)
            lengths.insert(g.index[c], float(l))
            X0 = build_base(g, lengths, 1.0)
            ratios.append(geodesic_length(X0, beta_curve(X0, c)) / max(1.0, abs(math.log(l))))
        worst = max(worst, max(ratios))
        tails.append(abs(ratios[0] - ratios[4]) / ratios[4])
    # the ratio settles as l -> 0: no growth over the last two decades
    ok = math.isfinite(worst) and max(tails) < 0.05
    verdict(7, ok, f"max l_beta / max(1, |log l|) = {worst:.3f} over l in [1e-8, 1]; "
                   f"tail drift over the last two decades {max(tails):.2%}")
    assert ok


def test_closure_dichotomy(verdict):
    i_grid = list(range(21))
    sq_hits = []
    for N in (30, 60, 120):
        X0, X = generator("sqrt").surfaces(N)
        i_max = max(abs(a - b) for a, b in zip(X.twists, X0.twists))
        rows = convergence_study(X0, X, [float(i) for i in range(math.ceil(i_max) + 1)],
                                 default_family(X0, (1,)))
        sq_hits.append(min(r.dls for r in rows if r.i >= i_max) < 1e-2)

    floors = {}
    for N in (30, 60, 120):
        X0, X = generator("half").surfaces(N)
        floors[N] = study_floor(convergence_study(X0, X, i_grid, default_family(X0, (1,))), 20)
    # at N = 30 the largest offset is 15, so i = 20 already reproduces X; the
    # floor has to come from the deeper runs
    half_ok = floors[60] > 0 and floors[120] > 0 and floors[30] <= floors[60] <= floors[120]

    X0, X = generator("half").surfaces(12)
    formula_ok = True
    for i in (0.0, 0.5, 2.0, 5.5, 100.0):
        Xi = approx_sequence(X0, X, i)
        for c, t0, t, ti in zip(X.graph.cuffs, X0.twists, X.twists, Xi.twists):
            d = t - t0
            want = t0 + (math.copysign(min(i, abs(d)), d) if c.interior else d)
            formula_ok &= ti == want

    ok = all(sq_hits) and half_ok and formula_ok
    verdict(8, ok, f"sqrt column below 1e-2 by i = max|dt|: {sq_hits}; half floors over i <= 20 "
                   + ", ".join(f"N={n}: {f:.4f}" for n, f in floors.items())
                   + f"; sgn*min formula {'exact' if formula_ok else 'MISMATCH'}")
    assert ok


def test_estimator_soundness(verdict):
    rng = np.random.default_rng(9)
    prng = random.Random(9)
    sym = tri = ident = mono = 0
    for k in range(100):
        g = GRAPHS[k % len(GRAPHS)]
        X = random_surface(g, 1e-3, 1.0, rng)
        if k % 2:
            Y, Z = (random_surface(g, 1e-3, 1.0, rng) for _ in range(2))
        else:
            n = len(g.cuffs)
            mask = [c.interior for c in g.cuffs]
            Y, Z = (fn_inverse(X, FNVector(rng.uniform(-0.5, 0.5, n), rng.uniform(-0.5, 0.5, n), mask))
                    for _ in range(2))
        fam = default_family(X, (1,))
        dxy = dls_estimate(X, Y, fam).dls_estimate
        dyx = dls_estimate(Y, X, fam).dls_estimate
        dyz = dls_estimate(Y, Z, fam).dls_estimate
        dxz = dls_estimate(X, Z, fam).dls_estimate
        sym += abs(dxy - dyx) <= 1e-12 * max(1.0, dxy)
        tri += dxz <= dxy + dyz + 1e-12

        same = dls_estimate(X, X, fam)
        rep = dls_estimate(X, Y, fam)
        all_one = all(abs(r.lY / r.lX - 1) <= 1e-12 for r in rep.rows)
        ident += same.dls_estimate == 0.0 and (rep.dls_estimate == 0.0) == all_one

        extra = fam + random_family(g, prng)
        small = dls_estimate(X, Y, cuff_family(X)).dls_estimate
        mono += small <= dxy <= dls_estimate(X, Y, extra).dls_estimate
    ok = sym == tri == ident == mono == 100
    verdict(9, ok, f"over 100 pairs: symmetry {sym}, triangle {tri}, identity {ident}, "
                   f"monotonicity {mono}")
    assert ok


def random_family(g, prng, size=5):
    words = tuple(random_word(g, prng, n_cross=prng.randint(1, 4)) for _ in range(size))
    return CurveFamily(tuple(f"rand:{j}" for j in range(size)), words, "random")
