"""Acceptance criteria.

Each test prints one ``[PASS]``/``[FAIL]`` line and asserts the criterion at
its stated tolerance and time budget.  Run directly with
``python3 tests/test_acceptance.py`` for the summary alone.
"""

from __future__ import annotations

import math
import random
import sys
import time

from skeincount.curvecount import (
    ModuliSet,
    apply_wall_event,
    assemble,
    collapsed_invariant,
    conifold_substitute,
    partition_function,
    random_moduli,
    random_wall_event,
    single_cylinder_moduli,
)
from skeincount.diagram import FramedDiagram, braid_closure, unknot
from skeincount.geometry import (
    chain_intersections,
    convergence_check,
    elliptic_boundary_radius,
    elliptic_cylinder,
    framing_balance,
    hyperbolic_nodal,
    hyperbolic_pair,
    linking_number,
    through_gamma,
)
from skeincount.index import FIXED_WEIGHTS, WeightPair, dbar_index, dbar_index_numeric, random_weight_pairs
from skeincount.laurent import LaurentPoly, QSeries, parse
from skeincount.skein import (
    OracleEvaluator,
    SkeinEvaluator,
    check_skein_triple,
    collapse_s3_factor,
    evaluate_s3,
    skein_triples,
    tensor,
)
from skeincount.tables import KNOTS, LARGE, fixture_table, knot, link, random_braid_corpus

RESULTS = []


def report(name: str, ok: bool, detail: str):
    line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
    RESULTS.append(line)
    out = getattr(sys, "__stdout__", None) or sys.stdout
    print(line, file=out, flush=True)
    assert ok, line


def _corpus(count=200, max_crossings=10, seed=2024):
    return [braid_closure(n, w) for n, w in random_braid_corpus(count, max_crossings, seed)]


def _mirror_value(p):
    return p.substitute_monomial({"a": {"a": -1}, "z": {"z": 1}}).scale_variable("z", -1)


def test_skein_axioms():
    t0 = time.perf_counter()
    corpus = _corpus()
    ev = SkeinEvaluator()
    sites = bad = 0
    for d in corpus:
        for _, dp, dm, d0 in skein_triples(d):
            sites += 1
            if not check_skein_triple(dp, dm, d0, evaluator=ev):
                bad += 1
    dt = time.perf_counter() - t0
    ok = len(corpus) >= 200 and bad == 0 and sites > 0 and dt < 60
    report("Skein axioms", ok, f"{len(corpus)} diagrams, {sites} crossing sites, {bad} failures, {dt:.2f} s (< 60 s)")


def test_unknot_normalization():
    ev = SkeinEvaluator()
    u = unknot()
    t0 = time.perf_counter()
    val = ev.evaluate(u)
    dt = time.perf_counter() - t0
    want = parse("a*z^-1 - a^-1*z^-1")
    ok = val == want and dt < 1e-3
    report("Unknot normalization", ok, f"<unknot> = {val.render()}, {dt * 1e3:.3f} ms (< 1 ms)")


def test_oracle_equivalence():
    t0 = time.perf_counter()
    table = fixture_table(8)
    ev = SkeinEvaluator()
    mism = [name for i, (name, d) in enumerate(table.items())
            if ev.evaluate(d) != OracleEvaluator(seed=100 + i).evaluate(d)]
    dt = time.perf_counter() - t0
    ok = not mism and dt < 300
    report("Oracle equivalence", ok, f"{len(table)} fixtures through 8 crossings, mismatches {mism}, {dt:.2f} s (< 300 s)")


def test_property_suite():
    corpus = _corpus()
    rng = random.Random(17)
    ev = SkeinEvaluator()
    a = LaurentPoly.var("a")
    unk = ev.evaluate(unknot())
    fails = []
    for i, d in enumerate(corpus):
        e = corpus[rng.randrange(len(corpus))]
        if d.n_crossings + e.n_crossings <= 14 and ev.evaluate(d.split_union(e)) != ev.evaluate(d) * ev.evaluate(e):
            fails.append(("split", i))
        if ev.evaluate(d.mirror()) != _mirror_value(ev.evaluate(d)):
            fails.append(("mirror", i))
        if d.n_components:
            c = rng.randrange(d.n_components)
            if ev.evaluate(d.with_framing_change(c, 1)) != a * ev.evaluate(d):
                fails.append(("framing", i))
    knots = [d.zero_framed() for d in corpus if d.n_components == 1]
    names = sorted(KNOTS)
    for i, k in enumerate(knots):
        other = knot(names[i % len(names)]).zero_framed()
        if k.n_crossings + other.n_crossings > 14:
            continue
        if ev.evaluate(k.connected_sum(other)) * unk != ev.evaluate(k) * ev.evaluate(other):
            fails.append(("connected sum", i))
    report("Property suite", not fails,
           f"split union / mirror / framing on {len(corpus)} diagrams, connected sum on {len(knots)} knots, failures {fails[:5]}")


def test_homfly_theorem_desk_scale():
    ev = SkeinEvaluator()
    rows = []
    ok = True
    for name in ("0_1", "hopf", "3_1", "4_1"):
        K = link(name)
        m = single_cylinder_moduli(K)
        n = K.n_components
        got = assemble(m, (1,))
        want = tensor(m.branes, [K] + [[1]] * n)
        collapsed = collapse_s3_factor(got, ev)
        expect = tensor(m.branes, [None] + [[1]] * n, coeff=ev.evaluate(K))
        good = got == want and collapsed == expect
        ok = ok and good
        rows.append(f"{name}:{'ok' if good else 'bad'}")
    report("Theorem HOMFLY at desk scale", ok, ", ".join(rows))


def test_wall_crossing_invariance():
    rng = random.Random(2025)
    pool = [FramedDiagram(), unknot(), knot("3_1"), link("hopf"), knot("4_1"), link("whitehead"),
            link("hopf").with_framing_change(0, 2)]
    ev = SkeinEvaluator()
    n_sets = 0
    checks = 0
    fails = []
    for i in range(60):
        m = random_moduli(rng, pool, rng.randint(2, 5), with_solid_torus=bool(i % 3))
        before = collapsed_invariant(m, evaluator=ev)
        n_sets += 1
        for kind in ("Hyperbolic", "Elliptic", "FramingChange"):
            try:
                e = random_wall_event(rng, m, kind)
            except Exception:
                continue
            checks += 1
            if collapsed_invariant(apply_wall_event(m, e), evaluator=ev) != before:
                fails.append((i, kind))
    ok = n_sets >= 50 and not fails and checks >= 150
    report("Wall-crossing invariance", ok, f"{n_sets} moduli sets, {checks} events, failures {fails}")


def test_conifold_bookkeeping():
    rng = random.Random(77)
    pool = [FramedDiagram(), unknot(), knot("3_1"), link("hopf")]
    ev = SkeinEvaluator()
    fails = 0
    trials = 30
    from dataclasses import replace

    from skeincount.skein import Brane
    for _ in range(trials):
        mq = random_moduli(rng, pool, 4, order=3)
        # Q-class side: collapse S3 factors, then Q = a^2 on the deleted brane's variable
        mq = ModuliSet(mq.branes[1:], tuple(replace(r, linking=r.linking[1:], boundary=r.boundary[1:])
                                            for r in mq.records), 3) if len(mq.branes) > 1 else None
        if mq is None:
            continue
        s = partition_function(mq)
        s = QSeries({d: collapse_s3_factor(c, ev) for d, c in s.coeffs.items()}, s.order,
                    collapse_s3_factor(s.one, ev), s.nvars)
        lhs = conifold_substitute(s)
        # a-linking side: the same curves linking an S3 brane 2d times, no substitution
        branes = (Brane("L", "S3"),) + mq.branes
        recs = tuple(replace(r, linking=(2 * r.d[0],) + r.linking, boundary=(FramedDiagram(),) + r.boundary)
                     for r in mq.records if sum(r.d) <= mq.order)
        ma = ModuliSet(branes, recs, mq.order)
        rhs = collapse_s3_factor(assemble(ma), ev)
        rhs = (rhs + rhs.unit()).drop_branes(["L"])
        if rhs != lhs:
            fails += 1
    report("Conifold bookkeeping", fails == 0, f"{trials} synthetic moduli sets, {fails} mismatches")


def test_local_models():
    t0 = time.perf_counter()
    ts = (-1, -0.5, -0.1, 0.1, 0.5, 1)
    links = [linking_number(through_gamma(t)) for t in ts]
    link_ok = len(set(links)) == 1
    bal_ok = all(framing_balance(b, s0) for b in (1, -1) for s0 in (0.25, 1.0, 4.0))
    flips = [(chain_intersections(elliptic_cylinder(t)).total, chain_intersections(elliptic_cylinder(-t)).total)
             for t in (0.1, 0.5, 1.0)]
    flip_ok = all(p == -m != 0 for p, m in flips)
    radii = {rho: elliptic_boundary_radius(rho)[0] for rho in (1, 2, 3)}
    rad_err = max(abs(r - math.sqrt(2) * math.exp(-rho)) for rho, r in radii.items())
    rad_ok = rad_err <= 1e-12
    dists = [convergence_check(hyperbolic_pair(0.0), hyperbolic_nodal(rho))["sup_distance"] for rho in (3, 4, 5, 6)]
    ratios = [dists[i + 1] / dists[i] for i in range(3)]
    decay_ok = all(abs(r / math.exp(-2) - 1) <= 0.05 for r in ratios)
    dt = time.perf_counter() - t0
    ok = link_ok and bal_ok and flip_ok and rad_ok and decay_ok and dt < 30
    detail = (f"ThroughGamma linking {sorted(set(links))} {'ok' if link_ok else 'bad'}; "
              f"framing balance {'ok' if bal_ok else 'bad'}; elliptic flip {flips} {'ok' if flip_ok else 'bad'}; "
              f"EllipticNodal radius vs sqrt(2)e^-rho max error {rad_err:.3e} {'ok' if rad_ok else 'bad'} "
              f"(measured radius/e^-rho = {radii[1] / math.exp(-1):.12f}); "
              f"HyperbolicNodal decay ratios/e^-2 {[round(r / math.exp(-2), 6) for r in ratios]} "
              f"{'ok' if decay_ok else 'bad'}; {dt:.2f} s (< 30 s)")
    report("Local models", ok, detail)


def test_index():
    t0 = time.perf_counter()
    pairs = FIXED_WEIGHTS + random_weight_pairs(10, 10.0, 0.5, seed=7)
    mism = []
    for a, b in pairs:
        w = WeightPair(a, b)
        if dbar_index_numeric(w) != dbar_index(w):
            mism.append((a, b))
    dt = time.perf_counter() - t0
    ok = len(pairs) == 20 and not mism and dt < 60
    report("Index", ok, f"{len(pairs)} weight pairs, mismatches {mism}, {dt:.2f} s (< 60 s)")


def test_performance():
    k12 = link("alt12")
    assert k12.n_crossings == 12 and k12.n_components == 1
    t0 = time.perf_counter()
    SkeinEvaluator().evaluate(k12)
    t12 = time.perf_counter() - t0
    speedups = []
    for name in ("alt10", "alt10b"):
        d = link(name)
        assert d.n_crossings == 10
        t0 = time.perf_counter()
        v1 = SkeinEvaluator().evaluate(d)
        tm = time.perf_counter() - t0
        t0 = time.perf_counter()
        v2 = OracleEvaluator(seed=1).evaluate(d)
        to = time.perf_counter() - t0
        assert v1 == v2
        speedups.append(to / tm)
    ok = t12 < 10 and min(speedups) >= 5
    report("Performance", ok, f"12-crossing knot {t12:.3f} s (< 10 s); memo speedup on 10 crossings "
                              f"{[round(s, 1) for s in speedups]} (>= 5x)")


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
            except AssertionError:
                pass
    print(f"{sum(r.startswith('[PASS]') for r in RESULTS)}/{len(RESULTS)} criteria passed")
