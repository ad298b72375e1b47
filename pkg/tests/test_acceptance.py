"""Acceptance criteria 1-11, one test each.

Every test records a ``ACCEPT <n> PASS|FAIL ...`` line; the lines are printed
in the pytest terminal summary and when this file is run as a script.
"""
import math
import sys
import time

import numpy as np

from ultraoregon.automaton import (CAState, SingleRing, Spiral, Target, ca_run, ca_step_full,
                                   ca_step_simple, seed_pattern, tsu_step)
from ultraoregon.grid import PERIODIC, field_sum
from ultraoregon.patterns import (collision_report, fronts, l1_sphere, periodicity_report,
                                  search_spiral_seed, segment_endpoints, spiral_collision_runs,
                                  spiral_signature)
from ultraoregon.tropical import (OregonatorParams, TropicalStepParams, consistency_order,
                                  empirical_orders, local_maxima, trop_ode_run, trop_pde_step)
from ultraoregon.ultradiscrete import (INF, UDParams, UDState, saturation_threshold,
                                       ud_limit_probe, ud_step_einf, ud_step_full)
from ultraoregon.verify import local_sweep_states, random_probe_inputs, random_states
from ultraoregon.zerodim import (AttractorKind, OdeState, ZeroDimParams, attractor_classify,
                                 equilibria, perturbation_check, piecewise_step, psi_closed_form,
                                 psi_recursion, ud_ode_step)

RESULTS: list[str] = []


def record(n: int, ok: bool, seconds: float, limit: float | None, detail: str) -> bool:
    in_time = limit is None or seconds <= limit
    verdict = "PASS" if ok and in_time else "FAIL"
    budget = f" limit={limit:g}s" if limit is not None else ""
    line = f"ACCEPT {n:>2} {verdict} time={seconds:.2f}s{budget} {detail}"
    RESULTS.append(line)
    print(line)
    return ok and in_time


def test_01_transition_tables():
    t0 = time.perf_counter()
    table = {(0, 0): 0, (0, 1): 0, (1, 0): 1, (1, 1): 0}
    bad = 0
    for (m, prev), want in table.items():
        bad += int(ca_step_simple(CAState([[prev]], [[m]], alpha=0, beta=0))[0, 0]) != want
        bad += int(tsu_step([[m]], [[prev]])[0, 0]) != want
    assert record(1, bad == 0, time.perf_counter() - t0, 1.0, f"columns=4 mismatches={bad}")


def test_02_rule_equivalences():
    t0 = time.perf_counter()
    prev, curr = local_sweep_states()
    s = CAState(prev, curr, alpha=1, beta=0)
    a = int((ca_step_full(s, F=1, Q=-1) != ca_step_simple(s)).sum())
    b = int((ca_step_simple(s) != tsu_step(curr, prev)).sum())
    ra = rb = 0
    for p, c in random_states(200, 16):
        s = CAState(p, c, alpha=1, beta=0)
        ra += int((ca_step_full(s, F=1, Q=-1) != ca_step_simple(s)).sum())
        rb += int((ca_step_simple(s) != tsu_step(c, p)).sum())
    ok = a == b == ra == rb == 0
    assert record(2, ok, time.perf_counter() - t0, 30.0,
                  f"sweep=2^18 random=200x16x16 full~simple={a + ra} simple~tsu={b + rb}")


def test_03_patterns():
    t0 = time.perf_counter()
    ring = ca_run(seed_pattern(SingleRing(), 21, 21, steps=8), "simple", 8)
    ring_ok = all(np.array_equal(f, l1_sphere((21, 21), (10, 10), n))
                  for n, f in enumerate(fronts(ring)) if 1 <= n <= 8)
    target = periodicity_report(ca_run(seed_pattern(Target(), 41, 41, steps=16), "simple", 16), 4)
    kind = search_spiral_seed(Spiral(), 81, 81)
    frames = ca_run(seed_pattern(kind, 81, 81, search=False), "simple", 60)
    sig = spiral_signature(frames, segment_endpoints(kind, 81, 81), half=4, run_len=8)
    col = collision_report(*spiral_collision_runs(81, 81, 60))
    ok = ring_ok and target["ok"] and sig["ok"] and col["ok"]
    assert record(3, ok, time.perf_counter() - t0, 10.0,
                  f"ring={ring_ok} target_violations={target['violations']} "
                  f"spiral_rotation={sig['ok']} annihilation={col['ok']}")


def test_04_zero_dim_theorem():
    t0 = time.perf_counter()
    exceptions = cases = 0
    for F in range(1, 5):
        for Q in range(F + 1, 9):
            p = ZeroDimParams(F, Q)
            for u0 in range(-8, 9):
                for u1 in range(-8, 9):
                    a = attractor_classify(u0, u1, p, max_iter=200).attractor
                    cases += 1
                    if (u0, u1) == (F, F):
                        exceptions += a.kind is not AttractorKind.CONSTANT_F
                    else:
                        exceptions += not (a.kind is AttractorKind.PERIOD2 and a.values == (0, Q))
    assert record(4, exceptions == 0, time.perf_counter() - t0, 60.0,
                  f"cases={cases} exceptions={exceptions} max_iter=200")


def test_05_piecewise_agreement():
    t0 = time.perf_counter()
    bad = cases = 0
    for F in range(-5, 6):
        for Q in range(-5, 6):
            p = ZeroDimParams(F, Q)
            for u0 in range(-10, 11):
                for u1 in range(-10, 11):
                    s = OdeState(u0, u1)
                    bad += piecewise_step(s, p)[0] != ud_ode_step(s, p)
                    cases += 1
    assert record(5, bad == 0, time.perf_counter() - t0, 60.0, f"cases={cases} mismatches={bad}")


def test_06_equilibria():
    t0 = time.perf_counter()
    want = {(-1, 1): [(0, "stable")], (2, 1): [(1, "stable")], (1, 3): [(1, "unstable")]}
    sets_ok = all([(e.value, e.tag) for e in equilibria(F, Q)] == w for (F, Q), w in want.items())
    runs = [perturbation_check(F, Q, e, steps=50) for F, Q in want for e in equilibria(F, Q)]
    pert_ok = all(r["ok"] for r in runs)
    assert record(6, sets_ok and pert_ok, time.perf_counter() - t0, None,
                  f"sets={sets_ok} perturbation_runs={sum(len(r['runs']) for r in runs)} "
                  f"tags_confirmed={pert_ok}")


def test_07_ultradiscrete_limit():
    t0 = time.perf_counter()
    lams = (1e-1, 1e-2, 1e-3)
    ulp = 1e-15  # gaps that are already zero may wobble by rounding
    inputs = random_probe_inputs(120)
    worst = 0.0
    monotone = True
    for inp in inputs:
        g = [ud_limit_probe(inp, "scheme", lam) for lam in lams]
        monotone &= g[1] <= g[0] + ulp and g[2] <= g[1] + ulp
        worst = max(worst, g[-1])
    ident = max(abs(ud_limit_probe([1, 1], "max", lam) - lam * math.log(2)) for lam in lams)
    ok = monotone and worst <= 0.05 and ident <= 1e-12
    assert record(7, ok, time.perf_counter() - t0, None,
                  f"inputs={len(inputs)} decreasing={monotone} final_gap={worst:.2e}<=0.05 "
                  f"max_identity_err={ident:.1e}<=1e-12")


def test_08_finite_E_saturation():
    t0 = time.perf_counter()
    rng = np.random.default_rng(8)
    bad = 0
    for _ in range(100):
        bound = int(rng.integers(1, 10))
        U = rng.integers(-bound, bound + 1, (10, 10))
        V = rng.integers(-bound, bound + 1, (10, 10))
        A, F, Q = (int(x) for x in rng.integers(-5, 6, 3))
        al, be = (int(x) for x in rng.integers(0, 3, 2))
        p = UDParams(A=A, F=F, Q=Q, E=INF, alpha=al, beta=be)
        pe = UDParams(A=A, F=F, Q=Q, E=saturation_threshold(bound, p), alpha=al, beta=be)
        s = UDState.of(U, V)
        x, y = ud_step_full(s, pe), ud_step_einf(s, p)
        bad += not (np.array_equal(x.U, y.U) and np.array_equal(x.V, y.V))
    assert record(8, bad == 0, time.perf_counter() - t0, None, f"states=100 mismatches={bad}")


def test_09_tropical_consistency():
    t0 = time.perf_counter()
    lin = OregonatorParams(a=1.0, f=1.0, q=1.0)
    ode = empirical_orders(consistency_order("ode", lin, (0.5, 0.2), (1e-2, 5e-3, 2.5e-3), 1.0))

    def u0(X, Y):
        return 0.5 + 0.2 * np.sin(2 * np.pi * X) * np.cos(2 * np.pi * Y)

    def v0(X, Y):
        return 0.3 + 0.1 * np.cos(2 * np.pi * X)

    pde_p = OregonatorParams(a=1.0, f=1.0, q=1.0, Du=0.05, Dv=0.05)
    pde = empirical_orders(consistency_order("pde", pde_p, (u0, v0), horizon=0.5,
                                             cells=(8, 16, 32), alpha=1, beta=1))
    rng = np.random.default_rng(9)
    u = rng.uniform(0.1, 1, (32, 32))
    v = rng.uniform(0.1, 1, (32, 32))
    m0 = field_sum(u)
    drift = 0.0
    diff = OregonatorParams(a=0.0, degenerate=True)
    for _ in range(500):
        u, v = trop_pde_step(u, v, diff, TropicalStepParams(eps=0.05), PERIODIC)
        drift = max(drift, abs(field_sum(u) - m0) / m0)
    ok = all(0.8 <= o <= 1.2 for o in ode + pde) and drift <= 1e-12
    assert record(9, ok, time.perf_counter() - t0, None,
                  "ode_orders=" + ",".join(f"{o:.3f}" for o in ode)
                  + " pde_orders=" + ",".join(f"{o:.3f}" for o in pde)
                  + f" in[0.8,1.2] mass_drift={drift:.1e}<=1e-12")


def test_10_oscillation():
    t0 = time.perf_counter()
    p = OregonatorParams(a=25.0, f=1.5, q=8e-4)
    eps = 1e-3
    rows = trop_ode_run(0.5, 0.2, p, eps, int(50 / eps))
    peaks = [x for t, x in local_maxima(rows[:, 1], rows[:, 2]) if t > 20]
    spread = (max(peaks) - min(peaks)) / max(peaks) if len(peaks) >= 2 else math.inf
    bounded = bool(np.isfinite(rows).all() and rows[:, 2:].max() < 10)
    ok = len(peaks) >= 3 and spread <= 0.05 and bounded
    assert record(10, ok, time.perf_counter() - t0, 10.0,
                  f"eps={eps:g} maxima_after_t20={len(peaks)} spread={spread:.2e}<=0.05 "
                  f"bounded={bounded}")


def test_11_closed_form():
    t0 = time.perf_counter()
    worst = 0.0
    div_bad = 0
    for p1 in range(-4, 5):
        for p2 in range(-4, 5):
            seq = psi_recursion(p1, p2, 30)
            worst = max(worst, max(abs(psi_closed_form(p1, p2, n) - seq[n - 1])
                                   for n in range(1, 31)))
            div_bad += (abs(seq[-1]) > 1000) != ((p1, p2) != (0, 0))
    ok = worst <= 1e-6 and div_bad == 0
    assert record(11, ok, time.perf_counter() - t0, None,
                  f"max_err={worst:.1e}<=1e-6 grid=9x9 divergence_mismatches={div_bad}")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
