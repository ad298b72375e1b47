"""Property suites behind ``ultraoregon verify``.

Every check yields a :class:`Check`; :func:`format_check` renders it as one
``key=value`` line so the report can be grepped or parsed.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from .automaton import (CAState, SingleRing, Spiral, Target, ca_run, ca_step_full,
                        ca_step_simple, seed_pattern, tsu_step, w_shift)
from .grid import PERIODIC, Fixed, field_sum, mean5
from .patterns import (collision_report, periodicity_report, ring_report, segment_endpoints,
                       search_spiral_seed, spiral_collision_runs, spiral_signature)
from .tropical import (OregonatorParams, TropicalStepParams, consistency_order, empirical_orders,
                       local_maxima, trop_ode_run, trop_pde_step)
from .ultradiscrete import (INF, UDParams, UDState, saturation_threshold, ud_limit_probe,
                            ud_step_einf, ud_step_full, ud_step_single)
from .zerodim import (Interval, ZeroDimParams, OdeState, attractor_classify, equilibria,
                      perturbation_check, piecewise_step, psi_closed_form, psi_recursion,
                      ud_ode_step)

LAMBDAS = (1e-1, 1e-2, 1e-3)


@dataclass
class Check:
    name: str
    passed: bool
    count: int = 0
    tolerance: str = "exact"
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0


def format_check(c: Check) -> str:
    extra = " ".join(f"{k}={v}" for k, v in c.detail.items())
    line = (f"{'PASS' if c.passed else 'FAIL'} {c.name} count={c.count} "
            f"tol={c.tolerance} time={c.seconds:.2f}s")
    return f"{line} {extra}".rstrip()


def _timed(fn: Callable[[], Check]) -> Check:
    t0 = time.perf_counter()
    c = fn()
    c.seconds = time.perf_counter() - t0
    return c


# -- automaton ---------------------------------------------------------------

def table_rows():
    """``(M_a(W_n), M_b(W_{n-1}), expected W_{n+1})`` for the four header columns."""
    return [(0, 0, 0), (0, 1, 0), (1, 0, 1), (1, 1, 0)]


def check_tables() -> Check:
    bad = []
    for ma, mb, want in table_rows():
        # with alpha = beta = 0 the stencil maxima are the cell values themselves
        s = CAState([[mb]], [[ma]], alpha=0, beta=0)
        got_simple = int(ca_step_simple(s)[0, 0])
        got_tsu = int(tsu_step([[ma]], [[mb]])[0, 0])
        if got_simple != want or got_tsu != want:
            bad.append((ma, mb))
    return Check("transition-tables", not bad, 4, detail={"mismatches": len(bad)})


def local_sweep_states() -> tuple[np.ndarray, np.ndarray]:
    """All 2^18 two-layer 3x3 configurations, tiled into one lattice.

    Each configuration sits in a 4x4 block whose last row and column are 0, so
    the five-point maximum at a block centre only sees its own block.
    """
    idx = np.arange(1 << 18, dtype=np.int64)
    bits = (idx[:, None] >> np.arange(18)) & 1
    curr = bits[:, :9].reshape(-1, 3, 3)
    prev = bits[:, 9:].reshape(-1, 3, 3)
    side = 512

    def tile(cfg):
        blocks = np.zeros((side * side, 4, 4), dtype=np.int64)
        blocks[:, :3, :3] = cfg
        return blocks.reshape(side, side, 4, 4).transpose(0, 2, 1, 3).reshape(4 * side, 4 * side)

    return tile(prev), tile(curr)


def random_states(count: int = 200, size: int = 16, seed: int = 2024) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    rng = np.random.default_rng(seed)
    for _ in range(count):
        yield rng.integers(0, 2, (size, size)), rng.integers(0, 2, (size, size))


def check_rule_equivalence() -> list[Check]:
    prev, curr = local_sweep_states()
    out = []
    mism = {"full~simple": 0, "simple~tsu": 0}
    for ab in ((1, 0), (1, 1)):
        s = CAState(prev, curr, alpha=ab[0], beta=ab[1])
        mism["full~simple"] += int((ca_step_full(s) != ca_step_simple(s)).sum())
    s = CAState(prev, curr, alpha=1, beta=0)
    mism["simple~tsu"] += int((ca_step_simple(s) != tsu_step(curr, prev)).sum())
    out.append(Check("ca-equiv-local-sweep", not any(mism.values()), 1 << 18,
                     detail={k + "_mismatches": v for k, v in mism.items()}))
    rmism = {"full~simple": 0, "simple~tsu": 0}
    for boundary in (Fixed(0), PERIODIC):
        for p, c in random_states():
            for ab in ((1, 0), (1, 1), (2, 1)):
                s = CAState(p, c, alpha=ab[0], beta=ab[1])
                rmism["full~simple"] += int((ca_step_full(s, b=boundary)
                                             != ca_step_simple(s, b=boundary)).sum())
            s = CAState(p, c, alpha=1, beta=0)
            rmism["simple~tsu"] += int((ca_step_simple(s, b=boundary)
                                        != tsu_step(c, p, boundary)).sum())
    out.append(Check("ca-equiv-random-16x16", not any(rmism.values()), 200,
                     detail={k + "_mismatches": v for k, v in rmism.items()}))
    return out


def check_shift_chain(count: int = 50, steps: int = 10, seed: int = 7) -> Check:
    """Second-order max-plus evolution on {-1, 0} data, shifted by +1, is the automaton run."""
    rng = np.random.default_rng(seed)
    bad = 0
    p = UDParams(F=1, Q=-1, alpha=1, beta=0)
    for _ in range(count):
        U0 = rng.integers(-1, 1, (12, 12))
        U1 = rng.integers(-1, 1, (12, 12))
        layers = [U0, U1]
        for _ in range(steps):
            layers.append(ud_step_single(layers[-1], layers[-2], p, Fixed(-1)))
        frames = ca_run(CAState(w_shift(U0, -1), w_shift(U1, -1)), "full", steps)
        bad += sum(not np.array_equal(w_shift(L, -1), W) for L, W in zip(layers[1:], frames))
    return Check("shift-chain", bad == 0, count, detail={"mismatched_frames": bad, "steps": steps})


def suite_ca_equiv() -> list[Check]:
    return [_timed(check_tables), *_rule_checks(), _timed(check_shift_chain)]


def _rule_checks():
    t0 = time.perf_counter()
    cs = check_rule_equivalence()
    dt = time.perf_counter() - t0
    for c in cs:
        c.seconds = dt / len(cs)
    return cs


def check_ring(size: int = 21, steps: int = 8) -> Check:
    s = seed_pattern(SingleRing(), size, size, steps=steps)
    frames = ca_run(s, "simple", steps)
    rows = ring_report(frames, (size // 2, size // 2))
    ok = all(r["front_is_sphere"] and r["band_is_annulus"] for r in rows)
    return Check("ring-front-l1-sphere", ok, steps, detail={"grid": f"{size}x{size}"})


def check_target(size: int = 41, steps: int = 16) -> Check:
    s = seed_pattern(Target(), size, size, steps=steps)
    rep = periodicity_report(ca_run(s, "simple", steps), 4)
    return Check("target-period-4", rep["ok"], rep["cells"],
                 detail={"violations": rep["violations"], "steps": steps})


def check_spiral(size: int = 81, steps: int = 60) -> list[Check]:
    chosen = search_spiral_seed(Spiral(), size, size)
    frames = ca_run(seed_pattern(chosen, size, size, search=False), "simple", steps)
    sig = spiral_signature(frames, segment_endpoints(chosen, size, size))
    cores = [f"({c.k:g},{c.j:g},{c.sense:+d},t{c.start})" for c in sig["cores"] if c is not None]
    a, b, c = spiral_collision_runs(size, size, steps)
    col = collision_report(a, b, c)
    return [
        Check("spiral-rotation", sig["ok"], len(cores),
              detail={"offset": "{},{}".format(*chosen.offset), "cores": ";".join(cores),
                      "run": sig["run_len"]}),
        Check("spiral-annihilation", col["ok"], col["contested_cells"],
              detail={k: v for k, v in col.items() if k.startswith("mismatch")}),
    ]


def suite_patterns() -> list[Check]:
    t0 = time.perf_counter()
    sp = check_spiral()
    for c in sp:
        c.seconds = (time.perf_counter() - t0) / 2
    return [_timed(check_ring), _timed(check_target), *sp]


# -- limits ------------------------------------------------------------------

def random_probe_inputs(count: int = 120, seed: int = 11) -> list[tuple]:
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        U, V, A, F, Q = (int(x) for x in rng.integers(-4, 5, 5))
        E = INF if rng.random() < 0.3 else int(rng.integers(0, 9))
        out.append((U, V, A, F, Q, E))
    return out


def check_limit_gaps(inputs=None, lambdas=LAMBDAS, final_tol: float = 0.05) -> Check:
    inputs = inputs if inputs is not None else random_probe_inputs()
    worst_final = 0.0
    non_monotone = 0
    for inp in inputs:
        gaps = [ud_limit_probe(inp, "scheme", lam) for lam in lambdas]
        if any(g1 > g0 + 1e-15 for g0, g1 in zip(gaps, gaps[1:])):
            non_monotone += 1
        worst_final = max(worst_final, gaps[-1])
    ok = non_monotone == 0 and worst_final <= final_tol
    return Check("limit-gap-decreasing", ok, len(inputs), tolerance=f"final<={final_tol}",
                 detail={"non_monotone": non_monotone, "worst_final_gap": f"{worst_final:.3g}"})


def check_max_identity(lambdas=LAMBDAS) -> Check:
    err = max(abs(ud_limit_probe([1, 1], "max", lam) - lam * math.log(2)) for lam in lambdas)
    return Check("limit-max-identity", err <= 1e-12, len(lambdas), tolerance="1e-12",
                 detail={"max_error": f"{err:.2e}"})


def random_ud_states(count: int = 100, size: int = 8, bound: int = 6, seed: int = 5):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        U = rng.integers(-bound, bound + 1, (size, size))
        V = rng.integers(-bound, bound + 1, (size, size))
        A, F, Q = (int(x) for x in rng.integers(-3, 4, 3))
        alpha, beta = (int(x) for x in rng.integers(0, 3, 2))
        yield UDState.of(U, V), UDParams(A=A, F=F, Q=Q, alpha=alpha, beta=beta), bound


def check_saturation() -> Check:
    bad = 0
    n = 0
    for s, p, bound in random_ud_states():
        E = saturation_threshold(bound, p)
        pe = UDParams(A=p.A, F=p.F, Q=p.Q, E=E, alpha=p.alpha, beta=p.beta)
        a, b = ud_step_full(s, pe), ud_step_einf(s, p)
        bad += not (np.array_equal(a.U, b.U) and np.array_equal(a.V, b.V))
        n += 1
    return Check("finite-E-saturation", bad == 0, n, detail={"mismatches": bad})


def suite_limits() -> list[Check]:
    return [_timed(check_limit_gaps), _timed(check_max_identity), _timed(check_saturation)]


# -- zero-dimensional ----------------------------------------------------------

def theorem_box():
    for F in range(1, 5):
        for Q in range(F + 1, 9):
            for u0 in range(-8, 9):
                for u1 in range(-8, 9):
                    yield F, Q, u0, u1


def check_theorem(max_iter: int = 200) -> Check:
    bad = []
    n = 0
    for F, Q, u0, u1 in theorem_box():
        c = attractor_classify(u0, u1, ZeroDimParams(F, Q), max_iter=max_iter)
        a = c.attractor
        n += 1
        if (u0, u1) == (F, F):
            ok = a.kind.value == "ConstantF"
        else:
            ok = a.kind.value == "Period2" and a.values == (0, Q)
        if not ok:
            bad.append((F, Q, u0, u1))
    return Check("period2-theorem", not bad, n, tolerance=f"iter<={max_iter}",
                 detail={"exceptions": len(bad)})


def check_transition_log(max_iter: int = 200) -> Check:
    """Runs through I2 x I2 follow the Fibonacci-type recursion; I1/I3 corner cells end in the 0/Q tail."""
    rec_bad = tail_bad = 0
    rec_n = tail_n = 0
    for F, Q, u0, u1 in theorem_box():
        p = ZeroDimParams(F, Q)
        c = attractor_classify(u0, u1, p, max_iter=max_iter)
        tr, traj = c.transitions, c.trajectory
        for i in range(len(tr) - 1):
            a, b = tr[i], tr[i + 1]
            both_i2 = all(x is Interval.I2 for x in a.cell + b.cell)
            # psi_m = traj[m-1] - traj[m]; transition a covers (psi_m, psi_{m+1}) with m = a.n
            m = a.n
            if both_i2:
                rec_n += 1
                rec_bad += b.psi[1] != a.psi[0] - a.psi[1]
            if a.cell in ((Interval.I1, Interval.I3), (Interval.I3, Interval.I1)):
                tail_n += 1
                tail = traj[m + 1:m + 7]
                if len(tail) >= 4 and not (set(tail[2:]) <= {0, Q}
                                           and all(x != y for x, y in zip(tail[2:], tail[3:]))):
                    tail_bad += 1
    ok = rec_bad == 0 and tail_bad == 0
    return Check("transition-log", ok, rec_n + tail_n,
                 detail={"recursion_runs": rec_n, "recursion_bad": rec_bad,
                         "corner_entries": tail_n, "corner_bad": tail_bad})


def check_piecewise() -> Check:
    bad = 0
    n = 0
    for F in range(-5, 6):
        for Q in range(-5, 6):
            p = ZeroDimParams(F, Q)
            for u0 in range(-10, 11):
                for u1 in range(-10, 11):
                    s = OdeState(u0, u1)
                    bad += piecewise_step(s, p)[0] != ud_ode_step(s, p)
                    n += 1
    return Check("piecewise-agreement", bad == 0, n, detail={"mismatches": bad})


def check_trapping() -> Check:
    trap_bad = exit_bad = 0
    n = 0
    for F in range(-5, 6):
        for Q in range(-5, 6):
            if not 0 < F < Q:
                continue
            p = ZeroDimParams(F, Q)
            for u0 in range(-10, 11):
                for u1 in range(-10, 11):
                    nxt = ud_ode_step(OdeState(u0, u1), p)
                    n += 1
                    if u1 <= Q:
                        trap_bad += nxt > Q
                    if u1 >= Q:
                        exit_bad += nxt > Q
    return Check("case-II-trapping", trap_bad == 0 and exit_bad == 0, n,
                 detail={"trap_violations": trap_bad, "caseI_exit_violations": exit_bad})


EQUILIBRIUM_EXAMPLES = {
    (-1, 1): [(0, "stable")],
    (2, 1): [(1, "stable")],
    (1, 3): [(1, "unstable")],
}


def check_equilibria() -> Check:
    bad = 0
    runs = 0
    for (F, Q), want in EQUILIBRIUM_EXAMPLES.items():
        got = equilibria(F, Q)
        bad += [(e.value, e.tag) for e in got] != want
        for e in got:
            rep = perturbation_check(F, Q, e, steps=50)
            runs += len(rep["runs"])
            bad += not rep["ok"]
    return Check("equilibria-tags", bad == 0, runs, detail={"failures": bad})


def check_closed_form(n_max: int = 30, tol: float = 1e-6) -> Check:
    worst = 0.0
    div_bad = 0
    for p1 in range(-4, 5):
        for p2 in range(-4, 5):
            seq = psi_recursion(p1, p2, n_max)
            for n in range(1, n_max + 1):
                worst = max(worst, abs(psi_closed_form(p1, p2, n) - seq[n - 1]))
            diverges = abs(seq[-1]) > 1000
            div_bad += diverges != ((p1, p2) != (0, 0))
    ok = worst <= tol and div_bad == 0
    return Check("closed-form", ok, 81, tolerance=f"{tol:g}",
                 detail={"max_error": f"{worst:.2e}", "divergence_mismatches": div_bad})


def suite_attractor() -> list[Check]:
    return [_timed(check_theorem), _timed(check_transition_log), _timed(check_piecewise),
            _timed(check_trapping), _timed(check_equilibria), _timed(check_closed_form)]


# -- continuous scheme -----------------------------------------------------------

def check_ode_order(lo: float = 0.8, hi: float = 1.2) -> Check:
    p = OregonatorParams(a=1.0, f=1.0, q=1.0)
    errs = consistency_order("ode", p, (0.5, 0.2), (1e-2, 5e-3, 2.5e-3), horizon=1.0)
    orders = empirical_orders(errs)
    ok = all(lo <= o <= hi for o in orders)
    return Check("ode-order", ok, len(errs), tolerance=f"[{lo},{hi}]",
                 detail={"orders": ",".join(f"{o:.3f}" for o in orders)})


def smooth_bump(X, Y):
    return 0.5 + 0.2 * np.sin(2 * np.pi * X) * np.cos(2 * np.pi * Y)


def smooth_bump_v(X, Y):
    return 0.3 + 0.1 * np.cos(2 * np.pi * X)


def check_pde_order(lo: float = 0.8, hi: float = 1.2) -> Check:
    p = OregonatorParams(a=1.0, f=1.0, q=1.0, Du=0.05, Dv=0.05)
    errs = consistency_order("pde", p, (smooth_bump, smooth_bump_v), horizon=0.5,
                             cells=(8, 16, 32), alpha=1, beta=1)
    orders = empirical_orders(errs)
    ok = all(lo <= o <= hi for o in orders)
    return Check("pde-order", ok, len(errs), tolerance=f"[{lo},{hi}]",
                 detail={"orders": ",".join(f"{o:.3f}" for o in orders)})


def check_mass(steps: int = 200, tol: float = 1e-12) -> Check:
    rng = np.random.default_rng(3)
    u = rng.uniform(0.1, 1.0, (24, 24))
    v = rng.uniform(0.1, 1.0, (24, 24))
    p = OregonatorParams(a=0.0, degenerate=True)
    sp = TropicalStepParams(eps=0.1, alpha=1, beta=1)
    m0 = field_sum(u)
    worst = 0.0
    for _ in range(steps):
        u, v = trop_pde_step(u, v, p, sp, PERIODIC)
        worst = max(worst, abs(field_sum(u) - m0) / m0)
    # the u-update is then exactly the five-point mean
    same = np.allclose(mean5(u, 1), trop_pde_step(u, v, p, sp)[0], rtol=0, atol=1e-15)
    return Check("diffusion-mass", worst <= tol and same, steps, tolerance=f"{tol:g} rel",
                 detail={"max_rel_drift": f"{worst:.2e}"})


def oscillation_summary(eps: float = 1e-3, horizon: float = 50.0, after: float = 20.0) -> dict:
    p = OregonatorParams(a=25.0, f=1.5, q=8e-4)
    rows = trop_ode_run(0.5, 0.2, p, eps, int(round(horizon / eps)))
    peaks = [(t, x) for t, x in local_maxima(rows[:, 1], rows[:, 2]) if t > after]
    vals = [x for _, x in peaks]
    spread = (max(vals) - min(vals)) / max(vals) if len(vals) >= 2 else math.inf
    periods = np.diff([t for t, _ in peaks])
    return {"peaks": len(vals), "spread": spread,
            "period": float(periods.mean()) if len(periods) else math.nan,
            "u_max": max(vals) if vals else math.nan,
            "bounded": bool(np.all(np.isfinite(rows[:, 2:])) and rows[:, 2:].max() < 10)}


def check_oscillation(tol: float = 0.05) -> Check:
    s = oscillation_summary()
    ok = s["peaks"] >= 3 and s["spread"] <= tol and s["bounded"]
    return Check("oscillation", ok, s["peaks"], tolerance=f"{tol:g}",
                 detail={"maxima_spread": f"{s['spread']:.3g}", "period": f"{s['period']:.3f}",
                         "u_max": f"{s['u_max']:.4f}"})


def suite_consistency() -> list[Check]:
    return [_timed(check_ode_order), _timed(check_pde_order), _timed(check_mass),
            _timed(check_oscillation)]


SUITES: dict[str, Callable[[], list[Check]]] = {
    "limits": suite_limits,
    "ca-equiv": suite_ca_equiv,
    "patterns": suite_patterns,
    "attractor": suite_attractor,
    "consistency": suite_consistency,
}


def run_suite(name: str) -> list[Check]:
    if name == "all":
        return [c for fn in SUITES.values() for c in fn()]
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; expected all or one of {sorted(SUITES)}")
    return SUITES[name]()
