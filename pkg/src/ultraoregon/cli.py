"""Command-line front end.

    ultraoregon trop ode|pde ...
    ultraoregon ud ...
    ultraoregon ca run ...
    ultraoregon zerodim classify|equilibria ...
    ultraoregon verify [suite]

Every option can also come from ``--config FILE.json``; keys are the long
option names (``fixed-value`` or ``fixed_value``) and options given on the
command line take precedence.  Exit status: 0 success, 2 invalid input,
3 numeric domain error, 4 failed verification.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import io as fio
from .automaton import (RULES, Custom, PreconditionError, SingleRing, Spiral, Target, ca_run,
                        resolve_spiral, seed_pattern)
from .grid import PERIODIC, DomainError, Fixed, GuardError, field_sum
from .patterns import periodicity_report, ring_report, segment_endpoints, spiral_signature
from .tropical import OregonatorParams, TropicalStepParams, trop_ode_run, trop_pde_step
from .ultradiscrete import INF, UDParams, UDState, ud_step_full, ud_step_single
from .verify import SUITES, format_check, run_suite
from .zerodim import ZeroDimParams, attractor_classify, equilibria

EXIT_OK, EXIT_INVALID, EXIT_DOMAIN, EXIT_VERIFY = 0, 2, 3, 4


class UsageError(ValueError):
    pass


def parse_E(text) -> float | int:
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        if isinstance(text, float) and math.isinf(text) and text > 0:
            return INF
        if int(text) != text:
            raise argparse.ArgumentTypeError("E must be an integer or 'inf'")
        return int(text)
    s = str(text).strip().lower()
    if s in ("inf", "+inf", "infinity"):
        return INF
    try:
        return int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"E must be an integer or 'inf', got {text!r}") from None


def _grid_opts(p: argparse.ArgumentParser, default: int):
    p.add_argument("--size", type=int, default=default, help="square grid side (default %(default)s)")
    p.add_argument("--width", type=int, help="grid width, overrides --size")
    p.add_argument("--height", type=int, help="grid height, overrides --size")


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", type=Path, help="JSON file with option values")
    p.add_argument("--out", type=Path, help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ultraoregon",
                                     description="Tropical / ultradiscrete Oregonator toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    # trop
    trop = sub.add_parser("trop", help="tropical difference schemes")
    tsub = trop.add_subparsers(dest="mode", required=True)
    for mode in ("ode", "pde"):
        p = tsub.add_parser(mode)
        _common(p)
        p.add_argument("--a", type=float, default=25.0)
        p.add_argument("--f", type=float, default=1.5)
        p.add_argument("--q", type=float, default=8e-4)
        p.add_argument("--eps", type=float, default=1e-3)
        p.add_argument("--steps", type=int, default=100)
        p.add_argument("--u0", type=float, default=0.5)
        p.add_argument("--v0", type=float, default=0.2)
        if mode == "pde":
            _grid_opts(p, 32)
            p.add_argument("--alpha", type=int, default=1)
            p.add_argument("--beta", type=int, default=1)
            p.add_argument("--boundary", choices=("periodic", "fixed"), default="periodic")
            p.add_argument("--fixed-value", type=float, default=0.0)
            p.add_argument("--init", choices=("uniform", "bump", "random"), default="bump")
            p.add_argument("--amp", type=float, default=0.2, help="perturbation amplitude")
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--every", type=int, default=1, help="write every n-th frame")
            p.add_argument("--csv", action="store_true", help="also write fields.csv")
        p.set_defaults(_parser=p, handler=cmd_trop)

    # ud
    p = sub.add_parser("ud", help="max-plus lattice maps")
    _common(p)
    _grid_opts(p, 16)
    p.add_argument("--mode", choices=("full", "single"), default="single")
    p.add_argument("--A", type=int, default=0)
    p.add_argument("--F", type=int, default=1)
    p.add_argument("--Q", type=int, default=-1)
    p.add_argument("--E", type=parse_E, default=INF, help="integer or 'inf'")
    p.add_argument("--alpha", type=int, default=1)
    p.add_argument("--beta", type=int, default=0)
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--boundary", choices=("periodic", "fixed"), default="periodic")
    p.add_argument("--fixed-value", type=int, default=0)
    p.add_argument("--init", choices=("zeros", "random", "file"), default="zeros")
    p.add_argument("--bound", type=int, default=3, help="random init draws from [-bound, bound]")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--layer0", type=Path, help="U (full) or U_{n-1} (single); .pgm/.pbm/.csv")
    p.add_argument("--layer1", type=Path, help="V (full) or U_n (single)")
    p.add_argument("--csv", action="store_true", help="also write fields.csv")
    p.set_defaults(_parser=p, handler=cmd_ud)

    # ca
    ca = sub.add_parser("ca", help="binary cellular automaton")
    csub = ca.add_subparsers(dest="mode", required=True)
    p = csub.add_parser("run")
    _common(p)
    _grid_opts(p, 21)
    p.add_argument("--pattern", choices=("ring", "target", "spiral", "custom"), default="ring")
    p.add_argument("--steps", type=int, default=8)
    p.add_argument("--rule", choices=RULES, default="simple")
    p.add_argument("--alpha", type=int)
    p.add_argument("--beta", type=int)
    p.add_argument("--F", type=int, default=1)
    p.add_argument("--Q", type=int, default=-1)
    p.add_argument("--prev", type=Path, help="custom pattern: W_{n-1} as PBM")
    p.add_argument("--curr", type=Path, help="custom pattern: W_n as PBM")
    p.add_argument("--ascii", action="store_true", help="render frames to stdout")
    p.set_defaults(_parser=p, handler=cmd_ca)

    # zerodim
    zd = sub.add_parser("zerodim", help="diffusion-free integer map")
    zsub = zd.add_subparsers(dest="mode", required=True)
    p = zsub.add_parser("classify")
    _common(p)
    p.add_argument("--F", type=int, required=False, default=1)
    p.add_argument("--Q", type=int, required=False, default=3)
    p.add_argument("--u0", type=int, default=0)
    p.add_argument("--u1", type=int, default=0)
    p.add_argument("--max-iter", type=int, default=1000)
    p.set_defaults(_parser=p, handler=cmd_zerodim)
    p = zsub.add_parser("equilibria")
    _common(p)
    p.add_argument("--F", type=float, default=1.0)
    p.add_argument("--Q", type=float, default=3.0)
    p.set_defaults(_parser=p, handler=cmd_zerodim)

    # verify
    p = sub.add_parser("verify", help="run property suites")
    _common(p)
    p.add_argument("suite", nargs="?", default="all", choices=("all", *SUITES))
    p.set_defaults(_parser=p, handler=cmd_verify)
    return parser


# -- configuration -------------------------------------------------------------

def _explicit_dests(parser: argparse.ArgumentParser, argv: Sequence[str]) -> set[str]:
    seen = set()
    for action in parser._actions:
        for opt in action.option_strings:
            if any(tok == opt or tok.startswith(opt + "=") for tok in argv):
                seen.add(action.dest)
    return seen


def apply_config(ns: argparse.Namespace, argv: Sequence[str]) -> argparse.Namespace:
    parser = ns._parser
    explicit = _explicit_dests(parser, argv)
    if ns.config is not None:
        try:
            cfg = json.loads(Path(ns.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {ns.config}: {exc}") from None
        if not isinstance(cfg, dict):
            raise UsageError("config must be a JSON object")
        actions = {a.dest: a for a in parser._actions if a.option_strings}
        for key, value in cfg.items():
            dest = key.lstrip("-").replace("-", "_")
            if dest not in actions or dest in ("config", "help"):
                raise UsageError(f"config key {key!r} is not an option of this command")
            if dest in explicit:
                continue
            action = actions[dest]
            if action.type is not None and value is not None and not isinstance(value, bool):
                try:
                    value = action.type(value)
                except (TypeError, ValueError, argparse.ArgumentTypeError) as exc:
                    raise UsageError(f"config key {key!r}: {exc}") from None
            if action.choices is not None and value not in action.choices:
                raise UsageError(f"config key {key!r}: {value!r} not in {list(action.choices)}")
            setattr(ns, dest, value)
    if hasattr(ns, "size"):
        if ns.width is None:
            ns.width = ns.size
        if ns.height is None:
            ns.height = ns.size
        if ns.width < 1 or ns.height < 1:
            raise UsageError("grid must be at least 1x1")
    if getattr(ns, "steps", 0) is not None and getattr(ns, "steps", 0) < 0:
        raise UsageError("steps must be >= 0")
    return ns


def _outdir(ns) -> Optional[Path]:
    if ns.out is None:
        return None
    ns.out.mkdir(parents=True, exist_ok=True)
    return ns.out


def _fmt(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


# -- commands ------------------------------------------------------------------

def cmd_trop(ns) -> int:
    p = OregonatorParams(a=ns.a, f=ns.f, q=ns.q, degenerate=ns.a == 0)
    if not ns.eps > 0:
        raise UsageError("eps must be > 0")
    if not (ns.u0 > 0 and ns.v0 > 0):
        raise DomainError("initial u0 and v0 must be > 0")
    out = _outdir(ns)
    if ns.mode == "ode":
        rows = trop_ode_run(ns.u0, ns.v0, p, ns.eps, ns.steps)
        table = [(int(n), float(t), float(u), float(v)) for n, t, u, v in rows]
        if out is None:
            print("n,t,u,v")
            for r in table:
                print(",".join([str(r[0])] + [repr(x) for x in r[1:]]))
        else:
            fio.write_table_csv(out / "trop_ode.csv", ["n", "t", "u", "v"], table)
            print(f"wrote {out / 'trop_ode.csv'} rows={len(table)}")
        print(f"summary steps={ns.steps} u={table[-1][2]!r} v={table[-1][3]!r}",
              file=sys.stderr if out is None else sys.stdout)
        return EXIT_OK

    if ns.every < 1:
        raise UsageError("every must be >= 1")
    sp = TropicalStepParams(eps=ns.eps, alpha=ns.alpha, beta=ns.beta)
    boundary = PERIODIC if ns.boundary == "periodic" else Fixed(ns.fixed_value)
    shape = (ns.height, ns.width)
    if ns.init == "uniform":
        u = np.full(shape, ns.u0)
        v = np.full(shape, ns.v0)
    elif ns.init == "bump":
        kk, jj = np.indices(shape)
        r2 = ((kk - shape[0] / 2) ** 2 + (jj - shape[1] / 2) ** 2) / (0.1 * min(shape)) ** 2
        u = ns.u0 * (1 + ns.amp * np.exp(-r2))
        v = np.full(shape, ns.v0)
    else:
        rng = np.random.default_rng(ns.seed)
        u = ns.u0 * (1 + ns.amp * rng.uniform(-1, 1, shape))
        v = ns.v0 * (1 + ns.amp * rng.uniform(-1, 1, shape))
    sums = [(0, field_sum(u), field_sum(v))]
    frames = [(0, u, v)]
    for n in range(1, ns.steps + 1):
        u, v = trop_pde_step(u, v, p, sp, boundary)
        sums.append((n, field_sum(u), field_sum(v)))
        if n % ns.every == 0:
            frames.append((n, u, v))
    if out is not None:
        for name, idx in (("u", 1), ("v", 2)):
            (out / name).mkdir(exist_ok=True)
            for fr in frames:
                fio.write_pgm(out / name / f"frame_{fr[0]:06d}.pgm", fr[idx])
        fio.write_table_csv(out / "sums.csv", ["n", "sum_u", "sum_v"], sums)
        if ns.csv:
            fio.write_field_csv(out / "fields.csv", [fr[1] for fr in frames])
    m0 = sums[0][1]
    drift = max(abs(s - m0) for _, s, _ in sums) / m0
    print(f"summary steps={ns.steps} frames={len(frames)} sum_u0={m0!r} "
          f"sum_u_final={sums[-1][1]!r} max_rel_drift_u={drift:.3e}")
    return EXIT_OK


def _ud_initial(ns):
    shape = (ns.height, ns.width)
    if ns.init == "zeros":
        return np.zeros(shape, dtype=np.int64), np.zeros(shape, dtype=np.int64)
    if ns.init == "random":
        rng = np.random.default_rng(ns.seed)
        return (rng.integers(-ns.bound, ns.bound + 1, shape),
                rng.integers(-ns.bound, ns.bound + 1, shape))
    if ns.layer0 is None or ns.layer1 is None:
        raise UsageError("--init file needs --layer0 and --layer1")
    a, b = fio.load_layer(ns.layer0), fio.load_layer(ns.layer1)
    if a.shape != b.shape:
        raise UsageError(f"layer sizes differ: {a.shape} vs {b.shape}")
    return a, b


def cmd_ud(ns) -> int:
    try:
        p = UDParams(A=ns.A, F=ns.F, Q=ns.Q, E=ns.E, alpha=ns.alpha, beta=ns.beta)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    boundary = PERIODIC if ns.boundary == "periodic" else Fixed(ns.fixed_value)
    L0, L1 = _ud_initial(ns)
    if ns.mode == "single":
        frames = [np.asarray(L0, dtype=np.int64), np.asarray(L1, dtype=np.int64)]
        for _ in range(ns.steps):
            frames.append(ud_step_single(frames[-1], frames[-2], p, boundary))
        series = {"U": frames}
    else:
        s = UDState.of(L0, L1)
        us, vs = [s.U], [s.V]
        for _ in range(ns.steps):
            s = ud_step_full(s, p, boundary)
            us.append(s.U)
            vs.append(s.V)
        series = {"U": us, "V": vs}
    out = _outdir(ns)
    if out is not None:
        for name, frames in series.items():
            (out / name).mkdir(exist_ok=True)
            for n, fr in enumerate(frames):
                fio.write_pgm(out / name / f"frame_{n:06d}.pgm", fr)
            if ns.csv:
                fio.write_field_csv(out / f"{name}.csv", frames)
    last = series["U"][-1]
    print(f"summary mode={ns.mode} steps={ns.steps} E={'inf' if p.E == INF else int(p.E)} "
          f"U_min={int(last.min())} U_max={int(last.max())}")
    return EXIT_OK


def _ca_seed(ns):
    if ns.pattern == "ring":
        return SingleRing()
    if ns.pattern == "target":
        return Target()
    if ns.pattern == "spiral":
        kw = {k: getattr(ns, k) for k in ("alpha", "beta") if getattr(ns, k) is not None}
        return Spiral(**kw)
    if ns.prev is None or ns.curr is None:
        raise UsageError("--pattern custom needs --prev and --curr")
    return Custom(fio.read_pbm(ns.prev), fio.read_pbm(ns.curr))


def cmd_ca(ns) -> int:
    kind = _ca_seed(ns)
    if ns.rule == "tsu" and (ns.alpha not in (None, 1) or ns.beta not in (None, 0)):
        raise UsageError("the tsu rule is fixed to alpha=1, beta=0")
    if ns.rule == "simple" and ns.F != 1:
        raise UsageError("the simple rule needs F=1 (use --rule full)")
    if isinstance(kind, Spiral):
        try:
            kind = resolve_spiral(kind, ns.width, ns.height)
        except LookupError as exc:
            print(f"warning: {exc}; using the requested seed", file=sys.stderr)
    state = seed_pattern(kind, ns.width, ns.height, search=False,
                         steps=ns.steps if ns.pattern in ("ring", "target") else None)
    if isinstance(kind, Custom) and state.w_curr.shape != (ns.height, ns.width):
        ns.height, ns.width = state.w_curr.shape
    if ns.alpha is not None:
        state.alpha = ns.alpha
    if ns.beta is not None:
        state.beta = ns.beta
    frames = ca_run(state, ns.rule, ns.steps, F=ns.F, Q=ns.Q)
    out = _outdir(ns)
    if out is not None:
        for n, fr in enumerate(frames):
            fio.write_pbm(out / f"frame_{n:06d}.pbm", fr)
    if ns.ascii:
        for n, fr in enumerate(frames):
            print(f"frame {n}")
            print(fio.ascii_frame(fr))
    lit = int(frames[-1].sum())
    print(f"summary pattern={ns.pattern} rule={ns.rule} alpha={state.alpha} beta={state.beta} "
          f"steps={ns.steps} lit={lit}")
    centre = (ns.height // 2, ns.width // 2)
    if ns.pattern == "ring":
        rows = ring_report(frames, centre)
        ok = all(r["front_is_sphere"] for r in rows)
        print(f"ring front {'matches' if ok else 'does not match'} the L1 sphere for n<={ns.steps}")
    elif ns.pattern == "target":
        rep = periodicity_report(frames, 4)
        if rep["ok"]:
            print("period 4 confirmed")
        else:
            print(f"period 4 not confirmed (violations={rep['violations']})")
    elif ns.pattern == "spiral":
        sig = spiral_signature(frames, segment_endpoints(kind, ns.width, ns.height))
        cores = [c for c in sig["cores"] if c is not None]
        desc = "; ".join(f"({c.k:g},{c.j:g}) sense {c.sense:+d} from step {c.start}" for c in cores)
        print(f"spiral seed offset={kind.offset} trim={kind.trim}")
        print(("spiral cores confirmed: " if sig["ok"] else "spiral signature not found: ")
              + (desc or "none"))
    return EXIT_OK


def _eq_label(value, F, Q) -> str:
    if value == 0:
        return "0"
    if value == Q:
        return f"Q={_fmt(value)}"
    if value == F:
        return f"F={_fmt(value)}"
    return _fmt(value)


def cmd_zerodim(ns) -> int:
    if ns.mode == "equilibria":
        eqs = equilibria(ns.F, ns.Q)
        parts = [f"{_eq_label(e.value, ns.F, ns.Q)} {e.tag}" for e in eqs]
        if not any(e.stable for e in eqs):
            parts.append("no stable equilibria")
        print("; ".join(parts) if parts else "no equilibria")
        return EXIT_OK
    p = ZeroDimParams(ns.F, ns.Q)
    p.require_periodic_regime()
    if ns.max_iter < 1:
        raise UsageError("max-iter must be >= 1")
    c = attractor_classify(ns.u0, ns.u1, p, max_iter=ns.max_iter)
    print(c.attractor.describe())
    out = _outdir(ns)
    if out is not None:
        traj = c.trajectory
        fio.write_table_csv(out / "trajectory.csv", ["n", "U", "psi"],
                            [(n, u, "" if n == 0 else traj[n - 1] - u) for n, u in enumerate(traj)])
        fio.write_table_csv(out / "transitions.csv", ["n", "psi_n", "psi_n1", "cell"],
                            [(t.n, t.psi[0], t.psi[1], t.label) for t in c.transitions])
        print(f"wrote {out / 'trajectory.csv'} rows={len(traj)}")
    return EXIT_OK


def cmd_verify(ns) -> int:
    checks = run_suite(ns.suite)
    for c in checks:
        print(format_check(c))
    passed = sum(c.passed for c in checks)
    print(f"verify {ns.suite}: {passed}/{len(checks)} passed")
    return EXIT_OK if passed == len(checks) else EXIT_VERIFY


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        ns = apply_config(ns, argv)
        return ns.handler(ns)
    except (DomainError, GuardError) as exc:
        print(f"error: numeric domain: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ValueError, LookupError, OSError) as exc:
        kind = "precondition" if isinstance(exc, PreconditionError) else "invalid input"
        print(f"error: {kind}: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
