"""Diffusion-free ultradiscrete Oregonator: a second-order integer map.

    U_{n+1} = max(U_n, F + Q + U_{n-1} - max(U_n, Q)) - max(U_n, F + U_{n-1} - max(U_n, Q))

For integers ``0 < F < Q`` every orbit except the constant ``F`` ends on the
period-2 cycle ``0, Q, 0, Q, ...``.  Write ``psi_n = U_{n-1} - U_n``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .grid import INT_GUARD, GuardError

SQRT5 = math.sqrt(5.0)
PHI = (1.0 + SQRT5) / 2.0


@dataclass(frozen=True)
class ZeroDimParams:
    F: int
    Q: int

    def require_periodic_regime(self):
        if int(self.F) != self.F or int(self.Q) != self.Q:
            raise ValueError("F and Q must be integers")
        if not 0 < self.F < self.Q:
            raise ValueError("periodic-solution analysis needs 0 < F < Q")


@dataclass(frozen=True)
class OdeState:
    u_prev: int
    u_curr: int

    @property
    def psi(self) -> int:
        return self.u_prev - self.u_curr


def _guard(x: int) -> int:
    if abs(x) > INT_GUARD:
        raise GuardError(f"|{x}| exceeds the 2**40 guard")
    return x


def ud_ode_step(s: OdeState, p: ZeroDimParams) -> int:
    u0, u1 = _guard(s.u_prev), _guard(s.u_curr)
    F, Q = p.F, p.Q
    g = max(u1, Q)
    return _guard(max(u1, F + Q + u0 - g) - max(u1, F + u0 - g))


def _ramp(x: int, Q: int) -> tuple[int, str]:
    """``max(0, x) - max(0, x - Q)`` by branches."""
    if Q >= 0:
        if x <= 0:
            return 0, "0"
        if x >= Q:
            return Q, "Q"
        return x, "linear"
    if x - Q <= 0:
        return 0, "0"
    if x > 0:
        return Q, "Q"
    return Q - x, "linear"


def piecewise_step(s: OdeState, p: ZeroDimParams) -> tuple[int, str]:
    """Evaluate the map through its case split; returns ``(value, label)``.

    Case I (``U_n >= Q``) gives ``0``, ``F + Q + U_{n-1} - 2 U_n`` or ``Q``
    depending on the sign of that quantity and of ``F + U_{n-1} - 2 U_n``;
    case II (``U_n < Q``) gives ``0``, ``F + psi`` or ``Q`` by comparing
    ``psi`` with ``-F`` and ``Q - F``.  Both reduce to
    ``max(0, x) - max(0, x - Q)``; for ``Q < 0`` the middle branch is
    ``Q - x`` instead of ``x``.  Labels read ``"I:0"``, ``"II:linear"``, ...
    """
    u0, u1 = s.u_prev, s.u_curr
    F, Q = p.F, p.Q
    if u1 >= Q:
        value, branch = _ramp(F + Q + u0 - 2 * u1, Q)
        return value, "I:" + branch
    value, branch = _ramp(F + (u0 - u1), Q)
    return value, "II:" + branch


@dataclass(frozen=True)
class Equilibrium:
    value: float
    stable: bool
    regions: tuple[str, ...]

    @property
    def tag(self) -> str:
        return "stable" if self.stable else "unstable"


def equilibria(F: float, Q: float) -> list[Equilibrium]:
    """Equilibria of the diffusion-free map with their stability and region labels.

    Region I assumes ``U >= Q`` and admits 0 (``F + Q <= 0`` and ``F <= 0``) or
    Q (``F >= 0`` and ``F >= Q``); region II assumes ``U <= Q`` and admits 0
    (``F <= Q`` and ``F <= 0``), F (``0 < F < Q``) or Q (``F >= 0`` and
    ``F >= Q``).  A candidate is kept only when it lies in its region.  0 and Q
    are stable, F unstable.
    """
    found: dict[float, tuple[bool, list[str]]] = {}

    def add(value, stable, region):
        inside = value >= Q if region == "I" else value <= Q
        if not inside:
            return
        st, regs = found.setdefault(value, (stable, []))
        regs.append(region)

    if F + Q <= 0 and F <= 0:
        add(0, True, "I")
    if F >= 0 and F >= Q:
        add(Q, True, "I")
    if F <= Q and F <= 0:
        add(0, True, "II")
    if 0 < F < Q:
        add(F, False, "II")
    if F >= 0 and F >= Q:
        add(Q, True, "II")
    return [Equilibrium(v, st, tuple(regs)) for v, (st, regs) in sorted(found.items())]


class Interval(Enum):
    I1 = 1   # (-inf, -F]
    I2 = 2   # (-F, Q - F)
    I3 = 3   # [Q - F, inf)


def classify_interval(psi: int, p: ZeroDimParams) -> Interval:
    if psi <= -p.F:
        return Interval.I1
    if psi < p.Q - p.F:
        return Interval.I2
    return Interval.I3


def psi_recursion(psi1: int, psi2: int, n: int) -> list[int]:
    """``psi_1 .. psi_n`` of ``psi_{k+2} = psi_k - psi_{k+1}``."""
    seq = [psi1, psi2]
    while len(seq) < n:
        seq.append(seq[-2] - seq[-1])
    return seq[:n]


def psi_constants(psi1: float, psi2: float) -> tuple[float, float]:
    """Coefficients of ``(-phi)^(n-1)`` and ``(1/phi)^(n-1)`` fitted to ``psi_1, psi_2``.

    Solving ``c1 + c2 = psi1`` and ``-phi c1 + c2 / phi = psi2`` gives
    ``c1 = (psi1 / phi - psi2) / sqrt5`` and ``c2 = (phi psi1 + psi2) / sqrt5``.
    """
    c1 = (psi1 / PHI - psi2) / SQRT5
    c2 = (PHI * psi1 + psi2) / SQRT5
    return c1, c2


def psi_closed_form(psi1: float, psi2: float, n: int) -> float:
    if n < 1:
        raise ValueError("n must be >= 1")
    c1, c2 = psi_constants(psi1, psi2)
    return c1 * (-PHI) ** (n - 1) + c2 * (1.0 / PHI) ** (n - 1)


class AttractorKind(str, Enum):
    PERIOD2 = "Period2"
    CONSTANT_F = "ConstantF"
    STABLE_EQUILIBRIUM = "StableEquilibrium"
    UNDECIDED = "Undecided"


@dataclass
class Attractor:
    kind: AttractorKind
    entry: Optional[int] = None        # first n with the settled behaviour from U_n on
    values: tuple[int, ...] = ()

    def describe(self) -> str:
        if self.kind is AttractorKind.PERIOD2:
            return f"Period2 {{{','.join(map(str, self.values))}}} at step {self.entry}"
        if self.kind is AttractorKind.CONSTANT_F:
            return "ConstantF"
        if self.kind is AttractorKind.STABLE_EQUILIBRIUM:
            return f"StableEquilibrium {self.values[0]} at step {self.entry}"
        return "Undecided"


@dataclass
class Transition:
    n: int                 # pair (psi_n, psi_{n+1})
    psi: tuple[int, int]
    cell: tuple[Interval, Interval]

    @property
    def label(self) -> str:
        return f"{self.cell[0].value}-{self.cell[1].value}"


@dataclass
class Classification:
    attractor: Attractor
    trajectory: list[int]
    transitions: list[Transition] = field(default_factory=list)


def trajectory(u0: int, u1: int, p: ZeroDimParams, steps: int) -> list[int]:
    traj = [u0, u1]
    for _ in range(steps):
        traj.append(ud_ode_step(OdeState(traj[-2], traj[-1]), p))
    return traj


def attractor_classify(u0: int, u1: int, p: ZeroDimParams, max_iter: int = 1000) -> Classification:
    """Iterate until the state pair settles, then label every ``(psi_n, psi_{n+1})`` pair.

    Period 2 is reported once a pair ``(0, Q)`` or ``(Q, 0)`` has been seen and
    two further full periods have been confirmed.  Outside ``0 < F < Q`` a
    repeated constant pair is reported as a stable equilibrium.
    """
    F, Q = p.F, p.Q
    traj = [int(u0), int(u1)]
    result = None
    entry = None
    for _ in range(max_iter):
        a, b = traj[-2], traj[-1]
        n = len(traj) - 2
        if a == b and ud_ode_step(OdeState(a, b), p) == b:
            if b == F and 0 < F < Q:
                result = Attractor(AttractorKind.CONSTANT_F, entry=n, values=(F,))
            else:
                result = Attractor(AttractorKind.STABLE_EQUILIBRIUM, entry=n, values=(b,))
            break
        if entry is None and {a, b} == {0, Q} and Q != 0:
            entry = n
        if entry is not None and len(traj) - entry >= 6:
            tail = traj[entry:]
            if all(tail[i] == tail[i % 2] for i in range(len(tail))):
                result = Attractor(AttractorKind.PERIOD2, entry=entry, values=(0, Q))
                break
            entry = None
        traj.append(ud_ode_step(OdeState(a, b), p))
    if result is None:
        result = Attractor(AttractorKind.UNDECIDED)
    psis = [traj[i - 1] - traj[i] for i in range(1, len(traj))]   # psi_1 ..
    transitions = [
        Transition(i + 1, (psis[i], psis[i + 1]),
                   (classify_interval(psis[i], p), classify_interval(psis[i + 1], p)))
        for i in range(len(psis) - 1)
    ]
    return Classification(result, traj, transitions)


def perturbation_check(F: int, Q: int, eq: Equilibrium, steps: int = 50) -> dict:
    """Run every (+/-1, 0) two-layer perturbation of an integer equilibrium.

    Stable: all runs return to the value within ``steps``.  Unstable: all runs
    leave it and end on the period-2 cycle.
    """
    p = ZeroDimParams(F, Q)
    v = int(eq.value)
    outcomes = []
    for d0 in (-1, 0, 1):
        for d1 in (-1, 0, 1):
            if d0 == d1 == 0:
                continue
            traj = trajectory(v + d0, v + d1, p, steps)
            returned = traj[-2] == traj[-1] == v
            c = attractor_classify(v + d0, v + d1, p, max_iter=steps)
            outcomes.append({"start": (v + d0, v + d1), "returned": returned,
                             "attractor": c.attractor.describe()})
    if eq.stable:
        ok = all(o["returned"] for o in outcomes)
    else:
        ok = all(not o["returned"] and o["attractor"].startswith("Period2") for o in outcomes)
    return {"value": v, "tag": eq.tag, "ok": ok, "runs": outcomes}
