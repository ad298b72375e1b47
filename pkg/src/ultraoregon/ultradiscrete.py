"""Max-plus lattice maps obtained from the tropical scheme as lambda -> +0.

All maps act on int64 fields and are exact.  ``E = +inf`` is carried as the
distinguished value :data:`INF`; every ``-E`` term is then dropped from the
max it belongs to instead of being evaluated with a sentinel.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .grid import PERIODIC, BoundaryRule, check_guard, int_field, max5, INT_GUARD

INF = math.inf


def is_inf(E) -> bool:
    return isinstance(E, float) and math.isinf(E) and E > 0


@dataclass(frozen=True)
class UDParams:
    A: int = 0
    F: int = 1
    Q: int = -1
    E: float | int = INF
    alpha: int = 1
    beta: int = 0

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("stencil offsets must be >= 0")
        for name in ("A", "F", "Q"):
            x = getattr(self, name)
            if int(x) != x or abs(x) > INT_GUARD:
                raise ValueError(f"{name} must be an integer within the guard")
        if is_inf(self.E):
            return
        if isinstance(self.E, float) and not math.isfinite(self.E):
            raise ValueError("E must be an integer within the guard or +inf")
        if int(self.E) != self.E or abs(self.E) > INT_GUARD:
            raise ValueError("E must be an integer within the guard or +inf")

    def require_ca_regime(self):
        if not self.Q < 0 < self.F:
            raise ValueError("cellular-automaton mode needs Q < 0 < F")


@dataclass(frozen=True)
class UDState:
    U: np.ndarray
    V: np.ndarray

    def __post_init__(self):
        if self.U.shape != self.V.shape:
            raise ValueError("U and V layers must have matching shapes")

    @classmethod
    def of(cls, U, V) -> "UDState":
        return cls(int_field(U), int_field(V))


def ud_step_full(s: UDState, p: UDParams, b: BoundaryRule = PERIODIC) -> UDState:
    """Max-plus image of the lattice scheme with finite (or infinite) ``E``."""
    if is_inf(p.E):
        return ud_step_einf(s, p, b)
    A, F, Q, E = int(p.A), int(p.F), int(p.Q), int(p.E)
    Ma = max5(s.U, p.alpha, b)
    Mbv = max5(s.V, p.beta, b)
    Mbu = max5(s.U, p.beta, b)
    g = np.maximum(Ma, Q)
    num = np.maximum.reduce([Ma - E, A + Ma, A + F + Q + s.V - g])
    den = np.maximum.reduce([np.full_like(Ma, -E), A + Ma, A + F + s.V - g])
    U = num - den
    V = np.maximum(Mbv - E, Mbu) - max(-E, 0)
    return UDState(check_guard(U), check_guard(V))


def ud_step_einf(s: UDState, p: UDParams, b: BoundaryRule = PERIODIC) -> UDState:
    F, Q = int(p.F), int(p.Q)
    Ma = max5(s.U, p.alpha, b)
    g = np.maximum(Ma, Q)
    U = np.maximum(Ma, F + Q + s.V - g) - np.maximum(Ma, F + s.V - g)
    V = max5(s.U, p.beta, b)
    return UDState(check_guard(U), check_guard(V))


def ud_step_single(U_n, U_nm1, p: UDParams, b: BoundaryRule = PERIODIC) -> np.ndarray:
    """Second-order form: ``V_n`` is replaced by ``M_beta(U_{n-1})``."""
    U_n = np.asarray(U_n, dtype=np.int64)
    U_nm1 = np.asarray(U_nm1, dtype=np.int64)
    if U_n.shape != U_nm1.shape:
        raise ValueError("layers must have matching shapes")
    F, Q = int(p.F), int(p.Q)
    Ma = max5(U_n, p.alpha, b)
    Mb = max5(U_nm1, p.beta, b)
    g = np.maximum(Ma, Q)
    return check_guard(np.maximum(Ma, F + Q + Mb - g) - np.maximum(Ma, F + Mb - g))


def ud_run_single(U0, U1, p: UDParams, steps: int, b: BoundaryRule = PERIODIC) -> list[np.ndarray]:
    layers = [int_field(U0), int_field(U1)]
    if layers[0].shape != layers[1].shape:
        raise ValueError("layers must have matching shapes")
    for _ in range(steps):
        layers.append(ud_step_single(layers[-1], layers[-2], p, b))
    return layers


def saturation_threshold(bound: int, p: UDParams) -> int:
    """An ``E`` from which the finite-E map coincides with the E = +inf map on states bounded by ``bound``."""
    return 4 * int(bound) + abs(int(p.A)) + abs(int(p.F)) + abs(int(p.Q)) + 1


# lambda -> +0 probe ---------------------------------------------------------

def _lse(lam: float, exps: Sequence[float]) -> float:
    """``lam * log(sum(exp(x / lam)))`` evaluated with the largest exponent factored out."""
    xs = [x for x in exps if not (isinstance(x, float) and math.isinf(x) and x < 0)]
    m = max(xs)
    return m + lam * math.log(math.fsum(math.exp((x - m) / lam) for x in xs))


def tropical_log_image(U, V, A, F, Q, E, lam: float) -> tuple[float, float]:
    """``lam * log`` of one tropical ODE step at ``u = exp(U/lam)``, ``v = exp(V/lam)``, etc.

    Products become sums of exponents, sums become stabilised log-sum-exps,
    quotients become differences, so nothing overflows for small ``lam``.
    """
    mE = -INF if is_inf(E) else -E        # exponent of 1/eps
    uq = _lse(lam, [U, Q])                 # u + q
    num_u = _lse(lam, [U + mE, A + U, A + F + Q + V - uq])
    den_u = _lse(lam, [mE, A + U, A + F + V - uq])
    num_v = _lse(lam, [V + mE, U])
    den_v = _lse(lam, [mE, 0.0])
    return num_u - den_u, num_v - den_v


def ud_scalar_full(U, V, A, F, Q, E) -> tuple[int, int]:
    """Scalar (alpha = beta = 0) max-plus map, the lambda -> +0 limit of :func:`tropical_log_image`."""
    g = max(U, Q)
    if is_inf(E):
        return (max(U, F + Q + V - g) - max(U, F + V - g), U)
    return (max(U - E, A + U, A + F + Q + V - g) - max(-E, A + U, A + F + V - g),
            max(V - E, U) - max(-E, 0))


def ud_limit_probe(inputs: Sequence, selector: str, lam: float) -> float:
    """Gap between ``lam * log`` of a tropical expression and its max-plus limit.

    ``selector="max"``: ``inputs`` is a list of exponents, the expression is
    ``sum(exp(x / lam))`` and the limit ``max(inputs)``; the gap is non-negative.

    ``selector="scheme"``: ``inputs = (U, V, A, F, Q, E)``, the expression is one
    step of the tropical ODE scheme and the limit the max-plus map; the gap is
    the larger absolute difference over the two components.
    """
    if not lam > 0:
        raise ValueError("lambda must be > 0")
    if selector == "max":
        xs = [float(x) for x in inputs]
        return _lse(lam, xs) - max(xs)
    if selector == "scheme":
        U, V, A, F, Q, E = inputs
        tu, tv = tropical_log_image(U, V, A, F, Q, E, lam)
        uu, uv = ud_scalar_full(U, V, A, F, Q, E)
        return max(abs(tu - uu), abs(tv - uv))
    raise ValueError(f"unknown selector {selector!r}")
