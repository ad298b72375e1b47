"""Positivity-preserving tropical difference schemes for the two-variable Oregonator.

The continuous model is

    du/dt = Du * lap(u) + a * (u (1 - u) - f v (u - q) / (u + q))
    dv/dt = Dv * lap(v) + u - v

Every update below is a ratio of sums of positive terms, so positive data stay
positive and the ``x = exp(X / lambda)`` substitution has a max-plus limit.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .grid import PERIODIC, BoundaryRule, DomainError, mean5, real_field


@dataclass(frozen=True)
class OregonatorParams:
    a: float = 25.0
    f: float = 1.5
    q: float = 8e-4
    Du: float = 0.0
    Dv: float = 0.0
    degenerate: bool = False  # admits a = 0 (reaction switched off), tests only

    def __post_init__(self):
        if self.a < 0 or (self.a == 0 and not self.degenerate):
            raise ValueError("a must be > 0 (a = 0 needs degenerate=True)")
        if self.f <= 0 or self.q <= 0:
            raise ValueError("f and q must be > 0")
        if self.Du < 0 or self.Dv < 0:
            raise ValueError("diffusion coefficients must be >= 0")


@dataclass(frozen=True)
class TropicalStepParams:
    eps: float
    alpha: int = 1
    beta: int = 1

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError("eps must be > 0")
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("stencil offsets must be >= 0")


def _check_positive(*values):
    for x in values:
        if not np.all(np.asarray(x) > 0):
            raise DomainError("tropical scheme needs strictly positive u and v")


def _reaction_ratio(um, v, p: OregonatorParams, inv_eps):
    # u-update with the (possibly averaged) activator um in place of u
    num = inv_eps * um + p.a * um + p.a * p.f * p.q * v / (um + p.q)
    den = inv_eps + p.a * um + p.a * p.f * v / (um + p.q)
    return num / den


def trop_ode_step(u: float, v: float, p: OregonatorParams, eps: float) -> tuple[float, float]:
    if not eps > 0:
        raise ValueError("eps must be > 0")
    _check_positive(u, v)
    inv_eps = 1.0 / eps
    u_next = _reaction_ratio(u, v, p, inv_eps)
    v_next = (inv_eps * v + u) / (inv_eps + 1.0)
    return float(u_next), float(v_next)


def trop_pde_step(u, v, p: OregonatorParams, sp: TropicalStepParams,
                  boundary: BoundaryRule = PERIODIC) -> tuple[np.ndarray, np.ndarray]:
    """One lattice step: diffusion by the five-point mean, reaction by the tropical ratio."""
    u = real_field(u)
    v = real_field(v)
    if u.shape != v.shape:
        raise ValueError("u and v must have the same shape")
    _check_positive(u, v)
    inv_eps = 1.0 / sp.eps
    um = mean5(u, sp.alpha, boundary)
    u_next = _reaction_ratio(um, v, p, inv_eps)
    v_next = (inv_eps * mean5(v, sp.beta, boundary) + mean5(u, sp.beta, boundary)) / (inv_eps + 1.0)
    return u_next, v_next


def trop_ode_run(u0: float, v0: float, p: OregonatorParams, eps: float, steps: int) -> np.ndarray:
    """Iterate :func:`trop_ode_step`; rows are ``(n, t = n * eps, u, v)``."""
    out = np.empty((steps + 1, 4))
    u, v = float(u0), float(v0)
    _check_positive(u, v)
    out[0] = (0, 0.0, u, v)
    for n in range(1, steps + 1):
        u, v = trop_ode_step(u, v, p, eps)
        out[n] = (n, n * eps, u, v)
    return out


def _rhs(p: OregonatorParams):
    a, f, q = p.a, p.f, p.q

    def rhs(t, y):
        u, v = y
        return [a * (u * (1.0 - u) - f * v * (u - q) / (u + q)), u - v]

    return rhs


@dataclass
class Trajectory:
    t: np.ndarray
    u: np.ndarray
    v: np.ndarray
    sol: object = None

    def __call__(self, t):
        """Dense evaluation, returns ``(u(t), v(t))``."""
        y = self.sol(t)
        return y[0], y[1]


def ode_reference(u0: float, v0: float, p: OregonatorParams, t_end: float,
                  tol: float = 1e-10, samples: int = 2001) -> Trajectory:
    """High-accuracy oracle for the diffusion-free model (implicit Radau, dense output)."""
    _check_positive(u0, v0)
    if not t_end > 0:
        raise ValueError("t_end must be > 0")
    sol = solve_ivp(_rhs(p), (0.0, t_end), [u0, v0], method="Radau",
                    rtol=tol, atol=tol * 1e-2, dense_output=True)
    if not sol.success:
        raise DomainError(f"reference integration failed: {sol.message}")
    t = np.linspace(0.0, t_end, samples)
    y = sol.sol(t)
    return Trajectory(t=t, u=y[0], v=y[1], sol=sol.sol)


def local_maxima(t: np.ndarray, x: np.ndarray) -> list[tuple[float, float]]:
    i = np.nonzero((x[1:-1] > x[:-2]) & (x[1:-1] >= x[2:]))[0] + 1
    return [(float(t[k]), float(x[k])) for k in i]


def _spectral_rd_reference(u0, v0, p: OregonatorParams, t_end, tol):
    """Pseudo-spectral method of lines on the periodic unit square."""
    n = u0.shape[0]
    kx = 2 * np.pi * np.fft.fftfreq(n, d=1.0 / n)
    lap = -(kx[:, None] ** 2 + kx[None, :] ** 2)
    a, f, q = p.a, p.f, p.q

    def rhs(t, y):
        u = y[: n * n].reshape(n, n)
        v = y[n * n:].reshape(n, n)
        du = p.Du * np.real(np.fft.ifft2(lap * np.fft.fft2(u)))
        dv = p.Dv * np.real(np.fft.ifft2(lap * np.fft.fft2(v)))
        du += a * (u * (1 - u) - f * v * (u - q) / (u + q))
        dv += u - v
        return np.concatenate([du.ravel(), dv.ravel()])

    sol = solve_ivp(rhs, (0.0, t_end), np.concatenate([u0.ravel(), v0.ravel()]),
                    method="DOP853", rtol=tol, atol=tol * 1e-2)
    if not sol.success:
        raise DomainError(f"reference integration failed: {sol.message}")
    y = sol.y[:, -1]
    return y[: n * n].reshape(n, n), y[n * n:].reshape(n, n)


def pde_lattice_eps(p: OregonatorParams, cells: int, alpha: int) -> float:
    """Step size tying the five-point mean to ``Du``: ``Du = alpha^2 dx^2 / (5 eps)``, ``dx = 1/cells``."""
    if p.Du <= 0:
        raise ValueError("PDE consistency needs Du > 0")
    return alpha**2 / (5.0 * p.Du * cells**2)


def consistency_order(scheme: str, p: OregonatorParams, state, eps_list: Sequence[float] = (),
                      horizon: float = 1.0, tol: float = 1e-10, **kw) -> list[tuple[float, float]]:
    """Distance between the tropical scheme and the continuous model at ``horizon``.

    ``scheme="ode"``: ``state = (u0, v0)``; one scheme run per entry of
    ``eps_list`` (strictly decreasing, ``horizon / eps`` integral), error is the
    max-norm gap in ``(u, v)`` to :func:`ode_reference`.

    ``scheme="pde"``: ``state = (u0_fn, v0_fn)`` callables on the periodic unit
    square, ``kw`` gives ``cells`` (increasing grid sizes) and ``alpha``,
    ``beta``.  Each grid fixes ``eps`` through :func:`pde_lattice_eps`, so
    ``Dv / Du`` must equal ``beta^2 / alpha^2``.  The reference is a spectral
    solution on the finest grid, sampled at the coarse points.
    """
    if scheme == "ode":
        eps_list = list(eps_list)
        if any(e <= 0 for e in eps_list) or any(b >= a for a, b in zip(eps_list, eps_list[1:])):
            raise ValueError("eps_list must be strictly decreasing and positive")
        u0, v0 = state
        ref = ode_reference(u0, v0, p, horizon, tol=tol)
        ur, vr = ref(horizon)
        out = []
        for eps in eps_list:
            steps = int(round(horizon / eps))
            if abs(steps * eps - horizon) > 1e-9 * horizon:
                raise ValueError(f"horizon {horizon} is not a multiple of eps {eps}")
            u, v = float(u0), float(v0)
            for _ in range(steps):
                u, v = trop_ode_step(u, v, p, eps)
            out.append((eps, max(abs(u - ur), abs(v - vr))))
        return out
    if scheme == "pde":
        cells = list(kw["cells"])
        alpha, beta = int(kw.get("alpha", 1)), int(kw.get("beta", 1))
        if any(b <= a for a, b in zip(cells, cells[1:])):
            raise ValueError("cells must be strictly increasing")
        if not np.isclose(p.Dv * alpha**2, p.Du * beta**2):
            raise ValueError("lattice ties Dv/Du to beta^2/alpha^2")
        u_fn, v_fn = state
        fine = cells[-1]
        if any(fine % c for c in cells):
            raise ValueError("every grid must divide the finest grid")
        x = np.arange(fine) / fine
        X, Y = np.meshgrid(x, x, indexing="xy")
        ur, vr = _spectral_rd_reference(u_fn(X, Y), v_fn(X, Y), p, horizon, tol)
        out = []
        for c in cells:
            eps = pde_lattice_eps(p, c, alpha)
            steps = int(round(horizon / eps))
            if abs(steps * eps - horizon) > 1e-9 * horizon:
                raise ValueError(f"horizon {horizon} is not a multiple of eps {eps}")
            xs = np.arange(c) / c
            Xc, Yc = np.meshgrid(xs, xs, indexing="xy")
            u, v = u_fn(Xc, Yc), v_fn(Xc, Yc)
            sp = TropicalStepParams(eps=eps, alpha=alpha, beta=beta)
            for _ in range(steps):
                u, v = trop_pde_step(u, v, p, sp, PERIODIC)
            stride = fine // c
            err = max(np.max(np.abs(u - ur[::stride, ::stride])),
                      np.max(np.abs(v - vr[::stride, ::stride])))
            out.append((eps, float(err)))
        return out
    raise ValueError(f"unknown scheme {scheme!r}")


def empirical_orders(errors: Sequence[tuple[float, float]]) -> list[float]:
    """Observed order between consecutive ``(eps, error)`` pairs."""
    return [float(np.log(e0 / e1) / np.log(h0 / h1))
            for (h0, e0), (h1, e1) in zip(errors, errors[1:])]
