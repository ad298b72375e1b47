"""Binary two-layer cellular automaton derived from the ultradiscrete Oregonator.

With ``Q = -1, F = 1`` and initial layers in ``{-1, 0}`` the single max-plus
equation keeps values in ``{-1, 0}``; shifting by ``-Q`` gives a {0, 1}
automaton whose state per cell is the pair ``(W_{n-1}, W_n)``.

Transition of the simplified rule (and of the Takahashi-Shida-Usami rule with
``M_1(Y_n)``, ``Y_{n-1}`` in the header)::

    M_alpha(W_n), M_beta(W_{n-1}) | 0,0  0,1  1,0  1,1
    W_{n+1}                       |  0    0    1    0
"""
from __future__ import annotations

import os
from dataclasses import dataclass, replace
from typing import Callable, Optional, Union

import numpy as np

from .grid import BoundaryRule, Fixed, check_guard, int_field, max5

ZERO = Fixed(0)


class PreconditionError(ValueError):
    """Rule applied outside the binary regime it was derived for."""


@dataclass(frozen=True)
class Pacemaker:
    k: int
    j: int
    sequence: tuple[int, ...] = (1, 1, 0, 0)

    def value(self, n: int) -> int:
        return self.sequence[n % len(self.sequence)]


@dataclass
class CAState:
    w_prev: np.ndarray
    w_curr: np.ndarray
    n: int = 0
    pacemaker: Optional[Pacemaker] = None
    alpha: int = 1
    beta: int = 0

    def __post_init__(self):
        self.w_prev = int_field(self.w_prev)
        self.w_curr = int_field(self.w_curr)
        if self.w_prev.shape != self.w_curr.shape:
            raise ValueError("layers must have matching shapes")
        check_binary(self.w_prev, self.w_curr)

    @property
    def shape(self):
        return self.w_curr.shape


def check_binary(*layers):
    for w in layers:
        if not np.all((w == 0) | (w == 1)):
            raise PreconditionError("automaton layers must be binary (values in {0, 1})")


# -- seeds -------------------------------------------------------------------

@dataclass(frozen=True)
class SingleRing:
    pass


@dataclass(frozen=True)
class Target:
    sequence: tuple[int, ...] = (1, 1, 0, 0)


@dataclass(frozen=True)
class Spiral:
    """Horizontal segment of 1s in ``W_n`` with a copy displaced by ``offset`` in ``W_{n-1}``.

    ``offset`` is ``(dk, dj)``; the documented default is a one-cell horizontal
    displacement, and :func:`seed_pattern` searches alternatives when that
    seed does not show the rotating-core signature.
    """
    length: int = 21
    offset: tuple[int, int] = (0, 1)
    trim: tuple[int, int] = (0, 0)
    centre: Optional[tuple[int, int]] = None
    alpha: int = 1
    beta: int = 1


@dataclass(frozen=True)
class Custom:
    w_prev: np.ndarray
    w_curr: np.ndarray


PatternSeed = Union[SingleRing, Target, Spiral, Custom]


def w_shift(U, Q: int) -> np.ndarray:
    return check_guard(np.asarray(U, dtype=np.int64) - int(Q))


def ca_step_full(s: CAState, F: int = 1, Q: int = -1, alpha: Optional[int] = None,
                 beta: Optional[int] = None, b: BoundaryRule = ZERO) -> np.ndarray:
    """Unsimplified shifted rule (no binary assumption)."""
    alpha = s.alpha if alpha is None else alpha
    beta = s.beta if beta is None else beta
    Ma = max5(s.w_curr, alpha, b)
    Mb = max5(s.w_prev, beta, b)
    inner = F + Mb - Ma
    return check_guard(np.maximum(Ma, inner) - np.maximum(Ma + Q, inner))


def ca_step_simple(s: CAState, F: int = 1, alpha: Optional[int] = None,
                   beta: Optional[int] = None, b: BoundaryRule = ZERO) -> np.ndarray:
    check_binary(s.w_prev, s.w_curr)
    if F != 1:
        raise PreconditionError("the simplified rule was derived for F = 1")
    alpha = s.alpha if alpha is None else alpha
    beta = s.beta if beta is None else beta
    Ma = max5(s.w_curr, alpha, b)
    Mb = max5(s.w_prev, beta, b)
    return np.maximum(2 * Ma - Mb - F, 0)


def tsu_step(Y_curr, Y_prev, b: BoundaryRule = ZERO) -> np.ndarray:
    """Takahashi-Shida-Usami max-plus rule ``max(M_1(Y_n) - Y_{n-1}, 0)``."""
    Y_curr = np.asarray(Y_curr, dtype=np.int64)
    Y_prev = np.asarray(Y_prev, dtype=np.int64)
    check_binary(Y_curr, Y_prev)
    return np.maximum(max5(Y_curr, 1, b) - Y_prev, 0)


def tsu_step_sixpoint(Y_curr, Y_prev, b: BoundaryRule = ZERO) -> np.ndarray:
    """The same rule in its original six-argument form ``max(M_1(Y_n), Y_{n-1}) - Y_{n-1}``."""
    Y_curr = np.asarray(Y_curr, dtype=np.int64)
    Y_prev = np.asarray(Y_prev, dtype=np.int64)
    return np.maximum(max5(Y_curr, 1, b), Y_prev) - Y_prev


RULES = ("simple", "full", "tsu")


def _stepper(rule: str, F: int, Q: int, b: BoundaryRule) -> Callable[[CAState], np.ndarray]:
    if rule == "simple":
        return lambda s: ca_step_simple(s, F, b=b)
    if rule == "full":
        return lambda s: ca_step_full(s, F, Q, b=b)
    if rule == "tsu":
        return lambda s: tsu_step(s.w_curr, s.w_prev, b)
    raise ValueError(f"unknown rule {rule!r}; expected one of {RULES}")


def ca_run(seed: CAState, rule: str = "simple", steps: int = 0,
           pacemaker: Optional[Pacemaker] = None, F: int = 1, Q: int = -1,
           b: BoundaryRule = ZERO) -> list[np.ndarray]:
    """Frames ``W_n, W_{n+1}, ..., W_{n+steps}``; the pacemaker cell is overwritten after every step."""
    step = _stepper(rule, F, Q, b)
    pacemaker = pacemaker or seed.pacemaker
    s = replace(seed, w_prev=seed.w_prev.copy(), w_curr=seed.w_curr.copy())
    frames = [s.w_curr.copy()]
    for _ in range(steps):
        nxt = step(s)
        if pacemaker is not None:
            nxt[pacemaker.k, pacemaker.j] = pacemaker.value(s.n + 1)
        check_binary(nxt)
        s = replace(s, w_prev=s.w_curr, w_curr=nxt, n=s.n + 1)
        frames.append(nxt.copy())
    return frames


def _centre(width, height):
    return height // 2, width // 2


def _spiral_layers(kind: Spiral, width: int, height: int):
    ck, cj = kind.centre or _centre(width, height)
    lo, hi = kind.trim
    length = kind.length - lo - hi
    if length < 1:
        raise ValueError("spiral segment trimmed away")
    j0 = cj - kind.length // 2 + lo
    dk, dj = kind.offset
    cells = [(ck, j) for j in range(j0, j0 + length)]
    prev_cells = [(k + dk, j + dj) for k, j in cells]
    for k, j in cells + prev_cells:
        if not (0 <= k < height and 0 <= j < width):
            raise ValueError("spiral seed does not fit in the grid")
    w_curr = np.zeros((height, width), dtype=np.int64)
    w_prev = np.zeros_like(w_curr)
    for k, j in cells:
        w_curr[k, j] = 1
    for k, j in prev_cells:
        w_prev[k, j] = 1
    return w_prev, w_curr


def search_enabled() -> bool:
    return os.environ.get("OREGONATOR_SEED_SEARCH", "on").strip().lower() != "off"


def resolve_spiral(kind: Spiral, width: int, height: int, search: Optional[bool] = None) -> Spiral:
    """The spiral seed actually used: ``kind`` itself, or the search result when enabled."""
    if search is None:
        search = search_enabled()
    if not search:
        return kind
    from .patterns import search_spiral_seed
    return search_spiral_seed(kind, width, height)


def seed_pattern(kind: PatternSeed, width: int, height: int, steps: Optional[int] = None,
                 search: Optional[bool] = None) -> CAState:
    """Initial two-layer state for a pattern preset.

    ``steps`` enables the margin check for ring and target seeds (fronts travel
    one cell per step and must not reach the wall).  Spiral seeds are checked
    against the rotating-core signature; on failure the deterministic search
    in :func:`search_spiral_seed` picks a replacement unless ``search`` is false
    or ``OREGONATOR_SEED_SEARCH=off``.
    """
    if width < 1 or height < 1:
        raise ValueError("grid must be at least 1x1")
    ck, cj = _centre(width, height)
    margin = min(ck, cj, height - 1 - ck, width - 1 - cj)
    if isinstance(kind, (SingleRing, Target)) and steps is not None and margin < steps:
        raise ValueError(f"seed margin {margin} < planned steps {steps}")
    if isinstance(kind, SingleRing):
        w_prev = np.zeros((height, width), dtype=np.int64)
        w_curr = w_prev.copy()
        w_curr[ck, cj] = 1
        return CAState(w_prev, w_curr, alpha=1, beta=0)
    if isinstance(kind, Target):
        w_prev = np.zeros((height, width), dtype=np.int64)
        w_curr = w_prev.copy()
        pm = Pacemaker(ck, cj, tuple(kind.sequence))
        w_curr[ck, cj] = pm.value(0)
        return CAState(w_prev, w_curr, pacemaker=pm, alpha=1, beta=0)
    if isinstance(kind, Spiral):
        kind = resolve_spiral(kind, width, height, search)
        w_prev, w_curr = _spiral_layers(kind, width, height)
        return CAState(w_prev, w_curr, alpha=kind.alpha, beta=kind.beta)
    if isinstance(kind, Custom):
        return CAState(kind.w_prev, kind.w_curr)
    raise TypeError(f"unknown seed {kind!r}")
