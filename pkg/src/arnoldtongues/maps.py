"""Degree-one circle map lifts of the standard two-parameter sine family.

The family is

    F(x) = x + a + (b / 2 pi) * sin(2 pi x)

which commutes with integer translation, F(x + 1) = F(x) + 1.  For b <= 1
the lift is nondecreasing.  For b > 1 it has one decreasing lap per period
and the monotone upper and lower envelopes acquire a plateau.  Everything
downstream (rotation numbers, tongue boundaries, sweeps) is built on the
three things this module provides: pointwise evaluation with derivatives,
the critical set, and the two monotone envelopes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from .errors import CriticalPointError, RootBracketError
from .solvers import bisect_root

TWO_PI = 2.0 * math.pi

PLUS = "plus"
MINUS = "minus"

ArrayLike = Union[float, np.ndarray]

# Below this |F'| the Schwarzian derivative is considered singular.
DERIV_FLOOR = 1e-9


@dataclass(frozen=True)
class Params:
    """Parameter pair (a, b) with b >= 0.

    a is the rigid translation part, b the nonlinearity amplitude.
    """

    a: float
    b: float

    def __post_init__(self) -> None:
        if not (self.b >= 0.0):
            raise ValueError(f"amplitude b must be >= 0, got {self.b!r}")
        if not math.isfinite(self.a):
            raise ValueError(f"offset a must be finite, got {self.a!r}")
        if not math.isfinite(self.b):
            raise ValueError(f"amplitude b must be finite, got {self.b!r}")


@dataclass(frozen=True)
class CriticalSet:
    """Critical points of the lift in [0, 1), with a degeneracy flag.

    points is () for b < 1, (1/2,) for b == 1 (a degenerate inflection
    with F' = 0 but no sign change), and (x_max, x_min) for b > 1 where
    x_max < x_min are the local maximum and minimum of one period.
    """

    points: Tuple[float, ...]
    degenerate: bool


def eval_lift(p: Params, x: ArrayLike) -> ArrayLike:
    """Value of the lift at x.  Accepts scalars or arrays."""
    return x + p.a + (p.b / TWO_PI) * np.sin(TWO_PI * np.asarray(x, dtype=float))


def deriv(p: Params, x: ArrayLike, order: int = 1) -> ArrayLike:
    """Derivative of the lift of the given order (1, 2 or 3)."""
    xv = np.asarray(x, dtype=float)
    if order == 1:
        return 1.0 + p.b * np.cos(TWO_PI * xv)
    if order == 2:
        return -TWO_PI * p.b * np.sin(TWO_PI * xv)
    if order == 3:
        return -TWO_PI * TWO_PI * p.b * np.cos(TWO_PI * xv)
    raise ValueError(f"order must be 1, 2 or 3, got {order!r}")


def schwarzian(p: Params, x: ArrayLike) -> ArrayLike:
    """Schwarzian derivative F'''/F' - (3/2)(F''/F')^2 of the lift.

    Raises CriticalPointError if |F'| < 1e-9 anywhere in x, since the
    expression blows up there.
    """
    xv = np.asarray(x, dtype=float)
    d1 = deriv(p, xv, 1)
    if np.any(np.abs(d1) < DERIV_FLOOR):
        raise CriticalPointError(
            "Schwarzian derivative requested within 1e-9 of a critical point"
        )
    d2 = deriv(p, xv, 2)
    d3 = deriv(p, xv, 3)
    r = d2 / d1
    out = d3 / d1 - 1.5 * r * r
    if np.isscalar(x) or np.ndim(x) == 0:
        return float(out)
    return out


def critical_points(p: Params) -> CriticalSet:
    """Critical set of the lift in the fundamental interval [0, 1).

    For b > 1 the lap where F' < 0 is exactly the open interval between
    the two returned points.
    """
    if p.b < 1.0:
        return CriticalSet(points=(), degenerate=False)
    if p.b == 1.0:
        return CriticalSet(points=(0.5,), degenerate=True)
    # Solutions of cos(2 pi x) = -1/b in [0, 1): one in (1/4, 1/2),
    # its mirror 1 - x in (1/2, 3/4).
    x_max = math.acos(-1.0 / p.b) / TWO_PI
    x_min = 1.0 - x_max
    return CriticalSet(points=(x_max, x_min), degenerate=False)


@dataclass(frozen=True)
class MonotoneLift:
    """A nondecreasing degree-one lift, possibly with one plateau per period.

    For b <= 1 this is the raw lift itself and the plateau fields are None.
    For b > 1 the upper envelope is constant on [plateau_start, plateau_end]
    at plateau_value, and the lower envelope is constant on the reflected
    interval.  Both envelopes still commute with integer translation, so a
    single plateau description covers the whole line.
    """

    base: Params
    which: str
    plateau_start: Optional[float]
    plateau_end: Optional[float]
    plateau_value: Optional[float]

    def eval(self, x: ArrayLike) -> ArrayLike:
        """Evaluate the monotone lift at x (scalar or array)."""
        if self.plateau_start is None:
            return eval_lift(self.base, x)
        xv = np.asarray(x, dtype=float)
        if self.which == PLUS:
            # Fold into [plateau_start, plateau_start + 1): the plateau is
            # the initial segment [plateau_start, plateau_end] of the window.
            n = np.floor(xv - self.plateau_start)
            t = xv - n
            flat = t <= self.plateau_end
        else:
            # Window [plateau_end - 1, plateau_end): the plateau is the final
            # segment [plateau_start, plateau_end] of the window.
            wstart = self.plateau_end - 1.0
            n = np.floor(xv - wstart)
            t = xv - n
            flat = t >= self.plateau_start
        val = np.where(flat, self.plateau_value, eval_lift(self.base, t)) + n
        if np.isscalar(x) or np.ndim(x) == 0:
            return float(val)
        return val


def envelope(p: Params, which: str) -> MonotoneLift:
    """Upper ("plus") or lower ("minus") monotone envelope of the lift.

    The upper envelope is sup over y <= x of F(y), the lower envelope is
    inf over y >= x of F(y).  For b <= 1 both coincide with F itself.
    """
    if which not in (PLUS, MINUS):
        raise ValueError(f"which must be {PLUS!r} or {MINUS!r}, got {which!r}")
    if p.b <= 1.0:
        return MonotoneLift(
            base=p, which=which, plateau_start=None, plateau_end=None, plateau_value=None
        )
    cs = critical_points(p)
    x_max, x_min = cs.points
    if which == PLUS:
        # The upper envelope holds the local maximum value F(x_max) until the
        # rising branch past x_min catches up with it.
        value = float(eval_lift(p, x_max))
        try:
            s = bisect_root(
                lambda t: float(eval_lift(p, t)) - value,
                x_min,
                x_max + 1.0,
                tol=1e-14,
            )
        except RootBracketError:
            # F(x_min) <= value <= F(x_max + 1) always holds, so the bracket
            # can only fail through rounding at the endpoints.
            raise
        return MonotoneLift(
            base=p, which=PLUS, plateau_start=x_max, plateau_end=s, plateau_value=value
        )
    # Lower envelope: holds F(x_min) from the point s' on the rising branch
    # before x_max where F first reaches that value.
    value = float(eval_lift(p, x_min))
    s_prime = bisect_root(
        lambda t: float(eval_lift(p, t)) - value,
        x_min - 1.0,
        x_max,
        tol=1e-14,
    )
    return MonotoneLift(
        base=p, which=MINUS, plateau_start=s_prime, plateau_end=x_min, plateau_value=value
    )
