"""Complexified coordinate contours and admissible asymptote angles.

Two path families are supported: straight lines through the origin whose
half-branches rise at a slope +/-phi, and U-shaped paths that descend along
the upper imaginary axis, circle below the origin at radius epsilon, and
ascend again.  Both satisfy the left-right symmetry x(-s) = -x*(s).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "StraightLine",
    "UShaped",
    "Contour",
    "AngleWindow",
    "evaluate",
    "derivatives",
    "pt_residual",
    "angle_window",
]


@dataclass(frozen=True)
class StraightLine:
    """Two half-lines from the origin: s*exp(i*phi) for s >= 0, s*exp(-i*phi) below."""

    phi: float = 0.0


@dataclass(frozen=True)
class UShaped:
    """Arc-length parametrized U path of width epsilon >= 0.

    epsilon = 0 is the degenerate fold (both branches on the upper imaginary
    axis); it is supported for evaluation and plotting only, not for
    discretization.
    """

    epsilon: float = 1.0

    def __post_init__(self):
        if self.epsilon < 0:
            raise DomainError(f"epsilon must be >= 0, got {self.epsilon}")

    @property
    def junction(self) -> float:
        """|s| value where the arc meets the straight branches."""
        return 0.5 * math.pi * self.epsilon


Contour = StraightLine | UShaped


@dataclass(frozen=True)
class AngleWindow:
    """Open interval of admissible slopes phi with its optimal midpoint."""

    lower: float
    upper: float
    optimal: float

    def contains(self, phi: float) -> bool:
        return self.lower < phi < self.upper


def _as_array(s):
    arr = np.asarray(s, dtype=float)
    return arr, arr.ndim == 0


def evaluate(contour: Contour, s):
    """Map the real path parameter s to the complex coordinate x(s).

    Accepts a scalar or array s and returns a matching complex result.
    """
    arr, scalar = _as_array(s)
    if isinstance(contour, StraightLine):
        up = np.exp(1j * contour.phi)
        down = np.exp(-1j * contour.phi)
        x = np.where(arr >= 0, arr * up, arr * down)
    else:
        eps = contour.epsilon
        if eps == 0.0:
            x = 1j * np.abs(arr)
        else:
            c = contour.junction
            x = np.empty(arr.shape, dtype=complex)
            left = arr < -c
            right = arr > c
            arc = ~(left | right)
            x[left] = -1j * (arr[left] + c) - eps
            x[right] = 1j * (arr[right] - c) + eps
            u = arr[arc] / eps
            # eps*exp(i(u - pi/2)) written in components so that the
            # reflection s -> -s conjugates the value exactly in floats
            x[arc] = eps * (np.sin(u) - 1j * np.cos(u))
    return complex(x) if scalar else x


def derivatives(contour: Contour, s):
    """First and second derivatives (x', x'') of the path at s.

    Branchwise analytic values.  At the junctions |s| = pi*eps/2 the arc-side
    value is reported; at the fold of a degenerate contour (eps = 0, s = 0)
    the upper-branch value is used.
    """
    arr, scalar = _as_array(s)
    if isinstance(contour, StraightLine):
        up = np.exp(1j * contour.phi)
        down = np.exp(-1j * contour.phi)
        xp = np.where(arr >= 0, up, down)
        xpp = np.zeros(arr.shape, dtype=complex)
    else:
        eps = contour.epsilon
        if eps == 0.0:
            xp = np.where(arr >= 0, 1j, -1j)
            xpp = np.zeros(arr.shape, dtype=complex)
        else:
            c = contour.junction
            xp = np.empty(arr.shape, dtype=complex)
            xpp = np.zeros(arr.shape, dtype=complex)
            left = arr < -c
            right = arr > c
            arc = ~(left | right)
            xp[left] = -1j
            xp[right] = 1j
            u = arr[arc] / eps
            xp[arc] = np.cos(u) + 1j * np.sin(u)
            xpp[arc] = (-np.sin(u) + 1j * np.cos(u)) / eps
    if scalar:
        return complex(xp), complex(xpp)
    return xp, xpp


def pt_residual(contour: Contour, s):
    """|x(-s) + x*(s)|, zero exactly when the path is PT symmetric at s."""
    arr, scalar = _as_array(s)
    r = np.abs(evaluate(contour, -arr) + np.conj(evaluate(contour, arr)))
    return float(r) if scalar else r


def angle_window(delta: float, branch: int = 0) -> AngleWindow:
    """Admissible slope window for the exponent-delta potential family.

    branch 0 is the principal window; branch 1 the next one up.  The optimal
    slope is the exact midpoint of the window.
    """
    if delta <= -1.0:
        raise DomainError(f"angle window degenerates for delta <= -1, got {delta}")
    if branch < 0:
        raise ValueError(f"branch must be a nonnegative integer, got {branch}")
    width = math.pi / (4.0 + 4.0 * delta)
    lower = (2 * branch + 1) * width - 0.5 * math.pi
    upper = (2 * branch + 3) * width - 0.5 * math.pi
    return AngleWindow(lower=lower, upper=upper, optimal=0.5 * (lower + upper))
