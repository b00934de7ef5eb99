"""Potential families, mass configuration, and asymptotic spectral classification.

Internal units fix hbar = 1 and |m| = 1/2, so the kinetic prefactor
hbar^2/(2m) is exactly the bare-mass sign.  All energies produced by the
package are reported in these units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .contour import Contour, StraightLine, UShaped
from .errors import DomainError, FallToCenter, SingularPoint, UnsupportedGeometry

__all__ = [
    "CoulombKratzer",
    "BenderBoettcher",
    "Potential",
    "MassConfig",
    "AngularMomentum",
    "AsymptoticClassification",
    "StabilityVerdict",
    "DECAYING_PAIR",
    "PLANE_WAVE_PAIR",
    "evaluate_potential",
    "effective_L",
    "effective_mass",
    "classify_asymptotics",
    "stability_verdict",
]

DECAYING_PAIR = "decaying_pair"
PLANE_WAVE_PAIR = "plane_wave_pair"

INTEGER_L_TOL = 1e-12


@dataclass(frozen=True)
class CoulombKratzer:
    """V(x) = i*Z/x + F/x^2."""

    Z: float
    F: float = 0.0


@dataclass(frozen=True)
class BenderBoettcher:
    """V(x) = x^2 * (i*x)^(4*delta) on the principal branch of the cut plane."""

    delta: float

    def __post_init__(self):
        if self.delta < -0.5:
            raise DomainError(f"exponent delta must be >= -1/2, got {self.delta}")


Potential = CoulombKratzer | BenderBoettcher


@dataclass(frozen=True)
class MassConfig:
    """Bare-mass sign and the scale 2|m|/hbar^2 (1.0 in internal units)."""

    sign: int = 1
    scale: float = 1.0

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise DomainError(f"mass sign must be +1 or -1, got {self.sign}")
        if not self.scale > 0:
            raise DomainError(f"mass scale must be > 0, got {self.scale}")


@dataclass(frozen=True)
class AngularMomentum:
    """Physical angular momentum ell and the effective strength L."""

    ell: int
    L: float

    @property
    def singular(self) -> bool:
        """True when L sits on an excluded integer within tolerance."""
        return abs(self.L - round(self.L)) < INTEGER_L_TOL


@dataclass(frozen=True)
class AsymptoticClassification:
    energy_sign: int
    behavior: str
    wavenumber: float


@dataclass(frozen=True)
class StabilityVerdict:
    bounded_below: bool
    narrative: str


def _wrapped_phase(x: np.ndarray) -> np.ndarray:
    """Complex phase in (-3*pi/2, pi/2], cut running upward from x = 0."""
    theta = np.angle(x)
    return np.where(theta > 0.5 * math.pi, theta - 2.0 * math.pi, theta)


def evaluate_potential(p: Potential, x):
    """Evaluate the potential at complex x (scalar or array).

    Raises SingularPoint at x = 0 for the Coulomb-Kratzer family.  The
    oscillator family stays finite there (|x|^(2+4*delta) -> 0 for
    delta > -1/2, constant -1 at delta = -1/2) and evaluates to its limit.
    Fractional powers use the phase convention above; rational potentials
    are branch-free.
    """
    arr = np.asarray(x, dtype=complex)
    scalar = arr.ndim == 0
    if isinstance(p, CoulombKratzer):
        if np.any(arr == 0):
            raise SingularPoint("Coulomb-Kratzer potential evaluated at x = 0")
        v = 1j * p.Z / arr + p.F / (arr * arr)
    elif p.delta == 0.0:
        v = arr * arr
    else:
        power = 4.0 * p.delta
        zero = arr == 0
        safe = np.where(zero, 1.0, arr)
        phase = _wrapped_phase(safe) + 0.5 * math.pi
        v = safe * safe * np.exp(power * (np.log(np.abs(safe)) + 1j * phase))
        limit = -1.0 if p.delta == -0.5 else 0.0
        v = np.where(zero, limit, v)
    return complex(v) if scalar else v


def effective_L(ell: int, F: float) -> AngularMomentum:
    """Solve L(L+1) = ell(ell+1) + F on the branch continuously connected to L = ell.

    Raises FallToCenter below the collapse threshold (ell + 1/2)^2 + F <= 0.
    An integer result is returned flagged (``singular``); consumers that
    cannot handle it raise SingularL/SingularCoupling at their call sites.
    """
    if ell < 0 or ell != int(ell):
        raise DomainError(f"ell must be a nonnegative integer, got {ell}")
    disc = (ell + 0.5) ** 2 + F
    if disc <= 0:
        raise FallToCenter(
            f"(ell+1/2)^2 + F = {disc} <= 0: no real effective L exists"
        )
    return AngularMomentum(ell=int(ell), L=-0.5 + math.sqrt(disc))


def effective_mass(m: MassConfig, phi: float, s_sign: int) -> complex:
    """Direction-dependent complex mass exp(+/-2i*phi) * m along the asymptotes."""
    if s_sign not in (1, -1):
        raise DomainError(f"s_sign must be +1 or -1, got {s_sign}")
    bare = m.sign * m.scale * 0.5  # hbar = 1
    return complex(np.exp(2j * phi * s_sign) * bare)


def _kinetic_orientation(contour: Contour) -> int:
    """+1 where the asymptotic kinetic term keeps its textbook sign, -1 where it flips."""
    if isinstance(contour, UShaped):
        return -1
    if isinstance(contour, StraightLine) and contour.phi == 0.0:
        return 1
    raise UnsupportedGeometry(
        "asymptotic classification supports the U path and the phi=0 line only"
    )


def classify_asymptotics(m: MassConfig, contour: Contour, E: float) -> AsymptoticClassification:
    """Label the free asymptotic solution pair at energy E.

    With the effective sign (mass sign times contour orientation) positive the
    textbook rule applies: E < 0 gives a decaying pair, E > 0 plane waves.
    A negative effective sign swaps the two.  E = 0 is the threshold and is
    not classified.
    """
    effective = m.sign * _kinetic_orientation(contour)
    if E == 0:
        raise DomainError("threshold E = 0 is not classified")
    decaying = (E * effective) < 0
    return AsymptoticClassification(
        energy_sign=1 if E > 0 else -1,
        behavior=DECAYING_PAIR if decaying else PLANE_WAVE_PAIR,
        wavenumber=math.sqrt(abs(E)),
    )


def stability_verdict(m: MassConfig, contour: Contour) -> StabilityVerdict:
    """Decide whether the spectrum is bounded from below for this geometry."""
    effective = m.sign * _kinetic_orientation(contour)
    if effective > 0:
        if isinstance(contour, UShaped):
            narrative = (
                "Negative bare mass on the U path: the continuum is nonnegative "
                "and the discrete levels accumulate at zero from below, so the "
                "spectrum is bounded from below and the system is stable."
            )
        else:
            narrative = (
                "Textbook kinetic term on the real line: with a confining or "
                "decaying real potential the spectrum is bounded from below."
            )
        return StabilityVerdict(bounded_below=True, narrative=narrative)
    if isinstance(contour, UShaped):
        narrative = (
            "Positive bare mass on the U path flips the kinetic sign along both "
            "asymptotes: free waves exist at every negative energy, the spectrum "
            "has no lower bound, and small perturbations destabilize the system."
        )
    else:
        narrative = (
            "Negative bare mass on the real line flips the kinetic sign: free "
            "waves exist at every negative energy and the spectrum has no lower "
            "bound."
        )
    return StabilityVerdict(bounded_below=False, narrative=narrative)
