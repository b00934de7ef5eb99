"""Closed-form discrete spectra of the Coulomb-Kratzer model.

Levels are indexed by a radial quantum number n >= 0 and a branch sigma = +/-1:

    E(n, sigma) = mass_sign * (Z / (2L + 1 + sigma*(2n + 1)))^2

so the positive-mass model has an all-positive point spectrum and the
negative-mass model an all-negative one accumulating at zero.  A level is
keyed by (n, sigma), never by its energy ordering, which changes with L.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .errors import DomainError, SingularCoupling

__all__ = [
    "Level",
    "Reparametrization",
    "Figure3Row",
    "level",
    "spectrum_table",
    "figure3_data",
    "ground_state_compact_formula",
    "ground_state_bruteforce",
    "ground_state_comparison",
]

SINGULAR_DENOM_TOL = 1e-12
SWEEP_GAP_TOL = 1e-9


@dataclass(frozen=True)
class Level:
    """One discrete eigenvalue: index n, branch sigma, energy, decay rate kappa."""

    n: int
    sigma: int
    energy: float
    kappa: float


@dataclass(frozen=True)
class Reparametrization:
    """2L+1 split into its integer part M0 and a residuum angle alpha.

    2L + 1 = M0 + cos^2(alpha) with M0 >= 0 and alpha in the open interval
    (0, pi/2), so the residuum cos^2(alpha) stays strictly inside (0, 1).
    """

    M0: int
    alpha: float

    def __post_init__(self):
        if self.M0 < 0:
            raise DomainError(f"M0 must be a nonnegative integer, got {self.M0}")
        if not 0.0 < self.alpha < 0.5 * math.pi:
            raise DomainError(
                f"residuum angle must lie strictly inside (0, pi/2), got {self.alpha}"
            )

    @property
    def two_L_plus_1(self) -> float:
        return self.M0 + math.cos(self.alpha) ** 2

    @property
    def L(self) -> float:
        return 0.5 * (self.two_L_plus_1 - 1.0)


@dataclass(frozen=True)
class Figure3Row:
    """One sweep sample; minus_kappa is None on a gap record (singular point)."""

    two_L_plus_1: float
    n: int
    sigma: int
    minus_kappa: float | None


def _denominator(L: float, n: int, sigma: int) -> float:
    return 2.0 * L + 1.0 + sigma * (2 * n + 1)


def level(Z: float, L: float, n: int, sigma: int, mass_sign: int) -> Level:
    """Single level of the closed-form spectrum.

    Raises SingularCoupling when the denominator 2L+1+sigma(2n+1) vanishes
    (the collapse repeated at integer L).
    """
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    if sigma not in (1, -1):
        raise DomainError(f"sigma must be +1 or -1, got {sigma}")
    if mass_sign not in (1, -1):
        raise DomainError(f"mass_sign must be +1 or -1, got {mass_sign}")
    den = _denominator(L, n, sigma)
    if abs(den) < SINGULAR_DENOM_TOL:
        raise SingularCoupling(
            f"level (n={n}, sigma={sigma:+d}) singular at 2L+1 = {2 * L + 1}"
        )
    ratio = Z / den
    return Level(n=n, sigma=sigma, energy=mass_sign * ratio * ratio, kappa=abs(ratio))


def spectrum_table(Z: float, L: float, n_max: int, mass_sign: int) -> list[Level]:
    """All levels with n <= n_max, both branches, sorted by energy ascending.

    Singular entries are skipped with a RuntimeWarning; the sweep continues.
    """
    if n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {n_max}")
    levels = []
    for n in range(n_max + 1):
        for sigma in (1, -1):
            try:
                levels.append(level(Z, L, n, sigma, mass_sign))
            except SingularCoupling as exc:
                warnings.warn(str(exc), RuntimeWarning, stacklevel=2)
    levels.sort(key=lambda lv: (lv.energy, lv.n, lv.sigma))
    return levels


def figure3_data(Z: float, grid_of_2Lp1, n_max: int = 4) -> list[Figure3Row]:
    """-kappa(n, sigma) sampled over a grid of 2L+1 values.

    Emits one row per (grid point, n, sigma) in input order.  Grid points
    within SWEEP_GAP_TOL of a vanishing denominator become explicit gap
    records (minus_kappa None) so the collapse asymptotes stay visible in
    the output.
    """
    if n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {n_max}")
    rows = []
    for t in grid_of_2Lp1:
        t = float(t)
        for n in range(n_max + 1):
            for sigma in (1, -1):
                den = t + sigma * (2 * n + 1)
                if abs(den) < SWEEP_GAP_TOL:
                    rows.append(Figure3Row(t, n, sigma, None))
                else:
                    rows.append(Figure3Row(t, n, sigma, -abs(Z) / abs(den)))
    return rows


def ground_state_compact_formula(Z: float, rep: Reparametrization) -> float:
    """Compact ground-state closed form -Z^2 / min(sin^2 a, cos^2 a).

    Kept as published for cross-checking; ground_state_bruteforce is the
    oracle (ground_state_comparison measures the discrepancy between them).
    """
    s2 = math.sin(rep.alpha) ** 2
    c2 = math.cos(rep.alpha) ** 2
    m = min(s2, c2)
    if m == 0.0:
        raise DomainError("residuum angle at an excluded limiting value")
    return -Z * Z / m


def ground_state_bruteforce(Z: float, L: float, n_max: int = 10) -> Level:
    """Minimum-energy level of the negative-mass table up to n_max (the oracle)."""
    table = spectrum_table(Z, L, n_max, mass_sign=-1)
    if not table:
        raise SingularCoupling(f"no nonsingular level with n <= {n_max} at L = {L}")
    return table[0]


def ground_state_comparison(Z: float, rep: Reparametrization, n_max: int = 10) -> dict:
    """Evaluate both ground-state routes on the same reparametrized coupling.

    Returns the compact-formula value, the brute-force Level, and their
    absolute difference.  The two disagree away from removable coincidences:
    the brute-force minimum scales with the fourth power of the residuum
    near the excluded angles, the compact formula with the second.
    """
    brute = ground_state_bruteforce(Z, rep.L, n_max)
    compact = ground_state_compact_formula(Z, rep)
    return {
        "two_L_plus_1": rep.two_L_plus_1,
        "compact_formula": compact,
        "bruteforce": brute,
        "abs_difference": abs(compact - brute.energy),
    }
