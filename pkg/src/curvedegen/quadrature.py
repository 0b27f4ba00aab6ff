"""Quadrature on half annuli of node charts, in log-radial coordinates.

The half annulus sqrt(|t|) <= |w| <= 1 maps to s in [0, L/2], phi in
[0, 2pi) with s = log(1/|w|), L = log(1/|t|).  Densities are given already
rescaled to these coordinates (the |w|^2 area Jacobian folded in), so a
pure full-order pole is the constant 1 and integrates to pi*L exactly.

Integration is midpoint in s and uniform trapezoid in phi (spectrally
accurate for the smooth periodic integrands here), refined by simultaneous
doubling until the total stabilizes.  The s range is split at
``panel_cut``: everything beyond the cut is an exponentially flat tail,
so one panel with the same rule covers it cheaply.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Protocol

import numpy as np

from .errors import NumericalConvergenceError
from .laurent import LaurentFamily, SideTable, eval_table, side_tables

__all__ = [
    "QuadratureSpec",
    "AnnulusDensity",
    "density_from_callable",
    "power_law_density",
    "section_density",
    "integrate_halfannulus",
]


@dataclass(frozen=True)
class QuadratureSpec:
    """Refinement controls for half-annulus integrals.

    ``panel_cut`` bounds the resolved part of the s range; features of
    fiber sections live at s = O(1), so 50 is generous.  ``inner_exponent``
    tags the s > p*log(L) region as the inner zone in diagnostics; None
    means use p = m of the integrand at hand.
    """

    n_radial: int = 64
    n_angular: int = 32
    max_levels: int = 9
    rel_tol: float = 1e-9
    panel_cut: float = 50.0
    inner_exponent: float | None = None

    def __post_init__(self):
        if self.n_radial < 8 or self.n_angular < 8:
            raise ValueError("need at least eight nodes per direction")
        if self.max_levels < 1:
            raise ValueError("max_levels must be positive")
        if self.rel_tol <= 0 or self.panel_cut <= 0:
            raise ValueError("rel_tol and panel_cut must be positive")


class AnnulusDensity(Protocol):
    """A nonnegative density on the half annulus in scaled coordinates."""

    def scaled(self, s: np.ndarray, phi: np.ndarray) -> np.ndarray:
        """Density values on the product grid, shape (len(s), len(phi))."""
        ...


class _CallableDensity:
    def __init__(self, fn: Callable[[np.ndarray, np.ndarray], np.ndarray]):
        self._fn = fn

    def scaled(self, s: np.ndarray, phi: np.ndarray) -> np.ndarray:
        return np.asarray(self._fn(s, phi), dtype=float)


def density_from_callable(fn: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> AnnulusDensity:
    """Wrap a vectorized fn(s, phi) -> (len(s), len(phi)) array."""
    return _CallableDensity(fn)


def power_law_density(rate: float) -> AnnulusDensity:
    """exp(-rate * s), constant in phi.  rate = 0 is the pure pole."""
    def fn(s: np.ndarray, phi: np.ndarray) -> np.ndarray:
        return np.repeat(np.exp(-rate * s)[:, None], len(phi), axis=1)
    return _CallableDensity(fn)


class _SectionDensity:
    """|w^m theta_t|^(2/m) on one side of a chart, area-rescaled."""

    def __init__(self, m: int, table: SideTable, logt: float):
        self.m = m
        self.table = table
        self.logt = logt

    def scaled(self, s: np.ndarray, phi: np.ndarray) -> np.ndarray:
        vals = eval_table(self.table, self.logt, s, phi)
        return np.abs(vals) ** (2.0 / self.m)


def section_density(family: LaurentFamily, logt: float, side: str = "w") -> AnnulusDensity:
    """Density of one family on the given side ("w" or "z") of its chart."""
    w_table, z_table = side_tables(family)
    if side == "w":
        return _SectionDensity(family.m, w_table, logt)
    if side == "z":
        return _SectionDensity(family.m, z_table, logt)
    raise ValueError(f"unknown side {side!r}")


def _panels(logt: float, spec: QuadratureSpec) -> list[tuple[float, float]]:
    half = logt / 2.0
    if half <= spec.panel_cut:
        return [(0.0, half)]
    return [(0.0, spec.panel_cut), (spec.panel_cut, half)]


def _grid_value(density: AnnulusDensity, panels, n_radial: int, n_angular: int) -> float:
    phi = np.arange(n_angular) * (2.0 * np.pi / n_angular)
    total = 0.0
    chunk = max(1, 4_000_000 // n_angular)  # bound peak memory at deep levels
    for a, b in panels:
        h = (b - a) / n_radial
        for lo in range(0, n_radial, chunk):
            idx = np.arange(lo, min(lo + chunk, n_radial))
            s = a + (idx + 0.5) * h
            vals = density.scaled(s, phi)
            total += float(vals.sum()) * h * (2.0 * np.pi / n_angular)
    return total


def integrate_halfannulus(density: AnnulusDensity, logt: float,
                          spec: QuadratureSpec | None = None) -> float:
    """Integral of the scaled density over the half annulus at log(1/|t|) = logt.

    Doubles both directions and Richardson-extrapolates the midpoint
    totals (error expands in even powers of the radial step) until two
    consecutive extrapolated values agree to ``spec.rel_tol`` relatively;
    raises NumericalConvergenceError with the estimate history if the
    budget runs out first.
    """
    if logt <= 0:
        raise ValueError("logt must be positive")
    spec = spec or QuadratureSpec()
    panels = _panels(logt, spec)
    n_r, n_a = spec.n_radial, spec.n_angular
    row = [_grid_value(density, panels, n_r, n_a)]
    history = [row[0]]
    for _ in range(spec.max_levels):
        n_r *= 2
        n_a *= 2
        new_row = [_grid_value(density, panels, n_r, n_a)]
        for j, prior in enumerate(row):
            gain = 4.0 ** (j + 1) - 1.0
            new_row.append(new_row[j] + (new_row[j] - prior) / gain)
        est, prev_est = new_row[-1], history[-1]
        history.append(est)
        scale = max(abs(est), abs(prev_est), 1e-300)
        if abs(est - prev_est) <= spec.rel_tol * scale:
            return est
        row = new_row
    raise NumericalConvergenceError(
        f"half-annulus integral did not stabilize within {spec.max_levels} doublings",
        best=history[-1],
        diagnostics={"iterates": history, "logt": logt,
                     "n_radial": n_r, "n_angular": n_a},
    )
