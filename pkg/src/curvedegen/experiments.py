"""Convergence experiments on node charts.

Each experiment sweeps a grid of degeneration depths L = log(1/|t|),
compares an observed quantity against its predicted limit shape, and
returns the comparison as a small immutable table.  Observables come from
the frozen-grid machinery in ``density``; everything is deterministic for
a fixed seed, so reruns produce byte-identical tables.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad as _scipy_quad

from .density import (OptimizerSpec, SectionSystem, pairing_matrix, pseudonorm,
                      region_tau_mass)
from .laurent import LaurentFamily
from .quadrature import QuadratureSpec

__all__ = [
    "ExperimentResult",
    "norm_asymptotics_experiment",
    "region_mass_experiment",
    "pairing_diag_experiment",
    "pairing_offdiag_experiment",
]

DEFAULT_LOGT_GRID = (1e2, 1e3, 1e4)


@dataclass(frozen=True)
class ExperimentResult:
    """One observable versus its limit prediction along a depth grid."""

    name: str
    logt_grid: tuple[float, ...]
    observed: tuple[float, ...]
    reference: tuple[float, ...]
    rel_errors: tuple[float, ...]
    fitted_exponent: float | None
    metadata: dict = field(default_factory=dict)

    def to_columns(self) -> str:
        """Deterministic whitespace table with a commented header."""
        lines = [f"# experiment: {self.name}"]
        for key in sorted(self.metadata):
            lines.append(f"# {key}: {self.metadata[key]}")
        if self.fitted_exponent is not None:
            lines.append(f"# fitted_exponent: {self.fitted_exponent:.6f}")
        lines.append("# columns: logt observed reference rel_error")
        for L, obs, ref, err in zip(self.logt_grid, self.observed,
                                    self.reference, self.rel_errors):
            lines.append(f"{L:.6e} {obs:.12e} {ref:.12e} {err:.12e}")
        return "\n".join(lines) + "\n"


def _check_grid(logt_grid) -> tuple[float, ...]:
    grid = tuple(float(L) for L in logt_grid)
    if len(grid) < 2:
        raise ValueError("need at least two depths to compare along a grid")
    if grid[0] <= 0 or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("logt grid must be positive and strictly increasing")
    return grid


def _fit_exponent(logt_grid, errors) -> float | None:
    pts = [(L, e) for L, e in zip(logt_grid, errors) if e > 1e-13]
    if len(pts) < 2:
        return None
    xs = np.log([p[0] for p in pts])
    ys = np.log([p[1] for p in pts])
    if xs.max() - xs.min() < 1e-9:
        return None
    return float(np.polyfit(xs, ys, 1)[0])


def _result(name, grid, obs, ref, meta) -> ExperimentResult:
    errs = tuple(abs(o - r) / max(abs(r), 1e-300) if r != 0.0 else abs(o)
                 for o, r in zip(obs, ref))
    return ExperimentResult(name, tuple(grid), tuple(obs), tuple(ref), errs,
                            _fit_exponent(grid, errs), meta)


def norm_asymptotics_experiment(family: LaurentFamily,
                                logt_grid=DEFAULT_LOGT_GRID,
                                spec: QuadratureSpec | None = None) -> ExperimentResult:
    """Pseudonorm of one family against its limit shape (2 pi l L)^(m/2).

    For a residue-one family crossing l nodes the ratio tends to 1; the
    relative error column should decay like 1/L.
    """
    logt_grid = _check_grid(logt_grid)
    m, l = family.m, family.chain_length
    obs, ref = [], []
    for L in logt_grid:
        obs.append(pseudonorm([(1.0, family)], L, spec=spec))
        ref.append((2.0 * np.pi * l * L) ** (m / 2.0))
    meta = {"m": m, "chain_length": l, "truncation": family.truncation_order,
            "residue": complex(family.residue)}
    return _result("norm-asymptotics", logt_grid, obs, ref, meta)


def region_mass_experiment(families, region: tuple[float, float],
                           f=None, f_label: str = "1",
                           logt_grid=DEFAULT_LOGT_GRID,
                           spec: QuadratureSpec | None = None,
                           optimizer: OptimizerSpec | None = None) -> ExperimentResult:
    """Extremal-measure mass of an edge region versus (1/l) * integral of f.

    The limit measure spreads mass 1/l per unit of the edge coordinate, so
    the reference is the f-integral over the region divided by l.
    """
    logt_grid = _check_grid(logt_grid)
    families = tuple(families)
    l = max(fam.chain_length for fam in families)
    a, b = region
    if f is None:
        f_int = b - a
    else:
        f_int = _scipy_quad(f, a, b, epsabs=1e-12, epsrel=1e-12)[0]
    opt = optimizer or OptimizerSpec()
    obs, ref = [], []
    for L in logt_grid:
        obs.append(region_tau_mass(families, L, region, f=f,
                                   spec=spec, optimizer=opt))
        ref.append(f_int / l)
    meta = {"m": families[0].m, "n_families": len(families),
            "region": region, "weight": f_label, "seed": opt.seed}
    return _result("region-mass", logt_grid, obs, ref, meta)


def pairing_diag_experiment(families, member: int = 0,
                            logt_grid=DEFAULT_LOGT_GRID,
                            spec: QuadratureSpec | None = None,
                            optimizer: OptimizerSpec | None = None) -> ExperimentResult:
    """A diagonal pairing entry against its residue-pole limit (2 pi l L)^m.

    Meaningful for a member whose residue term dominates; the ratio
    converges to |residue|^2 = 1 for residue-one members.
    """
    logt_grid = _check_grid(logt_grid)
    families = tuple(families)
    fam = families[member]
    opt = optimizer or OptimizerSpec()
    obs, ref = [], []
    for L in logt_grid:
        A = pairing_matrix(families, L, spec=spec, optimizer=opt)
        obs.append(float(np.real(A[member, member])))
        ref.append(abs(fam.residue) ** 2 * (2.0 * np.pi * fam.chain_length * L) ** fam.m)
    meta = {"m": fam.m, "member": member, "n_families": len(families),
            "seed": opt.seed, "truncation": fam.truncation_order}
    return _result("pairing-diag", logt_grid, obs, ref, meta)


def pairing_offdiag_experiment(families, pair: tuple[int, int] = (0, 1),
                               logt_grid=DEFAULT_LOGT_GRID,
                               spec: QuadratureSpec | None = None,
                               optimizer: OptimizerSpec | None = None) -> ExperimentResult:
    """Normalized off-diagonal pairing |A_jk| / sqrt(A_jj A_kk), limit zero.

    The observed column doubles as the error column since the reference
    vanishes; it should decrease along the grid.
    """
    logt_grid = _check_grid(logt_grid)
    j, k = pair
    opt = optimizer or OptimizerSpec()
    obs, ref = [], []
    for L in logt_grid:
        A = pairing_matrix(families, L, spec=spec, optimizer=opt)
        denom = float(np.sqrt(np.real(A[j, j]) * np.real(A[k, k])))
        obs.append(abs(A[j, k]) / denom)
        ref.append(0.0)
    fams = tuple(families)
    meta = {"m": fams[0].m, "pair": pair, "n_families": len(fams),
            "seed": opt.seed}
    return _result("pairing-offdiag", logt_grid, obs, ref, meta)
