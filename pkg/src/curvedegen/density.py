"""Pseudonorms, extremal (Narasimhan-Simha) densities, and pairing matrices
for truncated section families on node charts.

Everything is evaluated on frozen composite Gauss-Legendre grids in the
log-radial coordinate s = log(1/|w|) tensor a uniform angular grid.  The
grids resolve the s = O(1) feature zone at machine precision and cover the
flat middle of the annulus with a single tail panel, so runtimes are flat
in log(1/|t|) and nothing overflows at log(1/|t|) = 1e4.

Density conventions: values are densities against the Euclidean area
measure of the chart coordinate.  The m-th root trick applies throughout:
a family theta is handled through p = w^m * theta_t, whose 2/m power
absorbs both the pole and the area rescaling.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import InternalConsistencyError, NumericalConvergenceError
from .laurent import LaurentFamily, eval_table, fiber_value, side_tables
from .quadrature import QuadratureSpec

__all__ = [
    "OptimizerSpec",
    "SectionSystem",
    "coefficient_grid",
    "pseudonorm",
    "ns_density",
    "pairing_matrix",
    "pb_density",
    "region_tau_mass",
]

_GL_ORDER = 32
_PANEL_LENGTH = 5.0
_TINY_DENSITY = 1e-250


@dataclass(frozen=True)
class OptimizerSpec:
    """Controls for coefficient-sphere searches.

    The sphere of coefficient lines is scanned on a deterministic grid
    (moduli x relative phases for two-member families, seeded random
    directions above that) and the best candidates are polished by
    Nelder-Mead runs started from them and from the coordinate axes.
    """

    seed: int = 2024
    n_random_starts: int = 8
    tol: float = 1e-8
    max_iter: int = 600
    grid_moduli: int = 33
    grid_phase: int = 32

    def __post_init__(self):
        if self.grid_moduli < 2 or self.grid_phase < 2:
            raise ValueError("coefficient grid needs at least two steps per direction")
        if self.n_random_starts < 0 or self.max_iter < 1 or self.tol <= 0:
            raise ValueError("bad optimizer controls")


def _gauss_nodes(logt: float, spec: QuadratureSpec) -> tuple[np.ndarray, np.ndarray]:
    """Composite GL nodes and weights on [0, logt/2], tail in one panel."""
    xs, ws = np.polynomial.legendre.leggauss(_GL_ORDER)
    half = logt / 2.0
    resolved = min(half, spec.panel_cut)
    n_panels = max(2, int(math.ceil(resolved / _PANEL_LENGTH)))
    edges = list(np.linspace(0.0, resolved, n_panels + 1))
    if half > resolved:
        edges.append(half)
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        nodes.append(0.5 * (b - a) * xs + 0.5 * (a + b))
        weights.append(0.5 * (b - a) * ws)
    return np.concatenate(nodes), np.concatenate(weights)


def coefficient_grid(n_families: int, optimizer: OptimizerSpec | None = None) -> np.ndarray:
    """Deterministic unit vectors sampling the coefficient sphere, (K, M).

    Always contains the coordinate axes, so grid maxima of normalized
    densities never fall below any single member's own density.
    """
    opt = optimizer or OptimizerSpec()
    if n_families == 1:
        return np.ones((1, 1), dtype=complex)
    if n_families == 2:
        eta = np.linspace(0.0, np.pi / 2.0, opt.grid_moduli)
        delta = np.arange(opt.grid_phase) * (2.0 * np.pi / opt.grid_phase)
        c0 = np.repeat(np.cos(eta), opt.grid_phase)
        c1 = np.repeat(np.sin(eta), opt.grid_phase) * np.exp(1j * np.tile(delta, opt.grid_moduli))
        return np.stack([c0, c1], axis=1)
    rows = list(np.eye(n_families, dtype=complex))
    for j in range(n_families):
        for k in range(j + 1, n_families):
            for z in (1.0, -1.0, 1j, -1j):
                v = np.zeros(n_families, dtype=complex)
                v[j] = 1.0
                v[k] = z
                rows.append(v / np.sqrt(2.0))
    rng = np.random.default_rng(opt.seed)
    n_extra = max(0, opt.grid_moduli * opt.grid_phase - len(rows))
    raw = rng.standard_normal((n_extra, 2 * n_families))
    vecs = raw[:, ::2] + 1j * raw[:, 1::2]
    vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
    rows.extend(vecs)
    return np.array(rows)


class SectionSystem:
    """Frozen quadrature of a family system over all its half-annulus sides.

    ``charts`` lists, per chart, the indices of the families present
    there; the default replicates every family on max(chain_length)
    charts.  ``S`` holds the scaled section values at all nodes, columns
    indexed like ``families``, and ``weights`` the matching area weights.
    """

    def __init__(self, families, logt: float,
                 spec: QuadratureSpec | None = None,
                 charts: tuple[tuple[int, ...], ...] | None = None):
        families = tuple(families)
        if not families:
            raise ValueError("need at least one family")
        m = families[0].m
        if any(f.m != m for f in families):
            raise ValueError("all families must share the same tensor order m")
        if logt <= 0:
            raise ValueError("logt must be positive")
        self.families = families
        self.m = m
        self.logt = float(logt)
        self.spec = spec or QuadratureSpec()
        if charts is None:
            charts = tuple(tuple(range(len(families)))
                           for _ in range(max(f.chain_length for f in families)))
        self.charts = charts

        s_nodes, s_weights = _gauss_nodes(self.logt, self.spec)
        n_phi = max(self.spec.n_angular, 64)
        phi = np.arange(n_phi) * (2.0 * np.pi / n_phi)
        dphi = 2.0 * np.pi / n_phi

        tables = [side_tables(f) for f in families]
        blocks, wblocks = [], []
        for members in charts:
            for side in (0, 1):
                block = np.zeros((len(s_nodes) * n_phi, len(families)), dtype=complex)
                for j in members:
                    vals = eval_table(tables[j][side], self.logt, s_nodes, phi)
                    block[:, j] = vals.reshape(-1)
                blocks.append(block)
                wblocks.append(np.repeat(s_weights, n_phi) * dphi)
        self.S = np.concatenate(blocks, axis=0)
        self.weights = np.concatenate(wblocks)

        self.grid_error = self._envelope_check(s_nodes, s_weights, n_phi, tables)
        if self.grid_error > 1e-6:
            raise NumericalConvergenceError(
                "frozen quadrature grid failed its refinement check",
                diagnostics={"grid_error": self.grid_error, "logt": self.logt})

    def _envelope_check(self, s_nodes, s_weights, n_phi, tables) -> float:
        # The envelope sqrt(sum |S_j|^2)^(2/m) dominates every unit
        # combination, so agreement under doubling certifies the grid.
        def envelope(sn, sw, na):
            ph = np.arange(na) * (2.0 * np.pi / na)
            total = 0.0
            for members in self.charts:
                for side in (0, 1):
                    acc = np.zeros((len(sn), na))
                    for j in members:
                        acc += np.abs(eval_table(tables[j][side], self.logt, sn, ph)) ** 2
                    total += float((acc ** (1.0 / self.m)).sum(axis=1) @ sw) * (2.0 * np.pi / na)
            return total

        base = envelope(s_nodes, s_weights, n_phi)
        fine_spec = QuadratureSpec(
            n_radial=self.spec.n_radial, n_angular=self.spec.n_angular,
            max_levels=self.spec.max_levels, rel_tol=self.spec.rel_tol,
            panel_cut=self.spec.panel_cut / 2.0,
            inner_exponent=self.spec.inner_exponent)
        fine_s, fine_w = _gauss_nodes(self.logt, fine_spec)
        fine = envelope(fine_s, fine_w, 2 * n_phi)
        return abs(fine - base) / max(abs(base), 1e-300)

    @property
    def n_nodes(self) -> int:
        return self.S.shape[0]

    def pn(self, coeffs) -> float:
        """Integral of |theta_c|^(2/m) over all sides for one coefficient row."""
        vals = np.abs(self.S @ np.asarray(coeffs, dtype=complex))
        return float(self.weights @ vals ** (2.0 / self.m))

    def pn_batch(self, grid: np.ndarray) -> np.ndarray:
        """Same integral for every row of a (K, M) coefficient grid."""
        out = np.zeros(grid.shape[0])
        block = max(1, int(4_000_000 // max(self.n_nodes, 1)))
        for lo in range(0, grid.shape[0], block):
            chunk = grid[lo:lo + block]
            vals = np.abs(self.S @ chunk.T) ** (2.0 / self.m)
            out[lo:lo + block] = self.weights @ vals
        return out

    def tau_normalized(self, C: np.ndarray, pn_grid: np.ndarray,
                       S: np.ndarray | None = None) -> np.ndarray:
        """Grid-max normalized density max_c |S c|^(2/m) / pn(c) per node."""
        S = self.S if S is None else S
        out = np.empty(S.shape[0])
        block = max(1, int(4_000_000 // max(C.shape[0], 1)))
        for lo in range(0, S.shape[0], block):
            vals = np.abs(S[lo:lo + block] @ C.T) ** (2.0 / self.m)
            np.max(vals / pn_grid[None, :], axis=1, out=out[lo:lo + block])
        return out


def pseudonorm(combination, logt: float,
               spec: QuadratureSpec | None = None,
               charts: tuple[tuple[int, ...], ...] | None = None) -> float:
    """The pseudonorm (integral of |theta|^(2/m)) ** (m/2) of a combination.

    ``combination`` is a sequence of (coefficient, family) pairs sharing
    one tensor order m.
    """
    coeffs = np.array([c for c, _ in combination], dtype=complex)
    families = [f for _, f in combination]
    system = SectionSystem(families, logt, spec=spec, charts=charts)
    return system.pn(coeffs) ** (system.m / 2.0)


def _unpack(x: np.ndarray) -> np.ndarray | None:
    c = x[::2] + 1j * x[1::2]
    nrm = np.linalg.norm(c)
    if nrm < 1e-12:
        return None
    return c / nrm


def ns_density(families, logt: float, w: complex,
               spec: QuadratureSpec | None = None,
               optimizer: OptimizerSpec | None = None,
               charts: tuple[tuple[int, ...], ...] | None = None,
               system: SectionSystem | None = None) -> float:
    """Extremal density sup over unit combinations of |theta_c(w)|^(2/m) / pn(c).

    ``w`` is a point of the w side of the first chart; the returned value
    is a density against the area measure dA(w).  The search combines a
    deterministic coefficient grid with polished Nelder-Mead runs.
    """
    opt = optimizer or OptimizerSpec()
    system = system or SectionSystem(families, logt, spec=spec, charts=charts)
    m = system.m
    v = np.array([fiber_value(f, logt, w) for f in system.families])
    log_area = -2.0 * math.log(abs(complex(w)))
    if len(system.families) == 1:
        val = abs(v[0])
        if val == 0.0:
            return 0.0
        return math.exp((2.0 / m) * math.log(val) + log_area) / system.pn([1.0])

    def h_value(c: np.ndarray) -> float:
        amp = abs(complex(np.sum(c * v)))
        if amp == 0.0:
            return -math.inf
        return (2.0 / m) * math.log(amp) - math.log(system.pn(c))

    grid = coefficient_grid(len(system.families), opt)
    pn_grid = system.pn_batch(grid)
    amps = np.abs(grid @ v)
    with np.errstate(divide="ignore"):
        scores = np.where(amps > 0.0,
                          (2.0 / m) * np.log(np.maximum(amps, 1e-300)) - np.log(pn_grid),
                          -np.inf)
    order = np.argsort(scores)[::-1]

    starts = []
    for idx in order[:2]:
        starts.append(grid[idx])
    starts.extend(np.eye(len(system.families), dtype=complex))
    rng = np.random.default_rng(opt.seed)
    for _ in range(opt.n_random_starts):
        raw = rng.standard_normal(2 * len(system.families))
        c = raw[::2] + 1j * raw[1::2]
        starts.append(c / np.linalg.norm(c))

    def objective(x: np.ndarray) -> float:
        c = _unpack(x)
        if c is None:
            return math.inf
        return -h_value(c)

    best = float(np.max(scores))
    any_finite = math.isfinite(best)
    for c0 in starts:
        x0 = np.empty(2 * len(system.families))
        x0[::2] = np.real(c0)
        x0[1::2] = np.imag(c0)
        res = minimize(objective, x0, method="Nelder-Mead",
                       options={"xatol": opt.tol, "fatol": opt.tol * 1e-2,
                                "maxiter": opt.max_iter, "maxfev": 4 * opt.max_iter})
        if math.isfinite(res.fun):
            any_finite = True
            best = max(best, -float(res.fun))
    if not any_finite:
        raise NumericalConvergenceError(
            "coefficient search found no finite objective value",
            diagnostics={"w": w, "logt": logt})
    return math.exp(best + log_area)


def pairing_matrix(families, logt: float,
                   spec: QuadratureSpec | None = None,
                   optimizer: OptimizerSpec | None = None,
                   charts: tuple[tuple[int, ...], ...] | None = None,
                   system: SectionSystem | None = None) -> np.ndarray:
    """Hermitian matrix of integrals of theta_j conj(theta_k) / tau^(m-1).

    tau is the extremal density of the same system, realized per node as a
    grid maximum; the matrix is a Gram matrix against the positive weight
    tau^(1-m), so it must come out positive definite.
    """
    opt = optimizer or OptimizerSpec()
    system = system or SectionSystem(families, logt, spec=spec, charts=charts)
    m = system.m
    C = coefficient_grid(len(system.families), opt)
    pn_grid = system.pn_batch(C)
    tau = system.tau_normalized(C, pn_grid)
    # Where every section is microscopic the contribution is provably
    # below tau^(1/m)-type tails; dropping it avoids 0 * inf.
    mask = tau > _TINY_DENSITY
    g = np.zeros_like(tau)
    g[mask] = tau[mask] ** (1 - m)
    wg = system.weights * g
    A = (system.S.T * wg) @ np.conj(system.S)
    A = 0.5 * (A + np.conj(A.T))
    eigs = np.linalg.eigvalsh(A)
    if eigs[0] <= -1e-12 * max(abs(eigs[-1]), 1e-300):
        raise InternalConsistencyError("pairing matrix lost positive definiteness")
    return A


def pb_density(families, logt: float, w: complex,
               spec: QuadratureSpec | None = None,
               optimizer: OptimizerSpec | None = None,
               charts: tuple[tuple[int, ...], ...] | None = None) -> float:
    """Density at w of the measure sum (conj(A)^-1)_jk theta_j conj(theta_k) / tau^(m-1)."""
    system = SectionSystem(families, logt, spec=spec, charts=charts)
    m = system.m
    A = pairing_matrix(families, logt, spec=spec, optimizer=optimizer,
                       charts=charts, system=system)
    v = np.array([fiber_value(f, logt, w) for f in system.families])
    quad = float(np.real(np.conj(v) @ np.linalg.solve(A, v)))
    tau_w = ns_density(families, logt, w, spec=spec, optimizer=optimizer,
                       charts=charts, system=system)
    if tau_w <= 0.0:
        raise NumericalConvergenceError(
            "extremal density vanished where the pairing density was requested",
            diagnostics={"w": w})
    log_val = (math.log(max(quad, 1e-300))
               - 2.0 * m * math.log(abs(complex(w)))
               - (m - 1) * math.log(tau_w))
    return math.exp(log_val)


def region_tau_mass(families, logt: float, region: tuple[float, float],
                    f=None,
                    spec: QuadratureSpec | None = None,
                    optimizer: OptimizerSpec | None = None,
                    n_u: int = 64, n_phi: int = 64) -> float:
    """Mass of the extremal measure over a skeleton-edge region.

    The edge is parameterized by u in [0, 1]; u <= 1/2 lives on the w side
    (s = u * logt) and u >= 1/2 on the z side (s = (1 - u) * logt).  ``f``
    is an optional vectorized weight along the edge.  The integral runs
    over the first node chart; families crossing an l-chain spread their
    pseudonorm over l charts, which scales regional masses by 1/l.
    """
    families = tuple(families)
    if len({fam.chain_length for fam in families}) != 1:
        raise ValueError("families must share one chain length")
    a, b = region
    if not (0.0 <= a < b <= 1.0):
        raise ValueError("region must be a nondegenerate subinterval of [0, 1]")
    opt = optimizer or OptimizerSpec()
    system = SectionSystem(families, logt, spec=spec)
    C = coefficient_grid(len(families), opt)
    pn_grid = system.pn_batch(C)
    tables = [side_tables(fam) for fam in families]

    xs, ws = np.polynomial.legendre.leggauss(_GL_ORDER)

    def piece(lo: float, hi: float, side: int, n_sub: int, na: int) -> float:
        if hi <= lo:
            return 0.0
        phi = np.arange(na) * (2.0 * np.pi / na)
        edges = np.linspace(lo, hi, n_sub + 1)
        total = 0.0
        for p_lo, p_hi in zip(edges[:-1], edges[1:]):
            u = 0.5 * (p_hi - p_lo) * xs + 0.5 * (p_lo + p_hi)
            wu = 0.5 * (p_hi - p_lo) * ws
            s = u * logt if side == 0 else (1.0 - u) * logt
            S = np.zeros((len(u) * na, len(families)), dtype=complex)
            for j, tab in enumerate(tables):
                S[:, j] = eval_table(tab[side], logt, s, phi).reshape(-1)
            tau = system.tau_normalized(C, pn_grid, S=S).reshape(len(u), na)
            fw = np.ones_like(u) if f is None else np.asarray(f(u), dtype=float)
            total += float((tau.sum(axis=1) * (2.0 * np.pi / na) * fw) @ wu) * logt
        return total

    def total_at(n_sub: int, na: int) -> float:
        return (piece(a, min(b, 0.5), 0, n_sub, na)
                + piece(max(a, 0.5), b, 1, n_sub, na))

    n_sub = max(1, n_u // _GL_ORDER)
    na = n_phi
    prev = total_at(n_sub, na)
    for _ in range(4):
        n_sub *= 2
        na *= 2
        cur = total_at(n_sub, na)
        if abs(cur - prev) <= 1e-5 * max(abs(cur), 1e-300):
            return cur
        prev = cur
    return prev
