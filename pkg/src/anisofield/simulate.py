"""Seeded spectral synthesis of fields with stationary increments.

A realization is assembled from a frequency lattice as

    X(t) = sum_k sqrt(2 F_k) [ (cos<t, lambda_k> - 1) xi_k + sin<t, lambda_k> eta_k ]

with xi_k, eta_k independent standard normals, F_k the spectral mass of
cell k, and lambda_k a representative frequency inside the cell.  Every
term vanishes at t = 0, so realizations are pinned exactly, and the sum
telescopes to stationary increments with

    E X(t)^2 = 4 sum_k F_k (1 - cos<t, lambda_k>),

a Riemann approximation of the variogram.  The lattice per axis covers
(0, Lambda] by dyadic octaves each split into equal cells, so cell width
scales with frequency.  Lambda starts from an oversampled grid Nyquist
and is then raised per axis until every axis reaches the same level of
the density's axis-term sum; without that, anisotropic models lose the
part of the high-frequency marginal that spreads along the flatter axes
and small-lag increment variance comes out biased low.  That
matters: spectral mass follows a power law, and a cell of width w at
frequency l contributes jitter noise proportional to f(l) * w^2, which
is constant per cell only when w is proportional to l.  A uniform
partition would need the finest width everywhere and two orders of
magnitude more cells for the same fidelity at domain-scale lags.  Cell
masses come from small Gauss-Legendre rules; representatives are
jittered uniformly inside their cell (one draw per axis cell, shared
across channels) so that no grid lag can align with cell spacing.  Only
the half-space lambda_0 > 0 is enumerated; the mirror cells are folded
into the masses.

Randomness is counter-based: channel c of seed s draws its coefficients
from an independent stream keyed (s, c), and the jitter stream has its
own key, so any channel can be regenerated alone and thread count never
changes the output.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import FactorizationError, ModelError
from .models import density_parts, model_to_dict, smoothness_exponents
from .variogram import VariogramTable, gneiting_covariance, gneiting_to_dict

_MAX_GRID_POINTS = 2**20
_MAX_CELLS = 2**22
_MAX_MASS_NODES = 2**24
_JITTER_KEY = 0x6A177E12
_DENSE_LIMIT = 4096


@dataclass(frozen=True)
class Grid:
    """Rectangular evaluation grid: origin + spacing * index per axis."""

    origin: tuple
    spacing: tuple
    shape: tuple

    def __post_init__(self):
        origin = tuple(float(v) for v in self.origin)
        spacing = tuple(float(v) for v in self.spacing)
        shape = tuple(int(v) for v in self.shape)
        if not len(origin) == len(spacing) == len(shape):
            raise ModelError("origin, spacing, and shape must have equal length")
        if not origin:
            raise ModelError("grid needs at least one axis")
        if any(not np.isfinite(v) for v in origin):
            raise ModelError("grid origin must be finite")
        if any(v <= 0 or not np.isfinite(v) for v in spacing):
            raise ModelError("grid spacing must be positive and finite")
        if any(v < 1 for v in shape):
            raise ModelError("grid shape entries must be at least 1")
        n = math.prod(shape)
        if n > _MAX_GRID_POINTS:
            raise ModelError(f"grid has {n} points, above the {_MAX_GRID_POINTS} cap")
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "spacing", spacing)
        object.__setattr__(self, "shape", shape)

    @property
    def ndim(self):
        return len(self.shape)

    @property
    def npoints(self):
        return math.prod(self.shape)

    def axis_coords(self, axis):
        return self.origin[axis] + self.spacing[axis] * np.arange(self.shape[axis])

    def points(self):
        """All grid points as an (npoints, ndim) array in row-major order."""
        axes = [self.axis_coords(j) for j in range(self.ndim)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)


@dataclass(frozen=True)
class SynthesisSpec:
    """Tuning knobs for the frequency lattice and its evaluation.

    oversample scales the lattice cutoff relative to the grid Nyquist;
    None picks 64 for rough fields (some H_j < 1) and 8 for smooth ones.
    octaves is the dyadic depth of the lattice below the cutoff; the
    per-axis cell budget is divided evenly across them.  mass_nodes is
    the Gauss-Legendre order per axis and cell.  jitter=False pins
    representatives to cell midpoints.  freq_cap overrides the cutoff
    on every axis.
    """

    oversample: float = None
    octaves: int = 24
    mass_nodes: int = 3
    jitter: bool = True
    grid_chunk: int = 256
    cell_chunk: int = 16384
    threads: int = None
    freq_cap: float = None

    def __post_init__(self):
        if self.oversample is not None and not self.oversample > 0:
            raise ModelError("oversample must be positive")
        if not 4 <= self.octaves <= 60:
            raise ModelError("octaves must lie in [4, 60]")
        if not 2 <= self.mass_nodes <= 8:
            raise ModelError("mass_nodes must lie in [2, 8]")
        if self.grid_chunk < 1 or self.cell_chunk < 1:
            raise ModelError("chunk sizes must be positive")
        if self.threads is not None and self.threads < 1:
            raise ModelError("threads must be positive")
        if self.freq_cap is not None and not self.freq_cap > 0:
            raise ModelError("freq_cap must be positive")


@dataclass(frozen=True)
class FieldSample:
    """Realized field values over a grid, one channel per copy."""

    grid: Grid
    values: np.ndarray
    seed: int
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape[:-1] != self.grid.shape:
            raise ModelError("values must have shape grid.shape + (channels,)")
        if not np.all(np.isfinite(vals)):
            raise ModelError("field values must be finite")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def nchannels(self):
        return self.values.shape[-1]


def _check_seed(seed):
    seed = int(seed)
    if not 0 <= seed < 2**63:
        raise ModelError("seed must be a nonnegative 63-bit integer")
    return seed


def _resolve_threads(threads):
    if threads is None:
        env = os.environ.get("ANISOFIELD_THREADS", "")
        threads = int(env) if env.strip() else 1
    threads = int(threads)
    if threads < 1:
        raise ModelError("thread count must be positive")
    return min(threads, 64)


def _axis_partition(cutoff, cells, octaves):
    """Cell edges on (0, cutoff]: `octaves` dyadic shells, split evenly."""
    per = max(1, -(-int(cells) // octaves))
    edges = [cutoff * 2.0 ** (-octaves)]
    for o in range(octaves, 0, -1):
        bot = cutoff * 2.0 ** (-o)
        edges.extend(np.linspace(bot, 2.0 * bot, per + 1)[1:])
    edges = np.asarray(edges)
    return edges[:-1], edges[1:]


def _gauss_nodes(lo, hi, order):
    """Per-cell Gauss-Legendre nodes and weights, shape (cells, order)."""
    x, w = np.polynomial.legendre.leggauss(order)
    half = 0.5 * (hi - lo)
    nodes = lo[:, None] + half[:, None] * (x[None, :] + 1.0)
    weights = half[:, None] * w[None, :]
    return nodes, weights


def _cell_masses(parts, partitions, order):
    """Spectral mass of every positive-orthant cell, via tensor quadrature."""
    term_vals = []
    weight_vals = []
    for axis, (lo, hi) in enumerate(partitions):
        nodes, weights = _gauss_nodes(lo, hi, order)
        term_vals.append(parts.axis_term(axis, nodes.ravel()))
        weight_vals.append(weights.ravel())
    total = math.prod(v.size for v in term_vals)
    if total > _MAX_MASS_NODES:
        raise ModelError(
            f"frequency lattice needs {total} quadrature nodes, above the "
            f"{_MAX_MASS_NODES} memory cap; lower the lattice size")
    n = len(term_vals)

    def spread(vec, j):
        return vec.reshape((1,) * j + (vec.size,) + (1,) * (n - j - 1))

    acc = spread(term_vals[0], 0)
    wgt = spread(weight_vals[0], 0)
    for j in range(1, n):
        acc = acc + spread(term_vals[j], j)
        wgt = wgt * spread(weight_vals[j], j)
    masses = parts.outer_map(acc) * wgt
    # fold the quadrature axis of each (cells, order) block
    block_shape = []
    for lo, _ in partitions:
        block_shape.extend([lo.size, order])
    return masses.reshape(block_shape).sum(axis=tuple(range(1, 2 * n, 2)))


_MASS_CACHE = {}
_MASS_CACHE_CAP = 8


def _cached_masses(model, partitions, order, cache_key):
    if cache_key in _MASS_CACHE:
        return _MASS_CACHE[cache_key]
    masses = _cell_masses(density_parts(model), partitions, order)
    if len(_MASS_CACHE) >= _MASS_CACHE_CAP:
        _MASS_CACHE.pop(next(iter(_MASS_CACHE)))
    _MASS_CACHE[cache_key] = masses
    return masses


def _representatives(partitions, seed, jitter):
    reps = []
    if jitter:
        rng = np.random.Generator(np.random.Philox(key=(seed, _JITTER_KEY)))
    for lo, hi in partitions:
        if jitter:
            u = rng.random(lo.size)
        else:
            u = np.full(lo.size, 0.5)
        reps.append(lo + u * (hi - lo))
    return reps


def _signed_axes(reps, masses):
    """Mirror every axis but the first; mass is even per axis."""
    axes = [reps[0]]
    masses = np.asarray(masses)
    for j in range(1, len(reps)):
        axes.append(np.concatenate([reps[j], -reps[j]]))
        masses = np.concatenate([masses, masses], axis=j)
    return axes, masses


_MAX_EXTENSION_OCTAVES = 40


def _axis_cutoffs(model, base):
    """Equalize the density level the truncation reaches on every axis.

    Anisotropic densities spread the mass near one axis's cutoff across
    the other axes up to the same level set of the axis-term sum;
    cutting those axes at their own grid Nyquist loses most of that
    marginal and biases small-lag increment variance low.  Returns
    per-axis cutoffs >= base together with the number of extra dyadic
    octaves each axis needs so low-frequency coverage stays put.
    """
    parts = density_parts(model)

    def term(j, x):
        return float(parts.axis_term(j, np.asarray(x, dtype=float)))

    levels = [term(j, b) for j, b in enumerate(base)]
    s_max = max(levels)
    cutoffs, extensions = [], []
    for j, b in enumerate(base):
        if levels[j] >= s_max:
            cutoffs.append(b)
            extensions.append(0)
            continue
        hi, doublings = b, 0
        while term(j, hi) < s_max and doublings < _MAX_EXTENSION_OCTAVES:
            hi *= 2.0
            doublings += 1
        lo = hi / 2.0
        for _ in range(60):
            mid = math.sqrt(lo * hi)
            if term(j, mid) < s_max:
                lo = mid
            else:
                hi = mid
        cutoffs.append(hi)
        extensions.append(doublings)
    return cutoffs, extensions


def _lattice(model, grid, lattice, seed, spec):
    exps = smoothness_exponents(model)
    oversample = spec.oversample
    if oversample is None:
        oversample = 64.0 if min(exps.h) < 1.0 else 8.0
    base = [oversample * np.pi / s for s in grid.spacing]
    if spec.freq_cap is not None:
        cutoffs = [spec.freq_cap] * grid.ndim
        extensions = [0] * grid.ndim
    else:
        cutoffs, extensions = _axis_cutoffs(model, base)
    per = max(1, -(-int(lattice) // spec.octaves))
    partitions = [
        _axis_partition(c, per * (spec.octaves + ext), spec.octaves + ext)
        for c, ext in zip(cutoffs, extensions)]
    cache_key = (model, tuple(float(c) for c in cutoffs),
                 tuple(extensions), lattice, spec.octaves, spec.mass_nodes)
    masses = _cached_masses(model, partitions, spec.mass_nodes, cache_key)
    reps = _representatives(partitions, seed, spec.jitter)
    axes, masses = _signed_axes(reps, masses)
    n_cells = masses.size
    if n_cells > _MAX_CELLS:
        raise ModelError(
            f"frequency lattice has {n_cells} cells, above the {_MAX_CELLS} "
            "memory cap; lower the lattice size or the dimension")
    return axes, masses, {"oversample": oversample,
                          "freq_cutoffs": tuple(float(c) for c in cutoffs)}


def _active_axes(grid):
    return [j for j in range(grid.ndim)
            if grid.shape[j] > 1 or grid.origin[j] != 0.0]


def _flatten_lattice(active_axes):
    """Frequency rows: the tensor product of the active-axis representatives."""
    if not active_axes:
        return np.zeros((1, 0))
    mesh = np.meshgrid(*active_axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def _evaluate_chunk(points, lambdas, c_cos, c_sin, cell_chunk):
    out = np.zeros((points.shape[0], c_cos.shape[-1]))
    for a in range(0, lambdas.shape[0], cell_chunk):
        b = min(a + cell_chunk, lambdas.shape[0])
        phases = points @ lambdas[a:b].T
        cosp = np.cos(phases)
        cosp -= 1.0
        sinp = np.sin(phases, out=phases)
        out += cosp @ c_cos[a:b]
        out += sinp @ c_sin[a:b]
    return out


def multi_copy_field(model, grid, lattice=4096, channels=1, seed=0, spec=None):
    """Synthesize `channels` independent copies of the field over a grid.

    Parameters
    ----------
    model : SpectralModel
        Legitimate spectral model; its dimension must match the grid.
    grid : Grid
        Evaluation grid.
    lattice : int
        Frequency cells per axis, divided across the dyadic octaves of
        the synthesis spec; at least 16.
    channels : int
        Number of independent copies, each from its own random stream.
    seed : int
        Base seed; (seed, channel) keys the coefficient stream.
    spec : SynthesisSpec, optional

    Returns
    -------
    FieldSample
        Values of shape grid.shape + (channels,), exactly zero wherever
        the grid point is the origin.
    """
    spec = spec or SynthesisSpec()
    seed = _check_seed(seed)
    if model.dims != grid.ndim:
        raise ModelError(f"model has {model.dims} axes, grid has {grid.ndim}")
    lattice = int(lattice)
    if lattice < 16:
        raise ModelError("lattice size must be at least 16")
    channels = int(channels)
    if channels < 1:
        raise ModelError("channel count must be at least 1")
    axes, masses, info = _lattice(model, grid, lattice, seed, spec)
    n_cells = int(masses.size)
    active = _active_axes(grid)
    inactive = tuple(j for j in range(len(axes)) if j not in active)
    if inactive:
        # axes the grid never leaves contribute a constant (zero) phase, so
        # their cells fold into one normal draw of the summed mass
        masses = masses.sum(axis=inactive)
    amp = np.sqrt(2.0 * masses)
    lambdas = _flatten_lattice([axes[j] for j in active])
    c_cos = np.empty((lambdas.shape[0], channels))
    c_sin = np.empty((lambdas.shape[0], channels))
    for c in range(channels):
        rng = np.random.Generator(np.random.Philox(key=(seed, c)))
        draws = rng.standard_normal(masses.shape + (2,))
        c_cos[:, c] = (amp * draws[..., 0]).ravel()
        c_sin[:, c] = (amp * draws[..., 1]).ravel()

    points = grid.points()[:, active]
    nthreads = _resolve_threads(spec.threads)
    chunks = [(a, min(a + spec.grid_chunk, points.shape[0]))
              for a in range(0, points.shape[0], spec.grid_chunk)]
    out = np.empty((points.shape[0], channels))

    def fill(bounds):
        a, b = bounds
        out[a:b] = _evaluate_chunk(points[a:b], lambdas, c_cos, c_sin,
                                   spec.cell_chunk)

    if nthreads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            list(pool.map(fill, chunks))
    else:
        for bounds in chunks:
            fill(bounds)

    meta = {"method": "spectral-lattice", "lattice": lattice,
            "n_cells": n_cells, "jitter": bool(spec.jitter),
            "threads": nthreads, "model": model_to_dict(model), **info}
    return FieldSample(grid=grid, values=out.reshape(grid.shape + (channels,)),
                       seed=seed, metadata=meta)


def sample_field(model, grid, lattice=4096, seed=0, spec=None):
    """Single-copy convenience wrapper around multi_copy_field."""
    return multi_copy_field(model, grid, lattice, 1, seed, spec)


def sample_stationary_exact(gm, grid, seed=0, pin_origin=False):
    """Exact dense-Cholesky draw from a Gneiting space-time covariance.

    Grid axes are the d spatial coordinates followed by time.  With
    pin_origin the draw is shifted by its value at the origin, giving a
    field with X(0) = 0.
    """
    seed = _check_seed(seed)
    if grid.ndim != gm.d + 1:
        raise ModelError(f"grid must have {gm.d + 1} axes (space then time)")
    if grid.npoints > _DENSE_LIMIT:
        raise ModelError(f"dense sampling is capped at {_DENSE_LIMIT} points")
    points = grid.points()
    origin_row = None
    if pin_origin:
        at_zero = np.flatnonzero(np.all(points == 0.0, axis=1))
        if at_zero.size:
            origin_row = int(at_zero[0])
        else:
            points = np.vstack([points, np.zeros(grid.ndim)])
            origin_row = points.shape[0] - 1
    dx = points[:, None, :gm.d] - points[None, :, :gm.d]
    dt = points[:, None, gm.d] - points[None, :, gm.d]
    cov = gneiting_covariance(gm, dx, dt)

    jitter = 1e-10 * gm.sigma2
    chol = None
    applied = 0.0
    for attempt in range(4):
        scaled = jitter * 10.0**attempt
        try:
            chol = np.linalg.cholesky(cov + scaled * np.eye(cov.shape[0]))
            applied = scaled
            break
        except np.linalg.LinAlgError:
            continue
    if chol is None:
        floor = float(np.linalg.eigvalsh(cov).min())
        raise FactorizationError(
            f"covariance failed to factorize; smallest eigenvalue {floor:.3e}",
            min_eigenvalue=floor)

    rng = np.random.Generator(np.random.Philox(key=(seed, 0)))
    draw = chol @ rng.standard_normal(cov.shape[0])
    if pin_origin:
        draw = draw - draw[origin_row]
        draw = draw[: grid.npoints]
    meta = {"method": "dense-cholesky", "jitter": applied,
            "pinned": bool(pin_origin), "model": gneiting_to_dict(gm)}
    return FieldSample(grid=grid, values=draw.reshape(grid.shape + (1,)),
                       seed=seed, metadata=meta)


def empirical_variogram(fs, axis, max_lag):
    """Average squared increments along a grid axis, per integer lag.

    Averages run over every valid start point and every channel.  The
    table flags lags built from fewer than 30 pairs when the sample has
    a single channel, since those averages are noisy.
    """
    if not 0 <= axis < fs.grid.ndim:
        raise ModelError(f"axis must lie in [0, {fs.grid.ndim})")
    max_lag = int(max_lag)
    n = fs.grid.shape[axis]
    if not 1 <= max_lag < n:
        raise ModelError("max_lag must satisfy 1 <= max_lag < shape[axis]")
    vals = np.moveaxis(fs.values, axis, 0)
    lags = np.zeros((max_lag, fs.grid.ndim))
    means = []
    errs = []
    sparse = False
    for ell in range(1, max_lag + 1):
        sq = (vals[ell:] - vals[:-ell]) ** 2
        sq = sq.ravel()
        if fs.nchannels == 1 and sq.size < 30:
            sparse = True
        lags[ell - 1, axis] = ell * fs.grid.spacing[axis]
        means.append(float(sq.mean()))
        errs.append(float(sq.std(ddof=1) / np.sqrt(sq.size)) if sq.size > 1 else 0.0)
    meta = {"axis": axis, "channels": fs.nchannels, "seed": fs.seed,
            "sparse_pairs": sparse}
    return VariogramTable(model_id="empirical", lags=lags,
                          values=tuple(means), errs=tuple(errs), meta=meta)
