"""Histograms, kernel density estimates and KL divergence on the fidelity axis."""

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from scipy import integrate

from ..errors import InvalidArgumentError

FloatArray = npt.NDArray[np.float64]
IntArray = npt.NDArray[np.int64]

DEFAULT_BINS = 100
DEFAULT_GRID_POINTS = 1000
KL_EPSILON = 1e-9
_KDE_CHUNK = 8192


@dataclass(frozen=True)
class Histogram:
    """Bin counts over fixed edges."""

    edges: FloatArray
    counts: IntArray

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def centers(self) -> FloatArray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])

    def probabilities(self) -> FloatArray:
        total = self.total
        if total == 0:
            raise InvalidArgumentError("histogram is empty")
        return self.counts / total


@dataclass(frozen=True)
class DensityEstimate:
    """Density evaluated on a grid."""

    grid: FloatArray
    density: FloatArray
    bandwidth: float

    def integral(self) -> float:
        return float(integrate.trapezoid(self.density, self.grid))


def fidelity_edges(bins: int = DEFAULT_BINS) -> FloatArray:
    """Uniform bin edges on [0, 1]."""
    if bins < 1:
        raise InvalidArgumentError(f"bins must be >= 1, got {bins}")
    return np.linspace(0.0, 1.0, bins + 1)


def bin_indices(values: FloatArray, edges: FloatArray) -> IntArray:
    """Bin index per value; the last bin is closed on the right."""
    idx = np.searchsorted(edges, values, side="right") - 1
    return np.clip(idx, 0, edges.shape[0] - 2).astype(np.int64)


def histogram(samples: FloatArray, bins: int = DEFAULT_BINS) -> Histogram:
    """Histogram of fidelity samples on [0, 1]; NaN (missing) samples are skipped."""
    values = np.asarray(samples, dtype=np.float64).reshape(-1)
    values = values[np.isfinite(values)]
    edges = fidelity_edges(bins)
    counts = np.bincount(bin_indices(values, edges), minlength=bins).astype(np.int64)
    return Histogram(edges=edges, counts=counts)


def histogram_rows(values: FloatArray, edges: FloatArray) -> IntArray:
    """Histogram each row of a 2-D array over shared edges; NaN entries are skipped."""
    rows = np.atleast_2d(np.asarray(values, dtype=np.float64))
    n_rows, bins = rows.shape[0], edges.shape[0] - 1
    valid = np.isfinite(rows)
    idx = bin_indices(np.where(valid, rows, 0.0), edges)
    flat = (np.arange(n_rows)[:, None] * bins + idx)[valid]
    return np.bincount(flat, minlength=n_rows * bins).reshape(n_rows, bins).astype(np.int64)


def silverman_bandwidth(samples: FloatArray) -> float:
    """Silverman's rule 0.9 min(std, IQR/1.34) n^(-1/5); 0 for zero spread."""
    x = np.asarray(samples, dtype=np.float64)
    std = float(np.std(x))
    q75, q25 = np.percentile(x, [75, 25])
    iqr = float(q75 - q25)
    spread = min(std, iqr / 1.34) if iqr > 0 else std
    return 0.9 * spread * x.size ** (-0.2)


def kde(
    samples: FloatArray,
    bandwidth: float | None = None,
    grid_points: int = DEFAULT_GRID_POINTS,
) -> DensityEstimate:
    """Gaussian kernel density on [0, 1] with reflection at both boundaries.

    The bandwidth defaults to Silverman's rule and is floored at two grid
    spacings so the grid resolves every kernel.

    Args:
        samples: Fidelity samples; NaN entries are ignored.
        bandwidth: Kernel standard deviation, or None for Silverman's rule.
        grid_points: Number of grid points on [0, 1].

    Returns:
        DensityEstimate integrating to 1 over [0, 1].
    """
    x = np.asarray(samples, dtype=np.float64).reshape(-1)
    x = x[np.isfinite(x)]
    if x.size < 2:
        raise InvalidArgumentError(f"kde needs at least 2 samples, got {x.size}")
    if bandwidth is not None and not bandwidth > 0:
        raise InvalidArgumentError(f"bandwidth must be > 0, got {bandwidth}")
    grid = np.linspace(0.0, 1.0, grid_points)
    floor = 2.0 / (grid_points - 1)
    bw = max(silverman_bandwidth(x) if bandwidth is None else bandwidth, floor)

    density = np.zeros(grid_points)
    norm = 1.0 / (x.size * bw * np.sqrt(2.0 * np.pi))
    for start in range(0, x.size, _KDE_CHUNK):
        chunk = x[start : start + _KDE_CHUNK]
        for centers in (chunk, -chunk, 2.0 - chunk):
            z = (grid[:, None] - centers[None, :]) / bw
            density += np.exp(-0.5 * z * z).sum(axis=1)
    return DensityEstimate(grid=grid, density=density * norm, bandwidth=bw)


def _smoothed(q: FloatArray, epsilon: float) -> FloatArray:
    total = q.sum(axis=-1, keepdims=True)
    with np.errstate(invalid="ignore", divide="ignore"):
        floored = np.maximum(q / total, epsilon)
    return floored / floored.sum(axis=-1, keepdims=True)


def kl_divergence(p: Histogram, q: Histogram, epsilon: float = KL_EPSILON) -> float:
    """KL(p || q) with q floored at ``epsilon`` per bin and renormalized."""
    if p.edges.shape != q.edges.shape or not np.array_equal(p.edges, q.edges):
        raise InvalidArgumentError("histograms must share the same binning")
    if q.total == 0:
        raise InvalidArgumentError("model histogram is empty")
    p_prob = p.probabilities()
    q_prob = _smoothed(q.counts.astype(np.float64), epsilon)
    mask = p_prob > 0
    return float(np.sum(p_prob[mask] * np.log(p_prob[mask] / q_prob[mask])))


def kl_divergence_rows(
    p_counts: IntArray, q_counts: IntArray, epsilon: float = KL_EPSILON
) -> FloatArray:
    """KL(p || q_r) for one reference histogram and each row of ``q_counts``.

    Rows with no counts yield +inf.
    """
    p_prob = p_counts / p_counts.sum()
    q = np.atleast_2d(q_counts).astype(np.float64)
    empty = q.sum(axis=1) == 0
    q_prob = _smoothed(q, epsilon)
    mask = p_prob > 0
    terms = p_prob[mask] * (np.log(p_prob[mask])[None, :] - np.log(q_prob[:, mask]))
    result = terms.sum(axis=1)
    result[empty] = np.inf
    return result
