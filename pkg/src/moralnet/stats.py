"""Rank tests and principal components for foundation profiles.

Self-contained numerics: the chi-square upper tail comes from a
regularized incomplete gamma (series plus continued fraction), and the
eigendecomposition runs cyclic Jacobi rotations. Input matrices here
are tiny (five foundations), so clarity wins over speed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .errors import DataError

_GAMMA_EPS = 1e-15
_GAMMA_MAX_ITER = 500
_JACOBI_TOL = 1e-12
_JACOBI_MAX_SWEEPS = 100


# ----------------------------------------------------- incomplete gamma

def _gamma_p_series(s: float, x: float) -> float:
    """Lower regularized gamma P(s, x) by power series; wants x < s + 1."""
    term = 1.0 / s
    total = term
    denom = s
    for _ in range(_GAMMA_MAX_ITER):
        denom += 1.0
        term *= x / denom
        total += term
        if abs(term) < abs(total) * _GAMMA_EPS:
            break
    return total * math.exp(-x + s * math.log(x) - math.lgamma(s))

def _gamma_q_contfrac(s: float, x: float) -> float:
    """Upper regularized gamma Q(s, x) by Lentz continued fraction;
    wants x >= s + 1."""
    tiny = 1e-300
    b = x + 1.0 - s
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _GAMMA_MAX_ITER + 1):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _GAMMA_EPS:
            break
    return h * math.exp(-x + s * math.log(x) - math.lgamma(s))


def chi2_sf(x: float, df: float) -> float:
    """P(X > x) for a chi-square variable with ``df`` degrees of freedom."""
    if df <= 0:
        raise ValueError(f"degrees of freedom must be positive, got {df}")
    if math.isnan(x):
        return math.nan
    if x <= 0.0:
        return 1.0
    s = df / 2.0
    half = x / 2.0
    if half < s + 1.0:
        return max(0.0, min(1.0, 1.0 - _gamma_p_series(s, half)))
    return max(0.0, min(1.0, _gamma_q_contfrac(s, half)))


# ------------------------------------------------------- Kruskal-Wallis

@dataclass(frozen=True)
class KruskalWallisResult:
    statistic: float
    p_value: float
    degrees_of_freedom: int
    group_sizes: tuple[int, ...]


def _midranks(values: Sequence[float]) -> tuple[list[float], float]:
    """1-based ranks with ties sharing their average rank.

    Also returns the tie term sum(t^3 - t) over tie groups.
    """
    n = len(values)
    order = sorted(range(n), key=lambda i: values[i])
    ranks = [0.0] * n
    tie_term = 0.0
    i = 0
    while i < n:
        j = i
        while j + 1 < n and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j + 2) / 2.0
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        t = j - i + 1
        tie_term += t ** 3 - t
        i = j + 1
    return ranks, tie_term


def kruskal_wallis(*groups: Sequence[float]) -> KruskalWallisResult:
    """Rank-based test that the groups share one distribution.

    Ties share mid-ranks and the statistic carries the usual tie
    correction. When every observation is identical the statistic is
    defined as 0 with p = 1.
    """
    if len(groups) < 2:
        raise ValueError(f"need at least two groups, got {len(groups)}")
    sizes = tuple(len(g) for g in groups)
    for gi, size in enumerate(sizes):
        if size == 0:
            raise ValueError(f"group {gi} is empty")
    pooled: list[float] = []
    for g in groups:
        for v in g:
            v = float(v)
            if math.isnan(v):
                raise ValueError("observations must not be NaN")
            pooled.append(v)
    n = len(pooled)
    ranks, tie_term = _midranks(pooled)
    df = len(groups) - 1
    correction = 1.0 - tie_term / (n ** 3 - n) if n > 1 else 0.0
    if correction == 0.0:
        return KruskalWallisResult(0.0, 1.0, df, sizes)
    h = 0.0
    pos = 0
    grand_mean = (n + 1) / 2.0
    for size in sizes:
        mean_rank = sum(ranks[pos : pos + size]) / size
        h += size * (mean_rank - grand_mean) ** 2
        pos += size
    h *= 12.0 / (n * (n + 1))
    h /= correction
    return KruskalWallisResult(h, chi2_sf(h, df), df, sizes)


# ------------------------------------------------------------------ PCA

def _jacobi_eigh(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and eigenvectors of a small symmetric matrix via
    cyclic Jacobi rotations."""
    a = matrix.astype(np.float64).copy()
    d = a.shape[0]
    v = np.eye(d)
    scale = float(np.sqrt(np.sum(a * a)))
    for _ in range(_JACOBI_MAX_SWEEPS):
        off = float(np.sqrt(np.sum(np.square(a - np.diag(np.diag(a))))))
        if off <= _JACOBI_TOL * max(scale, 1e-300):
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                app = a[p, p]
                aqq = a[q, q]
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(d):
                    if k == p or k == q:
                        continue
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[p, k] = a[k, p]
                    a[k, q] = s * akp + c * akq
                    a[q, k] = a[k, q]
                for k in range(d):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * vkq
                    v[k, q] = s * vkp + c * vkq
    eigenvalues = np.diag(a).copy()
    order = np.argsort(-eigenvalues, kind="stable")
    return eigenvalues[order], v[:, order]


@dataclass(frozen=True, eq=False)
class PcaResult:
    """Eigenstructure of a centred (optionally standardized) data matrix.

    ``components`` holds one unit eigenvector per column, eigenvalue
    order descending; ``scores`` are the projected rows.
    """

    mode: str
    dim_names: tuple[str, ...]
    mean: np.ndarray = field(repr=False)
    scale: np.ndarray | None = field(repr=False)
    components: np.ndarray = field(repr=False)
    eigenvalues: np.ndarray = field(repr=False)
    explained_ratios: np.ndarray = field(repr=False)
    scores: np.ndarray = field(repr=False)

    @property
    def num_dims(self) -> int:
        return len(self.dim_names)


PCA_MODES = ("covariance", "correlation")


def pca(
    matrix: object,
    mode: str = "covariance",
    dim_names: Sequence[str] | None = None,
) -> PcaResult:
    """Principal components of rows-by-dimensions data.

    ``covariance`` mode centres only; ``correlation`` mode also divides
    each dimension by its standard deviation and refuses zero-variance
    dimensions by name.
    """
    if mode not in PCA_MODES:
        raise ValueError(f"mode must be one of {PCA_MODES}, got {mode!r}")
    data = np.asarray(matrix, dtype=np.float64)
    if data.ndim != 2:
        raise DataError(f"expected a 2-d matrix, got {data.ndim} dimensions")
    n, d = data.shape
    if n < 2:
        raise DataError(f"need at least 2 rows, got {n}")
    if d < 2:
        raise DataError(f"need at least 2 dimensions, got {d}")
    if not np.all(np.isfinite(data)):
        raise DataError("matrix contains non-finite values")
    if dim_names is None:
        names = tuple(f"dim{i}" for i in range(d))
    else:
        names = tuple(dim_names)
        if len(names) != d:
            raise ValueError(
                f"got {len(names)} dimension names for {d} dimensions"
            )

    mean = data.mean(axis=0)
    centred = data - mean
    scale: np.ndarray | None = None
    if mode == "correlation":
        std = centred.std(axis=0, ddof=1)
        dead = np.flatnonzero(std == 0.0)
        if dead.size:
            raise DataError(
                f"dimension {names[int(dead[0])]!r} has zero variance; "
                "correlation mode needs spread in every dimension"
            )
        scale = std
        centred = centred / std
    cov = centred.T @ centred / (n - 1)
    if float(np.trace(cov)) == 0.0:
        raise DataError("matrix has no variance in any dimension")
    eigenvalues, components = _jacobi_eigh(cov)
    # the matrix is positive semi-definite; negatives are round-off
    eigenvalues = np.maximum(eigenvalues, 0.0)
    for j in range(d):
        col = components[:, j]
        lead = int(np.argmax(np.abs(col)))
        if col[lead] < 0.0:
            components[:, j] = -col
    explained = eigenvalues / float(np.sum(eigenvalues))
    scores = centred @ components
    return PcaResult(
        mode=mode,
        dim_names=names,
        mean=mean,
        scale=scale,
        components=components,
        eigenvalues=eigenvalues,
        explained_ratios=explained,
        scores=scores,
    )


# -------------------------------------------------------- chart tables

SCREE_HEADER = ("component", "eigenvalue", "explained_ratio")
def scree_rows(result: PcaResult) -> Iterator[tuple[str, float, float]]:
    for j in range(result.num_dims):
        yield (
            f"PC{j + 1}",
            float(result.eigenvalues[j]),
            float(result.explained_ratios[j]),
        )


def heatmap_header(result: PcaResult) -> tuple[str, ...]:
    return ("dimension",) + tuple(f"PC{j + 1}" for j in range(result.num_dims))


def heatmap_rows(result: PcaResult) -> Iterator[tuple[object, ...]]:
    """Loading of every dimension on every component."""
    for i, name in enumerate(result.dim_names):
        yield (name,) + tuple(float(x) for x in result.components[i, :])


def biplot_header(axes: tuple[int, int]) -> tuple[str, str, str, str]:
    return ("kind", "name", f"PC{axes[0]}", f"PC{axes[1]}")


def biplot_rows(
    result: PcaResult,
    axes: tuple[int, int] = (1, 2),
    row_names: Sequence[str] | None = None,
) -> Iterator[tuple[object, ...]]:
    """Projected observations plus one scaled arrow per dimension.

    ``axes`` picks two distinct 1-based components. Arrows are the
    eigenvector coordinates scaled by the square root of the eigenvalue.
    """
    i, j = axes
    if i == j:
        raise ValueError("biplot axes must be distinct")
    for axis in (i, j):
        if not 1 <= axis <= result.num_dims:
            raise ValueError(
                f"axis {axis} out of range 1..{result.num_dims}"
            )
    ii = i - 1
    jj = j - 1
    n = result.scores.shape[0]
    if row_names is not None and len(row_names) != n:
        raise ValueError(f"got {len(row_names)} row names for {n} rows")
    for r in range(n):
        name = row_names[r] if row_names is not None else str(r)
        yield (
            "score",
            name,
            float(result.scores[r, ii]),
            float(result.scores[r, jj]),
        )
    for d, dim in enumerate(result.dim_names):
        yield (
            "axis",
            dim,
            float(result.components[d, ii] * math.sqrt(result.eigenvalues[ii])),
            float(result.components[d, jj] * math.sqrt(result.eigenvalues[jj])),
        )
