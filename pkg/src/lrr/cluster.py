"""From representation to decisions: affinity construction, spectral
segmentation, subspace-count estimation, and outlier detection."""

import math
from dataclasses import dataclass

import numpy as np

from .linalg import as_matrix, skinny_svd
from .solver import solve_lrr_self

# Rank cutoff applied to solver output before factoring: converged iterates
# carry junk singular values around the stopping tolerance which must not
# enter the affinity (each spurious direction would contribute full weight).
SOLUTION_RANK_TOL = 1e-4

DEFAULT_TAU = 0.08


@dataclass(frozen=True)
class Affinity:
    """Symmetric nonnegative affinity matrix with entries in [0, 1].
    ``degenerate`` flags the all-zero matrix produced from a zero input."""

    W: np.ndarray
    degenerate: bool = False

    @property
    def n(self):
        return self.W.shape[0]


@dataclass(frozen=True)
class LaplacianSpectrum:
    """Singular values of the symmetric normalized Laplacian, sorted
    non-decreasing. All values lie in [0, 2] up to roundoff."""

    sigma: np.ndarray

    @property
    def n(self):
        return self.sigma.size


@dataclass(frozen=True)
class SegmentationResult:
    labels: np.ndarray
    k: int
    outliers: np.ndarray | None
    k_hat: int | None
    solution: object = None
    affinity: Affinity | None = None
    spectrum: LaplacianSpectrum | None = None


def build_affinity(Z_star, rank_tol=SOLUTION_RANK_TOL):
    """Affinity from a representation matrix.

    Factor ``Z* = U S V^T`` (skinny), weight the columns of U by sqrt(S),
    scale each row to unit length (zero rows stay zero), and square the
    resulting Gram matrix entrywise:

        W_ij = ([U_tilde U_tilde^T]_ij)^2

    Squaring makes every affinity nonnegative. W is exactly symmetric by
    construction. A zero input yields the zero affinity with
    ``degenerate=True``.
    """
    Z = as_matrix(Z_star, "Z_star")
    n = Z.shape[0]
    f = skinny_svd(Z, rank_tol)
    if f.rank == 0:
        return Affinity(W=np.zeros((n, n)), degenerate=True)
    U = f.U * np.sqrt(f.sigma)
    rn = np.linalg.norm(U, axis=1)
    nz = rn > 0
    U[nz] /= rn[nz, None]
    G = U @ U.T
    G = (G + G.T) / 2.0
    return Affinity(W=G * G)


def _as_affinity_array(W):
    if isinstance(W, Affinity):
        return W.W
    W = as_matrix(W, "W")
    if W.shape[0] != W.shape[1]:
        raise ValueError(f"affinity must be square, got {W.shape}")
    return W


def _normalized_laplacian(W):
    W = _as_affinity_array(W)
    deg = W.sum(axis=1)
    inv_sqrt = np.zeros_like(deg)
    pos = deg > 0
    inv_sqrt[pos] = 1.0 / np.sqrt(deg[pos])  # isolated nodes stay at 0
    L = np.eye(W.shape[0]) - (inv_sqrt[:, None] * W) * inv_sqrt[None, :]
    return (L + L.T) / 2.0, pos


def laplacian_spectrum(W):
    """Singular values of ``L = I - D^{-1/2} W D^{-1/2}`` (non-decreasing).

    L is symmetric positive semidefinite, so its singular values are its
    eigenvalues; tiny negative eigenvalues from roundoff are folded back by
    absolute value.
    """
    L, _ = _normalized_laplacian(W)
    vals = np.linalg.eigvalsh(L)
    return LaplacianSpectrum(sigma=np.sort(np.abs(vals)))


def estimate_k(spectrum, tau=DEFAULT_TAU):
    """Estimated cluster count from the Laplacian spectrum.

    Counts singular values via the soft threshold f_tau (1 at or above tau,
    ``log2(1 + sigma^2/tau^2)`` below), rounds the total to the nearest
    integer (half away from zero), and returns ``n - total`` clamped to at
    least 1.
    """
    if not 0 < tau < 1:
        raise ValueError("tau must lie in (0, 1)")
    s = spectrum.sigma if isinstance(spectrum, LaplacianSpectrum) else np.asarray(spectrum, dtype=float)
    soft = np.where(s >= tau, 1.0, np.log2(1.0 + (s / tau) ** 2))
    k_hat = s.size - int(math.floor(soft.sum() + 0.5))
    return max(k_hat, 1)


def _farthest_point_init(points, k, rng):
    n = points.shape[0]
    centers = np.empty((k, points.shape[1]))
    centers[0] = points[rng.integers(n)]
    d2 = ((points - centers[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        centers[j] = points[int(np.argmax(d2))]
        d2 = np.minimum(d2, ((points - centers[j]) ** 2).sum(axis=1))
    return centers


def _kmeans(points, k, rng, restarts=20, max_sweeps=100):
    """Seeded k-means with greedy farthest-point init; returns the labeling
    with the best within-cluster sum of squares over the restarts."""
    n = points.shape[0]
    best_labels = None
    best_cost = np.inf
    for _ in range(restarts):
        centers = _farthest_point_init(points, k, rng)
        labels = np.full(n, -1)
        for _ in range(max_sweeps):
            d2 = ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
            new_labels = np.argmin(d2, axis=1)
            dist_to_own = d2[np.arange(n), new_labels]
            for c in range(k):
                members = new_labels == c
                if members.any():
                    centers[c] = points[members].mean(axis=0)
                else:
                    far = int(np.argmax(dist_to_own))
                    centers[c] = points[far]
                    new_labels[far] = c
                    dist_to_own[far] = 0.0
            if np.array_equal(new_labels, labels):
                break
            labels = new_labels
        d2 = ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        cost = d2[np.arange(n), labels].sum()
        if cost < best_cost:
            best_cost = cost
            best_labels = labels
    return best_labels


def ncut_segment(W, k, seed=0):
    """Normalized-cut style spectral segmentation into ``k`` clusters.

    Embeds the samples with the k eigenvectors of the normalized Laplacian
    belonging to the smallest eigenvalues, scales the rows to unit length,
    and clusters with seeded k-means (greedy farthest-point initialization,
    20 restarts, lowest within-cluster sum of squares kept). Isolated
    (zero-degree) samples are assigned the last label.

    Self-affinities play no part in a cut, so the diagonal of W is zeroed
    before the Laplacian is formed; with unit self-affinities the loops
    would account for a large share of each degree and blur the
    eigenstructure of weakly connected blocks.
    """
    W = _as_affinity_array(W)
    n = W.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    if k == 1:
        return np.zeros(n, dtype=int)
    W = W.copy()
    np.fill_diagonal(W, 0.0)
    L, connected = _normalized_laplacian(W)
    _, vecs = np.linalg.eigh(L)
    emb = vecs[:, :k].copy()
    rn = np.linalg.norm(emb, axis=1)
    nz = rn > 0
    emb[nz] /= rn[nz, None]
    rng = np.random.default_rng(seed)
    labels = _kmeans(emb, k, rng).astype(int)
    if not connected.all():
        labels[~connected] = k - 1
    return labels


def detect_outliers(E_star, delta):
    """Indices of columns of ``E_star`` whose Euclidean norm exceeds
    ``delta``, sorted ascending."""
    if not delta > 0:
        raise ValueError("delta must be positive")
    E = as_matrix(E_star, "E_star")
    return np.flatnonzero(np.linalg.norm(E, axis=0) > delta)


def segment(X, k, model="l21", opts=None, tau=DEFAULT_TAU, delta=None, seed=None,
            rank_tol=SOLUTION_RANK_TOL):
    """End-to-end pipeline: self-expressive solve, affinity, optional
    cluster-count estimation (``k="auto"``), spectral segmentation, and
    optional outlier detection (when ``delta`` is given).

    Returns a :class:`SegmentationResult` carrying labels plus every
    intermediate product as diagnostics.
    """
    sol = solve_lrr_self(X, model, opts)
    aff = build_affinity(sol.Z, rank_tol)
    spectrum = laplacian_spectrum(aff)
    k_hat = estimate_k(spectrum, tau)
    k_used = k_hat if isinstance(k, str) and k == "auto" else int(k)
    if seed is None:
        seed = opts.seed
    labels = ncut_segment(aff, k_used, seed)
    outliers = detect_outliers(sol.E, delta) if delta is not None else None
    return SegmentationResult(
        labels=labels,
        k=k_used,
        outliers=outliers,
        k_hat=k_hat,
        solution=sol,
        affinity=aff,
        spectrum=spectrum,
    )
