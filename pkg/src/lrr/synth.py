"""Seeded generators for multi-subspace benchmark data: random subspace
ensembles, clean samples, and the three planted error types (dense noise,
gross sample-specific corruptions, appended outliers).

Every generator is a pure function of its inputs and seed; datasets are
immutable and each mutation returns a new one with ``X == X0 + E0`` kept
exact (X is recomputed from the parts)."""

import math
from dataclasses import dataclass, replace

import numpy as np

from .linalg import as_matrix, skinny_svd

MODES = ("independent", "disjoint")


@dataclass(frozen=True)
class SubspaceEnsemble:
    """Orthonormal bases of k random subspaces of R^ambient."""

    bases: tuple
    mode: str
    seed: int

    @property
    def k(self):
        return len(self.bases)

    @property
    def ambient(self):
        return self.bases[0].shape[0]


@dataclass(frozen=True)
class SyntheticDataset:
    """Observed matrix X = X0 + E0 with the planted structure recorded.

    ``true_labels`` holds the subspace index per column, -1 for outliers.
    Columns of X0 at ``outlier_indices`` are exactly zero. ``V0`` is an
    orthonormal basis of the row space of X0.
    """

    X: np.ndarray
    X0: np.ndarray
    E0: np.ndarray
    true_labels: np.ndarray
    outlier_indices: np.ndarray
    corrupted_indices: np.ndarray
    V0: np.ndarray

    @property
    def n(self):
        return self.X.shape[1]

    @property
    def d(self):
        return self.X.shape[0]

    @property
    def rank0(self):
        return self.V0.shape[1]

    @property
    def outlier_fraction(self):
        return self.outlier_indices.size / self.n

    @property
    def error_ratio(self):
        """||E0||_F / ||X0||_F, the total planted error level."""
        return float(np.linalg.norm(self.E0) / np.linalg.norm(self.X0))

    def authentic_indices(self):
        return np.flatnonzero(self.true_labels >= 0)


def gen_ensemble(k, dim, ambient, mode="disjoint", seed=0):
    """Draw k random ``dim``-dimensional subspaces of R^``ambient``.

    Bases come from orthonormalizing standard Gaussian matrices.
    ``independent`` mode requires ``k*dim <= ambient`` (the bases stack to
    full rank); ``disjoint`` mode only requires pairwise trivial
    intersections, so the dimensions may sum past the ambient one.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if k < 1 or dim < 1:
        raise ValueError("k and dim must be positive")
    if mode == "independent" and k * dim > ambient:
        raise ValueError(
            f"independent mode needs k*dim <= ambient ({k}*{dim} > {ambient})"
        )
    if dim > ambient or (mode == "disjoint" and k >= 2 and 2 * dim > ambient):
        raise ValueError(
            f"disjoint subspaces of dimension {dim} do not fit in R^{ambient}"
        )
    rng = np.random.default_rng(seed)
    bases = []
    for _ in range(k):
        q, _ = np.linalg.qr(rng.standard_normal((ambient, dim)))
        bases.append(q)
    if mode == "independent" and k > 1:
        stacked = np.hstack(bases)
        smin = np.linalg.svd(stacked, compute_uv=False)[-1]
        if smin <= 1e-10:  # pragma: no cover - measure zero for Gaussian draws
            raise ValueError("drawn bases are not independent; use another seed")
    if k > 1:
        for i in range(k):
            for j in range(i + 1, k):
                pair = np.hstack([bases[i], bases[j]])
                smin = np.linalg.svd(pair, compute_uv=False)[-1]
                if smin <= 1e-6:  # pragma: no cover - measure zero
                    raise ValueError(
                        f"subspaces {i} and {j} intersect; use another seed"
                    )
    return SubspaceEnsemble(bases=tuple(bases), mode=mode, seed=seed)


def _rebuild(ds, X0, E0, labels, outliers, corrupted, refresh_v0):
    V0 = skinny_svd(X0).V if refresh_v0 else ds.V0
    return SyntheticDataset(
        X=X0 + E0,
        X0=X0,
        E0=E0,
        true_labels=labels,
        outlier_indices=outliers,
        corrupted_indices=corrupted,
        V0=V0,
    )


def sample(ens, per_subspace, seed=0):
    """Draw ``per_subspace`` clean samples from each subspace (basis times
    standard Gaussian coefficients). Labels run in k blocks of
    ``per_subspace``."""
    if per_subspace < 1:
        raise ValueError("per_subspace must be at least 1")
    rng = np.random.default_rng(seed)
    cols = [B @ rng.standard_normal((B.shape[1], per_subspace)) for B in ens.bases]
    X0 = np.hstack(cols)
    labels = np.repeat(np.arange(ens.k), per_subspace)
    empty = np.empty(0, dtype=int)
    return SyntheticDataset(
        X=X0.copy(),
        X0=X0,
        E0=np.zeros_like(X0),
        true_labels=labels,
        outlier_indices=empty,
        corrupted_indices=empty.copy(),
        V0=skinny_svd(X0).V,
    )


def _mean_authentic_column_norm(ds):
    auth = ds.authentic_indices()
    return float(np.linalg.norm(ds.X0[:, auth], axis=0).mean())


def add_outliers(ds, count, magnitude_scale=3.0, seed=0, shuffle=False):
    """Append ``count`` outlier columns drawn i.i.d. Gaussian.

    The per-entry standard deviation is ``magnitude_scale`` times the mean
    sample column norm divided by sqrt(d), so an outlier column's norm is
    about ``magnitude_scale`` times a sample's. The appended clean columns
    are zero and the labels are -1. ``shuffle`` applies a seeded column
    permutation afterwards so downstream code cannot rely on ordering.
    """
    if count < 0:
        raise ValueError("count must be nonnegative")
    if count == 0:
        return ds
    rng = np.random.default_rng(seed)
    d, n = ds.X0.shape
    std = magnitude_scale * _mean_authentic_column_norm(ds) / math.sqrt(d)
    O = rng.normal(0.0, std, size=(d, count))
    X0 = np.hstack([ds.X0, np.zeros((d, count))])
    E0 = np.hstack([ds.E0, O])
    labels = np.concatenate([ds.true_labels, np.full(count, -1)])
    outliers = np.concatenate([ds.outlier_indices, n + np.arange(count)])
    corrupted = ds.corrupted_indices
    if shuffle:
        perm = rng.permutation(n + count)
        X0, E0, labels = X0[:, perm], E0[:, perm], labels[perm]
        inv = np.empty_like(perm)
        inv[perm] = np.arange(perm.size)
        outliers = np.sort(inv[outliers])
        corrupted = np.sort(inv[corrupted])
    return _rebuild(ds, X0, E0, labels, outliers, corrupted, refresh_v0=True)


def corrupt_samples(ds, fraction, magnitude_scale=0.7, seed=0):
    """Grossly corrupt a random fraction of the authentic samples.

    Picks ``ceil(fraction * n_authentic)`` authentic columns uniformly and
    adds a Gaussian error column scaled so its norm is about
    ``magnitude_scale`` times that sample's norm. Corrupted samples keep
    their labels (they are still subspace members underneath).
    """
    if not 0 <= fraction <= 1:
        raise ValueError("fraction must lie in [0, 1]")
    if fraction == 0:
        return ds
    rng = np.random.default_rng(seed)
    auth = ds.authentic_indices()
    m = math.ceil(fraction * auth.size)
    chosen = np.sort(rng.choice(auth, size=m, replace=False))
    d = ds.d
    col_norms = np.linalg.norm(ds.X0[:, chosen], axis=0)
    noise = rng.standard_normal((d, m)) * (magnitude_scale * col_norms / math.sqrt(d))
    E0 = ds.E0.copy()
    E0[:, chosen] += noise
    corrupted = np.union1d(ds.corrupted_indices, chosen)
    return _rebuild(ds, ds.X0, E0, ds.true_labels, ds.outlier_indices, corrupted,
                    refresh_v0=False)


def add_noise(ds, level, seed=0):
    """Add dense Gaussian noise to every authentic, non-grossly-corrupted
    column, with entry standard deviation ``level`` times the RMS entry
    magnitude of the authentic part of X0."""
    if level < 0:
        raise ValueError("level must be nonnegative")
    if level == 0:
        return ds
    rng = np.random.default_rng(seed)
    auth = ds.authentic_indices()
    targets = np.setdiff1d(auth, ds.corrupted_indices)
    if targets.size == 0:
        return ds
    rms = float(np.sqrt(np.mean(ds.X0[:, auth] ** 2)))
    E0 = ds.E0.copy()
    E0[:, targets] += rng.normal(0.0, level * rms, size=(ds.d, targets.size))
    return _rebuild(ds, ds.X0, E0, ds.true_labels, ds.outlier_indices,
                    ds.corrupted_indices, refresh_v0=False)


def normalize_columns(ds):
    """Rescale every observed column of X to unit Euclidean norm.

    X0 and E0 columns are scaled by the same factors, so all dataset
    invariants are preserved; V0 is recomputed for the rescaled clean part.
    This is the standard preprocessing for the benchmark recipes: the
    solver's behavior at a given lam is only meaningful relative to the
    sample magnitude. Columns with zero norm are left untouched.
    """
    norms = np.linalg.norm(ds.X, axis=0)
    scale = np.where(norms > 0, 1.0 / np.where(norms > 0, norms, 1.0), 1.0)
    return _rebuild(ds, ds.X0 * scale, ds.E0 * scale, ds.true_labels,
                    ds.outlier_indices, ds.corrupted_indices, refresh_v0=True)


def smallest_principal_angle(B1, B2):
    """Smallest principal angle (radians) between two subspaces given by
    column-orthonormal bases; 0 means the subspaces intersect."""
    c = np.linalg.svd(as_matrix(B1).T @ as_matrix(B2), compute_uv=False)
    return float(np.arccos(np.clip(c[0], -1.0, 1.0)))
