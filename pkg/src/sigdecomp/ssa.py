"""Sliding singular spectrum analysis.

Each analysis window is embedded into a Hankel trajectory matrix and
decomposed by SVD.  Eigentriples surviving a relative singular-value
threshold are diagonal-averaged back into window-length series, grouped
into a requested number of classes by 1-D k-means on their dominant
frequencies (deterministically seeded), and the per-class series are
overlap-added across windows under a normalized Hann cross-fade.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .core import ContractViolation, Decomposition, Signal
from .metrics import dominant_frequency_hz


@dataclass(frozen=True)
class SsaConfig:
    L: int = 110  # embedding dimension
    K: int = 3  # output classes
    epsilon: float = 1e-6  # relative singular-value floor
    window_len: int | None = None  # defaults to min(N, 4*L)
    hop: int | None = None  # defaults to window_len // 4

    def __post_init__(self):
        if self.L < 2:
            raise ContractViolation("embedding dimension must be >= 2")
        if self.K < 1:
            raise ContractViolation("K must be >= 1")
        if self.epsilon <= 0:
            raise ContractViolation("epsilon must be positive")

    def resolved(self, n: int) -> tuple[int, int]:
        window = self.window_len if self.window_len is not None else min(n, 4 * self.L)
        window = min(window, n)
        if self.L > window // 2:
            raise ContractViolation("need L <= window_len / 2")
        hop = self.hop if self.hop is not None else max(window // 4, 1)
        return window, max(hop, 1)


def embed(window: np.ndarray, L: int) -> np.ndarray:
    """Hankel trajectory matrix: column j is window[j .. j+L-1]."""
    window = np.asarray(window, dtype=np.float64)
    if window.size <= L:
        raise ContractViolation("window must be longer than the embedding dimension")
    cols = window.size - L + 1
    idx = np.arange(L)[:, None] + np.arange(cols)[None, :]
    return window[idx]


def diagonal_average_rank1(sigma: float, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Hankelize sigma * outer(u, v) back into a series.

    Anti-diagonal sums of a rank-1 matrix are the full linear convolution
    of its factors, so this is a convolve divided by the per-diagonal
    element counts.
    """
    L = u.size
    cols = v.size
    sums = sigma * np.convolve(u, v)
    counts = np.minimum(np.minimum(np.arange(1, L + cols), L), cols)
    counts = np.minimum(counts, L + cols - np.arange(1, L + cols))
    return sums / counts


def _kmeans_1d(freqs: np.ndarray, energies: np.ndarray, k: int) -> np.ndarray:
    """Deterministic 1-D k-means; centroids seed at the k largest-energy
    triples' frequencies (distinct values, energy-ranked)."""
    order = np.argsort(energies)[::-1]
    centroids: list[float] = []
    for i in order:
        f = float(freqs[i])
        if all(abs(f - c) > 1e-9 for c in centroids):
            centroids.append(f)
        if len(centroids) == k:
            break
    while len(centroids) < k:  # duplicate frequencies: pad deterministically
        centroids.append(centroids[len(centroids) % max(len(centroids), 1)] + 1e-6)
    centers = np.array(sorted(centroids))

    labels = np.full(freqs.size, -1, dtype=np.int64)
    for _round in range(100):
        labels_new = np.argmin(np.abs(freqs[:, None] - centers[None, :]), axis=1)
        if np.array_equal(labels_new, labels):
            break
        labels = labels_new
        for j in range(k):
            members = labels == j
            if np.any(members):
                centers[j] = freqs[members].mean()
    return labels


def _window_classes(
    window: np.ndarray, fs: float, cfg: SsaConfig
) -> tuple[list[np.ndarray], np.ndarray]:
    """Decompose one window into K class series (ascending energy-weighted
    mean frequency) plus the discarded-triples remainder."""
    traj = embed(window, cfg.L)
    u, s, vt = np.linalg.svd(traj, full_matrices=False)
    keep = s > cfg.epsilon * s[0]
    series = []
    freqs = []
    energies = []
    for i in np.flatnonzero(keep):
        comp = diagonal_average_rank1(s[i], u[:, i], vt[i])
        series.append(comp)
        freqs.append(dominant_frequency_hz(comp, fs))
        energies.append(s[i] ** 2)
    freqs = np.asarray(freqs)
    energies = np.asarray(energies)

    k_eff = min(cfg.K, len(series))
    if k_eff < cfg.K:
        warnings.warn(
            f"only {len(series)} eigentriples survive epsilon; returning {k_eff} classes",
            RuntimeWarning,
            stacklevel=2,
        )
    labels = _kmeans_1d(freqs, energies, k_eff) if k_eff > 0 else np.zeros(0, dtype=int)

    classes = []
    class_freq = []
    for j in range(k_eff):
        members = np.flatnonzero(labels == j)
        total = np.zeros_like(window)
        for i in members:
            total += series[i]
        classes.append(total)
        w = energies[members]
        class_freq.append(float(np.sum(freqs[members] * w) / np.sum(w)) if members.size else np.inf)

    order = np.argsort(class_freq)
    classes = [classes[j] for j in order]
    remainder = window - np.sum(classes, axis=0) if classes else window.copy()
    return classes, remainder


def _window_weights(length: int) -> np.ndarray:
    # Hann taper floored away from zero so the normalized overlap-add
    # weights stay well defined at the outermost samples
    w = 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(length) / max(length - 1, 1))
    return np.maximum(w, 1e-6)


def ssa_decompose(x: Signal, cfg: SsaConfig = SsaConfig()) -> Decomposition:
    """Sliding-window SSA into ``cfg.K`` classes.

    Windows of ``window_len`` samples advance by ``hop``; per-window class
    series are blended with a normalized Hann cross-fade (the weights form
    a partition of unity).  Classes are index-aligned across windows by
    their frequency ordering.  The residual carries the eigentriples
    dropped by the epsilon threshold.
    """
    n = len(x)
    window_len, hop = cfg.resolved(n)
    starts = list(range(0, n - window_len + 1, hop))
    if starts[-1] + window_len < n:
        starts.append(n - window_len)

    weights = _window_weights(window_len)
    acc = np.zeros((cfg.K, n))
    acc_res = np.zeros(n)
    norm = np.zeros(n)
    for start in starts:
        segment = x.samples[start : start + window_len]
        classes, remainder = _window_classes(segment, x.sample_rate_hz, cfg)
        sl = slice(start, start + window_len)
        for j, series in enumerate(classes):
            acc[j, sl] += weights * series
        acc_res[sl] += weights * remainder
        norm[sl] += weights

    acc /= norm[None, :]
    acc_res /= norm

    modes = tuple(Signal(acc[j], x.sample_rate_hz) for j in range(cfg.K) if np.any(acc[j]))
    return Decomposition(modes=modes, residual=Signal(acc_res, x.sample_rate_hz))
