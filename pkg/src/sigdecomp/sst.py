"""Wavelet synchrosqueezing: CWT, phase-transform reassignment, greedy
penalized ridge extraction, and per-ridge mode reconstruction.

The continuous wavelet transform uses an analytic Morlet wavelet over
log-spaced scales.  Squeezing reassigns each retained coefficient to the
frequency bin indicated by the local phase derivative, which sharpens
ridges enough for a greedy tracker to follow each component; summing the
squeezed coefficients in a band around a ridge and scaling by the
wavelet's admissibility constant recovers that component in time.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._kernels import walk_ridge
from .core import ContractViolation, Decomposition, Signal


@dataclass(frozen=True)
class SstConfig:
    n_voices: int = 32  # scales per octave
    morlet_w0: float = 6.0  # wavelet center frequency, rad
    gamma: float = 1e-6  # magnitude threshold, relative to max |W|
    K: int = 1  # ridges to extract

    def __post_init__(self):
        if self.n_voices < 4:
            raise ContractViolation("need at least 4 voices per octave")
        if self.gamma < 0:
            raise ContractViolation("gamma must be nonnegative")
        if self.K < 1:
            raise ContractViolation("K must be >= 1")


@dataclass(frozen=True)
class RidgeConfig:
    start_band: int = 15  # bins zeroed around an extracted ridge
    max_step: int = 15  # max bin change per frame while tracking

    def __post_init__(self):
        if self.start_band < 1 or self.max_step < 1:
            raise ContractViolation("start_band and max_step must be >= 1")


@dataclass(frozen=True)
class RidgeTrack:
    """Per-frame frequency-bin index plus a validity flag."""

    bins: np.ndarray
    valid: np.ndarray

    def __post_init__(self):
        if self.bins.shape != self.valid.shape:
            raise ContractViolation("bins and valid must have equal length")


#: consecutive below-threshold frames tolerated before a ridge walk stops;
#: lets tracks ride out brief interference without wandering across long
#: silent stretches into a neighboring component's band
RIDGE_PATIENCE_FRAMES = 32

#: a ridge frame counts as dead when its best energy drops this far below
#: the ridge's seed energy (40 dB fade), on top of the gamma floor
RIDGE_FADE_REL = 1e-4


@lru_cache(maxsize=8)
def _admissibility(w0: float) -> float:
    # (1/2) * integral of psi_hat(xi)/xi over xi > 0, by dense trapezoid
    xi = np.linspace(max(w0 - 10.0, 1e-6), w0 + 10.0, 20001)
    psi = np.pi**-0.25 * np.exp(-0.5 * (xi - w0) ** 2)
    return 0.5 * float(np.trapezoid(psi / xi, xi))


def _scale_frequencies_hz(x: Signal, cfg: SstConfig) -> np.ndarray:
    """Log-spaced analysis frequencies from 2/duration up to Nyquist."""
    fmin = 2.0 / x.duration_s
    fmax = x.sample_rate_hz / 2.0
    if fmin >= fmax:
        raise ContractViolation("signal too short for the scale grid")
    n_octaves = np.log2(fmax / fmin)
    count = int(np.ceil(n_octaves * cfg.n_voices)) + 1
    return fmin * 2.0 ** (np.arange(count) / cfg.n_voices)


def cwt_morlet(x: Signal, cfg: SstConfig = SstConfig()) -> tuple[np.ndarray, np.ndarray]:
    """Analytic Morlet CWT; returns (coefficients, frequencies_hz).

    Coefficient rows are ordered by ascending frequency (descending
    scale); each row is the inverse FFT of the spectrum multiplied by the
    scaled wavelet window, i.e. an L1-normalized transform where a unit
    tone keeps scale-independent magnitude.
    """
    if len(x) < 64:
        raise ContractViolation("CWT needs at least 64 samples")
    freqs_hz = _scale_frequencies_hz(x, cfg)
    n = len(x)
    xi = 2.0 * np.pi * np.fft.fftfreq(n, 1.0 / x.sample_rate_hz)  # rad/s
    spectrum = np.fft.fft(x.samples)
    scales = cfg.morlet_w0 / (2.0 * np.pi * freqs_hz)  # seconds
    # psi_hat(s*xi) for xi > 0 only (analytic wavelet)
    arg = scales[:, None] * xi[None, :]
    window = np.where(arg > 0.0, np.pi**-0.25 * np.exp(-0.5 * (arg - cfg.morlet_w0) ** 2), 0.0)
    coeffs = np.fft.ifft(spectrum[None, :] * np.conj(window), axis=1)
    return coeffs, freqs_hz


@dataclass(frozen=True)
class SqueezedGrid:
    """Synchrosqueezed transform with the complex values retained.

    ``values`` is (frequency x time); ``energy()`` gives the
    nonnegative density used for ridge extraction.  ``gamma_abs`` is the
    resolved absolute magnitude threshold, and ``log_step``/``admissibility``
    carry the constants needed to invert the transform.
    """

    times_s: np.ndarray
    freqs_hz: np.ndarray
    values: np.ndarray
    gamma_abs: float
    log_step: float
    admissibility: float
    dropped_mass: float

    def energy(self) -> np.ndarray:
        return np.abs(self.values) ** 2


def synchrosqueeze(
    W: np.ndarray, freqs_hz: np.ndarray, x: Signal, cfg: SstConfig = SstConfig()
) -> SqueezedGrid:
    """Reassign CWT cells to the frequency bin of their phase derivative.

    Cells with magnitude at or below ``cfg.gamma`` (relative to the max)
    contribute nothing.  Output bins reuse the log-spaced scale grid, so
    no resampling is involved; reassigned mass that falls outside the
    grid is accounted in ``dropped_mass``.
    """
    if W.shape != (freqs_hz.size, len(x)):
        raise ContractViolation("coefficient matrix must be (n_scales, n_samples)")
    n_bins, n_t = W.shape
    gamma_abs = cfg.gamma * float(np.abs(W).max(initial=0.0))

    # per-cell instantaneous frequency: one-sample finite difference of the
    # coefficient phase (the discrete form of Im(dW/dt / W) / 2pi), which
    # stays unbiased on tones and alias-free below Nyquist
    omega = np.empty(W.shape)
    step = np.angle(W[:, 1:] * np.conj(W[:, :-1])) * (x.sample_rate_hz / (2.0 * np.pi))
    omega[:, :-1] = step
    omega[:, -1] = step[:, -1]

    keep = np.abs(W) > gamma_abs

    log_step = np.log(2.0) / cfg.n_voices
    values = np.zeros_like(W)
    positive = keep & (omega > 0.0)
    bins = np.full(W.shape, -1, dtype=np.int64)
    bins[positive] = np.rint(np.log(omega[positive] / freqs_hz[0]) / log_step).astype(np.int64)
    in_range = positive & (bins >= 0) & (bins < n_bins)

    rows, cols = np.nonzero(in_range)
    np.add.at(values, (bins[rows, cols], cols), W[rows, cols])
    dropped = float(np.abs(W[keep & ~in_range]).sum())

    return SqueezedGrid(
        times_s=x.times(),
        freqs_hz=freqs_hz.copy(),
        values=values,
        gamma_abs=gamma_abs,
        log_step=log_step,
        admissibility=_admissibility(cfg.morlet_w0),
        dropped_mass=dropped,
    )


def extract_ridges(S: SqueezedGrid, rcfg: RidgeConfig, K: int) -> list[RidgeTrack]:
    """Greedy energy-ridge tracking, strongest ridge first.

    Each ridge seeds at the global maximum of the remaining energy and
    extends both ways, moving at most ``max_step`` bins per frame; frames
    whose best in-window energy falls below the squeeze threshold, or 40 dB
    below the ridge's seed energy, are flagged invalid.  A band of
    ``start_band`` bins around an extracted ridge is zeroed before the
    next one is sought.  Returns fewer than ``K`` tracks (with a warning)
    when the energy is exhausted.
    """
    if K < 1:
        raise ContractViolation("K must be >= 1")
    energy = S.energy().copy()
    gamma_floor = S.gamma_abs**2
    n_bins, n_t = energy.shape
    tracks: list[RidgeTrack] = []
    for _ in range(K):
        seed_flat = int(np.argmax(energy))
        seed_f, seed_t = divmod(seed_flat, n_t)
        if energy[seed_f, seed_t] <= gamma_floor:
            warnings.warn(
                f"ridge extraction exhausted after {len(tracks)} of {K} ridges",
                RuntimeWarning,
                stacklevel=2,
            )
            break
        floor = max(gamma_floor, RIDGE_FADE_REL * energy[seed_f, seed_t])
        bins, valid = walk_ridge(
            energy, seed_f, seed_t, rcfg.max_step, floor, RIDGE_PATIENCE_FRAMES
        )
        tracks.append(RidgeTrack(bins=bins, valid=valid))
        # suppress the claimed band, but only where the ridge was live
        for t in range(n_t):
            if not valid[t]:
                continue
            lo = max(int(bins[t]) - rcfg.start_band, 0)
            hi = min(int(bins[t]) + rcfg.start_band + 1, n_bins)
            energy[lo:hi, t] = 0.0
    return tracks


def reconstruct_mode(S: SqueezedGrid, track: RidgeTrack, half_width: int) -> Signal:
    """Invert the squeezed transform over a band around one ridge.

    Sums complex squeezed values within ``half_width`` bins of the track
    per valid frame and rescales by the wavelet admissibility constant;
    invalid frames contribute zero.
    """
    n_bins, n_t = S.values.shape
    band_sum = np.zeros(n_t, dtype=complex)
    for t in range(n_t):
        if not track.valid[t]:
            continue
        lo = max(int(track.bins[t]) - half_width, 0)
        hi = min(int(track.bins[t]) + half_width + 1, n_bins)
        band_sum[t] = S.values[lo:hi, t].sum()
    samples = (S.log_step / S.admissibility) * band_sum.real
    fs = 1.0 / (S.times_s[1] - S.times_s[0])
    return Signal(samples, fs) if np.any(samples) else Signal(np.zeros(n_t), fs)


def sst_decompose(
    x: Signal, cfg: SstConfig, rcfg: RidgeConfig = RidgeConfig()
) -> Decomposition:
    """Full pipeline: CWT, squeeze, extract ``cfg.K`` ridges, reconstruct.

    Modes are ordered by ascending mean ridge frequency; the residual is
    the input minus the mode sum.  IF tracks report the ridge-bin
    frequency per frame.
    """
    W, freqs = cwt_morlet(x, cfg)
    S = synchrosqueeze(W, freqs, x, cfg)
    tracks = extract_ridges(S, rcfg, cfg.K)
    modes = [reconstruct_mode(S, tr, rcfg.start_band) for tr in tracks]
    if_tracks = [freqs[tr.bins] for tr in tracks]

    order = np.argsort([float(np.mean(track)) for track in if_tracks]) if modes else []
    modes = [modes[i] for i in order]
    if_tracks = [if_tracks[i] for i in order]
    residual = x.samples - (np.sum([m.samples for m in modes], axis=0) if modes else 0.0)
    return Decomposition(
        modes=tuple(modes),
        residual=Signal(residual, x.sample_rate_hz),
        if_tracks_hz=tuple(if_tracks),
    )
