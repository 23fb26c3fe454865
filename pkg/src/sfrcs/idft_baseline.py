"""Conventional IDFT detector for step-frequency radar.

The baseline transforms the phase-detector sequence into a range profile
and picks the K strongest bins. For moving targets the whole sequence is
first compensated with each candidate speed; the single speed producing
the highest and sharpest profile wins and is assigned to every detection.
That single-speed attribution is the structural weakness of the baseline
for multi-speed scenes, and is kept deliberately.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .signal_model import Grid, Measurement, RadarParams


@dataclass(frozen=True)
class RangeProfile:
    """Unitary-IDFT bin magnitudes with the bin -> range mapping."""

    magnitudes: np.ndarray
    unambiguous_range: float

    def bin_to_range(self, n: int) -> float:
        """Range of bin n: n * R_u / N."""
        return n * self.unambiguous_range / self.magnitudes.size


@dataclass(frozen=True)
class IdftDetection:
    """Peak bins, their ranges, and (for moving scenes) the winning speed index."""

    bins: tuple[int, ...]
    ranges: tuple[float, ...]
    profile: RangeProfile
    speed_index: int = 0


def range_profile(y: Measurement, params: RadarParams) -> RangeProfile:
    """Unitary transform of the sample sequence into range-bin magnitudes.

    A target at range R contributes phase exp(+i*2*pi*(2*delta_f*R/c)*k),
    so bin n of (1/sqrt(N)) * sum_k y_k exp(-i*2*pi*k*n/N) corresponds to
    range n * R_u / N.
    """
    mags = np.abs(np.fft.fft(y.samples)) / np.sqrt(len(y))
    return RangeProfile(magnitudes=mags, unambiguous_range=params.unambiguous_range)


def _peak_bins(profile: RangeProfile, k: int) -> tuple[int, ...]:
    if k > profile.magnitudes.size:
        raise ValueError(f"target count {k} exceeds bin count {profile.magnitudes.size}")
    order = np.argsort(-profile.magnitudes, kind="stable")  # ties to the lowest bin
    return tuple(int(n) for n in order[:k])


def idft_detect_stationary(y: Measurement, params: RadarParams, k: int) -> IdftDetection:
    """K strongest range bins of the uncompensated profile."""
    profile = range_profile(y, params)
    bins = _peak_bins(profile, k)
    if not profile.magnitudes.any():
        bins = ()
    return IdftDetection(
        bins=bins,
        ranges=tuple(profile.bin_to_range(n) for n in bins),
        profile=profile,
    )


def compensate_speed(y: Measurement, params: RadarParams, v: float) -> Measurement:
    """Remove the Doppler phase of candidate speed v from every sample."""
    k = np.arange(len(y))
    fk = params.f0 + k * params.delta_f
    phase = 2.0 * np.pi * fk * (2.0 / params.c) * v * k * params.pri
    return Measurement(samples=y.samples * np.exp(-1j * phase),
                       noise_variance=y.noise_variance)


def _sharpness(profile: RangeProfile) -> float:
    """Peak magnitude over the median of the remaining bins."""
    mags = profile.magnitudes
    peak = int(np.argmax(mags))
    rest = np.delete(mags, peak)
    if rest.size == 0:
        return float(mags[peak])
    med = float(np.median(rest))
    if med == 0.0:
        return np.inf if mags[peak] > 0 else 0.0
    return float(mags[peak]) / med


def idft_detect_moving(y: Measurement, params: RadarParams, grid: Grid,
                       k: int) -> IdftDetection:
    """Speed-compensation sweep followed by stationary peak extraction.

    Each grid speed is tried in turn; the profile with the highest
    sharpness score wins (ties to the lowest speed index) and all K
    detections are assigned that speed.
    """
    best_score = -np.inf
    best_l = 0
    best_profile = None
    for l, v in enumerate(grid.speeds):
        profile = range_profile(compensate_speed(y, params, float(v)), params)
        score = _sharpness(profile)
        if score > best_score:
            best_score, best_l, best_profile = score, l, profile
    bins = _peak_bins(best_profile, k)
    if not best_profile.magnitudes.any():
        bins = ()
    return IdftDetection(
        bins=bins,
        ranges=tuple(best_profile.bin_to_range(n) for n in bins),
        profile=best_profile,
        speed_index=best_l,
    )


def bins_to_grid_support(detection: IdftDetection, grid: Grid) -> frozenset[int]:
    """Map detected bins to flat grid indices via nearest grid range.

    Needed because N != M leaves bins and grid points misaligned; distinct
    bins may collapse onto one grid point. Ties go to the lower range
    index. All detections carry the detection's single speed index.
    """
    support = set()
    for n in detection.bins:
        r = detection.profile.bin_to_range(n)
        m = int(np.argmin(np.abs(grid.ranges - r)))  # argmin ties -> lower index
        support.add(grid.flat_index(m, detection.speed_index))
    return frozenset(support)
