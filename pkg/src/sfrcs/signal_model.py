"""Step-frequency radar signal model.

Models the per-pulse phase-detector output of a step-frequency radar
observing point targets on a discrete range-speed grid. The k-th pulse is
transmitted at f0 + k*delta_f and a target at range R moving at speed v
contributes the unit-modulus sample

    y_k = alpha * exp(i * 2*pi * (f0 + k*delta_f) * (2/c) * (R + v*k*T))

Only the phase-detector scalar per pulse is modeled; pulse envelopes and
intra-pulse motion are not.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

SPEED_OF_LIGHT = 3.0e8


class SignalModelError(ValueError):
    """Invalid radar parameters, grid, or scene."""


@dataclass(frozen=True)
class RadarParams:
    """Waveform constants of a step-frequency radar.

    Attributes
    ----------
    f0 : float
        Carrier start frequency [Hz].
    delta_f : float
        Frequency step between consecutive pulses [Hz].
    n_pulses : int
        Number of pulses N in a burst.
    pri : float
        Pulse repetition interval T [s].
    c : float
        Propagation speed [m/s].
    """

    f0: float
    delta_f: float
    n_pulses: int
    pri: float = 1e-3
    c: float = SPEED_OF_LIGHT

    def __post_init__(self):
        if self.f0 <= 0:
            raise SignalModelError(f"f0 must be positive, got {self.f0}")
        if self.delta_f <= 0:
            raise SignalModelError(f"delta_f must be positive, got {self.delta_f}")
        if self.n_pulses < 1:
            raise SignalModelError(f"n_pulses must be >= 1, got {self.n_pulses}")
        if self.pri <= 0:
            raise SignalModelError(f"pri must be positive, got {self.pri}")
        if self.c <= 0:
            raise SignalModelError(f"c must be positive, got {self.c}")

    def pulse_frequency(self, k: int) -> float:
        """Carrier frequency of pulse k, f0 + k*delta_f, for k in [0, N-1]."""
        if not 0 <= k <= self.n_pulses - 1:
            raise IndexError(f"pulse index {k} outside [0, {self.n_pulses - 1}]")
        return self.f0 + k * self.delta_f

    @property
    def unambiguous_range(self) -> float:
        """Maximum unambiguous range c / (2*delta_f) [m]."""
        return self.c / (2.0 * self.delta_f)

    @property
    def range_resolution(self) -> float:
        """Conventional range resolution c / (2*N*delta_f) [m]."""
        return self.c / (2.0 * self.n_pulses * self.delta_f)


def _as_strictly_increasing(values, name) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size < 1:
        raise SignalModelError(f"{name} must be a non-empty 1-d sequence")
    if arr.size > 1 and not np.all(np.diff(arr) > 0):
        raise SignalModelError(f"{name} must be strictly increasing")
    return arr


def _check_uniform(arr: np.ndarray, name: str) -> None:
    if arr.size < 3:
        return
    step = (arr[-1] - arr[0]) / (arr.size - 1)
    diffs = np.diff(arr)
    if np.max(np.abs(diffs - step)) > 1e-9 * max(abs(step), 1e-300):
        raise SignalModelError(f"{name} must be uniformly spaced")


@dataclass(frozen=True)
class Grid:
    """Discrete range-speed grid with M range points and L speed points.

    Grid points are flattened range-major: flat index i = m * L + l for
    0-based range index m and speed index l.
    """

    ranges: np.ndarray
    speeds: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "ranges", _as_strictly_increasing(self.ranges, "ranges"))
        object.__setattr__(self, "speeds", _as_strictly_increasing(self.speeds, "speeds"))
        _check_uniform(self.ranges, "ranges")
        _check_uniform(self.speeds, "speeds")
        if self.ranges[0] < 0:
            raise SignalModelError("ranges must be non-negative")

    @property
    def n_ranges(self) -> int:
        return self.ranges.size

    @property
    def n_speeds(self) -> int:
        return self.speeds.size

    @property
    def size(self) -> int:
        return self.ranges.size * self.speeds.size

    @property
    def delta_r(self) -> float:
        if self.n_ranges < 2:
            raise SignalModelError("delta_r undefined for a single range point")
        return (self.ranges[-1] - self.ranges[0]) / (self.n_ranges - 1)

    @property
    def delta_v(self) -> float:
        if self.n_speeds < 2:
            raise SignalModelError("delta_v undefined for a single speed point")
        return (self.speeds[-1] - self.speeds[0]) / (self.n_speeds - 1)

    def flat_index(self, range_index: int, speed_index: int) -> int:
        if not 0 <= range_index < self.n_ranges:
            raise IndexError(f"range index {range_index} outside [0, {self.n_ranges - 1}]")
        if not 0 <= speed_index < self.n_speeds:
            raise IndexError(f"speed index {speed_index} outside [0, {self.n_speeds - 1}]")
        return range_index * self.n_speeds + speed_index

    def unflatten(self, i: int) -> tuple[int, int]:
        if not 0 <= i < self.size:
            raise IndexError(f"flat index {i} outside [0, {self.size - 1}]")
        return divmod(i, self.n_speeds)

    def point(self, i: int) -> tuple[float, float]:
        """(range [m], speed [m/s]) of flat grid index i."""
        m, l = self.unflatten(i)
        return float(self.ranges[m]), float(self.speeds[l])

    def check_against(self, params: RadarParams) -> None:
        """Require the range axis to fit inside the unambiguous interval."""
        if self.ranges[-1] >= params.unambiguous_range:
            raise SignalModelError(
                f"max grid range {self.ranges[-1]} exceeds unambiguous "
                f"range {params.unambiguous_range}"
            )


def default_grid(params: RadarParams, n_ranges: int, n_speeds: int = 1) -> Grid:
    """Default grid: ranges m*R_u/M and orthogonal Doppler-bin speeds.

    Ranges are R_m = m * R_u / M for m = 0..M-1, so the stationary
    dictionary becomes a DFT submatrix. Speeds are v_l = l * dv with
    dv = c / (2 * f0 * T * N), which spaces targets one Doppler bin apart.
    """
    if n_ranges < 1 or n_speeds < 1:
        raise SignalModelError("grid dimensions must be >= 1")
    ranges = np.arange(n_ranges) * params.unambiguous_range / n_ranges
    dv = params.c / (2.0 * params.f0 * params.pri * params.n_pulses)
    speeds = np.arange(n_speeds) * dv
    return Grid(ranges=ranges, speeds=speeds)


@dataclass(frozen=True)
class Target:
    """Point target at a grid point, 0-based indices."""

    range_index: int
    speed_index: int
    amplitude: complex = 1.0 + 0j


@dataclass(frozen=True)
class Scene:
    """Sparse target scene: a list of targets on distinct grid points."""

    targets: tuple[Target, ...]

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(self.targets))
        points = [(t.range_index, t.speed_index) for t in self.targets]
        if len(set(points)) != len(points):
            raise SignalModelError("two targets share the same grid point")

    @property
    def sparsity(self) -> int:
        return len(self.targets)

    def support(self, grid: Grid) -> frozenset[int]:
        """Flat grid indices occupied by targets."""
        return frozenset(grid.flat_index(t.range_index, t.speed_index) for t in self.targets)

    def coefficients(self, grid: Grid) -> np.ndarray:
        """Length M*L complex coefficient vector with amplitudes at the support."""
        s = np.zeros(grid.size, dtype=complex)
        for t in self.targets:
            s[grid.flat_index(t.range_index, t.speed_index)] = t.amplitude
        return s


@dataclass(frozen=True)
class Measurement:
    """Phase-detector output vector with the injected noise variance."""

    samples: np.ndarray
    noise_variance: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "samples", np.asarray(self.samples, dtype=complex))
        if self.samples.ndim != 1:
            raise SignalModelError("samples must be a 1-d vector")
        if self.noise_variance < 0:
            raise SignalModelError("noise_variance must be >= 0")

    def __len__(self) -> int:
        return self.samples.size


def phase_terms(params: RadarParams, k: int, r: float, v: float):
    """Four-term decomposition of the phase of sample k.

    Returns (constant f0 shift, range ramp, Doppler ramp, speed spread):

        (4*pi*f0*R/c,
         2*pi * (2*delta_f*R/c) * k,
         2*pi * (2*f0*v*T/c) * k,
         2*pi * (2*k*delta_f*v*T/c) * k)

    Their sum is the full exponent 2*pi*(f0 + k*delta_f)*(2/c)*(R + v*k*T).
    """
    if not 0 <= k <= params.n_pulses - 1:
        raise IndexError(f"pulse index {k} outside [0, {params.n_pulses - 1}]")
    two_pi = 2.0 * np.pi
    t1 = two_pi * 2.0 * params.f0 * r / params.c
    t2 = two_pi * (2.0 * params.delta_f * r / params.c) * k
    t3 = two_pi * (2.0 * params.f0 * v * params.pri / params.c) * k
    t4 = two_pi * (2.0 * k * params.delta_f * v * params.pri / params.c) * k
    return t1, t2, t3, t4


def synthesize(params: RadarParams, grid: Grid, scene: Scene) -> Measurement:
    """Noiseless phase-detector output of a scene, summed target by target.

    Sample k is sum over targets of
    alpha * exp(i*2*pi*(f0 + k*delta_f)*(2/c)*(R_m + v_l*k*T)).
    An empty scene yields the all-zero vector.
    """
    grid.check_against(params)
    k = np.arange(params.n_pulses)
    fk = params.f0 + k * params.delta_f
    y = np.zeros(params.n_pulses, dtype=complex)
    for t in scene.targets:
        r = grid.ranges[t.range_index]
        v = grid.speeds[t.speed_index]
        y += t.amplitude * np.exp(1j * 2.0 * np.pi * fk * (2.0 / params.c) * (r + v * k * params.pri))
    return Measurement(samples=y, noise_variance=0.0)


def add_noise(m: Measurement, snr_db: float | None, seed: int) -> Measurement:
    """Add circular complex Gaussian noise at the given per-sample SNR.

    The SNR is mean signal power per sample over total complex noise
    variance: sigma^2 = P_sig / 10^(snr_db/10) with P_sig = mean |y_k|^2.
    Each real component gets variance sigma^2/2. snr_db=None (or +inf)
    returns the measurement unchanged. Deterministic for a fixed seed.
    """
    if snr_db is None or snr_db == np.inf:
        return m
    if not np.isfinite(snr_db):
        raise SignalModelError(f"snr_db must be finite or +inf, got {snr_db}")
    p_sig = float(np.mean(np.abs(m.samples) ** 2))
    if p_sig == 0.0:
        raise SignalModelError("cannot set a finite SNR on an all-zero measurement")
    sigma2 = p_sig / 10.0 ** (snr_db / 10.0)
    rng = np.random.default_rng(seed)
    noise = np.sqrt(sigma2 / 2.0) * (
        rng.standard_normal(len(m)) + 1j * rng.standard_normal(len(m))
    )
    return Measurement(samples=m.samples + noise, noise_variance=sigma2)
