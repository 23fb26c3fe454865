"""Sensing dictionary for the range-speed grid.

Column i of the dictionary holds the noiseless phase-detector signature of
a unit target at flat grid point i (range-major ordering, i = m*L + l).
The measurement matrix is the identity, so the sensing matrix equals the
dictionary itself.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .signal_model import Grid, RadarParams, SignalModelError


class DictionaryError(ValueError):
    """Invalid dictionary construction or query."""


@dataclass(frozen=True)
class Dictionary:
    """Complex N x (M*L) sensing matrix with its generating grid."""

    entries: np.ndarray
    grid: Grid

    @property
    def n_pulses(self) -> int:
        return self.entries.shape[0]

    @property
    def n_columns(self) -> int:
        return self.entries.shape[1]

    @property
    def column_norm(self) -> float:
        """Common Euclidean norm of every column, sqrt(N)."""
        return float(np.sqrt(self.n_pulses))


def build_dictionary(params: RadarParams, grid: Grid) -> Dictionary:
    """Build the N x (M*L) pure-phase dictionary.

    Entry (k, m*L + l) = exp(i*2*pi*(f0 + k*delta_f)*(2/c)*(R_m + v_l*k*T))
    for k = 0..N-1.
    """
    grid.check_against(params)
    if grid.size == 0:
        raise DictionaryError("grid has no points")
    k = np.arange(params.n_pulses)[:, None]
    fk = params.f0 + k * params.delta_f
    r = np.repeat(grid.ranges, grid.n_speeds)[None, :]
    v = np.tile(grid.speeds, grid.n_ranges)[None, :]
    phase = 2.0 * np.pi * fk * (2.0 / params.c) * (r + v * k * params.pri)
    return Dictionary(entries=np.exp(1j * phase), grid=grid)


def adjacent_column_correlation(n_pulses: int, n_ranges: int) -> complex:
    """Closed-form normalized cross-correlation of adjacent range columns.

    For the default range grid with L=1 the inner product of columns m and
    m+1 reduces to a geometric sum:

        (1/N) * (1 - exp(-i*2*pi*N/M)) / (1 - exp(-i*2*pi/M))

    Exactly zero when N is a multiple of M. The unit-modulus phase factor
    contributed by the carrier is omitted, so only the modulus is
    comparable with a numerically computed inner product.
    """
    if n_pulses < 1:
        raise DictionaryError(f"n_pulses must be >= 1, got {n_pulses}")
    if n_ranges < 2:
        raise DictionaryError(f"n_ranges must be >= 2, got {n_ranges}")
    if n_pulses % n_ranges == 0:
        return 0j
    num = 1.0 - np.exp(-2j * np.pi * n_pulses / n_ranges)
    den = 1.0 - np.exp(-2j * np.pi / n_ranges)
    return complex(num / den / n_pulses)


def coherence(d: Dictionary) -> float:
    """Mutual coherence: max over distinct column pairs of |<c_i, c_j>| / N."""
    if d.n_columns < 2:
        raise DictionaryError("coherence needs at least 2 columns")
    gram = np.abs(d.entries.conj().T @ d.entries) / d.n_pulses
    np.fill_diagonal(gram, 0.0)
    return float(gram.max())


def column_norms(d: Dictionary) -> np.ndarray:
    """Euclidean norm of every column (all sqrt(N) up to roundoff)."""
    return np.linalg.norm(d.entries, axis=0)
