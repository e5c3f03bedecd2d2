"""Windowed spectral diagnostics over long snapshot records.

Cuts a record into fixed-length windows, decomposes each one, and
derives regime-shift indicators: dominant-mode amplitude tracking,
order-of-magnitude amplitude jumps across window boundaries, fast/slow
eigenvalue group separation, and spatial structure of dominant and
zero-frequency modes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .dmd import DmdResult, build_snapshot_pairs, dmd
from .errors import ConfigError, DegenerateDataError, InsufficientDataError, NotFoundError
from .snapshots import SnapshotMatrix


@dataclass
class WindowAnalysis:
    """Spectral summary of one window. A degenerate window (no usable
    signal) keeps its place in the batch with result=None and an
    explanatory note."""

    window_index: int
    start_step: int
    end_step: int
    result: DmdResult | None
    dominant_amplitudes: np.ndarray
    max_amplitude: float
    slow_group: list[int]
    fast_group: list[int]
    note: str = ""

    @property
    def degenerate(self) -> bool:
        return self.result is None


@dataclass
class TransitionReport:
    """Batch diagnostics plus the first window boundary whose
    max-amplitude jump exceeded the configured ratio, if any."""

    per_window: list[WindowAnalysis]
    transition_window: int | None
    jump_ratio: float
    criterion: dict = field(default_factory=dict)


class ModeEntry(NamedTuple):
    eigenvalue: complex
    mode: np.ndarray
    amplitude: complex


@dataclass
class SpatialPattern:
    """Per-node magnitudes of one mode, plus contiguous runs of nodes
    whose magnitudes lie within a 10% relative band of each other."""

    entries: list[tuple[str, float]]
    groups: list[list[int]]


def windowed_dmd(snapshots: SnapshotMatrix, window_len: int = 200,
                 stride: int | None = None, rank: int | None = None) -> list[WindowAnalysis]:
    """Decompose the record window by window.

    Windows start at multiples of `stride` (default: stride =
    window_len, i.e. non-overlapping) and cover [start, start +
    window_len). Each window is analyzed independently; a degenerate
    window is flagged and skipped rather than aborting the batch.
    """
    if window_len < 2:
        raise ConfigError(f"window_len must be >= 2, got {window_len}")
    if stride is None:
        stride = window_len
    if stride < 1:
        raise ConfigError(f"stride must be >= 1, got {stride}")
    t = snapshots.n_snapshots
    if t < window_len:
        raise ConfigError(f"record length {t} is shorter than window_len {window_len}")

    analyses = []
    idx = 0
    start = 0
    while start + window_len <= t:
        window = SnapshotMatrix(
            data=snapshots.data[start:start + window_len],
            dt=snapshots.dt,
            labels=snapshots.labels,
        )
        try:
            x, xp = build_snapshot_pairs(window)
            result = dmd(x, xp, rank=rank, dt=snapshots.dt)
        except DegenerateDataError as exc:
            analyses.append(WindowAnalysis(
                window_index=idx, start_step=start, end_step=start + window_len,
                result=None, dominant_amplitudes=np.array([]),
                max_amplitude=float("nan"), slow_group=[], fast_group=[],
                note=f"degenerate window: {exc}",
            ))
        else:
            amps = result.amplitude_magnitudes()
            slow, fast = split_timescales(result)
            analyses.append(WindowAnalysis(
                window_index=idx, start_step=start, end_step=start + window_len,
                result=result, dominant_amplitudes=np.sort(amps)[::-1],
                max_amplitude=float(np.max(amps)), slow_group=slow, fast_group=fast,
            ))
        idx += 1
        start += stride
    return analyses


def dominant_modes(result: DmdResult, k: int) -> list[ModeEntry]:
    """Top-k modes by amplitude magnitude |b| * ||v||, descending. Ties
    break toward lower oscillation frequency, then lower index. k larger
    than the retained rank is clamped."""
    if k < 1:
        raise ConfigError(f"k must be >= 1, got {k}")
    k = min(k, result.rank)
    amps = result.amplitude_magnitudes()
    freqs = np.abs(np.imag(result.eigenvalues_continuous))
    freqs = np.where(np.isnan(freqs), np.inf, freqs)
    order = sorted(range(result.rank), key=lambda i: (-amps[i], freqs[i], i))
    return [
        ModeEntry(
            eigenvalue=complex(result.eigenvalues_discrete[i]),
            mode=result.modes[:, i],
            amplitude=complex(result.amplitudes[i]),
        )
        for i in order[:k]
    ]


def detect_transition(windows: list[WindowAnalysis],
                      jump_threshold: float = 1e2) -> TransitionReport:
    """Scan consecutive non-degenerate windows for the first boundary
    where the max mode amplitude jumps by at least `jump_threshold`.

    The default threshold of 100x is an order-of-magnitude detector:
    regime transitions in these models show up as multi-decade amplitude
    jumps, while within-regime fluctuation stays well below it.
    """
    if len(windows) < 2:
        raise InsufficientDataError(f"need >= 2 windows, got {len(windows)}")
    criterion = {"jump_threshold": jump_threshold}
    prev = None
    for w in windows:
        if w.degenerate:
            continue
        if prev is not None and prev.max_amplitude > 0:
            ratio = w.max_amplitude / prev.max_amplitude
            if ratio >= jump_threshold:
                return TransitionReport(
                    per_window=windows,
                    transition_window=w.window_index,
                    jump_ratio=float(ratio),
                    criterion=criterion,
                )
        prev = w
    return TransitionReport(per_window=windows, transition_window=None,
                            jump_ratio=0.0, criterion=criterion)


def split_timescales(result: DmdResult,
                     decay_split: float | None = None) -> tuple[list[int], list[int]]:
    """Partition retained (non-zero-flagged) eigenvalues into slow and
    fast groups by decay rate |Re mu|.

    With an explicit `decay_split`, slow means |Re mu| < decay_split.
    Otherwise the boundary is placed in the largest gap of the sorted
    rates (a two-cluster split); if all rates coincide everything is
    slow.
    """
    if result.rank < 1:
        raise ConfigError("result has no retained eigenvalues")
    idx = [k for k in range(result.rank) if not result.zero_flags[k]]
    if not idx:
        return [], []
    rates = np.abs(np.real(result.eigenvalues_continuous[idx]))
    if decay_split is None:
        if len(idx) == 1:
            return list(idx), []
        order = np.argsort(rates)
        sorted_rates = rates[order]
        gaps = np.diff(sorted_rates)
        g = int(np.argmax(gaps))
        if gaps[g] <= 1e-12 * max(1.0, sorted_rates[-1]):
            return list(idx), []
        decay_split = 0.5 * (sorted_rates[g] + sorted_rates[g + 1])
    slow = [idx[k] for k in range(len(idx)) if rates[k] < decay_split]
    fast = [idx[k] for k in range(len(idx)) if rates[k] >= decay_split]
    return slow, fast


class ZeroFrequencyMode(NamedTuple):
    eigenvalue: complex
    mu: complex
    mode: np.ndarray
    amplitude: complex
    index: int


def zero_frequency_mode(result: DmdResult, freq_tol: float | None = None,
                        background_tol: float = 0.01) -> ZeroFrequencyMode:
    """The governing zero-frequency mode: largest amplitude among modes
    whose continuous eigenvalue has (near-)zero imaginary part. Default
    frequency tolerance is 1e-6 of the Nyquist frequency pi/dt.

    A discrete eigenvalue within `background_tol` of 1 is the static
    background (the mean state, effectively unchanged over a window);
    it is only returned when no genuinely relaxing zero-frequency mode
    exists, since the spatial structure of interest (where activity
    happened) lives in the decaying directions.
    """
    if freq_tol is None:
        freq_tol = 1e-6 * np.pi / result.dt
    amps = result.amplitude_magnitudes()
    candidates = [
        k for k in range(result.rank)
        if not result.zero_flags[k]
        and abs(np.imag(result.eigenvalues_continuous[k])) < freq_tol
    ]
    if not candidates:
        raise NotFoundError("no eigenvalue within the zero-frequency tolerance")
    relaxing = [k for k in candidates
                if abs(result.eigenvalues_discrete[k] - 1.0) > background_tol]
    best = max(relaxing if relaxing else candidates, key=lambda k: amps[k])
    return ZeroFrequencyMode(
        eigenvalue=complex(result.eigenvalues_discrete[best]),
        mu=complex(result.eigenvalues_continuous[best]),
        mode=result.modes[:, best],
        amplitude=complex(result.amplitudes[best]),
        index=best,
    )


def spatial_pattern(mode: np.ndarray, labels: list[str] | None = None,
                    band: float = 0.1) -> SpatialPattern:
    """Per-node component magnitudes of a mode, in node order, plus
    contiguous node groups whose magnitudes stay within a relative band
    (default 10%) of the group maximum. Groups of similar magnitude mark
    regions that participate coherently in the mode."""
    mode = np.asarray(mode)
    if mode.ndim != 1 or mode.shape[0] < 1:
        raise ConfigError("mode must be a non-empty 1-D vector")
    mags = np.abs(mode)
    if labels is None:
        labels = [f"n{i}" for i in range(mags.shape[0])]
    elif len(labels) != mags.shape[0]:
        raise ConfigError(f"{len(labels)} labels for {mags.shape[0]} components")

    groups: list[list[int]] = []
    cur = [0]
    lo = hi = mags[0]
    for i in range(1, mags.shape[0]):
        new_lo, new_hi = min(lo, mags[i]), max(hi, mags[i])
        if new_hi - new_lo <= band * new_hi:
            cur.append(i)
            lo, hi = new_lo, new_hi
        else:
            groups.append(cur)
            cur = [i]
            lo = hi = mags[i]
    groups.append(cur)
    return SpatialPattern(
        entries=[(labels[i], float(mags[i])) for i in range(mags.shape[0])],
        groups=groups,
    )
