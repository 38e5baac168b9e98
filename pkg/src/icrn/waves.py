"""
Wave and period-of-oscillation detection on piecewise-linear trajectories.

A wave of a species rises monotonically from 0 to exactly 1 and falls
monotonically back to 0. A period of an ordered species list is one wave of
each species in turn, with all the other listed species at 0 throughout.

Both detectors work on segment endpoints, which is exact for linear
interpolation between them. Exact (Fraction) data should use ``eps=0``;
sampled floating-point data needs a tolerance band such as ``eps=1e-3``.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Protocol


class HasSeries(Protocol):
    def series(self, species: str) -> Sequence: ...


@dataclass(frozen=True)
class Wave:
    species: str
    start_index: int
    peak_index: int
    end_index: int


def _scan_wave(v: Sequence, start: int, eps) -> tuple[int, int] | None:
    """
    Wave of ``v`` beginning exactly at ``start``: returns ``(peak, end)`` with
    ``end`` the first return to 0, or None. A leading run of zeros is allowed.
    """
    n = len(v)
    if start >= n or abs(v[start]) > eps:
        return None
    k = start
    while abs(v[k] - 1) > eps:
        if k + 1 >= n or v[k + 1] < v[k] - eps or v[k + 1] > 1 + eps:
            return None
        k += 1
    peak = e = k
    while abs(v[e]) > eps:
        if e + 1 >= n or v[e + 1] > v[e] + eps:
            return None
        e += 1
    return peak, e


def find_waves(traj: HasSeries, watched: Iterable[str], eps=0) -> list[Wave]:
    """
    All waves of the watched species, each reported from its last 0 before the
    rise to its first 0 after the fall. Sorted by start index, then species.
    """
    waves = []
    for species in watched:
        v = traj.series(species)
        i = 0
        while i < len(v):
            if abs(v[i]) > eps:
                i += 1
                continue
            s = i
            while s + 1 < len(v) and abs(v[s + 1]) <= eps:
                s += 1
            found = _scan_wave(v, s, eps)
            if found is None:
                i = s + 1
                continue
            peak, end = found
            waves.append(Wave(species, s, peak, end))
            i = end
    waves.sort(key=lambda w: (w.start_index, w.species))
    return waves


def period_boundaries(traj: HasSeries, ordered: Sequence[str], eps=0) -> list[int]:
    """
    Indices ``0 = T_0 < T_1 < ...`` closing consecutive periods of oscillation
    of ``ordered``, starting at index 0.

    Each wave is closed at its earliest possible end; any later choice can only
    delay the next wave, so greedy closing yields the most periods.
    """
    if not ordered:
        return [0]
    series = {s: traj.series(s) for s in ordered}
    n = len(series[ordered[0]])
    bounds = [0]
    pos = 0
    i = 0
    while pos < n:
        species = ordered[i]
        found = _scan_wave(series[species], pos, eps)
        if found is None:
            break
        _, end = found
        quiet = all(
            abs(series[other][t]) <= eps for other in ordered if other != species for t in range(pos, end + 1)
        )
        if not quiet:
            break
        pos = end
        i += 1
        if i == len(ordered):
            bounds.append(pos)
            i = 0
    return bounds


def count_periods(traj: HasSeries, ordered: Sequence[str], eps=0) -> int:
    """Number of consecutive periods of oscillation of ``ordered`` from index 0."""
    return len(period_boundaries(traj, ordered, eps)) - 1
