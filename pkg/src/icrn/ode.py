"""
Mass-action kinetics with Hill-style inhibition, integrated by fixed-step RK4.

Rate of a reaction with rate constant ``k``::

    k * prod_S [S]**r(S) * prod_I 1 / (1 + hill_k * [I])

Negative values are clamped to 0 after each step, and rates are evaluated on
clamped concentrations. Everything here is double precision; the exact
executor in :mod:`icrn.execute` is the reference semantics.
"""

from __future__ import annotations

import csv
import io
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

import numba
import numpy as np

from .core import ICRNError, Icrn, Reaction, stoichiometry_matrix


class NonFiniteState(ICRNError):
    def __init__(self, time: float):
        self.time = time
        super().__init__(f"integration produced a non-finite concentration at t={time:g}")


@dataclass(frozen=True)
class OdeSettings:
    rate_constants: Mapping[int, float] = field(default_factory=dict)
    hill_k: float = 1e5
    t_end: float = 2000.0
    dt: float = 1e-3
    sample_every: float = 1.0

    def __post_init__(self):
        if self.hill_k <= 0:
            raise ValueError("hill_k must be positive")
        if not 0 < self.dt < self.sample_every <= self.t_end:
            raise ValueError("need 0 < dt < sample_every <= t_end")
        for j, k in self.rate_constants.items():
            if k <= 0:
                raise ValueError(f"rate constant of reaction {j} must be positive")

    def rate_constant(self, j: int) -> float:
        return float(self.rate_constants.get(j, 1.0))


@dataclass(frozen=True)
class SampledTrajectory:
    """Samples ``values[t, s]`` of species ``species[s]`` at ``times[t]``."""

    times: np.ndarray
    species: tuple[str, ...]
    values: np.ndarray

    def series(self, species: str) -> np.ndarray:
        return self.values[:, self.species.index(species)]

    def __getitem__(self, species: str) -> np.ndarray:
        return self.series(species)

    def __len__(self) -> int:
        return len(self.times)

    def final(self) -> dict[str, float]:
        return dict(zip(self.species, self.values[-1].tolist()))


def reaction_rate(rxn: Reaction, c: Mapping[str, float], s: OdeSettings, k: float = 1.0) -> float:
    """Mass-action rate of ``rxn`` with constant ``k``, damped by each inhibitor."""
    rate = k
    for name, e in rxn.reactants:
        rate *= max(c.get(name, 0.0), 0.0) ** e
    for name in rxn.inhibitors:
        rate /= 1.0 + s.hill_k * max(c.get(name, 0.0), 0.0)
    return rate


def derivatives(net: Icrn, c: Mapping[str, float], s: OdeSettings) -> np.ndarray:
    """``d[S]/dt`` in net species order."""
    rates = np.array(
        [reaction_rate(rxn, c, s, s.rate_constant(j)) for j, rxn in enumerate(net.reactions)], dtype=float
    )
    m = stoichiometry_matrix(net).astype(float)
    return m @ rates if len(rates) else np.zeros(len(net.species))


def _net_arrays(net: Icrn, s: OdeSettings):
    n_s, n_r = len(net.species), len(net.reactions)
    idx = net.species_index
    powers = np.zeros((n_r, n_s), dtype=np.int64)
    inhibit = np.zeros((n_r, n_s), dtype=np.bool_)
    for j, rxn in enumerate(net.reactions):
        for name, e in rxn.reactants:
            powers[j, idx[name]] = e
        for name in rxn.inhibitors:
            inhibit[j, idx[name]] = True
    ks = np.array([s.rate_constant(j) for j in range(n_r)], dtype=np.float64)
    m = stoichiometry_matrix(net).astype(np.float64)
    return powers, inhibit, ks, m


@numba.njit(cache=True)
def _deriv(c, powers, inhibit, ks, m, hill_k, out):
    n_r, n_s = powers.shape
    out[:] = 0.0
    for j in range(n_r):
        rate = ks[j]
        for s in range(n_s):
            x = c[s] if c[s] > 0.0 else 0.0
            e = powers[j, s]
            if e == 1:
                rate *= x
            elif e > 1:
                rate *= x**e
            if inhibit[j, s]:
                rate /= 1.0 + hill_k * x
        if rate != 0.0:
            for s in range(n_s):
                if m[s, j] != 0.0:
                    out[s] += m[s, j] * rate


@numba.njit(cache=True)
def _rk4(c0, powers, inhibit, ks, m, hill_k, dt, n_steps, stride, samples):
    """Fills ``samples``; returns the failing step index, or -1 on success."""
    n_s = c0.shape[0]
    c = c0.copy()
    k1 = np.empty(n_s)
    k2 = np.empty(n_s)
    k3 = np.empty(n_s)
    k4 = np.empty(n_s)
    tmp = np.empty(n_s)
    samples[0, :] = c
    row = 1
    for step in range(1, n_steps + 1):
        _deriv(c, powers, inhibit, ks, m, hill_k, k1)
        for s in range(n_s):
            tmp[s] = c[s] + 0.5 * dt * k1[s]
        _deriv(tmp, powers, inhibit, ks, m, hill_k, k2)
        for s in range(n_s):
            tmp[s] = c[s] + 0.5 * dt * k2[s]
        _deriv(tmp, powers, inhibit, ks, m, hill_k, k3)
        for s in range(n_s):
            tmp[s] = c[s] + dt * k3[s]
        _deriv(tmp, powers, inhibit, ks, m, hill_k, k4)
        for s in range(n_s):
            x = c[s] + dt / 6.0 * (k1[s] + 2.0 * k2[s] + 2.0 * k3[s] + k4[s])
            if not np.isfinite(x):
                return step
            c[s] = x if x > 0.0 else 0.0
        if step % stride == 0 or step == n_steps:
            samples[row, :] = c
            row += 1
    return -1


def integrate(net: Icrn, c0: Mapping[str, float], s: OdeSettings) -> SampledTrajectory:
    """
    Integrate from ``c0`` to ``s.t_end`` with step ``s.dt``, sampling every
    ``s.sample_every`` (rounded to a whole number of steps). The final state is
    always sampled.

    Raises:
        NonFiniteState: on overflow or NaN, with the time it happened.
    """
    unknown = set(c0) - set(net.species)
    if unknown:
        raise ValueError(f"initial concentrations for unknown species {sorted(unknown)}")
    x0 = np.array([float(c0.get(name, 0.0)) for name in net.species], dtype=np.float64)
    if (x0 < 0).any() or not np.isfinite(x0).all():
        raise ValueError("initial concentrations must be finite and nonnegative")
    n_steps = int(round(s.t_end / s.dt))
    stride = max(1, int(round(s.sample_every / s.dt)))
    sample_steps = list(range(0, n_steps + 1, stride))
    if sample_steps[-1] != n_steps:
        sample_steps.append(n_steps)
    samples = np.empty((len(sample_steps), len(net.species)), dtype=np.float64)
    powers, inhibit, ks, m = _net_arrays(net, s)
    failed = _rk4(x0, powers, inhibit, ks, m, float(s.hill_k), float(s.dt), n_steps, stride, samples)
    if failed >= 0:
        raise NonFiniteState(failed * s.dt)
    times = np.array(sample_steps, dtype=np.float64) * s.dt
    return SampledTrajectory(times, net.species, samples)


def format_sampled_csv(traj: SampledTrajectory) -> str:
    """``t,<species...>`` with 9 significant digits."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", *traj.species])
    for t, row in zip(traj.times, traj.values):
        w.writerow([f"{t:.9g}", *(f"{x:.9g}" for x in row)])
    return buf.getvalue()


def read_sampled_csv(text: str) -> SampledTrajectory:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0][0] != "t":
        raise ValueError("not a sampled trajectory: header must start with t")
    data = np.array([[float(x) for x in row] for row in rows[1:] if row], dtype=np.float64)
    if data.size == 0:
        data = np.zeros((0, len(rows[0])))
    return SampledTrajectory(data[:, 0], tuple(rows[0][1:]), data[:, 1:])


def oscillator_sum(traj: SampledTrajectory, species: Sequence[str]) -> np.ndarray:
    return sum((traj.series(s) for s in species), np.zeros(len(traj)))
