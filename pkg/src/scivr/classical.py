"""Classical trajectories with action and stability-matrix co-integration.

The equations of motion for one trajectory and its 2x2 stability
(monodromy) matrix M, which maps initial phase-space deviations to final
ones, are integrated together as a 7-component first-order system

    dq/dt   = p / mu                dMqq/dt = Mpq / mu
    dp/dt   = -V'(q)                dMqp/dt = Mpp / mu
    dS/dt   = p^2/(2 mu) - V(q)     dMpq/dt = -V''(q) Mqq
                                    dMpp/dt = -V''(q) Mqp

with M(0) = identity and S(0) = 0, using fixed-step classical
Runge-Kutta 4.  The action is accumulated in the same right-hand side so
its error stays at integrator order.  Everything is vectorized over an
ensemble of trajectories; output-time grids are hit exactly by
subdividing each interval into equal substeps no longer than the
configured dt.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import PotentialRangeError, TrajectoryEscapeError

# row layout of the integration state matrix
_Q, _P, _S, _MQQ, _MQP, _MPQ, _MPP = range(7)


@dataclass(frozen=True)
class IntegratorConfig:
    """Fixed-step RK4 settings.

    dt is the maximum substep; each output interval is split into
    ceil(interval/dt) equal substeps so output times are hit exactly.
    """

    dt: float

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")


@dataclass
class TrajectoryState:
    """Snapshot of one trajectory at time t."""

    t: float
    q: float
    p: float
    action: float
    monodromy: np.ndarray  # [[Mqq, Mqp], [Mpq, Mpp]]


@dataclass
class EnsembleState:
    """Snapshot of an ensemble: q, p, action and monodromy entries (N,).

    `phases` holds one co-integrated unwrapped angle per registered
    phase tracker, keyed by tracker key.
    """

    t: float
    q: np.ndarray
    p: np.ndarray
    action: np.ndarray
    mqq: np.ndarray
    mqp: np.ndarray
    mpq: np.ndarray
    mpp: np.ndarray
    phases: dict = None

    @classmethod
    def from_matrix(cls, t, y, tracker_keys=()):
        phases = {key: y[7 + i].copy() for i, key in enumerate(tracker_keys)}
        return cls(t, y[_Q].copy(), y[_P].copy(), y[_S].copy(),
                   y[_MQQ].copy(), y[_MQP].copy(), y[_MPQ].copy(),
                   y[_MPP].copy(), phases=phases)


def harmonic_monodromy_elements(omega, mass, t):
    """Stability-matrix entries of a harmonic oscillator; broadcasts."""
    omega = np.asarray(omega, dtype=float)
    wt = omega * np.asarray(t, dtype=float)
    c, s = np.cos(wt), np.sin(wt)
    return c, s / (mass * omega), -mass * omega * s, c


def harmonic_monodromy(omega, mass, t):
    """2x2 stability matrix of a harmonic oscillator at time t."""
    if omega <= 0:
        raise ValueError(f"omega must be positive, got {omega}")
    mqq, mqp, mpq, mpp = harmonic_monodromy_elements(omega, mass, t)
    return np.array([[mqq, mqp], [mpq, mpp]])


def _rhs(model, y, trackers):
    q, p = y[_Q], y[_P]
    v, dv, d2v = model.evaluate(q)
    out = np.empty_like(y)
    inv_mass = 1.0 / model.mass
    out[_Q] = p * inv_mass
    out[_P] = -dv
    out[_S] = 0.5 * p * p * inv_mass - v
    out[_MQQ] = y[_MPQ] * inv_mass
    out[_MQP] = y[_MPP] * inv_mass
    out[_MPQ] = -d2v * y[_MQQ]
    out[_MPP] = -d2v * y[_MQP]
    for i, tracker in enumerate(trackers):
        out[7 + i] = tracker.rate(y[_MQQ], y[_MQP], y[_MPQ], y[_MPP],
                                  d2v, inv_mass)
    return out


def _advance(model, y, h, n_steps, trackers):
    """n_steps in-place RK4 steps of size h on state block y."""
    for _ in range(n_steps):
        k1 = _rhs(model, y, trackers)
        k2 = _rhs(model, y + (0.5 * h) * k1, trackers)
        k3 = _rhs(model, y + (0.5 * h) * k2, trackers)
        k4 = _rhs(model, y + h * k3, trackers)
        y += (h / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
    return y


def _validate_times(times):
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size < 1:
        raise ValueError("times must be a 1-d grid")
    if times[0] != 0.0:
        raise ValueError("time grid must start at t = 0")
    if times.size > 1 and not np.all(np.diff(times) > 0):
        raise ValueError("time grid must be strictly increasing")
    return times


def iterate_ensemble(model, q0, p0, times, cfg, workers=1, phase_trackers=()):
    """Propagate an ensemble, yielding an EnsembleState per output time.

    `phase_trackers` are objects with a `key` and a
    `rate(mqq, mqp, mpq, mpp, d2v, inv_mass)` method; each contributes
    one extra co-integrated row holding an unwrapped phase angle
    (initially 0), delivered through EnsembleState.phases.  Trajectory
    chunks advance independently (concurrently when workers > 1);
    results are identical for any worker count because chunk results
    land in fixed index slots and no cross-chunk floating arithmetic
    occurs.
    """
    times = _validate_times(times)
    q0 = np.atleast_1d(np.asarray(q0, dtype=float))
    p0 = np.atleast_1d(np.asarray(p0, dtype=float))
    if q0.shape != p0.shape:
        raise ValueError("q0 and p0 must have matching shapes")
    trackers = tuple(phase_trackers)
    keys = [tracker.key for tracker in trackers]
    if len(set(keys)) != len(keys):
        raise ValueError("phase tracker keys must be unique")
    n = q0.size
    y = np.zeros((7 + len(trackers), n))
    y[_Q], y[_P] = q0, p0
    y[_MQQ] = 1.0
    y[_MPP] = 1.0

    yield EnsembleState.from_matrix(times[0], y, keys)

    n_workers = max(1, int(workers))
    bounds = np.linspace(0, n, min(n_workers, n) + 1).astype(int)
    chunks = [slice(a, b) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
    pool = ThreadPoolExecutor(max_workers=n_workers) if n_workers > 1 else None
    try:
        for k in range(1, times.size):
            interval = times[k] - times[k - 1]
            n_sub = max(1, int(np.ceil(interval / cfg.dt - 1e-12)))
            h = interval / n_sub
            try:
                if pool is None:
                    _advance(model, y, h, n_sub, trackers)
                else:
                    jobs = [pool.submit(_advance, model, y[:, c], h, n_sub,
                                        trackers)
                            for c in chunks]
                    for job in jobs:
                        job.result()
            except PotentialRangeError as exc:
                raise TrajectoryEscapeError(
                    f"trajectory left the guard region between t={times[k-1]} "
                    f"and t={times[k]}: {exc}",
                    time=times[k - 1],
                    last_state=EnsembleState.from_matrix(times[k - 1], y, keys),
                ) from exc
            yield EnsembleState.from_matrix(times[k], y, keys)
    finally:
        if pool is not None:
            pool.shutdown(wait=False)


def propagate(model, q_i, p_i, times, cfg):
    """Propagate a single trajectory; returns a TrajectoryState per time."""
    states = []
    for ens in iterate_ensemble(model, [q_i], [p_i], times, cfg):
        monodromy = np.array([[ens.mqq[0], ens.mqp[0]],
                              [ens.mpq[0], ens.mpp[0]]])
        states.append(TrajectoryState(ens.t, float(ens.q[0]), float(ens.p[0]),
                                      float(ens.action[0]), monodromy))
    return states
