"""Semiclassical initial-value-representation propagators.

The autocorrelation function of a Gaussian wavepacket g0 centered at
(q0, p0) with real width g and the evolved state is evaluated as a
phase-space integral over classical initial conditions,

    c(t) = integral dq dp / (2 pi hbar)
           <g0 | g_{w(t)}(p_t, q_t)> * R(t) * exp(i S / hbar)
           * <g_g(p, q) | g0>,

estimated by importance-sampled Monte Carlo.  Four variants differ only
in how the final width w(t) and the prefactor R(t) are assembled from
each trajectory's stability matrix M:

* frozen (Herman-Kluk): w = g fixed,
      R = sqrt((Mqq + Mpp - i hbar g Mqp - Mpq / (i hbar g)) / 2)
* thawed: w evolves with the true stability matrix,
      w = -(i/hbar) (Mpq + i hbar g Mpp) / (Mqq + i hbar g Mqp),
      R = (g / Re w)^{1/4} * (Mqq + i hbar g Mqp)^{-1/2}
* thawed with an n-th root width: the thawed w is replaced by its
  principal n-th root and R recomputed from the general prefactor
      R = sqrt((w1 Mqq + w2 Mpp - i hbar w1 w2 Mqp - Mpq/(i hbar))
               / (2 sqrt(Re w1 Re w2)))
* global harmonic: the width and prefactor of each trajectory use the
  stability matrix of a fictitious harmonic oscillator at the
  action-angle frequency omega(E) of its energy shell, while positions,
  momenta and actions follow the true anharmonic dynamics.

All square roots that evolve in time are branch-continued.  The
stand-alone prefactor functions continue by nearest-root selection
against the previous output value (and refuse with BranchAmbiguityError
when a step is too coarse to decide); the Monte Carlo engine instead
co-integrates each radicand's unwrapped argument with the trajectories,
which realizes the same continuity exactly at any output spacing.
"""

from dataclasses import dataclass, field
import re

import numpy as np

from .classical import IntegratorConfig, iterate_ensemble
from .errors import BranchAmbiguityError, NumericalError
from .gaussians import (
    COVERAGE_SIGMAS,
    GaussianState,
    check_grid_coverage,
    overlap_arrays,
    superpose_arrays,
)

VARIANTS = ("hk", "tga", "root_tga", "global_harmonic_tga")

_TOKEN_ALIASES = {
    "hk": "hk",
    "fga": "hk",
    "tga": "tga",
    "globalharmonictga": "global_harmonic_tga",
    "global_harmonic_tga": "global_harmonic_tga",
    "ghtga": "global_harmonic_tga",
}


@dataclass(frozen=True)
class MethodSpec:
    """One IVR variant with its Gaussian width and hbar."""

    variant: str
    width: float
    hbar: float
    root_order: int | None = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if not self.width > 0:
            raise ValueError(f"width must be positive, got {self.width}")
        if not self.hbar > 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        if self.variant == "root_tga":
            if self.root_order is None or self.root_order < 2 or self.root_order % 2:
                raise ValueError("root_tga needs an even root_order >= 2")
        elif self.root_order is not None:
            raise ValueError(f"{self.variant} takes no root_order")

    @property
    def key(self):
        if self.variant == "root_tga":
            return f"root_tga_{self.root_order}"
        return self.variant

    @classmethod
    def from_token(cls, token, width, hbar):
        """Parse method names like HK, TGA, RootTGA(4), GlobalHarmonicTGA."""
        text = token.strip().lower().replace("-", "_")
        match = re.fullmatch(r"(roottga|root_tga)[(_]?(\d+)\)?", text)
        if match:
            return cls("root_tga", width, hbar, root_order=int(match.group(2)))
        if text in _TOKEN_ALIASES:
            return cls(_TOKEN_ALIASES[text], width, hbar)
        raise ValueError(f"unknown method token {token!r}")


def pack_monodromy(mqq, mqp, mpq, mpp):
    """Stack four stability entries into an (..., 2, 2) array."""
    mqq = np.asarray(mqq, dtype=float)
    m = np.empty(mqq.shape + (2, 2))
    m[..., 0, 0] = mqq
    m[..., 0, 1] = mqp
    m[..., 1, 0] = mpq
    m[..., 1, 1] = mpp
    return m


# --- width evolution ---------------------------------------------------------

def thawed_width(m, width, hbar):
    """Evolved complex width from the true stability matrix.

    w(t) = -(i/hbar) (Mpq + i hbar g Mpp) / (Mqq + i hbar g Mqp); for a
    real positive g and symplectic M, Re w = g det(M)/|denominator|^2
    stays positive.
    """
    m = np.asarray(m, dtype=float)
    den = m[..., 0, 0] + 1j * hbar * width * m[..., 0, 1]
    if np.any(np.abs(den) < 1e-30):
        raise NumericalError("thawed width denominator vanished")
    num = m[..., 1, 0] + 1j * hbar * width * m[..., 1, 1]
    w = (-1j / hbar) * num / den
    if not np.all(w.real > 0.0):
        raise NumericalError("thawed width lost its positive real part")
    return w


def squeezed_width(omega, mass, width, hbar, t):
    """Breathing width of a Gaussian in a harmonic well of frequency omega.

    w(t) = -(i/hbar) (-mu w sin(wt) + i hbar g cos(wt))
                    / (cos(wt) + i hbar g sin(wt)/(mu w));
    equals g for all t when hbar g = mu omega (a coherent state).
    """
    omega = np.asarray(omega, dtype=float)
    wt = omega * np.asarray(t, dtype=float)
    c, s = np.cos(wt), np.sin(wt)
    num = -mass * omega * s + 1j * hbar * width * c
    den = c + 1j * hbar * width / (mass * omega) * s
    return (-1j / hbar) * num / den


def root_width(width_t, order):
    """Principal order-th root of an evolved width; Re stays positive."""
    if order < 2 or order % 2:
        raise ValueError(f"root order must be even and >= 2, got {order}")
    w = np.asarray(width_t, dtype=complex)
    if not np.all(w.real > 0.0):
        raise ValueError("root_width requires Re(width) > 0")
    return w ** (1.0 / order)


# --- co-integrated branch phases ---------------------------------------------
#
# The square roots in the prefactors must follow their radicand's branch
# continuously in time.  Output grids can be far coarser than the
# radicand's winding (which reaches hbar*g/mu radians per unit time for
# strongly squeezed widths), so instead of nearest-root bookkeeping at
# output times the engine co-integrates each radicand's unwrapped
# argument, d(arg z)/dt = Im(zdot * conj(z)) / |z|^2, alongside the
# trajectories.  The prefactor is then |z|^{1/2} exp(i arg_unwrapped/2)
# with no branch ambiguity at any output spacing.

class HKPhaseTracker:
    """Winding of the frozen-Gaussian radicand
    z = (Mqq + Mpp - i hbar g Mqp + i Mpq/(hbar g)) / 2."""

    key = "hk"

    def __init__(self, width, hbar):
        self.hg = hbar * width

    def rate(self, mqq, mqp, mpq, mpp, d2v, inv_mass):
        hg = self.hg
        z = 0.5 * (mqq + mpp - 1j * hg * mqp + 1j * mpq / hg)
        z_dot = 0.5 * (mpq * inv_mass - d2v * mqp
                       - 1j * hg * mpp * inv_mass - 1j * d2v * mqq / hg)
        return (z_dot * np.conj(z)).imag / (z.real**2 + z.imag**2)


class ThawedPhaseTracker:
    """Winding of the thawed denominator D = Mqq + i hbar g Mqp;
    equals hbar Re(width(t)) / mu, hence always forward."""

    key = "tga"

    def __init__(self, width, hbar):
        self.hg = hbar * width

    def rate(self, mqq, mqp, mpq, mpp, d2v, inv_mass):
        d = mqq + 1j * self.hg * mqp
        d_dot = (mpq + 1j * self.hg * mpp) * inv_mass
        return (d_dot * np.conj(d)).imag / (d.real**2 + d.imag**2)


class RootPhaseTracker:
    """Winding of the general radicand numerator with the root width,
    u = w1 Mqq + g Mpp - i hbar w1 g Mqp + (i/hbar) Mpq, w1 = width(t)^{1/n}.

    Uses the width's Riccati flow
    d(width)/dt = i V''/hbar - i hbar width^2 / mu."""

    def __init__(self, width, hbar, order):
        self.key = f"root_tga_{order}"
        self.width = width
        self.hbar = hbar
        self.order = order

    def rate(self, mqq, mqp, mpq, mpp, d2v, inv_mass):
        g, hbar, n = self.width, self.hbar, self.order
        hg = hbar * g
        den = mqq + 1j * hg * mqp
        g1 = (-1j / hbar) * (mpq + 1j * hg * mpp) / den
        g1_dot = 1j * d2v / hbar - 1j * hbar * inv_mass * g1 * g1
        w1 = g1 ** (1.0 / n)
        w1_dot = (w1 / g1) * g1_dot / n
        u = w1 * mqq + g * mpp - 1j * hbar * w1 * g * mqp + 1j * mpq / hbar
        u_dot = (w1_dot * mqq + w1 * mpq * inv_mass - g * d2v * mqp
                 - 1j * hbar * g * (w1_dot * mqp + w1 * mpp * inv_mass)
                 - 1j * d2v * mqq / hbar)
        return (u_dot * np.conj(u)).imag / (u.real**2 + u.imag**2)


def harmonic_denominator_winding(theta, ratio):
    """Unwrapped angle of cos(theta) + i*ratio*sin(theta) for ratio > 0.

    The curve winds monotonically, one half-turn per half-period, so
    the angle is the branch count times pi plus the in-branch arctan.
    """
    half_turns = np.floor((theta + 0.5 * np.pi) / np.pi)
    return half_turns * np.pi + np.arctan(ratio * np.tan(theta - half_turns * np.pi))


def make_phase_trackers(methods):
    """One tracker per distinct prefactor family in `methods`."""
    trackers = {}
    for method in methods:
        if method.variant == "hk":
            trackers.setdefault("hk", HKPhaseTracker(method.width, method.hbar))
        elif method.variant == "root_tga":
            tracker = RootPhaseTracker(method.width, method.hbar,
                                       method.root_order)
            trackers.setdefault(tracker.key, tracker)
        else:
            # thawed and global-harmonic (for its unbound fallback)
            trackers.setdefault("tga", ThawedPhaseTracker(method.width,
                                                          method.hbar))
    return list(trackers.values())


# --- branch-continued prefactors --------------------------------------------

def _continue_branch(candidate, prev):
    """Pick the sign of +-candidate closer to prev along the trajectory."""
    if prev is None:
        return candidate
    # |c - p|^2 - |-c - p|^2 = -4 Re(c conj(p)); the nearer root flips
    # sign exactly when that inner product is negative
    inner = np.real(candidate * np.conj(prev))
    if np.any(np.abs(inner) <= 1e-12 * np.abs(candidate) * np.abs(prev)):
        raise BranchAmbiguityError(
            "prefactor radicand rotated ~90 degrees in one step; "
            "reduce the output/integrator step")
    return np.where(inner < 0.0, -candidate, candidate)


def prefactor_general(m, width_t, width_0, hbar, prev=None):
    """General two-width IVR prefactor with branch continuation.

    R = sqrt[(w1 Mqq + w2 Mpp - i hbar w1 w2 Mqp + (i/hbar) Mpq)
             / (2 sqrt(Re w1 Re w2))]

    Returns (R, state); pass `state` back as `prev` at the next output
    time of the same trajectory to continue the square-root branch
    (None selects the principal root, appropriate at t = 0).
    """
    m = np.asarray(m, dtype=float)
    w1 = np.asarray(width_t, dtype=complex)
    w2 = np.asarray(width_0, dtype=complex)
    rad = (w1 * m[..., 0, 0] + w2 * m[..., 1, 1]
           - 1j * hbar * w1 * w2 * m[..., 0, 1]
           + (1j / hbar) * m[..., 1, 0])
    rad = rad / (2.0 * np.sqrt(w1.real * w2.real))
    if np.any(rad == 0.0):
        raise BranchAmbiguityError("prefactor radicand hit zero exactly")
    r = _continue_branch(np.sqrt(rad), prev)
    return r, r


def prefactor_hk(m, width, hbar, prev=None):
    """Frozen-Gaussian prefactor, the equal-width special case.

    R = sqrt[(Mqq + Mpp - i hbar g Mqp + i Mpq/(hbar g)) / 2]
    """
    m = np.asarray(m, dtype=float)
    rad = 0.5 * (m[..., 0, 0] + m[..., 1, 1]
                 - 1j * hbar * width * m[..., 0, 1]
                 + 1j * m[..., 1, 0] / (hbar * width))
    if np.any(rad == 0.0):
        raise BranchAmbiguityError("prefactor radicand hit zero exactly")
    r = _continue_branch(np.sqrt(rad), prev)
    return r, r


def prefactor_tga(m, width, width_t, hbar, prev=None):
    """Thawed-Gaussian prefactor.

    R = (g / Re w(t))^{1/4} * (Mqq + i hbar g Mqp)^{-1/2}; only the
    inverse square root needs branch continuation (the quartic-root
    factor is real positive).  `prev`/returned state hold that factor.
    """
    m = np.asarray(m, dtype=float)
    den = m[..., 0, 0] + 1j * hbar * width * m[..., 0, 1]
    if np.any(den == 0.0):
        raise BranchAmbiguityError("prefactor denominator hit zero exactly")
    inv_root = _continue_branch(1.0 / np.sqrt(den), prev)
    w = np.asarray(width_t, dtype=complex)
    r = (width / w.real) ** 0.25 * inv_root
    return r, inv_root


# --- Monte Carlo sampling ----------------------------------------------------

SAMPLING_DENSITIES = ("matched", "overlap-magnitude")


@dataclass(frozen=True)
class InitialSamples:
    """Weighted phase-space samples for the IVR integral."""

    q: np.ndarray
    p: np.ndarray
    weight: np.ndarray
    density: str
    seed: int


def sample_initial_conditions(width, hbar, q0, p0, n, seed, density="matched"):
    """Draw N weighted initial conditions around (q0, p0).

    The default "matched" density is a normal with variance 1/g in q and
    hbar^2 g in p (the squared magnitude of the initial coherent-state
    overlap); "overlap-magnitude" uses the magnitude itself, with twice
    those variances.  Each point carries the weight
    w = 1/(2 pi hbar rho) that makes mean(integrand * w) estimate the
    phase-space integral including its 1/(2 pi hbar) measure.

    Draws are indexed per trajectory (sample j consumes normal deviates
    2j and 2j+1), so a run with a larger N extends a smaller one and
    concurrent evaluation cannot reorder them.
    """
    if n < 1:
        raise ValueError(f"need at least one sample, got {n}")
    if density == "matched":
        sigma_q = 1.0 / np.sqrt(width)
        sigma_p = hbar * np.sqrt(width)
    elif density == "overlap-magnitude":
        sigma_q = np.sqrt(2.0 / width)
        sigma_p = hbar * np.sqrt(2.0 * width)
    else:
        raise ValueError(f"unknown sampling density {density!r}")
    draws = np.random.default_rng(seed).standard_normal((n, 2))
    q = q0 + sigma_q * draws[:, 0]
    p = p0 + sigma_p * draws[:, 1]
    dq, dp = q - q0, p - p0
    weight = (sigma_q * sigma_p / hbar) * np.exp(
        dq * dq / (2.0 * sigma_q**2) + dp * dp / (2.0 * sigma_p**2))
    return InitialSamples(q=q, p=p, weight=weight, density=density, seed=seed)


# --- the Monte Carlo engine --------------------------------------------------

@dataclass
class CorrelationSeries:
    """Autocorrelation (and optionally norm) of one method run."""

    method_key: str
    times: np.ndarray
    values: np.ndarray
    mc_error: np.ndarray
    norm: np.ndarray
    n_trajectories: int
    seed: int
    diagnostics: dict = field(default_factory=dict)


class _Assembler:
    """Per-variant accumulation of c(t), its standard error, and norms."""

    def __init__(self, method, model, samples, init_factor, initial,
                 n_times, norm_every, norm_grid):
        self.method = method
        self.model = model
        self.samples = samples
        self.init_factor = init_factor
        self.initial = initial
        self.norm_every = norm_every
        self.norm_grid = norm_grid
        n = samples.q.size
        self.values = np.empty(n_times, dtype=complex)
        self.errors = np.empty(n_times)
        self.norms = np.full(n_times, np.nan)
        self.diagnostics = {}
        if method.variant == "global_harmonic_tga":
            energy = model.energy(samples.q, samples.p)
            bound = np.atleast_1d(model.is_bound(energy))
            self.bound = bound
            self.omega = np.ones(n)
            if np.any(bound):
                self.omega[bound] = np.atleast_1d(
                    model.frequency(energy[bound]))
            self.diagnostics["unbound_fallback"] = int(np.sum(~bound))

    def _thawed_prefactor(self, state, width_t):
        g = self.method.width
        den = state.mqq + 1j * self.method.hbar * g * state.mqp
        return ((g / width_t.real) ** 0.25 / np.sqrt(np.abs(den))
                * np.exp(-0.5j * state.phases["tga"]))

    def _width_and_prefactor(self, state):
        method = self.method
        g, hbar = method.width, method.hbar
        if method.variant == "hk":
            width_t = np.full(state.q.shape, g, dtype=complex)
            rad = 0.5 * (state.mqq + state.mpp - 1j * hbar * g * state.mqp
                         + 1j * state.mpq / (hbar * g))
            r = np.sqrt(np.abs(rad)) * np.exp(0.5j * state.phases["hk"])
            return width_t, r
        m = pack_monodromy(state.mqq, state.mqp, state.mpq, state.mpp)
        if method.variant == "tga":
            width_t = thawed_width(m, g, hbar)
            r = self._thawed_prefactor(state, width_t)
        elif method.variant == "root_tga":
            width_t = root_width(thawed_width(m, g, hbar), method.root_order)
            u = (width_t * state.mqq + g * state.mpp
                 - 1j * hbar * width_t * g * state.mqp
                 + 1j * state.mpq / hbar)
            rad_mag = np.abs(u) / (2.0 * np.sqrt(width_t.real * g))
            r = np.sqrt(rad_mag) * np.exp(
                0.5j * state.phases[f"root_tga_{method.root_order}"])
        else:  # global_harmonic_tga
            mass = self.model.mass
            theta = self.omega * state.t
            ratio = hbar * g / (mass * self.omega)
            width_t = squeezed_width(self.omega, mass, g, hbar, state.t)
            den_abs = np.abs(np.cos(theta) + 1j * ratio * np.sin(theta))
            winding = harmonic_denominator_winding(theta, ratio)
            r = ((g / width_t.real) ** 0.25 / np.sqrt(den_abs)
                 * np.exp(-0.5j * winding))
            if not np.all(self.bound):
                # unbound samples fall back to the true-stability thawed form
                loose = ~self.bound
                width_loose = thawed_width(m[loose], g, hbar)
                width_t[loose] = width_loose
                den = state.mqq[loose] + 1j * hbar * g * state.mqp[loose]
                r[loose] = ((g / width_loose.real) ** 0.25
                            / np.sqrt(np.abs(den))
                            * np.exp(-0.5j * state.phases["tga"][loose]))
        return width_t, r

    def accept(self, idx, state):
        initial = self.initial
        width_t, r = self._width_and_prefactor(state)
        final_overlap = overlap_arrays(
            initial.q, initial.p, initial.width,
            state.q, state.p, width_t, initial.hbar)
        coeff = r * np.exp(1j * state.action / self.method.hbar) * self.init_factor
        contrib = final_overlap * coeff
        n = contrib.size
        self.values[idx] = contrib.mean()
        if n > 1:
            self.errors[idx] = np.sqrt(
                (contrib.real.std(ddof=1) ** 2 + contrib.imag.std(ddof=1) ** 2) / n)
        else:
            self.errors[idx] = 0.0
        if self.norm_every and idx % self.norm_every == 0:
            self.norms[idx] = self._grid_norm(state, width_t, coeff / n)

    def _grid_norm(self, state, width_t, coeffs):
        if self.norm_grid is not None:
            x = self.norm_grid
            check_grid_coverage(x, state.q, width_t)
        else:
            x = _auto_norm_grid(state.q, state.p, width_t, self.method.hbar)
        psi = superpose_arrays(coeffs, state.q, state.p, width_t,
                               self.method.hbar, x)
        return float(np.sqrt(np.trapezoid(np.abs(psi) ** 2, dx=x[1] - x[0])))

    def result(self):
        return CorrelationSeries(
            method_key=self.method.key,
            times=None,  # filled by run_methods
            values=self.values,
            mc_error=self.errors,
            norm=self.norms,
            n_trajectories=self.samples.q.size,
            seed=self.samples.seed,
            diagnostics=self.diagnostics,
        )


MAX_NORM_GRID_POINTS = 1 << 22


def _auto_norm_grid(q, p, width_t, hbar):
    """Uniform grid covering every evolved Gaussian by COVERAGE_SIGMAS."""
    pad = COVERAGE_SIGMAS / np.sqrt(np.min(width_t.real))
    lo = float(np.min(q) - pad)
    hi = float(np.max(q) + pad)
    # trapezoid aliasing for a Gaussian sampled at sigma/2 is exp(-8 pi^2);
    # the momentum bound resolves the fastest |psi|^2 cross-oscillation
    sigma_min = 1.0 / np.sqrt(2.0 * np.max(width_t.real))
    dx = sigma_min / 2.0
    p_max = float(np.max(np.abs(p)))
    if p_max > 0.0:
        dx = min(dx, np.pi * hbar / (4.0 * p_max))
    n = int(np.ceil((hi - lo) / dx)) + 1
    if n > MAX_NORM_GRID_POINTS:
        raise NumericalError(
            f"norm grid would need {n} points (> {MAX_NORM_GRID_POINTS}); "
            "the evolved widths are too disparate for a uniform grid")
    return lo + (hi - lo) / (n - 1) * np.arange(n)


def run_methods(model, methods, initial, times, n_trajectories, seed, integrator,
                *, norm_every=0, norm_grid=None, norm_keys=None, workers=1,
                density="matched"):
    """Propagate one shared trajectory ensemble and assemble every method.

    Returns {method key: CorrelationSeries}.  `norm_every = k` computes
    the reconstructed-wavefunction norm at every k-th output time
    (0 disables norms); rows without a norm hold NaN.  `norm_keys`
    restricts norm evaluation to the named methods (None means all).
    """
    methods = list(methods)
    keys = [m.key for m in methods]
    if len(set(keys)) != len(keys):
        raise ValueError("duplicate method keys in one run")
    for method in methods:
        if not np.isclose(method.width, initial.width) or method.hbar != initial.hbar:
            raise ValueError(
                "method width/hbar must match the initial state "
                f"({method.key}: {method.width}, {method.hbar} vs "
                f"{initial.width}, {initial.hbar})")
    times = np.asarray(times, dtype=float)
    samples = sample_initial_conditions(
        initial.width, initial.hbar, initial.q, initial.p,
        n_trajectories, seed, density=density)
    init_factor = overlap_arrays(
        samples.q, samples.p, initial.width,
        initial.q, initial.p, initial.width, initial.hbar) * samples.weight
    assemblers = [
        _Assembler(m, model, samples, init_factor, initial, times.size,
                   norm_every if norm_keys is None or m.key in norm_keys else 0,
                   norm_grid)
        for m in methods
    ]
    trackers = make_phase_trackers(methods)
    for idx, state in enumerate(
            iterate_ensemble(model, samples.q, samples.p, times, integrator,
                             workers=workers, phase_trackers=trackers)):
        for assembler in assemblers:
            assembler.accept(idx, state)
    results = {}
    for assembler in assemblers:
        series = assembler.result()
        series.times = times.copy()
        results[series.method_key] = series
    return results


def autocorrelation(model, method, initial, times, n_trajectories, seed,
                    integrator, workers=1, density="matched"):
    """CorrelationSeries of a single method (no norms)."""
    return run_methods(model, [method], initial, times, n_trajectories, seed,
                       integrator, workers=workers, density=density)[method.key]


def norm_series(model, method, initial, times, n_trajectories, seed,
                integrator, grid=None, workers=1, density="matched"):
    """Norm of the reconstructed wavefunction at every output time."""
    result = run_methods(model, [method], initial, times, n_trajectories, seed,
                         integrator, norm_every=1, norm_grid=grid,
                         workers=workers, density=density)
    return result[method.key].norm


@dataclass
class WidthDiagnostic:
    """Re of the thawed width and its roots along one trajectory."""

    times: np.ndarray
    re_width: dict  # {1: Re w, n: Re w^{1/n}, ...}


def width_diagnostic(model, q_i, p_i, width, hbar, times, orders=(2, 4),
                     integrator=None):
    """Track Re of the thawed width and its roots along one trajectory."""
    integrator = integrator or IntegratorConfig(dt=1e-3)
    times = np.asarray(times, dtype=float)
    series = {1: np.empty(times.size)}
    for order in orders:
        series[order] = np.empty(times.size)
    for idx, state in enumerate(
            iterate_ensemble(model, [q_i], [p_i], times, integrator)):
        m = pack_monodromy(state.mqq, state.mqp, state.mpq, state.mpp)
        w = thawed_width(m, width, hbar)[0]
        series[1][idx] = w.real
        for order in orders:
            series[order][idx] = root_width(w, order).real
    return WidthDiagnostic(times=times, re_width=series)
