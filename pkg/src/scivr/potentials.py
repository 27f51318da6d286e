"""One-dimensional potential models and their bound-motion analysis.

Three closed-form potentials are provided:

* harmonic      V(x) = mu * omega^2 * x^2 / 2
* morse         V(x) = v0 * (1 - exp(-lam*x))^2
* baranger      V(x) = 2 * v0 * exp(-alpha*a) * cosh(alpha*x)

Each model knows its first two derivatives analytically, the classical
Hamiltonian H = p^2/(2 mu) + V(q), and the action-angle frequency of
bound motion,

    I(E)     = (1/pi) * integral_{q-}^{q+} sqrt(2 mu (E - V(q))) dq
    omega(E) = dH/dI = 1 / (dI/dE),

where q-+ are the classical turning points.  The action integral is
evaluated by Gauss-Legendre quadrature after the substitution
q = q_mid + q_half * sin(theta), which removes the inverse-square-root
endpoint singularity.  All operations accept scalars or numpy arrays of
energies/positions and are pure functions.
"""

import numpy as np

from .errors import EnergyDomainError, PotentialRangeError, UnboundMotionError

# np.exp overflows just above 709; stay clear of it
_EXP_GUARD = 700.0

# turning points are polished to this absolute tolerance in q
_TURNING_POINT_TOL = 1e-12


class Potential:
    """Base class; concrete models implement `evaluate` analytically."""

    #: whether frequency() has a closed form (else numeric dI/dE is used)
    has_analytic_frequency = False

    def __init__(self, mass):
        if mass <= 0:
            raise ValueError(f"mass must be positive, got {mass}")
        self.mass = float(mass)

    def evaluate(self, x):
        """Return (V, V', V'') at x.  x may be a scalar or array."""
        raise NotImplementedError

    def value(self, x):
        return self.evaluate(x)[0]

    def energy(self, q, p):
        """Classical Hamiltonian p^2/(2 mu) + V(q)."""
        q = np.asarray(q, dtype=float)
        p = np.asarray(p, dtype=float)
        return p * p / (2.0 * self.mass) + self.evaluate(q)[0]

    # --- bound-motion analysis -------------------------------------------

    @property
    def min_position(self):
        """Location of the potential minimum (all models: x = 0)."""
        return 0.0

    @property
    def min_value(self):
        return float(self.evaluate(self.min_position)[0])

    def _bracket_scale(self):
        """Characteristic length for the outward turning-point search."""
        return 1.0

    def is_bound(self, energy):
        """True where motion at `energy` is a bound oscillation."""
        return np.asarray(energy, dtype=float) > self.min_value

    def _require_bound(self, energy):
        e = np.asarray(energy, dtype=float)
        if np.any(e <= self.min_value):
            raise EnergyDomainError(
                f"energy must exceed the potential minimum {self.min_value!r}")
        if not np.all(self.is_bound(e)):
            raise UnboundMotionError(
                "motion at the requested energy is not bound")

    def turning_points(self, energy):
        """Classical turning points (q_minus, q_plus) with V(q) = E.

        Found by outward bracketing from the potential minimum, 60
        bisection steps and a safeguarded Newton polish (tolerance
        1e-12 in q).  Vectorized over `energy`.
        """
        self._require_bound(energy)
        e = np.atleast_1d(np.asarray(energy, dtype=float))
        lo = self._one_sided_turning_point(e, -1.0)
        hi = self._one_sided_turning_point(e, +1.0)
        if np.isscalar(energy) or np.ndim(energy) == 0:
            return float(lo[0]), float(hi[0])
        return lo, hi

    def _one_sided_turning_point(self, e, side):
        q0 = self.min_position
        step = np.full_like(e, side * 1e-3 * self._bracket_scale())
        inner = np.full_like(e, q0)
        outer = inner + step
        # double the step until V(outer) exceeds E everywhere
        for _ in range(200):
            below = self.evaluate(outer)[0] < e
            if not np.any(below):
                break
            inner = np.where(below, outer, inner)
            step = np.where(below, 2.0 * step, step)
            outer = np.where(below, inner + step, outer)
        else:  # pragma: no cover - guarded by is_bound checks
            raise UnboundMotionError("failed to bracket a turning point")
        # bisection: V is monotone between minimum and wall
        for _ in range(60):
            mid = 0.5 * (inner + outer)
            below = self.evaluate(mid)[0] < e
            inner = np.where(below, mid, inner)
            outer = np.where(below, outer, mid)
        # Newton polish, clipped into the bracket
        q = 0.5 * (inner + outer)
        for _ in range(3):
            v, dv, _ = self.evaluate(q)
            update = np.where(np.abs(dv) > 0.0, (v - e) / np.where(dv == 0.0, 1.0, dv), 0.0)
            q = np.clip(q - update, np.minimum(inner, outer), np.maximum(inner, outer))
        return q

    def action_variable(self, energy, quadrature_order=64):
        """Action I(E) of the closed orbit at energy E.

        I = (1/2 pi) * contour integral of p dq
          = (1/pi) * integral_{q-}^{q+} sqrt(2 mu (E - V(q))) dq.

        The endpoint singularity is removed by q = mid + half*sin(theta)
        and the smooth result integrated with Gauss-Legendre nodes.
        """
        self._require_bound(energy)
        e = np.atleast_1d(np.asarray(energy, dtype=float))
        q_lo = self._one_sided_turning_point(e, -1.0)
        q_hi = self._one_sided_turning_point(e, +1.0)
        nodes, weights = np.polynomial.legendre.leggauss(quadrature_order)
        theta = 0.5 * np.pi * nodes[:, None]
        mid = 0.5 * (q_hi + q_lo)
        half = 0.5 * (q_hi - q_lo)
        q = mid + half * np.sin(theta)
        v = self.evaluate(q)[0]
        # roundoff can push E - V slightly negative at the endpoints
        p_cl = np.sqrt(2.0 * self.mass * np.maximum(e - v, 0.0))
        integrand = p_cl * half * np.cos(theta)
        # the theta -> [-1, 1] node map contributes pi/2, the contour 1/pi
        result = 0.5 * (weights[:, None] * integrand).sum(axis=0)
        if np.isscalar(energy) or np.ndim(energy) == 0:
            return float(result[0])
        return result

    def frequency(self, energy, method="auto", quadrature_order=64):
        """Oscillation frequency omega(E) = 1/(dI/dE) of the bound orbit.

        `method` selects the evaluation path: "analytic" (closed form,
        available when `has_analytic_frequency`), "numeric" (centered
        difference of the action with one Richardson extrapolation), or
        "auto" (analytic when available).
        """
        if method == "auto":
            method = "analytic" if self.has_analytic_frequency else "numeric"
        if method == "analytic":
            if not self.has_analytic_frequency:
                raise ValueError(f"{type(self).__name__} has no analytic frequency")
            self._require_bound(energy)
            return self._analytic_frequency(energy)
        if method != "numeric":
            raise ValueError(f"unknown frequency method {method!r}")
        self._require_bound(energy)
        e = np.atleast_1d(np.asarray(energy, dtype=float))
        h = 1e-3 * (e - self.min_value)
        upper = self._energy_ceiling()
        if upper is not None:
            h = np.minimum(h, 0.25 * (upper - e))
        act = lambda x: self.action_variable(x, quadrature_order=quadrature_order)
        d_h = (act(e + h) - act(e - h)) / (2.0 * h)
        d_h2 = (act(e + 0.5 * h) - act(e - 0.5 * h)) / h
        didE = (4.0 * d_h2 - d_h) / 3.0
        if np.any(didE <= 0.0):
            raise EnergyDomainError("dI/dE <= 0: action is not increasing here")
        result = 1.0 / didE
        if np.isscalar(energy) or np.ndim(energy) == 0:
            return float(result[0])
        return result

    def _energy_ceiling(self):
        """Upper bound of the bound-motion energy range, or None."""
        return None

    def _analytic_frequency(self, energy):
        raise NotImplementedError


class HarmonicPotential(Potential):
    """V(x) = mu * omega^2 * x^2 / 2."""

    has_analytic_frequency = True

    def __init__(self, mass, omega):
        super().__init__(mass)
        if omega <= 0:
            raise ValueError(f"omega must be positive, got {omega}")
        self.omega = float(omega)

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        k = self.mass * self.omega**2
        return 0.5 * k * x * x, k * x, k * np.ones_like(x)

    def _bracket_scale(self):
        return 1.0 / self.omega

    def _analytic_frequency(self, energy):
        e = np.asarray(energy, dtype=float)
        result = np.full(np.shape(e), self.omega)
        if np.ndim(e) == 0:
            return float(self.omega)
        return result


class MorsePotential(Potential):
    """V(x) = v0 * (1 - exp(-lam*x))^2, a model for a chemical bond.

    Bound motion exists for 0 < E < v0; the action has the closed form
    I(E) = sqrt(2 mu v0)/lam * (1 - sqrt(1 - E/v0)), giving
    omega(E) = omega0 * sqrt(1 - E/v0) with omega0 = lam*sqrt(2 v0/mu).
    """

    has_analytic_frequency = True

    def __init__(self, mass, v0, lam):
        super().__init__(mass)
        if v0 <= 0 or lam <= 0:
            raise ValueError(f"v0 and lam must be positive, got {v0}, {lam}")
        self.v0 = float(v0)
        self.lam = float(lam)

    @property
    def omega0(self):
        """Harmonic frequency at the well bottom."""
        return self.lam * np.sqrt(2.0 * self.v0 / self.mass)

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(-self.lam * x > _EXP_GUARD):
            raise PotentialRangeError(
                "exp(-lam*x) overflows: position too far up the repulsive wall")
        u = np.exp(-self.lam * x)
        one_m_u = 1.0 - u
        v = self.v0 * one_m_u * one_m_u
        dv = 2.0 * self.v0 * self.lam * one_m_u * u
        d2v = 2.0 * self.v0 * self.lam**2 * u * (2.0 * u - 1.0)
        return v, dv, d2v

    def _bracket_scale(self):
        return 1.0 / self.lam

    def is_bound(self, energy):
        e = np.asarray(energy, dtype=float)
        return (e > self.min_value) & (e < self.v0)

    def _energy_ceiling(self):
        return self.v0

    def _require_bound(self, energy):
        e = np.asarray(energy, dtype=float)
        if np.any(e <= self.min_value):
            raise EnergyDomainError(
                f"energy must exceed the potential minimum {self.min_value!r}")
        if np.any(e >= self.v0):
            raise UnboundMotionError(
                f"Morse motion is unbound for E >= v0 = {self.v0}")

    def _analytic_frequency(self, energy):
        e = np.asarray(energy, dtype=float)
        result = self.omega0 * np.sqrt(1.0 - e / self.v0)
        if np.ndim(e) == 0:
            return float(result)
        return result


class BarangerPotential(Potential):
    """V(x) = 2 * v0 * exp(-alpha*a) * cosh(alpha*x).

    A symmetric exponentially-walled well; all energies above the
    minimum 2*v0*exp(-alpha*a) are bound.
    """

    def __init__(self, mass, v0, a, alpha):
        super().__init__(mass)
        if v0 <= 0 or alpha <= 0:
            raise ValueError(f"v0 and alpha must be positive, got {v0}, {alpha}")
        self.v0 = float(v0)
        self.a = float(a)
        self.alpha = float(alpha)
        self._prefac = 2.0 * self.v0 * np.exp(-self.alpha * self.a)

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(np.abs(self.alpha * x) > _EXP_GUARD):
            raise PotentialRangeError(
                "cosh(alpha*x) overflows: position outside the guard region")
        c = self._prefac * np.cosh(self.alpha * x)
        s = self._prefac * np.sinh(self.alpha * x)
        return c, self.alpha * s, self.alpha**2 * c

    def _bracket_scale(self):
        return 1.0 / self.alpha


def make_potential(kind, mass, **params):
    """Build a potential from its config name and parameter dict."""
    kind = kind.lower()
    if kind == "harmonic":
        return HarmonicPotential(mass, params["omega"])
    if kind == "morse":
        return MorsePotential(mass, params["v0"], params["lam"])
    if kind == "baranger":
        return BarangerPotential(mass, params["v0"], params["a"], params["alpha"])
    raise ValueError(f"unknown potential kind {kind!r}")
