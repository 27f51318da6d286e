import numpy as np
import pytest
from scipy.integrate import quad

from scivr.errors import GridCoverageError
from scivr.gaussians import GaussianState, amplitude, overlap, superpose_on_grid


def quadrature_overlap(bra, ket):
    """Adaptive-quadrature oracle for <bra|ket> on a window sized by the
    product Gaussian's magnitude envelope."""
    a = 0.5 * (np.conj(bra.width) + ket.width)
    b = (np.conj(bra.width) * bra.q + ket.width * ket.q
         + 1j * (ket.p - bra.p) / bra.hbar)
    center = b.real / (2.0 * a.real)
    reach = np.sqrt(45.0 / a.real)

    def integrand(x, part):
        value = np.conj(amplitude(bra, x)) * amplitude(ket, x)
        return value.real if part == "re" else value.imag

    lo, hi = center - reach, center + reach
    re = quad(integrand, lo, hi, args=("re",), limit=800, epsabs=1e-13, epsrel=1e-13)[0]
    im = quad(integrand, lo, hi, args=("im",), limit=800, epsabs=1e-13, epsrel=1e-13)[0]
    return re + 1j * im


def panel_quadrature_overlap(bra, ket):
    """Composite Gauss-Legendre oracle for <bra|ket>; panel count set by
    the total oscillation phase, so strongly oscillatory pairs resolve."""
    a = 0.5 * (np.conj(bra.width) + ket.width)
    b = (np.conj(bra.width) * bra.q + ket.width * ket.q
         + 1j * (ket.p - bra.p) / bra.hbar)
    center = b.real / (2.0 * a.real)
    reach = np.sqrt(45.0 / a.real)
    phase_span = abs(a.imag) * reach**2 + 2.0 * abs(b.imag) * reach
    panels = max(64, int(np.ceil(phase_span / 2.0)))
    nodes, weights = np.polynomial.legendre.leggauss(10)
    edges = np.linspace(center - reach, center + reach, panels + 1)
    half = 0.5 * (edges[1] - edges[0])
    x = (edges[:-1, None] + half) + half * nodes[None, :]
    values = np.conj(amplitude(bra, x)) * amplitude(ket, x)
    return half * np.sum(weights[None, :] * values)


class TestAmplitude:
    def test_peak_value(self):
        g = GaussianState(q=0.0, p=0.0, width=1.0, hbar=1.0)
        assert amplitude(g, 0.0) == pytest.approx(np.pi ** -0.25, rel=1e-14)

    def test_grid_normalization(self):
        g = GaussianState(q=0.0, p=0.0, width=1.0, hbar=1.0)
        x = np.linspace(-12, 12, 4001)
        norm = np.trapezoid(np.abs(amplitude(g, x)) ** 2, x)
        assert norm == pytest.approx(1.0, abs=1e-12)

    def test_frozen_complex_width_value(self):
        # oracle: 50-digit mpmath evaluation of the defining expression
        g = GaussianState(q=1.0, p=2.0, width=2 + 1j, hbar=0.05)
        expected = 0.66848902429919042906 - 0.46858470971118515508j
        assert amplitude(g, 1.3) == pytest.approx(expected, abs=1e-12)

    def test_rejects_non_normalizable(self):
        with pytest.raises(ValueError):
            GaussianState(q=0.0, p=0.0, width=-1.0 + 2j, hbar=1.0)


class TestOverlap:
    def test_self_overlap_is_one(self):
        for g in [
            GaussianState(0.0, 0.0, 1.0, 1.0),
            GaussianState(1.2, -0.4, 3.0 - 5.0j, 0.05),
            GaussianState(-2.0, 1.0, 100 / 9, 0.05),
        ]:
            assert overlap(g, g) == pytest.approx(1.0, abs=1e-12)

    def test_positional_displacement_magnitude(self):
        g = 100.0 / 9.0
        hbar = 0.05
        for d in (0.05, 0.2, 0.5):
            bra = GaussianState(0.0, 0.3, g, hbar)
            ket = GaussianState(d, 0.3, g, hbar)
            assert abs(overlap(bra, ket)) == pytest.approx(np.exp(-g * d * d / 4.0), rel=1e-12)

    def test_frozen_complex_pair(self):
        # oracle: 50-digit mpmath quadrature of the overlap integral
        bra = GaussianState(0.0, 0.0, 12.0, 1.0)
        ket = GaussianState(0.4, 1.1, 3.0 - 5.0j, 1.0)
        expected = 0.71222706639880427771 + 0.044483065383635280325j
        assert overlap(bra, ket) == pytest.approx(expected, abs=1e-10)
        assert quadrature_overlap(bra, ket) == pytest.approx(expected, abs=1e-10)

    def test_conjugate_symmetry_and_bound(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            hbar = rng.uniform(0.05, 1.0)
            bra = GaussianState(rng.uniform(-2, 2), rng.uniform(-2, 2),
                                rng.uniform(0.2, 20) + 1j * rng.uniform(-5, 5), hbar)
            ket = GaussianState(rng.uniform(-2, 2), rng.uniform(-2, 2),
                                rng.uniform(0.2, 20) + 1j * rng.uniform(-5, 5), hbar)
            fwd = overlap(bra, ket)
            assert fwd == pytest.approx(np.conj(overlap(ket, bra)), abs=1e-13)
            assert abs(fwd) <= 1.0 + 1e-12

    def test_closed_form_matches_quadrature_200_pairs(self):
        rng = np.random.default_rng(31)
        for _ in range(200):
            hbar = rng.uniform(0.05, 1.0)
            log_re = rng.uniform(-3, 3)
            re_b = 10.0 ** log_re
            re_k = 10.0 ** rng.uniform(-3, 3)
            bra = GaussianState(rng.uniform(-1, 1), rng.uniform(-1, 1),
                                re_b + 1j * rng.uniform(-0.5, 0.5) * re_b, hbar)
            ket = GaussianState(rng.uniform(-1, 1), rng.uniform(-1, 1),
                                re_k + 1j * rng.uniform(-0.5, 0.5) * re_k, hbar)
            closed = overlap(bra, ket)
            assert closed == pytest.approx(panel_quadrature_overlap(bra, ket), abs=1e-10)


class TestSuperposeOnGrid:
    def test_single_term_reproduces_amplitude(self):
        g = GaussianState(0.5, 1.0, 2.0, 0.5)
        x = np.linspace(-8, 8, 801)
        psi = superpose_on_grid([(1.0, g)], x)
        assert np.allclose(psi, amplitude(g, x), atol=1e-14)

    def test_opposite_coefficients_cancel(self):
        g = GaussianState(0.0, 0.7, 4.0, 1.0)
        x = np.linspace(-6, 6, 501)
        psi = superpose_on_grid([(1.0, g), (-1.0, g)], x)
        assert np.max(np.abs(psi)) == 0.0

    def test_grid_norm_matches_pairwise_overlap_sum(self):
        rng = np.random.default_rng(5)
        hbar = 0.3
        states, coeffs = [], []
        for _ in range(100):
            states.append(GaussianState(rng.uniform(-2, 2), rng.uniform(-2, 2),
                                         rng.uniform(0.5, 6.0) + 1j * rng.uniform(-2, 2),
                                         hbar))
            coeffs.append(rng.normal() + 1j * rng.normal())
        x = np.linspace(-16, 16, 6001)
        psi = superpose_on_grid(list(zip(coeffs, states)), x)
        grid_norm_sq = np.trapezoid(np.abs(psi) ** 2, x)
        gram = 0.0
        for i, gi in enumerate(states):
            for j, gj in enumerate(states):
                gram += np.conj(coeffs[i]) * coeffs[j] * overlap(gi, gj)
        assert grid_norm_sq == pytest.approx(gram.real, rel=1e-8)

    def test_coverage_error(self):
        g = GaussianState(3.0, 0.0, 0.5, 1.0)
        x = np.linspace(-4, 4, 101)
        with pytest.raises(GridCoverageError):
            superpose_on_grid([(1.0, g)], x)
