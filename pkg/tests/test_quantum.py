import numpy as np
import pytest

from scivr.errors import GridCoverageError
from scivr.gaussians import GaussianState
from scivr.potentials import HarmonicPotential, MorsePotential
from scivr.quantum import (
    GridSpec,
    autocorrelation_series,
    energy_expectation,
    initial_state_on_grid,
    quantum_autocorrelation,
    split_operator_propagate,
)


class FreeParticle:
    """V = 0 stub with the potential interface the propagator needs."""

    def __init__(self, mass=1.0):
        self.mass = mass

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        zero = np.zeros_like(x)
        return zero, zero, zero


class TestGridSpec:
    def test_validation(self):
        with pytest.raises(ValueError):
            GridSpec(-1.0, 1.0, 100, 1e-3)  # too few points
        with pytest.raises(ValueError):
            GridSpec(-1.0, 1.0, 300, 1e-3)  # not a power of two
        with pytest.raises(ValueError):
            GridSpec(1.0, -1.0, 512, 1e-3)

    def test_kinetic_phase_bound(self):
        grid = GridSpec(-10.0, 10.0, 2048, 1e-3)
        with pytest.raises(ValueError):
            grid.validate_for(mass=1.0, hbar=1.0)
        GridSpec(-10.0, 10.0, 2048, 1e-5).validate_for(mass=1.0, hbar=1.0)


class TestHarmonicOscillator:
    def test_ground_state_is_stationary(self):
        # matched width hbar*gamma = mu*omega is the exact ground state
        mass, omega, hbar = 1.0, 1.0, 1.0
        pot = HarmonicPotential(mass, omega)
        state = GaussianState(0.0, 0.0, mass * omega / hbar, hbar)
        grid = GridSpec(-10.0, 10.0, 512, 2e-4)
        times = np.linspace(0.0, 3 * 2 * np.pi / omega, 16)
        series = autocorrelation_series(pot, state, grid, times)
        assert np.all(np.abs(np.abs(series.values) - 1.0) < 1e-8)

    def test_coherent_state_revival(self):
        mass, omega, hbar = 1.0, 1.0, 1.0
        pot = HarmonicPotential(mass, omega)
        state = GaussianState(1.0, 0.0, 1.0, hbar)
        grid = GridSpec(-10.0, 10.0, 512, 2e-4)
        period = 2 * np.pi / omega
        times = np.array([0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0]) * period
        series = autocorrelation_series(pot, state, grid, times)
        assert abs(series.values[0] - 1.0) < 1e-10
        assert abs(series.values[4]) == pytest.approx(1.0, abs=1e-8)
        assert abs(series.values[6]) == pytest.approx(1.0, abs=1e-8)
        assert abs(series.values[2]) < 0.5

    def test_norm_conserved_and_energy_flat(self):
        mass, omega, hbar = 1.0, 1.0, 1.0
        pot = HarmonicPotential(mass, omega)
        state = GaussianState(1.0, 0.5, 2.0, hbar)
        # wide enough that the 1e-10 momentum tail turns inside the grid
        grid = GridSpec(-14.0, 14.0, 512, 2e-4)
        times = np.linspace(0.0, 4 * np.pi, 9)
        psi0 = initial_state_on_grid(state, grid)
        e0 = None
        for t, psi in split_operator_propagate(pot, psi0, grid, times, hbar):
            norm = np.sqrt(np.trapezoid(np.abs(psi) ** 2, dx=grid.dx))
            assert abs(norm - 1.0) <= 1e-12
            e = energy_expectation(pot, psi, grid, hbar)
            e0 = e if e0 is None else e0
            assert abs(e / e0 - 1.0) <= 1e-6


class TestFreeParticle:
    def test_gaussian_spreads_at_textbook_rate(self):
        hbar, mass = 1.0, 1.0
        width = 4.0
        state = GaussianState(0.0, 0.0, width, hbar)
        grid = GridSpec(-40.0, 40.0, 2048, 2e-4)
        times = np.linspace(0.0, 1.5, 7)
        x = grid.positions()
        sigma0 = np.sqrt(1.0 / (2.0 * width))
        psi0 = initial_state_on_grid(state, grid)
        for t, psi in split_operator_propagate(FreeParticle(mass), psi0, grid,
                                               times, hbar):
            density = np.abs(psi) ** 2
            sigma = np.sqrt(np.trapezoid(x * x * density, dx=grid.dx)
                            - np.trapezoid(x * density, dx=grid.dx) ** 2)
            expected = sigma0 * np.sqrt(1.0 + (hbar * t / (2 * mass * sigma0**2)) ** 2)
            assert sigma == pytest.approx(expected, rel=1e-6)

    def test_edge_violation_names_time(self):
        hbar, mass = 1.0, 1.0
        state = GaussianState(0.0, 4.0, 4.0, hbar)  # moving packet
        grid = GridSpec(-8.0, 8.0, 512, 1e-4)
        psi0 = initial_state_on_grid(state, grid)
        with pytest.raises(GridCoverageError, match="at t="):
            list(split_operator_propagate(FreeParticle(mass), psi0, grid,
                                          np.linspace(0.0, 5.0, 11), hbar))


class TestMorseSelfConvergence:
    def test_step_halving_changes_little(self):
        pot = MorsePotential(1.0, 30.0, 0.08)
        state = GaussianState(0.0, 0.0, 12.0, 1.0)
        times = np.linspace(0.0, 10.0, 21)
        coarse = autocorrelation_series(
            pot, state, GridSpec(-20.0, 240.0, 2048, 5e-4), times)
        fine = autocorrelation_series(
            pot, state, GridSpec(-20.0, 240.0, 2048, 2.5e-4), times)
        assert np.max(np.abs(coarse.values - fine.values)) <= 1e-6

    def test_grid_doubling_changes_little(self):
        pot = MorsePotential(1.0, 30.0, 0.08)
        state = GaussianState(0.0, 0.0, 12.0, 1.0)
        times = np.linspace(0.0, 10.0, 21)
        base = autocorrelation_series(
            pot, state, GridSpec(-20.0, 240.0, 2048, 2.5e-4), times)
        doubled = autocorrelation_series(
            pot, state, GridSpec(-20.0, 240.0, 4096, 2.5e-4), times)
        assert np.max(np.abs(base.values - doubled.values)) <= 1e-8


def test_autocorrelation_at_zero_is_one():
    pot = HarmonicPotential(1.0, 1.0)
    state = GaussianState(0.3, -0.2, 1.5, 1.0)
    grid = GridSpec(-10.0, 10.0, 512, 2e-4)
    psi0 = initial_state_on_grid(state, grid)
    assert quantum_autocorrelation(psi0, psi0, grid) == pytest.approx(1.0, abs=1e-10)
