import sys
import math
from pathlib import Path

import numpy as np
import pytest

# Add project root to sys.path
sys.path.append(str(Path(__file__).parent.parent))

from src.chain1d import assemble_matrix, elastic_potential
from src.dynamics import (
    apply_laplacian,
    bloch_state,
    delta_state,
    evolve_diffusion,
    normal_mode_frequencies,
    return_probability,
    state_from_values,
    total_mass,
)
from src.errors import DimensionMismatch, DomainError
from src.lattice_nd import first_block_row_spectral
from src.toeplitz import SymToeplitz
from src.types import ChainConfig, Convention, FieldState, LatticeConfig

def random_state(cfg, seed=0):
    return state_from_values(cfg, np.random.default_rng(seed).normal(size=cfg.shape))

def test_apply_laplacian_constant_field_vanishes():
    cfg = ChainConfig(size=10, alpha=1.3)
    result = apply_laplacian(state_from_values(cfg, np.full(10, 2.5)))
    np.testing.assert_allclose(result, 0.0, atol=1e-12)

def test_apply_laplacian_bloch_eigenrelation():
    cfg = ChainConfig(size=16, alpha=1.0, omega_sq=2.0, mass=3.0)
    state = bloch_state(cfg, 2)
    rate = 2.0 * abs(2 * math.sin(math.pi * 2 / 16))
    np.testing.assert_allclose(apply_laplacian(state), -3.0 * rate * state.values, atol=1e-12)
    np.testing.assert_allclose(
        apply_laplacian(state, Convention.CHARACTERISTIC), rate * state.values, atol=1e-12
    )

def test_apply_laplacian_born_von_karman_stencil():
    cfg = ChainConfig(size=9, alpha=2.0, omega_sq=0.5, mass=2.0)
    state = random_state(cfg)
    u = state.values
    stencil = 2.0 * 0.5 * (np.roll(u, -1) - 2 * u + np.roll(u, 1))
    np.testing.assert_allclose(apply_laplacian(state), stencil, atol=1e-12)

def test_apply_laplacian_matches_toeplitz_product():
    chain = ChainConfig(size=12, alpha=0.7, mass=1.5)
    state = random_state(chain, seed=4)
    matrix = assemble_matrix(chain)
    np.testing.assert_allclose(apply_laplacian(state), matrix.matvec(state.values), atol=1e-10)

    lattice = LatticeConfig(dimension=2, alpha=1.2, dims=(6, 5), mass=0.8)
    state = random_state(lattice, seed=2)
    matrix = SymToeplitz(first_block_row_spectral(lattice), scale=-0.8)
    np.testing.assert_allclose(apply_laplacian(state), matrix.matvec(state.values), atol=1e-10)

def test_evolve_zero_time_is_identity():
    state = random_state(ChainConfig(size=8, alpha=1.5))
    evolved = evolve_diffusion(state, 0.0)
    np.testing.assert_array_equal(evolved.values, state.values)
    assert evolved.time == state.time

def test_evolve_uniform_state_unchanged():
    cfg = LatticeConfig(dimension=2, alpha=0.9, dims=(5, 7))
    state = state_from_values(cfg, np.full(cfg.shape, 0.25))
    np.testing.assert_allclose(evolve_diffusion(state, 37.0).values, 0.25, atol=1e-14)

def test_evolve_bloch_mode_decay():
    cfg = ChainConfig(size=16, alpha=1.0)
    state = bloch_state(cfg, 2)  # kappa = pi/4
    for t in (0.5, 3.0):
        evolved = evolve_diffusion(state, t, diffusivity=0.7)
        expected = math.exp(-0.7 * (4 * math.sin(math.pi / 8) ** 2) ** 0.5 * t)
        np.testing.assert_allclose(evolved.values, expected * state.values, atol=1e-12)
        assert evolved.time == t

def test_evolve_conserves_mass_and_contracts():
    cfg = ChainConfig(size=32, alpha=1.4)
    state = delta_state(cfg)
    previous = state
    for t in (0.1, 1.0, 10.0):
        evolved = evolve_diffusion(state, t)
        assert total_mass(evolved) == pytest.approx(1.0, abs=1e-12)
        assert np.max(np.abs(evolved.values)) <= np.max(np.abs(previous.values)) + 1e-15
        previous = evolved

@pytest.mark.parametrize("alpha", [0.7, 2.0, 3.0])
def test_elastic_potential_decreases_under_diffusion(alpha):
    cfg = ChainConfig(size=64, alpha=alpha, mass=1.5)
    state = random_state(cfg, seed=3)
    energies = [elastic_potential(cfg, evolve_diffusion(state, t)) for t in np.linspace(0.0, 3.0, 31)]
    assert energies[0] > 0
    assert np.all(np.diff(energies) < 0)

def test_evolve_time_accumulates_and_composes():
    state = random_state(ChainConfig(size=10, alpha=0.8), seed=9)
    two_steps = evolve_diffusion(evolve_diffusion(state, 0.4), 0.6)
    one_step = evolve_diffusion(state, 1.0)
    assert two_steps.time == pytest.approx(1.0)
    np.testing.assert_allclose(two_steps.values, one_step.values, atol=1e-13)

def test_evolve_rejects_bad_arguments():
    state = delta_state(ChainConfig(size=5, alpha=1.0))
    with pytest.raises(DomainError):
        evolve_diffusion(state, -1.0)
    with pytest.raises(DomainError):
        evolve_diffusion(state, 1.0, diffusivity=0.0)

def test_normal_mode_frequencies():
    freqs = normal_mode_frequencies(ChainConfig(size=4, alpha=2.0, omega_sq=9.0))
    np.testing.assert_allclose(freqs, 3.0 * np.array([0.0, math.sqrt(2), math.sqrt(2), 2.0]), atol=1e-14)
    assert freqs[0] == 0.0

    cfg = LatticeConfig(dimension=2, alpha=1.5, dims=(8, 8))
    freqs = normal_mode_frequencies(cfg)
    assert freqs.size == 64
    assert np.count_nonzero(freqs == 0.0) == 1
    assert freqs[-1] == pytest.approx(8 ** (1.5 / 4))
    with pytest.raises(DomainError):
        normal_mode_frequencies(LatticeConfig(dimension=2, alpha=1.5))

def test_return_probability():
    cfg = ChainConfig(size=20, alpha=1.1)
    assert return_probability(cfg, 0.0) == pytest.approx(1.0)
    # long-time limit: only the zero mode survives
    assert return_probability(cfg, 1e6) == pytest.approx(1 / 20, abs=1e-12)
    evolved = evolve_diffusion(delta_state(cfg), 2.0)
    assert return_probability(cfg, 2.0) == pytest.approx(evolved.values[0], abs=1e-12)

def test_initial_states():
    cfg = LatticeConfig(dimension=2, alpha=1.0, dims=(4, 6))
    delta = delta_state(cfg)
    assert delta.values.shape == (4, 6)
    assert total_mass(delta) == 1.0

    bloch = bloch_state(cfg, 1, real=True)
    np.testing.assert_allclose(bloch.values[:, 0], [1.0, 0.0, -1.0, 0.0], atol=1e-15)
    np.testing.assert_allclose(bloch.values[1, :], 0.0, atol=1e-15)
    assert np.iscomplexobj(bloch_state(cfg, (1, 2)).values)
    with pytest.raises(DimensionMismatch):
        bloch_state(cfg, (1, 2, 3))
    with pytest.raises(DimensionMismatch):
        state_from_values(cfg, np.zeros(5))

def test_field_state_is_read_only_copy():
    cfg = ChainConfig(size=4, alpha=1.0)
    values = np.arange(4.0)
    state = FieldState(values, cfg)
    values[0] = 99.0
    assert state.values[0] == 0.0
    with pytest.raises(ValueError):
        state.values[1] = 5.0
    with pytest.raises(DomainError):
        FieldState(np.zeros(4), ChainConfig(size=None, alpha=1.0))

if __name__ == "__main__":
    sys.exit(pytest.main([__file__]))
