import sys
import math
from pathlib import Path

import numpy as np
import pytest

# Add project root to sys.path
sys.path.append(str(Path(__file__).parent.parent))

from src.chain1d import (
    assemble_matrix,
    asymptotic_element,
    beta_element,
    dispersion,
    elastic_potential,
    finite_element_periodized,
    finite_element_spectral,
    first_row_periodized,
    first_row_spectral,
    infinite_element,
    infinite_element_quadrature,
    infinite_elements,
    laurent_partial_sum,
    spectral_values,
)
from src.errors import DimensionMismatch, DomainError
from src.types import ChainConfig, Convention, Definiteness, FieldState

def chain(alpha, size=None, **kwargs):
    return ChainConfig(size=size, alpha=alpha, **kwargs)

@pytest.mark.parametrize(
    "alpha, expected",
    [
        (2.0, [2.0, -1.0, 0.0, 0.0]),
        (4.0, [6.0, -4.0, 1.0, 0.0]),
    ],
)
def test_infinite_element_integer_half_order(alpha, expected):
    assert [infinite_element(chain(alpha), p) for p in range(4)] == expected

def test_infinite_element_alpha_one():
    assert infinite_element(chain(1.0), 0) == pytest.approx(4 / math.pi, rel=1e-14)
    # f_p = -(4/pi) / (4p^2 - 1)
    for p in (1, 5, 40):
        assert infinite_element(chain(1.0), p) == pytest.approx(-4 / math.pi / (4 * p * p - 1), rel=1e-12)

def test_infinite_element_scales_with_omega_sq():
    assert infinite_element(chain(1.5, omega_sq=3.0), 2) == pytest.approx(3.0 * infinite_element(chain(1.5), 2))

def test_lattice_const_is_validated_metadata():
    assert first_row_periodized(chain(1.3, 8, lattice_const=0.25)).tolist() == first_row_periodized(chain(1.3, 8)).tolist()
    with pytest.raises(DomainError):
        chain(1.3, 8, lattice_const=0.0)

@pytest.mark.parametrize("alpha", [0.3, 1.0, 1.7])
def test_sign_structure_below_two(alpha):
    f = infinite_elements(chain(alpha), np.arange(0, 1001))
    assert f[0] > 0
    assert np.all(f[1:] < 0)

def test_beta_form_matches_closed_form():
    for alpha in (0.5, 1.5, 2.5, 3.7):
        cfg = chain(alpha)
        for p in (2, 7, 30, 300):
            assert beta_element(cfg, p) == pytest.approx(infinite_element(cfg, p), rel=1e-12)
    with pytest.raises(DomainError):
        beta_element(chain(3.0), 1)

@pytest.mark.parametrize("alpha, p", [(1.5, 3), (0.5, 10), (2.5, 4), (1.0, 0), (3.3, 7)])
def test_quadrature_matches_closed_form(alpha, p):
    cfg = chain(alpha)
    assert infinite_element_quadrature(cfg, p) == pytest.approx(infinite_element(cfg, p), rel=1e-10)

def test_quadrature_integer_order_and_parity():
    assert infinite_element_quadrature(chain(2.0), 1) == pytest.approx(-1.0, abs=1e-12)
    cfg = chain(0.8)
    assert infinite_element_quadrature(cfg, 5) == infinite_element_quadrature(cfg, -5)

def test_asymptotic_element():
    assert asymptotic_element(chain(1.0), 10) == pytest.approx(-1e-2 / math.pi, rel=1e-14)
    cfg = chain(0.5)
    assert infinite_element(cfg, 200) / asymptotic_element(cfg, 200) == pytest.approx(1.0, rel=1e-2)
    for alpha in (0.2, 1.0, 1.9):
        assert asymptotic_element(chain(alpha), 3) < 0

def test_asymptotic_element_errors():
    with pytest.raises(DomainError):
        asymptotic_element(chain(1.0), 0)
    with pytest.raises(DomainError):
        asymptotic_element(chain(2.0), 5)

def test_periodized_born_von_karman_ring():
    assert first_row_periodized(chain(2.0, 4)).tolist() == [2.0, -1.0, 0.0, -1.0]
    # alpha=4 on three sites: the binomial stencil wraps onto itself
    row = first_row_periodized(chain(4.0, 3))
    np.testing.assert_allclose(row, first_row_spectral(chain(4.0, 3)), atol=1e-12)

@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0])
@pytest.mark.parametrize("size", [4, 8, 16, 64])
def test_periodized_matches_spectral(alpha, size):
    cfg = chain(alpha, size)
    periodized = first_row_periodized(cfg)
    spectral = np.array([finite_element_spectral(cfg, p) for p in range(size)])
    scale = np.maximum(1.0, np.abs(spectral))
    assert np.all(np.abs(periodized - spectral) <= 1e-9 * scale)

def test_periodized_recovers_infinite_chain():
    # wrap contribution ~ 2 f_N ~ 2/(pi N^2)
    value = finite_element_periodized(chain(1.0, 2048), 3)
    assert abs(value - infinite_element(chain(1.0), 3)) < 1e-6

def test_spectral_examples():
    assert finite_element_spectral(chain(2.0, 4), 2) == pytest.approx(0.0, abs=1e-15)
    cfg = chain(1.3, 10)
    assert finite_element_spectral(cfg, 0) == pytest.approx(np.mean(spectral_values(cfg)), rel=1e-14)
    assert finite_element_spectral(cfg, 0) > 0
    assert abs(sum(finite_element_spectral(cfg, p) for p in range(10))) < 1e-12

def test_spectral_fft_branch_for_large_rings():
    cfg = chain(1.5, 8192)
    for p in (0, 1, 17, 4096):
        assert finite_element_spectral(cfg, p) == pytest.approx(finite_element_periodized(cfg, p), rel=1e-9, abs=1e-12)

def test_finite_row_symmetry_and_sum():
    for alpha in (0.7, 2.0, 3.1):
        cfg = chain(alpha, 12)
        row = first_row_spectral(cfg)
        np.testing.assert_allclose(row[1:], row[1:][::-1], atol=1e-14)
        assert abs(np.sum(row)) < 1e-12
        assert abs(np.sum(first_row_periodized(cfg))) < 1e-9

def test_spectral_values_single_zero():
    values = spectral_values(chain(0.9, 16))
    assert values[0] == 0.0
    assert np.all(values[1:] > 0)

@pytest.mark.parametrize("alpha, kappa, expected", [(1.3, 0.0, 0.0), (2.0, math.pi, 4.0), (1.0, math.pi, 2.0)])
def test_dispersion(alpha, kappa, expected):
    assert dispersion(chain(alpha), kappa) == pytest.approx(expected, abs=1e-14)

def test_dispersion_scales_with_omega_sq():
    assert dispersion(chain(1.0, omega_sq=2.5), math.pi) == pytest.approx(5.0)
    kappa = np.linspace(-math.pi, math.pi, 9)
    assert dispersion(chain(1.5), kappa).shape == (9,)

def test_laurent_partial_sums():
    for kappa in (0.3, 1.0, 2.9):
        assert laurent_partial_sum(2.0, kappa, 3) == pytest.approx(2 - 2 * math.cos(kappa), abs=1e-15)
    assert laurent_partial_sum(1.0, math.pi, 500) == pytest.approx(2.0, abs=2e-3)
    assert abs(laurent_partial_sum(1.0, 0.0, 1000)) < 1e-3
    with pytest.raises(DomainError):
        laurent_partial_sum(1.0, 0.0, -1)

def test_assemble_laplacian_convention():
    matrix = assemble_matrix(chain(2.0, 4))
    assert matrix.definiteness is Definiteness.NEG_SEMI_DEF
    assert (matrix.scale * matrix.first_row).tolist() == [-2.0, 1.0, 0.0, 1.0]
    np.testing.assert_allclose(matrix.row_sums(), 0.0, atol=1e-12)

def test_assemble_characteristic_convention_is_psd():
    for alpha in (0.5, 1.5, 3.0):
        matrix = assemble_matrix(chain(alpha, 9, mass=2.0), Convention.CHARACTERISTIC)
        assert matrix.definiteness is Definiteness.POS_SEMI_DEF
        assert np.all(matrix.eigenvalues() >= -1e-9)
        np.testing.assert_allclose(matrix.row_sums(), 0.0, atol=1e-9)

def test_assemble_infinite_chain_is_lazy():
    matrix = assemble_matrix(chain(1.0, mass=2.0))
    assert matrix.is_infinite
    assert matrix.element(3, 3) == pytest.approx(-2.0 * 4 / math.pi)
    assert matrix.element(0, 7) == matrix.element(7, 0)

def test_elastic_potential():
    cfg = chain(1.4, 16, mass=1.5, omega_sq=2.0)
    assert elastic_potential(cfg, np.full(16, 3.0)) == pytest.approx(0.0, abs=1e-12)

    ell = 3
    bloch = np.exp(2j * np.pi * ell * np.arange(16) / 16)
    expected = 0.5 * 1.5 * 16 * spectral_values(cfg)[ell]
    assert elastic_potential(cfg, bloch) == pytest.approx(expected, rel=1e-12)

    u = np.random.default_rng(11).normal(size=16)
    assert elastic_potential(cfg, FieldState(u, cfg)) >= 0

def test_elastic_potential_nearest_neighbour():
    cfg = chain(2.0, 10, mass=1.2, omega_sq=0.7)
    u = np.random.default_rng(5).normal(size=10)
    direct = 0.5 * 1.2 * 0.7 * np.sum((np.roll(u, -1) - u) ** 2)
    assert elastic_potential(cfg, u) == pytest.approx(direct, rel=1e-12)
    with pytest.raises(DimensionMismatch):
        elastic_potential(cfg, np.ones(9))

def test_config_and_site_errors():
    with pytest.raises(DomainError):
        ChainConfig(size=2, alpha=1.0)
    with pytest.raises(DomainError):
        ChainConfig(size=5, alpha=0.0)
    with pytest.raises(DomainError):
        finite_element_periodized(chain(1.0, 5), 5)
    with pytest.raises(DomainError):
        finite_element_periodized(chain(1.0), 0)

if __name__ == "__main__":
    sys.exit(pytest.main([__file__]))
