"""Grid, eigenbasis normalization, quadrature exactness, and the spectral
derivative against finite-difference oracles."""

import numpy as np
import pytest

from heatcurrents.torus import (
    TorusGrid,
    build_grid,
    build_spectrum,
    quadrature,
    spectral_derivative,
)

TWO_PI = 2.0 * np.pi


def test_grid_validation():
    with pytest.raises(ValueError):
        build_grid(0, 8)
    with pytest.raises(ValueError):
        build_grid(4, 8)
    with pytest.raises(ValueError):
        build_grid(1, 12)  # not a power of two
    with pytest.raises(ValueError):
        build_grid(1, 2)


def test_grid_spacing_and_coordinates():
    g = build_grid(2, 8)
    assert g.n_points == 64
    assert g.spacing == pytest.approx(TWO_PI / 8)
    coords = g.coordinates()
    assert coords.shape == (8, 8, 2)
    assert coords[3, 5, 0] == pytest.approx(3 * g.spacing)
    assert coords[3, 5, 1] == pytest.approx(5 * g.spacing)


@pytest.mark.parametrize(
    "d,m,expected",
    [(1, 0, 1), (1, 3, 7), (2, 1, 9), (3, 1, 27), (1, 16, 33)],
)
def test_mode_count(d, m, expected):
    basis = build_spectrum(d, 64 if m > 15 else 32, m)
    assert basis.n_modes == expected


def test_eigenvalue_ladder_d1():
    basis = build_spectrum(1, 16, 3)
    assert list(basis.eigenvalues) == [0.0, 1.0, 1.0, 4.0, 4.0, 9.0, 9.0]


def test_aliasing_rejected():
    with pytest.raises(ValueError, match="aliasing"):
        build_spectrum(1, 64, 32)
    build_spectrum(1, 64, 31)  # strict inequality boundary


def test_quadrature_volume_and_orthonormality():
    basis = build_spectrum(1, 32, 5)
    grid = basis.grid
    assert quadrature(grid, np.ones(grid.shape)) == pytest.approx(TWO_PI)
    gram = np.array(
        [
            [quadrature(grid, basis.values[i] * basis.values[j]) for j in range(basis.n_modes)]
            for i in range(basis.n_modes)
        ]
    )
    assert np.max(np.abs(gram - np.eye(basis.n_modes))) < 1e-10


def test_quadrature_orthonormality_d2():
    basis = build_spectrum(2, 8, 1)
    grid = basis.grid
    for i in range(basis.n_modes):
        for j in range(basis.n_modes):
            val = quadrature(grid, basis.values[i] * basis.values[j])
            assert abs(val - (1.0 if i == j else 0.0)) < 1e-10


def test_rayleigh_quotients_match_eigenvalues():
    # second spectral derivative oracle: -f'' / f integrates to lambda
    basis = build_spectrum(1, 32, 4)
    grid = basis.grid
    for i in range(basis.n_modes):
        f = basis.values[i]
        d2 = spectral_derivative(grid, spectral_derivative(grid, f)[0])[0]
        lam = quadrature(grid, -d2 * f)  # modes are L2-normalized
        assert lam == pytest.approx(basis.eigenvalues[i], abs=1e-9)


def test_spectral_derivative_sin3x():
    grid = build_grid(1, 64)
    x = grid.axes()
    d = spectral_derivative(grid, np.sin(3 * x))[0]
    assert np.max(np.abs(d - 3 * np.cos(3 * x))) < 1e-12
    # central finite-difference oracle, O(h^2) agreement
    h = grid.spacing
    fd = (np.roll(np.sin(3 * x), -1) - np.roll(np.sin(3 * x), 1)) / (2 * h)
    assert np.max(np.abs(d - fd)) < 3**3 * h**2


def test_spectral_derivative_constant_and_linearity():
    grid = build_grid(1, 16)
    assert np.max(np.abs(spectral_derivative(grid, np.ones(16)))) == 0.0
    rng = np.random.default_rng(7)
    basis = build_spectrum(1, 16, 5)
    f = np.tensordot(rng.normal(size=basis.n_modes), basis.values, axes=(0, 0))
    g = np.tensordot(rng.normal(size=basis.n_modes), basis.values, axes=(0, 0))
    lhs = spectral_derivative(grid, f + g)
    rhs = spectral_derivative(grid, f) + spectral_derivative(grid, g)
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_mixed_partials_commute_d2():
    # d o d = 0 on scalars: antisymmetrized second derivative vanishes
    basis = build_spectrum(2, 16, 3)
    grid = basis.grid
    rng = np.random.default_rng(8)
    f = np.tensordot(rng.normal(size=basis.n_modes), basis.values, axes=(0, 0))
    first = spectral_derivative(grid, f)
    dxy = spectral_derivative(grid, first[0])[1]
    dyx = spectral_derivative(grid, first[1])[0]
    assert np.max(np.abs(dxy - dyx)) < 1e-10


def test_parseval():
    basis = build_spectrum(1, 64, 10)
    grid = basis.grid
    rng = np.random.default_rng(9)
    c = rng.normal(size=basis.n_modes)
    f = np.tensordot(c, basis.values, axes=(0, 0))
    assert quadrature(grid, f * f) == pytest.approx(np.sum(c * c), abs=1e-8)


def test_evaluate_matches_tabulated():
    basis = build_spectrum(2, 8, 2)
    pts = basis.grid.coordinates().reshape(-1, 2)
    vals = basis.evaluate(pts)
    assert np.max(np.abs(vals - basis.values.reshape(basis.n_modes, -1))) < 1e-12


def test_evaluate_rejects_wrong_dimension():
    basis = build_spectrum(2, 8, 1)
    with pytest.raises(ValueError):
        basis.evaluate(np.zeros((4, 3)))


def test_derivative_annihilates_nyquist():
    # even-P grids carry an unmatched cos(Px/2) mode; its derivative is set to 0
    grid = build_grid(1, 8)
    x = grid.axes()
    nyq = np.cos(4 * x)
    assert np.max(np.abs(spectral_derivative(grid, nyq)[0])) < 1e-12
