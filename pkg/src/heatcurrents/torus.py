"""Flat torus [0, 2pi)^d: uniform grids, Laplacian eigenbasis, derivatives.

The real eigenbasis of -Laplacian is indexed by integer frequency vectors m
with a canonical sign representative (first nonzero component positive).
Each nonzero representative carries a cosine and a sine mode; the zero
vector carries the constant mode.  All modes are L2-normalized so that
integrating e_m * e_m' over the torus gives delta_{mm'}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "TorusGrid",
    "SpectralBasis",
    "build_grid",
    "build_spectrum",
    "quadrature",
    "spectral_derivative",
]

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class TorusGrid:
    """Uniform periodic grid with P points per axis on [0, 2pi)^d.

    P is constrained to powers of two (>= 4) so FFT sizes stay exact and
    grid refinement ladders nest.
    """

    dim: int
    points_per_axis: int

    def __post_init__(self):
        if not 1 <= self.dim <= 3:
            raise ValueError(f"torus dimension must be 1, 2 or 3, got {self.dim}")
        p = self.points_per_axis
        if p < 4 or (p & (p - 1)) != 0:
            raise ValueError(
                f"points_per_axis must be a power of two >= 4, got {p}"
            )

    @property
    def shape(self) -> tuple:
        return (self.points_per_axis,) * self.dim

    @property
    def n_points(self) -> int:
        return self.points_per_axis**self.dim

    @property
    def spacing(self) -> float:
        return TWO_PI / self.points_per_axis

    def axes(self) -> np.ndarray:
        return np.arange(self.points_per_axis) * self.spacing

    def coordinates(self) -> np.ndarray:
        """Grid coordinates, shape (*shape, dim)."""
        ax = self.axes()
        mesh = np.meshgrid(*([ax] * self.dim), indexing="ij")
        return np.stack(mesh, axis=-1)


def _canonical_representatives(dim: int, max_mode: int) -> np.ndarray:
    """Nonzero frequency vectors with first nonzero component positive.

    Sorted by (|m|^2, lexicographic), so the spectrum is enumerated from the
    bottom up and ties break deterministically.
    """
    rng = np.arange(-max_mode, max_mode + 1)
    grids = np.meshgrid(*([rng] * dim), indexing="ij")
    all_m = np.stack([g.ravel() for g in grids], axis=-1)
    keep = []
    for m in all_m:
        nz = m[m != 0]
        if nz.size == 0:
            continue
        if nz[0] > 0:
            keep.append(m)
    reps = np.array(keep, dtype=int)
    order = np.lexsort(tuple(reps[:, i] for i in reversed(range(dim))))
    reps = reps[order]
    order = np.argsort(np.sum(reps * reps, axis=1), kind="stable")
    return reps[order]


@dataclass(frozen=True)
class SpectralBasis:
    """Real orthonormal Laplacian eigenbasis truncated at |m_i| <= max_mode.

    Attributes
    ----------
    grid : TorusGrid
    max_mode : int
        Per-axis frequency cutoff M; the basis holds (2M+1)^d functions.
    frequencies : int array, shape (n_pairs, dim)
        Canonical representatives of the nonzero modes.
    eigenvalues : float array, shape (n_modes,)
        |m|^2 per basis function, constant mode first, then for each
        representative its cosine mode followed by its sine mode.
    values : float array, shape (n_modes, *grid.shape)
        Basis functions tabulated on the grid.
    """

    grid: TorusGrid
    max_mode: int
    frequencies: np.ndarray
    eigenvalues: np.ndarray
    values: np.ndarray

    @property
    def n_modes(self) -> int:
        return self.eigenvalues.shape[0]

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Tabulate all basis functions at arbitrary points (..., dim)."""
        points = np.asarray(points, dtype=float)
        if points.shape[-1] != self.grid.dim:
            raise ValueError(
                f"points have dimension {points.shape[-1]}, grid is {self.grid.dim}-d"
            )
        norm = TWO_PI ** (-0.5 * self.grid.dim)
        out = np.empty((self.n_modes,) + points.shape[:-1])
        out[0] = norm
        phases = np.tensordot(self.frequencies.astype(float), points, axes=(1, -1))
        out[1::2] = np.sqrt(2.0) * norm * np.cos(phases)
        out[2::2] = np.sqrt(2.0) * norm * np.sin(phases)
        return out


def build_grid(dim: int, points_per_axis: int) -> TorusGrid:
    return TorusGrid(dim=dim, points_per_axis=points_per_axis)


def build_spectrum(dim: int, points_per_axis: int, max_mode: int) -> SpectralBasis:
    """Tabulated eigenbasis; requires points_per_axis > 2*max_mode.

    The strict inequality keeps every retained mode below the grid Nyquist
    frequency, so tabulated modes stay orthonormal under the grid quadrature
    and FFT derivatives of basis functions are exact.
    """
    grid = TorusGrid(dim=dim, points_per_axis=points_per_axis)
    if max_mode < 0:
        raise ValueError(f"max_mode must be >= 0, got {max_mode}")
    if grid.points_per_axis <= 2 * max_mode:
        raise ValueError(
            f"aliasing: points_per_axis={grid.points_per_axis} must exceed "
            f"2*max_mode={2 * max_mode}"
        )
    if max_mode == 0:
        reps = np.zeros((0, grid.dim), dtype=int)
    else:
        reps = _canonical_representatives(grid.dim, max_mode)
    n_modes = 1 + 2 * reps.shape[0]

    eigs = np.empty(n_modes)
    eigs[0] = 0.0
    pair_eigs = np.sum(reps * reps, axis=1).astype(float)
    eigs[1::2] = pair_eigs
    eigs[2::2] = pair_eigs

    norm = TWO_PI ** (-0.5 * grid.dim)
    coords = grid.coordinates()
    values = np.empty((n_modes,) + grid.shape)
    values[0] = norm
    if reps.shape[0] > 0:
        phases = np.tensordot(reps.astype(float), coords, axes=(1, -1))
        values[1::2] = np.sqrt(2.0) * norm * np.cos(phases)
        values[2::2] = np.sqrt(2.0) * norm * np.sin(phases)

    return SpectralBasis(
        grid=grid,
        max_mode=max_mode,
        frequencies=reps,
        eigenvalues=eigs,
        values=values,
    )


def quadrature(grid: TorusGrid, field: np.ndarray) -> np.ndarray:
    """Integrate over the torus: grid mean times volume (2pi)^d.

    `field` has shape (*grid.shape, ...); trailing axes pass through.
    Exact for trigonometric polynomials below the Nyquist frequency.
    """
    field = np.asarray(field)
    if field.shape[: grid.dim] != grid.shape:
        raise ValueError(
            f"field leading shape {field.shape[:grid.dim]} does not match "
            f"grid shape {grid.shape}"
        )
    axes = tuple(range(grid.dim))
    return field.mean(axis=axes) * (TWO_PI**grid.dim)


def spectral_derivative(grid: TorusGrid, field: np.ndarray) -> np.ndarray:
    """Spectral partial derivatives: (*shape, ...) -> (dim, *shape, ...).

    Real FFT along each grid axis with multiplier i*k; the unmatched Nyquist
    frequency (even P) is zeroed, the standard choice that keeps derivatives
    of real fields real and exact below the cutoff.
    """
    field = np.asarray(field, dtype=float)
    if field.shape[: grid.dim] != grid.shape:
        raise ValueError(
            f"field leading shape {field.shape[:grid.dim]} does not match "
            f"grid shape {grid.shape}"
        )
    p = grid.points_per_axis
    freqs = np.fft.fftfreq(p, d=1.0 / p)  # integer wavenumbers
    if p % 2 == 0:
        freqs[p // 2] = 0.0
    out = np.empty((grid.dim,) + field.shape)
    for axis in range(grid.dim):
        spec = np.fft.fft(field, axis=axis)
        shape = [1] * field.ndim
        shape[axis] = p
        spec *= 1j * freqs.reshape(shape)
        out[axis] = np.real(np.fft.ifft(spec, axis=axis))
    return out
