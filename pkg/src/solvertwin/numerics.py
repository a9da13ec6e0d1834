"""Grids, state fields, norms, quadrature, and Fourier spectral primitives.

Everything here is a pure function on immutable inputs; the solvers and
training losses are built on top of these.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Grid1D:
    """Uniform 1D grid.

    Periodic grids hold ``n_points`` distinct samples (no duplicated
    endpoint), so ``dx = (x_max - x_min) / n_points``.  Non-periodic grids
    include both endpoints and ``dx = (x_max - x_min) / (n_points - 1)``.
    """

    x_min: float
    x_max: float
    n_points: int
    periodic: bool = False

    def __post_init__(self):
        if self.n_points < 2:
            raise ValueError(f"n_points must be >= 2, got {self.n_points}")
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def dx(self) -> float:
        if self.periodic:
            return self.length / self.n_points
        return self.length / (self.n_points - 1)

    @property
    def points(self) -> np.ndarray:
        if self.periodic:
            return self.x_min + self.dx * np.arange(self.n_points)
        return np.linspace(self.x_min, self.x_max, self.n_points)

    @property
    def quadrature_weight(self) -> float:
        return self.dx


@dataclass(frozen=True)
class Grid2D:
    """Uniform cell-centered 2D grid (finite-volume layout).

    Cell centers lie strictly inside the domain at
    ``x_i = x_min + (i + 1/2) hx``, ``y_j = y_min + (j + 1/2) hy``.
    Values are stored flattened in row-major (y-outer, x-inner) order.
    """

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    n_x: int
    n_y: int

    def __post_init__(self):
        if self.n_x < 1 or self.n_y < 1:
            raise ValueError("n_x and n_y must be positive")
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise ValueError("degenerate domain")

    @property
    def hx(self) -> float:
        return (self.x_max - self.x_min) / self.n_x

    @property
    def hy(self) -> float:
        return (self.y_max - self.y_min) / self.n_y

    @property
    def cell_area(self) -> float:
        return self.hx * self.hy

    @property
    def n_cells(self) -> int:
        return self.n_x * self.n_y

    @property
    def cell_centers(self) -> tuple[np.ndarray, np.ndarray]:
        """Meshgrid arrays (X, Y) of shape (n_y, n_x)."""
        x = self.x_min + self.hx * (np.arange(self.n_x) + 0.5)
        y = self.y_min + self.hy * (np.arange(self.n_y) + 0.5)
        return np.meshgrid(x, y, indexing="xy")

    @property
    def quadrature_weight(self) -> float:
        return self.cell_area


Grid = Grid1D | Grid2D


def _first_nonfinite(values: np.ndarray) -> int | None:
    bad = ~np.isfinite(values)
    if bad.any():
        return int(np.argmax(bad))
    return None


@dataclass(frozen=True)
class StateVector:
    """Flat discretized field plus grid metadata.

    ``grid=None`` marks an ungridded state (a scalar ODE value, the three
    Lorenz components): its quadrature weight is 1 and any length is
    allowed.  Values are stored read-only; solvers never mutate their
    input state.
    """

    values: np.ndarray
    grid: Grid | None = None
    field_count: int = 1

    def __post_init__(self):
        v = np.array(self.values, dtype=float).ravel()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if self.field_count < 1:
            raise ValueError("field_count must be positive")
        if self.grid is not None:
            n = self.grid.n_points if isinstance(self.grid, Grid1D) else self.grid.n_cells
            if v.size != self.field_count * n:
                raise ValueError(
                    f"state length {v.size} != field_count {self.field_count} x grid size {n}"
                )

    @property
    def quadrature_weight(self) -> float:
        return 1.0 if self.grid is None else self.grid.quadrature_weight

    def with_values(self, values: np.ndarray) -> "StateVector":
        return StateVector(values, self.grid, self.field_count)

    def check_finite(self) -> None:
        idx = _first_nonfinite(self.values)
        if idx is not None:
            raise ValueError(f"non-finite state entry at flat index {idx}")


def discrete_l2_norm(state: StateVector) -> float:
    """Quadrature-weighted discrete L2 norm: sqrt(w * sum(v_i^2)).

    Used for diagnostics and reported errors.  Training losses use the
    plain mean of squared entries instead (see ``mean_squared``).
    """
    state.check_finite()
    return float(np.sqrt(state.quadrature_weight * np.sum(state.values**2)))


def mean_squared(values: np.ndarray) -> float:
    """Plain mean of squared entries - the training-loss convention."""
    return float(np.mean(np.asarray(values) ** 2))


def relative_l2_error(a: StateVector, b: StateVector) -> float:
    """||a - b|| / ||b|| with ``b`` the reference.

    Falls back to the absolute error ||a - b|| when ||b|| is zero.
    """
    if a.grid != b.grid or a.field_count != b.field_count:
        raise ValueError("states live on different grids")
    diff = discrete_l2_norm(a.with_values(a.values - b.values))
    ref = discrete_l2_norm(b)
    if ref == 0.0:
        return diff
    return diff / ref


def wavenumbers(grid: Grid1D) -> np.ndarray:
    """Angular wavenumbers 2*pi*j/L for the rfft half-spectrum."""
    if not grid.periodic:
        raise ValueError("spectral operations require a periodic grid")
    return 2.0 * np.pi * np.fft.rfftfreq(grid.n_points, d=grid.dx)


def _apply_multiplier(values: np.ndarray, grid: Grid1D, mult: np.ndarray) -> np.ndarray:
    coeff = np.fft.rfft(values, axis=-1)
    return np.fft.irfft(coeff * mult, n=grid.n_points, axis=-1)


def spectral_second_derivative(state: StateVector, grid: Grid1D | None = None) -> StateVector:
    """d2/dx2 via multiplication by -k^2 in Fourier space.

    Exact (to round-off) for trigonometric polynomials resolved by the grid.
    """
    g = grid if grid is not None else state.grid
    if not isinstance(g, Grid1D) or not g.periodic:
        raise ValueError("spectral derivative requires a periodic Grid1D")
    k = wavenumbers(g)
    out = _apply_multiplier(state.values, g, -(k**2))
    return StateVector(out, g)


def spectral_fourth_derivative(state: StateVector, grid: Grid1D | None = None) -> StateVector:
    """d4/dx4 via multiplication by +k^4 in Fourier space."""
    g = grid if grid is not None else state.grid
    if not isinstance(g, Grid1D) or not g.periodic:
        raise ValueError("spectral derivative requires a periodic Grid1D")
    k = wavenumbers(g)
    out = _apply_multiplier(state.values, g, k**4)
    return StateVector(out, g)


def first_derivative_multiplier(grid: Grid1D) -> np.ndarray:
    """i*k for the rfft half-spectrum, Nyquist mode zeroed for even sizes.

    The odd-derivative Nyquist mode is ambiguous on an even grid; zeroing
    it is the standard symmetric choice.
    """
    k = wavenumbers(grid)
    mult = 1j * k
    if grid.n_points % 2 == 0:
        mult = mult.copy()
        mult[-1] = 0.0
    return mult


def resample_periodic(values: np.ndarray, n_to: int) -> np.ndarray:
    """Trigonometric resampling of periodic samples along the last axis.

    Exact for band-limited data when upsampling; downsampling projects
    onto the coarse grid's resolved modes.  Nyquist bins are halved when
    they become interior modes and symmetrized when a mode lands on the
    target Nyquist.
    """
    values = np.asarray(values, dtype=float)
    n_from = values.shape[-1]
    if n_to == n_from:
        return values.copy()
    coeff = np.fft.rfft(values, axis=-1)
    m_from, m_to = n_from // 2, n_to // 2
    out = np.zeros(values.shape[:-1] + (m_to + 1,), dtype=complex)
    keep = min(m_from, m_to)
    out[..., : keep + 1] = coeff[..., : keep + 1]
    if n_to > n_from and n_from % 2 == 0:
        # source Nyquist becomes an interior +k mode: carry half its weight
        out[..., m_from] *= 0.5
    if n_to < n_from and n_to % 2 == 0:
        # target Nyquist must be real (pure cosine): fold +k and -k parts
        out[..., m_to] = 2.0 * out[..., m_to].real
    return np.fft.irfft(out, n=n_to, axis=-1) * (n_to / n_from)


def cell_integral_2d(values: np.ndarray, grid: Grid2D) -> float:
    """Integrate cell-center values over the domain: sum(v) * cell_area.

    This is the midpoint rule on the FVM lattice; for periodic integrands
    it coincides with the trapezoid rule.  Second-order accurate.
    """
    v = np.asarray(values, dtype=float)
    if v.size != grid.n_cells:
        raise ValueError(f"expected {grid.n_cells} values, got {v.size}")
    idx = _first_nonfinite(v.ravel())
    if idx is not None:
        raise ValueError(f"non-finite value at flat index {idx}")
    return float(np.sum(v) * grid.cell_area)
