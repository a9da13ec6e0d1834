"""Forward-Euler solver and analytic oracle for dy/dt = -alpha*y + k."""

from __future__ import annotations

import math

import numpy as np

from ..numerics import StateVector
from .base import BoundarySpec, SolverOperator, scan_fault


def linear_ode_analytic(t, alpha: float, k: float, y0) -> np.ndarray | float:
    """Exact solution y(t) = k/alpha + (y0 - k/alpha) * exp(-alpha*t)."""
    if alpha == 0.0:
        raise ValueError("analytic form is singular at alpha = 0")
    t = np.asarray(t, dtype=float)
    y0 = np.asarray(y0, dtype=float)
    y_inf = k / alpha
    out = y_inf + (y0 - y_inf) * np.exp(-alpha * t)
    return float(out) if out.ndim == 0 else out


class LinearDecaySolver(SolverOperator):
    """Batched forward Euler: y <- y*(1 - alpha*dt) + k*dt per step.

    The state may hold any number of entries; each evolves independently
    (batch mode).  ``alpha`` and ``k`` may be scalars or arrays broadcast
    against the state.
    """

    boundary = BoundarySpec("none")

    def __init__(self, alpha, k, dt: float):
        alpha = np.asarray(alpha, dtype=float)
        k = np.asarray(k, dtype=float)
        if not (np.all(np.isfinite(alpha)) and np.all(np.isfinite(k))):
            raise ValueError("alpha and k must be finite")
        if not dt > 0:
            raise ValueError("dt must be positive")
        self.alpha = alpha
        self.k = k
        self.dt = float(dt)
        self._decay = 1.0 - alpha * dt
        self._source = k * dt

    def advance_values(self, values, n_steps):
        y = np.asarray(values, dtype=float)
        fault = None
        for step in range(1, n_steps + 1):
            y = y * self._decay + self._source
            fault = scan_fault(y, step)
            if fault is not None:
                break
        return y, {}, fault

    def step_factor(self, n_steps: int) -> float:
        """Closed-form multiplier (1 - alpha*dt)^n of the k=0 map."""
        return float(np.asarray(self._decay) ** n_steps)


def forward_euler_advance(y: StateVector, alpha, k, dt: float, n_steps: int):
    """Convenience wrapper returning a StepReport for a one-off advance."""
    return LinearDecaySolver(alpha, k, dt).advance(y, n_steps)


class LorenzRK4(SolverOperator):
    """Classical fixed-step RK4 for the Lorenz system.

    State layout: (x, y, z) triples; batches are (B, 3) rows internally
    and flat multiples of 3 at the StateVector surface.
    """

    boundary = BoundarySpec("none")

    def __init__(self, sigma: float = 10.0, rho: float = 28.0, beta_l: float = 8.0 / 3.0,
                 dt: float = 1e-3):
        for name, val in (("sigma", sigma), ("rho", rho), ("beta_l", beta_l)):
            if not math.isfinite(val):
                raise ValueError(f"{name} must be finite")
        if not dt > 0:
            raise ValueError("dt must be positive")
        self.sigma = float(sigma)
        self.rho = float(rho)
        self.beta_l = float(beta_l)
        self.dt = float(dt)

    def _rhs(self, s: np.ndarray) -> np.ndarray:
        x, y, z = s[..., 0], s[..., 1], s[..., 2]
        return np.stack(
            [self.sigma * (y - x), x * (self.rho - z) - y, x * y - self.beta_l * z],
            axis=-1,
        )

    def advance_values(self, values, n_steps):
        flat = np.asarray(values, dtype=float)
        if flat.size % 3:
            raise ValueError("Lorenz state length must be a multiple of 3")
        s = flat.reshape(-1, 3)
        h = self.dt
        fault = None
        for step in range(1, n_steps + 1):
            k1 = self._rhs(s)
            k2 = self._rhs(s + 0.5 * h * k1)
            k3 = self._rhs(s + 0.5 * h * k2)
            k4 = self._rhs(s + h * k3)
            s = s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            fault = scan_fault(s, step)
            if fault is not None:
                break
        return s.reshape(flat.shape), {}, fault
