"""FTCS finite-difference solver for viscous Burgers with Dirichlet ends.

Update rule (forward-time, central-space):

    u_i <- u_i - dt/(2 dx) * u_i * (u_{i+1} - u_{i-1})
               + nu dt/dx^2 * (u_{i+1} - 2 u_i + u_{i-1})

Conditionally stable: u_max*dt/dx < 1 and nu*dt/dx^2 < 1/2 must both hold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..numerics import Grid1D
from .base import BoundarySpec, SolverOperator

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False


@dataclass(frozen=True)
class CflReport:
    """Both FTCS stability ratios; pass iff both strict bounds hold."""

    advective: float
    diffusive: float

    @property
    def ok(self) -> bool:
        return self.advective < 1.0 and self.diffusive < 0.5


def cfl_check(u_max: float, nu: float, dt: float, dx: float) -> CflReport:
    if not (dt > 0 and dx > 0):
        raise ValueError("dt and dx must be positive")
    return CflReport(advective=abs(u_max) * dt / dx, diffusive=nu * dt / dx**2)


def _ftcs_python(u, nu, c_adv, c_dif, n_steps):
    fault = -1
    out = u.copy()
    for step in range(1, n_steps + 1):
        interior = (
            out[:, 1:-1]
            - c_adv * out[:, 1:-1] * (out[:, 2:] - out[:, :-2])
            + (nu[:, None] * c_dif) * (out[:, 2:] - 2.0 * out[:, 1:-1] + out[:, :-2])
        )
        out[:, 1:-1] = interior
        if not np.isfinite(out).all():
            fault = step
            break
    return out, fault


if _HAVE_NUMBA:

    @njit(cache=True)
    def _ftcs_numba(u, nu, c_adv, c_dif, n_steps):  # pragma: no cover - jitted
        B, N = u.shape
        out = u.copy()
        new = u.copy()
        fault = -1
        for step in range(1, n_steps + 1):
            ok = True
            for b in range(B):
                cd = nu[b] * c_dif
                for i in range(1, N - 1):
                    v = (
                        out[b, i]
                        - c_adv * out[b, i] * (out[b, i + 1] - out[b, i - 1])
                        + cd * (out[b, i + 1] - 2.0 * out[b, i] + out[b, i - 1])
                    )
                    new[b, i] = v
                    ok = ok and np.isfinite(v)
            for b in range(B):
                for i in range(1, N - 1):
                    out[b, i] = new[b, i]
            if not ok:
                fault = step
                break
        return out, fault


def ftcs_burgers_steps(u: np.ndarray, nu, dt: float, dx: float, n_steps: int):
    """Advance batched trajectories (B, N) with per-row viscosities.

    Boundary columns are held fixed (Dirichlet).  Returns (values, fault)
    with fault = 1-based step index of the first non-finite entry or None.
    """
    u2 = np.atleast_2d(np.asarray(u, dtype=float)).copy()
    nu_arr = np.broadcast_to(np.asarray(nu, dtype=float).ravel(), (u2.shape[0],)).copy()
    c_adv = dt / (2.0 * dx)
    c_dif = dt / dx**2
    if _HAVE_NUMBA:
        out, fault = _ftcs_numba(u2, nu_arr, c_adv, c_dif, n_steps)
    else:
        out, fault = _ftcs_python(u2, nu_arr, c_adv, c_dif, n_steps)
    out = out.reshape(np.asarray(u).shape) if np.asarray(u).ndim == 1 else out
    return out, (None if fault < 0 else int(fault))


class BurgersFTCS(SolverOperator):
    """FTCS Burgers operator on a non-periodic grid with zero Dirichlet ends.

    ``cfl_mode`` controls what happens when an advance call violates the
    stability bounds for the incoming state: "raise" (default) or "allow"
    (proceed; margins still recorded in the report flags).
    """

    def __init__(self, nu: float, grid: Grid1D, dt: float,
                 boundary: BoundarySpec | None = None, cfl_mode: str = "raise"):
        if nu < 0:
            raise ValueError("nu must be nonnegative")
        if grid.periodic:
            raise ValueError("FTCS Burgers uses a non-periodic Dirichlet grid")
        if cfl_mode not in ("raise", "allow"):
            raise ValueError("cfl_mode must be 'raise' or 'allow'")
        self.nu = float(nu)
        self.grid = grid
        self.dt = float(dt)
        self.boundary = boundary if boundary is not None else BoundarySpec("dirichlet", (0.0, 0.0))
        self.cfl_mode = cfl_mode

    def advance_values(self, values, n_steps):
        u = np.asarray(values, dtype=float)
        report = cfl_check(float(np.max(np.abs(u), initial=0.0)), self.nu, self.dt, self.grid.dx)
        if not report.ok and self.cfl_mode == "raise":
            raise ValueError(
                f"CFL violation: advective {report.advective:.4g} (< 1 required), "
                f"diffusive {report.diffusive:.4g} (< 0.5 required); "
                "construct the operator with cfl_mode='allow' to override"
            )
        out, fault = ftcs_burgers_steps(u, self.nu, self.dt, self.grid.dx, n_steps)
        flags = {"cfl_advective": report.advective, "cfl_diffusive": report.diffusive}
        return out, flags, fault
