"""Shared solver plumbing: boundary specs, step reports, fault signaling.

A solver operator is a black-box evolution map: it takes a state, applies
its boundary conditions and physical parameters, and advances a fixed
number of internal steps.  Operators are immutable after construction,
deterministic (identical inputs give bit-identical outputs), and never
mutate their input state.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..numerics import StateVector, _first_nonfinite


@dataclass(frozen=True)
class BoundarySpec:
    """Boundary condition kind plus Dirichlet values where applicable."""

    kind: str  # "dirichlet" | "periodic" | "noflux" | "none"
    values: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in ("dirichlet", "periodic", "noflux", "none"):
            raise ValueError(f"unknown boundary kind {self.kind!r}")
        if self.kind == "dirichlet" and len(self.values) != 2:
            raise ValueError("dirichlet boundaries need exactly two values")


@dataclass(frozen=True)
class StepReport:
    """Result of an advance call.

    ``fault_step`` is set iff a non-finite entry appeared, and records the
    1-based internal step index where it was first detected.
    """

    state: StateVector
    steps_taken: int
    flags: dict = field(default_factory=dict)
    fault_step: int | None = None

    @property
    def faulted(self) -> bool:
        return self.fault_step is not None


class SolverFault(RuntimeError):
    """Raised when a solver produced NaN/Inf or its linear solve failed."""

    def __init__(self, message: str, report: StepReport | None = None):
        super().__init__(message)
        self.report = report


def scan_fault(values: np.ndarray, step: int) -> int | None:
    """Return ``step`` if values contain a non-finite entry, else None."""
    return step if _first_nonfinite(np.asarray(values).ravel()) is not None else None


class SolverOperator:
    """Base class for bound evolution operators.

    Subclasses set ``grid``, ``boundary`` and ``dt`` at construction and
    implement ``advance_values(values, n_steps) -> (values, flags, fault)``
    on raw arrays; ``advance`` wraps that in StateVector/StepReport form.
    """

    grid = None
    boundary = BoundarySpec("none")
    dt: float = 0.0

    def advance_values(self, values: np.ndarray, n_steps: int):
        raise NotImplementedError

    def advance(self, state: StateVector, n_steps: int) -> StepReport:
        if n_steps < 1:
            raise ValueError("n_steps must be >= 1")
        out, flags, fault = self.advance_values(np.array(state.values), n_steps)
        return StepReport(
            state=state.with_values(out),
            steps_taken=n_steps,
            flags=flags,
            fault_step=fault,
        )

    def advance_or_raise(self, state: StateVector, n_steps: int) -> StateVector:
        report = self.advance(state, n_steps)
        if report.faulted:
            raise SolverFault(
                f"{type(self).__name__} produced a non-finite state at internal "
                f"step {report.fault_step}",
                report,
            )
        return report.state
