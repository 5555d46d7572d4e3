"""Implicit Euler stepping of the coupled field/thermostat system.

Each time step advances (y, kappa_1..kappa_J) with a fixed number of Picard
sweeps.  Within a sweep the measurement and thermostat update use the newest
field iterate (implicit coupling) while the reaction term is lagged one
iterate, so the linear system keeps the constant SPD matrix M + tau*D*K.
"""

from __future__ import annotations

import time as _time
from dataclasses import dataclass, field

import numpy as np

from .fem import NodalField
from .linalg import CsrMatrix, ConvergenceError, cg_solve
from .mesh import Mesh
from .metrics import ErrorRecorder, ErrorSeries, SnapshotRecorder, TrajectoryRecorder
from .model import (ReactionTerm, SwitchingFunction, ThermostatBank,
                    eval_reaction, eval_switch, thermostat_step)


@dataclass(frozen=True)
class SchemeParams:
    """Time discretization controls.

    ``n_steps`` is the step count M (tau = T / M), ``n_picard`` the fixed
    number of Picard sweeps per step.  ``explicit_measure`` switches the
    measurement to the previous accepted state instead of the current Picard
    iterate (a sensitivity-study variant, off by default).
    """

    n_steps: int
    tau: float
    n_picard: int = 3
    cg_tol: float = 1e-10
    cg_max_iters: int | None = None
    explicit_measure: bool = False

    def __post_init__(self):
        if self.n_steps < 1:
            raise ValueError(f"n_steps must be >= 1, got {self.n_steps}")
        if self.tau <= 0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        if self.n_picard < 1:
            raise ValueError(f"n_picard must be >= 1, got {self.n_picard}")


@dataclass(frozen=True)
class StepDiagnostics:
    cg_iters: int
    cg_residual: float
    picard_increment: float  # max-abs change of y over the last Picard sweep


@dataclass(frozen=True)
class SimState:
    """The unknowns (y, kappa) at one time node."""

    step_index: int
    time: float
    y: NodalField
    kappa: np.ndarray
    diagnostics: StepDiagnostics | None = None

    def __post_init__(self):
        kappa = np.atleast_1d(np.asarray(self.kappa, dtype=np.float64))
        if not np.isfinite(kappa).all():
            raise ValueError("kappa contains non-finite values")
        kappa.setflags(write=False)
        object.__setattr__(self, "kappa", kappa)


@dataclass(frozen=True)
class DiscreteProblem:
    """Assembled operators and model terms for a run; immutable and shareable.

    ``control_loads`` holds the rows G_j = M @ g_j (mass-weighted control
    profiles); ``measurement_profiles`` the raw nodal h_k profiles.
    """

    mesh: Mesh
    mass: CsrMatrix
    stiffness: CsrMatrix
    step_matrix: CsrMatrix
    tau: float
    control_loads: np.ndarray        # (J, n)
    measurement_profiles: np.ndarray  # (K, n)
    alpha: np.ndarray                # (J, K)
    switches: tuple[SwitchingFunction, ...]
    thermostats: ThermostatBank
    reaction: ReactionTerm
    ystar: NodalField

    @property
    def n_controls(self) -> int:
        return self.control_loads.shape[0]


@dataclass(frozen=True)
class RunOutput:
    """Everything collected from one run."""

    final_state: SimState
    series: ErrorSeries | None = None
    snapshots: tuple = ()
    trajectory_y: np.ndarray | None = None      # (M+1, n) when recorded
    trajectory_kappa: np.ndarray | None = None  # (M+1, J) when recorded
    config_echo: dict | None = None
    timings: dict = field(default_factory=dict)


def build_step_operator(M_mass: CsrMatrix, K_stiff: CsrMatrix, D: float, tau: float) -> CsrMatrix:
    """Implicit Euler step matrix A = M + tau * D * K (symmetric positive definite)."""
    if (M_mass.n_rows, M_mass.n_cols) != (K_stiff.n_rows, K_stiff.n_cols):
        raise ValueError("mass and stiffness dimensions disagree")
    if M_mass.tag != K_stiff.tag:
        raise ValueError("mass and stiffness come from different meshes")
    if D <= 0 or tau < 0:
        raise ValueError("require D > 0 and tau >= 0")
    return M_mass.scaled_add(tau * D, K_stiff)


def picard_step(state: SimState, problem: DiscreteProblem, params: SchemeParams) -> SimState:
    """Advance one implicit Euler step with a fixed number of Picard sweeps.

    Sweep p: measure m_k against the reference state, form demands
    W_j = sum_k alpha[j,k] w_k(m_k), update kappa implicitly, then solve
    (M + tau*D*K) y = M y_m + tau * (M f(y_lag) + sum_j kappa_j G_j) by CG
    warm-started from the previous iterate.
    """
    tau = problem.tau
    M = problem.mass
    y_m = state.y.values
    b0 = M.dot(y_m)
    kappa_m = state.kappa
    ystar = problem.ystar.values

    y_prev = y_m
    kappa_new = kappa_m
    sol = None
    for p in range(params.n_picard):
        measured = y_m if params.explicit_measure else y_prev
        weighted_dev = M.dot(measured - ystar)
        m_vals = problem.measurement_profiles @ weighted_dev
        w_vals = np.array([eval_switch(w, m) for w, m in zip(problem.switches, m_vals)])
        demands = problem.alpha @ w_vals if len(w_vals) else np.zeros(problem.n_controls)
        if problem.n_controls:
            kappa_new = thermostat_step(problem.thermostats.beta, kappa_m, demands, tau)

        rhs = b0 + tau * M.dot(eval_reaction(problem.reaction, y_prev))
        if problem.n_controls:
            rhs = rhs + tau * (problem.control_loads.T @ kappa_new)
        try:
            sol = cg_solve(problem.step_matrix, rhs, rel_tol=params.cg_tol,
                           max_iters=params.cg_max_iters, x0=y_prev)
        except ConvergenceError as err:
            raise ConvergenceError(
                f"linear solve failed at step {state.step_index + 1}, "
                f"Picard sweep {p + 1}: {err}", err.iters, err.residual) from err
        if not np.isfinite(sol.x).all():
            raise RuntimeError(
                f"non-finite iterate at step {state.step_index + 1}, Picard sweep {p + 1}; "
                f"kappa range [{kappa_new.min() if len(kappa_new) else 0}, "
                f"{kappa_new.max() if len(kappa_new) else 0}]")
        increment = float(np.max(np.abs(sol.x - y_prev))) if len(sol.x) else 0.0
        y_prev = sol.x

    diags = StepDiagnostics(cg_iters=sol.iters, cg_residual=sol.residual,
                            picard_increment=increment)
    # node time from the index, not by accumulation: exact for every step
    return SimState(step_index=state.step_index + 1,
                    time=(state.step_index + 1) * tau,
                    y=NodalField(y_prev, state.y.mesh_key),
                    kappa=kappa_new,
                    diagnostics=diags)


def run(initial: SimState, problem: DiscreteProblem, params: SchemeParams,
        observers=()) -> RunOutput:
    """Apply picard_step n_steps times, invoking every observer at each node.

    Observers are callables taking the current SimState; the initial state is
    observed too, so series have n_steps + 1 entries.  Recorder observers
    from the metrics module are recognized and folded into the RunOutput.
    """
    if params.n_steps < 1:
        raise ValueError("a run needs at least one step")
    t_start = _time.perf_counter()
    state = initial
    for obs in observers:
        obs(state)
    for _ in range(params.n_steps):
        state = picard_step(state, problem, params)
        for obs in observers:
            obs(state)
    elapsed = _time.perf_counter() - t_start

    series = None
    snapshots: tuple = ()
    traj_y = traj_kappa = None
    for obs in observers:
        if isinstance(obs, ErrorRecorder) and series is None:
            series = obs.series()
        elif isinstance(obs, SnapshotRecorder) and not snapshots:
            snapshots = tuple(obs.snapshots)
        elif isinstance(obs, TrajectoryRecorder) and traj_y is None:
            traj_y, traj_kappa = obs.ys(), obs.kappas()
    return RunOutput(final_state=state, series=series, snapshots=snapshots,
                     trajectory_y=traj_y, trajectory_kappa=traj_kappa,
                     timings={"stepping_s": elapsed})
