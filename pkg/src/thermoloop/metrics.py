"""Error functionals and trajectory recorders."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fem import NodalField, l2_norm, h1_seminorm
from .linalg import CsrMatrix


def error_l2(M: CsrMatrix, y: NodalField, ystar: NodalField) -> float:
    """L2 distance to the reference state: sqrt((y-y*)^T M (y-y*))."""
    if y.mesh_key != M.tag or ystar.mesh_key != M.tag:
        raise ValueError("fields must live on the mass matrix's mesh")
    return l2_norm(M, NodalField(y.values - ystar.values, y.mesh_key))


def error_h1semi(K: CsrMatrix, y: NodalField, ystar: NodalField) -> float:
    """Gradient distance to the reference state: sqrt((y-y*)^T K (y-y*))."""
    if y.mesh_key != K.tag or ystar.mesh_key != K.tag:
        raise ValueError("fields must live on the stiffness matrix's mesh")
    return h1_seminorm(K, NodalField(y.values - ystar.values, y.mesh_key))


@dataclass(frozen=True)
class ErrorSeries:
    """Per-time-node diagnostics of a run."""

    times: np.ndarray         # (M+1,)
    e_y: np.ndarray           # (M+1,) L2 error
    e_grad: np.ndarray        # (M+1,) gradient error
    kappa_traces: np.ndarray  # (J, M+1)
    mass_trace: np.ndarray    # (M+1,) discrete integral of y

    def __post_init__(self):
        n = len(self.times)
        if not (len(self.e_y) == len(self.e_grad) == len(self.mass_trace) == n
                and self.kappa_traces.shape[1:] == (n,)):
            raise ValueError("series lengths disagree")
        for arr in (self.times, self.e_y, self.e_grad, self.kappa_traces, self.mass_trace):
            if not np.isfinite(arr).all():
                raise ValueError("series contains non-finite entries")
        if np.any(self.e_y < 0) or np.any(self.e_grad < 0):
            raise ValueError("error series must be nonnegative")

    @property
    def n_nodes(self) -> int:
        return len(self.times)


class ErrorRecorder:
    """Observer collecting E_y, E_grad, kappa and mass at every time node."""

    def __init__(self, mass: CsrMatrix, stiffness: CsrMatrix, ystar: NodalField):
        self._mass = mass
        self._stiffness = stiffness
        self._ystar = ystar
        self._weights = mass.dot(np.ones(mass.n_cols))  # row sums; mass of y is w . y
        self._times: list[float] = []
        self._e_y: list[float] = []
        self._e_grad: list[float] = []
        self._kappa: list[np.ndarray] = []
        self._mass_trace: list[float] = []

    def __call__(self, state) -> None:
        self._times.append(state.time)
        self._e_y.append(error_l2(self._mass, state.y, self._ystar))
        self._e_grad.append(error_h1semi(self._stiffness, state.y, self._ystar))
        self._kappa.append(np.array(state.kappa))
        self._mass_trace.append(float(self._weights @ state.y.values))

    def series(self) -> ErrorSeries:
        kappa = (np.array(self._kappa).T if self._kappa and len(self._kappa[0])
                 else np.zeros((0, len(self._times))))
        return ErrorSeries(times=np.array(self._times),
                           e_y=np.array(self._e_y),
                           e_grad=np.array(self._e_grad),
                           kappa_traces=kappa,
                           mass_trace=np.array(self._mass_trace))


class SnapshotRecorder:
    """Observer storing (step_index, field) pairs at a configurable cadence."""

    def __init__(self, every: int | None = None, steps=()):
        if every is not None and every < 1:
            raise ValueError("snapshot cadence must be >= 1")
        self.every = every
        self.steps = frozenset(int(s) for s in steps)
        self.snapshots: list[tuple[int, NodalField]] = []

    def __call__(self, state) -> None:
        m = state.step_index
        due = m in self.steps
        if self.every is not None:
            due = due or (m % self.every == 0)
        if due:
            self.snapshots.append((m, state.y))


class TrajectoryRecorder:
    """Observer keeping the full (y, kappa) history; memory-heavy on fine meshes."""

    def __init__(self):
        self._ys: list[np.ndarray] = []
        self._kappas: list[np.ndarray] = []

    def __call__(self, state) -> None:
        self._ys.append(np.array(state.y.values))
        self._kappas.append(np.array(state.kappa))

    def ys(self) -> np.ndarray:
        return np.array(self._ys)

    def kappas(self) -> np.ndarray:
        return np.array(self._kappas)
