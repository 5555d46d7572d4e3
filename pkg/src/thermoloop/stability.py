"""Empirical probes of trajectory bounds and Lipschitz-type stability.

The probes run a base configuration against perturbed copies (initial data
shifted along a fixed direction, or control height scaled) and report the
response-to-perturbation ratios.  Near-constant ratios across perturbation
decades are the numerical signature of Lipschitz stability with respect to
data and control.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .experiments import (ExperimentConfig, FieldSpec, FieldSum, run_experiment,
                          scale_field)
from .linalg import CsrMatrix
from .stepper import RunOutput


@dataclass(frozen=True)
class TrajectoryNorms:
    """Discrete analogs of the trajectory-space norm components."""

    sup_l2_y: float    # max over time nodes of ||y||_L2
    l2_grad_y: float   # (tau * sum_m y_m^T K y_m)^(1/2), right-endpoint rule
    sup_kappa: float   # max over devices and nodes of |kappa|
    l2_dkappa: float   # root-sum-square of backward-difference kappa rates


def trajectory_norms(out: RunOutput, mass: CsrMatrix, stiffness: CsrMatrix,
                     tau: float) -> TrajectoryNorms:
    """Norms of a completed run; requires a recorded trajectory."""
    if out.trajectory_y is None:
        raise ValueError("run output has no recorded trajectory "
                         "(pass record_trajectory=True)")
    Y = out.trajectory_y
    quad_mass = np.einsum("mn,nm->m", Y, mass.dot(Y.T))
    quad_stiff = np.einsum("mn,nm->m", Y, stiffness.dot(Y.T))
    kappas = out.trajectory_kappa
    if kappas.size:
        sup_kappa = float(np.max(np.abs(kappas)))
        dk = np.diff(kappas, axis=0) / tau
        l2_dkappa = float(np.sqrt(tau * np.sum(dk ** 2)))
    else:
        sup_kappa = 0.0
        l2_dkappa = 0.0
    return TrajectoryNorms(
        sup_l2_y=float(np.sqrt(np.max(np.maximum(quad_mass, 0.0)))),
        l2_grad_y=float(np.sqrt(tau * np.sum(np.maximum(quad_stiff[1:], 0.0)))),
        sup_kappa=sup_kappa,
        l2_dkappa=l2_dkappa)


@dataclass(frozen=True)
class StabilityReport:
    """Responses of perturbed runs, aligned with strictly decreasing deltas.

    ``responses`` holds the headline scalar (sup-in-time L2 of the field
    difference plus per-device sup of the signal difference); the full
    trajectory-norm components of each difference are carried alongside in
    ``difference_norms``.
    """

    kind: str                        # "initial_data" or "control_height"
    deltas: tuple[float, ...]
    responses: tuple[float, ...]
    ratios: tuple[float, ...]        # response / delta, nan where delta == 0
    spread: float                    # max/min of the positive-delta ratios
    difference_norms: tuple[TrajectoryNorms, ...] = ()

    def __post_init__(self):
        if not (len(self.deltas) == len(self.responses) == len(self.ratios)):
            raise ValueError("report lists must be aligned")
        if self.difference_norms and len(self.difference_norms) != len(self.deltas):
            raise ValueError("report lists must be aligned")
        if any(b >= a for a, b in zip(self.deltas, self.deltas[1:])):
            raise ValueError("deltas must be strictly decreasing")


def _check_deltas(deltas) -> tuple[float, ...]:
    deltas = tuple(float(d) for d in deltas)
    if any(d < 0 for d in deltas):
        raise ValueError("perturbation sizes must be nonnegative")
    if any(b >= a for a, b in zip(deltas, deltas[1:])):
        raise ValueError("perturbation sizes must be strictly decreasing")
    positive = [d for d in deltas if d > 0]
    if len(positive) < 3 or positive[0] / positive[-1] < 100.0 * (1.0 - 1e-12):
        raise ValueError("need at least 3 positive perturbation sizes spanning "
                         ">= 2 decades (zeros may be appended as determinism checks)")
    return deltas


def response_norm(base: RunOutput, perturbed: RunOutput, mass: CsrMatrix) -> float:
    """sup-in-time L2 distance of the fields plus per-device sup distance of kappa."""
    dY = perturbed.trajectory_y - base.trajectory_y
    quad = np.einsum("mn,nm->m", dY, mass.dot(dY.T))
    resp = float(np.sqrt(np.max(np.maximum(quad, 0.0))))
    dk = perturbed.trajectory_kappa - base.trajectory_kappa
    if dk.size:
        resp += float(np.sum(np.max(np.abs(dk), axis=0)))
    return resp


def _spread(ratios: list[float]) -> float:
    if not ratios or max(ratios) == 0.0:
        return 1.0  # all responses vanish: perfectly consistent
    positive = [r for r in ratios if r > 0]
    if len(positive) < len(ratios):
        return float("inf")
    return max(positive) / min(positive)


def _difference_norms(base: RunOutput, perturbed: RunOutput, mass: CsrMatrix,
                      stiffness: CsrMatrix, tau: float) -> TrajectoryNorms:
    diff = RunOutput(final_state=perturbed.final_state,
                     trajectory_y=perturbed.trajectory_y - base.trajectory_y,
                     trajectory_kappa=perturbed.trajectory_kappa - base.trajectory_kappa)
    return trajectory_norms(diff, mass, stiffness, tau)


def _probe(base: ExperimentConfig, perturb, deltas, kind: str) -> StabilityReport:
    deltas = _check_deltas(deltas)
    from .fem import assemble_mass, assemble_stiffness
    from .mesh import build_mesh
    mesh = build_mesh(base.scheme.n_div)
    mass = assemble_mass(mesh)
    stiffness = assemble_stiffness(mesh)

    base_out = run_experiment(base, record_trajectory=True)
    responses = []
    ratios = []
    norms = []
    for d in deltas:
        # delta 0 reruns the base configuration unchanged: a determinism check
        cfg = base if d == 0.0 else perturb(d)
        out = run_experiment(cfg, record_trajectory=True)
        r = response_norm(base_out, out, mass)
        responses.append(r)
        ratios.append(r / d if d > 0 else float("nan"))
        norms.append(_difference_norms(base_out, out, mass, stiffness, base.tau))
    spread = _spread([r for d, r in zip(deltas, ratios) if d > 0])
    return StabilityReport(kind=kind, deltas=deltas, responses=tuple(responses),
                           ratios=tuple(ratios), spread=spread,
                           difference_norms=tuple(norms))


def probe_data_stability(base: ExperimentConfig, direction: FieldSpec,
                         deltas) -> StabilityReport:
    """Perturb the initial state along ``direction`` scaled by each delta."""

    def perturb(d: float) -> ExperimentConfig:
        return replace(base, y0=FieldSum((base.y0, scale_field(direction, d))))

    return _probe(base, perturb, deltas, kind="initial_data")


def probe_control_stability(base: ExperimentConfig, deltas) -> StabilityReport:
    """Scale the control-device height by (1 + delta) for each delta."""

    def perturb(d: float) -> ExperimentConfig:
        return replace(base, C_g=base.C_g * (1.0 + d))

    return _probe(base, perturb, deltas, kind="control_height")
