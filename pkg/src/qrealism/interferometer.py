"""Quantum-controlled interferometers built from gates on (path, controller).

Factor order is ``("path", "controller")``. The controller states |in>,
|out> are the computational states |0>, |1> of the controller qubit. Two
circuits are provided:

* ``"qdce"``: beam splitter, phase shifter, then a beam splitter applied
  only when the controller is |in>.
* ``"qcre"``: controlled beam splitter first, then the phase shifter and
  an unconditional beam splitter.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .qmath import DensityOperator, ProjectiveObservable, partial_trace
from .realism import discord, mutual_information, qcre_bound, realism

PATH = "path"
CONTROLLER = "controller"
FACTORS = ((PATH, 2), (CONTROLLER, 2))

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
IDENTITY = np.eye(2, dtype=complex)
KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)
IN, OUT = KET0, KET1

DEFAULT_RESOLUTION = 720


class CircuitKind(str, enum.Enum):
    QDCE = "qdce"
    QCRE = "qcre"


class Stage(str, enum.Enum):
    INPUT = "input"
    INSIDE = "inside"
    OUTPUT = "output"


@dataclass(frozen=True)
class CircuitParams:
    """Controller angle ``alpha`` in [0, pi] and phase shift ``theta`` in [0, 2 pi)."""

    alpha: float
    theta: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.alpha <= np.pi + 1e-12):
            raise ValueError(f"alpha must lie in [0, pi], got {self.alpha}")
        if not np.isfinite(self.theta):
            raise ValueError("theta must be finite")
        object.__setattr__(self, "theta", float(np.mod(self.theta, 2 * np.pi)))


class StageState(NamedTuple):
    stage: Stage
    state: DensityOperator
    ket: np.ndarray


def phase_shifter(theta: float) -> np.ndarray:
    return np.diag([np.exp(1j * theta), 1.0]).astype(complex)


def controlled_on_in(u: np.ndarray) -> np.ndarray:
    """Apply ``u`` to the path when the controller is |in>; 4x4 in (path, controller) order."""
    p_in = np.outer(IN, IN.conj())
    p_out = np.outer(OUT, OUT.conj())
    return np.kron(u, p_in) + np.kron(IDENTITY, p_out)


def on_path(u: np.ndarray) -> np.ndarray:
    return np.kron(u, IDENTITY)


def wave_particle_observables(theta: float, subsystem: str = PATH):
    """(W, P) observables: W eigenstates (e^{i theta}|0> +- |1>)/sqrt2, P eigenstates |0>, |1>."""
    e = np.exp(1j * theta)
    w = ProjectiveObservable.from_basis(
        subsystem, [np.array([e, 1]) / np.sqrt(2), np.array([e, -1]) / np.sqrt(2)], ("W+", "W-")
    )
    p = ProjectiveObservable.from_basis(subsystem, [KET0, KET1], ("P+", "P-"))
    return w, p


def _kind(kind) -> CircuitKind:
    return CircuitKind(kind.value if isinstance(kind, CircuitKind) else str(kind).lower())


def controller_ket(alpha: float) -> np.ndarray:
    return np.cos(alpha / 2) * IN + np.sin(alpha / 2) * OUT


def input_ket(params: CircuitParams) -> np.ndarray:
    return np.kron(KET0, controller_ket(params.alpha))


def input_state(params: CircuitParams) -> StageState:
    psi = input_ket(params)
    return StageState(Stage.INPUT, DensityOperator.from_ket(psi, FACTORS), psi)


def circuit_layers(kind, theta: float, beam_splitter: np.ndarray = HADAMARD) -> tuple[list, list]:
    """Gate layers before and after the inside stage, each in application order."""
    kind = _kind(kind)
    if kind is CircuitKind.QDCE:
        before = [on_path(beam_splitter), on_path(phase_shifter(theta))]
        after = [controlled_on_in(beam_splitter)]
    else:
        before = [controlled_on_in(beam_splitter), on_path(phase_shifter(theta))]
        after = [on_path(beam_splitter)]
    return before, after


def _product(layers) -> np.ndarray:
    u = np.eye(4, dtype=complex)
    for g in layers:
        u = g @ u
    return u


def circuit_unitary(kind, theta: float, beam_splitter: np.ndarray = HADAMARD) -> np.ndarray:
    """Interferometer unitary from the input stage to the output stage."""
    before, after = circuit_layers(kind, theta, beam_splitter)
    return _product(before + after)


def output_unitary(kind, beam_splitter: np.ndarray = HADAMARD) -> np.ndarray:
    """Gates from the inside stage to the output (independent of theta)."""
    return _product(circuit_layers(kind, 0.0, beam_splitter)[1])


def stage_ket(kind, params: CircuitParams, stage, beam_splitter: np.ndarray = HADAMARD) -> np.ndarray:
    stage = Stage(stage)
    psi = input_ket(params)
    if stage is Stage.INPUT:
        return psi
    before, after = circuit_layers(kind, params.theta, beam_splitter)
    psi = _product(before) @ psi
    if stage is Stage.OUTPUT:
        psi = _product(after) @ psi
    return psi


def stage_state(kind, params: CircuitParams, stage, beam_splitter: np.ndarray = HADAMARD) -> StageState:
    psi = stage_ket(kind, params, stage, beam_splitter)
    return StageState(Stage(stage), DensityOperator.from_ket(psi, FACTORS), psi)


def closed_form_inside(kind, params: CircuitParams) -> np.ndarray:
    """Inside-stage kets written directly, used as a check on the gate pipeline."""
    c, s = np.cos(params.alpha / 2), np.sin(params.alpha / 2)
    w_plus = np.array([np.exp(1j * params.theta), 1]) / np.sqrt(2)
    if _kind(kind) is CircuitKind.QDCE:
        return np.kron(w_plus, c * IN + s * OUT)
    return c * np.kron(w_plus, IN) + np.exp(1j * params.theta) * s * np.kron(KET0, OUT)


def closed_form_output(kind, params: CircuitParams) -> np.ndarray:
    c, s = np.cos(params.alpha / 2), np.sin(params.alpha / 2)
    th = params.theta
    wave = np.exp(1j * th / 2) * np.array([np.cos(th / 2), 1j * np.sin(th / 2)])
    if _kind(kind) is CircuitKind.QDCE:
        particle = np.array([np.exp(1j * th), 1]) / np.sqrt(2)
        return c * np.kron(wave, IN) + s * np.kron(particle, OUT)
    particle = np.array([1, 1]) / np.sqrt(2)
    return c * np.kron(wave, IN) + np.exp(1j * th) * s * np.kron(particle, OUT)


def p0_of_state(rho_out: np.ndarray) -> float:
    """Probability of finding the path qubit in |0> at the output."""
    proj = np.kron(np.outer(KET0, KET0), IDENTITY)
    return float(np.real(np.trace(proj @ rho_out)))


def detection_probability(kind, params: CircuitParams, beam_splitter: np.ndarray = HADAMARD) -> float:
    psi = stage_ket(kind, params, Stage.OUTPUT, beam_splitter)
    return p0_of_state(np.outer(psi, psi.conj()))


def fringe_from_inside(kind, rho_inside: np.ndarray, shifts: np.ndarray) -> np.ndarray:
    """p0 at the output when an extra phase ``shift`` is applied on the path inside.

    Both circuits apply the phase shifter directly before the inside stage,
    so shifting an inside state by ``d`` reproduces the circuit at ``theta + d``.
    """
    u_out = output_unitary(kind)
    # p0(d) = sum_{ij} M_ij(d) with phases only on path components
    phase = np.exp(1j * np.asarray(shifts))
    diag = np.stack([phase, np.ones_like(phase)], axis=-1)
    diag4 = np.repeat(diag, 2, axis=-1)  # (path, controller) ordering
    proj = np.kron(np.outer(KET0, KET0), IDENTITY)
    a = u_out.conj().T @ proj @ u_out
    # Tr[a D rho D^dag] = sum_ij a_ji D_i rho_ij conj(D_j)
    vals = np.einsum("ji,...i,ij,...j->...", a, diag4, rho_inside, diag4.conj())
    return np.real(vals)


def visibility_from_pattern(p0: np.ndarray) -> float:
    hi, lo = float(np.max(p0)), float(np.min(p0))
    if hi + lo <= 0:
        return 0.0
    return (hi - lo) / (hi + lo)


def theta_grid(resolution: int = DEFAULT_RESOLUTION) -> np.ndarray:
    if resolution < 360:
        raise ValueError("visibility sweep needs at least 360 points")
    return np.linspace(0.0, 2 * np.pi, resolution, endpoint=False)


def visibility(kind, alpha: float, resolution: int = DEFAULT_RESOLUTION,
               beam_splitter: np.ndarray = HADAMARD) -> float:
    """(max - min) / (max + min) of p0 over a uniform theta sweep."""
    pattern = [
        detection_probability(kind, CircuitParams(alpha, th), beam_splitter)
        for th in theta_grid(resolution)
    ]
    return visibility_from_pattern(np.array(pattern))


def analytic_visibility(alpha: float) -> float:
    return float(np.cos(alpha / 2) ** 2)


def analytic_p0(alpha: float, theta: float) -> float:
    return 0.5 * (1 + np.cos(alpha / 2) ** 2 * np.cos(theta))


@dataclass(frozen=True)
class RealismReport:
    wave_realism: float
    particle_realism: float
    visibility: float
    bound: float
    discord: float
    mutual_information: float
    wave_realism_std: float | None = None
    particle_realism_std: float | None = None


def realism_of_state(rho: DensityOperator, theta: float) -> tuple[float, float]:
    w, p = wave_particle_observables(theta)
    return realism(rho, w), realism(rho, p)


def realism_inside(kind, params: CircuitParams, with_discord: bool = True) -> RealismReport:
    """Wave/particle realism of the joint state while the qubit is inside."""
    st = stage_state(kind, params, Stage.INSIDE).state
    r_w, r_p = realism_of_state(st, params.theta)
    v = analytic_visibility(params.alpha)
    return RealismReport(
        wave_realism=r_w,
        particle_realism=r_p,
        visibility=v,
        bound=qcre_bound(v) if _kind(kind) is CircuitKind.QCRE else 1.0,
        discord=discord(st, PATH).value if with_discord else float("nan"),
        mutual_information=mutual_information(st),
    )


# detector model -----------------------------------------------------------

DETECTOR_FACTORS = ((CONTROLLER, 2), (PATH, 2), ("D0", 2), ("D1", 2))
ACTIVATED = KET0
READY = KET1


def _kron(*vs):
    out = np.ones(1, dtype=complex)
    for v in vs:
        out = np.kron(out, v)
    return out


def detector_interaction() -> np.ndarray:
    """Von Neumann coupling: path |k> flips detector k from ready to activated."""
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    p0 = np.outer(KET0, KET0)
    p1 = np.outer(KET1, KET1)
    i2 = IDENTITY
    flip_d0 = _kron_ops(i2, p0, x, i2) + _kron_ops(i2, p1, i2, i2)
    flip_d1 = _kron_ops(i2, p1, i2, x) + _kron_ops(i2, p0, i2, i2)
    return flip_d1 @ flip_d0


def _kron_ops(*ops):
    out = np.ones((1, 1), dtype=complex)
    for o in ops:
        out = np.kron(out, o)
    return out


class DetectorModel(NamedTuple):
    psi_i: StageState
    psi_f: StageState
    varsigma: DensityOperator


def detector_model(theta: float) -> DetectorModel:
    """Open-configuration qubit meeting two which-path detectors.

    Detector states: activated = |0>, ready = |1>; the detector's particle
    basis is {activated, ready}.
    """
    path = np.array([np.exp(1j * theta), 1]) / np.sqrt(2)
    psi_i = _kron(OUT, path, READY, READY)
    psi_f = detector_interaction() @ psi_i
    rho_f = DensityOperator.from_ket(psi_f, DETECTOR_FACTORS)
    varsigma = partial_trace(rho_f, ["D0", "D1"])
    return DetectorModel(
        StageState(Stage.INSIDE, DensityOperator.from_ket(psi_i, DETECTOR_FACTORS), psi_i),
        StageState(Stage.OUTPUT, rho_f, psi_f),
        varsigma,
    )


def detector_observables(k: int):
    """(W_k, P_k) for detector ``k``: P eigenstates activated/ready, W eigenstates their +- superpositions."""
    label = f"D{k}"
    p = ProjectiveObservable.from_basis(label, [ACTIVATED, READY], ("activated", "ready"))
    w = ProjectiveObservable.from_basis(
        label, [(ACTIVATED + READY) / np.sqrt(2), (ACTIVATED - READY) / np.sqrt(2)], ("W+", "W-")
    )
    return w, p
