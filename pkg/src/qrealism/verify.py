"""Self-check suite run by ``qrealism verify``.

Each check returns a margin (>= 0 means pass) so the output shows how
close every invariant is to its tolerance.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import interferometer as itf
from . import pulse
from .qmath import DensityOperator, binary_entropy, fidelity, random_density
from .realism import bound_incompatible, nonseparability_gap, qcre_bound, realism
from .tomography import NoiseModel, monte_carlo_realism, pauli_expectations, reconstruct

TWO_QUBITS = (("A", 2), ("B", 2))


@dataclass(frozen=True)
class CheckResult:
    name: str
    margin: float
    seconds: float

    @property
    def passed(self) -> bool:
        return bool(self.margin >= 0)


def alpha_grid(n: int) -> np.ndarray:
    return np.linspace(0.0, np.pi, n)


def theta_values(n: int) -> np.ndarray:
    return np.linspace(0.0, 2 * np.pi, n, endpoint=False)


def random_states(n: int, seed: int = 2024) -> list:
    """Seeded two-qubit states mixing full-rank, rank-2 and pure draws."""
    rng = np.random.default_rng(seed)
    return [random_density(TWO_QUBITS, rng, rank=(4, 2, 1)[i % 3]) for i in range(n)]


def check_stage_oracles(beam_splitter=itf.HADAMARD, n: int = 17) -> float:
    worst = 1.0
    for kind in itf.CircuitKind:
        for a in alpha_grid(n):
            for t in theta_values(n):
                p = itf.CircuitParams(a, t)
                for stage, oracle in ((itf.Stage.INSIDE, itf.closed_form_inside),
                                      (itf.Stage.OUTPUT, itf.closed_form_output)):
                    got = itf.stage_state(kind, p, stage, beam_splitter).state
                    want = DensityOperator.from_ket(oracle(kind, p), itf.FACTORS)
                    worst = min(worst, fidelity(got, want))
    return 1e-10 - (1.0 - worst)


def check_fringes(beam_splitter=itf.HADAMARD, n: int = 33) -> float:
    worst = 0.0
    for a in alpha_grid(n):
        for t in theta_values(n):
            p = itf.CircuitParams(a, t)
            p_qdce = itf.detection_probability("qdce", p, beam_splitter)
            p_qcre = itf.detection_probability("qcre", p, beam_splitter)
            exact = itf.analytic_p0(a, t)
            worst = max(worst, abs(p_qdce - p_qcre), abs(p_qdce - exact), abs(p_qcre - exact))
    return 1e-12 - worst


def check_visibility(beam_splitter=itf.HADAMARD, n: int = 17) -> float:
    worst = 0.0
    for kind in itf.CircuitKind:
        for a in alpha_grid(n):
            v = itf.visibility(kind, a, beam_splitter=beam_splitter)
            worst = max(worst, abs(v - itf.analytic_visibility(a)))
    return 1e-6 - worst


def check_qdce_realism(n: int = 17) -> float:
    worst = 0.0
    for a in alpha_grid(n):
        for t in theta_values(n):
            st = itf.stage_state("qdce", itf.CircuitParams(a, t), "inside").state
            r_w, r_p = itf.realism_of_state(st, t)
            worst = max(worst, abs(r_w - 1.0), abs(r_p))
    return 1e-9 - worst


def check_qcre_realism(n: int = 65) -> float:
    worst = 0.0
    for a in alpha_grid(n):
        st = itf.stage_state("qcre", itf.CircuitParams(a, 0.0), "inside").state
        r_w, r_p = itf.realism_of_state(st, 0.0)
        v = np.cos(a / 2) ** 2
        worst = max(worst, abs(r_w - (1 - binary_entropy((1 - v) / 2))),
                    abs(r_p - (1 - binary_entropy(v / 2))))
    return 1e-9 - worst


def check_qcre_bound(n: int = 65) -> float:
    margin = np.inf
    for a in alpha_grid(n):
        st = itf.stage_state("qcre", itf.CircuitParams(a, 0.0), "inside").state
        r_w, r_p = itf.realism_of_state(st, 0.0)
        margin = min(margin, qcre_bound(itf.analytic_visibility(a)) - (r_w + r_p))
    return margin + 1e-9


def check_incompatible_bound(n: int = 1000, seed: int = 2024) -> float:
    rng = np.random.default_rng(seed + 1)
    margin = np.inf
    for rho in random_states(n, seed):
        w, p = itf.wave_particle_observables(rng.uniform(0, 2 * np.pi), "A")
        b = bound_incompatible(rho, w, p)
        margin = min(margin, b.margin + 1e-6, 1e-9 - abs(b.rhs - b.rhs_conditional))
    return margin


def check_nonseparability(n: int = 1000, seed: int = 2024) -> float:
    _, p = itf.wave_particle_observables(0.0, "A")
    margin = np.inf
    for rho in random_states(n, seed):
        g = nonseparability_gap(rho, p)
        margin = min(margin, g.gap - g.discord + 1e-6)
    return margin


def check_detector_model() -> float:
    detectors = path = 0.0
    for theta in theta_values(8):
        model = itf.detector_model(theta)
        for k in (0, 1):
            w, p = itf.detector_observables(k)
            detectors = max(detectors, abs(realism(model.varsigma, p) - 1),
                            abs(realism(model.varsigma, w)))
        w, p = itf.wave_particle_observables(theta)
        psi_i = model.psi_i.state
        path = max(path, abs(realism(psi_i, p)), abs(realism(psi_i, w) - 1))
    return min(1e-12 - detectors, 1e-9 - path)


def check_pulses() -> float:
    margin = np.inf
    for kind in ("qdce", "qcre"):
        for a in (0.0, np.pi / 2, np.pi):
            for t in (0.0, 2 * np.pi / 3, 4 * np.pi / 3):
                u, budget = pulse.compile_sequence(pulse.reference_sequence(kind, a, t))
                ideal = pulse.ideal_unitary(kind, a, t)
                ok, phase = pulse.equivalent_up_to_phase(u, ideal, tol=1e-9)
                dist = np.max(np.abs(u - np.exp(1j * phase) * ideal)) if ok else np.inf
                margin = min(margin, 1e-9 - dist, pulse.TIME_LIMIT - budget.total_duration)
    return margin


def check_tomography(n: int = 100) -> float:
    worst = 0.0
    for rho in random_states(n, seed=99):
        back = reconstruct(pauli_expectations(rho), rho.factors)
        worst = max(worst, np.max(np.abs(back.matrix - rho.matrix)))
    rep = monte_carlo_realism("qcre", itf.CircuitParams(np.pi / 2, 0.0), NoiseModel(0.0, 5, 1))
    for q, st in rep.stats.items():
        worst = max(worst, st.std, abs(st.mean - rep.ideal[q]))
    return 1e-12 - worst


def checks(n_states: int = 1000, beam_splitter=itf.HADAMARD) -> list[tuple[str, Callable[[], float]]]:
    return [
        ("stage states match closed forms (17x17)", lambda: check_stage_oracles(beam_splitter)),
        ("p0 surfaces equal and analytic (33x33)", lambda: check_fringes(beam_splitter)),
        ("visibility = cos^2(alpha/2)", lambda: check_visibility(beam_splitter)),
        ("QDCE inside realism (1, 0)", check_qdce_realism),
        ("QCRE inside realism vs visibility", check_qcre_realism),
        ("QCRE complementarity bound", check_qcre_bound),
        (f"incompatible-observable bound ({n_states} states)", lambda: check_incompatible_bound(n_states)),
        (f"non-separability >= discord ({n_states} states)", lambda: check_nonseparability(n_states)),
        ("detector model elements of reality", check_detector_model),
        ("pulse sequences equal ideal circuits", check_pulses),
        ("tomography roundtrip and zero-noise Monte Carlo", check_tomography),
    ]


def run(n_states: int = 1000, beam_splitter=itf.HADAMARD, echo=print) -> list[CheckResult]:
    results = []
    for name, fn in checks(n_states, beam_splitter):
        t0 = time.perf_counter()
        try:
            margin = float(fn())
            note = f"margin={margin:.3e}"
        except Exception as exc:  # a crashing check is a failed check
            margin = -np.inf
            note = f"{type(exc).__name__}: {exc}"
        res = CheckResult(name, margin, time.perf_counter() - t0)
        echo(f"{'PASS' if res.passed else 'FAIL'}  {name}  {note}  ({res.seconds:.2f}s)")
        results.append(res)
    return results
