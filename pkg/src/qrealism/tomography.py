"""Simulated two-qubit state tomography with Monte Carlo error propagation.

Noise is added to the 15 non-trivial Pauli correlators of a state, the
state is rebuilt by linear inversion, pushed back onto the set of
physical states, and the realism quantifiers are recomputed. All
randomness comes from numpy's PCG64 generator seeded with
``(seed, draw_index)`` so that each draw is reproducible on its own.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from . import interferometer as itf
from .qmath import DensityOperator

PAULIS = np.stack([
    np.eye(2),
    np.array([[0, 1], [1, 0]]),
    np.array([[0, -1j], [1j, 0]]),
    np.array([[1, 0], [0, -1]]),
]).astype(complex)
PAULI_NAMES = "IXYZ"
# PAULI_PRODUCTS[i, j] = sigma_i (x) sigma_j
PAULI_PRODUCTS = np.einsum("iab,jcd->ijacbd", PAULIS, PAULIS).reshape(4, 4, 4, 4)

QUANTITIES = ("wave_realism", "particle_realism", "visibility", "p0")
CSV_COLUMNS = ("alpha", "theta", "quantity", "mean", "std", "samples", "seed")


@dataclass(frozen=True)
class NoiseModel:
    sigma: float = 0.01
    samples: int = 100
    seed: int = 0

    def __post_init__(self):
        if not self.sigma >= 0:
            raise ValueError("sigma must be nonnegative")
        if self.samples < 1:
            raise ValueError("samples must be at least 1")


def pauli_expectations(rho: DensityOperator | np.ndarray) -> np.ndarray:
    """c[i, j] = Tr[rho sigma_i (x) sigma_j], indices ordered I, X, Y, Z."""
    m = rho.matrix if isinstance(rho, DensityOperator) else np.asarray(rho)
    if m.shape != (4, 4):
        raise ValueError(f"two-qubit state expected, got shape {m.shape}")
    return np.real(np.einsum("ijab,ba->ij", PAULI_PRODUCTS, m))


def perturb(c: np.ndarray, noise: NoiseModel, draw_index: int) -> np.ndarray:
    """Add N(0, sigma) to every correlator except c[I, I]."""
    rng = np.random.Generator(np.random.PCG64([noise.seed, draw_index]))
    out = np.array(c, dtype=float)
    if noise.sigma > 0:
        out.flat[1:] += rng.normal(0.0, noise.sigma, size=15)
    return out


def reconstruct(c: np.ndarray, factors=itf.FACTORS) -> DensityOperator:
    """Linear inversion rho = 1/4 sum c_ij sigma_i (x) sigma_j.

    The result is Hermitian with unit trace but may be slightly negative;
    check ``.is_psd`` on the returned state.
    """
    m = np.einsum("ij,ijab->ab", np.asarray(c, dtype=float), PAULI_PRODUCTS) / 4
    return DensityOperator(0.5 * (m + m.conj().T), tuple(factors), require_psd=False)


def project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex (sort / cumulative sum rule)."""
    v = np.asarray(v, dtype=float)
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    ks = np.arange(1, len(v) + 1)
    rho = np.nonzero(u - css / ks > 0)[0][-1]
    shift = css[rho] / (rho + 1)
    return np.maximum(v - shift, 0.0)


def project_physical(rho_raw: DensityOperator | np.ndarray, factors=None) -> DensityOperator:
    """Nearest (Frobenius) density matrix: keep eigenvectors, project eigenvalues."""
    if isinstance(rho_raw, DensityOperator):
        m, factors = rho_raw.matrix, rho_raw.factors
    else:
        m = np.asarray(rho_raw, dtype=complex)
        factors = factors or ()
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    p = project_simplex(w)
    out = (v * p) @ v.conj().T
    return DensityOperator(0.5 * (out + out.conj().T), tuple(factors))


@dataclass(frozen=True)
class QuantityStats:
    mean: float
    std: float


@dataclass(frozen=True)
class MonteCarloReport:
    kind: str
    alpha: float
    theta: float
    noise: NoiseModel
    stats: dict = field(default_factory=dict)
    ideal: dict = field(default_factory=dict)

    @property
    def samples(self) -> int:
        return self.noise.samples

    def __getitem__(self, quantity: str) -> QuantityStats:
        return self.stats[quantity]

    def csv_rows(self) -> list:
        return [
            {
                "alpha": self.alpha,
                "theta": self.theta,
                "quantity": q,
                "mean": self.stats[q].mean,
                "std": self.stats[q].std,
                "samples": self.noise.samples,
                "seed": self.noise.seed,
            }
            for q in QUANTITIES
        ]


def _quantities(kind, rho: DensityOperator, theta: float, shifts: np.ndarray) -> np.ndarray:
    r_w, r_p = itf.realism_of_state(rho, theta)
    fringe = itf.fringe_from_inside(kind, rho.matrix, shifts)
    v = itf.visibility_from_pattern(fringe)
    p0 = float(fringe[0])
    return np.array([r_w, r_p, v, p0])


def _stats(column: np.ndarray) -> QuantityStats:
    mean = math.fsum(column) / len(column)
    var = math.fsum((x - mean) ** 2 for x in column) / (len(column) - 1) if len(column) > 1 else 0.0
    return QuantityStats(mean, math.sqrt(var))


def monte_carlo_realism(kind, params: itf.CircuitParams, noise: NoiseModel,
                        resolution: int = itf.DEFAULT_RESOLUTION) -> MonteCarloReport:
    """Propagate tomographic noise on the inside state into realism, visibility and p0.

    Each draw: perturb the correlators, invert, project to a physical state,
    evaluate, then clamp every quantity to [0, 1] before aggregation.
    """
    kind = itf.CircuitKind(str(getattr(kind, "value", kind)).lower())
    ideal_state = itf.stage_state(kind, params, itf.Stage.INSIDE).state
    coeffs = pauli_expectations(ideal_state)
    # shift 0 first so fringe[0] is p0 at the requested theta
    shifts = itf.theta_grid(resolution)
    ideal = dict(zip(QUANTITIES, _quantities(kind, ideal_state, params.theta, shifts)))

    draws = np.empty((noise.samples, len(QUANTITIES)))
    for k in range(noise.samples):
        raw = reconstruct(perturb(coeffs, noise, k))
        rho = project_physical(raw)
        draws[k] = _quantities(kind, rho, params.theta, shifts)
    draws = np.clip(draws, 0.0, 1.0)
    stats = {q: _stats(draws[:, i]) for i, q in enumerate(QUANTITIES)}
    return MonteCarloReport(kind.value, params.alpha, params.theta, noise, stats, ideal)


def format_number(x: float) -> str:
    """Locale-free, 12 significant digits; round-off below 1e-13 prints as 0."""
    x = float(x)
    if abs(x) < 1e-13:
        x = 0.0
    return format(x, ".12g")


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rep in reports:
        for row in rep.csv_rows():
            writer.writerow([
                format_number(row["alpha"]), format_number(row["theta"]), row["quantity"],
                format_number(row["mean"]), format_number(row["std"]), row["samples"], row["seed"],
            ])
    return buf.getvalue()
