"""Realism/irrealism quantifiers, correlations and complementarity bounds.

Conventions: all quantities in bits. For a state over several factors the
"measured" part is the observable's factor and everything else is the
complementary part.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize

from .qmath import (
    DensityOperator,
    ProjectiveObservable,
    StateError,
    binary_entropy,
    partial_trace,
    von_neumann_entropy,
)

MUB_TOL = 1e-9
DISCORD_GRID = (64, 128)


def _check_context(rho: DensityOperator, obs: ProjectiveObservable) -> int:
    idx = rho.index(obs.subsystem)
    if rho.dims[idx] != obs.local_dim:
        raise StateError(
            f"observable acts on dimension {obs.local_dim}, factor {obs.subsystem!r} "
            f"has dimension {rho.dims[idx]}"
        )
    return idx


def _rest(rho: DensityOperator, label: str) -> list:
    return [lbl for lbl in rho.labels if lbl != label]


def dephase(rho: DensityOperator, obs: ProjectiveObservable) -> DensityOperator:
    """Non-selective projective measurement of ``obs``: sum_a (A_a x 1) rho (A_a x 1)."""
    idx = _check_context(rho, obs)
    dims = rho.dims
    n = len(dims)
    t = rho.matrix.reshape(dims + dims)
    out = np.zeros_like(t)
    letters = "abcdefghijklmnop"
    row = list(letters[:n])
    col = list(letters[n : 2 * n])
    for p in obs.projectors:
        # P[x, row_idx] t[... row ..., ... col ...] P[col_idx, y]
        r_in, c_in = row[idx], col[idx]
        r_out = row.copy()
        r_out[idx] = "x"
        c_out = col.copy()
        c_out[idx] = "y"
        spec = f"x{r_in},{''.join(row)}{''.join(col)},{c_in}y->{''.join(r_out)}{''.join(c_out)}"
        out = out + np.einsum(spec, p, t, p)
    m = out.reshape(rho.dim, rho.dim)
    return rho.with_matrix(0.5 * (m + m.conj().T))


def _as_single_factor(rho: DensityOperator, obs: ProjectiveObservable) -> DensityOperator:
    if rho.labels == (obs.subsystem,):
        return rho
    return partial_trace(rho, [obs.subsystem])


def irrealism(rho: DensityOperator, obs: ProjectiveObservable) -> float:
    """Entropy gained under dephasing in the eigenbasis of ``obs``."""
    return von_neumann_entropy(dephase(rho, obs)) - von_neumann_entropy(rho)


def realism(rho: DensityOperator, obs: ProjectiveObservable) -> float:
    return float(np.log2(obs.local_dim)) - irrealism(rho, obs)


def mutual_information(rho: DensityOperator, bipartition: tuple | None = None) -> float:
    """S(rho_A) + S(rho_B) - S(rho) for ``bipartition = (labels_A, labels_B)``.

    With two factors the bipartition may be omitted.
    """
    if bipartition is None:
        if len(rho.labels) != 2:
            raise ValueError("bipartition required for states with more than two factors")
        bipartition = ([rho.labels[0]], [rho.labels[1]])
    a, b = (list(part) for part in bipartition)
    if set(a) & set(b) or set(a) | set(b) != set(rho.labels):
        raise ValueError(f"bipartition {bipartition} must split {rho.labels}")
    return (
        von_neumann_entropy(partial_trace(rho, a))
        + von_neumann_entropy(partial_trace(rho, b))
        - von_neumann_entropy(rho)
    )


class DiscordResult(NamedTuple):
    value: float
    basis: ProjectiveObservable
    bloch_angles: tuple


def _qubit_first(rho: DensityOperator, label: str) -> np.ndarray:
    """Reshape rho as (2, dB, 2, dB) with the measured qubit leftmost."""
    idx = rho.index(label)
    if rho.dims[idx] != 2:
        raise NotImplementedError("discord is implemented for a measured qubit only")
    n = len(rho.dims)
    order = [idx] + [i for i in range(n) if i != idx]
    t = rho.matrix.reshape(rho.dims + rho.dims)
    t = t.transpose(order + [n + i for i in order])
    db = rho.dim // 2
    return t.reshape(2, db, 2, db)


def _bloch_kets(theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Basis pairs for Bloch directions, shape (..., 2 outcomes, 2 components)."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    e = np.exp(1j * phi)
    up = np.stack([c + 0j, e * s], axis=-1)
    down = np.stack([-np.conj(e) * s + 0j, c + 0j], axis=-1)
    return np.stack([up, down], axis=-2)


def _classical_information(t: np.ndarray, kets: np.ndarray, s_b: float) -> np.ndarray:
    """I(Phi_n(rho)) = S(rho_B) - sum_k p_k S(rho_B|k), batched over kets."""
    cond = np.einsum("...ki,iajb,...kj->...kab", kets.conj(), t, kets)
    p = np.real(np.einsum("...kaa->...k", cond))
    safe = np.where(p > 1e-14, p, 1.0)
    ev = np.linalg.eigvalsh(cond / safe[..., None, None])
    ev = np.where(ev > 1e-12, ev, 0.0)
    logs = np.log2(ev, where=ev > 0, out=np.zeros_like(ev))
    s_cond = -np.sum(ev * logs, axis=-1)
    s_cond = np.where(p > 1e-14, s_cond, 0.0)
    return s_b - np.sum(p * s_cond, axis=-1)


def discord(rho: DensityOperator, measured: str) -> DiscordResult:
    """Minimum mutual-information loss over projective measurements of a qubit.

    A 64 x 128 grid on the Bloch sphere seeds a Nelder-Mead refinement.
    """
    t = _qubit_first(rho, measured)
    rest = _rest(rho, measured)
    total_mi = mutual_information(rho, ([measured], rest))
    s_b = von_neumann_entropy(partial_trace(rho, rest))

    n_theta, n_phi = DISCORD_GRID
    thetas = np.linspace(0.0, np.pi, n_theta)
    phis = np.linspace(0.0, 2 * np.pi, n_phi, endpoint=False)
    tg, pg = np.meshgrid(thetas, phis, indexing="ij")
    info = _classical_information(t, _bloch_kets(tg, pg), s_b)
    k = np.unravel_index(np.argmax(info), info.shape)
    x0 = np.array([tg[k], pg[k]])

    def objective(x):
        return total_mi - float(_classical_information(t, _bloch_kets(x[0], x[1]), s_b))

    best_grid = total_mi - float(info[k])
    res = minimize(
        objective,
        x0,
        method="Nelder-Mead",
        options={"xatol": 1e-9, "fatol": 1e-12, "maxiter": 2000,
                 "initial_simplex": x0 + np.array([[0, 0], [0.05, 0], [0, 0.05]])},
    )
    if res.fun <= best_grid:
        value, angles = float(res.fun), (float(res.x[0]), float(res.x[1]))
    else:
        value, angles = best_grid, (float(x0[0]), float(x0[1]))
    kets = _bloch_kets(np.float64(angles[0]), np.float64(angles[1]))
    basis = ProjectiveObservable.from_basis(measured, [kets[0], kets[1]], ("+n", "-n"))
    return DiscordResult(value, basis, angles)


@dataclass(frozen=True)
class CorrelationSummary:
    mutual_information: float
    discord: float
    conditional_information: float
    purity_information: float
    entanglement_entropy: float | None


def correlations(rho: DensityOperator, measured: str) -> CorrelationSummary:
    rest = _rest(rho, measured)
    d_a = rho.local_dim(measured)
    rho_a = partial_trace(rho, [measured])
    rho_b = partial_trace(rho, rest)
    s, s_a, s_b = von_neumann_entropy(rho), von_neumann_entropy(rho_a), von_neumann_entropy(rho_b)
    pure = rho.purity() > 1 - 1e-10
    return CorrelationSummary(
        mutual_information=s_a + s_b - s,
        discord=discord(rho, measured).value if d_a == 2 else float("nan"),
        conditional_information=np.log2(d_a) - (s - s_b),
        purity_information=np.log2(d_a) - s_a,
        entanglement_entropy=s_a if pure else None,
    )


class Gap(NamedTuple):
    gap: float
    discord: float


def nonseparability_gap(rho: DensityOperator, obs: ProjectiveObservable) -> Gap:
    """Irrealism of the whole minus irrealism of the part, with the discord it bounds."""
    _check_context(rho, obs)
    part = _as_single_factor(rho, obs)
    gap = irrealism(rho, obs) - irrealism(part, obs)
    return Gap(gap, discord(rho, obs.subsystem).value)


def mutually_unbiased(a: ProjectiveObservable, b: ProjectiveObservable, tol: float = MUB_TOL) -> bool:
    if a.subsystem != b.subsystem or a.local_dim != b.local_dim:
        return False
    d = a.local_dim
    ov = np.array([[np.real(np.trace(p @ q)) for q in b.projectors] for p in a.projectors])
    return bool(np.max(np.abs(ov - 1.0 / d)) <= tol)


class BoundCheck(NamedTuple):
    lhs: float
    rhs: float
    rhs_conditional: float

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs


def bound_incompatible(rho: DensityOperator, a: ProjectiveObservable, a_prime: ProjectiveObservable) -> BoundCheck:
    """Sum of realisms for two mutually unbiased observables and its upper bound.

    ``rhs`` is log2 d + S(rho_A) - I(A:B); ``rhs_conditional`` is the same
    bound written as 2 log2 d - I(A|B) with the conditional information
    evaluated from the conditional entropy.
    """
    if not mutually_unbiased(a, a_prime):
        raise ValueError("bound holds for mutually unbiased observables only")
    _check_context(rho, a)
    label = a.subsystem
    rest = _rest(rho, label)
    log_d = float(np.log2(a.local_dim))
    lhs = realism(rho, a) + realism(rho, a_prime)
    if rest:
        s_a = von_neumann_entropy(partial_trace(rho, [label]))
        s_b = von_neumann_entropy(partial_trace(rho, rest))
        mi = mutual_information(rho, ([label], rest))
    else:
        s_a, s_b, mi = von_neumann_entropy(rho), 0.0, 0.0
    rhs = log_d + s_a - mi
    cond_info = log_d - (von_neumann_entropy(rho) - s_b)
    rhs_cond = 2 * log_d - cond_info
    if abs(rhs - rhs_cond) > 1e-9:
        raise AssertionError(f"bound forms disagree: {rhs} vs {rhs_cond}")
    return BoundCheck(lhs, rhs, rhs_cond)


def qcre_bound(visibility: float) -> float:
    """Upper bound on wave plus particle realism inside the quantum-controlled interferometer."""
    if not 0.0 <= visibility <= 1.0:
        raise ValueError(f"visibility must lie in [0, 1], got {visibility}")
    lam = np.sqrt(2 * visibility**2 - 2 * visibility + 1)
    return 1.0 - binary_entropy(min(1.0, (1 + lam) / 2))
