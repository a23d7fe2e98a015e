"""Dense density-matrix algebra and entropic functionals (base-2 logs).

Everything here works on small dense matrices (dimension at most 16) and
is written as pure functions on immutable values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

ATOL = 1e-10
EIG_FLOOR = 1e-12
MAX_DIM = 16


class StateError(ValueError):
    """Raised when a matrix is not an admissible state or observable."""


def tensor_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with ``a`` as the leftmost factor."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return np.kron(a, b)


def _is_hermitian(m: np.ndarray, atol: float = ATOL) -> bool:
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= atol)


@dataclass(frozen=True)
class DensityOperator:
    """A density matrix over labelled tensor factors.

    ``factors`` is an ordered tuple of ``(label, local_dim)`` pairs; the
    first factor is the leftmost one in the Kronecker ordering.

    Positivity is checked unless ``require_psd=False``; linear-inversion
    tomography produces Hermitian unit-trace matrices that can be slightly
    negative, and those are carried with the flag off.
    """

    matrix: np.ndarray
    factors: tuple = ()
    require_psd: bool = field(default=True, compare=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise StateError(f"density matrix must be square, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise StateError("density matrix has non-finite entries")
        dim = m.shape[0]
        if dim > MAX_DIM:
            raise StateError(f"dimension {dim} exceeds {MAX_DIM}")
        factors = tuple((str(lbl), int(d)) for lbl, d in self.factors) or (("sys", dim),)
        if int(np.prod([d for _, d in factors])) != dim:
            raise StateError(f"factor dimensions {factors} do not multiply to {dim}")
        if len({lbl for lbl, _ in factors}) != len(factors):
            raise StateError("factor labels must be unique")
        if not _is_hermitian(m):
            raise StateError("density matrix is not Hermitian")
        if abs(np.trace(m).real - 1.0) > ATOL:
            raise StateError(f"trace is {np.trace(m).real!r}, expected 1")
        if self.require_psd and np.linalg.eigvalsh(m)[0] < -ATOL:
            raise StateError("density matrix has negative eigenvalues")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "factors", factors)

    @classmethod
    def from_ket(cls, psi, factors: Iterable = ()) -> "DensityOperator":
        psi = np.asarray(psi, dtype=complex).ravel()
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()), tuple(factors))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def labels(self) -> tuple:
        return tuple(lbl for lbl, _ in self.factors)

    @property
    def dims(self) -> tuple:
        return tuple(d for _, d in self.factors)

    def local_dim(self, label: str) -> int:
        return self.dims[self.index(label)]

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown factor label {label!r}; have {self.labels}") from None

    @property
    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix)[0])

    @property
    def is_psd(self) -> bool:
        return self.min_eigenvalue >= -ATOL

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def with_matrix(self, matrix: np.ndarray) -> "DensityOperator":
        return DensityOperator(matrix, self.factors, self.require_psd)


@dataclass(frozen=True)
class ProjectiveObservable:
    """Complete set of orthogonal rank-1 projectors acting on one factor."""

    subsystem: str
    projectors: tuple
    eigenlabels: tuple = ()

    def __post_init__(self):
        projs = tuple(np.array(p, dtype=complex) for p in self.projectors)
        if not projs:
            raise StateError("observable needs at least one projector")
        d = projs[0].shape[0]
        for i, p in enumerate(projs):
            if p.shape != (d, d):
                raise StateError("projectors must share one square shape")
            if np.max(np.abs(p @ p - p)) > ATOL:
                raise StateError(f"projector {i} is not idempotent")
            if abs(np.trace(p).real - 1.0) > ATOL:
                raise StateError(f"projector {i} is not rank one")
            for q in projs[:i]:
                if np.max(np.abs(p @ q)) > ATOL:
                    raise StateError("projectors are not mutually orthogonal")
        if np.max(np.abs(sum(projs) - np.eye(d))) > ATOL:
            raise StateError("projectors do not resolve the identity")
        labels = tuple(self.eigenlabels) or tuple(str(i) for i in range(len(projs)))
        if len(labels) != len(projs):
            raise StateError("one eigenlabel per projector required")
        for p in projs:
            p.setflags(write=False)
        object.__setattr__(self, "projectors", projs)
        object.__setattr__(self, "eigenlabels", labels)

    @classmethod
    def from_basis(cls, subsystem: str, vectors: Sequence, labels: Sequence = ()):
        projs = []
        for v in vectors:
            v = np.asarray(v, dtype=complex).ravel()
            v = v / np.linalg.norm(v)
            projs.append(np.outer(v, v.conj()))
        return cls(subsystem, tuple(projs), tuple(labels))

    @property
    def local_dim(self) -> int:
        return self.projectors[0].shape[0]

    def basis(self) -> np.ndarray:
        """Columns are the eigenvectors, phase fixed by the largest component."""
        cols = []
        for p in self.projectors:
            w, v = np.linalg.eigh(p)
            vec = v[:, -1]
            k = np.argmax(np.abs(vec))
            cols.append(vec * np.exp(-1j * np.angle(vec[k])))
        return np.stack(cols, axis=1)


def partial_trace(rho: DensityOperator, keep: Iterable[str]) -> DensityOperator:
    """Reduced state on the factors in ``keep`` (kept in their original order)."""
    keep = set(keep)
    if not keep:
        raise ValueError("keep must name at least one factor")
    unknown = keep - set(rho.labels)
    if unknown:
        raise KeyError(f"unknown factor labels {sorted(unknown)}; have {rho.labels}")
    n = len(rho.factors)
    dims = rho.dims
    kept = [i for i in range(n) if rho.labels[i] in keep]
    traced = [i for i in range(n) if i not in kept]
    t = rho.matrix.reshape(dims + dims)
    perm = kept + traced + [n + i for i in kept] + [n + i for i in traced]
    t = t.transpose(perm)
    dk = int(np.prod([dims[i] for i in kept]))
    dt = int(np.prod([dims[i] for i in traced])) if traced else 1
    t = t.reshape(dk, dt, dk, dt)
    reduced = np.einsum("ajbj->ab", t)
    return DensityOperator(reduced, tuple(rho.factors[i] for i in kept), rho.require_psd)


def eigh(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix, eigenvalues ascending."""
    m = np.asarray(m, dtype=complex)
    if not _is_hermitian(m):
        raise StateError("eigh requires a Hermitian matrix")
    m = 0.5 * (m + m.conj().T)
    return np.linalg.eigh(m)


def _entropy_of_spectrum(evals: np.ndarray) -> float:
    ev = np.where(evals > EIG_FLOOR, evals, 0.0)
    nz = ev[ev > 0]
    s = float(-np.sum(nz * np.log2(nz)))
    return max(s, 0.0)


def von_neumann_entropy(rho: DensityOperator | np.ndarray) -> float:
    """S(rho) = -Tr rho log2 rho, eigenvalues below 1e-12 counted as zero."""
    m = rho.matrix if isinstance(rho, DensityOperator) else np.asarray(rho)
    return _entropy_of_spectrum(np.linalg.eigvalsh(m))


def binary_entropy(u: float) -> float:
    if not 0.0 <= u <= 1.0:
        raise ValueError(f"binary entropy needs 0 <= u <= 1, got {u}")
    if u == 0.0 or u == 1.0:
        return 0.0
    return float(-u * np.log2(u) - (1.0 - u) * np.log2(1.0 - u))


def relative_entropy(rho: DensityOperator, sigma: DensityOperator) -> float:
    """S(rho||sigma) in bits; returns ``math.inf`` when supp(rho) is not in supp(sigma)."""
    if rho.dim != sigma.dim:
        raise ValueError("relative entropy needs equal dimensions")
    p, u = np.linalg.eigh(rho.matrix)
    q, v = np.linalg.eigh(sigma.matrix)
    p = np.where(p > EIG_FLOOR, p, 0.0)
    # overlaps[i, j] = |<p_i|q_j>|^2
    overlaps = np.abs(u.conj().T @ v) ** 2
    null = q <= ATOL
    if np.any(p[:, None] * overlaps[:, null] > ATOL):
        return float("inf")
    log_p = np.log2(p, where=p > 0, out=np.zeros_like(p))
    log_q = np.log2(q, where=~null, out=np.zeros_like(q))
    cross = p @ overlaps[:, ~null] @ log_q[~null]
    return float(p @ log_p - cross)


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(m)
    w = np.where(w > EIG_FLOOR, w, 0.0)
    return (v * np.sqrt(w)) @ v.conj().T


def fidelity(rho: DensityOperator, sigma: DensityOperator) -> float:
    """Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.

    Evaluated as the squared nuclear norm of sqrt(rho) sqrt(sigma), which is
    the same quantity and stays symmetric for rank-deficient arguments.
    """
    if rho.dim != sigma.dim:
        raise ValueError("fidelity needs equal dimensions")
    sv = np.linalg.svd(_psd_sqrt(rho.matrix) @ _psd_sqrt(sigma.matrix), compute_uv=False)
    f = float(np.sum(sv) ** 2)
    return min(max(f, 0.0), 1.0)


def operator_on(op: np.ndarray, target: str, factors: Sequence) -> np.ndarray:
    """Embed a local operator on factor ``target`` into the full space."""
    out = np.ones((1, 1), dtype=complex)
    found = False
    for lbl, d in factors:
        if lbl == target:
            out = np.kron(out, op)
            found = True
        else:
            out = np.kron(out, np.eye(d))
    if not found:
        raise KeyError(f"unknown factor label {target!r}")
    return out


def maximally_mixed(factors: Sequence) -> DensityOperator:
    dim = int(np.prod([d for _, d in factors]))
    return DensityOperator(np.eye(dim) / dim, tuple(factors))


def random_density(factors: Sequence, rng: np.random.Generator, rank: int | None = None) -> DensityOperator:
    """Ginibre-distributed random state; ``rank`` defaults to full rank."""
    dim = int(np.prod([d for _, d in factors]))
    k = dim if rank is None else rank
    g = rng.standard_normal((dim, k)) + 1j * rng.standard_normal((dim, k))
    m = g @ g.conj().T
    return DensityOperator(m / np.trace(m).real, tuple(factors))


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR with phase correction."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = scipy.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
