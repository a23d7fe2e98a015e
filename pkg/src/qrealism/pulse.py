"""NMR pulse algebra for the 1H (path) / 13C (controller) spin pair.

Rotations are hard pulses, treated as instantaneous unitaries
exp(-i angle sigma/2) with a fixed wall-clock cost; free evolution is
exp(-i 2 pi (J/4) t sigma_z x sigma_z). Matrices use (H, C) factor order,
which is the interferometer's (path, controller) order.

Sequence files are line oriented::

    J 215.1
    # comment
    ROT C Y alpha
    FREE 1/(2*J)
    ROT H X -pi/2

Angles and durations may be arithmetic expressions in ``pi``, ``J`` and
the circuit parameters ``alpha`` and ``theta``.
"""

from __future__ import annotations

import ast
import operator
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import NamedTuple, Union

import numpy as np

from .interferometer import circuit_unitary

DEFAULT_J = 215.1  # Hz, 1H-13C scalar coupling of chloroform
ROTATION_TIME = {"H": 10.55e-6, "C": 9.45e-6}  # s per hard pulse
TIME_LIMIT = 14e-3  # s

SIGMA = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class SequenceError(ValueError):
    pass


@dataclass(frozen=True)
class Rotation:
    target: str
    axis: str
    angle: float

    def __post_init__(self):
        object.__setattr__(self, "target", self.target.upper())
        object.__setattr__(self, "axis", self.axis.lower())
        if self.target not in ROTATION_TIME:
            raise SequenceError(f"rotation target must be H or C, got {self.target!r}")
        if self.axis not in ("x", "y"):
            raise SequenceError(f"rotation axis must be x or y, got {self.axis!r}")
        if not np.isfinite(self.angle):
            raise SequenceError("rotation angle must be finite")

    @property
    def duration(self) -> float:
        return ROTATION_TIME[self.target]


@dataclass(frozen=True)
class FreeEvolution:
    duration: float

    def __post_init__(self):
        if not (np.isfinite(self.duration) and self.duration >= 0):
            raise SequenceError(f"free evolution needs a finite duration >= 0, got {self.duration}")


PulseOp = Union[Rotation, FreeEvolution]


@dataclass(frozen=True)
class PulseSequence:
    ops: tuple
    coupling_j: float = DEFAULT_J

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))
        if not self.coupling_j > 0:
            raise SequenceError("coupling constant must be positive")


class SequenceBudget(NamedTuple):
    total_duration: float
    rotation_count: int
    free_duration: float


def rotation_unitary(target: str, axis: str, angle: float) -> np.ndarray:
    """exp(-i angle sigma_axis / 2) on ``target``, identity on the other spin."""
    rot = Rotation(target, axis, angle)
    local = np.cos(angle / 2) * np.eye(2) - 1j * np.sin(angle / 2) * SIGMA[rot.axis]
    if rot.target == "H":
        return np.kron(local, np.eye(2))
    return np.kron(np.eye(2), local)


def j_evolution_unitary(duration: float, coupling_j: float = DEFAULT_J) -> np.ndarray:
    if duration < 0:
        raise SequenceError("duration must be nonnegative")
    phase = 2 * np.pi * coupling_j / 4 * duration
    signs = np.array([1, -1, -1, 1])
    return np.diag(np.exp(-1j * phase * signs))


def op_unitary(op: PulseOp, coupling_j: float = DEFAULT_J) -> np.ndarray:
    if isinstance(op, Rotation):
        return rotation_unitary(op.target, op.axis, op.angle)
    return j_evolution_unitary(op.duration, coupling_j)


def compile_sequence(seq: PulseSequence) -> tuple[np.ndarray, SequenceBudget]:
    """Product of the op unitaries, first op acting first, and the time budget."""
    if not seq.ops:
        raise SequenceError("cannot compile an empty sequence")
    u = np.eye(4, dtype=complex)
    rotations = 0
    rot_time = free_time = 0.0
    for op in seq.ops:
        u = op_unitary(op, seq.coupling_j) @ u
        if isinstance(op, Rotation):
            rotations += 1
            rot_time += op.duration
        else:
            free_time += op.duration
    return u, SequenceBudget(rot_time + free_time, rotations, free_time)


def equivalent_up_to_phase(u: np.ndarray, v: np.ndarray, tol: float = 1e-9) -> tuple[bool, float | None]:
    """Whether u = e^{i phi} v within ``tol`` (max-abs); phi from the largest entry of v."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.shape != v.shape:
        return False, None
    k = np.unravel_index(np.argmax(np.abs(v)), v.shape)
    if abs(u[k]) < 1e-12:
        return False, None
    phi = float(np.angle(u[k] / v[k]))
    ok = bool(np.max(np.abs(u - np.exp(1j * phi) * v)) <= tol)
    return ok, (phi if ok else None)


# sequence files ------------------------------------------------------------

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNOPS = {ast.UAdd: operator.pos, ast.USub: operator.neg}


def evaluate(expr: str, names: dict) -> float:
    """Evaluate a small arithmetic expression over numbers and ``names``."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name):
            if node.id not in names:
                raise SequenceError(f"unknown symbol {node.id!r} in {expr!r}")
            return float(names[node.id])
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNOPS:
            return _UNOPS[type(node.op)](ev(node.operand))
        raise SequenceError(f"unsupported expression {expr!r}")

    try:
        tree = ast.parse(expr.strip(), mode="eval")
    except SyntaxError as exc:
        raise SequenceError(f"cannot parse {expr!r}") from exc
    return ev(tree)


def parse_sequence(text: str, alpha: float = 0.0, theta: float = 0.0) -> PulseSequence:
    coupling = DEFAULT_J
    ops = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        head = head.upper()
        try:
            names = {"pi": np.pi, "J": coupling, "alpha": alpha, "theta": theta}
            if head == "J":
                if ops:
                    raise SequenceError("J header must precede the operations")
                (value,) = rest
                coupling = evaluate(value, names)
            elif head == "ROT":
                target, axis, *angle = rest
                ops.append(Rotation(target, axis, evaluate(" ".join(angle), names)))
            elif head == "FREE":
                ops.append(FreeEvolution(evaluate(" ".join(rest), names)))
            else:
                raise SequenceError(f"unknown directive {head!r}")
        except (SequenceError, ValueError) as exc:
            raise SequenceError(f"line {lineno}: {exc}") from exc
    return PulseSequence(tuple(ops), coupling)


def load_sequence(path, alpha: float = 0.0, theta: float = 0.0) -> PulseSequence:
    return parse_sequence(Path(path).read_text(), alpha, theta)


def reference_sequence_path(kind: str) -> Path:
    name = {"qdce": "qdce.seq", "qcre": "qcre.seq"}[str(kind).lower()]
    return Path(str(resources.files("qrealism") / "sequences" / name))


def reference_sequence(kind: str, alpha: float, theta: float) -> PulseSequence:
    return load_sequence(reference_sequence_path(kind), alpha, theta)


def ideal_unitary(kind: str, alpha: float, theta: float) -> np.ndarray:
    """Controller preparation R_y(alpha) on |0>_C followed by the ideal interferometer."""
    prep = rotation_unitary("C", "y", alpha)
    return circuit_unitary(kind, theta) @ prep
