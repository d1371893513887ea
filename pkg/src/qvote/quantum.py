"""Dense state algebra over preference bases.

States live on one voter's space (dimension ``d``) or on the product space of
``n_voters`` voters (dimension ``d ** n_voters``). Product-basis indices are
row-major in voter order, so voter 0 is the most significant digit, matching
``np.kron`` composition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

STATE_TOL = 1e-9
EXACT_TOL = 1e-12
SUPPORT_THRESHOLD = 1e-10


class StateError(ValueError):
    pass


class ZeroSupport(StateError):
    """A projection annihilated the state."""


@dataclass(frozen=True, eq=False)
class StateVector:
    """A (possibly joint) pure state.

    ``normalized=False`` marks intermediate vectors that are deliberately not
    unit length; such vectors are rejected by measurement functions.
    """

    amplitudes: np.ndarray
    d: int
    n_voters: int = 1
    normalized: bool = True

    def __post_init__(self) -> None:
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        if self.d < 1 or self.n_voters < 1:
            raise StateError("dimension and voter count must be positive")
        if amps.size != self.d**self.n_voters:
            raise StateError(f"expected {self.d ** self.n_voters} amplitudes, got {amps.size}")
        if self.normalized and abs(self.norm() - 1.0) > STATE_TOL:
            raise StateError(f"state is not normalized (norm {self.norm():.12g})")

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalize(self) -> "StateVector":
        n = self.norm()
        if n <= SUPPORT_THRESHOLD:
            raise ZeroSupport("cannot normalize a zero vector")
        return StateVector(self.amplitudes / n, self.d, self.n_voters)

    def density(self) -> "DensityOperator":
        return DensityOperator(np.outer(self.amplitudes, self.amplitudes.conj()), self.d, self.n_voters)


@dataclass(frozen=True, eq=False)
class DensityOperator:
    matrix: np.ndarray
    d: int
    n_voters: int = 1

    def __post_init__(self) -> None:
        mat = np.array(self.matrix, dtype=complex)
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        dim = self.d**self.n_voters
        if mat.shape != (dim, dim):
            raise StateError(f"expected a {dim}x{dim} matrix, got shape {mat.shape}")
        problem = density_problem(mat)
        if problem:
            raise StateError(problem)

    @classmethod
    def diagonal(cls, weights: Sequence[float], d: int | None = None, n_voters: int = 1) -> "DensityOperator":
        w = np.asarray(weights, dtype=float)
        return cls(np.diag(w), d if d is not None else w.size, n_voters)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def diag(self) -> np.ndarray:
        return self.matrix.diagonal().real.copy()

    def density(self) -> "DensityOperator":
        return self


State = Union[StateVector, DensityOperator]


def density_problem(matrix: np.ndarray, tol: float = STATE_TOL) -> str | None:
    """Describe why ``matrix`` is not a density operator, or return None."""
    if not np.allclose(matrix, matrix.conj().T, atol=tol, rtol=0):
        return "matrix is not Hermitian"
    tr = np.trace(matrix).real
    if abs(tr - 1.0) > tol:
        return f"trace is {tr:.12g}, not 1"
    lo = np.linalg.eigvalsh((matrix + matrix.conj().T) / 2).min()
    if lo < -tol:
        return f"matrix is not positive semidefinite (min eigenvalue {lo:.3g})"
    return None


def ket(d: int, index: int) -> StateVector:
    if not 0 <= index < d:
        raise StateError(f"basis index {index} out of range for dimension {d}")
    amps = np.zeros(d, dtype=complex)
    amps[index] = 1.0
    return StateVector(amps, d)


def basis_density(d: int, index: int) -> DensityOperator:
    w = np.zeros(d)
    if not 0 <= index < d:
        raise StateError(f"basis index {index} out of range for dimension {d}")
    w[index] = 1.0
    return DensityOperator.diagonal(w)


def as_density(state: State) -> DensityOperator:
    return state.density()


def tensor(states: Sequence[State]) -> State:
    """Kronecker product in voter order.

    All factors pure gives a StateVector; any mixed factor gives a DensityOperator.
    """
    if not states:
        raise StateError("tensor of an empty list")
    d = states[0].d
    if any(s.d != d for s in states):
        raise StateError("all factors must share one preference basis")
    n = sum(s.n_voters for s in states)
    if all(isinstance(s, StateVector) for s in states):
        amps = states[0].amplitudes
        for s in states[1:]:
            amps = np.kron(amps, s.amplitudes)
        return StateVector(amps, d, n)
    mat = as_density(states[0]).matrix
    for s in states[1:]:
        mat = np.kron(mat, as_density(s).matrix)
    return DensityOperator(mat, d, n)


def partial_trace(joint: State, keep: int) -> DensityOperator:
    """Reduced state of voter ``keep`` (0-based)."""
    n, d = joint.n_voters, joint.d
    if not 0 <= keep < n:
        raise StateError(f"voter index {keep} out of range for {n} voters")
    if isinstance(joint, StateVector):
        psi = np.moveaxis(joint.amplitudes.reshape((d,) * n), keep, 0).reshape(d, -1)
        return DensityOperator(psi @ psi.conj().T, d)
    rho = joint.matrix.reshape((d,) * (2 * n))
    # contract every voter except `keep` between the row and column halves
    others = [i for i in range(n) if i != keep]
    letters = "abcdefghijklmnopqrstuvwxyz"
    if 2 * n > len(letters):
        raise StateError("too many voters for partial_trace")
    row = [letters[i] for i in range(n)]
    col = [letters[n + i] for i in range(n)]
    for i in others:
        col[i] = row[i]
    spec = "".join(row) + "".join(col) + "->" + row[keep] + col[keep]
    return DensityOperator(np.einsum(spec, rho), d)


def marginals(joint: State) -> list[DensityOperator]:
    return [partial_trace(joint, i) for i in range(joint.n_voters)]


def projector(dim: int, indices: Iterable[int]) -> np.ndarray:
    p = np.zeros((dim, dim))
    for i in indices:
        if not 0 <= i < dim:
            raise StateError(f"index {i} out of range for dimension {dim}")
        p[i, i] = 1.0
    return p


def support_weight(state: State, indices: Iterable[int]) -> float:
    """Tr(P rho) for the coordinate projector onto ``indices``."""
    idx = np.fromiter(indices, dtype=int)
    if isinstance(state, StateVector):
        return float(np.sum(np.abs(state.amplitudes[idx]) ** 2))
    return float(state.matrix.diagonal().real[idx].sum())


def project_renormalize(state: State, indices: Iterable[int]) -> State:
    idx = sorted(set(indices))
    p = projector(state.dim, idx)
    if isinstance(state, StateVector):
        v = p @ state.amplitudes
        n = np.linalg.norm(v)
        if n**2 <= SUPPORT_THRESHOLD:
            raise ZeroSupport("projection annihilates the state")
        return StateVector(v / n, state.d, state.n_voters)
    m = p @ state.matrix @ p
    tr = np.trace(m).real
    if tr <= SUPPORT_THRESHOLD:
        raise ZeroSupport("projection annihilates the state")
    return DensityOperator(m / tr, state.d, state.n_voters)


def phase_damp(rho: State) -> DensityOperator:
    """Fully dephase in the preference basis: keep the diagonal, drop coherences."""
    rho = as_density(rho)
    return DensityOperator(np.diag(rho.matrix.diagonal()), rho.d, rho.n_voters)


def born_distribution(state: State) -> np.ndarray:
    """Outcome probabilities of a preference-basis measurement, indexed like the basis."""
    if isinstance(state, StateVector):
        if not state.normalized:
            raise StateError("cannot measure an unnormalized vector")
        p = np.abs(state.amplitudes) ** 2
    else:
        p = state.matrix.diagonal().real.copy()
    if abs(p.sum() - 1.0) > STATE_TOL:
        raise StateError(f"probabilities sum to {p.sum():.12g}")
    p[p < 0] = 0.0
    return p


def sample(state: State, rng: np.random.Generator, size: int | None = None):
    """Draw basis indices from the Born distribution of ``state``."""
    p = born_distribution(state)
    return rng.choice(p.size, size=size, p=p / p.sum())


def decode_joint(index: int | np.ndarray, d: int, n_voters: int) -> tuple:
    return np.unravel_index(index, (d,) * n_voters)


def encode_joint(indices: Sequence[int], d: int) -> int:
    return int(np.ravel_multi_index(tuple(indices), (d,) * len(indices)))


def equal_up_to_phase(u: np.ndarray, v: np.ndarray, atol: float = EXACT_TOL) -> bool:
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    k = int(np.argmax(np.abs(v)))
    if abs(v[k]) <= atol:
        return bool(np.allclose(u, v, atol=atol, rtol=0))
    phase = u[k] / v[k]
    if abs(abs(phase) - 1.0) > 1e-9:
        return False
    return bool(np.allclose(u, phase * v, atol=atol, rtol=0))


def random_density(d: int, rng: np.random.Generator, rank: int | None = None) -> DensityOperator:
    """Random mixed state from the induced (Ginibre) ensemble; full rank by default."""
    rank = d if rank is None else rank
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    m = g @ g.conj().T
    m = (m + m.conj().T) / 2
    return DensityOperator(m / np.trace(m).real, d)


def random_pure(d: int, rng: np.random.Generator) -> StateVector:
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return StateVector(v / np.linalg.norm(v), d)
