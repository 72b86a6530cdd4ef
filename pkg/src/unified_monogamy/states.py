"""Multiqubit pure and mixed states: construction, random sampling, reduction."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

from . import linalg
from .linalg import EPS_HERM, EPS_PSD, EPS_TRACE, LinalgError

MAX_PURE_QUBITS = 10
MAX_MIXED_QUBITS = 4
NORM_TOL = 1e-10
SCHMIDT_TOL = 1e-12

_SEED_MASK = (1 << 64) - 1


class StateError(ValueError):
    """A state violates its defining invariants."""


def _check_dims(dims: Sequence[int], size: int) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise StateError(f"invalid subsystem dimensions {dims}")
    if int(np.prod(dims)) != size:
        raise StateError(f"dims {dims} imply size {int(np.prod(dims))}, data has {size}")
    return dims


@dataclass(frozen=True)
class PureState:
    dims: tuple[int, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if not np.all(np.isfinite(amps)):
            raise StateError("amplitudes contain non-finite values")
        object.__setattr__(self, "dims", _check_dims(self.dims, amps.size))
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise StateError(f"state is not normalized: squared norm {norm2!r} (deficit {1.0 - norm2:.3e})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    def density_matrix(self) -> "DensityMatrix":
        return DensityMatrix(self.dims, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True)
class DensityMatrix:
    dims: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        m = linalg.as_matrix(self.matrix)
        if m.shape[0] != m.shape[1]:
            raise StateError(f"density matrix must be square, got {m.shape}")
        object.__setattr__(self, "dims", _check_dims(self.dims, m.shape[0]))
        try:
            vals, _ = linalg.hermitian_eigensystem(m, EPS_HERM)
        except LinalgError as exc:
            raise StateError(str(exc)) from exc
        if vals[-1] < -EPS_PSD:
            raise StateError(f"density matrix is not positive semidefinite (eigenvalue {vals[-1]:.3e})")
        tr = float(np.trace(m).real)
        if abs(tr - 1.0) > EPS_TRACE:
            raise StateError(f"density matrix trace is {tr!r}, not 1")
        m = 0.5 * (m + m.conj().T)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    def spectrum(self) -> np.ndarray:
        return linalg.density_spectrum(self.matrix)

    def rank(self, tol: float = 1e-10) -> int:
        return int(np.sum(linalg.hermitian_eigensystem(self.matrix)[0] > tol))

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))


State = Union[PureState, DensityMatrix]


@dataclass(frozen=True)
class SchmidtParams:
    """Amplitudes and phase of the five-term three-qubit canonical form."""

    lambdas: tuple[float, float, float, float, float]
    phi: float = 0.0

    def __post_init__(self):
        lam = tuple(float(x) for x in self.lambdas)
        if len(lam) != 5:
            raise StateError(f"need five lambdas, got {len(lam)}")
        if any(x < 0 for x in lam):
            raise StateError(f"lambdas must be nonnegative, got {lam}")
        total = sum(x * x for x in lam)
        if abs(total - 1.0) > SCHMIDT_TOL:
            raise StateError(f"sum of squared lambdas is {total!r}, not 1")
        object.__setattr__(self, "lambdas", lam)


@dataclass(frozen=True)
class PartitionSpec:
    """Party ``focus`` (called A) against the ordered parties ``others``."""

    focus: int
    others: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        others = tuple(int(i) for i in self.others)
        object.__setattr__(self, "others", others)
        if not others:
            raise StateError("partition needs at least one other party")
        if len(set(others)) != len(others) or int(self.focus) in others:
            raise StateError(f"partition indices overlap: focus={self.focus}, others={others}")
        if int(self.focus) < 0 or min(others) < 0:
            raise StateError("party indices must be nonnegative")

    @property
    def n_others(self) -> int:
        return len(self.others)

    def parties(self) -> tuple[int, ...]:
        return (int(self.focus),) + self.others

    def validate(self, n_parties: int) -> None:
        if max(self.parties()) >= n_parties:
            raise StateError(f"partition {self.parties()} refers to parties beyond {n_parties}")


def example_schmidt_params() -> SchmidtParams:
    """Parameters of the three-qubit state used in both worked examples."""
    return SchmidtParams((np.sqrt(3) / 3, 0.0, np.sqrt(2) / 2, np.sqrt(6) / 6, 0.0), 0.0)


def build_generalized_schmidt(p: SchmidtParams) -> PureState:
    l0, l1, l2, l3, l4 = p.lambdas
    amps = np.zeros(8, dtype=complex)
    amps[0b000] = l0
    amps[0b100] = l1 * np.exp(1j * p.phi)
    amps[0b101] = l2
    amps[0b110] = l3
    amps[0b111] = l4
    return PureState((2, 2, 2), amps)


def product_state(*kets) -> PureState:
    amps = np.array([1.0 + 0j])
    dims = []
    for k in kets:
        k = np.asarray(k, dtype=complex).reshape(-1)
        k = k / np.linalg.norm(k)
        amps = np.kron(amps, k)
        dims.append(k.size)
    return PureState(tuple(dims), amps)


def bell_state() -> PureState:
    return PureState((2, 2), np.array([1, 0, 0, 1]) / np.sqrt(2))


def ghz_state(n_qubits: int = 3) -> PureState:
    amps = np.zeros(2**n_qubits, dtype=complex)
    amps[0] = amps[-1] = 1 / np.sqrt(2)
    return PureState((2,) * n_qubits, amps)


def w_state(n_qubits: int = 3) -> PureState:
    amps = np.zeros(2**n_qubits, dtype=complex)
    for i in range(n_qubits):
        amps[1 << i] = 1 / np.sqrt(n_qubits)
    return PureState((2,) * n_qubits, amps)


def werner_state(p: float) -> DensityMatrix:
    """``p |Phi+><Phi+| + (1 - p) I/4``."""
    phi = bell_state().amplitudes
    return DensityMatrix((2, 2), p * np.outer(phi, phi.conj()) + (1 - p) * np.eye(4) / 4)


# -- random states -----------------------------------------------------------

def make_rng(seed: int) -> np.random.Generator:
    """Counter-based (Philox) generator keyed by a 64-bit seed."""
    return np.random.Generator(np.random.Philox(int(seed) & _SEED_MASK))


def sample_seed(seed: int, index: int) -> int:
    return (int(seed) ^ int(index)) & _SEED_MASK


def _complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def haar_random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = _complex_gaussian(rng, (dim, dim)) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def haar_random_pure(n_qubits: int, seed: int, max_qubits: int = MAX_PURE_QUBITS) -> PureState:
    if not 1 <= n_qubits <= max_qubits:
        raise StateError(f"n_qubits must be in [1, {max_qubits}], got {n_qubits}")
    rng = make_rng(seed)
    v = _complex_gaussian(rng, 2**n_qubits)
    return PureState((2,) * n_qubits, v / np.linalg.norm(v))


def ginibre_mixed(dim: int, rank: int, seed: int, dims: Sequence[int] | None = None) -> DensityMatrix:
    """Random density matrix ``G G^dagger / tr(G G^dagger)`` with ``G`` of shape ``dim x rank``."""
    if dim < 1 or not 1 <= rank <= dim:
        raise StateError(f"rank must lie in [1, {dim}], got {rank}")
    rng = make_rng(seed)
    g = _complex_gaussian(rng, (dim, rank))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    if dims is None:
        n = int(round(np.log2(dim)))
        dims = (2,) * n if 2**n == dim else (dim,)
    return DensityMatrix(tuple(dims), rho)


def random_product_ket(rng: np.random.Generator, dims: Sequence[int]) -> np.ndarray:
    amps = np.array([1.0 + 0j])
    for d in dims:
        v = _complex_gaussian(rng, d)
        amps = np.kron(amps, v / np.linalg.norm(v))
    return amps


def random_separable(n_terms: int, seed: int, dims: Sequence[int] = (2, 2)) -> DensityMatrix:
    """Convex mixture of ``n_terms`` random product pure states."""
    rng = make_rng(seed)
    w = rng.dirichlet(np.ones(n_terms))
    d = int(np.prod(dims))
    rho = np.zeros((d, d), dtype=complex)
    for wi in w:
        k = random_product_ket(rng, dims)
        rho += wi * np.outer(k, k.conj())
    return DensityMatrix(tuple(dims), rho)


# -- reductions --------------------------------------------------------------

def reduce(state: State, keep: Iterable[int]) -> DensityMatrix:
    """Reduced state on the parties in ``keep`` (ordered by index)."""
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise StateError("keep set must be nonempty")
    if keep[0] < 0 or keep[-1] >= state.n_parties:
        raise StateError(f"keep {keep} out of range for {state.n_parties} parties")
    dims = list(state.dims)
    kdims = tuple(dims[k] for k in keep)
    if isinstance(state, PureState):
        rest = [i for i in range(len(dims)) if i not in keep]
        t = state.amplitudes.reshape(dims).transpose(keep + rest)
        m = t.reshape(int(np.prod(kdims)), -1)
        return DensityMatrix(kdims, m @ m.conj().T)
    try:
        return DensityMatrix(kdims, linalg.partial_trace(state.matrix, dims, keep))
    except LinalgError as exc:
        raise StateError(str(exc)) from exc


def permute(state: State, order: Sequence[int]) -> State:
    """Relabel parties: party ``i`` of the result is party ``order[i]`` of ``state``."""
    order = [int(i) for i in order]
    if sorted(order) != list(range(state.n_parties)):
        raise StateError(f"{order} is not a permutation of the parties")
    dims = list(state.dims)
    new_dims = tuple(dims[i] for i in order)
    if isinstance(state, PureState):
        amps = state.amplitudes.reshape(dims).transpose(order).reshape(-1)
        return PureState(new_dims, amps)
    n = len(dims)
    t = state.matrix.reshape(dims + dims).transpose(order + [n + i for i in order])
    d = int(np.prod(dims))
    return DensityMatrix(new_dims, t.reshape(d, d))


def as_density(state: State) -> DensityMatrix:
    return state.density_matrix() if isinstance(state, PureState) else state
