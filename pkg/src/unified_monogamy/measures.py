"""Unified entanglement (UE) and unified entanglement of assistance (UEoA).

Pure states are handled exactly.  Mixed states go through a convex-roof search
over pure-state ensembles.  Every ensemble of ``m`` members realizing ``rho``
has the form ``|psi~_i> = sum_j V_ij sqrt(mu_j) |v_j>`` with ``(mu_j, v_j)`` the
eigenpairs of ``rho`` and ``V`` an ``m x r`` isometry, so the search runs over
isometries ``V = (exp(A) U0)[:, :r]`` with ``A`` anti-Hermitian and ``U0`` a
random starting unitary.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from . import linalg
from .entropy import EntropyParams, entropy_gradient, entropy_values, unified_entropy
from .states import (
    DensityMatrix,
    PartitionSpec,
    PureState,
    State,
    StateError,
    as_density,
    ginibre_mixed,
    haar_random_unitary,
    make_rng,
    reduce,
    sample_seed,
)

logger = logging.getLogger(__name__)

MIN = "min"
MAX = "max"

_SIGMA_YY = np.array([[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=complex)


class RoofError(RuntimeError):
    """Convex-roof evaluation could not be carried out."""


@dataclass
class RoofOptions:
    """Settings for :func:`convex_roof`.

    ``ensemble_multiplier`` scales the default ensemble size ``r**2`` (at most 4).
    ``method`` is ``"lbfgs"`` (analytic gradient) or ``"nelder-mead"``.
    """

    restarts: int = 32
    max_iter: int = 2000
    ensemble_multiplier: int = 1
    tol: float = 1e-10
    agree_tol: float = 1e-6
    method: str = "lbfgs"
    seed: int = 0
    max_dim: int = 16

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if not 1 <= self.ensemble_multiplier <= 4:
            raise ValueError("ensemble_multiplier must lie in [1, 4]")
        if self.method not in ("lbfgs", "nelder-mead"):
            raise ValueError(f"unknown method {self.method!r}")


@dataclass
class DecompositionEnsemble:
    weights: np.ndarray
    states: np.ndarray  # (n, d), rows normalized
    dims: tuple[int, ...]

    def density_matrix(self) -> np.ndarray:
        return np.einsum("i,ia,ib->ab", self.weights, self.states, self.states.conj())

    def member(self, i: int) -> PureState:
        return PureState(self.dims, self.states[i])


@dataclass
class RoofResult:
    value: float
    ensemble: DecompositionEnsemble
    converged: bool
    restarts_used: int
    restart_values: list[float] = field(default_factory=list)


# -- pure states -------------------------------------------------------------

def _bipartition_check(state: State, part: PartitionSpec) -> None:
    part.validate(state.n_parties)
    if sorted(part.parties()) != list(range(state.n_parties)):
        raise StateError(f"partition {part.parties()} does not cover all {state.n_parties} parties")


def pure_state_ue(psi: PureState, part: PartitionSpec, p: EntropyParams) -> float:
    """Unified entropy of the focus party's reduced state."""
    _bipartition_check(psi, part)
    rho_a = reduce(psi, [part.focus])
    return unified_entropy(rho_a.spectrum(), p)


# -- two-qubit closed forms ----------------------------------------------------

def _two_qubit(rho: State) -> np.ndarray:
    rho = as_density(rho)
    if rho.dims != (2, 2):
        raise StateError(f"expected a two-qubit state, got dims {rho.dims}")
    return rho.matrix


def concurrence(rho: State) -> float:
    """Wootters concurrence of a two-qubit state.

    With ``rho = F F^dagger`` the values ``s_i`` (square roots of the eigenvalues
    of ``sqrt(rho) rho~ sqrt(rho)``) are the singular values of
    ``F^T (Y x Y) F``; taking them directly avoids square roots of round-off.
    """
    m = _two_qubit(rho)
    vals, vecs = linalg.hermitian_eigensystem(m)
    keep = vals > 1e-14
    f = vecs[:, keep] * np.sqrt(vals[keep])
    sv = np.zeros(4)
    s = np.linalg.svd(f.T @ _SIGMA_YY @ f, compute_uv=False)
    sv[:s.size] = s
    return float(max(0.0, sv[0] - sv[1] - sv[2] - sv[3]))


def tsallis2_two_qubit(rho: State) -> float:
    """Closed-form Tsallis-2 entanglement ``C**2 / 2`` of a two-qubit state."""
    return concurrence(rho) ** 2 / 2


# -- convex roof ---------------------------------------------------------------

def _antihermitian(x: np.ndarray, m: int) -> np.ndarray:
    a = np.zeros((m, m), dtype=complex)
    iu = np.triu_indices(m, 1)
    k = len(iu[0])
    a[iu] = x[m:m + k] + 1j * x[m + k:]
    a = a - a.conj().T
    a[np.diag_indices(m)] = 1j * x[:m]
    return a


def _antihermitian_coords(g: np.ndarray, m: int) -> np.ndarray:
    """Real-coordinate gradient from a complex gradient ``g`` (dF = Re tr(g^H dA))."""
    iu = np.triu_indices(m, 1)
    lo = (iu[1], iu[0])
    return np.concatenate([
        np.diagonal(g).imag,
        (g[iu] - g[lo]).real,
        (g[iu] + g[lo]).imag,
    ])


class _RoofObjective:
    """Average pure-state entanglement as a function of the isometry coordinates."""

    def __init__(self, rho: DensityMatrix, part: PartitionSpec, p: EntropyParams, m: int,
                 rank_tol: float = 1e-12):
        order = list(part.parties())
        mat = _permuted_matrix(rho, order)
        vals, vecs = linalg.hermitian_eigensystem(mat)
        keep = vals > rank_tol
        self.mu = vals[keep]
        self.vecs = vecs[:, keep]
        self.r = int(keep.sum())
        self.psi = (self.vecs * np.sqrt(self.mu)).T  # (r, d)
        self.d_a = rho.dims[part.focus]
        self.d = mat.shape[0]
        self.d_b = self.d // self.d_a
        self.dims = tuple(rho.dims[i] for i in order)
        self.m = m
        self.p = p
        self.u0 = np.eye(m, dtype=complex)

    def isometry(self, x: np.ndarray):
        a = _antihermitian(x, self.m)
        theta, w = np.linalg.eigh(-1j * a)
        e = np.exp(1j * theta)
        x_mat = (w * e) @ w.conj().T @ self.u0
        return x_mat[:, :self.r], theta, w, e

    def members(self, v: np.ndarray) -> np.ndarray:
        return v @ self.psi  # (m, d), unnormalized

    def value_and_grad(self, x: np.ndarray, sign: float, need_grad: bool = True):
        v, theta, w, e = self.isometry(x)
        tilde = self.members(v)
        mm = tilde.reshape(self.m, self.d_a, self.d_b)
        sigma = mm @ mm.conj().transpose(0, 2, 1)
        lam, u = np.linalg.eigh(sigma)
        lam = np.clip(lam, 0.0, None)
        weight = lam.sum(axis=1)
        live = weight > 1e-14
        f = 0.0
        if live.any():
            probs = lam[live] / weight[live, None]
            f = float(np.dot(weight[live], entropy_values(probs, self.p)))
        if not need_grad:
            return sign * f
        g_lam = np.zeros_like(lam)
        if live.any():
            g_lam[live] = entropy_gradient(lam[live], weight[live], self.p)
        dmat = (u * g_lam[:, None, :]) @ u.conj().transpose(0, 2, 1)
        g_tilde = (2.0 * dmat @ mm).reshape(self.m, self.d)
        g_v = g_tilde @ self.psi.conj().T  # (m, r)
        g_x = np.zeros((self.m, self.m), dtype=complex)
        g_x[:, :self.r] = g_v
        g_e = g_x @ self.u0.conj().T
        h = w.conj().T @ g_e @ w
        ia = 1j * theta
        diff = ia[:, None] - ia[None, :]
        close = np.abs(diff) < 1e-12
        phi = np.where(close, e[:, None], (e[:, None] - e[None, :]) / np.where(close, 1.0, diff))
        g_a = w @ (h * phi.conj()) @ w.conj().T
        return sign * f, sign * _antihermitian_coords(g_a, self.m)

    def ensemble(self, x: np.ndarray) -> DecompositionEnsemble:
        v, *_ = self.isometry(x)
        tilde = self.members(v)
        weights = np.sum(np.abs(tilde) ** 2, axis=1)
        keep = weights > 1e-15
        states = tilde[keep] / np.sqrt(weights[keep, None])
        weights = weights[keep]
        return DecompositionEnsemble(weights / weights.sum(), states, self.dims)


def _permuted_matrix(rho: DensityMatrix, order: list[int]) -> np.ndarray:
    if order == list(range(rho.n_parties)):
        return np.asarray(rho.matrix)
    dims = list(rho.dims)
    n = len(dims)
    t = np.asarray(rho.matrix).reshape(dims + dims).transpose(order + [n + i for i in order])
    return t.reshape(rho.matrix.shape)


def ensemble_value(ens: DecompositionEnsemble, p: EntropyParams) -> float:
    """``sum_i p_i E(psi_i)`` with the focus party first in ``ens.dims``."""
    d_a = ens.dims[0]
    total = 0.0
    for w, s in zip(ens.weights, ens.states):
        mm = s.reshape(d_a, -1)
        eig = np.clip(np.linalg.eigvalsh(mm @ mm.conj().T), 0.0, None)
        total += w * unified_entropy(eig / eig.sum(), p)
    return float(total)


def convex_roof(rho: State, part: PartitionSpec, p: EntropyParams, direction: str = MIN,
                opts: Optional[RoofOptions] = None) -> RoofResult:
    """Optimize the average pure-state UE over decompositions of ``rho``.

    ``direction="min"`` gives UE, ``direction="max"`` gives UEoA.  The ensemble
    in the result is expressed with the parties reordered as
    ``part.parties()`` (focus first).
    """
    opts = opts or RoofOptions()
    if direction not in (MIN, MAX):
        raise ValueError(f"direction must be 'min' or 'max', got {direction!r}")
    rho = as_density(rho)
    _bipartition_check(rho, part)
    dim = rho.matrix.shape[0]
    if dim > opts.max_dim:
        raise RoofError(f"bipartite dimension {dim} exceeds the convex-roof limit {opts.max_dim}")

    m0 = 1
    obj = _RoofObjective(rho, part, p, m0)
    r = obj.r
    if r == 0:
        raise RoofError("operator has no positive eigenvalue")
    if r == 1:
        ens = obj.ensemble(np.zeros(1))
        value = ensemble_value(ens, p)
        return RoofResult(value, ens, True, 0, [value])

    m = opts.ensemble_multiplier * r * r
    obj = _RoofObjective(rho, part, p, m)
    sign = 1.0 if direction == MIN else -1.0
    rng = make_rng(opts.seed)
    n_par = m * m
    outcomes = []
    for _ in range(opts.restarts):
        obj.u0 = haar_random_unitary(m, rng)
        x0 = np.zeros(n_par)
        try:
            if opts.method == "lbfgs":
                res = minimize(obj.value_and_grad, x0, args=(sign,), jac=True, method="L-BFGS-B",
                               options={"maxiter": opts.max_iter, "ftol": 1e-15, "gtol": opts.tol})
            else:
                res = minimize(obj.value_and_grad, x0, args=(sign, False), method="Nelder-Mead",
                               options={"maxiter": opts.max_iter, "xatol": opts.tol,
                                        "fatol": opts.tol, "adaptive": True})
        except (np.linalg.LinAlgError, ValueError, FloatingPointError) as exc:
            logger.warning("convex-roof restart failed: %s", exc)
            continue
        if not np.isfinite(res.fun):
            continue
        outcomes.append((sign * float(res.fun), res.x.copy(), obj.u0.copy()))
    if not outcomes:
        raise RoofError("convex-roof optimization failed on every restart")

    outcomes.sort(key=lambda o: sign * o[0])
    best_value, best_x, best_u0 = outcomes[0]
    obj.u0 = best_u0
    ens = obj.ensemble(best_x)
    value = ensemble_value(ens, p)
    converged = len(outcomes) >= 2 and abs(outcomes[0][0] - outcomes[1][0]) < opts.agree_tol
    if not converged:
        logger.info("convex roof not converged: restart spread %s",
                    [round(o[0], 12) for o in outcomes[:2]])
    return RoofResult(value, ens, converged, len(outcomes), [o[0] for o in outcomes])


def ue_mixed(rho: State, part: PartitionSpec, p: EntropyParams, opts: Optional[RoofOptions] = None) -> float:
    return convex_roof(rho, part, p, MIN, opts).value


def ueoa_mixed(rho: State, part: PartitionSpec, p: EntropyParams, opts: Optional[RoofOptions] = None) -> float:
    return convex_roof(rho, part, p, MAX, opts).value


# -- fast-path dispatch --------------------------------------------------------

TWO_QUBIT = PartitionSpec(0, (1,))
FAST_PATH_TOL = 5e-4

_fast_path_state = {"validated": False, "report": None}


def is_tsallis2(p: EntropyParams) -> bool:
    return p.q == 2.0 and p.s == 1.0


def validate_tsallis2_fast_path(n_states: int = 200, seed: int = 20240601, ranks=(2, 3),
                                opts: Optional[RoofOptions] = None, tol: float = FAST_PATH_TOL) -> dict:
    """Compare ``C**2/2`` with the optimizer on random two-qubit states.

    On success the closed form becomes the default for ``(q, s) = (2, 1)`` in
    :func:`ue_two_qubit`.  Returns a report with the largest deviation seen.
    """
    p = EntropyParams(2.0, 1.0)
    opts = opts or RoofOptions()
    worst = 0.0
    unconverged = 0
    for i in range(n_states):
        rank = ranks[i % len(ranks)]
        rho = ginibre_mixed(4, rank, sample_seed(seed, i), dims=(2, 2))
        res = convex_roof(rho, TWO_QUBIT, p, MIN, opts)
        unconverged += not res.converged
        worst = max(worst, abs(res.value - tsallis2_two_qubit(rho)))
    passed = worst < tol
    report = {"n_states": n_states, "max_abs_error": worst, "tolerance": tol,
              "unconverged": unconverged, "passed": passed}
    _fast_path_state["validated"] = passed
    _fast_path_state["report"] = report
    return report


def fast_path_validated() -> bool:
    return bool(_fast_path_state["validated"])


def ue_two_qubit(rho: State, p: EntropyParams, opts: Optional[RoofOptions] = None,
                 fast_path: Optional[bool] = None) -> float:
    """UE of a two-qubit state.

    At ``(q, s) = (2, 1)`` the closed form is used once it has been validated
    (or when ``fast_path=True``); otherwise the convex-roof minimum is computed.
    """
    _two_qubit(rho)
    use_fast = fast_path_validated() if fast_path is None else fast_path
    if use_fast and is_tsallis2(p):
        return tsallis2_two_qubit(rho)
    return convex_roof(rho, TWO_QUBIT, p, MIN, opts).value
