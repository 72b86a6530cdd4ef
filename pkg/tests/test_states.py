import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unified_monogamy import states
from unified_monogamy.states import (
    DensityMatrix,
    PartitionSpec,
    PureState,
    SchmidtParams,
    StateError,
)


def test_pure_state_norm_deficit_named():
    with pytest.raises(StateError, match="norm"):
        PureState((2,), np.array([1.0, 0.1]))


def test_pure_state_length_checked():
    with pytest.raises(StateError):
        PureState((2, 2), np.array([1.0, 0, 0]))


@pytest.mark.parametrize("m", [
    np.array([[1.0, 0.1], [0.0, 0.0]]),
    np.diag([1.2, -0.2]),
    np.diag([0.5, 0.4]),
])
def test_density_invariants_enforced(m):
    with pytest.raises(StateError):
        DensityMatrix((2,), m)


def test_schmidt_params_normalization():
    with pytest.raises(StateError):
        SchmidtParams((1.0, 0.1, 0, 0, 0))
    with pytest.raises(StateError):
        SchmidtParams((1.0, 0, 0, 0))


def test_partition_spec():
    part = PartitionSpec(0, (2, 1))
    assert part.parties() == (0, 2, 1)
    with pytest.raises(StateError):
        PartitionSpec(0, (0, 1))
    with pytest.raises(StateError):
        PartitionSpec(1, ())
    with pytest.raises(StateError):
        part.validate(2)


def test_schmidt_single_term():
    psi = states.build_generalized_schmidt(SchmidtParams((1, 0, 0, 0, 0)))
    assert np.allclose(psi.amplitudes, np.eye(8)[0])


def test_schmidt_ghz_like():
    r = 1 / np.sqrt(2)
    psi = states.build_generalized_schmidt(SchmidtParams((r, 0, 0, 0, r)))
    assert np.allclose(psi.amplitudes, states.ghz_state(3).amplitudes)


def test_schmidt_phase_on_100():
    psi = states.build_generalized_schmidt(SchmidtParams((0.6, 0.8, 0, 0, 0), np.pi / 2))
    assert abs(psi.amplitudes[0b100] - 0.8j) < 1e-15


def test_example_state_reductions():
    psi = states.build_generalized_schmidt(states.example_schmidt_params())
    spec_a = states.reduce(psi, [0]).spectrum()
    assert np.allclose(spec_a, [2 / 3, 1 / 3], atol=1e-14)

    rho_ab = states.reduce(psi, [0, 1]).matrix
    assert np.linalg.matrix_rank(rho_ab, tol=1e-12) <= 2
    support = np.abs(rho_ab) > 1e-14
    assert not support[0b01].any() and not support[:, 0b01].any()


def test_reduce_bell_and_product():
    phi = states.reduce(states.bell_state(), [1])
    assert np.allclose(phi.matrix, np.eye(2) / 2)
    ra = states.ginibre_mixed(2, 2, 5)
    rb = states.ginibre_mixed(2, 2, 6)
    prod = DensityMatrix((2, 2), np.kron(ra.matrix, rb.matrix))
    assert np.array_equal(states.reduce(prod, [0]).matrix, states.reduce(prod, {0}).matrix)
    assert np.allclose(states.reduce(prod, [0]).matrix, ra.matrix, atol=1e-15)


def test_reduce_errors():
    with pytest.raises(StateError):
        states.reduce(states.bell_state(), [])
    with pytest.raises(StateError):
        states.reduce(states.bell_state(), [2])


@pytest.mark.parametrize("order", list(itertools.permutations(range(3))))
def test_reduce_commutes_with_relabeling(order):
    rho = states.ginibre_mixed(8, 3, 11, dims=(2, 2, 2))
    psi = states.haar_random_pure(3, 12)
    for st_ in (rho, psi):
        moved = states.permute(st_, order)
        for keep_new in ([0], [0, 1], [1, 2], [0, 2]):
            # parties keep_new of the relabeled state are parties order[i] of the original
            keep_old = [order[i] for i in keep_new]
            a = states.reduce(moved, keep_new).matrix
            b = states.reduce(st_, keep_old)
            perm_in_b = np.argsort(np.argsort(keep_old))
            b = states.permute(b, list(perm_in_b)).matrix
            assert np.abs(a - b).max() < 1e-12


def test_haar_deterministic_and_normalized():
    a = states.haar_random_pure(4, 99)
    b = states.haar_random_pure(4, 99)
    c = states.haar_random_pure(4, 100)
    assert np.array_equal(a.amplitudes, b.amplitudes)
    assert not np.allclose(a.amplitudes, c.amplitudes)
    assert abs(np.linalg.norm(a.amplitudes) - 1) < 1e-12


def test_haar_qubit_limit():
    with pytest.raises(StateError):
        states.haar_random_pure(11, 0)
    with pytest.raises(StateError):
        states.haar_random_pure(0, 0)


def test_haar_two_qubit_reduced_purity():
    # E tr(rho_A^2) = (dA + dB)/(dA dB + 1) = 4/5 for a 2x2 Haar state;
    # single-qubit marginal of two qubits
    vals = [states.reduce(states.haar_random_pure(2, i), [0]).purity() for i in range(10_000)]
    assert abs(np.mean(vals) - 4 / 5) < 5e-3


def test_haar_three_qubit_reduced_purity():
    # dA = 2, dB = 4: (2 + 4)/(8 + 1) = 2/3
    vals = [states.reduce(states.haar_random_pure(3, i), [0]).purity() for i in range(10_000)]
    assert abs(np.mean(vals) - 2 / 3) < 5e-3


def test_haar_unitary_is_unitary():
    u = states.haar_random_unitary(6, states.make_rng(3))
    assert np.abs(u.conj().T @ u - np.eye(6)).max() < 1e-12


@given(st.integers(1, 8), st.integers(0, 2**63))
@settings(max_examples=40, deadline=None)
def test_ginibre_valid(dim_log, seed):
    dim = dim_log + 1
    rank = seed % dim + 1
    rho = states.ginibre_mixed(dim, rank, seed)
    assert rho.rank() == rank
    assert abs(np.trace(rho.matrix) - 1) < 1e-12


def test_ginibre_rank_one_is_pure():
    rho = states.ginibre_mixed(4, 1, 7)
    assert abs(rho.purity() - 1) < 1e-10


def test_ginibre_bad_rank():
    with pytest.raises(StateError):
        states.ginibre_mixed(4, 5, 0)


def test_separable_builder():
    rho = states.random_separable(4, 3)
    assert rho.dims == (2, 2)
    assert abs(np.trace(rho.matrix) - 1) < 1e-12


def test_seed_derivation():
    assert states.sample_seed(12345, 7) == 12345 ^ 7
    assert states.sample_seed(-1, 0) == 2**64 - 1


def test_werner_state():
    rho = states.werner_state(0.5)
    assert np.allclose(rho.spectrum(), [5 / 8, 1 / 8, 1 / 8, 1 / 8])
    with pytest.raises(StateError):
        states.werner_state(1.5)
