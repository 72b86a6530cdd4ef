import numpy as np
import pytest

from unified_monogamy import measures, states
from unified_monogamy.entropy import EntropyParams, unified_entropy
from unified_monogamy.measures import (
    MAX,
    MIN,
    TWO_QUBIT,
    RoofError,
    RoofOptions,
    concurrence,
    convex_roof,
    ensemble_value,
    pure_state_ue,
    tsallis2_two_qubit,
    ue_two_qubit,
)
from unified_monogamy.states import DensityMatrix, PartitionSpec, StateError

T2 = EntropyParams(2, 1)
FAST = RoofOptions(restarts=8)


def example_pair(parties):
    psi = states.build_generalized_schmidt(states.example_schmidt_params())
    return states.reduce(psi, parties)


def random_ensemble_value(rho, p, rng, n_members):
    """Average UE of a random decomposition of ``rho`` (a feasible point of the roof)."""
    vals, vecs = np.linalg.eigh(rho.matrix)
    keep = vals > 1e-12
    psi = (vecs[:, keep] * np.sqrt(vals[keep])).T
    r = psi.shape[0]
    u = states.haar_random_unitary(n_members, rng)[:, :r]
    tilde = u @ psi
    total = 0.0
    for row in tilde:
        w = np.vdot(row, row).real
        if w < 1e-15:
            continue
        member = states.PureState(rho.dims, row / np.sqrt(w))
        total += w * pure_state_ue(member, TWO_QUBIT, p)
    return total


# -- pure states -------------------------------------------------------------

def test_pure_product_is_zero():
    psi = states.product_state([1, 1j], [0.3, 0.7], [1, 0])
    assert pure_state_ue(psi, PartitionSpec(0, (1, 2)), T2) < 1e-15


def test_pure_example_state():
    psi = states.build_generalized_schmidt(states.example_schmidt_params())
    assert abs(pure_state_ue(psi, PartitionSpec(0, (1, 2)), T2) - 4 / 9) < 1e-14


@pytest.mark.parametrize("focus", [0, 1, 2])
def test_pure_ghz(focus):
    others = tuple(i for i in range(3) if i != focus)
    assert abs(pure_state_ue(states.ghz_state(3), PartitionSpec(focus, others), T2) - 0.5) < 1e-15


@pytest.mark.parametrize("p", [EntropyParams(2, 1), EntropyParams(1, 1), EntropyParams(0.5, 0.3)])
def test_pure_two_party_symmetric(p):
    psi = states.haar_random_pure(2, 4)
    a = pure_state_ue(psi, PartitionSpec(0, (1,)), p)
    b = pure_state_ue(psi, PartitionSpec(1, (0,)), p)
    assert abs(a - b) < 1e-12


def test_pure_partition_must_cover():
    with pytest.raises(StateError):
        pure_state_ue(states.ghz_state(3), PartitionSpec(0, (1,)), T2)


# -- concurrence ---------------------------------------------------------------

def test_concurrence_bell_and_product():
    assert abs(concurrence(states.bell_state()) - 1) < 1e-14
    assert concurrence(states.product_state([1, 2j], [0.5, -1])) < 1e-14


@pytest.mark.parametrize("p", np.linspace(0, 1, 21))
def test_concurrence_werner(p):
    assert abs(concurrence(states.werner_state(p)) - max(0.0, (3 * p - 1) / 2)) < 1e-12


def test_concurrence_pure_formula():
    # for pure states C = 2|ad - bc|
    for seed in range(20):
        a, b, c, d = states.haar_random_pure(2, seed).amplitudes
        psi = states.PureState((2, 2), np.array([a, b, c, d]))
        assert abs(concurrence(psi) - 2 * abs(a * d - b * c)) < 1e-12


def test_concurrence_rejects_three_qubits():
    with pytest.raises(StateError):
        concurrence(states.ghz_state(3))


def test_tsallis2_examples():
    assert abs(tsallis2_two_qubit(states.bell_state()) - 0.5) < 1e-14
    assert tsallis2_two_qubit(states.random_separable(3, 1)) < 1e-14
    assert abs(tsallis2_two_qubit(example_pair((0, 1))) - 1 / 9) < 1e-14
    assert abs(tsallis2_two_qubit(example_pair((0, 2))) - 1 / 3) < 1e-14


# -- convex roof ----------------------------------------------------------------

@pytest.mark.parametrize("p", [EntropyParams(2, 1), EntropyParams(1.5, 0.9), EntropyParams(3, 0.5),
                               EntropyParams(1, 1), EntropyParams(2, 0)])
def test_roof_gradient_matches_finite_differences(p):
    rho = states.ginibre_mixed(4, 2, 21, dims=(2, 2))
    obj = measures._RoofObjective(rho, TWO_QUBIT, p, 4)
    obj.u0 = states.haar_random_unitary(4, states.make_rng(5))
    x = states.make_rng(6).normal(size=16) * 0.3
    _, g = obj.value_and_grad(x, 1.0)
    h = 1e-6
    for i in range(16):
        e = np.zeros(16)
        e[i] = h
        fd = (obj.value_and_grad(x + e, 1.0, False) - obj.value_and_grad(x - e, 1.0, False)) / (2 * h)
        assert abs(fd - g[i]) < 1e-7


def test_roof_rank_one_equals_pure_value():
    psi = states.haar_random_pure(2, 3)
    res = convex_roof(psi.density_matrix(), TWO_QUBIT, T2)
    assert res.restarts_used == 0
    assert abs(res.value - pure_state_ue(psi, TWO_QUBIT, T2)) < 1e-12


def test_roof_bell_state():
    assert abs(ue_two_qubit(states.bell_state(), T2, fast_path=False) - 0.5) < 1e-12


@pytest.mark.parametrize("seed", range(5))
def test_roof_separable_is_zero(seed):
    rho = states.random_separable(2 + seed % 3, seed)
    res = convex_roof(rho, TWO_QUBIT, T2, MIN, FAST)
    assert res.value < 1e-6


def test_roof_max_on_example_pair():
    rho = example_pair((0, 2))
    res = convex_roof(rho, TWO_QUBIT, T2, MAX, FAST)
    assert res.converged
    assert abs(res.value - 2 / 5) < 1e-9
    # the eigen-decomposition attains the optimum
    vals, vecs = np.linalg.eigh(rho.matrix)
    eig = sum(v * pure_state_ue(states.PureState((2, 2), vecs[:, i]), TWO_QUBIT, T2)
              for i, v in enumerate(vals) if v > 1e-12)
    assert abs(eig - 2 / 5) < 1e-12


def test_roof_other_example_pair():
    rho = example_pair((0, 1))
    assert abs(convex_roof(rho, TWO_QUBIT, T2, MIN, FAST).value - 1 / 9) < 1e-9
    assert abs(convex_roof(rho, TWO_QUBIT, T2, MAX, FAST).value - 2 / 9) < 1e-9


@pytest.mark.parametrize("p", [EntropyParams(2, 1), EntropyParams(1.5, 0.9)])
def test_roof_certificates(p):
    rng = states.make_rng(77)
    for seed in range(3):
        rho = states.ginibre_mixed(4, 2 + seed % 2, 100 + seed, dims=(2, 2))
        lo = convex_roof(rho, TWO_QUBIT, p, MIN, FAST)
        hi = convex_roof(rho, TWO_QUBIT, p, MAX, FAST)
        assert lo.value <= hi.value + 1e-12
        for _ in range(100):
            v = random_ensemble_value(rho, p, rng, int(rng.integers(rho.rank(), 7)))
            assert lo.value <= v + 1e-9
            assert hi.value >= v - 1e-9


def test_roof_ensemble_self_consistent():
    rho = states.ginibre_mixed(4, 3, 8, dims=(2, 2))
    for direction in (MIN, MAX):
        res = convex_roof(rho, TWO_QUBIT, T2, direction, FAST)
        ens = res.ensemble
        assert abs(ens.weights.sum() - 1) < 1e-10
        assert np.abs(ens.density_matrix() - rho.matrix).max() < 1e-8
        assert abs(ensemble_value(ens, T2) - res.value) < 1e-9
        norms = np.linalg.norm(ens.states, axis=1)
        assert np.allclose(norms, 1, atol=1e-12)


def test_roof_focus_second_party():
    # swapping the roles of the two qubits leaves the roof unchanged
    rho = states.ginibre_mixed(4, 2, 9, dims=(2, 2))
    a = convex_roof(rho, PartitionSpec(0, (1,)), T2, MIN, FAST).value
    b = convex_roof(rho, PartitionSpec(1, (0,)), T2, MIN, FAST).value
    assert abs(a - b) < 1e-7


def test_roof_nelder_mead_agrees():
    rho = states.ginibre_mixed(4, 2, 13, dims=(2, 2))
    opts = RoofOptions(restarts=4, method="nelder-mead", max_iter=4000)
    nm = convex_roof(rho, TWO_QUBIT, T2, MIN, opts).value
    assert abs(nm - tsallis2_two_qubit(rho)) < 5e-4


def test_roof_deterministic():
    rho = states.ginibre_mixed(4, 3, 14, dims=(2, 2))
    a = convex_roof(rho, TWO_QUBIT, EntropyParams(1.5, 0.9), MIN, FAST)
    b = convex_roof(rho, TWO_QUBIT, EntropyParams(1.5, 0.9), MIN, FAST)
    assert a.value == b.value
    assert a.restart_values == b.restart_values


def test_roof_errors():
    with pytest.raises(ValueError):
        convex_roof(states.bell_state(), TWO_QUBIT, T2, "sideways")
    rho = states.ginibre_mixed(8, 2, 0, dims=(2, 2, 2))
    with pytest.raises(RoofError):
        convex_roof(rho, PartitionSpec(0, (1, 2)), T2, MIN, RoofOptions(max_dim=4))
    with pytest.raises(ValueError):
        RoofOptions(restarts=0)
    with pytest.raises(ValueError):
        RoofOptions(ensemble_multiplier=5)


def test_roof_three_party_bipartition():
    # A | BC roof of a rank-2 three-qubit state; a pure member gives the exact value
    psi = states.haar_random_pure(3, 5)
    res = convex_roof(psi.density_matrix(), PartitionSpec(0, (1, 2)), T2)
    assert abs(res.value - pure_state_ue(psi, PartitionSpec(0, (1, 2)), T2)) < 1e-12
    rho = states.ginibre_mixed(8, 2, 6, dims=(2, 2, 2))
    lo = convex_roof(rho, PartitionSpec(0, (1, 2)), T2, MIN, FAST)
    hi = convex_roof(rho, PartitionSpec(0, (1, 2)), T2, MAX, FAST)
    assert 0 <= lo.value <= hi.value <= 0.5


def test_local_unitary_invariance_closed_form():
    rng = states.make_rng(3)
    for i in range(10):
        rho = states.ginibre_mixed(4, 2 + i % 3, 300 + i, dims=(2, 2))
        base = ue_two_qubit(rho, T2, fast_path=True)
        for _ in range(10):
            u = np.kron(states.haar_random_unitary(2, rng), states.haar_random_unitary(2, rng))
            moved = DensityMatrix((2, 2), u @ rho.matrix @ u.conj().T)
            assert abs(ue_two_qubit(moved, T2, fast_path=True) - base) < 1e-6


def test_local_unitary_invariance_optimizer():
    p = EntropyParams(1.5, 0.9)
    rng = states.make_rng(4)
    for i in range(3):
        rho = states.ginibre_mixed(4, 2, 400 + i, dims=(2, 2))
        base = ue_two_qubit(rho, p, FAST)
        for _ in range(3):
            u = np.kron(states.haar_random_unitary(2, rng), states.haar_random_unitary(2, rng))
            moved = DensityMatrix((2, 2), u @ rho.matrix @ u.conj().T)
            assert abs(ue_two_qubit(moved, p, FAST) - base) < 1e-6


def test_fast_path_validation_sets_flag(monkeypatch):
    monkeypatch.setitem(measures._fast_path_state, "validated", False)
    assert not measures.fast_path_validated()
    rep = measures.validate_tsallis2_fast_path(n_states=4, opts=FAST)
    assert rep["passed"] and rep["max_abs_error"] < 5e-4
    assert measures.fast_path_validated()


def test_dispatch_without_validation_uses_optimizer(monkeypatch):
    monkeypatch.setitem(measures._fast_path_state, "validated", False)
    rho = states.ginibre_mixed(4, 2, 31, dims=(2, 2))
    calls = []
    real = measures.convex_roof

    def spy(*args, **kwargs):
        calls.append(args)
        return real(*args, **kwargs)

    monkeypatch.setattr(measures, "convex_roof", spy)
    val = ue_two_qubit(rho, T2, FAST)
    assert calls
    assert abs(val - tsallis2_two_qubit(rho)) < 5e-4


def test_ensemble_value_matches_entropy():
    phi = states.bell_state().amplitudes
    ens = measures.DecompositionEnsemble(np.array([1.0]), phi[None, :], (2, 2))
    assert abs(ensemble_value(ens, T2) - unified_entropy([0.5, 0.5], T2)) < 1e-15
