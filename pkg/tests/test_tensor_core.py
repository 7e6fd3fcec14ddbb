import itertools

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import random_density, random_unitary, seeds
from entkit.jacobi import jacobi_eigh
from entkit.state_zoo import make_dicke, make_ghz, make_product_ansatz, make_sigma_theta
from entkit.tensor_core import (
    DensityMatrix,
    PartyStructure,
    ProductState,
    PureState,
    SeparableEnsemble,
    hermitian_eig,
    ket,
    kron,
    partial_trace,
    permutation_twirl,
    permute_parties,
    phase_twirl,
    relative_entropy,
    von_neumann_entropy,
)


def proj(v):
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


def qubit_dm(m):
    n = int(np.log2(len(m)))
    return DensityMatrix(PartyStructure.qubits(n), m)


# kron / types

def test_kron_examples():
    p0, p1 = np.diag([1.0, 0.0]), np.diag([0.0, 1.0])
    assert np.array_equal(kron(p0, p0), np.diag([1.0, 0, 0, 0]))
    assert np.array_equal(kron(p0, p1), proj(ket((0, 1), (2, 2))).real)


def test_types_reject_invalid_input():
    with pytest.raises(ValueError):
        PartyStructure(())
    with pytest.raises(ValueError):
        PureState(PartyStructure.qubits(1), [1.0, 1.0])
    with pytest.raises(ValueError):
        DensityMatrix(PartyStructure.qubits(1), np.diag([0.7, 0.7]))
    with pytest.raises(ValueError):
        DensityMatrix(PartyStructure.qubits(1), np.array([[0.5, 1.0], [0.0, 0.5]]))
    with pytest.raises(ValueError):
        DensityMatrix(PartyStructure.qubits(1), np.diag([1.5, -0.5]))
    with pytest.raises(ValueError):
        ProductState(PartyStructure.qubits(2), (np.array([1.0, 0.0]),))


def test_separable_ensemble_density():
    a = ProductState(PartyStructure.qubits(2), (np.array([1, 0]), np.array([1, 0])))
    b = ProductState(PartyStructure.qubits(2), (np.array([0, 1]), np.array([0, 1])))
    rho = SeparableEnsemble([0.25, 0.75], [a, b]).as_density()
    assert np.allclose(rho.matrix, np.diag([0.25, 0, 0, 0.75]))
    with pytest.raises(ValueError):
        SeparableEnsemble([0.5, 0.6], [a, b])


# eigensolvers

@pytest.mark.parametrize("method", ["lapack", "jacobi"])
def test_eig_examples(method):
    w, _ = hermitian_eig(np.diag([3.0, 1.0, 2.0]), method=method)
    assert np.allclose(w, [1, 2, 3])
    w, v = hermitian_eig(np.array([[0, 1], [1, 0]], dtype=complex), method=method)
    assert np.allclose(w, [-1, 1])
    minus = np.array([1, -1]) / np.sqrt(2)
    plus = np.array([1, 1]) / np.sqrt(2)
    assert abs(abs(np.vdot(minus, v[:, 0])) - 1) < 1e-12
    assert abs(abs(np.vdot(plus, v[:, 1])) - 1) < 1e-12


@pytest.mark.parametrize("method", ["lapack", "jacobi"])
@pytest.mark.parametrize("seed", range(5))
def test_eig_reconstruction(method, seed):
    rng = np.random.default_rng(seed)
    h = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    h = 0.5 * (h + h.conj().T)
    w, v = hermitian_eig(h, method=method)
    assert np.abs(v @ np.diag(w) @ v.conj().T - h).max() <= 1e-10
    assert np.abs(v.conj().T @ v - np.eye(8)).max() <= 1e-10
    assert np.all(np.diff(w) >= 0)


def test_jacobi_matches_lapack_on_degenerate_spectrum():
    rng = np.random.default_rng(3)
    u = random_unitary(rng, 6)
    h = u @ np.diag([1, 1, 1, 2, 2, 5]) @ u.conj().T
    w, _, sweeps = jacobi_eigh(h)
    assert np.allclose(w, [1, 1, 1, 2, 2, 5], atol=1e-12)
    assert sweeps <= 100


def test_eig_rejects_non_hermitian():
    with pytest.raises(ValueError):
        hermitian_eig(np.array([[0, 1], [0, 0]], dtype=complex))


# entropies

def test_von_neumann_examples():
    assert abs(von_neumann_entropy(make_ghz(3).density())) < 1e-12
    assert abs(von_neumann_entropy(qubit_dm(np.eye(2) / 2)) - 1) < 1e-12
    assert abs(von_neumann_entropy(qubit_dm(np.diag([0.75, 0.25]))) - 0.811278) < 1e-6


def test_relative_entropy_examples():
    ghz = make_ghz(3).density()
    sigma2 = qubit_dm(np.diag([0.5, 0, 0, 0, 0, 0, 0, 0.5]))
    assert abs(relative_entropy(ghz, ghz)) < 1e-12
    assert abs(relative_entropy(ghz, sigma2) - 1.0) < 1e-12
    zero, one = qubit_dm(np.diag([1.0, 0.0])), qubit_dm(np.diag([0.0, 1.0]))
    assert relative_entropy(zero, one) == np.inf


def test_relative_entropy_dimension_mismatch():
    with pytest.raises(ValueError):
        relative_entropy(qubit_dm(np.eye(2) / 2), qubit_dm(np.eye(4) / 4))


@given(seed=seeds)
@settings(max_examples=200, deadline=None)
def test_relative_entropy_nonnegative(seed):
    rng = np.random.default_rng(seed)
    rho = random_density(rng, (2, 2), rank=int(rng.integers(1, 5)))
    sigma = random_density(rng, (2, 2))
    assert relative_entropy(rho, sigma) >= -1e-9
    assert abs(relative_entropy(rho, rho)) <= 1e-9


@given(seed=seeds)
@settings(max_examples=200, deadline=None)
def test_relative_entropy_unitary_invariance(seed):
    rng = np.random.default_rng(seed)
    rho, sigma = random_density(rng, (2, 2)), random_density(rng, (2, 2))
    u = random_unitary(rng, 4)
    rot = lambda r: DensityMatrix(r.structure, u @ r.matrix @ u.conj().T, check=False)
    assert abs(relative_entropy(rot(rho), rot(sigma)) - relative_entropy(rho, sigma)) <= 1e-9


@given(seed=seeds)
@settings(max_examples=200, deadline=None)
def test_relative_entropy_joint_convexity(seed):
    rng = np.random.default_rng(seed)
    r1, r2, s1, s2 = (random_density(rng, (2, 2)) for _ in range(4))
    lam = rng.uniform()
    mix = lambda a, b: DensityMatrix(a.structure, lam * a.matrix + (1 - lam) * b.matrix)
    lhs = relative_entropy(mix(r1, r2), mix(s1, s2))
    rhs = lam * relative_entropy(r1, s1) + (1 - lam) * relative_entropy(r2, s2)
    assert lhs <= rhs + 1e-9


def test_relative_entropy_zero_only_at_equality():
    rng = np.random.default_rng(11)
    for _ in range(50):
        rho, sigma = random_density(rng, (2, 2)), random_density(rng, (2, 2))
        if np.abs(rho.matrix - sigma.matrix).max() > 1e-8:
            assert relative_entropy(rho, sigma) > 1e-9


# partial trace

def test_partial_trace_dicke_cascade():
    reduced = partial_trace(make_dicke(4, 1).density(), {1, 2, 3})
    expected = 0.75 * proj(make_dicke(3, 1).amplitudes) + 0.25 * proj(make_dicke(3, 0).amplitudes)
    assert np.abs(reduced.matrix - expected).max() < 1e-12


def test_partial_trace_bell_and_product():
    bell = PureState(PartyStructure.qubits(2), np.array([1, 0, 0, 1]) / np.sqrt(2))
    assert np.allclose(partial_trace(bell.density(), {1}).matrix, np.eye(2) / 2)
    a, b, c = np.array([1, 1j]) / np.sqrt(2), np.array([0.6, 0.8]), np.array([1, 0, 0])
    prod_state = ProductState(PartyStructure((2, 2, 3)), (a, b, c)).as_pure()
    kept = partial_trace(prod_state.density(), {0, 2})
    assert np.abs(kept.matrix - proj(np.kron(a, c))).max() < 1e-12
    assert kept.structure.dims == (2, 3)


def test_partial_trace_errors():
    rho = make_ghz(3).density()
    with pytest.raises(ValueError):
        partial_trace(rho, set())
    with pytest.raises(ValueError):
        partial_trace(rho, {0, 5})


@given(seed=seeds)
@settings(max_examples=200, deadline=None)
def test_partial_trace_composes(seed):
    rng = np.random.default_rng(seed)
    rho = random_density(rng, (2, 3, 2, 2))
    # drop party 1, then (original) party 2, versus dropping both at once
    step = partial_trace(partial_trace(rho, {0, 2, 3}), {0, 2})
    direct = partial_trace(rho, {0, 3})
    assert np.abs(step.matrix - direct.matrix).max() <= 1e-12
    assert abs(np.trace(direct.matrix).real - 1) <= 1e-12


# twirls

def test_phase_twirl_examples():
    twirled = phase_twirl(make_ghz(3).density())
    assert np.allclose(twirled.matrix, np.diag([0.5, 0, 0, 0, 0, 0, 0, 0.5]))
    theta = 0.4
    xi = make_product_ansatz(3, theta, 0.3).as_pure().density()
    assert phase_twirl(xi).allclose(make_sigma_theta(3, theta), atol=1e-12)
    with pytest.raises(ValueError):
        phase_twirl(DensityMatrix(PartyStructure((3,)), np.eye(3) / 3))


def test_permutation_twirl_examples():
    rho = qubit_dm(proj(ket((0, 1), (2, 2))))
    expected = 0.5 * (proj(ket((0, 1), (2, 2))) + proj(ket((1, 0), (2, 2))))
    assert np.allclose(permutation_twirl(rho).matrix, expected)
    dicke = make_dicke(4, 2).density()
    assert permutation_twirl(dicke).allclose(dicke, atol=1e-12)
    with pytest.raises(ValueError):
        permutation_twirl(DensityMatrix(PartyStructure((2, 3)), np.eye(6) / 6))


def test_permutation_twirl_is_swap_invariant():
    rho = random_density(np.random.default_rng(5), (2, 2, 2))
    tw = permutation_twirl(rho)
    for perm in itertools.permutations(range(3)):
        assert permute_parties(tw, perm).allclose(tw, atol=1e-12)


@given(seed=seeds)
@settings(max_examples=200, deadline=None)
def test_twirls_idempotent_and_trace_preserving(seed):
    rho = random_density(np.random.default_rng(seed), (2, 2, 2))
    for twirl in (phase_twirl, permutation_twirl):
        once = twirl(rho)
        assert abs(np.trace(once.matrix).real - 1) <= 1e-12
        assert twirl(once).allclose(once, atol=1e-12)
