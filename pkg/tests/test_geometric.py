from math import comb, log2, sqrt

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import seeds
from entkit.geometric import (
    GmeConfig,
    _initial_locals,
    convex_roof_segment,
    e_measures,
    epsilon_symmetric,
    lambda_dicke,
    lambda_max_closed_form,
    lambda_max_numeric,
    lower_convex_envelope,
    maximize_1d,
    stationarity_residual,
    symmetric_overlap,
    update_sweep,
)
from entkit.relent import f_upper, segment_f
from entkit.state_zoo import (
    make_determinant,
    make_determinant_general,
    make_dicke,
    make_generalized_symmetric,
    make_ghz,
    make_product_ansatz,
    make_w_superposition,
)
from entkit.tensor_core import PartyStructure, PureState


def random_pure(rng, dims):
    d = int(np.prod(dims))
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState.from_unnormalized(PartyStructure(dims), v)


# closed forms

def test_closed_form_examples():
    assert abs(lambda_max_closed_form("dicke", 3, 2) - 2 / 3) < 1e-15
    assert lambda_max_closed_form("dicke", 5, 0) == 1.0
    assert abs(lambda_max_closed_form("dicke", 4, 2) - sqrt(6) / 4) < 1e-15
    assert abs(lambda_max_closed_form("det", 3) - 1 / sqrt(6)) < 1e-15
    assert abs(lambda_max_closed_form("det_general", 2, 2) ** 2 - 1 / 24) < 1e-15
    with pytest.raises(ValueError):
        lambda_max_closed_form("dicke", 3, 5)
    with pytest.raises(ValueError):
        lambda_max_closed_form("unknown", 3)


@pytest.mark.parametrize("n,k", [(n, k) for n in range(1, 9) for k in range(n + 1)])
def test_dicke_closed_form_matches_brute_force(n, k):
    p = np.linspace(0, 1, 200001)
    brute = np.sqrt(comb(n, k) * p**k * (1 - p) ** (n - k)).max()
    assert abs(lambda_dicke(n, k) - brute) < 1e-8


def test_generalized_closed_form_reduces_to_dicke():
    assert abs(lambda_max_closed_form("generalized", 5, (2, 3)) - lambda_dicke(5, 2)) < 1e-15


def test_config_validation():
    with pytest.raises(ValueError):
        GmeConfig(starts=0)
    with pytest.raises(ValueError):
        GmeConfig(tol=0)


# numerical solver

@pytest.mark.parametrize(
    "psi, lam",
    [
        (make_ghz(3), 1 / sqrt(2)),
        (make_dicke(4, 2), sqrt(6) / 4),
        (make_w_superposition(0.5), sqrt(3) / 2),
        (make_determinant(3), 1 / sqrt(6)),
        (make_generalized_symmetric(3, [1, 1, 1]), lambda_max_closed_form("generalized", 3, (1, 1, 1))),
        (make_product_ansatz(3, 0.3, 1.1).as_pure(), 1.0),
    ],
)
def test_numeric_examples(psi, lam):
    res = lambda_max_numeric(psi, GmeConfig(starts=8))
    assert abs(res.lambda_max - lam) < 1e-7
    assert res.converged


def test_split_determinant_numeric():
    res = lambda_max_numeric(make_determinant_general(2, 2), GmeConfig(starts=4))
    assert abs(res.lambda_max**2 - 1 / 24) < 1e-8


def test_e_measures_examples():
    ghz = e_measures(make_ghz(3))
    assert abs(ghz.e_log2 - 1) < 1e-9 and abs(ghz.e_sin2 - 0.5) < 1e-9
    w = e_measures(make_dicke(3, 2))
    assert abs(w.e_log2 - log2(9 / 4)) < 1e-9
    prod_state = e_measures(make_dicke(3, 0))
    assert prod_state.e_log2 == 0 and abs(prod_state.e_sin2) < 1e-12


@given(seed=seeds)
@settings(max_examples=30, deadline=None)
def test_sweeps_are_monotone(seed):
    rng = np.random.default_rng(seed)
    psi = random_pure(rng, (2, 3, 2))
    locals_ = _initial_locals(psi, 2, rng)
    prev = 0.0
    for _ in range(20):
        locals_, ov = update_sweep(psi.tensor, locals_)
        assert ov >= prev - 1e-12
        prev = ov


@given(seed=seeds)
@settings(max_examples=30, deadline=None)
def test_numeric_result_invariants(seed):
    rng = np.random.default_rng(seed)
    psi = random_pure(rng, (2, 2, 2))
    res = lambda_max_numeric(psi, GmeConfig(starts=4, seed=seed % 1000))
    assert res.lambda_max >= np.abs(psi.amplitudes).max() - 1e-9
    assert res.lambda_max <= 1 + 1e-12
    assert all(b >= a - 1e-12 for a, b in zip(res.trace[1:], res.trace[2:]))
    assert stationarity_residual(psi, res.closest) < 1e-6
    assert abs(res.e_sin2 - (1 - res.lambda_max**2)) < 1e-15
    assert res.e_log2 >= log2(np.e) * res.e_sin2 - 1e-12


def test_numeric_is_deterministic():
    psi = random_pure(np.random.default_rng(0), (2, 2, 2, 2))
    a = lambda_max_numeric(psi, GmeConfig(starts=6, seed=4))
    b = lambda_max_numeric(psi, GmeConfig(starts=6, seed=4))
    assert a.lambda_max == b.lambda_max and a.sweeps_used == b.sweeps_used


# symmetric sector

def test_symmetric_overlap_matches_direct_overlap():
    n, theta = 4, 0.7
    q = np.array([0.1, 0.2, 0.3, 0.15, 0.25])
    amps = sum(np.sqrt(q[k]) * make_dicke(n, k).amplitudes for k in range(n + 1))
    direct = np.vdot(make_product_ansatz(n, theta).vector(), amps).real
    assert abs(symmetric_overlap(n, q, theta) - direct) < 1e-12


def test_maximize_1d():
    # two bumps; the taller one sits at 0.8
    f = lambda t: 0.5 * np.exp(-((t - 0.2) / 0.05) ** 2) + np.exp(-((t - 0.8) / 0.05) ** 2)
    fmax, x = maximize_1d(f, 0, 1)
    assert abs(x - 0.8) < 1e-6 and abs(fmax - 1) < 1e-12


def test_epsilon_examples():
    for n, k in [(3, 2), (4, 1), (5, 5)]:
        q = np.eye(n + 1)[k]
        assert abs(epsilon_symmetric(n, q) + 2 * log2(lambda_dicke(n, k))) < 1e-10
    # equal split between W and W~ peaks at theta = pi/4
    assert abs(epsilon_symmetric(3, [0, 0.5, 0.5, 0]) - log2(4 / 3)) < 1e-10
    with pytest.raises(ValueError):
        epsilon_symmetric(3, [0.5, 0.5, 0.5, 0])


def test_epsilon_below_f_on_random_distributions():
    rng = np.random.default_rng(2024)
    for _ in range(100):
        n = int(rng.integers(2, 8))
        q = rng.dirichlet(np.ones(n + 1))
        assert epsilon_symmetric(n, q) <= f_upper(n, q) + 1e-10


# envelopes

def test_envelope_of_convex_function_is_itself():
    s, env = convex_roof_segment(lambda x: (x - 0.4) ** 2, grid=201)
    assert np.allclose(env, (s - 0.4) ** 2)


def test_envelope_of_tent_is_zero():
    s, env = convex_roof_segment(lambda x: 0.5 - abs(x - 0.5), grid=201)
    assert np.allclose(env, 0)


@given(seed=seeds)
@settings(max_examples=50, deadline=None)
def test_envelope_properties(seed):
    rng = np.random.default_rng(seed)
    xs = np.linspace(0, 1, 101)
    ys = rng.standard_normal(101).cumsum()
    env = lower_convex_envelope(xs, ys)
    assert np.all(env <= ys + 1e-15)
    assert np.diff(env, 2).min() >= -1e-10
    assert env[0] == ys[0] and env[-1] == ys[-1]


def test_envelope_below_f_near_origin_for_4_0_3():
    s, env = convex_roof_segment(segment_f(4, 0, 3), grid=1001, points=np.linspace(0, 0.01, 1001))
    f = np.array([segment_f(4, 0, 3)(x) for x in s])
    gap = f - env
    assert gap[(s > 0) & (s < 0.01)].max() > 1e-6
    assert gap[0] == 0 and gap[-1] == 0
