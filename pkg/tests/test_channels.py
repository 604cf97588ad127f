import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nnqcodes.channels import (
    KrausChannel,
    apply_joint,
    channel_from_dict,
    dephrasure,
    depolarizing,
    gadc,
    identity,
)
from nnqcodes.linalg import DensityMatrix, StateVector, hermitian_eigenvalues, partial_trace

from conftest import random_density, random_state, seeds

X = np.array([[0, 1], [1, 0]], complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0 + 0j, -1.0])
GRID = np.linspace(0, 1, 6)


def bloch(rho):
    return np.real([np.trace(rho @ P) for P in (X, Y, Z)])


@pytest.mark.parametrize("p", list(np.linspace(0, 4 / 3, 7)))
@pytest.mark.parametrize("g", GRID)
def test_completeness_on_grid(p, g):
    for ch in (depolarizing(p), gadc(g, 1 - g), dephrasure(g, 1 - g), dephrasure(g, g)):
        ops = ch.kraus_ops
        assert np.allclose(np.einsum("kji,kjl->il", ops.conj(), ops), np.eye(ch.in_dim), atol=1e-10)


def test_range_checks():
    for bad in (lambda: depolarizing(1.5), lambda: gadc(-0.1, 0.2), lambda: gadc(0.3, 1.2),
                lambda: dephrasure(0.1, 1.1)):
        with pytest.raises(ValueError):
            bad()
    with pytest.raises(ValueError):
        KrausChannel(np.array([np.eye(2) * 0.5]))


def test_depolarizing_action(rng):
    rho = random_density(rng, 2)
    assert np.allclose(depolarizing(0)(rho), rho)
    assert np.allclose(depolarizing(1)(np.diag([1, 0])), np.eye(2) / 2)
    for p in (0.1, 0.2523, 1.2):
        assert np.allclose(depolarizing(p)(rho), (1 - p) * rho + p * np.eye(2) / 2)


def test_depolarizing_shrinks_bloch_vector():
    plus = np.full((2, 2), 0.5)
    assert np.allclose(bloch(depolarizing(0.2523)(plus)), [1 - 0.2523, 0, 0])


def test_gadc_reduces_to_amplitude_damping():
    ch = gadc(0.3, 0.0)
    assert np.allclose(ch.kraus_ops[2:], 0)
    out = ch(np.diag([0, 1.0]))
    assert np.allclose(out, np.diag([0.3, 0.7]))


@pytest.mark.parametrize("g,N", [(0.2, 0.1), (0.44035, 0.1), (0.7, 0.5)])
def test_gadc_single_qubit_action(g, N):
    ch = gadc(g, N)
    assert np.allclose(ch(np.diag([1.0, 0])), np.diag([1 - g * N, g * N]))
    e01 = np.array([[0, 1.0], [0, 0]])
    assert np.allclose(ch(e01), np.sqrt(1 - g) * e01)
    assert np.allclose(ch(np.diag([0, 1.0])), np.diag([g - g * N, 1 - g + g * N]))


def test_dephrasure_action(rng):
    rho = random_density(rng, 2)
    e = np.zeros((3, 3))
    e[2, 2] = 1
    assert np.allclose(dephrasure(0.3, 1)(rho), e)
    emb = np.zeros((3, 3), complex)
    emb[:2, :2] = rho
    assert np.allclose(dephrasure(0, 0)(rho), emb)
    plus = np.full((2, 2), 0.5)
    minus = np.array([[0.5, -0.5], [-0.5, 0.5]])
    out = dephrasure(1, 0)(plus)
    assert np.allclose(out[:2, :2], minus) and np.allclose(out[2], 0)
    p, q = 0.2, 0.35
    expected = np.zeros((3, 3), complex)
    expected[:2, :2] = (1 - q) * ((1 - p) * rho + p * Z @ rho @ Z)
    expected[2, 2] = q
    assert np.allclose(dephrasure(p, q)(rho), expected)


def test_json_round_trip():
    for ch in (depolarizing(0.2), gadc(0.4, 0.1), dephrasure(0.08, 0.4), identity(3)):
        again = channel_from_dict(ch.to_dict())
        assert np.allclose(again.kraus_ops, ch.kraus_ops)
    with pytest.raises(ValueError):
        channel_from_dict({"kind": "bb84"})
    with pytest.raises(ValueError):
        channel_from_dict({"kind": "gadc", "gamma": 0.1})


def test_apply_joint_identity(rng):
    psi = random_state(rng, 16)
    sigma = apply_joint(identity(), 2, StateVector(psi))
    assert np.allclose(sigma.matrix, np.outer(psi, psi.conj()))
    assert sigma.dims == (4, 2, 2)


def test_apply_joint_full_depolarization():
    bell = StateVector(np.array([1, 0, 0, 1]) / np.sqrt(2))
    assert np.allclose(apply_joint(depolarizing(1), 1, bell).matrix, np.eye(4) / 4)


def test_apply_joint_gadc_marginal():
    code = StateVector(np.eye(4)[3])  # |1>_R |1>_A
    sigma = apply_joint(gadc(0.5, 0.5), 1, code)
    assert np.allclose(partial_trace(sigma, [1]).matrix, np.diag([0.25, 0.75]))


def test_apply_joint_dimension_mismatch():
    with pytest.raises(ValueError):
        apply_joint(dephrasure(0.1, 0.1), 2, StateVector(np.ones(6)))


def _brute_force(channel, k, psi):
    dim_r = psi.size // channel.in_dim**k
    out = np.zeros((dim_r * channel.out_dim**k,) * 2, complex)
    import itertools

    for idx in itertools.product(range(channel.num_kraus), repeat=k):
        op = np.eye(dim_r)
        for i in idx:
            op = np.kron(op, channel.kraus_ops[i])
        v = op @ psi
        out += np.outer(v, v.conj())
    return out


@given(seeds, st.integers(1, 3), st.sampled_from(["dep", "gadc", "deph"]))
@settings(max_examples=25, deadline=None)
def test_apply_joint_matches_joint_kraus_and_is_valid(seed, k, kind):
    rng = np.random.default_rng(seed)
    a, b = rng.random(2)
    ch = {"dep": depolarizing(a), "gadc": gadc(a, b), "deph": dephrasure(a, b)}[kind]
    psi = random_state(rng, 2 * 2**k)
    sigma = apply_joint(ch, k, StateVector(psi))
    assert sigma.is_valid(1e-10)
    assert np.allclose(sigma.matrix, _brute_force(ch, k, psi), atol=1e-12)


@given(seeds)
@settings(max_examples=15, deadline=None)
def test_apply_joint_k4_valid(seed):
    rng = np.random.default_rng(seed)
    sigma = apply_joint(gadc(*rng.random(2)), 4, StateVector(random_state(rng, 64)))
    assert sigma.is_valid(1e-10)


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_product_input_factorizes(seed):
    rng = np.random.default_rng(seed)
    r, a = random_state(rng, 3), random_state(rng, 2)
    ch = dephrasure(*rng.random(2))
    sigma = apply_joint(ch, 1, StateVector(np.kron(r, a)))
    assert np.allclose(sigma.matrix, np.kron(np.outer(r, r.conj()), ch(np.outer(a, a.conj()))))


@given(seeds)
@settings(max_examples=20, deadline=None)
def test_slot_permutation_covariance(seed):
    rng = np.random.default_rng(seed)
    k = 3
    psi = random_state(rng, 4 * 2**k).reshape((4,) + (2,) * k)
    perm = rng.permutation(k)
    permuted = psi.transpose([0] + [1 + p for p in perm]).reshape(-1)
    ch = gadc(*rng.random(2))
    s1 = hermitian_eigenvalues(apply_joint(ch, k, StateVector(psi.reshape(-1))).matrix)
    s2 = hermitian_eigenvalues(apply_joint(ch, k, StateVector(permuted)).matrix)
    assert np.allclose(s1, s2, atol=1e-10)
