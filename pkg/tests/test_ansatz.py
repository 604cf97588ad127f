import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nnqcodes.ansatz import (
    ACTIVATIONS,
    AnsatzSpec,
    DBMParams,
    Encoding,
    FFParams,
    RBMParams,
    assemble_state,
    dbm_amplitude,
    decode_input,
    encode_input,
    ff_amplitude,
    flatten,
    param_count,
    rbm_amplitude,
    unflatten,
)
from nnqcodes.linalg import DegenerateStateError

from conftest import seeds


def cplx(rng, *shape, scale=0.5):
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def test_encoding_examples():
    assert list(encode_input([5], Encoding("binary", 6))) == [1, 0, 1]
    assert list(encode_input([0], Encoding("one_hot", 6))) == [0, 0, 0, 0, 0, 1]
    assert list(encode_input([0, 1], Encoding("scaled", 2))) == [0.0, 1.0]
    assert list(encode_input([2], Encoding("scaled", 5))) == [0.5]
    with pytest.raises(ValueError):
        encode_input([6], Encoding("binary", 6))


@pytest.mark.parametrize("kind", ["scaled", "binary", "one_hot"])
@pytest.mark.parametrize("d", [2, 3, 5, 6])
def test_encoding_widths_and_injectivity(kind, d):
    enc = Encoding(kind, d)
    assert enc.width == {"scaled": 1, "binary": int(np.ceil(np.log2(d))), "one_hot": d}[kind]
    codes = {tuple(encode_input(s, enc)) for s in itertools.product(range(d), repeat=2)}
    assert len(codes) == d**2
    for s in itertools.product(range(d), repeat=2):
        assert list(decode_input(encode_input(s, enc), enc)) == list(s)


def test_activation_reference_values():
    assert ACTIVATIONS["cos"](0.0) == 1
    assert ACTIVATIONS["tanh"](0.0) == 0
    assert ACTIVATIONS["relu"](-1.0) == 0
    assert ACTIVATIONS["sigmoid"](0.0) == 0.5


def _zero_ff(widths, output):
    ws = [np.zeros((widths[j + 1], widths[j])) for j in range(len(widths) - 1)]
    bs = [np.zeros(w) for w in widths[1:]]
    return FFParams(ws, bs, ["tanh"] * (len(widths) - 2), output)


def test_ff_zero_network():
    assert ff_amplitude(_zero_ff([3, 4, 2], "cartesian"), [1, 0, 1]) == 0
    assert ff_amplitude(_zero_ff([3, 4, 2], "polar"), [1, 0, 1]) == 1


def test_ff_forward_pass_by_hand(rng):
    w1, b1 = rng.standard_normal((3, 2)), rng.standard_normal(3)
    w2, b2 = rng.standard_normal((2, 3)), rng.standard_normal(2)
    x = np.array([0.3, -1.0])
    o = w2 @ np.cos(w1 @ x + b1) + b2
    p = FFParams([w1, w2], [b1, b2], ["cos"], "cartesian")
    assert ff_amplitude(p, x) == pytest.approx(o[0] + 1j * o[1])
    p = FFParams([w1, w2], [b1, b2], ["cos"], "polar")
    assert ff_amplitude(p, x) == pytest.approx(np.exp(o[0] + 1j * o[1]))


def test_ff_polar_clamp():
    w = np.zeros((2, 1))
    p = FFParams([w], [np.array([1000.0, 0.0])], [], "polar")
    assert np.isfinite(ff_amplitude(p, [0.0]))


def test_ff_shape_errors():
    with pytest.raises(ValueError):
        FFParams([np.zeros((3, 2)), np.zeros((3, 3))], [np.zeros(3), np.zeros(3)], ["cos"])
    with pytest.raises(ValueError):
        ff_amplitude(_zero_ff([3, 2], "cartesian"), [1, 0])


def test_rbm_examples():
    p = RBMParams(np.zeros(2), np.zeros(2), np.zeros((2, 2)))
    assert rbm_amplitude(p, [0, 0]) == pytest.approx(4)
    p = RBMParams(np.zeros(2), [40.0], np.zeros((1, 2)))
    assert rbm_amplitude(p, [1, 0]) == pytest.approx(1)
    with pytest.raises(ValueError):
        rbm_amplitude(p, [0.5, 0])


def _hidden_sum(a, b, W, x, C=None, D=None):
    total = 0
    for h in itertools.product((0, 1), repeat=len(b)):
        h = np.array(h)
        e = a @ x + b @ h + h @ W @ x
        if C is not None:
            e += sum(C[k, l] * x[k] * x[l] for k in range(len(x)) for l in range(k + 1, len(x)))
            e += sum(D[k, l] * h[k] * h[l] for k in range(len(h)) for l in range(k + 1, len(h)))
        total += np.exp(-e)
    return total


@given(seeds, st.integers(1, 4), st.integers(1, 4))
@settings(max_examples=100, deadline=None)
def test_rbm_factorization_matches_hidden_sum(seed, n, m):
    rng = np.random.default_rng(seed)
    a, b, W = cplx(rng, n), cplx(rng, m), cplx(rng, m, n)
    p = RBMParams(a, b, W)
    x = rng.integers(0, 2, n).astype(float)
    ref = _hidden_sum(a, b, W, x)
    assert abs(rbm_amplitude(p, x) - ref) <= 1e-10 * abs(ref)


def test_dbm_reduces_to_rbm(rng):
    core = RBMParams(cplx(rng, 3), cplx(rng, 3), cplx(rng, 3, 3))
    d = DBMParams(core, np.zeros((3, 3)), np.zeros((3, 3)))
    for x in itertools.product((0, 1), repeat=3):
        assert dbm_amplitude(d, x) == pytest.approx(rbm_amplitude(core, x))


def test_dbm_visible_penalty():
    core = RBMParams(np.zeros(2), np.zeros(1), np.zeros((1, 2)))
    C = np.array([[0, 5.0], [0, 0]])
    d = DBMParams(core, C, np.zeros((1, 1)))
    assert dbm_amplitude(d, [1, 1]) / dbm_amplitude(d, [0, 0]) == pytest.approx(np.exp(-5))


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_dbm_matches_double_loop(seed):
    rng = np.random.default_rng(seed)
    n, m = 3, 3
    a, b, W = cplx(rng, n), cplx(rng, m), cplx(rng, m, n)
    C, D = np.triu(cplx(rng, n, n), 1), np.triu(cplx(rng, m, m), 1)
    d = DBMParams(RBMParams(a, b, W), C, D)
    x = rng.integers(0, 2, n).astype(float)
    ref = _hidden_sum(a, b, W, x, C, D)
    assert abs(dbm_amplitude(d, x) - ref) <= 1e-10 * abs(ref)


def test_dbm_hidden_guard():
    with pytest.raises(ValueError):
        DBMParams(RBMParams(np.zeros(1), np.zeros(21), np.zeros((21, 1))), np.zeros((1, 1)), np.zeros((21, 21)))


def test_param_counts():
    assert param_count(AnsatzSpec("FF", 6, hidden=(6,) * 4, activations=("cos",) * 4)) == 182
    assert param_count(AnsatzSpec("Raw", 6)) == 128
    assert param_count(AnsatzSpec("RBM", 2, hidden=(2,))) == 16
    assert param_count(AnsatzSpec("RBM", 6, hidden=(9,))) == 138
    assert param_count(AnsatzSpec("DBM", 3, hidden=(2,))) == 2 * (3 + 2 + 6 + 3 + 1)
    assert param_count(AnsatzSpec("FFSchmidt", 6, hidden=(4,), activations=("tanh",))) == 4 * 4 + 5 * 2


SPECS = [
    AnsatzSpec("FF", 4, hidden=(3, 2), activations=("cos", "relu"), output="polar"),
    AnsatzSpec("FF", 3, d=3, encoding=Encoding("one_hot", 3), hidden=(4,), activations=("tanh",)),
    AnsatzSpec("RBM", 4, hidden=(3,)),
    AnsatzSpec("DBM", 3, hidden=(2,)),
    AnsatzSpec("FFSchmidt", 4, hidden=(3,), activations=("sigmoid",)),
    AnsatzSpec("RBMSchmidt", 4, hidden=(2,)),
    AnsatzSpec("Raw", 2, d=3),
    AnsatzSpec("RBM", 2, d=3, encoding=Encoding("binary", 3), hidden=(2,)),
]


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.kind)
def test_round_trip_and_unit_norm(spec, rng):
    for _ in range(5):
        v = rng.uniform(-2, 2, param_count(spec))
        assert np.array_equal(flatten(unflatten(spec, v)), v)
        psi = assemble_state(spec, v)
        assert psi.norm == pytest.approx(1, abs=1e-12)
        assert psi.dim == spec.d**spec.n
    assert AnsatzSpec.from_dict(spec.to_dict()) == spec
    with pytest.raises(ValueError):
        unflatten(spec, np.zeros(param_count(spec) + 1))


@given(seeds, st.floats(1e-3, 1e3))
@settings(max_examples=30, deadline=None)
def test_raw_rescaling_invariance(seed, c):
    spec = AnsatzSpec("Raw", 3)
    v = np.random.default_rng(seed).uniform(-1, 1, param_count(spec))
    assert np.allclose(assemble_state(spec, v).amplitudes, assemble_state(spec, c * v).amplitudes)


def test_assemble_examples():
    assert np.allclose(assemble_state(AnsatzSpec("Raw", 1), [1, 0, 0, 0]).amplitudes, [1, 0])
    spec = AnsatzSpec("FFSchmidt", 2, hidden=(1,), activations=("relu",))
    ws = [np.zeros((1, 1)), np.zeros((2, 1))]
    bs = [np.zeros(1), np.array([1.0, 0.0])]
    psi = assemble_state(spec, FFParams(ws, bs, ["relu"]))
    assert np.allclose(psi.amplitudes, np.array([1, 0, 0, 1]) / np.sqrt(2))


def test_assemble_degenerate():
    spec = AnsatzSpec("FF", 2, hidden=(2,), activations=("cos",))
    with pytest.raises(DegenerateStateError):
        assemble_state(spec, np.zeros(param_count(spec)))


def test_schmidt_requires_even_qubits():
    with pytest.raises(ValueError):
        AnsatzSpec("FFSchmidt", 3, hidden=(2,), activations=("cos",))
    with pytest.raises(ValueError):
        AnsatzSpec("RBMSchmidt", 4, d=3, hidden=(2,))


def test_large_rbm_energies_do_not_overflow():
    spec = AnsatzSpec("RBM", 10, hidden=(10,))
    v = np.full(param_count(spec), -10.0)
    psi = assemble_state(spec, v)
    assert np.all(np.isfinite(psi.amplitudes))
