import numpy as np
import pytest

from hyperbell.hilbert import (
    ATOL,
    BasisIndex,
    Operator,
    StateVector,
    adjoint,
    apply,
    basis_ket,
    commutator_norm,
    expectation,
    identity,
    inner,
    matmul,
    tensor,
)
from hyperbell.observables import SIGMA_X, SIGMA_Z


def test_basis_index_bijective():
    seen = set()
    for i in range(16):
        idx = BasisIndex.from_flat(i)
        assert idx.flat == i
        seen.add(idx)
    assert len(seen) == 16
    assert BasisIndex(0, 0, 1, 1).flat == 3
    assert BasisIndex.from_flat(3).label() == "|H,u;V,d>"


def test_basis_index_range_checked():
    with pytest.raises(ValueError):
        BasisIndex.from_flat(16)


def test_state_validation():
    with pytest.raises(ValueError):
        StateVector(np.array([1.0, 0.0, 0.0]))  # dim 3 not allowed
    with pytest.raises(ValueError):
        StateVector(np.array([1.0, 1.0]))  # labeled normalized but norm 2
    with pytest.raises(ValueError):
        StateVector(np.array([np.nan, 0.0]))
    unnorm = StateVector(np.array([2.0, 0.0]), normalized=False)
    assert unnorm.norm_squared() == 4.0


def test_states_are_immutable():
    ket = basis_ket(4, 2)
    with pytest.raises((ValueError, RuntimeError)):
        ket.amps[0] = 1.0


def test_operator_kind_validation():
    with pytest.raises(ValueError):
        Operator(np.array([[0.0, 1.0], [0.0, 0.0]]), kind="hermitian")
    with pytest.raises(ValueError):
        Operator(np.array([[1.0, 0.0], [0.0, 2.0]]), kind="unitary")
    with pytest.raises(ValueError):
        Operator(np.eye(2), kind="selfadjoint")
    Operator(np.array([[0.0, 1.0], [0.0, 0.0]]))  # general accepts anything


def test_tensor_basis_kets():
    # |H> (x) |u> is the first 4-dim basis ket
    product = tensor(basis_ket(2, 0), basis_ket(2, 0))
    assert product.dim == 4
    np.testing.assert_allclose(product.amps, [1, 0, 0, 0])


def test_tensor_identity():
    np.testing.assert_allclose(
        tensor(identity(2), identity(2)).matrix, np.eye(4), atol=ATOL
    )


def test_tensor_sigma_z_pair():
    # 2x2 Kronecker expansion by hand: diag(+1, -1, -1, +1)
    zz = tensor(Operator(SIGMA_Z, kind="hermitian"), Operator(SIGMA_Z, kind="hermitian"))
    np.testing.assert_allclose(zz.matrix, np.diag([1.0, -1.0, -1.0, 1.0]), atol=ATOL)


def test_tensor_associative():
    rng = np.random.default_rng(11)
    states = []
    for _ in range(3):
        raw = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        states.append(StateVector(raw / np.linalg.norm(raw)))
    a, b, c = states
    left = tensor(tensor(a, b), c)
    right = tensor(a, tensor(b, c))
    assert np.abs(left.amps - right.amps).max() < 1e-15


def test_tensor_overflow_rejected():
    sixteen = basis_ket(16, 0)
    with pytest.raises(ValueError):
        tensor(sixteen, basis_ket(2, 0))
    with pytest.raises(TypeError):
        tensor(sixteen, identity(2))


def test_apply_identity_and_mismatch():
    ket = basis_ket(16, 5)
    out = apply(identity(16), ket)
    np.testing.assert_allclose(out.amps, ket.amps)
    with pytest.raises(ValueError):
        apply(identity(4), ket)


def test_apply_does_not_renormalize():
    doubled = Operator(2.0 * np.eye(2))
    out = apply(doubled, basis_ket(2, 0))
    assert not out.normalized
    assert out.norm_squared() == pytest.approx(4.0)


def test_inner_products():
    h, v = basis_ket(2, 0), basis_ket(2, 1)
    assert inner(h, v) == 0
    assert inner(h, h) == 1
    with pytest.raises(ValueError):
        inner(h, basis_ket(4, 0))


def test_inner_conjugate_linear_first_argument():
    phase = np.exp(1j * 0.7)
    a = StateVector(phase * basis_ket(2, 0).amps)
    b = basis_ket(2, 0)
    assert inner(a, b) == pytest.approx(np.conj(phase))
    assert inner(b, a) == pytest.approx(phase)
    assert inner(a, a).imag == pytest.approx(0.0, abs=ATOL)
    assert inner(a, a).real >= 0


def test_expectation_identity_and_rejections():
    state = StateVector(np.full(4, 0.5, dtype=complex))
    assert expectation(identity(4), state) == pytest.approx(1.0, abs=ATOL)
    with pytest.raises(ValueError):
        expectation(Operator(np.eye(4)), state)  # kind 'general' rejected
    with pytest.raises(ValueError):
        expectation(identity(4), StateVector(2 * state.amps, normalized=False))


@pytest.mark.parametrize("theta", [np.pi / 7, 1.0, 2.5])
def test_expectation_global_phase_invariant(theta):
    op = Operator(np.kron(SIGMA_Z, SIGMA_X), kind="hermitian")
    rng = np.random.default_rng(3)
    raw = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    state = StateVector(raw / np.linalg.norm(raw))
    shifted = StateVector(np.exp(1j * theta) * state.amps)
    assert expectation(op, shifted) == pytest.approx(expectation(op, state), abs=ATOL)


def test_commutators():
    z = Operator(SIGMA_Z, kind="hermitian")
    x = Operator(SIGMA_X, kind="hermitian")
    # disjoint tensor factors commute
    assert commutator_norm(tensor(z, identity(2)), tensor(identity(2), x)) == 0
    # [sigma_z, sigma_x] = 2i sigma_y: max-abs entry 2
    assert commutator_norm(z, x) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        commutator_norm(z, identity(4))


def test_adjoint_and_matmul():
    hadamard = Operator(
        np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2), kind="unitary"
    )
    product = matmul(adjoint(hadamard), hadamard)
    assert product.kind == "unitary"
    np.testing.assert_allclose(product.matrix, np.eye(2), atol=ATOL)
    with pytest.raises(ValueError):
        matmul(hadamard, identity(4))
