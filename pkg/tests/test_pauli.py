import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qspir.pauli import (
    IDENTITY,
    LABELS,
    SIGNED_WEYLS,
    LabelVector,
    SignedWeyl,
    WeylLabel,
    adjoint,
    bell_transfer,
    commutation_sign,
    compose,
    matrix,
)

X = np.array([[0, 1], [1, 0]])
Z = np.array([[1, 0], [0, -1]])
PHI = np.array([1, 0, 0, 1]) / np.sqrt(2)

signed = st.sampled_from(SIGNED_WEYLS)
labels = st.sampled_from(LABELS)


def W(a, b, s=0):
    return SignedWeyl.of(a, b, s)


def oracle_matrix(x: SignedWeyl) -> np.ndarray:
    m = np.linalg.matrix_power(X, x.label.a) @ np.linalg.matrix_power(Z, x.label.b)
    return (-1) ** x.sign * m


@pytest.mark.parametrize(
    "x, y, expected",
    [
        (W(0, 0), W(1, 1), W(1, 1)),
        (W(0, 1), W(1, 0), W(1, 1, 1)),
        (W(1, 0), W(0, 1), W(1, 1)),
    ],
)
def test_compose_examples(x, y, expected):
    assert compose(x, y) == expected
    assert x @ y == expected


@pytest.mark.parametrize("x, expected", [(W(0, 0), W(0, 0)), (W(1, 1), W(1, 1, 1)), (W(1, 0), W(1, 0))])
def test_adjoint_examples(x, expected):
    assert adjoint(x) == expected


@pytest.mark.parametrize(
    "x, y, expected",
    [(WeylLabel(0, 0), WeylLabel(1, 1), 0), (WeylLabel(1, 0), WeylLabel(0, 1), 1), (WeylLabel(1, 0), WeylLabel(1, 0), 0)],
)
def test_commutation_sign_examples(x, y, expected):
    assert commutation_sign(x, y) == expected


def test_matrix_examples():
    np.testing.assert_array_equal(matrix(W(0, 0)), np.eye(2))
    np.testing.assert_array_equal(matrix(W(0, 1)), [[1, 0], [0, -1]])
    np.testing.assert_array_equal(matrix(W(1, 1)), [[0, -1], [1, 0]])
    np.testing.assert_array_equal(matrix(WeylLabel(1, 0)), X)


@pytest.mark.parametrize("x, expected", [(W(0, 0), W(0, 0)), (W(1, 1), W(1, 1, 1)), (W(1, 0), W(1, 0))])
def test_bell_transfer_examples(x, expected):
    assert bell_transfer(x) == expected


def test_matrix_agrees_with_oracle_and_is_unitary():
    for x in SIGNED_WEYLS:
        m = matrix(x)
        np.testing.assert_array_equal(m, oracle_matrix(x))
        np.testing.assert_array_equal(m @ m.conj().T, np.eye(2))


def test_group_law_exhaustive():
    for x, y in itertools.product(SIGNED_WEYLS, repeat=2):
        np.testing.assert_array_equal(matrix(compose(x, y)), matrix(x) @ matrix(y))
        for z in SIGNED_WEYLS:
            assert compose(compose(x, y), z) == compose(x, compose(y, z))


def test_group_has_order_eight():
    closure = {compose(x, y) for x in SIGNED_WEYLS for y in SIGNED_WEYLS}
    assert closure == set(SIGNED_WEYLS)
    assert len(closure) == 8


@given(signed)
def test_adjoint_is_conjugate_transpose_and_involution(x):
    np.testing.assert_array_equal(matrix(adjoint(x)), matrix(x).conj().T)
    assert adjoint(adjoint(x)) == x
    assert compose(x, adjoint(x)) == IDENTITY


@given(signed, signed)
def test_commutation_sign_matches_both_orders(x, y):
    xy, yx = compose(x, y), compose(y, x)
    assert xy.label == yx.label
    assert xy.sign ^ yx.sign == commutation_sign(x.label, y.label)


@given(signed)
def test_bell_transfer_moves_operator_across_phi(x):
    y = bell_transfer(x)
    lhs = np.kron(np.eye(2), matrix(x)) @ PHI
    rhs = np.kron(matrix(y), np.eye(2)) @ PHI
    np.testing.assert_allclose(lhs, rhs, atol=1e-15)
    assert bell_transfer(y) == x


def test_label_arithmetic_and_packing():
    assert WeylLabel(1, 0) + WeylLabel(1, 1) == WeylLabel(0, 1)
    assert [int(lab) for lab in LABELS] == [0, 1, 2, 3]
    assert WeylLabel.from_int(2) == WeylLabel(1, 0)
    with pytest.raises(ValueError):
        WeylLabel(2, 0)
    with pytest.raises(ValueError):
        WeylLabel.from_int(4)
    with pytest.raises(ValueError):
        SignedWeyl(2, WeylLabel())


def test_text_rendering():
    assert str(W(1, 1, 1)) == "-W(1,1)"
    assert str(W(0, 1)) == "+W(0,1)"
    assert str(LabelVector.from_ints([2, 1])) == "[(1,0) (0,1)]"


@given(st.lists(st.integers(0, 3), min_size=1, max_size=80), st.lists(st.integers(0, 3), min_size=1, max_size=80))
def test_label_vector_packing_roundtrip_and_addition(xs, ys):
    n = min(len(xs), len(ys))
    u, v = LabelVector.from_ints(xs[:n]), LabelVector.from_ints(ys[:n])
    assert LabelVector.from_int(int(u), n) == u
    assert int(u + v) == int(u) ^ int(v)
    assert (u + v).to_ints() == [a ^ b for a, b in zip(xs[:n], ys[:n])]


def test_label_vector_validation():
    with pytest.raises(ValueError):
        LabelVector(())
    with pytest.raises(ValueError):
        LabelVector.zeros(2) + LabelVector.zeros(3)
    with pytest.raises(ValueError):
        LabelVector.from_int(16, 2)
    assert LabelVector(((1, 0), 3)).blocks == (WeylLabel(1, 0), WeylLabel(1, 1))
