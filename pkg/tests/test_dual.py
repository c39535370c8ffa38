import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import left_matrix, rand_dqmat
from dqzw.dual import (
    DualNumber,
    DualQuaternion,
    DualQuaternionMatrix,
    dq_inverse,
    dq_magnitude,
    dq_mul,
    dqmat_add,
    dqmat_mul,
    dqvec_norm2,
    dual_cmp,
    dual_div,
    dual_mul,
    dual_sqrt,
    fr_norm,
    unitarity_defect,
)
from dqzw.errors import DomainError, NotAppreciable, UndefinedDivision
from dqzw.quaternion import I, J, K, ONE, Quaternion, QuaternionMatrix

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
nonzero = finite.filter(lambda v: abs(v) > 1e-3)
duals = st.builds(DualNumber, finite, finite)
quats = st.builds(Quaternion, finite, finite, finite, finite)
dquats = st.builds(DualQuaternion, quats, quats)


def dual_matrix(d: DualNumber) -> np.ndarray:
    # d_s I + d_i N with N^2 = 0
    return np.array([[d.s, d.i], [0.0, d.s]])


def dq_matrix(q: DualQuaternion) -> np.ndarray:
    Ls, Li = left_matrix(q.s.as_array()), left_matrix(q.i.as_array())
    # acts on (p_s, p_i): standard part Ls p_s, dual part Li p_s + Ls p_i
    return np.block([[Ls, np.zeros((4, 4))], [Li, Ls]])


# ---------------------------------------------------------------- dual numbers

def test_dual_mul_examples():
    assert dual_mul(DualNumber(1, 2), DualNumber(3, 4)) == DualNumber(3, 10)
    assert dual_mul(DualNumber(0, 1), DualNumber(0, 1)) == DualNumber(0, 0)
    d = DualNumber(2.5, -1.0)
    assert dual_mul(d, DualNumber(1, 0)) == d


@given(duals, duals)
def test_dual_mul_matches_nilpotent_matrix(d, b):
    got = dual_matrix(dual_mul(d, b))
    np.testing.assert_allclose(got, dual_matrix(d) @ dual_matrix(b), atol=1e-12)


def test_dual_div_examples():
    assert dual_div(DualNumber(3, 10), DualNumber(3, 4)).isclose(DualNumber(1, 2))
    assert dual_div(DualNumber(0, 4), DualNumber(0, 2)) == DualNumber(2, 0)
    assert dual_div(DualNumber(0, 4), DualNumber(0, 2), c=7.0) == DualNumber(2, 7)
    d = DualNumber(-3, 0.5)
    assert dual_div(d, DualNumber(1, 0)) == d


def test_dual_div_errors():
    with pytest.raises(UndefinedDivision):
        dual_div(DualNumber(1, 1), DualNumber(0, 0))
    with pytest.raises(UndefinedDivision):
        dual_div(DualNumber(0, 1), DualNumber(0, 0))
    with pytest.raises(UndefinedDivision):
        dual_div(DualNumber(1, 1), DualNumber(0, 2))


@given(duals, st.builds(DualNumber, nonzero, finite))
def test_dual_div_round_trip(d, b):
    back = dual_div(dual_mul(d, b), b)
    assert back.isclose(d, 1e-12 * max(1.0, abs(d.s) + abs(d.i)) * max(1.0, (abs(b.s) + abs(b.i)) / abs(b.s)) ** 2)


def test_dual_cmp_examples():
    assert dual_cmp(DualNumber(1, 9), DualNumber(2, 0)) == -1
    assert dual_cmp(DualNumber(1, 1), DualNumber(1, 2)) == -1
    d = DualNumber(3, 4)
    assert dual_cmp(d, d) == 0
    assert dual_cmp(DualNumber(2, 0), DualNumber(1, 9)) == 1


@given(duals, duals, duals)
def test_order_transitive_and_total(a, b, c):
    assert (a <= b) or (b <= a)
    if a <= b and b <= c:
        assert a <= c
    assert dual_cmp(a, b) == -dual_cmp(b, a)


def test_dual_sqrt_examples():
    assert dual_sqrt(DualNumber(4, 4)) == DualNumber(2, 1)
    assert dual_sqrt(DualNumber(0, 0)) == DualNumber(0, 0)
    assert dual_sqrt(DualNumber(1, 0)) == DualNumber(1, 0)


def test_dual_sqrt_domain():
    with pytest.raises(DomainError):
        dual_sqrt(DualNumber(-1, 0))
    with pytest.raises(DomainError):
        dual_sqrt(DualNumber(0, 1))


@given(st.floats(1e-3, 100), finite)
def test_dual_sqrt_squares_back(s, i):
    d = DualNumber(s, i)
    r = dual_sqrt(d)
    assert dual_mul(r, r).isclose(d, 1e-12 * max(1.0, abs(s) + abs(i) / s))


# ---------------------------------------------------------------- dual quaternions

def test_dq_mul_examples():
    assert dq_mul(DualQuaternion(I), DualQuaternion(J)) == DualQuaternion(K)
    got = dq_mul(DualQuaternion(ONE, I), DualQuaternion(ONE, J))
    assert got == DualQuaternion(ONE, I + J)
    q = DualQuaternion(Quaternion(1, 2, 3, 4), Quaternion(-1, 0, 5, 2))
    assert dq_mul(q, DualQuaternion(ONE)) == q


@given(dquats, dquats)
def test_dq_mul_matches_block_matrix(q, p):
    qp = dq_mul(q, p)
    got = np.concatenate([qp.s.as_array(), qp.i.as_array()])
    vec = np.concatenate([p.s.as_array(), p.i.as_array()])
    np.testing.assert_allclose(got, dq_matrix(q) @ vec, atol=1e-9)


@given(dquats, dquats, dquats)
def test_dq_mul_associative(q, p, r):
    a = dq_mul(dq_mul(q, p), r)
    b = dq_mul(q, dq_mul(p, r))
    scale = max(1.0, (abs(q.s) + abs(q.i)) * (abs(p.s) + abs(p.i)) * (abs(r.s) + abs(r.i)))
    assert (a.s - b.s).norm2() ** 0.5 <= 1e-12 * scale
    assert (a.i - b.i).norm2() ** 0.5 <= 1e-12 * scale


def test_dq_inverse_examples():
    assert dq_inverse(DualQuaternion(ONE, I)) == DualQuaternion(ONE, -I)
    assert dq_inverse(DualQuaternion(I)) == DualQuaternion(-I)
    with pytest.raises(NotAppreciable):
        dq_inverse(DualQuaternion(Quaternion(), I))


@given(dquats)
def test_dq_inverse_multiplies_to_one(q):
    assume(abs(q.s) > 1e-2)
    prod = dq_mul(q, dq_inverse(q))
    scale = (1 + abs(q.i) / abs(q.s)) ** 2
    assert prod.s.isclose(ONE, 1e-12 * scale)
    assert abs(prod.i) <= 1e-11 * scale * max(1.0, abs(q.i))


def test_dq_magnitude_examples():
    assert dq_magnitude(DualQuaternion(ONE)) == DualNumber(1, 0)
    qi = Quaternion(0, 3, 0, 4)
    assert dq_magnitude(DualQuaternion(Quaternion(), qi)) == DualNumber(0, 5)
    assert dq_magnitude(DualQuaternion(I, J)).isclose(DualNumber(1, 0))


@given(dquats, dquats)
def test_dq_magnitude_multiplicative(q, p):
    assume(abs(q.s) > 1e-2 and abs(p.s) > 1e-2)
    lhs = dq_magnitude(dq_mul(q, p))
    rhs = dual_mul(dq_magnitude(q), dq_magnitude(p))
    scale = max(1.0, (abs(q.s) + abs(q.i)) * (abs(p.s) + abs(p.i)))
    assert abs(lhs.s - rhs.s) <= 1e-10 * scale
    assert abs(lhs.i - rhs.i) <= 1e-10 * scale


def test_dqvec_norm2_examples():
    e1 = [DualQuaternion(ONE), DualQuaternion()]
    assert dqvec_norm2(e1) == DualNumber(1, 0)
    inf = [DualQuaternion(Quaternion(), I), DualQuaternion(Quaternion(), J)]
    assert dqvec_norm2(inf).isclose(DualNumber(0, math.sqrt(2)))
    real = [DualQuaternion(Quaternion(3)), DualQuaternion(Quaternion(4))]
    assert dqvec_norm2(real).isclose(DualNumber(5, 0))


# ---------------------------------------------------------------- matrices

def test_dqmat_identity_and_add(rng):
    A = rand_dqmat(rng, 4, dominant=False)
    AI = A @ DualQuaternionMatrix.identity(4)
    np.testing.assert_allclose(AI.s.data, A.s.data, atol=1e-15)
    np.testing.assert_allclose(AI.i.data, A.i.data, atol=1e-15)
    S = dqmat_add(A, A)
    np.testing.assert_array_equal(S.s.data, 2 * A.s.data)


def test_fr_norm_of_infinitesimal(rng):
    Ai = QuaternionMatrix(rng.standard_normal((3, 4, 4)))
    A = DualQuaternionMatrix(QuaternionMatrix.zeros(3, 4), Ai)
    assert fr_norm(A) == pytest.approx(Ai.fro_norm())


def test_scalar_matrix_product_matches_dq_mul():
    q = DualQuaternion(Quaternion(1, 2, -1, 0.5), Quaternion(0, 3, 1, -2))
    p = DualQuaternion(Quaternion(-2, 0, 1, 4), Quaternion(1, 1, 1, 1))

    def as_mat(d):
        return DualQuaternionMatrix(QuaternionMatrix(d.s.as_array()[None, None]), QuaternionMatrix(d.i.as_array()[None, None]))

    got = dqmat_mul(as_mat(q), as_mat(p))[0, 0]
    want = dq_mul(q, p)
    assert got.s.isclose(want.s) and got.i.isclose(want.i)


def test_unitarity_defect_of_unitary_dual_matrix(rng):
    # Q = Q_s (I + P eps) with P anti-Hermitian is unitary to first order
    from dqzw.quaternion import qqr

    Qs = qqr(QuaternionMatrix(rng.standard_normal((5, 5, 4))))[0]
    X = QuaternionMatrix(rng.standard_normal((5, 5, 4)))
    P = X - X.H
    Q = DualQuaternionMatrix(Qs, Qs @ P)
    ds, di = unitarity_defect(Q)
    assert ds <= 1e-12 and di <= 1e-12
