"""Dual numbers, dual quaternions and dual-quaternion matrices (eps**2 = 0)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import total_ordering

import numpy as np

from .errors import ConsistencyError, DimensionMismatch, DomainError, NotAppreciable, UndefinedDivision
from .quaternion import Quaternion, QuaternionMatrix, qinv, qmul


@total_ordering
@dataclass(frozen=True)
class DualNumber:
    """``s + i*eps``; ordered lexicographically (standard part first)."""

    s: float = 0.0
    i: float = 0.0

    @property
    def appreciable(self) -> bool:
        return self.s != 0.0

    def __add__(self, other) -> "DualNumber":
        other = _as_dual(other)
        if other is None:
            return NotImplemented
        return DualNumber(self.s + other.s, self.i + other.i)

    __radd__ = __add__

    def __sub__(self, other) -> "DualNumber":
        other = _as_dual(other)
        if other is None:
            return NotImplemented
        return DualNumber(self.s - other.s, self.i - other.i)

    def __neg__(self) -> "DualNumber":
        return DualNumber(-self.s, -self.i)

    def __mul__(self, other) -> "DualNumber":
        other = _as_dual(other)
        if other is None:
            return NotImplemented
        return dual_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "DualNumber":
        other = _as_dual(other)
        if other is None:
            return NotImplemented
        return dual_div(self, other)

    def __lt__(self, other) -> bool:
        other = _as_dual(other)
        if other is None:
            return NotImplemented
        return dual_cmp(self, other) < 0

    def __eq__(self, other) -> bool:
        other = _as_dual(other)
        if other is None:
            return NotImplemented
        return self.s == other.s and self.i == other.i

    def __hash__(self) -> int:
        return hash((self.s, self.i))

    def sqrt(self) -> "DualNumber":
        return dual_sqrt(self)

    def isclose(self, other: "DualNumber", tol: float = 1e-12) -> bool:
        return abs(self.s - other.s) <= tol and abs(self.i - other.i) <= tol


def _as_dual(x) -> DualNumber | None:
    if isinstance(x, DualNumber):
        return x
    if isinstance(x, (int, float, np.floating, np.integer)):
        return DualNumber(float(x), 0.0)
    return None


def dual_mul(d: DualNumber, b: DualNumber) -> DualNumber:
    return DualNumber(d.s * b.s, d.s * b.i + d.i * b.s)


def dual_div(d: DualNumber, b: DualNumber, c: float = 0.0) -> DualNumber:
    """``d / b``.

    With ``b`` appreciable this is the usual first-order quotient.  When both
    standard parts vanish the quotient is ``d.i / b.i + c*eps`` for a free real
    ``c``; every other case with ``b.s == 0`` is undefined.
    """
    if b.s != 0.0:
        q = d.s / b.s
        return DualNumber(q, d.i / b.s - q * b.i / b.s)
    if d.s == 0.0 and b.i != 0.0:
        return DualNumber(d.i / b.i, c)
    raise UndefinedDivision(f"{d} / {b} is undefined")


def dual_cmp(d: DualNumber, b: DualNumber) -> int:
    if d.s != b.s:
        return -1 if d.s < b.s else 1
    if d.i != b.i:
        return -1 if d.i < b.i else 1
    return 0


def dual_sqrt(d: DualNumber) -> DualNumber:
    if d.s > 0.0:
        r = math.sqrt(d.s)
        return DualNumber(r, d.i / (2.0 * r))
    if d.s == 0.0 and d.i == 0.0:
        return DualNumber(0.0, 0.0)
    raise DomainError(f"square root undefined for {d}")


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DualQuaternion:
    s: Quaternion = Quaternion()
    i: Quaternion = Quaternion()

    @property
    def appreciable(self) -> bool:
        return self.s.norm2() > 0.0

    def __add__(self, other: "DualQuaternion") -> "DualQuaternion":
        if not isinstance(other, DualQuaternion):
            return NotImplemented
        return DualQuaternion(self.s + other.s, self.i + other.i)

    def __sub__(self, other: "DualQuaternion") -> "DualQuaternion":
        if not isinstance(other, DualQuaternion):
            return NotImplemented
        return DualQuaternion(self.s - other.s, self.i - other.i)

    def __neg__(self) -> "DualQuaternion":
        return DualQuaternion(-self.s, -self.i)

    def __mul__(self, other) -> "DualQuaternion":
        if isinstance(other, DualQuaternion):
            return dq_mul(self, other)
        if isinstance(other, (int, float)):
            return DualQuaternion(self.s * other, self.i * other)
        return NotImplemented

    def conj(self) -> "DualQuaternion":
        return DualQuaternion(self.s.conj(), self.i.conj())

    def inverse(self) -> "DualQuaternion":
        return dq_inverse(self)

    def magnitude(self) -> DualNumber:
        return dq_magnitude(self)

    def isclose(self, other: "DualQuaternion", tol: float = 1e-12) -> bool:
        return self.s.isclose(other.s, tol) and self.i.isclose(other.i, tol)


def dq_mul(q: DualQuaternion, p: DualQuaternion) -> DualQuaternion:
    return DualQuaternion(qmul(q.s, p.s), qmul(q.s, p.i) + qmul(q.i, p.s))


def dq_inverse(q: DualQuaternion) -> DualQuaternion:
    if not q.appreciable:
        raise NotAppreciable("an infinitesimal dual quaternion has no inverse")
    inv_s = qinv(q.s)
    return DualQuaternion(inv_s, -qmul(qmul(inv_s, q.i), inv_s))


def dq_magnitude(q: DualQuaternion) -> DualNumber:
    if not q.appreciable:
        return DualNumber(0.0, abs(q.i))
    ms = abs(q.s)
    cross = qmul(q.s, q.i.conj()) + qmul(q.i, q.s.conj())
    residue = abs(cross.imag)
    if residue > 1e-12 * max(1.0, ms * abs(q.i)):
        raise ConsistencyError(f"magnitude dual part has imaginary residue {residue:.3e}")
    return DualNumber(ms, cross.w / (2.0 * ms))


def dqvec_norm2(p) -> DualNumber:
    """2-norm of a dual quaternion vector (sequence of DualQuaternion)."""
    p = list(p)
    if any(e.appreciable for e in p):
        total = DualNumber()
        for e in p:
            m = dq_magnitude(e)
            total = total + m * m
        return dual_sqrt(total)
    return DualNumber(0.0, math.sqrt(sum(e.i.norm2() for e in p)))


# ---------------------------------------------------------------------------

class DualQuaternionMatrix:
    """``A_s + A_i eps`` with quaternion-matrix parts of one shape."""

    __slots__ = ("s", "i")

    def __init__(self, s: QuaternionMatrix, i: QuaternionMatrix | None = None):
        if i is None:
            i = QuaternionMatrix.zeros(*s.shape)
        if s.shape != i.shape:
            raise DimensionMismatch(f"standard part {s.shape} and dual part {i.shape} differ")
        self.s = s
        self.i = i

    @classmethod
    def identity(cls, n: int) -> "DualQuaternionMatrix":
        return cls(QuaternionMatrix.identity(n), QuaternionMatrix.zeros(n, n))

    @property
    def shape(self) -> tuple[int, int]:
        return self.s.shape

    def __repr__(self) -> str:
        return f"DualQuaternionMatrix(shape={self.shape})"

    def __getitem__(self, idx) -> DualQuaternion:
        return DualQuaternion(self.s[idx], self.i[idx])

    def __add__(self, other: "DualQuaternionMatrix") -> "DualQuaternionMatrix":
        if not isinstance(other, DualQuaternionMatrix):
            return NotImplemented
        return DualQuaternionMatrix(self.s + other.s, self.i + other.i)

    def __sub__(self, other: "DualQuaternionMatrix") -> "DualQuaternionMatrix":
        if not isinstance(other, DualQuaternionMatrix):
            return NotImplemented
        return DualQuaternionMatrix(self.s - other.s, self.i - other.i)

    def __matmul__(self, other: "DualQuaternionMatrix") -> "DualQuaternionMatrix":
        if not isinstance(other, DualQuaternionMatrix):
            return NotImplemented
        return dqmat_mul(self, other)

    @property
    def H(self) -> "DualQuaternionMatrix":
        return DualQuaternionMatrix(self.s.H, self.i.H)

    def conj_transpose(self) -> "DualQuaternionMatrix":
        return self.H

    def fr_norm(self) -> float:
        return fr_norm(self)


def dqmat_add(A: DualQuaternionMatrix, B: DualQuaternionMatrix) -> DualQuaternionMatrix:
    return A + B


def dqmat_mul(A: DualQuaternionMatrix, B: DualQuaternionMatrix) -> DualQuaternionMatrix:
    return DualQuaternionMatrix(A.s @ B.s, A.s @ B.i + A.i @ B.s)


def fr_norm(A: DualQuaternionMatrix) -> float:
    return math.sqrt(A.s.fro_norm() ** 2 + A.i.fro_norm() ** 2)


def unitarity_defect(Q: DualQuaternionMatrix) -> tuple[float, float]:
    """``(||(Q^H Q)_s - I||_F, ||(Q^H Q)_i||_F)``."""
    G = Q.H @ Q
    n = G.shape[0]
    return (G.s - QuaternionMatrix.identity(n)).fro_norm(), G.i.fro_norm()
