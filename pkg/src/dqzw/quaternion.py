"""Quaternion scalars, quaternion matrices, and their LU / QR / SVD.

Matrices are stored as float64 arrays of shape ``(m, n, 4)`` holding the
``(w, x, y, z)`` components of ``w + x i + y j + z k``.  Products are carried
out in the complex-pair form ``A = A_alpha + A_beta j`` with
``A_alpha = w + x i`` and ``A_beta = y + z i``, which maps onto BLAS.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ConvergenceFailure, DimensionMismatch, SingularMinor, ZeroDivisor


# ---------------------------------------------------------------------------
# array kernels on (..., 4) component arrays

def qmul_arr(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Broadcast Hamilton product over the trailing component axis."""
    aw, ax, ay, az = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    bw, bx, by, bz = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack(
        [
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ],
        axis=-1,
    )


def qconj_arr(a: np.ndarray) -> np.ndarray:
    out = -a
    out[..., 0] = a[..., 0]
    return out


def qnorm2_arr(a: np.ndarray) -> np.ndarray:
    return np.sum(a * a, axis=-1)


def qinv_arr(a: np.ndarray) -> np.ndarray:
    n2 = qnorm2_arr(a)
    if np.any(n2 == 0):
        raise ZeroDivisor("inverse of a zero quaternion")
    return qconj_arr(a) / n2[..., None]


def to_complex(data: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    alpha = data[..., 0] + 1j * data[..., 1]
    beta = data[..., 2] + 1j * data[..., 3]
    return alpha, beta


def from_complex(alpha: np.ndarray, beta: np.ndarray) -> np.ndarray:
    return np.stack([alpha.real, alpha.imag, beta.real, beta.imag], axis=-1)


def qmatmul_arr(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # (Aa + Ab j)(Ba + Bb j) = (Aa Ba - Ab conj(Bb)) + (Aa Bb + Ab conj(Ba)) j
    aa, ab = to_complex(a)
    ba, bb = to_complex(b)
    return from_complex(aa @ ba - ab @ bb.conj(), aa @ bb + ab @ ba.conj())


# ---------------------------------------------------------------------------
# scalars

@dataclass(frozen=True)
class Quaternion:
    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_array(cls, a) -> "Quaternion":
        return cls(float(a[0]), float(a[1]), float(a[2]), float(a[3]))

    def as_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    def __add__(self, other: "Quaternion") -> "Quaternion":
        if not isinstance(other, Quaternion):
            return NotImplemented
        return Quaternion(self.w + other.w, self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        if not isinstance(other, Quaternion):
            return NotImplemented
        return Quaternion(self.w - other.w, self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other) -> "Quaternion":
        if isinstance(other, Quaternion):
            return qmul(self, other)
        if isinstance(other, (int, float)):
            return Quaternion(self.w * other, self.x * other, self.y * other, self.z * other)
        return NotImplemented

    def __rmul__(self, other) -> "Quaternion":
        if isinstance(other, (int, float)):
            return self * other
        return NotImplemented

    def __truediv__(self, other) -> "Quaternion":
        if isinstance(other, (int, float)):
            return self * (1.0 / other)
        return NotImplemented

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm2(self) -> float:
        return self.w**2 + self.x**2 + self.y**2 + self.z**2

    def __abs__(self) -> float:
        return float(np.sqrt(self.norm2()))

    def inverse(self) -> "Quaternion":
        return qinv(self)

    @property
    def real(self) -> float:
        return self.w

    @property
    def imag(self) -> "Quaternion":
        return Quaternion(0.0, self.x, self.y, self.z)

    def isclose(self, other: "Quaternion", tol: float = 1e-12) -> bool:
        return abs(self - other) <= tol


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def qmul(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product ``a b`` (``ij = k``, ``jk = i``, ``ki = j``)."""
    return Quaternion(
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
        a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
    )


def qinv(g: Quaternion) -> Quaternion:
    n2 = g.norm2()
    if n2 == 0.0:
        raise ZeroDivisor("inverse of a zero quaternion")
    return g.conj() * (1.0 / n2)


# ---------------------------------------------------------------------------
# matrices

class QuaternionMatrix:
    """Dense quaternion matrix backed by an ``(m, n, 4)`` float64 array."""

    __slots__ = ("data",)

    def __init__(self, data):
        arr = np.array(data, dtype=np.float64)
        if arr.ndim != 3 or arr.shape[2] != 4:
            raise DimensionMismatch(f"expected an (m, n, 4) array, got shape {arr.shape}")
        self.data = arr

    @classmethod
    def zeros(cls, m: int, n: int) -> "QuaternionMatrix":
        return cls(np.zeros((m, n, 4)))

    @classmethod
    def identity(cls, n: int) -> "QuaternionMatrix":
        d = np.zeros((n, n, 4))
        d[np.arange(n), np.arange(n), 0] = 1.0
        return cls(d)

    @classmethod
    def from_parts(cls, w=None, x=None, y=None, z=None) -> "QuaternionMatrix":
        given = [p for p in (w, x, y, z) if p is not None]
        if not given:
            raise ValueError("at least one component is required")
        shape = np.shape(given[0])
        parts = [np.zeros(shape) if p is None else np.asarray(p, dtype=np.float64) for p in (w, x, y, z)]
        return cls(np.stack(parts, axis=-1))

    @classmethod
    def from_complex(cls, alpha, beta) -> "QuaternionMatrix":
        return cls(from_complex(np.asarray(alpha), np.asarray(beta)))

    @classmethod
    def from_rows(cls, rows) -> "QuaternionMatrix":
        """Build from nested lists of Quaternion (or real) entries."""
        out = []
        for row in rows:
            out.append([e.as_array() if isinstance(e, Quaternion) else [float(e), 0, 0, 0] for e in row])
        return cls(np.array(out, dtype=np.float64))

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape[0], self.data.shape[1]

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def w(self) -> np.ndarray:
        return self.data[..., 0]

    @property
    def x(self) -> np.ndarray:
        return self.data[..., 1]

    @property
    def y(self) -> np.ndarray:
        return self.data[..., 2]

    @property
    def z(self) -> np.ndarray:
        return self.data[..., 3]

    def to_complex(self) -> tuple[np.ndarray, np.ndarray]:
        return to_complex(self.data)

    def copy(self) -> "QuaternionMatrix":
        return QuaternionMatrix(self.data.copy())

    def __getitem__(self, idx):
        if isinstance(idx, tuple) and len(idx) == 2 and all(isinstance(i, (int, np.integer)) for i in idx):
            return Quaternion.from_array(self.data[idx])
        sub = self.data[idx]
        if sub.ndim != 3:
            raise IndexError("use integer pairs for entries or slice pairs for blocks")
        return QuaternionMatrix(sub)

    def __repr__(self) -> str:
        return f"QuaternionMatrix(shape={self.shape})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, QuaternionMatrix):
            return NotImplemented
        return self.data.shape == other.data.shape and bool(np.array_equal(self.data, other.data))

    __hash__ = None

    def _check_same(self, other: "QuaternionMatrix") -> None:
        if self.shape != other.shape:
            raise DimensionMismatch(f"shapes {self.shape} and {other.shape} differ")

    def __add__(self, other: "QuaternionMatrix") -> "QuaternionMatrix":
        if not isinstance(other, QuaternionMatrix):
            return NotImplemented
        self._check_same(other)
        return QuaternionMatrix(self.data + other.data)

    def __sub__(self, other: "QuaternionMatrix") -> "QuaternionMatrix":
        if not isinstance(other, QuaternionMatrix):
            return NotImplemented
        self._check_same(other)
        return QuaternionMatrix(self.data - other.data)

    def __neg__(self) -> "QuaternionMatrix":
        return QuaternionMatrix(-self.data)

    def __mul__(self, other) -> "QuaternionMatrix":
        # real scalars only; quaternion scalars do not commute, use scale_left/right
        if isinstance(other, (int, float, np.floating)):
            return QuaternionMatrix(self.data * float(other))
        return NotImplemented

    __rmul__ = __mul__

    def __matmul__(self, other: "QuaternionMatrix") -> "QuaternionMatrix":
        if not isinstance(other, QuaternionMatrix):
            return NotImplemented
        return qmat_mul(self, other)

    def scale_right(self, q: Quaternion) -> "QuaternionMatrix":
        return QuaternionMatrix(qmul_arr(self.data, q.as_array()))

    def scale_left(self, q: Quaternion) -> "QuaternionMatrix":
        return QuaternionMatrix(qmul_arr(q.as_array(), self.data))

    def conj(self) -> "QuaternionMatrix":
        return QuaternionMatrix(qconj_arr(self.data))

    @property
    def T(self) -> "QuaternionMatrix":
        return QuaternionMatrix(self.data.transpose(1, 0, 2))

    @property
    def H(self) -> "QuaternionMatrix":
        return QuaternionMatrix(qconj_arr(self.data.transpose(1, 0, 2)))

    def conj_transpose(self) -> "QuaternionMatrix":
        return self.H

    def fro_norm(self) -> float:
        return float(np.sqrt(np.sum(self.data * self.data)))

    def abs(self) -> np.ndarray:
        """Entrywise quaternion magnitudes."""
        return np.sqrt(qnorm2_arr(self.data))


def qmat_mul(A: QuaternionMatrix, B: QuaternionMatrix) -> QuaternionMatrix:
    if A.cols != B.rows:
        raise DimensionMismatch(f"cannot multiply {A.shape} by {B.shape}")
    return QuaternionMatrix(qmatmul_arr(A.data, B.data))


def complex_adjoint(A: QuaternionMatrix) -> np.ndarray:
    """Return the ``2m x 2n`` complex matrix ``[[Aa, Ab], [-conj(Ab), conj(Aa)]]``."""
    a, b = A.to_complex()
    return np.block([[a, b], [-b.conj(), a.conj()]])


def from_complex_adjoint(chi: np.ndarray) -> QuaternionMatrix:
    """Read a quaternion matrix back out of the top block row of its adjoint."""
    m2, n2 = chi.shape
    m, n = m2 // 2, n2 // 2
    return QuaternionMatrix.from_complex(chi[:m, :n], chi[:m, n:])


def q_determinant(A: QuaternionMatrix) -> float:
    if A.rows != A.cols:
        raise DimensionMismatch(f"q-determinant needs a square matrix, got {A.shape}")
    if A.rows == 0:
        return 1.0
    return float(np.linalg.det(complex_adjoint(A)).real)


# ---------------------------------------------------------------------------
# factorizations

class QluResult(NamedTuple):
    L: QuaternionMatrix
    U: QuaternionMatrix


class QqrResult(NamedTuple):
    Q: QuaternionMatrix
    R: QuaternionMatrix


class QsvdResult(NamedTuple):
    U: QuaternionMatrix
    sigma: np.ndarray
    V: QuaternionMatrix

    def sigma_matrix(self) -> QuaternionMatrix:
        m, n = self.U.rows, self.V.rows
        S = np.zeros((m, n, 4))
        k = len(self.sigma)
        S[np.arange(k), np.arange(k), 0] = self.sigma
        return QuaternionMatrix(S)

    def reconstruct(self) -> QuaternionMatrix:
        return self.U @ self.sigma_matrix() @ self.V.H


def qlu(A: QuaternionMatrix, tol: float | None = None) -> QluResult:
    """Doolittle LU without pivoting: ``A = L U`` with unit lower ``L``.

    Raises ``SingularMinor(t)`` when the t-th pivot drops below ``tol``
    (default ``1e-12 * ||A||_F``).
    """
    m, n = A.shape
    if m != n:
        raise DimensionMismatch(f"qlu needs a square matrix, got {A.shape}")
    if tol is None:
        tol = 1e-12 * A.fro_norm()
    U = A.data.copy()
    L = np.zeros_like(U)
    L[np.arange(n), np.arange(n), 0] = 1.0
    for k in range(n):
        piv = U[k, k]
        mag = float(np.sqrt(piv @ piv))
        if mag <= tol:
            raise SingularMinor(k + 1, mag)
        if k == n - 1:
            break
        L[k + 1:, k] = qmul_arr(U[k + 1:, k], qinv_arr(piv))
        U[k + 1:, k + 1:] -= qmul_arr(L[k + 1:, k][:, None, :], U[k, k + 1:][None, :, :])
        U[k + 1:, k] = 0.0
    return QluResult(QuaternionMatrix(L), QuaternionMatrix(U))


def _house_apply_left(M: np.ndarray, v: np.ndarray, beta: float) -> None:
    # M <- (I - beta v v^H) M, in place
    w = qmatmul_arr(qconj_arr(v)[None, :, :], M)  # 1 x n
    M -= beta * qmatmul_arr(v[:, None, :], w)


def _house_apply_right(M: np.ndarray, v: np.ndarray, beta: float) -> None:
    # M <- M (I - beta v v^H), in place
    w = qmatmul_arr(M, v[:, None, :])  # m x 1
    M -= beta * qmatmul_arr(w, qconj_arr(v)[None, :, :])


def qqr(A: QuaternionMatrix) -> QqrResult:
    """Householder QR with a real, nonnegative diagonal in ``R``.

    Each reflector is ``H = I - 2 v v^H / (v^H v)`` with
    ``v = x + e1 * (x1/|x1|) * ||x||``; ``v^H x`` is then real so the
    reflection needs no quaternion phase bookkeeping.  A final diagonal
    unitary moves the phase of every ``R[k, k]`` into ``Q``.
    """
    m, n = A.shape
    if m < n:
        raise DimensionMismatch(f"qqr needs rows >= cols, got {A.shape}")
    R = A.data.copy()
    Q = np.zeros((m, m, 4))
    Q[np.arange(m), np.arange(m), 0] = 1.0
    scale = A.fro_norm()
    for k in range(min(m - 1, n)):
        x = R[k:, k].copy()
        alpha = float(np.sqrt(np.sum(x * x)))
        if alpha <= 1e-300 or alpha <= 1e-15 * scale:
            continue
        if float(np.sum(x[1:] * x[1:])) == 0.0:
            continue  # already reduced; the phase is fixed below
        x1 = x[0]
        a1 = float(np.sqrt(x1 @ x1))
        theta = x1 / a1 if a1 > 0 else np.array([1.0, 0.0, 0.0, 0.0])
        v = x
        v[0] = x1 + theta * alpha
        beta = 2.0 / float(np.sum(v * v))
        _house_apply_left(R[k:, k:], v, beta)
        _house_apply_right(Q[:, k:], v, beta)
        R[k + 1:, k] = 0.0
    # phase fix: R <- D^H R, Q <- Q D with d_k = r_kk / |r_kk|
    for k in range(n):
        r = R[k, k]
        mag = float(np.sqrt(r @ r))
        if mag == 0.0:
            continue
        d = r / mag
        if d[0] == 1.0 and not d[1:].any():
            continue
        R[k, k:] = qmul_arr(qconj_arr(d), R[k, k:])
        R[k, k] = np.array([mag, 0.0, 0.0, 0.0])
        Q[:, k] = qmul_arr(Q[:, k], d)
    R[np.tril_indices(m, -1, n)] = 0.0
    return QqrResult(QuaternionMatrix(Q), QuaternionMatrix(R))


def _partner(c: np.ndarray) -> np.ndarray:
    # c is the first adjoint column [qa; -conj(qb)]; the second is [qb; conj(qa)]
    h = c.shape[0] // 2
    return np.concatenate([-c[h:].conj(), c[:h].conj()])


def _to_quat_columns(C: np.ndarray) -> np.ndarray:
    h = C.shape[0] // 2
    return from_complex(C[:h], -C[h:].conj())


def qsvd(A: QuaternionMatrix, pair_tol: float = 1e-8) -> QsvdResult:
    """Quaternion SVD ``A = U diag(sigma) V^H`` through the complex adjoint.

    The adjoint's singular values come in equal pairs; for every pair one
    left vector is kept (its J-partner is the same quaternion direction) and
    the matching right vector is carried along.  Every column pair is then
    rotated by a unit quaternion so the largest-magnitude entry of the left
    vector is real and positive, which makes the output a deterministic
    function of the input.
    """
    m, n = A.shape
    p = min(m, n)
    chi = complex_adjoint(A)
    try:
        Uc, s, Vch = np.linalg.svd(chi, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    Vc = Vch.conj().T

    smax = s[0] if s.size else 0.0
    if p:
        paired = s[0: 2 * p: 2] - s[1: 2 * p: 2]
        if np.any(np.abs(paired) > pair_tol * max(smax, 1e-300) + 1e-300):
            raise ConvergenceFailure("adjoint singular values are not paired")

    zero_tol = 4.0 * max(m, n) * np.finfo(float).eps * smax
    # left vectors (with right counterparts for the first 2p columns)
    S_left: list[np.ndarray] = []
    T_right: list[np.ndarray] = []
    U_cols: list[np.ndarray] = []
    V_cols: list[np.ndarray] = []
    for jcol in range(2 * m):
        c = Uc[:, jcol].copy()
        # the U/V column pairing of a zero singular value is arbitrary and
        # not J-compatible; those right vectors are completed below instead
        paired = jcol < 2 * p and len(V_cols) < p and s[jcol] > zero_tol
        t = Vc[:, jcol].copy() if paired else None
        if S_left:
            coef = np.stack(S_left, axis=1).conj().T @ c
            c = c - np.stack(S_left, axis=1) @ coef
            if t is not None:
                t = t - np.stack(T_right, axis=1) @ coef
        nrm = float(np.linalg.norm(c))
        if nrm < 0.5:
            continue
        c /= nrm
        S_left.extend([c, _partner(c)])
        U_cols.append(c)
        if t is not None:
            t /= nrm
            T_right.extend([t, _partner(t)])
            V_cols.append(t)
        else:
            zero = np.zeros(2 * n, complex)
            T_right.extend([zero, zero])
        if len(U_cols) == m:
            break
    n_paired = len(V_cols)
    if len(U_cols) != m or any(x > zero_tol for x in s[2 * n_paired: 2 * p: 2]):
        raise ConvergenceFailure("could not extract a quaternion singular basis")

    # complete V from the remaining right vectors of the adjoint
    S_right = []
    for t in V_cols:
        S_right.extend([t, _partner(t)])
    for jcol in range(2 * n):
        if len(V_cols) == n:
            break
        c = Vc[:, jcol].copy()
        Smat = np.stack(S_right, axis=1) if S_right else None
        if Smat is not None:
            c = c - Smat @ (Smat.conj().T @ c)
            c = c - Smat @ (Smat.conj().T @ c)
        nrm = float(np.linalg.norm(c))
        if nrm < 0.5:
            continue
        c /= nrm
        S_right.extend([c, _partner(c)])
        V_cols.append(c)
    if len(V_cols) != n:
        raise ConvergenceFailure("could not complete the right singular basis")

    Uq = _to_quat_columns(np.stack(U_cols, axis=1))
    Vq = _to_quat_columns(np.stack(V_cols, axis=1))

    # phase convention: largest |entry| of every left column real positive
    for k in range(m):
        col = Uq[:, k]
        mags = qnorm2_arr(col)
        e = col[int(np.argmax(mags))]
        mag = float(np.sqrt(e @ e))
        d = qconj_arr(e) / mag
        Uq[:, k] = qmul_arr(col, d)
        Uq[int(np.argmax(mags)), k] = np.array([mag, 0.0, 0.0, 0.0])
        if k < n_paired:
            Vq[:, k] = qmul_arr(Vq[:, k], d)
    for k in range(n_paired, n):
        col = Vq[:, k]
        mags = qnorm2_arr(col)
        e = col[int(np.argmax(mags))]
        mag = float(np.sqrt(e @ e))
        Vq[:, k] = qmul_arr(col, qconj_arr(e) / mag)
        Vq[int(np.argmax(mags)), k] = np.array([mag, 0.0, 0.0, 0.0])

    return QsvdResult(QuaternionMatrix(Uq), s[0: 2 * p: 2].copy(), QuaternionMatrix(Vq))
