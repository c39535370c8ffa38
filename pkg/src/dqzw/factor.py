"""Dual-quaternion LU, QR and SVD.

Each factorization takes the standard parts from the matching quaternion
factorization of ``A_s`` and then solves the first-order equation for the
dual parts, e.g. ``A_i = L_s U_i + L_i U_s`` for LU.  The dual parts are what
the watermarking pipeline publishes; the ``*_dual_part`` helpers rebuild
``A_i`` from a standard-part factorization plus those published factors.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dual import DualNumber, DualQuaternionMatrix
from .errors import DegenerateSpectrum, DimensionMismatch, RankDeficient
from .quaternion import (
    QuaternionMatrix,
    qconj_arr,
    qinv_arr,
    qlu,
    qmatmul_arr,
    qmul_arr,
    qqr,
    qsvd,
)

TOL_RANK = 1e-10
TOL_GAP = 1e-8


# ---------------------------------------------------------------------------
# triangular solves over the quaternions

def solve_lower_left(L: QuaternionMatrix, B: QuaternionMatrix) -> QuaternionMatrix:
    """Solve ``L X = B`` for lower-triangular ``L`` by forward substitution."""
    n = L.rows
    if L.cols != n or B.rows != n:
        raise DimensionMismatch(f"cannot solve {L.shape} X = {B.shape}")
    Ld, X = L.data, np.zeros_like(B.data)
    for k in range(n):
        rhs = B.data[k]
        if k:
            rhs = rhs - qmatmul_arr(Ld[k:k + 1, :k], X[:k])[0]
        X[k] = qmul_arr(qinv_arr(Ld[k, k]), rhs)
    return QuaternionMatrix(X)


def solve_upper_right(U: QuaternionMatrix, B: QuaternionMatrix) -> QuaternionMatrix:
    """Solve ``X U = B`` for upper-triangular ``U`` column by column."""
    n = U.rows
    if U.cols != n or B.cols != n:
        raise DimensionMismatch(f"cannot solve X {U.shape} = {B.shape}")
    Ud, X = U.data, np.zeros_like(B.data)
    for k in range(n):
        rhs = B.data[:, k]
        if k:
            rhs = rhs - qmatmul_arr(X[:, :k], Ud[:k, k:k + 1])[:, 0]
        X[:, k] = qmul_arr(rhs, qinv_arr(Ud[k, k]))
    return QuaternionMatrix(X)


def _strict_lower(M: np.ndarray) -> np.ndarray:
    out = M.copy()
    out[np.triu_indices(M.shape[0], 0, M.shape[1])] = 0.0
    return out


def _upper(M: np.ndarray) -> np.ndarray:
    out = M.copy()
    out[np.tril_indices(M.shape[0], -1, M.shape[1])] = 0.0
    return out


# ---------------------------------------------------------------------------
# LU

@dataclass
class DqluFactors:
    L: DualQuaternionMatrix
    U: DualQuaternionMatrix

    def reconstruct(self) -> DualQuaternionMatrix:
        return self.L @ self.U


def dqlu(A: DualQuaternionMatrix, tol: float | None = None) -> DqluFactors:
    """LU of a square dual-quaternion matrix.

    With ``M = L_s^{-1} A_i U_s^{-1}`` the dual parts are
    ``L_i = L_s strictlower(M)`` and ``U_i = upper(M) U_s``; then
    ``L_s U_i + L_i U_s = L_s M U_s = A_i`` and the triangular shapes hold
    by construction.
    """
    m, n = A.shape
    if m != n:
        raise DimensionMismatch(f"dqlu needs a square matrix, got {A.shape}")
    Ls, Us = qlu(A.s, tol)
    M = solve_upper_right(Us, solve_lower_left(Ls, A.i))
    Li = Ls @ QuaternionMatrix(_strict_lower(M.data))
    Ui = QuaternionMatrix(_upper(M.data)) @ Us
    Li = QuaternionMatrix(_strict_lower(Li.data))
    Ui = QuaternionMatrix(_upper(Ui.data))
    return DqluFactors(DualQuaternionMatrix(Ls, Li), DualQuaternionMatrix(Us, Ui))


def lu_dual_part(Ls, Us, Li, Ui) -> QuaternionMatrix:
    return Ls @ Ui + Li @ Us


# ---------------------------------------------------------------------------
# QR

@dataclass
class DqqrFactors:
    Q: DualQuaternionMatrix
    R: DualQuaternionMatrix
    P: QuaternionMatrix
    B: QuaternionMatrix

    def reconstruct(self) -> DualQuaternionMatrix:
        return self.Q @ self.R


def dqqr(A: DualQuaternionMatrix, tol: float | None = None) -> DqqrFactors:
    """QR of a square dual-quaternion matrix with full-rank standard part.

    ``P = Q_s^H Q_i`` is anti-Hermitian, so only its lower triangle is
    solved for, one column at a time from ``P R_s = B - R_i`` with
    ``B = Q_s^H A_i``.  The diagonal of ``R_i`` is the real part of each
    diagonal right-hand side and ``p_kk`` its imaginary part over ``r_kk``.
    """
    m, n = A.shape
    if m != n:
        raise DimensionMismatch(f"dqqr needs a square matrix, got {A.shape}")
    if tol is None:
        tol = 1e-12 * max(A.s.fro_norm(), 1e-300)
    Qs, Rs = qqr(A.s)
    rdiag = Rs.w.diagonal()
    for k in range(n):
        if rdiag[k] <= tol:
            raise RankDeficient(k, float(rdiag[k]))
    B = (Qs.H @ A.i).data
    R = Rs.data
    P = np.zeros((n, n, 4))
    for k in range(n):
        rhs = B[k:, k].copy()
        if k:
            rhs -= qmatmul_arr(P[k:, :k], R[:k, k:k + 1])[:, 0]
        rkk = rdiag[k]
        P[k + 1:, k] = rhs[1:] / rkk
        P[k, k] = np.array([0.0, rhs[0, 1], rhs[0, 2], rhs[0, 3]]) / rkk
    iu = np.triu_indices(n, 1)
    P[iu] = -qconj_arr(P.transpose(1, 0, 2)[iu])
    Pm = QuaternionMatrix(P)
    Ri = _upper((QuaternionMatrix(B) - Pm @ Rs).data)
    Ri[np.arange(n), np.arange(n), 1:] = 0.0
    Qi = Qs @ Pm
    return DqqrFactors(
        DualQuaternionMatrix(Qs, Qi),
        DualQuaternionMatrix(Rs, QuaternionMatrix(Ri)),
        Pm,
        QuaternionMatrix(B),
    )


def qr_dual_part(Qs, Rs, Qi, Ri) -> QuaternionMatrix:
    return Qs @ Ri + Qi @ Rs


# ---------------------------------------------------------------------------
# SVD

def _diag_matrix(values: np.ndarray, m: int, n: int) -> QuaternionMatrix:
    S = np.zeros((m, n, 4))
    k = len(values)
    S[np.arange(k), np.arange(k), 0] = values
    return QuaternionMatrix(S)


@dataclass
class DqsvdFactors:
    U: DualQuaternionMatrix
    V: DualQuaternionMatrix
    sigma_s: np.ndarray
    sigma_i: np.ndarray
    W1: QuaternionMatrix
    W2: QuaternionMatrix
    rank: int
    P_U: QuaternionMatrix = field(repr=False)
    P_V: QuaternionMatrix = field(repr=False)

    @property
    def sigma(self) -> list[DualNumber]:
        return [DualNumber(float(s), float(i)) for s, i in zip(self.sigma_s, self.sigma_i)]

    def sigma_matrix(self) -> DualQuaternionMatrix:
        m, n = self.U.shape[0], self.V.shape[0]
        return DualQuaternionMatrix(_diag_matrix(self.sigma_s, m, n), _diag_matrix(self.sigma_i, m, n))

    def reconstruct(self) -> DualQuaternionMatrix:
        return self.U @ self.sigma_matrix() @ self.V.H


def _check_gaps(sig: np.ndarray, r: int, tol_gap: float, smax: float) -> None:
    for k in range(r - 1):
        gap = sig[k] - sig[k + 1]
        if gap <= tol_gap * smax:
            raise DegenerateSpectrum(k, k + 1, float(gap))


def rotate_trailing(U: QuaternionMatrix, r: int, W: QuaternionMatrix) -> QuaternionMatrix:
    """Replace columns ``r:`` of ``U`` by ``U[:, r:] @ W``."""
    if W.rows == 0:
        return U.copy()
    out = U.data.copy()
    out[:, r:] = qmatmul_arr(U.data[:, r:], W.data)
    return QuaternionMatrix(out)


def dqsvd(A: DualQuaternionMatrix, tol_rank: float = TOL_RANK, tol_gap: float = TOL_GAP) -> DqsvdFactors:
    """SVD ``A = U Sigma V^H`` with dual singular values.

    Appreciable block: with ``C = U_s^H A_i V_s`` and anti-Hermitian
    ``P_U = U_s^H U_i``, ``P_V = V_s^H V_i`` the first-order terms satisfy
    ``C = P_U Sigma_s + Sigma_i - Sigma_s P_V``; this is solved entrywise with
    the gauge ``diag(P_V) = 0``.  Trailing (infinitesimal) block: the
    quaternion SVD of ``G = C[r:, r:]`` gives rotations ``W1^H G W2 = D``; the
    trailing left/right singular vectors are rotated by ``W1``/``W2`` and the
    dual singular values there are ``D_kk eps``.  Off-diagonal blocks between
    the two groups are determined by the anti-Hermitian structure.
    """
    m, n = A.shape
    p = min(m, n)
    std = qsvd(A.s)
    sig = std.sigma.copy()
    smax = float(sig[0]) if p else 0.0
    r = int(np.sum(sig > tol_rank * smax)) if smax > 0 else 0
    _check_gaps(sig, r, tol_gap, smax)

    Us, Vs = std.U, std.V
    W1 = QuaternionMatrix.identity(m - r)
    W2 = QuaternionMatrix.identity(n - r)
    C = Us.H @ A.i @ Vs
    d_trailing = np.zeros(0)
    if r < m and r < n:
        g = qsvd(C[r:, r:])
        W1, W2 = g.U, g.V
        d_trailing = g.sigma
        Us = rotate_trailing(Us, r, W1)
        Vs = rotate_trailing(Vs, r, W2)
        C = Us.H @ A.i @ Vs

    Cd = C.data
    s_r = sig[:r]
    PU = np.zeros((m, m, 4))
    PV = np.zeros((n, n, 4))

    # appreciable x appreciable
    Crr = Cd[:r, :r]
    CrrT = qconj_arr(Crr.transpose(1, 0, 2))  # conj(C_lk) at (k, l)
    sk = s_r[:, None, None]
    sl = s_r[None, :, None]
    denom = sl**2 - sk**2
    off = ~np.eye(r, dtype=bool)
    safe = np.where(off[..., None], denom, 1.0)
    PU[:r, :r] = np.where(off[..., None], (sl * Crr + sk * CrrT) / safe, 0.0)
    PV[:r, :r] = np.where(off[..., None], (sk * Crr + sl * CrrT) / safe, 0.0)
    idx = np.arange(r)
    PU[idx, idx, 1:] = Crr[idx, idx, 1:] / s_r[:, None]

    # infinitesimal rows of U against appreciable columns, and the V analogue
    if r:
        PU[r:, :r] = Cd[r:, :r] / s_r[None, :, None]
        PV[:r, r:] = -Cd[:r, r:] / s_r[:, None, None]
        PU[:r, r:] = -qconj_arr(PU[r:, :r].transpose(1, 0, 2))
        PV[r:, :r] = -qconj_arr(PV[:r, r:].transpose(1, 0, 2))

    # exact anti-Hermitian symmetrisation
    PU = 0.5 * (PU - qconj_arr(PU.transpose(1, 0, 2)))
    PV = 0.5 * (PV - qconj_arr(PV.transpose(1, 0, 2)))

    sigma_s = np.zeros(p)
    sigma_s[:r] = s_r
    sigma_i = np.zeros(p)
    sigma_i[:r] = Crr[idx, idx, 0]
    sigma_i[r:r + len(d_trailing)] = d_trailing

    PUm, PVm = QuaternionMatrix(PU), QuaternionMatrix(PV)
    return DqsvdFactors(
        U=DualQuaternionMatrix(Us, Us @ PUm),
        V=DualQuaternionMatrix(Vs, Vs @ PVm),
        sigma_s=sigma_s,
        sigma_i=sigma_i,
        W1=W1,
        W2=W2,
        rank=r,
        P_U=PUm,
        P_V=PVm,
    )


def svd_dual_part(Us, sigma_s, Vs, Ui, sigma_i, Vi) -> QuaternionMatrix:
    """``U_s S_s V_i^H + U_s S_i V_s^H + U_i S_s V_s^H``."""
    m, n = Us.rows, Vs.rows
    Ss = _diag_matrix(np.asarray(sigma_s), m, n)
    Si = _diag_matrix(np.asarray(sigma_i), m, n)
    return Us @ Ss @ Vi.H + Us @ Si @ Vs.H + Ui @ Ss @ Vs.H


def standard_svd_with_keys(As: QuaternionMatrix, rank: int, W1: QuaternionMatrix, W2: QuaternionMatrix):
    """Standard-part SVD of ``As`` aligned with stored keys.

    Returns ``(U_s, sigma_s, V_s)`` with singular values past ``rank`` zeroed
    and the trailing singular vectors rotated by ``W1`` / ``W2``.
    """
    std = qsvd(As)
    sig = std.sigma.copy()
    sig[rank:] = 0.0
    Us, Vs = std.U, std.V
    if rank < Us.rows and W1.rows == Us.rows - rank:
        Us = rotate_trailing(Us, rank, W1)
    if rank < Vs.rows and W2.rows == Vs.rows - rank:
        Vs = rotate_trailing(Vs, rank, W2)
    return Us, sig, Vs


def relative_residuals(A: DualQuaternionMatrix, F: DualQuaternionMatrix) -> tuple[float, float]:
    """Relative residuals of the standard and dual parts of ``A - F``."""
    rs = (A.s - F.s).fro_norm() / max(A.s.fro_norm(), 1e-300)
    ref = A.i.fro_norm() or A.s.fro_norm()
    ri = (A.i - F.i).fro_norm() / max(ref, 1e-300)
    return rs, ri
