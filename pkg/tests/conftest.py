"""Shared fixtures and independent oracles.

The oracles deliberately avoid the package's own kernels: quaternions are
multiplied through their 4x4 real left-multiplication matrices, dual numbers
through 2x2 nilpotent-block matrices.
"""

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from dqzw.dual import DualQuaternionMatrix
from dqzw.quaternion import QuaternionMatrix

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def left_matrix(q) -> np.ndarray:
    """Real 4x4 matrix of ``x -> q x`` on coefficient vectors (w, x, y, z)."""
    w, x, y, z = q
    return np.array([
        [w, -x, -y, -z],
        [x, w, -z, y],
        [y, z, w, -x],
        [z, -y, x, w],
    ])


def oracle_qmul(a, b) -> np.ndarray:
    return left_matrix(np.asarray(a, dtype=float)) @ np.asarray(b, dtype=float)


def oracle_qmatmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Triple-loop product of (m,k,4) and (k,n,4) arrays."""
    m, k, _ = A.shape
    n = B.shape[1]
    C = np.zeros((m, n, 4))
    for r in range(m):
        for c in range(n):
            for t in range(k):
                C[r, c] += oracle_qmul(A[r, t], B[t, c])
    return C


def real_rep(A: np.ndarray) -> np.ndarray:
    """4m x 4n real block representation; multiplicative like the product."""
    m, n, _ = A.shape
    R = np.zeros((4 * m, 4 * n))
    for r in range(m):
        for c in range(n):
            R[4 * r:4 * r + 4, 4 * c:4 * c + 4] = left_matrix(A[r, c])
    return R


def rand_qmat(rng, m, n=None) -> QuaternionMatrix:
    n = m if n is None else n
    return QuaternionMatrix(rng.standard_normal((m, n, 4)))


def rand_dqmat(rng, n, dominant: bool = True, m=None) -> DualQuaternionMatrix:
    """Random dual-quaternion matrix; ``dominant`` adds a real diagonal boost."""
    m = n if m is None else m
    s = rng.standard_normal((m, n, 4))
    if dominant:
        k = min(m, n)
        s[np.arange(k), np.arange(k), 0] += 4.0 * max(m, n)
    return DualQuaternionMatrix(QuaternionMatrix(s), QuaternionMatrix(rng.standard_normal((m, n, 4))))


def quat_singular_values(A: np.ndarray) -> np.ndarray:
    """Singular values of a quaternion matrix via its real representation.

    Every quaternion singular value appears four times in the real form.
    """
    s = np.linalg.svd(real_rep(A), compute_uv=False)
    return s[::4][: min(A.shape[:2])]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_RESULTS: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(ACCEPTANCE_RESULTS[n])
