"""Arnold (cat map) scrambling of square images."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .errors import BadKey, NotSquare

CLASSIC = (1, 1, 1, 2)


@dataclass(frozen=True)
class ArnoldKey:
    a: int = 1
    b: int = 1
    c: int = 1
    d: int = 2
    k: int = 10
    N: int = 0

    def __post_init__(self):
        for name in ("a", "b", "c", "d", "k", "N"):
            if not isinstance(getattr(self, name), (int, np.integer)):
                raise BadKey(f"{name} must be an integer")
        if abs(self.det) != 1:
            raise BadKey(f"ad - bc = {self.det}, expected +1 or -1")
        if self.k < 0:
            raise BadKey("iteration count must be nonnegative")
        if self.N < 0:
            raise BadKey("side length must be nonnegative")

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=np.int64)

    @property
    def inverse_matrix(self) -> np.ndarray:
        # det = +-1, so the adjugate times det is the exact integer inverse
        return self.det * np.array([[self.d, -self.b], [-self.c, self.a]], dtype=np.int64)

    def to_dict(self) -> dict:
        return {k: int(v) for k, v in asdict(self).items()}

    @classmethod
    def from_dict(cls, d: dict) -> "ArnoldKey":
        return cls(**{k: int(d[k]) for k in ("a", "b", "c", "d", "k", "N")})


def _permutation(M: np.ndarray, N: int) -> tuple[np.ndarray, np.ndarray]:
    x, y = np.meshgrid(np.arange(N), np.arange(N), indexing="ij")
    nx = (M[0, 0] * x + M[0, 1] * y) % N
    ny = (M[1, 0] * x + M[1, 1] * y) % N
    return nx, ny


def _check(img: np.ndarray, key: ArnoldKey) -> int:
    h, w = img.shape[:2]
    if h != w:
        raise NotSquare(f"Arnold scrambling needs a square image, got {h}x{w}")
    if key.N and key.N != h:
        raise BadKey(f"key is for side {key.N}, image side is {h}")
    return h


def _apply(img: np.ndarray, M: np.ndarray, k: int) -> np.ndarray:
    N = img.shape[0]
    out = np.array(img, copy=True)
    if k == 0 or N == 0:
        return out
    nx, ny = _permutation(M, N)
    for _ in range(k):
        nxt = np.empty_like(out)
        nxt[nx, ny] = out
        out = nxt
    return out


def arnold_scramble(img: np.ndarray, key: ArnoldKey) -> np.ndarray:
    """Move pixel ``(x, y)`` to ``M (x, y) mod N``, ``key.k`` times."""
    _check(img, key)
    return _apply(img, key.matrix, key.k)


def arnold_unscramble(img: np.ndarray, key: ArnoldKey) -> np.ndarray:
    _check(img, key)
    return _apply(img, key.inverse_matrix, key.k)


def arnold_period(N: int, a: int = 1, b: int = 1, c: int = 1, d: int = 2, limit: int = 100000) -> int:
    """Smallest k > 0 for which k iterations give back the identity."""
    key = ArnoldKey(a, b, c, d, 1, N)
    if N <= 1:
        return 1
    nx, ny = _permutation(key.matrix, N)
    flat = (nx * N + ny).ravel()
    start = np.arange(N * N)
    cur = start.copy()
    for k in range(1, limit + 1):
        # position of every original pixel after k steps
        cur = flat[cur]
        if np.array_equal(cur, start):
            return k
    raise RuntimeError(f"no period found within {limit} iterations")
