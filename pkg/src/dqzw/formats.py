"""On-disk formats: the binary zero-watermark payload and the JSON key file.

Zero-watermark layout (all integers little-endian)::

    b"DQZW" | u8 version | u8 method | u32 rows | u32 cols
    then, per factor in method order:
        u8 tag | u32 rows | u32 cols | rows*cols*4 float64   (quaternion matrix)
        u8 tag | u32 length | length float64                 (real vector)
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .arnold import ArnoldKey
from .errors import FormatError
from .imaging import FeatureParams
from .quaternion import QuaternionMatrix

MAGIC = b"DQZW"
VERSION = 1
KEY_FORMAT = "dqzw-key"
KEY_VERSION = 1

METHOD_TAGS = {"DQLU": 1, "DQQR": 2, "DQSVD": 3}
TAG_METHODS = {v: k for k, v in METHOD_TAGS.items()}

# (tag, name, is_vector) in file order
LAYOUT = {
    "DQLU": [(ord("L"), "L_i", False), (ord("U"), "U_i", False)],
    "DQQR": [(ord("Q"), "Q_i", False), (ord("R"), "R_i", False)],
    "DQSVD": [(ord("U"), "U_i", False), (ord("S"), "Sigma_i", True), (ord("V"), "V_i", False)],
}


def expected_shapes(method: str, m: int, n: int) -> dict[str, tuple]:
    if method == "DQLU":
        return {"L_i": (m, n), "U_i": (m, n)}
    if method == "DQQR":
        return {"Q_i": (m, m), "R_i": (m, n)}
    if method == "DQSVD":
        return {"U_i": (m, m), "Sigma_i": (min(m, n),), "V_i": (n, n)}
    raise FormatError(f"unknown method {method!r}")


@dataclass
class ZeroWatermark:
    method: str
    m: int
    n: int
    factors: dict = field(default_factory=dict)

    def __post_init__(self):
        shapes = expected_shapes(self.method, self.m, self.n)
        if set(self.factors) != set(shapes):
            raise FormatError(f"{self.method} needs factors {sorted(shapes)}, got {sorted(self.factors)}")
        for name, shape in shapes.items():
            f = self.factors[name]
            got = f.shape if isinstance(f, QuaternionMatrix) else np.shape(f)
            if tuple(got) != shape:
                raise FormatError(f"factor {name} has shape {tuple(got)}, expected {shape}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, ZeroWatermark):
            return NotImplemented
        return serialize_zw(self) == serialize_zw(other)


def serialize_zw(zw: ZeroWatermark) -> bytes:
    parts = [MAGIC, struct.pack("<BBII", VERSION, METHOD_TAGS[zw.method], zw.m, zw.n)]
    for tag, name, is_vec in LAYOUT[zw.method]:
        f = zw.factors[name]
        if is_vec:
            v = np.ascontiguousarray(f, dtype="<f8")
            parts.append(struct.pack("<BI", tag, v.shape[0]))
            parts.append(v.tobytes())
        else:
            parts.append(struct.pack("<BII", tag, f.rows, f.cols))
            parts.append(np.ascontiguousarray(f.data, dtype="<f8").tobytes())
    return b"".join(parts)


class _Reader:
    def __init__(self, buf: bytes):
        self.buf = buf
        self.pos = 0

    def take(self, n: int, what: str) -> bytes:
        if self.pos + n > len(self.buf):
            raise FormatError(f"truncated while reading {what}: need {n} bytes, {len(self.buf) - self.pos} left", self.pos)
        out = self.buf[self.pos:self.pos + n]
        self.pos += n
        return out

    def unpack(self, fmt: str, what: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt), what))


def deserialize_zw(buf: bytes) -> ZeroWatermark:
    r = _Reader(bytes(buf))
    magic = r.take(4, "magic")
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}, expected {MAGIC!r}", 0)
    version, mtag, m, n = r.unpack("<BBII", "header")
    if version != VERSION:
        raise FormatError(f"unsupported version {version}, expected {VERSION}", 4)
    if mtag not in TAG_METHODS:
        raise FormatError(f"unknown method tag {mtag}", 5)
    method = TAG_METHODS[mtag]
    shapes = expected_shapes(method, m, n)
    factors = {}
    for tag, name, is_vec in LAYOUT[method]:
        at = r.pos
        (got,) = r.unpack("<B", f"tag of {name}")
        if got != tag:
            raise FormatError(f"expected factor tag {chr(tag)!r} for {name}, found {got}", at)
        if is_vec:
            at = r.pos
            (length,) = r.unpack("<I", f"length of {name}")
            if (length,) != shapes[name]:
                raise FormatError(f"{name} has length {length}, expected {shapes[name][0]}", at)
            raw = r.take(8 * length, name)
            factors[name] = np.frombuffer(raw, dtype="<f8").astype(np.float64)
        else:
            at = r.pos
            rows, cols = r.unpack("<II", f"dims of {name}")
            if (rows, cols) != shapes[name]:
                raise FormatError(f"{name} is {rows}x{cols}, expected {shapes[name]}", at)
            raw = r.take(32 * rows * cols, name)
            data = np.frombuffer(raw, dtype="<f8").astype(np.float64).reshape(rows, cols, 4)
            factors[name] = QuaternionMatrix(data)
    if r.pos != len(r.buf):
        raise FormatError(f"{len(r.buf) - r.pos} trailing bytes after the last factor", r.pos)
    return ZeroWatermark(method, m, n, factors)


def write_zw(zw: ZeroWatermark, path) -> None:
    Path(path).write_bytes(serialize_zw(zw))


def read_zw(path) -> ZeroWatermark:
    return deserialize_zw(Path(path).read_bytes())


# ---------------------------------------------------------------------------

def _qmat_to_json(M: QuaternionMatrix | None):
    return None if M is None else M.data.tolist()


def _qmat_from_json(v, size: int) -> QuaternionMatrix:
    if v is None:
        return QuaternionMatrix.identity(size)
    arr = np.array(v, dtype=np.float64)
    if arr.ndim != 3 or arr.shape != (size, size, 4):
        raise FormatError(f"key matrix has shape {arr.shape}, expected ({size}, {size}, 4)")
    return QuaternionMatrix(arr)


@dataclass
class KeyFile:
    method: str
    dims: tuple[int, int]
    arnold: ArnoldKey
    feature: FeatureParams = FeatureParams()
    resize: dict = field(default_factory=dict)
    rank: int | None = None
    W1: QuaternionMatrix | None = None
    W2: QuaternionMatrix | None = None
    version: int = KEY_VERSION

    def w_keys(self) -> tuple[QuaternionMatrix, QuaternionMatrix]:
        m, n = self.dims
        r = self.rank if self.rank is not None else min(m, n)
        W1 = self.W1 if self.W1 is not None else QuaternionMatrix.identity(m - r)
        W2 = self.W2 if self.W2 is not None else QuaternionMatrix.identity(n - r)
        return W1, W2

    def to_dict(self) -> dict:
        d = {
            "format": KEY_FORMAT,
            "version": self.version,
            "method": self.method,
            "dims": list(self.dims),
            "arnold": self.arnold.to_dict(),
            "feature": self.feature.to_dict(),
            "resize": self.resize,
        }
        if self.method == "DQSVD":
            d["svd"] = {"rank": self.rank, "W1": _qmat_to_json(self.W1), "W2": _qmat_to_json(self.W2)}
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "KeyFile":
        try:
            if d.get("format") != KEY_FORMAT:
                raise FormatError(f"not a key file (format={d.get('format')!r}, expected {KEY_FORMAT!r})")
            if d.get("version") != KEY_VERSION:
                raise FormatError(f"unsupported key version {d.get('version')!r}, expected {KEY_VERSION}")
            method = d["method"]
            if method not in METHOD_TAGS:
                raise FormatError(f"unknown method {method!r}")
            m, n = (int(x) for x in d["dims"])
            key = cls(
                method=method,
                dims=(m, n),
                arnold=ArnoldKey.from_dict(d["arnold"]),
                feature=FeatureParams.from_dict(d.get("feature", {})),
                resize=dict(d.get("resize") or {}),
            )
            if method == "DQSVD":
                svd = d.get("svd") or {}
                rank = svd.get("rank")
                key.rank = min(m, n) if rank is None else int(rank)
                if not 0 <= key.rank <= min(m, n):
                    raise FormatError(f"rank {key.rank} out of range")
                if svd.get("W1") is not None:
                    key.W1 = _qmat_from_json(svd["W1"], m - key.rank)
                if svd.get("W2") is not None:
                    key.W2 = _qmat_from_json(svd["W2"], n - key.rank)
            return key
        except FormatError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"malformed key file: {exc}") from exc

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def loads(cls, text: str) -> "KeyFile":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FormatError(f"key file is not valid JSON: {exc.msg}", exc.pos) from exc
        if not isinstance(d, dict):
            raise FormatError("key file must hold a JSON object")
        return cls.from_dict(d)


def write_key(key: KeyFile, path) -> None:
    Path(path).write_text(key.dumps())


def read_key(path) -> KeyFile:
    return KeyFile.loads(Path(path).read_text())
