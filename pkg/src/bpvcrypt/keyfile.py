"""On-disk key format and file helpers.

Layout: ``b"DCKY" | version u8 | curve_id u8 | kind u8 | payload`` where
kind 0 carries a little-endian scalar and kind 1 a compressed point.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

from .group import (
    Curve,
    CurveId,
    GroupPoint,
    InvalidPoint,
    get_curve,
    point_deserialize,
    point_serialize,
    scalar_from_bytes,
    scalar_to_bytes,
)

MAGIC = b"DCKY"
VERSION = 1
KIND_PRIVATE = 0
KIND_PUBLIC = 1


class KeyFormatError(ValueError):
    pass


@dataclass(frozen=True)
class KeyPair:
    y: int
    Y: GroupPoint

    @property
    def curve(self) -> Curve:
        return self.Y.curve

    @classmethod
    def from_private(cls, y: int, curve: CurveId | Curve) -> KeyPair:
        c = get_curve(curve)
        if not 0 < y < c.n:
            raise ValueError("private scalar must be in [1, n-1]")
        return cls(y, y * c.generator)


def encode_private(key: KeyPair) -> bytes:
    c = key.curve
    return MAGIC + bytes([VERSION, int(c.id), KIND_PRIVATE]) + scalar_to_bytes(c, key.y)


def encode_public(point: GroupPoint) -> bytes:
    return MAGIC + bytes([VERSION, int(point.curve.id), KIND_PUBLIC]) + point_serialize(point)


def decode_key(data: bytes) -> KeyPair | GroupPoint:
    """Return a :class:`KeyPair` for private key files, a point for public ones."""
    if len(data) < 7 or data[:4] != MAGIC:
        raise KeyFormatError("not a key file")
    version, curve_id, kind = data[4], data[5], data[6]
    if version != VERSION:
        raise KeyFormatError(f"unsupported key file version {version}")
    try:
        curve = get_curve(curve_id)
    except ValueError as exc:
        raise KeyFormatError(str(exc)) from None
    payload = data[7:]
    if kind == KIND_PRIVATE:
        if len(payload) != curve.scalar_size:
            raise KeyFormatError("private key payload has the wrong length")
        try:
            y = scalar_from_bytes(curve, payload)
            return KeyPair.from_private(y, curve)
        except ValueError as exc:
            raise KeyFormatError(str(exc)) from None
    if kind == KIND_PUBLIC:
        if len(payload) != curve.point_size:
            raise KeyFormatError("public key payload has the wrong length")
        try:
            return point_deserialize(payload, curve)
        except InvalidPoint as exc:
            raise KeyFormatError(str(exc)) from None
    raise KeyFormatError(f"unknown key kind {kind}")


def write_secret(path: str | Path, data: bytes) -> None:
    """Write ``data`` to a file created with mode 0600 (POSIX; best effort elsewhere)."""
    path = Path(path)
    fd = os.open(path, os.O_WRONLY | os.O_CREAT | os.O_TRUNC, 0o600)
    with os.fdopen(fd, "wb") as fh:
        fh.write(data)
    try:
        os.chmod(path, 0o600)
    except OSError:
        pass
