"""ECIES hybrid encryption with standard or BPV ephemeral keys.

Wire format::

    b"DCE1" | curve_id u8 | suite u8 | R (compressed point)
            | len(c) u32 LE | c | d (tag, length fixed by suite)

The symmetric layer runs with an all-zero nonce/IV.  That is safe only
because every message derives fresh keys from a fresh ephemeral point; do
not reuse the keys from :func:`kdf` for anything else.  The MAC covers ``c``
alone; ``R`` is bound through the key derivation.
"""

from __future__ import annotations

import enum
import hmac
import struct
from dataclasses import dataclass

from .bpv import BpvTable
from .group import (
    CurveId,
    GroupPoint,
    InvalidPoint,
    RandomSource,
    get_curve,
    point_deserialize,
    point_serialize,
)
from .keyfile import KeyPair
from .sigs import nonce_pair
from .symmetric import InvalidTag, aes_ctr_xor, chacha20_xor, hkdf_sha256, hmac_sha256, poly1305_tag

MAGIC = b"DCE1"
KDF_LABEL = b"dronecrypt-ecies-v1"


class SymSuite(enum.IntEnum):
    STANDARD = 0  # AES-128-CTR + HMAC-SHA256
    LIGHT = 1  # ChaCha20 + Poly1305

    @property
    def tag_size(self) -> int:
        return 32 if self is SymSuite.STANDARD else 16

    @classmethod
    def parse(cls, name: str | int | SymSuite) -> SymSuite:
        if isinstance(name, str):
            try:
                return cls[name.upper()]
            except KeyError:
                raise ValueError(f"unknown suite {name!r}") from None
        return cls(name)


class CiphertextFormatError(ValueError):
    pass


@dataclass(frozen=True)
class KdfOutput:
    k_enc: bytes
    k_mac: bytes


@dataclass(frozen=True)
class EciesCiphertext:
    R: GroupPoint
    c: bytes
    d: bytes
    suite: SymSuite = SymSuite.STANDARD

    def to_bytes(self) -> bytes:
        return (
            MAGIC
            + bytes([int(self.R.curve.id), int(self.suite)])
            + point_serialize(self.R)
            + struct.pack("<I", len(self.c))
            + self.c
            + self.d
        )

    @classmethod
    def from_bytes(cls, data: bytes) -> EciesCiphertext:
        """Parse and validate; a bad ``R`` raises :class:`InvalidPoint`."""
        if len(data) < 6 or data[:4] != MAGIC:
            raise CiphertextFormatError("bad magic")
        try:
            curve = get_curve(data[4])
            suite = SymSuite(data[5])
        except ValueError as exc:
            raise CiphertextFormatError(str(exc)) from None
        off = 6 + curve.point_size
        if len(data) < off + 4:
            raise CiphertextFormatError("truncated header")
        R = point_deserialize(data[6:off], curve)
        (clen,) = struct.unpack_from("<I", data, off)
        off += 4
        if len(data) != off + clen + suite.tag_size:
            raise CiphertextFormatError("length fields do not match the data")
        return cls(R, data[off:off + clen], data[off + clen:], suite)


def kdf(shared: bytes) -> KdfOutput:
    """HKDF-SHA256 with the protocol label as salt; 64 bytes split into k_enc | k_mac."""
    okm = hkdf_sha256(shared, salt=KDF_LABEL, info=b"", length=64)
    return KdfOutput(okm[:32], okm[32:])


def _encrypt(suite: SymSuite, keys: KdfOutput, m: bytes) -> tuple[bytes, bytes]:
    if suite is SymSuite.STANDARD:
        c = aes_ctr_xor(keys.k_enc[:16], bytes(16), m)
    else:
        c = chacha20_xor(keys.k_enc, bytes(12), 0, m)
    return c, _mac(suite, keys, c)


def _mac(suite: SymSuite, keys: KdfOutput, c: bytes) -> bytes:
    if suite is SymSuite.STANDARD:
        return hmac_sha256(keys.k_mac, c)
    return poly1305_tag(keys.k_mac, c)


def _decrypt(suite: SymSuite, keys: KdfOutput, c: bytes) -> bytes:
    if suite is SymSuite.STANDARD:
        return aes_ctr_xor(keys.k_enc[:16], bytes(16), c)
    return chacha20_xor(keys.k_enc, bytes(12), 0, c)


def ecies_encrypt(
    m: bytes,
    Y: GroupPoint,
    source: BpvTable | None = None,
    rng: RandomSource | None = None,
    suite: SymSuite | str = SymSuite.STANDARD,
) -> EciesCiphertext:
    suite = SymSuite.parse(suite)
    if not isinstance(Y, GroupPoint) or Y.is_identity():
        raise InvalidPoint("recipient key is not a valid group point")
    curve = Y.curve
    r, R = nonce_pair(curve, source, rng)
    T = r * Y
    keys = kdf(point_serialize(T))
    c, d = _encrypt(suite, keys, bytes(m))
    return EciesCiphertext(R, c, d, suite)


def ecies_decrypt(key: KeyPair, ct: EciesCiphertext | bytes, suite: SymSuite | str | None = None) -> bytes:
    """Recover the plaintext or raise :class:`InvalidTag`.

    The tag is checked before any decryption happens.  ``suite``, when
    given, must match the ciphertext's own suite.
    """
    if isinstance(ct, (bytes, bytearray)):
        ct = EciesCiphertext.from_bytes(bytes(ct))
    if suite is not None and SymSuite.parse(suite) != ct.suite:
        raise InvalidTag
    if ct.R.curve is not key.curve:
        raise InvalidTag
    T = key.y * ct.R
    keys = kdf(point_serialize(T))
    if not hmac.compare_digest(_mac(ct.suite, keys, ct.c), ct.d):
        raise InvalidTag
    return _decrypt(ct.suite, keys, ct.c)


__all__ = [
    "CiphertextFormatError",
    "CurveId",
    "EciesCiphertext",
    "InvalidTag",
    "KdfOutput",
    "SymSuite",
    "ecies_decrypt",
    "ecies_encrypt",
    "kdf",
]
