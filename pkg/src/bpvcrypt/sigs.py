"""Schnorr signatures (standard or BPV nonces) and ECDSA on the baseline curve."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .bpv import BpvTable, bpv_online
from .group import (
    Curve,
    CurveId,
    CurveMismatch,
    GroupPoint,
    RandomSource,
    SystemRng,
    get_curve,
    point_serialize,
    random_scalar,
)
from .keyfile import KeyPair

SIG_SIZE = 64


def generate_keypair(curve: CurveId | Curve, rng: RandomSource | None = None) -> KeyPair:
    c = get_curve(curve)
    return KeyPair.from_private(random_scalar(c, rng), c)


def hash_to_scalar(curve: Curve, data: bytes) -> int:
    """SHA-256(data) as a big-endian integer mod n, never zero.

    A zero result is retried with a counter byte appended (1, 2, ...).
    """
    n = curve.n
    e = int.from_bytes(hashlib.sha256(data).digest(), "big") % n
    ctr = 0
    while e == 0:
        ctr += 1
        e = int.from_bytes(hashlib.sha256(data + bytes([ctr])).digest(), "big") % n
    return e


def nonce_pair(curve: Curve, source: BpvTable | None, rng: RandomSource | None) -> tuple[int, GroupPoint]:
    """(r, r*G) from the BPV table if given, else from a fresh scalar multiplication."""
    if source is None:
        r = random_scalar(curve, rng)
        return r, r * curve.generator
    if source.params.curve != curve.id:
        raise CurveMismatch(f"BPV table is for {source.curve.name}, key is on {curve.name}")
    return bpv_online(source, rng)


# --- Schnorr


@dataclass(frozen=True)
class SchnorrSignature:
    s: int
    e: int

    def to_bytes(self) -> bytes:
        return self.s.to_bytes(32, "little") + self.e.to_bytes(32, "little")

    @classmethod
    def from_bytes(cls, data: bytes) -> SchnorrSignature:
        if len(data) != SIG_SIZE:
            raise ValueError(f"signature must be {SIG_SIZE} bytes")
        return cls(int.from_bytes(data[:32], "little"), int.from_bytes(data[32:], "little"))


def schnorr_sign(
    m: bytes,
    key: KeyPair,
    source: BpvTable | None = None,
    rng: RandomSource | None = None,
) -> SchnorrSignature:
    curve = key.curve
    r, R = nonce_pair(curve, source, rng or SystemRng())
    e = hash_to_scalar(curve, m + point_serialize(R))
    s = (r - e * key.y) % curve.n
    return SchnorrSignature(s, e)


def schnorr_verify(m: bytes, sig: SchnorrSignature, Y: GroupPoint) -> bool:
    curve = Y.curve
    n = curve.n
    if not (0 <= sig.s < n and 0 < sig.e < n) or Y.is_identity():
        return False
    R = sig.e * Y + sig.s * curve.generator
    if R.is_identity():
        return False
    return hash_to_scalar(curve, m + point_serialize(R)) == sig.e


# --- ECDSA (baseline curve only)


@dataclass(frozen=True)
class EcdsaSignature:
    r: int
    s: int

    def to_bytes(self) -> bytes:
        return self.r.to_bytes(32, "big") + self.s.to_bytes(32, "big")

    @classmethod
    def from_bytes(cls, data: bytes) -> EcdsaSignature:
        if len(data) != SIG_SIZE:
            raise ValueError(f"signature must be {SIG_SIZE} bytes")
        return cls(int.from_bytes(data[:32], "big"), int.from_bytes(data[32:], "big"))


def _ecdsa_curve(curve: Curve) -> Curve:
    if curve.id != CurveId.BASELINE_WEIERSTRASS:
        raise CurveMismatch("ECDSA is only offered on the baseline curve")
    return curve


def _digest_scalar(curve: Curve, m: bytes) -> int:
    # n is 256 bits, so the whole digest is used
    return int.from_bytes(hashlib.sha256(m).digest(), "big") % curve.n


def ecdsa_sign(m: bytes, key: KeyPair, rng: RandomSource | None = None) -> EcdsaSignature:
    curve = _ecdsa_curve(key.curve)
    rng = rng or SystemRng()
    n = curve.n
    z = _digest_scalar(curve, m)
    while True:
        k = random_scalar(curve, rng)
        r = (k * curve.generator).affine()[0] % n
        if r == 0:
            continue
        s = pow(k, -1, n) * (z + r * key.y) % n
        if s:
            return EcdsaSignature(r, s)


def ecdsa_verify(m: bytes, sig: EcdsaSignature, Y: GroupPoint) -> bool:
    curve = _ecdsa_curve(Y.curve)
    n = curve.n
    if not (0 < sig.r < n and 0 < sig.s < n) or Y.is_identity():
        return False
    w = pow(sig.s, -1, n)
    z = _digest_scalar(curve, m)
    X = (z * w % n) * curve.generator + (sig.r * w % n) * Y
    if X.is_identity():
        return False
    return X.affine()[0] % n == sig.r
