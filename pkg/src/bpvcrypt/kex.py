"""Elliptic-curve Diffie-Hellman with optional BPV key generation."""

from __future__ import annotations

from .bpv import BpvTable
from .group import (
    Curve,
    CurveId,
    CurveMismatch,
    GroupPoint,
    InvalidPoint,
    RandomSource,
    get_curve,
    point_deserialize,
)
from .keyfile import KeyPair
from .sigs import nonce_pair


def ecdh_keygen(
    curve: CurveId | Curve,
    source: BpvTable | None = None,
    rng: RandomSource | None = None,
) -> KeyPair:
    """Key pair from a fresh scalar multiplication, or from BPV subset sums when a table is given."""
    c = get_curve(curve)
    a, A = nonce_pair(c, source, rng)
    return KeyPair(a, A)


def ecdh_derive(
    my_private: int | KeyPair,
    peer_public: GroupPoint | bytes,
    curve: CurveId | Curve | None = None,
) -> bytes:
    """Shared secret: big-endian x of a*B on the Weierstrass curve, the encoded point on Edwards.

    ``peer_public`` may be an encoded point, which is decoded and validated
    (on curve, in the prime-order subgroup) first.  No KDF is applied.
    """
    if isinstance(my_private, KeyPair):
        if curve is None:
            curve = my_private.curve
        my_private = my_private.y
    if isinstance(peer_public, (bytes, bytearray)):
        if curve is None:
            raise ValueError("curve is required to decode an encoded peer key")
        peer_public = point_deserialize(peer_public, curve)
    if not isinstance(peer_public, GroupPoint):
        raise InvalidPoint("peer public key is not a group point")
    c = peer_public.curve if curve is None else get_curve(curve)
    if peer_public.curve is not c:
        raise CurveMismatch(f"peer key is on {peer_public.curve.name}, expected {c.name}")
    if peer_public.is_identity():
        raise InvalidPoint("peer public key is the identity")
    if not 0 < my_private < c.n:
        raise ValueError("private scalar out of range")
    T = my_private * peer_public
    return c.shared_secret_bytes(T)
