"""ChaCha20, Poly1305 and the ChaCha20-Poly1305 AEAD (RFC 8439)."""

import hmac
import struct

from .errors import InvalidTag

_M = 0xFFFFFFFF
_SIGMA = (0x61707865, 0x3320646E, 0x79622D32, 0x6B206574)


def _qr(s, a, b, c, d):
    s[a] = (s[a] + s[b]) & _M
    x = s[d] ^ s[a]
    s[d] = (x << 16 | x >> 16) & _M
    s[c] = (s[c] + s[d]) & _M
    x = s[b] ^ s[c]
    s[b] = (x << 12 | x >> 20) & _M
    s[a] = (s[a] + s[b]) & _M
    x = s[d] ^ s[a]
    s[d] = (x << 8 | x >> 24) & _M
    s[c] = (s[c] + s[d]) & _M
    x = s[b] ^ s[c]
    s[b] = (x << 7 | x >> 25) & _M


def _check(key: bytes, nonce: bytes) -> None:
    if len(key) != 32:
        raise ValueError("ChaCha20 key must be 32 bytes")
    if len(nonce) != 12:
        raise ValueError("ChaCha20 nonce must be 12 bytes")


def chacha20_block(key: bytes, counter: int, nonce: bytes) -> bytes:
    _check(key, nonce)
    init = list(_SIGMA) + list(struct.unpack("<8L", key)) + [counter & _M] + list(struct.unpack("<3L", nonce))
    s = init[:]
    for _ in range(10):
        _qr(s, 0, 4, 8, 12)
        _qr(s, 1, 5, 9, 13)
        _qr(s, 2, 6, 10, 14)
        _qr(s, 3, 7, 11, 15)
        _qr(s, 0, 5, 10, 15)
        _qr(s, 1, 6, 11, 12)
        _qr(s, 2, 7, 8, 13)
        _qr(s, 3, 4, 9, 14)
    return struct.pack("<16L", *((x + y) & _M for x, y in zip(s, init)))


def chacha20_xor(key: bytes, nonce: bytes, counter: int, data: bytes) -> bytes:
    """XOR ``data`` with the keystream starting at block ``counter``."""
    _check(key, nonce)
    if not 0 <= counter <= _M:
        raise ValueError("counter must fit in 32 bits")
    nblocks = (len(data) + 63) // 64
    if counter + nblocks - 1 > _M and nblocks:
        raise ValueError("keystream counter would wrap")
    stream = b"".join(chacha20_block(key, counter + i, nonce) for i in range(nblocks))
    n = len(data)
    if not n:
        return b""
    return (int.from_bytes(data, "little") ^ int.from_bytes(stream[:n], "little")).to_bytes(n, "little")


_P1305 = (1 << 130) - 5


def poly1305_tag(key: bytes, msg: bytes) -> bytes:
    """One-time authenticator; never reuse ``key`` for two messages."""
    if len(key) != 32:
        raise ValueError("Poly1305 key must be 32 bytes")
    r = int.from_bytes(key[:16], "little") & 0x0FFFFFFC0FFFFFFC0FFFFFFC0FFFFFFF
    s = int.from_bytes(key[16:], "little")
    acc = 0
    for off in range(0, len(msg), 16):
        chunk = msg[off:off + 16]
        acc = (acc + int.from_bytes(chunk + b"\x01", "little")) * r % _P1305
    return ((acc + s) & ((1 << 128) - 1)).to_bytes(16, "little")


def _pad16(n: int) -> bytes:
    return b"\x00" * (-n % 16)


def _aead_tag(key: bytes, nonce: bytes, aad: bytes, ct: bytes) -> bytes:
    otk = chacha20_block(key, 0, nonce)[:32]
    mac_data = aad + _pad16(len(aad)) + ct + _pad16(len(ct)) + struct.pack("<QQ", len(aad), len(ct))
    return poly1305_tag(otk, mac_data)


def chachapoly_seal(key: bytes, nonce: bytes, aad: bytes, plaintext: bytes) -> tuple[bytes, bytes]:
    """Return ``(ciphertext, tag)``."""
    ct = chacha20_xor(key, nonce, 1, plaintext)
    return ct, _aead_tag(key, nonce, aad, ct)


def chachapoly_open(key: bytes, nonce: bytes, aad: bytes, ciphertext: bytes, tag: bytes) -> bytes:
    """Return the plaintext, or raise :class:`InvalidTag` before decrypting anything."""
    if not hmac.compare_digest(_aead_tag(key, nonce, aad, ciphertext), tag):
        raise InvalidTag
    return chacha20_xor(key, nonce, 1, ciphertext)
