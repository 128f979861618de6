"""AES-128 encryption (FIPS 197) with CTR (SP 800-38A) and GCM (SP 800-38D).

Only the forward cipher is implemented; both modes need nothing else.
The round function uses the usual four 32-bit T-tables, built at import.
"""

import hmac
import struct

from .errors import InvalidTag


def _xtime(a: int) -> int:
    a <<= 1
    return a ^ 0x11B if a & 0x100 else a


def _gmul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        a = _xtime(a)
        b >>= 1
    return r


def _build_sbox() -> list[int]:
    inv = [0] * 256
    for a in range(1, 256):
        for b in range(1, 256):
            if _gmul(a, b) == 1:
                inv[a] = b
                break
    sbox = []
    for a in range(256):
        x = inv[a]
        y = x
        for _ in range(4):
            x = ((x << 1) | (x >> 7)) & 0xFF
            y ^= x
        sbox.append(y ^ 0x63)
    return sbox


SBOX = _build_sbox()
_T0 = [(_gmul(s, 2) << 24) | (s << 16) | (s << 8) | _gmul(s, 3) for s in SBOX]
_T1 = [((t >> 8) | (t << 24)) & 0xFFFFFFFF for t in _T0]
_T2 = [((t >> 16) | (t << 16)) & 0xFFFFFFFF for t in _T0]
_T3 = [((t >> 24) | (t << 8)) & 0xFFFFFFFF for t in _T0]
_RCON = (0x01, 0x02, 0x04, 0x08, 0x10, 0x20, 0x40, 0x80, 0x1B, 0x36)


def expand_key(key: bytes) -> list[int]:
    if len(key) != 16:
        raise ValueError("AES-128 key must be 16 bytes")
    w = list(struct.unpack(">4L", key))
    s = SBOX
    for i in range(4, 44):
        t = w[i - 1]
        if i % 4 == 0:
            t = ((s[(t >> 16) & 0xFF] << 24) | (s[(t >> 8) & 0xFF] << 16)
                 | (s[t & 0xFF] << 8) | s[t >> 24]) ^ (_RCON[i // 4 - 1] << 24)
        w.append(w[i - 4] ^ t)
    return w


def _encrypt_words(rk: list[int], block: bytes) -> bytes:
    s0, s1, s2, s3 = struct.unpack(">4L", block)
    s0 ^= rk[0]
    s1 ^= rk[1]
    s2 ^= rk[2]
    s3 ^= rk[3]
    T0, T1, T2, T3 = _T0, _T1, _T2, _T3
    for r in range(1, 10):
        k = 4 * r
        t0 = T0[s0 >> 24] ^ T1[(s1 >> 16) & 0xFF] ^ T2[(s2 >> 8) & 0xFF] ^ T3[s3 & 0xFF] ^ rk[k]
        t1 = T0[s1 >> 24] ^ T1[(s2 >> 16) & 0xFF] ^ T2[(s3 >> 8) & 0xFF] ^ T3[s0 & 0xFF] ^ rk[k + 1]
        t2 = T0[s2 >> 24] ^ T1[(s3 >> 16) & 0xFF] ^ T2[(s0 >> 8) & 0xFF] ^ T3[s1 & 0xFF] ^ rk[k + 2]
        t3 = T0[s3 >> 24] ^ T1[(s0 >> 16) & 0xFF] ^ T2[(s1 >> 8) & 0xFF] ^ T3[s2 & 0xFF] ^ rk[k + 3]
        s0, s1, s2, s3 = t0, t1, t2, t3
    S = SBOX
    out = []
    for i, (a, b, c, d) in enumerate(((s0, s1, s2, s3), (s1, s2, s3, s0), (s2, s3, s0, s1), (s3, s0, s1, s2))):
        out.append(((S[a >> 24] << 24) | (S[(b >> 16) & 0xFF] << 16)
                    | (S[(c >> 8) & 0xFF] << 8) | S[d & 0xFF]) ^ rk[40 + i])
    return struct.pack(">4L", *out)


def aes128_block(key: bytes, block: bytes) -> bytes:
    if len(block) != 16:
        raise ValueError("AES block must be 16 bytes")
    return _encrypt_words(expand_key(key), block)


def _ctr_stream(rk: list[int], counter: int, nblocks: int, width: int = 128) -> bytes:
    mask = (1 << width) - 1
    high = counter & ~mask
    return b"".join(
        _encrypt_words(rk, (high | ((counter + i) & mask)).to_bytes(16, "big")) for i in range(nblocks)
    )


def _xor(data: bytes, stream: bytes) -> bytes:
    n = len(data)
    if not n:
        return b""
    return (int.from_bytes(data, "big") ^ int.from_bytes(stream[:n], "big")).to_bytes(n, "big")


def aes_ctr_xor(key: bytes, iv: bytes, data: bytes) -> bytes:
    """CTR mode with a 128-bit big-endian counter block starting at ``iv``."""
    if len(iv) != 16:
        raise ValueError("CTR IV must be 16 bytes")
    rk = expand_key(key)
    return _xor(data, _ctr_stream(rk, int.from_bytes(iv, "big"), (len(data) + 15) // 16))


# --- GCM

_R = 0xE1 << 120


def gf128_mul(x: int, y: int) -> int:
    """Multiply in GF(2^128) with GCM's reflected bit order."""
    z = 0
    v = y
    for i in range(127, -1, -1):
        if (x >> i) & 1:
            z ^= v
        v = (v >> 1) ^ _R if v & 1 else v >> 1
    return z


def ghash(h: int, aad: bytes, ct: bytes) -> int:
    y = 0
    for part in (aad, ct):
        for off in range(0, len(part), 16):
            y = gf128_mul(y ^ int.from_bytes(part[off:off + 16].ljust(16, b"\x00"), "big"), h)
    y = gf128_mul(y ^ ((8 * len(aad)) << 64 | (8 * len(ct))), h)
    return y


def _gcm(key: bytes, iv: bytes, aad: bytes, data: bytes, encrypting: bool) -> tuple[bytes, bytes]:
    if len(iv) != 12:
        raise ValueError("GCM IV must be 12 bytes")
    rk = expand_key(key)
    h = int.from_bytes(_encrypt_words(rk, b"\x00" * 16), "big")
    j0 = int.from_bytes(iv + b"\x00\x00\x00\x01", "big")
    if encrypting:
        ct = _xor(data, _ctr_stream(rk, j0 + 1, (len(data) + 15) // 16, width=32))
    else:
        ct = data
    s = ghash(h, aad, ct)
    tag = (s ^ int.from_bytes(_encrypt_words(rk, j0.to_bytes(16, "big")), "big")).to_bytes(16, "big")
    return ct, tag


def aes_gcm_seal(key: bytes, iv: bytes, aad: bytes, plaintext: bytes) -> tuple[bytes, bytes]:
    """Return ``(ciphertext, tag)`` with a full 16-byte tag."""
    return _gcm(key, iv, aad, plaintext, True)


def aes_gcm_open(key: bytes, iv: bytes, aad: bytes, ciphertext: bytes, tag: bytes) -> bytes:
    _, expected = _gcm(key, iv, aad, ciphertext, False)
    if len(tag) != 16 or not hmac.compare_digest(expected, tag):
        raise InvalidTag
    rk = expand_key(key)
    j0 = int.from_bytes(iv + b"\x00\x00\x00\x01", "big")
    return _xor(ciphertext, _ctr_stream(rk, j0 + 1, (len(ciphertext) + 15) // 16, width=32))
