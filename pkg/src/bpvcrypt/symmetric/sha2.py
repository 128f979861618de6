"""SHA-256 and HMAC-SHA256 (FIPS 180-4, RFC 2104)."""

import struct

_K = (
    0x428A2F98, 0x71374491, 0xB5C0FBCF, 0xE9B5DBA5, 0x3956C25B, 0x59F111F1, 0x923F82A4, 0xAB1C5ED5,
    0xD807AA98, 0x12835B01, 0x243185BE, 0x550C7DC3, 0x72BE5D74, 0x80DEB1FE, 0x9BDC06A7, 0xC19BF174,
    0xE49B69C1, 0xEFBE4786, 0x0FC19DC6, 0x240CA1CC, 0x2DE92C6F, 0x4A7484AA, 0x5CB0A9DC, 0x76F988DA,
    0x983E5152, 0xA831C66D, 0xB00327C8, 0xBF597FC7, 0xC6E00BF3, 0xD5A79147, 0x06CA6351, 0x14292967,
    0x27B70A85, 0x2E1B2138, 0x4D2C6DFC, 0x53380D13, 0x650A7354, 0x766A0ABB, 0x81C2C92E, 0x92722C85,
    0xA2BFE8A1, 0xA81A664B, 0xC24B8B70, 0xC76C51A3, 0xD192E819, 0xD6990624, 0xF40E3585, 0x106AA070,
    0x19A4C116, 0x1E376C08, 0x2748774C, 0x34B0BCB5, 0x391C0CB3, 0x4ED8AA4A, 0x5B9CCA4F, 0x682E6FF3,
    0x748F82EE, 0x78A5636F, 0x84C87814, 0x8CC70208, 0x90BEFFFA, 0xA4506CEB, 0xBEF9A3F7, 0xC67178F2,
)
_H0 = (0x6A09E667, 0xBB67AE85, 0x3C6EF372, 0xA54FF53A, 0x510E527F, 0x9B05688C, 0x1F83D9AB, 0x5BE0CD19)
_M = 0xFFFFFFFF

BLOCK_SIZE = 64
DIGEST_SIZE = 32


def _compress(state, block, K=_K, M=_M):
    w = list(struct.unpack(">16L", block))
    for i in range(16, 64):
        x = w[i - 15]
        y = w[i - 2]
        w.append((w[i - 16] + w[i - 7]
                  + (((x >> 7 | x << 25) ^ (x >> 18 | x << 14) ^ (x >> 3)) & M)
                  + (((y >> 17 | y << 15) ^ (y >> 19 | y << 13) ^ (y >> 10)) & M)) & M)
    a, b, c, d, e, f, g, h = state
    for i in range(64):
        # high bits from the unmasked rotations vanish in the final mask
        t1 = (h + ((e >> 6 | e << 26) ^ (e >> 11 | e << 21) ^ (e >> 25 | e << 7)) + (g ^ (e & (f ^ g)))
              + K[i] + w[i]) & M
        t2 = ((a >> 2 | a << 30) ^ (a >> 13 | a << 19) ^ (a >> 22 | a << 10)) + ((a & b) | (c & (a | b)))
        h, g, f, e, d, c, b, a = g, f, e, (d + t1) & M, c, b, a, (t1 + t2) & M
    return ((state[0] + a) & M, (state[1] + b) & M, (state[2] + c) & M, (state[3] + d) & M,
            (state[4] + e) & M, (state[5] + f) & M, (state[6] + g) & M, (state[7] + h) & M)


def sha256(data: bytes) -> bytes:
    data = bytes(data)
    padded = data + b"\x80" + b"\x00" * ((55 - len(data)) % 64) + struct.pack(">Q", 8 * len(data))
    state = _H0
    for off in range(0, len(padded), 64):
        state = _compress(state, padded[off:off + 64])
    return struct.pack(">8L", *state)


def hmac_sha256(key: bytes, data: bytes) -> bytes:
    key = bytes(key)
    if len(key) > BLOCK_SIZE:
        key = sha256(key)
    key = key.ljust(BLOCK_SIZE, b"\x00")
    inner = sha256(bytes(b ^ 0x36 for b in key) + bytes(data))
    return sha256(bytes(b ^ 0x5C for b in key) + inner)


def hkdf_sha256(ikm: bytes, salt: bytes, info: bytes, length: int) -> bytes:
    """RFC 5869 extract-then-expand."""
    if length > 255 * DIGEST_SIZE:
        raise ValueError("HKDF output too long")
    prk = hmac_sha256(salt or b"\x00" * DIGEST_SIZE, ikm)
    out, block = b"", b""
    counter = 1
    while len(out) < length:
        block = hmac_sha256(prk, block + info + bytes([counter]))
        out += block
        counter += 1
    return out[:length]
