"""Symmetric primitives, written from their public specifications.

Lightweight suite: ChaCha20, Poly1305, ChaCha20-Poly1305.
Standard suite: SHA-256, HMAC-SHA256, AES-128 (block, CTR, GCM).
"""

from .aes import aes128_block, aes_ctr_xor, aes_gcm_open, aes_gcm_seal
from .chacha import chacha20_block, chacha20_xor, chachapoly_open, chachapoly_seal, poly1305_tag
from .errors import InvalidTag
from .sha2 import hkdf_sha256, hmac_sha256, sha256

__all__ = [
    "InvalidTag",
    "aes128_block",
    "aes_ctr_xor",
    "aes_gcm_open",
    "aes_gcm_seal",
    "chacha20_block",
    "chacha20_xor",
    "chachapoly_open",
    "chachapoly_seal",
    "hkdf_sha256",
    "hmac_sha256",
    "poly1305_tag",
    "sha256",
]
