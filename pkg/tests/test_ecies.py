import hashlib
import hmac
import itertools
import random
import struct

import pytest

from bpvcrypt.ecies import (
    KDF_LABEL,
    CiphertextFormatError,
    EciesCiphertext,
    SymSuite,
    ecies_decrypt,
    ecies_encrypt,
    kdf,
)
from bpvcrypt.group import ED25519, SECP256K1, InvalidPoint, count_ops, point_serialize
from bpvcrypt.rng import SeededRng
from bpvcrypt.sigs import generate_keypair
from bpvcrypt.symmetric import InvalidTag


def test_roundtrip_all_combinations(tables):
    rnd = random.Random(1)
    r_ = SeededRng(1)
    combos = list(itertools.product((SECP256K1, ED25519), (False, True), SymSuite))
    keys = {c.id: generate_keypair(c, r_) for c in (SECP256K1, ED25519)}
    for i in range(1000):
        curve, bpv, suite = combos[i % len(combos)]
        key = keys[curve.id]
        m = rnd.randbytes(rnd.randrange(4097))
        ct = ecies_encrypt(m, key.Y, tables[curve.id] if bpv else None, r_, suite)
        assert len(ct.c) == len(m)
        assert len(ct.d) == suite.tag_size
        assert ecies_decrypt(key, EciesCiphertext.from_bytes(ct.to_bytes())) == m


def _transcript(m, Y, r, suite):
    T = r * Y
    okm = hmac.new(hmac.new(KDF_LABEL, point_serialize(T), hashlib.sha256).digest(),
                   b"\x01", hashlib.sha256).digest()
    okm += hmac.new(hmac.new(KDF_LABEL, point_serialize(T), hashlib.sha256).digest(),
                    okm + b"\x02", hashlib.sha256).digest()
    k_enc, k_mac = okm[:32], okm[32:]
    from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes
    from cryptography.hazmat.primitives.poly1305 import Poly1305

    if suite is SymSuite.STANDARD:
        c = Cipher(algorithms.AES(k_enc[:16]), modes.CTR(bytes(16))).encryptor().update(m)
        d = hmac.new(k_mac, c, hashlib.sha256).digest()
    else:
        c = Cipher(algorithms.ChaCha20(k_enc, bytes(16)), None).encryptor().update(m)
        d = Poly1305.generate_tag(k_mac, c)
    return c, d


@pytest.mark.parametrize("suite", list(SymSuite), ids=lambda s: s.name.lower())
def test_matches_independent_transcript(curve, table, suite):
    pytest.importorskip("cryptography")
    key = generate_keypair(curve, SeededRng(2))
    m = b"attack at dawn, bring snacks" * 3
    ct = ecies_encrypt(m, key.Y, table, SeededRng(3), suite)

    # redo the nonce draw by hand
    rng = SeededRng(3)
    k, v = table.params.k, table.params.v
    pool = list(range(k))
    for i in range(v):
        j = i + rng.randbelow(k - i)
        pool[i], pool[j] = pool[j], pool[i]
    r = sum(table.entries[i][0] for i in pool[:v]) % curve.n
    assert ct.R == r * curve.generator
    assert (ct.c, ct.d) == _transcript(m, key.Y, r, suite)


def test_bpv_ciphertext_decrypts_like_standard(curve, table):
    key = generate_keypair(curve, SeededRng(4))
    a = ecies_encrypt(b"x" * 40, key.Y, None)
    b = ecies_encrypt(b"x" * 40, key.Y, table)
    assert ecies_decrypt(key, a) == ecies_decrypt(key, b) == b"x" * 40


@pytest.mark.parametrize("suite", list(SymSuite), ids=lambda s: s.name.lower())
def test_tampering_is_invalid(curve, suite):
    key = generate_keypair(curve, SeededRng(5))
    m = b"0123456789abcdef" * 2
    ct = ecies_encrypt(m, key.Y, None, SeededRng(6), suite)
    for i in range(len(ct.c)):
        bad = EciesCiphertext(ct.R, ct.c[:i] + bytes([ct.c[i] ^ 0x80]) + ct.c[i + 1:], ct.d, suite)
        with pytest.raises(InvalidTag):
            ecies_decrypt(key, bad)
    for i in range(len(ct.d)):
        bad = EciesCiphertext(ct.R, ct.c, ct.d[:i] + bytes([ct.d[i] ^ 1]) + ct.d[i + 1:], suite)
        with pytest.raises(InvalidTag):
            ecies_decrypt(key, bad)


def test_wrong_key_is_invalid(curve):
    k1 = generate_keypair(curve, SeededRng(7))
    k2 = generate_keypair(curve, SeededRng(8))
    ct = ecies_encrypt(b"secret", k1.Y)
    with pytest.raises(InvalidTag):
        ecies_decrypt(k2, ct)


def test_wire_format(curve):
    key = generate_keypair(curve, SeededRng(9))
    ct = ecies_encrypt(b"hello", key.Y, None, SeededRng(10), SymSuite.LIGHT)
    raw = ct.to_bytes()
    assert raw[:4] == b"DCE1"
    assert raw[4] == int(curve.id)
    assert raw[5] == 1
    assert raw[6:39] == point_serialize(ct.R)
    assert struct.unpack("<I", raw[39:43]) == (5,)
    assert raw[43:48] == ct.c
    assert raw[48:] == ct.d
    assert len(raw) == 4 + 2 + 33 + 4 + 5 + 16
    assert EciesCiphertext.from_bytes(raw) == ct


def test_malformed_wire_data(curve):
    key = generate_keypair(curve, SeededRng(11))
    raw = ecies_encrypt(b"hello", key.Y).to_bytes()
    with pytest.raises(CiphertextFormatError):
        EciesCiphertext.from_bytes(b"XCE1" + raw[4:])
    with pytest.raises(CiphertextFormatError):
        EciesCiphertext.from_bytes(raw[:-1])
    with pytest.raises(CiphertextFormatError):
        EciesCiphertext.from_bytes(raw[:5] + b"\x07" + raw[6:])
    with pytest.raises(InvalidPoint):
        EciesCiphertext.from_bytes(raw[:6] + b"\x09" + raw[7:])


def test_suite_mismatch_is_invalid(curve):
    key = generate_keypair(curve, SeededRng(12))
    ct = ecies_encrypt(b"m", key.Y, suite="light")
    with pytest.raises(InvalidTag):
        ecies_decrypt(key, ct, suite="standard")
    assert ecies_decrypt(key, ct, suite="light") == b"m"


def test_operation_counts(curve, table):
    key = generate_keypair(curve, SeededRng(13))
    with count_ops() as ops:
        ct = ecies_encrypt(b"m" * 10, key.Y, table)
    assert ops.scalar_muls == 1
    assert ops.point_adds == table.params.v - 1
    with count_ops() as ops:
        ecies_decrypt(key, ct)
    assert ops.scalar_muls == 1


def test_kdf_properties():
    assert kdf(b"T") == kdf(b"T")
    rnd = random.Random(14)
    for _ in range(1000):
        out = kdf(rnd.randbytes(33))
        assert len(out.k_enc) == len(out.k_mac) == 32
        assert out.k_enc != out.k_mac


def test_kdf_avalanche():
    rnd = random.Random(15)
    total = 0
    for _ in range(100):
        t = bytearray(rnd.randbytes(33))
        a = kdf(bytes(t))
        bit = rnd.randrange(33 * 8)
        t[bit // 8] ^= 1 << (bit % 8)
        b = kdf(bytes(t))
        assert a.k_enc != b.k_enc and a.k_mac != b.k_mac
        x = int.from_bytes(a.k_enc + a.k_mac, "big") ^ int.from_bytes(b.k_enc + b.k_mac, "big")
        total += bin(x).count("1")
    assert total / 100 > 50


def test_kdf_matches_hkdf_reference():
    pytest.importorskip("cryptography")
    from cryptography.hazmat.primitives import hashes
    from cryptography.hazmat.primitives.kdf.hkdf import HKDF

    T = bytes(range(33))
    okm = HKDF(hashes.SHA256(), 64, KDF_LABEL, b"").derive(T)
    out = kdf(T)
    assert out.k_enc + out.k_mac == okm


def test_fuzz_single_byte_modifications(curve):
    # 5,000 trials per curve, 10,000 in all
    key = generate_keypair(curve, SeededRng(16))
    m = b"fuzz target message"
    raw = ecies_encrypt(m, key.Y, None, SeededRng(17), SymSuite.LIGHT).to_bytes()
    rnd = random.Random(18)
    for _ in range(5000):
        pos = rnd.randrange(len(raw))
        bad = bytearray(raw)
        bad[pos] ^= rnd.randrange(1, 256)
        try:
            out = ecies_decrypt(key, bytes(bad))
        except (InvalidTag, ValueError):
            continue
        assert out != m, f"byte {pos} changed but the same plaintext was accepted"
