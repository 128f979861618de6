import itertools
import math
from collections import Counter

import pytest

from bpvcrypt import bpv
from bpvcrypt.bpv import (
    BpvParams,
    BpvTable,
    TableFormatError,
    bpv_offline,
    bpv_online,
    sample_indices,
    table_from_bytes,
    table_load,
    table_save,
    table_to_bytes,
    verify_table,
)
from bpvcrypt.group import ED25519, SECP256K1, CurveId, CurveMismatch, count_ops
from bpvcrypt.rng import SeededRng

from oracles import affine_or_none, double_and_add, reference


def test_params_validation():
    assert BpvParams() == BpvParams(1024, 16, CurveId.FAST_EDWARDS)
    for k, v in [(3, 3), (4, 2), (10, 11), (16, 16)]:
        with pytest.raises(ValueError):
            BpvParams(k, v)
    BpvParams(4, 3)


def test_default_table(table):
    assert len(table) == 1024
    assert table.params.v == 16
    assert verify_table(table)


def test_tiny_table_entries_match_oracle(curve):
    add, zero, G, n = reference(curve.name)
    t = bpv_offline(BpvParams(4, 3, curve.id), SeededRng(1))
    assert len(t.entries) == 4
    for r, R in t.entries:
        assert 1 <= r < n
        assert affine_or_none(R) == double_and_add(r, G, add, zero)


def test_online_invariant(table):
    G = table.curve.generator
    r_ = SeededRng(2)
    for _ in range(1000):
        r, R = bpv_online(table, r_)
        assert 0 < r < table.curve.n
        assert r * G == R


def _fixed_table(curve, scalars, v):
    G = curve.generator
    return BpvTable(BpvParams(len(scalars), v, curve.id), tuple((s, (s * G).normalized()) for s in scalars))


def test_identical_entries_force_sum(curve):
    t = _fixed_table(curve, [7] * 32, 16)
    r, R = bpv_online(t, SeededRng(0))
    assert r == 16 * 7 % curve.n
    assert R == (16 * 7) * curve.generator


def test_exhaustive_subset_oracle(curve):
    scalars = [3, 10, 31, 100, 316, 1000, 3162, 10000]
    t = _fixed_table(curve, scalars, 3)
    valid = {sum(c) % curve.n for c in itertools.combinations(scalars, 3)}
    assert len(valid) == math.comb(8, 3) == 56
    G = curve.generator
    seen = set()
    r_ = SeededRng(4)
    for _ in range(500):
        r, R = bpv_online(t, r_)
        assert r in valid
        assert R == r * G
        seen.add(r)
    # 500 draws over 56 equally likely sums should hit every one
    assert seen == valid


def test_sampler_distinct_and_sized():
    r_ = SeededRng(5)
    for k, v in [(8, 3), (64, 16), (1024, 16), (17, 16)]:
        for _ in range(200):
            idx = sample_indices(k, v, r_)
            assert len(idx) == v
            assert len(set(idx)) == v
            assert all(0 <= i < k for i in idx)


def test_online_uses_distinct_indices(monkeypatch, table):
    drawn = []
    real = bpv.sample_indices

    def spy(k, v, rng):
        out = real(k, v, rng)
        drawn.append(out)
        return out

    monkeypatch.setattr(bpv, "sample_indices", spy)
    r_ = SeededRng(6)
    for _ in range(100):
        bpv_online(table, r_)
    assert len(drawn) == 100
    assert all(len(set(s)) == 16 for s in drawn)


def test_online_cost_is_v_minus_one_additions(table):
    with count_ops() as ops:
        bpv_online(table, SeededRng(7))
    assert ops.scalar_muls == 0
    assert ops.point_adds == table.params.v - 1


def test_index_frequencies(monkeypatch):
    k, v, draws = 64, 16, 10_000
    t = bpv_offline(BpvParams(k, v, CurveId.FAST_EDWARDS), SeededRng(8))
    counts = Counter()
    real = bpv.sample_indices

    def spy(k_, v_, rng):
        out = real(k_, v_, rng)
        counts.update(out)
        return out

    monkeypatch.setattr(bpv, "sample_indices", spy)
    r_ = SeededRng(9)
    for _ in range(draws):
        bpv_online(t, r_)
    p = v / k
    mean = draws * p
    sigma = math.sqrt(draws * p * (1 - p))
    assert sum(counts.values()) == draws * v
    assert all(abs(counts[i] - mean) <= 5 * sigma for i in range(k))


def test_zero_sum_is_resampled(curve):
    # {5, 6, n - 11} sums to zero; the other three 3-subsets do not
    n = curve.n
    scalars = [5, 6, n - 11, 1]
    t = _fixed_table(curve, scalars, 3)
    r_ = SeededRng(10)
    for _ in range(200):
        r, R = bpv_online(t, r_)
        assert r != 0
        assert R == r * curve.generator


def test_verify_table_detects_corruption(curve):
    t = bpv_offline(BpvParams(8, 3, curve.id), SeededRng(11))
    assert verify_table(t)
    entries = list(t.entries)
    entries[3] = (entries[3][0], curve.generator)
    assert not verify_table(BpvTable(t.params, tuple(entries)))
    assert not verify_table(BpvTable(t.params, t.entries[:-1]))


def test_save_load_roundtrip(tmp_path, curve):
    t = bpv_offline(BpvParams(16, 4, curve.id), SeededRng(12))
    path = tmp_path / "t.bpv"
    table_save(t, path)
    loaded = table_load(path)
    assert loaded == t
    assert loaded.params == t.params
    assert (path.stat().st_mode & 0o777) == 0o600


def test_file_layout(table):
    raw = table_to_bytes(table)
    assert raw[:4] == b"BPVT"
    assert raw[4] == 1
    assert raw[5] == int(table.params.curve)
    assert int.from_bytes(raw[6:10], "little") == 1024
    assert int.from_bytes(raw[10:12], "little") == 16
    assert raw[12:16] == bytes(4)
    # 16-byte header plus k records of (32-byte scalar, 33-byte point)
    assert len(raw) == 16 + 1024 * (32 + 33)


def test_load_rejects_bad_files(tmp_path):
    t = bpv_offline(BpvParams(8, 3, CurveId.BASELINE_WEIERSTRASS), SeededRng(13))
    raw = table_to_bytes(t)

    with pytest.raises(TableFormatError, match="magic"):
        table_from_bytes(b"XPVT" + raw[4:])
    with pytest.raises(TableFormatError, match="version"):
        table_from_bytes(raw[:4] + b"\x02" + raw[5:])
    with pytest.raises(TableFormatError):
        table_from_bytes(raw + b"\x00")
    with pytest.raises(CurveMismatch):
        table_from_bytes(raw, CurveId.FAST_EDWARDS)

    # flip one byte inside a stored scalar: parses, fails verification
    flipped = bytearray(raw)
    flipped[16 + 65 * 2 + 5] ^= 0x01
    with pytest.raises(TableFormatError):
        table_from_bytes(bytes(flipped))


def test_flipped_byte_anywhere_in_entries_fails(curve):
    t = bpv_offline(BpvParams(4, 3, curve.id), SeededRng(14))
    raw = table_to_bytes(t)
    for pos in range(16, len(raw), 7):
        bad = bytearray(raw)
        bad[pos] ^= 0x40
        with pytest.raises((TableFormatError, ValueError)):
            table_from_bytes(bytes(bad))
