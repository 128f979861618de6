"""Timing harness and energy model for the public-key and symmetric comparisons.

Each row is timed as the median of ``iterations`` calls after ``warmup``
untimed calls, using ``time.perf_counter_ns``.  Energy is estimated as
E = V * I * t.  Operation counts come from one extra, separately
instrumented call so they do not disturb the timings.
"""

from __future__ import annotations

import csv
import io
import os
import statistics
import time
from dataclasses import dataclass
from typing import Callable

from . import symmetric as sym
from .bpv import BpvTable
from .ecies import SymSuite, ecies_decrypt, ecies_encrypt
from .group import SECP256K1, Curve, count_ops, get_curve
from .kex import ecdh_derive, ecdh_keygen
from .rng import SeededRng, SystemRng
from .sigs import ecdsa_sign, ecdsa_verify, generate_keypair, schnorr_sign, schnorr_verify

DEFAULT_ITERATIONS = 1000
DEFAULT_WARMUP = 100
DEFAULT_MSG_SIZE = 32

PK_ROWS = (
    "ECDH",
    "ECDSA-Sign",
    "ECDSA-Verify",
    "ECIES-Encrypt",
    "ECIES-Decrypt",
    "BPV-ECDH",
    "BPV-Schnorr-Sign",
    "BPV-Schnorr-Verify",
    "BPV-ECIES-Encrypt",
    "BPV-ECIES-Decrypt",
)
ECDH_SPLIT_ROWS = ("ECDH-Keygen", "ECDH-Derive", "BPV-ECDH-Keygen", "BPV-ECDH-Derive")
SYM_ROWS = ("AES", "AES-GCM", "HMAC", "ChaCha20", "ChaCha-Poly", "Poly1305")

# standard row -> optimized counterpart
PAIRS = (
    ("ECDH", "BPV-ECDH"),
    ("ECDSA-Sign", "BPV-Schnorr-Sign"),
    ("ECDSA-Verify", "BPV-Schnorr-Verify"),
    ("ECIES-Encrypt", "BPV-ECIES-Encrypt"),
    ("ECIES-Decrypt", "BPV-ECIES-Decrypt"),
    ("AES", "ChaCha20"),
    ("AES-GCM", "ChaCha-Poly"),
    ("HMAC", "Poly1305"),
)

ECIES_BANDWIDTH = "32+|c|+|MAC|"
_BANDWIDTH = {
    "ECDH": "32",
    "BPV-ECDH": "32",
    "ECDSA-Sign": "64",
    "ECDSA-Verify": "64",
    "BPV-Schnorr-Sign": "64",
    "BPV-Schnorr-Verify": "64",
    "ECIES-Encrypt": ECIES_BANDWIDTH,
    "ECIES-Decrypt": ECIES_BANDWIDTH,
    "BPV-ECIES-Encrypt": ECIES_BANDWIDTH,
    "BPV-ECIES-Decrypt": ECIES_BANDWIDTH,
}


class MissingTable(ValueError):
    pass


@dataclass(frozen=True)
class EnergyModel:
    volts: float = 3.3
    amps: float = 0.040

    def __post_init__(self) -> None:
        if not (self.volts > 0 and self.amps > 0):
            raise ValueError("voltage and current must be positive")


def estimate_energy(model: EnergyModel, t: float) -> float:
    """Joules consumed over ``t`` seconds."""
    if t < 0:
        raise ValueError("time must be non-negative")
    return model.volts * model.amps * t


@dataclass(frozen=True)
class BenchRecord:
    name: str
    median_time: float  # seconds
    iterations: int
    energy: float  # joules
    bandwidth: str = ""
    scalar_muls: int | None = None
    point_adds: int | None = None


def pin_to_one_cpu() -> bool:
    """Best effort; returns False where affinity cannot be set."""
    try:
        cpus = sorted(os.sched_getaffinity(0))
        os.sched_setaffinity(0, {cpus[0]})
        return True
    except (AttributeError, OSError, IndexError):
        return False


def median_time(fn: Callable[[], object], iterations: int, warmup: int = DEFAULT_WARMUP) -> float:
    if iterations < 1:
        raise ValueError("need at least one iteration")
    for _ in range(warmup):
        fn()
    clock = time.perf_counter_ns
    samples = []
    for _ in range(iterations):
        t0 = clock()
        fn()
        samples.append(clock() - t0)
    return statistics.median(samples) / 1e9


def _record(name, fn, counted, iterations, warmup, model, bandwidth=""):
    t = median_time(fn, iterations, warmup)
    muls = adds = None
    if counted is not None:
        with count_ops() as ops:
            counted()
        muls, adds = ops.scalar_muls, ops.point_adds
    return BenchRecord(name, t, iterations, estimate_energy(model, t), bandwidth, muls, adds)


def _pk_records(curve: Curve, table: BpvTable, iterations, warmup, model, msg_size, seed, split_ecdh):
    if table is None:
        raise MissingTable("the public-key suite needs a BPV table")
    if table.params.curve != curve.id:
        raise ValueError(f"table is for {table.curve.name}, bench curve is {curve.name}")
    setup = SeededRng(0 if seed is None else seed)
    base = SECP256K1
    msg = setup.randbytes(msg_size)

    def rng():
        return SeededRng(seed) if seed is not None else SystemRng()

    live = SystemRng()
    std_peer = generate_keypair(base, setup)
    std_key = generate_keypair(base, setup)
    fast_peer = generate_keypair(curve, setup)
    fast_key = generate_keypair(curve, setup)
    ecdsa_sig = ecdsa_sign(msg, std_key, setup)
    schnorr_sig = schnorr_sign(msg, fast_key, table, setup)
    std_ct = ecies_encrypt(msg, std_key.Y, None, setup, SymSuite.STANDARD)
    bpv_ct = ecies_encrypt(msg, fast_key.Y, table, setup, SymSuite.LIGHT)

    def ecdh(src, peer, r):
        kp = ecdh_keygen(peer.curve, src, r)
        return ecdh_derive(kp, peer.Y)

    rows = [
        ("ECDH", lambda: ecdh(None, std_peer, live), lambda: ecdh(None, std_peer, rng())),
        ("ECDSA-Sign", lambda: ecdsa_sign(msg, std_key, live), lambda: ecdsa_sign(msg, std_key, rng())),
        ("ECDSA-Verify", lambda: ecdsa_verify(msg, ecdsa_sig, std_key.Y), None),
        ("ECIES-Encrypt", lambda: ecies_encrypt(msg, std_key.Y, None, live, SymSuite.STANDARD),
         lambda: ecies_encrypt(msg, std_key.Y, None, rng(), SymSuite.STANDARD)),
        ("ECIES-Decrypt", lambda: ecies_decrypt(std_key, std_ct), None),
        ("BPV-ECDH", lambda: ecdh(table, fast_peer, live), lambda: ecdh(table, fast_peer, rng())),
        ("BPV-Schnorr-Sign", lambda: schnorr_sign(msg, fast_key, table, live),
         lambda: schnorr_sign(msg, fast_key, table, rng())),
        ("BPV-Schnorr-Verify", lambda: schnorr_verify(msg, schnorr_sig, fast_key.Y), None),
        ("BPV-ECIES-Encrypt", lambda: ecies_encrypt(msg, fast_key.Y, table, live, SymSuite.LIGHT),
         lambda: ecies_encrypt(msg, fast_key.Y, table, rng(), SymSuite.LIGHT)),
        ("BPV-ECIES-Decrypt", lambda: ecies_decrypt(fast_key, bpv_ct), None),
    ]
    if split_ecdh:
        rows += [
            ("ECDH-Keygen", lambda: ecdh_keygen(base, None, live), lambda: ecdh_keygen(base, None, rng())),
            ("ECDH-Derive", lambda: ecdh_derive(std_key, std_peer.Y), None),
            ("BPV-ECDH-Keygen", lambda: ecdh_keygen(curve, table, live), lambda: ecdh_keygen(curve, table, rng())),
            ("BPV-ECDH-Derive", lambda: ecdh_derive(fast_key, fast_peer.Y), None),
        ]
    out = []
    for name, fn, counted in rows:
        # verify/decrypt/derive are deterministic, so the timed closure can be counted as is
        out.append(_record(name, fn, counted or fn, iterations, warmup, model, _BANDWIDTH.get(name, "")))
    return out


def _sym_records(iterations, warmup, model, msg_size, seed):
    setup = SeededRng(0 if seed is None else seed)
    msg = setup.randbytes(msg_size)
    k16, k32 = setup.randbytes(16), setup.randbytes(32)
    iv16, n12 = setup.randbytes(16), setup.randbytes(12)
    rows = [
        ("AES", lambda: sym.aes_ctr_xor(k16, iv16, msg)),
        ("AES-GCM", lambda: sym.aes_gcm_seal(k16, n12, b"", msg)),
        ("HMAC", lambda: sym.hmac_sha256(k32, msg)),
        ("ChaCha20", lambda: sym.chacha20_xor(k32, n12, 0, msg)),
        ("ChaCha-Poly", lambda: sym.chachapoly_seal(k32, n12, b"", msg)),
        ("Poly1305", lambda: sym.poly1305_tag(k32, msg)),
    ]
    return [_record(name, fn, None, iterations, warmup, model) for name, fn in rows]


def run_suite(
    suite: str = "all",
    curve="fast",
    table: BpvTable | None = None,
    iterations: int = DEFAULT_ITERATIONS,
    model: EnergyModel | None = None,
    msg_size: int = DEFAULT_MSG_SIZE,
    seed: int | None = None,
    warmup: int = DEFAULT_WARMUP,
    split_ecdh: bool = False,
    pin: bool = True,
) -> list[BenchRecord]:
    """Time every row of the chosen suite.

    Standard public-key rows always run on secp256k1; BPV rows run on
    ``curve`` with ``table``.  Symmetric rows process ``msg_size`` bytes.
    """
    if suite not in ("pk", "sym", "all"):
        raise ValueError(f"unknown suite {suite!r}")
    model = model or EnergyModel()
    if pin:
        pin_to_one_cpu()
    records = []
    if suite in ("pk", "all"):
        records += _pk_records(get_curve(curve), table, iterations, warmup, model, msg_size, seed, split_ecdh)
    if suite in ("sym", "all"):
        records += _sym_records(iterations, warmup, model, msg_size, seed)
    return records


def nonce_speedups(
    curve,
    table: BpvTable,
    iterations: int = DEFAULT_ITERATIONS,
    warmup: int = DEFAULT_WARMUP,
    msg_size: int = DEFAULT_MSG_SIZE,
) -> dict[str, float]:
    """Standard vs BPV Schnorr signing and ECDH key generation on one curve."""
    c = get_curve(curve)
    setup = SeededRng(1)
    msg = setup.randbytes(msg_size)
    key = generate_keypair(c, setup)
    live = SystemRng()
    sign_std = median_time(lambda: schnorr_sign(msg, key, None, live), iterations, warmup)
    sign_bpv = median_time(lambda: schnorr_sign(msg, key, table, live), iterations, warmup)
    kg_std = median_time(lambda: ecdh_keygen(c, None, live), iterations, warmup)
    kg_bpv = median_time(lambda: ecdh_keygen(c, table, live), iterations, warmup)
    return {
        "schnorr_sign_standard": sign_std,
        "schnorr_sign_bpv": sign_bpv,
        "schnorr_sign_ratio": sign_std / sign_bpv,
        "keygen_standard": kg_std,
        "keygen_bpv": kg_bpv,
        "keygen_ratio": kg_std / kg_bpv,
    }


def speedups(records: list[BenchRecord]) -> dict[str, float]:
    """Standard-over-optimized time ratio for every pair present in ``records``."""
    by_name = {r.name: r for r in records}
    out = {}
    for std, opt in PAIRS:
        if std in by_name and opt in by_name and by_name[opt].median_time > 0:
            out[f"{std} / {opt}"] = by_name[std].median_time / by_name[opt].median_time
    return out


# --- output

CSV_COLUMNS = ("name", "median_time_s", "iterations", "energy_j", "bandwidth_bytes", "scalar_muls", "point_adds")


def _opt(v):
    return "" if v is None else str(v)


def emit(records: list[BenchRecord], fmt: str = "markdown") -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in records:
            w.writerow([r.name, repr(r.median_time), r.iterations, repr(r.energy), r.bandwidth,
                        _opt(r.scalar_muls), _opt(r.point_adds)])
        return buf.getvalue()
    if fmt in ("md", "markdown"):
        lines = [
            "| Protocol | Time (ms) | Iterations | Energy (mJ) | Bandwidth (Byte) | Scalar muls | Point adds |",
            "|---|---:|---:|---:|---|---:|---:|",
        ]
        for r in records:
            lines.append(
                f"| {r.name} | {r.median_time * 1e3:.4f} | {r.iterations} | {r.energy * 1e3:.5f} "
                f"| {r.bandwidth} | {_opt(r.scalar_muls)} | {_opt(r.point_adds)} |"
            )
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def parse_csv(text: str) -> list[BenchRecord]:
    rows = list(csv.DictReader(io.StringIO(text)))
    out = []
    for row in rows:
        out.append(BenchRecord(
            name=row["name"],
            median_time=float(row["median_time_s"]),
            iterations=int(row["iterations"]),
            energy=float(row["energy_j"]),
            bandwidth=row["bandwidth_bytes"],
            scalar_muls=int(row["scalar_muls"]) if row["scalar_muls"] else None,
            point_adds=int(row["point_adds"]) if row["point_adds"] else None,
        ))
    return out


__all__ = [
    "BenchRecord",
    "EnergyModel",
    "MissingTable",
    "emit",
    "estimate_energy",
    "median_time",
    "nonce_speedups",
    "parse_csv",
    "run_suite",
    "speedups",
]
