"""Command-line front end.

Exit codes: 0 success, 1 verification or MAC failure (prints INVALID),
2 usage or I/O errors.  Secrets are only ever read from files.
"""

from __future__ import annotations

import argparse
import binascii
import os
import sys
from pathlib import Path

from . import bench
from .bpv import DEFAULT_K, DEFAULT_V, BpvParams, bpv_offline, table_load, table_save, table_to_bytes
from .ecies import EciesCiphertext, SymSuite, ecies_decrypt, ecies_encrypt
from .group import CurveId, GroupPoint, get_curve
from .kex import ecdh_derive, ecdh_keygen
from .keyfile import KeyPair, decode_key, encode_private, encode_public, write_secret
from .rng import SeededRng, SystemRng
from .sigs import (
    EcdsaSignature,
    SchnorrSignature,
    ecdsa_sign,
    ecdsa_verify,
    generate_keypair,
    schnorr_sign,
    schnorr_verify,
)
from .symmetric import InvalidTag

TABLE_ENV = "DRONECRYPT_TABLE"
_HEX_CHARS = set(b"0123456789abcdefABCDEF \t\r\n")


class UsageError(Exception):
    pass


class Invalid(Exception):
    pass


def read_blob(path: str | Path) -> bytes:
    """Read a binary file, transparently accepting the ``--hex`` text form."""
    data = Path(path).read_bytes()
    if data and set(data) <= _HEX_CHARS:
        try:
            return binascii.unhexlify(b"".join(data.split()))
        except binascii.Error:
            pass
    return data


def write_blob(path: str | Path, data: bytes, as_hex: bool = False, secret: bool = False) -> None:
    if as_hex:
        data = data.hex().encode() + b"\n"
    if secret:
        write_secret(path, data)
    else:
        Path(path).write_bytes(data)


def _rng(args):
    return SeededRng(args.seed) if getattr(args, "seed", None) is not None else SystemRng()


def _load_private(path) -> KeyPair:
    key = decode_key(read_blob(path))
    if not isinstance(key, KeyPair):
        raise UsageError(f"{path} is not a private key file")
    return key


def _load_public(path) -> GroupPoint:
    key = decode_key(read_blob(path))
    if isinstance(key, KeyPair):
        return key.Y
    return key


def _table_path(args) -> str | None:
    if getattr(args, "no_table", False):
        return None
    return args.table or os.environ.get(TABLE_ENV) or None


# --- subcommands


def cmd_keygen(args) -> int:
    curve = get_curve(args.curve)
    key = generate_keypair(curve, _rng(args))
    write_blob(args.output, encode_private(key), args.hex, secret=True)
    if args.pub:
        write_blob(args.pub, encode_public(key.Y), args.hex)
    print(f"{curve.name} key written to {args.output}")
    return 0


def cmd_table_gen(args) -> int:
    try:
        params = BpvParams(args.k, args.v, get_curve(args.curve).id)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    table = bpv_offline(params, _rng(args))
    if args.hex:
        write_blob(args.output, table_to_bytes(table), True, secret=True)
    else:
        table_save(table, args.output)
    print(f"table k={params.k} v={params.v} on {table.curve.name} written to {args.output}")
    return 0


def cmd_table_verify(args) -> int:
    path = args.path or _table_path(args)
    if not path:
        raise UsageError("no table given")
    from .bpv import TableFormatError, table_from_bytes

    try:
        table = table_from_bytes(read_blob(path))
    except TableFormatError as exc:
        print(f"INVALID: {exc}", file=sys.stderr)
        raise Invalid from None
    p = table.params
    print(f"OK k={p.k} v={p.v} curve={table.curve.name}")
    return 0


def _load_table(args, curve_id: CurveId):
    path = _table_path(args)
    if not path:
        return None
    from .bpv import table_from_bytes

    return table_from_bytes(read_blob(path), curve_id)


def cmd_sign(args) -> int:
    key = _load_private(args.key)
    msg = Path(args.message).read_bytes()
    rng = _rng(args)
    if args.scheme == "ecdsa":
        sig = ecdsa_sign(msg, key, rng).to_bytes()
    else:
        table = _load_table(args, key.curve.id)
        sig = schnorr_sign(msg, key, table, rng).to_bytes()
    write_blob(args.output, sig, args.hex)
    return 0


def cmd_verify(args) -> int:
    Y = _load_public(args.pub)
    msg = Path(args.message).read_bytes()
    raw = read_blob(args.signature)
    try:
        if args.scheme == "ecdsa":
            ok = ecdsa_verify(msg, EcdsaSignature.from_bytes(raw), Y)
        else:
            ok = schnorr_verify(msg, SchnorrSignature.from_bytes(raw), Y)
    except ValueError:
        ok = False
    if not ok:
        raise Invalid
    print("VALID")
    return 0


def cmd_encrypt(args) -> int:
    Y = _load_public(args.pub)
    table = _load_table(args, Y.curve.id)
    data = Path(args.input).read_bytes()
    ct = ecies_encrypt(data, Y, table, _rng(args), SymSuite.parse(args.suite))
    write_blob(args.output, ct.to_bytes(), args.hex)
    return 0


def cmd_decrypt(args) -> int:
    key = _load_private(args.key)
    raw = read_blob(args.input)
    try:
        # a ciphertext that does not even parse is rejected like a bad MAC
        m = ecies_decrypt(key, EciesCiphertext.from_bytes(raw))
    except (InvalidTag, ValueError):
        raise Invalid from None
    write_blob(args.output, m, args.hex)
    return 0


def cmd_kx_demo(args) -> int:
    curve = get_curve(args.curve)
    table = None
    if "bpv" in (args.mode_a, args.mode_b):
        table = _load_table(args, curve.id)
        if table is None:
            raise UsageError(f"bpv mode needs --table or {TABLE_ENV}")
    rng = _rng(args)
    a = ecdh_keygen(curve, table if args.mode_a == "bpv" else None, rng)
    b = ecdh_keygen(curve, table if args.mode_b == "bpv" else None, rng)
    sa = ecdh_derive(a, b.Y)
    sb = ecdh_derive(b, a.Y)
    print(f"party A ({args.mode_a}): {sa.hex()}")
    print(f"party B ({args.mode_b}): {sb.hex()}")
    if sa != sb:
        print("MISMATCH")
        return 1
    print("MATCH")
    return 0


def cmd_bench(args) -> int:
    table = None
    curve = get_curve(args.curve)
    if args.suite in ("pk", "all"):
        table = _load_table(args, curve.id)
        if table is None:
            raise UsageError(f"the pk suite needs --table or {TABLE_ENV}")
    model = bench.EnergyModel(args.volts, args.amps)
    records = bench.run_suite(
        args.suite, curve, table, args.iters, model, args.msg_size, args.seed, args.warmup, args.split_ecdh
    )
    fmt = "csv" if args.format == "csv" else "markdown"
    out = bench.emit(records, fmt)
    if fmt == "markdown":
        ratios = bench.speedups(records)
        if ratios:
            out += "\n| Pair | Speedup |\n|---|---:|\n"
            out += "".join(f"| {k} | {v:.2f}x |\n" for k, v in ratios.items())
    if args.output:
        Path(args.output).write_text(out)
    else:
        sys.stdout.write(out)
    return 0


# --- parser


def _add_seed(p):
    # reproducible output for golden-file tests; not for real keys
    p.add_argument("--seed", type=int, default=None, help=argparse.SUPPRESS)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bpvcrypt", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    curves = ("baseline", "fast")

    p = sub.add_parser("keygen", help="generate a key pair")
    p.add_argument("--curve", choices=curves, default="fast")
    p.add_argument("-o", "--output", required=True, help="private key file")
    p.add_argument("--pub", help="public key file")
    p.add_argument("--hex", action="store_true")
    _add_seed(p)
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("table-gen", help="precompute a BPV table")
    p.add_argument("--k", type=int, default=DEFAULT_K)
    p.add_argument("--v", type=int, default=DEFAULT_V)
    p.add_argument("--curve", choices=curves, default="fast")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--hex", action="store_true")
    _add_seed(p)
    p.set_defaults(func=cmd_table_gen)

    p = sub.add_parser("table-verify", help="check every entry of a BPV table")
    p.add_argument("path", nargs="?")
    p.add_argument("--table")
    p.set_defaults(func=cmd_table_verify)

    for name, func in (("sign", cmd_sign), ("verify", cmd_verify)):
        p = sub.add_parser(name, help=f"{name} a message")
        p.add_argument("--scheme", choices=("schnorr", "ecdsa"), default="schnorr")
        p.add_argument("-m", "--message", required=True)
        if name == "sign":
            p.add_argument("--key", required=True)
            p.add_argument("--table")
            p.add_argument("--no-table", action="store_true", help="ignore tables, use a fresh nonce")
            p.add_argument("-o", "--output", required=True)
            p.add_argument("--hex", action="store_true")
            _add_seed(p)
        else:
            p.add_argument("--pub", required=True)
            p.add_argument("-s", "--signature", required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("encrypt", help="ECIES-encrypt a file")
    p.add_argument("--pub", required=True)
    p.add_argument("--table")
    p.add_argument("--no-table", action="store_true")
    p.add_argument("--suite", choices=("standard", "light"), default="standard")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--hex", action="store_true")
    _add_seed(p)
    p.set_defaults(func=cmd_encrypt)

    p = sub.add_parser("decrypt", help="ECIES-decrypt a file")
    p.add_argument("--key", required=True)
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--hex", action="store_true")
    p.set_defaults(func=cmd_decrypt)

    p = sub.add_parser("kx-demo", help="two-party ECDH in one process")
    p.add_argument("--curve", choices=curves, default="fast")
    p.add_argument("--mode-a", choices=("standard", "bpv"), default="standard")
    p.add_argument("--mode-b", choices=("standard", "bpv"), default="standard")
    p.add_argument("--table")
    _add_seed(p)
    p.set_defaults(func=cmd_kx_demo)

    p = sub.add_parser("bench", help="run the timing and energy comparison")
    p.add_argument("--suite", choices=("pk", "sym", "all"), default="all")
    p.add_argument("--curve", choices=curves, default="fast", help="curve for the BPV rows")
    p.add_argument("--table")
    p.add_argument("--iters", type=int, default=bench.DEFAULT_ITERATIONS)
    p.add_argument("--warmup", type=int, default=bench.DEFAULT_WARMUP)
    p.add_argument("--volts", type=float, default=3.3)
    p.add_argument("--amps", type=float, default=0.040)
    p.add_argument("--format", choices=("csv", "md"), default="md")
    p.add_argument("--msg-size", type=int, default=bench.DEFAULT_MSG_SIZE)
    p.add_argument("--split-ecdh", action="store_true", help="also time keygen and derive separately")
    p.add_argument("-o", "--output")
    _add_seed(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Invalid:
        print("INVALID")
        return 1
    except (UsageError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
