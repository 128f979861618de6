"""BPV generator: offline table of (r_i, r_i*G) pairs, online subset sums.

Online, a fresh pair (r, R = r*G) costs v - 1 point additions and no scalar
multiplication.  The table holds secret scalars in the clear; protecting the
file at rest is the deployment's job.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

from .group import (
    Curve,
    CurveId,
    CurveMismatch,
    GroupPoint,
    InvalidPoint,
    RandomSource,
    SystemRng,
    get_curve,
    point_deserialize,
    point_serialize,
    random_scalar,
    scalar_from_bytes,
    scalar_to_bytes,
)

DEFAULT_K = 1024
DEFAULT_V = 16

MAGIC = b"BPVT"
VERSION = 1
_HEADER = struct.Struct("<4sBBIH4x")  # 16 bytes


class TableFormatError(ValueError):
    pass


@dataclass(frozen=True)
class BpvParams:
    k: int = DEFAULT_K
    v: int = DEFAULT_V
    curve: CurveId = CurveId.FAST_EDWARDS

    def __post_init__(self) -> None:
        if not 2 < self.v < self.k:
            raise ValueError(f"BPV parameters need 2 < v < k (got k={self.k}, v={self.v})")
        if self.k >= 2**32 or self.v >= 2**16:
            raise ValueError("k must fit in u32 and v in u16")
        object.__setattr__(self, "curve", CurveId(self.curve))


@dataclass(frozen=True)
class BpvTable:
    params: BpvParams
    entries: tuple[tuple[int, GroupPoint], ...]

    @property
    def curve(self) -> Curve:
        return get_curve(self.params.curve)

    def __len__(self) -> int:
        return len(self.entries)


def bpv_offline(params: BpvParams, rng: RandomSource | None = None) -> BpvTable:
    """Draw k scalars uniformly from [1, n-1] and store them with their multiples of G."""
    rng = rng or SystemRng()
    curve = get_curve(params.curve)
    G = curve.generator
    entries = []
    for _ in range(params.k):
        r = random_scalar(curve, rng)
        entries.append((r, (r * G).normalized()))
    return BpvTable(params, tuple(entries))


def sample_indices(k: int, v: int, rng: RandomSource) -> list[int]:
    """v distinct indices from range(k), uniformly, by partial Fisher-Yates.

    Only the swapped positions are materialised, so this is O(v) regardless of k.
    """
    swapped: dict[int, int] = {}
    out = []
    for i in range(v):
        j = i + rng.randbelow(k - i)
        out.append(swapped.get(j, j))
        swapped[j] = swapped.get(i, i)
    return out


def bpv_online(table: BpvTable, rng: RandomSource | None = None) -> tuple[int, GroupPoint]:
    rng = rng or SystemRng()
    n = table.curve.n
    entries = table.entries
    k, v = table.params.k, table.params.v
    while True:
        idx = sample_indices(k, v, rng)
        r, R = entries[idx[0]]
        for i in idx[1:]:
            ri, Ri = entries[i]
            r += ri
            R = R + Ri
        r %= n
        if r:
            return r, R


def verify_table(table: BpvTable) -> bool:
    """Check the parameters and recompute every r_i * G."""
    params = table.params
    try:
        BpvParams(params.k, params.v, params.curve)
    except ValueError:
        return False
    if len(table.entries) != params.k:
        return False
    curve = table.curve
    G = curve.generator
    for r, R in table.entries:
        if not 0 < r < curve.n or R.curve is not curve:
            return False
        if r * G != R:
            return False
    return True


def table_to_bytes(table: BpvTable) -> bytes:
    p = table.params
    curve = table.curve
    parts = [_HEADER.pack(MAGIC, VERSION, int(p.curve), p.k, p.v)]
    for r, R in table.entries:
        parts.append(scalar_to_bytes(curve, r))
        parts.append(point_serialize(R))
    return b"".join(parts)


def table_from_bytes(data: bytes, curve: CurveId | None = None, verify: bool = True) -> BpvTable:
    """Parse a table file image.  ``curve``, when given, must match the header."""
    if len(data) < _HEADER.size:
        raise TableFormatError("file too short for header")
    magic, version, curve_id, k, v = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise TableFormatError("bad magic")
    if version != VERSION:
        raise TableFormatError(f"unsupported version {version}")
    try:
        c = get_curve(curve_id)
    except ValueError as exc:
        raise TableFormatError(str(exc)) from None
    if curve is not None and CurveId(curve) != c.id:
        raise CurveMismatch(f"table is for {c.name}")
    try:
        params = BpvParams(k, v, c.id)
    except ValueError as exc:
        raise TableFormatError(str(exc)) from None
    rec = c.scalar_size + c.point_size
    if len(data) != _HEADER.size + k * rec:
        raise TableFormatError("file length does not match k")
    entries = []
    off = _HEADER.size
    # with verify on, R_i == r_i*G already proves subgroup membership
    try:
        for _ in range(k):
            r = scalar_from_bytes(c, data[off:off + c.scalar_size])
            R = point_deserialize(data[off + c.scalar_size:off + rec], c, check_subgroup=not verify)
            entries.append((r, R.normalized()))
            off += rec
    except (ValueError, InvalidPoint) as exc:
        raise TableFormatError(f"bad entry {len(entries)}: {exc}") from None
    table = BpvTable(params, tuple(entries))
    if verify and not verify_table(table):
        raise TableFormatError("table failed verification")
    return table


def table_save(table: BpvTable, path: str | Path) -> None:
    from .keyfile import write_secret

    write_secret(path, table_to_bytes(table))


def table_load(path: str | Path, curve: CurveId | None = None) -> BpvTable:
    return table_from_bytes(Path(path).read_bytes(), curve)
