"""Prime-order elliptic-curve groups behind one interface.

Two backends are provided:

* ``CurveId.BASELINE_WEIERSTRASS``: secp256k1 in Jacobian coordinates.
* ``CurveId.FAST_EDWARDS``: edwards25519 (a = -1 twisted Edwards) in extended
  coordinates with unified addition.

Scalars are plain ``int`` values reduced modulo the subgroup order ``n``.
Points are immutable :class:`GroupPoint` objects; ``P + Q``, ``-P`` and
``k * P`` work as expected.  Public point additions and scalar
multiplications are tallied in :data:`counters` so callers can assert on
the operation cost of a protocol (see :func:`count_ops`).

Nothing in here is constant time.
"""

from __future__ import annotations

import enum
import secrets
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterator, Protocol


class InvalidPoint(ValueError):
    """Encoding is malformed, off the curve, or outside the prime-order subgroup."""


class CurveMismatch(ValueError):
    """Objects created under different curves were combined."""


class CurveId(enum.IntEnum):
    BASELINE_WEIERSTRASS = 1
    FAST_EDWARDS = 2


class RandomSource(Protocol):
    def randbelow(self, n: int) -> int: ...


class SystemRng:
    """Operating-system randomness."""

    def randbelow(self, n: int) -> int:
        return secrets.randbelow(n)


# ---------------------------------------------------------------------------
# operation counters


@dataclass
class OpCounts:
    scalar_muls: int = 0
    point_adds: int = 0

    def as_dict(self) -> dict[str, int]:
        return {"scalar_muls": self.scalar_muls, "point_adds": self.point_adds}


counters = OpCounts()


@contextmanager
def count_ops() -> Iterator[OpCounts]:
    """Yield an :class:`OpCounts` that holds the operations performed inside the block.

    The tally is process-global, so only use this from a single thread.
    """
    result = OpCounts()
    start_muls, start_adds = counters.scalar_muls, counters.point_adds
    try:
        yield result
    finally:
        result.scalar_muls = counters.scalar_muls - start_muls
        result.point_adds = counters.point_adds - start_adds


# ---------------------------------------------------------------------------
# curves


class Curve:
    """Backend interface.  Coordinates are tuples of ints, opaque to callers."""

    id: CurveId
    name: str
    p: int
    n: int
    cofactor: int
    point_size = 33
    scalar_size = 32

    def __init__(self) -> None:
        self.identity = GroupPoint(self, self._identity())
        self.generator = GroupPoint(self, self._from_affine(*self._g_affine))

    # raw coordinate arithmetic, overridden by backends
    def _identity(self) -> tuple: ...
    def _from_affine(self, x: int, y: int) -> tuple: ...
    def _to_affine(self, c: tuple) -> tuple[int, int]: ...
    def _is_identity(self, c: tuple) -> bool: ...
    def _eq(self, a: tuple, b: tuple) -> bool: ...
    def _neg(self, c: tuple) -> tuple: ...
    def _add(self, a: tuple, b: tuple) -> tuple: ...
    def _double(self, c: tuple) -> tuple: ...
    def _on_curve(self, x: int, y: int) -> bool: ...
    def encode(self, point: GroupPoint) -> bytes: ...
    def decode(self, data: bytes, check_subgroup: bool = True) -> GroupPoint: ...

    def _mul(self, k: int, c: tuple) -> tuple:
        # left-to-right fixed 4-bit window
        k %= self.n
        if k == 0:
            return self._identity()
        table = [self._identity(), c]
        for _ in range(14):
            table.append(self._add(table[-1], c))
        acc = self._identity()
        for shift in range((k.bit_length() + 3) // 4 * 4 - 4, -1, -4):
            acc = self._double(self._double(self._double(self._double(acc))))
            nibble = (k >> shift) & 0xF
            if nibble:
                acc = self._add(acc, table[nibble])
        return acc

    def __repr__(self) -> str:
        return f"<Curve {self.name}>"


class WeierstrassCurve(Curve):
    """y^2 = x^3 + 7 over GF(p) (secp256k1), Jacobian coordinates (X, Y, Z)."""

    id = CurveId.BASELINE_WEIERSTRASS
    name = "secp256k1"
    p = 2**256 - 2**32 - 977
    n = 0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEBAAEDCE6AF48A03BBFD25E8CD0364141
    b = 7
    cofactor = 1
    _g_affine = (
        0x79BE667EF9DCBBAC55A06295CE870B07029BFCDB2DCE28D959F2815B16F81798,
        0x483ADA7726A3C4655DA4FBFC0E1108A8FD17B448A68554199C47D08FFB10D4B8,
    )

    def _identity(self):
        return (1, 1, 0)

    def _from_affine(self, x, y):
        return (x, y, 1)

    def _to_affine(self, c):
        X, Y, Z = c
        if Z == 0:
            raise ValueError("identity has no affine form")
        p = self.p
        zi = pow(Z, -1, p)
        zi2 = zi * zi % p
        return X * zi2 % p, Y * zi2 * zi % p

    def _is_identity(self, c):
        return c[2] == 0

    def _eq(self, a, b):
        X1, Y1, Z1 = a
        X2, Y2, Z2 = b
        if Z1 == 0 or Z2 == 0:
            return Z1 == 0 and Z2 == 0
        p = self.p
        z1z1 = Z1 * Z1 % p
        z2z2 = Z2 * Z2 % p
        return (X1 * z2z2 - X2 * z1z1) % p == 0 and (Y1 * z2z2 * Z2 - Y2 * z1z1 * Z1) % p == 0

    def _neg(self, c):
        return (c[0], -c[1] % self.p, c[2])

    def _double(self, c):
        X, Y, Z = c
        if Z == 0 or Y == 0:
            return (1, 1, 0)
        p = self.p
        A = X * X % p
        B = Y * Y % p
        C = B * B % p
        D = 2 * ((X + B) ** 2 - A - C) % p
        E = 3 * A % p
        X3 = (E * E - 2 * D) % p
        Y3 = (E * (D - X3) - 8 * C) % p
        Z3 = 2 * Y * Z % p
        return (X3, Y3, Z3)

    def _add(self, a, b):
        X1, Y1, Z1 = a
        X2, Y2, Z2 = b
        if Z1 == 0:
            return b
        if Z2 == 0:
            return a
        p = self.p
        z1z1 = Z1 * Z1 % p
        U2 = X2 * z1z1 % p
        S2 = Y2 * Z1 * z1z1 % p
        if Z2 == 1:
            # mixed addition, b is affine
            U1, S1 = X1, Y1
        else:
            z2z2 = Z2 * Z2 % p
            U1 = X1 * z2z2 % p
            S1 = Y1 * Z2 * z2z2 % p
        H = (U2 - U1) % p
        r = (S2 - S1) % p
        if H == 0:
            if r == 0:
                return self._double(a)
            return (1, 1, 0)
        HH = H * H % p
        HHH = H * HH % p
        V = U1 * HH % p
        X3 = (r * r - HHH - 2 * V) % p
        Y3 = (r * (V - X3) - S1 * HHH) % p
        Z3 = Z1 * H % p if Z2 == 1 else Z1 * Z2 * H % p
        return (X3, Y3, Z3)

    def _on_curve(self, x, y):
        p = self.p
        return (y * y - x * x * x - self.b) % p == 0

    def lift_x(self, x: int) -> int | None:
        """Return some y with (x, y) on the curve, or None."""
        p = self.p
        rhs = (x * x * x + self.b) % p
        y = pow(rhs, (p + 1) // 4, p)
        if y * y % p != rhs:
            return None
        return y

    def encode(self, point):
        """SEC1 compressed form: 0x02/0x03 parity byte then big-endian x."""
        x, y = point.affine()
        return bytes([2 | (y & 1)]) + x.to_bytes(32, "big")

    def decode(self, data, check_subgroup=True):
        if len(data) != self.point_size:
            raise InvalidPoint(f"expected {self.point_size} bytes, got {len(data)}")
        header = data[0]
        if header not in (2, 3):
            raise InvalidPoint(f"bad header byte 0x{header:02x}")
        x = int.from_bytes(data[1:], "big")
        if x >= self.p:
            raise InvalidPoint("x coordinate out of range")
        y = self.lift_x(x)
        if y is None:
            raise InvalidPoint("x is not on the curve")
        if y & 1 != header & 1:
            y = self.p - y
        # cofactor 1: every curve point is in the subgroup
        return GroupPoint(self, (x, y, 1))

    def shared_secret_bytes(self, point: GroupPoint) -> bytes:
        return point.affine()[0].to_bytes(32, "big")


def _sqrt_mod_p25519(u: int, p: int) -> int | None:
    x = pow(u, (p + 3) // 8, p)
    if (x * x - u) % p != 0:
        x = x * pow(2, (p - 1) // 4, p) % p
    if (x * x - u) % p != 0:
        return None
    return x


class EdwardsCurve(Curve):
    """-x^2 + y^2 = 1 + d x^2 y^2 over GF(2^255 - 19), extended coordinates (X, Y, Z, T)."""

    id = CurveId.FAST_EDWARDS
    name = "edwards25519"
    p = 2**255 - 19
    n = 2**252 + 27742317777372353535851937790883648493
    cofactor = 8
    d = -121665 * pow(121666, -1, 2**255 - 19) % (2**255 - 19)
    _g_affine = (
        15112221349535400772501151409588531511454012693041857206046113283949847762202,
        46316835694926478169428394003475163141307993866256225615783033603165251855960,
    )

    def __init__(self) -> None:
        self.d2 = 2 * self.d % self.p
        super().__init__()

    def _identity(self):
        return (0, 1, 1, 0)

    def _from_affine(self, x, y):
        return (x, y, 1, x * y % self.p)

    def _to_affine(self, c):
        X, Y, Z, _ = c
        p = self.p
        zi = pow(Z, -1, p)
        return X * zi % p, Y * zi % p

    def _is_identity(self, c):
        X, Y, Z, _ = c
        return X % self.p == 0 and (Y - Z) % self.p == 0

    def _eq(self, a, b):
        p = self.p
        return (a[0] * b[2] - b[0] * a[2]) % p == 0 and (a[1] * b[2] - b[1] * a[2]) % p == 0

    def _neg(self, c):
        p = self.p
        return (-c[0] % p, c[1], c[2], -c[3] % p)

    def _add(self, a, b):
        X1, Y1, Z1, T1 = a
        X2, Y2, Z2, T2 = b
        p = self.p
        A = (Y1 - X1) * (Y2 - X2) % p
        B = (Y1 + X1) * (Y2 + X2) % p
        C = T1 * self.d2 * T2 % p
        D = 2 * Z1 % p if Z2 == 1 else 2 * Z1 * Z2 % p
        E = B - A
        F = D - C
        G = D + C
        H = B + A
        return (E * F % p, G * H % p, F * G % p, E * H % p)

    def _double(self, c):
        X, Y, Z, _ = c
        p = self.p
        A = X * X % p
        B = Y * Y % p
        C = 2 * Z * Z % p
        E = ((X + Y) ** 2 - A - B) % p
        G = B - A
        F = G - C
        H = -A - B
        return (E * F % p, G * H % p, F * G % p, E * H % p)

    def _on_curve(self, x, y):
        p = self.p
        xx, yy = x * x % p, y * y % p
        return (yy - xx - 1 - self.d * xx * yy) % p == 0

    def recover_x(self, y: int, sign: int) -> int | None:
        p = self.p
        yy = y * y % p
        u = (yy - 1) % p
        w = (self.d * yy + 1) % p
        x = _sqrt_mod_p25519(u * pow(w, -1, p) % p, p)
        if x is None:
            return None
        if x == 0 and sign:
            return None
        if x & 1 != sign:
            x = p - x
        return x

    def encode(self, point):
        """Header 0x04 | (x & 1), then little-endian y."""
        x, y = point.affine()
        return bytes([4 | (x & 1)]) + y.to_bytes(32, "little")

    def decode(self, data, check_subgroup=True):
        if len(data) != self.point_size:
            raise InvalidPoint(f"expected {self.point_size} bytes, got {len(data)}")
        header = data[0]
        if header not in (4, 5):
            raise InvalidPoint(f"bad header byte 0x{header:02x}")
        y = int.from_bytes(data[1:], "little")
        if y >= self.p:
            raise InvalidPoint("y coordinate out of range")
        x = self.recover_x(y, header & 1)
        if x is None:
            raise InvalidPoint("y is not on the curve")
        point = GroupPoint(self, self._from_affine(x, y))
        if check_subgroup and not self._is_identity(self._mul_unreduced(self.n, point._c)):
            raise InvalidPoint("point is not in the prime-order subgroup")
        return point

    def _mul_unreduced(self, k: int, c: tuple) -> tuple:
        # plain double-and-add without reducing k mod n, for the order check
        acc = self._identity()
        for bit in bin(k)[2:]:
            acc = self._double(acc)
            if bit == "1":
                acc = self._add(acc, c)
        return acc

    def shared_secret_bytes(self, point: GroupPoint) -> bytes:
        return self.encode(point)


class GroupPoint:
    """An element of a curve's prime-order subgroup."""

    __slots__ = ("curve", "_c")

    def __init__(self, curve: Curve, coords: tuple) -> None:
        object.__setattr__(self, "curve", curve)
        object.__setattr__(self, "_c", coords)

    def __setattr__(self, name, value):
        raise AttributeError("GroupPoint is immutable")

    def _check(self, other: GroupPoint) -> None:
        if other.curve is not self.curve:
            raise CurveMismatch(f"{self.curve.name} vs {other.curve.name}")

    def __add__(self, other: GroupPoint) -> GroupPoint:
        if not isinstance(other, GroupPoint):
            return NotImplemented
        self._check(other)
        counters.point_adds += 1
        return GroupPoint(self.curve, self.curve._add(self._c, other._c))

    def __neg__(self) -> GroupPoint:
        return GroupPoint(self.curve, self.curve._neg(self._c))

    def __sub__(self, other: GroupPoint) -> GroupPoint:
        return self + (-other)

    def __rmul__(self, k: int) -> GroupPoint:
        if not isinstance(k, int):
            return NotImplemented
        counters.scalar_muls += 1
        return GroupPoint(self.curve, self.curve._mul(k, self._c))

    __mul__ = __rmul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupPoint):
            return NotImplemented
        return other.curve is self.curve and self.curve._eq(self._c, other._c)

    def __hash__(self) -> int:
        if self.is_identity():
            return hash((self.curve.id, None))
        return hash((self.curve.id, self.affine()))

    def is_identity(self) -> bool:
        return self.curve._is_identity(self._c)

    def affine(self) -> tuple[int, int]:
        return self.curve._to_affine(self._c)

    def normalized(self) -> GroupPoint:
        """Same point with Z = 1, so later additions take the mixed path."""
        if self.is_identity():
            return self
        return GroupPoint(self.curve, self.curve._from_affine(*self.affine()))

    def __repr__(self) -> str:
        if self.is_identity():
            return f"GroupPoint({self.curve.name}, identity)"
        x, y = self.affine()
        return f"GroupPoint({self.curve.name}, x={x:#x}, y={y:#x})"


SECP256K1 = WeierstrassCurve()
ED25519 = EdwardsCurve()

_CURVES = {c.id: c for c in (SECP256K1, ED25519)}
_ALIASES = {"baseline": SECP256K1, "fast": ED25519, "secp256k1": SECP256K1, "edwards25519": ED25519}


def get_curve(which: CurveId | int | str) -> Curve:
    if isinstance(which, Curve):
        return which
    if isinstance(which, str):
        try:
            return _ALIASES[which.lower()]
        except KeyError:
            raise ValueError(f"unknown curve {which!r}") from None
    try:
        return _CURVES[CurveId(which)]
    except ValueError:
        raise ValueError(f"unknown curve id {which!r}") from None


def generator(curve: CurveId | Curve) -> GroupPoint:
    return get_curve(curve).generator


def point_add(a: GroupPoint, b: GroupPoint) -> GroupPoint:
    return a + b


def scalar_mul(k: int, p: GroupPoint) -> GroupPoint:
    return k * p


def point_serialize(p: GroupPoint) -> bytes:
    if p.is_identity():
        raise InvalidPoint("the identity has no encoding")
    return p.curve.encode(p)


def point_deserialize(data: bytes, curve: CurveId | Curve, check_subgroup: bool = True) -> GroupPoint:
    """Decode a compressed point, rejecting anything outside the prime-order subgroup.

    ``check_subgroup=False`` skips the n*P order check on curves with a
    cofactor; only use it when membership is established some other way.
    """
    point = get_curve(curve).decode(bytes(data), check_subgroup)
    if point.is_identity():
        raise InvalidPoint("the identity is not a valid encoded point")
    return point


# ---------------------------------------------------------------------------
# scalars


def scalar_add(curve: Curve, a: int, b: int) -> int:
    return (a + b) % curve.n


def scalar_sub(curve: Curve, a: int, b: int) -> int:
    return (a - b) % curve.n


def scalar_mul_mod(curve: Curve, a: int, b: int) -> int:
    return a * b % curve.n


def scalar_invert(curve: Curve, a: int) -> int:
    a %= curve.n
    if a == 0:
        raise ZeroDivisionError("zero has no inverse mod n")
    return pow(a, -1, curve.n)


def random_scalar(curve: Curve, rng: RandomSource | None = None) -> int:
    """Uniform scalar in [1, n-1]."""
    rng = rng or SystemRng()
    return 1 + rng.randbelow(curve.n - 1)


def scalar_to_bytes(curve: Curve, k: int) -> bytes:
    return (k % curve.n).to_bytes(curve.scalar_size, "little")


def scalar_from_bytes(curve: Curve, data: bytes) -> int:
    """Parse a fixed-width little-endian scalar; values >= n are rejected."""
    if len(data) != curve.scalar_size:
        raise ValueError(f"expected {curve.scalar_size} scalar bytes, got {len(data)}")
    k = int.from_bytes(data, "little")
    if k >= curve.n:
        raise ValueError("scalar not reduced mod n")
    return k
