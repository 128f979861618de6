"""BPV-accelerated elliptic-curve cryptography with standard baselines.

Quick tour::

    from bpvcrypt import BpvParams, bpv_offline, generate_keypair, schnorr_sign, schnorr_verify

    table = bpv_offline(BpvParams(k=1024, v=16))
    key = generate_keypair("fast")
    sig = schnorr_sign(b"hello", key, table)
    assert schnorr_verify(b"hello", sig, key.Y)
"""

from .bpv import BpvParams, BpvTable, bpv_offline, bpv_online, table_load, table_save, verify_table
from .ecies import EciesCiphertext, SymSuite, ecies_decrypt, ecies_encrypt, kdf
from .group import (
    ED25519,
    SECP256K1,
    CurveId,
    CurveMismatch,
    GroupPoint,
    InvalidPoint,
    count_ops,
    generator,
    get_curve,
    point_add,
    point_deserialize,
    point_serialize,
    random_scalar,
    scalar_mul,
)
from .kex import ecdh_derive, ecdh_keygen
from .keyfile import KeyPair
from .rng import SeededRng, SystemRng
from .sigs import (
    EcdsaSignature,
    SchnorrSignature,
    ecdsa_sign,
    ecdsa_verify,
    generate_keypair,
    hash_to_scalar,
    schnorr_sign,
    schnorr_verify,
)
from .symmetric import InvalidTag

__version__ = "0.1.0"
