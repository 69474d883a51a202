"""Modeled primitives: fixed-width bitstrings, hash, stream cipher, map-to-group.

The cipher is a model, not an AEAD: keystream blocks are SHA-256 of
key || counter and the tag is H(key || body). It exists so that the
protocols' "decrypt and check" steps fail loudly under a wrong key.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass

from .errors import IntegrityError

DEFAULT_WIDTH = 256


def _nbytes(width: int) -> int:
    return (width + 7) // 8


@dataclass(frozen=True)
class Bitstring:
    value: int
    width: int = DEFAULT_WIDTH

    def __post_init__(self):
        if self.width < 1:
            raise ValueError("width must be positive")
        if not 0 <= self.value < (1 << self.width):
            raise ValueError(f"value does not fit in {self.width} bits")

    def __xor__(self, other: "Bitstring") -> "Bitstring":
        return xor(self, other)

    def __bytes__(self) -> bytes:
        return self.value.to_bytes(_nbytes(self.width), "big")

    def hex(self) -> str:
        return bytes(self).hex()

    @classmethod
    def zero(cls, width: int = DEFAULT_WIDTH) -> "Bitstring":
        return cls(0, width)

    @classmethod
    def random(cls, rng, width: int = DEFAULT_WIDTH) -> "Bitstring":
        return cls(rng.getrandbits(width), width)

    @classmethod
    def from_bytes(cls, data: bytes, width: int = DEFAULT_WIDTH) -> "Bitstring":
        """Big-endian pad/truncate ``data`` to ``width`` bits.

        Longer inputs keep their leading bytes; the integer is then masked,
        so for widths that are not a multiple of 8 the top bits are dropped.
        """
        n = _nbytes(width)
        data = data[:n].rjust(n, b"\x00")
        return cls(int.from_bytes(data, "big") & ((1 << width) - 1), width)


def xor(a: Bitstring, b: Bitstring) -> Bitstring:
    if a.width != b.width:
        raise ValueError(f"width mismatch: {a.width} vs {b.width}")
    return Bitstring(a.value ^ b.value, a.width)


def hash_bits(data: bytes, width: int = DEFAULT_WIDTH) -> Bitstring:
    """SHA-256 expanded with a 4-byte counter suffix, truncated to ``width`` bits."""
    n = _nbytes(width)
    out = b""
    counter = 0
    while len(out) < n:
        out += hashlib.sha256(data + struct.pack(">I", counter)).digest()
        counter += 1
    value = int.from_bytes(out[:n], "big") >> (8 * n - width)
    return Bitstring(value, width)


def H(x, width: int = DEFAULT_WIDTH) -> Bitstring:
    """Hash bytes, or a Bitstring via its big-endian encoding."""
    if isinstance(x, Bitstring):
        x = bytes(x)
    return hash_bits(x, width)


@dataclass(frozen=True)
class CipherText:
    body: bytes
    tag: Bitstring


def _keystream(key: Bitstring, length: int) -> bytes:
    kb = bytes(key)
    blocks = []
    for counter in range((length + 31) // 32):
        blocks.append(hashlib.sha256(kb + struct.pack(">Q", counter)).digest())
    return b"".join(blocks)[:length]


def _mask(payload: bytes, key: Bitstring) -> bytes:
    if not payload:
        return b""
    stream = _keystream(key, len(payload))
    out = int.from_bytes(payload, "big") ^ int.from_bytes(stream, "big")
    return out.to_bytes(len(payload), "big")


def encrypt(key: Bitstring, payload: bytes) -> CipherText:
    body = _mask(payload, key)
    return CipherText(body, hash_bits(bytes(key) + body, key.width))


def decrypt(key: Bitstring, ct: CipherText) -> bytes:
    if ct.tag.width != key.width or hash_bits(bytes(key) + ct.body, key.width) != ct.tag:
        raise IntegrityError("tag mismatch")
    return _mask(ct.body, key)


@dataclass(frozen=True)
class AdditiveGroupParams:
    """Z_n under addition; stands in for an elliptic-curve group G1."""

    n: int


# 2**64 - 59, the largest 64-bit prime.
DEFAULT_GROUP = AdditiveGroupParams(n=(1 << 64) - 59)


def map_to_group(data: bytes, params: AdditiveGroupParams) -> int:
    return hash_bits(data, DEFAULT_WIDTH).value % params.n


def encode_element(x: int, p: int, width: int = DEFAULT_WIDTH) -> Bitstring:
    if p.bit_length() > width:
        raise ValueError(f"modulus of {p.bit_length()} bits does not fit in {width}")
    if not 0 <= x < p:
        raise ValueError("element out of range")
    return Bitstring(x, width)


def decode_element(b: Bitstring, p: int) -> int:
    if p.bit_length() > b.width:
        raise ValueError(f"modulus of {p.bit_length()} bits does not fit in {b.width}")
    if b.value >= p:
        raise ValueError("encoded value is not a residue mod p")
    return b.value


def int_bytes(x: int) -> bytes:
    """Minimal big-endian encoding of a non-negative integer (b'' for 0 is avoided)."""
    return x.to_bytes(max(1, (x.bit_length() + 7) // 8), "big")


def pack_fields(*fields: bytes) -> bytes:
    """Length-prefixed concatenation (4-byte big-endian length per field)."""
    return b"".join(struct.pack(">I", len(f)) + f for f in fields)


def unpack_fields(data: bytes) -> list[bytes]:
    fields = []
    pos = 0
    while pos < len(data):
        if pos + 4 > len(data):
            raise ValueError("truncated length prefix")
        (n,) = struct.unpack_from(">I", data, pos)
        pos += 4
        if pos + n > len(data):
            raise ValueError("truncated field")
        fields.append(data[pos:pos + n])
        pos += n
    return fields
