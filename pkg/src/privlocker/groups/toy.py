"""Exponent-bookkeeping backend for oracle tests.

Elements record their discrete log relative to a fixed generator, so tests
can assert the exact exponent algebra the scheme is supposed to produce.
``pair`` multiplies exponents, which makes the bilinear identities hold by
construction.  NOT SECURE: every discrete log is stored in the clear and
``hash_to_group`` has a publicly computable exponent.  Never use outside
tests and oracles.
"""

from __future__ import annotations

import hashlib

from ..errors import GroupMismatchError, MalformedEncodingError
from . import Scalar

ORDER = 2**61 - 1  # Mersenne prime, comfortably above any test corpus size

_EXP_BYTES = 8


class ToySource:
    """g^exponent for the imaginary generator g."""

    __slots__ = ("exponent",)

    def __init__(self, exponent: int):
        self.exponent = exponent % ORDER

    def _exp_int(self, other) -> int:
        if isinstance(other, Scalar):
            if other.order != ORDER:
                raise GroupMismatchError("scalar belongs to a different group")
            return int(other.value)
        if isinstance(other, int):
            return other % ORDER
        raise TypeError(f"cannot exponentiate by {type(other).__name__}")

    def __pow__(self, other):
        return ToySource(self.exponent * self._exp_int(other))

    def __mul__(self, other):
        if not isinstance(other, ToySource):
            return NotImplemented
        return ToySource(self.exponent + other.exponent)

    def __truediv__(self, other):
        if not isinstance(other, ToySource):
            return NotImplemented
        return ToySource(self.exponent - other.exponent)

    def inverse(self) -> "ToySource":
        return ToySource(-self.exponent)

    def __eq__(self, other):
        if not isinstance(other, ToySource):
            return NotImplemented
        return self.exponent == other.exponent

    def __hash__(self):
        return hash(("toy-source", self.exponent))

    def __repr__(self):
        return f"<ToySource g^{self.exponent}>"


class ToyTarget:
    """e(g, g)^exponent."""

    __slots__ = ("exponent",)

    def __init__(self, exponent: int):
        self.exponent = exponent % ORDER

    def __mul__(self, other):
        if not isinstance(other, ToyTarget):
            return NotImplemented
        return ToyTarget(self.exponent + other.exponent)

    def __truediv__(self, other):
        if not isinstance(other, ToyTarget):
            return NotImplemented
        return ToyTarget(self.exponent - other.exponent)

    def inverse(self) -> "ToyTarget":
        return ToyTarget(-self.exponent)

    def __pow__(self, other):
        if isinstance(other, Scalar):
            if other.order != ORDER:
                raise GroupMismatchError("scalar belongs to a different group")
            k = int(other.value)
        elif isinstance(other, int):
            k = other % ORDER
        else:
            raise TypeError(f"cannot exponentiate by {type(other).__name__}")
        return ToyTarget(self.exponent * k)

    def __eq__(self, other):
        if not isinstance(other, ToyTarget):
            return NotImplemented
        return self.exponent == other.exponent

    def __hash__(self):
        return hash(("toy-target", self.exponent))

    def is_identity(self) -> bool:
        return self.exponent == 0

    def __repr__(self):
        return f"<ToyTarget e(g,g)^{self.exponent}>"


class ToyContext:
    """Oracle backend context; mirrors the production surface exactly."""

    name = "toy"
    order = ORDER
    hash_to_group_family = "sha256-exponent (dlog public, oracle use only)"

    def generator(self) -> ToySource:
        return ToySource(1)

    def pairing_base(self) -> ToyTarget:
        return ToyTarget(1)

    def target_identity(self) -> ToyTarget:
        return ToyTarget(0)

    def random_scalar(self, rng) -> Scalar:
        return Scalar(rng.randrange(1, ORDER), ORDER)

    def scalar(self, value: int) -> Scalar:
        return Scalar(value, ORDER)

    def hash_to_group(self, data: bytes) -> ToySource:
        digest = hashlib.sha256(b"toy-hash:" + data).digest()
        # avoid the identity so H(attr) is always a generator
        return ToySource(int.from_bytes(digest, "big") % (ORDER - 1) + 1)

    def pair(self, a: ToySource, b: ToySource) -> ToyTarget:
        if not isinstance(a, ToySource) or not isinstance(b, ToySource):
            raise GroupMismatchError("toy pairing expects toy source elements")
        return ToyTarget(a.exponent * b.exponent)

    # -- encodings: 8-byte big-endian exponent.  The all-zero string is the
    #    valid encoding of the identity in this backend.

    def serialize_source(self, e: ToySource) -> bytes:
        return e.exponent.to_bytes(_EXP_BYTES, "big")

    def deserialize_source(self, data: bytes) -> ToySource:
        return ToySource(self._read_exp(data))

    def serialize_target(self, e: ToyTarget) -> bytes:
        return e.exponent.to_bytes(_EXP_BYTES, "big")

    def deserialize_target(self, data: bytes) -> ToyTarget:
        return ToyTarget(self._read_exp(data))

    def serialize_scalar(self, s: Scalar) -> bytes:
        if s.order != ORDER:
            raise GroupMismatchError("scalar belongs to a different group")
        return int(s.value).to_bytes(_EXP_BYTES, "big")

    def deserialize_scalar(self, data: bytes) -> Scalar:
        return Scalar(self._read_exp(data), ORDER)

    @staticmethod
    def _read_exp(data: bytes) -> int:
        if len(data) != _EXP_BYTES:
            raise MalformedEncodingError("toy encoding must be 8 bytes")
        v = int.from_bytes(data, "big")
        if v >= ORDER:
            raise MalformedEncodingError("toy exponent not reduced mod group order")
        return v
