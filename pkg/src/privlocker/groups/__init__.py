"""Pairing group backends.

Every backend exposes one context object with the same surface:

* ``name`` / ``order``
* ``generator()`` -> source element g (both curve sides populated)
* ``pairing_base()`` -> e(g, g), cached
* ``random_scalar(rng)`` -> uniform nonzero Scalar
* ``hash_to_group(data)`` -> source element derived from bytes
* ``pair(p, q)`` -> target element, bilinear and symmetric for every
  pairable combination of sides
* ``serialize_* / deserialize_*`` for scalars, source and target elements

Source elements model a logical symmetric group over an asymmetric curve:
an element carries one or both curve sides with a common discrete log.
Elements produced by ``hash_to_group`` live on the first side only; ``pair``
picks whichever orientation is computable, so the symmetric contract
``pair(a, b) == pair(b, a)`` holds whenever either orientation exists.

``bn256`` is the production backend.  ``toy`` keeps exponents in the clear
for oracle tests and is not secure in any sense.
"""

from __future__ import annotations

from ..errors import GroupMismatchError, MalformedEncodingError

# Hash families are format constants: KDF_HASH_FAMILY feeds key derivation
# in the encryption layer, HASH_TO_GROUP_FAMILY names the map behind
# ``hash_to_group``.  Changing either is a breaking format change.
KDF_HASH_FAMILY = "sha256"
HASH_TO_GROUP_FAMILY = "fouque-tibouchi-sha512"


class Scalar:
    """Element of the prime field Z_n where n is the group order."""

    __slots__ = ("value", "order")

    def __init__(self, value: int, order: int):
        self.value = value % order
        self.order = order

    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.order != self.order:
                raise GroupMismatchError("scalar orders differ")
            return other
        if isinstance(other, int):
            return Scalar(other, self.order)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(self.value + o.value, self.order)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(self.value - o.value, self.order)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(o.value - self.value, self.order)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(self.value * o.value, self.order)

    __rmul__ = __mul__

    def __neg__(self):
        return Scalar(-self.value, self.order)

    def inverse(self) -> "Scalar":
        if self.value == 0:
            raise ZeroDivisionError("scalar 0 has no inverse")
        return Scalar(pow(self.value, -1, self.order), self.order)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __eq__(self, other):
        return (
            isinstance(other, Scalar)
            and self.value == other.value
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.value, self.order))

    def __int__(self):
        return int(self.value)

    def __repr__(self):
        return f"Scalar({int(self.value)})"


SCALAR_BYTES = 32


def serialize_scalar(s: Scalar) -> bytes:
    return int(s.value).to_bytes(SCALAR_BYTES, "big")


def deserialize_scalar(data: bytes, order: int) -> Scalar:
    if len(data) != SCALAR_BYTES:
        raise MalformedEncodingError("scalar encoding must be 32 bytes")
    v = int.from_bytes(data, "big")
    if v >= order:
        raise MalformedEncodingError("scalar not reduced mod group order")
    return Scalar(v, order)


_BACKENDS = {}


def backend(name: str):
    """Return the shared context instance for a backend by name."""
    try:
        return _BACKENDS[name]
    except KeyError:
        pass
    if name == "bn256":
        from . import bn256

        _BACKENDS[name] = bn256.Bn256Context()
    elif name == "toy":
        from . import toy

        _BACKENDS[name] = toy.ToyContext()
    else:
        raise MalformedEncodingError(f"unknown group backend {name!r}")
    return _BACKENDS[name]
