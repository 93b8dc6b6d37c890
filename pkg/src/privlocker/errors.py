"""Error taxonomy shared by every layer.

Each error carries a stable machine-readable ``code`` string.  The CLI prints
the code on stderr and maps it to a fixed exit status; the HTTP layer returns
it in the JSON error body.  Codes are part of the external interface and must
not change between releases.
"""

from __future__ import annotations


class LockerError(Exception):
    """Base class for all errors raised by this package."""

    code = "internal-error"

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)
        self.message = message or self.code


# ---- encoding / persistence -------------------------------------------------

class MalformedEncodingError(LockerError):
    code = "malformed-encoding"


class OffGroupError(MalformedEncodingError):
    """Bytes decoded to a point or element outside the expected group."""

    code = "off-group-element"


class FormatVersionError(LockerError):
    code = "format-version-mismatch"


class ChecksumError(LockerError):
    code = "checksum-failure"


# ---- policy language ---------------------------------------------------------

class PolicySyntaxError(LockerError):
    code = "policy-syntax"

    def __init__(self, message: str, position: int | None = None):
        super().__init__(message)
        self.position = position


class ThresholdRangeError(PolicySyntaxError):
    code = "policy-threshold-range"


class EmptyGateError(PolicySyntaxError):
    code = "policy-empty-gate"


# ---- scheme-level failures ----------------------------------------------------

class GroupMismatchError(LockerError):
    """Operands live in different backends or cannot be paired."""

    code = "group-mismatch"


class TokenCombineError(LockerError):
    code = "token-combine"


class PolicyNotSatisfiedError(LockerError):
    code = "policy-not-satisfied"


class AuthenticationFailureError(LockerError):
    """Authenticated decryption of the document payload failed."""

    code = "authentication-failure"


# ---- locker service -----------------------------------------------------------

class ValidationFailure(LockerError):
    code = "validation-error"


class DuplicateIssuerError(LockerError):
    code = "duplicate-issuer"


class UnknownIssuerError(LockerError):
    code = "unknown-issuer"


class UnknownIdentityError(LockerError):
    code = "unknown-identity"


class UnknownUriError(LockerError):
    code = "unknown-uri"


class WrongDocTypeError(LockerError):
    code = "wrong-doctype"


class NoCoveringKeyError(LockerError):
    code = "no-covering-key"


class MissingAttributesError(LockerError):
    """Identity holds no attribute from one of the requested issuers."""

    code = "missing-issuer-attributes"


class NotImplementedFlow(LockerError):
    """Document flows outside the private-document path are stubbed."""

    code = "not-implemented"


# Exit status used by the CLI for each error family.  0 is success, 1 is
# reserved for unexpected crashes, 2 for argument parsing (click's default).
EXIT_CODES: dict[str, int] = {
    "malformed-encoding": 10,
    "off-group-element": 10,
    "format-version-mismatch": 11,
    "checksum-failure": 12,
    "policy-syntax": 20,
    "policy-threshold-range": 20,
    "policy-empty-gate": 20,
    "group-mismatch": 21,
    "token-combine": 22,
    "policy-not-satisfied": 30,
    "authentication-failure": 31,
    "validation-error": 40,
    "duplicate-issuer": 41,
    "unknown-issuer": 42,
    "unknown-identity": 43,
    "unknown-uri": 44,
    "wrong-doctype": 45,
    "no-covering-key": 46,
    "missing-issuer-attributes": 47,
    "not-implemented": 50,
    "internal-error": 1,
}


def exit_code_for(err: LockerError) -> int:
    return EXIT_CODES.get(err.code, 1)


def _leaf_classes(cls=LockerError):
    yield cls
    for sub in cls.__subclasses__():
        yield from _leaf_classes(sub)


_BY_CODE = {c.code: c for c in _leaf_classes()}


def error_for_code(code: str, message: str = "") -> LockerError:
    """Rebuild a typed error from its wire code, e.g. out of an HTTP body."""
    cls = _BY_CODE.get(code, LockerError)
    return cls(message or code)
