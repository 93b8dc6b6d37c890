"""Attribute-based document locker.

Documents are encrypted under an access policy combined from two parties'
subtrees via a reusable token; requesters decrypt with attribute keys that
satisfy the policy.  See ``privlocker.abe`` for the scheme,
``privlocker.locker`` for the service and ``privlocker.cli`` for the
command line.
"""

from .abe import (
    AttributeKey,
    Ciphertext,
    CombinedToken,
    MasterPublicKey,
    MasterSecretKey,
    PartialToken,
    combine_tokens,
    decrypt,
    encrypt_with_token,
    gen_partial_token,
    keygen,
    setup,
)
from .errors import LockerError
from .groups import backend
from .locker import DocumentURI, EDocument, LockerService
from .policy import AccessTree, AttributeLabel, parse_policy

__version__ = "0.1.0"

__all__ = [
    "AccessTree",
    "AttributeKey",
    "AttributeLabel",
    "Ciphertext",
    "CombinedToken",
    "DocumentURI",
    "EDocument",
    "LockerError",
    "LockerService",
    "MasterPublicKey",
    "MasterSecretKey",
    "PartialToken",
    "backend",
    "combine_tokens",
    "decrypt",
    "encrypt_with_token",
    "gen_partial_token",
    "keygen",
    "parse_policy",
    "setup",
    "__version__",
]
