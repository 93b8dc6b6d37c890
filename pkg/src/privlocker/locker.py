"""Digital locker service: issuers deposit encrypted documents, requesters fetch them.

The service owns the master key pair and plays three bookkeeping roles at
once: an attribute registry (issuers push attribute grants for identities),
a key store (attribute keys generated for requesters, deduplicated by
issuer coverage), and a document store addressed by URI.  Combined
encryption tokens are cached per (subscriber, issuer, policy-pair) so that
repeat issuance under the same policies skips the two-party handshake.

Everything lives in memory and is mirrored to a handful of checksummed
store files under ``store_dir``; writes go through a temp file and an
atomic rename so a crash never leaves a half-written store behind.
"""

from __future__ import annotations

import hashlib
import os
import secrets
import struct
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Protocol

from . import abe, records
from .abe import AttributeKey, Ciphertext, CombinedToken, MasterPublicKey, MasterSecretKey
from .errors import (
    AuthenticationFailureError,
    ChecksumError,
    DuplicateIssuerError,
    FormatVersionError,
    MalformedEncodingError,
    MissingAttributesError,
    NoCoveringKeyError,
    NotImplementedFlow,
    UnknownIdentityError,
    UnknownIssuerError,
    UnknownUriError,
    ValidationFailure,
    WrongDocTypeError,
)
from .groups import backend
from .policy import AttributeLabel, parse_policy, valid_identifier
from .records import _Reader, _w_bytes, _w_str

DOC_TYPE_PRIVATE = "PRIV"

_STORE_MAGIC = b"PLKS"
_STORE_VERSION = 1

_KIND_MASTER = 1
_KIND_ISSUERS = 2
_KIND_REGISTRY = 3
_KIND_KEYS = 4
_KIND_TOKENS = 5
_KIND_DOCS = 6

_STORE_FILES = {
    _KIND_MASTER: "master.plks",
    _KIND_ISSUERS: "issuers.plks",
    _KIND_REGISTRY: "registry.plks",
    _KIND_KEYS: "keys.plks",
    _KIND_TOKENS: "tokens.plks",
    _KIND_DOCS: "documents.plks",
}

_KIND_NAMES = {
    _KIND_MASTER: "master",
    _KIND_ISSUERS: "issuers",
    _KIND_REGISTRY: "registry",
    _KIND_KEYS: "keys",
    _KIND_TOKENS: "tokens",
    _KIND_DOCS: "documents",
}


def describe_store(data: bytes) -> dict:
    """Header view of a store file: kind, version, size, checksum state."""
    if len(data) < 6 or data[:4] != _STORE_MAGIC:
        raise MalformedEncodingError("not a locker store file")
    kind = data[5]
    plen = int.from_bytes(data[6:14], "big") if len(data) >= 14 else -1
    intact = (
        len(data) == 14 + plen + 32
        and hashlib.sha256(data[: 14 + plen]).digest() == data[14 + plen :]
    )
    return {
        "type": "store/" + _KIND_NAMES.get(kind, str(kind)),
        "version": data[4],
        "payload_bytes": plen,
        "checksum": "ok" if intact else "BAD",
    }


@dataclass(frozen=True)
class DocumentURI:
    """Locator of a stored document: ``issuer::doctype::docid``."""

    issuer_id: str
    doc_type: str
    doc_id: str

    def __post_init__(self) -> None:
        for part in (self.issuer_id, self.doc_type, self.doc_id):
            if not valid_identifier(part):
                raise ValidationFailure(f"invalid URI component {part!r}")

    def render(self) -> str:
        return f"{self.issuer_id}::{self.doc_type}::{self.doc_id}"

    @classmethod
    def parse(cls, text: str) -> "DocumentURI":
        parts = text.split("::")
        if len(parts) != 3:
            raise ValidationFailure(
                "document URI must have the form issuer::doctype::docid"
            )
        return cls(*parts)

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class EDocument:
    """Encrypted document as stored and served: ciphertext plus provenance."""

    uri: DocumentURI
    ciphertext: Ciphertext
    signature: bytes
    created_at: float

    def signed_payload(self) -> bytes:
        return self.uri.render().encode() + records.serialize_ciphertext(self.ciphertext)


class RequestAuthenticator(Protocol):
    """Hook for vouching for stored documents and verifying them on fetch."""

    def sign(self, payload: bytes) -> bytes: ...

    def verify(self, payload: bytes, signature: bytes) -> bool: ...


class NullAuthenticator:
    """Default authenticator: empty signatures, everything verifies."""

    def sign(self, payload: bytes) -> bytes:
        return b""

    def verify(self, payload: bytes, signature: bytes) -> bool:
        return True


@dataclass
class IssueResult:
    uri: DocumentURI
    token_cached: bool
    created_at: float


@dataclass
class KeyResult:
    handle: str
    created: bool
    issuer_set: frozenset[str]
    attributes: frozenset[AttributeLabel]
    evicted: tuple[str, ...] = ()


@dataclass
class _StoredKey:
    handle: str
    key: AttributeKey


@dataclass
class _TokenEntry:
    fingerprint: str
    token: CombinedToken


# registry entry: label -> (pushing issuer, updated_at)
_Grant = tuple[str, float]


def _write_store(path: Path, kind: int, payload: bytes) -> None:
    head = _STORE_MAGIC + bytes([_STORE_VERSION, kind]) + len(payload).to_bytes(8, "big")
    digest = hashlib.sha256(head + payload).digest()
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(head + payload + digest)
    os.replace(tmp, path)


def _read_store(path: Path, kind: int) -> bytes:
    data = path.read_bytes()
    if len(data) < 4 or data[:4] != _STORE_MAGIC:
        raise MalformedEncodingError(f"{path.name}: not a locker store file")
    if len(data) < 6:
        raise ChecksumError(f"{path.name}: store file truncated")
    if data[4] != _STORE_VERSION:
        raise FormatVersionError(
            f"{path.name}: store version {data[4]}, expected {_STORE_VERSION}"
        )
    if data[5] != kind:
        raise MalformedEncodingError(
            f"{path.name}: store kind {data[5]}, expected {kind}"
        )
    if len(data) < 14 + 32:
        raise ChecksumError(f"{path.name}: store file truncated")
    plen = int.from_bytes(data[6:14], "big")
    if len(data) != 14 + plen + 32:
        raise ChecksumError(f"{path.name}: store file truncated")
    payload = data[14 : 14 + plen]
    if hashlib.sha256(data[: 14 + plen]).digest() != data[14 + plen :]:
        raise ChecksumError(f"{path.name}: store file checksum mismatch")
    return payload


class LockerService:
    """In-process locker: master authority, registry, key store and documents."""

    def __init__(
        self,
        store_dir: str | Path,
        backend_name: str = "bn256",
        rng=None,
        authenticator: RequestAuthenticator | None = None,
        autosave: bool = True,
    ) -> None:
        self.store_dir = Path(store_dir)
        self.store_dir.mkdir(parents=True, exist_ok=True)
        self._rng = rng if rng is not None else secrets.SystemRandom()
        self._auth: RequestAuthenticator = authenticator or NullAuthenticator()
        self._autosave = autosave
        self._lock = threading.RLock()

        self._backend_name = backend_name
        self._msk: MasterSecretKey | None = None
        self._mpk: MasterPublicKey | None = None
        self._issuers: dict[str, frozenset[str]] = {}
        self._registry: dict[str, dict[AttributeLabel, _Grant]] = {}
        self._keys: dict[str, list[_StoredKey]] = {}
        self._tokens: dict[tuple[str, str, bytes], _TokenEntry] = {}
        self._docs: dict[str, EDocument] = {}
        self.token_handshakes = 0
        self.token_cache_hits = 0

        self.load()

    # ------------------------------------------------------------------
    # persistence

    def _path(self, kind: int) -> Path:
        return self.store_dir / _STORE_FILES[kind]

    def load(self) -> None:
        """Reload every store file, replacing in-memory state only if all parse."""
        with self._lock:
            staged: dict[str, object] = {}

            path = self._path(_KIND_MASTER)
            if path.exists():
                r = _Reader(_read_store(path, _KIND_MASTER))
                msk = records.load_master_secret(r.bytes_())
                mpk = records.load_master_public(r.bytes_())
                r.done()
                staged["msk"], staged["mpk"] = msk, mpk
                staged["backend"] = mpk.backend

            path = self._path(_KIND_ISSUERS)
            if path.exists():
                r = _Reader(_read_store(path, _KIND_ISSUERS))
                issuers: dict[str, frozenset[str]] = {}
                for _ in range(r.u32()):
                    issuer_id = r.str_()
                    names = frozenset(r.str_() for _ in range(r.u32()))
                    issuers[issuer_id] = names
                r.done()
                staged["issuers"] = issuers

            path = self._path(_KIND_REGISTRY)
            if path.exists():
                r = _Reader(_read_store(path, _KIND_REGISTRY))
                registry: dict[str, dict[AttributeLabel, _Grant]] = {}
                for _ in range(r.u32()):
                    identity = r.str_()
                    entry: dict[AttributeLabel, _Grant] = {}
                    for _ in range(r.u32()):
                        label = AttributeLabel(r.str_(), r.str_())
                        entry[label] = (r.str_(), r.f64())
                    registry[identity] = entry
                r.done()
                staged["registry"] = registry

            path = self._path(_KIND_KEYS)
            if path.exists():
                r = _Reader(_read_store(path, _KIND_KEYS))
                keys: dict[str, list[_StoredKey]] = {}
                for _ in range(r.u32()):
                    identity = r.str_()
                    stored = []
                    for _ in range(r.u32()):
                        handle = r.str_()
                        stored.append(_StoredKey(handle, records.load_attribute_key(r.bytes_())))
                    keys[identity] = stored
                r.done()
                staged["keys"] = keys

            path = self._path(_KIND_TOKENS)
            if path.exists():
                r = _Reader(_read_store(path, _KIND_TOKENS))
                handshakes = r.u32()
                hits = r.u32()
                tokens: dict[tuple[str, str, bytes], _TokenEntry] = {}
                for _ in range(r.u32()):
                    sub = r.str_()
                    iss = r.str_()
                    policy_hash = r.bytes_()
                    fingerprint = r.str_()
                    token = records.load_combined_token(r.bytes_())
                    tokens[(sub, iss, policy_hash)] = _TokenEntry(fingerprint, token)
                r.done()
                staged["tokens"] = (handshakes, hits, tokens)

            path = self._path(_KIND_DOCS)
            if path.exists():
                r = _Reader(_read_store(path, _KIND_DOCS))
                docs: dict[str, EDocument] = {}
                for _ in range(r.u32()):
                    doc = records.load_edocument(r.bytes_())
                    docs[doc.uri.render()] = doc
                r.done()
                staged["docs"] = docs

            # All files parsed; commit.
            if "msk" in staged:
                self._msk = staged["msk"]  # type: ignore[assignment]
                self._mpk = staged["mpk"]  # type: ignore[assignment]
                self._backend_name = staged["backend"]  # type: ignore[assignment]
            self._issuers = staged.get("issuers", self._issuers)  # type: ignore[assignment]
            self._registry = staged.get("registry", self._registry)  # type: ignore[assignment]
            self._keys = staged.get("keys", self._keys)  # type: ignore[assignment]
            if "tokens" in staged:
                self.token_handshakes, self.token_cache_hits, self._tokens = staged["tokens"]  # type: ignore[assignment]
            self._docs = staged.get("docs", self._docs)  # type: ignore[assignment]

    def save(self) -> None:
        """Write every store file (atomic per file)."""
        with self._lock:
            if self._msk is not None and self._mpk is not None:
                out = bytearray()
                _w_bytes(out, records.serialize_master_secret(self._msk))
                _w_bytes(out, records.serialize_master_public(self._mpk))
                _write_store(self._path(_KIND_MASTER), _KIND_MASTER, bytes(out))

            out = bytearray()
            out += len(self._issuers).to_bytes(4, "big")
            for issuer_id in sorted(self._issuers):
                _w_str(out, issuer_id)
                names = sorted(self._issuers[issuer_id])
                out += len(names).to_bytes(4, "big")
                for name in names:
                    _w_str(out, name)
            _write_store(self._path(_KIND_ISSUERS), _KIND_ISSUERS, bytes(out))

            out = bytearray()
            out += len(self._registry).to_bytes(4, "big")
            for identity in sorted(self._registry):
                _w_str(out, identity)
                entry = self._registry[identity]
                out += len(entry).to_bytes(4, "big")
                for label in sorted(entry):
                    source, ts = entry[label]
                    _w_str(out, label.authority)
                    _w_str(out, label.name)
                    _w_str(out, source)
                    out += struct.pack(">d", ts)
            _write_store(self._path(_KIND_REGISTRY), _KIND_REGISTRY, bytes(out))

            out = bytearray()
            out += len(self._keys).to_bytes(4, "big")
            for identity in sorted(self._keys):
                _w_str(out, identity)
                stored = self._keys[identity]
                out += len(stored).to_bytes(4, "big")
                for sk in stored:
                    _w_str(out, sk.handle)
                    _w_bytes(out, records.serialize_attribute_key(sk.key))
            _write_store(self._path(_KIND_KEYS), _KIND_KEYS, bytes(out))

            out = bytearray()
            out += self.token_handshakes.to_bytes(4, "big")
            out += self.token_cache_hits.to_bytes(4, "big")
            out += len(self._tokens).to_bytes(4, "big")
            for (sub, iss, policy_hash) in sorted(self._tokens):
                entry = self._tokens[(sub, iss, policy_hash)]
                _w_str(out, sub)
                _w_str(out, iss)
                _w_bytes(out, policy_hash)
                _w_str(out, entry.fingerprint)
                _w_bytes(out, records.serialize_combined_token(entry.token))
            _write_store(self._path(_KIND_TOKENS), _KIND_TOKENS, bytes(out))

            out = bytearray()
            out += len(self._docs).to_bytes(4, "big")
            for uri in sorted(self._docs):
                _w_bytes(out, records.serialize_edocument(self._docs[uri]))
            _write_store(self._path(_KIND_DOCS), _KIND_DOCS, bytes(out))

    def _saved(self) -> None:
        if self._autosave:
            self.save()

    # ------------------------------------------------------------------
    # setup and registration

    def setup(self) -> bool:
        """Create the master key pair if absent.  Returns True when created."""
        with self._lock:
            if self._msk is not None:
                return False
            ctx = backend(self._backend_name)
            self._msk, self._mpk = abe.setup(ctx, self._rng)
            self._saved()
            return True

    def _require_setup(self) -> tuple[MasterSecretKey, MasterPublicKey]:
        if self._msk is None or self._mpk is None:
            raise ValidationFailure("locker has no master key yet; run setup first")
        return self._msk, self._mpk

    def register_issuer(self, issuer_id: str, catalog: Iterable[str]) -> frozenset[str]:
        with self._lock:
            if not valid_identifier(issuer_id):
                raise ValidationFailure(f"invalid issuer id {issuer_id!r}")
            if issuer_id in self._issuers:
                raise DuplicateIssuerError(f"issuer {issuer_id!r} already registered")
            names = frozenset(catalog)
            for name in names:
                if not valid_identifier(name):
                    raise ValidationFailure(f"invalid attribute name {name!r}")
            self._issuers[issuer_id] = names
            self._saved()
            return names

    def issuer_catalog(self, issuer_id: str) -> frozenset[str]:
        with self._lock:
            try:
                return self._issuers[issuer_id]
            except KeyError:
                raise UnknownIssuerError(f"issuer {issuer_id!r} not registered") from None

    def list_issuers(self) -> dict[str, frozenset[str]]:
        with self._lock:
            return dict(self._issuers)

    def _require_issuer(self, issuer_id: str) -> None:
        if issuer_id not in self._issuers:
            raise UnknownIssuerError(f"issuer {issuer_id!r} not registered")

    def _require_identity(self, identity: str) -> dict[AttributeLabel, _Grant]:
        try:
            return self._registry[identity]
        except KeyError:
            raise UnknownIdentityError(f"identity {identity!r} not known") from None

    # ------------------------------------------------------------------
    # attribute registry

    def push_attrs(self, issuer_id: str, identity: str, names: Iterable[str]) -> frozenset[AttributeLabel]:
        """Record attribute grants for ``identity``, as pushed by ``issuer_id``.

        An empty push still registers the identity.  Re-pushing an existing
        label refreshes its timestamp; the latest push wins.
        """
        with self._lock:
            self._require_issuer(issuer_id)
            if not identity or not valid_identifier(identity):
                raise ValidationFailure(f"invalid identity {identity!r}")
            catalog = self._issuers[issuer_id]
            labels = []
            for name in names:
                if name not in catalog:
                    raise ValidationFailure(
                        f"attribute {name!r} is not in the catalog of issuer {issuer_id!r}"
                    )
                labels.append(AttributeLabel(issuer_id, name))
            entry = self._registry.setdefault(identity, {})
            now = time.time()
            for label in labels:
                prior = entry.get(label)
                if prior is None or now >= prior[1]:
                    entry[label] = (issuer_id, now)
            self._saved()
            return frozenset(entry)

    def pull_attrs(self, identity: str) -> frozenset[AttributeLabel]:
        with self._lock:
            return frozenset(self._require_identity(identity))

    # ------------------------------------------------------------------
    # tokens

    def _policy_hash(self, subscriber_tree, issuer_tree) -> bytes:
        text = subscriber_tree.render() + "\n" + issuer_tree.render()
        return hashlib.sha256(text.encode()).digest()

    def _token_for(
        self, subscriber: str, issuer_id: str, policy_subscriber: str, policy_issuer: str
    ) -> tuple[_TokenEntry, bool]:
        msk, mpk = self._require_setup()
        self._require_issuer(issuer_id)
        self._require_identity(subscriber)
        tree_s = parse_policy(policy_subscriber)
        tree_i = parse_policy(policy_issuer)
        cache_key = (subscriber, issuer_id, self._policy_hash(tree_s, tree_i))
        entry = self._tokens.get(cache_key)
        if entry is not None:
            self.token_cache_hits += 1
            return entry, True
        part_s = abe.gen_partial_token(mpk, tree_s, self._rng)
        part_i = abe.gen_partial_token(mpk, tree_i, self._rng)
        token = abe.combine_tokens(part_s, part_i)
        fingerprint = hashlib.sha256(records.serialize_combined_token(token)).hexdigest()[:16]
        entry = _TokenEntry(fingerprint, token)
        self._tokens[cache_key] = entry
        self.token_handshakes += 1
        return entry, False

    def prepare_token(
        self, subscriber: str, issuer_id: str, policy_subscriber: str, policy_issuer: str
    ) -> tuple[str, bool]:
        """Run (or reuse) the two-party token handshake.

        Returns the token fingerprint and whether it came from the cache.
        """
        with self._lock:
            entry, cached = self._token_for(subscriber, issuer_id, policy_subscriber, policy_issuer)
            self._saved()
            return entry.fingerprint, cached

    # ------------------------------------------------------------------
    # documents

    def issue_priv_document(
        self,
        issuer_id: str,
        subscriber: str,
        policy_issuer: str,
        policy_subscriber: str,
        document: bytes,
    ) -> IssueResult:
        """Encrypt ``document`` under the combined policy and store it."""
        with self._lock:
            if not document:
                raise ValidationFailure("refusing to store an empty document")
            _, mpk = self._require_setup()
            entry, cached = self._token_for(
                subscriber, issuer_id, policy_subscriber, policy_issuer
            )
            ciphertext = abe.encrypt_with_token(mpk, entry.token, document, self._rng)
            while True:
                doc_id = self._rng.randbytes(16).hex()
                uri = DocumentURI(issuer_id, DOC_TYPE_PRIVATE, doc_id)
                if uri.render() not in self._docs:
                    break
            created_at = time.time()
            payload = uri.render().encode() + records.serialize_ciphertext(ciphertext)
            doc = EDocument(uri, ciphertext, self._auth.sign(payload), created_at)
            self._docs[uri.render()] = doc
            self._saved()
            return IssueResult(uri=uri, token_cached=cached, created_at=created_at)

    def get_edocument(self, uri: str | DocumentURI) -> EDocument:
        with self._lock:
            if isinstance(uri, str):
                uri = DocumentURI.parse(uri)
            doc = self._docs.get(uri.render())
            if doc is None:
                raise UnknownUriError(f"no document stored at {uri.render()}")
            return doc

    def fetch_priv_doc(self, requester: str, uri: str | DocumentURI) -> bytes:
        """Decrypt a stored document with the requester's best covering key."""
        with self._lock:
            self._require_setup()
            if isinstance(uri, str):
                uri = DocumentURI.parse(uri)
            if uri.doc_type != DOC_TYPE_PRIVATE:
                raise WrongDocTypeError(
                    f"fetch handles {DOC_TYPE_PRIVATE} documents, not {uri.doc_type!r}"
                )
            self._require_identity(requester)
            doc = self._docs.get(uri.render())
            if doc is None:
                raise UnknownUriError(f"no document stored at {uri.render()}")
            if not self._auth.verify(doc.signed_payload(), doc.signature):
                raise AuthenticationFailureError(
                    f"stored document {uri.render()} failed signature verification"
                )
            key = self._covering_key(requester, doc.ciphertext.tree.issuers)
            return abe.decrypt(doc.ciphertext, key)

    def _covering_key(self, identity: str, needed: frozenset[str]) -> AttributeKey:
        covering = [
            sk
            for sk in self._keys.get(identity, [])
            if sk.key.issuer_set >= needed
        ]
        if not covering:
            raise NoCoveringKeyError(
                f"{identity!r} holds no attribute key covering issuers "
                f"{{{', '.join(sorted(needed))}}}"
            )
        best = min(covering, key=lambda sk: (len(sk.key.issuer_set), tuple(sorted(sk.key.issuer_set))))
        return best.key

    # ------------------------------------------------------------------
    # attribute keys

    def gen_ab_pvt_key(self, identity: str, issuers: Iterable[str]) -> KeyResult:
        """Generate (or reuse) an attribute key over the identity's grants.

        A stored key whose issuer set is a superset already decrypts
        everything the requested key would, so it is returned instead of
        minting a redundant one.  Conversely a fresh key evicts stored keys
        over proper subsets of its issuer set.
        """
        with self._lock:
            msk, mpk = self._require_setup()
            entry = self._require_identity(identity)
            issuer_set = frozenset(issuers)
            if not issuer_set:
                raise ValidationFailure("key generation needs at least one issuer")
            for issuer_id in issuer_set:
                self._require_issuer(issuer_id)
            labels = frozenset(lab for lab in entry if lab.authority in issuer_set)
            for issuer_id in issuer_set:
                if not any(lab.authority == issuer_id for lab in labels):
                    raise MissingAttributesError(
                        f"identity {identity!r} has no attributes from issuer {issuer_id!r}"
                    )
            stored = self._keys.setdefault(identity, [])
            for sk in stored:
                if sk.key.issuer_set > issuer_set:
                    return KeyResult(
                        handle=sk.handle,
                        created=False,
                        issuer_set=sk.key.issuer_set,
                        attributes=sk.key.attributes,
                    )
            key = abe.keygen(msk, mpk, identity, labels, self._rng)
            handle = hashlib.sha256(records.serialize_attribute_key(key)).hexdigest()[:16]
            evicted = tuple(
                sk.handle for sk in stored if sk.key.issuer_set <= issuer_set
            )
            stored[:] = [sk for sk in stored if sk.handle not in evicted]
            stored.append(_StoredKey(handle, key))
            self._saved()
            return KeyResult(
                handle=handle,
                created=True,
                issuer_set=issuer_set,
                attributes=labels,
                evicted=evicted,
            )

    def export_attribute_key(self, identity: str, handle: str) -> AttributeKey:
        with self._lock:
            for sk in self._keys.get(identity, []):
                if sk.handle == handle:
                    return sk.key
            raise ValidationFailure(f"identity {identity!r} holds no key {handle!r}")

    def list_keys(self, identity: str) -> list[tuple[str, frozenset[str]]]:
        with self._lock:
            self._require_identity(identity)
            return [(sk.handle, sk.key.issuer_set) for sk in self._keys.get(identity, [])]

    # ------------------------------------------------------------------
    # unimplemented flows

    def pull_doc(self, requester: str, uri: str) -> bytes:
        raise NotImplementedFlow("only the private document flow is implemented")

    def pull_uri(self, requester: str, **criteria) -> list[str]:
        raise NotImplementedFlow("only the private document flow is implemented")

    # ------------------------------------------------------------------

    def stats(self) -> dict:
        with self._lock:
            return {
                "backend": self._backend_name,
                "setup": self._msk is not None,
                "issuers": len(self._issuers),
                "identities": len(self._registry),
                "keys": sum(len(v) for v in self._keys.values()),
                "documents": len(self._docs),
                "tokens_cached": len(self._tokens),
                "token_handshakes": self.token_handshakes,
                "token_cache_hits": self.token_cache_hits,
            }
