"""Binary records for keys, tokens, ciphertexts and documents.

Envelope: 4-byte magic ``PVLK``, a format version byte, a record type byte,
then the backend name, then the type-specific body.  Multi-byte integers are
big-endian; variable fields are 4-byte length prefixed.  Trees serialize in
preorder, which is also how node identities are assigned, so leaf share
indices survive the round trip unchanged.
"""

from __future__ import annotations

import struct

from .abe import (
    AttributeKey,
    Ciphertext,
    CombinedToken,
    MasterPublicKey,
    MasterSecretKey,
    PartialToken,
)
from .errors import FormatVersionError, MalformedEncodingError
from .groups import backend as get_backend
from .policy import AccessTree, AttributeLabel, Gate, Leaf

MAGIC = b"PVLK"
VERSION = 1

RT_MASTER_PUBLIC = 1
RT_MASTER_SECRET = 2
RT_PARTIAL_TOKEN = 3
RT_COMBINED_TOKEN = 4
RT_CIPHERTEXT = 5
RT_ATTRIBUTE_KEY = 6
RT_EDOCUMENT = 7

_RT_NAMES = {
    RT_MASTER_PUBLIC: "master-public-key",
    RT_MASTER_SECRET: "master-secret-key",
    RT_PARTIAL_TOKEN: "partial-token",
    RT_COMBINED_TOKEN: "combined-token",
    RT_CIPHERTEXT: "ciphertext",
    RT_ATTRIBUTE_KEY: "attribute-key",
    RT_EDOCUMENT: "e-document",
}

_MAX_TREE_DEPTH = 64


def _w_bytes(out: bytearray, data: bytes):
    out += len(data).to_bytes(4, "big")
    out += data


def _w_str(out: bytearray, s: str):
    _w_bytes(out, s.encode())


class _Reader:
    def __init__(self, data: bytes, offset: int = 0):
        self.data = data
        self.off = offset

    def take(self, n: int) -> bytes:
        if self.off + n > len(self.data):
            raise MalformedEncodingError("truncated record")
        chunk = self.data[self.off : self.off + n]
        self.off += n
        return chunk

    def u8(self) -> int:
        return self.take(1)[0]

    def u16(self) -> int:
        return int.from_bytes(self.take(2), "big")

    def u32(self) -> int:
        return int.from_bytes(self.take(4), "big")

    def f64(self) -> float:
        return struct.unpack(">d", self.take(8))[0]

    def bytes_(self) -> bytes:
        return self.take(self.u32())

    def str_(self) -> str:
        try:
            return self.bytes_().decode()
        except UnicodeDecodeError as exc:
            raise MalformedEncodingError("string field is not valid UTF-8") from exc

    def done(self):
        if self.off != len(self.data):
            raise MalformedEncodingError("trailing bytes after record")


# ---- trees ----------------------------------------------------------------------


def _w_tree(out: bytearray, node):
    if isinstance(node, Leaf):
        out.append(1)
        _w_str(out, node.attribute.authority)
        _w_str(out, node.attribute.name)
        return
    out.append(0)
    out.append(1 if node.additive else 0)
    out += node.threshold.to_bytes(2, "big")
    out += len(node.children).to_bytes(2, "big")
    for child in node.children:
        _w_tree(out, child)


def _r_tree(r: _Reader, depth: int = 0):
    if depth > _MAX_TREE_DEPTH:
        raise MalformedEncodingError("policy tree nested too deeply")
    kind = r.u8()
    if kind == 1:
        return Leaf(AttributeLabel(r.str_(), r.str_()))
    if kind != 0:
        raise MalformedEncodingError(f"unknown tree node kind {kind}")
    flags = r.u8()
    if flags not in (0, 1):
        raise MalformedEncodingError(f"unknown gate flags {flags:#x}")
    threshold = r.u16()
    count = r.u16()
    children = tuple(_r_tree(r, depth + 1) for _ in range(count))
    return Gate(threshold, children, additive=bool(flags))


# ---- leaf share components -------------------------------------------------------


def _w_leaf_parts(out: bytearray, ctx, leaf_parts: dict):
    out += len(leaf_parts).to_bytes(4, "big")
    for node_id in sorted(leaf_parts):
        c3, c4 = leaf_parts[node_id]
        out += node_id.to_bytes(4, "big")
        _w_bytes(out, ctx.serialize_source(c3))
        _w_bytes(out, ctx.serialize_source(c4))


def _r_leaf_parts(r: _Reader, ctx, tree: AccessTree) -> dict:
    count = r.u32()
    parts = {}
    for _ in range(count):
        node_id = r.u32()
        c3 = ctx.deserialize_source(r.bytes_())
        c4 = ctx.deserialize_source(r.bytes_())
        parts[node_id] = (c3, c4)
    expected = {node_id for node_id, _ in tree.leaves()}
    if set(parts) != expected:
        raise MalformedEncodingError("leaf components do not match the policy tree")
    return parts


# ---- envelope --------------------------------------------------------------------


def _envelope(rtype: int, backend_name: str, body: bytes) -> bytes:
    out = bytearray(MAGIC)
    out.append(VERSION)
    out.append(rtype)
    _w_str(out, backend_name)
    out += body
    return bytes(out)


def _open(data: bytes, expected: int):
    if len(data) < len(MAGIC) + 2:
        raise MalformedEncodingError("record too short")
    if data[: len(MAGIC)] != MAGIC:
        raise MalformedEncodingError("bad record magic")
    r = _Reader(data, len(MAGIC))
    version = r.u8()
    if version != VERSION:
        raise FormatVersionError(
            f"record format version {version}, expected {VERSION}"
        )
    rtype = r.u8()
    if rtype != expected:
        raise MalformedEncodingError(
            f"expected a {_RT_NAMES.get(expected, expected)} record, "
            f"found {_RT_NAMES.get(rtype, rtype)}"
        )
    ctx = get_backend(r.str_())
    return ctx, r


# ---- master keys ------------------------------------------------------------------


def serialize_master_public(mpk: MasterPublicKey) -> bytes:
    ctx = get_backend(mpk.backend)
    body = bytearray()
    _w_bytes(body, ctx.serialize_source(mpk.g_beta))
    _w_bytes(body, ctx.serialize_target(mpk.egg_alpha))
    return _envelope(RT_MASTER_PUBLIC, mpk.backend, bytes(body))


def load_master_public(data: bytes) -> MasterPublicKey:
    ctx, r = _open(data, RT_MASTER_PUBLIC)
    g_beta = ctx.deserialize_source(r.bytes_())
    egg_alpha = ctx.deserialize_target(r.bytes_())
    r.done()
    return MasterPublicKey(g_beta=g_beta, egg_alpha=egg_alpha, backend=ctx.name)


def serialize_master_secret(msk: MasterSecretKey) -> bytes:
    ctx = get_backend(msk.backend)
    body = bytearray()
    _w_bytes(body, ctx.serialize_scalar(msk.beta))
    _w_bytes(body, ctx.serialize_source(msk.g_alpha))
    return _envelope(RT_MASTER_SECRET, msk.backend, bytes(body))


def load_master_secret(data: bytes) -> MasterSecretKey:
    ctx, r = _open(data, RT_MASTER_SECRET)
    beta = ctx.deserialize_scalar(r.bytes_())
    g_alpha = ctx.deserialize_source(r.bytes_())
    r.done()
    return MasterSecretKey(beta=beta, g_alpha=g_alpha, backend=ctx.name)


# ---- tokens -----------------------------------------------------------------------


def _w_token_body(ctx, tree: AccessTree, c1, c2, leaf_parts: dict) -> bytes:
    body = bytearray()
    _w_tree(body, tree.root)
    _w_bytes(body, ctx.serialize_target(c1))
    _w_bytes(body, ctx.serialize_source(c2))
    _w_leaf_parts(body, ctx, leaf_parts)
    return bytes(body)


def _r_token_body(ctx, r: _Reader):
    tree = AccessTree(_r_tree(r))
    c1 = ctx.deserialize_target(r.bytes_())
    c2 = ctx.deserialize_source(r.bytes_())
    leaf_parts = _r_leaf_parts(r, ctx, tree)
    return tree, c1, c2, leaf_parts


def serialize_partial_token(token: PartialToken) -> bytes:
    ctx = get_backend(token.backend)
    body = _w_token_body(ctx, token.subtree, token.c1, token.c2, token.leaf_parts)
    return _envelope(RT_PARTIAL_TOKEN, token.backend, body)


def load_partial_token(data: bytes) -> PartialToken:
    ctx, r = _open(data, RT_PARTIAL_TOKEN)
    tree, c1, c2, leaf_parts = _r_token_body(ctx, r)
    r.done()
    return PartialToken(
        subtree=tree, c1=c1, c2=c2, leaf_parts=leaf_parts, backend=ctx.name
    )


def serialize_combined_token(token: CombinedToken) -> bytes:
    ctx = get_backend(token.backend)
    body = _w_token_body(ctx, token.tree, token.c1, token.c2, token.leaf_parts)
    return _envelope(RT_COMBINED_TOKEN, token.backend, body)


def load_combined_token(data: bytes) -> CombinedToken:
    ctx, r = _open(data, RT_COMBINED_TOKEN)
    tree, c1, c2, leaf_parts = _r_token_body(ctx, r)
    r.done()
    return CombinedToken(
        tree=tree, c1=c1, c2=c2, leaf_parts=leaf_parts, backend=ctx.name
    )


# ---- ciphertexts ------------------------------------------------------------------


def _w_ciphertext_body(out: bytearray, ct: Ciphertext):
    ctx = get_backend(ct.backend)
    _w_str(out, ct.backend)
    _w_tree(out, ct.tree.root)
    _w_bytes(out, ctx.serialize_target(ct.c1))
    _w_bytes(out, ctx.serialize_source(ct.c2))
    _w_leaf_parts(out, ctx, ct.leaf_parts)
    _w_bytes(out, ct.kdf_tag)
    _w_bytes(out, ct.c5)


def _r_ciphertext_body(r: _Reader) -> Ciphertext:
    ctx = get_backend(r.str_())
    tree = AccessTree(_r_tree(r))
    c1 = ctx.deserialize_target(r.bytes_())
    c2 = ctx.deserialize_source(r.bytes_())
    leaf_parts = _r_leaf_parts(r, ctx, tree)
    kdf_tag = r.bytes_()
    c5 = r.bytes_()
    return Ciphertext(
        tree=tree,
        c1=c1,
        c2=c2,
        leaf_parts=leaf_parts,
        c5=c5,
        kdf_tag=kdf_tag,
        backend=ctx.name,
    )


def serialize_ciphertext(ct: Ciphertext) -> bytes:
    body = bytearray()
    _w_ciphertext_body(body, ct)
    return _envelope(RT_CIPHERTEXT, ct.backend, bytes(body))


def load_ciphertext(data: bytes) -> Ciphertext:
    _, r = _open(data, RT_CIPHERTEXT)
    ct = _r_ciphertext_body(r)
    r.done()
    return ct


# ---- attribute keys ----------------------------------------------------------------


def serialize_attribute_key(key: AttributeKey) -> bytes:
    ctx = get_backend(key.backend)
    body = bytearray()
    _w_str(body, key.holder)
    _w_bytes(body, ctx.serialize_source(key.d))
    body += len(key.per_attr).to_bytes(4, "big")
    for label in sorted(key.per_attr):
        d_j, d_jp = key.per_attr[label]
        _w_str(body, label.authority)
        _w_str(body, label.name)
        _w_bytes(body, ctx.serialize_source(d_j))
        _w_bytes(body, ctx.serialize_source(d_jp))
    return _envelope(RT_ATTRIBUTE_KEY, key.backend, bytes(body))


def load_attribute_key(data: bytes) -> AttributeKey:
    ctx, r = _open(data, RT_ATTRIBUTE_KEY)
    holder = r.str_()
    d = ctx.deserialize_source(r.bytes_())
    count = r.u32()
    per_attr = {}
    for _ in range(count):
        label = AttributeLabel(r.str_(), r.str_())
        d_j = ctx.deserialize_source(r.bytes_())
        d_jp = ctx.deserialize_source(r.bytes_())
        per_attr[label] = (d_j, d_jp)
    r.done()
    return AttributeKey(
        holder=holder,
        issuer_set=frozenset(l.authority for l in per_attr),
        d=d,
        per_attr=per_attr,
        backend=ctx.name,
    )


# ---- e-documents -------------------------------------------------------------------


def serialize_edocument(edoc) -> bytes:
    body = bytearray()
    _w_str(body, edoc.uri.issuer_id)
    _w_str(body, edoc.uri.doc_type)
    _w_str(body, edoc.uri.doc_id)
    _w_ciphertext_body(body, edoc.ciphertext)
    _w_bytes(body, edoc.signature)
    body += struct.pack(">d", edoc.created_at)
    return _envelope(RT_EDOCUMENT, edoc.ciphertext.backend, bytes(body))


def load_edocument(data: bytes):
    from .locker import DocumentURI, EDocument

    _, r = _open(data, RT_EDOCUMENT)
    uri = DocumentURI(r.str_(), r.str_(), r.str_())
    ct = _r_ciphertext_body(r)
    signature = r.bytes_()
    created_at = r.f64()
    r.done()
    return EDocument(uri=uri, ciphertext=ct, signature=signature, created_at=created_at)


# ---- inspection --------------------------------------------------------------------


def describe(data: bytes) -> dict:
    """Summarize any serialized record for display; raises on malformed input."""
    if len(data) < len(MAGIC) + 2 or data[: len(MAGIC)] != MAGIC:
        raise MalformedEncodingError("bad record magic")
    r = _Reader(data, len(MAGIC))
    version = r.u8()
    if version != VERSION:
        raise FormatVersionError(f"record format version {version}, expected {VERSION}")
    rtype = r.u8()
    if rtype not in _RT_NAMES:
        raise MalformedEncodingError(f"unknown record type {rtype}")
    info = {
        "type": _RT_NAMES[rtype],
        "version": version,
        "backend": r.str_(),
        "bytes": len(data),
    }
    if rtype == RT_PARTIAL_TOKEN:
        token = load_partial_token(data)
        info["policy"] = token.subtree.render()
        info["leaves"] = len(token.leaf_parts)
    elif rtype == RT_COMBINED_TOKEN:
        token = load_combined_token(data)
        info["policy"] = token.tree.render()
        info["leaves"] = len(token.leaf_parts)
    elif rtype == RT_CIPHERTEXT:
        ct = load_ciphertext(data)
        info["policy"] = ct.tree.render()
        info["leaves"] = len(ct.leaf_parts)
        info["payload_bytes"] = len(ct.c5)
    elif rtype == RT_ATTRIBUTE_KEY:
        key = load_attribute_key(data)
        info["holder"] = key.holder
        info["issuers"] = ",".join(sorted(key.issuer_set))
        info["attributes"] = ",".join(l.canonical() for l in sorted(key.per_attr))
    elif rtype == RT_EDOCUMENT:
        edoc = load_edocument(data)
        info["uri"] = edoc.uri.render()
        info["policy"] = edoc.ciphertext.tree.render()
        info["payload_bytes"] = len(edoc.ciphertext.c5)
        info["created_at"] = edoc.created_at
    return info
