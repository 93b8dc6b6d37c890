"""Ciphertext-policy ABE with reusable two-party encryption tokens.

The flow: an authority runs `setup`; a subscriber and an issuer each derive a
partial token over their half of the access policy (`gen_partial_token`); the
halves merge once into a reusable combined token (`combine_tokens`); any
number of documents are then encrypted against the token without further
interaction (`encrypt_with_token`).  Decryption keys over attribute sets come
from `keygen`, and `decrypt` recovers the payload when the key's attributes
satisfy the ciphertext's tree.

Blinding structure: a partial token over subtree T with hidden randomness r
carries e(g,g)^(alpha*r), g^(beta*r) and per-leaf shares of r in the
exponent.  Combination multiplies the pairs, which adds the two hidden
secrets; the combined tree's root is therefore the additive ALLOF gate, whose
children recombine with coefficient one.  Encryption re-randomizes every
component with a fresh exponent, so one token never ties two ciphertexts to
the same document key.

The payload itself is wrapped hybrid-style: a random element of the pairing
target group is hashed into an AES-256-GCM key.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Iterable, Optional

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives.ciphers.aead import AESGCM

from .errors import (
    AuthenticationFailureError,
    GroupMismatchError,
    MalformedEncodingError,
    PolicyNotSatisfiedError,
    TokenCombineError,
)
from .groups import Scalar, backend
from .policy import (
    AccessTree,
    AttributeLabel,
    Gate,
    Leaf,
    assign_shares,
    lagrange_coeff,
    select_satisfying_children,
)

KDF_TAG = b"privlocker/doc-key/v1"
_NONCE_BYTES = 12
_GCM_TAG_BYTES = 16


@dataclass(frozen=True)
class MasterSecretKey:
    beta: Scalar
    g_alpha: object
    backend: str


@dataclass(frozen=True)
class MasterPublicKey:
    g_beta: object
    egg_alpha: object
    backend: str

    @property
    def context(self):
        return backend(self.backend)


@dataclass(frozen=True)
class PartialToken:
    """One party's half of an encryption token over its policy subtree."""

    subtree: AccessTree
    c1: object  # e(g,g)^(alpha * r)
    c2: object  # g^(beta * r)
    leaf_parts: dict = field(repr=False)  # node id -> (g^q_y(0), H(attr)^q_y(0))
    backend: str = "bn256"


@dataclass(frozen=True)
class CombinedToken:
    """Reusable two-party token; tree root is the additive ALLOF gate."""

    tree: AccessTree
    c1: object
    c2: object
    leaf_parts: dict = field(repr=False)
    backend: str = "bn256"


@dataclass(frozen=True)
class Ciphertext:
    tree: AccessTree
    c1: object  # e(g,g)^(alpha * (r_s + r_i) * r_ie) * wrap
    c2: object  # g^(beta * (r_s + r_i) * r_ie)
    leaf_parts: dict = field(repr=False)  # node id -> (c3^r_ie, c4^r_ie)
    c5: bytes = b""  # nonce || AES-GCM payload
    kdf_tag: bytes = KDF_TAG
    backend: str = "bn256"


@dataclass(frozen=True)
class AttributeKey:
    holder: str
    issuer_set: frozenset
    d: object  # g^((alpha + r) / beta)
    per_attr: dict = field(repr=False)  # label -> (g^r * H(j)^r_j, g^r_j)
    backend: str = "bn256"

    @property
    def attributes(self) -> frozenset:
        return frozenset(self.per_attr)


def setup(ctx, rng) -> tuple:
    """Generate the master key pair for one authority."""
    alpha = ctx.random_scalar(rng)
    beta = ctx.random_scalar(rng)
    g = ctx.generator()
    msk = MasterSecretKey(beta=beta, g_alpha=g**alpha, backend=ctx.name)
    mpk = MasterPublicKey(
        g_beta=g**beta,
        egg_alpha=ctx.pairing_base() ** alpha,
        backend=ctx.name,
    )
    return msk, mpk


def gen_partial_token(mpk: MasterPublicKey, subtree: AccessTree, rng) -> PartialToken:
    """Derive one party's token half; the hidden randomness never leaves."""
    ctx = mpk.context
    g = ctx.generator()
    r_part = ctx.random_scalar(rng)
    assignment = assign_shares(subtree, r_part, rng, ctx.order)
    leaf_parts = {}
    for node_id, label in subtree.leaves():
        share = assignment.shares[node_id]
        leaf_parts[node_id] = (
            g**share,
            ctx.hash_to_group(label.canonical().encode()) ** share,
        )
    return PartialToken(
        subtree=subtree,
        c1=mpk.egg_alpha**r_part,
        c2=mpk.g_beta**r_part,
        leaf_parts=leaf_parts,
        backend=ctx.name,
    )


def combine_tokens(
    subscriber: PartialToken, issuer: PartialToken, root_gate: str = "AND"
) -> CombinedToken:
    """Merge the two token halves under a root that requires both.

    The component products add the parties' hidden secrets, so the root can
    only be the additive gate: an OR root would need a ciphertext divisible
    by one party's contribution alone, which the products cannot provide.
    """
    if root_gate != "AND":
        raise TokenCombineError(
            f"root gate {root_gate!r} unsupported: combined components "
            "multiply, which shares the secret across both subtrees"
        )
    if subscriber.backend != issuer.backend:
        raise GroupMismatchError("token halves come from different backends")
    if subscriber.c1 == issuer.c1 and subscriber.c2 == issuer.c2:
        raise TokenCombineError("cannot combine a token half with itself")
    root = Gate(
        2, (subscriber.subtree.root, issuer.subtree.root), additive=True
    )
    offset_sub = 1
    offset_iss = 1 + subscriber.subtree.size
    leaf_parts = {
        nid + offset_sub: parts for nid, parts in subscriber.leaf_parts.items()
    }
    leaf_parts.update(
        {nid + offset_iss: parts for nid, parts in issuer.leaf_parts.items()}
    )
    return CombinedToken(
        tree=AccessTree(root),
        c1=subscriber.c1 * issuer.c1,
        c2=subscriber.c2 * issuer.c2,
        leaf_parts=leaf_parts,
        backend=subscriber.backend,
    )


def _derive_key(ctx, kdf_tag: bytes, wrap_element) -> bytes:
    material = kdf_tag + b"|" + ctx.name.encode() + b"|" + ctx.serialize_target(wrap_element)
    return hashlib.sha256(material).digest()


def encrypt_with_token(
    mpk: MasterPublicKey, token: CombinedToken, message: bytes, rng
) -> Ciphertext:
    """Encrypt without talking to either token party."""
    if mpk.backend != token.backend:
        raise GroupMismatchError("token and master key come from different backends")
    ctx = mpk.context
    r_ie = ctx.random_scalar(rng)
    wrap = ctx.pairing_base() ** ctx.random_scalar(rng)
    key = _derive_key(ctx, KDF_TAG, wrap)
    nonce = rng.randbytes(_NONCE_BYTES)
    c5 = nonce + AESGCM(key).encrypt(nonce, message, None)
    leaf_parts = {
        nid: (c3**r_ie, c4**r_ie) for nid, (c3, c4) in token.leaf_parts.items()
    }
    return Ciphertext(
        tree=token.tree,
        c1=(token.c1**r_ie) * wrap,
        c2=token.c2**r_ie,
        leaf_parts=leaf_parts,
        c5=c5,
        kdf_tag=KDF_TAG,
        backend=ctx.name,
    )


def keygen(
    msk: MasterSecretKey,
    mpk: MasterPublicKey,
    holder: str,
    attributes: Iterable[AttributeLabel],
    rng,
) -> AttributeKey:
    """Issue a decryption key over the holder's attribute set."""
    if msk.backend != mpk.backend:
        raise GroupMismatchError("master key halves come from different backends")
    ctx = mpk.context
    g = ctx.generator()
    labels = sorted(set(attributes))
    r = ctx.random_scalar(rng)
    g_r = g**r
    d = (msk.g_alpha * g_r) ** msk.beta.inverse()
    per_attr = {}
    for label in labels:
        r_j = ctx.random_scalar(rng)
        h_j = ctx.hash_to_group(label.canonical().encode())
        per_attr[label] = (g_r * h_j**r_j, g**r_j)
    return AttributeKey(
        holder=holder,
        issuer_set=frozenset(l.authority for l in labels),
        d=d,
        per_attr=per_attr,
        backend=ctx.name,
    )


def decrypt_node(
    ct: Ciphertext, key: AttributeKey, node_id: int
) -> Optional[object]:
    """Recursive share recombination; None when the subtree is unsatisfied.

    At a satisfied leaf for attribute j with share q:
    pair(d_j, c3) / pair(d_j', c4) = e(g,g)^(r * r_ie * q), because the
    H(j)-dependent factors cancel.  Threshold gates recombine children by
    Lagrange coefficients over the chosen index set; the additive root gate
    multiplies both children directly.
    """
    ctx = backend(ct.backend)
    node = ct.tree.node(node_id)
    if isinstance(node, Leaf):
        entry = key.per_attr.get(node.attribute)
        if entry is None:
            return None
        d_j, d_jp = entry
        c3, c4 = ct.leaf_parts[node_id]
        return ctx.pair(d_j, c3) / ctx.pair(d_jp, c4)
    results = {}
    by_index = {}
    for child_id, index in ct.tree.children(node_id):
        value = decrypt_node(ct, key, child_id)
        results[index] = value
        by_index[index] = value
    chosen = select_satisfying_children(node, results)
    if chosen is None:
        return None
    if node.additive:
        out = ctx.target_identity()
        for index in chosen:
            out = out * by_index[index]
        return out
    out = ctx.target_identity()
    for index in chosen:
        coeff = lagrange_coeff(index, chosen, ctx.order)
        out = out * by_index[index] ** coeff
    return out


def decrypt(ct: Ciphertext, key: AttributeKey) -> bytes:
    """Unblind the wrapped key and open the authenticated payload."""
    if ct.backend != key.backend:
        raise GroupMismatchError("ciphertext and key come from different backends")
    if len(ct.c5) < _NONCE_BYTES + _GCM_TAG_BYTES:
        raise MalformedEncodingError("payload shorter than nonce plus tag")
    ctx = backend(ct.backend)
    recombined = decrypt_node(ct, key, 0)
    if recombined is None:
        raise PolicyNotSatisfiedError(
            "key attributes do not satisfy the document policy"
        )
    blind = ctx.pair(ct.c2, key.d) / recombined
    wrap = ct.c1 / blind
    sym_key = _derive_key(ctx, ct.kdf_tag, wrap)
    nonce, body = ct.c5[:_NONCE_BYTES], ct.c5[_NONCE_BYTES:]
    try:
        return AESGCM(sym_key).decrypt(nonce, body, None)
    except InvalidTag as exc:
        raise AuthenticationFailureError(
            "document payload failed authentication"
        ) from exc
