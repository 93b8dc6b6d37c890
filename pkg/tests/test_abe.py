"""Core encryption scheme tests, mostly on the transparent toy backend."""

import dataclasses
import random

import pytest

from privlocker.abe import (
    AttributeKey,
    PartialToken,
    combine_tokens,
    decrypt,
    decrypt_node,
    encrypt_with_token,
    gen_partial_token,
    keygen,
    setup,
)
from privlocker.errors import (
    AuthenticationFailureError,
    GroupMismatchError,
    MalformedEncodingError,
    PolicyNotSatisfiedError,
    TokenCombineError,
)
from privlocker.groups.toy import ORDER
from privlocker.policy import AttributeLabel, parse_policy


def lab(text):
    return AttributeLabel.parse(text)


class FixedRng:
    """Degenerate rng: every scalar draw is 1, every byte draw is zero."""

    def randrange(self, a, b=None):
        return a if b is not None else 0

    def randbytes(self, n):
        return b"\x00" * n


@pytest.fixture
def toy_keys(toy, rng):
    msk, mpk = setup(toy, rng)
    return msk, mpk


def make_token(mpk, rng, sub_policy="(i1/a OR i1/b)", iss_policy="i2/d"):
    tok_s = gen_partial_token(mpk, parse_policy(sub_policy), rng)
    tok_i = gen_partial_token(mpk, parse_policy(iss_policy), rng)
    return combine_tokens(tok_s, tok_i)


# ---- structure of generated material ---------------------------------------------


def test_setup_exponents(toy, rng):
    msk, mpk = setup(toy, rng)
    alpha = msk.g_alpha.exponent
    assert mpk.g_beta.exponent == int(msk.beta)
    assert mpk.egg_alpha.exponent == alpha


def test_partial_token_structure(toy, toy_keys, rng):
    msk, mpk = toy_keys
    tree = parse_policy("(i1/a AND i1/b)")
    tok = gen_partial_token(mpk, tree, rng)
    alpha = msk.g_alpha.exponent
    beta = int(msk.beta)
    # c2 = g^(beta*r) pins down the hidden r; c1 must be e(g,g)^(alpha*r)
    r = tok.c2.exponent * pow(beta, -1, ORDER) % ORDER
    assert tok.c1.exponent == alpha * r % ORDER
    # leaf parts carry the same share exponent on both components
    for nid, label in tree.leaves():
        c3, c4 = tok.leaf_parts[nid]
        share = c3.exponent
        h = toy.hash_to_group(label.canonical().encode()).exponent
        assert c4.exponent == h * share % ORDER
    # the two leaf shares obey the 2-of-2 identity 2*q(1) - q(2) = r
    q1 = tok.leaf_parts[1][0].exponent
    q2 = tok.leaf_parts[2][0].exponent
    assert (2 * q1 - q2) % ORDER == r


def test_partial_token_hides_randomness(toy_keys, rng):
    _, mpk = toy_keys
    tok = gen_partial_token(mpk, parse_policy("i1/a"), rng)
    scalar_fields = [
        f.name
        for f in dataclasses.fields(PartialToken)
        if getattr(tok, f.name).__class__.__name__ == "Scalar"
    ]
    assert scalar_fields == []


def test_combine_offsets_and_products(toy, toy_keys, rng):
    msk, mpk = toy_keys
    tree_s = parse_policy("(i1/a OR i1/b)")
    tree_i = parse_policy("i2/d")
    tok_s = gen_partial_token(mpk, tree_s, rng)
    tok_i = gen_partial_token(mpk, tree_i, rng)
    combined = combine_tokens(tok_s, tok_i)

    root = combined.tree.root
    assert root.additive and root.threshold == 2 and len(root.children) == 2
    assert combined.tree.render() == "ALLOF((i1/a OR i1/b), i2/d)"
    # component-wise products add the two hidden secrets
    assert combined.c1.exponent == (tok_s.c1.exponent + tok_i.c1.exponent) % ORDER
    assert combined.c2.exponent == (tok_s.c2.exponent + tok_i.c2.exponent) % ORDER
    # subscriber leaves shift by +1, issuer leaves by +1+size(subscriber tree)
    for nid, (c3, _) in tok_s.leaf_parts.items():
        assert combined.leaf_parts[nid + 1][0].exponent == c3.exponent
    for nid, (c3, _) in tok_i.leaf_parts.items():
        assert combined.leaf_parts[nid + 1 + tree_s.size][0].exponent == c3.exponent
    assert len(combined.leaf_parts) == len(tok_s.leaf_parts) + len(tok_i.leaf_parts)


def test_combine_rejections(toy, bn, rng):
    _, mpk_toy = setup(toy, rng)
    _, mpk_bn = setup(bn, rng)
    tok = gen_partial_token(mpk_toy, parse_policy("i1/a"), rng)
    other = gen_partial_token(mpk_toy, parse_policy("i2/d"), rng)
    with pytest.raises(TokenCombineError):
        combine_tokens(tok, tok)  # self-combination
    with pytest.raises(TokenCombineError):
        combine_tokens(tok, other, root_gate="OR")
    tok_bn = gen_partial_token(mpk_bn, parse_policy("i2/d"), rng)
    with pytest.raises(GroupMismatchError):
        combine_tokens(tok, tok_bn)


def test_keygen_structure(toy, toy_keys, rng):
    msk, mpk = toy_keys
    labels = [lab("i1/a"), lab("i2/d")]
    key = keygen(msk, mpk, "alice", labels, rng)
    alpha = msk.g_alpha.exponent
    beta = int(msk.beta)
    # beta * d-exponent - alpha recovers the key randomness r
    r = (key.d.exponent * beta - alpha) % ORDER
    for label in labels:
        d_j, d_jp = key.per_attr[label]
        r_j = d_jp.exponent
        h = toy.hash_to_group(label.canonical().encode()).exponent
        assert d_j.exponent == (r + h * r_j) % ORDER
    assert key.holder == "alice"
    assert key.issuer_set == frozenset({"i1", "i2"})
    assert key.attributes == frozenset(labels)


# ---- encryption layer --------------------------------------------------------------


def test_encrypt_fixed_rng_identities(toy, toy_keys, rng):
    _, mpk = toy_keys
    token = make_token(mpk, rng)
    ct = encrypt_with_token(mpk, token, b"msg", FixedRng())
    # r_ie = 1 and wrap = pairing_base, so only c1 moves (by exactly the base)
    assert ct.c2.exponent == token.c2.exponent
    assert ct.c1.exponent == (token.c1.exponent + 1) % ORDER  # wrap exponent is 1
    for nid, (c3, c4) in token.leaf_parts.items():
        assert ct.leaf_parts[nid][0].exponent == c3.exponent
        assert ct.leaf_parts[nid][1].exponent == c4.exponent
    assert ct.c5[:12] == b"\x00" * 12


def test_encrypt_rerandomizes_every_component(toy, toy_keys, rng):
    _, mpk = toy_keys
    token = make_token(mpk, rng)
    ct = encrypt_with_token(mpk, token, b"msg", rng)
    r_ie = ct.c2.exponent * pow(token.c2.exponent, -1, ORDER) % ORDER
    assert r_ie != 1
    for nid, (c3, c4) in token.leaf_parts.items():
        assert ct.leaf_parts[nid][0].exponent == c3.exponent * r_ie % ORDER
        assert ct.leaf_parts[nid][1].exponent == c4.exponent * r_ie % ORDER
    # c1 is blinded by the wrapped key element on top of the r_ie power
    assert ct.c1.exponent != token.c1.exponent * r_ie % ORDER


def test_two_encryptions_differ(toy_keys, rng):
    _, mpk = toy_keys
    token = make_token(mpk, rng)
    ct1 = encrypt_with_token(mpk, token, b"same message", rng)
    ct2 = encrypt_with_token(mpk, token, b"same message", rng)
    assert ct1.c2.exponent != ct2.c2.exponent
    assert ct1.c5 != ct2.c5


POLICY_CASES = [
    ("(i1/a AND i2/d)", "(i1/b OR i2/e)", {"i1/a", "i1/b", "i2/d"}, True),
    ("(i1/a AND i2/d)", "(i1/b OR i2/e)", {"i1/a", "i2/d", "i2/e"}, True),
    ("(i1/a AND i2/d)", "(i1/b OR i2/e)", {"i1/b", "i2/e"}, False),
    ("THRESHOLD(2; i1/a, i1/b, i1/c)", "i2/d", {"i1/a", "i1/c", "i2/d"}, True),
    ("THRESHOLD(2; i1/a, i1/b, i1/c)", "i2/d", {"i1/a", "i2/d"}, False),
    ("(i1/a OR i1/b)", "(i2/d AND i2/e)", {"i1/b", "i2/d", "i2/e"}, True),
    ("(i1/a OR i1/b)", "(i2/d AND i2/e)", {"i1/a", "i1/b", "i2/d"}, False),
]


@pytest.mark.parametrize("sub,iss,held,ok", POLICY_CASES)
def test_roundtrip_follows_composed_policy(toy, rng, sub, iss, held, ok):
    msk, mpk = setup(toy, rng)
    token = make_token(mpk, rng, sub, iss)
    key = keygen(msk, mpk, "bob", [lab(t) for t in held], rng)
    message = b"attribute-gated payload"
    ct = encrypt_with_token(mpk, token, message, rng)
    if ok:
        assert decrypt(ct, key) == message
    else:
        with pytest.raises(PolicyNotSatisfiedError):
            decrypt(ct, key)


def test_decrypt_node_values(toy, rng):
    msk, mpk = setup(toy, rng)
    token = make_token(mpk, rng, "(i1/a AND i1/b)", "i2/d")
    key = keygen(msk, mpk, "carol", [lab("i1/a"), lab("i1/b"), lab("i2/d")], rng)
    ct = encrypt_with_token(mpk, token, b"x", rng)
    beta = int(msk.beta)
    r_key = (key.d.exponent * beta - msk.g_alpha.exponent) % ORDER
    r_ie = ct.c2.exponent * pow(token.c2.exponent, -1, ORDER) % ORDER
    secret_sum = token.c2.exponent * pow(beta, -1, ORDER) % ORDER
    root = decrypt_node(ct, key, 0)
    assert root.exponent == r_key * r_ie % ORDER * secret_sum % ORDER
    # a leaf recombination carries r * r_ie * q_leaf(0)
    leaf_id = token.tree.leaves()[0][0]
    q = token.leaf_parts[leaf_id][0].exponent
    leaf_val = decrypt_node(ct, key, leaf_id)
    assert leaf_val.exponent == r_key * r_ie % ORDER * q % ORDER


# ---- failure modes -----------------------------------------------------------------


def test_tampered_payload_fails_authentication(toy, rng):
    msk, mpk = setup(toy, rng)
    token = make_token(mpk, rng)
    key = keygen(msk, mpk, "dave", [lab("i1/a"), lab("i2/d")], rng)
    ct = encrypt_with_token(mpk, token, b"payload", rng)
    flipped = bytearray(ct.c5)
    flipped[-1] ^= 0x01
    bad = dataclasses.replace(ct, c5=bytes(flipped))
    with pytest.raises(AuthenticationFailureError):
        decrypt(bad, key)


def test_truncated_payload_is_malformed(toy, rng):
    msk, mpk = setup(toy, rng)
    token = make_token(mpk, rng)
    key = keygen(msk, mpk, "dave", [lab("i1/a"), lab("i2/d")], rng)
    ct = encrypt_with_token(mpk, token, b"payload", rng)
    bad = dataclasses.replace(ct, c5=ct.c5[:20])
    with pytest.raises(MalformedEncodingError):
        decrypt(bad, key)


def test_foreign_kdf_tag_fails_authentication(toy, rng):
    msk, mpk = setup(toy, rng)
    token = make_token(mpk, rng)
    key = keygen(msk, mpk, "dave", [lab("i1/a"), lab("i2/d")], rng)
    ct = encrypt_with_token(mpk, token, b"payload", rng)
    bad = dataclasses.replace(ct, kdf_tag=b"privlocker/doc-key/v0")
    with pytest.raises(AuthenticationFailureError):
        decrypt(bad, key)


def test_backend_mismatch_rejected(toy, bn, rng):
    msk, mpk = setup(toy, rng)
    token = make_token(mpk, rng)
    key = keygen(msk, mpk, "dave", [lab("i1/a"), lab("i2/d")], rng)
    ct = encrypt_with_token(mpk, token, b"payload", rng)
    with pytest.raises(GroupMismatchError):
        decrypt(dataclasses.replace(ct, backend="bn256"), key)
    msk_bn, mpk_bn = setup(bn, rng)
    with pytest.raises(GroupMismatchError):
        encrypt_with_token(mpk_bn, token, b"x", rng)


def test_colluding_keys_cannot_assemble_decryptor(toy, rng):
    msk, mpk = setup(toy, rng)
    token = make_token(mpk, rng, "i1/a", "i2/d")
    key_a = keygen(msk, mpk, "eve1", [lab("i1/a")], rng)
    key_d = keygen(msk, mpk, "eve2", [lab("i2/d")], rng)
    ct = encrypt_with_token(mpk, token, b"secret", rng)
    forged = AttributeKey(
        holder="eve",
        issuer_set=frozenset({"i1", "i2"}),
        d=key_a.d,
        per_attr={**key_a.per_attr, **key_d.per_attr},
        backend="toy",
    )
    with pytest.raises(AuthenticationFailureError):
        decrypt(ct, forged)


# ---- one real-curve round trip ------------------------------------------------------


def test_bn256_roundtrip(bn):
    rng = random.Random(7)
    msk, mpk = setup(bn, rng)
    token = make_token(mpk, rng, "(i1/a OR i1/b)", "(i2/d AND i2/e)")
    key = keygen(msk, mpk, "frank", [lab("i1/b"), lab("i2/d"), lab("i2/e")], rng)
    message = b"real pairing round trip"
    ct = encrypt_with_token(mpk, token, message, rng)
    assert decrypt(ct, key) == message
    poor = keygen(msk, mpk, "grace", [lab("i1/a"), lab("i2/d")], rng)
    with pytest.raises(PolicyNotSatisfiedError):
        decrypt(ct, poor)
