"""Policy grammar, satisfaction, and secret-sharing tests."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from privlocker.errors import (
    EmptyGateError,
    PolicySyntaxError,
    ThresholdRangeError,
)
from privlocker.groups import Scalar
from privlocker.policy import (
    AccessTree,
    AttributeLabel,
    Gate,
    Leaf,
    assign_shares,
    lagrange_coeff,
    parse_policy,
    select_satisfying_children,
    valid_identifier,
)
from support import reconstruct

ORDER = 2**61 - 1


def lab(text):
    return AttributeLabel.parse(text)


# ---- parsing and rendering ----------------------------------------------------


@pytest.mark.parametrize(
    "text,rendered",
    [
        ("EDU/degree", "EDU/degree"),
        ("(EDU/degree AND GOV/auditor)", "(EDU/degree AND GOV/auditor)"),
        ("EDU/degree AND GOV/auditor", "(EDU/degree AND GOV/auditor)"),
        ("a/x OR b/y OR c/z", "(a/x OR b/y OR c/z)"),
        ("THRESHOLD(2; a/x, b/y, c/z)", "THRESHOLD(2; a/x, b/y, c/z)"),
        ("THRESHOLD(3; a/x, b/y, c/z)", "(a/x AND b/y AND c/z)"),
        ("THRESHOLD(1; a/x, b/y)", "(a/x OR b/y)"),
        ("ALLOF(a/x, b/y)", "ALLOF(a/x, b/y)"),
        (
            "((a/x OR b/y) AND THRESHOLD(2; c/z, d/w, e/v))",
            "((a/x OR b/y) AND THRESHOLD(2; c/z, d/w, e/v))",
        ),
        ("  a/x   AND\n b/y ", "(a/x AND b/y)"),
    ],
)
def test_parse_render(text, rendered):
    assert parse_policy(text).render() == rendered


def test_parse_is_render_inverse():
    tree = parse_policy("((a/x OR b/y) AND ALLOF(c/z, THRESHOLD(2; d/w, e/v, f/u)))")
    assert parse_policy(tree.render()).root == tree.root


@pytest.mark.parametrize(
    "text,exc",
    [
        ("", PolicySyntaxError),
        ("   ", PolicySyntaxError),
        ("degree", PolicySyntaxError),  # missing authority
        ("(EDU/degree)", PolicySyntaxError),  # singleton group
        ("(a/x AND b/y OR c/z)", PolicySyntaxError),  # mixed gate
        ("a/x b/y", PolicySyntaxError),  # trailing input
        ("(a/x AND )", PolicySyntaxError),
        ("THRESHOLD(0; a/x, b/y)", ThresholdRangeError),
        ("THRESHOLD(3; a/x, b/y)", ThresholdRangeError),
        ("THRESHOLD(q; a/x)", PolicySyntaxError),
        ("a/x AND (b/y", PolicySyntaxError),
        ("a/$", PolicySyntaxError),
    ],
)
def test_parse_errors(text, exc):
    with pytest.raises(exc) as info:
        parse_policy(text)
    assert info.value.position is None or info.value.position >= 0


def test_syntax_error_carries_position():
    with pytest.raises(PolicySyntaxError) as info:
        parse_policy("a/x ANDD b/y")
    assert info.value.position == 3
    assert "ANDD" in str(info.value)


def test_attribute_label_validation():
    assert lab("EDU/degree") == AttributeLabel("EDU", "degree")
    assert str(lab("EDU/degree")) == "EDU/degree"
    with pytest.raises(PolicySyntaxError):
        AttributeLabel("", "x")
    with pytest.raises(PolicySyntaxError):
        AttributeLabel("a b", "x")
    assert valid_identifier("ok-name.v2")
    assert not valid_identifier("a::b")
    assert not valid_identifier("")


def test_gate_validation():
    with pytest.raises(EmptyGateError):
        Gate(1, ())
    with pytest.raises(ThresholdRangeError):
        Gate(0, (Leaf(lab("a/x")),))
    with pytest.raises(ThresholdRangeError):
        Gate(3, (Leaf(lab("a/x")), Leaf(lab("b/y"))))
    with pytest.raises(ThresholdRangeError):
        Gate(1, (Leaf(lab("a/x")), Leaf(lab("b/y"))), additive=True)


def test_preorder_ids_and_children():
    tree = parse_policy("((a/x OR b/y) AND c/z)")
    # 0 root, 1 OR gate, 2 a/x, 3 b/y, 4 c/z
    assert tree.size == 5
    assert tree.children(0) == [(1, 1), (4, 2)]
    assert tree.children(1) == [(2, 1), (3, 2)]
    assert [nid for nid, _ in tree.leaves()] == [2, 3, 4]
    assert tree.attributes == {lab("a/x"), lab("b/y"), lab("c/z")}
    assert tree.issuers == {"a", "b", "c"}


# ---- satisfaction oracle -------------------------------------------------------

THRESHOLD_TABLE = [
    (frozenset(), False),
    (frozenset({"a/x"}), False),
    (frozenset({"b/y"}), False),
    (frozenset({"c/z"}), False),
    (frozenset({"a/x", "b/y"}), True),
    (frozenset({"a/x", "c/z"}), True),
    (frozenset({"b/y", "c/z"}), True),
    (frozenset({"a/x", "b/y", "c/z"}), True),
]


@pytest.mark.parametrize("held,expected", THRESHOLD_TABLE)
def test_threshold_satisfaction_table(held, expected):
    tree = parse_policy("THRESHOLD(2; a/x, b/y, c/z)")
    assert tree.satisfied_by({lab(t) for t in held}) is expected


# ---- Lagrange and share assignment ----------------------------------------------


def test_lagrange_frozen_values():
    assert int(lagrange_coeff(1, (1, 2), ORDER)) == 2
    assert int(lagrange_coeff(2, (1, 2), ORDER)) == ORDER - 1
    assert int(lagrange_coeff(1, (1, 2, 3), ORDER)) == 3
    assert int(lagrange_coeff(2, (1, 2, 3), ORDER)) == ORDER - 3
    assert int(lagrange_coeff(3, (1, 2, 3), ORDER)) == 1
    with pytest.raises(ValueError):
        lagrange_coeff(4, (1, 2), ORDER)


def test_and_gate_share_identity(rng):
    # for a 2-of-2 gate the shares obey secret = 2*q(1) - q(2)
    tree = parse_policy("(a/x AND b/y)")
    secret = Scalar(rng.randrange(ORDER), ORDER)
    shares = assign_shares(tree, secret, rng, ORDER).shares
    assert shares[0] == secret
    assert shares[1] * 2 - shares[2] == secret


def test_additive_gate_shares_sum(rng):
    tree = parse_policy("ALLOF(a/x, b/y, c/z)")
    secret = Scalar(rng.randrange(ORDER), ORDER)
    shares = assign_shares(tree, secret, rng, ORDER).shares
    assert shares[1] + shares[2] + shares[3] == secret


def test_assign_covers_every_node(rng):
    tree = parse_policy("((a/x OR b/y) AND THRESHOLD(2; c/z, d/w, e/v))")
    secret = Scalar(12345, ORDER)
    assignment = assign_shares(tree, secret, rng, ORDER)
    assert set(assignment.shares) == set(range(tree.size))
    assert assignment.root_secret == secret


def test_select_satisfying_children_prefers_low_indices():
    gate = Gate(2, (Leaf(lab("a/x")), Leaf(lab("b/y")), Leaf(lab("c/z"))))
    assert select_satisfying_children(gate, {1: 1, 2: 1, 3: 1}) == (1, 2)
    assert select_satisfying_children(gate, {1: None, 2: 1, 3: 1}) == (2, 3)
    assert select_satisfying_children(gate, {1: None, 2: None, 3: 1}) is None


def test_reconstruction_matches_satisfaction(rng):
    tree = parse_policy("((a/x OR b/y) AND THRESHOLD(2; c/z, d/w, e/v))")
    secret = Scalar(rng.randrange(ORDER), ORDER)
    shares = assign_shares(tree, secret, rng, ORDER).shares
    for held_names in (
        {"a/x", "c/z", "d/w"},
        {"b/y", "d/w", "e/v"},
        {"a/x", "b/y", "c/z"},  # threshold side short
        {"c/z", "d/w", "e/v"},  # OR side missing
        set(),
    ):
        held = frozenset(lab(t) for t in held_names)
        got = reconstruct(tree, shares, held, ORDER)
        if tree.satisfied_by(held):
            assert got == secret
        else:
            assert got is None


# ---- property-based checks ------------------------------------------------------

_labels = st.sampled_from([lab(t) for t in ("i1/a", "i1/b", "i1/c", "i2/d", "i2/e")])


def _trees(depth: int):
    if depth == 0:
        return st.builds(Leaf, _labels)
    sub = _trees(depth - 1)
    children = st.lists(sub, min_size=2, max_size=3).map(tuple)

    def build(kids, kind, k2):
        if kind == "additive":
            return Gate(len(kids), kids, additive=True)
        if kind == "or":
            return Gate(1, kids)
        if kind == "and":
            return Gate(len(kids), kids)
        return Gate(min(2, len(kids)), kids)

    return st.builds(
        build,
        children,
        st.sampled_from(["and", "or", "threshold", "additive"]),
        st.integers(),
    )


@settings(max_examples=80, deadline=None)
@given(_trees(2))
def test_render_parse_fixpoint(root):
    tree = AccessTree(root)
    reparsed = parse_policy(tree.render())
    assert reparsed.render() == tree.render()
    assert reparsed.attributes == tree.attributes


@settings(max_examples=60, deadline=None)
@given(_trees(2), st.sets(_labels), st.sets(_labels))
def test_satisfaction_is_monotone(root, held, extra):
    tree = AccessTree(root)
    if tree.satisfied_by(held):
        assert tree.satisfied_by(held | extra)


@settings(max_examples=60, deadline=None)
@given(_trees(2), st.sets(_labels), st.integers(min_value=1))
def test_reconstruction_agrees_with_satisfaction(root, held, seed):
    tree = AccessTree(root)
    rng = random.Random(seed)
    secret = Scalar(rng.randrange(ORDER), ORDER)
    shares = assign_shares(tree, secret, rng, ORDER).shares
    got = reconstruct(tree, shares, frozenset(held), ORDER)
    if tree.satisfied_by(held):
        assert got == secret
    else:
        assert got is None
