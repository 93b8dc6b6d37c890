"""Access policies: threshold trees over issuer-qualified attributes.

The policy language::

    expr := attr
          | '(' expr AND expr [AND expr ...] ')'
          | '(' expr OR  expr [OR  expr ...] ')'
          | THRESHOLD '(' k ';' expr [',' expr ...] ')'
          | ALLOF '(' expr ',' expr [',' expr ...] ')'

where ``attr`` is ``authority/name``.  AND is an n-of-n gate, OR is 1-of-n,
THRESHOLD(k; ...) is k-of-n.  ALLOF is the additive n-of-n gate used as the
root when two partial tokens are combined: its children's secrets sum to the
parent secret and recombine with coefficient one instead of Lagrange
interpolation.  Node identity is the preorder index, root = 0.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Optional, Union

from .errors import EmptyGateError, PolicySyntaxError, ThresholdRangeError
from .groups import Scalar

_PART_RE = re.compile(r"[A-Za-z0-9_.\-]+")


def valid_identifier(text: str) -> bool:
    """True for names usable as authorities, issuer ids and URI components."""
    return bool(_PART_RE.fullmatch(text))


@dataclass(frozen=True, order=True)
class AttributeLabel:
    """An attribute qualified by the authority that may assign it."""

    authority: str
    name: str

    def __post_init__(self):
        for part, what in ((self.authority, "authority"), (self.name, "name")):
            if not part or not _PART_RE.fullmatch(part):
                raise PolicySyntaxError(
                    f"invalid attribute {what} {part!r}: use letters, digits, '_', '-', '.'"
                )

    def canonical(self) -> str:
        return f"{self.authority}/{self.name}"

    @classmethod
    def parse(cls, text: str) -> "AttributeLabel":
        authority, sep, name = text.partition("/")
        if not sep:
            raise PolicySyntaxError(f"attribute {text!r} must be authority/name")
        return cls(authority, name)

    def __str__(self):
        return self.canonical()


@dataclass(frozen=True)
class Leaf:
    attribute: AttributeLabel


@dataclass(frozen=True)
class Gate:
    threshold: int
    children: tuple = ()
    additive: bool = False

    def __post_init__(self):
        if not self.children:
            raise EmptyGateError("gate has no children")
        if not 1 <= self.threshold <= len(self.children):
            raise ThresholdRangeError(
                f"threshold {self.threshold} out of range 1..{len(self.children)}"
            )
        if self.additive and self.threshold != len(self.children):
            raise ThresholdRangeError("additive gates are n-of-n")


Node = Union[Leaf, Gate]


@dataclass(frozen=True)
class NodeRef:
    """A node addressed by preorder id, with its position under its parent."""

    node_id: int
    node: Node
    parent_id: Optional[int]
    index: int  # 1-based index among siblings; 0 for the root


@dataclass(frozen=True)
class AccessTree:
    root: Node

    @cached_property
    def _refs(self) -> tuple:
        refs = []

        def walk(node, parent_id, index):
            nid = len(refs)
            refs.append(NodeRef(nid, node, parent_id, index))
            if isinstance(node, Gate):
                for i, child in enumerate(node.children, start=1):
                    walk(child, nid, i)

        walk(self.root, None, 0)
        return tuple(refs)

    def nodes(self) -> tuple:
        return self._refs

    def node(self, node_id: int) -> Node:
        return self._refs[node_id].node

    @property
    def size(self) -> int:
        return len(self._refs)

    def children(self, node_id: int) -> list:
        """(child_id, 1-based index) pairs of a gate node."""
        return [(r.node_id, r.index) for r in self._refs if r.parent_id == node_id]

    def leaves(self) -> list:
        return [
            (r.node_id, r.node.attribute)
            for r in self._refs
            if isinstance(r.node, Leaf)
        ]

    @cached_property
    def attributes(self) -> frozenset:
        return frozenset(label for _, label in self.leaves())

    @cached_property
    def issuers(self) -> frozenset:
        return frozenset(label.authority for label in self.attributes)

    def render(self) -> str:
        return _render(self.root)

    def satisfied_by(self, attrs: Iterable[AttributeLabel]) -> bool:
        held = frozenset(attrs)

        def sat(node) -> bool:
            if isinstance(node, Leaf):
                return node.attribute in held
            return sum(sat(c) for c in node.children) >= node.threshold

        return sat(self.root)

    def __str__(self):
        return self.render()


def _render(node: Node) -> str:
    if isinstance(node, Leaf):
        return node.attribute.canonical()
    parts = [_render(c) for c in node.children]
    n = len(node.children)
    if node.additive:
        return f"ALLOF({', '.join(parts)})"
    if n >= 2 and node.threshold == n:
        return "(" + " AND ".join(parts) + ")"
    if n >= 2 and node.threshold == 1:
        return "(" + " OR ".join(parts) + ")"
    return f"THRESHOLD({node.threshold}; {', '.join(parts)})"


# ---- parsing ------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<lparen>\()|(?P<rparen>\))|(?P<comma>,)|(?P<semi>;)"
    r"|(?P<word>[A-Za-z0-9_.\-]+(?:/[A-Za-z0-9_.\-]+)?))"
)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str, cls=PolicySyntaxError):
        raise cls(f"{message} (at position {self.pos})", position=self.pos)

    def next_token(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        if self.pos >= len(self.text):
            return None, self.pos
        m = _TOKEN_RE.match(self.text, self.pos)
        if not m:
            self.error(f"unexpected character {self.text[self.pos]!r}")
        start = m.start(m.lastgroup)
        self.pos = m.end()
        return m.group(m.lastgroup), start

    def peek(self):
        save = self.pos
        tok, _ = self.next_token()
        self.pos = save
        return tok

    def expect(self, literal: str):
        tok, _ = self.next_token()
        if tok != literal:
            self.error(f"expected {literal!r}, found {tok!r}")

    def parse_expr(self) -> Node:
        tok = self.peek()
        if tok is None:
            self.error("unexpected end of policy")
        if tok == "(":
            return self.parse_infix_gate()
        if tok == "THRESHOLD":
            return self.parse_threshold()
        if tok == "ALLOF":
            return self.parse_allof()
        if "/" in tok:
            self.next_token()
            try:
                return Leaf(AttributeLabel.parse(tok))
            except PolicySyntaxError as exc:
                self.error(str(exc))
        self.error(f"expected an attribute or gate, found {tok!r}")

    def parse_infix_gate(self) -> Node:
        self.expect("(")
        return self.parse_chain(closing=")")

    def parse_chain(self, closing: str | None) -> Node:
        """Parse ``expr (AND expr)*`` or ``expr (OR expr)*`` up to ``closing``.

        ``closing`` is ``")"`` inside parentheses and ``None`` at the top
        level, where the chain ends at end of input.
        """
        children = [self.parse_expr()]
        keyword = None
        while True:
            save = self.pos
            tok, _ = self.next_token()
            if tok == closing:
                break
            if tok not in ("AND", "OR"):
                if closing is not None:
                    self.error(f"expected AND, OR or ')', found {tok!r}")
                self.pos = save
                break
            if keyword is None:
                keyword = tok
            elif tok != keyword:
                self.error("cannot mix AND and OR in one gate; parenthesize")
            children.append(self.parse_expr())
        if keyword is None:
            if closing is not None:
                self.error("parenthesized group needs AND or OR between operands")
            return children[0]
        threshold = len(children) if keyword == "AND" else 1
        return Gate(threshold, tuple(children))

    def parse_threshold(self) -> Node:
        self.next_token()  # THRESHOLD
        self.expect("(")
        tok, _ = self.next_token()
        if tok is None or not tok.isdigit():
            self.error(f"expected a threshold count, found {tok!r}")
        k = int(tok)
        self.expect(";")
        children = [self.parse_expr()]
        while True:
            tok, _ = self.next_token()
            if tok == ")":
                break
            if tok != ",":
                self.error(f"expected ',' or ')', found {tok!r}")
            children.append(self.parse_expr())
        if not 1 <= k <= len(children):
            self.error(
                f"threshold {k} out of range 1..{len(children)}", ThresholdRangeError
            )
        return Gate(k, tuple(children))

    def parse_allof(self) -> Node:
        self.next_token()  # ALLOF
        self.expect("(")
        children = [self.parse_expr()]
        while True:
            tok, _ = self.next_token()
            if tok == ")":
                break
            if tok != ",":
                self.error(f"expected ',' or ')', found {tok!r}")
            children.append(self.parse_expr())
        return Gate(len(children), tuple(children), additive=True)


def parse_policy(text: str) -> AccessTree:
    if not text or not text.strip():
        raise PolicySyntaxError("empty policy")
    parser = _Parser(text)
    root = parser.parse_chain(closing=None)
    trailing = parser.peek()
    if trailing is not None:
        parser.error(f"unexpected trailing input {trailing!r}")
    return AccessTree(root)


# ---- secret sharing -------------------------------------------------------------


@dataclass(frozen=True)
class ShareAssignment:
    """Per-node shares from a top-down split of the root secret.

    ``shares`` maps every node id (gates included) to its share q_x(0);
    ``shares[0] == root_secret``.
    """

    shares: dict = field(repr=False)
    root_secret: Scalar = None


def assign_shares(tree: AccessTree, secret: Scalar, rng, order: int) -> ShareAssignment:
    """Split ``secret`` over the tree.

    Threshold gates embed the share as the constant term of a random degree
    k-1 polynomial and hand child i the evaluation at i.  Additive gates hand
    out random shares summing to their own.  Draws happen in preorder.
    """
    shares: dict = {}

    def descend(node, node_id, value: Scalar):
        shares[node_id] = value
        if isinstance(node, Leaf):
            return node_id + 1
        kids = node.children
        if node.additive:
            parts = [Scalar(rng.randrange(0, order), order) for _ in kids[:-1]]
            parts.append(value - sum(parts, Scalar(0, order)))
        else:
            coeffs = [value] + [
                Scalar(rng.randrange(0, order), order)
                for _ in range(node.threshold - 1)
            ]
            parts = [_poly_eval(coeffs, i, order) for i in range(1, len(kids) + 1)]
        next_id = node_id + 1
        for child, part in zip(kids, parts):
            next_id = descend(child, next_id, part)
        return next_id

    descend(tree.root, 0, secret)
    return ShareAssignment(shares=shares, root_secret=secret)


def _poly_eval(coeffs, x: int, order: int) -> Scalar:
    # Horner, highest degree first
    acc = Scalar(0, order)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def lagrange_coeff(i: int, indices: Iterable[int], order: int) -> Scalar:
    """Lagrange basis polynomial for index i over ``indices``, evaluated at 0."""
    idx = list(indices)
    if i not in idx:
        raise ValueError(f"index {i} not in interpolation set {idx}")
    num = Scalar(1, order)
    den = Scalar(1, order)
    for j in idx:
        if j == i:
            continue
        num = num * Scalar(-j, order)
        den = den * Scalar(i - j, order)
    return num * den.inverse()


def select_satisfying_children(gate: Gate, results: Mapping[int, object]):
    """Choose which child indices recombine a gate, or None if unsatisfied.

    ``results`` maps 1-based child index to a value or None.  Selection is
    deterministic: the lowest satisfying indices win.
    """
    ok = sorted(idx for idx, value in results.items() if value is not None)
    if len(ok) < gate.threshold:
        return None
    return tuple(ok[: gate.threshold])
