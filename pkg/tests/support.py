"""Shared helpers: the policy corpus and exponent-level share reconstruction.

The corpus is a fixed, deterministic enumeration of access trees of depth
up to three over five attributes from two authorities, covering every gate
kind.  Reconstruction mirrors the decryption recursion on bare scalars so
secret-sharing can be checked without any group arithmetic in the way.
"""

from itertools import combinations

from privlocker.groups import Scalar
from privlocker.policy import (
    AccessTree,
    Leaf,
    lagrange_coeff,
    parse_policy,
    select_satisfying_children,
)

ATTRS = ("i1/a", "i1/b", "i1/c", "i2/d", "i2/e")


def policy_corpus() -> list[str]:
    """Deterministic policy texts: all flat 2- and 3-leaf gates over the
    attribute pool plus nested shapes from cyclic windows, depth <= 3."""
    out = list(ATTRS)
    for x, y in combinations(ATTRS, 2):
        out.append(f"({x} AND {y})")
        out.append(f"({x} OR {y})")
    for x, y, z in combinations(ATTRS, 3):
        out.append(f"({x} AND {y} AND {z})")
        out.append(f"({x} OR {y} OR {z})")
        out.append(f"THRESHOLD(2; {x}, {y}, {z})")
    for i in range(len(ATTRS)):
        x, y, z, w = (ATTRS[(i + k) % len(ATTRS)] for k in range(4))
        for inner, other in (("AND", "OR"), ("OR", "AND")):
            sub = f"({x} {inner} {y})"
            out.append(f"({sub} AND {z})")
            out.append(f"({sub} OR {z})")
            out.append(f"THRESHOLD(2; {sub}, {z}, {w})")
            out.append(f"({sub} AND ({z} {other} {w}))")
            out.append(f"({sub} OR ({z} {other} {w}))")
    return out


def all_attr_subsets():
    pool = [parse_policy(a).root.attribute for a in ATTRS]
    for r in range(len(pool) + 1):
        for combo in combinations(pool, r):
            yield frozenset(combo)


def reconstruct(tree: AccessTree, shares: dict, held: frozenset, order: int):
    """Recombine the root secret from leaf shares of held attributes.

    Returns a Scalar, or None when the held set cannot satisfy the tree.
    Mirrors the ciphertext recursion: Lagrange coefficients at threshold
    gates, plain sums at additive gates.
    """

    def walk(node_id: int):
        node = tree.node(node_id)
        if isinstance(node, Leaf):
            return shares[node_id] if node.attribute in held else None
        results = {}
        for child_id, index in tree.children(node_id):
            results[index] = walk(child_id)
        chosen = select_satisfying_children(node, results)
        if chosen is None:
            return None
        total = Scalar(0, order)
        if node.additive:
            for index in chosen:
                total = total + results[index]
            return total
        for index in chosen:
            total = total + results[index] * lagrange_coeff(index, chosen, order)
        return total

    return walk(0)
