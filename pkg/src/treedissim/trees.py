"""Weighted-tree data model, Newick I/O, distances, and constructions.

Trees carry leaf labels 1..n (always degree-1 nodes) with exact rational
edge weights.  Internal node identifiers are arbitrary integers larger
than n.  The module provides:

- Newick parsing/serialization with exact branch lengths,
- leaf-to-leaf distance matrices and the minimal-spanning-subtree
  (Steiner) weight oracle,
- well-numbering of nodes by the inductive prefix-label construction,
- subtree contraction, random generation, topology enumeration,
- equidistant realization of ultrametrics and exact reconstruction of a
  tree from its distance matrix by cherry picking.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from itertools import combinations
from typing import Callable, Iterable, Iterator, Sequence

from .rationals import format_rational
from .tropical import Verdict, four_point_check, is_ultrametric


class TreeError(Exception):
    """Structural problem with a tree or an operation on one."""


class NewickError(TreeError):
    """Malformed Newick input; carries the offending position when known."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (position {position})"
        super().__init__(message)


class FourPointViolation(TreeError):
    """Raised when a matrix that must be a tree metric is not one."""

    def __init__(self, verdict: Verdict):
        self.verdict = verdict
        super().__init__(
            f"four-point condition fails at {verdict.witness}: values {verdict.values}"
        )


class UltrametricViolation(TreeError):
    """Raised when a matrix that must be ultrametric is not."""

    def __init__(self, verdict: Verdict):
        self.verdict = verdict
        super().__init__(
            f"ultrametric condition fails at {verdict.witness}: values {verdict.values}"
        )


@dataclass
class WeightedTree:
    """Tree on leaves 1..n with rational edge weights.

    ``adj`` is a symmetric adjacency map ``node -> {neighbor: weight}``.
    Leaves are exactly the nodes 1..n and must have degree 1; internal
    nodes may have any identifier above n and any degree (callers that
    need "no degree-2 vertices" check for themselves).  ``root`` is
    optional; when set, serialization preserves it.
    """

    n: int
    adj: dict[int, dict[int, Fraction]]
    root: int | None = None

    def __post_init__(self) -> None:
        if self.n < 2:
            raise TreeError("a tree needs at least 2 leaves")
        self.adj = {u: {v: Fraction(w) for v, w in nbrs.items()} for u, nbrs in self.adj.items()}
        nodes = set(self.adj)
        edge_ends = 0
        for u, nbrs in self.adj.items():
            for v, w in nbrs.items():
                if v not in self.adj or self.adj[v].get(u) != w:
                    raise TreeError(f"adjacency is not symmetric at edge {u}-{v}")
                if w < 0:
                    raise TreeError(f"negative weight on edge {u}-{v}")
                edge_ends += 1
        if edge_ends != 2 * (len(nodes) - 1):
            raise TreeError("edge count does not match a tree")
        seen = {next(iter(nodes))}
        stack = list(seen)
        while stack:
            u = stack.pop()
            for v in self.adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        if seen != nodes:
            raise TreeError("tree is not connected")
        for leaf in range(1, self.n + 1):
            if leaf not in nodes:
                raise TreeError(f"missing leaf {leaf}")
            if len(self.adj[leaf]) != 1:
                raise TreeError(f"leaf {leaf} must have degree 1")
        for u in nodes:
            if u > self.n and len(self.adj[u]) == 0:
                raise TreeError(f"isolated internal node {u}")
        if self.root is not None and self.root not in nodes:
            raise TreeError(f"root {self.root} is not a node of the tree")

    @property
    def nodes(self) -> list[int]:
        return sorted(self.adj)

    def edges(self) -> Iterator[tuple[int, int, Fraction]]:
        """Yield (u, v, weight) with u < v, in sorted order."""
        for u in sorted(self.adj):
            for v in sorted(self.adj[u]):
                if u < v:
                    yield u, v, self.adj[u][v]

    def degree(self, node: int) -> int:
        return len(self.adj[node])

    @property
    def total_weight(self) -> Fraction:
        return sum((w for _, _, w in self.edges()), Fraction(0))

    @property
    def has_strictly_positive_weights(self) -> bool:
        return all(w > 0 for _, _, w in self.edges())

    def copy(self) -> "WeightedTree":
        return WeightedTree(self.n, {u: dict(nb) for u, nb in self.adj.items()}, self.root)


@dataclass
class DistanceMatrix:
    """Symmetric rational map on pairs from [n] with zero diagonal.

    Entries are keyed on ordered pairs (i, j) with i < j; ``get``
    handles both orders and the diagonal.  Entries may be negative (raw
    dissimilarities); predicates in :mod:`treedissim.tropical` decide
    metric properties.
    """

    n: int
    entries: dict[tuple[int, int], Fraction]

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("a distance matrix needs n >= 2")
        expected = set(combinations(range(1, self.n + 1), 2))
        keys = set(self.entries)
        if keys != expected:
            bad = sorted(keys ^ expected)[:3]
            raise ValueError(f"entries must cover exactly the pairs i<j from 1..{self.n}; mismatch near {bad}")
        self.entries = {k: Fraction(v) for k, v in sorted(self.entries.items())}

    def get(self, i: int, j: int) -> Fraction:
        if i == j:
            return Fraction(0)
        return self.entries[(i, j) if i < j else (j, i)]

    def restrict(self, labels: Iterable[int]) -> "DistanceMatrix":
        """Submatrix on the given labels, relabeled 1..k in sorted order."""
        labs = sorted(set(labels))
        if len(labs) < 2:
            raise ValueError("restriction needs at least 2 labels")
        if labs[0] < 1 or labs[-1] > self.n:
            raise ValueError("labels out of range")
        pos = {lab: idx + 1 for idx, lab in enumerate(labs)}
        entries = {
            (pos[a], pos[b]): self.get(a, b) for a, b in combinations(labs, 2)
        }
        return DistanceMatrix(len(labs), entries)

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "entries": {f"{i},{j}": format_rational(v) for (i, j), v in self.entries.items()},
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "DistanceMatrix":
        from .rationals import parse_rational

        if not isinstance(obj, dict) or "n" not in obj or "entries" not in obj:
            raise ValueError("distance matrix JSON needs keys 'n' and 'entries'")
        n = obj["n"]
        if not isinstance(n, int):
            raise ValueError("'n' must be an integer")
        entries = {}
        for key, val in obj["entries"].items():
            parts = key.split(",")
            if len(parts) != 2:
                raise ValueError(f"bad pair key {key!r}")
            i, j = (int(p) for p in parts)
            if not 1 <= i < j <= n:
                raise ValueError(f"pair key {key!r} must satisfy 1 <= i < j <= n")
            entries[(i, j)] = parse_rational(val)
        return cls(n, entries)


@total_ordering
@dataclass(frozen=True)
class AlphaLabel:
    """Finite-support label compared position by position.

    Stored with trailing zeros stripped; all retained entries are >= 1
    (child indices), so comparing the stripped tuples lexicographically
    agrees with comparing the zero-padded sequences.
    """

    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        trimmed = self.entries
        while trimmed and trimmed[-1] == 0:
            trimmed = trimmed[:-1]
        if any(e < 1 for e in trimmed):
            raise ValueError("label entries must be positive before the zero tail")
        object.__setattr__(self, "entries", trimmed)

    @property
    def depth(self) -> int:
        """Number of nonzero entries."""
        return len(self.entries)

    def __lt__(self, other: "AlphaLabel") -> bool:
        return self.entries < other.entries

    def child(self, index: int) -> "AlphaLabel":
        return AlphaLabel(self.entries + (index,))


@dataclass(frozen=True)
class WellNumbering:
    """Node labels plus the induced leaf renumbering.

    ``alpha`` maps every node to its :class:`AlphaLabel`; ``leaf_order``
    lists the original leaves sorted by label, and ``relabel`` sends an
    original leaf to its 1-based rank, so relabeled leaves satisfy
    i < j iff alpha(i) < alpha(j).
    """

    alpha: dict[int, AlphaLabel]
    leaf_order: tuple[int, ...]
    relabel: dict[int, int]


@dataclass(frozen=True)
class Contraction:
    """Result of collapsing the minimal subtree over a leaf subset.

    ``tree`` is relabeled to leaves 1..n'; kept original leaves map
    through ``label_map`` and the collapsed point carries ``new_label``
    (always n').  Iterating yields (tree, weight) for convenience.
    """

    tree: WeightedTree
    weight: Fraction
    new_label: int
    label_map: dict[int, int]

    def __iter__(self):
        yield self.tree
        yield self.weight


# ---------------------------------------------------------------------------
# Newick


_NUM_RE = re.compile(r"[+-]?(?:\d+/\d+|(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)")


class _RawNode:
    __slots__ = ("label", "children")

    def __init__(self, label: int | None = None):
        self.label = label
        self.children: list[tuple["_RawNode", Fraction]] = []


class _NewickParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str, position: int | None = None):
        raise NewickError(message, self.pos if position is None else position)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> _RawNode:
        self.skip_ws()
        node, _ = self.parse_item()
        self.skip_ws()
        if self.peek() != ";":
            self.error("expected ';'")
        self.pos += 1
        self.skip_ws()
        if self.pos != len(self.text):
            self.error("unexpected trailing characters")
        return node

    def parse_item(self) -> tuple[_RawNode, Fraction]:
        self.skip_ws()
        if self.peek() == "(":
            node = self.parse_group()
        else:
            node = self.parse_leaf()
        self.skip_ws()
        weight = Fraction(0)
        if self.peek() == ":":
            self.pos += 1
            weight = self.parse_number()
        return node, weight

    def parse_group(self) -> _RawNode:
        start = self.pos
        self.pos += 1  # consume '('
        items = [self.parse_item()]
        self.skip_ws()
        while self.peek() == ",":
            self.pos += 1
            items.append(self.parse_item())
            self.skip_ws()
        if self.peek() != ")":
            self.error("expected ',' or ')'")
        self.pos += 1
        if len(items) < 2:
            self.error("a group needs at least two children", start)
        node = _RawNode()
        node.children = items
        return node

    def parse_leaf(self) -> _RawNode:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            self.error("expected a leaf label or '('")
        label = int(self.text[start : self.pos])
        if label < 1:
            self.error("leaf labels must be positive integers", start)
        return _RawNode(label)

    def parse_number(self) -> Fraction:
        self.skip_ws()
        match = _NUM_RE.match(self.text, self.pos)
        if match is None:
            self.error("expected a branch length")
        start = self.pos
        self.pos = match.end()
        try:
            value = Fraction(match.group())
        except (ValueError, ZeroDivisionError):
            self.error("invalid branch length", start)
        if value < 0:
            self.error("negative branch length", start)
        return value


def parse_newick(text: str, rooted: bool = False) -> WeightedTree:
    """Parse a Newick string with integer leaf labels 1..n.

    Branch lengths must be exact rationals ("p/q" or terminating
    decimals); missing lengths default to 0.  With ``rooted=False`` a
    degree-2 top node is suppressed (unrooted reading); with
    ``rooted=True`` the top node is kept and recorded as the root.
    """
    top = _NewickParser(text).parse()
    if top.label is not None:
        raise NewickError("a tree needs at least two leaves")

    leaves: list[int] = []

    def collect(node: _RawNode) -> None:
        if node.label is not None:
            leaves.append(node.label)
        for child, _ in node.children:
            collect(child)

    collect(top)
    if len(leaves) != len(set(leaves)):
        dup = sorted(l for l in set(leaves) if leaves.count(l) > 1)[0]
        raise NewickError(f"duplicate leaf label {dup}")
    n = len(leaves)
    if sorted(leaves) != list(range(1, n + 1)):
        raise NewickError(f"leaf labels must be exactly 1..{n}, got {sorted(leaves)}")

    adj: dict[int, dict[int, Fraction]] = {}
    counter = n

    def build(node: _RawNode) -> int:
        nonlocal counter
        if node.label is not None:
            adj.setdefault(node.label, {})
            return node.label
        counter += 1
        me = counter
        adj.setdefault(me, {})
        for child, weight in node.children:
            cid = build(child)
            adj[me][cid] = weight
            adj[cid][me] = weight
        return me

    top_id = build(top)
    root: int | None = top_id
    if not rooted and len(adj[top_id]) == 2:
        (a, wa), (b, wb) = sorted(adj[top_id].items())
        del adj[a][top_id]
        del adj[b][top_id]
        del adj[top_id]
        adj[a][b] = wa + wb
        adj[b][a] = wa + wb
        root = None
    elif not rooted:
        root = None
    return WeightedTree(n, adj, root)


def _min_leaf_below(tree: WeightedTree, node: int, parent: int | None, memo: dict) -> int:
    key = (node, parent)
    if key in memo:
        return memo[key]
    best = node if node <= tree.n else None
    for v in tree.adj[node]:
        if v != parent:
            sub = _min_leaf_below(tree, v, node, memo)
            if best is None or sub < best:
                best = sub
    memo[key] = best
    return best


def serialize_newick(tree: WeightedTree) -> str:
    """Serialize a tree to Newick with exact rational branch lengths.

    A rooted tree is written from its root.  Unrooted trees get a
    canonical form: written from the internal neighbor of leaf 1 with
    children everywhere ordered by smallest descendant leaf, so equal
    trees produce identical strings.
    """
    if tree.root is not None and tree.degree(tree.root) >= 2:
        start = tree.root
    elif tree.n == 2:
        return f"(1:0,2:{format_rational(tree.adj[1][2])});"
    else:
        start = next(iter(tree.adj[1]))
    memo: dict = {}

    def sub(node: int, parent: int | None) -> str:
        kids = [v for v in tree.adj[node] if v != parent]
        if not kids:
            return str(node)
        kids.sort(key=lambda v: _min_leaf_below(tree, v, node, memo))
        inner = ",".join(
            f"{sub(v, node)}:{format_rational(tree.adj[node][v])}" for v in kids
        )
        return f"({inner})"

    return sub(start, None) + ";"


# ---------------------------------------------------------------------------
# Distances and the Steiner oracle


def distance_matrix(tree: WeightedTree) -> DistanceMatrix:
    """Leaf-to-leaf path lengths as a :class:`DistanceMatrix`."""
    entries: dict[tuple[int, int], Fraction] = {}
    for i in range(1, tree.n + 1):
        dist = {i: Fraction(0)}
        stack = [i]
        while stack:
            u = stack.pop()
            for v, w in tree.adj[u].items():
                if v not in dist:
                    dist[v] = dist[u] + w
                    stack.append(v)
        for j in range(i + 1, tree.n + 1):
            entries[(i, j)] = dist[j]
    return DistanceMatrix(tree.n, entries)


def _dfs_order(tree: WeightedTree, root: int) -> tuple[list[int], dict[int, int | None]]:
    order: list[int] = []
    parent: dict[int, int | None] = {root: None}
    stack = [root]
    while stack:
        u = stack.pop()
        order.append(u)
        for v in sorted(tree.adj[u], reverse=True):
            if v != parent[u]:
                parent[v] = u
                stack.append(v)
    return order, parent


def _steiner_edges(tree: WeightedTree, V: Iterable[int]) -> list[tuple[int, int]]:
    """Edges of the minimal subtree spanning leaf set V, as (child, parent)."""
    vbit = 0
    for leaf in V:
        vbit |= 1 << (leaf - 1)
    root = next(iter(tree.adj))
    order, parent = _dfs_order(tree, root)
    below = {u: (1 << (u - 1)) if u <= tree.n else 0 for u in order}
    for u in reversed(order):
        p = parent[u]
        if p is not None:
            below[p] |= below[u]
    picked = []
    for u in order[1:]:
        b = below[u] & vbit
        if b != 0 and b != vbit:
            picked.append((u, parent[u]))
    return picked


def steiner_weight(tree: WeightedTree, V: Iterable[int]) -> Fraction:
    """Weight of the minimal subtree of ``tree`` containing leaf set V.

    This edge-split computation (an edge contributes iff both of its
    sides contain elements of V) is the independent oracle for the
    tour-minimum dissimilarity formula.
    """
    V = set(V)
    if len(V) < 2:
        raise ValueError("steiner_weight needs at least two leaves")
    if not V <= set(range(1, tree.n + 1)):
        raise ValueError(f"leaf subset out of range 1..{tree.n}")
    return sum(
        (tree.adj[u][p] for u, p in _steiner_edges(tree, V)), Fraction(0)
    )


# ---------------------------------------------------------------------------
# Well-numbering


def well_number(tree: WeightedTree, root: int) -> WellNumbering:
    """Label nodes by the inductive prefix rule and renumber leaves.

    The root gets the empty label; the i-th child (ordered by smallest
    descendant leaf) of a node labeled (a_1..a_s) gets (a_1..a_s, i).
    Ancestors always precede descendants, and for incomparable nodes the
    order is decided at their lowest common ancestor, so sorting leaves
    by label yields a numbering where subtrees hold consecutive blocks.
    """
    if root not in tree.adj:
        raise TreeError(f"root {root} is not a node of the tree")
    memo: dict = {}
    alpha: dict[int, AlphaLabel] = {root: AlphaLabel(())}
    stack = [(root, None)]
    while stack:
        node, parent = stack.pop()
        kids = [v for v in tree.adj[node] if v != parent]
        kids.sort(key=lambda v: _min_leaf_below(tree, v, node, memo))
        for idx, child in enumerate(kids, start=1):
            alpha[child] = alpha[node].child(idx)
            stack.append((child, node))
    leaf_order = tuple(sorted(range(1, tree.n + 1), key=lambda l: alpha[l]))
    relabel = {leaf: rank + 1 for rank, leaf in enumerate(leaf_order)}
    return WellNumbering(alpha, leaf_order, relabel)


# ---------------------------------------------------------------------------
# Contraction


def contract_subtree(tree: WeightedTree, R: Iterable[int]) -> Contraction:
    """Collapse the minimal subtree over leaf set R to a single leaf.

    Returns the contracted tree (relabeled to 1..n'), the weight of the
    collapsed subtree, the label of the new leaf, and the map from kept
    original leaves to their new labels.  The defining identity, with
    W the collapsed weight, is
    ``steiner(T, R + {i,j}) = steiner(T', {R', i', j'}) + W``.
    """
    R = sorted(set(R))
    if not R:
        raise ValueError("R must be non-empty")
    if not set(R) <= set(range(1, tree.n + 1)):
        raise ValueError(f"R must be a subset of the leaves 1..{tree.n}")
    if len(R) == tree.n:
        raise ValueError("cannot contract the entire leaf set")

    if len(R) == 1:
        inside = {R[0]}
        weight = Fraction(0)
    else:
        edges = _steiner_edges(tree, R)
        inside = {u for e in edges for u in e}
        weight = sum((tree.adj[u][p] for u, p in edges), Fraction(0))

    COLLAPSED = -1
    PENDANT = -2
    adj: dict[int, dict[int, Fraction]] = {COLLAPSED: {}}
    for u in tree.adj:
        if u not in inside:
            adj.setdefault(u, {})
    for u, nbrs in tree.adj.items():
        for v, w in nbrs.items():
            if u in inside and v in inside:
                continue
            if u in inside:
                continue  # handled from the outside endpoint
            if v in inside:
                adj[u][COLLAPSED] = w
                adj[COLLAPSED][u] = w
            else:
                adj[u][v] = w

    if len(adj[COLLAPSED]) == 1:
        collapsed_leaf = COLLAPSED
    else:
        adj[PENDANT] = {COLLAPSED: Fraction(0)}
        adj[COLLAPSED][PENDANT] = Fraction(0)
        collapsed_leaf = PENDANT

    kept = [l for l in range(1, tree.n + 1) if l not in set(R)]
    new_n = len(kept) + 1
    mapping = {leaf: idx + 1 for idx, leaf in enumerate(kept)}
    rename = dict(mapping)
    rename[collapsed_leaf] = new_n
    internals = sorted(u for u in adj if u not in rename)
    for offset, u in enumerate(internals):
        rename[u] = new_n + 1 + offset
    new_adj = {
        rename[u]: {rename[v]: w for v, w in nbrs.items()} for u, nbrs in adj.items()
    }
    contracted = WeightedTree(new_n, new_adj)
    return Contraction(contracted, weight, new_n, mapping)


# ---------------------------------------------------------------------------
# Generation and enumeration


def _default_weight_sampler(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(1, 24), rng.randint(1, 4))


def random_tree(
    n: int,
    seed: int,
    shape: str = "uniform-topology",
    weight_sampler: Callable[[random.Random], Fraction] | None = None,
) -> WeightedTree:
    """Deterministic random binary tree on leaves 1..n.

    ``uniform-topology`` draws the topology uniformly over all unrooted
    binary shapes (iterative insertion of each leaf into a uniformly
    chosen edge); ``caterpillar`` builds the path shape.  Weights come
    from ``weight_sampler(rng)`` (strictly positive rationals by
    default) and are assigned in sorted edge order.
    """
    if n < 3:
        raise TreeError("random_tree needs n >= 3")
    rng = random.Random(seed)
    if shape == "uniform-topology":
        edges: list[tuple[int, int]] = [(1, n + 1), (2, n + 1), (3, n + 1)]
        for k in range(4, n + 1):
            u, v = edges.pop(rng.randrange(len(edges)))
            mid = n + k - 2
            edges.extend([(u, mid), (v, mid), (k, mid)])
    elif shape == "caterpillar":
        edges = [(1, n + 1), (2, n + 1)]
        for i in range(2, n - 1):
            edges.extend([(n + i - 1, n + i), (i + 1, n + i)])
        edges.append((n, 2 * n - 2))
    else:
        raise ValueError(f"unknown shape {shape!r}")
    sampler = weight_sampler or _default_weight_sampler
    adj: dict[int, dict[int, Fraction]] = {}
    for u, v in sorted(tuple(sorted(e)) for e in edges):
        w = sampler(rng)
        adj.setdefault(u, {})[v] = w
        adj.setdefault(v, {})[u] = w
    return WeightedTree(n, adj)


class TopologyIterator:
    """Lazy enumeration of unrooted leaf-labeled binary topologies.

    Iterating yields each of the (2n-5)!! topologies on leaves 1..n
    exactly once, with unit edge weights.
    """

    def __init__(self, n: int, max_n: int = 8):
        if n < 3 or n > max_n:
            raise ValueError(f"n must be between 3 and {max_n}")
        self.n = n

    def _grow(self, k: int) -> Iterator[list[tuple[int, int]]]:
        n = self.n
        if k == 3:
            yield [(1, n + 1), (2, n + 1), (3, n + 1)]
            return
        mid = n + k - 2
        for edges in self._grow(k - 1):
            for idx in range(len(edges)):
                u, v = edges[idx]
                yield edges[:idx] + edges[idx + 1 :] + [(u, mid), (v, mid), (k, mid)]

    def __iter__(self) -> Iterator[WeightedTree]:
        one = Fraction(1)
        for edges in self._grow(self.n):
            adj: dict[int, dict[int, Fraction]] = {}
            for u, v in edges:
                adj.setdefault(u, {})[v] = one
                adj.setdefault(v, {})[u] = one
            yield WeightedTree(self.n, adj)


def enumerate_topologies(n: int, max_n: int = 8) -> TopologyIterator:
    """Every unrooted leaf-labeled binary topology on 1..n, once each.

    Topologies are generated by iteratively inserting leaf k into each
    edge of every topology on k-1 leaves, so the count over n leaves is
    the double factorial 1*3*5*...*(2n-5).  Edges carry unit weights.
    The cap ``max_n`` guards against accidentally huge enumerations.
    """
    return TopologyIterator(n, max_n)


# ---------------------------------------------------------------------------
# Equidistant realization of ultrametrics


def build_equidistant(D: DistanceMatrix) -> WeightedTree:
    """Realize an ultrametric by a rooted tree with equal root-leaf paths.

    Clusters are merged bottom-up at height D(i,j)/2; simultaneous
    merges at one height become a single multifurcation.  The result's
    root-to-leaf distance is max D(i,j) / 2 on every leaf and its
    distance matrix reproduces D exactly.
    """
    verdict = is_ultrametric(D)
    if not verdict:
        raise UltrametricViolation(verdict)
    n = D.n
    adj: dict[int, dict[int, Fraction]] = {i: {} for i in range(1, n + 1)}
    leaf_top = {i: i for i in range(1, n + 1)}  # leaf -> top node of its cluster
    height = {i: Fraction(0) for i in range(1, n + 1)}  # top node -> height
    next_id = n + 1
    for d in sorted(set(D.entries.values())):
        links: dict[int, set[int]] = {}
        for (i, j), v in D.entries.items():
            if v == d and leaf_top[i] != leaf_top[j]:
                links.setdefault(leaf_top[i], set()).add(leaf_top[j])
                links.setdefault(leaf_top[j], set()).add(leaf_top[i])
        done: set[int] = set()
        for start in sorted(links):
            if start in done:
                continue
            comp = {start}
            frontier = [start]
            while frontier:
                x = frontier.pop()
                for y in links.get(x, ()):
                    if y not in comp:
                        comp.add(y)
                        frontier.append(y)
            done |= comp
            top = next_id
            next_id += 1
            adj[top] = {}
            height[top] = d / 2
            for child in sorted(comp):
                w = d / 2 - height[child]
                adj[top][child] = w
                adj[child][top] = w
            for leaf, t in leaf_top.items():
                if t in comp:
                    leaf_top[leaf] = top
    tops = set(leaf_top.values())
    if len(tops) != 1:
        raise TreeError("internal error: merging did not produce a single cluster")
    return WeightedTree(n, adj, root=tops.pop())


# ---------------------------------------------------------------------------
# Reconstruction from a tree metric


def _normalized_adj(adj: dict[int, dict[int, Fraction]], n: int) -> dict[int, dict[int, Fraction]]:
    """Contract zero-weight edges between unlabeled nodes and suppress
    unlabeled degree-2 nodes; leaves 1..n are never touched."""
    adj = {u: dict(nbrs) for u, nbrs in adj.items()}
    changed = True
    while changed:
        changed = False
        for u in sorted(adj):
            if u <= n:
                continue
            deg = len(adj[u])
            if deg == 1:
                (v,) = adj[u]
                del adj[v][u]
                del adj[u]
                changed = True
                break
            if deg == 2:
                (a, wa), (b, wb) = sorted(adj[u].items())
                del adj[a][u]
                del adj[b][u]
                del adj[u]
                adj[a][b] = wa + wb
                adj[b][a] = wa + wb
                changed = True
                break
            merged = False
            for v in sorted(adj[u]):
                if v > n and adj[u][v] == 0:
                    del adj[u][v]
                    del adj[v][u]
                    for x, w in adj[v].items():
                        adj[u][x] = w
                        del adj[x][v]
                        adj[x][u] = w
                    del adj[v]
                    merged = True
                    break
            if merged:
                changed = True
                break
    return adj


def reconstruct_tree(D: DistanceMatrix) -> WeightedTree:
    """Recover the unique tree realizing a tree metric, by cherry picking.

    Requires the (non-strict) four-point condition, which subsumes
    non-negativity and the triangle inequality; otherwise raises
    :class:`FourPointViolation` with the violating quadruple.  At each
    step the lexicographically first pair (a, b) whose difference
    D(a,c) - D(b,c) is constant over all other active labels is merged
    at its meet point.  Zero-length internal edges are contracted, so
    the output has no unlabeled degree-2 nodes.
    """
    verdict = four_point_check(D, strict=False)
    if not verdict:
        raise FourPointViolation(verdict)
    n = D.n
    if n == 2:
        w = D.get(1, 2)
        return WeightedTree(2, {1: {2: w}, 2: {1: w}})

    dist: dict[tuple[int, int], Fraction] = dict(D.entries)

    def dget(a: int, b: int) -> Fraction:
        return dist[(a, b) if a < b else (b, a)]

    active = list(range(1, n + 1))
    adj: dict[int, dict[int, Fraction]] = {i: {} for i in range(1, n + 1)}
    next_id = n + 1
    while len(active) > 2:
        pair = None
        for a, b in combinations(sorted(active), 2):
            rest = [c for c in active if c != a and c != b]
            delta = dget(a, rest[0]) - dget(b, rest[0])
            if all(dget(a, c) - dget(b, c) == delta for c in rest[1:]):
                pair = (a, b)
                break
        if pair is None:
            raise TreeError("internal error: no mergeable pair in a tree metric")
        a, b = pair
        c0 = next(c for c in active if c != a and c != b)
        wa = (dget(a, b) + dget(a, c0) - dget(b, c0)) / 2
        wb = dget(a, b) - wa
        u = next_id
        next_id += 1
        adj[u] = {a: wa, b: wb}
        adj[a][u] = wa
        adj[b][u] = wb
        for c in active:
            if c not in (a, b):
                dist[(c, u) if c < u else (u, c)] = dget(a, c) - wa
        active = [c for c in active if c not in (a, b)] + [u]
    x, y = active
    w = dget(x, y)
    adj[x][y] = w
    adj[y][x] = w
    return WeightedTree(n, _normalized_adj(adj, n))


def same_tree(a: WeightedTree, b: WeightedTree) -> bool:
    """Equality of weighted trees as unrooted leaf-labeled objects.

    Both trees are normalized (zero-weight unlabeled edges contracted,
    unlabeled degree-2 nodes suppressed) and compared via canonical
    Newick strings.
    """
    if a.n != b.n:
        return False

    def canon(t: WeightedTree) -> str:
        return serialize_newick(WeightedTree(t.n, _normalized_adj(t.adj, t.n)))

    return canon(a) == canon(b)
