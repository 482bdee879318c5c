"""Eggers-Wall trees of plane curve germs.

The tree is assembled from two kinds of per-branch data: the characteristic
exponents with their ramification indices ``k``, and the pairwise contact
exponents.  A point of the tree at height ``h`` on the path of branch ``i``
is identified with the point at height ``h`` on the path of ``j`` exactly when
``h <= contact(i, j)``; so every point is determined by its height and by the
set of branches passing through it.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

from .exactnum import INF, ExtRat
from .puiseux import Curve, DuplicateBranchError, characteristic_exponents, contact, puiseux_pairs

__all__ = [
    "TreeError",
    "NonArchimedeanError",
    "EggersWallTree",
    "SlicePoint",
    "LevelSlice",
    "assemble_tree",
    "build_tree",
    "level_slice",
    "tree_isomorphic",
    "export_tree",
    "tree_to_json",
    "tree_from_json",
]


class TreeError(ValueError):
    pass


class NonArchimedeanError(TreeError):
    def __init__(self, triple: tuple[str, str, str], contacts: tuple[ExtRat, ExtRat, ExtRat]):
        self.triple = triple
        self.contacts = contacts
        a, b, c = triple
        super().__init__(
            f"contacts of branches {a}, {b}, {c} violate the non-archimedean property: "
            f"c({a},{b})={contacts[0]}, c({a},{c})={contacts[1]}, c({b},{c})={contacts[2]}"
        )


@dataclass(frozen=True)
class EggersWallTree:
    """Rooted tree with heights in ``[0, inf]`` and integer edge weights.

    ``nodes`` lists ``(node_id, height)``; ``edges`` lists
    ``(parent, child, weight)``; ``leaves`` maps leaf node ids to branch ids;
    ``branch_order`` is the input order of the branches, which fixes the
    canonical order of children (by least branch below them).
    """

    nodes: tuple[tuple[int, ExtRat], ...]
    edges: tuple[tuple[int, int, int], ...]
    leaves: tuple[tuple[int, str], ...]
    branch_order: tuple[str, ...]

    @cached_property
    def height(self) -> dict[int, ExtRat]:
        return dict(self.nodes)

    @cached_property
    def leaf_labels(self) -> dict[int, str]:
        return dict(self.leaves)

    @cached_property
    def leaf_of(self) -> dict[str, int]:
        return {b: n for n, b in self.leaves}

    @cached_property
    def parent(self) -> dict[int, tuple[int, int]]:
        """child -> (parent, weight of the edge into child)."""
        return {c: (p, w) for p, c, w in self.edges}

    @cached_property
    def children(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {n: [] for n, _ in self.nodes}
        for p, c, _ in self.edges:
            out[p].append(c)
        rank = self._branch_rank
        return {n: tuple(sorted(cs, key=lambda c: min(rank[b] for b in self.branches_below[c])))
                for n, cs in out.items()}

    @cached_property
    def root(self) -> int:
        roots = [n for n, _ in self.nodes if n not in self.parent]
        if len(roots) != 1:
            raise TreeError(f"expected exactly one root, found {len(roots)}")
        return roots[0]

    @cached_property
    def _branch_rank(self) -> dict[str, int]:
        return {b: i for i, b in enumerate(self.branch_order)}

    @cached_property
    def branches_below(self) -> dict[int, frozenset[str]]:
        below: dict[int, set[str]] = {n: set() for n, _ in self.nodes}
        for leaf, b in self.leaves:
            n = leaf
            while True:
                below[n].add(b)
                if n not in self.parent:
                    break
                n = self.parent[n][0]
        return {n: frozenset(s) for n, s in below.items()}

    def path(self, branch_id: str) -> list[int]:
        """Node ids from the root to the leaf of ``branch_id``."""
        n = self.leaf_of[branch_id]
        out = [n]
        while n in self.parent:
            n = self.parent[n][0]
            out.append(n)
        return out[::-1]

    def lca(self, a: str, b: str) -> int:
        pa, pb = self.path(a), self.path(b)
        last = pa[0]
        for x, y in zip(pa, pb):
            if x != y:
                break
            last = x
        return last

    def lca_height(self, a: str, b: str) -> ExtRat:
        return self.height[self.lca(a, b)]

    def interior_heights(self) -> list[Fraction]:
        """Sorted heights of vertices other than the root and the leaves."""
        hs = {h.fraction for n, h in self.nodes if n != self.root and not h.is_inf}
        return sorted(hs)

    def weight_at(self, branch_id: str, b: ExtRat) -> int:
        """Weight of the edge of ``branch_id`` containing the point just above ``b``."""
        b = ExtRat.of(b)
        path = self.path(branch_id)
        for child in path[1:]:
            if self.height[child] > b or self.height[child].is_inf:
                return self.parent[child][1]
        raise AssertionError("unreachable: leaves sit at infinity")

    def check_invariants(self) -> list[str]:
        """Structural invariants; returns a list of violations (empty if valid)."""
        problems = []
        h = self.height
        if h[self.root] != ExtRat(0):
            problems.append("root is not at height 0")
        for p, c, w in self.edges:
            if not h[p] < h[c]:
                problems.append(f"edge {p}->{c}: heights do not increase")
            if w < 1:
                problems.append(f"edge {p}->{c}: non-positive weight")
        leaves = {n for n, hh in self.nodes if not self.children[n]}
        if leaves != set(self.leaf_labels):
            problems.append("leaf labels do not match the childless nodes")
        if any(not h[n].is_inf for n in leaves) or any(
            hh.is_inf and n not in leaves for n, hh in self.nodes
        ):
            problems.append("leaves are not exactly the nodes at infinity")
        if sorted(self.leaf_labels.values()) != sorted(self.branch_order):
            problems.append("leaves are not in bijection with branches")
        for b in self.branch_order:
            path = self.path(b)
            ws = [self.parent[c][1] for c in path[1:]]
            if ws and ws[0] != 1:
                problems.append(f"branch {b}: first edge has weight {ws[0]}")
            for x, y in zip(ws, ws[1:]):
                if y % x:
                    problems.append(f"branch {b}: weight {x} does not divide {y}")
        for n, _ in self.nodes:
            if n == self.root or n in leaves:
                continue
            kids = self.children[n]
            w_in = self.parent[n][1]
            if len(kids) < 2 and all(self.parent[k][1] == w_in for k in kids):
                problems.append(f"node {n} is neither a branching nor a weight-increase vertex")
        return problems


@dataclass(frozen=True)
class SlicePoint:
    component_id: int
    weight: int
    branches_through: frozenset[str]


@dataclass(frozen=True)
class LevelSlice:
    height: ExtRat
    points: tuple[SlicePoint, ...]

    def __len__(self):
        return len(self.points)


def _contact_key(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


def assemble_tree(
    branch_ids: Sequence[str],
    char_data: Mapping[str, Sequence[tuple[Fraction, int]]],
    contacts: Mapping[tuple[str, str], ExtRat],
) -> EggersWallTree:
    """Glue the per-branch segments ``[0, inf]`` into an Eggers-Wall tree.

    ``char_data[b]`` lists ``(exponent, k)`` for the characteristic exponents
    of branch ``b``; ``contacts`` is keyed by sorted id pairs.
    """
    ids = list(branch_ids)
    rank = {b: i for i, b in enumerate(ids)}

    def c(a: str, b: str) -> ExtRat:
        return ExtRat.of(contacts[_contact_key(a, b)])

    for a, b, d in itertools.combinations(ids, 3):
        vals = sorted([c(a, b), c(a, d), c(b, d)])
        if vals[0] != vals[1]:
            raise NonArchimedeanError((a, b, d), (c(a, b), c(a, d), c(b, d)))
    for a, b in itertools.combinations(ids, 2):
        if c(a, b).is_inf:
            raise DuplicateBranchError(f"duplicate branch: {a} and {b}")

    def cluster(i: str, h: ExtRat) -> frozenset[str]:
        if h.is_inf:
            return frozenset([i])
        return frozenset([i] + [j for j in ids if j != i and c(i, j) >= h])

    # key of a tree point: (height, branches through it)
    edges: dict[tuple, tuple[tuple, int]] = {}
    for i in ids:
        chars = sorted(char_data.get(i, ()), key=lambda t: t[0])
        hs = {Fraction(0)} | {Fraction(e) for e, _ in chars}
        hs |= {c(i, j).fraction for j in ids if j != i}
        path = [ExtRat(h) for h in sorted(hs)] + [INF]
        for lo, hi in zip(path, path[1:]):
            w = 1
            for e, k in chars:
                if ExtRat(e) <= lo:
                    w *= k
            child = (hi, cluster(i, hi))
            parent = (lo, cluster(i, lo))
            prev = edges.get(child)
            if prev is not None and prev != (parent, w):
                raise TreeError(
                    f"inconsistent data: branches through height {hi} disagree below it"
                )
            edges[child] = (parent, w)

    root_key = (ExtRat(0), frozenset(ids))
    kids: dict[tuple, list[tuple]] = {}
    for child, (parent, _) in edges.items():
        kids.setdefault(parent, []).append(child)

    def order(key: tuple) -> int:
        return min(rank[b] for b in key[1])

    numbering: dict[tuple, int] = {}
    stack = [root_key]
    while stack:
        key = stack.pop()
        numbering[key] = len(numbering)
        stack.extend(sorted(kids.get(key, []), key=order, reverse=True))
    if len(numbering) != len(edges) + 1:
        raise TreeError("tree data is disconnected")

    nodes = tuple(sorted((n, key[0]) for key, n in numbering.items()))
    edge_list = tuple(sorted(
        ((numbering[p], numbering[ch], w) for ch, (p, w) in edges.items()), key=lambda e: e[1]
    ))
    leaves = tuple(sorted(
        (numbering[key], next(iter(key[1]))) for key in numbering if key[0].is_inf
    ))
    return EggersWallTree(nodes, edge_list, leaves, tuple(ids))


def build_tree(c: Curve) -> EggersWallTree:
    """Eggers-Wall tree of a curve given by Puiseux parametrisations."""
    chars = {}
    for s in c.branches:
        chars[s.branch_id] = [
            (e, p.k) for e, p in zip(characteristic_exponents(s), puiseux_pairs(s))
        ]
    contacts = {
        _contact_key(a.branch_id, b.branch_id): contact(a, b)
        for a, b in itertools.combinations(c.branches, 2)
    }
    return assemble_tree(c.branch_ids, chars, contacts)


def level_slice(t: EggersWallTree, b) -> LevelSlice:
    """Points of the tree lying just above height ``b`` (``b >= 1``)."""
    b = ExtRat.of(b)
    if b < 1:
        raise ValueError(f"level slices are defined for b >= 1, got {b}")
    points = []
    if b.is_inf:
        for branch in t.branch_order:
            leaf = t.leaf_of[branch]
            points.append(SlicePoint(leaf, t.parent[leaf][1], frozenset([branch])))
    else:
        for p, ch, w in t.edges:
            if t.height[p] <= b < t.height[ch]:
                points.append(SlicePoint(ch, w, t.branches_below[ch]))
        rank = t._branch_rank
        points.sort(key=lambda pt: min(rank[x] for x in pt.branches_through))
    return LevelSlice(b, tuple(points))


def _canonical(t: EggersWallTree, node: int, labeled: bool, weight_in: int):
    kids = tuple(sorted(
        (_canonical(t, ch, labeled, t.parent[ch][1]) for ch in t.children[node]), key=repr
    ))
    label = t.leaf_labels.get(node) if labeled else None
    return (str(t.height[node]), weight_in, label, kids)


def tree_isomorphic(a: EggersWallTree, b: EggersWallTree, labeled: bool = True) -> bool:
    """Height- and weight-preserving rooted isomorphism, optionally matching labels."""
    if len(a.nodes) != len(b.nodes):
        return False
    return _canonical(a, a.root, labeled, 0) == _canonical(b, b.root, labeled, 0)


def _dot(t: EggersWallTree) -> str:
    lines = ["digraph EggersWall {", "  rankdir=BT;"]
    for n, h in t.nodes:
        label = str(h)
        if n in t.leaf_labels:
            label = f"{t.leaf_labels[n]} ({h})"
        lines.append(f'  n{n} [label="{label}"];')
    for p, ch, w in t.edges:
        lines.append(f'  n{p} -> n{ch} [label="{w}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def tree_to_json(t: EggersWallTree) -> dict:
    return {
        "nodes": [{"id": n, "height": h.to_json()} for n, h in t.nodes],
        "edges": [{"from": p, "to": ch, "weight": w} for p, ch, w in t.edges],
        "leaves": {str(n): b for n, b in t.leaves},
        "branches": list(t.branch_order),
    }


def export_tree(t: EggersWallTree, format: str = "json") -> str:
    if format == "dot":
        return _dot(t)
    if format == "json":
        return json.dumps(tree_to_json(t), indent=2) + "\n"
    raise ValueError(f"unknown tree format {format!r}")


def tree_from_json(obj) -> EggersWallTree:
    if isinstance(obj, str):
        obj = json.loads(obj)
    nodes = tuple(sorted((int(n["id"]), ExtRat.from_json(n["height"])) for n in obj["nodes"]))
    edges = tuple(sorted(
        ((int(e["from"]), int(e["to"]), int(e["weight"])) for e in obj["edges"]), key=lambda e: e[1]
    ))
    leaves = tuple(sorted((int(k), str(v)) for k, v in obj["leaves"].items()))
    order = obj.get("branches")
    if order is None:
        order = [b for _, b in leaves]
    return EggersWallTree(nodes, edges, leaves, tuple(order))

