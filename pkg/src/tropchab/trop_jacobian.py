"""Tropical Jacobians through the edge-length pairing on cycles.

Chains are dictionaries ``edge id -> coefficient``; a path chain stores signed
lengths, a cycle stores signed integer multiplicities.  The pairing of a path
chain with a cycle is ``sum P[e] * c[e]`` and the pairing of two cycles is
``sum c[e] * c'[e] * length(e)``.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from ._linalg import det, solve
from .errors import InvalidGraph, NonzeroDegree
from .metric_graph import GraphDivisor, GraphPoint, VertexWeightedMetricGraph


@dataclass(frozen=True)
class SpanningTree:
    """Rooted spanning tree: ``parent[v] = (edge id, sign)`` walking from v to its parent."""

    graph: VertexWeightedMetricGraph
    root: str
    parent: Mapping

    @classmethod
    def bfs(
        cls, G: VertexWeightedMetricGraph, root: str | None = None, rng: random.Random | None = None
    ) -> SpanningTree:
        """Breadth-first tree; a ``rng`` shuffles the edge order for a different tree."""
        root = root or G.vertices[0].id
        adj = G.adjacency()
        parent: dict[str, tuple] = {}
        seen = {root}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            ends = list(adj[u])
            if rng is not None:
                rng.shuffle(ends)
            for e, end in ends:
                w = e.head if end == 0 else e.tail
                if w in seen:
                    continue
                seen.add(w)
                # from w back to u along e: forward iff w is the tail
                parent[w] = (e.id, 1 if e.tail == w else -1)
                queue.append(w)
        return cls(G, root, parent)

    @property
    def edge_ids(self) -> set[str]:
        return {eid for eid, _ in self.parent.values()}

    def to_root(self, v: str) -> dict[str, int]:
        chain: dict[str, int] = {}
        while v != self.root:
            eid, sign = self.parent[v]
            chain[eid] = chain.get(eid, 0) + sign
            e = self.graph.edge(eid)
            v = e.head if sign == 1 else e.tail
        return chain

    def path(self, u: str, v: str) -> dict[str, int]:
        """Integer chain of the tree path from ``u`` to ``v``."""
        return _clean(_combine(self.to_root(u), self.to_root(v), -1))

    def length_chain_from_root(self, x: GraphPoint) -> dict[str, Fraction]:
        """Signed-length chain of a path from the root to ``x``."""
        G = self.graph
        if x.is_vertex:
            base = self.path(self.root, x.vertex)
            return {eid: c * G.edge(eid).length for eid, c in base.items()}
        e = G.edge(x.edge)
        base = self.path(self.root, e.tail)
        chain = {eid: c * G.edge(eid).length for eid, c in base.items()}
        chain[e.id] = chain.get(e.id, 0) + x.offset
        return _clean(chain)


def _combine(a: Mapping, b: Mapping, sign: int) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + sign * v
    return out


def _clean(chain: Mapping) -> dict:
    return {k: v for k, v in chain.items() if v != 0}


def boundary(G: VertexWeightedMetricGraph, chain: Mapping) -> dict[str, int]:
    out: dict[str, int] = {}
    for eid, c in chain.items():
        e = G.edge(eid)
        out[e.head] = out.get(e.head, 0) + c
        out[e.tail] = out.get(e.tail, 0) - c
    return _clean(out)


@dataclass(frozen=True)
class CycleBasis:
    graph: VertexWeightedMetricGraph
    tree: SpanningTree
    cycles: tuple  # tuple of {edge id: int}

    @classmethod
    def from_graph(cls, G: VertexWeightedMetricGraph, tree: SpanningTree | None = None) -> CycleBasis:
        """Fundamental cycles: each non-tree edge, closed up by the tree path back."""
        tree = tree or SpanningTree.bfs(G)
        in_tree = tree.edge_ids
        cycles = []
        for e in G.edges:
            if e.id in in_tree:
                continue
            cyc = {e.id: 1}
            cyc = _clean(_combine(cyc, tree.path(e.head, e.tail), 1))
            cycles.append(cyc)
        return cls(G, tree, tuple(cycles))

    @classmethod
    def from_cycles(
        cls, G: VertexWeightedMetricGraph, cycles: Sequence[Mapping], tree: SpanningTree | None = None
    ) -> CycleBasis:
        """Use the given cycles after checking they form a Z-basis of H_1."""
        tree = tree or SpanningTree.bfs(G)
        cycles = tuple(_clean({k: int(v) for k, v in c.items()}) for c in cycles)
        for c in cycles:
            if boundary(G, c):
                raise InvalidGraph(f"chain {c} is not closed")
        non_tree = [e.id for e in G.edges if e.id not in tree.edge_ids]
        if len(cycles) != len(non_tree):
            raise InvalidGraph(f"need {len(non_tree)} cycles, got {len(cycles)}")
        # a cycle is determined by its non-tree coordinates
        m = [[c.get(eid, 0) for eid in non_tree] for c in cycles]
        if m and abs(det(m)) != 1:
            raise InvalidGraph("cycles do not form a basis of the integral homology")
        return cls(G, tree, cycles)

    @property
    def rank(self) -> int:
        return len(self.cycles)


def pair_cycles(G: VertexWeightedMetricGraph, a: Mapping, b: Mapping) -> Fraction:
    return sum((Fraction(c) * b.get(eid, 0) * G.edge(eid).length for eid, c in a.items()), Fraction(0))


def pair_path(path: Mapping, cycle: Mapping) -> Fraction:
    return sum((Fraction(v) * cycle.get(eid, 0) for eid, v in path.items()), Fraction(0))


@dataclass(frozen=True)
class PeriodLattice:
    basis: CycleBasis
    gram: tuple  # tuple of tuples of Fraction

    @property
    def rank(self) -> int:
        return len(self.gram)

    def is_positive_definite(self) -> bool:
        return all(det([row[:k] for row in self.gram[:k]]) > 0 for k in range(1, self.rank + 1))

    def contains(self, vector: Sequence) -> bool:
        """Whether ``vector`` is an integer combination of the gram rows."""
        if self.rank == 0:
            return True
        z = solve([list(row) for row in self.gram], list(vector))
        return all(x.denominator == 1 for x in z)

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "gram": [[str(x) for x in row] for row in self.gram],
            "cycles": [dict(sorted(c.items())) for c in self.basis.cycles],
        }


def period_lattice(G: VertexWeightedMetricGraph, basis: CycleBasis | None = None) -> PeriodLattice:
    basis = basis or CycleBasis.from_graph(G)
    gram = tuple(
        tuple(pair_cycles(G, a, b) for b in basis.cycles) for a in basis.cycles
    )
    return PeriodLattice(basis, gram)


@dataclass(frozen=True)
class TorusPoint:
    coordinates: tuple
    lattice: PeriodLattice

    def __sub__(self, other: TorusPoint) -> TorusPoint:
        return TorusPoint(
            tuple(a - b for a, b in zip(self.coordinates, other.coordinates)), self.lattice
        )

    def is_zero(self) -> bool:
        return self.lattice.contains(self.coordinates)

    def __eq__(self, other) -> bool:
        return isinstance(other, TorusPoint) and (self - other).is_zero()

    def __hash__(self):
        return hash(self.lattice.rank)


def abel_jacobi(
    G: VertexWeightedMetricGraph,
    basepoint: GraphPoint,
    x: GraphPoint,
    lattice: PeriodLattice | None = None,
    path_tree: SpanningTree | None = None,
) -> TorusPoint:
    """Pairings of a path from ``basepoint`` to ``x`` with the basis cycles.

    Paths run through ``path_tree`` (default: the basis tree); another tree
    changes the result by a lattice vector.
    """
    lattice = lattice or period_lattice(G)
    tree = path_tree or lattice.basis.tree
    chain = _combine(tree.length_chain_from_root(x), tree.length_chain_from_root(basepoint), -1)
    coords = tuple(pair_path(chain, c) for c in lattice.basis.cycles)
    return TorusPoint(coords, lattice)


def is_principal(
    G: VertexWeightedMetricGraph, D: GraphDivisor, lattice: PeriodLattice | None = None
) -> bool:
    if D.degree != 0:
        raise NonzeroDegree(f"divisor has degree {D.degree}")
    lattice = lattice or period_lattice(G)
    base = GraphPoint.at_vertex(lattice.basis.tree.root)
    total = [Fraction(0)] * lattice.rank
    for pt, c in D.items():
        coords = abel_jacobi(G, base, pt, lattice).coordinates
        total = [t + c * x for t, x in zip(total, coords)]
    return lattice.contains(total)


def derivative_vectors(
    G: VertexWeightedMetricGraph, v: str, lattice: PeriodLattice | None = None
) -> list[tuple[str, tuple]]:
    """Per-unit-length derivative of the Abel-Jacobi map leaving ``v`` along each edge end."""
    lattice = lattice or period_lattice(G)
    out = []
    for e, end in G.adjacency()[v]:
        sign = 1 if end == 0 else -1
        out.append((e.id, tuple(sign * c.get(e.id, 0) for c in lattice.basis.cycles)))
    return out


def balancing_check(G: VertexWeightedMetricGraph, basepoint: GraphPoint | None = None) -> bool:
    """Outgoing derivative vectors sum to zero at every vertex.

    The basepoint only translates the map, so it does not enter.
    """
    lattice = period_lattice(G)
    for v in G.vertex_ids():
        vecs = [vec for _, vec in derivative_vectors(G, v, lattice)]
        if any(sum(col) != 0 for col in zip(*vecs)):
            return False
    return True


def reduced_binary_form(gram: Sequence[Sequence]) -> tuple[Fraction, Fraction, Fraction]:
    """Gauss-reduced ``(a, b, c)`` with ``0 <= 2b <= a <= c``; a GL_2(Z) invariant."""
    a, b, c = Fraction(gram[0][0]), Fraction(gram[0][1]), Fraction(gram[1][1])
    while True:
        # translate: b -> b - k a
        k = _round_half(b / a)
        c = c - 2 * k * b + k * k * a
        b = b - k * a
        if a > c:
            a, c = c, a
            continue
        break
    return a, abs(b), c


def _round_half(q: Fraction) -> int:
    return (2 * q.numerator + q.denominator) // (2 * q.denominator)


def gram_congruent(g1: Sequence[Sequence], g2: Sequence[Sequence]) -> bool:
    """Whether two Gram matrices differ by an integral change of basis of determinant +-1.

    Decided by canonical forms for rank at most two.
    """
    n = len(g1)
    if n != len(g2):
        return False
    if n == 0:
        return True
    if n == 1:
        return Fraction(g1[0][0]) == Fraction(g2[0][0])
    if n == 2:
        return reduced_binary_form(g1) == reduced_binary_form(g2)
    raise NotImplementedError("congruence test only for rank <= 2; compare cycle lattices instead")


def same_cycle_lattice(a: CycleBasis, b: CycleBasis) -> bool:
    """Mutual membership of two cycle bases of the same graph in each other's span."""
    if a.rank != b.rank:
        return False

    def coords(basis: CycleBasis, cyc: Mapping) -> list | None:
        non_tree = [e.id for e in basis.graph.edges if e.id not in basis.tree.edge_ids]
        m = [[c.get(eid, 0) for c in basis.cycles] for eid in non_tree]
        z = solve(m, [cyc.get(eid, 0) for eid in non_tree])
        rebuilt: dict = {}
        for zi, c in zip(z, basis.cycles):
            rebuilt = _combine(rebuilt, {k: zi * v for k, v in c.items()}, 1)
        if _clean(rebuilt) != _clean(dict(cyc)):
            return None
        return z

    for x, y in ((a, b), (b, a)):
        for cyc in y.cycles:
            z = coords(x, cyc)
            if z is None or any(t.denominator != 1 for t in z):
                return False
    return True
