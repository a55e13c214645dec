"""Vertex-weighted metric graphs, piecewise linear functions and their divisors.

Edges are oriented ``tail -> head`` as stored; points on an edge are addressed
by their distance from the tail.  Graphs are compact, so leaf and boundary
vertices pick up ``ord`` terms from the slopes leaving them.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict, deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from ._linalg import solve
from .errors import (
    DiscontinuousFunction,
    InvalidGraph,
    PoleInRegion,
    SchemaError,
    SlopeMassMismatch,
)
from .padic import vp


@dataclass(frozen=True)
class Vertex:
    id: str
    weight: int = 0


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str
    length: Fraction

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head


@dataclass(frozen=True)
class VertexWeightedMetricGraph:
    vertices: tuple
    edges: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(
            self,
            "edges",
            tuple(Edge(e.id, e.tail, e.head, Fraction(e.length)) for e in self.edges),
        )
        vids = [v.id for v in self.vertices]
        if not vids:
            raise InvalidGraph("graph has no vertices")
        if len(set(vids)) != len(vids):
            raise InvalidGraph("duplicate vertex id")
        eids = [e.id for e in self.edges]
        if len(set(eids)) != len(eids):
            raise InvalidGraph("duplicate edge id")
        if set(vids) & set(eids):
            raise InvalidGraph("vertex and edge ids must be distinct")
        for v in self.vertices:
            if not isinstance(v.weight, int) or v.weight < 0:
                raise InvalidGraph(f"vertex {v.id} has invalid weight {v.weight!r}")
        vset = set(vids)
        for e in self.edges:
            if e.tail not in vset or e.head not in vset:
                raise InvalidGraph(f"edge {e.id} has an unknown endpoint")
            if e.length <= 0:
                raise InvalidGraph(f"edge {e.id} has nonpositive length")
        if not self._connected():
            raise InvalidGraph("graph is not connected")

    def _connected(self) -> bool:
        adj = self.adjacency()
        start = self.vertices[0].id
        seen = {start}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for e, _ in adj[u]:
                w = e.head if e.tail == u else e.tail
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == len(self.vertices)

    # construction helpers -------------------------------------------------
    @classmethod
    def build(
        cls,
        vertices: Iterable,
        edges: Iterable[tuple],
    ) -> VertexWeightedMetricGraph:
        """``vertices``: ids or ``(id, weight)``; ``edges``: ``(id, tail, head, length)``."""
        vs = []
        for v in vertices:
            if isinstance(v, tuple):
                vs.append(Vertex(v[0], v[1]))
            else:
                vs.append(Vertex(v, 0))
        es = [Edge(eid, a, b, Fraction(length)) for eid, a, b, length in edges]
        return cls(tuple(vs), tuple(es))

    @classmethod
    def from_json(cls, obj: Mapping) -> VertexWeightedMetricGraph:
        try:
            vs = [Vertex(str(v["id"]), int(v.get("weight", 0))) for v in obj["vertices"]]
            es = [
                Edge(str(e["id"]), str(e["from"]), str(e["to"]), Fraction(str(e["length"])))
                for e in obj.get("edges", [])
            ]
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"bad graph: {exc}") from exc
        return cls(tuple(vs), tuple(es))

    def to_json(self) -> dict:
        return {
            "vertices": [{"id": v.id, "weight": v.weight} for v in self.vertices],
            "edges": [
                {"id": e.id, "from": e.tail, "to": e.head, "length": str(e.length)}
                for e in self.edges
            ],
        }

    # queries -------------------------------------------------------------
    def vertex_ids(self) -> list[str]:
        return [v.id for v in self.vertices]

    def weight(self, vid: str) -> int:
        return self._vertex_map()[vid].weight

    def _vertex_map(self) -> dict:
        return {v.id: v for v in self.vertices}

    def edge(self, eid: str) -> Edge:
        for e in self.edges:
            if e.id == eid:
                return e
        raise InvalidGraph(f"unknown edge {eid}")

    def adjacency(self) -> dict[str, list[tuple[Edge, int]]]:
        """Per vertex, the edge ends at it: ``(edge, 0)`` for the tail, ``(edge, 1)`` for the head."""
        adj: dict[str, list] = {v.id: [] for v in self.vertices}
        for e in self.edges:
            adj[e.tail].append((e, 0))
            adj[e.head].append((e, 1))
        return adj

    def valency(self, vid: str) -> int:
        return len(self.adjacency()[vid])

    @property
    def first_betti(self) -> int:
        return len(self.edges) - len(self.vertices) + 1

    @property
    def genus(self) -> int:
        return sum(v.weight for v in self.vertices) + self.first_betti

    def point(self, text: str) -> GraphPoint:
        """Parse ``"v1"`` or ``"e1@1/2"`` into a point of this graph."""
        return GraphPoint.parse(text, self)

    def subdivide_loops(self) -> VertexWeightedMetricGraph:
        """Split every loop at its midpoint by a weight-0 vertex."""
        vs = list(self.vertices)
        es = []
        taken = {v.id for v in self.vertices} | {e.id for e in self.edges}
        for e in self.edges:
            if not e.is_loop:
                es.append(e)
                continue
            mid = _fresh(f"{e.id}_mid", taken)
            a = _fresh(f"{e.id}_a", taken)
            b = _fresh(f"{e.id}_b", taken)
            vs.append(Vertex(mid, 0))
            es.append(Edge(a, e.tail, mid, e.length / 2))
            es.append(Edge(b, mid, e.tail, e.length / 2))
        return VertexWeightedMetricGraph(tuple(vs), tuple(es))


def _fresh(name: str, taken: set) -> str:
    out = name
    k = 1
    while out in taken:
        out = f"{name}{k}"
        k += 1
    taken.add(out)
    return out


@dataclass(frozen=True)
class GraphPoint:
    """A vertex, or an interior point of an edge at ``offset`` from its tail."""

    vertex: str | None = None
    edge: str | None = None
    offset: Fraction | None = None

    @classmethod
    def at_vertex(cls, vid: str) -> GraphPoint:
        return cls(vertex=vid)

    @classmethod
    def on_edge(cls, G: VertexWeightedMetricGraph, eid: str, offset) -> GraphPoint:
        """Point on ``eid``; offsets 0 and the length snap to the endpoints."""
        e = G.edge(eid)
        offset = Fraction(offset)
        if offset == 0:
            return cls(vertex=e.tail)
        if offset == e.length:
            return cls(vertex=e.head)
        if not 0 < offset < e.length:
            raise InvalidGraph(f"offset {offset} outside edge {eid} of length {e.length}")
        return cls(edge=eid, offset=offset)

    @classmethod
    def parse(cls, text: str, G: VertexWeightedMetricGraph) -> GraphPoint:
        text = text.strip()
        if "@" in text:
            eid, off = text.split("@", 1)
            try:
                offset = Fraction(off)
            except (ValueError, ZeroDivisionError) as exc:
                raise SchemaError(f"bad offset in {text!r}") from exc
            return cls.on_edge(G, eid, offset)
        if text not in G.vertex_ids():
            raise SchemaError(f"unknown vertex {text!r}")
        return cls.at_vertex(text)

    @property
    def is_vertex(self) -> bool:
        return self.vertex is not None

    def __str__(self) -> str:
        return self.vertex if self.is_vertex else f"{self.edge}@{self.offset}"


@dataclass(frozen=True)
class EdgePiece:
    """Breakpoints (offsets from the tail) and the slopes between them."""

    breakpoints: tuple = ()
    slopes: tuple = (0,)


@dataclass(frozen=True)
class PLFunction:
    """Continuous piecewise linear function with integer slopes."""

    graph: VertexWeightedMetricGraph
    vertex_values: Mapping
    pieces: Mapping = field(default_factory=dict)

    def __post_init__(self):
        G = self.graph
        vals = {}
        for vid in G.vertex_ids():
            if vid not in self.vertex_values:
                raise SchemaError(f"missing value at vertex {vid}")
            vals[vid] = Fraction(self.vertex_values[vid])
        unknown = set(self.vertex_values) - set(vals)
        if unknown:
            raise SchemaError(f"values given at unknown vertices {sorted(unknown)}")
        pieces = {}
        for e in G.edges:
            piece = self.pieces.get(e.id, EdgePiece())
            bps = tuple(Fraction(b) for b in piece.breakpoints)
            slopes = tuple(piece.slopes)
            if len(slopes) != len(bps) + 1:
                raise SchemaError(f"edge {e.id}: need one more slope than breakpoints")
            for s in slopes:
                if isinstance(s, bool) or not isinstance(s, int):
                    if isinstance(s, Fraction) and s.denominator == 1:
                        continue
                    raise DiscontinuousFunction(f"edge {e.id}: slope {s!r} is not an integer")
            slopes = tuple(int(s) for s in slopes)
            if any(not 0 < b < e.length for b in bps) or list(bps) != sorted(set(bps)):
                raise SchemaError(f"edge {e.id}: breakpoints must increase strictly inside the edge")
            knots = (Fraction(0),) + bps + (e.length,)
            rise = sum(s * (b - a) for s, a, b in zip(slopes, knots, knots[1:]))
            if vals[e.tail] + rise != vals[e.head]:
                raise DiscontinuousFunction(
                    f"edge {e.id}: {vals[e.tail]} + {rise} does not reach {vals[e.head]}"
                )
            pieces[e.id] = EdgePiece(bps, slopes)
        unknown = set(self.pieces) - set(pieces)
        if unknown:
            raise SchemaError(f"pieces given for unknown edges {sorted(unknown)}")
        object.__setattr__(self, "vertex_values", vals)
        object.__setattr__(self, "pieces", pieces)

    @classmethod
    def from_json(cls, G: VertexWeightedMetricGraph, obj: Mapping) -> PLFunction:
        try:
            vals = {str(k): Fraction(str(v)) for k, v in obj["vertex_values"].items()}
            pieces = {}
            for eid, spec in obj.get("edges", {}).items():
                bps = tuple(Fraction(str(b)) for b in spec.get("breakpoints", []))
                slopes = tuple(spec["slopes"])
                for s in slopes:
                    if isinstance(s, bool) or not isinstance(s, int):
                        raise SchemaError(f"edge {eid}: slopes must be JSON integers")
                pieces[str(eid)] = EdgePiece(bps, slopes)
        except (KeyError, TypeError, AttributeError, ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"bad PL function: {exc}") from exc
        return cls(G, vals, pieces)

    def to_json(self) -> dict:
        return {
            "vertex_values": {k: str(v) for k, v in self.vertex_values.items()},
            "edges": {
                eid: {"breakpoints": [str(b) for b in p.breakpoints], "slopes": list(p.slopes)}
                for eid, p in self.pieces.items()
            },
        }

    # evaluation ----------------------------------------------------------
    def value_at(self, x: GraphPoint) -> Fraction:
        if x.is_vertex:
            return self.vertex_values[x.vertex]
        e = self.graph.edge(x.edge)
        piece = self.pieces[e.id]
        knots = (Fraction(0),) + piece.breakpoints + (e.length,)
        val = self.vertex_values[e.tail]
        for s, a, b in zip(piece.slopes, knots, knots[1:]):
            if x.offset <= b:
                return val + s * (x.offset - a)
            val += s * (b - a)
        return val

    def outgoing_slopes(self, x: GraphPoint) -> list[int]:
        """Derivatives of F along every tangent direction leaving ``x``."""
        if x.is_vertex:
            out = []
            for e, end in self.graph.adjacency()[x.vertex]:
                slopes = self.pieces[e.id].slopes
                out.append(slopes[0] if end == 0 else -slopes[-1])
            return out
        piece = self.pieces[x.edge]
        left = piece.slopes[sum(1 for b in piece.breakpoints if b < x.offset)]
        right = piece.slopes[sum(1 for b in piece.breakpoints if b <= x.offset)]
        return [right, -left]

    def slope_toward_head(self, eid: str, offset: Fraction, side: int) -> int:
        """Slope of F at ``offset`` measured on the left (``side=-1``) or right (``+1``)."""
        piece = self.pieces[eid]
        offset = Fraction(offset)
        if side < 0:
            idx = sum(1 for b in piece.breakpoints if b < offset)
        else:
            idx = sum(1 for b in piece.breakpoints if b <= offset)
        return piece.slopes[idx]

    def ord_at(self, x: GraphPoint) -> int:
        """Sum of incoming slopes: minus the sum of outgoing derivatives."""
        return -sum(self.outgoing_slopes(x))

    def divisor(self) -> GraphDivisor:
        coeffs: dict[GraphPoint, int] = {}
        for vid in self.graph.vertex_ids():
            coeffs[GraphPoint.at_vertex(vid)] = self.ord_at(GraphPoint.at_vertex(vid))
        for eid, piece in self.pieces.items():
            for b in piece.breakpoints:
                pt = GraphPoint(edge=eid, offset=b)
                coeffs[pt] = self.ord_at(pt)
        return GraphDivisor(coeffs)

    def max_abs_slope(self) -> int:
        return max((abs(s) for p in self.pieces.values() for s in p.slopes), default=0)

    def __add__(self, other: PLFunction) -> PLFunction:
        vals = {k: v + other.vertex_values[k] for k, v in self.vertex_values.items()}
        pieces = {}
        for e in self.graph.edges:
            a, b = self.pieces[e.id], other.pieces[e.id]
            bps = tuple(sorted(set(a.breakpoints) | set(b.breakpoints)))
            slopes = []
            knots = (Fraction(0),) + bps + (e.length,)
            for lo, hi in zip(knots, knots[1:]):
                mid = (lo + hi) / 2
                slopes.append(_slope_at(a, mid) + _slope_at(b, mid))
            pieces[e.id] = _merge_pieces(bps, slopes)
        return PLFunction(self.graph, vals, pieces)

    def __neg__(self) -> PLFunction:
        return PLFunction(
            self.graph,
            {k: -v for k, v in self.vertex_values.items()},
            {
                eid: EdgePiece(p.breakpoints, tuple(-s for s in p.slopes))
                for eid, p in self.pieces.items()
            },
        )

    def same_function(self, other: PLFunction) -> bool:
        """Equality as functions, ignoring redundant breakpoints."""
        if self.vertex_values != other.vertex_values:
            return False
        return all(
            _merge_pieces(a.breakpoints, a.slopes) == _merge_pieces(b.breakpoints, b.slopes)
            for a, b in ((self.pieces[k], other.pieces[k]) for k in self.pieces)
        )


def _piece_index(bps: tuple, offset: Fraction) -> int:
    return sum(1 for b in bps if b < offset)


def _slope_at(piece: EdgePiece, offset: Fraction) -> int:
    return piece.slopes[_piece_index(piece.breakpoints, offset)]


def _merge_pieces(bps, slopes) -> EdgePiece:
    """Drop breakpoints where the slope does not change."""
    out_b: list = []
    out_s = [slopes[0]]
    for b, s in zip(bps, slopes[1:]):
        if s == out_s[-1]:
            continue
        out_b.append(b)
        out_s.append(s)
    return EdgePiece(tuple(out_b), tuple(out_s))


class GraphDivisor:
    """Finite formal sum of graph points with integer coefficients."""

    def __init__(self, coeffs: Mapping | Iterable = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[GraphPoint, int] = defaultdict(int)
        for pt, c in items:
            acc[pt] += int(c)
        self._coeffs = {pt: c for pt, c in acc.items() if c != 0}

    @classmethod
    def from_json(cls, G: VertexWeightedMetricGraph, obj: Mapping) -> GraphDivisor:
        if not isinstance(obj, Mapping):
            raise SchemaError("divisor must be an object mapping points to integers")
        items = []
        for k, v in obj.items():
            if isinstance(v, bool) or not isinstance(v, int):
                raise SchemaError(f"coefficient of {k!r} must be an integer")
            items.append((GraphPoint.parse(str(k), G), v))
        return cls(items)

    def to_json(self) -> dict:
        return {str(pt): c for pt, c in sorted(self._coeffs.items(), key=lambda kv: _sort_key(kv[0]))}

    def items(self):
        return self._coeffs.items()

    def support(self) -> list[GraphPoint]:
        return list(self._coeffs)

    def __getitem__(self, pt: GraphPoint) -> int:
        return self._coeffs.get(pt, 0)

    def __len__(self) -> int:
        return len(self._coeffs)

    @property
    def degree(self) -> int:
        return sum(self._coeffs.values())

    def is_effective(self) -> bool:
        return all(c >= 0 for c in self._coeffs.values())

    def __add__(self, other: GraphDivisor) -> GraphDivisor:
        return GraphDivisor(list(self.items()) + list(other.items()))

    def __neg__(self) -> GraphDivisor:
        return GraphDivisor({pt: -c for pt, c in self.items()})

    def __sub__(self, other: GraphDivisor) -> GraphDivisor:
        return self + (-other)

    def __eq__(self, other) -> bool:
        return isinstance(other, GraphDivisor) and self._coeffs == other._coeffs

    def __hash__(self):
        return hash(frozenset(self._coeffs.items()))

    def __repr__(self) -> str:
        return f"GraphDivisor({self.to_json()})"


def _sort_key(pt: GraphPoint):
    return (0, pt.vertex, Fraction(0)) if pt.is_vertex else (1, pt.edge, pt.offset)


def divisor_of(F: PLFunction) -> GraphDivisor:
    return F.divisor()


def ord_at(F: PLFunction, x: GraphPoint) -> int:
    return F.ord_at(x)


def canonical_divisor(G: VertexWeightedMetricGraph) -> GraphDivisor:
    """``sum (2*weight - 2 + valency) (x)`` over the vertices; loops count twice."""
    return GraphDivisor(
        {GraphPoint.at_vertex(v.id): 2 * v.weight - 2 + G.valency(v.id) for v in G.vertices}
    )


def genus(G: VertexWeightedMetricGraph) -> int:
    return G.genus


@dataclass(frozen=True)
class SectionCheck:
    ok: bool
    witness: GraphPoint | None = None


def is_canonical_section(F: PLFunction, G: VertexWeightedMetricGraph | None = None) -> SectionCheck:
    """Whether ``div(F) + K`` is effective; otherwise a point where it is negative."""
    G = G or F.graph
    total = F.divisor() + canonical_divisor(G)
    bad = sorted((pt for pt, c in total.items() if c < 0), key=_sort_key)
    return SectionCheck(not bad, bad[0] if bad else None)


def max_abs_slope(F: PLFunction) -> int:
    return F.max_abs_slope()


def slope_bound(G: VertexWeightedMetricGraph, no_leaves: bool = False) -> int:
    """``2g - 1``, or ``2g - 2`` when the graph has no genus-zero leaves."""
    return 2 * G.genus - (2 if no_leaves else 1)


def check_slope_bound(F: PLFunction, G: VertexWeightedMetricGraph | None = None) -> bool:
    G = G or F.graph
    return F.max_abs_slope() <= slope_bound(G)


def zeros_from_slopes(
    G: VertexWeightedMetricGraph, x: str, star: Mapping[str, Fraction], F: PLFunction
) -> int:
    """Sum of the slopes of F pointing into the open star of ``x``.

    ``star`` gives, for every edge at ``x``, a cut offset in that edge's own
    coordinate; the region is ``x`` plus the open segments from ``x`` to the
    cuts.  The slope sum is compared against the divisor mass in the region.
    """
    adj = G.adjacency()[x]
    cut_edges = {e.id for e, _ in adj}
    for e, _ in adj:
        if e.is_loop:
            raise InvalidGraph(f"edge {e.id} is a loop; subdivide loops first")
    if set(star) != cut_edges:
        raise SchemaError(f"star must give a cut for exactly the edges {sorted(cut_edges)}")
    total = 0
    mass = F.ord_at(GraphPoint.at_vertex(x))
    if mass < 0:
        raise PoleInRegion(f"pole of order {-mass} at {x}")
    for e, end in adj:
        cut = Fraction(star[e.id])
        if not 0 < cut < e.length:
            raise InvalidGraph(f"cut {cut} not interior to edge {e.id}")
        piece = F.pieces[e.id]
        if end == 0:
            total += -F.slope_toward_head(e.id, cut, -1)
            inside = [b for b in piece.breakpoints if b < cut]
        else:
            total += F.slope_toward_head(e.id, cut, +1)
            inside = [b for b in piece.breakpoints if b > cut]
        for b in inside:
            o = F.ord_at(GraphPoint(edge=e.id, offset=b))
            if o < 0:
                raise PoleInRegion(f"pole of order {-o} at {e.id}@{b}")
            mass += o
    if total != mass:
        raise SlopeMassMismatch(f"inward slopes sum to {total} but divisor mass is {mass}")
    return total


def grid_canonical_sections(
    G: VertexWeightedMetricGraph, subdivisions: int = 2
) -> list[PLFunction]:
    """Every F (up to constants) with ``div(F) + K`` effective and breakpoints on a grid.

    Each edge is cut into ``subdivisions`` equal segments.  F is linear on each
    segment, so it is determined up to a constant by the effective divisor
    ``D = div(F) + K`` of degree ``2g - 2`` on the grid nodes: we solve the
    weighted Laplacian system for every such D and keep the integer-slope
    solutions.  No slope bound is assumed.
    """
    k = subdivisions
    if k < 1:
        raise InvalidGraph("subdivisions must be >= 1")
    nodes: list[tuple] = [("v", v.id) for v in G.vertices]
    index = {nd: i for i, nd in enumerate(nodes)}
    segments = []  # (i, j, conductance, edge id, segment number)
    for e in G.edges:
        chain = [index[("v", e.tail)]]
        for j in range(1, k):
            index[("e", e.id, j)] = len(nodes)
            nodes.append(("e", e.id, j))
            chain.append(index[("e", e.id, j)])
        chain.append(index[("v", e.head)])
        for j, (a, b) in enumerate(zip(chain, chain[1:])):
            segments.append((a, b, Fraction(k) / e.length, e.id, j))
    n = len(nodes)
    K = canonical_divisor(G)
    kvec = [0] * n
    for v in G.vertices:
        kvec[index[("v", v.id)]] = K[GraphPoint.at_vertex(v.id)]
    degree = 2 * G.genus - 2
    if degree < 0:
        return []

    lap = [[Fraction(0)] * n for _ in range(n)]
    for a, b, c, _, _ in segments:
        if a == b:
            continue
        lap[a][a] += c
        lap[b][b] += c
        lap[a][b] -= c
        lap[b][a] -= c
    # columns of the inverse reduced Laplacian (F pinned to 0 at node 0)
    red = [row[1:] for row in lap[1:]]
    cols = []
    for i in range(n - 1):
        unit = [0] * (n - 1)
        unit[i] = 1
        cols.append(solve(red, unit) if n > 1 else [])
    inv = [[cols[j][i] for j in range(n - 1)] for i in range(n - 1)]
    base = [sum(-inv[i][j] * kvec[j + 1] for j in range(n - 1)) for i in range(n - 1)]
    den = 1
    for x in [x for row in inv for x in row] + base:
        den = math.lcm(den, x.denominator)
    inv_i = np.array([[int(x * den) for x in row] for row in inv], dtype=object).reshape(
        n - 1, n - 1
    )
    base_i = np.array([int(x * den) for x in base], dtype=object)

    combos = list(itertools.combinations_with_replacement(range(n), degree))
    dmat = np.zeros((len(combos), n), dtype=np.int64)
    for r, combo in enumerate(combos):
        for i in combo:
            dmat[r, i] += 1
    if n > 1:
        fvals = dmat[:, 1:].astype(object).dot(inv_i.T) + base_i
        fvals = np.concatenate([np.zeros((len(combos), 1), dtype=object), fvals], axis=1)
    else:
        fvals = np.zeros((len(combos), 1), dtype=object)
    ok = np.ones(len(combos), dtype=bool)
    for a, b, c, _, _ in segments:
        rise = (fvals[:, b] - fvals[:, a]) * c.numerator
        ok &= np.array([x % (den * c.denominator) == 0 for x in rise], dtype=bool)

    out = []
    for r in np.nonzero(ok)[0]:
        vals = {v.id: Fraction(int(fvals[r, index[("v", v.id)]]), den) for v in G.vertices}
        pieces = {}
        per_edge: dict[str, list] = defaultdict(list)
        for a, b, c, eid, _ in segments:
            per_edge[eid].append(int((Fraction(int(fvals[r, b] - fvals[r, a]), den) * c)))
        for e in G.edges:
            bps = tuple(e.length * j / k for j in range(1, k))
            pieces[e.id] = _merge_pieces(bps, per_edge[e.id])
        out.append(PLFunction(G, vals, pieces))
    return out


# ---------------------------------------------------------------------------
# slope formula on a segment skeleton
#
# A closed annulus p^-L <= |t| <= 1 retracts onto the segment [0, L]; the point
# at distance s is the Gauss point of radius p^-s.  For a polynomial f the
# function F(s) = -log_p |f|_s is min over i of v(a_i) + i*s: the Newton polygon
# read sideways.  Its slope just below s is the number of zeros with valuation
# >= s, so crossing s the slope drops by the number of zeros of valuation
# exactly s, which is ord_s(F).  For f = p + t this gives F(s) = min(1, s) with
# one zero at s = 1.


def segment_graph(length) -> VertexWeightedMetricGraph:
    """The segment ``u --e-- w`` of the given length; ``u`` is the outer end s = 0."""
    return VertexWeightedMetricGraph.build(["u", "w"], [("e", "u", "w", Fraction(length))])


def _segment_function(G: VertexWeightedMetricGraph, value_at, kinks) -> PLFunction:
    e = G.edge("e")
    bps = sorted({Fraction(k) for k in kinks if 0 < k < e.length})
    knots = [Fraction(0)] + bps + [e.length]
    slopes = []
    for a, b in zip(knots, knots[1:]):
        rise = value_at(b) - value_at(a)
        slope = rise / (b - a)
        if slope.denominator != 1:
            raise DiscontinuousFunction(f"non-integer slope {slope} on ({a}, {b})")
        slopes.append(int(slope))
    piece = _merge_pieces(tuple(bps), tuple(slopes))
    return PLFunction(G, {"u": value_at(Fraction(0)), "w": value_at(e.length)}, {"e": piece})


def gauss_point_function(coeffs, p: int, length) -> PLFunction:
    """F(s) = min_i v(a_i) + i*s on ``[0, length]`` from the coefficients a_0, a_1, ..."""
    G = segment_graph(length)
    pts = [(i, vp(Fraction(c), p)) for i, c in enumerate(coeffs) if c != 0]
    if not pts:
        raise SchemaError("the zero polynomial has no slope function")

    def value_at(s):
        return min(v + i * s for i, v in pts)

    kinks = [
        Fraction(v1 - v2, i2 - i1)
        for (i1, v1), (i2, v2) in itertools.combinations(pts, 2)
    ]
    return _segment_function(G, value_at, kinks)


def root_valuation_function(roots, p: int, length, leading=1) -> PLFunction:
    """F(s) = v(c) + sum m * min(s, v(r)) for ``c * prod (t - r)^m``.

    ``roots`` is a sequence of ``(r, m)``; the root 0 has valuation infinity.
    """
    G = segment_graph(length)
    vals = [(vp(Fraction(r), p), m) for r, m in roots]
    base = vp(Fraction(leading), p)

    def value_at(s):
        return base + sum(m * min(s, v) for v, m in vals)

    kinks = [v for v, _ in vals if v != math.inf]
    return _segment_function(G, value_at, kinks)


def pushed_root_divisor(roots, p: int, length) -> GraphDivisor:
    """Roots whose valuation lies strictly inside ``(0, length)``, placed at that distance."""
    G = segment_graph(length)
    items = []
    for r, m in roots:
        v = vp(Fraction(r), p)
        if v != math.inf and 0 < v < G.edge("e").length:
            items.append((GraphPoint.on_edge(G, "e", v), m))
    return GraphDivisor(items)


def interior_divisor(D: GraphDivisor) -> GraphDivisor:
    """The part of ``D`` supported away from vertices."""
    return GraphDivisor((pt, c) for pt, c in D.items() if not pt.is_vertex)
