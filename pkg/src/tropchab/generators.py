"""Random and exhaustive graph/function generators used by property checks."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Iterator

from .metric_graph import EdgePiece, PLFunction, VertexWeightedMetricGraph


def multigraphs(
    max_vertices: int, max_edges: int, loops: bool = True, min_vertices: int = 1
) -> Iterator[tuple[int, tuple]]:
    """Connected multigraphs up to isomorphism as ``(n, sorted edge pairs)``."""
    for n in range(min_vertices, max_vertices + 1):
        pairs = [(i, j) for i in range(n) for j in range(i, n) if loops or i != j]
        perms = list(itertools.permutations(range(n)))
        for m in range(max(n - 1, 0), max_edges + 1):
            seen = set()
            for edges in itertools.combinations_with_replacement(pairs, m):
                if not _connected(n, edges):
                    continue
                canon = min(
                    tuple(sorted(tuple(sorted((p[a], p[b]))) for a, b in edges)) for p in perms
                )
                if canon in seen:
                    continue
                seen.add(canon)
                yield n, canon


def _connected(n: int, edges) -> bool:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        parent[find(a)] = find(b)
    return len({find(x) for x in range(n)}) == 1


def metric_graph_from_pairs(
    n: int, edges, lengths=None, weights=None
) -> VertexWeightedMetricGraph:
    lengths = lengths or [1] * len(edges)
    weights = weights or [0] * n
    return VertexWeightedMetricGraph.build(
        [(f"v{i}", weights[i]) for i in range(n)],
        [(f"e{k}", f"v{a}", f"v{b}", lengths[k]) for k, (a, b) in enumerate(edges)],
    )


def random_metric_graph(
    rng: random.Random,
    max_vertices: int = 6,
    max_extra_edges: int = 5,
    loops: bool = True,
    max_weight: int = 2,
) -> VertexWeightedMetricGraph:
    """Random connected graph: a random tree plus random extra edges."""
    n = rng.randint(1, max_vertices)
    edges = [(rng.randrange(i), i) for i in range(1, n)]
    for _ in range(rng.randint(0, max_extra_edges)):
        a, b = rng.randrange(n), rng.randrange(n)
        if a == b and not loops:
            continue
        edges.append((a, b))
    if rng.random() < 0.5:
        edges = [(b, a) for a, b in edges]
    lengths = [Fraction(rng.randint(1, 6), rng.randint(1, 3)) for _ in edges]
    weights = [rng.randint(0, max_weight) for _ in range(n)]
    return metric_graph_from_pairs(n, edges, lengths, weights)


def random_pl_function(
    rng: random.Random, G: VertexWeightedMetricGraph, max_cuts: int = 2
) -> PLFunction:
    """Random continuous integer-slope function.

    Each edge is split at random knots with random values; on each piece two
    integer slopes straddling the average slope are joined at the exact
    breakpoint that makes the rise come out right.
    """
    vals = {vid: Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for vid in G.vertex_ids()}
    pieces = {}
    for e in G.edges:
        cuts = sorted({Fraction(rng.randint(1, 9), 10) * e.length for _ in range(rng.randint(0, max_cuts))})
        knots = [Fraction(0)] + cuts + [e.length]
        kv = [vals[e.tail]] + [Fraction(rng.randint(-6, 6), rng.randint(1, 2)) for _ in cuts] + [
            vals[e.head]
        ]
        bps: list[Fraction] = []
        slopes: list[int] = []
        for (x0, x1), (y0, y1) in zip(zip(knots, knots[1:]), zip(kv, kv[1:])):
            length = x1 - x0
            avg = (y1 - y0) / length
            if avg.denominator == 1 and rng.random() < 0.3:
                sub_b, sub_s = [], [int(avg)]
            else:
                hi = (avg.numerator // avg.denominator) + 1 + rng.randint(0, 2)
                lo = -((-avg.numerator) // avg.denominator) - 1 - rng.randint(0, 2)
                # hi*b + lo*(length - b) = rise
                b = ((y1 - y0) - lo * length) / (hi - lo)
                if rng.random() < 0.5:
                    sub_b, sub_s = [x0 + b], [hi, lo]
                else:
                    sub_b, sub_s = [x1 - b], [lo, hi]
            if slopes:
                bps.append(x0)
            bps.extend(sub_b)
            slopes.extend(sub_s)
        pieces[e.id] = EdgePiece(tuple(bps), tuple(slopes))
    return PLFunction(G, vals, pieces)
