"""Chip-firing on finite multigraphs: reduced divisors and Baker-Norine rank."""

from __future__ import annotations

import itertools
from collections import Counter, deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from ._linalg import solve
from .errors import InvalidGraph, PreconditionNotMet, SchemaError


@dataclass(frozen=True)
class FiniteGraph:
    """Connected loopless multigraph; ``edges`` is a multiset of vertex pairs."""

    vertices: tuple
    edges: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        if not self.vertices:
            raise InvalidGraph("graph has no vertices")
        if len(set(self.vertices)) != len(self.vertices):
            raise InvalidGraph("duplicate vertex")
        vset = set(self.vertices)
        for a, b in self.edges:
            if a not in vset or b not in vset:
                raise InvalidGraph(f"edge ({a}, {b}) has an unknown endpoint")
            if a == b:
                raise InvalidGraph(f"loop at {a}; chip-firing graphs are loopless")
        seen = {self.vertices[0]}
        queue = deque(seen)
        nbrs = self.neighbours()
        while queue:
            u = queue.popleft()
            for w in nbrs[u]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        if len(seen) != len(self.vertices):
            raise InvalidGraph("graph is not connected")

    @classmethod
    def from_json(cls, obj: Mapping) -> FiniteGraph:
        try:
            vs = tuple(str(v) for v in obj["vertices"])
            es = tuple((str(a), str(b)) for a, b in obj["edges"])
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad finite graph: {exc}") from exc
        return cls(vs, es)

    def neighbours(self) -> dict:
        out: dict = {v: [] for v in self.vertices}
        for a, b in self.edges:
            out[a].append(b)
            out[b].append(a)
        return out

    def multiplicity(self) -> dict:
        """``mult[u][w]`` = number of edges between u and w."""
        out: dict = {v: Counter() for v in self.vertices}
        for a, b in self.edges:
            out[a][b] += 1
            out[b][a] += 1
        return out

    def degree(self, v) -> int:
        return len(self.neighbours()[v])

    @property
    def genus(self) -> int:
        return len(self.edges) - len(self.vertices) + 1

    def laplacian(self) -> list[list[int]]:
        idx = {v: i for i, v in enumerate(self.vertices)}
        n = len(self.vertices)
        lap = [[0] * n for _ in range(n)]
        for a, b in self.edges:
            i, j = idx[a], idx[b]
            lap[i][i] += 1
            lap[j][j] += 1
            lap[i][j] -= 1
            lap[j][i] -= 1
        return lap


Divisor = dict  # vertex -> int, every vertex present


def as_divisor(G: FiniteGraph, D: Mapping) -> Divisor:
    unknown = set(D) - set(G.vertices)
    if unknown:
        raise SchemaError(f"divisor mentions unknown vertices {sorted(map(str, unknown))}")
    out = {}
    for v in G.vertices:
        c = D.get(v, 0)
        if isinstance(c, bool) or not isinstance(c, int):
            raise SchemaError(f"coefficient at {v} must be an integer")
        out[v] = c
    return out


def canonical(G: FiniteGraph) -> Divisor:
    return {v: G.degree(v) - 2 for v in G.vertices}


def fire(G: FiniteGraph, D: Mapping, firing: Mapping) -> Divisor:
    """Fire each vertex ``firing[v]`` times (negative means borrowing)."""
    out = dict(D)
    mult = G.multiplicity()
    for v, k in firing.items():
        if not k:
            continue
        for w, m in mult[v].items():
            out[v] -= k * m
            out[w] += k * m
    return out


def _make_q_nonnegative(G: FiniteGraph, D: Divisor, q) -> Divisor:
    """Borrow along BFS distance layers until every vertex except ``q`` is nonnegative."""
    dist = {q: 0}
    queue = deque([q])
    nbrs = G.neighbours()
    while queue:
        u = queue.popleft()
        for w in nbrs[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    D = dict(D)
    far = max(dist.values())
    # the ball of radius k around q firing pushes chips outward, across layer k -> k+1
    while any(D[v] < 0 for v in G.vertices if v != q):
        for k in range(far - 1, -1, -1):
            ball = {v: 1 for v in G.vertices if dist[v] <= k}
            while any(D[v] < 0 for v in G.vertices if dist[v] == k + 1):
                D = fire(G, D, ball)
    return D


def _burn(G: FiniteGraph, D: Divisor, q) -> set:
    """Dhar's burning: the unburnt vertices (empty iff D is q-reduced)."""
    mult = G.multiplicity()
    burnt = {q}
    queue = deque([q])
    threat = Counter()
    while queue:
        u = queue.popleft()
        for w, m in mult[u].items():
            if w in burnt:
                continue
            threat[w] += m
            if threat[w] > D[w]:
                burnt.add(w)
                queue.append(w)
    return set(G.vertices) - burnt


def q_reduce(G: FiniteGraph, D: Mapping, q) -> Divisor:
    """The unique q-reduced divisor equivalent to ``D``."""
    D = _make_q_nonnegative(G, as_divisor(G, D), q)
    while True:
        unburnt = _burn(G, D, q)
        if not unburnt:
            return D
        D = fire(G, D, {v: 1 for v in unburnt})


def is_reduced(G: FiniteGraph, D: Mapping, q) -> bool:
    D = as_divisor(G, D)
    return all(D[v] >= 0 for v in G.vertices if v != q) and not _burn(G, D, q)


def is_effective_class(G: FiniteGraph, D: Mapping) -> bool:
    q = G.vertices[0]
    return q_reduce(G, D, q)[q] >= 0


def equivalent(G: FiniteGraph, D1: Mapping, D2: Mapping) -> bool:
    """``D1 - D2`` lies in the image of the Laplacian over Z (exact solve)."""
    D1, D2 = as_divisor(G, D1), as_divisor(G, D2)
    diff = [D1[v] - D2[v] for v in G.vertices]
    if sum(diff):
        return False
    if len(G.vertices) == 1:
        return True
    lap = G.laplacian()
    red = [row[1:] for row in lap[1:]]
    z = solve(red, diff[1:])
    return all(isinstance(x, Fraction) and x.denominator == 1 for x in z)


class RankComputer:
    """Baker-Norine rank with memoisation on reduced classes."""

    def __init__(self, G: FiniteGraph):
        self.G = G
        self.q = G.vertices[0]
        self._cache: dict = {}

    def _key(self, D: Divisor) -> tuple:
        R = q_reduce(self.G, D, self.q)
        return tuple(R[v] for v in self.G.vertices)

    def rank(self, D: Mapping) -> int:
        D = as_divisor(self.G, D)
        if sum(D.values()) < 0:
            return -1
        return self._rank_key(self._key(D))

    def _rank_key(self, key: tuple) -> int:
        if key in self._cache:
            return self._cache[key]
        verts = self.G.vertices
        qi = verts.index(self.q)
        if key[qi] < 0:
            result = -1
        else:
            # r(D) = 1 + min over v of r(D - v)
            best = None
            for i, v in enumerate(verts):
                D = dict(zip(verts, key))
                D[v] -= 1
                r = -1 if sum(D.values()) < 0 else self._rank_key(self._key(D))
                best = r if best is None else min(best, r)
                if best == -1:
                    break
            result = 1 + best
        self._cache[key] = result
        return result


def bn_rank(G: FiniteGraph, D: Mapping, computer: RankComputer | None = None) -> int:
    return (computer or RankComputer(G)).rank(D)


def bn_rank_bruteforce(G: FiniteGraph, D: Mapping) -> int:
    """Rank straight from the definition: largest k with every ``D - E`` (deg E = k) effective."""
    D = as_divisor(G, D)
    if not is_effective_class(G, D):
        return -1
    k = 0
    verts = G.vertices
    while True:
        for combo in itertools.combinations_with_replacement(verts, k + 1):
            E = Counter(combo)
            if not is_effective_class(G, {v: D[v] - E[v] for v in verts}):
                return k
        k += 1


def check_riemann_roch(G: FiniteGraph, D: Mapping, computer: RankComputer | None = None) -> bool:
    computer = computer or RankComputer(G)
    D = as_divisor(G, D)
    K = canonical(G)
    KD = {v: K[v] - D[v] for v in G.vertices}
    return computer.rank(D) - computer.rank(KD) == sum(D.values()) - G.genus + 1


def check_clifford(G: FiniteGraph, D: Mapping, computer: RankComputer | None = None) -> bool:
    computer = computer or RankComputer(G)
    D = as_divisor(G, D)
    K = canonical(G)
    r = computer.rank(D)
    r_dual = computer.rank({v: K[v] - D[v] for v in G.vertices})
    if r < 0 or r_dual < 0:
        raise PreconditionNotMet(f"need r(D) >= 0 and r(K-D) >= 0, got {r} and {r_dual}")
    return 2 * r <= sum(D.values())


def laplacian_image_vector(G: FiniteGraph, firing: Sequence[int]) -> Divisor:
    """``-L z``: the divisor change from firing ``z``."""
    return fire(G, {v: 0 for v in G.vertices}, dict(zip(G.vertices, firing)))
