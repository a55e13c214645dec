"""Closed-form bounds on rational points and torsion packets.

Every bound is an exact integer.  Hypotheses that can be checked from the
parameters are checked; a failed one raises :class:`HypothesisFailure` naming it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

from .errors import HypothesisFailure, InvalidParameters, MissingParameter, SchemaError
from .metric_graph import VertexWeightedMetricGraph
from .padic import is_prime
from .series import compute_Np

KINDS = (
    "coleman",
    "lorenzini_tucker",
    "stoll",
    "kzb",
    "stoll_uniform_hyp",
    "krzb_general",
    "krzb_p3",
    "rational_torsion",
    "geometric_torsion",
    "wideopen_zeros",
    "stoll_cover",
)


@dataclass(frozen=True)
class BoundRequest:
    kind: str
    parameters: Mapping = field(default_factory=dict)

    @classmethod
    def from_json(cls, obj: Mapping) -> BoundRequest:
        if not isinstance(obj, Mapping) or "kind" not in obj:
            raise SchemaError("bound request needs a 'kind'")
        params = obj.get("parameters", {})
        if not isinstance(params, Mapping):
            raise SchemaError("'parameters' must be an object")
        parsed = {}
        for k, v in params.items():
            if isinstance(v, bool):
                parsed[k] = v
            elif isinstance(v, int):
                parsed[k] = v
            elif isinstance(v, str):
                try:
                    parsed[k] = Fraction(v)
                except (ValueError, ZeroDivisionError) as exc:
                    if k == "variant":
                        parsed[k] = v
                        continue
                    raise SchemaError(f"parameter {k}: {v!r} is not an exact rational") from exc
            else:
                raise SchemaError(f"parameter {k}: numbers must be integers or rational strings")
        return cls(str(obj["kind"]), parsed)


@dataclass(frozen=True)
class BoundResult:
    value: int
    hypotheses: tuple  # ((name, satisfied), ...)
    formula: str
    details: Mapping = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "value": str(self.value),
            "hypotheses": [{"name": n, "satisfied": s} for n, s in self.hypotheses],
            "formula": self.formula,
            **({"details": {k: str(v) for k, v in self.details.items()}} if self.details else {}),
        }


class _Ledger:
    def __init__(self, params: Mapping):
        self.params = params
        self.entries: list[tuple[str, bool]] = []

    def get(self, name: str, integer: bool = True):
        if name not in self.params:
            raise MissingParameter(f"parameter '{name}' is required")
        v = self.params[name]
        if integer:
            v = Fraction(v)
            if v.denominator != 1:
                raise InvalidParameters(f"parameter '{name}' must be an integer")
            return int(v)
        return Fraction(v)

    def has(self, name: str) -> bool:
        return name in self.params

    def require(self, name: str, ok: bool, detail: str = "") -> None:
        self.entries.append((name, bool(ok)))
        if not ok:
            raise HypothesisFailure(name, detail)


def _genus(led: _Ledger, minimum: int = 2) -> int:
    g = led.get("g")
    led.require(f"g >= {minimum}", g >= minimum, f"g={g}")
    return g


def _prime(led: _Ledger, name: str = "p") -> int:
    p = led.get(name)
    led.require(f"{name} prime", is_prime(p), f"{name}={p}")
    return p


def _rank(led: _Ledger) -> int:
    r = led.get("r")
    led.require("r >= 0", r >= 0, f"r={r}")
    return r


def _count(led: _Ledger, name: str) -> int:
    n = led.get(name)
    led.require(f"{name} >= 0", n >= 0, f"{name}={n}")
    return n


def gsp_order(g: int, q: int) -> int:
    """Order of the group of symplectic similitudes GSp_{2g}(F_q)."""
    if g < 1:
        raise InvalidParameters("g must be >= 1")
    if not _is_prime_power(q):
        raise InvalidParameters(f"{q} is not a prime power")
    out = (q - 1) * q ** (g * g)
    for i in range(1, g + 1):
        out *= q ** (2 * i) - 1
    return out


def _is_prime_power(q: int) -> bool:
    if q < 2:
        return False
    for d in range(2, q + 1):
        if q % d == 0:
            while q % d == 0:
                q //= d
            return q == 1
    return False


def gsp_bruteforce(g: int, q: int) -> int:
    """Count matrices M over F_q (q prime) with ``M^T J M = lambda J``, ``lambda != 0``.

    Columns are chosen one at a time in the order e_1, f_1, e_2, f_2, ... and
    each is checked against the symplectic form on the columns already placed.
    """
    if not is_prime(q):
        raise InvalidParameters("enumeration needs a prime q")
    n = 2 * g
    # form on basis index pairs: omega(e_i, f_i) = 1
    order = [k for i in range(g) for k in (i, g + i)]

    def form(u, v):
        return sum(u[i] * v[g + i] - u[g + i] * v[i] for i in range(g)) % q

    def target(a, b):
        if a < g and b == a + g:
            return 1
        if b < g and a == b + g:
            return -1
        return 0

    vectors = [v for v in itertools.product(range(q), repeat=n) if any(v)]
    # level[u][c] = indices of the vectors v with form(u, v) == c
    level = []
    for u in vectors:
        buckets: list[set] = [set() for _ in range(q)]
        for j, v in enumerate(vectors):
            buckets[form(u, v)].add(j)
        level.append(buckets)
    everything = set(range(len(vectors)))

    def extend(placed: list, lam: int) -> int:
        depth = len(placed)
        if depth == n:
            return 1
        idx = order[depth]
        cands = everything
        for k, j in enumerate(placed):
            cands = cands & level[j][lam * target(order[k], idx) % q]
            if not cands:
                return 0
        return sum(extend(placed + [j], lam) for j in cands)

    return sum(extend([], lam) for lam in range(1, q))


def E(g: int, p: int) -> int:
    return gsp_order(g, 7) if p == 5 else gsp_order(g, 5)


def check_dagger(G: VertexWeightedMetricGraph) -> bool:
    """``g(G) > 2*weight(x) + valency(x)`` at every vertex."""
    g = G.genus
    return all(g > 2 * v.weight + G.valency(v.id) for v in G.vertices)


# ---------------------------------------------------------------------------
# evaluators


def _coleman(led: _Ledger):
    g, p, r, n = _genus(led), _prime(led), _rank(led), _count(led, "nFp")
    led.require("p > 2g", p > 2 * g, f"p={p}, g={g}")
    led.require("r < g", r < g, f"r={r}, g={g}")
    return n + 2 * g - 2, "nFp + 2g - 2", {}


def _lorenzini_tucker(led: _Ledger):
    g, p, n = _genus(led), _prime(led), _count(led, "nSm")
    led.require("p > 2g", p > 2 * g, f"p={p}, g={g}")
    return n + 2 * g - 2, "nSm + 2g - 2", {}


def _stoll(led: _Ledger):
    g, p, r, n = _genus(led), _prime(led), _rank(led), _count(led, "nFp")
    led.require("p > 2g", p > 2 * g, f"p={p}, g={g}")
    led.require("r < g", r < g, f"r={r}, g={g}")
    return n + 2 * r, "nFp + 2r", {}


def _kzb(led: _Ledger):
    g, p, r, n = _genus(led), _prime(led), _rank(led), _count(led, "nSm")
    led.require("p > 2r + 2", p > 2 * r + 2, f"p={p}, r={r}")
    led.require("r < g", r < g, f"r={r}, g={g}")
    return n + 2 * r, "nSm + 2r", {}


def _stoll_uniform(led: _Ledger):
    g, r = _genus(led), _rank(led)
    led.require("r <= g - 3", r <= g - 3, f"r={r}, g={g}")
    return 8 * (r + 4) * (g - 1) + max(1, 4 * r) * g, "8(r+4)(g-1) + max(1,4r)*g", {}


def _optional_rank(led: _Ledger, g: int) -> None:
    if led.has("r"):
        r = _rank(led)
        led.require("r <= g - 3", r <= g - 3, f"r={r}, g={g}")


def _krzb_general(led: _Ledger):
    g = _genus(led, 3)
    p = _prime(led)
    led.require("p >= 3", p >= 3, f"p={p}")
    _optional_rank(led, g)
    return (5 * p * g + 6 * g - 2 * p - 8) * (4 * g - 2), "(5pg + 6g - 2p - 8)(4g - 2)", {}


def _krzb_p3(led: _Ledger):
    g = _genus(led, 3)
    _optional_rank(led, g)
    return 84 * g * g - 98 * g + 28, "84g^2 - 98g + 28", {}


def _rational_torsion(led: _Ledger):
    g = _genus(led, 3)
    return 84 * g * g - 98 * g + 28, "84g^2 - 98g + 28", {}


def _geometric_torsion(led: _Ledger):
    variant = str(led.params.get("variant", "E"))
    if variant not in ("E", "Q"):
        raise InvalidParameters("variant must be 'E' or 'Q'")
    if variant == "Q":
        g = _genus(led, 4)
        rate = Fraction(1, 4 * 7 ** (2 * g * g + g + 1))
        p = _prime(led)
        formula = "(16g^2 - 12g) * N_p((4*7^(2g^2+g+1))^-1, 2g - 2)"
    else:
        g = _genus(led)
        p = _prime(led)
        rate = Fraction(1, 4 * E(g, p))
        formula = "(16g^2 - 12g) * N_p((4E(g,p))^-1, 2g - 2)"
    n = compute_Np(p, rate, 2 * g - 2)
    return (16 * g * g - 12 * g) * n, formula, {"Np": n, "rate": rate}


def _wideopen(led: _Ledger):
    g = _genus(led)
    p = _prime(led)
    d = led.get("d")
    led.require("d >= 1", d >= 1, f"d={d}")
    a = led.get("a", integer=False)
    led.require("a > 0", a > 0, f"a={a}")
    no_leaves = bool(led.params.get("no_leaves", False))
    n0 = 2 * g - 2 if no_leaves else 2 * g - 1
    n = compute_Np(p, a, n0)
    formula = "d * N_p(a, 2g - 2)" if no_leaves else "d * N_p(a, 2g - 1)"
    return d * n, formula, {"Np": n}


def _stoll_cover(led: _Ledger):
    g = _genus(led)
    q = led.get("q")
    led.require("q prime power", _is_prime_power(q), f"q={q}")
    t = led.get("t")
    led.require("0 <= t <= g", 0 <= t <= g, f"t={t}, g={g}")
    balls = (5 * q + 2) * (g - 1) - 3 * q * (t - 1)
    annuli = 2 * g - 3 + t
    return balls + annuli, "(5q+2)(g-1) - 3q(t-1) balls + (2g - 3 + t) annuli", {
        "balls": balls,
        "annuli": annuli,
    }


_EVALUATORS: dict[str, Callable] = {
    "coleman": _coleman,
    "lorenzini_tucker": _lorenzini_tucker,
    "stoll": _stoll,
    "kzb": _kzb,
    "stoll_uniform_hyp": _stoll_uniform,
    "krzb_general": _krzb_general,
    "krzb_p3": _krzb_p3,
    "rational_torsion": _rational_torsion,
    "geometric_torsion": _geometric_torsion,
    "wideopen_zeros": _wideopen,
    "stoll_cover": _stoll_cover,
}


def evaluate(req: BoundRequest) -> BoundResult:
    if req.kind not in _EVALUATORS:
        raise SchemaError(f"unknown bound kind {req.kind!r}; expected one of {', '.join(KINDS)}")
    led = _Ledger(req.parameters)
    value, formula, details = _EVALUATORS[req.kind](led)
    return BoundResult(value, tuple(led.entries), formula, details)


def bound(kind: str, **params) -> int:
    """Shorthand: ``bound("coleman", g=2, p=7, r=1, nFp=8)``."""
    return evaluate(BoundRequest(kind, params)).value
