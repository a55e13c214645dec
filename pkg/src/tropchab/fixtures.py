"""Worked examples used as regression fixtures."""

from __future__ import annotations

import json
import os

from .chabauty import HyperellipticCurve
from .metric_graph import VertexWeightedMetricGraph

# y^2 = x(x-1)(x-2)(x-5)(x-6)
GORDON_GRANT = HyperellipticCurve(1, (0, 60, -112, 65, -14, 1))
GORDON_GRANT_POINTS = [
    ["inf"],
    ["0", "0"],
    ["1", "0"],
    ["2", "0"],
    ["5", "0"],
    ["6", "0"],
    ["3", "6"],
    ["3", "-6"],
    ["10", "120"],
    ["10", "-120"],
]

# y^2 = x^6 + 8x^5 + 22x^4 + 22x^3 + 5x^2 + 6x + 1
MCCALLUM_POONEN = HyperellipticCurve(1, (1, 6, 5, 22, 22, 8, 1))
MCCALLUM_POONEN_POINTS = [
    ["inf", "+"],
    ["inf", "-"],
    ["0", "1"],
    ["0", "-1"],
    ["-3", "1"],
    ["-3", "-1"],
]

# The genus 3 curve -72314*y^2 = (x-50)(x-9)(x-3)(x+13)(x^3+2x^2+3x+4) as printed
# does not contain (25, +-20247920); those points lie on
# y^2 = -72314*(x-50)(x-9)(x-3)(x+13)(x^3+2x^2+3x+4), which is what we store.
GENUS_THREE_FACTOR = -72314
GENUS_THREE_F = (-70200, -25446, -15413, -4681, 6300, -274, -47, 1)
GENUS_THREE = HyperellipticCurve(1, tuple(GENUS_THREE_FACTOR * a for a in GENUS_THREE_F))
GENUS_THREE_AS_PRINTED = HyperellipticCurve(GENUS_THREE_FACTOR, GENUS_THREE_F)
GENUS_THREE_POINTS = [
    ["inf"],
    ["50", "0"],
    ["9", "0"],
    ["3", "0"],
    ["-13", "0"],
    ["25", "20247920"],
    ["25", "-20247920"],
]


def theta_graph(a=1, b=1, c=1) -> VertexWeightedMetricGraph:
    """Two vertices joined by three edges of lengths a, b, c."""
    return VertexWeightedMetricGraph.build(
        ["v1", "v2"], [("e1", "v1", "v2", a), ("e2", "v1", "v2", b), ("e3", "v1", "v2", c)]
    )


def write_fixtures(directory: str) -> list[str]:
    """Write the example curves and the theta graph as JSON files."""
    os.makedirs(directory, exist_ok=True)
    docs = {
        "gordon_grant.json": {**GORDON_GRANT.to_json(), "points": GORDON_GRANT_POINTS},
        "mccallum_poonen.json": {**MCCALLUM_POONEN.to_json(), "points": MCCALLUM_POONEN_POINTS},
        "genus_three.json": {**GENUS_THREE.to_json(), "points": GENUS_THREE_POINTS},
        "theta.json": theta_graph().to_json(),
    }
    written = []
    for name, doc in docs.items():
        path = os.path.join(directory, name)
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
        written.append(path)
    return written
