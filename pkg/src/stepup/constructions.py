"""Compile a pair coloring into a 4-graph on 2^D vertices via a declarative
rule table over the three consecutive deltas of each sorted 4-tuple.

Rules are data, not code: one interpreter (edge_oracle / the kernels)
evaluates shipped and custom rule sets alike.  A 4-tuple whose delta shape
matches no rule is a non-edge.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from math import comb

import numpy as np

from . import kernels
from .colorings import PairColoring
from .hypergraphs import Hypergraph, RuleContext
from .kernels import BLUE, RED, N_SHAPES
from .stepping_up import delta_value


class Shape(enum.Enum):
    INC = "Inc"                  # d1 < d2 < d3
    DEC = "Dec"                  # d1 > d2 > d3
    VALLEY_UP = "ValleyUp"       # d1 > d2 < d3, d1 < d3
    VALLEY_DOWN = "ValleyDown"   # d1 > d2 < d3, d1 > d3
    PEAK = "Peak"                # d1 < d2 > d3
    MONOTONE = "Monotone"        # Inc or Dec


_SHAPE_CODES = {
    Shape.INC: (kernels.SHAPE_INC,),
    Shape.DEC: (kernels.SHAPE_DEC,),
    Shape.VALLEY_UP: (kernels.SHAPE_VALLEY_UP,),
    Shape.VALLEY_DOWN: (kernels.SHAPE_VALLEY_DOWN,),
    Shape.PEAK: (kernels.SHAPE_PEAK,),
    Shape.MONOTONE: (kernels.SHAPE_INC, kernels.SHAPE_DEC),
}

_COLOR_NAME = {RED: "red", BLUE: "blue"}
_NAME_COLOR = {"red": RED, "blue": BLUE}


class DeltaRangeError(ValueError):
    """A computed delta falls outside the coloring ground set."""


@dataclass(frozen=True)
class Rule:
    """Edge rule: fires when the delta shape matches and every listed pair of
    deltas carries the required color.  Constraints are (a, b, color) with
    a, b in {1, 2, 3} indexing (d1, d2, d3)."""

    shape: Shape
    constraints: tuple[tuple[int, int, int], ...] = ()

    def __post_init__(self) -> None:
        seen = set()
        for a, b, color in self.constraints:
            if not (1 <= a <= 3 and 1 <= b <= 3 and a != b):
                raise ValueError(f"constraint indices must be distinct in 1..3, got ({a},{b})")
            key = frozenset((a, b))
            if key in seen:
                raise ValueError(f"duplicate constraint on deltas ({a},{b})")
            if color not in (RED, BLUE):
                raise ValueError(f"bad color {color}")
            seen.add(key)


@dataclass(frozen=True)
class RuleSet:
    id: str
    rules: tuple[Rule, ...]

    def __post_init__(self) -> None:
        taken: set[int] = set()
        for rule in self.rules:
            codes = set(_SHAPE_CODES[rule.shape])
            if taken & codes:
                raise ValueError(f"overlapping shapes in rule set {self.id!r}")
            taken |= codes

    def compiled(self) -> tuple[np.ndarray, np.ndarray]:
        """(counts, cons) arrays for the kernels: counts[shape] is -1 when no
        rule matches that shape, else the constraint count."""
        counts = np.full(N_SHAPES, -1, np.int8)
        cons = np.zeros((N_SHAPES, 3, 3), np.int8)
        for rule in self.rules:
            for code in _SHAPE_CODES[rule.shape]:
                counts[code] = len(rule.constraints)
                for ci, (a, b, color) in enumerate(rule.constraints):
                    cons[code, ci, 0] = a - 1
                    cons[code, ci, 1] = b - 1
                    cons[code, ci, 2] = color
        return counts, cons

    def to_json(self) -> str:
        doc = {
            "format": 1,
            "id": self.id,
            "rules": [
                {
                    "shape": rule.shape.value,
                    "constraints": [[a, b, _COLOR_NAME[c]] for a, b, c in rule.constraints],
                }
                for rule in self.rules
            ],
        }
        return json.dumps(doc, indent=2) + "\n"

    @staticmethod
    def from_json(text: str) -> "RuleSet":
        doc = json.loads(text)
        rules = tuple(
            Rule(
                Shape(r["shape"]),
                tuple((a, b, _NAME_COLOR[c]) for a, b, c in r["constraints"]),
            )
            for r in doc["rules"]
        )
        return RuleSet(doc["id"], rules)


def rules_section3() -> RuleSet:
    """Four-rule table: the increasing, decreasing and the two valley shapes
    carry color conditions; peaks are never edges."""
    return RuleSet(
        id="section3",
        rules=(
            Rule(Shape.INC, ((1, 2, RED), (1, 3, BLUE), (2, 3, BLUE))),
            Rule(Shape.DEC, ((1, 2, RED), (1, 3, RED), (2, 3, BLUE))),
            Rule(Shape.VALLEY_UP, ((1, 3, RED), (2, 3, RED))),
            Rule(Shape.VALLEY_DOWN, ((2, 3, BLUE),)),
        ),
    )


def rules_section4() -> RuleSet:
    """Three-rule table: one rule for both monotone shapes, one for rising
    valleys, one for peaks; falling valleys are never edges."""
    return RuleSet(
        id="section4",
        rules=(
            Rule(Shape.MONOTONE, ((1, 3, RED), (1, 2, BLUE), (2, 3, BLUE))),
            Rule(Shape.VALLEY_UP, ((1, 3, RED),)),
            Rule(Shape.PEAK, ((1, 2, BLUE),)),
        ),
    )


RULESETS = {"section3": rules_section3, "section4": rules_section4}


def shape_of(d1: int, d2: int, d3: int) -> Shape | None:
    if d1 < d2:
        return Shape.INC if d2 < d3 else Shape.PEAK
    if d2 > d3:
        return Shape.DEC
    if d1 < d3:
        return Shape.VALLEY_UP
    if d1 > d3:
        return Shape.VALLEY_DOWN
    return None  # d1 == d3 valley: impossible for genuine delta sequences


def edge_oracle(rs: RuleSet, phi: PairColoring, e) -> bool:
    """Is the 4-set e an edge?  Input order is irrelevant."""
    vs = sorted(int(v) for v in e)
    if len(vs) != 4 or len(set(vs)) != 4:
        raise ValueError(f"need 4 distinct vertices, got {e}")
    if vs[0] < 0:
        raise ValueError("vertices must be nonnegative")
    ds = [delta_value(a, b) for a, b in zip(vs, vs[1:])]
    if max(ds) >= phi.D:
        raise DeltaRangeError(
            f"delta {max(ds)} outside the coloring ground set [0, {phi.D})"
        )
    shape = shape_of(*ds)
    if shape is None:
        return False
    for rule in rs.rules:
        if shape in (
            (Shape.INC, Shape.DEC) if rule.shape is Shape.MONOTONE else (rule.shape,)
        ):
            return all(phi.color(ds[a - 1], ds[b - 1]) == c for a, b, c in rule.constraints)
    return False


def build_hypergraph(
    rs: RuleSet,
    phi: PairColoring,
    D: int | None = None,
    materialize_cap: int = 10**7,
) -> Hypergraph:
    """The 4-graph on 2^D vertices induced by the rule set over phi.

    Edges are materialized when C(2^D, 4) <= materialize_cap; otherwise the
    hypergraph stays lazy and answers membership through the rule context.
    """
    if D is None:
        D = phi.D
    elif D != phi.D:
        raise ValueError(f"D={D} does not match the coloring ground size {phi.D}")
    counts, cons = rs.compiled()
    ctx = RuleContext(counts, cons, phi.matrix, D, rs.id, phi.seed)
    N = 1 << D
    provenance = {
        "ruleset": rs.id,
        "coloring_seed": f"0x{phi.seed & 0xFFFFFFFFFFFFFFFF:016x}" if phi.seed is not None else None,
        "D": D,
    }
    edges = None
    if comb(N, 4) <= materialize_cap:
        quads = kernels.all_combinations(N, 4)
        vals = kernels.eval_edges(quads, counts, cons, phi.matrix)
        edges = quads[vals == 1]
    return Hypergraph(
        4, N, edges=edges, provenance=provenance, rule_ctx=ctx,
        table_cap=max(materialize_cap, 10**7),
    )
