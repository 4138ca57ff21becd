"""Temporal constraint networks over difference variables.

A network holds variables X0..Xn and, for every ordered pair, an
:class:`~tcsp.intervals.IntervalUnion` label constraining ``x_j - x_i``.
X0 is the origin of the world: unary information about Xi lives in the
*binarized domain* ``m[0][i]``.  The matrix keeps the mirror invariant
``m[j][i] == m[i][j].converse()`` and pins the diagonal at {0}.

This module also provides the exact conversions between all-convex networks
(STPs) and rooted distance graphs, and the path-derived weight bounds that
the clamped propagation algorithms use to cut off divergence.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from .errors import (
    DimensionMismatch,
    EmptyLabel,
    NetworkFormatError,
    NotAnStp,
    UnionParseError,
)
from .graph import RootedDistanceGraph, reachable_set
from .intervals import Interval, IntervalUnion, RatLike, as_rational, format_union, parse_union
from .weights import INF, ZERO, Weight, sort_key, w_add, w_less, w_min


class Tcsp:
    """A constraint network; ``m[i][j]`` bounds ``x_j - x_i``.

    ``constraint_mask`` remembers which pairs were explicitly constrained;
    the worklist algorithms seed their queues from it.  Structural equality
    compares sizes and matrices only, never the mask.
    """

    __slots__ = ("n_vars", "m", "constraint_mask")

    def __init__(self, n_vars: int):
        if n_vars < 0:
            raise ValueError("n_vars must be >= 0")
        self.n_vars = n_vars
        zero = IntervalUnion.point(0)
        full = IntervalUnion.universal()
        size = n_vars + 1
        self.m = [[zero if i == j else full for j in range(size)] for i in range(size)]
        self.constraint_mask: set[frozenset[int]] = set()

    def _check(self, i: int, j: int):
        if not (0 <= i <= self.n_vars and 0 <= j <= self.n_vars):
            raise IndexError(f"variable out of range: ({i}, {j})")

    def entry(self, i: int, j: int) -> IntervalUnion:
        self._check(i, j)
        return self.m[i][j]

    def set_pair(self, i: int, j: int, label: IntervalUnion):
        """Write ``label`` at (i, j) and its converse at (j, i)."""
        self._check(i, j)
        if i == j:
            raise ValueError("diagonal entries are fixed at {0}")
        if not isinstance(label, IntervalUnion):
            raise TypeError(f"label must be an IntervalUnion, got {type(label).__name__}")
        self.m[i][j] = label
        self.m[j][i] = label.converse()

    def domains(self) -> List[IntervalUnion]:
        """The binarized domains m[0][1..n]."""
        return [self.m[0][i] for i in range(1, self.n_vars + 1)]

    def copy(self) -> "Tcsp":
        dup = Tcsp(self.n_vars)
        dup.m = [row[:] for row in self.m]
        dup.constraint_mask = set(self.constraint_mask)
        return dup

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tcsp):
            return NotImplemented
        return self.n_vars == other.n_vars and self.m == other.m

    def __repr__(self):
        return f"<Tcsp on X0..X{self.n_vars}>"


Constraint = Tuple[int, int, IntervalUnion]


def build_tcsp(n_vars: int, constraints: Iterable[Constraint]) -> Tcsp:
    """Assemble a network from explicit constraints.

    Pairs given as (i, j) with i > j are stored in canonical orientation via
    the converse; several constraints on one pair intersect.  An empty label,
    supplied or produced by that intersection, raises EmptyLabel because the
    network would be trivially inconsistent.
    """
    net = Tcsp(n_vars)
    gathered: dict[Tuple[int, int], IntervalUnion] = {}
    for i, j, label in constraints:
        net._check(i, j)
        if i == j:
            raise ValueError(f"constraint on the diagonal: ({i}, {j})")
        if not isinstance(label, IntervalUnion):
            raise TypeError(f"label must be an IntervalUnion, got {type(label).__name__}")
        if label.is_empty():
            raise EmptyLabel(f"constraint ({i}, {j}) has an empty label")
        if i > j:
            i, j, label = j, i, label.converse()
        key = (i, j)
        if key in gathered:
            label = gathered[key] & label
            if label.is_empty():
                raise EmptyLabel(
                    f"constraints on ({i}, {j}) intersect to the empty set"
                )
        gathered[key] = label
    for (i, j), label in gathered.items():
        net.set_pair(i, j, label)
        net.constraint_mask.add(frozenset((i, j)))
    return net


def is_stp(net: Tcsp) -> bool:
    """True when every label is convex (a simple temporal problem)."""
    return all(
        net.m[i][j].is_convex()
        for i in range(net.n_vars + 1)
        for j in range(i + 1, net.n_vars + 1)
    )


# -- label endpoints as path weights ------------------------------------------


def up_weight(label: IntervalUnion) -> Weight:
    """Upper endpoint as a bound on x_j - x_i: b, b~ for open, +inf if unbounded."""
    hi = label.upper_bound()
    if hi is None:
        return INF
    value, closed = hi
    return Weight(value, not closed)


def down_weight(label: IntervalUnion) -> Weight:
    """Lower endpoint as a bound on x_i - x_j: -a, (-a)~ for open, +inf if unbounded."""
    lo = label.lower_bound()
    if lo is None:
        return INF
    value, closed = lo
    return Weight(-value, not closed)


def stp_to_graph(net: Tcsp) -> RootedDistanceGraph:
    """Rooted distance graph of an all-convex network."""
    if not is_stp(net):
        raise NotAnStp("only an all-convex network has a distance graph")
    g = RootedDistanceGraph(net.n_vars)
    for i in range(net.n_vars + 1):
        for j in range(i + 1, net.n_vars + 1):
            label = net.m[i][j]
            if label.is_empty():
                raise EmptyLabel(f"entry ({i}, {j}) is empty")
            if label.is_universal():
                continue
            g.set_edge(i, j, up_weight(label))
            g.set_edge(j, i, down_weight(label))
    return g


def graph_to_stp(g: RootedDistanceGraph) -> Tcsp:
    """Inverse conversion: forward weights become upper endpoints, backward
    weights become (negated) lower endpoints, strict weights open ends.

    Crossing bounds -- a negative two-cycle -- raise EmptyLabel.
    """
    net = Tcsp(g.n_vars)
    for i in range(g.n_vars + 1):
        for j in range(i + 1, g.n_vars + 1):
            fwd, back = g.w[i][j], g.w[j][i]
            if fwd.value is None and back.value is None:
                continue
            hi = None if fwd.value is None else fwd.value
            hi_closed = fwd.value is not None and not fwd.strict
            lo = None if back.value is None else -back.value
            lo_closed = back.value is not None and not back.strict
            try:
                piece = Interval(lo, hi, lo_closed, hi_closed)
            except ValueError:
                raise EmptyLabel(
                    f"negative two-cycle between vertices {i} and {j}"
                ) from None
            net.set_pair(i, j, IntervalUnion((piece,)))
            net.constraint_mask.add(frozenset((i, j)))
    return net


def convex_closure(net: Tcsp) -> Tcsp:
    """Entrywise convex closure; always an STP."""
    out = net.copy()
    for i in range(net.n_vars + 1):
        for j in range(i + 1, net.n_vars + 1):
            label = net.m[i][j]
            if not label.is_convex():
                out.set_pair(i, j, label.convex_closure())
    return out


# -- path-derived weight bounds -------------------------------------------------


@dataclass(frozen=True)
class PathBounds:
    """Extreme elementary-path weights of the convex closure's distance graph."""

    path_lb: Weight
    path_ub: Weight


def path_bounds(net: Tcsp) -> PathBounds:
    """Lower/upper bounds on the weight of any elementary path.

    An elementary path visits distinct variables, so it uses at most one
    directed edge per pair and at most n edges in total.  Each edge weight
    comes from one convex piece of the pair's label: the piece's upper
    endpoint forward, its negated lower endpoint backward.  Per pair, the
    most negative endpoint any piece can supply bounds paths below, and the
    largest finite nonnegative one bounds them above.  Taking the extreme
    over pieces (rather than over the label's hull, which on a disjunctive
    label can hide every finite endpoint) makes the bounds hold in every
    all-convex refinement of the network, which is what the propagation
    clamp needs to stay sound when labels are disjunctive.  On an all-convex
    network the two readings coincide.
    """
    n = net.n_vars
    below: List[Weight] = []
    above: List[Weight] = []
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            label = net.m[i][j]
            if label.is_empty() or label.is_universal():
                continue
            lo_cand: Optional[Weight] = None
            hi_cand: Optional[Weight] = None
            for piece in label.convex_parts():
                up, down = up_weight(piece), down_weight(piece)
                small = w_min(up, down)
                if lo_cand is None or w_less(small, lo_cand):
                    lo_cand = small
                finite = [w for w in (up, down) if w.value is not None]
                if finite:
                    big = finite[0] if len(finite) == 1 or w_less(finite[1], finite[0]) else finite[1]
                    if not w_less(big, ZERO) and (hi_cand is None or w_less(hi_cand, big)):
                        hi_cand = big
            if lo_cand is not None and w_less(lo_cand, ZERO):
                below.append(lo_cand)
            if hi_cand is not None:
                above.append(hi_cand)
    if below:
        below.sort(key=sort_key)
        lb = ZERO
        for w in below[:n]:
            lb = w_add(lb, w)
    else:
        lb = ZERO
    if above:
        above.sort(key=sort_key, reverse=True)
        ub = ZERO
        for w in above[:n]:
            ub = w_add(ub, w)
    else:
        ub = ZERO
    return PathBounds(path_lb=lb, path_ub=ub)


def path_range(net: Tcsp) -> Fraction:
    """Width of the band all elementary path weights live in (strictness dropped)."""
    bounds = path_bounds(net)
    return bounds.path_ub.value - bounds.path_lb.value


# -- connectivity ----------------------------------------------------------------


def connectivity(net: Tcsp) -> List[bool]:
    """For each variable, whether a finite-weight path links it with X0.

    Either direction counts.  Computed on the convex closure's distance
    graph; index 0 is True by definition.
    """
    g = stp_to_graph(convex_closure(net))
    forward = reachable_set(g, 0)
    backward = reachable_set(g, 0, reverse=True)
    return [i in forward or i in backward for i in range(net.n_vars + 1)]


def disconnected_variables(net: Tcsp) -> List[int]:
    flags = connectivity(net)
    return [i for i in range(1, net.n_vars + 1) if not flags[i]]


# -- relations between networks ----------------------------------------------------


def is_refinement(tighter: Tcsp, looser: Tcsp) -> bool:
    """Entrywise subset check; both networks must have the same variables."""
    if tighter.n_vars != looser.n_vars:
        raise DimensionMismatch(
            f"cannot compare networks on {tighter.n_vars} and {looser.n_vars} variables"
        )
    for i in range(tighter.n_vars + 1):
        for j in range(i + 1, tighter.n_vars + 1):
            if not tighter.m[i][j].issubset(looser.m[i][j]):
                return False
    return True


def check_solution(net: Tcsp, values: Sequence[RatLike]) -> bool:
    """Does the assignment X_i = values[i] satisfy every constraint?"""
    if len(values) != net.n_vars + 1:
        raise DimensionMismatch(
            f"expected {net.n_vars + 1} values, got {len(values)}"
        )
    vals = [as_rational(v) for v in values]
    for i in range(net.n_vars + 1):
        for j in range(i + 1, net.n_vars + 1):
            if not net.m[i][j].contains(vals[j] - vals[i]):
                return False
    return True


# -- JSON form ----------------------------------------------------------------------
#
#   {
#     "variables": 4,
#     "constraints": [
#       {"i": 0, "j": 1, "label": "[10,20]"},
#       ...
#     ]
#   }
#
# "variables" is n: the network has variables X0..Xn.  The writer emits the
# non-universal labels of the upper triangle sorted by (i, j); reading the
# result back reproduces the same matrix.


def network_to_json(net: Tcsp) -> str:
    constraints = []
    for i in range(net.n_vars + 1):
        for j in range(i + 1, net.n_vars + 1):
            label = net.m[i][j]
            if not label.is_universal():
                constraints.append({"i": i, "j": j, "label": format_union(label)})
    doc = {"variables": net.n_vars, "constraints": constraints}
    return json.dumps(doc, indent=2) + "\n"


def network_from_json(text: str) -> Tcsp:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetworkFormatError(
            f"line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from None
    if not isinstance(doc, dict):
        raise NetworkFormatError("top level must be an object")
    n = doc.get("variables")
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise NetworkFormatError('"variables" must be a nonnegative integer')
    raw = doc.get("constraints", [])
    if not isinstance(raw, list):
        raise NetworkFormatError('"constraints" must be a list')
    constraints: List[Constraint] = []
    for k, item in enumerate(raw):
        where = f"constraint #{k}"
        if not isinstance(item, dict):
            raise NetworkFormatError(f"{where}: must be an object")
        i, j, label_text = item.get("i"), item.get("j"), item.get("label")
        if isinstance(i, bool) or not isinstance(i, int):
            raise NetworkFormatError(f'{where}: "i" must be an integer')
        if isinstance(j, bool) or not isinstance(j, int):
            raise NetworkFormatError(f'{where}: "j" must be an integer')
        if not isinstance(label_text, str):
            raise NetworkFormatError(f'{where}: "label" must be a string')
        try:
            label = parse_union(label_text)
        except UnionParseError as exc:
            raise NetworkFormatError(f"{where} ({i}, {j}): {exc}") from None
        constraints.append((i, j, label))
    try:
        return build_tcsp(n, constraints)
    except (IndexError, ValueError) as exc:
        raise NetworkFormatError(str(exc)) from None
