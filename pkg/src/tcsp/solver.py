"""Deciding and solving general (disjunctive) networks.

The search branches over the convex pieces of one disjunctive entry at a
time, pruning each node with the weak arc pass.  An all-convex leaf that
survives full propagation and anchoring is almost always consistent, but
not quite: a circuit whose total weight is strictly-zero (all strictness,
no slack, e.g. built from [-5,-2) with {-5} and {-3}) leaves every domain
nonempty at the fixpoint and propagation cannot see it.  So the leaf's
certificate of consistency is the extraction itself: repeatedly fix the
first unfixed variable to a value inside its domain and re-propagate.  On
a consistent leaf this never dead-ends; a dead end disproves the leaf and
the search moves on.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .errors import ExtractionDeadEnd, NotAnStp, PreconditionViolated
from .intervals import IntervalUnion
from .network import Tcsp, check_solution, disconnected_variables, is_stp
from .propagation import Outcome, bdac3, is_bd_arc_consistent, wbdac3


@dataclass(frozen=True)
class SolveResult:
    consistent: bool
    solution: Optional[List[Fraction]]
    witness: Optional[Tcsp]


def connect_x0(net: Tcsp) -> bool:
    """Anchor variables the origin cannot see and re-propagate, in place.

    Works lowest index first; each anchor pins the variable to [0, +inf)
    (a disconnected variable necessarily has a universal domain, so this
    only refines).  Returns False as soon as propagation finds a conflict.
    """
    if not is_stp(net):
        raise NotAnStp("connect_x0 needs an all-convex network")
    anchor = IntervalUnion.span(0, None, True, False)
    while True:
        loose = disconnected_variables(net)
        if not loose:
            return True
        net.set_pair(0, loose[0], anchor)
        if bdac3(net).outcome is not Outcome.CONSISTENT:
            return False


def _pick_value(domain: IntervalUnion) -> Fraction:
    """A deterministic member of a nonempty convex domain."""
    piece = domain.parts[0]
    if piece.lo is not None:
        if piece.lo_closed:
            return piece.lo
        if piece.hi is not None:
            return (piece.lo + piece.hi) / 2
        return piece.lo + 1
    if piece.hi is not None:
        return piece.hi if piece.hi_closed else piece.hi - 1
    return Fraction(0)


def _is_point(label: IntervalUnion) -> bool:
    return len(label.parts) == 1 and label.parts[0].is_degenerate()


def backtrack_free(net: Tcsp) -> Tcsp:
    """Fix every variable of a connected, bdArc-consistent STP, in place.

    Each round pins the lowest-index unfixed variable to a value of its
    current domain and re-propagates.  On a consistent input this never
    hits a dead end; an input harboring a strict-zero-weight circuit (the
    one inconsistency domain propagation cannot surface) dead-ends and
    raises ExtractionDeadEnd.
    """
    if not is_stp(net):
        raise PreconditionViolated("not an all-convex network")
    n = net.n_vars
    if any(net.m[0][i].is_empty() for i in range(1, n + 1)):
        raise PreconditionViolated("a domain is already empty")
    loose = disconnected_variables(net)
    if loose:
        raise PreconditionViolated(f"X{loose[0]} is not connected with the origin")
    if not is_bd_arc_consistent(net):
        raise PreconditionViolated("network is not bdArc-consistent")
    while True:
        target = next(
            (i for i in range(1, n + 1) if not _is_point(net.m[0][i])), None
        )
        if target is None:
            return net
        value = _pick_value(net.m[0][target])
        net.set_pair(0, target, IntervalUnion.point(value))
        if bdac3(net).outcome is not Outcome.CONSISTENT:
            raise ExtractionDeadEnd(
                f"fixing X{target} emptied a domain; the network has no solutions"
            )


def extract_solution(net: Tcsp) -> List[Fraction]:
    """Read the assignment off a network whose domains are all points."""
    values = [Fraction(0)]
    for i in range(1, net.n_vars + 1):
        values.append(net.m[0][i].singleton_value())
    return values


def _select_disjunctive(net: Tcsp) -> Optional[Tuple[int, int]]:
    """The disjunctive entry with the fewest pieces, ties toward low (i, j)."""
    best: Optional[Tuple[int, Tuple[int, int]]] = None
    for i in range(net.n_vars + 1):
        for j in range(i + 1, net.n_vars + 1):
            label = net.m[i][j]
            if label.is_convex():
                continue
            width = len(label.parts)
            if best is None or width < best[0]:
                best = (width, (i, j))
    return None if best is None else best[1]


def _search(net: Tcsp) -> Optional[Tuple[Tcsp, List[Fraction]]]:
    """Refine ``net`` (owned by the caller) into a solved connected leaf.

    Returns the anchored leaf together with an assignment extracted from
    it, or None when no refinement has solutions.
    """
    if wbdac3(net).outcome is not Outcome.CONSISTENT:
        return None
    target = _select_disjunctive(net)
    if target is None:
        # all-convex leaf: run the full-strength pass before anchoring
        if bdac3(net).outcome is not Outcome.CONSISTENT:
            return None
        if not connect_x0(net):
            return None
        fixed = net.copy()
        try:
            backtrack_free(fixed)
        except ExtractionDeadEnd:
            return None  # a strict-zero circuit was hiding in this leaf
        return net, extract_solution(fixed)
    i, j = target
    for piece in net.m[i][j].convex_parts():
        child = net.copy()
        child.set_pair(i, j, piece)
        found = _search(child)
        if found is not None:
            return found
    return None


def consistent(net: Tcsp) -> bool:
    """Does any assignment satisfy the network?"""
    return _search(net.copy()) is not None


def solve(net: Tcsp, *, witness: bool = False) -> SolveResult:
    """Decide the network and, when consistent, produce a checked solution.

    The input is never mutated.  With ``witness=True`` the result also
    carries the consistent all-convex refinement the solution came from.
    """
    found = _search(net.copy())
    if found is None:
        return SolveResult(False, None, None)
    leaf, values = found
    if not check_solution(net, values):
        raise AssertionError("internal error: extracted solution fails its own network")
    return SolveResult(True, values, leaf if witness else None)
