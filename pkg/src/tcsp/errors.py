"""Exception hierarchy for the tcsp package.

Everything raised on purpose by this package derives from :class:`TcspError`,
so callers can catch one type at the boundary.  Errors that are really input
problems (bad text, bad JSON) also derive from ``ValueError`` so they behave
sensibly for code that does not know about this package.
"""

from __future__ import annotations


class TcspError(Exception):
    """Base class for all errors raised by this package."""


class UnionParseError(TcspError, ValueError):
    """An interval-union string could not be parsed."""


class NetworkFormatError(TcspError, ValueError):
    """A network/graph/instance file is malformed (syntax or structure)."""


class EmptyLabel(TcspError):
    """A constraint label is empty, so the network is trivially inconsistent.

    Raised when an empty label is supplied (or produced by intersecting
    duplicate constraints) at build time, and when converting a distance
    graph that contains a negative two-cycle.
    """


class NotAnStp(TcspError):
    """An operation that requires every label to be convex got a disjunctive network."""


class NotSingleton(TcspError):
    """A label expected to be a single point {v} is not."""


class DimensionMismatch(TcspError):
    """Two objects that must agree on the number of variables do not."""


class PreconditionViolated(TcspError):
    """A documented precondition of a backtrack-free procedure does not hold."""


class ExtractionDeadEnd(PreconditionViolated):
    """Fixing a variable mid-extraction emptied a domain.

    On a consistent network the backtrack-free procedure cannot dead-end, so
    this proves the input had no solutions: a circuit of strict total weight
    zero can sit at a nonempty propagation fixpoint, invisible to domain
    filtering, and the failed extraction is how it finally shows.
    """


class NegativeCircuit(TcspError):
    """Floyd-Warshall found a circuit with negative total weight.

    ``vertex`` is a vertex on the offending circuit.
    """

    def __init__(self, vertex: int):
        super().__init__(f"negative circuit through vertex {vertex}")
        self.vertex = vertex


class NegativeCircuitReachable(TcspError):
    """Bellman-Ford found a negative circuit reachable from the source."""

    def __init__(self, source: int):
        super().__init__(f"negative circuit reachable from vertex {source}")
        self.source = source


class MalformedDomain(TcspError):
    """A scheduling bound needs a closed finite lower endpoint and the domain lacks one."""


class InvalidInstance(TcspError):
    """A scheduling instance is structurally invalid (bad duration, window, or pair)."""
