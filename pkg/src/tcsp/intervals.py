"""Exact interval-union algebra over the rationals.

The values a temporal difference ``x_j - x_i`` may take are described by a
finite union of convex intervals whose endpoints are exact rationals
(:class:`fractions.Fraction`), each end independently open or closed, and
either end possibly infinite.  :class:`IntervalUnion` keeps that union in a
canonical normal form -- parts sorted, pairwise disjoint and non-mergeable --
so structural equality *is* set equality.

Floats are rejected everywhere on purpose: the whole package computes exactly.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Tuple, Union

from .errors import NotSingleton, UnionParseError

#: The scalar type used throughout the package.
Rat = Fraction

RatLike = Union[Fraction, int, str]

_RAT_ZERO = Fraction(0)


def as_rational(value: RatLike) -> Fraction:
    """Coerce ``value`` to an exact Fraction; floats are refused."""
    if type(value) is Fraction:  # hot path: endpoints circulate as Fractions
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"exact rational required, got {value!r}")
    return Fraction(value)


class Interval:
    """One convex piece: endpoints in Q, each end open/closed, either end infinite.

    ``lo``/``hi`` of ``None`` mean unbounded on that side (always open).
    Construction refuses empty intervals such as ``[5,3]`` or ``(a,a]``.
    """

    __slots__ = ("lo", "hi", "lo_closed", "hi_closed")

    def __init__(
        self,
        lo: Optional[RatLike],
        hi: Optional[RatLike],
        lo_closed: bool = True,
        hi_closed: bool = True,
    ):
        self.lo = None if lo is None else as_rational(lo)
        self.hi = None if hi is None else as_rational(hi)
        self.lo_closed = False if self.lo is None else bool(lo_closed)
        self.hi_closed = False if self.hi is None else bool(hi_closed)
        if self.lo is not None and self.hi is not None:
            if self.lo > self.hi or (
                self.lo == self.hi and not (self.lo_closed and self.hi_closed)
            ):
                raise ValueError(f"empty interval: {self._text()}")

    # -- ordering keys: open/closed matters at equal values -------------------

    def _lo_key(self):
        # -inf sorts first; at equal finite values a closed start comes first
        if self.lo is None:
            return (0, _RAT_ZERO, 0)
        return (1, self.lo, 0 if self.lo_closed else 1)

    def _hi_key(self):
        # +inf sorts last; at equal finite values an open end ends first
        if self.hi is None:
            return (1, _RAT_ZERO, 0)
        return (0, self.hi, 1 if self.hi_closed else 0)

    def contains(self, x: RatLike) -> bool:
        x = as_rational(x)
        if self.lo is not None:
            if x < self.lo or (x == self.lo and not self.lo_closed):
                return False
        if self.hi is not None:
            if x > self.hi or (x == self.hi and not self.hi_closed):
                return False
        return True

    def is_degenerate(self) -> bool:
        """True for a single point ``{v}``."""
        return self.lo is not None and self.lo == self.hi

    def _text(self) -> str:
        lo = "-inf" if self.lo is None else str(self.lo)
        hi = "+inf" if self.hi is None else str(self.hi)
        return f"{'[' if self.lo_closed else '('}{lo},{hi}{']' if self.hi_closed else ')'}"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Interval):
            return NotImplemented
        return (
            self.lo == other.lo
            and self.hi == other.hi
            and self.lo_closed == other.lo_closed
            and self.hi_closed == other.hi_closed
        )

    def __hash__(self):
        return hash((self.lo, self.hi, self.lo_closed, self.hi_closed))

    def __repr__(self):
        return f"<Interval {self._text()}>"


def _mergeable(a: Interval, b: Interval) -> bool:
    """Can ``b`` (starting at or after ``a``) be fused with ``a`` into one piece?"""
    if a.hi is None or b.lo is None:
        return True
    if b.lo < a.hi:
        return True
    return b.lo == a.hi and (b.lo_closed or a.hi_closed)


def _fuse(a: Interval, b: Interval) -> Interval:
    if a.hi is None or b.hi is None:
        hi, hi_closed = None, False
    elif a.hi > b.hi:
        hi, hi_closed = a.hi, a.hi_closed
    elif b.hi > a.hi:
        hi, hi_closed = b.hi, b.hi_closed
    else:
        hi, hi_closed = a.hi, a.hi_closed or b.hi_closed
    return Interval(a.lo, hi, a.lo_closed, hi_closed)


def _normalize(parts: Iterable[Interval]) -> Tuple[Interval, ...]:
    items = list(parts)
    if len(items) < 2:
        return tuple(items)
    items.sort(key=Interval._lo_key)
    out: list[Interval] = []
    for piece in items:
        if out and _mergeable(out[-1], piece):
            out[-1] = _fuse(out[-1], piece)
        else:
            out.append(piece)
    return tuple(out)


class IntervalUnion:
    """A canonical finite union of :class:`Interval` pieces.

    Instances are immutable value objects: equality and hashing go by the
    normalized parts, so two unions describing the same set always compare
    equal no matter how they were built.
    """

    __slots__ = ("parts",)

    def __init__(self, parts: Iterable[Interval] = ()):
        object.__setattr__(self, "parts", _normalize(parts))

    def __setattr__(self, name, value):  # pragma: no cover - guard rail
        raise AttributeError("IntervalUnion is immutable")

    # -- constructors ----------------------------------------------------------

    @staticmethod
    def empty() -> "IntervalUnion":
        return IntervalUnion(())

    @staticmethod
    def universal() -> "IntervalUnion":
        return IntervalUnion((Interval(None, None),))

    @staticmethod
    def point(value: RatLike) -> "IntervalUnion":
        v = as_rational(value)
        return IntervalUnion((Interval(v, v),))

    @staticmethod
    def span(
        lo: Optional[RatLike],
        hi: Optional[RatLike],
        lo_closed: bool = True,
        hi_closed: bool = True,
    ) -> "IntervalUnion":
        return IntervalUnion((Interval(lo, hi, lo_closed, hi_closed),))

    # -- predicates ------------------------------------------------------------

    def is_empty(self) -> bool:
        return not self.parts

    def is_universal(self) -> bool:
        return len(self.parts) == 1 and self.parts[0].lo is None and self.parts[0].hi is None

    def is_convex(self) -> bool:
        """Empty and single-piece unions count as convex."""
        return len(self.parts) <= 1

    def contains(self, x: RatLike) -> bool:
        x = as_rational(x)
        return any(p.contains(x) for p in self.parts)

    def issubset(self, other: "IntervalUnion") -> bool:
        return (self & other) == self

    # -- bounds ------------------------------------------------------------------

    def lower_bound(self) -> Optional[Tuple[Fraction, bool]]:
        """(value, is_closed) of the least endpoint, or None if empty/unbounded below."""
        if not self.parts or self.parts[0].lo is None:
            return None
        first = self.parts[0]
        return (first.lo, first.lo_closed)

    def upper_bound(self) -> Optional[Tuple[Fraction, bool]]:
        """(value, is_closed) of the greatest endpoint, or None if empty/unbounded above."""
        if not self.parts or self.parts[-1].hi is None:
            return None
        last = self.parts[-1]
        return (last.hi, last.hi_closed)

    def singleton_value(self) -> Fraction:
        """The v of a one-point union {v}; raises NotSingleton otherwise."""
        if len(self.parts) == 1 and self.parts[0].is_degenerate():
            return self.parts[0].lo
        raise NotSingleton(f"not a single point: {self}")

    # -- algebra -----------------------------------------------------------------

    def converse(self) -> "IntervalUnion":
        """The set of -a for a in this union."""
        flipped = [
            Interval(
                None if p.hi is None else -p.hi,
                None if p.lo is None else -p.lo,
                p.hi_closed,
                p.lo_closed,
            )
            for p in self.parts
        ]
        return IntervalUnion(flipped)

    def intersect(self, other: "IntervalUnion") -> "IntervalUnion":
        """Exact set intersection (two-pointer sweep over sorted parts)."""
        if self is other or other.is_universal():
            return self
        if self.is_universal():
            return other
        a, b = self.parts, other.parts
        out: list[Interval] = []
        i = j = 0
        while i < len(a) and j < len(b):
            p, q = a[i], b[j]
            # later of the two starts
            if p._lo_key() >= q._lo_key():
                lo, lo_closed = p.lo, p.lo_closed
            else:
                lo, lo_closed = q.lo, q.lo_closed
            # earlier of the two ends
            pk, qk = p._hi_key(), q._hi_key()
            if pk <= qk:
                hi, hi_closed = p.hi, p.hi_closed
            else:
                hi, hi_closed = q.hi, q.hi_closed
            try:
                out.append(Interval(lo, hi, lo_closed, hi_closed))
            except ValueError:
                pass  # these two pieces do not meet
            if pk <= qk:
                i += 1
            if qk <= pk:
                j += 1
        return IntervalUnion(out)

    __and__ = intersect

    def compose(self, other: "IntervalUnion") -> "IntervalUnion":
        """Sums a+b over all a in self, b in other (set addition).

        Piece endpoints add, a sum endpoint is closed only when both endpoints
        were closed, and an infinite endpoint absorbs.  Empty absorbs too.
        """
        if not self.parts or not other.parts:
            return IntervalUnion.empty()
        if self.is_universal() or other.is_universal():
            return IntervalUnion.universal()  # sums sweep the whole line
        if len(self.parts) == 1 and self.parts[0].lo == 0 == self.parts[0].hi:
            return other  # {0} is the identity for set addition
        if len(other.parts) == 1 and other.parts[0].lo == 0 == other.parts[0].hi:
            return self
        pieces = []
        for p in self.parts:
            for q in other.parts:
                if p.lo is None or q.lo is None:
                    lo, lo_closed = None, False
                else:
                    lo, lo_closed = p.lo + q.lo, p.lo_closed and q.lo_closed
                if p.hi is None or q.hi is None:
                    hi, hi_closed = None, False
                else:
                    hi, hi_closed = p.hi + q.hi, p.hi_closed and q.hi_closed
                pieces.append(Interval(lo, hi, lo_closed, hi_closed))
        return IntervalUnion(pieces)

    def convex_closure(self) -> "IntervalUnion":
        """Smallest convex superset: first lower endpoint to last upper endpoint."""
        if not self.parts:
            return IntervalUnion.empty()
        first, last = self.parts[0], self.parts[-1]
        return IntervalUnion(
            (Interval(first.lo, last.hi, first.lo_closed, last.hi_closed),)
        )

    def weak_compose(self, other: "IntervalUnion") -> "IntervalUnion":
        """Compose the convex closures; always yields a convex result."""
        return self.convex_closure().compose(other.convex_closure())

    def convex_parts(self) -> list["IntervalUnion"]:
        """The maximal convex pieces, each as its own (convex) union."""
        return [IntervalUnion((p,)) for p in self.parts]

    # -- plumbing ----------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, IntervalUnion):
            return NotImplemented
        return self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.parts)

    def __str__(self) -> str:
        return format_union(self)

    def __repr__(self) -> str:
        return f"<IntervalUnion {format_union(self)}>"


# -- text form -------------------------------------------------------------------
#
# Grammar (writer output shown; reader is slightly more tolerant):
#   union     := "{}" | part (" u " part)*
#   part      := "{" rational "}" | bracket rational-or-inf "," rational-or-inf bracket
#   examples  :  "[-6,-4] u (1,3] u [8,+inf)"    "{3}"    "(-inf,+inf)"    "{}"
#
# Infinite endpoints must use an open bracket.  The reader also accepts "empty"
# for the empty union, "U" as separator, and decimal literals like "2.5"
# (parsed exactly); the writer never emits those.

_INF_LOW = {"-inf"}
_INF_HIGH = {"+inf", "inf"}


def _endpoint(text: str, side: str, context: str) -> Optional[Fraction]:
    t = text.strip()
    if not t:
        raise UnionParseError(f"missing {side} endpoint in {context!r}")
    if t in _INF_LOW:
        if side == "upper":
            raise UnionParseError(f"-inf cannot be an upper endpoint: {context!r}")
        return None
    if t in _INF_HIGH:
        if side == "lower":
            raise UnionParseError(f"+inf cannot be a lower endpoint: {context!r}")
        return None
    try:
        return Fraction(t)
    except (ValueError, ZeroDivisionError) as exc:
        raise UnionParseError(f"bad rational {t!r} in {context!r}: {exc}") from None


def parse_union(text: str) -> IntervalUnion:
    """Parse the textual form of an interval union (see module grammar)."""
    s = text.strip()
    if not s:
        raise UnionParseError("empty interval-union text")
    if s == "{}" or s.lower() == "empty":
        return IntervalUnion.empty()
    parts: list[Interval] = []
    for chunk in re.split(r"[uU]", s):
        c = chunk.strip()
        if not c:
            raise UnionParseError(f"empty union member in {text!r}")
        if c.startswith("{") and c.endswith("}"):
            inner = c[1:-1].strip()
            if not inner:
                continue  # an explicit empty member adds nothing
            v = _endpoint(inner, "point", c)
            if v is None:
                raise UnionParseError(f"a point must be finite: {c!r}")
            parts.append(Interval(v, v))
            continue
        if c[0] not in "[(" or c[-1] not in "])":
            raise UnionParseError(f"expected a bracketed interval, got {c!r}")
        body = c[1:-1]
        if body.count(",") != 1:
            raise UnionParseError(f"expected exactly one comma in {c!r}")
        lo_txt, hi_txt = body.split(",")
        lo = _endpoint(lo_txt, "lower", c)
        hi = _endpoint(hi_txt, "upper", c)
        lo_closed = c[0] == "["
        hi_closed = c[-1] == "]"
        if lo is None and lo_closed:
            raise UnionParseError(f"infinite lower endpoint must be open: {c!r}")
        if hi is None and hi_closed:
            raise UnionParseError(f"infinite upper endpoint must be open: {c!r}")
        try:
            parts.append(Interval(lo, hi, lo_closed, hi_closed))
        except ValueError as exc:
            raise UnionParseError(str(exc)) from None
    return IntervalUnion(parts)


def format_union(u: IntervalUnion) -> str:
    """Canonical text for a union; parse_union round-trips it."""
    if not u.parts:
        return "{}"
    rendered = []
    for p in u.parts:
        if p.is_degenerate():
            rendered.append("{%s}" % p.lo)
        else:
            rendered.append(p._text())
    return " u ".join(rendered)
