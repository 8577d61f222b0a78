"""Codes of the topological Cantor set and points of its dual.

A ``Code`` is a right-extending sequence ``(.i0 i1 i2 ...)`` of phase-space
symbols; a ``DualPoint`` is a left-extending sequence ``(... i2 i1 i0.)``
of history symbols.  Both are represented finitely by an explicit block of
coordinates plus a tail descriptor:

* ``zeros``            -- the remaining coordinates are all 0,
* ``periodic(q)``      -- the remaining coordinates repeat the block ``q``,
* ``truncated``        -- nothing is known past the explicit block.

Dual points are classified A (coordinates eventually all zeros) or B
(everything else); the limiting scaling function of a map on the boundary
of hyperbolicity jumps exactly on the A points.

Coordinate order: index 0 is always ``i0``, the coordinate adjacent to the
point.  For a periodic tail the block ``q`` is given in the same order:
``q[0]`` is the first coordinate after the explicit block.
"""

from __future__ import annotations

from .branches import Word, cylinder
from .families import MapFamily

ZEROS = "zeros"
TRUNCATED = "truncated"


def _parse_tail(tail):
    """Normalize a tail descriptor; all-zero periods collapse to ``zeros``."""
    if tail in (ZEROS, TRUNCATED):
        return tail, ()
    if isinstance(tail, (tuple, list)):
        q = tuple(int(b) for b in tail)
        if not q or any(b not in (0, 1) for b in q):
            raise ValueError(f"bad periodic tail {tail!r}")
        if not any(q):
            return ZEROS, ()
        return "periodic", q
    raise ValueError(f"bad tail descriptor {tail!r}")


class _SymbolSequence:
    """Shared finite representation: explicit coordinates + tail."""

    def __init__(self, coords, tail=ZEROS):
        self.coords = tuple(int(b) for b in coords)
        if any(b not in (0, 1) for b in self.coords):
            raise ValueError("coordinates must be 0 or 1")
        self.tail, self.period = _parse_tail(tail)

    def coord(self, k: int) -> int:
        """The k-th coordinate, expanding the tail as needed."""
        if k < len(self.coords):
            return self.coords[k]
        if self.tail == ZEROS:
            return 0
        if self.tail == TRUNCATED:
            raise IndexError(
                f"coordinate {k} beyond truncation depth {len(self.coords)}")
        return self.period[(k - len(self.coords)) % len(self.period)]

    @property
    def available(self) -> int | None:
        """Number of defined coordinates; None when unbounded."""
        return len(self.coords) if self.tail == TRUNCATED else None

    def _key(self):
        return (type(self), self.coords, self.tail, self.period)

    def __eq__(self, other):
        return isinstance(other, _SymbolSequence) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())


class Code(_SymbolSequence):
    """A point of the topological Cantor set: ``(.i0 i1 i2 ...)``."""

    def shift(self) -> "Code":
        """The one-sided shift: drop i0."""
        if self.coords:
            return Code(self.coords[1:], self.tail if self.tail != "periodic"
                        else self.period)
        if self.tail == ZEROS:
            return Code((), ZEROS)
        if self.tail == "periodic":
            return Code((), self.period[1:] + self.period[:1])
        raise IndexError("cannot shift an exhausted truncated code")

    def word(self, depth: int) -> Word:
        """The cylinder label from the first depth+1 coordinates (i0 outermost)."""
        return Word(tuple(self.coord(k) for k in range(depth + 1)))

    def __str__(self) -> str:
        head = "." + "".join(str(b) for b in self.coords)
        if self.tail == ZEROS:
            return head + "|0^inf"
        if self.tail == TRUNCATED:
            return head + "|?"
        return head + "|(" + "".join(str(b) for b in self.period) + ")^inf"


class DualPoint(_SymbolSequence):
    """A point of the dual Cantor set: ``(... i2 i1 i0.)``."""

    @property
    def klass(self) -> str:
        """'A' when the coordinates are eventually all zeros, else 'B'."""
        return "A" if self.tail == ZEROS else "B"

    def approximants(self, n: int) -> Word:
        """The word ``w_n i`` made of the first n+1 coordinates, i0 rightmost."""
        return Word(tuple(self.coord(n - j) for j in range(n + 1)))

    def shift(self) -> "DualPoint":
        """sigma*: drop i0, i.e. (... i1 i0.) -> (... i1.)."""
        if self.coords:
            return DualPoint(self.coords[1:], self.tail if self.tail != "periodic"
                             else self.period)
        if self.tail == ZEROS:
            return DualPoint((), ZEROS)
        if self.tail == "periodic":
            return DualPoint((), self.period[1:] + self.period[:1])
        raise IndexError("cannot shift an exhausted truncated dual point")

    def __str__(self) -> str:
        suffix = "".join(str(b) for b in reversed(self.coords)) + "."
        if self.tail == ZEROS:
            return "0^inf|" + suffix
        if self.tail == TRUNCATED:
            return "?|" + suffix
        return "(" + "".join(str(b) for b in reversed(self.period)) + ")^inf|" + suffix


def shift_dual(a: DualPoint) -> DualPoint:
    return a.shift()


def approximants(a: DualPoint, n: int) -> Word:
    return a.approximants(n)


def parse_dual_point(text: str) -> DualPoint:
    """Parse the textual rendering, e.g. ``0^inf|10110.`` or ``(10)^inf|1.``."""
    if "|" not in text:
        raise ValueError(f"bad dual point {text!r}: missing '|'")
    tail_txt, suffix_txt = text.split("|", 1)
    suffix_txt = suffix_txt.rstrip(".")
    coords = tuple(int(ch) for ch in reversed(suffix_txt)) if suffix_txt else ()
    if tail_txt == "0^inf":
        tail = ZEROS
    elif tail_txt == "?":
        tail = TRUNCATED
    elif tail_txt.startswith("(") and tail_txt.endswith(")^inf"):
        tail = tuple(int(ch) for ch in reversed(tail_txt[1:-5]))
    else:
        raise ValueError(f"bad tail {tail_txt!r}")
    return DualPoint(coords, tail)


def point_from_code(family: MapFamily, eps: float, code: Code,
                    depth: int) -> tuple[float, float]:
    """The phase-space point with the given code.

    Returns ``(x, bound)``: the midpoint of the depth-``depth`` cylinder
    containing the point and half that cylinder's length as error bound.
    """
    cyl = cylinder(family, eps, code.word(depth))
    return 0.5 * (cyl.lo + cyl.hi), 0.5 * cyl.length
