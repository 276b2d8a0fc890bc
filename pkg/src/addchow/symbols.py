"""Formal multiplicative symbols and the point/symbol translation maps.

A symbol is an integer formal combination of tuples {x_1,...,x_n} of nonzero
field elements.  No normal form modulo multilinearity or the Steinberg rule
is computed (the word problem is out of scope); the multilinear and
alternating rewrites are available as explicit constructions and symbols are
compared through their realization as log forms or as 0-cycles.

The translation maps go between weight-n symbols, rational points of the
unit-sum simplex locus, and points of the zero-sum locus one level up.
"""

from __future__ import annotations

from .errors import AddchowError, BadPosition, ZeroArgument
from .fields import FieldElement, FieldTower
from .forms import DifferentialForm, dlog, wedge_list


class MilnorSymbol:
    """Integer formal combination of entry tuples {x_1,...,x_n}."""

    __slots__ = ("tower", "weight", "terms")

    def __init__(self, tower: FieldTower, weight: int, terms=()):
        self.tower = tower
        self.weight = weight
        collected: dict = {}
        elems: dict = {}
        for coeff, entries in terms:
            entries = tuple(tower.coerce(x) for x in entries)
            if len(entries) != weight:
                raise AddchowError("symbol entries do not match the weight")
            if any(x.is_zero() for x in entries):
                raise ZeroArgument("symbol entries must be nonzero")
            if coeff == 0:
                continue
            key = tuple(x.key() for x in entries)
            collected[key] = collected.get(key, 0) + coeff
            elems[key] = entries
        self.terms = tuple(
            (collected[key], elems[key]) for key in sorted(collected) if collected[key]
        )

    @classmethod
    def of(cls, *entries: FieldElement) -> "MilnorSymbol":
        if not entries:
            raise AddchowError("empty symbol needs an explicit tower")
        return cls(entries[0].tower, len(entries), [(1, entries)])

    @classmethod
    def zero(cls, tower: FieldTower, weight: int) -> "MilnorSymbol":
        return cls(tower, weight, ())

    def is_formally_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "MilnorSymbol") -> "MilnorSymbol":
        if self.tower._key != other.tower._key or self.weight != other.weight:
            raise AddchowError("incompatible symbols")
        return MilnorSymbol(self.tower, self.weight, list(self.terms) + list(other.terms))

    def __neg__(self) -> "MilnorSymbol":
        return MilnorSymbol(self.tower, self.weight, [(-c, e) for c, e in self.terms])

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, k: int) -> "MilnorSymbol":
        return MilnorSymbol(self.tower, self.weight, [(c * k, e) for c, e in self.terms])

    def swapped(self, i: int, j: int) -> "MilnorSymbol":
        """Alternating rewrite: exchange two slots and negate."""
        out = []
        for c, e in self.terms:
            e = list(e)
            e[i], e[j] = e[j], e[i]
            out.append((-c, tuple(e)))
        return MilnorSymbol(self.tower, self.weight, out)

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for c, e in self.terms:
            body = "{" + ", ".join(x.render() for x in e) + "}"
            if c == 1:
                parts.append(body)
            elif c == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{c}*{body}")
        out = parts[0]
        for t in parts[1:]:
            out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return out

    def __repr__(self):
        return f"<{self.render()}>"


def multilinearity_defect(entries, slot: int, x: FieldElement, y: FieldElement) -> MilnorSymbol:
    """{.., xy, ..} - {.., x, ..} - {.., y, ..}: the multilinear rewrite element."""
    entries = list(entries)
    tower = x.tower

    def with_slot(v):
        e = list(entries)
        e[slot] = v
        return tuple(e)

    return MilnorSymbol(
        tower,
        len(entries),
        [(1, with_slot(x * y)), (-1, with_slot(x)), (-1, with_slot(y))],
    )


def dlog_symbol(s: MilnorSymbol) -> DifferentialForm:
    """{x_1,..,x_n} -> dlog(x_1)^...^dlog(x_n), extended additively."""
    total = DifferentialForm.zero(s.tower, s.weight)
    for c, entries in s.terms:
        form = wedge_list(s.tower, [dlog(x) for x in entries])
        total = total + form.scale(s.tower.integer(c))
    return total


# ---------------------------------------------------------------------------
# point <-> symbol translation (unit-sum simplex locus)


def point_to_symbol(coords) -> MilnorSymbol:
    """(u_0,...,u_n) with sum 1 -> {-u_0/u_n, ..., -u_{n-1}/u_n}."""
    coords = list(coords)
    if len(coords) < 2:
        raise AddchowError("need at least two coordinates")
    tower = coords[0].tower
    total = coords[0]
    for c in coords[1:]:
        total = total + c
    if not total.is_one():
        raise BadPosition("coordinates must sum to 1 on the simplex locus")
    if any(c.is_zero() for c in coords):
        raise BadPosition("coordinates must be nonzero (good position)")
    un = coords[-1]
    return MilnorSymbol.of(*[-(u / un) for u in coords[:-1]])


def symbol_to_point(s: MilnorSymbol):
    """{b_1,..,b_n} -> (b_1/c, ..., b_n/c, -1/c) with c = -1 + sum(b_i).

    Defined on single symbols; c = 0 means the symbol is trivial and the
    image is the zero cycle, reported as None.
    """
    if len(s.terms) != 1 or s.terms[0][0] != 1:
        raise AddchowError("symbol_to_point acts on single symbols with coefficient 1")
    entries = s.terms[0][1]
    tower = s.tower
    c = -tower.one()
    for b in entries:
        c = c + b
    if c.is_zero():
        return None
    inv = c.inverse()
    return tuple([b * inv for b in entries] + [-inv])


def iota(coords) -> tuple:
    """Unit-sum point (u_0,..,u_n) -> zero-sum point (-1, u_0,..,u_n)."""
    coords = tuple(coords)
    tower = coords[0].tower
    total = coords[0]
    for c in coords[1:]:
        total = total + c
    if not total.is_one():
        raise BadPosition("coordinates must sum to 1 before inclusion")
    if any(c.is_zero() for c in coords):
        raise BadPosition("coordinates must be nonzero (good position)")
    return (-tower.one(),) + coords


def symbol_to_zero_sum_point(s: MilnorSymbol):
    """Weight n-1 symbol -> (-1, x_1/c, ..., x_{n-1}/c, -1/c), or None when
    the symbol is trivial (c = 0)."""
    pt = symbol_to_point(s)
    if pt is None:
        return None
    return iota(pt)
