"""The tensor-wedge presentation of differential (n-1)-forms.

Elements of k (x) wedge^{n-1} k^x are stored as formal sums of terms
a (x) (b_1 ^ ... ^ b_{n-1}) with the field acting on the first slot.  No
normal form modulo the defining relations is attempted: equality in the
quotient is decided through the realization map to differential forms, which
is injective on the quotient.  The alternating structure is normalized by
sorting the wedge slots (canonical key order) with sign tracking, so that
storage is deterministic.
"""

from __future__ import annotations

from .errors import AddchowError, TowerMismatch
from .fields import FieldElement, FieldTower
from .forms import DifferentialForm, dlog, wedge_list


class PresentationElement:
    """Formal sum of tensors a (x) (b_1 ^ ... ^ b_{n-1}), degree n-1 wedge."""

    __slots__ = ("tower", "arity", "terms")

    def __init__(self, tower: FieldTower, arity: int, terms=()):
        if arity < 0:
            raise AddchowError("wedge arity must be nonnegative")
        self.tower = tower
        self.arity = arity
        collected: dict = {}
        for a, bs in terms:
            a = tower.coerce(a)
            bs = tuple(tower.coerce(b) for b in bs)
            if len(bs) != arity:
                raise AddchowError("tensor with wrong number of wedge slots")
            if a.is_zero() or any(b.is_zero() for b in bs):
                continue
            sorted_bs, sign = _sort_wedge(bs)
            if sorted_bs is None:
                continue  # repeated slot: alternating zero
            if sign < 0:
                a = -a
            key = tuple(b.key() for b in sorted_bs)
            prev = collected.get(key)
            tot = a if prev is None else prev[0] + a
            if tot.is_zero():
                collected.pop(key, None)
            else:
                collected[key] = (tot, sorted_bs)
        self.terms = tuple(
            pair for _, pair in sorted(collected.items(), key=lambda kv: kv[0])
        )

    @classmethod
    def zero(cls, tower: FieldTower, arity: int) -> "PresentationElement":
        return cls(tower, arity, ())

    @classmethod
    def tensor(cls, a: FieldElement, bs) -> "PresentationElement":
        bs = tuple(bs)
        return cls(a.tower, len(bs), [(a, bs)])

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "PresentationElement") -> "PresentationElement":
        if self.tower._key != other.tower._key or self.arity != other.arity:
            raise TowerMismatch("presentation elements are incompatible")
        return PresentationElement(self.tower, self.arity, list(self.terms) + list(other.terms))

    def __neg__(self) -> "PresentationElement":
        return PresentationElement(self.tower, self.arity, [(-a, bs) for a, bs in self.terms])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, x) -> "PresentationElement":
        """The k-structure: multiplication on the first slot."""
        x = self.tower.coerce(x)
        return PresentationElement(self.tower, self.arity, [(a * x, bs) for a, bs in self.terms])

    def render(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(
            f"{a.render()} (x) " + " ^ ".join(b.render() for b in bs) if bs else a.render()
            for a, bs in self.terms
        )

    def __repr__(self):
        return f"<{self.render()}>"


def _sort_wedge(bs):
    """Sort wedge slots by canonical key, tracking the permutation sign.

    Returns (sorted slot tuple, sign); (None, 0) when two slots coincide.
    """
    keyed = [(b.key(), i, b) for i, b in enumerate(bs)]
    keyed.sort(key=lambda t: t[0])
    for (k1, _, _), (k2, _, _) in zip(keyed, keyed[1:]):
        if k1 == k2:
            return None, 0
    perm = [i for _, i, _ in keyed]
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        clen = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            clen += 1
        if clen % 2 == 0:
            sign = -sign
    return tuple(b for _, _, b in keyed), sign


def to_omega(x: PresentationElement) -> DifferentialForm:
    """Realize a (x) (b_1^..^b_{n-1}) as a*dlog(b_1)^...^dlog(b_{n-1})."""
    total = DifferentialForm.zero(x.tower, x.arity)
    for a, bs in x.terms:
        total = total + wedge_list(x.tower, [dlog(b) for b in bs]).scale(a)
    return total


def derivation(*bs) -> PresentationElement:
    """The multiplicative lift b_1...b_{n-1} (x) (b_1 ^ ... ^ b_{n-1}).

    Zero slots give the zero element; realizing the result recovers
    d(b_1) ^ ... ^ d(b_{n-1}).
    """
    if not bs:
        raise AddchowError("derivation needs at least one argument")
    tower = bs[0].tower
    if any(b.is_zero() for b in bs):
        return PresentationElement.zero(tower, len(bs))
    prod = tower.one()
    for b in bs:
        prod = prod * b
    return PresentationElement(tower, len(bs), [(prod, tuple(bs))])


def relation_element(a: FieldElement, *rest) -> PresentationElement:
    """a (x) (a ^ b_2 ^ ...) + (1-a) (x) ((1-a) ^ b_2 ^ ...), with the
    zero-slot convention killing the degenerate a = 0, 1 cases."""
    tower = a.tower
    one_minus = tower.one() - a
    arity = 1 + len(rest)
    terms = []
    if not a.is_zero():
        terms.append((a, (a,) + tuple(rest)))
    if not one_minus.is_zero():
        terms.append((one_minus, (one_minus,) + tuple(rest)))
    return PresentationElement(tower, arity, terms)


def relation_check(a: FieldElement, *rest) -> DifferentialForm:
    """Realize the defining relation; the result must be the zero form."""
    return to_omega(relation_element(a, *rest))
