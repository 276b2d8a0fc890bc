"""Absolute Kahler differential forms over a field tower.

A degree-n form is a map from strictly increasing n-tuples of generator
indices (the basis wedges dt_{i_1}^...^dt_{i_n}) to field elements; the dt_i
range over the tower's transcendentals.  For the supported towers the module
over the prime base is free on these generators: separable extensions reuse
the same basis, with d(theta) expanded through implicit differentiation.

Besides the exterior algebra (d, wedge, dlog) this module builds the
logarithmic simplex forms on the zero-sum hyperplane and takes residues along
simple log poles, coordinate hyperplane by coordinate hyperplane.
"""

from __future__ import annotations

from . import intpoly as ip
from .errors import (
    AddchowError,
    HigherOrderPole,
    NoExtension,
    TowerMismatch,
    ZeroArgument,
)
from .fields import FieldElement, FieldTower


class DifferentialForm:
    """Immutable differential form of fixed degree over a tower."""

    __slots__ = ("tower", "degree", "coeffs")

    def __init__(self, tower: FieldTower, degree: int, coeffs=None):
        if degree < 0:
            raise AddchowError("form degree must be nonnegative")
        self.tower = tower
        self.degree = degree
        clean = {}
        for key, c in (coeffs or {}).items():
            key = tuple(key)
            if len(key) != degree:
                raise AddchowError("wedge key length does not match degree")
            if list(key) != sorted(set(key)):
                raise AddchowError("wedge keys must be strictly increasing")
            if any(i < 0 or i >= len(tower.trans) for i in key):
                raise AddchowError("wedge key outside generator range")
            c = tower.coerce(c)
            if not c.is_zero():
                clean[key] = c
        self.coeffs = clean

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, tower: FieldTower, degree: int) -> "DifferentialForm":
        return cls(tower, degree, {})

    @classmethod
    def function(cls, x: FieldElement) -> "DifferentialForm":
        return cls(x.tower, 0, {(): x})

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, key) -> FieldElement:
        return self.coeffs.get(tuple(key), self.tower.zero())

    # -- linear structure ----------------------------------------------------

    def _check(self, other: "DifferentialForm"):
        if self.tower._key != other.tower._key:
            raise TowerMismatch("forms over different towers")
        if self.degree != other.degree:
            raise AddchowError("cannot add forms of different degrees")

    def __add__(self, other: "DifferentialForm") -> "DifferentialForm":
        self._check(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            s = out.get(k)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return DifferentialForm(self.tower, self.degree, out)

    def __neg__(self) -> "DifferentialForm":
        return DifferentialForm(self.tower, self.degree, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other: "DifferentialForm") -> "DifferentialForm":
        return self + (-other)

    def scale(self, x) -> "DifferentialForm":
        x = self.tower.coerce(x)
        return DifferentialForm(self.tower, self.degree, {k: c * x for k, c in self.coeffs.items()})

    __mul__ = scale
    __rmul__ = scale

    def __eq__(self, other):
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        return (
            self.tower._key == other.tower._key
            and self.degree == other.degree
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.tower._key, self.degree, tuple(sorted((k, c.key()) for k, c in self.coeffs.items()))))

    # -- exterior algebra ----------------------------------------------------

    def wedge(self, other: "DifferentialForm") -> "DifferentialForm":
        if self.tower._key != other.tower._key:
            raise TowerMismatch("forms over different towers")
        deg = self.degree + other.degree
        out: dict = {}
        for ka, ca in self.coeffs.items():
            for kb, cb in other.coeffs.items():
                if set(ka) & set(kb):
                    continue
                key, sign = _merge_sorted(ka, kb)
                c = ca * cb
                if sign < 0:
                    c = -c
                s = out.get(key)
                s = c if s is None else s + c
                if s.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = s
        return DifferentialForm(self.tower, deg, out)

    def __xor__(self, other):
        return self.wedge(other)

    # -- rendering -------------------------------------------------------------

    def render(self) -> str:
        if not self.coeffs:
            return "0"
        names = self.tower.trans
        pieces = []
        for key in sorted(self.coeffs):
            c = self.coeffs[key]
            wedge_s = "^".join(f"d{names[i]}" for i in key)
            if not wedge_s:
                pieces.append(c.render())
            else:
                pieces.append(f"({c.render()}) {wedge_s}")
        return " + ".join(pieces)

    def __repr__(self):
        return f"<{self.render()} over {self.tower.describe()}>"


def _merge_sorted(ka, kb):
    """Merge two disjoint increasing tuples, returning (merged, sign)."""
    merged = []
    sign = 1
    i = j = 0
    while i < len(ka) and j < len(kb):
        if ka[i] < kb[j]:
            merged.append(ka[i])
            i += 1
        else:
            # kb[j] jumps over the remaining entries of ka
            sign *= -1 if (len(ka) - i) % 2 else 1
            merged.append(kb[j])
            j += 1
    merged.extend(ka[i:])
    merged.extend(kb[j:])
    return tuple(merged), sign


# ---------------------------------------------------------------------------
# differential operators


def d(x: FieldElement) -> DifferentialForm:
    """Exterior derivative of a function: sum of partials against dt_i."""
    tower = x.tower
    out = {}
    for i, name in enumerate(tower.trans):
        c = x.partial(name)
        if not c.is_zero():
            out[(i,)] = c
    return DifferentialForm(tower, 1, out)


def dlog(x: FieldElement) -> DifferentialForm:
    if x.is_zero():
        raise ZeroArgument("dlog of zero")
    return d(x).scale(x.inverse())


def d_form(alpha: DifferentialForm, wrt=None) -> DifferentialForm:
    """Exterior derivative of a form; wrt optionally restricts to a subset of
    generator indices (derivative relative to the others)."""
    tower = alpha.tower
    indices = range(len(tower.trans)) if wrt is None else wrt
    out = DifferentialForm.zero(tower, alpha.degree + 1)
    for key, c in alpha.coeffs.items():
        for i in indices:
            if i in key:
                continue
            dc = c.partial(tower.trans[i])
            if dc.is_zero():
                continue
            merged, sign = _merge_sorted((i,), key)
            term = DifferentialForm(tower, alpha.degree + 1, {merged: dc if sign > 0 else -dc})
            out = out + term
    return out


def wedge(*forms: DifferentialForm) -> DifferentialForm:
    if not forms:
        raise AddchowError("wedge of nothing")
    acc = forms[0]
    for f in forms[1:]:
        acc = acc.wedge(f)
    return acc


def wedge_list(tower: FieldTower, forms) -> DifferentialForm:
    acc = DifferentialForm.function(tower.one())
    for f in forms:
        acc = acc.wedge(f)
    return acc


# ---------------------------------------------------------------------------
# trace and substitution


def trace_form(alpha: DifferentialForm) -> DifferentialForm:
    """Push a form over k[w]/(P) down to k by tracing each coefficient."""
    tower = alpha.tower
    if tower.ext_name is None:
        raise NoExtension("trace_form requires an extension tower")
    sub = tower.subfield
    return DifferentialForm(sub, alpha.degree, {k: c.trace() for k, c in alpha.coeffs.items()})


def substitute_form(alpha: DifferentialForm, target: FieldTower, values, dvalues) -> DifferentialForm:
    """Pull a form through the map sending generator i to values[i].

    dvalues[i] gives the image of dt_i as a degree-1 form over the target
    (for ordinary charts this is d(values[i])).  Extension generators are not
    substituted; source towers must be extension-free.
    """
    if alpha.tower.ext_name is not None:
        raise AddchowError("substitute_form expects an extension-free source")
    out = DifferentialForm.zero(target, alpha.degree)
    for key, c in alpha.coeffs.items():
        cc = c.substitute(target, values)
        term = DifferentialForm.function(cc)
        for i in key:
            term = term.wedge(dvalues[i])
        out = out + term
    return out


# ---------------------------------------------------------------------------
# logarithmic simplex forms


def gamma_form(n: int, tower: FieldTower | None = None, names=None) -> DifferentialForm:
    """Degree n-1 log form on the zero-sum hyperplane in coordinates v_0..v_n
    with v_0 eliminated: (1/v_0) sum_{i=1..n} (-1)^i dlog v_1 ^..(skip i)..^ dlog v_n."""
    tower, gens = _simplex_tower(n, tower, names)
    v0 = -sum(gens[1:], gens[0])
    if v0.is_zero():
        raise AddchowError("zero-sum coordinate collapsed")
    logs = [dlog(g) for g in gens]
    total = DifferentialForm.zero(tower, n - 1)
    for i in range(1, n + 1):
        term = wedge_list(tower, [logs[j - 1] for j in range(1, n + 1) if j != i])
        total = total + term.scale(tower.integer(-1) ** i)
    return total.scale(v0.inverse())


def nu_form(n: int, tower: FieldTower | None = None, names=None) -> DifferentialForm:
    """Degree n companion dv_1^..^dv_n / (v_0 v_1 .. v_n), v_0 = -(v_1+..+v_n).

    This is d of the gamma form.  (On the zero-sum locus the alternating
    dlog-sum expansion familiar from the unit-sum simplex vanishes
    identically, since its expansion carries a factor sum(v_i); the honest
    closed form of d(gamma) is this log quotient, which the degeneration
    limits reproduce.)
    """
    tower, gens = _simplex_tower(n, tower, names)
    v0 = -sum(gens[1:], gens[0])
    denom = v0
    for g in gens:
        denom = denom * g
    return wedge_list(tower, [d(g) for g in gens]).scale(denom.inverse())


def _simplex_tower(n: int, tower, names):
    if n < 1:
        raise AddchowError("need at least one coordinate")
    if tower is None:
        names = names or tuple(f"v{i}" for i in range(1, n + 1))
        tower = FieldTower.rationals(*names)
    else:
        names = names or tower.trans[:n]
    if len(names) != n:
        raise AddchowError("need exactly n variable names")
    gens = tuple(tower.gen(nm) for nm in names)
    return tower, gens


def gamma_at(coords) -> FieldElement | DifferentialForm:
    """Evaluate the gamma form at explicit nonzero coordinates (v_0,...,v_n):
    (1/v_0) sum (-1)^i dlog v_1 ^..hat i..^ dlog v_n in the coordinates' tower."""
    coords = list(coords)
    if len(coords) < 2:
        raise AddchowError("need at least two coordinates")
    tower = coords[0].tower
    n = len(coords) - 1
    if coords[0].is_zero():
        raise ZeroArgument("gamma has a pole where the zeroth coordinate vanishes")
    logs = [None] + [dlog(c) for c in coords[1:]]
    total = DifferentialForm.zero(tower, n - 1)
    for i in range(1, n + 1):
        term = wedge_list(tower, [logs[j] for j in range(1, n + 1) if j != i])
        total = total + term.scale(tower.integer(-1) ** i)
    return total.scale(coords[0].inverse())


# ---------------------------------------------------------------------------
# residues


def residue_along(alpha: DifferentialForm, name: str) -> DifferentialForm:
    """Residue along the hyperplane t = 0 for a named generator t.

    Writes alpha = dlog(t) ^ eta + eta' with eta, eta' regular along t = 0 and
    returns eta restricted to t = 0.  Coefficients with t-adic valuation < -1,
    or poles on the non-logarithmic part, raise HigherOrderPole.
    """
    tower = alpha.tower
    i = tower.trans_index(name)
    if alpha.degree == 0:
        raise AddchowError("degree-0 forms have no residues")
    collected: dict = {}
    for key, c in alpha.coeffs.items():
        if i in key:
            pos = key.index(i)
            rest = tuple(x for x in key if x != i)
            scaled = _times_var_at_zero(c, i)
            if scaled is None:
                raise HigherOrderPole(f"pole of order >= 2 along {name} = 0")
            if scaled.is_zero():
                continue
            if pos % 2:
                scaled = -scaled
            prev = collected.get(rest)
            collected[rest] = scaled if prev is None else prev + scaled
        else:
            if _valuation_nonneg(c, i) is False:
                raise HigherOrderPole(
                    f"non-logarithmic pole along {name} = 0 (term without d{name})"
                )
    return DifferentialForm(tower, alpha.degree - 1, collected)


def _times_var_at_zero(c: FieldElement, i: int):
    """(t_i * c)|_{t_i = 0} when c has a pole of order <= 1 along t_i, else None.

    Canonical coprimality means the pole order is exactly the t_i-adic
    valuation of the denominator.
    """
    tower = c.tower
    vden = _t_valuation(c.den, i)
    if vden == 0:
        return tower.zero()
    if vden >= 2:
        return None
    den1 = {k[:i] + (k[i] - 1,) + k[i + 1:]: v for k, v in c.den.items()}
    num0 = {k: v for k, v in c.num.items() if k[i] == 0}
    den0 = {k: v for k, v in den1.items() if k[i] == 0}
    return FieldElement(tower, num0, den0)


def _valuation_nonneg(c: FieldElement, i: int) -> bool:
    return c.is_zero() or _t_valuation(c.den, i) == 0


def _t_valuation(poly, i: int) -> int:
    return min((k[i] for k in poly), default=0)


def restrict_at_zero(c: FieldElement, name: str) -> FieldElement:
    """Substitute t = 0 for a named generator; requires no pole along t = 0."""
    tower = c.tower
    i = tower.trans_index(name)
    if c.is_zero():
        return c
    if _t_valuation(c.den, i) > 0:
        raise HigherOrderPole(f"pole along {name} = 0")
    num0 = {k: v for k, v in c.num.items() if k[i] == 0}
    den0 = {k: v for k, v in c.den.items() if k[i] == 0}
    return FieldElement(tower, num0, den0)
