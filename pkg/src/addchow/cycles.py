"""Points, 0-cycles and parametrized curves on the zero-sum coordinate spaces.

The ambient space of dimension n has n+1 coordinates summing to zero; its
faces are the coordinate hyperplanes, and good position for a point means
avoiding all of them (equivalently the vertex).  Cycles are integer formal
sums of good-position closed points, each given by coordinates over the
ground field or over a named simple extension of it.

The module implements the coordinate face/degeneracy maps, the scaling
action x * (t_0,..,t_n) = (t_0/x,..,t_n/x), the tensor-term embedding into
cycles, evaluation of cycles through the logarithmic form (traced down to
the ground field), boundaries of rational parametrized curves, and the
derivative-correspondence point map.
"""

from __future__ import annotations

from .errors import (
    AddchowError,
    BadPosition,
    DegenerateData,
    DegenerateModulus,
    IndexOutOfRange,
    Singular,
    TowerMismatch,
    ZeroProduct,
)
from .fields import FieldElement, FieldTower
from .forms import DifferentialForm, gamma_at, trace_form
from .presentation import PresentationElement
from .unipoly import UPoly, factor_univariate


class QPoint:
    """A point of the zero-sum space, over its owner field."""

    __slots__ = ("tower", "coords")

    def __init__(self, coords):
        coords = tuple(coords)
        if len(coords) < 2:
            raise AddchowError("a point needs at least two coordinates")
        tower = coords[0].tower
        coords = tuple(tower.coerce(c) for c in coords)
        total = coords[0]
        for c in coords[1:]:
            total = total + c
        if not total.is_zero():
            raise BadPosition("coordinates must sum to zero exactly")
        self.tower = tower
        self.coords = coords

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    def good_position(self) -> bool:
        return all(not c.is_zero() for c in self.coords)

    def key(self):
        return (self.tower._key, tuple(c.key() for c in self.coords))

    def __eq__(self, other):
        return isinstance(other, QPoint) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def star(self, x: FieldElement) -> "QPoint":
        """Coordinate-wise division by a nonzero scalar of the ground field."""
        x = _lift_scalar(x, self.tower)
        if x.is_zero():
            raise ZeroProduct("scaling a single point by zero is the empty cycle")
        inv = x.inverse()
        return QPoint([c * inv for c in self.coords])

    def render(self) -> str:
        return "(" + ", ".join(c.render() for c in self.coords) + ")"

    def __repr__(self):
        return f"<{self.render()} over {self.tower.describe()}>"


def _lift_scalar(x: FieldElement, tower: FieldTower) -> FieldElement:
    if x.tower._key == tower._key:
        return tower.coerce(x)
    if tower.ext_name is not None and x.tower._key == tower.subfield._key:
        return tower.embed(x)
    raise TowerMismatch("scalar does not live in the point's field or its ground field")


class ZeroCycle:
    """Integer formal sum of good-position points on a fixed-dimension space.

    Points may live over the ground field or over simple extensions of it;
    collection merges literally equal points (same extension data, same
    coordinate representations).
    """

    __slots__ = ("ground", "dim", "terms")

    def __init__(self, ground: FieldTower, dim: int, entries=()):
        self.ground = ground
        self.dim = dim
        merged: dict = {}
        for pt, mult in entries:
            if not isinstance(pt, QPoint):
                pt = QPoint(pt)
            if pt.dim != dim:
                raise AddchowError("cycle mixes ambient dimensions")
            if not _over_ground(pt.tower, ground):
                raise TowerMismatch("point field is not the ground field or an extension of it")
            if not pt.good_position():
                raise BadPosition("cycle points must be in good position")
            if mult == 0:
                continue
            k = pt.key()
            prev = merged.get(k)
            tot = mult if prev is None else prev[1] + mult
            if tot == 0:
                merged.pop(k, None)
            else:
                merged[k] = (pt, tot)
        self.terms = tuple(merged[k] for k in sorted(merged, key=repr))

    @classmethod
    def empty(cls, ground: FieldTower, dim: int) -> "ZeroCycle":
        return cls(ground, dim, ())

    @classmethod
    def of_point(cls, ground: FieldTower, pt: QPoint, mult: int = 1) -> "ZeroCycle":
        return cls(ground, pt.dim, [(pt, mult)])

    def is_empty(self) -> bool:
        return not self.terms

    def __add__(self, other: "ZeroCycle") -> "ZeroCycle":
        if self.ground._key != other.ground._key or self.dim != other.dim:
            raise AddchowError("cycles are incompatible")
        return ZeroCycle(self.ground, self.dim, list(self.terms) + list(other.terms))

    def __neg__(self) -> "ZeroCycle":
        return ZeroCycle(self.ground, self.dim, [(p, -m) for p, m in self.terms])

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, k: int) -> "ZeroCycle":
        return ZeroCycle(self.ground, self.dim, [(p, m * k) for p, m in self.terms])

    def __eq__(self, other):
        if not isinstance(other, ZeroCycle):
            return NotImplemented
        return (
            self.ground._key == other.ground._key
            and self.dim == other.dim
            and [(p.key(), m) for p, m in self.terms] == [(p.key(), m) for p, m in other.terms]
        )

    def __hash__(self):
        return hash((self.ground._key, self.dim, tuple((p.key(), m) for p, m in self.terms)))

    def render(self) -> str:
        if not self.terms:
            return "0"
        lines = sorted(
            f"{m} * {p.render()} over {p.tower.describe()}" for p, m in self.terms
        )
        return "\n".join(lines)

    def __repr__(self):
        return f"<cycle:\n{self.render()}>"


def _over_ground(tower: FieldTower, ground: FieldTower) -> bool:
    if tower._key == ground._key:
        return True
    return tower.ext_name is not None and tower.subfield._key == ground._key


# ---------------------------------------------------------------------------
# simplicial coordinate maps


def face(j: int, p: QPoint) -> QPoint:
    """Include into the next space by inserting a zero coordinate at slot j."""
    n = p.dim
    if not 0 <= j <= n + 1:
        raise IndexOutOfRange(f"face index {j} out of range for dimension {n}")
    zero = p.tower.zero()
    coords = p.coords[:j] + (zero,) + p.coords[j:]
    return QPoint(coords)


def degeneracy_table(j: int, n: int):
    """Coordinate pullback table of the j-th collapse map, one row per
    target coordinate: entries 'ti', or 'ti+t(i+1)' at the collapsed slot."""
    if not 0 <= j <= n - 1:
        raise IndexOutOfRange(f"degeneracy index {j} out of range for dimension {n}")
    rows = []
    for i in range(n):
        if i < j:
            rows.append(f"t{i}")
        elif i == j:
            rows.append(f"t{i}+t{i + 1}")
        else:
            rows.append(f"t{i + 1}")
    return rows


def degeneracy_apply(j: int, p: QPoint) -> QPoint:
    """Apply the collapse map on coordinates (no cycle pullback)."""
    n = p.dim
    if not 0 <= j <= n - 1:
        raise IndexOutOfRange(f"degeneracy index {j} out of range for dimension {n}")
    c = p.coords
    coords = c[:j] + (c[j] + c[j + 1],) + c[j + 2:]
    return QPoint(coords)


# ---------------------------------------------------------------------------
# the scaling action


def star(x: FieldElement, c: ZeroCycle) -> ZeroCycle:
    """x * cycle: divide every coordinate by x; 0 * anything is empty."""
    if x.is_zero():
        return ZeroCycle.empty(c.ground, c.dim)
    return ZeroCycle(c.ground, c.dim, [(p.star(x), m) for p, m in c.terms])


# ---------------------------------------------------------------------------
# the tensor-term embedding


def phi_term(a: FieldElement, bs, scale: FieldElement | None = None) -> ZeroCycle:
    """a (x) (b_1 ^ .. ^ b_{n-1}) -> a * (-1, b_1/c, .., b_{n-1}/c, -1/c),
    c = -1 + sum(b_i); empty when a = 0 or c = 0.

    scale rescales the embedding coordinates (coordinates divided by scale),
    realizing the coordinate-scale covariance of the embedding.
    """
    tower = a.tower
    bs = tuple(tower.coerce(b) for b in bs)
    n = len(bs) + 1
    if a.is_zero():
        return ZeroCycle.empty(tower, n)
    if any(b.is_zero() for b in bs):
        raise ZeroProduct("wedge slots must be nonzero")
    c = -tower.one()
    for b in bs:
        c = c + b
    if c.is_zero():
        return ZeroCycle.empty(tower, n)
    inv = c.inverse()
    coords = [-tower.one()] + [b * inv for b in bs] + [-inv]
    base = QPoint(coords)
    if scale is not None:
        scale = tower.coerce(scale)
        if scale.is_zero():
            raise ZeroProduct("coordinate scale must be nonzero")
        base = base.star(scale)
    return ZeroCycle.of_point(tower, base.star(a))


def phi(alpha: PresentationElement, scale: FieldElement | None = None) -> ZeroCycle:
    """Embed a presentation element as a 0-cycle, additively over terms."""
    n = alpha.arity + 1
    total = ZeroCycle.empty(alpha.tower, n)
    for a, bs in alpha.terms:
        total = total + phi_term(a, bs, scale=scale)
    return total


# ---------------------------------------------------------------------------
# evaluation through the logarithmic form


def eval_gamma(c: ZeroCycle) -> DifferentialForm:
    """Evaluate the degree n-1 log form at each point and trace down.

    Substitutes the point coordinates into (1/v_0) sum (-1)^i dlog v_1 ^..^
    (skip i) ..^ dlog v_n, then pushes extension coefficients down by the
    field trace; extends additively with multiplicities.
    """
    out = DifferentialForm.zero(c.ground, c.dim - 1)
    for p, m in c.terms:
        val = gamma_at(p.coords)
        if p.tower._key != c.ground._key:
            val = trace_form(val)
        out = out + val.scale(c.ground.integer(m))
    return out


def eval_gamma_point(p: QPoint) -> DifferentialForm:
    """gamma at a single point, without trace (form over the point's field)."""
    if not p.good_position():
        raise BadPosition("evaluation needs a good-position point")
    return gamma_at(p.coords)


# ---------------------------------------------------------------------------
# parametrized curves


class ParametrizedCurve:
    """Rational map from the parameter line into the zero-sum space.

    Coordinates are reduced fractions of univariate polynomials over the
    ground field with monic denominators; they must sum to zero, none may
    vanish identically, and their numerators may share no common root (the
    curve misses the vertex).
    """

    __slots__ = ("tower", "coords")

    def __init__(self, tower: FieldTower, coords):
        cs = []
        for num, den in coords:
            if num.is_zero():
                raise BadPosition("a coordinate function vanishes identically")
            if den.is_zero():
                raise AddchowError("zero denominator in curve coordinate")
            g = num.gcd(den)
            if g.degree() > 0:
                num, den = num // g, den // g
            lc = den.leading()
            if not lc.is_one():
                inv = lc.inverse()
                num, den = num * inv, den * inv
            cs.append((num, den))
        self.tower = tower
        self.coords = tuple(cs)
        total_num = UPoly.zero(tower)
        common_den = UPoly.constant(tower.one())
        for _, den in cs:
            common_den = common_den * den
        for num, den in cs:
            total_num = total_num + num * (common_den // den)
        if not total_num.is_zero():
            raise BadPosition("curve coordinates must sum to zero")
        g = cs[0][0]
        for num, _ in cs[1:]:
            g = g.gcd(num)
        if g.degree() > 0:
            raise BadPosition("curve passes through the vertex (common numerator root)")

    @property
    def dim(self) -> int:
        """Dimension of the ambient zero-sum space the curve lives in."""
        return len(self.coords) - 1

    def coordinate(self, j: int):
        return self.coords[j]

    def render(self) -> str:
        parts = []
        for num, den in self.coords:
            s = num.render("s")
            if den.degree() > 0 or not den.leading().is_one():
                s = f"({s})/({den.render('s')})"
            parts.append(s)
        return "(" + ", ".join(parts) + ")"

    def __repr__(self):
        return f"<curve {self.render()} over {self.tower.describe()}>"


_EXT_NAMES = ("w", "z", "y", "u_")


def _fresh_ext_name(tower: FieldTower) -> str:
    for name in _EXT_NAMES:
        if name not in tower.trans:
            return name
    return "w0"


def curve_boundary(curve: ParametrizedCurve) -> ZeroCycle:
    """Alternating sum over faces of the curve's affine face intersections.

    Face j contributes, for each irreducible factor F of the j-th numerator
    with multiplicity m, the point with the other coordinates evaluated at
    the root class of F, with multiplicity (-1)^j m, over k[w]/(F).  Roots at
    which another coordinate has a pole leave the affine chart and contribute
    nothing; roots landing on a second face are inadmissible.
    """
    tower = curve.tower
    out = ZeroCycle.empty(tower, curve.dim - 1)
    for j, (num, _) in enumerate(curve.coords):
        sign = -1 if j % 2 else 1
        for F, mult in factor_univariate(num):
            pt = _face_point(curve, j, F)
            if pt is None:
                continue
            out = out + ZeroCycle.of_point(tower, pt, sign * mult)
    return out


def _face_point(curve: ParametrizedCurve, j: int, F: UPoly):
    """Point of the curve at the root class of F, omitting coordinate j.

    None when some other coordinate has a pole there (no affine point).
    """
    tower = curve.tower
    if F.degree() == 1:
        root = -F.coeffs[0]
        owner = tower
    else:
        for l, (_, den) in enumerate(curve.coords):
            if l != j and (den % F).is_zero():
                return None
        owner = tower.extend(_fresh_ext_name(tower), list(F.coeffs[:-1]), check_irreducible=False)
        root = owner.theta()
    values = []
    for l, (num_l, den_l) in enumerate(curve.coords):
        if l == j:
            continue
        dv = den_l.evaluate(root)
        if dv.is_zero():
            return None  # leaves the affine chart: no intersection point
        values.append((num_l.evaluate(root), dv))
    coords = []
    for nv, dv in values:
        if nv.is_zero():
            raise BadPosition(
                "boundary point lands on a second face (cycle not admissible)"
            )
        coords.append(nv / dv)
    return QPoint(coords)


# -- the built-in curve families ----------------------------------------------


def linearity_curve(a: FieldElement, b: FieldElement, u: QPoint) -> ParametrizedCurve:
    """The curve whose boundary realizes (a+b)*u ~ a*u + b*u.

    Coordinates (t, -t + u_0/l(t), u_1/l(t), ..., u_n/l(t)) with
    l(t) = -(ab/u_0) t + a + b; requires ab != 0 and u in good position.
    """
    tower = u.tower
    a = tower.coerce(a)
    b = tower.coerce(b)
    if a.is_zero() or b.is_zero():
        raise ZeroProduct("the linearity curve needs ab != 0")
    if not u.good_position():
        raise BadPosition("base point must be in good position")
    u0 = u.coords[0]
    ell = UPoly(tower, [a + b, -(a * b) / u0])
    one = UPoly.constant(tower.one())
    t = UPoly.x(tower)
    coords = [(t, one)]
    # -t + u0/l(t) = (-t*l + u0) / l
    coords.append(((-t) * ell + UPoly.constant(u0), ell))
    for ui in u.coords[1:]:
        coords.append((UPoly.constant(ui), ell))
    return ParametrizedCurve(tower, coords)


def gamma_curve(b: FieldElement, u) -> ParametrizedCurve:
    """The modulus-b relation curve with unit-sum auxiliary coordinates u.

    Coordinates (-1/b + t, 1/(b-1), -t, -u_1/(b(b-1)), ..., -u_{n-1}/(b(b-1)));
    requires b outside {0, 1} and nonzero u_i summing to 1 (use u = (1,) for
    the lowest case).
    """
    tower = b.tower
    u = tuple(tower.coerce(x) for x in u)
    if b.is_zero() or b.is_one():
        raise DegenerateModulus("the modulus must avoid 0 and 1")
    if not u:
        raise AddchowError("need at least one auxiliary coordinate")
    if any(x.is_zero() for x in u):
        raise BadPosition("auxiliary coordinates must be nonzero")
    total = u[0]
    for x in u[1:]:
        total = total + x
    if not total.is_one():
        raise BadPosition("auxiliary coordinates must sum to 1")
    one_el = tower.one()
    bm1 = b - one_el
    one = UPoly.constant(one_el)
    t = UPoly.x(tower)
    coords = [(t - UPoly.constant(b.inverse()), one)]
    coords.append((UPoly.constant(bm1.inverse()), one))
    coords.append((-t, one))
    denom = (b * bm1).inverse()
    for x in u:
        coords.append((UPoly.constant(-x * denom), one))
    return ParametrizedCurve(tower, coords)


class MinimalPolynomialData:
    """Monic minimal polynomial data a_0..a_{N-1} over the ground field."""

    __slots__ = ("tower", "coefficients")

    def __init__(self, tower: FieldTower, coefficients):
        self.tower = tower
        self.coefficients = tuple(tower.coerce(c) for c in coefficients)
        if not self.coefficients:
            raise DegenerateData("degree must be positive")

    @property
    def degree(self) -> int:
        return len(self.coefficients)

    def upoly(self) -> UPoly:
        return UPoly(self.tower, list(self.coefficients) + [self.tower.one()])


def trace_curve(P: MinimalPolynomialData, alpha: QPoint) -> ParametrizedCurve:
    """The trace relation curve for the minimal polynomial of -1/t.

    alpha = (-1, a_1, .., a_n) must be rational over the ground field with
    nonzero entries, and the constant coefficient of P must be nonzero.  Its
    boundary exhibits (trace scalar) * alpha ~ (the conjugate point class).
    """
    tower = P.tower
    if alpha.tower._key != tower._key:
        raise TowerMismatch("base point must be rational over the ground field")
    coords = alpha.coords
    if not (-coords[0]).is_one():
        raise DegenerateData("base point must have first coordinate -1")
    if not alpha.good_position():
        raise BadPosition("base point must be in good position")
    a = P.coefficients
    N = P.degree
    if a[0].is_zero():
        raise DegenerateData("constant coefficient vanishes (reciprocal degenerates)")
    if N < 2:
        raise DegenerateData("extensions of degree >= 2 only")
    alphas = coords[1:]
    an = alphas[-1]
    one = UPoly.constant(tower.one())
    s = UPoly.x(tower)
    coords_out = [(s, one)]
    for ai in alphas[:-1]:
        coords_out.append((UPoly.constant(-ai) * s, one))
    # u(s) = -(a_1 s + a_0)/w(s), w(s) = -(1/a_n)(s^{N-1} + a_{N-1} s^{N-2} + ... + a_2 s)
    if N > 2:
        w_inner = [tower.zero()] + [a[i] for i in range(2, N)] + [tower.one()]
    else:
        w_inner = [tower.zero(), tower.one()]
    w = UPoly(tower, w_inner) * (-(an.inverse()))
    u_num = -(UPoly(tower, [a[0], a[1]]))
    coords_out.append((u_num, w))
    # last coordinate = -(sum of the others) = P(s)/w(s)
    Ppoly = P.upoly()
    coords_out.append((Ppoly, w))
    return ParametrizedCurve(tower, coords_out)


# ---------------------------------------------------------------------------
# the derivative-correspondence map


def nabla(x: QPoint) -> QPoint:
    """(x_0,..,x_n) -> (x_0, -x_1 x_0/(1-x_0), .., -x_n x_0/(1-x_0), -x_0/(1-x_0)).

    Requires x_0 != 1 and a good-position input; the output is again in good
    position and lives one dimension up.
    """
    tower = x.tower
    if not x.good_position():
        raise BadPosition("input must be in good position")
    x0 = x.coords[0]
    if x0.is_one():
        raise Singular("the map has a pole at first coordinate 1")
    denom = tower.one() - x0
    factor = -(x0 / denom)
    coords = [x0] + [xi * factor for xi in x.coords[1:]] + [factor]
    out = QPoint(coords)
    if not out.good_position():
        raise BadPosition("image left good position")
    return out
