"""Exact arithmetic in computable field towers.

A tower is built in at most three steps: a prime base (Q or F_p), a purely
transcendental extension by named generators t_1..t_m, and optionally one
simple separable extension k[w]/(P) with P monic of degree N given by its
lower coefficients a_0..a_{N-1} over the unextended tower.

Elements are stored as canonical fractions num/den of integer-coefficient
polynomials: num may involve the extension generator with degree < N, den
never does.  Canonical form (coprime fraction, joint content 1 and positive
leading denominator coefficient over Q, monic denominator over F_p) makes
equality a literal representation comparison.  Every value is immutable and
every operation is pure.
"""

from __future__ import annotations

from . import intpoly as ip
from .errors import (
    AddchowError,
    CharacteristicObstruction,
    DivisionByZero,
    NoExtension,
    TowerMismatch,
    UnknownVariable,
    UnsupportedDegree,
)

def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class FieldTower:
    """Description of a computable field: prime base, transcendentals, extension."""

    __slots__ = (
        "char",
        "trans",
        "ext_name",
        "ext_coeffs",
        "subfield",
        "nvars",
        "_theta_pows",
        "_dtheta",
        "_key",
        "__weakref__",
    )

    def __init__(self, char: int, trans: tuple[str, ...]):
        if char and not _is_prime(char):
            raise AddchowError(f"characteristic {char} is not prime")
        trans = tuple(trans)
        if len(set(trans)) != len(trans):
            raise AddchowError("transcendental names must be distinct")
        for name in trans:
            if not name.isidentifier():
                raise AddchowError(f"bad variable name {name!r}")
        self.char = char
        self.trans = trans
        self.ext_name = None
        self.ext_coeffs = None
        self.subfield = None
        self.nvars = len(trans)
        self._theta_pows = None
        self._dtheta = None
        self._key = (char, trans, None, None)

    @classmethod
    def rationals(cls, *names: str) -> "FieldTower":
        return cls(0, names)

    @classmethod
    def prime_field(cls, p: int, *names: str) -> "FieldTower":
        return cls(p, names)

    # -- extension ---------------------------------------------------------

    def extend(self, name: str, coeffs, check_irreducible: bool = True) -> "FieldTower":
        """Extend by a root of the monic polynomial V^N + a_{N-1} V^{N-1} + .. + a_0.

        coeffs lists a_0..a_{N-1} as elements of this tower.  The polynomial
        must be separable; irreducibility is the caller's responsibility and
        is sanity-checked for degree <= 4 where factorization is available.
        """
        if self.ext_name is not None:
            raise AddchowError("towers support a single extension step")
        if name in self.trans or not name.isidentifier():
            raise AddchowError(f"bad extension generator name {name!r}")
        coeffs = tuple(self.coerce(c) for c in coeffs)
        if len(coeffs) < 1:
            raise AddchowError("extension degree must be at least 1")
        new = FieldTower.__new__(FieldTower)
        new.char = self.char
        new.trans = self.trans
        new.ext_name = name
        new.ext_coeffs = coeffs
        new.subfield = self
        new.nvars = len(self.trans) + 1
        new._theta_pows = {}
        new._dtheta = None
        new._key = (self.char, self.trans, name, tuple(c.key() for c in coeffs))
        new._check_separable()
        if check_irreducible:
            new._sanity_check_irreducible()
        return new

    @property
    def ext_degree(self) -> int:
        if self.ext_name is None:
            raise NoExtension("tower has no extension")
        return len(self.ext_coeffs)

    def minimal_polynomial(self):
        """The defining polynomial as a unipoly.UPoly over the subfield."""
        from .unipoly import UPoly

        sub = self.subfield
        return UPoly(sub, list(self.ext_coeffs) + [sub.one()])

    def _check_separable(self):
        from .unipoly import UPoly

        P = self.minimal_polynomial()
        g = P.gcd(P.derivative())
        if g.degree() != 0:
            raise CharacteristicObstruction(
                "inseparable minimal polynomial (gcd(P, P') != 1)"
            )

    def _sanity_check_irreducible(self):
        from .unipoly import factor_univariate

        P = self.minimal_polynomial()
        if P.degree() > 4:
            return
        try:
            factors = factor_univariate(P)
        except UnsupportedDegree:
            return
        if len(factors) > 1 or (factors and factors[0][1] > 1):
            raise AddchowError("minimal polynomial is reducible")

    # -- variable bookkeeping ---------------------------------------------

    def var_names(self) -> tuple[str, ...]:
        if self.ext_name is not None:
            return self.trans + (self.ext_name,)
        return self.trans

    def trans_index(self, name: str) -> int:
        try:
            return self.trans.index(name)
        except ValueError:
            raise UnknownVariable(f"{name!r} is not a transcendental of {self}") from None

    # -- element constructors ----------------------------------------------

    def zero(self) -> "FieldElement":
        return FieldElement(self, {}, ip.one(self.nvars))

    def one(self) -> "FieldElement":
        return FieldElement(self, ip.one(self.nvars), ip.one(self.nvars))

    def integer(self, k: int) -> "FieldElement":
        return FieldElement(self, ip.const(k, self.nvars, self.char), ip.one(self.nvars))

    def rational(self, a: int, b: int) -> "FieldElement":
        if b == 0:
            raise DivisionByZero("rational with zero denominator")
        return self.integer(a) / self.integer(b)

    def gen(self, name: str) -> "FieldElement":
        names = self.var_names()
        if name not in names:
            raise UnknownVariable(f"{name!r} is not a generator of {self}")
        i = names.index(name)
        return FieldElement(self, ip.variable(i, self.nvars), ip.one(self.nvars))

    def gens(self):
        return tuple(self.gen(n) for n in self.var_names())

    def theta(self) -> "FieldElement":
        if self.ext_name is None:
            raise NoExtension("tower has no extension")
        return self.gen(self.ext_name)

    def coerce(self, x) -> "FieldElement":
        if isinstance(x, FieldElement):
            if x.tower is self or x.tower._key == self._key:
                return x if x.tower is self else FieldElement(self, x.num, x.den)
            raise TowerMismatch(f"element of {x.tower} used in {self}")
        if isinstance(x, int):
            return self.integer(x)
        raise TypeError(f"cannot coerce {type(x).__name__} into {self}")

    def embed(self, x: "FieldElement") -> "FieldElement":
        """Embed an element of the unextended subfield into this tower."""
        if self.ext_name is None:
            raise NoExtension("tower has no extension")
        if x.tower._key != self.subfield._key:
            raise TowerMismatch("embed expects an element of the subfield")
        pad = lambda poly: {k + (0,): c for k, c in poly.items()}
        return FieldElement(self, pad(x.num), pad(x.den))

    # -- theta reduction ----------------------------------------------------

    def _theta_pow(self, d: int):
        """theta^d as a pair (numerator poly with theta-degree < N, theta-free den)."""
        N = self.ext_degree
        assert d >= N
        cached = self._theta_pows.get(d)
        if cached is not None:
            return cached
        p = self.char
        nv = self.nvars
        if d == N:
            # theta^N = -(a_{N-1} theta^{N-1} + ... + a_0)
            num = {}
            den = ip.one(nv)
            for j, a in enumerate(self.ext_coeffs):
                an = {k + (0,): c for k, c in a.num.items()}
                ad = {k + (0,): c for k, c in a.den.items()}
                num = ip.add(ip.mul(num, ad, p), ip.mul_term(ip.mul(an, den, p), self._theta_key(j), 1, p), p)
                den = ip.mul(den, ad, p)
            num = ip.neg(num, p)
        else:
            s_num, s_den = self._theta_pow(d - 1)
            num = ip.mul_term(s_num, self._theta_key(1), 1, p)
            den = s_den
            if ip.degree_in(num, nv - 1) >= N:
                num, den = _reduce_theta_once(self, num, den)
        g = ip.gcd(num, den, p)
        if not ip.is_const(g):
            q1, q2 = ip.exact_div(num, g, p), ip.exact_div(den, g, p)
            if q1 is not None and q2 is not None:
                num, den = q1, q2
        self._theta_pows[d] = (num, den)
        return num, den

    def _theta_key(self, e: int):
        return tuple(e if i == self.nvars - 1 else 0 for i in range(self.nvars))

    def _dtheta_list(self):
        """d(theta)/d(t_i) for each transcendental, by implicit differentiation."""
        if self._dtheta is not None:
            return self._dtheta
        theta = self.theta()
        N = self.ext_degree
        # P'(theta)
        pprime = self.zero()
        for j, a in enumerate(self.ext_coeffs):
            if j >= 1:
                pprime = pprime + self.embed(a) * self.integer(j) * theta ** (j - 1)
        pprime = pprime + self.integer(N) * theta ** (N - 1)
        if pprime.is_zero():
            raise CharacteristicObstruction("P'(theta) = 0: inseparable extension")
        out = []
        for i in range(len(self.trans)):
            dP = self.zero()
            for j, a in enumerate(self.ext_coeffs):
                da = a.partial(self.trans[i])
                if not da.is_zero():
                    dP = dP + self.embed(da) * theta**j
            out.append(-dP / pprime)
        self._dtheta = tuple(out)
        return self._dtheta

    # -- misc ---------------------------------------------------------------

    def describe(self) -> str:
        base = "Q" if self.char == 0 else f"F{self.char}"
        s = base
        if self.trans:
            s += "(" + ",".join(self.trans) + ")"
        if self.ext_name is not None:
            from .unipoly import UPoly

            P = UPoly(self.subfield, list(self.ext_coeffs) + [self.subfield.one()])
            s += f"[{self.ext_name}]/({P.render(self.ext_name)})"
        return s

    def __repr__(self):
        return f"FieldTower({self.describe()})"

    def __eq__(self, other):
        return isinstance(other, FieldTower) and self._key == other._key

    def __hash__(self):
        return hash(self._key)


def _reduce_theta_once(tower: FieldTower, num, den):
    """One top-slab reduction step for theta-degree >= N."""
    p = tower.char
    ti = tower.nvars - 1
    N = tower.ext_degree
    d = ip.degree_in(num, ti)
    top = {}
    rest = {}
    for k, c in num.items():
        if k[ti] == d:
            top[k[:ti] + (0,)] = c
        else:
            rest[k] = c
    s_num, s_den = tower._theta_pow(d)
    num2 = ip.add(ip.mul(rest, s_den, p), ip.mul(top, s_num, p), p)
    den2 = ip.mul(den, s_den, p)
    return num2, den2


def _reduce_theta(tower: FieldTower, num, den):
    ti = tower.nvars - 1
    N = tower.ext_degree
    while ip.degree_in(num, ti) >= N:
        num, den = _reduce_theta_once(tower, num, den)
    return num, den


class FieldElement:
    """Immutable canonical fraction over a FieldTower."""

    __slots__ = ("tower", "num", "den", "_hash")

    def __init__(self, tower: FieldTower, num, den, _canonical=False):
        if not _canonical:
            num, den = _canon(tower, num, den)
        self.tower = tower
        self.num = num
        self.den = den
        self._hash = None

    # -- predicates ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.num

    def is_one(self) -> bool:
        return self.num == self.den

    def is_integer_constant(self) -> bool:
        return ip.is_const(self.num) and ip.is_const(self.den)

    # -- arithmetic -----------------------------------------------------------

    def _coerce_other(self, other):
        if isinstance(other, FieldElement):
            if other.tower is self.tower:
                return other
            if other.tower._key == self.tower._key:
                return FieldElement(self.tower, other.num, other.den, _canonical=True)
            raise TowerMismatch(
                f"cannot mix elements of {self.tower.describe()} and {other.tower.describe()}"
            )
        if isinstance(other, int):
            return self.tower.integer(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce_other(other)
        if o is NotImplemented:
            return o
        p = self.tower.char
        if self.den == o.den:
            return FieldElement(self.tower, ip.add(self.num, o.num, p), self.den)
        num = ip.add(ip.mul(self.num, o.den, p), ip.mul(o.num, self.den, p), p)
        den = ip.mul(self.den, o.den, p)
        return FieldElement(self.tower, num, den)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.tower, ip.neg(self.num, self.tower.char), self.den, _canonical=True)

    def __sub__(self, other):
        o = self._coerce_other(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce_other(other)
        if o is NotImplemented:
            return o
        p = self.tower.char
        num = ip.mul(self.num, o.num, p)
        den = ip.mul(self.den, o.den, p)
        if self.tower.ext_name is not None:
            num, den = _reduce_theta(self.tower, num, den)
        return FieldElement(self.tower, num, den)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise DivisionByZero("division by zero")
        tower = self.tower
        if tower.ext_name is None or ip.degree_in(self.num, tower.nvars - 1) == 0:
            return FieldElement(tower, self.den, self.num)
        # rationalize: invert the theta-polynomial numerator mod P
        from .unipoly import UPoly

        sub = tower.subfield
        slabs = _theta_slabs(tower, self.num)
        f = UPoly(sub, [FieldElement(sub, s, ip.one(sub.nvars)) for s in slabs])
        u = f.inverse_mod(tower.minimal_polynomial())
        inv_num = tower.zero()
        theta = tower.theta()
        for j, c in enumerate(u.coeffs):
            inv_num = inv_num + tower.embed(c) * theta**j
        return inv_num * FieldElement(tower, self.den, ip.one(tower.nvars))

    def __truediv__(self, other):
        o = self._coerce_other(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.tower.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- calculus -------------------------------------------------------------

    def partial(self, name: str) -> "FieldElement":
        """Formal partial derivative wrt a transcendental, with the implicit
        rule d(theta)/dt = -(dP/dt)(theta)/P'(theta) on extension towers."""
        tower = self.tower
        i = tower.trans_index(name)
        p = tower.char
        if tower.ext_name is None:
            dnum = ip.derivative(self.num, i, p)
            dden = ip.derivative(self.den, i, p)
            num = ip.sub(ip.mul(dnum, self.den, p), ip.mul(self.num, dden, p), p)
            den = ip.mul(self.den, self.den, p)
            return FieldElement(tower, num, den)
        dtheta = tower._dtheta_list()[i]
        ti = tower.nvars - 1
        dnum_el = FieldElement(tower, ip.derivative(self.num, i, p), ip.one(tower.nvars)) + (
            FieldElement(tower, ip.derivative(self.num, ti, p), ip.one(tower.nvars)) * dtheta
        )
        dden_el = FieldElement(tower, ip.derivative(self.den, i, p), ip.one(tower.nvars))
        den_el = FieldElement(tower, self.den, ip.one(tower.nvars))
        num_el = FieldElement(tower, self.num, ip.one(tower.nvars))
        return (dnum_el * den_el - num_el * dden_el) / (den_el * den_el)

    # -- extension specific -----------------------------------------------------

    def theta_coefficients(self):
        """Coefficients of 1, theta, ..., theta^{N-1} as subfield elements."""
        tower = self.tower
        if tower.ext_name is None:
            raise NoExtension("element lives in a tower without extension")
        sub = tower.subfield
        slabs = _theta_slabs(tower, self.num)
        den = {k[:-1]: c for k, c in self.den.items()}
        return [FieldElement(sub, s, den) for s in slabs]

    def to_subfield(self) -> "FieldElement":
        """Reinterpret a theta-free element in the unextended subfield."""
        tower = self.tower
        if tower.ext_name is None:
            raise NoExtension("element lives in a tower without extension")
        ti = tower.nvars - 1
        if ip.degree_in(self.num, ti) > 0:
            raise AddchowError("element genuinely involves the extension generator")
        sub = tower.subfield
        return FieldElement(
            sub,
            {k[:-1]: c for k, c in self.num.items()},
            {k[:-1]: c for k, c in self.den.items()},
            _canonical=True,
        )

    def trace(self) -> "FieldElement":
        """Trace of multiplication-by-self on the extension, landing in the subfield."""
        tower = self.tower
        if tower.ext_name is None:
            raise NoExtension("trace requires an extension tower")
        N = tower.ext_degree
        theta = tower.theta()
        total = tower.subfield.zero()
        power = self
        for j in range(N):
            total = total + power.theta_coefficients()[j]
            if j + 1 < N:
                power = power * theta
        return total

    # -- substitution ------------------------------------------------------------

    def substitute(self, target: FieldTower, values) -> "FieldElement":
        """Image under the map sending the i-th generator of this tower to values[i].

        values must cover every generator (transcendentals, then theta if
        present) with elements of the target tower.
        """
        values = [target.coerce(v) for v in values]
        if len(values) != self.tower.nvars:
            raise AddchowError("substitute needs one value per generator")
        num = _eval_poly(self.num, values, target, self.tower.char)
        den = _eval_poly(self.den, values, target, self.tower.char)
        if den.is_zero():
            raise DivisionByZero("substitution hits a pole")
        return num / den

    # -- canonical output ----------------------------------------------------------

    def key(self):
        """Hashable canonical key (used for exact equality across containers)."""
        return (
            self.tower._key,
            tuple(sorted(self.num.items())),
            tuple(sorted(self.den.items())),
        )

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.tower.integer(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return (
            self.tower._key == other.tower._key
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def render(self) -> str:
        names = list(self.tower.var_names())
        if not self.num:
            return "0"
        num_s = ip.render(self.num, names)
        if self.den == ip.one(self.tower.nvars):
            return num_s
        den_s = ip.render(self.den, names)
        if len(self.num) > 1:
            num_s = f"({num_s})"
        (dk, dc), = self.den.items() if len(self.den) == 1 else [((), 0)]
        plain = len(self.den) == 1 and (
            not any(dk) or (dc == 1 and sum(1 for e in dk if e) == 1)
        )
        if not plain:
            den_s = f"({den_s})"
        return f"{num_s}/{den_s}"

    def __repr__(self):
        return f"<{self.render()} over {self.tower.describe()}>"


def _theta_slabs(tower: FieldTower, num):
    N = tower.ext_degree
    ti = tower.nvars - 1
    slabs = [dict() for _ in range(N)]
    for k, c in num.items():
        slabs[k[ti]][k[:ti]] = c
    return slabs


def _canon(tower: FieldTower, num, den):
    p = tower.char
    if not den:
        raise DivisionByZero("zero denominator")
    if not num:
        return {}, ip.one(tower.nvars)
    g = ip.gcd(num, den, p)
    if not ip.is_const(g) or next(iter(g.values())) != 1:
        num = ip.exact_div(num, g, p)
        den = ip.exact_div(den, g, p)
    if p:
        _, lc = ip.leading(den)
        if lc != 1:
            inv = pow(lc, p - 2, p)
            num = ip.mul_scalar(num, inv, p)
            den = ip.mul_scalar(den, inv, p)
    else:
        _, lc = ip.leading(den)
        if lc < 0:
            num = ip.neg(num, 0)
            den = ip.neg(den, 0)
    return num, den


def _eval_poly(poly, values, target: FieldTower, src_char: int):
    """Evaluate an integer-coefficient poly at target-tower elements, exactly.

    Builds a single fraction over the target and canonicalizes once.
    """
    if not poly:
        return target.zero()
    p = target.char
    nv_src = len(next(iter(poly)))
    maxdeg = [0] * nv_src
    for k in poly:
        for i, e in enumerate(k):
            if e > maxdeg[i]:
                maxdeg[i] = e
    num_pows = []
    den_pows = []
    for i in range(nv_src):
        npows = [ip.one(target.nvars)]
        dpows = [ip.one(target.nvars)]
        for e in range(maxdeg[i]):
            npows.append(ip.mul(npows[-1], values[i].num, p))
            dpows.append(ip.mul(dpows[-1], values[i].den, p))
        num_pows.append(npows)
        den_pows.append(dpows)
    total = {}
    for k, c in poly.items():
        term = ip.const(c, target.nvars, p)
        for i, e in enumerate(k):
            term = ip.mul(term, num_pows[i][e], p)
            term = ip.mul(term, den_pows[i][maxdeg[i] - e], p)
        total = ip.add(total, term, p)
    den = ip.one(target.nvars)
    for i in range(nv_src):
        den = ip.mul(den, den_pows[i][maxdeg[i]], p)
    if target.ext_name is not None:
        total, den = _reduce_theta(target, total, den)
    return FieldElement(target, total, den)


def arith(x: FieldElement, y: FieldElement, op: str) -> FieldElement:
    """Binary field arithmetic dispatch: op in ``+ - * /``."""
    if x.tower._key != y.tower._key:
        raise TowerMismatch("operands live in different towers")
    if op == "+":
        return x + y
    if op == "-":
        return x - y
    if op == "*":
        return x * y
    if op == "/":
        return x / y
    raise AddchowError(f"unknown operation {op!r}")


def trace(x: FieldElement) -> FieldElement:
    """Field trace to the unextended subfield (spec operation form)."""
    return x.trace()


def partial(x: FieldElement, name: str) -> FieldElement:
    return x.partial(name)
