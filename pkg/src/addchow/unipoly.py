"""Univariate polynomials over a field tower: gcd, resultants, factorization.

Coefficients are FieldElements; polynomials are dense little-endian lists.
Factorization is complete over a plain rational base (rational roots plus
certified splitting through degree 4), complete over a plain prime field
(distinct-degree plus Cantor-Zassenhaus equal-degree splitting), and handles
linear and quadratic polynomials over any tower with transcendentals via an
exact discriminant square root (characteristic != 2).
"""

from __future__ import annotations

import math
import random

from . import intpoly as ip
from .errors import (
    AddchowError,
    CharacteristicObstruction,
    DivisionByZero,
    UnsupportedDegree,
)
from .fields import FieldElement, FieldTower


class UPoly:
    """Dense univariate polynomial with tower coefficients, little-endian."""

    __slots__ = ("tower", "coeffs")

    def __init__(self, tower: FieldTower, coeffs):
        cs = [tower.coerce(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.tower = tower
        self.coeffs = tuple(cs)

    @classmethod
    def zero(cls, tower):
        return cls(tower, [])

    @classmethod
    def constant(cls, c: FieldElement):
        return cls(c.tower, [c])

    @classmethod
    def x(cls, tower):
        return cls(tower, [tower.zero(), tower.one()])

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, i: int) -> FieldElement:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.tower.zero()

    def leading(self) -> FieldElement:
        if not self.coeffs:
            raise AddchowError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def monic(self) -> "UPoly":
        if self.is_zero():
            return self
        lc = self.leading()
        if lc.is_one():
            return self
        return UPoly(self.tower, [c / lc for c in self.coeffs])

    def __eq__(self, other):
        return (
            isinstance(other, UPoly)
            and self.tower._key == other.tower._key
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.tower._key, tuple(c.key() for c in self.coeffs)))

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return UPoly(self.tower, [self[i] + other[i] for i in range(n)])

    def __neg__(self):
        return UPoly(self.tower, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, FieldElement):
            return UPoly(self.tower, [c * other for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return UPoly.zero(self.tower)
        out = [self.tower.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return UPoly(self.tower, out)

    def shift(self, k: int) -> "UPoly":
        return UPoly(self.tower, [self.tower.zero()] * k + list(self.coeffs))

    def divmod(self, other: "UPoly"):
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        q = UPoly.zero(self.tower)
        r = self
        d = other.degree()
        inv_lc = other.leading().inverse()
        while not r.is_zero() and r.degree() >= d:
            k = r.degree() - d
            c = r.leading() * inv_lc
            term = UPoly(self.tower, [self.tower.zero()] * k + [c])
            q = q + term
            r = r - (other * c).shift(k)
        return q, r

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def gcd(self, other: "UPoly") -> "UPoly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def derivative(self) -> "UPoly":
        return UPoly(
            self.tower,
            [self.coeffs[i] * self.tower.integer(i) for i in range(1, len(self.coeffs))],
        )

    def evaluate(self, x: FieldElement) -> FieldElement:
        acc = x.tower.zero()
        for c in reversed(self.coeffs):
            acc = acc * x + _lift(c, x.tower)
        return acc

    def map_coeffs(self, fn, tower=None) -> "UPoly":
        return UPoly(tower or self.tower, [fn(c) for c in self.coeffs])

    def inverse_mod(self, modulus: "UPoly") -> "UPoly":
        """u with u*self = 1 mod modulus (extended Euclid; modulus irreducible)."""
        r0, r1 = modulus, self % modulus
        t0, t1 = UPoly.zero(self.tower), UPoly.constant(self.tower.one())
        while not r1.is_zero():
            q, r = r0.divmod(r1)
            r0, r1 = r1, r
            t0, t1 = t1, t0 - q * t1
        if r0.degree() != 0:
            raise AddchowError("inverse does not exist: modulus not coprime")
        return (t0 * r0.leading().inverse()) % modulus

    def resultant(self, other: "UPoly") -> FieldElement:
        """Resultant via the Euclidean recursion."""
        f, g = self, other
        tower = self.tower
        if f.is_zero() or g.is_zero():
            return tower.zero()
        acc = tower.one()
        while True:
            df, dg = f.degree(), g.degree()
            if dg == 0:
                return acc * g.leading() ** df
            r = f % g
            if r.is_zero():
                return tower.zero()
            dr = r.degree()
            sign = tower.integer(-1) ** (df * dg)
            acc = acc * sign * g.leading() ** (df - dr)
            f, g = g, r

    def pow_mod(self, e: int, modulus: "UPoly") -> "UPoly":
        result = UPoly.constant(self.tower.one())
        base = self % modulus
        while e:
            if e & 1:
                result = (result * base) % modulus
            e >>= 1
            if e:
                base = (base * base) % modulus
        return result

    def compose_scaled(self, c: FieldElement) -> "UPoly":
        """self(c*x) as a polynomial in x."""
        out = []
        power = self.tower.one()
        for a in self.coeffs:
            out.append(a * power)
            power = power * c
        return UPoly(self.tower, out)

    def render(self, name: str = "V") -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c.is_zero():
                continue
            if i == 0:
                parts.append(c.render())
            else:
                xs = name if i == 1 else f"{name}^{i}"
                if c.is_one():
                    parts.append(xs)
                elif (-c).is_one():
                    parts.append(f"-{xs}")
                else:
                    cs = c.render()
                    if "+" in cs or ("-" in cs[1:]) or "/" in cs:
                        cs = f"({cs})"
                    parts.append(f"{cs}*{xs}")
        out = parts[0]
        for t in parts[1:]:
            out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return out

    def __repr__(self):
        return f"UPoly({self.render()})"


def _lift(c: FieldElement, tower: FieldTower) -> FieldElement:
    if c.tower._key == tower._key:
        return tower.coerce(c)
    if tower.ext_name is not None and c.tower._key == tower.subfield._key:
        return tower.embed(c)
    raise AddchowError("coefficient cannot be lifted into evaluation tower")


# ---------------------------------------------------------------------------
# factorization


def factor_univariate(f: UPoly):
    """Factor into monic irreducibles: list of (factor, multiplicity).

    The unit is recoverable as lc(f); supported ground fields are documented
    in the module docstring.  Raises UnsupportedDegree outside that range.
    """
    if f.is_zero():
        raise AddchowError("cannot factor the zero polynomial")
    tower = f.tower
    f = f.monic()
    factors: dict[UPoly, int] = {}
    # split off powers of x
    k = 0
    while f.coeffs and f.coeffs[0].is_zero():
        f = UPoly(tower, f.coeffs[1:])
        k += 1
    if k:
        factors[UPoly.x(tower)] = k
    if f.degree() == 0:
        return sorted(factors.items(), key=lambda t: (t[0].degree(), t[0].render()))
    kernel = _squarefree_kernel(f)
    for g in _factor_squarefree(kernel):
        m = 0
        rest = f
        while True:
            q, r = rest.divmod(g)
            if not r.is_zero():
                break
            rest = q
            m += 1
        factors[g] = factors.get(g, 0) + m
    return sorted(factors.items(), key=lambda t: (t[0].degree(), t[0].render()))


def _squarefree_kernel(f: UPoly) -> UPoly:
    tower = f.tower
    fp = f.derivative()
    if fp.is_zero():
        # f = h(x^p); possible only in char p
        p = tower.char
        if p == 0:
            raise AddchowError("zero derivative in characteristic 0")
        if tower.trans or tower.ext_name is not None:
            raise UnsupportedDegree("p-th power kernels over function fields")
        # coefficients of F_p are fixed by Frobenius
        root = UPoly(tower, [f.coeffs[i] for i in range(0, len(f.coeffs), p)])
        return _squarefree_kernel(root)
    return (f // f.gcd(fp)).monic()


def _factor_squarefree(f: UPoly):
    tower = f.tower
    if f.degree() == 0:
        return []
    if f.degree() == 1:
        return [f.monic()]
    plain = not tower.trans and tower.ext_name is None
    if plain and tower.char:
        return _factor_prime_field(f)
    if plain and tower.char == 0:
        return _factor_plain_rationals(f)
    return _factor_function_field(f)


# -- plain prime field: distinct degree + Cantor-Zassenhaus -------------------


def _factor_prime_field(f: UPoly):
    tower = f.tower
    p = tower.char
    out = []
    x = UPoly.x(tower)
    h = x
    rest = f
    d = 0
    while rest.degree() > 0:
        d += 1
        if rest.degree() < 2 * d:
            out.append(rest.monic())
            break
        h = h.pow_mod(p, rest)
        g = rest.gcd(h - x)
        if g.degree() > 0:
            out.extend(_equal_degree_split(g, d))
            rest = rest // g
            h = h % rest
    return out


def _equal_degree_split(f: UPoly, d: int):
    tower = f.tower
    p = tower.char
    if f.degree() == d:
        return [f.monic()]
    rng = random.Random(0xC0FFEE ^ f.degree() ^ d)
    while True:
        r = UPoly(tower, [tower.integer(rng.randrange(p)) for _ in range(f.degree())])
        if r.degree() < 1:
            continue
        if p == 2:
            # trace polynomial r + r^2 + ... + r^(2^(d-1))
            t = r
            acc = r
            for _ in range(d - 1):
                t = (t * t) % f
                acc = acc + t
            g = f.gcd(acc)
        else:
            g = f.gcd(r.pow_mod((p**d - 1) // 2, f) - UPoly.constant(tower.one()))
        if 0 < g.degree() < f.degree():
            return _equal_degree_split(g, d) + _equal_degree_split(f // g, d)


# -- plain rationals ----------------------------------------------------------


def _clear_to_integers(f: UPoly):
    """Scale a monic-or-not UPoly over plain Q to a primitive integer list."""
    nums = []
    dens = []
    for c in f.coeffs:
        nums.append(next(iter(c.num.values())) if c.num else 0)
        dens.append(next(iter(c.den.values())) if c.den else 1)
    L = 1
    for d in dens:
        L = L * d // math.gcd(L, d)
    ints = [n * (L // d) for n, d in zip(nums, dens)]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    if g > 1:
        ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def _rational_roots(ints):
    """All rational roots of a primitive integer polynomial, with multiplicity 1 set."""
    from fractions import Fraction

    a0 = ints[0]
    an = ints[-1]
    if a0 == 0:
        raise AddchowError("zero constant term should have been stripped")
    roots = set()
    for q in _divisors(abs(an)):
        for r in _divisors(abs(a0)):
            for sign in (1, -1):
                cand = Fraction(sign * r, q)
                acc = Fraction(0)
                for c in reversed(ints):
                    acc = acc * cand + c
                if acc == 0:
                    roots.add(cand)
    return roots


def _divisors(n: int):
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def _factor_plain_rationals(f: UPoly):
    tower = f.tower
    out = []
    rest = f.monic()
    ints = _clear_to_integers(rest)
    for root in sorted(_rational_roots(ints)):
        lin = UPoly(tower, [-tower.rational(root.numerator, root.denominator), tower.one()])
        while True:
            q, r = rest.divmod(lin)
            if not r.is_zero():
                break
            rest = q
        if lin not in out:
            out.append(lin)
    d = rest.degree()
    if d == 0:
        return out
    if d == 1:
        return out + [rest.monic()]
    if d == 2:
        return out + _quadratic_split(rest)
    if d == 3:
        return out + [rest.monic()]  # no rational root: irreducible cubic
    if d == 4:
        return out + _quartic_split_over_q(rest)
    raise UnsupportedDegree(
        f"non-linear part of degree {d} > 4 over the rationals cannot be certified"
    )


def _quartic_split_over_q(f: UPoly):
    """Certified factorization of a rational quartic with no rational roots.

    Over Z (Gauss), a primitive quartic with no linear factors splits, if at
    all, into two integer quadratics; enumerate divisor pairs of the extreme
    coefficients.  The monic factors are returned; failure of every candidate
    certifies irreducibility.
    """
    tower = f.tower
    ints = _clear_to_integers(f)
    e, d_, c, b, a = ints  # a x^4 + b x^3 + c x^2 + d x + e
    for p in _signed_divisors(a):
        q_lead = a // p if p and a % p == 0 else None
        if q_lead is None:
            continue
        for r in _signed_divisors(e):
            if r == 0 or e % r:
                continue
            s = e // r
            # (p x^2 + u x + r)(q x^2 + v x + s) ; solve for u, v
            q = q_lead
            # u*q + v*p = b ; u*v + p*s + q*r = c ; u*s + v*r = d_
            det = q * r - p * s
            candidates = []
            if det != 0:
                u_num = b * r - p * d_
                v_num = q * d_ - b * s
                if u_num % det or v_num % det:
                    continue
                candidates.append((u_num // det, v_num // det))
            else:
                # singular system: use the x^2 equation. v = (b - u q)/p and
                # u v = c - p s - q r give q u^2 - b u + p (c - p s - q r) = 0.
                w = c - p * s - q * r
                disc = b * b - 4 * q * p * w
                if disc < 0:
                    continue
                rt = math.isqrt(disc)
                if rt * rt != disc:
                    continue
                for sgn in (1, -1):
                    if (b + sgn * rt) % (2 * q) == 0:
                        u = (b + sgn * rt) // (2 * q)
                        if (b - u * q) % p == 0:
                            candidates.append((u, (b - u * q) // p))
            for u, v in candidates:
                if not (u * q + v * p == b and u * v + p * s + q * r == c and u * s + v * r == d_):
                    continue
                f1 = UPoly(tower, [tower.integer(r), tower.integer(u), tower.integer(p)])
                f2 = UPoly(tower, [tower.integer(s), tower.integer(v), tower.integer(q)])
                if (f1 * f2).monic() == f.monic():
                    return sorted(
                        _quadratic_split(f1) + _quadratic_split(f2),
                        key=lambda g: (g.degree(), g.render()),
                    )
    return [f.monic()]


def _signed_divisors(n: int):
    ds = _divisors(abs(n)) if n else []
    return [d for a in ds for d in (a, -a)]


# -- quadratics over arbitrary towers -----------------------------------------


def _quadratic_split(f: UPoly):
    """Split a quadratic via an exact discriminant square root, if one exists."""
    tower = f.tower
    if tower.char == 2:
        raise CharacteristicObstruction("quadratic splitting divides by 2")
    f = f.monic()
    b, c = f.coeffs[1], f.coeffs[0]
    disc = b * b - tower.integer(4) * c
    root = element_sqrt(disc)
    if root is None:
        return [f]
    two_inv = tower.integer(2).inverse()
    r1 = (-b + root) * two_inv
    r2 = (-b - root) * two_inv
    out = [UPoly(tower, [-r1, tower.one()]), UPoly(tower, [-r2, tower.one()])]
    return sorted(out, key=lambda g: g.render())


def _factor_function_field(f: UPoly):
    d = f.degree()
    if d == 1:
        return [f.monic()]
    if d == 2:
        return _quadratic_split(f)
    raise UnsupportedDegree(
        f"degree {d} factorization over {f.tower.describe()} is not supported"
    )


def element_sqrt(x: FieldElement):
    """Exact square root in the tower, or None if certifiably not a square.

    Characteristic 2 is unsupported; elements genuinely involving an
    extension generator raise UnsupportedDegree (squareness there is not
    decided by this routine), theta-free elements of extension towers are
    handled through the subfield.
    """
    tower = x.tower
    if tower.char == 2:
        raise CharacteristicObstruction("square roots in characteristic 2")
    if x.is_zero():
        return tower.zero()
    if tower.ext_name is not None:
        if ip.degree_in(x.num, tower.nvars - 1) > 0:
            raise UnsupportedDegree("square roots inside extensions are not decided")
        r = element_sqrt(x.to_subfield())
        return None if r is None else tower.embed(r)
    sn = ip.sqrt(x.num, tower.char)
    if sn is None:
        return None
    sd = ip.sqrt(x.den, tower.char)
    if sd is None:
        return None
    return FieldElement(tower, sn, sd)


# ---------------------------------------------------------------------------
# characteristic / minimal polynomials over an extension


def charpoly(x: FieldElement) -> UPoly:
    """Characteristic polynomial of multiplication-by-x over the subfield.

    Computed from the multiplication matrix by exact cofactor expansion of
    det(X - M); degree equals the extension degree.
    """
    tower = x.tower
    N = tower.ext_degree
    sub = tower.subfield
    theta = tower.theta()
    cols = []
    power = x
    for j in range(N):
        cols.append(power.theta_coefficients())
        if j + 1 < N:
            power = power * theta
    # matrix of X*I - M with entries in UPoly over the subfield
    entries = {}
    for i in range(N):
        for j in range(N):
            m = cols[j][i]
            diag = [sub.zero(), sub.one()] if i == j else [sub.zero()]
            entries[(i, j)] = UPoly(sub, [(-m) + diag[0], *diag[1:]])
    return _det_upoly(entries, N, sub)


def _det_upoly(entries, n, sub) -> UPoly:
    if n == 1:
        return entries[(0, 0)]
    total = UPoly.zero(sub)
    for j in range(n):
        minor = {}
        for i2 in range(1, n):
            cdx = 0
            for j2 in range(n):
                if j2 == j:
                    continue
                minor[(i2 - 1, cdx)] = entries[(i2, j2)]
                cdx += 1
        term = entries[(0, j)] * _det_upoly(minor, n - 1, sub)
        total = total + (term if j % 2 == 0 else -term)
    return total


def charpoly_by_resultant(x: FieldElement) -> UPoly:
    """Independent route: Res_V(P(V), X - x(V)) computed over k(X)."""
    tower = x.tower
    sub = tower.subfield
    aux = FieldTower(sub.char, sub.trans + ("_X",))
    lift = _lift_map(sub, aux)
    P = tower.minimal_polynomial().map_coeffs(lift, aux)
    slabs = [lift(c) for c in x.theta_coefficients()]
    Xel = aux.gen("_X")
    # X - x(V) as a polynomial in V: (X - c0) - c1 V - c2 V^2 - ...
    g = UPoly(aux, [Xel - slabs[0]] + [-c for c in slabs[1:]])
    res = P.resultant(g)
    # res is a polynomial in _X over sub; pull coefficients back
    xi = aux.nvars - 1
    coeffs_by_deg = {}
    den = {k[:-1]: c for k, c in res.den.items()}
    for k, c in res.num.items():
        coeffs_by_deg.setdefault(k[xi], {})[k[:-1]] = c
    out = []
    for dgr in range(max(coeffs_by_deg) + 1 if coeffs_by_deg else 0):
        out.append(FieldElement(sub, coeffs_by_deg.get(dgr, {}), den))
    return UPoly(sub, out).monic()


def _lift_map(sub: FieldTower, aux: FieldTower):
    def lift(c: FieldElement) -> FieldElement:
        pad = lambda poly: {k + (0,): v for k, v in poly.items()}
        return FieldElement(aux, pad(c.num), pad(c.den))

    return lift


def minimal_polynomial_of(x: FieldElement) -> UPoly:
    """Minimal polynomial over the subfield: the charpoly stripped to its
    squarefree generator part (for degree <= 4 towers the charpoly of a
    generator is already irreducible)."""
    cp = charpoly(x)
    d = cp.gcd(cp.derivative())
    if d.degree() == 0:
        return cp.monic()
    return (cp // d).monic()
