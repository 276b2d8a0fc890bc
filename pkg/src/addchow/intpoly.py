"""Sparse multivariate polynomials with integer (char 0) or mod-p coefficients.

A polynomial is a dict mapping exponent tuples to nonzero coefficients; the
zero polynomial is the empty dict.  The characteristic ``p`` (0 for Z) travels
as an explicit argument; coefficients are plain ints, reduced to 0..p-1 when
p > 0.  Monomials are ordered graded-lexicographically (total degree first,
then lex with the first variable largest).

This layer is deliberately free of field/tower concepts; it only provides the
ring operations the fraction layer needs: arithmetic, exact division, gcd
(primitive subresultant-style PRS), contents, derivatives, substitution and
square roots of perfect squares.
"""

from __future__ import annotations

from math import gcd as _igcd

Key = tuple
Poly = dict


def zero() -> Poly:
    return {}


def const(c: int, nvars: int, p: int) -> Poly:
    if p:
        c %= p
    if c == 0:
        return {}
    return {(0,) * nvars: c}


def one(nvars: int) -> Poly:
    return {(0,) * nvars: 1}


def variable(i: int, nvars: int, exp: int = 1) -> Poly:
    key = tuple(exp if j == i else 0 for j in range(nvars))
    return {key: 1}


def is_zero(a: Poly) -> bool:
    return not a


def is_const(a: Poly) -> bool:
    return len(a) == 0 or (len(a) == 1 and not any(next(iter(a))))


def nvars_of(a: Poly) -> int:
    for k in a:
        return len(k)
    return 0


def grlex_key(k: Key):
    return (sum(k), k)


def leading(a: Poly) -> tuple[Key, int]:
    """Leading (monomial, coefficient) in graded-lex order."""
    k = max(a, key=grlex_key)
    return k, a[k]


def total_degree(a: Poly) -> int:
    return max((sum(k) for k in a), default=-1)


def degree_in(a: Poly, i: int) -> int:
    return max((k[i] for k in a), default=-1)


def add(a: Poly, b: Poly, p: int) -> Poly:
    out = dict(a)
    for k, c in b.items():
        s = out.get(k, 0) + c
        if p:
            s %= p
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def neg(a: Poly, p: int) -> Poly:
    if p:
        return {k: (-c) % p for k, c in a.items()}
    return {k: -c for k, c in a.items()}


def sub(a: Poly, b: Poly, p: int) -> Poly:
    return add(a, neg(b, p), p)


def mul(a: Poly, b: Poly, p: int) -> Poly:
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    out: Poly = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            s = out.get(k, 0) + ca * cb
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    if p:
        out = {k: c % p for k, c in out.items() if c % p}
    return out


def mul_scalar(a: Poly, c: int, p: int) -> Poly:
    if p:
        c %= p
    if c == 0:
        return {}
    if c == 1:
        return dict(a)
    if p:
        return {k: (v * c) % p for k, v in a.items() if (v * c) % p}
    return {k: v * c for k, v in a.items()}


def mul_term(a: Poly, key: Key, c: int, p: int) -> Poly:
    out = {}
    for k, v in a.items():
        cv = v * c
        if p:
            cv %= p
        if cv:
            out[tuple(x + y for x, y in zip(k, key))] = cv
    return out


def power(a: Poly, e: int, p: int) -> Poly:
    if e == 0:
        return one(nvars_of(a))
    base = a
    result = None
    while e:
        if e & 1:
            result = base if result is None else mul(result, base, p)
        e >>= 1
        if e:
            base = mul(base, base, p)
    return result


def derivative(a: Poly, i: int, p: int) -> Poly:
    out = {}
    for k, c in a.items():
        e = k[i]
        if e == 0:
            continue
        cc = c * e
        if p:
            cc %= p
        if cc == 0:
            continue
        nk = k[:i] + (e - 1,) + k[i + 1:]
        out[nk] = out.get(nk, 0) + cc
    return {k: c for k, c in out.items() if c}


def _inv_mod(c: int, p: int) -> int:
    return pow(c, p - 2, p)


def exact_div(a: Poly, b: Poly, p: int):
    """Return a/b if b divides a exactly, else None."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return {}
    kb, cb = leading(b)
    cb_inv = _inv_mod(cb, p) if p else None
    rem = dict(a)
    quot: Poly = {}
    while rem:
        ka, ca = leading(rem)
        key = tuple(x - y for x, y in zip(ka, kb))
        if any(e < 0 for e in key):
            return None
        if p:
            q = (ca * cb_inv) % p
        else:
            if ca % cb:
                return None
            q = ca // cb
        quot[key] = q
        rem = sub(rem, mul_term(b, key, q, p), p)
    return quot


def int_content(a: Poly) -> int:
    g = 0
    for c in a.values():
        g = _igcd(g, c)
        if g == 1:
            return 1
    return g


def _to_univar(a: Poly, i: int):
    """Split into {deg_in_i: coefficient poly with slot i zeroed}."""
    out: dict[int, Poly] = {}
    for k, c in a.items():
        e = k[i]
        nk = k[:i] + (0,) + k[i + 1:]
        out.setdefault(e, {})[nk] = c
    return out


def _from_univar(parts: dict[int, Poly], i: int) -> Poly:
    out: Poly = {}
    for e, coeff in parts.items():
        for k, c in coeff.items():
            out[k[:i] + (e,) + k[i + 1:]] = c
    return out


def _main_variable(a: Poly, b: Poly):
    n = nvars_of(a) or nvars_of(b)
    for i in range(n):
        if degree_in(a, i) > 0 or degree_in(b, i) > 0:
            return i
    return None


def content_in(a: Poly, i: int, p: int) -> Poly:
    """gcd of the coefficients of a seen as univariate in variable i."""
    parts = _to_univar(a, i)
    g: Poly = {}
    for coeff in parts.values():
        g = gcd(g, coeff, p)
        if is_const(g) and not is_zero(g):
            lead = next(iter(g.values()))
            if lead == 1:
                break
    return g


def _normalize(a: Poly, p: int) -> Poly:
    """Unit-normalize: monic over GF(p), positive leading coefficient over Z."""
    if not a:
        return a
    _, lc = leading(a)
    if p:
        if lc != 1:
            return mul_scalar(a, _inv_mod(lc, p), p)
        return a
    if lc < 0:
        return neg(a, 0)
    return a


def _pseudo_rem(a: Poly, b: Poly, i: int, p: int) -> Poly:
    """Pseudo-remainder of a by b wrt variable i (both nonzero, deg_a >= deg_b)."""
    da, db = degree_in(a, i), degree_in(b, i)
    bu = _to_univar(b, i)
    lb = bu[db]
    rem = dict(a)
    while rem:
        dr = degree_in(rem, i)
        if dr < db:
            break
        ru = _to_univar(rem, i)
        lr = ru[dr]
        # lb * rem - lr * x^(dr-db) * b
        shift = tuple(dr - db if j == i else 0 for j in range(len(next(iter(rem)))))
        rem = sub(mul(rem, lb, p), mul(_from_univar({0: lr}, i), mul_term(b, shift, 1, p), p), p)
    return rem


def gcd(a: Poly, b: Poly, p: int) -> Poly:
    """Polynomial gcd, unit-normalized (monic mod p / positive lc over Z)."""
    if not a:
        return _normalize(dict(b), p)
    if not b:
        return _normalize(dict(a), p)
    i = _main_variable(a, b)
    if i is None:
        if p:
            return one(nvars_of(a))
        return const(_igcd(next(iter(a.values())), next(iter(b.values()))), nvars_of(a), 0)
    ca = content_in(a, i, p)
    cb = content_in(b, i, p)
    f = exact_div(a, ca, p)
    g = exact_div(b, cb, p)
    cont = gcd(ca, cb, p)
    if degree_in(f, i) < degree_in(g, i):
        f, g = g, f
    # primitive PRS: f, g stay primitive wrt variable i throughout
    while True:
        if degree_in(g, i) == 0:
            prim = one(nvars_of(g))
            break
        r = _pseudo_rem(f, g, i, p)
        if not r:
            prim = g
            break
        f, g = g, exact_div(r, content_in(r, i, p), p)
    return _normalize(mul(cont, prim, p), p)


def _primitive_z(a: Poly, p: int) -> Poly:
    if p or not a:
        return a
    c = int_content(a)
    if c in (0, 1):
        return a
    return {k: v // c for k, v in a.items()}


def substitute(a: Poly, values: list, ring_ops) -> object:
    """Evaluate a with variable i replaced by values[i], in a caller-supplied ring.

    ring_ops provides (zero, one_of_int, add, mul); used by the fraction layer
    to push polynomials through arbitrary substitutions in one pass.
    """
    r_zero, r_int, r_add, r_mul = ring_ops
    total = r_zero
    for k, c in a.items():
        term = r_int(c)
        for i, e in enumerate(k):
            for _ in range(e):
                term = r_mul(term, values[i])
        total = r_add(total, term)
    return total


def sqrt(a: Poly, p: int):
    """Exact square root of a perfect square, or None.

    char 2 is unsupported (callers guard); over Z the integer content must be
    a perfect square and the leading coefficient positive.
    """
    if p == 2:
        return None
    if not a:
        return {}
    if is_const(a):
        c = next(iter(a.values()))
        nv = nvars_of(a)
        if p:
            for r in range(p):
                if (r * r) % p == c:
                    return const(r, nv, p)
            return None
        if c < 0:
            return None
        r = _isqrt(c)
        return const(r, nv, 0) if r * r == c else None
    i = _main_variable(a, a)
    parts = _to_univar(a, i)
    d = max(parts)
    if d % 2:
        return None
    top = sqrt(parts[d], p)
    if top is None:
        return None
    h = d // 2
    coeffs: dict[int, Poly] = {h: top}
    two_top = mul_scalar(top, 2, p)
    # s_{h-1},...,s_0 from the x^(h+j) coefficient: 2*s_h*s_j + known cross terms
    for j in range(h - 1, -1, -1):
        cross: Poly = {}
        for u in range(j + 1, h + 1):
            v = h + j - u
            if v <= j or v >= u:
                continue
            cross = add(cross, mul_scalar(mul(coeffs.get(u, {}), coeffs.get(v, {}), p), 2, p), p)
        if (h + j) % 2 == 0:
            uu = (h + j) // 2
            if uu > j and uu in coeffs:
                cross = add(cross, mul(coeffs[uu], coeffs[uu], p), p)
        target = sub(parts.get(h + j, {}), cross, p)
        sj = exact_div(target, two_top, p)
        if sj is None:
            return None
        if sj:
            coeffs[j] = sj
    cand = _from_univar(coeffs, i)
    if sub(mul(cand, cand, p), a, p):
        return None
    return cand


def _isqrt(n: int) -> int:
    import math

    return math.isqrt(n)


def render(a: Poly, names: list[str]) -> str:
    """Canonical string: graded-lex descending monomials, ^ powers, * products."""
    if not a:
        return "0"
    pieces = []
    for k in sorted(a, key=grlex_key, reverse=True):
        c = a[k]
        mono = "*".join(
            f"{names[i]}^{e}" if e > 1 else names[i] for i, e in enumerate(k) if e
        )
        if not mono:
            term = str(c)
        elif c == 1:
            term = mono
        elif c == -1:
            term = f"-{mono}"
        else:
            term = f"{c}*{mono}"
        pieces.append(term)
    out = pieces[0]
    for t in pieces[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out
