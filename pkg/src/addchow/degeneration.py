"""Constant-weight degeneration calculus for logarithmic top forms.

A scenario is a top-degree form g(u) du_1^..^du_d together with integer
weights r_1..r_d.  Substituting u_i = t^{-r_i} v_i pulls the form back to the
(t, v)-space, where it splits uniquely as

    omega = t^s nu + s t^{s-1} dt ^ gamma

with s the t-adic valuation of the dt-free part.  When s is invertible in
the ground field and the limits exist, nu|_{t=0} = d(gamma|_{t=0}) holds in
the v-variables; the module computes the split exactly, takes the limits,
and verifies the limit identity and the reference scenarios' closed forms.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import (
    AddchowError,
    CharacteristicObstruction,
    DegenerateData,
    NegativeLimitValuation,
)
from .fields import FieldElement, FieldTower
from .forms import (
    DifferentialForm,
    d,
    d_form,
    dlog,
    gamma_form,
    nu_form,
    restrict_at_zero,
    _t_valuation,
)


class DegenerationScenario:
    """Weighted substitution data for one log form."""

    __slots__ = ("name", "variables", "weights", "coefficient", "t_name", "expected_s")

    def __init__(self, name, variables, weights, coefficient: FieldElement,
                 t_name: str = "t", expected_s=None):
        variables = tuple(variables)
        weights = tuple(int(w) for w in weights)
        if len(variables) != len(weights):
            raise AddchowError("one weight per variable")
        tower = coefficient.tower
        for v in variables:
            if v not in tower.trans:
                raise AddchowError(f"variable {v} missing from the coefficient field")
        if t_name in tower.trans:
            raise AddchowError("degeneration parameter name collides with a variable")
        self.name = name
        self.variables = variables
        self.weights = weights
        self.coefficient = coefficient
        self.t_name = t_name
        self.expected_s = expected_s

    @property
    def parameters(self):
        return tuple(n for n in self.coefficient.tower.trans if n not in self.variables)

    def __repr__(self):
        return f"DegenerationScenario({self.name!r}, weights={self.weights})"


@dataclass
class SplitResult:
    """Exact split data: omega = t^s nu + s t^{s-1} dt ^ gamma."""

    scenario: DegenerationScenario
    tower: FieldTower      # ground(params)(t, v_1..v_d)
    t_index: int
    v_indices: tuple
    s: int
    omega: DifferentialForm
    nu: DifferentialForm
    gamma: DifferentialForm

    def reconstruction_holds(self) -> bool:
        t = self.tower.gen(self.scenario.t_name)
        lhs = self.nu.scale(t**self.s)
        dt = DifferentialForm(self.tower, 1, {(self.t_index,): self.tower.one()})
        rhs = dt.wedge(self.gamma).scale(self.tower.integer(self.s) * t ** (self.s - 1))
        return (lhs + rhs - self.omega).is_zero()

    def nu_limit(self) -> DifferentialForm:
        return _limit(self.nu, self.scenario.t_name)

    def gamma_limit(self) -> DifferentialForm:
        return _limit(self.gamma, self.scenario.t_name)


def _limit(form: DifferentialForm, t_name: str) -> DifferentialForm:
    return DifferentialForm(
        form.tower,
        form.degree,
        {k: restrict_at_zero(c, t_name) for k, c in form.coeffs.items()},
    )


def split(sc: DegenerationScenario) -> SplitResult:
    """Pull the form back under u_i = t^{-r_i} v_i and split off dt exactly."""
    src = sc.coefficient.tower
    params = sc.parameters
    target = FieldTower(src.char, params + (sc.t_name,) + sc.variables)
    t_index = len(params)
    t = target.gen(sc.t_name)
    # substitution values in source-generator order
    values = []
    for name in src.trans:
        if name in sc.variables:
            r = sc.weights[sc.variables.index(name)]
            values.append(target.gen(name) * t ** (-r))
        else:
            values.append(target.gen(name))
    g_t = sc.coefficient.substitute(target, values)
    # du_i = t^{-r_i} dv_i - r_i t^{-r_i-1} v_i dt
    omega = DifferentialForm.function(g_t)
    for name, r in zip(sc.variables, sc.weights):
        vi = target.trans.index(name)
        du = DifferentialForm(
            target,
            1,
            {
                (vi,): t ** (-r),
                (t_index,): target.integer(-r) * target.gen(name) * t ** (-r - 1),
            },
        )
        omega = omega.wedge(du)
    # split off dt
    a_coeffs = {}
    b_coeffs = {}
    for key, c in omega.coeffs.items():
        if t_index in key:
            pos = key.index(t_index)
            rest = tuple(i for i in key if i != t_index)
            b_coeffs[rest] = c if pos % 2 == 0 else -c
        else:
            a_coeffs[key] = c
    d_vars = len(sc.variables)
    A = DifferentialForm(target, d_vars, a_coeffs)
    B = DifferentialForm(target, d_vars - 1, b_coeffs)
    if A.is_zero():
        raise DegenerateData("the dt-free part of the pullback vanishes")
    s = min(_element_t_val(c, t_index) for c in A.coeffs.values())
    if s < 1:
        raise DegenerateData(f"computed exponent s = {s} is not positive")
    if target.char and s % target.char == 0:
        raise CharacteristicObstruction(
            f"exponent s = {s} is divisible by the characteristic {target.char}"
        )
    nu = A.scale(t ** (-s))
    s_inv = target.integer(s).inverse()
    gamma = B.scale(t ** (1 - s) * s_inv)
    for label, form in (("nu", nu), ("gamma", gamma)):
        for c in form.coeffs.values():
            if _element_t_val(c, t_index) < 0:
                raise NegativeLimitValuation(
                    f"{label} has a pole at t = 0: weights do not degenerate cleanly"
                )
    return SplitResult(
        scenario=sc,
        tower=target,
        t_index=t_index,
        v_indices=tuple(target.trans.index(v) for v in sc.variables),
        s=s,
        omega=omega,
        nu=nu,
        gamma=gamma,
    )


def _element_t_val(c: FieldElement, t_index: int) -> int:
    if c.is_zero():
        return 0
    return _t_valuation(c.num, t_index) - _t_valuation(c.den, t_index)


def limit_identity(res: SplitResult) -> bool:
    """nu|_{t=0} == d(gamma|_{t=0}), derivative taken in the v-variables."""
    nu0 = res.nu_limit()
    gamma0 = res.gamma_limit()
    return (d_form(gamma0, wrt=res.v_indices) - nu0).is_zero()


# ---------------------------------------------------------------------------
# reference scenarios


def simplex_scenario(n: int) -> DegenerationScenario:
    """du_1..du_{n+1} / (u_1...u_{n+1}(1 - u_1 - .. - u_{n+1})), weights all 1."""
    names = tuple(f"v{i}" for i in range(1, n + 2))
    tower = FieldTower.rationals(*names)
    us = tower.gens()
    u0 = tower.one()
    for u in us:
        u0 = u0 - u
    denom = u0
    for u in us:
        denom = denom * u
    return DegenerationScenario(
        name=f"simplex-{n}",
        variables=names,
        weights=(1,) * (n + 1),
        coefficient=denom.inverse(),
        expected_s=1,
    )


def elliptic_scenario(char: int = 0) -> DegenerationScenario:
    """du_1^du_2 / (u_1^2 - u_2^3 - a u_2 - b), weights (3, 2)."""
    tower = FieldTower(char, ("a", "b", "v1", "v2"))
    a, b, u1, u2 = tower.gens()
    f = u1 * u1 - u2 ** 3 - a * u2 - b
    return DegenerationScenario(
        name="elliptic-cusp",
        variables=("v1", "v2"),
        weights=(3, 2),
        coefficient=f.inverse(),
        expected_s=1,
    )


def quadric_scenario(n: int) -> DegenerationScenario:
    """du_1..du_{2n-1} / (u_1^2+..+u_{2n-1}^2 - 1)^n, weights all -1."""
    d_vars = 2 * n - 1
    names = tuple(f"v{i}" for i in range(1, d_vars + 1))
    tower = FieldTower.rationals(*names)
    q = -tower.one()
    for u in tower.gens():
        q = q + u * u
    return DegenerationScenario(
        name=f"quadric-{n}",
        variables=names,
        weights=(-1,) * d_vars,
        coefficient=(q**n).inverse(),
        expected_s=2 * n - 1,
    )


# ---------------------------------------------------------------------------
# scenario verification reports


def simplex_expected_limits(res: SplitResult):
    """Closed-form limits for the simplex scenario in the split's tower."""
    n1 = len(res.scenario.variables)
    g = gamma_form(n1, tower=res.tower, names=res.scenario.variables)
    nu = nu_form(n1, tower=res.tower, names=res.scenario.variables)
    return g, nu


def homogeneous_exponent(sc: DegenerationScenario) -> int | None:
    """Independent bookkeeping route to the exponent for reciprocal forms.

    For g = 1/f with f polynomial in the weighted variables, the weighted
    substitution turns the monomial u^e of f into t^(sum r_i e_i) v^e; with
    N the largest such t-degree (the t-degree of the homogenized, twisted
    form), the split exponent is N - sum(r_i).  Returns None when the
    coefficient is not a pure reciprocal.
    """
    src = sc.coefficient.tower
    if len(sc.coefficient.num) != 1:
        return None
    (k, _), = sc.coefficient.num.items()
    if any(k):
        return None
    idx = [src.trans.index(v) for v in sc.variables]
    N = max(
        sum(sc.weights[j] * key[idx[j]] for j in range(len(idx)))
        for key in sc.coefficient.den
    )
    return N - sum(sc.weights)


# ---------------------------------------------------------------------------
# serialization


def scenario_to_dict(sc: DegenerationScenario) -> dict:
    return {
        "name": sc.name,
        "characteristic": sc.coefficient.tower.char,
        "parameters": list(sc.parameters),
        "variables": list(sc.variables),
        "weights": list(sc.weights),
        "coefficient": sc.coefficient.render(),
        "t_name": sc.t_name,
        **({"expected_s": sc.expected_s} if sc.expected_s is not None else {}),
    }


def scenario_from_dict(data: dict) -> DegenerationScenario:
    from .parsing import parse_element

    char = int(data.get("characteristic", 0))
    params = tuple(data.get("parameters", ()))
    variables = tuple(data["variables"])
    tower = FieldTower(char, params + variables)
    coeff = parse_element(data["coefficient"], tower)
    return DegenerationScenario(
        name=data.get("name", "scenario"),
        variables=variables,
        weights=data["weights"],
        coefficient=coeff,
        t_name=data.get("t_name", "t"),
        expected_s=data.get("expected_s"),
    )


def load_scenario(path) -> DegenerationScenario:
    with open(path, "r", encoding="utf-8") as fh:
        return scenario_from_dict(json.load(fh))
