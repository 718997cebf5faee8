"""Flat structure extraction: flat coordinates, prepotential, and the
associativity / grading / integrability checks.

The flat coordinates are the z^(-1) components of J; the prepotential is
integrated from the z^(-2) components contracted with the residue pairing,

    d F0 / d t_a  =  sum_b eta_ab J_(-2)^b (s(t)),

with the constant, linear, and quadratic parts normalized to zero.  The
gradient must be exactly curl-free before integration; a failure signals a
convention bug and is raised, never tolerated.  All series in t are
truncated by total degree at the same order as the s-expansion.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import SSeries, format_rational, mat_inv, mono_str
from .milnor import MilnorData
from .primitive import PrimitiveFormResult


class IntegrabilityError(ArithmeticError):
    """The candidate gradient of the prepotential is not curl-free."""


def flat_coordinates(result: PrimitiveFormResult) -> list[SSeries]:
    """t_a(s) = J_(-1)^a; the leading part is s_a itself."""
    return result.j_components(-1)


def taylor_compose(u: SSeries, shift: list[SSeries]) -> SSeries:
    """u evaluated at (t_1 + shift_1, ..., t_n + shift_n), truncated.

    Every shift component must have minimal degree >= 2, so the Taylor
    expansion sum_J (d^J u) shift^J / J! has only finitely many
    contributing multi-indices at a fixed truncation order.
    """
    nv, order = u.nvars, u.order
    for w in shift:
        if any(sum(m) < 2 for m in w.terms):
            raise ValueError("shift components must have minimal degree >= 2")
    total = SSeries.zero(nv, order)

    def walk(dseries: SSeries, prod: SSeries, min_var: int, last_mult: int, denom: int):
        nonlocal total
        term = dseries * prod
        if denom != 1:
            term = term.scale(Fraction(1, denom))
        total = total + term
        for beta in range(min_var, nv):
            if not shift[beta]:
                continue
            deeper = dseries.diff(beta).truncate(order)
            if not deeper:
                continue
            new_prod = prod * shift[beta]
            if not new_prod:
                continue
            mult = last_mult + 1 if beta == min_var and last_mult else 1
            walk(deeper, new_prod, beta, mult, denom * mult)

    walk(u, SSeries.const(nv, order, 1), 0, 0, 1)
    return total


def invert_coordinates(t_of_s: list[SSeries], order: int) -> list[SSeries]:
    """Inverse series s(t) of a coordinate change with identity linear part.

    Fixed-point iteration on s = t - u(s) where u is the nonlinear part;
    each pass fixes one more total degree.
    """
    mu = len(t_of_s)
    u = []
    for alpha, t in enumerate(t_of_s):
        linear = t.degree_part(1)
        if linear != SSeries.variable(mu, alpha, t.order):
            raise ValueError("coordinate change does not have identity linear part")
        if t.degree_part(0):
            raise ValueError("coordinate change must vanish at the origin")
        u.append((t - linear).truncate(order))
    shift = [SSeries.zero(mu, order) for _ in range(mu)]  # s = t + shift
    for _ in range(max(order - 1, 0)):
        shift = [-taylor_compose(u[a], shift) for a in range(mu)]
    return [SSeries.variable(mu, a, order) + shift[a] for a in range(mu)]


class FrobeniusData:
    """Flat coordinates, their inverse, the flat metric, and the prepotential."""

    __slots__ = ("t_of_s", "s_of_t", "eta_flat", "prepotential", "order")

    def __init__(self, t_of_s, s_of_t, eta_flat, prepotential, order):
        self.t_of_s = t_of_s
        self.s_of_t = s_of_t
        self.eta_flat = eta_flat
        self.prepotential = prepotential
        self.order = order


def prepotential(result: PrimitiveFormResult, milnor: MilnorData) -> FrobeniusData:
    """Integrate the flat-frame gradient eta * J_(-2) into the prepotential."""
    if result.order < 3:
        raise ValueError("prepotential extraction needs s-order >= 3")
    mu, order = milnor.mu, result.order
    t_of_s = flat_coordinates(result)
    s_of_t = invert_coordinates(t_of_s, order)
    shift = [s_of_t[a] - SSeries.variable(mu, a, order) for a in range(mu)]

    j_minus2 = result.j_components(-2)
    j_minus2_t = [taylor_compose(series, shift) for series in j_minus2]
    eta = milnor.eta
    gradient = []
    for a in range(mu):
        g = SSeries.zero(mu, order)
        for b in range(mu):
            if eta[a][b]:
                g = g + j_minus2_t[b].scale(eta[a][b])
        gradient.append(g)

    for a in range(mu):
        for b in range(a + 1, mu):
            if gradient[a].diff(b) != gradient[b].diff(a):
                raise IntegrabilityError(
                    f"mixed second derivatives differ for coordinates {a + 1}, {b + 1}"
                )

    euler_sum = SSeries.zero(mu, order)
    for a in range(mu):
        euler_sum = euler_sum + gradient[a].shift_variable(a)
    f0 = SSeries.zero(mu, order)
    for d in range(3, order + 1):
        f0 = f0 + euler_sum.degree_part(d).scale(Fraction(1, d))

    for a in range(mu):
        if (f0.diff(a) - gradient[a].truncate(order - 1)).truncate(order - 1):
            raise IntegrabilityError("integrated prepotential does not match its gradient")

    return FrobeniusData(t_of_s, s_of_t, milnor.eta, f0, order)


def four_point_function(f0: SSeries) -> SSeries:
    """The homogeneous degree-4 part of the prepotential."""
    return f0.degree_part(4)


class CheckReport:
    """Outcome of an exact verification pass; violations are data, not errors."""

    __slots__ = ("name", "violations", "checked")

    def __init__(self, name: str, violations: list, checked: int):
        self.name = name
        self.violations = violations
        self.checked = checked

    @property
    def passed(self) -> bool:
        return not self.violations

    def __repr__(self):
        state = "pass" if self.passed else f"{len(self.violations)} violations"
        return f"CheckReport({self.name}: {state}, {self.checked} checks)"


def wdvv_check(f0: SSeries, eta, order: int) -> CheckReport:
    """Associativity of the third-derivative tensor, exact modulo truncation.

    For every index quadruple (a, b, c, d) the contraction
    sum_{e,f} F_abe eta^{ef} F_fcd must be symmetric under swapping b and c.
    Third derivatives of a degree-(<= order) series are exact only through
    total degree order - 3, so the comparison is restricted to that range.
    """
    mu = len(eta)
    check_order = order - 3
    if check_order < 0:
        raise ValueError("WDVV needs the prepotential through order >= 3")
    eta_inv = mat_inv([list(row) for row in eta])

    third: dict = {}
    for a in range(mu):
        da = f0.diff(a)
        for b in range(a, mu):
            dab = da.diff(b)
            for e in range(b, mu):
                series = dab.diff(e).truncate(check_order)
                for key in {(a, b, e), (a, e, b), (b, a, e), (b, e, a), (e, a, b), (e, b, a)}:
                    third[key] = series

    def contracted(a, b):
        row = []
        for fi in range(mu):
            acc = SSeries.zero(mu, check_order)
            for e in range(mu):
                coeff = eta_inv[e][fi]
                if coeff:
                    acc = acc + third[(a, b, e)].scale(coeff)
            row.append(acc)
        return row

    t_cache = {}
    violations = []
    checked = 0
    for a in range(mu):
        for b in range(mu):
            for c in range(b + 1, mu):
                for d in range(mu):
                    left = t_cache.get((a, b))
                    if left is None:
                        left = t_cache[(a, b)] = contracted(a, b)
                    right = t_cache.get((a, c))
                    if right is None:
                        right = t_cache[(a, c)] = contracted(a, c)
                    diff = SSeries.zero(mu, check_order)
                    for fi in range(mu):
                        diff = diff + left[fi] * third[(fi, c, d)] - right[fi] * third[(fi, b, d)]
                    checked += 1
                    for mono, coeff in diff.truncate(check_order).sorted_terms():
                        violations.append(
                            {
                                "indices": (a + 1, b + 1, c + 1, d + 1),
                                "monomial": mono,
                                "difference": format_rational(coeff),
                            }
                        )
    return CheckReport("wdvv", violations, checked)


def euler_check(f0: SSeries, flat_degrees, c_hat: Fraction) -> CheckReport:
    """Every prepotential monomial must have flat weighted degree 3 - c_hat."""
    target = 3 - c_hat
    violations = []
    checked = 0
    for mono, coeff in f0.sorted_terms():
        checked += 1
        degree = sum((Fraction(k) * d for k, d in zip(mono, flat_degrees)), Fraction(0))
        if degree != target:
            violations.append(
                {
                    "monomial": mono,
                    "coefficient": format_rational(coeff),
                    "degree": format_rational(degree),
                    "expected": format_rational(target),
                }
            )
    return CheckReport("euler", violations, checked)


def symmetry_check(f0: SSeries) -> CheckReport:
    """Record-level integrability: normalization and tensor symmetry.

    On a freshly integrated prepotential the substantive curl-free test has
    already run (prepotential() raises otherwise); on a stored record this
    validates well-formedness: no terms below total degree 3 and a totally
    symmetric third-derivative tensor.
    """
    violations = []
    checked = 0
    mu = f0.nvars
    for mono, coeff in f0.sorted_terms():
        checked += 1
        if sum(mono) < 3:
            violations.append(
                {"monomial": mono, "coefficient": format_rational(coeff), "reason": "degree < 3"}
            )
    for a in range(mu):
        for b in range(a, mu):
            checked += 1
            if f0.diff(a).diff(b) != f0.diff(b).diff(a):
                violations.append({"indices": (a + 1, b + 1), "reason": "asymmetric"})
    return CheckReport("integrability", violations, checked)


def prepotential_record(
    milnor: MilnorData, frob: FrobeniusData, singularity: str, checks: dict
) -> dict:
    """Assemble the canonical output record for a computed prepotential."""
    f = milnor.f
    return {
        "kind": "prepotential",
        "singularity": singularity,
        "variables": list(f.variables),
        "weights": [format_rational(q) for q in f.weights],
        "order": frob.order,
        "central_charge": format_rational(milnor.central_charge),
        "basis": [mono_str(m, f.variables) for m in milnor.basis],
        "flat_degrees": [format_rational(1 - d) for d in milnor.degrees],
        "eta": [[format_rational(v) for v in row] for row in milnor.eta],
        "terms": frob.prepotential.to_records(),
        "checks": checks,
    }


def verify_record(record: dict) -> dict[str, CheckReport]:
    """Re-run the exact checks on a stored prepotential record."""
    mu = len(record["basis"])
    order = int(record["order"])
    f0 = SSeries.from_records(record["terms"], mu, order)
    eta = tuple(
        tuple(Fraction(v) for v in row) for row in record["eta"]
    )
    flat_degrees = [Fraction(d) for d in record["flat_degrees"]]
    c_hat = Fraction(record["central_charge"])
    return {
        "wdvv": wdvv_check(f0, eta, order),
        "euler": euler_check(f0, flat_degrees, c_hat),
        "integrability": symmetry_check(f0),
    }
