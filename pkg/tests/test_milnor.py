import random
from fractions import Fraction

import pytest

from primform.algebra import Poly, mat_det, parse_polynomial, weighted_degree
from primform.milnor import (
    NonIsolatedSingularityError,
    WeightedPolynomial,
    central_charge,
    divide_by_jacobian,
    hessian_determinant,
    infer_weights,
    milnor_basis,
)

F = Fraction


def wp(text, variables, weights):
    return WeightedPolynomial(variables, weights, parse_polynomial(text, list(variables)))


class TestWeightedPolynomial:
    def test_rejects_inhomogeneous_terms(self):
        with pytest.raises(ValueError, match="weighted degree"):
            wp("x^3+x^2", ["x"], [F(1, 3)])

    def test_rejects_weights_out_of_range(self):
        with pytest.raises(ValueError, match="outside"):
            wp("x", ["x"], [F(1)])

    def test_infer_weights(self):
        poly = parse_polynomial("x^2*y+y^3*z+z^3", ["x", "y", "z"])
        assert infer_weights(poly) == (F(7, 18), F(2, 9), F(1, 3))

    def test_infer_weights_inconsistent(self):
        with pytest.raises(ValueError):
            infer_weights(parse_polynomial("x^3+x^2", ["x"]))


class TestCentralCharge:
    def test_e12(self):
        assert central_charge(wp("x^3+y^7", ["x", "y"], [F(1, 3), F(1, 7)])) == F(22, 21)

    def test_u12(self):
        f = wp("x^3+y^3+z^4", ["x", "y", "z"], [F(1, 3), F(1, 3), F(1, 4)])
        assert central_charge(f) == F(7, 6)

    def test_a1(self):
        assert central_charge(wp("x^2", ["x"], [F(1, 2)])) == 0


class TestMilnorBasis:
    def test_u12_matches_published_list(self, milnor_cache):
        data = milnor_cache("U12")
        assert data.mu == 12
        assert data.basis_strings() == [
            "1", "z", "x", "y", "z^2", "x*z", "y*z", "x*y",
            "x*z^2", "y*z^2", "x*y*z", "x*y*z^2",
        ]
        assert data.socle == (1, 1, 2)

    def test_a1(self, milnor_cache):
        data = milnor_cache("A1")
        assert data.mu == 1
        assert data.basis == ((0,),)

    def test_e12_mu(self, milnor_cache):
        # brute-force expectation: (3-1)*(7-1) = 12
        assert milnor_cache("E12").mu == 12

    def test_socle_degree_is_central_charge(self, catalog, milnor_cache):
        for name in catalog:
            data = milnor_cache(name)
            assert max(data.degrees) == central_charge(data.f)
            assert weighted_degree(data.socle, data.f.weights) == central_charge(data.f)

    def test_rejects_non_isolated(self):
        f = wp("x^2*y^2", ["x", "y"], [F(1, 4), F(1, 4)])
        with pytest.raises(NonIsolatedSingularityError) as err:
            milnor_basis(f)
        assert err.value.degree is not None

    def test_rejects_missing_variable(self):
        f = wp("x^2", ["x", "y"], [F(1, 2), F(1, 3)])
        with pytest.raises(NonIsolatedSingularityError):
            milnor_basis(f)

    def test_poincare_polynomial(self, catalog, milnor_cache):
        # The multiset of basis degrees must expand prod (1-t^(1-q))/(1-t^q).
        for name in catalog:
            data = milnor_cache(name)
            scale = data._divider.scale
            numer = [1]
            denom = [1]
            for q in data.f.weights:
                numer = _poly1_mul(numer, _one_minus_power(int((1 - q) * scale)))
                denom = _poly1_mul(denom, _one_minus_power(int(q * scale)))
            quotient = _poly1_divide_exact(numer, denom)
            expected = {}
            for power, c in enumerate(quotient):
                if c:
                    expected[power] = c
            got = {}
            for mono in data.basis:
                sdeg = data._divider.sdeg(mono)
                got[sdeg] = got.get(sdeg, 0) + 1
            assert got == expected, name

    def test_user_basis_roundtrip(self, catalog):
        # D4 = x^3 + x*y^2 admits x^2 instead of y^2 as the top basis element.
        entry = catalog["D4"]
        f = entry.weighted_polynomial()
        data = milnor_basis(f, basis=[(0, 0), (1, 0), (0, 1), (2, 0)])
        assert data.basis == ((0, 0), (1, 0), (0, 1), (2, 0))
        assert data.socle == (2, 0)
        coeffs, quotients = divide_by_jacobian(Poly.monomial((2, 0)), data)
        assert coeffs == [0, 0, 0, 1]
        assert all(not q for q in quotients)

    def test_user_basis_dependent_rejected(self, catalog):
        entry = catalog["D4"]
        f = entry.weighted_polynomial()
        # x*y is in the ideal (2xy appears in d_y f), so it cannot be a basis element.
        with pytest.raises(ValueError):
            milnor_basis(f, basis=[(0, 0), (1, 0), (1, 1), (0, 2)])

    def test_user_basis_wrong_count_rejected(self, catalog):
        entry = catalog["D4"]
        with pytest.raises(ValueError):
            milnor_basis(entry.weighted_polynomial(), basis=[(0, 0), (1, 0), (0, 1)])


def _one_minus_power(k):
    coeffs = [0] * (k + 1)
    coeffs[0] = 1
    coeffs[k] -= 1
    return coeffs


def _poly1_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly1_divide_exact(numer, denom):
    numer = list(numer)
    lead = max(i for i, c in enumerate(denom) if c)
    out = [0] * (len(numer) - lead)
    for i in range(len(numer) - 1, lead - 1, -1):
        c = numer[i]
        if not c:
            continue
        q, r = divmod(c, denom[lead])
        assert r == 0
        out[i - lead] = q
        for j in range(lead + 1):
            numer[i - lead + j] -= q * denom[j]
    assert not any(numer)
    return out


class TestDivision:
    def test_basis_element_is_unit_vector(self, milnor_cache):
        data = milnor_cache("U12")
        for idx, mono in enumerate(data.basis):
            coeffs, quotients = divide_by_jacobian(Poly.monomial(mono), data)
            expected = [F(0)] * data.mu
            expected[idx] = F(1)
            assert coeffs == expected
            assert all(not q for q in quotients)

    def test_x_squared_in_cubic(self, milnor_cache):
        # x^2 = (1/3) d_x(x^3): zero class, quotient 1/3.
        data = milnor_cache("A2")
        coeffs, quotients = divide_by_jacobian(Poly.monomial((2,)), data)
        assert coeffs == [0, 0]
        assert quotients[0] == Poly.const(1, F(1, 3))

    def test_e12_socle_partner_product(self, milnor_cache):
        # x^2 y^6 lies in (3x^2, 7y^6); hand solve gives a valid witness.
        data = milnor_cache("E12")
        g = Poly.monomial((2, 6))
        coeffs, quotients = divide_by_jacobian(g, data)
        assert all(not c for c in coeffs)
        rebuilt = Poly.zero(2)
        for i, q in enumerate(quotients):
            rebuilt = rebuilt + q * data.f.poly.diff(i)
        assert rebuilt == g

    def test_reconstruction_fuzz(self, catalog, milnor_cache):
        rng = random.Random(41)
        names = sorted(catalog)
        for _ in range(120):
            name = names[rng.randrange(len(names))]
            data = milnor_cache(name)
            divider = data._divider
            bound = int((central_charge(data.f) + 2) * divider.scale)
            sdeg = rng.randint(0, bound)
            monos = divider.monomials_at(sdeg)
            if not monos:
                continue
            g = Poly(data.f.nvars, {
                m: F(rng.randint(-5, 5), rng.randint(1, 4))
                for m in rng.sample(monos, min(len(monos), 3))
            })
            if not g:
                continue
            coeffs, quotients = divide_by_jacobian(g, data)
            rebuilt = Poly.zero(data.f.nvars)
            for c, mono in zip(coeffs, data.basis):
                rebuilt = rebuilt + Poly.monomial(mono, c)
            for i, q in enumerate(quotients):
                rebuilt = rebuilt + q * data.f.poly.diff(i)
            assert rebuilt == g
            # Homogeneity of the witnesses.
            for i, q in enumerate(quotients):
                for mono in q.terms:
                    assert divider.sdeg(mono) == sdeg - divider.gen_sdegs[i]

    def test_idempotence(self, milnor_cache):
        data = milnor_cache("Q10")
        combo = Poly.zero(3)
        for idx, mono in enumerate(data.basis):
            combo = combo + Poly.monomial(mono, F(idx + 1, 3))
        coeffs, quotients = divide_by_jacobian(combo, data)
        assert coeffs == [F(idx + 1, 3) for idx in range(data.mu)]
        assert all(not q for q in quotients)


class TestResiduePairing:
    def test_a1_normalization(self, milnor_cache):
        # hess(x^2) = 2, socle = 1, so eta_11 = mu/h = 1/2.
        data = milnor_cache("A1")
        assert data.hessian_socle_factor == 2
        assert data.eta == ((F(1, 2),),)

    def test_grading_zeros(self, catalog, milnor_cache):
        for name in ("E12", "S12", "U12", "D4"):
            data = milnor_cache(name)
            c_hat = central_charge(data.f)
            for a in range(data.mu):
                for b in range(data.mu):
                    if data.degrees[a] + data.degrees[b] != c_hat:
                        assert data.eta[a][b] == 0

    def test_nondegenerate(self, catalog, milnor_cache):
        for name in catalog:
            data = milnor_cache(name)
            assert mat_det([list(r) for r in data.eta]) != 0

    def test_u12_pairing_against_socle(self, milnor_cache):
        data = milnor_cache("U12")
        socle_idx = data.basis_index(data.socle)
        assert data.eta[0][socle_idx] == F(1, 36)
        for b in range(data.mu):
            if b != socle_idx:
                assert data.eta[0][b] == 0

    def test_u12_full_matrix(self, milnor_cache):
        # All complementary pairs of the monomial basis multiply to the socle.
        data = milnor_cache("U12")
        pairs = {(0, 11), (1, 10), (2, 9), (3, 8), (4, 7), (5, 6)}
        for a in range(12):
            for b in range(12):
                expected = F(1, 36) if (min(a, b), max(a, b)) in pairs else F(0)
                assert data.eta[a][b] == expected

    def test_hessian_degree(self, milnor_cache):
        data = milnor_cache("S12")
        hess = hessian_determinant(data.f)
        for mono in hess.terms:
            assert weighted_degree(mono, data.f.weights) == central_charge(data.f)
