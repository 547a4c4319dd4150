import json
import random
from fractions import Fraction
from itertools import combinations, permutations

import pytest

from superinv import (
    BalancedExpression,
    GrassmannScalar,
    NotInvariant,
    NotSymmetric,
    PowerSums,
    SuperPolynomial,
    TTauExpression,
    ValidationError,
    assemble_invariant,
    check_diag_invariance,
    elementary_from_roots,
    invariant_decomposition,
    invariant_normal_form,
    is_balanced,
    linalg,
    power_sum_even,
    power_sum_odd,
    rewrite_symmetric,
    signed_elementary_poly,
    vandermonde_adjoint,
    verify_recurrence,
)

G = GrassmannScalar


def ev(n, i):
    return SuperPolynomial.even_var(n, i)


def ov(n, i):
    return SuperPolynomial.odd_var(n, i)


# ----------------------------------------------------------------------
# polynomial ring basics


def test_odd_variables_anticommute():
    b1, b2 = ov(2, 1), ov(2, 2)
    assert b1 * b2 == -(b2 * b1)
    assert (b1 * b1).is_zero()


def test_permutation_action_signs():
    f = ov(2, 1) * ov(2, 2)
    swapped = f.permute([1, 0])
    assert swapped == -f


def test_is_symmetric_witness():
    f = ev(3, 1)
    ok, witness = f.is_symmetric()
    assert not ok and witness == (1, 2)
    assert power_sum_even(3, 2).is_symmetric()[0]
    assert power_sum_odd(3, 2).is_symmetric()[0]


def test_evaluation_matches_structure():
    q = 2
    x1, x2 = G.generator(q, 1), G.generator(q, 2)
    f = power_sum_odd(2, 2)
    val = f.evaluate([G.rational(q, 1), G.rational(q, 2)], [x1, x2])
    assert val == x1 + 2 * x2


def test_nonhomogeneous_power_sum_identity():
    for n in (1, 2, 3):
        for k in range(1, 2 * n + 1):
            acc = SuperPolynomial.zero(n)
            for i in range(1, n + 1):
                acc = acc + (ev(n, i) + ov(n, i)) ** k
            assert acc == power_sum_even(n, k) + k * power_sum_odd(n, k)


# ----------------------------------------------------------------------
# invariance conditions and the structure decomposition


def test_check_diag_invariance_examples():
    assert check_diag_invariance(ov(2, 1) + ov(2, 2))[0]
    ok, witness = check_diag_invariance(ev(2, 1))
    assert not ok
    assert witness[0] == 1 and witness[1] == ov(2, 1)
    assert check_diag_invariance(ov(2, 1) * ov(2, 2) * (ev(2, 1) - ev(2, 2)))[0]


def test_invariant_decomposition_examples():
    tau2 = power_sum_odd(2, 2)
    constant, comps = invariant_decomposition(tau2)
    assert constant == 0
    assert comps[0] == SuperPolynomial.even_var(1, 1)
    assert comps[1].is_zero()

    f = power_sum_odd(2, 1) * power_sum_odd(2, 2)
    constant, comps = invariant_decomposition(f)
    x, y = ev(2, 1), ev(2, 2)
    assert comps[1] == y - x
    assert comps[0].is_zero() and constant == 0

    constant, comps = invariant_decomposition(SuperPolynomial.constant(2, Fraction(5, 3)))
    assert constant == Fraction(5, 3)
    assert all(c.is_zero() for c in comps)


def test_invariant_decomposition_skew_and_reassembly():
    rng = random.Random(6)
    for _ in range(10):
        n = rng.randint(1, 3)
        expr = TTauExpression.zero(n, 2 * n)
        monos = []
        for size in range(1, n + 1):
            for tup in combinations(range(1, 2 * n + 1), size):
                monos.append(tup)
        for _ in range(rng.randint(1, 3)):
            tup = monos[rng.randrange(len(monos))]
            mask = 0
            for i in tup:
                mask |= 1 << (i - 1)
            expr = expr + TTauExpression(n, 2 * n, {((0,) * (2 * n), mask): rng.randint(-3, 3) or 1})
        f = expr.expand()
        constant, comps = invariant_decomposition(f)
        assert assemble_invariant(n, constant, comps) == f
        for s, comp in enumerate(comps, start=1):
            if s >= 2 and not comp.is_zero():
                for i in range(s - 1):
                    perm = list(range(s))
                    perm[i], perm[i + 1] = perm[i + 1], perm[i]
                    assert comp.permute(perm) == -comp


def test_invariant_decomposition_rejects():
    with pytest.raises(NotInvariant):
        invariant_decomposition(ev(2, 1))
    with pytest.raises(NotInvariant):
        invariant_decomposition(power_sum_even(2, 1))


# ----------------------------------------------------------------------
# the power matrix and its polynomial adjoint


def test_vandermonde_adjoint_small():
    m, mp = vandermonde_adjoint(1)
    assert m == [[SuperPolynomial.one(1)]]
    assert mp == [[SuperPolynomial.one(1)]]
    m, mp = vandermonde_adjoint(2)
    a1, a2 = ev(2, 1), ev(2, 2)
    prod = [[sum((mp[i][k] * m[k][j] for k in range(2)), SuperPolynomial.zero(2))
             for j in range(2)] for i in range(2)]
    assert prod[0][0] == a1 - a2
    assert prod[1][1] == a2 - a1
    assert prod[0][1].is_zero() and prod[1][0].is_zero()


def test_vandermonde_adjoint_symbolic_up_to_four():
    for n in range(1, 5):
        m, mp = vandermonde_adjoint(n)
        for k in range(n):
            for l in range(n):
                entry = SuperPolynomial.zero(n)
                for i in range(n):
                    entry = entry + mp[k][i] * m[i][l]
                if k != l:
                    assert entry.is_zero()
                else:
                    want = SuperPolynomial.one(n)
                    for i in range(1, n + 1):
                        if i != k + 1:
                            want = want * (ev(n, k + 1) - ev(n, i))
                    assert entry == want


def test_vandermonde_adjoint_numeric():
    rng = random.Random(20)
    for _ in range(30):
        n = rng.randint(2, 3)
        vals = []
        while len(vals) < n:
            v = Fraction(rng.randint(-8, 8), rng.randint(1, 3))
            if v not in vals:
                vals.append(v)
        m, mp = vandermonde_adjoint(n)
        scalars = [G.rational(0, v) for v in vals]
        zeros = [G.zero(0)] * n
        for k in range(n):
            for l in range(n):
                entry = SuperPolynomial.zero(n)
                for i in range(n):
                    entry = entry + mp[k][i] * m[i][l]
                want = Fraction(1)
                for i in range(n):
                    if i != k:
                        want *= vals[l] - vals[i]
                assert entry.evaluate(scalars, zeros) == want


# ----------------------------------------------------------------------
# rewriting in the power-sum symbols


def test_rewrite_worked_examples():
    n = 2
    b1, b2 = ov(n, 1), ov(n, 2)
    a1, a2 = ev(n, 1), ev(n, 2)
    assert rewrite_symmetric(b1 + b2) == TTauExpression.odd_symbol(n, n, 1)
    got = rewrite_symmetric(b1 * a2 + b2 * a1)
    u1 = TTauExpression.even_symbol(n, n, 1)
    x1 = TTauExpression.odd_symbol(n, n, 1)
    x2 = TTauExpression.odd_symbol(n, n, 2)
    assert got == u1 * x1 - x2
    got = rewrite_symmetric(a1 * a2)
    u2 = TTauExpression.even_symbol(n, n, 2)
    assert got == (u1 * u1 - u2) * Fraction(1, 2)


def test_rewrite_round_trip_random():
    from superinv.verify import _random_symmetric_polynomial

    rng = random.Random(21)
    for _ in range(25):
        n = rng.randint(1, 3)
        f = _random_symmetric_polynomial(n, rng)
        g = rewrite_symmetric(f)
        assert g.expand(even_basis="t") == f


def test_rewrite_uniqueness_round_trip():
    from superinv.sympoly import _ttau_monomials

    rng = random.Random(22)
    for _ in range(20):
        n = rng.randint(1, 3)
        monos = []
        for w in range(1, 6):
            monos.extend(_ttau_monomials(n, w, max_odd=n))
        expr = TTauExpression.zero(n, n)
        for _ in range(rng.randint(1, 4)):
            exps, mask = monos[rng.randrange(len(monos))]
            expr = expr + TTauExpression.monomial(n, n, exps, mask, rng.randint(-3, 3) or 1)
        assert rewrite_symmetric(expr.expand(even_basis="t")) == expr


def test_rewrite_rejects_asymmetric():
    with pytest.raises(NotSymmetric) as err:
        rewrite_symmetric(ev(2, 1))
    assert err.value.transposition == (1, 2)


# ----------------------------------------------------------------------
# balancedness


def test_is_balanced_examples():
    assert is_balanced(TTauExpression.odd_symbol(2, 3, 1))[0]
    ok, witness = is_balanced(TTauExpression.even_symbol(2, 3, 1))
    assert not ok and witness[0] == 1
    h = TTauExpression.even_symbol(1, 1, 1) * TTauExpression.odd_symbol(1, 1, 1)
    assert is_balanced(h)[0]


def test_balanced_expression_qet_form():
    u1 = TTauExpression.even_symbol(2, 2, 1)
    u2 = TTauExpression.even_symbol(2, 2, 2)
    x1 = TTauExpression.odd_symbol(2, 2, 1)
    x2 = TTauExpression.odd_symbol(2, 2, 2)
    f = BalancedExpression(x2 - u1 * x1, u2)
    assert f.is_balanced()[0]
    q = 2
    g1, g2 = G.generator(q, 1), G.generator(q, 2)
    s = elementary_from_roots([G.rational(q, 1), G.rational(q, 2)])
    taus = [g1 + g2, g1 + 2 * g2]
    assert f.evaluate(s, taus) == g1 + g2 * Fraction(1, 2)
    bad = BalancedExpression(u1 * x1)
    assert not bad.is_balanced()[0]


def test_balanced_expression_validation():
    x1 = TTauExpression.odd_symbol(2, 2, 1)
    with pytest.raises(ValidationError):
        BalancedExpression(x1, x1)
    with pytest.raises(ValidationError):
        BalancedExpression(x1, TTauExpression.zero(2, 2))


# ----------------------------------------------------------------------
# normal form and relations


def test_normal_form_examples():
    n = 2
    f = power_sum_odd(n, 1) * power_sum_odd(n, 2)
    nf = invariant_normal_form(f)
    assert {mask: c for (_e, mask), c in nf.terms.items()} == {0b11: 1}
    f3 = power_sum_odd(n, 1) * power_sum_odd(n, 2) * power_sum_odd(n, 3)
    assert f3.is_zero()
    assert invariant_normal_form(f3).is_zero()


def test_products_of_length_n_plus_one_vanish():
    for n in (1, 2, 3):
        for tup in combinations(range(1, 2 * n + 2), n + 1):
            poly = SuperPolynomial.one(n)
            for i in tup:
                poly = poly * power_sum_odd(n, i)
            assert poly.is_zero()


def test_monomial_linear_independence():
    from superinv.verify import tau_monomial_matrix

    counts = []
    for n in (1, 2, 3):
        monos, matrix = tau_monomial_matrix(n, 2 * n)
        assert linalg.rank(matrix) == len(monos)
        counts.append(len(monos))
    assert counts[0] < counts[1] < counts[2]


def test_normal_form_rejects_non_invariant():
    with pytest.raises(NotInvariant):
        invariant_normal_form(power_sum_even(2, 1))


# ----------------------------------------------------------------------
# signed elementary values and the moment recurrence


def test_elementary_from_roots_examples():
    q = 2
    s = elementary_from_roots([G.rational(q, 1), G.rational(q, 2)])
    assert s == [G.rational(q, 3), G.rational(q, -2)]
    zeros = elementary_from_roots([G.zero(q), G.zero(q)])
    assert all(v.is_zero() for v in zeros)
    with pytest.raises(ValidationError):
        elementary_from_roots([G.generator(q, 1)])


def test_recurrence_worked_example():
    q = 2
    x1, x2 = G.generator(q, 1), G.generator(q, 2)
    avals = [G.rational(q, 1), G.rational(q, 2)]
    alphas = [x1, x2]
    taus = []
    for k in range(1, 5):
        acc = G.zero(q)
        for a, al in zip(avals, alphas):
            acc = acc + al * a ** (k - 1)
        taus.append(acc)
    s = elementary_from_roots(avals)
    assert verify_recurrence(taus, s)
    assert taus[2] == taus[0] * s[1] + taus[1] * s[0]
    zero_taus = [G.zero(q)] * 4
    assert verify_recurrence(zero_taus, [G.zero(q), G.zero(q)])
    with pytest.raises(ValidationError):
        verify_recurrence(taus[:3], s)


def test_signed_elementary_polynomials_match_recurrence():
    # the polynomial recurrence tau_{n+k} = sum_j tau_{n+k-j} s_j holds
    for n in (1, 2, 3):
        for k in range(1, n + 1):
            lhs = power_sum_odd(n, n + k)
            rhs = SuperPolynomial.zero(n)
            for j in range(1, n + 1):
                rhs = rhs + power_sum_odd(n, n + k - j) * signed_elementary_poly(n, j)
            assert lhs == rhs


def test_power_sums_bundle():
    ps = PowerSums.build(2, 4)
    assert ps.t[0] == power_sum_even(2, 1)
    assert ps.tau[3] == power_sum_odd(2, 4)
    assert len(ps.t) == len(ps.tau) == 4


def test_no_root_realization_counterexample():
    """Target values s = (2, 1 + e1e2) admit no genuine roots over two
    generators: both roots would need body 1 and the soul equation forces a
    square root of a nonzero two-generator element, which cannot exist."""
    q = 2
    m = G.monomial(q, [1, 2])
    # b1 + b2 = 2 with equal bodies forces b_i = 1 + n_i with n1 + n2 = 0;
    # then b1 b2 = 1 - n1^2, and even souls square to zero here
    for t in (Fraction(-3), Fraction(0), Fraction(1), Fraction(7, 2)):
        n1 = m * t
        b1 = 1 + n1
        b2 = 1 - n1
        assert b1 + b2 == 2
        assert b1 * b2 == 1
        assert b1 * b2 != 1 + m


def test_polynomial_serialization_round_trip():
    rng = random.Random(33)
    for _ in range(20):
        n = rng.randint(1, 3)
        terms = {}
        for _ in range(rng.randint(0, 4)):
            exps = tuple(rng.randint(0, 3) for _ in range(n))
            mask = rng.getrandbits(n)
            c = rng.randint(-5, 5)
            if c:
                terms[(exps, mask)] = c
        f = SuperPolynomial(n, terms)
        obj = json.loads(json.dumps(f.to_obj()))
        assert SuperPolynomial.from_obj(obj) == f
    expr = TTauExpression(2, 3, {((1, 0, 2), 0b101): Fraction(3, 7)})
    obj = json.loads(json.dumps(expr.to_obj()))
    assert TTauExpression.from_obj(obj) == expr
