"""Eigendata extraction, semi-invariants, and invariant evaluation.

The pipeline reads the diagonal data (a_i, alpha_i) off the canonical form of
an eligible matrix, forms the signed elementary values s_1..s_n, and uses them
with the odd moments tau_1..tau_n to evaluate arbitrary balanced expressions.
Any other s-solution of the moment recurrence with the same body gives the
same evaluation; that well-definedness is a tested property, not an
assumption.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .errors import (
    MultipleEigenvalue,
    NotInL,
    NotInvariant,
    ShapeMismatch,
    ValidationError,
    ZeroDiscriminant,
    ZeroEigenvalue,
)
from .grassmann import GrassmannScalar
from .reduction import diagonalize, rational_spectrum, reduce_odd
from .supermatrix import ODD, Queer, Standard, SuperMatrix
from .sympoly import (
    BalancedExpression,
    TTauExpression,
    elementary_from_roots,
    signed_elementary_poly,
    verify_recurrence,
    _ttau_monomials,
)


def family_size(a):
    """The n of the invariant family a matrix belongs to."""
    if isinstance(a.shape, Queer):
        return a.shape.n
    if isinstance(a.shape, Standard) and a.shape.p == a.shape.q and a.parity == ODD:
        return a.shape.p
    raise ShapeMismatch("expected a queer matrix or an odd standard square matrix")


@dataclass(frozen=True)
class EigenData:
    """Ordered diagonal data (a_i, alpha_i) extracted from a canonical form."""

    pairs: tuple
    source_shape: object

    @property
    def n(self):
        return len(self.pairs)

    def tau_value(self, k):
        """sum_i alpha_i a_i^(k-1), the k-th odd moment of the data."""
        q = self.pairs[0][0].q
        acc = GrassmannScalar.zero(q)
        for a, alpha in self.pairs:
            acc = acc + alpha * a ** (k - 1)
        return acc

    def matches_tau(self, a, upto=None):
        upto = upto or 2 * self.n
        taus = a.tau_values(upto)
        return all(self.tau_value(k) == taus[k - 1] for k in range(1, upto + 1))


@dataclass(frozen=True)
class SemiInvariants:
    """The even values s_1..s_n satisfying the odd-moment recurrence."""

    s: tuple


def eigendata(a):
    """Extract the diagonal data through the exact canonical reduction."""
    if isinstance(a.shape, Queer):
        dec = diagonalize(a)
        pairs = []
        for _lam, block in dec.blocks:
            entry = block.rows[0][0]
            even, odd = entry.parity_split()
            pairs.append((even, odd))
        return EigenData(tuple(pairs), a.shape)
    if isinstance(a.shape, Standard) and a.shape.p == a.shape.q and a.parity == ODD:
        dec = reduce_odd(a)
        pairs = []
        for _lam, block in dec.blocks:
            pairs.append((block.rows[0][1], block.rows[0][0]))
        return EigenData(tuple(pairs), a.shape)
    raise ShapeMismatch("expected a queer matrix or an odd standard square matrix")


def semi_invariants_from_eigendata(data):
    return SemiInvariants(tuple(elementary_from_roots([a for a, _ in data.pairs])))


def compute_s(a):
    """Semi-invariants through the spectral route; recurrence-checked."""
    data = eigendata(a)
    result = semi_invariants_from_eigendata(data)
    n = data.n
    if not verify_recurrence(a.tau_values(2 * n), list(result.s)):
        raise AssertionError("internal: spectral semi-invariants fail the recurrence")
    return result


def q2_closed_form(b, beta):
    """Closed-form semi-invariants for a 2 x 2 queer matrix B + beta.

    s_1 is the trace plus a soul correction with the squared-difference
    discriminant as denominator; s_2 follows from s_1 through the trace
    identity below.  Both satisfy the odd-moment recurrence exactly whenever
    the discriminant body is nonzero.
    """
    for m, want in ((b, "even"), (beta, "odd")):
        if not (isinstance(m, SuperMatrix) and isinstance(m.shape, Queer) and m.shape.n == 2):
            raise ShapeMismatch("expected 2 x 2 queer-shaped matrices")
        for row in m.rows:
            for x in row:
                ok = x.is_even() if want == "even" else x.is_odd()
                if not ok:
                    raise ValidationError("entries of the %s argument must be %s" % (want, want))
    if b.gq != beta.gq:
        raise ValidationError("the two arguments use different generator counts")
    b11, b12 = b.rows[0]
    b21, b22 = b.rows[1]
    t11, t12 = beta.rows[0]
    t21, t22 = beta.rows[1]
    disc = (b11 - b22) * (b11 - b22) + 4 * (b12 * b21)
    if disc.body() == 0:
        raise ZeroDiscriminant("the body of (b11-b22)^2 + 4 b12 b21 vanishes")
    trace = b11 + b22
    correction = (t12 * b21 - t21 * b12) * (t22 - t11) + (b11 - b22) * (t12 * t21)
    s1 = trace + 2 * correction * disc.invert()
    det = b11 * b22 - b12 * b21
    s2 = -det - (s1 - trace) * trace * Fraction(1, 2)
    return SemiInvariants((s1, s2))


def body_signed_elementary(a):
    """Bodies of the semi-invariants, straight from the body spectrum.

    For the monic characteristic polynomial sum_i c_i x^i of the relevant
    body matrix, the recurrence convention pins body(s_j) = -c_{n-j}.
    """
    if isinstance(a.shape, Queer):
        n = a.shape.n
        body = a.body_rows()
    else:
        n = family_size(a)
        sq = (a @ a).body_rows()
        body = [row[:n] for row in sq[:n]]
    coeffs = linalg.charpoly(body)
    return [-coeffs[n - j] for j in range(1, n + 1)]


def _check_eligible(a):
    """Raise the appropriate reduction error when a admits no eigendata."""
    if isinstance(a.shape, Queer):
        spectrum = rational_spectrum(a.body_rows())
        if not spectrum.is_simple():
            raise MultipleEigenvalue("body has a repeated eigenvalue")
        return
    n = family_size(a)
    sq = (a @ a).body_rows()
    spectrum = rational_spectrum([row[:n] for row in sq[:n]])
    if not spectrum.is_simple():
        raise MultipleEigenvalue("the square's body has a repeated eigenvalue")
    if any(lam == 0 for lam, _ in spectrum.pairs):
        raise ZeroEigenvalue("the square's body has a zero eigenvalue")


def evaluate_invariant(a, f, s_values=None):
    """Evaluate a balanced expression on a matrix: f(s_1..s_n, tau_1..tau_n).

    When s_values is supplied it is validated against the recurrence and the
    body pin; any admissible choice gives the same value.
    """
    n = family_size(a)
    if f.n != n:
        raise ValidationError("expression is for n=%d, matrix has n=%d" % (f.n, n))
    ok, witness = f.is_balanced()
    if not ok:
        raise NotInvariant("expression is not balanced", witness=witness)
    if s_values is None:
        s_values = list(compute_s(a).s)
    else:
        s_values = list(s_values)
        if len(s_values) != n:
            raise ValidationError("need exactly %d semi-invariant values" % n)
        if not verify_recurrence(a.tau_values(2 * n), s_values):
            raise ValidationError("supplied semi-invariant values fail the recurrence")
        bodies = body_signed_elementary(a)
        for j, (value, want) in enumerate(zip(s_values, bodies), start=1):
            if value.body() != want:
                raise ValidationError("supplied s_%d has body %s, expected %s"
                                      % (j, value.body(), want))
    taus = a.tau_values(n)
    return f.evaluate(s_values, taus)


def indistinguishable(a1, a2):
    """Whether all invariant functions agree on the two matrices.

    True exactly when the first 2n odd moments coincide and the bodies of the
    semi-invariants do.
    """
    n = family_size(a1)
    if family_size(a2) != n:
        raise ShapeMismatch("the two matrices belong to different families")
    _check_eligible(a1)
    _check_eligible(a2)
    if a1.tau_values(2 * n) != a2.tau_values(2 * n):
        return False
    return body_signed_elementary(a1) == body_signed_elementary(a2)


def l_invariants(a):
    """The semi-invariant values on the locus where tau_1..tau_n vanish.

    There they are genuine invariants; conjugation cannot move them.
    """
    n = family_size(a)
    taus = a.tau_values(n)
    for k, value in enumerate(taus, start=1):
        if not value.is_zero():
            raise NotInL("tau_%d does not vanish" % k, index=k)
    return list(compute_s(a).s)


def qet_generating_coefficients(a, count):
    """Laurent coefficients of the resolvent-style generating function.

    Returns the coefficients of 1/lambda^j for j = 1..count.  On queer
    matrices the j-th coefficient is minus the j-th odd moment; on odd
    matrices odd-order coefficients vanish and the 2k-th equals
    -(2k-1) tau_k.
    """
    if not isinstance(count, int) or count < 1:
        raise ValidationError("count must be a positive integer")
    data = eigendata(a)
    out = []
    if isinstance(a.shape, Queer):
        for j in range(1, count + 1):
            out.append(-data.tau_value(j))
        return out
    q = a.gq
    for j in range(1, count + 1):
        if j % 2 == 1:
            out.append(GrassmannScalar.zero(q))
        else:
            k = j // 2
            out.append(-(2 * k - 1) * data.tau_value(k))
    return out


def s_body_convention_report(a):
    """Report which sign convention the semi-invariant bodies follow.

    The recurrence forces body(s_j) = (-1)^(j-1) e_j of the body spectrum;
    the characteristic-polynomial display would give (-1)^j e_j instead.
    Both are reported, neither asserted.
    """
    values = compute_s(a).s
    n = len(values)
    if isinstance(a.shape, Queer):
        body = a.body_rows()
    else:
        sq = (a @ a).body_rows()
        body = [row[:n] for row in sq[:n]]
    spectrum = rational_spectrum(body)
    eigs = []
    for lam, mult in spectrum.pairs:
        eigs.extend([lam] * mult)
    elementary = [1] + [0] * n
    for v in eigs:
        for j in range(n, 0, -1):
            elementary[j] = elementary[j] + elementary[j - 1] * v
    report = []
    for j in range(1, n + 1):
        recurrence_sign = elementary[j] if j % 2 == 1 else -elementary[j]
        report.append(
            {
                "j": j,
                "body": str(values[j - 1].body()),
                "recurrence_convention": values[j - 1].body() == recurrence_sign,
                "charpoly_convention": values[j - 1].body() == -recurrence_sign,
            }
        )
    return report


# ----------------------------------------------------------------------
# balanced corpus for property testing


def _pullback_residual_rows(polys, n):
    """Stack the invariance residual coefficients of candidate pullbacks."""
    rows_index = {}
    columns = []
    for poly in polys:
        residuals = [poly.derivative(i).odd_multiply(i) for i in range(1, n + 1)]
        columns.append(residuals)
        for i, res in enumerate(residuals):
            for key in res.terms:
                rows_index.setdefault((i, key), len(rows_index))
    matrix = [[0] * len(columns) for _ in range(len(rows_index))]
    for col, residuals in enumerate(columns):
        for i, res in enumerate(residuals):
            for key, c in res.terms.items():
                matrix[rows_index[(i, key)]][col] = c
    return matrix


def _twisted_residual_rows(polys, den, n):
    """Residuals of N/D invariance with the denominator cleared."""
    rows_index = {}
    columns = []
    dprimes = [den.derivative(i) for i in range(1, n + 1)]
    for poly in polys:
        residuals = [
            (poly.derivative(i) * den - poly * dprimes[i - 1]).odd_multiply(i)
            for i in range(1, n + 1)
        ]
        columns.append(residuals)
        for i, res in enumerate(residuals):
            for key in res.terms:
                rows_index.setdefault((i, key), len(rows_index))
    matrix = [[0] * len(columns) for _ in range(len(rows_index))]
    for col, residuals in enumerate(columns):
        for i, res in enumerate(residuals):
            for key, c in res.terms.items():
                matrix[rows_index[(i, key)]][col] = c
    return matrix


def balanced_corpus(n, seed, combos=4, weight_cap=None):
    """A deterministic family of balanced expressions for property tests.

    Contains the plain odd symbols, the small worked closed forms, and random
    rational combinations drawn from the exact kernel of the balance
    conditions, with and without an even denominator.
    """
    rng = random.Random(seed)
    cap = weight_cap if weight_cap is not None else min(2 * n, n + 2)
    corpus = []
    for i in range(1, n + 1):
        corpus.append(BalancedExpression(TTauExpression.odd_symbol(n, n, i)))
    if n == 1:
        u1 = TTauExpression.even_symbol(1, 1, 1)
        x1 = TTauExpression.odd_symbol(1, 1, 1)
        corpus.append(BalancedExpression(u1 * x1))
        corpus.append(BalancedExpression(u1 * u1 * x1))
        corpus.append(BalancedExpression(x1, u1))
    if n == 2:
        u1 = TTauExpression.even_symbol(2, 2, 1)
        u2 = TTauExpression.even_symbol(2, 2, 2)
        x1 = TTauExpression.odd_symbol(2, 2, 1)
        x2 = TTauExpression.odd_symbol(2, 2, 2)
        corpus.append(BalancedExpression(x2 - u1 * x1, u2))
    monos = []
    for weight in range(1, cap + 1):
        for exps, mask in _ttau_monomials(n, weight, max_odd=n):
            monos.append((exps, mask))
    candidates = [TTauExpression.monomial(n, n, e, m) for e, m in monos]
    pullbacks = [c.expand(even_basis="s") for c in candidates]
    kernel = linalg.nullspace(_pullback_residual_rows(pullbacks, n))
    for _ in range(combos):
        if not kernel:
            break
        combo = TTauExpression.zero(n, n)
        nonzero = False
        for vec in kernel:
            c = rng.randint(-2, 2)
            if c == 0:
                continue
            nonzero = True
            for cand, weight in zip(candidates, vec):
                if weight != 0:
                    combo = combo + cand * (weight * c)
        if nonzero and not combo.is_zero():
            corpus.append(BalancedExpression(combo))
    den_poly = signed_elementary_poly(n, n)
    den_expr = TTauExpression.even_symbol(n, n, n)
    kernel = linalg.nullspace(_twisted_residual_rows(pullbacks, den_poly, n))
    for _ in range(max(1, combos // 2)):
        if not kernel:
            break
        combo = TTauExpression.zero(n, n)
        nonzero = False
        for vec in kernel:
            c = rng.randint(-2, 2)
            if c == 0:
                continue
            nonzero = True
            for cand, weight in zip(candidates, vec):
                if weight != 0:
                    combo = combo + cand * (weight * c)
        if nonzero and not combo.is_zero():
            corpus.append(BalancedExpression(combo, den_expr))
    return corpus
