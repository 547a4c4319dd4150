"""Matrices over a finite Grassmann algebra: queer and standard block shapes.

A queer-shaped matrix is an arbitrary n x n matrix over the algebra; its even
part A0 collects the even-parity entry components and its odd part A1 the odd
ones.  A standard (p|q)-shaped matrix is split into blocks

    [ X  Y ]        X: p x p,  T: q x q,
    [ Z  T ]

and is declared even when X, T have even entries and Y, Z odd entries, odd in
the swapped situation.  The declared parity class is validated at
construction; the zero matrix passes either.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    GeneratorCountMismatch,
    SamplingError,
    ShapeMismatch,
    SingularBody,
    UnconstrainedParity,
    ValidationError,
)
from .grassmann import GrassmannScalar, mul_terms_into, prune_terms
from . import linalg

EVEN = "even"
ODD = "odd"
ANY = "any"

_PARITIES = (EVEN, ODD, ANY)


@dataclass(frozen=True)
class Queer:
    n: int

    @property
    def dim(self):
        return self.n

    def to_obj(self):
        return {"kind": "queer", "n": self.n}


@dataclass(frozen=True)
class Standard:
    p: int
    q: int

    @property
    def dim(self):
        return self.p + self.q

    def to_obj(self):
        return {"kind": "standard", "p": self.p, "q_odd": self.q}


def shape_from_obj(obj):
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValidationError("shape object must have a 'kind' field")
    if obj["kind"] == "queer":
        n = obj.get("n")
        if not isinstance(n, int) or n < 1:
            raise ValidationError("queer shape needs a positive integer 'n'")
        return Queer(n)
    if obj["kind"] == "standard":
        p, q = obj.get("p"), obj.get("q_odd")
        if not isinstance(p, int) or not isinstance(q, int) or p < 0 or q < 0 or p + q < 1:
            raise ValidationError("standard shape needs non-negative 'p' and 'q_odd', not both zero")
        return Standard(p, q)
    raise ValidationError("unknown shape kind %r" % (obj["kind"],))


def _product_parity(p1, p2):
    if p1 == ANY or p2 == ANY:
        return ANY
    return EVEN if p1 == p2 else ODD


class SuperMatrix:
    """Immutable matrix over the Grassmann algebra with a declared shape."""

    __slots__ = ("shape", "parity", "rows", "gq")

    def __init__(self, shape, parity, rows, validate=True):
        if not isinstance(shape, (Queer, Standard)):
            raise ShapeMismatch("shape must be Queer or Standard")
        if parity not in _PARITIES:
            raise ValidationError("parity must be 'even', 'odd' or 'any'")
        dim = shape.dim
        rows = tuple(tuple(row) for row in rows)
        if len(rows) != dim or any(len(row) != dim for row in rows):
            raise ShapeMismatch("entry grid must be %d x %d" % (dim, dim))
        gq = rows[0][0].q
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "parity", parity)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "gq", gq)
        if validate:
            self._validate()

    def __setattr__(self, name, value):
        raise AttributeError("SuperMatrix is immutable")

    def _validate(self):
        for i, row in enumerate(self.rows):
            for j, x in enumerate(row):
                if not isinstance(x, GrassmannScalar):
                    raise ValidationError("entries must be GrassmannScalar", cell=(i + 1, j + 1))
                if x.q != self.gq:
                    raise GeneratorCountMismatch(
                        "entry (%d, %d) has generator count %d, expected %d"
                        % (i + 1, j + 1, x.q, self.gq)
                    )
        if isinstance(self.shape, Standard) and self.parity in (EVEN, ODD):
            p = self.shape.p
            for i, row in enumerate(self.rows):
                for j, x in enumerate(row):
                    diagonal_block = (i < p) == (j < p)
                    want_even = diagonal_block if self.parity == EVEN else not diagonal_block
                    ok = x.is_even() if want_even else x.is_odd()
                    if not ok:
                        raise ValidationError(
                            "entry (%d, %d) violates the declared %s parity class"
                            % (i + 1, j + 1, self.parity),
                            cell=(i + 1, j + 1),
                        )

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def identity(cls, shape, gq):
        one = GrassmannScalar.one(gq)
        zero = GrassmannScalar.zero(gq)
        dim = shape.dim
        rows = [[one if i == j else zero for j in range(dim)] for i in range(dim)]
        parity = EVEN if isinstance(shape, Standard) else ANY
        return cls(shape, parity, rows, validate=False)

    @classmethod
    def zeros(cls, shape, gq, parity=ANY):
        zero = GrassmannScalar.zero(gq)
        dim = shape.dim
        return cls(shape, parity, [[zero] * dim for _ in range(dim)], validate=False)

    @classmethod
    def from_rationals(cls, shape, parity, rows, gq):
        grid = [[GrassmannScalar.rational(gq, x) for x in row] for row in rows]
        return cls(shape, parity, grid)

    # ------------------------------------------------------------------
    # structure

    @property
    def dim(self):
        return self.shape.dim

    def entry(self, i, j):
        return self.rows[i][j]

    def body_rows(self):
        return [[x.body() for x in row] for row in self.rows]

    def soul(self):
        return SuperMatrix(self.shape, self.parity,
                           [[x.soul() for x in row] for row in self.rows], validate=False)

    def is_zero(self):
        return all(x.is_zero() for row in self.rows for x in row)

    def is_identity(self):
        return all(
            x == (1 if i == j else 0)
            for i, row in enumerate(self.rows)
            for j, x in enumerate(row)
        )

    def map_entries(self, fn, parity=None):
        grid = [[fn(x) for x in row] for row in self.rows]
        return SuperMatrix(self.shape, self.parity if parity is None else parity, grid)

    def queer_split(self):
        """Unique decomposition into an all-even and an all-odd entry part."""
        if not isinstance(self.shape, Queer):
            raise ShapeMismatch("queer_split needs a queer-shaped matrix")
        even = [[x.even_part() for x in row] for row in self.rows]
        odd = [[x.odd_part() for x in row] for row in self.rows]
        return (SuperMatrix(self.shape, ANY, even, validate=False),
                SuperMatrix(self.shape, ANY, odd, validate=False))

    def submatrix(self, row_idx, col_idx, shape, parity):
        grid = [[self.rows[i][j] for j in col_idx] for i in row_idx]
        return SuperMatrix(shape, parity, grid)

    # ------------------------------------------------------------------
    # arithmetic

    def _check_compatible(self, other):
        if not isinstance(other, SuperMatrix):
            raise ShapeMismatch("expected a SuperMatrix")
        if self.shape != other.shape:
            raise ShapeMismatch("shape mismatch: %r vs %r" % (self.shape, other.shape))
        if self.gq != other.gq:
            raise GeneratorCountMismatch(
                "generator counts differ: %d vs %d" % (self.gq, other.gq)
            )

    def __add__(self, other):
        if not isinstance(other, SuperMatrix):
            return NotImplemented
        self._check_compatible(other)
        rows = [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)]
        parity = self.parity if self.parity == other.parity else ANY
        return SuperMatrix(self.shape, parity, rows, validate=False)

    def __sub__(self, other):
        if not isinstance(other, SuperMatrix):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return SuperMatrix(self.shape, self.parity,
                           [[-x for x in row] for row in self.rows], validate=False)

    def __matmul__(self, other):
        if not isinstance(other, SuperMatrix):
            return NotImplemented
        self._check_compatible(other)
        gq = self.gq
        cols = list(zip(*other.rows))
        out = []
        for row in self.rows:
            out_row = []
            for col in cols:
                acc = {}
                for x, y in zip(row, col):
                    if x.terms and y.terms:
                        mul_terms_into(acc, x.terms, y.terms)
                out_row.append(GrassmannScalar._raw(gq, prune_terms(acc)))
            out.append(out_row)
        parity = _product_parity(self.parity, other.parity)
        return SuperMatrix(self.shape, parity, out, validate=False)

    def __mul__(self, other):
        if isinstance(other, SuperMatrix):
            return self.__matmul__(other)
        if isinstance(other, (int, Fraction)):
            return SuperMatrix(self.shape, self.parity,
                               [[x * other for x in row] for row in self.rows], validate=False)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.__mul__(other)
        return NotImplemented

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValidationError("matrix exponent must be a non-negative integer")
        out = SuperMatrix.identity(self.shape, self.gq)
        for _ in range(k):
            out = out @ self
        return out

    def invert(self):
        """Exact inverse: rational body inverse plus a nilpotent correction.

        A = B(1 + B^-1 S) with S the soul part; the geometric series in
        -B^-1 S terminates because soul entries have monomial degree >= 1.
        """
        body_inv, rk = linalg.inverse_with_rank(self.body_rows())
        if body_inv is None:
            raise SingularBody("matrix body is singular (rank %d of %d)" % (rk, self.dim), rank=rk)
        gq = self.gq
        binv = SuperMatrix(
            self.shape,
            EVEN if isinstance(self.shape, Standard) else ANY,
            [[GrassmannScalar.rational(gq, x) for x in row] for row in body_inv],
            validate=False,
        )
        neg_u = -(binv @ self.soul())
        # sum the terminating geometric series in -B^-1 S
        acc = SuperMatrix.identity(self.shape, gq)
        term = SuperMatrix.identity(self.shape, gq)
        for _ in range(gq):
            term = term @ neg_u
            if term.is_zero():
                break
            acc = acc + term
        return acc @ binv

    # ------------------------------------------------------------------
    # invariant functions

    def supertrace(self):
        """tr X - tr T on even matrices, tr X + tr T on odd ones."""
        if not isinstance(self.shape, Standard):
            raise ShapeMismatch("supertrace needs a standard-shaped matrix")
        if self.parity == ANY:
            raise UnconstrainedParity("supertrace needs a declared even or odd parity class")
        p = self.shape.p
        acc = GrassmannScalar.zero(self.gq)
        for i in range(p):
            acc = acc + self.rows[i][i]
        for i in range(p, self.dim):
            if self.parity == EVEN:
                acc = acc - self.rows[i][i]
            else:
                acc = acc + self.rows[i][i]
        return acc

    def qtr(self):
        """Trace of the odd part; linear and odd-valued."""
        if not isinstance(self.shape, Queer):
            raise ShapeMismatch("qtr needs a queer-shaped matrix")
        acc = GrassmannScalar.zero(self.gq)
        for i in range(self.dim):
            acc = acc + self.rows[i][i].odd_part()
        return acc

    def qet(self):
        """Odd log-determinant analogue: sum_i (1/i) tr (A0^-1 A1)^i.

        The series is finite: (A0^-1 A1)^i has entries of monomial degree at
        least i, so terms beyond the generator count vanish.
        """
        if not isinstance(self.shape, Queer):
            raise ShapeMismatch("qet needs a queer-shaped matrix")
        a0, a1 = self.queer_split()
        p = a0.invert() @ a1
        acc = GrassmannScalar.zero(self.gq)
        power = SuperMatrix.identity(self.shape, self.gq)
        for i in range(1, self.gq + 1):
            power = power @ p
            if power.is_zero():
                break
            tr = GrassmannScalar.zero(self.gq)
            for k in range(self.dim):
                tr = tr + power.rows[k][k]
            acc = acc + tr * Fraction(1, i)
        return acc

    def tau(self, k):
        """k-th odd invariant: qtr(A^k)/k on queer matrices, and
        str(A^(2k-1))/(2k-1) on odd standard square ones."""
        if not isinstance(k, int) or k < 1:
            raise ValidationError("invariant index must be a positive integer")
        if isinstance(self.shape, Queer):
            return (self ** k).qtr() * Fraction(1, k)
        if isinstance(self.shape, Standard) and self.shape.p == self.shape.q and self.parity == ODD:
            return (self ** (2 * k - 1)).supertrace() * Fraction(1, 2 * k - 1)
        raise ShapeMismatch("tau needs a queer matrix or an odd standard square matrix")

    def tau_values(self, upto):
        """tau(1..upto) with the matrix powers computed incrementally."""
        if isinstance(self.shape, Queer):
            out = []
            power = SuperMatrix.identity(self.shape, self.gq)
            for k in range(1, upto + 1):
                power = power @ self
                out.append(power.qtr() * Fraction(1, k))
            return out
        if isinstance(self.shape, Standard) and self.shape.p == self.shape.q and self.parity == ODD:
            out = []
            square = self @ self
            power = self
            for k in range(1, upto + 1):
                if k > 1:
                    power = power @ square
                out.append(power.supertrace() * Fraction(1, 2 * k - 1))
            return out
        raise ShapeMismatch("tau needs a queer matrix or an odd standard square matrix")

    def conjugate(self, g):
        """g^-1 A g, exactly; the parity class of A is preserved."""
        if isinstance(g, GroupElement):
            self._check_compatible(g.matrix)
            return g.inverse @ self @ g.matrix
        if isinstance(g, SuperMatrix):
            self._check_compatible(g)
            return g.invert() @ self @ g
        raise ShapeMismatch("conjugate needs a GroupElement or SuperMatrix")

    # ------------------------------------------------------------------
    # comparison / io

    def __eq__(self, other):
        # mathematical equality: declared parity classes are not compared
        if not isinstance(other, SuperMatrix):
            return NotImplemented
        return self.shape == other.shape and self.gq == other.gq and self.rows == other.rows

    __hash__ = None

    def __str__(self):
        lines = []
        for row in self.rows:
            lines.append("[" + ", ".join(str(x) for x in row) + "]")
        return "\n".join(lines)

    def __repr__(self):
        return "SuperMatrix(%r, %r, gq=%d)" % (self.shape, self.parity, self.gq)

    def to_obj(self):
        return {
            "shape": self.shape.to_obj(),
            "parity": self.parity,
            "grassmann_q": self.gq,
            "entries": [[x.to_obj() for x in row] for row in self.rows],
        }

    @classmethod
    def from_obj(cls, obj):
        if not isinstance(obj, dict):
            raise ValidationError("matrix object must be a JSON object")
        for field in ("shape", "parity", "grassmann_q", "entries"):
            if field not in obj:
                raise ValidationError("matrix object missing field %r" % field)
        shape = shape_from_obj(obj["shape"])
        parity = obj["parity"]
        if parity not in _PARITIES:
            raise ValidationError("parity must be 'even', 'odd' or 'any'")
        gq = obj["grassmann_q"]
        if not isinstance(gq, int) or gq < 0:
            raise ValidationError("grassmann_q must be a non-negative integer")
        entries = obj["entries"]
        dim = shape.dim
        if not isinstance(entries, list) or len(entries) != dim:
            raise ValidationError("entry grid must have %d rows" % dim)
        grid = []
        for i, row in enumerate(entries):
            if not isinstance(row, list) or len(row) != dim:
                raise ValidationError("row %d must have %d entries" % (i + 1, dim))
            out_row = []
            for j, item in enumerate(row):
                try:
                    x = GrassmannScalar.from_obj(item)
                except ValidationError as exc:
                    raise ValidationError(
                        "entry (%d, %d): %s" % (i + 1, j + 1, exc), cell=(i + 1, j + 1)
                    ) from exc
                if x.q != gq:
                    raise ValidationError(
                        "entry (%d, %d) has generator count %d, expected %d"
                        % (i + 1, j + 1, x.q, gq),
                        cell=(i + 1, j + 1),
                    )
                out_row.append(x)
            grid.append(out_row)
        return cls(shape, parity, grid)


class GroupElement:
    """An invertible matrix together with its cached exact inverse."""

    __slots__ = ("matrix", "inverse")

    def __init__(self, matrix, inverse=None, _trusted=False):
        if isinstance(matrix.shape, Standard) and matrix.parity != EVEN:
            raise ValidationError("standard-shaped group elements must be even")
        if inverse is None:
            inverse = matrix.invert()
        elif not _trusted:
            if not (matrix @ inverse).is_identity():
                raise ValidationError("supplied inverse does not invert the matrix")
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "inverse", inverse)

    def __setattr__(self, name, value):
        raise AttributeError("GroupElement is immutable")

    @classmethod
    def identity(cls, shape, gq):
        e = SuperMatrix.identity(shape, gq)
        return cls(e, e, _trusted=True)

    def compose(self, other):
        """Group product; inverses compose in the opposite order."""
        return GroupElement(
            self.matrix @ other.matrix,
            other.inverse @ self.inverse,
            _trusted=True,
        )

    def inverted(self):
        return GroupElement(self.inverse, self.matrix, _trusted=True)

    def __repr__(self):
        return "GroupElement(%r)" % (self.matrix,)


# ----------------------------------------------------------------------
# module-level operation aliases

def mat_mul(a, b):
    return a @ b


def mat_invert(a):
    return a.invert()


def queer_split(a):
    return a.queer_split()


def supertrace(a):
    return a.supertrace()


def qtr(a):
    return a.qtr()


def qet(a):
    return a.qet()


def tau(a, k):
    return a.tau(k)


def conjugate(a, g):
    return a.conjugate(g)


# ----------------------------------------------------------------------
# seeded random sampling

def _random_mask(rng, q, degree):
    mask = 0
    count = 0
    while count < degree:
        bit = 1 << rng.randrange(q)
        if not mask & bit:
            mask |= bit
            count += 1
    return mask


def random_scalar(rng, q, bound, parity=None, max_terms=2, max_degree=None):
    """Sparse random scalar with integer coefficients in [-bound, bound]."""
    if parity == EVEN:
        degrees = list(range(0, q + 1, 2))
    elif parity == ODD:
        degrees = list(range(1, q + 1, 2))
    else:
        degrees = list(range(0, q + 1))
    if max_degree is not None:
        degrees = [d for d in degrees if d <= max_degree]
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        if not degrees:
            break
        d = degrees[rng.randrange(len(degrees))]
        c = rng.randint(-bound, bound)
        if c == 0:
            c = 1
        mask = _random_mask(rng, q, d)
        terms[mask] = terms.get(mask, 0) + c
    return GrassmannScalar(q, terms)


def _entry_parity(shape, parity, i, j):
    if isinstance(shape, Queer) or parity == ANY:
        return None
    diagonal_block = (i < shape.p) == (j < shape.p)
    if parity == EVEN:
        return EVEN if diagonal_block else ODD
    return ODD if diagonal_block else EVEN


def random_matrix(shape, parity, q, seed, coefficient_bound, max_terms=2, max_degree=None):
    """Deterministic random matrix honoring the declared parity class."""
    if coefficient_bound < 1:
        raise ValidationError("coefficient_bound must be at least 1")
    rng = random.Random(seed)
    dim = shape.dim
    grid = []
    for i in range(dim):
        row = []
        for j in range(dim):
            row.append(random_scalar(rng, q, coefficient_bound,
                                     parity=_entry_parity(shape, parity, i, j),
                                     max_terms=max_terms, max_degree=max_degree))
        grid.append(row)
    return SuperMatrix(shape, parity, grid)


def random_group_element(shape, q, seed, coefficient_bound, max_terms=1, max_tries=64):
    """Deterministic random group element: invertible body by rejection."""
    if coefficient_bound < 1:
        raise ValidationError("coefficient_bound must be at least 1")
    rng = random.Random(seed)
    parity = EVEN if isinstance(shape, Standard) else ANY
    dim = shape.dim
    for _ in range(max_tries):
        grid = []
        for i in range(dim):
            row = []
            for j in range(dim):
                x = random_scalar(rng, q, coefficient_bound,
                                  parity=_entry_parity(shape, parity, i, j),
                                  max_terms=max_terms)
                if i == j:
                    x = x + rng.randint(-coefficient_bound, coefficient_bound)
                row.append(x)
            grid.append(row)
        candidate = SuperMatrix(shape, parity, grid)
        inv, _rk = linalg.inverse_with_rank(candidate.body_rows())
        if inv is not None:
            return GroupElement(candidate)
    raise SamplingError("could not sample an invertible body in %d tries" % max_tries)
