"""Canonical forms of matrices over the Grassmann algebra.

The reduction runs in two stages.  The body stage works over the rationals:
generalized eigenspaces of the body group the indices into a partition, one
part per eigenvalue.  The nilpotent stage then removes cross-partition terms
degree by degree: at filtration level d every cross entry is supported on
monomials of degree >= d, and conjugating by 1 + D with D solving the
per-monomial Sylvester equations pushes the support to degree d + 1.  After q
levels the cross terms vanish identically.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .errors import (
    MultipleEigenvalue,
    NonSplitting,
    NotBlockDiagonalSquare,
    ShapeMismatch,
    SharedEigenvalue,
    SingularZ,
    ValidationError,
    ZeroEigenvalue,
)
from .grassmann import GrassmannScalar, parse_coeff
from .supermatrix import ANY, EVEN, ODD, GroupElement, Queer, Standard, SuperMatrix


@dataclass(frozen=True)
class RationalSpectrum:
    """Eigenvalues with algebraic multiplicities, sorted ascending."""

    pairs: tuple

    @property
    def eigenvalues(self):
        return [lam for lam, _ in self.pairs]

    @property
    def dimension(self):
        return sum(m for _, m in self.pairs)

    def is_simple(self):
        return all(m == 1 for _, m in self.pairs)


def rational_spectrum(rows):
    """All eigenvalues of an exact rational matrix, with multiplicity.

    Raises NonSplitting with the irreducible residual factor when the
    characteristic polynomial has an irrational root.
    """
    coeffs = linalg.charpoly(rows)
    roots, residual = linalg.rational_roots(coeffs)
    if residual is not None:
        raise NonSplitting(
            "characteristic polynomial does not split over the rationals",
            residual=[Fraction(c) for c in residual],
        )
    return RationalSpectrum(tuple(sorted(roots)))


def solve_sylvester(b, d, r):
    """Unique rational X with bX - Xd = r, for disjoint spectra of b and d."""
    kron = _sylvester_operator(b, d)
    n1 = len(b)
    n2 = len(d)
    vec = [r[i][j] for j in range(n2) for i in range(n1)]
    x = linalg.solve_unique(kron, vec)
    if x is None:
        raise SharedEigenvalue("the two coefficient matrices share an eigenvalue")
    return [[x[j * n1 + i] for j in range(n2)] for i in range(n1)]


def _sylvester_operator(b, d):
    # column-stacked matrix of X -> bX - Xd
    n1 = len(b)
    n2 = len(d)
    size = n1 * n2
    kron = [[0] * size for _ in range(size)]
    for i in range(n1):
        for j in range(n2):
            row = j * n1 + i
            for k in range(n1):
                kron[row][j * n1 + k] += b[i][k]
            for l in range(n2):
                kron[row][l * n1 + i] -= d[l][j]
    return kron


@dataclass
class SpectralDecomposition:
    """Conjugator plus the per-eigenvalue blocks it produces.

    conjugator^-1 @ A @ conjugator equals the assembly of the blocks over the
    partition, entry for entry.  For odd-matrix reductions the recorded
    eigenvalue is the body eigenvalue of the block's square.
    """

    conjugator: GroupElement
    blocks: list
    partition: list
    parity: str

    @property
    def shape(self):
        return self.conjugator.matrix.shape

    @property
    def gq(self):
        return self.conjugator.matrix.gq

    def assembled(self):
        shape = self.shape
        gq = self.gq
        zero = GrassmannScalar.zero(gq)
        grid = [[zero] * shape.dim for _ in range(shape.dim)]
        for part, (_lam, block) in zip(self.partition, self.blocks):
            for a, i in enumerate(part):
                for b, j in enumerate(part):
                    grid[i - 1][j - 1] = block.rows[a][b]
        return SuperMatrix(shape, self.parity, grid)

    def verify(self, a):
        return a.conjugate(self.conjugator) == self.assembled()

    def to_obj(self):
        return {
            "conjugator": self.conjugator.matrix.to_obj(),
            "parity": self.parity,
            "partition": [list(part) for part in self.partition],
            "blocks": [
                {
                    "eigenvalue": None if lam is None else str(lam),
                    "block": block.to_obj(),
                }
                for lam, block in self.blocks
            ],
        }

    @classmethod
    def from_obj(cls, obj):
        if not isinstance(obj, dict):
            raise ValidationError("decomposition object must be a JSON object")
        for field in ("conjugator", "parity", "partition", "blocks"):
            if field not in obj:
                raise ValidationError("decomposition object missing field %r" % field)
        conjugator = GroupElement(SuperMatrix.from_obj(obj["conjugator"]))
        partition = obj["partition"]
        if not isinstance(partition, list) or not all(
            isinstance(part, list) and all(isinstance(i, int) and i >= 1 for i in part)
            for part in partition
        ):
            raise ValidationError("partition must be lists of 1-based indices")
        blocks = []
        for item in obj["blocks"]:
            lam = item.get("eigenvalue")
            lam = None if lam is None else parse_coeff(lam)
            blocks.append((lam if lam is None else Fraction(lam), SuperMatrix.from_obj(item["block"])))
        parity = obj["parity"]
        dim = conjugator.matrix.dim
        seen = sorted(i for part in partition for i in part)
        if seen != list(range(1, dim + 1)):
            raise ValidationError("partition must cover 1..%d exactly once" % dim)
        return cls(conjugator, blocks, partition, parity)


# ----------------------------------------------------------------------
# body stage


def _grouped_basis(body, spectrum):
    """Columns grouping the generalized eigenspaces, eigenvalue-sorted."""
    n = len(body)
    columns = []
    sizes = []
    for lam, mult in spectrum.pairs:
        shifted = [[body[i][j] - (lam if i == j else 0) for j in range(n)] for i in range(n)]
        power = linalg.identity(n)
        for _ in range(mult):
            power = linalg.matmul(power, shifted)
        basis = linalg.nullspace(power)
        if len(basis) != mult:
            raise MultipleEigenvalue(
                "generalized eigenspace dimension %d does not match multiplicity %d"
                % (len(basis), mult)
            )
        columns.extend(basis)
        sizes.append(mult)
    p_rows = [[columns[c][i] for c in range(n)] for i in range(n)]
    return p_rows, sizes


def _body_stage(a):
    """Rational conjugator grouping body eigenvalues; returns partition data."""
    if isinstance(a.shape, Queer):
        spectrum = rational_spectrum(a.body_rows())
        p_rows, sizes = _grouped_basis(a.body_rows(), spectrum)
        parts = []
        offset = 0
        for size in sizes:
            parts.append(list(range(offset, offset + size)))
            offset += size
        eigs = spectrum.eigenvalues
        block_shapes = [Queer(size) for size in sizes]
        conj = SuperMatrix.from_rationals(a.shape, ANY, p_rows, a.gq)
        return conj, parts, eigs, block_shapes
    p, q = a.shape.p, a.shape.q
    body = a.body_rows()
    x_body = [row[:p] for row in body[:p]]
    t_body = [row[p:] for row in body[p:]]
    spec_x = rational_spectrum(x_body)
    spec_t = rational_spectrum(t_body)
    mult_x = dict(spec_x.pairs)
    mult_t = dict(spec_t.pairs)
    eigs = sorted(set(mult_x) | set(mult_t))
    ordered_x = [(lam, mult_x[lam]) for lam in eigs if lam in mult_x]
    ordered_t = [(lam, mult_t[lam]) for lam in eigs if lam in mult_t]
    px_rows, _ = _grouped_basis(x_body, RationalSpectrum(tuple(ordered_x))) if p else ([], [])
    pt_rows, _ = _grouped_basis(t_body, RationalSpectrum(tuple(ordered_t))) if q else ([], [])
    p_rows = [[0] * (p + q) for _ in range(p + q)]
    for i in range(p):
        for j in range(p):
            p_rows[i][j] = px_rows[i][j]
    for i in range(q):
        for j in range(q):
            p_rows[p + i][p + j] = pt_rows[i][j]
    parts = []
    block_shapes = []
    off_x = 0
    off_t = 0
    for lam in eigs:
        mx = mult_x.get(lam, 0)
        mt = mult_t.get(lam, 0)
        part = list(range(off_x, off_x + mx)) + list(range(p + off_t, p + off_t + mt))
        parts.append(part)
        block_shapes.append(Standard(mx, mt))
        off_x += mx
        off_t += mt
    conj = SuperMatrix.from_rationals(a.shape, EVEN, p_rows, a.gq)
    return conj, parts, eigs, block_shapes


# ----------------------------------------------------------------------
# nilpotent stage


class _PairSolvers:
    """Cached inverse Sylvester operators for ordered block pairs."""

    def __init__(self, body_blocks):
        self.body_blocks = body_blocks
        self._inv = {}

    def solve(self, r, s, rhs):
        key = (r, s)
        inv = self._inv.get(key)
        if inv is None:
            kron = _sylvester_operator(self.body_blocks[r], self.body_blocks[s])
            inv = linalg.inverse(kron)
            if inv is None:
                raise SharedEigenvalue("internal: Sylvester operator unexpectedly singular")
            self._inv[key] = inv
        n1 = len(self.body_blocks[r])
        n2 = len(self.body_blocks[s])
        vec = [rhs[i][j] for j in range(n2) for i in range(n1)]
        x = linalg.matvec(inv, vec)
        return [[x[j * n1 + i] for j in range(n2)] for i in range(n1)]


def _cross_positions(parts, dim):
    owner = [None] * dim
    for r, part in enumerate(parts):
        for i in part:
            owner[i] = r
    return owner


def _refine(m, parts, filtration_log=None):
    """Remove cross-partition terms degree by degree; exact conjugators."""
    gq = m.gq
    dim = m.dim
    owner = _cross_positions(parts, dim)
    body = m.body_rows()
    body_blocks = [[[body[i][j] for j in part] for i in part] for part in parts]
    solvers = _PairSolvers(body_blocks)
    shape = m.shape
    step_parity = EVEN if isinstance(shape, Standard) else ANY
    ident = SuperMatrix.identity(shape, gq)
    right = ident
    left = ident
    for level in range(1, gq + 1):
        cross_min = None
        masks = set()
        for i in range(dim):
            for j in range(dim):
                if owner[i] == owner[j]:
                    continue
                entry = m.rows[i][j]
                if entry.terms:
                    d = entry.min_degree()
                    cross_min = d if cross_min is None else min(cross_min, d)
                    for mask in entry.terms:
                        if mask.bit_count() == level:
                            masks.add(mask)
        if filtration_log is not None:
            filtration_log.append(cross_min)
        if cross_min is None:
            break
        if cross_min < level:
            raise AssertionError(
                "filtration contract violated: cross term of degree %d at level %d"
                % (cross_min, level)
            )
        if not masks:
            continue
        zero = GrassmannScalar.zero(gq)
        delta = [[zero] * dim for _ in range(dim)]
        for mask in sorted(masks):
            for r, part_r in enumerate(parts):
                for s, part_s in enumerate(parts):
                    if r == s:
                        continue
                    rhs = [
                        [-m.rows[i][j].terms.get(mask, 0) for j in part_s]
                        for i in part_r
                    ]
                    if all(x == 0 for row in rhs for x in row):
                        continue
                    sol = solvers.solve(r, s, rhs)
                    for a, i in enumerate(part_r):
                        for b, j in enumerate(part_s):
                            if sol[a][b] != 0:
                                delta[i][j] = delta[i][j] + GrassmannScalar(
                                    gq, {mask: sol[a][b]}
                                )
        step = ident + SuperMatrix(shape, step_parity, delta)
        # inverse by the terminating series in -delta
        neg = ident - step
        inv = ident
        term = ident
        for _ in range(gq // level + 1):
            term = term @ neg
            if term.is_zero():
                break
            inv = inv + term
        m = inv @ m @ step
        right = right @ step
        left = inv @ left
    for i in range(dim):
        for j in range(dim):
            if owner[i] != owner[j] and m.rows[i][j].terms:
                raise AssertionError("internal: cross terms survived the filtration")
    return m, right, left


def block_diagonalize(a, filtration_log=None):
    """Group a queer or even standard matrix into per-eigenvalue blocks.

    The body's characteristic polynomial must split over the rationals; the
    optional filtration_log collects the minimal cross-term degree seen at
    each nilpotent level.
    """
    if isinstance(a.shape, Standard):
        if a.parity != EVEN:
            raise ShapeMismatch("standard-shaped input must have even parity class")
    elif not isinstance(a.shape, Queer):
        raise ShapeMismatch("input must be queer or standard shaped")
    conj0, parts, eigs, block_shapes = _body_stage(a)
    g0 = GroupElement(conj0)
    m = a.conjugate(g0)
    m, right, left = _refine(m, parts, filtration_log=filtration_log)
    conjugator = GroupElement(conj0 @ right, left @ g0.inverse, _trusted=True)
    blocks = []
    partition = []
    for part, lam, bshape in zip(parts, eigs, block_shapes):
        block = m.submatrix(part, part, bshape, a.parity if isinstance(a.shape, Queer) else EVEN)
        blocks.append((lam, block))
        partition.append([i + 1 for i in part])
    return SpectralDecomposition(conjugator, blocks, partition, a.parity)


def diagonalize(a, filtration_log=None):
    """Full diagonalization; body eigenvalues must be pairwise distinct."""
    dec = block_diagonalize(a, filtration_log=filtration_log)
    for part in dec.partition:
        if len(part) != 1:
            raise MultipleEigenvalue("body has a repeated eigenvalue; blocks stay %d-dimensional" % len(part))
    return dec


def reduce_odd(a, filtration_log=None):
    """Reduce an odd standard square matrix to the paired canonical form.

    The square's body must have pairwise distinct nonzero rational
    eigenvalues.  The result assembles to rows (R T; 1 0) with R odd diagonal
    and T even diagonal.
    """
    if not (isinstance(a.shape, Standard) and a.shape.p == a.shape.q):
        raise ShapeMismatch("input must be a standard square matrix")
    if a.parity != ODD:
        raise ShapeMismatch("input must have odd parity class")
    n = a.shape.p
    squared = a @ a
    body = squared.body_rows()
    spec_x = rational_spectrum([row[:n] for row in body[:n]])
    spec_t = rational_spectrum([row[n:] for row in body[n:]])
    if spec_x.pairs != spec_t.pairs:
        raise MultipleEigenvalue("the two body spectra of the square disagree")
    for lam, mult in spec_x.pairs:
        if lam == 0:
            raise ZeroEigenvalue("the square's body has a zero eigenvalue")
        if mult != 1:
            raise MultipleEigenvalue("the square's body has a repeated eigenvalue")
    dec2 = block_diagonalize(squared, filtration_log=filtration_log)
    g1 = dec2.conjugator
    m = a.conjugate(g1)
    owner = _cross_positions([[i - 1 for i in part] for part in dec2.partition], 2 * n)
    for i in range(2 * n):
        for j in range(2 * n):
            if owner[i] != owner[j] and m.rows[i][j].terms:
                raise AssertionError("internal: the matrix does not respect its square's blocks")
    gq = a.gq
    zero = GrassmannScalar.zero(gq)
    one = GrassmannScalar.one(gq)
    h = [[one if i == j else zero for j in range(2 * n)] for i in range(2 * n)]
    hinv = [[one if i == j else zero for j in range(2 * n)] for i in range(2 * n)]
    blocks = []
    partition = []
    for r, part in enumerate(dec2.partition):
        if len(part) != 2 or part[0] + n != part[1]:
            raise AssertionError("internal: unexpected partition for an odd reduction")
        e, o = part[0] - 1, part[1] - 1
        t = m.rows[o][o]
        z = m.rows[o][e]
        zinv = z.invert()
        h[e][o] = -t
        h[o][o] = z
        hinv[e][o] = t * zinv
        hinv[o][o] = zinv
        partition.append(list(part))
    h_mat = SuperMatrix(a.shape, EVEN, h)
    h_inv = SuperMatrix(a.shape, EVEN, hinv)
    step = GroupElement(h_mat, h_inv)
    final = m.conjugate(step)
    lams = [lam for lam, _ in dec2.blocks]
    for r, part in enumerate(partition):
        e, o = part[0] - 1, part[1] - 1
        block = final.submatrix([e, o], [e, o], Standard(1, 1), ODD)
        if block.rows[1][0] != 1 or not block.rows[1][1].is_zero():
            raise AssertionError("internal: block did not reach the (R T; 1 0) form")
        blocks.append((lams[r], block))
    conjugator = g1.compose(step)
    return SpectralDecomposition(conjugator, blocks, partition, ODD)


def antidiagonalize(a):
    """Conjugate an odd matrix with block-diagonal square to (0 Y; 1 0) form.

    Returns the group element g with g^-1 a g antidiagonal with identity
    lower-left block.
    """
    if not (isinstance(a.shape, Standard) and a.shape.p == a.shape.q):
        raise ShapeMismatch("input must be a standard square matrix")
    if a.parity != ODD:
        raise ShapeMismatch("input must have odd parity class")
    n = a.shape.p
    squared = a @ a
    for i in range(2 * n):
        for j in range(2 * n):
            if (i < n) != (j < n) and squared.rows[i][j].terms:
                raise NotBlockDiagonalSquare(
                    "the square has a nonzero off-diagonal block at (%d, %d)" % (i + 1, j + 1)
                )
    gq = a.gq
    zero = GrassmannScalar.zero(gq)
    one = GrassmannScalar.one(gq)
    z_rows = [[a.rows[n + i][j] for j in range(n)] for i in range(n)]
    z_body = [[x.body() for x in row] for row in z_rows]
    if linalg.inverse(z_body) is None:
        raise SingularZ("the lower-left block has a singular body")
    g1_grid = [[one if i == j else zero for j in range(2 * n)] for i in range(2 * n)]
    for i in range(n):
        for j in range(n):
            g1_grid[n + i][n + j] = z_rows[i][j]
    g1 = GroupElement(SuperMatrix(a.shape, EVEN, g1_grid))
    m = a.conjugate(g1)
    for i in range(n):
        for j in range(n):
            low = m.rows[n + i][j]
            if low != (1 if i == j else 0):
                raise AssertionError("internal: lower-left block is not the identity")
            if not (m.rows[i][j] + m.rows[n + i][n + j]).is_zero():
                raise AssertionError("internal: diagonal blocks do not cancel")
    g2_grid = [[one if i == j else zero for j in range(2 * n)] for i in range(2 * n)]
    g2_inv_grid = [[one if i == j else zero for j in range(2 * n)] for i in range(2 * n)]
    for i in range(n):
        for j in range(n):
            g2_grid[i][n + j] = m.rows[i][j]
            g2_inv_grid[i][n + j] = -m.rows[i][j]
    g2 = GroupElement(SuperMatrix(a.shape, EVEN, g2_grid),
                      SuperMatrix(a.shape, EVEN, g2_inv_grid))
    g = g1.compose(g2)
    final = a.conjugate(g)
    for i in range(n):
        for j in range(n):
            if final.rows[i][j].terms or final.rows[n + i][n + j].terms:
                raise AssertionError("internal: diagonal blocks survived")
            if final.rows[n + i][j] != (1 if i == j else 0):
                raise AssertionError("internal: lower-left block is not the identity")
    return g
