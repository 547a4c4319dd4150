"""Exact linear algebra over the rationals.

Matrices are lists of row lists with int or Fraction entries.  Everything here
is pivoted Gaussian elimination or classical adjugate-free recursions; no
floating point anywhere.
"""

from __future__ import annotations

from fractions import Fraction


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zero_matrix(rows, cols):
    return [[0] * cols for _ in range(rows)]


def copy_rows(m):
    return [list(row) for row in m]


def transpose(m):
    return [list(col) for col in zip(*m)]


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a, c):
    return [[x * c for x in row] for row in a]


def matmul(a, b):
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def trace(a):
    return sum(a[i][i] for i in range(len(a)))


def _rref(m, ncols=None):
    """In-place reduced row echelon form; returns the pivot column list."""
    rows = len(m)
    if ncols is None:
        ncols = len(m[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, rows):
            if m[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = Fraction(1, 1) / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return pivots


def rank(a):
    if not a:
        return 0
    m = copy_rows(a)
    return len(_rref(m))


def inverse_with_rank(a):
    """Return (inverse, rank); inverse is None when a is singular."""
    n = len(a)
    m = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(a)]
    pivots = _rref(m, ncols=n)
    if len(pivots) < n:
        return None, len(pivots)
    return [row[n:] for row in m], n


def inverse(a):
    inv, _ = inverse_with_rank(a)
    return inv


def solve_general(a, b):
    """Solve a @ x = b exactly.

    Returns (solution, free_columns) or (None, None) when inconsistent.  Free
    variables, if any, are set to zero in the returned solution.
    """
    rows = len(a)
    cols = len(a[0]) if rows else 0
    m = [list(ra) + [bb] for ra, bb in zip(a, b)]
    pivots = _rref(m, ncols=cols)
    pivot_set = set(pivots)
    for i in range(len(pivots), rows):
        if m[i][cols] != 0:
            return None, None
    x = [0] * cols
    for r, c in enumerate(pivots):
        x[c] = m[r][cols]
    free = [c for c in range(cols) if c not in pivot_set]
    return x, free


def solve_unique(a, b):
    """Solve a @ x = b when the solution is unique; None otherwise."""
    x, free = solve_general(a, b)
    if x is None or free:
        return None
    return x


def nullspace(a):
    """Basis of the right kernel as a list of column vectors."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    m = copy_rows(a)
    pivots = _rref(m)
    pivot_set = set(pivots)
    basis = []
    for c in range(cols):
        if c in pivot_set:
            continue
        v = [0] * cols
        v[c] = 1
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][c]
        basis.append(v)
    return basis


def charpoly(a):
    """Monic characteristic polynomial, ascending coefficients c0..cn.

    Faddeev-LeVerrier recursion; exact over the rationals.
    """
    n = len(a)
    if n == 0:
        return [1]
    descending = [Fraction(1)]
    m = identity(n)
    for k in range(1, n + 1):
        am = matmul(a, m)
        ck = -Fraction(trace(am), k)
        descending.append(ck)
        m = mat_add(am, mat_scale(identity(n), ck))
    return list(reversed(descending))


def poly_eval(coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _poly_divide_linear(coeffs, root):
    """Synthetic division of an ascending-coefficient polynomial by (x - root)."""
    n = len(coeffs) - 1
    out = [0] * n
    acc = coeffs[n]
    for i in range(n - 1, -1, -1):
        out[i] = acc
        acc = coeffs[i] + acc * root
    return out  # remainder acc is zero for exact roots


def _divisors(n):
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _candidate_roots(coeffs):
    """Rational root candidates p/q for an ascending rational polynomial."""
    denl = 1
    for c in coeffs:
        if isinstance(c, Fraction):
            denl = denl * c.denominator // _gcd(denl, c.denominator)
    ints = [int(c * denl) for c in coeffs]
    lead = ints[-1]
    const = ints[0]
    if const == 0:
        return [Fraction(0)]
    cands = set()
    for p in _divisors(const):
        for qd in _divisors(lead):
            cands.add(Fraction(p, qd))
            cands.add(Fraction(-p, qd))
    return sorted(cands)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def rational_roots(coeffs):
    """All rational roots with multiplicity, plus the non-splitting residual.

    Returns (sorted [(root, multiplicity)], residual) where residual is the
    ascending coefficient list of the rational-root-free factor, or None when
    the polynomial splits completely over the rationals.
    """
    cur = [Fraction(c) for c in coeffs]
    while len(cur) > 1 and cur[-1] == 0:
        cur.pop()
    found = {}
    zero = Fraction(0)
    while len(cur) > 1 and cur[0] == 0:
        found[zero] = found.get(zero, 0) + 1
        cur = cur[1:]
    while len(cur) > 1:
        hit = None
        for cand in _candidate_roots(cur):
            if poly_eval(cur, cand) == 0:
                hit = cand
                break
        if hit is None:
            return sorted(found.items()), cur
        found[hit] = found.get(hit, 0) + 1
        cur = _poly_divide_linear(cur, hit)
    return sorted(found.items()), None
