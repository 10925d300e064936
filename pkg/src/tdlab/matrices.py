"""Dense exact matrices and subspaces over a scalars.py field.

Matrices are immutable row-major grids of field values.  Subspaces are kept
in reduced row-echelon form, which makes rref the unique canonical
representative: subspace equality is plain entry equality, and every
set-level statement downstream becomes a decidable check.

Also houses the two solver-shaped operations the rest of the package leans
on: the closure of a set of matrices into the unital algebra they generate,
and the space of intertwiners between two operator pairs.
"""

from __future__ import annotations

from itertools import product as _cartesian

from .scalars import Field, FieldError


class MatrixError(ValueError):
    """Shape/field misuse in a matrix or subspace operation."""


class Matrix:
    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: Field, data):
        rows = tuple(tuple(row) for row in data)
        if not rows or not rows[0]:
            raise MatrixError("matrices must have positive dimensions")
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise MatrixError("ragged rows")
        self.field = field
        self.rows = len(rows)
        self.cols = ncols
        self.data = rows

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        one, zero = field.one, field.zero
        return cls(field, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        zero = field.zero
        return cls(field, [[zero] * cols for _ in range(rows)])

    @classmethod
    def from_ints(cls, field: Field, data) -> "Matrix":
        return cls(field, [[field.from_int(x) for x in row] for row in data])

    def _check_same_field(self, other: "Matrix"):
        if self.field != other.field:
            raise FieldError("mixed fields in matrix arithmetic")

    def __add__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check_same_field(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise MatrixError("shape mismatch in addition")
        return Matrix(
            self.field,
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.data, other.data)
            ],
        )

    def __sub__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return Matrix(self.field, [[-a for a in row] for row in self.data])

    def __mul__(self, other):
        if isinstance(other, Matrix):
            self._check_same_field(other)
            if self.cols != other.rows:
                raise MatrixError("shape mismatch in multiplication")
            bt = tuple(zip(*other.data))
            return Matrix(
                self.field,
                [
                    [_dot(row, col) for col in bt]
                    for row in self.data
                ],
            )
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "Matrix":
        return Matrix(self.field, [[c * a for a in row] for row in self.data])

    def transpose(self) -> "Matrix":
        return Matrix(self.field, tuple(zip(*self.data)))

    def trace(self):
        if self.rows != self.cols:
            raise MatrixError("trace of a non-square matrix")
        t = self.field.zero
        for i in range(self.rows):
            t = t + self.data[i][i]
        return t

    def apply(self, vec):
        """Matrix times column vector (a tuple of scalars)."""
        if len(vec) != self.cols:
            raise MatrixError("vector length mismatch")
        return tuple(_dot(row, vec) for row in self.data)

    def is_zero(self) -> bool:
        zero = self.field.zero
        return all(a == zero for row in self.data for a in row)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def vec(self):
        """Row-major flattening, used to treat matrices as vectors."""
        return tuple(a for row in self.data for a in row)

    @classmethod
    def from_vec(cls, field: Field, v, rows: int, cols: int) -> "Matrix":
        if len(v) != rows * cols:
            raise MatrixError("vector length does not match shape")
        return cls(field, [v[i * cols : (i + 1) * cols] for i in range(rows)])

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.field == other.field
            and self.rows == other.rows
            and self.cols == other.cols
            and all(a == b for ra, rb in zip(self.data, other.data) for a, b in zip(ra, rb))
        )

    def __hash__(self):
        return hash((self.rows, self.cols))

    def __repr__(self):
        body = "; ".join(" ".join(str(a) for a in row) for row in self.data)
        return f"Matrix({self.rows}x{self.cols}: {body})"


def _dot(u, v):
    # zero-skip: the operators here are bidiagonal or low-rank, so sparse
    # terms dominate and skipping them avoids most exact-arithmetic calls
    acc = None
    for a, b in zip(u, v):
        if a and b:
            acc = a * b if acc is None else acc + a * b
    if acc is None:
        for a in u:
            return a - a  # zero of the right field
    return acc


def rref(m: Matrix):
    """Reduced row-echelon form.

    Returns (R, rank, pivot_columns).  Deterministic: pivots are chosen as
    the first nonzero entry scanning down each column, so results are
    bit-identical across runs.
    """
    grid = [list(row) for row in m.data]
    nrows, ncols = m.rows, m.cols
    zero = m.field.zero
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if grid[i][c] != zero:
                pr = i
                break
        if pr is None:
            continue
        grid[r], grid[pr] = grid[pr], grid[r]
        inv = grid[r][c]
        if inv != m.field.one:
            grid[r] = [a / inv for a in grid[r]]
        for i in range(nrows):
            if i != r and grid[i][c] != zero:
                f = grid[i][c]
                grid[i] = [a - f * b for a, b in zip(grid[i], grid[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return Matrix(m.field, grid), len(pivots), pivots


def rank(m: Matrix) -> int:
    return rref(m)[1]


def det(m: Matrix):
    """Determinant by Gaussian elimination with exact division."""
    if not m.is_square():
        raise MatrixError("determinant of a non-square matrix")
    grid = [list(row) for row in m.data]
    n = m.rows
    zero = m.field.zero
    acc = m.field.one
    for c in range(n):
        pr = None
        for i in range(c, n):
            if grid[i][c] != zero:
                pr = i
                break
        if pr is None:
            return zero
        if pr != c:
            grid[c], grid[pr] = grid[pr], grid[c]
            acc = -acc
        acc = acc * grid[c][c]
        inv = grid[c][c]
        for i in range(c + 1, n):
            if grid[i][c] != zero:
                f = grid[i][c] / inv
                grid[i] = [a - f * b for a, b in zip(grid[i], grid[c])]
    return acc


def solve(m: Matrix, rhs):
    """One solution x of m x = rhs (a tuple), or None if inconsistent."""
    aug = Matrix(m.field, [list(row) + [b] for row, b in zip(m.data, rhs)])
    r, _, pivots = rref(aug)
    if m.cols in pivots:
        return None
    zero = m.field.zero
    x = [zero] * m.cols
    for k, c in enumerate(pivots):
        x[c] = r.data[k][m.cols]
    return tuple(x)


def inverse(m: Matrix) -> Matrix:
    if not m.is_square():
        raise MatrixError("inverse of a non-square matrix")
    n = m.rows
    ident = Matrix.identity(m.field, n)
    aug = Matrix(m.field, [list(r) + list(i) for r, i in zip(m.data, ident.data)])
    r, rk, pivots = rref(aug)
    if rk < n or pivots != list(range(n)):
        raise MatrixError("matrix is singular")
    return Matrix(m.field, [row[n:] for row in r.data])


class Subspace:
    """A subspace of K^ambient, canonically a full-row-rank rref basis.

    The zero subspace has an empty basis.  Canonicality makes __eq__ a
    complete equality test.
    """

    __slots__ = ("field", "ambient", "basis")

    def __init__(self, field: Field, ambient: int, basis_rows):
        self.field = field
        self.ambient = ambient
        self.basis = tuple(tuple(r) for r in basis_rows)

    @classmethod
    def from_vectors(cls, field: Field, ambient: int, vectors) -> "Subspace":
        vecs = [v for v in vectors]
        if not vecs:
            return cls(field, ambient, [])
        m = Matrix(field, vecs)
        if m.cols != ambient:
            raise MatrixError("vector length does not match ambient dimension")
        r, rk, _ = rref(m)
        return cls(field, ambient, r.data[:rk])

    @classmethod
    def zero(cls, field: Field, ambient: int) -> "Subspace":
        return cls(field, ambient, [])

    @classmethod
    def full(cls, field: Field, ambient: int) -> "Subspace":
        return cls(field, ambient, Matrix.identity(field, ambient).data)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def is_full(self) -> bool:
        return len(self.basis) == self.ambient

    def contains(self, vec) -> bool:
        if len(vec) != self.ambient:
            raise MatrixError("vector length does not match ambient dimension")
        zero = self.field.zero
        v = list(vec)
        for row in self.basis:
            lead = _leading_index(row, zero)
            if v[lead] != zero:
                f = v[lead]
                v = [a - f * b for a, b in zip(v, row)]
        return all(a == zero for a in v)

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(r) for r in other.basis)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.field == other.field
            and self.ambient == other.ambient
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.ambient, self.dim))

    def __repr__(self):
        return f"Subspace(dim {self.dim} of K^{self.ambient})"


def _leading_index(row, zero):
    for j, a in enumerate(row):
        if a != zero:
            return j
    raise MatrixError("zero row in a subspace basis")


def _check_ambient(s: Subspace, t: Subspace):
    if s.ambient != t.ambient or s.field != t.field:
        raise MatrixError("subspace operands live in different ambient spaces")


def subspace_sum(s: Subspace, t: Subspace) -> Subspace:
    _check_ambient(s, t)
    out = Subspace.from_vectors(s.field, s.ambient, list(s.basis) + list(t.basis))
    _assert_modular_law(s, t, total=out)
    return out


def subspace_intersect(s: Subspace, t: Subspace) -> Subspace:
    _check_ambient(s, t)
    out = _intersect_raw(s, t)
    _assert_modular_law(s, t, meet=out)
    return out


def _intersect_raw(s: Subspace, t: Subspace) -> Subspace:
    if s.is_zero() or t.is_zero():
        return Subspace.zero(s.field, s.ambient)
    # x in S∩T  <=>  x = a·S = b·T; solve the stacked system for (a, b).
    cols = []
    for row in s.basis:
        cols.append(list(row))
    for row in t.basis:
        cols.append([-a for a in row])
    stacked = Matrix(s.field, cols).transpose()  # ambient x (dimS+dimT)
    ker = kernel_vectors(stacked)
    vecs = []
    for coeffs in ker:
        a = coeffs[: s.dim]
        vec = _combine(s.field, s.ambient, s.basis, a)
        vecs.append(vec)
    return Subspace.from_vectors(s.field, s.ambient, vecs)


def _combine(field, ambient, basis, coeffs):
    acc = [field.zero] * ambient
    for c, row in zip(coeffs, basis):
        if c != field.zero:
            acc = [x + c * y for x, y in zip(acc, row)]
    return tuple(acc)


def _assert_modular_law(s: Subspace, t: Subspace, total=None, meet=None):
    # dim S + dim T = dim(S+T) + dim(S∩T), asserted on every call.
    if total is None:
        total = Subspace.from_vectors(s.field, s.ambient, list(s.basis) + list(t.basis))
    if meet is None:
        meet = _intersect_raw(s, t)
    if s.dim + t.dim != total.dim + meet.dim:
        raise MatrixError(
            f"modular dimension law violated: {s.dim}+{t.dim} != {total.dim}+{meet.dim}"
        )


def kernel_vectors(m: Matrix):
    """Basis vectors (tuples) of the right kernel of m."""
    r, _, pivots = rref(m)
    zero, one = m.field.zero, m.field.one
    pivset = set(pivots)
    free = [c for c in range(m.cols) if c not in pivset]
    out = []
    for f in free:
        v = [zero] * m.cols
        v[f] = one
        for k, c in enumerate(pivots):
            v[c] = -r.data[k][f]
        out.append(tuple(v))
    return out


def kernel(m: Matrix) -> Subspace:
    """The right kernel of m as a canonical subspace of K^cols."""
    return Subspace.from_vectors(m.field, m.cols, kernel_vectors(m))


def image(m: Matrix) -> Subspace:
    """The column space of m, canonicalized."""
    return Subspace.from_vectors(m.field, m.rows, zip(*m.data))


class SpanBuilder:
    """Incrementally row-reduced span of vectors; used for algebra closure."""

    def __init__(self, field: Field, ambient: int):
        self.field = field
        self.ambient = ambient
        self.rows = []  # kept in echelon (not fully reduced) form
        self.leads = []

    def reduce(self, vec):
        zero = self.field.zero
        v = list(vec)
        for lead, row in zip(self.leads, self.rows):
            if v[lead] != zero:
                f = v[lead]
                v = [a - f * b for a, b in zip(v, row)]
        return v

    def add(self, vec) -> bool:
        """Add vec to the span; True if it enlarged the span."""
        zero = self.field.zero
        v = self.reduce(vec)
        for j, a in enumerate(v):
            if a != zero:
                v = [x / a for x in v]
                self.rows.append(v)
                self.leads.append(j)
                # keep rows ordered by leading index for determinism
                order = sorted(range(len(self.leads)), key=self.leads.__getitem__)
                self.rows = [self.rows[k] for k in order]
                self.leads = [self.leads[k] for k in order]
                return True
        return False

    def contains(self, vec) -> bool:
        zero = self.field.zero
        return all(a == zero for a in self.reduce(vec))

    @property
    def dim(self) -> int:
        return len(self.rows)

    def subspace(self) -> Subspace:
        return Subspace.from_vectors(self.field, self.ambient, self.rows)


def algebra_closure(gens, include_identity: bool = True, unit: Matrix | None = None):
    """Basis of the smallest unital subalgebra containing the generators.

    Grows a span by left multiplication by the generators until it
    stabilizes; with the unit included, the span of all words is reached,
    and such a span is automatically closed under multiplication.  Growth
    is bounded by n^2 rounds (the ambient algebra dimension).

    Returns a list of matrices: the rref-canonical vectorized basis.
    """
    gens = list(gens)
    if not gens:
        raise MatrixError("algebra closure of an empty generating set")
    field = gens[0].field
    n = gens[0].rows
    for g in gens:
        if g.field != field:
            raise FieldError("mixed fields in algebra closure")
        if not g.is_square() or g.rows != n:
            raise MatrixError("algebra closure needs square matrices of one size")
    span = SpanBuilder(field, n * n)
    frontier = []
    seeds = []
    if unit is not None:
        seeds.append(unit)
    elif include_identity:
        seeds.append(Matrix.identity(field, n))
    seeds.extend(gens)
    for s in seeds:
        if span.add(s.vec()):
            frontier.append(s)
    rounds = 0
    while frontier and rounds <= n * n:
        new_frontier = []
        for g in gens:
            for b in frontier:
                prod = g * b
                if span.add(prod.vec()):
                    new_frontier.append(prod)
        frontier = new_frontier
        rounds += 1
    if frontier:
        raise MatrixError("algebra closure failed to stabilize within n^2 rounds")
    basis_sub = span.subspace()
    return [Matrix.from_vec(field, row, n, n) for row in basis_sub.basis]


def assert_multiplication_closed(basis):
    """Check that products of basis elements stay in the span."""
    if not basis:
        return
    field = basis[0].field
    n = basis[0].rows
    span = SpanBuilder(field, n * n)
    for b in basis:
        span.add(b.vec())
    for x, y in _cartesian(basis, repeat=2):
        if not span.contains((x * y).vec()):
            raise MatrixError("algebra basis is not multiplication-closed")


def intertwiner_space(a: Matrix, astar: Matrix, b: Matrix, bstar: Matrix) -> Subspace:
    """All g with g·a = b·g and g·astar = bstar·g, as a subspace of K^(n^2).

    The constraint matrix is the stacked Sylvester-style system; the result
    is the canonical (rref) basis of its kernel.  Basis vectors devectorize
    to n x n matrices via Matrix.from_vec.
    """
    mats = (a, astar, b, bstar)
    field = a.field
    n = a.rows
    for m in mats:
        if m.field != field:
            raise FieldError("mixed fields in intertwiner computation")
        if not m.is_square() or m.rows != n:
            raise MatrixError("intertwiner computation needs same-size square matrices")
    zero = field.zero
    rows = []
    for lhs, rhs in ((a, b), (astar, bstar)):
        for i in range(n):
            for j in range(n):
                # coefficient of g_kl in (g·lhs - rhs·g)_{ij}
                row = [zero] * (n * n)
                for l in range(n):
                    row[i * n + l] = row[i * n + l] + lhs.data[l][j]
                for k in range(n):
                    row[k * n + j] = row[k * n + j] - rhs.data[i][k]
                rows.append(row)
    constraint = Matrix(field, rows)
    return kernel(constraint)


def intertwiner_matrices(a: Matrix, astar: Matrix, b: Matrix, bstar: Matrix):
    """The intertwiner space devectorized to a list of basis matrices."""
    space = intertwiner_space(a, astar, b, bstar)
    n = a.rows
    return [Matrix.from_vec(a.field, row, n, n) for row in space.basis]
