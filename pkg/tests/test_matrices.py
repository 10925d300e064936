from fractions import Fraction as F
from itertools import permutations

import pytest

from tdlab.matrices import (
    Matrix,
    MatrixError,
    Subspace,
    algebra_closure,
    assert_multiplication_closed,
    det,
    image,
    intertwiner_matrices,
    intertwiner_space,
    inverse,
    kernel,
    rank,
    rref,
    solve,
    subspace_intersect,
    subspace_sum,
)
from tdlab.rng import SplitMix64
from tdlab.scalars import FieldError, PrimeField, RationalField

QQ = RationalField()


def M(rows, field=QQ):
    return Matrix.from_ints(field, rows)


def _random_matrix(field, rng, r, c):
    return Matrix(field, [[field.from_int(rng.randint(-9, 9)) for _ in range(c)] for _ in range(r)])


def test_trace_identity():
    assert Matrix.identity(QQ, 3).trace() == F(3)


def test_mul_identity():
    a = M([[1, 2], [3, 4]])
    assert a * Matrix.identity(QQ, 2) == a


def test_trace_cyclic_on_random_pairs():
    rng = SplitMix64(11)
    for _ in range(20):
        x = _random_matrix(QQ, rng, 4, 4)
        y = _random_matrix(QQ, rng, 4, 4)
        assert (x * y).trace() == (y * x).trace()


def test_shape_and_field_mismatch():
    with pytest.raises(MatrixError):
        M([[1, 2]]) * M([[1, 2]])
    with pytest.raises(FieldError):
        M([[1]]) + M([[1]], PrimeField(7))


def test_rref_example():
    r, rk, pivots = rref(M([[2, 4], [1, 2]]))
    assert r == M([[1, 2], [0, 0]])
    assert rk == 1 and pivots == [0]


def test_rref_identity_and_idempotence():
    ident = Matrix.identity(QQ, 4)
    r, rk, pivots = rref(ident)
    assert r == ident and rk == 4 and pivots == [0, 1, 2, 3]
    rng = SplitMix64(3)
    for _ in range(10):
        m = _random_matrix(QQ, rng, 4, 5)
        r, _, _ = rref(m)
        assert rref(r)[0] == r


def test_rank_equals_transpose_rank():
    rng = SplitMix64(17)
    for _ in range(15):
        m = _random_matrix(QQ, rng, 5, 3)
        assert rank(m) == rank(m.transpose())


def test_kernel_examples():
    assert kernel(Matrix.zeros(QQ, 2, 2)).is_full()
    assert kernel(Matrix.identity(QQ, 3)).is_zero()
    k = kernel(M([[1, -1], [0, 0]]))
    assert k == Subspace.from_vectors(QQ, 2, [(F(1), F(1))])


def test_kernel_dimension_theorem():
    rng = SplitMix64(23)
    for _ in range(15):
        m = _random_matrix(QQ, rng, 4, 6)
        assert kernel(m).dim + rank(m) == 6
        for row in kernel(m).basis:
            assert all(v == 0 for v in m.apply(row))


def test_subspace_ops():
    e0 = Subspace.from_vectors(QQ, 2, [(F(1), F(0))])
    e1 = Subspace.from_vectors(QQ, 2, [(F(0), F(1))])
    assert subspace_sum(e0, e1).is_full()
    assert subspace_intersect(e0, e1).is_zero()
    assert subspace_intersect(e0, e0) == e0
    with pytest.raises(MatrixError):
        subspace_sum(e0, Subspace.from_vectors(QQ, 3, [(F(1), F(0), F(0))]))


def test_modular_law_on_random_subspaces():
    rng = SplitMix64(29)
    for _ in range(20):
        s = Subspace.from_vectors(QQ, 5, [_random_matrix(QQ, rng, 1, 5).data[0] for _ in range(2)])
        t = Subspace.from_vectors(QQ, 5, [_random_matrix(QQ, rng, 1, 5).data[0] for _ in range(3)])
        total = subspace_sum(s, t)
        meet = subspace_intersect(s, t)
        assert s.dim + t.dim == total.dim + meet.dim
        assert total.contains_subspace(s) and total.contains_subspace(t)
        assert s.contains_subspace(meet) and t.contains_subspace(meet)


def test_solve_and_inverse():
    rng = SplitMix64(31)
    for _ in range(10):
        m = _random_matrix(QQ, rng, 4, 4)
        if det(m) == 0:
            continue
        inv = inverse(m)
        assert m * inv == Matrix.identity(QQ, 4)
        rhs = tuple(F(k + 1) for k in range(4))
        x = solve(m, rhs)
        assert m.apply(x) == rhs
    assert solve(M([[1, 0], [1, 0]]), (F(0), F(1))) is None


def _det_by_permutations(m):
    # independent oracle: Leibniz expansion over all permutations
    n = m.rows
    total = F(0)
    for perm in permutations(range(n)):
        sign = 1
        seen = list(perm)
        for i in range(n):
            for j in range(i + 1, n):
                if seen[i] > seen[j]:
                    sign = -sign
        term = F(1)
        for i in range(n):
            term *= m.data[i][perm[i]]
        total += sign * term
    return total


def test_det_against_permutation_expansion():
    rng = SplitMix64(37)
    for _ in range(15):
        m = _random_matrix(QQ, rng, 3, 3)
        assert det(m) == _det_by_permutations(m)


def test_algebra_closure_identity_only():
    basis = algebra_closure([Matrix.identity(QQ, 3)])
    assert len(basis) == 1
    assert basis[0] == Matrix.identity(QQ, 3)


def test_algebra_closure_diagonal():
    basis = algebra_closure([M([[1, 0], [0, 0]])])
    assert len(basis) == 2
    assert_multiplication_closed(basis)


def test_x1_closure_dimension_four():
    a = M([[1, 0], [1, 0]])
    astar = M([[1, 1], [0, 0]])
    # independent oracle: I, A, A*, AA* vectorize to rows whose integer
    # determinant is -2, so they are linearly independent
    rows = [
        [1, 0, 0, 1],  # I
        [1, 0, 1, 0],  # A
        [1, 1, 0, 0],  # A*
        [1, 1, 1, 1],  # A*A applied after A: (AA*)
    ]
    oracle = _det_by_permutations(Matrix.from_ints(QQ, rows))
    assert oracle == F(-2)
    basis = algebra_closure([a, astar])
    assert len(basis) == 4


def test_closure_is_reproducible():
    a = M([[1, 0], [1, 0]])
    astar = M([[1, 1], [0, 0]])
    b1 = algebra_closure([a, astar])
    b2 = algebra_closure([a, astar])
    assert b1 == b2


def test_intertwiner_contains_identity():
    a = M([[1, 0], [1, 0]])
    astar = M([[1, 1], [0, 0]])
    mats = intertwiner_matrices(a, astar, a, astar)
    span = Subspace.from_vectors(QQ, 4, [m.vec() for m in mats])
    assert span.contains(Matrix.identity(QQ, 2).vec())


def test_intertwiner_finds_conjugator():
    a = M([[1, 0], [1, 0]])
    astar = M([[1, 1], [0, 0]])
    p = M([[1, 1], [0, 1]])
    pinv = inverse(p)
    b, bstar = p * a * pinv, p * astar * pinv
    # direct substitution: p intertwines the two pairs
    assert p * a == b * p and p * astar == bstar * p
    space = intertwiner_space(a, astar, b, bstar)
    assert space.dim >= 1
    assert space.contains(p.vec())
    for row in space.basis:
        g = Matrix.from_vec(QQ, row, 2, 2)
        assert g * a == b * g and g * astar == bstar * g


def test_image_matches_column_space():
    m = M([[1, 2], [2, 4]])
    assert image(m) == Subspace.from_vectors(QQ, 2, [(F(1), F(2))])


def test_vec_round_trip():
    m = M([[1, 2, 3], [4, 5, 6]])
    assert Matrix.from_vec(QQ, m.vec(), 2, 3) == m
