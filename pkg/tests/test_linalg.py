from __future__ import annotations

import random
from fractions import Fraction

import pytest

from koszul import _kernels
from koszul.linalg import GF, Matrix, QQ, Subspace, matrix_kernels, solve, subspace_algebra

try:
    from koszul import _ckernels
except ImportError:
    _ckernels = None

P_CHECK = 1000003


def test_matrix_kernels_identity():
    rank, ker, img = matrix_kernels(Matrix.identity(QQ, 3))
    assert rank == 3 and ker.nrows == 0 and img.nrows == 3


def test_matrix_kernels_zero():
    rank, ker, img = matrix_kernels(Matrix.zeros(QQ, 2, 5))
    assert rank == 0 and ker.nrows == 5 and img.nrows == 0


def test_matrix_kernels_rank_one():
    rank, ker, _ = matrix_kernels(Matrix.from_rows(QQ, [[1, 2], [2, 4]]))
    assert rank == 1 and ker.nrows == 1
    # kernel is the line spanned by (2, -1)
    v = ker.rows[0]
    assert v[0] * Fraction(-1) == v[1] * Fraction(2)


def test_subspace_same_space_canonical():
    u1 = Subspace.from_vectors(QQ, 3, [[1, 1, 0], [0, 1, 1]])
    u2 = Subspace.from_vectors(QQ, 3, [[1, 2, 1], [2, 3, 1], [1, 0, -1]])
    assert u1 == u2
    assert u1.basis.rows == u2.basis.rows


def test_subspace_trivial_cases():
    u = Subspace.from_vectors(QQ, 2, [[1, 0]])
    v = Subspace.from_vectors(QQ, 2, [[0, 1]])
    s, i, perp, ext = subspace_algebra(u, v)
    assert s.dim == 2 and i.dim == 0
    assert perp == v  # annihilator of the x-axis is the y-functional line
    same_sum, same_int, _, _ = subspace_algebra(u, u)
    assert same_sum == u and same_int == u


def _stacked_rank_oracle(rows, ncols):
    """Independent elimination over Fraction, no canonical form."""
    mat = [[Fraction(v) for v in r] for r in rows]
    rank = 0
    for c in range(ncols):
        piv = None
        for i in range(rank, len(mat)):
            if mat[i][c]:
                piv = i
                break
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        prow = mat[rank]
        for i in range(len(mat)):
            if i != rank and mat[i][c]:
                f = mat[i][c] / prow[c]
                mat[i] = [a - f * b for a, b in zip(mat[i], prow)]
        rank += 1
    return rank


@pytest.mark.parametrize("seed", range(12))
def test_dimension_formula_against_stacked_oracle(seed):
    rng = random.Random(seed)
    urows = [[rng.randint(-3, 3) for _ in range(7)] for _ in range(3)]
    vrows = [[rng.randint(-3, 3) for _ in range(7)] for _ in range(4)]
    u = Subspace.from_vectors(QQ, 7, urows)
    v = Subspace.from_vectors(QQ, 7, vrows)
    s, i, _, ext = subspace_algebra(u, v)
    assert s.dim == _stacked_rank_oracle(urows + vrows, 7)
    assert s.dim + i.dim == u.dim + v.dim
    assert ext.nrows == s.dim - u.dim


@pytest.mark.parametrize("seed", range(8))
def test_double_perp_and_perp_laws(seed):
    rng = random.Random(100 + seed)
    u = Subspace.from_vectors(QQ, 6, [[rng.randint(-2, 2) for _ in range(6)] for _ in range(2)])
    v = Subspace.from_vectors(QQ, 6, [[rng.randint(-2, 2) for _ in range(6)] for _ in range(3)])
    assert u.perp().perp() == u
    assert u.add(v).perp() == u.perp().intersect(v.perp())
    assert u.intersect(v).perp() == u.perp().add(v.perp())


@pytest.mark.parametrize("seed", range(8))
def test_rationals_agree_with_prime_field(seed):
    rng = random.Random(200 + seed)
    rows = [[rng.randint(-5, 5) for _ in range(6)] for _ in range(4)]
    fq = Matrix.from_rows(QQ, rows)
    fp = Matrix.from_rows(GF(P_CHECK), rows)
    rq, pq = fq.rref()
    rp, pp = fp.rref()
    assert pq == pp
    gf = GF(P_CHECK)
    assert [[gf.of(v) for v in row] for row in rq.rows] == rp.rows
    assert fq.kernel_basis().nrows == fp.kernel_basis().nrows


@pytest.mark.skipif(_ckernels is None, reason="compiled kernels unavailable")
@pytest.mark.parametrize("seed", range(6))
def test_backends_bit_identical(seed):
    rng = random.Random(300 + seed)
    m, n = rng.randint(0, 7), rng.randint(0, 7)
    rows = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)]
    assert _kernels.rref_int([list(r) for r in rows], n) == \
        _ckernels.rref_int([list(r) for r in rows], n)
    for p in (2, 3, P_CHECK):
        rowsp = [[v % p for v in r] for r in rows]
        assert _kernels.rref_fp([list(r) for r in rowsp], n, p) == \
            _ckernels.rref_fp([list(r) for r in rowsp], n, p)


def test_solve():
    a = Matrix.from_rows(QQ, [[1, 2], [3, 4]])
    x = solve(a, [5, 6])
    assert a.apply(x) == [Fraction(5), Fraction(6)]
    inconsistent = Matrix.from_rows(QQ, [[1, 1], [2, 2]])
    assert solve(inconsistent, [1, 3]) is None


def test_quotient_extension_requires_containment():
    u = Subspace.from_vectors(QQ, 3, [[1, 0, 0]])
    w = Subspace.from_vectors(QQ, 3, [[0, 1, 0]])
    with pytest.raises(ValueError):
        w.quotient_extension(u)
