"""Matrix kernels: exact ranks, Smith normal forms, polynomial kernels."""

import random
from fractions import Fraction

import numpy as np

from twisthom.matrices import (Matrix, det_int, det_poly, fast_rank,
                               int_diagonal, integer_kernel_basis,
                               kernel_basis_poly, matrix_rank, poly_diagonal,
                               smith_normal_form_int, smith_normal_form_poly,
                               solve_in_column_span)
from twisthom.numbers import Cyclo, Laurent, euler_phi


def cyclo_to_complex(x: Cyclo) -> complex:
    z = np.exp(2j * np.pi / x.conductor)
    return sum(float(c) * z ** i for i, c in enumerate(x.coeffs))


def float_rank_cyclo(m: Matrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    a = np.array([[cyclo_to_complex(x) for x in row] for row in m.entries])
    return int(np.linalg.matrix_rank(a, tol=1e-8))


def test_rank_degenerate():
    assert matrix_rank(Matrix(0, 0, [])) == 0
    assert matrix_rank(Matrix(0, 3, [])) == 0
    assert matrix_rank(Matrix(3, 0, [[], [], []])) == 0
    assert fast_rank(Matrix(0, 0, [])) == 0


def test_rank_identity():
    assert matrix_rank(Matrix.identity(2)) == 2


def test_rank_zeta3_example():
    z3 = Cyclo.root_of_unity(3)
    m = Matrix(2, 2, [[z3, Cyclo.one()], [Cyclo.one(), z3 * z3]])
    assert matrix_rank(m) == 1
    assert fast_rank(m) == 1
    assert float_rank_cyclo(m) == 1


def test_rank_cyclo_random_vs_float_oracle():
    rng = random.Random(3)
    for _ in range(100):
        n = rng.randint(1, 12)
        phi = euler_phi(n)
        rows = rng.randint(1, 6)
        cols = rng.randint(1, 6)
        m = Matrix(rows, cols,
                   [[Cyclo(n, [rng.randint(-2, 2) for _ in range(phi)])
                     for _ in range(cols)] for _ in range(rows)])
        exact = matrix_rank(m)
        assert exact == fast_rank(m)
        assert exact == float_rank_cyclo(m)


def test_snf_int_examples():
    u, d, v = smith_normal_form_int(Matrix(2, 2, [[2, 0], [0, 3]]))
    assert int_diagonal(d) == [1, 6]
    u, d, v = smith_normal_form_int(Matrix(1, 1, [[0]]))
    assert int_diagonal(d) == [0]
    u, d, v = smith_normal_form_int(Matrix(2, 2, [[1, 2], [3, 4]]))
    assert int_diagonal(d) == [1, 2]


def _check_int_snf(m: Matrix):
    u, d, v = smith_normal_form_int(m)
    assert (u @ m @ v) == d
    assert abs(det_int(u)) == 1
    assert abs(det_int(v)) == 1
    diag = int_diagonal(d)
    assert all(x >= 0 for x in diag)
    nonzero = [x for x in diag if x]
    assert diag[:len(nonzero)] == nonzero  # zeros trail
    for i in range(len(nonzero) - 1):
        assert nonzero[i + 1] % nonzero[i] == 0
    for i in range(d.rows):
        for j in range(d.cols):
            if i != j:
                assert d[i, j] == 0
    a = np.array([[int(x) for x in row] for row in m.entries], dtype=float)
    assert len(nonzero) == int(np.linalg.matrix_rank(a, tol=1e-8)) if m.rows and m.cols else True


def test_snf_int_random_500():
    rng = random.Random(17)
    for _ in range(500):
        rows = rng.randint(1, 6)
        cols = rng.randint(1, 6)
        m = Matrix(rows, cols, [[rng.randint(-5, 5) for _ in range(cols)]
                                for _ in range(rows)])
        _check_int_snf(m)


def test_snf_poly_examples():
    t = Laurent.t_power(1)
    one = Laurent.const(1)
    m = Matrix(2, 2, [[t - 1, Laurent()], [Laurent(), t - 1]])
    _, d, _ = smith_normal_form_poly(m)
    assert poly_diagonal(d) == [t - 1, t - 1]
    _, d, _ = smith_normal_form_poly(Matrix(1, 1, [[Laurent({1: 2})]]))
    assert poly_diagonal(d) == [one]
    m = Matrix(2, 2, [[t - 1, one], [Laurent(), t - 1]])
    u, d, v = smith_normal_form_poly(m)
    assert poly_diagonal(d) == [one, (t - 1) * (t - 1)]
    assert (u @ m @ v) == d


def _random_laurent(rng, max_degree=3):
    return Laurent({rng.randint(-1, max_degree): rng.randint(-3, 3)
                    for _ in range(rng.randint(0, 3))})


def _check_poly_snf(m: Matrix):
    u, d, v = smith_normal_form_poly(m)
    assert (u @ m @ v) == d
    assert det_poly(u).is_unit()
    assert det_poly(v).is_unit()
    diag = poly_diagonal(d)
    for x in diag:
        if x:
            assert x.valuation() == 0 and x.leading_coeff() == 1
    nonzero = [x for x in diag if x]
    assert [bool(x) for x in diag] == [True] * len(nonzero) + [False] * (len(diag) - len(nonzero))
    for i in range(len(nonzero) - 1):
        assert nonzero[i].divides(nonzero[i + 1])


def test_snf_poly_random_200():
    rng = random.Random(23)
    for _ in range(200):
        rows = rng.randint(1, 4)
        cols = rng.randint(1, 4)
        m = Matrix(rows, cols, [[_random_laurent(rng) for _ in range(cols)]
                                for _ in range(rows)])
        _check_poly_snf(m)


def test_kernel_basis_examples():
    t = Laurent.t_power(1)
    one = Laurent.const(1)
    k = kernel_basis_poly(Matrix(2, 2, [[one, Laurent()], [Laurent(), one]]))
    assert k.cols == 0
    k = kernel_basis_poly(Matrix(1, 3, [[Laurent()] * 3]))
    assert k.cols == 3
    k = kernel_basis_poly(Matrix(1, 2, [[t - 1, one - t]]))
    assert k.cols == 1
    assert k[0, 0] == one and k[1, 0] == one


def test_kernel_basis_random():
    rng = random.Random(29)
    for _ in range(100):
        rows = rng.randint(1, 3)
        cols = rng.randint(1, 4)
        m = Matrix(rows, cols, [[_random_laurent(rng, 2) for _ in range(cols)]
                                for _ in range(rows)])
        k = kernel_basis_poly(m)
        if k.cols:
            assert (m @ k).is_zero()
        # rank over the fraction field + kernel columns = total columns
        assert k.cols == cols - matrix_rank(m)


def test_solve_in_column_span():
    t = Laurent.t_power(1)
    one = Laurent.const(1)
    k = Matrix(3, 2, [[one, Laurent()], [t, one], [Laurent(), t - 1]])
    x_true = Matrix(2, 1, [[t + 1], [t]])
    b = k @ x_true
    x = solve_in_column_span(k, b)
    assert x == x_true


def test_integer_kernel_basis():
    m = Matrix(1, 3, [[2, -1, 0]])
    basis = integer_kernel_basis(m)
    assert len(basis) == 2
    for v in basis:
        assert 2 * v[0] - v[1] == 0


def test_certified_rank_on_engineered_low_rank():
    """Big-entry rank-deficient products force the multi-prime certificates."""
    rng = random.Random(0)
    from twisthom.matrices import int_matrix_rank
    for _ in range(30):
        n, r = rng.randint(2, 7), rng.randint(1, 3)
        b = [[rng.randint(-10 ** 9, 10 ** 9) for _ in range(r)] for _ in range(n)]
        c = [[rng.randint(-10 ** 9, 10 ** 9) for _ in range(n)] for _ in range(r)]
        a = [[sum(b[i][k] * c[k][j] for k in range(r)) for j in range(n)]
             for i in range(n)]
        got = int_matrix_rank(a)
        assert got == matrix_rank(Matrix(n, n, a))
        assert got <= r
    for _ in range(20):
        cond = rng.choice([3, 4, 5, 7, 8, 12])
        phi = euler_phi(cond)
        n, r = rng.randint(2, 5), rng.randint(1, 2)

        def rc():
            return Cyclo(cond, [rng.randint(-4, 4) for _ in range(phi)])

        b = [[rc() for _ in range(r)] for _ in range(n)]
        c = [[rc() for _ in range(n)] for _ in range(r)]
        a = [[sum((b[i][k] * c[k][j] for k in range(r)), Cyclo.zero())
              for j in range(n)] for i in range(n)]
        m = Matrix(n, n, a)
        assert fast_rank(m) == matrix_rank(m) <= r


def test_fast_rank_matches_spec_rank_random():
    rng = random.Random(31)
    for _ in range(100):
        rows = rng.randint(1, 5)
        cols = rng.randint(1, 5)
        m = Matrix(rows, cols, [[Fraction(rng.randint(-9, 9), rng.randint(1, 4))
                                 for _ in range(cols)] for _ in range(rows)])
        assert fast_rank(m) == matrix_rank(m)
