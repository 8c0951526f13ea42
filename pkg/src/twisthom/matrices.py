"""Dense exact matrices and the normal-form kernels built on them.

A ``Matrix`` stores one scalar domain per instance (Fraction/int, Cyclo or
Laurent).  Everything here is exact; the modular rank helpers certify their
result against a per-matrix Hadamard bound instead of trusting a single prime.
Degenerate shapes (0 rows or columns) are legal everywhere and have rank 0.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .numbers import Cyclo, Laurent, as_fraction, euler_phi

_INT_TYPES = (int, np.integer)


class Matrix:
    """Immutable dense matrix over a single exact scalar domain."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries):
        entries = [list(r) for r in entries]
        if len(entries) != rows or any(len(r) != cols for r in entries):
            raise ValueError(f"bad shape for {rows}x{cols} matrix")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, *a):
        raise AttributeError("Matrix is immutable")

    @staticmethod
    def zero(rows: int, cols: int, zero_scalar=0) -> "Matrix":
        return Matrix(rows, cols, [[zero_scalar] * cols for _ in range(rows)])

    @staticmethod
    def identity(n: int, one_scalar=1, zero_scalar=0) -> "Matrix":
        return Matrix(n, n, [[one_scalar if i == j else zero_scalar for j in range(n)]
                             for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols):
            return False
        return all(self.entries[i][j] == other.entries[i][j]
                   for i in range(self.rows) for j in range(self.cols))

    def __hash__(self):
        return hash((self.rows, self.cols))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = None
                for k in range(self.cols):
                    term = self.entries[i][k] * other.entries[k][j]
                    acc = term if acc is None else acc + term
                row.append(0 if acc is None else acc)
            out.append(row)
        return Matrix(self.rows, other.cols, out)

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows,
                      [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def is_zero(self) -> bool:
        return all(not e for row in self.entries for e in row)

    def column(self, j: int) -> list:
        return [self.entries[i][j] for i in range(self.rows)]

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise ValueError("row mismatch in hstack")
        return Matrix(self.rows, self.cols + other.cols,
                      [self.entries[i] + other.entries[i] for i in range(self.rows)])

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols}, {self.entries!r})"


# ---------------------------------------------------------------------------
# exact rank: fraction-free elimination, first-nonzero pivoting
# ---------------------------------------------------------------------------

def _exact_div(a, b):
    if isinstance(a, _INT_TYPES) and isinstance(b, _INT_TYPES):
        q, r = divmod(a, b)
        assert r == 0, "inexact integer division in fraction-free elimination"
        return q
    if isinstance(a, Cyclo) or isinstance(b, Cyclo):
        bc = b if isinstance(b, Cyclo) else Cyclo.from_rational(as_fraction(b))
        return a * bc.invert()
    if isinstance(a, Laurent) or isinstance(b, Laurent):
        al = a if isinstance(a, Laurent) else Laurent.const(a)
        bl = b if isinstance(b, Laurent) else Laurent.const(b)
        return al.exact_div(bl)
    return as_fraction(a) / as_fraction(b)


def matrix_rank(m: Matrix) -> int:
    """Exact rank by fraction-free (Bareiss) elimination.

    Pivots are chosen as the first nonzero entry of the active submatrix,
    scanning rows then columns, so results are reproducible bit for bit.
    Works over Fraction/int, Cyclo and Laurent entries.
    """
    a = [row[:] for row in m.entries]
    nrows, ncols = m.rows, m.cols
    rank = 0
    prev = 1
    r = 0
    while r < nrows and rank < ncols:
        pivot = None
        for i in range(r, nrows):
            for j in range(rank, ncols):
                if a[i][j]:
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            break
        pi, pj = pivot
        if pi != r:
            a[r], a[pi] = a[pi], a[r]
        if pj != rank:
            for row in a:
                row[rank], row[pj] = row[pj], row[rank]
        p = a[r][rank]
        for i in range(r + 1, nrows):
            head = a[i][rank]
            for j in range(rank + 1, ncols):
                a[i][j] = _exact_div(p * a[i][j] - head * a[r][j], prev)
            a[i][rank] = 0 if not isinstance(p, Laurent) else Laurent()
        prev = p
        rank += 1
        r += 1
    return rank


# ---------------------------------------------------------------------------
# fast certified rank over Q and Q(zeta_n)
# ---------------------------------------------------------------------------

# Primes just below 2**31; products of residues stay inside int64.
_PRIMES = (2147483647, 2147483629, 2147483587, 2147483579, 2147483563,
           2147483549, 2147483543, 2147483497, 2147483489, 2147483477,
           2147483423, 2147483399, 2147483353, 2147483323, 2147483269,
           2147483249, 2147483237, 2147483179, 2147483171, 2147483137)


def _rank_mod_p(a: np.ndarray, p: int) -> int:
    m = (a % p).astype(np.int64)
    rows, cols = m.shape
    rank = 0
    for j in range(cols):
        if rank == rows:
            break
        nz = np.nonzero(m[rank:, j])[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            m[[rank, piv]] = m[[piv, rank]]
        inv = pow(int(m[rank, j]), p - 2, p)
        m[rank] = (m[rank] * inv) % p
        below = m[rank + 1:, j]
        mask = below != 0
        if mask.any():
            m[rank + 1:][mask] = (m[rank + 1:][mask] - np.outer(below[mask], m[rank])) % p
        rank += 1
    return rank


def _hadamard_bits(a) -> float:
    """log2 of the Hadamard bound on the absolute value of any minor."""
    bits = 0.0
    for row in a:
        s = 0
        for x in row:
            s += int(x) * int(x)
        if s:
            bits += 0.5 * math.log2(s)
    return bits


def int_matrix_rank(rows: list[list[int]]) -> int:
    """Exact rank of an integer matrix via enough independent primes.

    A nonzero r x r minor is bounded by the Hadamard bound H, so it cannot be
    divisible by more than log_p(H) of the 31-bit primes used here; taking the
    max of the modular ranks over one more prime than that is therefore exact.
    """
    if not rows or not rows[0]:
        return 0
    bits = _hadamard_bits(rows)
    need = int(bits // 30) + 1  # 30 bits per 31-bit prime leaves margin
    if need > len(_PRIMES):
        return matrix_rank(Matrix(len(rows), len(rows[0]), rows))
    big = max(abs(int(x)) for row in rows for x in row)
    if big >= 2 ** 62:
        return matrix_rank(Matrix(len(rows), len(rows[0]), rows))
    a = np.array(rows, dtype=np.int64)
    return max(_rank_mod_p(a, p) for p in _PRIMES[:need])


def _fraction_rows_to_int(rows) -> list[list[int]] | None:
    out = []
    for row in rows:
        denom = 1
        for x in row:
            if isinstance(x, Fraction):
                denom = denom * x.denominator // math.gcd(denom, x.denominator)
        if denom.bit_length() > 256:
            return None
        out.append([int(x * denom) if isinstance(x, Fraction) else int(x) * denom for x in row])
    return out


def _cyclo_expand_rows(m: Matrix) -> tuple[list[list[Fraction]], int]:
    """Replace each Q(zeta_n) entry by its phi x phi multiplication matrix.

    The expansion is Q-linear and multiplicative, so the rational rank of the
    expanded matrix is phi(n) times the cyclotomic rank.
    """
    conductor = 1
    for row in m.entries:
        for x in row:
            if isinstance(x, Cyclo):
                conductor = conductor * x.conductor // math.gcd(conductor, x.conductor)
    phi = euler_phi(conductor)
    zero = [Fraction(0)] * phi
    big = [[None] * (m.cols * phi) for _ in range(m.rows * phi)]
    powers = [Cyclo.root_of_unity(conductor, k) for k in range(phi)] if conductor > 1 else None
    for i in range(m.rows):
        for j in range(m.cols):
            x = m.entries[i][j]
            if not isinstance(x, Cyclo):
                x = Cyclo.from_rational(as_fraction(x))
            if not x:
                block = [zero] * phi
            elif conductor == 1:
                block = [[x.coeffs[0]]]
            else:
                xe = x.embed(conductor)
                block = []
                for k in range(phi):
                    col = (xe * powers[k]).coeffs
                    block.append(col)
                # block[k] is the coefficient vector of x*z^k: use as columns.
                block = [[block[k][r] for k in range(phi)] for r in range(phi)]
            for r in range(phi):
                for k in range(phi):
                    big[i * phi + r][j * phi + k] = block[r][k]
    return big, phi


def fast_rank(m: Matrix) -> int:
    """Exact rank with modular fast paths; falls back to matrix_rank."""
    if m.rows == 0 or m.cols == 0:
        return 0
    sample = m.entries[0][0]
    if isinstance(sample, Laurent):
        return matrix_rank(m)
    if isinstance(sample, Cyclo):
        big, phi = _cyclo_expand_rows(m)
        ints = _fraction_rows_to_int(big)
        if ints is None:
            return matrix_rank(m)
        r = int_matrix_rank(ints)
        assert r % phi == 0
        return r // phi
    ints = _fraction_rows_to_int(m.entries)
    if ints is None:
        return matrix_rank(m)
    return int_matrix_rank(ints)


def ndarray_rank(a: np.ndarray) -> int:
    """Exact rational rank of an integer ndarray (certified modular ranks)."""
    if a.size == 0:
        return 0
    big = int(np.abs(a).max())
    if big >= 2 ** 62:
        return int_matrix_rank(a.tolist())
    sq = (a.astype(np.float64) ** 2).sum(axis=1)
    bits = float(0.5 * np.log2(sq[sq > 0]).sum()) if (sq > 0).any() else 0.0
    need = int(bits // 30) + 1
    if need > len(_PRIMES):
        return int_matrix_rank(a.tolist())
    return max(_rank_mod_p(a, p) for p in _PRIMES[:need])


# ---------------------------------------------------------------------------
# Smith normal form over Z
# ---------------------------------------------------------------------------

def smith_normal_form_int(m: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """U*A*V = D with U, V of determinant +-1 and D = diag(d_i), d_i >= 0, d_i | d_{i+1}.

    Pivot choice: smallest nonzero absolute value, ties broken by (row, col).
    """
    a = [[int(x) for x in row] for row in m.entries]
    nr, nc = m.rows, m.cols
    u = [[int(i == j) for j in range(nr)] for i in range(nr)]
    v = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def row_op(i1, i2, q):  # row i2 -= q*row i1
        for j in range(nc):
            a[i2][j] -= q * a[i1][j]
        for j in range(nr):
            u[i2][j] -= q * u[i1][j]

    def col_op(j1, j2, q):  # col j2 -= q*col j1
        for i in range(nr):
            a[i][j2] -= q * a[i][j1]
        for i in range(nc):
            v[i][j2] -= q * v[i][j1]

    def swap_rows(i1, i2):
        a[i1], a[i2] = a[i2], a[i1]
        u[i1], u[i2] = u[i2], u[i1]

    def swap_cols(j1, j2):
        for row in a:
            row[j1], row[j2] = row[j2], row[j1]
        for row in v:
            row[j1], row[j2] = row[j2], row[j1]

    k = 0
    while True:
        pivot = None
        best = None
        for i in range(k, nr):
            for j in range(k, nc):
                if a[i][j] and (best is None or abs(a[i][j]) < best):
                    best = abs(a[i][j])
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(k, pivot[0])
        if pivot[1] != k:
            swap_cols(k, pivot[1])
        while True:
            # clear column k below the pivot
            done = True
            for i in range(k + 1, nr):
                if a[i][k]:
                    q = a[i][k] // a[k][k]
                    row_op(k, i, q)
                    if a[i][k]:  # remainder smaller than pivot: swap up, retry
                        swap_rows(k, i)
                        done = False
            for j in range(k + 1, nc):
                if a[k][j]:
                    q = a[k][j] // a[k][k]
                    col_op(k, j, q)
                    if a[k][j]:
                        swap_cols(k, j)
                        done = False
            if done and all(a[i][k] == 0 for i in range(k + 1, nr)) \
                    and all(a[k][j] == 0 for j in range(k + 1, nc)):
                break
        # divisibility: pivot must divide the remaining submatrix
        offender = None
        for i in range(k + 1, nr):
            for j in range(k + 1, nc):
                if a[i][j] % a[k][k]:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            row_op(offender, k, -1)  # add offending row to pivot row, redo step k
            continue
        k += 1
    # sign normalization
    for i in range(min(nr, nc)):
        if i < nr and i < nc and a[i][i] < 0:
            for j in range(nc):
                a[i][j] = -a[i][j]
            for j in range(nr):
                u[i][j] = -u[i][j]
    return (Matrix(nr, nr, u), Matrix(nr, nc, a), Matrix(nc, nc, v))


def int_diagonal(d: Matrix) -> list[int]:
    return [int(d.entries[i][i]) for i in range(min(d.rows, d.cols))]


def integer_kernel_basis(m: Matrix) -> list[list[int]]:
    """Basis of the integer kernel: columns of V past the SNF rank."""
    _, d, v = smith_normal_form_int(m)
    rank = sum(1 for x in int_diagonal(d) if x)
    return [v.column(j) for j in range(rank, m.cols)]


def det_int(m: Matrix) -> int:
    """Exact determinant of a square integer matrix (Bareiss)."""
    n = m.rows
    assert n == m.cols
    if n == 0:
        return 1
    a = [[int(x) for x in row] for row in m.entries]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith normal form and kernels over Q[t, t^-1]
# ---------------------------------------------------------------------------

def _as_laurent(x) -> Laurent:
    if isinstance(x, Laurent):
        return x
    return Laurent.const(x)


def _content_unit(vals) -> Laurent | None:
    """Unit u = c * t^k making the entries coprime-integer with valuation 0.

    Multiplying a row or column (and its transform row) by such a unit keeps
    U, V unimodular while stopping the coefficient blowup of rational
    polynomial elimination (the primitive-remainder trick).
    """
    num_gcd = 0
    den_lcm = 1
    min_val = None
    for x in vals:
        if not x:
            continue
        v = x.valuation()
        min_val = v if min_val is None else min(min_val, v)
        for c in x.terms.values():
            num_gcd = math.gcd(num_gcd, abs(c.numerator))
            den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
    if min_val is None:
        return None
    factor = Fraction(den_lcm, num_gcd)
    if factor == 1 and min_val == 0:
        return None
    return Laurent.t_power(-min_val, factor)


def _laurent_matrix(m: Matrix) -> list[list[Laurent]]:
    return [[_as_laurent(x) for x in row] for row in m.entries]


def smith_normal_form_poly(m: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """U*A*V = D over Q[t, t^-1]: U, V unimodular (unit determinant c*t^k),
    D diagonal with entries monic with nonzero constant term (or zero) and
    d_i | d_{i+1}.

    Rows are first scaled by t^-v to land in Q[t]; pivoting picks the entry of
    smallest polynomial degree (ties by row, then column).
    """
    a = _laurent_matrix(m)
    nr, nc = m.rows, m.cols
    one = Laurent.const(1)
    u = [[one if i == j else Laurent() for j in range(nr)] for i in range(nr)]
    v = [[one if i == j else Laurent() for j in range(nc)] for i in range(nc)]

    def scale_row(i, unit):
        a[i] = [unit * x for x in a[i]]
        u[i] = [unit * x for x in u[i]]

    def scale_col(j, unit):
        for row in a:
            row[j] = unit * row[j]
        for row in v:
            row[j] = unit * row[j]

    def row_op(i1, i2, q):  # row i2 -= q*row i1, then renormalize content
        a[i2] = [x - q * y for x, y in zip(a[i2], a[i1])]
        u[i2] = [x - q * y for x, y in zip(u[i2], u[i1])]
        unit = _content_unit(a[i2])
        if unit is not None:
            scale_row(i2, unit)
        elif not any(a[i2]):
            unit = _content_unit(u[i2])  # zero A-row: tame U alone, still valid
            if unit is not None:
                u[i2] = [unit * x for x in u[i2]]

    def col_op(j1, j2, q):  # col j2 -= q*col j1, then renormalize content
        for row in a:
            row[j2] = row[j2] - q * row[j1]
        for row in v:
            row[j2] = row[j2] - q * row[j1]
        unit = _content_unit([row[j2] for row in a])
        if unit is not None:
            scale_col(j2, unit)
        elif not any(row[j2] for row in a):
            unit = _content_unit([row[j2] for row in v])
            if unit is not None:
                for row in v:
                    row[j2] = unit * row[j2]

    def swap_rows(i1, i2):
        if i1 != i2:
            a[i1], a[i2] = a[i2], a[i1]
            u[i1], u[i2] = u[i2], u[i1]

    def swap_cols(j1, j2):
        if j1 != j2:
            for row in a:
                row[j1], row[j2] = row[j2], row[j1]
            for row in v:
                row[j1], row[j2] = row[j2], row[j1]

    # clear t-powers and content rowwise
    for i in range(nr):
        unit = _content_unit(a[i])
        if unit is not None:
            scale_row(i, unit)

    def poly_deg(x: Laurent) -> int:
        return x.degree() - x.valuation()

    k = 0
    while True:
        pivot = None
        best = None
        for i in range(k, nr):
            for j in range(k, nc):
                if a[i][j]:
                    d = poly_deg(a[i][j])
                    if best is None or d < best:
                        best = d
                        pivot = (i, j)
        if pivot is None:
            break
        swap_rows(k, pivot[0])
        swap_cols(k, pivot[1])
        # Euclid chip-away on the pivot cross: always keep the minimal-degree
        # cross entry at the pivot and reduce one entry per step, so cross
        # degrees strictly decrease (a full clearing pass would ping-pong
        # high-degree entries through the cross and blow up degrees).
        while True:
            min_deg = poly_deg(a[k][k])
            where = None
            for i in range(k + 1, nr):
                if a[i][k]:
                    d = poly_deg(a[i][k])
                    if d < min_deg:
                        min_deg, where = d, ("row", i)
            for j in range(k + 1, nc):
                if a[k][j]:
                    d = poly_deg(a[k][j])
                    if d < min_deg:
                        min_deg, where = d, ("col", j)
            if where is not None:
                if where[0] == "row":
                    swap_rows(k, where[1])
                else:
                    swap_cols(k, where[1])
            target = None
            for i in range(k + 1, nr):
                if a[i][k]:
                    target = ("row", i)
                    break
            if target is None:
                for j in range(k + 1, nc):
                    if a[k][j]:
                        target = ("col", j)
                        break
            if target is None:
                break
            # pseudo-division: pre-scale so the quotient is integral, keeping
            # coefficient growth polynomial (primitive-remainder trick)
            lead = a[k][k].leading_coeff()
            if target[0] == "row":
                i = target[1]
                shift = poly_deg(a[i][k]) - poly_deg(a[k][k])
                if shift >= 0 and lead != 1:
                    scale_row(i, Laurent.const(lead ** (shift + 1)))
                q, _ = a[i][k].divmod(a[k][k])
                row_op(k, i, q)
            else:
                j = target[1]
                shift = poly_deg(a[k][j]) - poly_deg(a[k][k])
                if shift >= 0 and lead != 1:
                    scale_col(j, Laurent.const(lead ** (shift + 1)))
                q, _ = a[k][j].divmod(a[k][k])
                col_op(k, j, q)
        offender = None
        for i in range(k + 1, nr):
            for j in range(k + 1, nc):
                if not a[k][k].divides(a[i][j]):
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            row_op(offender, k, Laurent.const(-1))
            continue
        k += 1
    # normalize diagonal entries to monic with nonzero constant term
    for i in range(min(nr, nc)):
        d = a[i][i]
        if d:
            unit = Laurent.t_power(-d.valuation(), 1 / d.leading_coeff())
            if not unit.is_one():
                scale_row(i, unit)
    return (Matrix(nr, nr, u), Matrix(nr, nc, a), Matrix(nc, nc, v))


def poly_diagonal(d: Matrix) -> list[Laurent]:
    return [_as_laurent(d.entries[i][i]) for i in range(min(d.rows, d.cols))]


def det_poly(m: Matrix) -> Laurent:
    """Determinant of a square Laurent matrix by cofactor/Bareiss-free expansion.

    Only used on the small unimodular witnesses from SNF, so the naive
    expansion is fine up to ~6x6.
    """
    n = m.rows
    assert n == m.cols
    if n == 0:
        return Laurent.const(1)
    a = _laurent_matrix(m)

    def cof(rows, cols):
        if len(rows) == 1:
            return a[rows[0]][cols[0]]
        total = Laurent()
        r0 = rows[0]
        for idx, c in enumerate(cols):
            x = a[r0][c]
            if x:
                sub = cof(rows[1:], cols[:idx] + cols[idx + 1:])
                term = x * sub
                total = total + term if idx % 2 == 0 else total - term
        return total

    return cof(tuple(range(n)), tuple(range(n)))


def kernel_basis_poly(m: Matrix) -> Matrix:
    """Free basis of the kernel of a Laurent matrix, as columns.

    Column reduction by the Euclidean algorithm; the returned basis has
    cols(A) - rank(A) columns.  Each basis column is normalized so its first
    nonzero entry is monic with zero valuation.
    """
    a = _laurent_matrix(m)
    nr, nc = m.rows, m.cols
    one = Laurent.const(1)
    v = [[one if i == j else Laurent() for j in range(nc)] for i in range(nc)]

    def col_op(j_src, j_dst, q):
        for i in range(nr):
            a[i][j_dst] = a[i][j_dst] - q * a[i][j_src]
        for i in range(nc):
            v[i][j_dst] = v[i][j_dst] - q * v[i][j_src]
        unit = _content_unit([a[i][j_dst] for i in range(nr)])
        if unit is None and not any(a[i][j_dst] for i in range(nr)):
            unit = _content_unit([v[i][j_dst] for i in range(nc)])
            if unit is not None:
                for i in range(nc):
                    v[i][j_dst] = unit * v[i][j_dst]
            return
        if unit is not None:
            for i in range(nr):
                a[i][j_dst] = unit * a[i][j_dst]
            for i in range(nc):
                v[i][j_dst] = unit * v[i][j_dst]

    def scale_col(j, unit):
        for i in range(nr):
            a[i][j] = unit * a[i][j]
        for i in range(nc):
            v[i][j] = unit * v[i][j]

    active = list(range(nc))
    for i in range(nr):
        while True:
            live = [j for j in active if a[i][j]]
            if len(live) <= 1:
                break
            # reduce against the smallest-degree entry in this row
            live.sort(key=lambda j: (a[i][j].degree() - a[i][j].valuation(), j))
            pivot = live[0]
            piv_deg = a[i][pivot].degree() - a[i][pivot].valuation()
            lead = a[i][pivot].leading_coeff()
            for j in live[1:]:
                shift = (a[i][j].degree() - a[i][j].valuation()) - piv_deg
                if shift >= 0 and lead != 1:
                    scale_col(j, Laurent.const(lead ** (shift + 1)))
                q, _ = a[i][j].divmod(a[i][pivot])
                col_op(pivot, j, q)
        live = [j for j in active if a[i][j]]
        if live:
            active.remove(live[0])
    kernel_cols = [j for j in active if all(not a[i][j] for i in range(nr))]
    assert len(kernel_cols) == len(active), "column reduction left a nonzero active column"
    cols = []
    for j in kernel_cols:
        col = [v[i][j] for i in range(nc)]
        lead = next((x for x in col if x), None)
        if lead is not None:
            unit = Laurent.t_power(-lead.valuation(), 1 / lead.leading_coeff())
            col = [unit * x for x in col]
        cols.append(col)
    return Matrix(nc, len(cols), [[cols[j][i] for j in range(len(cols))] for i in range(nc)])


# ---------------------------------------------------------------------------
# Gaussian elimination over a field (Fraction or Cyclo entries)
# ---------------------------------------------------------------------------

def _field_inv(x):
    if isinstance(x, Cyclo):
        return x.invert()
    return 1 / as_fraction(x)


def rref(m: Matrix) -> tuple[list[list], list[int]]:
    """Reduced row echelon form (entries list) and pivot column indices."""
    a = [row[:] for row in m.entries]
    nrows, ncols = m.rows, m.cols
    pivots: list[int] = []
    r = 0
    for j in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][j]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = _field_inv(a[r][j])
        a[r] = [inv * x for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][j]:
                f = a[i][j]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(j)
        r += 1
    return a, pivots


def column_space_basis(m: Matrix) -> Matrix:
    """Basis of the column space: the original columns at the RREF pivot positions."""
    _, pivots = rref(m)
    return Matrix(m.rows, len(pivots),
                  [[m.entries[i][j] for j in pivots] for i in range(m.rows)])


def right_kernel_basis_field(m: Matrix, one_scalar=1, zero_scalar=0) -> Matrix:
    """Basis of the right kernel over the entry field, one column per free column."""
    a, pivots = rref(m)
    pivot_set = set(pivots)
    free = [j for j in range(m.cols) if j not in pivot_set]
    cols = []
    for j in free:
        v = [zero_scalar] * m.cols
        v[j] = one_scalar
        for r, pj in enumerate(pivots):
            v[pj] = -a[r][j]
        cols.append(v)
    return Matrix(m.cols, len(cols), [[cols[c][i] for c in range(len(cols))]
                                      for i in range(m.cols)])


def in_column_span(basis: Matrix, vector: list) -> bool:
    col = Matrix(basis.rows, 1, [[x] for x in vector])
    return matrix_rank(basis.hstack(col)) == matrix_rank(basis)


def solve_column_combination(basis: Matrix, target: Matrix) -> Matrix:
    """Solve basis @ X = target over the entry field; raises when unsolvable."""
    aug = basis.hstack(target)
    a, pivots = rref(aug)
    if any(j >= basis.cols for j in pivots):
        raise ValueError("target is not in the column span")
    x = [[0] * target.cols for _ in range(basis.cols)]
    for r, pj in enumerate(pivots):
        for c in range(target.cols):
            x[pj][c] = a[r][basis.cols + c]
    return Matrix(basis.cols, target.cols, x)


def solve_in_column_span(k: Matrix, b: Matrix) -> Matrix:
    """Solve K*X = B over Q[t, t^-1] when K has full column rank.

    Uses the SNF of K: with U K V = D, X = V * (U B scaled by 1/d_i).
    Raises ValueError when B is not in the column span (inexact division or a
    nonzero residual row), which downstream signals a broken chain complex.
    """
    u, d, v = smith_normal_form_poly(k)
    ub = u @ b
    ncols_k = k.cols
    diag = poly_diagonal(d)
    if any(not x for x in diag[:ncols_k]) or len(diag) < ncols_k:
        raise ValueError("kernel basis matrix is not of full column rank")
    y = []
    for i in range(ncols_k):
        y.append([_as_laurent(ub.entries[i][j]).exact_div(diag[i]) for j in range(b.cols)])
    for i in range(ncols_k, k.rows):
        for j in range(b.cols):
            if ub.entries[i][j]:
                raise ValueError("vector not in the column span of the kernel basis")
    return v @ Matrix(ncols_k, b.cols, y)
