"""Exact scalar arithmetic, dense matrices and canonical subspaces.

Everything is computed over an exact field: arbitrary-precision rationals
(`QQ`) or a prime field (`GF(p)`).  Subspaces are stored as canonical
reduced row echelon bases, so subspace equality is plain data equality.

The row-reduction kernels come from a compiled extension when available
(`koszul._ckernels`, built from Cython) with a pure-Python fallback in
`koszul._kernels`; set KOSZUL_PURE_PYTHON=1 to force the fallback.
"""

from __future__ import annotations

import os
from fractions import Fraction
from typing import Iterable, Sequence

if os.environ.get("KOSZUL_PURE_PYTHON"):
    from . import _kernels as _impl
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels as _impl


def kernel_backend() -> str:
    """Name of the active row-reduction backend ("c" or "python")."""
    return _impl.BACKEND


class RationalField:
    """The field of rationals; elements are `fractions.Fraction`."""

    name = "QQ"
    characteristic = 0

    zero = Fraction(0)
    one = Fraction(1)

    def of(self, v) -> Fraction:
        return v if type(v) is Fraction else Fraction(v)

    def to_str(self, v) -> str:
        return str(v)

    def from_str(self, s: str) -> Fraction:
        return Fraction(s)

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


class PrimeField:
    """F_p for a prime p; elements are ints in [0, p)."""

    characteristic: int

    def __init__(self, p: int):
        if p < 2 or not _is_prime(p):
            raise ValueError(f"not a prime: {p}")
        self.p = p
        self.name = f"GF({p})"
        self.characteristic = p
        self.zero = 0
        self.one = 1 % p

    def of(self, v) -> int:
        if isinstance(v, Fraction):
            num = v.numerator % self.p
            den = v.denominator % self.p
            if den == 0:
                raise ZeroDivisionError(f"denominator divisible by {self.p}")
            return num * pow(den, self.p - 2, self.p) % self.p
        return int(v) % self.p

    def to_str(self, v) -> str:
        return str(v)

    def from_str(self, s: str) -> int:
        return self.of(Fraction(s))

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


def _is_prime(n: int) -> bool:
    if n < 4:
        return n >= 2
    if n % 2 == 0:
        return False
    # deterministic Miller-Rabin for 64-bit range
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


QQ = RationalField()

_gf_cache: dict[int, PrimeField] = {}


def GF(p: int) -> PrimeField:
    if p not in _gf_cache:
        _gf_cache[p] = PrimeField(p)
    return _gf_cache[p]


Field = RationalField | PrimeField


class Matrix:
    """Dense matrix over an exact field; treated as immutable.

    Columns index the source basis, rows the target basis: a morphism
    matrix A sends the column vector v to A*v.
    """

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: Field, nrows: int, ncols: int, rows):
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        self.rows = rows

    @classmethod
    def from_rows(cls, field, rows: Sequence[Sequence]) -> "Matrix":
        rows = [[field.of(v) for v in r] for r in rows]
        ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
        return cls(field, len(rows), ncols, rows)

    @classmethod
    def zeros(cls, field, nrows: int, ncols: int) -> "Matrix":
        z = field.zero
        return cls(field, nrows, ncols, [[z] * ncols for _ in range(nrows)])

    @classmethod
    def identity(cls, field, n: int) -> "Matrix":
        z, o = field.zero, field.one
        rows = [[o if i == j else z for j in range(n)] for i in range(n)]
        return cls(field, n, n, rows)

    def is_zero(self) -> bool:
        z = self.field.zero
        return all(v == z for row in self.rows for v in row)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __hash__(self):
        raise TypeError("matrices are not hashable")

    def __repr__(self):
        return f"Matrix({self.field}, {self.nrows}x{self.ncols})"

    def __add__(self, other: "Matrix") -> "Matrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch in addition")
        if self.field.characteristic == 0:
            rows = [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.rows, other.rows)
            ]
        else:
            p = self.field.p
            rows = [
                [(a + b) % p for a, b in zip(ra, rb)]
                for ra, rb in zip(self.rows, other.rows)
            ]
        return Matrix(self.field, self.nrows, self.ncols, rows)

    def __neg__(self) -> "Matrix":
        if self.field.characteristic == 0:
            rows = [[-a for a in r] for r in self.rows]
        else:
            p = self.field.p
            rows = [[(-a) % p for a in r] for r in self.rows]
        return Matrix(self.field, self.nrows, self.ncols, rows)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c) -> "Matrix":
        c = self.field.of(c)
        if self.field.characteristic == 0:
            rows = [[c * a for a in r] for r in self.rows]
        else:
            p = self.field.p
            rows = [[c * a % p for a in r] for r in self.rows]
        return Matrix(self.field, self.nrows, self.ncols, rows)

    def __mul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in product")
        z = self.field.zero
        modp = self.field.characteristic
        bt = list(zip(*other.rows)) if other.rows else [()] * other.ncols
        out = []
        for ra in self.rows:
            row = []
            for cb in bt:
                s = z
                for a, b in zip(ra, cb):
                    if a and b:
                        s += a * b
                row.append(s % modp if modp else s)
            out.append(row)
        if not self.rows:
            out = []
        return Matrix(self.field, self.nrows, other.ncols, out)

    def transpose(self) -> "Matrix":
        if self.nrows == 0:
            rows = [[] for _ in range(self.ncols)]
        else:
            rows = [list(r) for r in zip(*self.rows)]
        return Matrix(self.field, self.ncols, self.nrows, rows)

    def apply(self, vec: Sequence) -> list:
        """Matrix times column vector (vec given as a flat sequence)."""
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        z = self.field.zero
        modp = self.field.characteristic
        out = []
        for row in self.rows:
            s = z
            for a, b in zip(row, vec):
                if a and b:
                    s += a * b
            out.append(s % modp if modp else s)
        return out

    @classmethod
    def vstack(cls, field, mats: Sequence["Matrix"], ncols: int | None = None) -> "Matrix":
        if ncols is None:
            ncols = mats[0].ncols
        rows = []
        for m in mats:
            if m.ncols != ncols:
                raise ValueError("column mismatch in vstack")
            rows.extend(m.rows)
        return cls(field, len(rows), ncols, [list(r) for r in rows])

    @classmethod
    def block(cls, field, grid: Sequence[Sequence["Matrix"]]) -> "Matrix":
        """Assemble a block matrix; every row/column of blocks must agree in shape."""
        if not grid:
            return cls.zeros(field, 0, 0)
        nrows = sum(row[0].nrows for row in grid)
        ncols = sum(m.ncols for m in grid[0])
        out = []
        for brow in grid:
            h = brow[0].nrows
            for m in brow:
                if m.nrows != h:
                    raise ValueError("block height mismatch")
            for i in range(h):
                acc: list = []
                for m in brow:
                    acc.extend(m.rows[i])
                out.append(acc)
        return cls(field, nrows, ncols, out)

    @classmethod
    def kron(cls, a: "Matrix", b: "Matrix") -> "Matrix":
        """Kronecker product, `a`-index major."""
        field = a.field
        grid = []
        for i in range(a.nrows):
            grid.append([b.scale(a.rows[i][j]) for j in range(a.ncols)])
        if a.nrows == 0 or a.ncols == 0:
            return cls.zeros(field, a.nrows * b.nrows, a.ncols * b.ncols)
        return cls.block(field, grid)

    def rref(self) -> tuple["Matrix", tuple[int, ...]]:
        """Canonical reduced row echelon form (zero rows dropped)."""
        if self.field.characteristic:
            rows, pivots = _impl.rref_fp(self.rows, self.ncols, self.field.p)
            return Matrix(self.field, len(rows), self.ncols, rows), pivots
        int_rows = []
        for r in self.rows:
            den = 1
            for v in r:
                den = den * v.denominator // _gcd(den, v.denominator)
            if den == 1:
                int_rows.append([v.numerator for v in r])
            else:
                int_rows.append([v.numerator * (den // v.denominator) for v in r])
        rows, pivots = _impl.rref_int(int_rows, self.ncols)
        frac_rows = []
        for r, c in zip(rows, pivots):
            lead = r[c]
            frac_rows.append([Fraction(v, lead) for v in r])
        return Matrix(self.field, len(frac_rows), self.ncols, frac_rows), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel_basis(self) -> "Matrix":
        """Canonical basis (as rows) of {v : A v = 0}."""
        red, pivots = self.rref()
        field = self.field
        z, o = field.zero, field.one
        pivset = set(pivots)
        free = [c for c in range(self.ncols) if c not in pivset]
        rows = []
        for c in free:
            vec = [z] * self.ncols
            vec[c] = o
            for i, pc in enumerate(pivots):
                coeff = red.rows[i][c]
                if coeff:
                    vec[pc] = -coeff if field.characteristic == 0 else (-coeff) % field.p
            rows.append(vec)
        # canonicalize so two computations of the same kernel agree bit-exactly
        return Subspace.from_matrix(Matrix(field, len(rows), self.ncols, rows)).basis

    def column_space(self) -> "Subspace":
        return Subspace.from_matrix(self.transpose())

    def to_lists(self):
        return [list(r) for r in self.rows]


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def matrix_kernels(a: Matrix) -> tuple[int, Matrix, Matrix]:
    """(rank, kernel basis rows, image basis rows) of a matrix."""
    rank = a.rank()
    return rank, a.kernel_basis(), a.column_space().basis


def solve(a: Matrix, b: Sequence) -> list | None:
    """One solution of A x = b (free variables set to zero), or None."""
    if len(b) != a.nrows:
        raise ValueError("rhs length mismatch")
    field = a.field
    aug = Matrix(field, a.nrows, a.ncols + 1,
                 [list(r) + [field.of(v)] for r, v in zip(a.rows, b)])
    red, pivots = aug.rref()
    if a.ncols in pivots:
        return None
    x = [field.zero] * a.ncols
    for row, c in zip(red.rows, pivots):
        x[c] = row[a.ncols]
    return x


class Subspace:
    """Subspace of a coordinatized k^n, stored as a canonical RREF basis."""

    __slots__ = ("field", "ambient", "basis", "pivots")

    def __init__(self, field, ambient: int, basis: Matrix, pivots: tuple[int, ...]):
        self.field = field
        self.ambient = ambient
        self.basis = basis
        self.pivots = pivots

    @classmethod
    def from_matrix(cls, mat: Matrix) -> "Subspace":
        red, pivots = mat.rref()
        return cls(mat.field, mat.ncols, red, pivots)

    @classmethod
    def from_vectors(cls, field, ambient: int, vectors: Iterable[Sequence]) -> "Subspace":
        vecs = [list(v) for v in vectors]
        return cls.from_matrix(Matrix.from_rows(field, vecs) if vecs else Matrix.zeros(field, 0, ambient))

    @classmethod
    def zero(cls, field, ambient: int) -> "Subspace":
        return cls(field, ambient, Matrix.zeros(field, 0, ambient), ())

    @classmethod
    def full(cls, field, ambient: int) -> "Subspace":
        return cls(field, ambient, Matrix.identity(field, ambient), tuple(range(ambient)))

    @property
    def dim(self) -> int:
        return self.basis.nrows

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.field == other.field
            and self.ambient == other.ambient
            and self.basis == other.basis
        )

    def __hash__(self):
        raise TypeError("subspaces are not hashable")

    def __repr__(self):
        return f"Subspace(dim {self.dim} of k^{self.ambient})"

    def reduce(self, vec: Sequence) -> list:
        """Remainder of vec after reduction modulo the subspace."""
        v = list(vec)
        field = self.field
        modp = field.characteristic
        for row, c in zip(self.basis.rows, self.pivots):
            f = v[c]
            if f:
                if modp:
                    v = [(a - f * b) % modp for a, b in zip(v, row)]
                else:
                    v = [a - f * b for a, b in zip(v, row)]
        return v

    def contains(self, vec: Sequence) -> bool:
        z = self.field.zero
        return all(a == z for a in self.reduce(vec))

    def contains_space(self, other: "Subspace") -> bool:
        return all(self.contains(r) for r in other.basis.rows)

    def coordinates(self, vec: Sequence) -> list:
        """Coefficients of vec in the stored basis; raises if not a member."""
        v = list(vec)
        coords = []
        field = self.field
        modp = field.characteristic
        for row, c in zip(self.basis.rows, self.pivots):
            f = v[c]
            coords.append(f)
            if f:
                if modp:
                    v = [(a - f * b) % modp for a, b in zip(v, row)]
                else:
                    v = [a - f * b for a, b in zip(v, row)]
        if any(a != field.zero for a in v):
            raise ValueError("vector not in subspace")
        return coords

    def add(self, other: "Subspace") -> "Subspace":
        self._check(other)
        stacked = Matrix.vstack(self.field, [self.basis, other.basis], self.ambient)
        return Subspace.from_matrix(stacked)

    def perp(self) -> "Subspace":
        """Annihilator subspace in the dual coordinates."""
        ker = self.basis.kernel_basis() if self.dim else Matrix.identity(self.field, self.ambient)
        return Subspace.from_matrix(ker)

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return self.perp().add(other.perp()).perp()

    def quotient_extension(self, sub: "Subspace") -> Matrix:
        """Rows extending a basis of `sub` to one of self; requires sub <= self."""
        self._check(sub)
        if not self.contains_space(sub):
            raise ValueError("not a subspace: quotient undefined")
        rows = []
        current = sub
        for r in self.basis.rows:
            if not current.contains(r):
                rows.append(list(r))
                current = current.add(Subspace.from_vectors(self.field, self.ambient, [r]))
        return Matrix(self.field, len(rows), self.ambient, rows)

    def _check(self, other: "Subspace"):
        if self.ambient != other.ambient or self.field != other.field:
            raise ValueError("ambient mismatch")


def subspace_algebra(u: Subspace, v: Subspace):
    """(sum, intersection, perp of u, quotient extension rows of u in u+v)."""
    s = u.add(v)
    return s, u.intersect(v), u.perp(), s.quotient_extension(u)
