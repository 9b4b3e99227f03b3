"""Exact dense linear algebra over the rationals and prime fields.

Scalars are plain Python objects: Fraction over QQ, canonical ints in
range(p) over GF(p).  All eliminations use a fixed pivot order (leftmost
nonzero, topmost row), so every derived basis and projection is
deterministic for a given input.
"""

from __future__ import annotations

from fractions import Fraction


class LinAlgError(Exception):
    pass


class ShapeError(LinAlgError):
    """Operands have incompatible dimensions."""


class FieldMismatchError(LinAlgError):
    """Operands live over different fields."""


class Field:
    """Arithmetic interface shared by QQ and GF(p)."""

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def of(self, value):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError

    def fmt(self, a) -> str:
        raise NotImplementedError


class RationalField(Field):
    name = "Q"

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def of(self, value):
        return Fraction(value)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def parse(self, text):
        return Fraction(text)

    def fmt(self, a):
        return str(a)

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


class PrimeField(Field):
    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise ValueError(f"modulus {p} is not prime")
        self.p = p
        self.name = f"F{p}"

    def zero(self):
        return 0

    def one(self):
        return 1 % self.p

    def of(self, value):
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise ZeroDivisionError("denominator vanishes mod p")
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        return int(value) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def parse(self, text):
        return self.of(Fraction(text))

    def fmt(self, a):
        return str(a % self.p)

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


QQ = RationalField()

_gf_cache: dict = {}


def GF(p: int) -> PrimeField:
    if p not in _gf_cache:
        _gf_cache[p] = PrimeField(p)
    return _gf_cache[p]


def field_from_name(name: str) -> Field:
    name = name.strip()
    if name == "Q":
        return QQ
    if name.startswith("F") and name[1:].isdigit():
        return GF(int(name[1:]))
    raise ValueError(f"unknown field {name!r}")


class Matrix:
    """Immutable dense matrix.  Zero-row and zero-column shapes are legal."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: Field, data, rows: int | None = None, cols: int | None = None):
        self.field = field
        data = [list(row) for row in data]
        if rows is None:
            rows = len(data)
        if cols is None:
            cols = len(data[0]) if data else 0
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ShapeError("ragged or mis-sized matrix data")
        self.rows = rows
        self.cols = cols
        self.data = data

    @staticmethod
    def zeros(field: Field, rows: int, cols: int) -> "Matrix":
        z = field.zero()
        return Matrix(field, [[z] * cols for _ in range(rows)], rows, cols)

    @staticmethod
    def identity(field: Field, n: int) -> "Matrix":
        z, o = field.zero(), field.one()
        return Matrix(field, [[o if i == j else z for j in range(n)] for i in range(n)], n, n)

    @staticmethod
    def from_ints(field: Field, data) -> "Matrix":
        return Matrix(field, [[field.of(x) for x in row] for row in data])

    @staticmethod
    def column(field: Field, entries) -> "Matrix":
        entries = list(entries)
        return Matrix(field, [[e] for e in entries], len(entries), 1)

    def _check_field(self, other: "Matrix"):
        if self.field != other.field:
            raise FieldMismatchError(f"{self.field!r} vs {other.field!r}")

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(tuple(r) for r in self.data)))

    def __repr__(self):
        return f"Matrix({self.field!r}, {self.data})"

    def is_zero(self) -> bool:
        z = self.field.zero()
        return all(x == z for row in self.data for x in row)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_field(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeError("addition shape mismatch")
        f = self.field
        return Matrix(
            f,
            [[f.add(a, b) for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)],
            self.rows,
            self.cols,
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_field(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeError("subtraction shape mismatch")
        f = self.field
        return Matrix(
            f,
            [[f.sub(a, b) for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)],
            self.rows,
            self.cols,
        )

    def __neg__(self) -> "Matrix":
        f = self.field
        return Matrix(f, [[f.neg(x) for x in row] for row in self.data], self.rows, self.cols)

    def scale(self, c) -> "Matrix":
        f = self.field
        return Matrix(f, [[f.mul(c, x) for x in row] for row in self.data], self.rows, self.cols)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check_field(other)
        if self.cols != other.rows:
            raise ShapeError(f"product shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        f = self.field
        z = f.zero()
        ot = list(zip(*other.data)) if other.data else [()] * other.cols
        out = []
        for row in self.data:
            new = []
            for j in range(other.cols):
                col = ot[j] if other.rows else ()
                acc = z
                for a, b in zip(row, col):
                    if a != z and b != z:
                        acc = f.add(acc, f.mul(a, b))
                new.append(acc)
            out.append(new)
        return Matrix(f, out, self.rows, other.cols)

    def transpose(self) -> "Matrix":
        if self.rows == 0:
            data = [[] for _ in range(self.cols)]
        else:
            data = [list(col) for col in zip(*self.data)]
        return Matrix(self.field, data, self.cols, self.rows)

    def col(self, j: int) -> "Matrix":
        return Matrix(self.field, [[row[j]] for row in self.data], self.rows, 1)

    def entries_flat(self) -> list:
        return [x for row in self.data for x in row]

    def hstack(self, other: "Matrix") -> "Matrix":
        self._check_field(other)
        if self.rows != other.rows:
            raise ShapeError("hstack row mismatch")
        return Matrix(self.field, [r1 + r2 for r1, r2 in zip(self.data, other.data)], self.rows, self.cols + other.cols)

    def vstack(self, other: "Matrix") -> "Matrix":
        self._check_field(other)
        if self.cols != other.cols:
            raise ShapeError("vstack column mismatch")
        return Matrix(self.field, self.data + other.data, self.rows + other.rows, self.cols)

    def submatrix(self, row_idx, col_idx) -> "Matrix":
        return Matrix(self.field, [[self.data[i][j] for j in col_idx] for i in row_idx], len(row_idx), len(col_idx))

    def rref(self) -> tuple["Matrix", list[int]]:
        """Reduced row echelon form with leftmost-pivot, topmost-row order."""
        f = self.field
        z = f.zero()
        m = [row[:] for row in self.data]
        pivots: list[int] = []
        r = 0
        for c in range(self.cols):
            if r == self.rows:
                break
            sel = None
            for i in range(r, self.rows):
                if m[i][c] != z:
                    sel = i
                    break
            if sel is None:
                continue
            m[r], m[sel] = m[sel], m[r]
            inv = f.inv(m[r][c])
            m[r] = [f.mul(inv, x) for x in m[r]]
            for i in range(self.rows):
                if i != r and m[i][c] != z:
                    factor = m[i][c]
                    m[i] = [f.sub(a, f.mul(factor, b)) for a, b in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
        return Matrix(f, m, self.rows, self.cols), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def rank_and_kernel(self) -> tuple[int, "Matrix"]:
        """Rank plus a kernel basis (columns), in reduced column-echelon form.

        Basis vector k has a 1 in the k-th free-variable slot and zeros in
        the other free slots, so the result is canonical.
        """
        f = self.field
        R, pivots = self.rref()
        rank = len(pivots)
        free = [j for j in range(self.cols) if j not in pivots]
        z, o = f.zero(), f.one()
        basis_cols = []
        for fc in free:
            v = [z] * self.cols
            v[fc] = o
            for i, pc in enumerate(pivots):
                v[pc] = f.neg(R.data[i][fc])
            basis_cols.append(v)
        data = [[basis_cols[k][i] for k in range(len(free))] for i in range(self.cols)]
        return rank, Matrix(f, data, self.cols, len(free))

    def kernel(self) -> "Matrix":
        return self.rank_and_kernel()[1]

    def column_space_basis(self) -> "Matrix":
        """Pivot columns of the matrix, in column order."""
        _, pivots = self.rref()
        return self.submatrix(range(self.rows), pivots)

    def cokernel_projection(self) -> "Matrix":
        """Full-row-rank P with P @ self == 0 and rows == self.rows - rank.

        Rows are the canonical kernel basis of the transpose, so pivot rows
        of the column space are killed first in echelon order.
        """
        return self.transpose().rank_and_kernel()[1].transpose()

    def solve(self, b: "Matrix") -> "Matrix | None":
        """One solution x of self @ x == b (free variables set to zero).

        Returns None when the system is inconsistent; raises ShapeError on
        dimension mismatch.
        """
        self._check_field(b)
        if b.rows != self.rows:
            raise ShapeError("solve: rhs row mismatch")
        f = self.field
        z = f.zero()
        aug = self.hstack(b)
        R, pivots = aug.rref()
        n = self.cols
        eff_pivots = [p for p in pivots if p < n]
        for p in pivots:
            if p >= n:
                return None
        sol = [[z] * b.cols for _ in range(n)]
        for i, p in enumerate(eff_pivots):
            for j in range(b.cols):
                sol[p][j] = R.data[i][n + j]
        return Matrix(f, sol, n, b.cols)

    def right_inverse(self) -> "Matrix":
        """A section s with self @ s == identity; requires full row rank."""
        s = self.solve(Matrix.identity(self.field, self.rows))
        if s is None:
            raise LinAlgError("matrix has no right inverse (row rank deficient)")
        return s

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise ShapeError("inverse of non-square matrix")
        if self.rank() != self.rows:
            raise LinAlgError("matrix is singular")
        return self.right_inverse()


def direct_sum(a: Matrix, b: Matrix) -> Matrix:
    a._check_field(b)
    f = a.field
    z = f.zero()
    out = [row + [z] * b.cols for row in a.data] + [[z] * a.cols + row for row in b.data]
    return Matrix(f, out, a.rows + b.rows, a.cols + b.cols)


def direct_sum_many(field: Field, mats: list[Matrix]) -> Matrix:
    acc = Matrix.zeros(field, 0, 0)
    for m in mats:
        acc = direct_sum(acc, m)
    return acc


def kronecker_product(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product; block (i, j) is a[i][j] * b."""
    a._check_field(b)
    f = a.field
    out = []
    for i in range(a.rows):
        for k in range(b.rows):
            row = []
            for j in range(a.cols):
                c = a.data[i][j]
                row.extend(f.mul(c, x) for x in b.data[k])
            out.append(row)
    return Matrix(f, out, a.rows * b.rows, a.cols * b.cols)


class Subquotient:
    """Homology presentation ker(d_out) / im(d_in) inside a fixed ambient space.

    kernel_basis has ambient-dim rows; proj maps kernel coordinates onto
    homology coordinates.  Both come from canonical eliminations.
    """

    __slots__ = ("field", "ambient", "kernel_basis", "proj", "_section")

    def __init__(self, field: Field, ambient: int, kernel_basis: Matrix, proj: Matrix):
        self.field = field
        self.ambient = ambient
        self.kernel_basis = kernel_basis
        self.proj = proj
        self._section = None

    @property
    def dim(self) -> int:
        return self.proj.rows

    @staticmethod
    def homology(d_out: Matrix, d_in: Matrix) -> "Subquotient":
        """Homology at the middle of d_in followed by d_out (composite zero)."""
        if d_out.cols != d_in.rows:
            raise ShapeError("homology: middle dimensions disagree")
        if not (d_out @ d_in).is_zero():
            raise LinAlgError("homology: composite differential is nonzero")
        K = d_out.kernel()
        incoming = K.solve(d_in)
        if incoming is None:
            raise LinAlgError("homology: image does not land in kernel")
        proj = incoming.cokernel_projection()
        return Subquotient(d_out.field, d_out.cols, K, proj)

    def classes_of(self, vectors: Matrix) -> Matrix:
        """Homology classes of ambient vectors known to lie in the kernel."""
        coords = self.kernel_basis.solve(vectors)
        if coords is None:
            raise LinAlgError("vector outside the kernel subspace")
        return self.proj @ coords

    def section(self) -> Matrix:
        """Ambient representatives of the homology basis."""
        if self._section is None:
            self._section = self.kernel_basis @ self.proj.right_inverse()
        return self._section

    def induced_map(self, target: "Subquotient", ambient_map: Matrix) -> Matrix:
        """Matrix of the map induced on homology by a chain map."""
        return target.classes_of(ambient_map @ self.section())
