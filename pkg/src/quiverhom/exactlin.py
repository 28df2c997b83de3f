"""Exact linear algebra over the rationals or a prime field.

Scalars are Fraction (characteristic 0) or ints normalized into [0, p)
(characteristic p).  No floating point enters the system anywhere.
"""

from __future__ import annotations

from fractions import Fraction


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class Field:
    """The rationals (characteristic 0) or F_p for a prime p."""

    __slots__ = ("characteristic",)

    def __init__(self, characteristic: int = 0):
        if characteristic != 0 and not _is_prime(characteristic):
            raise ValueError(f"characteristic must be 0 or a prime, got {characteristic}")
        self.characteristic = characteristic

    @classmethod
    def parse(cls, text: str) -> "Field":
        t = text.strip()
        if t in ("Q", "QQ", "0"):
            return cls(0)
        if t.startswith("F") and t[1:].isdigit():
            return cls(int(t[1:]))
        raise ValueError(f"unknown field spec {text!r} (expected Q or F<p>)")

    @property
    def kind(self) -> str:
        return "rationals" if self.characteristic == 0 else "prime"

    def describe(self) -> dict:
        return {"kind": self.kind, "characteristic": self.characteristic}

    def __repr__(self):
        return "Q" if self.characteristic == 0 else f"F{self.characteristic}"

    def __eq__(self, other):
        return isinstance(other, Field) and self.characteristic == other.characteristic

    def __hash__(self):
        return hash(("Field", self.characteristic))

    # scalar arithmetic -------------------------------------------------

    def of(self, n):
        """Coerce an int or Fraction into a normalized scalar.

        In prime characteristic a fraction p/q becomes p * q^(-1) mod p,
        never a truncated integer."""
        if self.characteristic == 0:
            return n if isinstance(n, Fraction) else Fraction(n)
        if isinstance(n, Fraction):
            num = n.numerator % self.characteristic
            den = n.denominator % self.characteristic
            if den == 0:
                raise ZeroDivisionError(
                    f"denominator divisible by the characteristic {self.characteristic}"
                )
            return (num * pow(den, -1, self.characteristic)) % self.characteristic
        return int(n) % self.characteristic

    @property
    def zero(self):
        return self.of(0)

    @property
    def one(self):
        return self.of(1)

    def add(self, a, b):
        return (a + b) % self.characteristic if self.characteristic else a + b

    def sub(self, a, b):
        return (a - b) % self.characteristic if self.characteristic else a - b

    def mul(self, a, b):
        return (a * b) % self.characteristic if self.characteristic else a * b

    def neg(self, a):
        return (-a) % self.characteristic if self.characteristic else -a

    def inv(self, a):
        if self.characteristic:
            if a % self.characteristic == 0:
                raise ZeroDivisionError("inverse of zero")
            return pow(a, -1, self.characteristic)
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return Fraction(1) / a

    def is_zero(self, a) -> bool:
        return (a % self.characteristic == 0) if self.characteristic else a == 0


class Matrix:
    """Immutable dense matrix with exact entries over a fixed field."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field: Field, entries, cols: int | None = None):
        self.field = field
        rows = tuple(tuple(field.of(x) for x in row) for row in entries)
        self.rows = len(rows)
        self.cols = len(rows[0]) if rows else (cols or 0)
        for row in rows:
            if len(row) != self.cols:
                raise ValueError("ragged rows")
        self.entries = rows

    # constructors ------------------------------------------------------

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        m = cls.__new__(cls)
        m.field = field
        m.rows = rows
        m.cols = cols
        m.entries = tuple((field.zero,) * cols for _ in range(rows))
        return m

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        return cls(field, [[field.one if i == j else field.zero for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, field: Field, columns, rows: int) -> "Matrix":
        cols = list(columns)
        return cls(field, [[col[i] for col in cols] for i in range(rows)], cols=len(cols))

    # basic algebra -----------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.entries == other.entries
            and self.rows == other.rows
            and self.cols == other.cols
        )

    def __hash__(self):
        return hash((self.field, self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols}, {self.entries!r})"

    def __add__(self, other):
        self._compat(other)
        f = self.field
        return Matrix(f, [[f.add(a, b) for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)], cols=self.cols)

    def __sub__(self, other):
        self._compat(other)
        f = self.field
        return Matrix(f, [[f.sub(a, b) for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)], cols=self.cols)

    def __neg__(self):
        f = self.field
        return Matrix(f, [[f.neg(a) for a in row] for row in self.entries], cols=self.cols)

    def __mul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} * {other.rows}x{other.cols}")
        f = self.field
        ot = other.entries
        out = []
        for row in self.entries:
            new = [f.zero] * other.cols
            for k, a in enumerate(row):
                if f.is_zero(a):
                    continue
                ork = ot[k]
                for j in range(other.cols):
                    b = ork[j]
                    if not f.is_zero(b):
                        new[j] = f.add(new[j], f.mul(a, b))
            out.append(new)
        return Matrix(f, out, cols=other.cols)

    def scale(self, c) -> "Matrix":
        f = self.field
        c = f.of(c)
        return Matrix(f, [[f.mul(c, a) for a in row] for row in self.entries], cols=self.cols)

    def transpose(self) -> "Matrix":
        if self.rows == 0 or self.cols == 0:
            return Matrix.zeros(self.field, self.cols, self.rows)
        return Matrix(self.field, [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise ValueError("hstack: row mismatch")
        return Matrix(self.field, [r1 + r2 for r1, r2 in zip(self.entries, other.entries)],
                      cols=self.cols + other.cols)

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise ValueError("vstack: col mismatch")
        return Matrix(self.field, list(self.entries) + list(other.entries), cols=self.cols)

    def column(self, j: int) -> tuple:
        return tuple(self.entries[i][j] for i in range(self.rows))

    def apply(self, vec) -> tuple:
        """Matrix times column vector."""
        f = self.field
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(
            _dot(f, row, vec) for row in self.entries
        )

    def is_zero_matrix(self) -> bool:
        f = self.field
        return all(f.is_zero(a) for row in self.entries for a in row)

    def _compat(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch")


def _dot(field, u, v):
    acc = field.zero
    for a, b in zip(u, v):
        if not (field.is_zero(a) or field.is_zero(b)):
            acc = field.add(acc, field.mul(a, b))
    return acc


def _rref(m: Matrix):
    """Reduced row echelon form; returns (rows as list of lists, pivot column list).

    Fractions are renormalized by the pivot at every elimination step, which
    keeps numerators and denominators small at desk scale.
    """
    f = m.field
    a = [list(row) for row in m.entries]
    nrows, ncols = m.rows, m.cols
    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if not f.is_zero(a[i][c]):
                pivot_row = i
                break
        if pivot_row is None:
            continue
        a[r], a[pivot_row] = a[pivot_row], a[r]
        inv = f.inv(a[r][c])
        a[r] = [f.mul(inv, x) for x in a[r]]
        for i in range(nrows):
            if i != r and not f.is_zero(a[i][c]):
                coef = a[i][c]
                a[i] = [f.sub(x, f.mul(coef, y)) for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return a, pivots


def rank(m: Matrix) -> int:
    """Exact rank."""
    return len(_rref(m)[1])


def kernel_basis(m: Matrix) -> list:
    """Canonical basis of the right kernel, as column-vector tuples.

    One basis vector per non-pivot column: entry 1 there, pivot rows filled
    from the reduced echelon form.  Deterministic for a given matrix.
    """
    f = m.field
    a, pivots = _rref(m)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    basis = []
    for c in free:
        v = [f.zero] * m.cols
        v[c] = f.one
        for r, pc in enumerate(pivots):
            v[pc] = f.neg(a[r][c])
        basis.append(tuple(v))
    return basis


def cokernel_data(m: Matrix):
    """Cokernel of m: returns (dimension, projection).

    The projection has full row rank equal to the dimension and satisfies
    projection * m = 0; its rows are the canonical left-kernel basis.
    """
    left = kernel_basis(m.transpose())
    dim = m.rows - rank(m)
    assert len(left) == dim
    proj = Matrix(m.field, [list(v) for v in left]) if left else Matrix.zeros(m.field, 0, m.rows)
    return dim, proj


def image_coordinates(m: Matrix):
    """Helper for quotient computations: returns (pivot columns of m, rref of m^T).

    The pivot columns index a basis of the column space.
    """
    _, pivots = _rref(m)
    return pivots


def solve(m: Matrix, b) -> tuple | None:
    """A particular solution x of m x = b, or None if inconsistent."""
    f = m.field
    aug = m.hstack(Matrix(f, [[x] for x in b]) if m.rows else Matrix.zeros(f, 0, 1))
    a, pivots = _rref(aug)
    if m.cols in pivots:
        return None
    x = [f.zero] * m.cols
    for r, pc in enumerate(pivots):
        x[pc] = a[r][m.cols]
    return tuple(x)


def inverse(m: Matrix) -> Matrix | None:
    """Inverse of a square matrix, or None if singular."""
    if m.rows != m.cols:
        raise ValueError("inverse of non-square matrix")
    f = m.field
    aug = m.hstack(Matrix.identity(f, m.rows))
    a, pivots = _rref(aug)
    if len(pivots) < m.rows or any(p >= m.rows for p in pivots[: m.rows]):
        return None
    return Matrix(f, [row[m.rows:] for row in a[: m.rows]])


class Quotient:
    """Canonical model of V / im(m) for V = field^rows(m).

    `dim` is the quotient dimension; `reduce(v)` gives coordinates of the
    class of v in the canonical quotient basis (rows of the projection).
    """

    __slots__ = ("field", "ambient_dim", "dim", "projection")

    def __init__(self, m: Matrix):
        self.field = m.field
        self.ambient_dim = m.rows
        self.dim, self.projection = cokernel_data(m)

    def reduce(self, vec) -> tuple:
        return self.projection.apply(vec)
