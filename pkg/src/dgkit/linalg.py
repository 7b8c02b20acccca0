"""Dense exact linear algebra over Q(i): matrices, echelon forms, subspaces.

Subspaces are canonical: the basis is the reduced row echelon form of any
spanning set, so equality of subspaces is literal equality of matrices.
Vectors are tuples of Scalars; matrices act on column vectors.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

from dgkit.scalars import ONE, ZERO, Scalar


class DimensionMismatch(ValueError):
    """Operands live in different ambient spaces."""


Vector = tuple  # tuple[Scalar, ...]


# ---------------------------------------------------------------------------
# vector helpers


def zero_vector(n: int) -> Vector:
    return tuple(ZERO for _ in range(n))


def unit_vector(n: int, i: int) -> Vector:
    return tuple(ONE if j == i else ZERO for j in range(n))


def vec_add(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Vector, v: Vector) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c: Scalar, u: Vector) -> Vector:
    return tuple(c * a for a in u)


def vec_neg(u: Vector) -> Vector:
    return tuple(-a for a in u)


def vec_is_zero(u: Vector) -> bool:
    return all(a.is_zero() for a in u)


# ---------------------------------------------------------------------------


class Matrix:
    """Dense rows x cols matrix of Scalars, row-major."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: Optional[list] = None):
        self.rows = rows
        self.cols = cols
        if data is None:
            data = [[ZERO] * cols for _ in range(rows)]
        if len(data) != rows or any(len(r) != cols for r in data):
            raise DimensionMismatch("entry count does not match rows x cols")
        self.data = data

    @staticmethod
    def from_rows(rows: Sequence[Sequence[Scalar]], cols: Optional[int] = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if rows:
            cols = len(rows[0])
        elif cols is None:
            cols = 0
        return Matrix(len(rows), cols, rows)

    @staticmethod
    def identity(n: int) -> "Matrix":
        m = Matrix(n, n)
        for i in range(n):
            m.data[i][i] = ONE
        return m

    @staticmethod
    def zero(rows: int, cols: int) -> "Matrix":
        return Matrix(rows, cols)

    def copy(self) -> "Matrix":
        return Matrix(self.rows, self.cols, [row[:] for row in self.data])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(tuple(r) for r in self.data)))

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.data for e in row)

    def __add__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("matrix addition shape mismatch")
        return Matrix(
            self.rows,
            self.cols,
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)],
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("matrix subtraction shape mismatch")
        return Matrix(
            self.rows,
            self.cols,
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)],
        )

    def __neg__(self) -> "Matrix":
        return Matrix(self.rows, self.cols, [[-a for a in row] for row in self.data])

    def scale(self, c: Scalar) -> "Matrix":
        return Matrix(self.rows, self.cols, [[c * a for a in row] for row in self.data])

    def __mul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionMismatch("matrix product shape mismatch")
        out = Matrix(self.rows, other.cols)
        for i in range(self.rows):
            row = self.data[i]
            out_row = out.data[i]
            for k in range(self.cols):
                a = row[k]
                if a.is_zero():
                    continue
                other_row = other.data[k]
                for j in range(other.cols):
                    b = other_row[j]
                    if not b.is_zero():
                        out_row[j] = out_row[j] + a * b
        return out

    def apply(self, v: Vector) -> Vector:
        if len(v) != self.cols:
            raise DimensionMismatch("vector length does not match matrix columns")
        out = []
        for i in range(self.rows):
            acc = ZERO
            row = self.data[i]
            for j, x in enumerate(v):
                if not x.is_zero() and not row[j].is_zero():
                    acc = acc + row[j] * x
            out.append(acc)
        return tuple(out)

    def transpose(self) -> "Matrix":
        return Matrix(
            self.cols, self.rows, [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)]
        )

    def column(self, j: int) -> Vector:
        return tuple(self.data[i][j] for i in range(self.rows))

    def row(self, i: int) -> Vector:
        return tuple(self.data[i])

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise DimensionMismatch("hstack row mismatch")
        return Matrix(
            self.rows,
            self.cols + other.cols,
            [r1 + r2 for r1, r2 in zip(self.data, other.data)],
        )

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise DimensionMismatch("vstack column mismatch")
        return Matrix(self.rows + other.rows, self.cols, [row[:] for row in self.data] + [row[:] for row in other.data])

    def rref(self) -> tuple["Matrix", list]:
        """Reduced row echelon form and the list of pivot columns."""
        m = [row[:] for row in self.data]
        pivots = []
        r = 0
        for c in range(self.cols):
            pivot_row = None
            for i in range(r, self.rows):
                if not m[i][c].is_zero():
                    pivot_row = i
                    break
            if pivot_row is None:
                continue
            m[r], m[pivot_row] = m[pivot_row], m[r]
            inv = m[r][c].inverse()
            m[r] = [inv * x for x in m[r]]
            for i in range(self.rows):
                if i != r and not m[i][c].is_zero():
                    f = m[i][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return Matrix(self.rows, self.cols, m), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(e) for e in row) for row in self.data)
        return f"Matrix({self.rows}x{self.cols}: {body})"

    def to_lists(self) -> list:
        return [[str(e) for e in row] for row in self.data]


# ---------------------------------------------------------------------------


class Subspace:
    """Subspace of F^n in canonical form: RREF basis rows, no zero rows."""

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim: int, basis: Matrix):
        self.ambient_dim = ambient_dim
        self.basis = basis

    @staticmethod
    def from_vectors(ambient_dim: int, vectors: Iterable[Vector]) -> "Subspace":
        rows = [list(v) for v in vectors]
        for r in rows:
            if len(r) != ambient_dim:
                raise DimensionMismatch("vector length differs from ambient dimension")
        if not rows:
            return Subspace(ambient_dim, Matrix(0, ambient_dim))
        red, pivots = Matrix.from_rows(rows, ambient_dim).rref()
        kept = [red.data[i][:] for i in range(len(pivots))]
        return Subspace(ambient_dim, Matrix(len(kept), ambient_dim, kept))

    @staticmethod
    def zero(ambient_dim: int) -> "Subspace":
        return Subspace(ambient_dim, Matrix(0, ambient_dim))

    @staticmethod
    def full(ambient_dim: int) -> "Subspace":
        return Subspace(ambient_dim, Matrix.identity(ambient_dim))

    @property
    def dim(self) -> int:
        return self.basis.rows

    def vectors(self) -> list:
        return [self.basis.row(i) for i in range(self.basis.rows)]

    def _check(self, other: "Subspace"):
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatch("subspaces live in different ambient spaces")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def contains(self, v: Vector) -> bool:
        if len(v) != self.ambient_dim:
            raise DimensionMismatch("vector length differs from ambient dimension")
        residual = list(v)
        for i in range(self.basis.rows):
            row = self.basis.data[i]
            lead = next(j for j, x in enumerate(row) if not x.is_zero())
            c = residual[lead]
            if not c.is_zero():
                residual = [a - c * b for a, b in zip(residual, row)]
        return all(x.is_zero() for x in residual)

    def contains_subspace(self, other: "Subspace") -> bool:
        self._check(other)
        return all(self.contains(v) for v in other.vectors())

    def add(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.from_vectors(self.ambient_dim, self.vectors() + other.vectors())

    def intersect(self, other: "Subspace") -> "Subspace":
        """Zassenhaus: echelon of [[U|U],[W|0]]; rows with zero left half
        carry an intersection basis in the right half."""
        self._check(other)
        n = self.ambient_dim
        rows = []
        for v in self.vectors():
            rows.append(list(v) + list(v))
        for v in other.vectors():
            rows.append(list(v) + [ZERO] * n)
        if not rows:
            return Subspace.zero(n)
        red, _ = Matrix.from_rows(rows, 2 * n).rref()
        out = []
        for i in range(red.rows):
            left = red.data[i][:n]
            right = red.data[i][n:]
            if all(x.is_zero() for x in left) and not all(x.is_zero() for x in right):
                out.append(tuple(right))
        return Subspace.from_vectors(n, out)

    def __repr__(self) -> str:
        return f"Subspace(dim {self.dim} of F^{self.ambient_dim})"


def subspace_calculus(u: Subspace, w: Subspace, op: str):
    """Dispatch the subspace operations by name: sum/intersect/equal/contains."""
    if u.ambient_dim != w.ambient_dim:
        raise DimensionMismatch("ambient dimension mismatch")
    if op == "sum":
        return u.add(w)
    if op == "intersect":
        return u.intersect(w)
    if op == "equal":
        return u == w
    if op == "contains":
        return u.contains_subspace(w)
    raise ValueError(f"unknown subspace operation {op!r}")


# ---------------------------------------------------------------------------
# kernels, images, solving


def nullspace_and_image(m: Matrix) -> tuple[Subspace, Subspace]:
    """Kernel (subspace of F^cols) and column span (subspace of F^rows)."""
    red, pivots = m.rref()
    pivot_set = set(pivots)
    free = [j for j in range(m.cols) if j not in pivot_set]
    kernel_vectors = []
    for f in free:
        v = [ZERO] * m.cols
        v[f] = ONE
        for r, p in enumerate(pivots):
            v[p] = -red.data[r][f]
        kernel_vectors.append(tuple(v))
    kernel = Subspace.from_vectors(m.cols, kernel_vectors)
    image = Subspace.from_vectors(m.rows, [m.column(j) for j in range(m.cols)])
    return kernel, image


def kernel_of(m: Matrix) -> Subspace:
    return nullspace_and_image(m)[0]


def image_of(m: Matrix) -> Subspace:
    return nullspace_and_image(m)[1]


def linear_solve(m: Matrix, target: Vector) -> Optional[tuple[Vector, Subspace]]:
    """Particular solution of m x = target plus the solution kernel.

    Returns None when the target is not in the image (no solution).
    """
    if len(target) != m.rows:
        raise DimensionMismatch("target length differs from row count")
    aug = m.hstack(Matrix(m.rows, 1, [[t] for t in target]))
    red, pivots = aug.rref()
    if m.cols in pivots:
        return None
    x = [ZERO] * m.cols
    for r, p in enumerate(pivots):
        x[p] = red.data[r][m.cols]
    return tuple(x), kernel_of(m)


def solve_batch(m: Matrix, targets: Matrix) -> Optional[Matrix]:
    """Solve m X = targets for all columns at once; None if any fails."""
    if targets.rows != m.rows:
        raise DimensionMismatch("target rows differ from matrix rows")
    aug = m.hstack(targets)
    red, pivots = aug.rref()
    if any(p >= m.cols for p in pivots):
        return None
    out = Matrix(m.cols, targets.cols)
    for r, p in enumerate(pivots):
        out.data[p] = red.data[r][m.cols:]
    return out


def invert(m: Matrix) -> Optional[Matrix]:
    """Exact inverse of a square matrix, or None when singular."""
    if m.rows != m.cols:
        return None
    return solve_batch(m, Matrix.identity(m.rows))


def coordinates_in_basis(basis_vectors: Sequence[Vector], vectors: Sequence[Vector]) -> Optional[list]:
    """Express each vector in the given independent spanning set.

    Returns a list of coefficient tuples, or None if some vector is outside
    the span.  One echelon pass solves the whole batch.
    """
    if not vectors:
        return []
    n = len(vectors[0])
    cols = Matrix(n, len(basis_vectors), [[bv[i] for bv in basis_vectors] for i in range(n)])
    targets = Matrix(n, len(vectors), [[v[i] for v in vectors] for i in range(n)])
    sol = solve_batch(cols, targets)
    if sol is None:
        return None
    return [sol.column(j) for j in range(sol.cols)]


def extend_basis(inner: Subspace, outer: Subspace) -> list:
    """Vectors of `outer` extending a basis of `inner` to one of `outer`.

    The returned complement vectors are rows of outer's canonical basis, so
    the choice is deterministic.
    """
    if not outer.contains_subspace(inner):
        raise DimensionMismatch("inner subspace is not contained in outer")
    chosen = []
    current = inner
    for v in outer.vectors():
        if not current.contains(v):
            chosen.append(v)
            current = current.add(Subspace.from_vectors(outer.ambient_dim, [v]))
    return chosen
