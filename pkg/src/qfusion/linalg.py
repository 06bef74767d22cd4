"""Small exact linear algebra over Q(q, u): sparse matrices and dense vectors."""

from .exact_coeffs import ONE, ZERO, Rat, as_rat


class SparseMatrix:
    """Matrix with Rat entries stored as {(row, col): value}, zeros omitted."""

    __slots__ = ("nrows", "ncols", "entries")

    def __init__(self, nrows, ncols, entries=None):
        self.nrows = nrows
        self.ncols = ncols
        self.entries = {k: v for k, v in (entries or {}).items() if not v.is_zero()}

    @staticmethod
    def identity(n, diag=None):
        if diag is None:
            return SparseMatrix(n, n, {(i, i): ONE for i in range(n)})
        return SparseMatrix(n, n, {(i, i): as_rat(d) for i, d in enumerate(diag)})

    @staticmethod
    def zeros(nrows, ncols):
        return SparseMatrix(nrows, ncols)

    def is_zero(self):
        return not self.entries

    def __add__(self, other):
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out[k] + v if k in out else v
        return SparseMatrix(self.nrows, self.ncols, out)

    def __neg__(self):
        return SparseMatrix(self.nrows, self.ncols, {k: -v for k, v in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        scalar = as_rat(scalar)
        if scalar.is_zero():
            return SparseMatrix(self.nrows, self.ncols)
        if scalar.is_one():
            return self
        return SparseMatrix(self.nrows, self.ncols, {k: v * scalar for k, v in self.entries.items()})

    __rmul__ = __mul__

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        by_row = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        out = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                key = (i, j)
                out[key] = out[key] + a * b if key in out else a * b
        return SparseMatrix(self.nrows, other.ncols, out)

    def apply(self, vec):
        out = [ZERO] * self.nrows
        for (i, j), v in self.entries.items():
            if not vec[j].is_zero():
                out[i] = out[i] + v * vec[j]
        return out

    def kron(self, other):
        out = {}
        for (i, j), a in self.entries.items():
            for (k, l), b in other.entries.items():
                out[(i * other.nrows + k, j * other.ncols + l)] = a * b
        return SparseMatrix(self.nrows * other.nrows, self.ncols * other.ncols, out)

    def map(self, fn):
        return SparseMatrix(self.nrows, self.ncols, {k: fn(v) for k, v in self.entries.items()})

    def get(self, i, j):
        return self.entries.get((i, j), ZERO)

    def column(self, j):
        col = [ZERO] * self.nrows
        for (i, jj), v in self.entries.items():
            if jj == j:
                col[i] = v
        return col

    def permuted(self, perm):
        """Relabel rows and columns: new index perm[old]."""
        return SparseMatrix(self.nrows, self.ncols,
                            {(perm[i], perm[j]): v for (i, j), v in self.entries.items()})

    def __eq__(self, other):
        return (isinstance(other, SparseMatrix)
                and (self.nrows, self.ncols) == (other.nrows, other.ncols)
                and self.entries == other.entries)

    __hash__ = None

    def __repr__(self):
        items = ", ".join(f"{k}: {v}" for k, v in sorted(self.entries.items()))
        return f"SparseMatrix({self.nrows}x{self.ncols}, {{{items}}})"


def zero_vector(n):
    return [ZERO] * n


def unit_vector(n, i, value=ONE):
    v = [ZERO] * n
    v[i] = as_rat(value)
    return v


def is_zero_vector(v):
    return all(x.is_zero() for x in v)


def row_echelon(rows):
    """Reduced row echelon form over the field; returns (rows, pivot columns)."""
    rows = [list(r) for r in rows if not is_zero_vector(r)]
    pivots = []
    out = []
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((k for k, r in enumerate(rows) if not r[col].is_zero()), None)
        if piv is None:
            continue
        prow = rows.pop(piv)
        inv = prow[col].inverse()
        prow = [x * inv for x in prow]
        rows = [_axpy(r, prow, -r[col]) if not r[col].is_zero() else r for r in rows]
        out = [_axpy(r, prow, -r[col]) if not r[col].is_zero() else r for r in out]
        out.append(prow)
        pivots.append(col)
        rows = [r for r in rows if not is_zero_vector(r)]
    return out, pivots


def _axpy(r, p, f):
    return [a + f * b for a, b in zip(r, p)]


def rank(rows):
    return len(row_echelon(rows)[1])


def nullspace(matrix_rows, ncols):
    """Basis of {x : A x = 0} for A given by its rows."""
    ech, pivots = row_echelon(matrix_rows) if matrix_rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [ZERO] * ncols
        x[f] = ONE
        for row, p in zip(ech, pivots):
            x[p] = -row[f]
        basis.append(x)
    return basis


def in_span(rows, vec):
    return rank(list(rows) + [vec]) == rank(rows)


def solve_in_span(basis, vec):
    """Coefficients c with sum c_k basis_k = vec, or None if not in the span."""
    n = len(basis)
    if n == 0:
        return [] if is_zero_vector(vec) else None
    # columns are basis vectors: solve via augmented rows
    dim = len(vec)
    aug = [[basis[k][i] for k in range(n)] + [vec[i]] for i in range(dim)]
    ech, pivots = row_echelon(aug)
    if n in pivots:
        return None
    coeffs = [ZERO] * n
    for row, p in zip(ech, pivots):
        coeffs[p] = row[n]
    return coeffs


__all__ = ["SparseMatrix", "Rat", "zero_vector", "unit_vector", "is_zero_vector",
           "row_echelon", "rank", "nullspace", "in_span", "solve_in_span"]
