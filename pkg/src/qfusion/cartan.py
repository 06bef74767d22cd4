"""Generalized symmetrizable Cartan matrices, the condition on large off-diagonal entries and weights.

Weights live in a fixed basis {Lambda_1..Lambda_n, delta_1..delta_{n-l}}
where l is the rank of C.  The coroot alpha_i^vee reads off the i-th
coordinate, so a simple root alpha_j has Lambda-coordinates given by the
j-th column of C.  For degenerate C the delta coordinates of the simple
roots are a fixed completion built from a basis of ker C.
"""

from fractions import Fraction
from math import gcd

import sympy

from .exact_coeffs import ONE, ZERO, Rat, qint


class CartanError(ValueError):
    """Input matrix is not a symmetrizable generalized Cartan matrix."""


class WeightVector(tuple):
    """Rational coordinates in the basis {Lambda_i} + {delta_t}."""

    def __new__(cls, coords):
        return super().__new__(cls, (Fraction(c) for c in coords))

    def __add__(self, other):
        if len(self) != len(other):
            raise ValueError("weight length mismatch")
        return WeightVector(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        if len(self) != len(other):
            raise ValueError("weight length mismatch")
        return WeightVector(a - b for a, b in zip(self, other))

    def __neg__(self):
        return WeightVector(-a for a in self)

    def scale(self, k):
        return WeightVector(k * a for a in self)

    def __repr__(self):
        return "W(" + ",".join(str(c) for c in self) + ")"


class CartanData:
    """Validated Cartan matrix with minimal symmetrizer and weight realization."""

    def __init__(self, C, labels=None):
        C = [[int(x) for x in row] for row in C]
        n = len(C)
        if n == 0 or any(len(row) != n for row in C):
            raise CartanError("Cartan matrix must be square and nonempty")
        for i in range(n):
            if C[i][i] != 2:
                raise CartanError(f"diagonal entry C[{i+1},{i+1}] must be 2")
            for j in range(n):
                if i != j:
                    if C[i][j] > 0:
                        raise CartanError(f"off-diagonal entry C[{i+1},{j+1}] is positive")
                    if (C[i][j] == 0) != (C[j][i] == 0):
                        raise CartanError(f"C[{i+1},{j+1}] and C[{j+1},{i+1}] must vanish together")
        self.C = tuple(tuple(row) for row in C)
        self.n = n
        self.labels = tuple(labels) if labels else tuple(str(i + 1) for i in range(n))
        self.r = _symmetrizer(C)
        self.B = tuple(tuple(self.r[i] * C[i][j] for j in range(n)) for i in range(n))
        mat = sympy.Matrix(C)
        self.rank = mat.rank()
        self.dim = 2 * n - self.rank
        # completion rows: transpose of a kernel basis of C, made integral
        kappa = []
        for vec in mat.nullspace():
            den = 1
            for x in vec:
                den = den * sympy.Rational(x).q // gcd(den, sympy.Rational(x).q)
            kappa.append([Fraction(int(x * den)) for x in vec])
        self.kappa = tuple(tuple(row) for row in kappa)
        self._roots = tuple(
            WeightVector([C[i][j] for i in range(n)] + [row[j] for row in self.kappa])
            for j in range(n))
        # alpha basis solver for heights
        A = sympy.Matrix([[self._roots[j][k] for j in range(n)] for k in range(self.dim)])
        left = (A.T * A).inv() * A.T
        self._left_inverse = tuple(tuple(Fraction(int(x.p), int(x.q)) for x in left.row(j))
                                   for j in range(n))

    # basic accessors
    def index(self, i):
        """Convert a 1-based node label into a 0-based index."""
        if not 1 <= i <= self.n:
            raise IndexError(f"node {i} outside 1..{self.n}")
        return i - 1

    def __eq__(self, other):
        return isinstance(other, CartanData) and self.C == other.C

    def __hash__(self):
        return hash(self.C)

    def __repr__(self):
        return f"CartanData({[list(r) for r in self.C]}, r={self.r})"

    # weights (nodes are 1-based throughout the public API)
    def zero_weight(self):
        return WeightVector([0] * self.dim)

    def fundamental_weight(self, i):
        v = [0] * self.dim
        v[self.index(i)] = 1
        return WeightVector(v)

    def simple_root(self, j):
        return self._roots[self.index(j)]

    def pairing(self, lam, i):
        """lam(alpha_i^vee)."""
        if len(lam) != self.dim:
            raise ValueError("malformed weight vector")
        return lam[self.index(i)]

    def pairings(self, lam):
        return tuple(self.pairing(lam, i) for i in range(1, self.n + 1))

    def nu(self, lam):
        """alpha_i(nu(lam)) = r_i lam(alpha_i^vee) for each i: the data of nu(lam) used here."""
        return tuple(self.r[i] * lam[i] for i in range(self.n))

    def root_coordinates(self, mu):
        """Solve mu = sum l_j alpha_j; returns the tuple (l_j) or None."""
        coords = tuple(sum(a * b for a, b in zip(row, mu)) for row in self._left_inverse)
        back = [sum(coords[j] * self._roots[j][k] for j in range(self.n)) for k in range(self.dim)]
        return coords if all(x == y for x, y in zip(back, mu)) else None

    def height(self, mu):
        coords = self.root_coordinates(mu)
        if coords is None or any(c < 0 or c.denominator != 1 for c in coords):
            raise ValueError(f"{mu!r} is not in Q+")
        return int(sum(coords))

    def is_dominant(self, lam):
        return all(self.pairing(lam, i) >= 0 for i in range(1, self.n + 1))

    def in_cone(self, mu, lam):
        """mu in S(lam), i.e. lam - mu in Q+."""
        coords = self.root_coordinates(lam - mu)
        return coords is not None and all(c >= 0 and c.denominator == 1 for c in coords)

    def q_i(self, i, power=1):
        return Rat.q(self.r[self.index(i)] * power)


def _symmetrizer(C):
    n = len(C)
    r = [None] * n
    for start in range(n):
        if r[start] is not None:
            continue
        comp = [start]
        r[start] = Fraction(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if j != i and C[i][j] != 0:
                    # r_i C_ij = r_j C_ji
                    val = r[i] * C[i][j] / C[j][i]
                    if r[j] is None:
                        r[j] = val
                        comp.append(j)
                        stack.append(j)
                    elif r[j] != val:
                        raise CartanError("matrix is not symmetrizable")
        den = 1
        for i in comp:
            den = den * r[i].denominator // gcd(den, r[i].denominator)
        ints = [int(r[i] * den) for i in comp]
        g = 0
        for x in ints:
            g = gcd(g, x)
        for i, x in zip(comp, ints):
            r[i] = x // g
    return tuple(int(x) for x in r)


def validate(C, labels=None):
    return CartanData(C, labels)


def check_condition_20(cd):
    """(C_ij < -1) => (r_i = -C_ji = 1); cross-checks the consequences when it holds."""
    n, C, r = cd.n, cd.C, cd.r
    ok = all(not (C[i][j] < -1) or (r[i] == 1 and -C[j][i] == 1)
             for i in range(n) for j in range(n))
    if ok:
        failures = condition_consequence_failures(cd)
        if failures:
            raise AssertionError(f"the condition holds but consequences fail: {failures}")
    return ok


def condition_consequence_failures(cd):
    """Names of the consequences 1-6 of the condition that fail (empty when all hold)."""
    n, C, r = cd.n, cd.C, cd.r
    bad = []
    if not all(r[i] >= -C[j][i] for i in range(n) for j in range(n)):
        bad.append(1)
    if not all(i == j or r[i] == 1 or C[i][j] in (-1, 0) for i in range(n) for j in range(n)):
        bad.append(2)
    if not all(r[i] != 1 or j == i or C[i][j] == 0 or C[j][i] == -1
               for i in range(n) for j in range(n)):
        bad.append(3)
    if not all(r[i] <= 1 or C[i][j] >= 0 or C[i][j] == -1 for i in range(n) for j in range(n)):
        bad.append(4)
    for i in range(n):
        for j in range(n):
            if r[i] > 1 and C[i][j] < 0:
                if not ((C[j][i] == -1 and r[i] == r[j]) or (C[j][i] == -r[i] and r[j] == 1)):
                    bad.append(5)
    if quantized_cartan_det(cd).is_zero():
        bad.append(6)
    return sorted(set(bad))


def quantized_cartan(cd):
    """C(q): diagonal q_i + q_i^-1, off-diagonal [C_ij]_q."""
    n = cd.n
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == j:
                row.append(Rat.q(cd.r[i]) + Rat.q(-cd.r[i]))
            else:
                row.append(qint(cd.C[i][j]))
        out.append(row)
    return out


def quantized_cartan_det(cd):
    m = [list(row) for row in quantized_cartan(cd)]
    n = len(m)
    det = ONE
    for col in range(n):
        piv = next((k for k in range(col, n) if not m[k][col].is_zero()), None)
        if piv is None:
            return ZERO
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det = det * m[col][col]
        inv = m[col][col].inverse()
        for k in range(col + 1, n):
            if not m[k][col].is_zero():
                f = m[k][col] * inv
                m[k] = [a - f * b for a, b in zip(m[k], m[col])]
    return det


FIXTURES = {
    "sl2": [[2]],
    "sl3": [[2, -1], [-1, 2]],
    "B2": [[2, -1], [-2, 2]],
    "G2": [[2, -1], [-3, 2]],
    "A1-affine": [[2, -2], [-2, 2]],
}


def fixture(name):
    try:
        return CartanData(FIXTURES[name])
    except KeyError:
        raise KeyError(f"unknown Cartan fixture {name!r}; known: {sorted(FIXTURES)}") from None
