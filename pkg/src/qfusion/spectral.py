"""Joint generalized eigenspaces of commuting matrices over Q(q).

Used for modules whose phi operators are not diagonal in the given basis,
such as specializations of A-forms.  Eigenvalues must lie in Q(q); they
are found by factoring characteristic polynomials with flint (the formal
variable u plays the role of the spectral variable X here).
"""

from collections import defaultdict

from .exact_coeffs import ONE, ZERO, Rat, _CTX, _U
from .linalg import SparseMatrix, nullspace, solve_in_span


class NotSplitError(ValueError):
    """An eigenvalue lies outside Q(q)."""


def charpoly_rat(mat):
    """det(X I - mat) as an element of Q(q, u) with X = u (mat must not involve u)."""
    n = mat.nrows
    X = Rat.u(1)
    m = [[(X if i == j else ZERO) - mat.get(i, j) for j in range(n)] for i in range(n)]
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


def eigenvalues(mat):
    """{eigenvalue: algebraic multiplicity} for a matrix over Q(q)."""
    if any(v.depends_on_u() for v in mat.entries.values()):
        raise ValueError("eigenvalues are computed only for matrices over Q(q)")
    cp = charpoly_rat(mat)
    poly = cp.num
    out = {}
    _, factors = poly.factor()
    for f, mult in factors:
        deg = f.degrees()[1]
        if deg == 0:
            continue
        if deg != 1:
            raise NotSplitError(f"characteristic polynomial has irreducible factor {f}")
        lead = _CTX.constant(0)
        const = _CTX.constant(0)
        for (qe, ue), c in f.to_dict().items():
            term = _CTX.constant(int(c)) * _CTX.gens()[0] ** qe
            if ue == 1:
                lead = lead + term
            else:
                const = const + term
        val = -Rat(const, lead)
        out[val] = out.get(val, 0) + mult
    return out


def _power(mat, k):
    out = SparseMatrix.identity(mat.nrows)
    for _ in range(k):
        out = out @ mat
    return out


def _restricted(mat, basis):
    """Matrix of mat on the invariant subspace spanned by basis (columns are coordinates)."""
    entries = {}
    for c, v in enumerate(basis):
        coords = solve_in_span(basis, mat.apply(v))
        if coords is None:
            raise ValueError("subspace is not invariant")
        for r, x in enumerate(coords):
            if not x.is_zero():
                entries[(r, c)] = x
    return SparseMatrix(len(basis), len(basis), entries)


def _combine(basis, coords_list):
    out = []
    for coords in coords_list:
        v = [ZERO] * len(basis[0])
        for c, b in zip(coords, basis):
            if not c.is_zero():
                v = [x + c * y for x, y in zip(v, b)]
        out.append(v)
    return out


def generalized_eigenspaces(ops, dim):
    """Split Q(q)^dim into joint generalized eigenspaces of commuting ops.

    Returns a list of (basis, eigenvalues) with one eigenvalue per operator.
    """
    std = [[ONE if i == j else ZERO for i in range(dim)] for j in range(dim)]
    pieces = [(std, [])]
    for op in ops:
        refined = []
        for basis, evals in pieces:
            local = _restricted(op, basis)
            for lam, mult in sorted(eigenvalues(local).items(), key=lambda kv: str(kv[0])):
                shifted = local - SparseMatrix.identity(len(basis)) * lam
                rows = [[_power(shifted, mult).get(i, j) for j in range(len(basis))]
                        for i in range(len(basis))]
                kernel = nullspace(rows, len(basis))
                refined.append((_combine(basis, kernel), evals + [lam]))
        pieces = refined
    return pieces


def series_from_modes(const, values, sigs, spectral_class, shift_bound=None):
    """Rebuild const * prod (1 - z q^s)^o from the mode values psi_1..psi_N.

    ``sigs`` are the phi family signatures; their bases bound the poles.
    Returns (const, roots) with root keys (class, s, 0).
    """
    poles = defaultdict(int)
    for sig in sigs:
        c, qe, ue = sig.base.monomial_exponents() if sig.base.is_monomial() else (None, None, None)
        if c != 1 or ue != 0 or sig.uexp != 0:
            raise ValueError(f"signature {sig} is not of the form q^s")
        poles[qe] = max(poles[qe], sig.deg + 1)
    D = [ONE]
    for s, mult in poles.items():
        for _ in range(mult):
            D = _poly_mul(D, [ONE, -Rat.q(s)])
    n = len(D) - 1
    psi = [const] + list(values) + [ZERO] * max(0, n + 1 - len(values) - 1)
    numer = [sum((D[t] * psi[k - t] for t in range(k + 1) if t < len(D)), ZERO) for k in range(n + 1)]
    roots = defaultdict(int)
    for s, mult in poles.items():
        roots[(spectral_class, s, 0)] -= mult
    lo = min(poles, default=0) - 4 * (shift_bound or 4)
    hi = max(poles, default=0) + 4 * (shift_bound or 4)
    while len(numer) > 1 and numer[-1].is_zero():
        numer.pop()
    for s in range(lo, hi + 1):
        while len(numer) > 1:
            quo, rem = _divide_linear(numer, Rat.q(s))
            if rem.is_zero():
                numer = quo
                roots[(spectral_class, s, 0)] += 1
            else:
                break
    if len(numer) != 1:
        raise NotSplitError("eigenvalue series numerator is not a product of (1 - z q^s)")
    if numer[0] != const:
        raise ValueError("series constant mismatch")
    return const, {k: o for k, o in roots.items() if o}


def _poly_mul(a, b):
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def _divide_linear(p, rho):
    """Divide p(z) by (1 - rho z); returns (quotient, remainder)."""
    # p(z) = (1 - rho z) Q(z) + R, Q = sum q_k z^k; solve from the top degree down
    n = len(p) - 1
    quo = [ZERO] * n
    rest = list(p)
    for k in range(n, 0, -1):
        c = rest[k] / (-rho)
        quo[k - 1] = c
        rest[k] = ZERO
        rest[k - 1] = rest[k - 1] - c
    return quo, rest[0]
