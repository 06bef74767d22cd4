"""Explicit finite-dimensional modules over the Serre-free quantum affinization.

A module has a basis with a weight per vector and stores the generator
actions as exponential-polynomial families of matrices:

* ``x[(i, +1)]`` and ``x[(i, -1)]``: x^+_{i,m} and x^-_{i,m} for all m;
* ``phi[(i, +1)]``: phi^+_{i,m} for m >= 1, ``phi[(i, -1)]``: phi^-_{i,-m} for m >= 1.

phi^{+-}_{i,0} is k_i^{+-1}, read off from the weights.  Every module carries
one spectral class c: all mode-m coefficients are stored with c = 1 and the
true action is c^m times the stored one.  When phi is diagonal in the basis,
``lweights`` holds the eigenvalue series of each basis vector.
"""

from collections import defaultdict

from .cartan import WeightVector
from .exact_coeffs import ONE, ZERO, ExpPolyFamily, Rat, Sig, qint, separate_components
from .linalg import SparseMatrix, is_zero_vector, nullspace, rank, row_echelon
from .ymonoid import LWeight, Monomial, SpectralParam, YPolynomial, monomial_of_lweight

FIELD_Q = "Q(q)"
FIELD_QU = "Q(q)(u)"


class InconclusiveError(RuntimeError):
    """A criterion does not apply to the given input."""


class InvariantViolation(RuntimeError):
    """Module data violates a structural invariant."""


class ExplicitModule:
    def __init__(self, cd, labels, weights, x, phi, field=FIELD_Q, spectral_class=None,
                 lweights=None, grade=1, name=""):
        self.cd = cd
        self.labels = list(labels)
        self.weights = [w if isinstance(w, WeightVector) else WeightVector(w) for w in weights]
        self.dim = len(self.labels)
        zero = SparseMatrix(self.dim, self.dim)
        self.x = {}
        self.phi = {}
        for i in range(1, cd.n + 1):
            for sign in (1, -1):
                self.x[(i, sign)] = x.get((i, sign)) or ExpPolyFamily({}, zero)
                self.phi[(i, sign)] = phi.get((i, sign)) or ExpPolyFamily({}, zero, start=1)
        self.field = field
        self.spectral_class = spectral_class
        self.lweights = lweights
        self.grade = grade
        self.name = name

    def __repr__(self):
        return f"ExplicitModule({self.name or 'unnamed'}, dim={self.dim}, field={self.field})"

    # elementary operators
    def k_diag(self, i, power=1):
        ri = self.cd.r[i - 1]
        return SparseMatrix.identity(self.dim, [Rat.q(power * ri * self.cd.pairing(w, i))
                                                for w in self.weights])

    def x_at(self, i, sign, m):
        return self.x[(i, sign)].at(m)

    def phi_at(self, i, sign, n):
        """phi^+_{i,n} (sign +1) or phi^-_{i,n} (sign -1) for any integer n."""
        if sign > 0:
            if n < 0:
                return SparseMatrix(self.dim, self.dim)
            if n == 0:
                return self.k_diag(i, 1)
            return self.phi[(i, 1)].at(n)
        if n > 0:
            return SparseMatrix(self.dim, self.dim)
        if n == 0:
            return self.k_diag(i, -1)
        return self.phi[(i, -1)].at(-n)

    def families(self):
        """All generator families as (name, family) in a fixed order."""
        out = []
        for i in range(1, self.cd.n + 1):
            for sign in (1, -1):
                out.append((("x", i, sign), self.x[(i, sign)]))
            for sign in (1, -1):
                out.append((("phi", i, sign), self.phi[(i, sign)]))
        return out

    def weight_spaces(self):
        spaces = defaultdict(list)
        for idx, w in enumerate(self.weights):
            spaces[w].append(idx)
        return dict(spaces)

    def is_phi_diagonal(self):
        return self.lweights is not None

    def relabeled(self, labels, name=None):
        return ExplicitModule(self.cd, labels, self.weights, self.x, self.phi, self.field,
                              self.spectral_class, self.lweights, self.grade, name or self.name)

    def to_json(self):
        def fam(f):
            return [{"base": str(s.base), "u_exponent": s.uexp, "degree": s.deg,
                     "entries": [[i, j, str(v)] for (i, j), v in sorted(c.entries.items())]}
                    for s, c in ((s, f.terms[s]) for s in f.signatures())]
        return {
            "field": self.field,
            "spectral_class": self.spectral_class,
            "basis": [{"label": l, "weight": [str(c) for c in w]}
                      for l, w in zip(self.labels, self.weights)],
            "x": {f"{i},{'+' if s > 0 else '-'}": fam(self.x[(i, s)]) for (i, s) in sorted(self.x)},
            "phi": {f"{i},{'+' if s > 0 else '-'}": fam(self.phi[(i, s)]) for (i, s) in sorted(self.phi)},
        }


# power series of l-weight factors -------------------------------------------------

def _series_coeffs(const, roots, count):
    """Coefficients 0..count of const * prod (1 - z rho)^o with rho = q^s u^e."""
    coeffs = [const] + [ZERO] * count
    for (s, e), o in roots.items():
        rho = Rat.qu(s, e)
        if o > 0:
            fac = [Rat(_binom_signed(o, k)) * rho ** k for k in range(min(o, count) + 1)]
        else:
            n = -o
            fac = [Rat(_binom(n + k - 1, k)) * rho ** k for k in range(count + 1)]
        new = [ZERO] * (count + 1)
        for a, ca in enumerate(coeffs):
            if ca.is_zero():
                continue
            for b, cb in enumerate(fac):
                if a + b > count:
                    break
                new[a + b] = new[a + b] + ca * cb
        coeffs = new
    return coeffs


def _binom(n, k):
    from math import comb
    return comb(n, k)


def _binom_signed(o, k):
    return (-1) ** k * _binom(o, k)


def _plain_roots(roots):
    """Drop the spectral class from root keys: (c, s, e) -> (s, e)."""
    out = defaultdict(int)
    for (c, s, e), o in roots.items():
        out[(s, e)] += o
    return {k: o for k, o in out.items() if o}


def series_mode_family(const, roots, sign):
    """Scalar exp-poly data {Sig: Rat} of psi^+_m (sign +1) or psi^-_{-m} (sign -1), m >= 1."""
    roots = _plain_roots(roots)
    if sign < 0:
        # expansion at z = infinity: roots invert and the constant absorbs prod (-rho)^o
        new_const = const
        for (s, e), o in roots.items():
            new_const = new_const * (-Rat.qu(s, e)) ** o
        const = new_const
        roots = {(-s, -e): o for (s, e), o in roots.items()}
    sigs = []
    for (s, e), o in sorted(roots.items()):
        if o < 0:
            for d in range(-o):
                sigs.append(Sig(Rat.q(s), e, d))
    if not sigs:
        return {}
    n = len(sigs)
    coeffs = _series_coeffs(const, roots, n)
    return separate_components(coeffs[1:n + 1], sigs, start=1)


def phi_families_from_lweights(cd, lweights):
    """Diagonal phi families for modules whose basis vectors are l-weight vectors."""
    dim = len(lweights)
    phi = {}
    for i in range(1, cd.n + 1):
        for sign in (1, -1):
            terms = defaultdict(dict)
            for idx, lw in enumerate(lweights):
                const, roots = lw.series.get(i, (ONE, {}))
                for sig, val in series_mode_family(const, roots, sign).items():
                    if not val.is_zero():
                        terms[sig][(idx, idx)] = val
            phi[(i, sign)] = ExpPolyFamily({s: SparseMatrix(dim, dim, e) for s, e in terms.items()},
                                           SparseMatrix(dim, dim), start=1)
    return phi


# constructors ---------------------------------------------------------------

def kr_lweight(cd, r, a, j):
    """Eigenvalue series of v_j in kr_sl2(r, a)."""
    c, s = a
    roots = defaultdict(int)
    roots[(c, s - r, 0)] += 1
    roots[(c, s + r + 2, 0)] += 1
    roots[(c, s + r - 2 * j + 2, 0)] -= 1
    roots[(c, s + r - 2 * j, 0)] -= 1
    return LWeight(cd.fundamental_weight(1).scale(r - 2 * j), {1: (Rat.q(r - 2 * j), dict(roots))})


def kr_sl2(cd, r, a, field=FIELD_Q):
    """The (r+1)-dimensional evaluation module with the explicit sl2 action tables.

    Basis v_0..v_r; x^+_m v_j = (a q^{r-2j+2})^m [r-j+1] v_{j-1} and
    x^-_m v_j = (a q^{r-2j})^m [j+1] v_{j+1}.  Its highest monomial is
    Y_{a q^{1-r}} Y_{a q^{3-r}} ... Y_{a q^{r-1}}.
    """
    if cd.n != 1:
        raise ValueError("kr_sl2 needs rank-one Cartan data")
    a = a if isinstance(a, SpectralParam) else SpectralParam(*a)
    c, s = a
    dim = r + 1
    xp, xm = {}, {}
    for j in range(1, r + 1):
        xp[Sig(Rat.q(s + r - 2 * j + 2))] = SparseMatrix(dim, dim, {(j - 1, j): qint(r - j + 1)})
    for j in range(0, r):
        xm[Sig(Rat.q(s + r - 2 * j))] = SparseMatrix(dim, dim, {(j + 1, j): qint(j + 1)})
    zero = SparseMatrix(dim, dim)
    lweights = [kr_lweight(cd, r, a, j) for j in range(dim)]
    return ExplicitModule(
        cd, [f"v{j}" for j in range(dim)], [lw.lam for lw in lweights],
        {(1, 1): ExpPolyFamily(xp, zero), (1, -1): ExpPolyFamily(xm, zero)},
        phi_families_from_lweights(cd, lweights), field=field,
        spectral_class=c, lweights=lweights, name=f"W_{r}({a})")


def kr_sl2_string(cd, r, a, field=FIELD_Q):
    """W_{r,a} in the convention with highest monomial Y_a Y_{aq^2} ... Y_{aq^{2r-2}}."""
    a = a if isinstance(a, SpectralParam) else SpectralParam(*a)
    return kr_sl2(cd, r, a.times_q(r - 1) if r else a, field)


def fundamental_L(cd, lam, field=FIELD_Q):
    """One-dimensional module of weight lam with trivial x action and phi = 1."""
    lam = lam if isinstance(lam, WeightVector) else WeightVector(lam)
    if any(cd.pairing(lam, i) != 0 for i in range(1, cd.n + 1)):
        raise ValueError("fundamental_L needs lam(alpha_j^vee) = 0 for all j")
    lw = LWeight(lam, {i: (ONE, {}) for i in range(1, cd.n + 1)})
    return ExplicitModule(cd, ["1"], [lam], {}, {}, field=field, lweights=[lw], grade=0,
                          name=f"L{list(map(str, lam))}")


def trivial_module(cd, field=FIELD_Q):
    return fundamental_L(cd, cd.zero_weight(), field)


def with_field(module, field):
    """Same data viewed over another base field (scalar extension to Q(q)(u))."""
    return ExplicitModule(module.cd, module.labels, module.weights, module.x, module.phi, field,
                          module.spectral_class, module.lweights, module.grade, module.name)


# relation checks ------------------------------------------------------------

class RelationReport:
    CERTIFICATE = ("Every operator family is a finite exponential-polynomial sum in the modes, "
                   "so each relation is an exponential-polynomial identity; vanishing on a "
                   "window at least as long as the total signature count forces it everywhere "
                   "(the signature sequences are linearly independent).")

    def __init__(self, window):
        self.window = window
        self.violations = []
        self.checked = defaultdict(int)

    @property
    def ok(self):
        return not self.violations

    def fail(self, relation, detail):
        self.violations.append((relation, detail))

    def __repr__(self):
        return f"RelationReport(ok={self.ok}, checked={dict(self.checked)}, violations={self.violations[:3]})"

    def to_json(self):
        return {"holds": self.ok, "window": self.window, "checked": dict(sorted(self.checked.items())),
                "violations": [{"relation": r, "detail": d} for r, d in self.violations],
                "certificate": self.CERTIFICATE}


def default_window(module):
    return max([f.order() for _, f in module.families()] + [1]) + 1


def verify_relations(module, mode_window=None, max_report=20):
    """Check the defining relations of the algebra on a grid of modes.

    Modes range over -W..W for W = mode_window.
    """
    cd = module.cd
    W = mode_window or default_window(module)
    rep = RelationReport(W)
    modes = range(-W, W + 1)
    xs = {}
    phis = {}
    for i in range(1, cd.n + 1):
        for sign in (1, -1):
            for m in range(-W - 1, W + 2):
                xs[(i, sign, m)] = module.x_at(i, sign, m)
            for n in range(-2 * W - 1, 2 * W + 2):
                phis[(i, sign, n)] = module.phi_at(i, sign, n)

    def record(rel, detail):
        if len(rep.violations) < max_report:
            rep.fail(rel, detail)
        else:
            rep.violations.append((rel, "...")) if rep.violations[-1][1] != "..." else None

    # weight grading
    for i in range(1, cd.n + 1):
        alpha = cd.simple_root(i)
        for sign in (1, -1):
            for sig, mat in module.x[(i, sign)].terms.items():
                for (row, col) in mat.entries:
                    rep.checked["x weight grading"] += 1
                    expected = module.weights[col] + alpha.scale(sign)
                    if module.weights[row] != expected:
                        record("x weight grading", f"x^{'+' if sign > 0 else '-'}_{i} maps {module.labels[col]} "
                                      f"to {module.labels[row]} of wrong weight")
            for sig, mat in module.phi[(i, sign)].terms.items():
                for (row, col) in mat.entries:
                    rep.checked["phi weight"] += 1
                    if module.weights[row] != module.weights[col]:
                        record("phi weight", f"phi_{i} mixes weights at {module.labels[col]}")
    # [x+, x-] bracket
    for i in range(1, cd.n + 1):
        qi = Rat.q(cd.r[i - 1])
        denom = (qi - qi.inverse()).inverse()
        for j in range(1, cd.n + 1):
            for r in modes:
                for s in modes:
                    a, b = xs[(i, 1, r)], xs[(j, -1, s)]
                    lhs = a @ b - b @ a
                    if i == j:
                        rhs = (phis[(i, 1, r + s)] - phis[(i, -1, r + s)]) * denom
                    else:
                        rhs = SparseMatrix(module.dim, module.dim)
                    rep.checked["x+ x- bracket"] += 1
                    if lhs != rhs:
                        record("x+ x- bracket", f"i={i}, j={j}, r={r}, s={s}")
    # phi-x exchange and x-x exchange in polynomial form
    for i in range(1, cd.n + 1):
        for j in range(1, cd.n + 1):
            for sign in (1, -1):
                Q = Rat.q(sign * cd.B[i - 1][j - 1])
                for psign, rel in ((1, "phi+ x exchange"), (-1, "phi- x exchange")):
                    for n in modes:
                        for b in modes:
                            p0, p1 = phis[(i, psign, n)], phis[(i, psign, n - 1)]
                            x0, x1 = xs[(j, sign, b - 1)], xs[(j, sign, b)]
                            lhs = p0 @ x0 - (p1 @ x1) * Q
                            rhs = (x0 @ p0) * Q - x1 @ p1
                            rep.checked[rel] += 1
                            if lhs != rhs:
                                record(rel, f"i={i}, j={j}, sign={sign}, n={n}, b={b}")
                for a in modes:
                    for b in modes:
                        lhs = xs[(i, sign, a)] @ xs[(j, sign, b - 1)] - \
                            (xs[(i, sign, a - 1)] @ xs[(j, sign, b)]) * Q
                        rhs = (xs[(j, sign, b - 1)] @ xs[(i, sign, a)]) * Q - \
                            xs[(j, sign, b)] @ xs[(i, sign, a - 1)]
                        rep.checked["x x exchange"] += 1
                        if lhs != rhs:
                            record("x x exchange", f"i={i}, j={j}, sign={sign}, a={a}, b={b}")
    # [h, x] through h eigenvalues when phi is diagonal
    if module.lweights is not None:
        _check_h_relation(module, xs, W, rep, record)
    return rep


def h_eigenvalue(lw, i, m):
    """Eigenvalue of h_{i,m} (m != 0) from the logarithm of the series."""
    const, roots = lw.series.get(i, (ONE, {}))
    total = ZERO
    for (s, e), o in _plain_roots(roots).items():
        total = total + o * Rat.qu(s, e) ** m
    q = Rat.q(1)
    factor = (Rat(m) * (q - q.inverse())).inverse()
    return -total * factor if m > 0 else total * (-factor)


def _check_h_relation(module, xs, W, rep, record):
    cd = module.cd
    for i in range(1, cd.n + 1):
        for j in range(1, cd.n + 1):
            for m in list(range(-W, 0)) + list(range(1, W + 1)):
                coef = qint(m * cd.B[i - 1][j - 1]) * Rat(1) / Rat(m)
                hdiag = [h_eigenvalue(lw, i, m) for lw in module.lweights]
                for sign in (1, -1):
                    for r in range(-W, W + 1):
                        xr = module.x_at(j, sign, r)
                        xmr = module.x_at(j, sign, m + r)
                        ok = True
                        for (row, col), val in xr.entries.items():
                            lhs = (hdiag[row] - hdiag[col]) * val
                            if lhs != xmr.get(row, col) * coef * sign:
                                ok = False
                        for (row, col), val in xmr.entries.items():
                            if (row, col) not in xr.entries:
                                ok = False
                        rep.checked["h x bracket"] += 1
                        if not ok:
                            record("h x bracket", f"i={i}, j={j}, m={m}, r={r}, sign={sign}")


# l-weights and q-characters -------------------------------------------------

def lweight_decomposition(module):
    """List of (LWeight, dimension, basis of the generalized eigenspace)."""
    if module.lweights is not None:
        groups = {}
        order = []
        for idx, lw in enumerate(module.lweights):
            if lw not in groups:
                groups[lw] = []
                order.append(lw)
            groups[lw].append(idx)
        out = []
        for lw in order:
            vecs = []
            for idx in groups[lw]:
                v = [ZERO] * module.dim
                v[idx] = ONE
                vecs.append(v)
            out.append((lw, len(groups[lw]), vecs))
        return out
    return _generalized_decomposition(module)


def qcharacter(module):
    """Sum over l-weights of dimension times the monomial (after u = 1)."""
    terms = defaultdict(int)
    for lw, dim, _ in lweight_decomposition(module):
        if module.field == FIELD_QU:
            lw = lw.at_u1()
        terms[monomial_of_lweight(module.cd, lw)] += dim
    return YPolynomial(dict(terms))


def highest_monomial(module, vec_index=0):
    lw = lweight_decomposition(module)[0][0] if module.lweights is None else module.lweights[vec_index]
    if module.field == FIELD_QU:
        lw = lw.at_u1()
    return monomial_of_lweight(module.cd, lw)


def _check_phi_commute(module, mats):
    for a in range(len(mats)):
        for b in range(a + 1, len(mats)):
            if mats[a] @ mats[b] != mats[b] @ mats[a]:
                raise InvariantViolation("phi operators do not commute")


def _generalized_decomposition(module):
    """Joint generalized eigenspaces of the phi operators, for non-diagonal phi.

    Eigenvalues are found as roots of characteristic polynomials in the base
    field; the series of each joint eigenspace is rebuilt from its eigenvalues
    on the first few modes and factored over spectral parameters q^s.
    """
    from .spectral import generalized_eigenspaces, series_from_modes
    cd = module.cd
    results = []
    for weight, idxs in module.weight_spaces().items():
        # operators restricted to the weight space
        ops = []
        keys = []
        for i in range(1, cd.n + 1):
            fam = module.phi[(i, 1)]
            count = max(fam.order(), 1)
            for m in range(1, count + 1):
                ops.append(_restrict(fam.at(m), idxs))
                keys.append((i, 1, m))
            fam = module.phi[(i, -1)]
            for m in range(1, max(fam.order(), 1) + 1):
                ops.append(_restrict(fam.at(m), idxs))
                keys.append((i, -1, m))
        _check_phi_commute(module, ops)
        spaces = generalized_eigenspaces(ops, len(idxs))
        for basis, evals in spaces:
            series = {}
            for i in range(1, cd.n + 1):
                ri = cd.r[i - 1]
                const = Rat.q(ri * cd.pairing(weight, i))
                count = max(module.phi[(i, 1)].order(), 1)
                vals = [evals[keys.index((i, 1, m))] for m in range(1, count + 1)]
                sigs = module.phi[(i, 1)].signatures()
                series[i] = series_from_modes(const, vals, sigs, module.spectral_class or "c")
            full = []
            for v in basis:
                w = [ZERO] * module.dim
                for k, idx in enumerate(idxs):
                    w[idx] = v[k]
                full.append(w)
            results.append((LWeight(weight, series), len(basis), full))
    return results


def _restrict(mat, idxs):
    pos = {idx: k for k, idx in enumerate(idxs)}
    return SparseMatrix(len(idxs), len(idxs), {(pos[a], pos[b]): v for (a, b), v in mat.entries.items()
                                               if a in pos and b in pos})


# highest weight and simplicity ---------------------------------------------

def mode_block(family):
    """Modes whose images span every mode's image (annihilator order many)."""
    S = family.order()
    start = family.start if family.start is not None else 0
    return range(start, start + S)


def block_images(module, vec, families=("x-", "phi")):
    """Images of vec under the mode blocks of the requested generator families."""
    out = []
    for (kind, i, sign), fam in module.families():
        tag = kind + ("+" if sign > 0 else "-") if kind == "x" else kind
        if tag not in families and kind not in families:
            continue
        for coeff in fam.terms.values():
            img = coeff.apply(vec)
            if not is_zero_vector(img):
                out.append(img)
    return out


def span_closure(module, vectors, families):
    """Basis of the smallest subspace containing vectors and stable under the families."""
    basis, pivots = row_echelon(vectors) if vectors else ([], [])
    queue = list(basis)
    while queue:
        v = queue.pop()
        for img in block_images(module, v, families):
            new, newp = row_echelon(basis + [img])
            if len(newp) > len(pivots):
                basis, pivots = new, newp
                queue.append(img)
    return basis


def is_lhw(module, vec):
    """vec is killed by every x^+ mode, is a phi eigenvector, and generates the module."""
    for (kind, i, sign), fam in module.families():
        if kind == "x" and sign > 0:
            for coeff in fam.terms.values():
                if not is_zero_vector(coeff.apply(vec)):
                    return False
        if kind == "phi":
            for coeff in fam.terms.values():
                img = coeff.apply(vec)
                if rank([vec, img]) > 1:
                    return False
    return len(span_closure(module, [vec], ("x-", "phi"))) == module.dim


def singular_vectors(module):
    """Basis of the common kernel of all x^+ modes."""
    rows = []
    for (kind, i, sign), fam in module.families():
        if kind == "x" and sign > 0:
            for coeff in fam.terms.values():
                for r in range(module.dim):
                    row = [coeff.get(r, c) for c in range(module.dim)]
                    if not is_zero_vector(row):
                        rows.append(row)
    return nullspace(rows, module.dim)


def submodule(module, vectors):
    """Basis of the submodule generated by vectors."""
    return span_closure(module, vectors, ("x+", "x-", "phi"))


def _top_line(module):
    """Index of the unique basis vector of maximal weight, or None."""
    cd = module.cd
    maximal = {w for w in module.weights
               if not any(w2 != w and cd.in_cone(w, w2) for w2 in module.weights)}
    if len(maximal) != 1:
        return None
    top = maximal.pop()
    idxs = module.weight_spaces()[top]
    if len(idxs) != 1 or not all(cd.in_cone(w, top) for w in module.weights):
        return None
    return idxs[0]


def is_simple_criterion(module):
    """Sufficient/necessary simplicity tests on explicit data.

    With one-dimensional l-weight spaces and distinct series, the module is
    simple iff the graph of nonzero x-components between l-weight lines is
    strongly connected.  Otherwise, for a module with a unique top line
    generating it, the module is simple iff every vector killed by all x^+
    modes lies on the top line.  Anything else is inconclusive.
    """
    if module.lweights is not None and len(set(module.lweights)) == module.dim:
        adj = defaultdict(set)
        for (kind, i, sign), fam in module.families():
            if kind != "x":
                continue
            for coeff in fam.terms.values():
                for (row, col) in coeff.entries:
                    adj[col].add(row)
        return _strongly_connected(adj, module.dim)
    top = _top_line(module)
    if top is None:
        raise InconclusiveError("no unique top weight line and l-weight spaces are not all one-dimensional")
    v = [ZERO] * module.dim
    v[top] = ONE
    if len(span_closure(module, [v], ("x-", "phi"))) != module.dim:
        return False
    return len(singular_vectors(module)) == 1


def _strongly_connected(adj, n):
    def reach(start, edges):
        seen = {start}
        stack = [start]
        while stack:
            a = stack.pop()
            for b in edges.get(a, ()):
                if b not in seen:
                    seen.add(b)
                    stack.append(b)
        return seen
    if n <= 1:
        return True
    radj = defaultdict(set)
    for a, bs in adj.items():
        for b in bs:
            radj[b].add(a)
    return len(reach(0, adj)) == n and len(reach(0, radj)) == n
