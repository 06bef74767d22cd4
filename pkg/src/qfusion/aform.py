"""A-forms over the local ring A = {f in Q(q)(u) regular at u = 1}.

A lattice is stored per weight as a canonical (u-1)-adic echelon basis:
each basis vector has a pivot entry exactly (1-u)^e, pivots are strictly
increasing, entries below a pivot vanish, and entries of earlier vectors in
a later pivot column are reduced to a truncated (1-u)-adic expansion of
degree < e.  Two lattices are equal iff their canonical bases are equal.
"""

from collections import defaultdict

from .exact_coeffs import ONE, ZERO, ExpPolyFamily, Rat, Sig, separate_components
from .linalg import SparseMatrix, is_zero_vector, solve_in_span
from .modules_explicit import FIELD_Q, FIELD_QU, ExplicitModule, _top_line, is_lhw, with_field

ONE_MINUS_U = ONE - Rat.u(1)


class LatticeError(RuntimeError):
    """Closure did not stabilize or a coefficient left A."""


def _w_power(e):
    return ONE_MINUS_U ** e


def truncated_expansion(f, e):
    """Sum_{v<=k<e} c_k (1-u)^k with c_k in Q(q): the (1-u)-adic Laurent terms of f below e.

    f minus this lies in (1-u)^e A, and it depends only on f mod (1-u)^e A.
    """
    if f.is_zero():
        return ZERO
    v = f.u1_valuation()
    out = ZERO
    rest = f / _w_power(v)
    for k in range(v, e):
        if rest.is_zero():
            break
        c = rest.at_u1()
        out = out + c * _w_power(k)
        rest = (rest - c) / ONE_MINUS_U
    return out


def hermite(vectors, ncols):
    """Canonical A-basis (list of (vector, pivot, exponent)) of the A-span of vectors."""
    rows = [list(v) for v in vectors if not is_zero_vector(v)]
    basis = []
    for col in range(ncols):
        cands = [(r[col].u1_valuation(), k) for k, r in enumerate(rows) if not r[col].is_zero()]
        if not cands:
            continue
        e, k = min(cands)
        prow = rows.pop(k)
        unit = prow[col] / _w_power(e)
        inv = unit.inverse()
        prow = [x * inv for x in prow]
        new_rows = []
        for r in rows:
            if not r[col].is_zero():
                f = r[col] / _w_power(e)
                r = [a - f * b for a, b in zip(r, prow)]
            if not is_zero_vector(r):
                new_rows.append(r)
        rows = new_rows
        basis.append([prow, col, e])
    # reduce entries above pivots
    for k in range(len(basis)):
        vec_k, col_k, e_k = basis[k]
        for j in range(k):
            vec_j = basis[j][0]
            x = vec_j[col_k]
            if x.is_zero():
                continue
            target = truncated_expansion(x, e_k)
            f = (x - target) / _w_power(e_k)
            basis[j][0] = [a - f * b for a, b in zip(vec_j, vec_k)]
    return [tuple(b) for b in basis]


class ALattice:
    """A-submodule of a Q(q)(u)-module, stored by weight."""

    def __init__(self, ambient, generators=()):
        self.ambient = ambient
        self.blocks = {}
        self._add(list(generators))

    def _add(self, vectors):
        by_weight = defaultdict(list)
        for v in vectors:
            w = _weight_of(self.ambient, v)
            if w is not None:
                by_weight[w].append(v)
        for w, vs in by_weight.items():
            old = [b[0] for b in self.blocks.get(w, [])]
            self.blocks[w] = hermite(old + vs, self.ambient.dim)

    def copy(self):
        out = ALattice(self.ambient)
        out.blocks = dict(self.blocks)
        return out

    def basis(self):
        """Lattice basis vectors in ambient weight order then pivot order."""
        out = []
        for w in self._weight_order():
            out.extend(b[0] for b in self.blocks[w])
        return out

    def _weight_order(self):
        order = []
        for w in self.ambient.weights:
            if w in self.blocks and w not in order:
                order.append(w)
        return order

    def pivots(self):
        return [(b[1], b[2]) for w in self._weight_order() for b in self.blocks[w]]

    def rank(self):
        return sum(len(b) for b in self.blocks.values())

    def coordinates(self, v):
        """Coefficients of v in the lattice basis of its weight, or None outside the span."""
        w = _weight_of(self.ambient, v)
        if w is None:
            return []
        block = self.blocks.get(w, [])
        return solve_in_span([b[0] for b in block], v)

    def contains(self, v):
        if is_zero_vector(v):
            return True
        coords = self.coordinates(v)
        return coords is not None and all(c.in_A() for c in coords)

    def __eq__(self, other):
        if not isinstance(other, ALattice) or set(self.blocks) != set(other.blocks):
            return False
        return all(_block_key(self.blocks[w]) == _block_key(other.blocks[w]) for w in self.blocks)

    def report(self):
        """Per weight, the basis vectors with their pivot exponents."""
        lines = []
        for w in self._weight_order():
            for vec, col, e in self.blocks[w]:
                lab = self.ambient.labels[col]
                terms = [f"({x})*{self.ambient.labels[i]}" for i, x in enumerate(vec) if not x.is_zero()]
                lines.append(f"pivot {lab} (1-u)^{e}: " + " + ".join(terms))
        return lines

    def __repr__(self):
        return "ALattice(" + "; ".join(self.report()) + ")"


def _block_key(block):
    return [(tuple(vec), col, e) for vec, col, e in block]


def _weight_of(module, v):
    ws = {module.weights[i] for i, x in enumerate(v) if not x.is_zero()}
    if not ws:
        return None
    if len(ws) > 1:
        raise ValueError("vector is not weight-homogeneous")
    return ws.pop()


def mode_operators(module):
    """Operators whose A-span contains every generator mode.

    For each family with annihilator order S: x modes 0..S-1 and phi modes
    1..S.  The annihilator recurrence has unit end coefficients in A, so
    every other mode is an A-combination of these.
    """
    ops = []
    for (kind, i, sign), fam in module.families():
        S = fam.order()
        start = 0 if kind == "x" else 1
        for m in range(start, start + S):
            ops.append(fam.at(m))
    return ops


def _closure(lattice, seeds, ops, max_steps=10000):
    queue = list(seeds)
    steps = 0
    while queue:
        v = queue.pop()
        for op in ops:
            img = op.apply(v)
            if is_zero_vector(img) or lattice.contains(img):
                continue
            lattice._add([img])
            queue.append(img)
            steps += 1
            if steps > max_steps:
                raise LatticeError(f"closure did not stabilize at weight {_weight_of(lattice.ambient, img)}")
    return lattice


def is_stable(lattice, ops=None):
    ops = ops if ops is not None else mode_operators(lattice.ambient)
    return all(lattice.contains(op.apply(b)) for b in lattice.basis() for op in ops)


def cyclic_aform(V, v):
    """The A-span of the orbit of v under all generator modes."""
    ops = mode_operators(V)
    L = ALattice(V, [v])
    _closure(L, [v], ops)
    if not is_stable(L, ops):
        raise LatticeError("closure pass left the lattice unstable")
    return L


def full_aform(V):
    """Sum of the cyclic A-forms generated by the basis vectors."""
    L = None
    for k in range(V.dim):
        e = [ZERO] * V.dim
        e[k] = ONE
        L = cyclic_aform(V, e) if L is None else lattice_sum(L, cyclic_aform(V, e))
    return L


def n_valuation(lattice, v):
    """The integer n with (1-u)^n v in the lattice and (1-u)^(n-1) v outside it."""
    if is_zero_vector(v):
        raise ValueError("n(0) is undefined")
    coords = lattice.coordinates(v)
    if coords is None:
        raise ValueError("vector outside the lattice span")
    return -min(c.u1_valuation() for c in coords if not c.is_zero())


def lattice_sum(L1, L2):
    if L1.ambient is not L2.ambient:
        raise ValueError("lattices live in different ambient modules")
    out = L1.copy()
    out._add(L2.basis())
    return out


# specialization ------------------------------------------------------------

def _collapsed_sigs(family):
    """Signatures of the u = 1 limit: colliding bases add their orders."""
    orders = defaultdict(int)
    for sig in family.terms:
        orders[sig.base] += sig.deg + 1
    return [Sig(b, 0, d) for b, o in orders.items() for d in range(o)]


def specialize_u1(lattice, labels=None):
    """The Q(q)-module lattice / (u-1) lattice in the lattice basis.

    Operators are sampled at consecutive modes, written in the lattice basis
    (coordinates in A), evaluated at u = 1 and reassembled on the collapsed
    signatures.  Colliding signatures need polynomial degrees up to the sum
    of their orders, so the reassembly solves for all of them.
    """
    V = lattice.ambient
    basis = lattice.basis()
    n = len(basis)
    if n != V.dim:
        raise LatticeError("lattice rank differs from the ambient dimension")
    weights = []
    for b in basis:
        weights.append(_weight_of(V, b))

    def in_basis(op):
        entries = {}
        for c, b in enumerate(basis):
            img = op.apply(b)
            if is_zero_vector(img):
                continue
            coords = lattice.coordinates(img)
            if coords is None:
                raise LatticeError("image outside the lattice span")
            offset = _offset(lattice, _weight_of(V, img))
            for r, x in enumerate(coords):
                if x.is_zero():
                    continue
                if not x.in_A():
                    raise LatticeError("coefficient outside A: lattice is not stable")
                val = x.at_u1()
                if not val.is_zero():
                    entries[(offset + r, c)] = val
        return SparseMatrix(n, n, entries)

    x, phi = {}, {}
    for (kind, i, sign), fam in V.families():
        sigs = _collapsed_sigs(fam)
        start = 0 if kind == "x" else 1
        zero = SparseMatrix(n, n)
        if not sigs:
            fam_out = ExpPolyFamily({}, zero, start=None if kind == "x" else 1)
        else:
            samples = [in_basis(fam.at(m)) for m in range(start, start + len(sigs))]
            fam_out = ExpPolyFamily(separate_components(samples, sigs, start=start), zero,
                                    start=None if kind == "x" else 1)
        (x if kind == "x" else phi)[(i, sign)] = fam_out
    if labels is None:
        labels = [_basis_label(V, vec, col, e) for w in lattice._weight_order()
                  for vec, col, e in lattice.blocks[w]]
    return ExplicitModule(V.cd, labels, weights, x, phi, field=FIELD_Q,
                          spectral_class=V.spectral_class, lweights=None, grade=1,
                          name=f"({V.name})_u=1")


def _offset(lattice, w):
    off = 0
    for ww in lattice._weight_order():
        if ww == w:
            return off
        off += len(lattice.blocks[ww])
    raise KeyError(w)


def _basis_label(V, vec, col, e):
    lab = V.labels[col]
    if e == 0:
        return lab
    return f"(1-u)^{e}{lab}" if e > 1 else f"(1-u){lab}"


# fusion products -------------------------------------------------------------

def _as_u_module(module):
    return module if module.field == FIELD_QU else with_field(module, FIELD_QU)


def _top_vector(module):
    top = _top_line(module)
    if top is None:
        raise ValueError(f"{module!r} has no unique top weight line")
    v = [ZERO] * module.dim
    v[top] = ONE
    return v


def star_fusion(modules, check=True):
    """V_1 *_f ... *_f V_r: specialize the cyclic A-form of the top tensor."""
    from .drinfeld_fusion import fuse
    if check:
        for m in modules:
            if not is_lhw(m, _top_vector(m)):
                raise ValueError(f"{m!r} is not l-highest weight")
    if len(modules) == 1:
        return modules[0]
    amb = _as_u_module(modules[0])
    for m in modules[1:]:
        amb = fuse(amb, _as_u_module(m), amb.grade)
    L = cyclic_aform(amb, _top_vector(amb))
    out = specialize_u1(L)
    out.name = " *f ".join(m.name for m in modules)
    return out


def star_fusion_lattice(modules):
    """The ambient fused module and its cyclic A-form (before specialization)."""
    from .drinfeld_fusion import fuse
    amb = _as_u_module(modules[0])
    for m in modules[1:]:
        amb = fuse(amb, _as_u_module(m), amb.grade)
    return amb, cyclic_aform(amb, _top_vector(amb))


def tensor_d(V1, V2):
    """V1 (x)_d V2: specialization of the A-form generated by all basis tensors."""
    from .drinfeld_fusion import fuse
    amb = fuse(_as_u_module(V1), _as_u_module(V2), max(V1.grade, 1))
    out = specialize_u1(full_aform(amb))
    out.name = f"{V1.name} (x)d {V2.name}"
    return out


# intertwiners ------------------------------------------------------------------

def find_intertwiners(M1, M2, fixed=None):
    """Basis of weight-preserving linear maps T: M1 -> M2 commuting with all generators.

    ``fixed`` maps (source index, target vector) pairs to impose T(e_src) = vector.
    Returns a list of SparseMatrix (solutions of the homogeneous or affine system).
    """
    from .linalg import nullspace, row_echelon
    if M1.cd != M2.cd:
        raise ValueError("different Cartan data")
    unknowns = [(r, c) for c in range(M1.dim) for r in range(M2.dim)
                if M2.weights[r] == M1.weights[c]]
    pos = {rc: k for k, rc in enumerate(unknowns)}
    nvar = len(unknowns)
    rows = []
    fam1, fam2 = dict(M1.families()), dict(M2.families())
    for name in fam1:
        f1, f2 = fam1[name], fam2[name]
        sigs = set(f1.terms) | set(f2.terms)
        for sig in sigs:
            A = f1.terms.get(sig, SparseMatrix(M1.dim, M1.dim))
            B = f2.terms.get(sig, SparseMatrix(M2.dim, M2.dim))
            # (T A - B T)[r, c] = 0
            for r in range(M2.dim):
                for c in range(M1.dim):
                    row = [ZERO] * (nvar + 1)
                    for (k, cc), a in A.entries.items():
                        if cc == c and (r, k) in pos:
                            row[pos[(r, k)]] = row[pos[(r, k)]] + a
                    for (rr, k), b in B.entries.items():
                        if rr == r and (k, c) in pos:
                            row[pos[(k, c)]] = row[pos[(k, c)]] - b
                    if not is_zero_vector(row):
                        rows.append(row)
    for src, vec in (fixed or {}).items():
        for r in range(M2.dim):
            row = [ZERO] * (nvar + 1)
            if (r, src) in pos:
                row[pos[(r, src)]] = ONE
            row[nvar] = vec[r]
            if not is_zero_vector(row):
                rows.append(row)
    if fixed:
        ech, pivots = row_echelon(rows)
        if nvar in pivots:
            return []
        sol = [ZERO] * nvar
        for row, p in zip(ech, pivots):
            sol[p] = row[nvar]
        return [SparseMatrix(M2.dim, M1.dim, {rc: sol[pos[rc]] for rc in unknowns})]
    kernel = nullspace([r[:nvar] for r in rows], nvar)
    return [SparseMatrix(M2.dim, M1.dim, {rc: v[pos[rc]] for rc in unknowns}) for v in kernel]


def is_isomorphism(T):
    from .linalg import rank
    return T.nrows == T.ncols and rank([[T.get(i, j) for j in range(T.ncols)]
                                        for i in range(T.nrows)]) == T.nrows
