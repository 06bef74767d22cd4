"""The u-deformed Drinfeld coproduct on explicit modules.

``fuse(left, right, power)`` realizes g.(v1 (x) v2) = Delta_{u^power}(g)(v1 (x) v2).
The infinite tails of the coproduct are summed in closed form per pair of
signatures, so the result is again a module of exponential-polynomial
families, now over Q(q)(u).

Basis order of a tensor product is left-major: index j * dim(right) + k.
"""

from collections import defaultdict
from dataclasses import dataclass

from .exact_coeffs import ONE, ZERO, ExpPolyFamily, Rat, Sig, binom, separate_components, tail_sum
from .linalg import SparseMatrix
from .modules_explicit import (FIELD_QU, ExplicitModule, InconclusiveError, _top_line, is_lhw,
                               phi_families_from_lweights)


class SummationError(ValueError):
    """A coproduct tail does not converge u-adically."""


@dataclass
class FusionSpec:
    left: ExplicitModule
    right: ExplicitModule
    power: int = 1

    @property
    def grade(self):
        return self.left.grade + self.right.grade


def _ratio(base, uexp, what):
    if uexp < 1:
        raise SummationError(f"tail ratio {base}*u^{uexp} in {what} has no positive power of u")
    return base * Rat.u(uexp)


def _add(terms, sig, mat):
    if sig in terms:
        terms[sig] = terms[sig] + mat
    else:
        terms[sig] = mat


def _common_class(left, right):
    classes = {m.spectral_class for m in (left, right) if m.spectral_class is not None}
    if len(classes) > 1:
        raise ValueError(f"operands live in different spectral classes {sorted(classes)}")
    return classes.pop() if classes else None


def fuse(left, right=None, power=1):
    """Module structure on left (x) right through Delta_{u^power}.

    Accepts either a FusionSpec or two modules and a power.
    """
    if isinstance(left, FusionSpec):
        left, right, power = left.left, left.right, left.power
    if left.cd != right.cd:
        raise ValueError("operands have different Cartan data")
    if power < 0:
        raise ValueError("power must be nonnegative")
    cd = left.cd
    R = power
    d1, d2 = left.dim, right.dim
    dim = d1 * d2
    zero = SparseMatrix(dim, dim)
    I1, I2 = SparseMatrix.identity(d1), SparseMatrix.identity(d2)
    x = {}
    for i in range(1, cd.n + 1):
        KL_inv = left.k_diag(i, -1)
        KR = right.k_diag(i, 1)
        # x^+: x+ (x) 1 + sum_{s>=0} u^{R(p+s)} phi^-_{-s} (x) x^+_{p+s}
        terms = {}
        for sig, M in left.x[(i, 1)].terms.items():
            _add(terms, sig, M.kron(I2))
        for sig, M in right.x[(i, 1)].terms.items():
            _add(terms, Sig(sig.base, sig.uexp + R, sig.deg), KL_inv.kron(M))
            for gsig, N in left.phi[(i, -1)].terms.items():
                ratio = _ratio(sig.base * gsig.base, R + sig.uexp + gsig.uexp, "Delta(x^+)")
                k, kp = sig.deg, gsig.deg
                NM = N.kron(M)
                for t in range(k + 1):
                    c = binom(k, t) * tail_sum(ratio, t + kp)
                    _add(terms, Sig(sig.base, sig.uexp + R, k - t), NM * c)
        x[(i, 1)] = ExpPolyFamily(terms, zero)
        # x^-: u^{Rp} 1 (x) x^-_p + sum_{s>=0} u^{Rs} x^-_{p-s} (x) phi^+_s
        terms = {}
        for sig, M in right.x[(i, -1)].terms.items():
            _add(terms, Sig(sig.base, sig.uexp + R, sig.deg), I1.kron(M))
        for sig, M in left.x[(i, -1)].terms.items():
            _add(terms, sig, M.kron(KR))
            for gsig, N in right.phi[(i, 1)].terms.items():
                ratio = _ratio(gsig.base / sig.base, R + gsig.uexp - sig.uexp, "Delta(x^-)")
                k, kp = sig.deg, gsig.deg
                MN = M.kron(N)
                for t in range(k + 1):
                    c = binom(k, t) * (-1) ** t * tail_sum(ratio, t + kp)
                    _add(terms, Sig(sig.base, sig.uexp, k - t), MN * c)
        x[(i, -1)] = ExpPolyFamily(terms, zero)
    weights = [w1 + w2 for w1 in left.weights for w2 in right.weights]
    labels = [f"{a}⊗{b}" for a in left.labels for b in right.labels]
    if left.lweights is not None and right.lweights is not None:
        lweights = [l1 * l2.shift_z(R) for l1 in left.lweights for l2 in right.lweights]
        phi = phi_families_from_lweights(cd, lweights)
    else:
        lweights = None
        phi = {}
        for i in range(1, cd.n + 1):
            for sign in (1, -1):
                phi[(i, sign)] = _phi_convolution(left, right, i, sign, R)
    return ExplicitModule(cd, labels, weights, x, phi, field=FIELD_QU,
                          spectral_class=_common_class(left, right), lweights=lweights,
                          grade=left.grade + right.grade,
                          name=f"({left.name} *{R} {right.name})")


def _phi_convolution(left, right, i, sign, R):
    """Delta(phi^{+-}_{+-m}) = sum_s u^{+-Rs} phi_{m-s} (x) phi_s via signature sampling.

    The generating series is A(z) B(u^R z); its poles are those of both
    factors, so the signatures are the union with multiplicities added.
    """
    dim = left.dim * right.dim
    poles = defaultdict(int)
    for sig in left.phi[(i, sign)].terms:
        poles[(sig.base, sig.uexp)] = max(poles[(sig.base, sig.uexp)], sig.deg + 1)
    shifted = defaultdict(int)
    for sig in right.phi[(i, sign)].terms:
        key = (sig.base, sig.uexp + sign * R)
        shifted[key] = max(shifted[key], sig.deg + 1)
    for key, mult in shifted.items():
        poles[key] += mult
    sigs = [Sig(b, e, d) for (b, e), mult in poles.items() for d in range(mult)]
    if not sigs:
        return ExpPolyFamily({}, SparseMatrix(dim, dim), start=1)
    samples = []
    for m in range(1, len(sigs) + 1):
        total = SparseMatrix(dim, dim)
        for s in range(m + 1):
            a = left.phi_at(i, sign, sign * (m - s))
            b = right.phi_at(i, sign, sign * s)
            total = total + a.kron(b) * Rat.u(R * s * sign)
        samples.append(total)
    return ExpPolyFamily(separate_components(samples, sigs, start=1), SparseMatrix(dim, dim), start=1)


def is_trivial(module):
    return module.dim == 1 and all(f.is_zero() for _, f in module.families()) and \
        all(module.cd.pairing(module.weights[0], i) == 0 for i in range(1, module.cd.n + 1))


def fuse_with_trivial(V, trivial, side="right"):
    """V (x)_f L_0 or L_0 (x)_f V; both are V itself."""
    if not is_trivial(trivial):
        raise ValueError("fuse_with_trivial needs a trivial operand")
    if side == "right":
        out = fuse(V, trivial, power=V.grade)
    elif side == "left":
        out = fuse(trivial, V, power=trivial.grade)
    else:
        raise ValueError("side must be 'left' or 'right'")
    out = ExplicitModule(V.cd, V.labels, out.weights, out.x, out.phi, field=V.field,
                         spectral_class=V.spectral_class,
                         lweights=V.lweights if V.lweights is None else
                         [lw * trivial.lweights[0] for lw in V.lweights],
                         grade=V.grade + trivial.grade, name=V.name)
    return out


def families_equal(A, B):
    """List of (family name, signature) where A and B differ."""
    bad = []
    fa, fb = dict(A.families()), dict(B.families())
    for name in fa:
        if fa[name] != fb[name]:
            sigs = set(fa[name].terms) | set(fb[name].terms)
            for s in sorted(sigs, key=Sig.sort_key):
                if fa[name].terms.get(s) != fb[name].terms.get(s):
                    bad.append((name, s))
    return bad


class CoassocReport:
    def __init__(self, mismatches, grid_ok, error=None):
        self.mismatches = mismatches
        self.grid_ok = grid_ok
        self.error = error

    def __bool__(self):
        return self.error is None and not self.mismatches and self.grid_ok

    def __repr__(self):
        if self.error:
            return f"CoassocReport(equal=False, error={self.error!r})"
        return f"CoassocReport(equal={bool(self)}, mismatches={self.mismatches[:3]})"


def check_twisted_coassoc(V1, V2, V3, r=1, rp=1, mode_window=3, twisted=True):
    """Compare V1 (x)_r (V2 (x)_{r'} V3) with (V1 (x)_r V2) (x)_{r+r'} V3.

    With twisted=False the outer power on the right side is r instead of
    r + r', the comparison for the untwisted coproduct.  A divergent side
    gives a failed report carrying the summation error.
    """
    if r < 1 or rp < 1:
        raise ValueError("r and r' must be positive")
    A = fuse(V1, fuse(V2, V3, rp), r)
    try:
        B = fuse(fuse(V1, V2, r), V3, r + rp if twisted else r)
    except SummationError as exc:
        # the outer coproduct is not defined: its tails have no positive power of u
        return CoassocReport([], False, error=str(exc))
    mismatches = families_equal(A, B)
    grid_ok = True
    for (name, fam) in A.families():
        other = dict(B.families())[name]
        start = fam.start if fam.start is not None else -mode_window
        for m in range(start, mode_window + 1):
            if fam.at(m) != other.at(m):
                grid_ok = False
                break
    return CoassocReport(mismatches, grid_ok)


def is_lu_highest_weight(fused):
    """The top weight line generates the module and is a highest weight vector."""
    top = _top_line(fused)
    if top is None:
        raise InconclusiveError("no unique top weight line")
    v = [ZERO] * fused.dim
    v[top] = ONE
    return is_lhw(fused, v)


def fuse_many(modules, power=1):
    """Left-associated iterated fusion (((V1 * V2) * V3) ...) with Delta_{u^grade}."""
    out = modules[0]
    for m in modules[1:]:
        out = fuse(out, m, out.grade if power is None else max(out.grade, power))
    return out


# basis order of the two-fundamental example: tensor index -> named vector
PAIR_LABELS = {"LR": ["f0", "f2", "f1", "f3"], "RL": ["f'0", "f'2", "f'1", "f'3"]}
PAIR_ORDER = [0, 2, 1, 3]


def fundamental_pair(order="LR"):
    """V = L_{1,1} (x)_u L_{1,q^2} (order LR) or the reversed product (order RL).

    The tensor basis is relabeled f0..f3 (primed for RL) so that
    f1 = v1 (x) w0 and f2 = v0 (x) w1, resp. f'1 = w1 (x) v0 and f'2 = w0 (x) v1.
    """
    from .cartan import fixture
    from .modules_explicit import kr_sl2
    if order not in PAIR_LABELS:
        raise ValueError(f"order must be LR or RL, not {order!r}")
    cd = fixture("sl2")
    L1, L2 = kr_sl2(cd, 1, ("c", -1)), kr_sl2(cd, 1, ("c", 1))
    left, right = (L1, L2) if order == "LR" else (L2, L1)
    V = fuse(left, right, 1)
    return V.relabeled(PAIR_LABELS[order], name="V" if order == "LR" else "V'")
