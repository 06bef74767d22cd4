"""The monomial group A, the ring of q-characters, and l-weights.

A spectral parameter a = c * q^s is a pair (class, shift).  A monomial keeps
its Y-exponents u_{i,a} together with its weight omega, stored as an element
of the weight space (the image under nu is implicit).  The defining
constraint omega(alpha_i^vee) = sum_a u_{i,a} is verified by Monomial.check.
"""

from collections import defaultdict, deque
from itertools import product as iproduct

from .cartan import WeightVector
from .exact_coeffs import Rat


class NotQPError(ValueError):
    """An l-weight series is not of the form required for q-characters."""


class SpectralParam(tuple):
    """a = c_class * q^shift."""

    def __new__(cls, class_id, shift=0):
        return super().__new__(cls, (str(class_id), int(shift)))

    @property
    def class_id(self):
        return self[0]

    @property
    def shift(self):
        return self[1]

    def __getnewargs__(self):
        return (self[0], self[1])

    def times_q(self, k):
        return SpectralParam(self[0], self[1] + k)

    @staticmethod
    def parse(token):
        """Parse 'class:shift', e.g. 'c0:2'."""
        if ":" not in token:
            raise ValueError(f"spectral parameter {token!r} must look like class:shift")
        cls, shift = token.rsplit(":", 1)
        if not cls:
            raise ValueError(f"empty class in {token!r}")
        return SpectralParam(cls, int(shift))

    def __str__(self):
        return f"{self[0]}:{self[1]}"

    def render(self):
        if self[1] == 0:
            return self[0]
        return f"{self[0]}*q^{self[1]}" if self[1] != 1 else f"{self[0]}*q"

    def __repr__(self):
        return f"SpectralParam({self[0]!r}, {self[1]})"


class Monomial:
    """Element of A: a finite product of Y_{i,a}^{u} times k_omega."""

    __slots__ = ("y", "omega", "_hash")

    def __init__(self, y, omega, check=None):
        if isinstance(y, dict):
            y = tuple(sorted((k, e) for k, e in y.items() if e))
        self.y = y
        self.omega = omega if isinstance(omega, WeightVector) else WeightVector(omega)
        self._hash = None
        if check is not None:
            self.check(check)

    @staticmethod
    def identity(cd):
        return Monomial((), cd.zero_weight())

    @staticmethod
    def k(omega):
        return Monomial((), omega)

    @staticmethod
    def Y(cd, i, a, power=1):
        a = a if isinstance(a, SpectralParam) else SpectralParam(*a)
        return Monomial({(i, a[0], a[1]): power}, cd.fundamental_weight(i).scale(power))

    def check(self, cd):
        """Assert omega(alpha_i^vee) = sum_a u_{i,a} for every node i."""
        sums = defaultdict(int)
        for (i, _, _), e in self.y:
            sums[i] += e
        for i in range(1, cd.n + 1):
            if cd.pairing(self.omega, i) != sums.get(i, 0):
                raise AssertionError(
                    f"weight/Y mismatch at node {i}: {cd.pairing(self.omega, i)} != {sums.get(i, 0)}")
        return True

    def exps(self):
        return dict(self.y)

    def exponent(self, i, a):
        a = a if isinstance(a, SpectralParam) else SpectralParam(*a)
        return dict(self.y).get((i, a[0], a[1]), 0)

    def __mul__(self, other):
        if not other.y:
            return Monomial(self.y, self.omega + other.omega)
        if not self.y:
            return Monomial(other.y, self.omega + other.omega)
        d = dict(self.y)
        for k, e in other.y:
            d[k] = d.get(k, 0) + e
        return Monomial(d, self.omega + other.omega)

    def inverse(self):
        return Monomial(tuple((k, -e) for k, e in self.y), -self.omega)

    def __truediv__(self, other):
        return self * other.inverse()

    def __pow__(self, n):
        return Monomial(tuple((k, e * n) for k, e in self.y), self.omega.scale(n))

    def __eq__(self, other):
        return isinstance(other, Monomial) and self.y == other.y and self.omega == other.omega

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.y, self.omega))
        return self._hash

    def is_identity(self):
        return not self.y and not any(self.omega)

    def classes(self):
        return sorted({c for (_, c, _), _ in self.y})

    def sort_key(self):
        return (self.y, tuple(self.omega))

    def render(self, with_k=True):
        parts = []
        for (i, c, s), e in self.y:
            a = SpectralParam(c, s).render()
            parts.append(f"Y[{i},{a}]" + ("" if e == 1 else f"^{e}"))
        if with_k:
            parts.append("k[" + ",".join(str(x) for x in self.omega) + "]")
        return " * ".join(parts) if parts else "1"

    __str__ = render

    def __repr__(self):
        return f"Monomial({self.render()})"

    def to_json(self):
        return {"y": [[i, c, s, e] for (i, c, s), e in self.y],
                "omega": [str(x) for x in self.omega]}


def _monomial_from_y(cd, y):
    """Monomial with omega = sum u Lambda_i (correct for finite-type weights)."""
    omega = [0] * cd.dim
    for (i, _, _), e in (y.items() if isinstance(y, dict) else y):
        omega[i - 1] += e
    return Monomial(y, WeightVector(omega))


def y_monomial(cd, factors):
    """Product of Y_{i,a}^e from an iterable of (i, SpectralParam, e)."""
    d = defaultdict(int)
    for i, a, e in factors:
        a = a if isinstance(a, SpectralParam) else SpectralParam(*a)
        d[(i, a[0], a[1])] += e
    return _monomial_from_y(cd, d)


def a_inverse(cd, i, a):
    """A_{i,a}^{-1}: weight -alpha_i and the Y-factors prescribed by C."""
    a = a if isinstance(a, SpectralParam) else SpectralParam(*a)
    ri = cd.r[i - 1]
    d = defaultdict(int)
    d[(i, a[0], a[1] - ri)] -= 1
    d[(i, a[0], a[1] + ri)] -= 1
    for j in range(1, cd.n + 1):
        cji = cd.C[j - 1][i - 1]
        if j != i and cji <= -1:
            for k in range(cji + 1, -cji, 2):
                d[(j, a[0], a[1] + k)] += 1
    return Monomial(dict(d), -cd.simple_root(i))


def is_dominant(m):
    return all(e >= 0 for _, e in m.y)


def is_right_negative(m):
    if not m.y:
        raise ValueError("right-negativity is undefined for a pure k monomial")
    top = {}
    for (i, c, s), e in m.y:
        if c not in top or s > top[c]:
            top[c] = s
    return all(e < 0 for (i, c, s), e in m.y if s == top[c])


def divides_by_A(cd, m_hi, m_lo):
    """v with m_lo = m_hi * prod A_{i,a}^{-v_{i,a}}, all v >= 0, or None."""
    ratio = dict((m_lo / m_hi).y)
    v = defaultdict(int)
    by_class = defaultdict(dict)
    for (i, c, s), e in ratio.items():
        by_class[c][(i, s)] = e
    total_weight = cd.zero_weight()
    for c, exps in by_class.items():
        floor = min(s for (_, s) in exps)
        exps = dict(exps)
        while exps:
            top = max(s for (_, s) in exps)
            if top < floor:
                return None
            at_top = [(i, e) for (i, s), e in exps.items() if s == top]
            if any(e > 0 for _, e in at_top):
                return None
            for i, e in at_top:
                count = -e
                b = top - cd.r[i - 1]
                v[(i, SpectralParam(c, b))] += count
                a_inv = a_inverse(cd, i, SpectralParam(c, b))
                for (j, _, s), f in a_inv.y:
                    key = (j, s)
                    new = exps.get(key, 0) - count * f
                    if new:
                        exps[key] = new
                    else:
                        exps.pop(key, None)
                total_weight = total_weight - cd.simple_root(i).scale(count)
    if total_weight != m_lo.omega - m_hi.omega:
        return None
    return dict(v)


def apply_a_inverse(cd, m, v):
    out = m
    for (i, a), count in sorted(v.items()):
        out = out * a_inverse(cd, i, a) ** count
    return out


def _steps(cd, m, budget=None):
    """Admissible single steps of the cone: (i, {a: count}) with A^{-1}_{i,a q_i}."""
    for i in range(1, cd.n + 1):
        ri = cd.r[i - 1]
        avail = []
        for (j, c, s), e in m.y:
            if j == i and e > 0:
                a = SpectralParam(c, s)
                cap = e
                if budget is not None:
                    cap = min(cap, budget.get((i, a.times_q(ri)), 0))
                if cap > 0:
                    avail.append((a, cap))
        if not avail:
            continue
        for counts in iproduct(*[range(cap + 1) for _, cap in avail]):
            if any(counts):
                yield i, {a.times_q(ri): k for (a, _), k in zip(avail, counts) if k}


def _apply_step(cd, m, i, choice):
    out = m
    for b, k in choice.items():
        out = out * a_inverse(cd, i, b) ** k
    return out


def cone_member(cd, m, target, max_states=200000):
    """Decide target in S(m) by search bounded by the A-budget from divides_by_A."""
    v = divides_by_A(cd, m, target)
    if v is None:
        return False
    start = tuple(sorted(v.items()))
    seen = {start}
    queue = deque([(m, dict(v))])
    while queue:
        cur, budget = queue.popleft()
        if not any(budget.values()):
            return cur == target
        for i, choice in _steps(cd, cur, budget):
            nb = dict(budget)
            for b, k in choice.items():
                nb[(i, b)] -= k
            key = tuple(sorted((kk, x) for kk, x in nb.items() if x))
            if key in seen:
                continue
            seen.add(key)
            if len(seen) > max_states:
                raise RuntimeError("cone search exceeded its state budget")
            queue.append((_apply_step(cd, cur, i, choice), nb))
    return False


def class_bases(m):
    """Minimal shift per spectral class (the a_k of the finiteness lemma)."""
    base = {}
    for (_, c, s), _ in m.y:
        base[c] = min(s, base.get(c, s))
    return base


def enumerate_S_N(cd, m, N, bases=None, max_size=100000):
    """The finite set S_N(m) of cone elements with m'/m supported below a_k q^N."""
    if N <= 0:
        return {m}
    bases = class_bases(m) if bases is None else bases
    found = {m}
    queue = deque([m])
    while queue:
        cur = queue.popleft()
        for i, choice in _steps(cd, cur):
            nxt = _apply_step(cd, cur, i, choice)
            if nxt in found:
                continue
            ratio = nxt / m
            if any(s >= bases.get(c, s) + N for (_, c, s), e in ratio.y):
                continue
            found.add(nxt)
            if len(found) > max_size:
                raise RuntimeError("S_N enumeration exceeded its size budget")
            queue.append(nxt)
    return found


class YPolynomial:
    """Finite Z-linear combination of monomials."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        if isinstance(terms, Monomial):
            terms = {terms: 1}
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    def __add__(self, other):
        d = dict(self.terms)
        for m, c in other.terms.items():
            d[m] = d.get(m, 0) + c
        return YPolynomial(d)

    def __neg__(self):
        return YPolynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Monomial):
            return YPolynomial({m * other: c for m, c in self.terms.items()})
        if isinstance(other, int):
            return YPolynomial({m: c * other for m, c in self.terms.items()})
        d = defaultdict(int)
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                d[m1 * m2] += c1 * c2
        return YPolynomial(d)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, YPolynomial) and self.terms == other.terms

    __hash__ = None

    def __len__(self):
        return len(self.terms)

    def is_zero(self):
        return not self.terms

    def items(self):
        return sorted(self.terms.items(), key=lambda t: t[0].sort_key())

    def dimension(self):
        return sum(self.terms.values())

    def render(self):
        if not self.terms:
            return "0"
        out = []
        for m, c in self.items():
            out.append(m.render() if c == 1 else f"{c}*({m.render()})")
        return " + ".join(out)

    __str__ = render

    def __repr__(self):
        return f"YPolynomial({self.render()})"

    def to_json(self):
        return [{"monomial": m.to_json(), "multiplicity": c} for m, c in self.items()]


def dominant_part(chi):
    return YPolynomial({m: c for m, c in chi.terms.items() if is_dominant(m)})


# l-weights ------------------------------------------------------------------

class LWeight:
    """Weight plus eigenvalue series of the phi^+ operators.

    ``series[i] = (const, roots)``: the series at node i is
    const * prod (1 - z c q^s u^e)^order over roots {(c, s, e): order}.
    """

    __slots__ = ("lam", "series", "_key")

    def __init__(self, lam, series):
        self.lam = lam if isinstance(lam, WeightVector) else WeightVector(lam)
        clean = {}
        for i, (const, roots) in series.items():
            clean[i] = (const, {k: o for k, o in roots.items() if o})
        self.series = clean
        self._key = None

    def key(self):
        if self._key is None:
            self._key = (self.lam, tuple(sorted(
                (i, c, tuple(sorted(r.items()))) for i, (c, r) in self.series.items())))
        return self._key

    def __eq__(self, other):
        return isinstance(other, LWeight) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __mul__(self, other):
        series = {}
        for i in set(self.series) | set(other.series):
            c1, r1 = self.series.get(i, (Rat(1), {}))
            c2, r2 = other.series.get(i, (Rat(1), {}))
            roots = dict(r1)
            for k, o in r2.items():
                roots[k] = roots.get(k, 0) + o
            series[i] = (c1 * c2, roots)
        return LWeight(self.lam + other.lam, series)

    def shift_z(self, uexp):
        """Series with z -> u^uexp z."""
        return LWeight(self.lam, {i: (c, {(k[0], k[1], k[2] + uexp): o for k, o in r.items()})
                                  for i, (c, r) in self.series.items()})

    def at_u1(self):
        series = {}
        for i, (c, r) in self.series.items():
            roots = defaultdict(int)
            for (cls, s, _), o in r.items():
                roots[(cls, s, 0)] += o
            series[i] = (c.at_u1(), dict(roots))
        return LWeight(self.lam, series)

    def __repr__(self):
        parts = []
        for i, (c, r) in sorted(self.series.items()):
            fac = " ".join(f"(1-z*{SpectralParam(k[0], k[1]).render()}"
                           + (f"*u^{k[2]}" if k[2] else "") + f")^{o}" for k, o in sorted(r.items()))
            parts.append(f"{i}: {c} {fac}")
        return f"LWeight({self.lam!r}; " + "; ".join(parts) + ")"


def lweight_of_monomial(cd, m):
    """The l-weight Y_{i,a} -> q_i (1 - z a q_i^-1)/(1 - z a q_i), extended multiplicatively."""
    series = {}
    for i in range(1, cd.n + 1):
        ri = cd.r[i - 1]
        roots = defaultdict(int)
        total = 0
        for (j, c, s), e in m.y:
            if j == i:
                roots[(c, s - ri, 0)] += e
                roots[(c, s + ri, 0)] -= e
                total += e
        series[i] = (Rat.q(ri * total), dict(roots))
    return LWeight(m.omega, series)


def monomial_of_lweight(cd, lw):
    """Recover Y-exponents by telescoping zero/pole orders along q_i^2-ladders."""
    y = {}
    for i in range(1, cd.n + 1):
        const, roots = lw.series.get(i, (Rat(1), {}))
        ri = cd.r[i - 1]
        ladders = defaultdict(dict)
        for (c, s, e), o in roots.items():
            if e:
                raise NotQPError("series still depends on u; specialize at u = 1 first")
            ladders[(c, s % (2 * ri))][s] = o
        total = 0
        for (c, _), orders in ladders.items():
            lo, hi = min(orders), max(orders)
            acc = 0
            prev = {}
            for s in range(lo, hi + 1, 2 * ri):
                # u_{i, s + r_i} = n(s) + u_{i, s - r_i}
                val = orders.get(s, 0) + prev.get(s - ri, 0)
                prev[s + ri] = val
                if val:
                    y[(i, c, s + ri)] = val
                    total += val
                acc = val
            if acc != 0:
                raise NotQPError(f"node {i}: zero/pole pattern does not telescope")
        if const != Rat.q(ri * total):
            raise NotQPError(f"node {i}: constant term {const} is not q_i^{total}")
        if lw.lam[i - 1] != total:
            raise NotQPError(f"node {i}: weight pairing {lw.lam[i - 1]} differs from degree {total}")
    return Monomial(y, lw.lam)
