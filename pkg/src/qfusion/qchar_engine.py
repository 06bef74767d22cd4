"""q-characters of Kirillov-Reshetikhin modules by the Frenkel-Mukhin expansion.

The expansion starts from a dominant monomial and, direction by direction,
completes every monomial to a sum of q_i-characters of simple modules over
the i-th rank-one subalgebra.  It is exact for special modules; reaching a
second dominant monomial raises NotSpecial.
"""

from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from itertools import product as iproduct

from .ymonoid import (Monomial, SpectralParam, YPolynomial, a_inverse, divides_by_A,
                      dominant_part, is_dominant, y_monomial)


class NotSpecial(RuntimeError):
    """The expansion met a second dominant monomial or an uncovered non-dominant one."""

    def __init__(self, monomial, reason="second dominant monomial"):
        super().__init__(f"{reason} {monomial.render()}")
        self.monomial = monomial


class CapExceeded(RuntimeError):
    """The expansion produced more monomials than allowed."""


@dataclass(frozen=True)
class KRSpec:
    i: int
    r: int
    a: SpectralParam

    def __post_init__(self):
        if self.r < 0:
            raise ValueError("KR level must be nonnegative")
        if not isinstance(self.a, SpectralParam):
            object.__setattr__(self, "a", SpectralParam(*self.a))

    def render(self):
        return f"W^({self.i})_{{{self.r},{self.a.render()}}}"


def kr_monomial(cd, i, r, a):
    """Y_{i,a} Y_{i,a q_i^2} ... Y_{i,a q_i^(2r-2)}."""
    a = a if isinstance(a, SpectralParam) else SpectralParam(*a)
    ri = cd.r[i - 1]
    return y_monomial(cd, [(i, a.times_q(2 * ri * t), 1) for t in range(r)])


def _strings(shifts, step):
    """Split a multiset of shifts into strings with the given step, greedily from the minimum."""
    pool = defaultdict(int)
    for s in shifts:
        pool[s] += 1
    out = []
    while pool:
        s = min(pool)
        length = 0
        while pool.get(s + step * length, 0) > 0:
            pool[s + step * length] -= 1
            if pool[s + step * length] == 0:
                del pool[s + step * length]
            length += 1
        out.append((s, length))
    return out


def _sl2_expansion(cd, m, i):
    """{A^{-1} multiset -> multiplicity} for the q_i-character of the i-part of m."""
    ri = cd.r[i - 1]
    by_class = defaultdict(list)
    for (j, c, s), e in m.y:
        if j == i:
            if e < 0:
                raise ValueError("monomial is not i-dominant")
            by_class[c].extend([s] * e)
    factors = []
    for c, shifts in sorted(by_class.items()):
        for start, length in _strings(shifts, 2 * ri):
            # KR string: k steps peel A^{-1} from the right end
            opts = []
            for k in range(length + 1):
                opts.append(tuple(SpectralParam(c, start + 2 * ri * (length - 1 - t) + ri)
                                  for t in range(k)))
            factors.append(opts)
    out = defaultdict(int)
    for choice in iproduct(*factors):
        key = tuple(sorted(b for part in choice for b in part))
        out[key] += 1
    return out


def fm_expand(cd, m_top, cap=100000):
    """The q-character generated from the dominant monomial m_top."""
    if not is_dominant(m_top):
        raise ValueError("fm_expand needs a dominant top monomial")
    a_cache = {}

    def A(i, b):
        if (i, b) not in a_cache:
            a_cache[(i, b)] = a_inverse(cd, i, b)
        return a_cache[(i, b)]

    mult = {m_top: 1}
    colored = defaultdict(lambda: defaultdict(int))
    levels = defaultdict(set)
    levels[0].add(m_top)
    height = 0
    while height in levels:
        for m in sorted(levels[height], key=lambda x: x.sort_key()):
            if height > 0:
                mult[m] = max(colored[m].values())
                if is_dominant(m):
                    raise NotSpecial(m)
            for i in range(1, cd.n + 1):
                extra = mult[m] - colored[m][i]
                if extra <= 0:
                    continue
                if any(j == i and e < 0 for (j, _, _), e in m.y):
                    raise NotSpecial(m, f"monomial not {i}-dominant but not covered in direction {i}:")
                for bs, c in _sl2_expansion(cd, m, i).items():
                    if not bs:
                        continue
                    new = m
                    for b in bs:
                        new = new * A(i, b)
                    colored[new][i] += c * extra
                    levels[height + len(bs)].add(new)
                    if len(colored) > cap:
                        raise CapExceeded(f"more than {cap} monomials")
        height += 1
    return YPolynomial(dict(mult))


_CACHE = {}


def kr_qchar(cd, spec_or_i, r=None, a=None):
    """q-character of W^{(i)}_{r,a}, cached per Cartan data and spec."""
    spec = spec_or_i if isinstance(spec_or_i, KRSpec) else KRSpec(spec_or_i, r, a)
    key = (cd.C, spec)
    if key not in _CACHE:
        if spec.r == 0:
            _CACHE[key] = YPolynomial({Monomial.identity(cd): 1})
        else:
            _CACHE[key] = fm_expand(cd, kr_monomial(cd, spec.i, spec.r, spec.a))
    return _CACHE[key]


def beta_restrict(chi):
    """Weight character: each monomial pushed to its weight omega(m)."""
    out = defaultdict(int)
    for m, c in chi.items():
        out[m.omega] += c
    return {w: c for w, c in out.items() if c}


def weight_char_mul(c1, c2):
    out = defaultdict(int)
    for w1, a in c1.items():
        for w2, b in c2.items():
            out[w1 + w2] += a * b
    return {w: c for w, c in out.items() if c}


def weight_char_add(c1, c2, sign=1):
    out = defaultdict(int, c1)
    for w, c in c2.items():
        out[w] += sign * c
    return {w: c for w, c in out.items() if c}


def top_cover_violations(cd, chi, i, k, a):
    """Monomials m != top of chi(W^{(i)}_{k,a}) not below top * A^{-1}_{i, a q_i^(2k-1)}."""
    a = a if isinstance(a, SpectralParam) else SpectralParam(*a)
    top = kr_monomial(cd, i, k, a)
    bound = top * a_inverse(cd, i, a.times_q(cd.r[i - 1] * (2 * k - 1)))
    return [m for m, _ in chi.items() if m != top and divides_by_A(cd, bound, m) is None]


def off_node_weight_violations(cd, chi, i, k):
    """Monomials of weight k Lambda_i - alpha_j with j != i."""
    bad = []
    top_w = cd.fundamental_weight(i).scale(k)
    for m, c in chi.items():
        for j in range(1, cd.n + 1):
            if j != i and m.omega == top_w - cd.simple_root(j):
                bad.append(m)
    return bad


__all__ = ["NotSpecial", "CapExceeded", "KRSpec", "kr_monomial", "fm_expand", "kr_qchar",
           "dominant_part", "beta_restrict", "weight_char_mul", "weight_char_add",
           "top_cover_violations", "off_node_weight_violations"]
