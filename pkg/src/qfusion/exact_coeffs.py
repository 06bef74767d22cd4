"""Exact coefficients: rational functions in q and u, and exponential-polynomial
operator families.

Every coefficient in the library is a reduced fraction of integer polynomials
in the two formal symbols q and u.  Laurent polynomials in q are the special
case of a monomial denominator.  Polynomial arithmetic and gcds come from
python-flint (``fmpz_mpoly``); this module only adds normalization, the
(u-1)-adic valuation and the sequence machinery.
"""

from fractions import Fraction
from math import comb

import flint

_CTX = flint.fmpz_mpoly_ctx.get(("q", "u"))
_Q, _U = _CTX.gens()
_ONE = _CTX.constant(1)
_ZERO = _CTX.constant(0)
_U_MINUS_1 = _U - 1


def _poly_from_int(n):
    return _CTX.constant(int(n))


class Rat:
    """Element of Q(q, u) stored as a reduced fraction ``num/den``.

    The denominator has a positive leading coefficient and the fraction has
    no common factor, so equal elements have identical representations.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None, _reduced=False):
        if isinstance(num, Rat):
            if den is not None:
                raise TypeError("Rat(Rat, den) is not supported")
            self.num, self.den, self._hash = num.num, num.den, None
            return
        if isinstance(num, (int, Fraction)):
            f = Fraction(num)
            num = _poly_from_int(f.numerator)
            extra = _poly_from_int(f.denominator)
            den = extra if den is None else den * extra
        if den is None:
            den = _ONE
        elif isinstance(den, int):
            den = _poly_from_int(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not _reduced:
            if num.is_zero():
                den = _ONE
            else:
                g = num.gcd(den)
                if not g.is_one():
                    num = num / g
                    den = den / g
            if den.leading_coefficient() < 0:
                num, den = -num, -den
        self.num = num
        self.den = den
        self._hash = None

    # construction helpers
    @staticmethod
    def q(k=1):
        """q^k for any integer k."""
        if k >= 0:
            return Rat(_Q ** k, _ONE, _reduced=True)
        return Rat(_ONE, _Q ** (-k), _reduced=True)

    @staticmethod
    def u(k=1):
        if k >= 0:
            return Rat(_U ** k, _ONE, _reduced=True)
        return Rat(_ONE, _U ** (-k), _reduced=True)

    @staticmethod
    def qu(qe, ue):
        """The monomial q^qe u^ue."""
        return Rat.q(qe) * Rat.u(ue)

    # arithmetic
    @staticmethod
    def _coerce(x):
        if isinstance(x, Rat):
            return x
        if isinstance(x, (int, Fraction)):
            return Rat(x)
        return NotImplemented

    def __add__(self, other):
        other = Rat._coerce(other)
        if other is NotImplemented:
            return other
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        if self.den == other.den:
            return Rat(self.num + other.num, self.den)
        return Rat(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return Rat(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        other = Rat._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = Rat._coerce(other)
        if other is NotImplemented:
            return other
        if self.num.is_zero() or other.num.is_zero():
            return ZERO
        if other.den.is_one() and other.num.is_one():
            return self
        if self.den.is_one() and self.num.is_one():
            return other
        return Rat(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self):
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return Rat(self.den, self.num)

    def __truediv__(self, other):
        other = Rat._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Rat._coerce(other) * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            raise TypeError("integer exponents only")
        if k < 0:
            return self.inverse() ** (-k)
        return Rat(self.num ** k, self.den ** k, _reduced=True)

    def __eq__(self, other):
        other = Rat._coerce(other)
        if other is NotImplemented:
            return False
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((tuple(sorted(self.num.to_dict().items())),
                               tuple(sorted(self.den.to_dict().items()))))
        return self._hash

    def __bool__(self):
        return not self.num.is_zero()

    def is_zero(self):
        return self.num.is_zero()

    def is_one(self):
        return self.num.is_one() and self.den.is_one()

    def depends_on_u(self):
        return self.num.degrees()[1] > 0 or self.den.degrees()[1] > 0

    def is_monomial(self):
        """True for c * q^a * u^b with c rational."""
        return len(self.num.to_dict()) == 1 and len(self.den.to_dict()) == 1

    def monomial_exponents(self):
        """(coefficient, q exponent, u exponent) of a monomial value."""
        if not self.is_monomial():
            raise ValueError(f"{self} is not a monomial")
        (ne, nc), = self.num.to_dict().items()
        (de, dc), = self.den.to_dict().items()
        return Fraction(int(nc), int(dc)), ne[0] - de[0], ne[1] - de[1]

    # u-specific operations
    def u1_valuation(self):
        """Order of vanishing at u = 1 (negative for a pole)."""
        if self.num.is_zero():
            raise ValueError("valuation of zero is infinite")
        return _u1_order(self.num) - _u1_order(self.den)

    def in_A(self):
        return self.num.is_zero() or self.u1_valuation() >= 0

    def at_u1(self):
        """Value at u = 1; requires the element to be regular there."""
        if self.num.is_zero():
            return ZERO
        v = self.u1_valuation()
        if v < 0:
            raise ValueError(f"{self} has a pole at u = 1")
        if v > 0:
            return ZERO
        num, den = _strip_u1(self.num), _strip_u1(self.den)
        return Rat(num.subs({"u": 1}), den.subs({"u": 1}))

    def subs_u_power(self, k):
        """Substitute u -> u^k (k >= 1)."""
        if k == 1:
            return self
        return Rat(self.num.compose(_Q, _U ** k), self.den.compose(_Q, _U ** k))

    def subs_u(self, value):
        """Substitute u -> value (a Rat)."""
        value = Rat._coerce(value)
        return _eval_poly_at(self.num, value) / _eval_poly_at(self.den, value)

    # rendering
    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"Rat({render(self)})"


def _u1_order(p):
    n = 0
    while not p.is_zero() and p.subs({"u": 1}).is_zero():
        p = p / _U_MINUS_1
        n += 1
    return n


def _strip_u1(p):
    while p.subs({"u": 1}).is_zero():
        p = p / _U_MINUS_1
    return p


def _eval_poly_at(p, u_value):
    total = ZERO
    for (qe, ue), c in p.to_dict().items():
        total = total + Rat(int(c)) * Rat.q(qe) * u_value ** ue
    return total


ZERO = Rat(0)
ONE = Rat(1)


def as_rat(x):
    return x if isinstance(x, Rat) else Rat(x)


def qint(l, base=1):
    """Quantum integer [l]_{q^base} = (q^{base*l} - q^{-base*l})/(q^base - q^{-base})."""
    if l == 0:
        return ZERO
    sign = 1 if l > 0 else -1
    l = abs(l)
    total = ZERO
    for t in range(l):
        total = total + Rat.q(base * (l - 1 - 2 * t))
    return total if sign > 0 else -total


def u1_valuation(f):
    return as_rat(f).u1_valuation()


# rendering -----------------------------------------------------------------

def _render_monomial(c, qe, ue):
    parts = []
    if qe:
        parts.append("q" if qe == 1 else f"q^{qe}")
    if ue:
        parts.append("u" if ue == 1 else f"u^{ue}")
    body = "*".join(parts)
    c = Fraction(c)
    if not body:
        return str(c)
    if c == 1:
        return body
    if c == -1:
        return "-" + body
    return f"{c}*{body}"


def _render_terms(terms):
    """terms: iterable of (coefficient, qe, ue) with possibly negative exponents."""
    terms = sorted(terms, key=lambda t: (t[2], -t[1]))
    out = ""
    for c, qe, ue in terms:
        s = _render_monomial(c, qe, ue)
        if out and not s.startswith("-"):
            out += "+"
        out += s
    return out or "0"


def render(x):
    """Deterministic text form, e.g. 'q^2+1+q^-2' or '(1-q^4*u)/(1-q^2*u)'."""
    if x.num.is_zero():
        return "0"
    dd = x.den.to_dict()
    # split the denominator into a monomial factor and a remainder
    mq = min(e[0] for e in dd)
    mu = min(e[1] for e in dd)
    rest = {(e[0] - mq, e[1] - mu): int(c) for e, c in dd.items()}
    num_terms = [(Fraction(int(c)), e[0] - mq, e[1] - mu) for e, c in x.num.to_dict().items()]
    if len(rest) == 1:
        (_, c), = rest.items()
        return _render_terms([(t[0] / c, t[1], t[2]) for t in num_terms])
    rest_terms = [(Fraction(c), e[0], e[1]) for e, c in rest.items()]
    first = sorted(rest_terms, key=lambda t: (t[2], -t[1]))[0]
    if first[0] < 0:
        rest_terms = [(-c, a, b) for c, a, b in rest_terms]
        num_terms = [(-c, a, b) for c, a, b in num_terms]
    n = _render_terms(num_terms)
    if len(num_terms) > 1:
        n = f"({n})"
    return f"{n}/({_render_terms(rest_terms)})"


# sequences ------------------------------------------------------------------

def _eulerian_numerators(s):
    """Integer polynomial P_s (coefficient list) with sum_{t>=1} t^s x^t = P_s(x)/(1-x)^{s+1}."""
    p = [0, 1]
    for k in range(s):
        deriv = [i * p[i] for i in range(1, len(p))]
        # P' (1-x) + (k+1) P, then multiply by x
        inner = [0] * (len(p) + 1)
        for i, c in enumerate(deriv):
            inner[i] += c
            inner[i + 1] -= c
        for i, c in enumerate(p):
            inner[i] += (k + 1) * c
        p = [0] + inner
        while len(p) > 1 and p[-1] == 0:
            p.pop()
    return p


def tail_sum(x, s):
    """Closed form of sum_{t>=1} x^t t^s as an element of Q(q, u)."""
    x = as_rat(x)
    if x == ONE:
        raise ValueError("divergent tail: ratio equals 1")
    total = ZERO
    xp = ONE
    for c in _eulerian_numerators(s):
        if c:
            total = total + c * xp
        xp = xp * x
    return total / (ONE - x) ** (s + 1)


class Sig:
    """Signature of the scalar sequence m -> base^m * u^(uexp*m) * m^deg."""

    __slots__ = ("base", "uexp", "deg", "_key")

    def __init__(self, base, uexp=0, deg=0):
        base = as_rat(base)
        if base.is_zero():
            raise ValueError("signature base must be nonzero")
        if base.depends_on_u():
            raise ValueError("signature base must not involve u; use uexp")
        self.base = base
        self.uexp = int(uexp)
        self.deg = int(deg)
        self._key = (base, self.uexp, self.deg)

    @property
    def beta(self):
        return self.base * Rat.u(self.uexp)

    def at(self, m):
        val = self.beta ** m
        if self.deg:
            val = val * (m ** self.deg)
        return val

    def collapsed(self):
        return Sig(self.base, 0, self.deg)

    def __eq__(self, other):
        return isinstance(other, Sig) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def sort_key(self):
        return (self.uexp, self.deg, str(self.base))

    def __repr__(self):
        return f"Sig({self.base}, u^{self.uexp}, m^{self.deg})"


class ExpPolyFamily:
    """A finite sum m -> sum_sig sig(m) * coeff_sig.

    Coefficients are any objects with ``+``, scalar ``*`` by Rat and
    ``is_zero()`` (the library uses :class:`qfusion.linalg.SparseMatrix`).
    ``start`` is None for families defined on all integer modes, else the
    first mode of a one-sided family.
    """

    __slots__ = ("terms", "start", "zero")

    def __init__(self, terms, zero, start=None):
        clean = {}
        for sig, coeff in terms.items():
            if sig in clean:
                coeff = clean[sig] + coeff
            clean[sig] = coeff
        self.terms = {s: c for s, c in clean.items() if not c.is_zero()}
        self.start = start
        self.zero = zero

    def at(self, m):
        if self.start is not None and m < self.start:
            raise ValueError(f"mode {m} outside domain m >= {self.start}")
        total = self.zero
        for sig, coeff in self.terms.items():
            total = total + coeff * sig.at(m)
        return total

    def signatures(self):
        return sorted(self.terms, key=Sig.sort_key)

    def order(self):
        return sum(s.deg + 1 for s in self.terms)

    def is_zero(self):
        return not self.terms

    def map(self, fn):
        return ExpPolyFamily({s: fn(c) for s, c in self.terms.items()}, fn(self.zero), self.start)

    def __add__(self, other):
        if self.start != other.start:
            raise ValueError("domain mismatch")
        terms = dict(self.terms)
        for s, c in other.terms.items():
            terms[s] = terms[s] + c if s in terms else c
        return ExpPolyFamily(terms, self.zero, self.start)

    def __eq__(self, other):
        if not isinstance(other, ExpPolyFamily) or self.start != other.start:
            return False
        return (self.terms.keys() == other.terms.keys()
                and all(self.terms[s] == other.terms[s] for s in self.terms))

    __hash__ = None


def annihilator(family_or_sigs):
    """Coefficients [c_0, c_1, ...] of prod (1 - beta T)^(deg+1) over the signatures."""
    sigs = family_or_sigs.terms if isinstance(family_or_sigs, ExpPolyFamily) else family_or_sigs
    poly = [ONE]
    for sig in sigs:
        for _ in range(sig.deg + 1):
            b = sig.beta
            new = [ZERO] * (len(poly) + 1)
            for i, c in enumerate(poly):
                new[i] = new[i] + c
                new[i + 1] = new[i + 1] - b * c
            poly = new
    return poly


def solve_square(matrix, rhs):
    """Solve matrix * X = rhs over Q(q,u); rhs entries are generic coefficient objects."""
    n = len(matrix)
    a = [list(row) for row in matrix]
    b = list(rhs)
    for col in range(n):
        piv = next((r for r in range(col, n) if not a[r][col].is_zero()), None)
        if piv is None:
            raise ValueError("singular system")
        a[col], a[piv] = a[piv], a[col]
        b[col], b[piv] = b[piv], b[col]
        inv = a[col][col].inverse()
        a[col] = [x * inv for x in a[col]]
        b[col] = b[col] * inv
        for r in range(n):
            if r != col and not a[r][col].is_zero():
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
                b[r] = b[r] + b[col] * (-f)
    return b


def separate_components(samples, sigs, start=0):
    """Recover {sig: coefficient} from samples at modes start, start+1, ...

    The basis functions are m -> beta^m m^j for every signature; the system
    is a confluent Vandermonde matrix and is solved exactly.
    """
    sigs = list(sigs)
    if len(set(sigs)) != len(sigs):
        raise ValueError("duplicate signatures")
    n = len(sigs)
    if len(samples) < n:
        raise ValueError("not enough samples")
    modes = range(start, start + n)
    matrix = [[s.at(m) for s in sigs] for m in modes]
    sol = solve_square(matrix, samples[:n])
    return dict(zip(sigs, sol))


def binom(n, k):
    return comb(n, k)
