"""Exact and high-precision scalars.

Two scalar fields underlie every other module:

* QScalar: ratio of Laurent polynomials in the deformation parameter q with
  exact rational coefficients.  Arithmetic is exact, the representation is
  canonical, equality is structural.
* big complex floats: gmpy2's mpfr/mpc with explicit binary precision.  The
  helpers at the bottom manage precision contexts, build q = exp(i pi nu),
  and convert to/from mpmath at the small-matrix eigenvalue boundary.

Canonical form: the numerator is a Laurent polynomial stored as ascending
coefficients plus the lowest exponent; the denominator is an ordinary
polynomial with nonzero constant term and leading coefficient 1, coprime to
the numerator.  With that, (a+b)-b == a holds bit-exactly and text output is
reproducible.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

import gmpy2
from gmpy2 import mpc, mpfr, mpq


class PoleAtRootOfUnity(ArithmeticError):
    """A QScalar denominator vanishes at the requested numeric q."""


# ----------------------------------------------------------------- poly core
# Dense tuples of mpq, ascending powers.  Normalised means: empty (the zero
# polynomial) or last coefficient nonzero.

_Q0 = mpq(0)
_Q1 = mpq(1)


def _ptrim(c):
    n = len(c)
    while n and not c[n - 1]:
        n -= 1
    return tuple(c[:n])


def _padd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] += x
    return _ptrim(out)


def _pneg(a):
    return tuple(-x for x in a)


def _pmul(a, b):
    if not a or not b:
        return ()
    out = [_Q0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _ptrim(out)


def _pdivmod(a, b):
    """Euclidean division in Q[q]; b must be normalised and nonzero."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db, lb = len(b) - 1, b[-1]
    q = [_Q0] * max(0, len(a) - db)
    while len(r) - 1 >= db and _ptrim(r):
        r = list(_ptrim(r))
        if len(r) - 1 < db:
            break
        c = r[-1] / lb
        k = len(r) - 1 - db
        q[k] = c
        for i, y in enumerate(b):
            r[k + i] -= c * y
        r.pop()
    return _ptrim(q), _ptrim(r)


def _pgcd(a, b):
    """Monic gcd in Q[q].  Plain Euclid; degrees stay small in this code."""
    while b:
        a, b = b, _pdivmod(a, b)[1]
        if b:
            lb = b[-1]
            b = tuple(x / lb for x in b)
    if not a:
        return ()
    la = a[-1]
    return tuple(x / la for x in a)


def _as_mpq(x):
    if isinstance(x, mpq.__class__) or type(x) is type(_Q0):
        return x
    if isinstance(x, int):
        return mpq(x)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


class QScalar:
    """Element of Q(q), stored as a canonical Laurent-rational."""

    __slots__ = ("num", "low", "den")

    def __init__(self, num=(), low=0, den=(_Q1,), _raw=False):
        if _raw:
            self.num, self.low, self.den = num, low, den
            return
        n, l, d = _canonical(tuple(_as_mpq(c) for c in num), low,
                             tuple(_as_mpq(c) for c in den))
        self.num, self.low, self.den = n, l, d

    # -- constructors ------------------------------------------------------
    @staticmethod
    def from_rational(x):
        x = _as_mpq(x)
        if not x:
            return _ZERO
        return QScalar((x,), 0, (_Q1,), _raw=True)

    @staticmethod
    def q(k=1):
        """The monomial q^k."""
        return QScalar((_Q1,), k, (_Q1,), _raw=True)

    @staticmethod
    def zero():
        return _ZERO

    @staticmethod
    def one():
        return _ONE

    # -- predicates --------------------------------------------------------
    def is_zero(self):
        return not self.num

    def is_rational(self):
        return self.den == (_Q1,) and (not self.num or (len(self.num) == 1 and self.low == 0))

    def as_rational(self):
        if not self.num:
            return mpq(0)
        if not self.is_rational():
            raise ValueError("not a plain rational: %s" % self)
        return self.num[0]

    def num_exponents(self):
        """(lowest, highest) q-exponent of the numerator; None for zero."""
        if not self.num:
            return None
        return (self.low, self.low + len(self.num) - 1)

    def den_degree(self):
        return len(self.den) - 1

    # -- arithmetic --------------------------------------------------------
    def __bool__(self):
        return bool(self.num)

    def __abs__(self):
        # coefficient-mass magnitude: zero iff the element is zero, which
        # lets the dense-oracle residual helpers run on exact scalars
        if not self.num:
            return 0.0
        n = sum(abs(c) for c in self.num)
        d = sum(abs(c) for c in self.den)
        return float(n / d)

    def __pos__(self):
        return self

    def __neg__(self):
        return QScalar(_pneg(self.num), self.low, self.den, _raw=True)

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.num:
            return other
        if not other.num:
            return self
        g = _pgcd(self.den, other.den)
        d1 = _pdivmod(self.den, g)[0]
        d2 = _pdivmod(other.den, g)[0]
        lo = min(self.low, other.low)
        a = _shift_mul(self.num, self.low - lo, d2)
        b = _shift_mul(other.num, other.low - lo, d1)
        return QScalar(_padd(a, b), lo, _pmul(self.den, d2))

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.num or not other.num:
            return _ZERO
        # cross-cancel before multiplying to keep degrees down
        g1 = _pgcd(self.num, other.den)
        g2 = _pgcd(other.num, self.den)
        n1 = _pdivmod(self.num, g1)[0]
        d2 = _pdivmod(other.den, g1)[0]
        n2 = _pdivmod(other.num, g2)[0]
        d1 = _pdivmod(self.den, g2)[0]
        return QScalar(_pmul(n1, n2), self.low + other.low, _pmul(d1, d2))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other._inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self._inverse()

    def _inverse(self):
        if not self.num:
            raise ZeroDivisionError("QScalar division by zero")
        return QScalar(self.den, -self.low, self.num)

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self._inverse() ** (-k)
        out, base = _ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- structure ---------------------------------------------------------
    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self.num, self.low, self.den) == (other.num, other.low, other.den)

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        return hash((self.num, self.low, self.den))

    def subs_qinv(self):
        """The image under q -> 1/q (bar involution)."""
        n = tuple(reversed(self.num))
        nlow = -(self.low + len(self.num) - 1) if self.num else 0
        d = tuple(reversed(self.den))
        dlow = -(len(self.den) - 1)
        return QScalar(n, nlow - dlow, d)

    # -- text --------------------------------------------------------------
    def __repr__(self):
        return self.to_text()

    def to_text(self):
        num = _poly_text(self.num, self.low)
        den = _poly_text(self.den, 0)
        return "(%s)/(%s)" % (num, den)

    @staticmethod
    def parse(text):
        return _parse_qscalar(text)


def _canonical(num, low, den):
    num = list(num)
    # strip zero coefficients at both ends of the numerator
    k = 0
    while k < len(num) and not num[k]:
        k += 1
    num = _ptrim(num[k:])
    low += k
    den = _ptrim(den)
    if not den:
        raise ZeroDivisionError("QScalar with zero denominator")
    if not num:
        return (), 0, (_Q1,)
    # pull the denominator's q-power into the numerator exponent
    s = 0
    while not den[s]:
        s += 1
    if s:
        den = den[s:]
        low -= s
    g = _pgcd(num, den)
    if len(g) > 1:
        num = _pdivmod(num, g)[0]
        den = _pdivmod(den, g)[0]
    lead = den[-1]
    if lead != 1:
        num = tuple(x / lead for x in num)
        den = tuple(x / lead for x in den)
    return tuple(num), low, tuple(den)


def _shift_mul(num, shift, mul):
    p = _pmul(num, mul)
    if shift:
        p = (_Q0,) * shift + p
    return p


def _coerce(x):
    if isinstance(x, QScalar):
        return x
    if isinstance(x, (int, Fraction)) or type(x) is type(_Q0):
        return QScalar.from_rational(x)
    return NotImplemented


_ZERO = QScalar((), 0, (_Q1,), _raw=True)
_ONE = QScalar((_Q1,), 0, (_Q1,), _raw=True)


def q_int(k):
    """The q-integer [k] = (q^k - q^-k)/(q - q^-1) as a Laurent polynomial.

    [k] = q^(k-1) + q^(k-3) + ... + q^(1-k) for k > 0, [0] = 0, [-k] = -[k].
    """
    if k == 0:
        return _ZERO
    s = 1 if k > 0 else -1
    k = abs(k)
    coeffs = []
    for i in range(2 * k - 1):
        coeffs.append(mpq(s) if i % 2 == 0 else _Q0)
    return QScalar(tuple(coeffs), 1 - k, (_Q1,), _raw=True)


def q_dim(two_j_plus_one):
    """Quantum dimension [2j+1] given the integer 2j+1."""
    return q_int(two_j_plus_one)


# ------------------------------------------------------------------ text i/o

def _coef_text(c):
    if c.denominator == 1:
        return str(c.numerator)
    return "%s/%s" % (c.numerator, c.denominator)


def _poly_text(coeffs, low):
    if not coeffs:
        return "0"
    parts = []
    for i, c in enumerate(coeffs):
        if not c:
            continue
        e = low + i
        neg = c < 0
        a = -c if neg else c
        if e == 0:
            body = _coef_text(a)
        else:
            qp = "q" if e == 1 else "q^%d" % e
            body = qp if a == 1 else "%s*%s" % (_coef_text(a), qp)
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


_TOKEN = re.compile(r"\s*(?:(?P<rat>\d+(?:/\d+)?)|(?P<q>q)|(?P<pow>\^|\*\*)"
                    r"|(?P<mul>\*)|(?P<sign>[+-])|(?P<int>\d+))")


def _parse_poly(text):
    """Parse a sum of terms 'c', 'c*q^e', 'q^e', 'q' into (coeffs, low)."""
    terms = {}
    pos = 0
    sign = 1
    expect_term = True
    n = len(text)
    cur_coef = None
    cur_exp = None
    have_q = False

    def flush():
        nonlocal cur_coef, cur_exp, have_q, sign
        if cur_coef is None and not have_q:
            return
        c = _Q1 if cur_coef is None else cur_coef
        e = (cur_exp if cur_exp is not None else 1) if have_q else 0
        terms[e] = terms.get(e, _Q0) + sign * c
        cur_coef, cur_exp, have_q, sign = None, None, False, 1

    while pos < n:
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise ValueError("bad QScalar text near %r" % text[pos:pos + 12])
        pos = m.end()
        if m.group("sign"):
            if not expect_term and (cur_coef is not None or have_q):
                flush()
            if m.group("sign") == "-":
                sign = -sign
            expect_term = True
        elif m.group("rat"):
            if have_q:  # exponents are handled via ^; bare int after q is an error
                raise ValueError("unexpected number after q in %r" % text)
            cur_coef = (cur_coef if cur_coef is not None else _Q1) * mpq(m.group("rat"))
            expect_term = False
        elif m.group("q"):
            have_q = True
            expect_term = False
        elif m.group("pow"):
            m2 = re.match(r"\s*(-?\d+)", text[pos:])
            if not m2 or not have_q:
                raise ValueError("bad exponent in %r" % text)
            cur_exp = int(m2.group(1))
            pos += m2.end()
            expect_term = False
        elif m.group("mul"):
            pass
    flush()
    if not terms:
        return (), 0
    low = min(terms)
    high = max(terms)
    coeffs = tuple(terms.get(e, _Q0) for e in range(low, high + 1))
    return coeffs, low


def _parse_qscalar(text):
    t = text.strip()
    # split "(num)/(den)" at the top level; bare "num" also accepted
    if t.startswith("("):
        depth, i = 0, 0
        for i, ch in enumerate(t):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
                if depth == 0:
                    break
        numtext = t[1:i]
        rest = t[i + 1:].strip()
        if rest == "":
            dentext = "1"
        elif rest.startswith("/"):
            r = rest[1:].strip()
            if not (r.startswith("(") and r.endswith(")")):
                raise ValueError("bad QScalar text %r" % text)
            dentext = r[1:-1]
        else:
            raise ValueError("bad QScalar text %r" % text)
    else:
        numtext, dentext = t, "1"
    ncoef, nlow = _parse_poly(numtext)
    dcoef, dlow = _parse_poly(dentext)
    if dlow:
        # fold the denominator's Laurent shift into the numerator
        nlow -= dlow
    return QScalar(ncoef, nlow, dcoef)


# ----------------------------------------------------------- numeric helpers

DEFAULT_BITS = 200


def bits_for_digits(digits):
    return int(math.ceil(digits * math.log2(10))) + 12


def digits_for_bits(bits):
    return int((bits - 12) * math.log10(2))


def workprec(bits):
    """Context manager setting the gmpy2 working precision in bits."""
    return gmpy2.context(precision=bits, allow_complex=True)


def set_precision(bits):
    """Set the ambient thread precision (sticky, for whole-pipeline runs)."""
    ctx = gmpy2.context(precision=bits, allow_complex=True)
    gmpy2.set_context(ctx)
    return ctx


def q_at_nu(nu, bits=None):
    """q = exp(i pi nu) at the given precision (nu exact rational)."""
    nu = _as_mpq(nu)
    if bits is not None:
        with workprec(bits):
            return gmpy2.exp(mpc(0, gmpy2.const_pi() * mpfr(nu)))
    return gmpy2.exp(mpc(0, gmpy2.const_pi() * mpfr(nu)))


def eval_poly_at(coeffs, low, qv):
    """Evaluate a Laurent polynomial (ascending mpq coeffs from q^low) at qv."""
    acc = mpc(0)
    for c in reversed(coeffs):
        acc = acc * qv
        if c:
            acc = acc + mpfr(c)
    if low:
        acc = acc * qv ** low
    return acc


def eval_at_nu(x, nu, bits=DEFAULT_BITS):
    """Numeric value of a QScalar at q = exp(i pi nu).

    Raises PoleAtRootOfUnity when the denominator vanishes to within
    10^-(digits-10) at the working precision.
    """
    with workprec(bits):
        qv = q_at_nu(nu)
        return eval_at_q(x, qv, bits=bits)


def eval_at_q(x, qv, bits=DEFAULT_BITS):
    """Numeric value of a QScalar at an explicit numeric q on the unit circle."""
    nv = eval_poly_at(x.num, x.low, qv)
    dv = eval_poly_at(x.den, 0, qv)
    digits = digits_for_bits(bits)
    tol = mpfr(10) ** (-(digits - 10))
    if abs(dv) < tol:
        raise PoleAtRootOfUnity("denominator %s vanishes at q=%s" % (x.den, qv))
    return nv / dv


# mpmath boundary: exact bit-level conversion both ways.

def mpc_to_mpmath(z):
    import mpmath

    def cv(r):
        if gmpy2.is_zero(r):
            return mpmath.mpf(0)
        m, e = r.as_mantissa_exp()
        return mpmath.ldexp(int(m), int(e))

    zz = mpc(z)
    return mpmath.mpc(cv(zz.real), cv(zz.imag))


def mpmath_to_mpc(z):
    import mpmath

    def cv(x):
        sign, man, exp, bc = mpmath.mpf(x)._mpf_
        if man == 0:
            return mpfr(0)
        v = gmpy2.mpfr(man, max(int(man).bit_length() + 2, 2))
        if exp >= 0:
            v = gmpy2.mul_2exp(v, exp)
        else:
            v = gmpy2.div_2exp(v, -exp)
        return -v if sign else v

    z = mpmath.mpc(z)
    return mpc(cv(z.real), cv(z.imag))


def real_text(x, digits=30):
    return format(mpfr(x), ".%de" % digits)


def complex_text(z, digits=30):
    z = mpc(z)
    return "%s %s" % (real_text(z.real, digits), real_text(z.imag, digits))


def nearest_fraction(x, tol):
    """Best rational approximation to a real x within tol (continued fractions)."""
    x = mpfr(x)
    neg = x < 0
    if neg:
        x = -x
    p0, q0, p1, q1 = 0, 1, 1, 0
    y = x
    for _ in range(200):
        a = int(gmpy2.floor(y))
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        if abs(x - mpfr(p1) / q1) < tol:
            f = Fraction(p1, q1)
            return -f if neg else f
        frac = y - a
        if gmpy2.is_zero(frac):
            break
        y = 1 / frac
    f = Fraction(p1, q1)
    return -f if neg else f
