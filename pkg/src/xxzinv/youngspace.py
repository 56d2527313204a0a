"""Young-diagram vector space with its Grassmann (Fock) picture.

A YoungVector is a finite linear combination of partitions together with a
"slots" count: the number of symmetric-function variables it lives in.  The
name avoids a clash with the deformation parameter q.  All operations are
generic over the scalar type (QScalar or gmpy2 mpc); a scalar only needs
+, -, *, / and truthiness-as-nonzero.

Slot bookkeeping: wedge adds one slot (two for the two-variable wedge), the
E operator removes one, sigma and cut leave it unchanged.
"""

from __future__ import annotations

from .errors import DomainError, NumericalDegeneracy

# partitions are tuples of weakly decreasing positive ints, () for empty


def check_partition(lam):
    prev = None
    for x in lam:
        if x <= 0 or (prev is not None and x > prev):
            raise DomainError("not a partition: %r" % (lam,))
        prev = x
    return tuple(lam)


def partition_text(lam):
    return "[" + ",".join(str(x) for x in lam) + "]"


def parse_partition(text):
    t = text.strip()
    if not (t.startswith("[") and t.endswith("]")):
        raise DomainError("bad partition text %r" % text)
    body = t[1:-1].strip()
    if not body:
        return ()
    return check_partition(tuple(int(x) for x in body.split(",")))


def fock_map(lam, slots):
    """Strictly decreasing mode list (lam_i + slots - i, i = 1..slots)."""
    lam = tuple(lam)
    if len(lam) > slots:
        raise DomainError("partition %r needs more than %d slots" % (lam, slots))
    padded = lam + (0,) * (slots - len(lam))
    return tuple(padded[i] + slots - 1 - i for i in range(slots))


def fock_inverse(modes):
    """Partition from a strictly decreasing mode list; zero parts removed."""
    s = len(modes)
    lam = []
    for i, k in enumerate(modes):
        part = k - (s - 1 - i)
        if part < 0:
            raise DomainError("modes %r are not decreasing enough" % (modes,))
        if part:
            lam.append(part)
    return tuple(lam)


class YoungVector:
    """Map partition -> scalar, all partition lengths <= slots."""

    __slots__ = ("slots", "terms")

    def __init__(self, slots, terms=None):
        self.slots = slots
        self.terms = {}
        if terms:
            for lam, c in terms.items():
                if not c:
                    continue
                if len(lam) > slots:
                    raise DomainError("partition %r too long for %d slots" % (lam, slots))
                self.terms[tuple(lam)] = c

    @staticmethod
    def unit(slots, coeff=1):
        return YoungVector(slots, {(): coeff})

    @staticmethod
    def zero(slots):
        return YoungVector(slots)

    def is_zero(self):
        return not self.terms

    def scaled(self, c):
        if not c:
            return YoungVector(self.slots)
        return YoungVector(self.slots, {lam: c * v for lam, v in self.terms.items()})

    def __add__(self, other):
        if self.slots != other.slots:
            raise DomainError("slot mismatch %d vs %d" % (self.slots, other.slots))
        out = dict(self.terms)
        for lam, c in other.terms.items():
            s = out.get(lam)
            s = c if s is None else s + c
            if s:
                out[lam] = s
            elif lam in out:
                del out[lam]
        v = YoungVector(self.slots)
        v.terms = out
        return v

    def __sub__(self, other):
        return self + other.scaled(-1)

    def __repr__(self):
        if not self.terms:
            return "YoungVector(%d slots, 0)" % self.slots
        body = " + ".join("%r*%s" % (c, partition_text(l))
                          for l, c in sorted(self.terms.items()))
        return "YoungVector(%d slots, %s)" % (self.slots, body)

    def map_terms(self, fn):
        """fn(lam, coeff) -> iterable of (lam', coeff'); same slots."""
        out = YoungVector(self.slots)
        acc = out.terms
        for lam, c in self.terms.items():
            for lam2, c2 in fn(lam, c):
                if not c2:
                    continue
                s = acc.get(lam2)
                s = c2 if s is None else s + c2
                if s:
                    acc[lam2] = s
                elif lam2 in acc:
                    del acc[lam2]
        return out


def cut(m, Y):
    """Remove all terms whose partition is longer than m rows."""
    v = YoungVector(Y.slots)
    v.terms = {lam: c for lam, c in Y.terms.items() if len(lam) <= m}
    return v


# ------------------------------------------------------------------- wedging

def _insert_mode(modes, j):
    """Insert mode j into a strictly decreasing tuple; (None, 0) if occupied."""
    if j in modes:
        return None, 0
    above = sum(1 for k in modes if k > j)
    new = modes[:above] + (j,) + modes[above:]
    sign = -1 if above % 2 else 1
    return new, sign


def wedge(coeffs, Y):
    """P wedge Y for P(x) = sum_j coeffs[j] x^j.  Output slots = input + 1."""
    s = Y.slots
    out = YoungVector(s + 1)
    acc = out.terms
    for lam, c in Y.terms.items():
        modes = fock_map(lam, s)
        for j, p in enumerate(coeffs):
            if not p:
                continue
            new, sign = _insert_mode(modes, j)
            if new is None:
                continue
            lam2 = fock_inverse(new)
            val = c * p if sign > 0 else -(c * p)
            t = acc.get(lam2)
            t = val if t is None else t + val
            if t:
                acc[lam2] = t
            elif lam2 in acc:
                del acc[lam2]
    return out


def wedge2(coeffs2, Y):
    """P wedge Y for a two-variable P = sum coeffs2[(j,k)] x^j y^k; slots + 2.

    The two modes are inserted as psi*_j psi*_k acting on the left, so the
    coefficient matrix need not be antisymmetrised by the caller.
    """
    s = Y.slots
    out = YoungVector(s + 2)
    acc = out.terms
    for lam, c in Y.terms.items():
        modes = fock_map(lam, s)
        for (j, k), p in coeffs2.items():
            if not p or j == k:
                continue
            m1, s1 = _insert_mode(modes, k)
            if m1 is None:
                continue
            m2, s2 = _insert_mode(m1, j)
            if m2 is None:
                continue
            lam2 = fock_inverse(m2)
            val = c * p if s1 * s2 > 0 else -(c * p)
            t = acc.get(lam2)
            t = val if t is None else t + val
            if t:
                acc[lam2] = t
            elif lam2 in acc:
                del acc[lam2]
    return out


# -------------------------------------------------- Pieri / branching moves

def _vertical_strips(lam, j, maxlen):
    """All mu with mu/lam a vertical strip of size j and len(mu) <= maxlen."""
    lam = tuple(lam)
    n = min(len(lam) + j, maxlen)
    if len(lam) > n:
        return []
    padded = lam + (0,) * (n - len(lam))
    out = []

    def rec(i, left, acc):
        if n - i < left:
            return
        if i == n:
            out.append(tuple(x for x in acc if x))
            return
        cur = padded[i]
        prev = acc[i - 1] if i else None
        if left and (prev is None or cur + 1 <= prev):
            rec(i + 1, left - 1, acc + [cur + 1])
        rec(i + 1, left, acc + [cur])

    rec(0, j, [])
    return out


def lr_sigma(j, Y):
    """Multiply by the elementary symmetric function e_j in slots variables."""
    if j == 0:
        return Y
    maxlen = Y.slots

    def fn(lam, c):
        for mu in _vertical_strips(lam, j, maxlen):
            yield mu, c

    return Y.map_terms(fn)


def _interlacing(lam):
    """All mu with lam_i >= mu_i >= lam_{i+1} (horizontal strip removal)."""
    lam = tuple(lam)
    if not lam:
        return [()]
    out = []

    def rec(i, acc):
        if i == len(lam):
            out.append(tuple(x for x in acc if x))
            return
        lo = lam[i + 1] if i + 1 < len(lam) else 0
        for v in range(lo, lam[i] + 1):
            rec(i + 1, acc + [v])

    rec(0, [])
    return out


def e_operator(Y):
    """E: set one variable to 1, i.e. s_lam(x_1..x_{s-1}, 1) expanded.

    Output slots = input - 1; terms needing the full slot count drop (they
    vanish as Schur functions of fewer variables).
    """
    s = Y.slots
    if s == 0:
        raise DomainError("cannot remove a variable from a 0-slot vector")
    out = YoungVector(s - 1)
    acc = out.terms
    for lam, c in Y.terms.items():
        for mu in _interlacing(lam):
            if len(mu) > s - 1:
                continue
            t = acc.get(mu)
            t = c if t is None else t + c
            if t:
                acc[mu] = t
            elif mu in acc:
                del acc[mu]
    return out


# ----------------------------------------------------------------- evaluation

def _det(rows):
    """Determinant by Gaussian elimination; scalars form a field."""
    n = len(rows)
    m = [list(r) for r in rows]
    det = None
    sign = 1
    for k in range(n):
        piv = None
        for r in range(k, n):
            if m[r][k]:
                piv = r
                break
        if piv is None:
            return 0
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        pk = m[k][k]
        det = pk if det is None else det * pk
        for r in range(k + 1, n):
            f = m[r][k] / pk
            if not f:
                continue
            row = m[r]
            base = m[k]
            for c2 in range(k + 1, n):
                row[c2] = row[c2] - f * base[c2]
    if det is None:
        return 1  # 0x0 determinant
    return det if sign > 0 else -det


def _alternant(points, exponents):
    return _det([[x ** e for e in exponents] for x in points])


def complete_h(points, kmax):
    """Complete homogeneous symmetric functions h_0..h_kmax of the points."""
    one = _one_like(points)
    h = [one] + [0] * kmax
    for x in points:
        for k in range(1, kmax + 1):
            prev = h[k - 1]
            add = prev * x if prev else 0
            h[k] = (h[k] + add) if h[k] else add
    return h


def elementary_e(points, kmax):
    one = _one_like(points)
    e = [one] + [0] * kmax
    for x in points:
        for k in range(min(kmax, len(points)), 0, -1):
            prev = e[k - 1]
            add = prev * x if prev else 0
            e[k] = (e[k] + add) if e[k] else add
    return e


def _one_like(points):
    for x in points:
        return (x / x) if x else 1
    return 1


def schur_jacobi_trudi(lam, points):
    """s_lam via the h-determinant; safe at coincident points."""
    if not lam:
        return _one_like(points)
    n = len(lam)
    kmax = lam[0] + n
    h = complete_h(points, kmax)

    def hh(k):
        if k < 0 or k > kmax:
            return 0
        return h[k]

    rows = [[hh(lam[i] - i + j) for j in range(n)] for i in range(n)]
    return _det(rows)


def schur_eval(Y, points, min_sep=None):
    """Apply the Schur functional: sum of coeff * s_lam(points).

    len(points) must equal Y.slots.  Uses the alternant ratio; with numeric
    points closer than min_sep it raises NumericalDegeneracy (callers that
    want robustness can evaluate term-wise with schur_jacobi_trudi).
    """
    if len(points) != Y.slots:
        raise DomainError("need %d points, got %d" % (Y.slots, len(points)))
    s = Y.slots
    if s == 0:
        total = 0
        for lam, c in Y.terms.items():
            total = total + c  # only () can occur
        return total
    if min_sep is not None:
        for i in range(s):
            for j in range(i + 1, s):
                if abs(points[i] - points[j]) < min_sep:
                    raise NumericalDegeneracy("points %d,%d too close" % (i, j))
    vand = _one_like(points)
    for i in range(s):
        for j in range(i + 1, s):
            vand = vand * (points[i] - points[j])
    if not vand:
        raise NumericalDegeneracy("coincident evaluation points")
    total = 0
    for lam, c in Y.terms.items():
        exps = fock_map(lam, s)
        total = total + c * _alternant(points, exps)
    return total / vand
