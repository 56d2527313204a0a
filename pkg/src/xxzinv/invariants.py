"""Quantum-group symmetric operators on spin chain segments.

Half-integer spins are stored doubled (2j as int) so every path and weight
stays exact.  Tensor indices over (C^2)^{otimes k} are bitmasks: site p of k
occupies bit (k - p), bit value 0 meaning spin up (+1/2) and 1 spin down.

Three coordinate systems for the commutant of the U_q(sl2) action on n
sites, all exact over QScalar:

  * fusion-path vectors on 2n sites (Bratteli diagrams, highest weight 0),
  * products of two-site singlets along a noncrossing arc diagram,
  * the operator picture, reached through a fixed isomorphism between
    endomorphisms of (C^2)^{otimes n} and vectors on 2n sites.

The bases are related by a transform that is triangular when diagrams are
listed lexicographically; both directions are used downstream.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import DomainError, SingularBasis
from .scalars import QScalar, q_int
from .smat import sp_commutator

UP, DOWN = 0, 1  # bit values per site


def _dbl(j):
    """Spin -> doubled int, accepting int, Fraction, float halves."""
    if isinstance(j, int):
        return 2 * j
    f = Fraction(j)
    t = f * 2
    if t.denominator != 1:
        raise DomainError(f"not a half-integer spin: {j!r}")
    return int(t)


# ---------------------------------------------------------------------------
# Bratteli diagrams


@dataclass(frozen=True)
class BratteliDiagram:
    """A walk j_0, j_1, ..., j_k on spins with steps of 1/2, stored doubled."""

    twojs: tuple

    def __post_init__(self):
        t = self.twojs
        if not t:
            raise DomainError("empty diagram")
        for a in t:
            if not isinstance(a, int) or a < 0:
                raise DomainError(f"bad doubled spin {a!r}")
        for a, b in zip(t, t[1:]):
            if abs(a - b) != 1:
                raise DomainError(f"step from {a}/2 to {b}/2 is not 1/2")

    @property
    def length(self):
        return len(self.twojs) - 1

    def spin(self, p):
        return Fraction(self.twojs[p], 2)

    def text(self):
        return ",".join(str(a) for a in self.twojs)

    @classmethod
    def parse(cls, s):
        try:
            parts = tuple(int(a.strip()) for a in s.split(","))
        except ValueError:
            raise DomainError(f"cannot parse diagram {s!r}")
        return cls(parts)

    def max_twoj(self):
        return max(self.twojs)

    def sort_key(self):
        return self.twojs

    def reversed(self):
        return BratteliDiagram(self.twojs[::-1])


def bratteli_enumerate(k, j_start=0, j_end=0, r=None):
    """All length-k diagrams from j_start to j_end, lexicographic order.

    r restricts spins to 2j <= r - 2; r=None leaves them unbounded.
    Lexicographic comparison favours the smaller spin at the earliest step.
    """
    a, b = _dbl(j_start), _dbl(j_end)
    cap = None if r is None else r - 2
    if cap is not None and (a > cap or b > cap):
        return []
    out = []
    path = [a]

    def walk(cur, left):
        if left == 0:
            if cur == b:
                out.append(BratteliDiagram(tuple(path)))
            return
        # can't reach b if too far away
        if abs(cur - b) > left:
            return
        for nxt in (cur - 1, cur + 1):
            if nxt < 0 or (cap is not None and nxt > cap):
                continue
            path.append(nxt)
            walk(nxt, left - 1)
            path.pop()

    walk(a, k)
    return out


def multiplicity_count(k, j):
    """Number of walks 0 -> j in k steps (no spin cap)."""
    tj = _dbl(j)
    if (k - tj) % 2 or tj > k or tj < 0:
        return 0
    d = (k - tj) // 2
    return comb(k, d) - (comb(k, d - 1) if d >= 1 else 0)


# ---------------------------------------------------------------------------
# Fusion weights

_one = QScalar.one()


def _qpow_sum(exps):
    acc = QScalar.zero()
    for e in exps:
        acc = acc + QScalar.q(e)
    return acc


def threej(j, m, eps, up):
    """Unnormalised fusion weight for j (x) 1/2 -> j +- 1/2.

    m is the magnetic index on the spin-j leg, eps = +-1/2 the new site.
    up=True targets j+1/2.  Divisions by q^2-1 are carried out exactly as
    geometric sums, so the result is a Laurent polynomial in q.
    """
    tj, tm, te = _dbl(j), _dbl(m), _dbl(eps)
    if te not in (1, -1):
        raise DomainError(f"eps must be +-1/2, got {eps!r}")
    if abs(tm) > tj or (tj - tm) % 2:
        raise DomainError(f"m={m!r} not a weight of spin {j!r}")
    if te == -1:
        return _one
    if up:
        # (q^(2m+2) - q^(-2j)) / (q^2 - 1), exponent gap nonnegative
        t = (tm + tj) // 2 + 1
        return _qpow_sum(-tj + 2 * i for i in range(t))
    # (q^(2m+2) - q^(2j+2)) / (q^2 - 1), gap nonpositive
    t = (tj - tm) // 2
    return -_qpow_sum(tm + 2 + 2 * i for i in range(t))


def e_vector(k, J, m, m_end):
    """Fusion-path vector on (C^2)^(otimes k) for diagram J.

    Follows J site by site, summing over spin assignments whose running
    magnetic index stays inside each intermediate representation and lands
    on m_end.  Returns {bitmask: QScalar}.
    """
    if J.length != k:
        raise DomainError(f"diagram length {J.length} != {k}")
    tm, tme = _dbl(m), _dbl(m_end)
    if abs(tm) > J.twojs[0] or abs(tme) > J.twojs[-1]:
        raise DomainError("magnetic index outside representation")
    out = {}

    def walk(p, mrun, mask, coeff):
        if p == k:
            if mrun == tme:
                s = out.get(mask)
                s = coeff if s is None else s + coeff
                if not s.is_zero():
                    out[mask] = s
                elif mask in out:
                    del out[mask]
            return
        tj0, tj1 = J.twojs[p], J.twojs[p + 1]
        up = tj1 > tj0
        for te, bit in ((1, UP), (-1, DOWN)):
            mn = mrun + te
            if abs(mn) > tj1 or abs(mn - tme) > (k - p - 1):
                continue
            w = threej(Fraction(tj0, 2), Fraction(mrun, 2), Fraction(te, 2), up)
            if w.is_zero():
                continue
            walk(p + 1, mn, mask | (bit << (k - p - 1)), coeff * w)

    walk(0, tm, 0, _one)
    return out


# ---------------------------------------------------------------------------
# Arc diagrams


@dataclass(frozen=True)
class ArcDiagram:
    """Noncrossing perfect matching of 1..2n, arcs sorted by opening point."""

    arcs: tuple

    def __post_init__(self):
        pts = sorted(p for a in self.arcs for p in a)
        n2 = 2 * len(self.arcs)
        if pts != list(range(1, n2 + 1)):
            raise DomainError("arcs must match 1..2n exactly once")
        for i, k in self.arcs:
            if not i < k:
                raise DomainError(f"arc ({i},{k}) not ordered")
        for (i1, k1), (i2, k2) in itertools.combinations(self.arcs, 2):
            if i1 < i2 < k1 < k2 or i2 < i1 < k2 < k1:
                raise DomainError(f"arcs ({i1},{k1}) and ({i2},{k2}) cross")

    @property
    def n(self):
        return len(self.arcs)

    def text(self):
        n2 = 2 * self.n
        opens = {i for i, _ in self.arcs}
        return "".join("(" if p in opens else ")" for p in range(1, n2 + 1))

    @classmethod
    def parse(cls, s):
        stack, arcs = [], []
        for p, ch in enumerate(s, start=1):
            if ch == "(":
                stack.append(p)
            elif ch == ")":
                if not stack:
                    raise DomainError(f"unbalanced arcs {s!r}")
                arcs.append((stack.pop(), p))
            else:
                raise DomainError(f"bad character {ch!r} in arcs")
        if stack:
            raise DomainError(f"unbalanced arcs {s!r}")
        return cls(tuple(sorted(arcs)))

    def to_bratteli(self):
        """j_p = half the number of arcs spanning the gap (p, p+1)."""
        n2 = 2 * self.n
        twojs = []
        for p in range(n2 + 1):
            twojs.append(sum(1 for i, k in self.arcs if i <= p < k))
        return BratteliDiagram(tuple(twojs))

    def contains_arc(self, i, k):
        return (i, k) in self.arcs


def arc_enumerate(n):
    """All noncrossing matchings of 1..2n, ordered by their Bratteli key."""

    def match(points):
        if not points:
            yield ()
            return
        first = points[0]
        for idx in range(1, len(points), 2):
            inner = points[1:idx]
            outer = points[idx + 1:]
            for a in match(inner):
                for b in match(outer):
                    yield ((first, points[idx]),) + a + b

    diags = [ArcDiagram(tuple(sorted(a))) for a in match(tuple(range(1, 2 * n + 1)))]
    diags.sort(key=lambda d: d.to_bratteli().sort_key())
    return diags


def singlet_vector(i, k, nsites):
    """Two-site singlet e+ (x) e-  -  q e- (x) e+ placed at sites i < k."""
    hi = 1 << (nsites - i)
    lo = 1 << (nsites - k)
    # up at i, down at k
    return {lo: _one, hi: -QScalar.q(1)}


def arc_vector(diagram):
    """Product of singlets over the arcs, a vector on 2n sites."""
    n2 = 2 * diagram.n
    vec = {0: _one}
    for i, k in diagram.arcs:
        s = singlet_vector(i, k, n2)
        vec = {m1 | m2: c1 * c2 for m1, c1 in vec.items() for m2, c2 in s.items()}
    return vec


# ---------------------------------------------------------------------------
# Identification of vectors on 2n sites with operators on n sites

# Basis of the intertwiner between site k and site 2n+1-k; row index is the
# operator's column bit, column index the vector bit being consumed.
#   c[0][1] = 1, c[1][0] = -1/q, zeros elsewhere.


def identify(vec, n):
    """Vector on 2n sites -> operator on n sites, {(row, col): QScalar}.

    The first n tensor legs become the operator's row index; each remaining
    leg t_(2n+1-k) is contracted against the fixed 2x2 intertwiner whose
    surviving index is column bit k.  Chosen so the doubled singlet on
    sites (1, 2) maps to the identity operator.
    """
    mask_n = (1 << n) - 1
    qinv = QScalar.q(-1)
    out = {}
    for idx, coeff in vec.items():
        row = idx >> n
        tpart = idx & mask_n
        col = 0
        c = coeff
        for k in range(1, n + 1):
            tau = (tpart >> (k - 1)) & 1
            if tau == 1:
                col |= 0  # u_k = 0, factor 1
            else:
                col |= 1 << (n - k)
                c = c * (-qinv)
        key = (row, col)
        s = out.get(key)
        s = c if s is None else s + c
        if not s.is_zero():
            out[key] = s
        elif key in out:
            del out[key]
    return out


@dataclass
class InvariantOperator:
    n: int
    mat: dict
    label: str


def arc_basis(n):
    """Operators from arc diagrams, ordered by Bratteli key."""
    out = []
    for d in arc_enumerate(n):
        op = identify(arc_vector(d), n)
        out.append((d, InvariantOperator(n, op, d.text())))
    return out


def orthogonal_basis(n):
    """Operators from fusion-path vectors on 2n sites, same ordering."""
    out = []
    for J in bratteli_enumerate(2 * n, 0, 0):
        op = identify(e_vector(2 * n, J, 0, 0), n)
        out.append((J, InvariantOperator(n, op, J.text())))
    return out


def gram_norm(J):
    """Pairing normalisation for the diagram: product of quantum dims.

    The fusion-path operators pair a walk with its reversal,
    (O(J), O(J')) = delta_{J', reversed(J)} * prod_p [2 j_p + 1];
    walks symmetric under reversal are orthogonal to all others in the
    plain sense.  The product is reversal invariant, so the norm is shared
    by both partners.
    """
    acc = _one
    for tj in J.twojs[1:-1]:
        acc = acc * q_int(tj + 1)
    return acc


# ---------------------------------------------------------------------------
# Traces and pairings twisted by q^(-sigma^3 sum)


def _site_weight_exponent(state, n):
    # sum of sigma^3 eigenvalues: +1 per up bit (0), -1 per down bit (1)
    down = bin(state).count("1")
    return n - 2 * down


def invariant_trace(mat, n, qpow=QScalar.q):
    """Tr( q^(-sum sigma^3) O ), qpow(k) supplying the scalar q^k."""
    acc = None
    for (r, c), v in mat.items():
        if r != c:
            continue
        t = qpow(-_site_weight_exponent(r, n)) * v
        acc = t if acc is None else acc + t
    if acc is None:
        acc = qpow(0) * 0
    return acc


def pairing(A, B, n, qpow=QScalar.q):
    """Tr( q^(-sum sigma^3) A B ) without forming the full product."""
    cols = {}
    for (r, c), v in B.items():
        cols.setdefault(r, []).append((c, v))
    acc = None
    for (r, c), v in A.items():
        for c2, w in cols.get(c, ()):
            if c2 != r:
                continue
            t = qpow(-_site_weight_exponent(r, n)) * v * w
            acc = t if acc is None else acc + t
    if acc is None:
        acc = qpow(0) * 0
    return acc


# ---------------------------------------------------------------------------
# Change of basis

def _solve_exact(rows, rhs):
    """Gaussian elimination over QScalar; rows: list of lists, rhs: list.

    Overdetermined allowed; raises SingularBasis on inconsistency or
    underdetermination.
    """
    m = len(rows)
    if m == 0:
        return []
    ncol = len(rows[0])
    A = [list(r) + [b] for r, b in zip(rows, rhs)]
    piv_rows = []
    r0 = 0
    for col in range(ncol):
        piv = None
        for i in range(r0, m):
            if not A[i][col].is_zero():
                piv = i
                break
        if piv is None:
            raise SingularBasis(f"no pivot in column {col}")
        A[r0], A[piv] = A[piv], A[r0]
        inv = A[r0][col] ** -1
        A[r0] = [x * inv for x in A[r0]]
        for i in range(m):
            if i != r0 and not A[i][col].is_zero():
                f = A[i][col]
                A[i] = [x - f * y for x, y in zip(A[i], A[r0])]
        piv_rows.append(col)
        r0 += 1
        if r0 == m:
            break
    if len(piv_rows) < ncol:
        raise SingularBasis("dependent basis")
    for i in range(r0, m):
        if not A[i][ncol].is_zero():
            raise SingularBasis("inconsistent system")
    sol = [None] * ncol
    for i, col in enumerate(piv_rows):
        sol[col] = A[i][ncol]
    return sol


def basis_transform(n):
    """U with (fusion-path op of J) = sum_J' U[J][J'] (arc op of J').

    Returns (diagrams, U) with both bases in the shared Bratteli order; U is
    lower triangular in that order.
    """
    arcs = arc_enumerate(n)
    avecs = [arc_vector(d) for d in arcs]
    diags = [d.to_bratteli() for d in arcs]
    keys = sorted({k for v in avecs for k in v})
    kpos = {k: i for i, k in enumerate(keys)}
    zero = QScalar.zero()
    cols = []
    for v in avecs:
        col = [zero] * len(keys)
        for k, c in v.items():
            col[kpos[k]] = c
        cols.append(col)
    rows = [[cols[j][i] for j in range(len(cols))] for i in range(len(keys))]
    U = []
    for J in diags:
        ev = e_vector(2 * n, J, 0, 0)
        rhs = [zero] * len(keys)
        for k, c in ev.items():
            if k not in kpos:
                raise SingularBasis("fusion vector outside arc span")
            rhs[kpos[k]] = c
        U.append(_solve_exact(rows, rhs))
    return diags, U


def irreducible_count(n):
    """Count and list of arc diagrams surviving at the reduced level.

    Diagrams containing the outermost arc (1, 2n) or the central arc
    (n, n+1) drop out; the count follows a Catalan second difference.
    """
    cat = [comb(2 * k, k) // (k + 1) for k in range(n + 1)]
    d = cat[n] - 2 * cat[n - 1] + (cat[n - 2] if n >= 2 else 0)
    if n == 1:
        d = 0
    keep = [a for a in arc_enumerate(n)
            if not (a.contains_arc(1, 2 * n) or a.contains_arc(n, n + 1))]
    if len(keep) != d:
        raise DomainError(f"irreducible count mismatch: {len(keep)} vs {d}")
    return d, keep


# ---------------------------------------------------------------------------
# Matrix units and generators


def to_matrix_units(op, n):
    """Sparse operator -> list of (word, coeff); word[k] = (i, j) in 1..2.

    Site bit 0 (up) is index 1, bit 1 (down) index 2, so the word spells
    a product of elementary matrices E_(i1 j1) (x) ... (x) E_(in jn).
    """
    out = []
    for (r, c), v in sorted(op.items()):
        word = tuple(
            (((r >> (n - 1 - p)) & 1) + 1, ((c >> (n - 1 - p)) & 1) + 1)
            for p in range(n)
        )
        out.append((word, v))
    return out


def from_matrix_units(words, n):
    out = {}
    for word, v in words:
        r = c = 0
        for p, (i, j) in enumerate(word):
            r |= (i - 1) << (n - 1 - p)
            c |= (j - 1) << (n - 1 - p)
        key = (r, c)
        s = out.get(key)
        s = v if s is None else s + v
        if not (s.is_zero() if isinstance(s, QScalar) else not s):
            out[key] = s
        elif key in out:
            del out[key]
    return out


def chain_generator(name, n):
    """Coproduct action of E, F, K or Kinv on n sites, exact scalars.

    E carries K factors to its left, F carries K^-1 to its right, matching
    Delta(E) = E (x) 1 + K (x) E and Delta(F) = F (x) K^-1 + 1 (x) F.
    """
    dim = 1 << n
    out = {}
    if name in ("K", "Kinv"):
        s = 1 if name == "K" else -1
        for st in range(dim):
            out[(st, st)] = QScalar.q(s * _site_weight_exponent(st, n))
        return out
    if name not in ("E", "F"):
        raise DomainError(f"unknown generator {name!r}")
    for st in range(dim):
        for p in range(1, n + 1):
            bit = (st >> (n - p)) & 1
            if name == "E":
                if bit != DOWN:
                    continue
                new = st & ~(1 << (n - p))
                left = st >> (n - p + 1)
                expo = (p - 1) - 2 * bin(left).count("1")
            else:
                if bit != UP:
                    continue
                new = st | (1 << (n - p))
                right = st & ((1 << (n - p)) - 1)
                expo = -((n - p) - 2 * bin(right).count("1"))
            key = (new, st)
            t = QScalar.q(expo)
            s = out.get(key)
            out[key] = t if s is None else s + t
    return out


def commutant_residual(op, n):
    """Max number of nonzero entries among [op, X] for X in E, F, K."""
    worst = 0
    for g in ("E", "F", "K"):
        X = chain_generator(g, n)
        comm = sp_commutator(op, X)
        worst = max(worst, len(comm))
    return worst


__all__ = [
    "ArcDiagram", "BratteliDiagram", "InvariantOperator",
    "arc_basis", "arc_enumerate", "arc_vector", "basis_transform",
    "bratteli_enumerate", "chain_generator", "commutant_residual",
    "e_vector", "from_matrix_units", "gram_norm", "identify",
    "invariant_trace", "irreducible_count", "multiplicity_count",
    "orthogonal_basis", "pairing", "singlet_vector", "threej",
    "to_matrix_units",
]
