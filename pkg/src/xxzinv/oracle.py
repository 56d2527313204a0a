"""Dense six-vertex reference chain for small-instance validation.

Everything downstream (Bethe determinants, fermionic tables, density
blocks) is cross-checked against this module on chains small enough to
diagonalise by force.  The R-matrix gauge is

    R(x, t) = [[qx - t/q, 0,          0,          0        ],
               [0,        x - t,      (q - 1/q)t, 0        ],
               [0,        (q - 1/q)x, x - t,      0        ],
               [0,        0,          0,          qx - t/q ]],

acting on (aux, site) with basis order (uu, ud, du, dd).  This is the
evaluation intertwiner in the gauge where the twisted transfer matrix

    T(x, kappa) = q^kappa A(x) + q^{-kappa} D(x)

at kappa = -1 maps the q-singlet subspace to itself for arbitrary
inhomogeneities; both neighbouring gauges (off-diagonal entries swapped,
or symmetrised with sqrt(xt)) lose that property, which is how the
convention was pinned.

Block vacuum values: D|0> = a(x)|0> and A|0> = q^L d(x)|0> with the
monic polynomials

    a(x) = prod_j (x - t_j),    d(x) = prod_j (x - t_j / q^2).

On an m-magnon Bethe vector B(b_1)...B(b_m)|0> the transfer eigenvalue
is

    Lam(x) = q^{-kappa-m} a(x) Q(xq^2)/Q(x) + q^{kappa+L+m} d(x) Q(xq^-2)/Q(x),

Q(x) = prod_j (1 - x/b_j), fitted on dense chains (L <= 4, m <= 1) and
exact at m = 0.  Pole cancellation gives the data equations

    q^{k-m} a(b_j) Q(b_j q^2) + q^{-k+m} d(b_j) Q(b_j q^{-2}) = 0

with data twist k related to the chain twist by k = -kappa - L/2; the
untwisted data family (k = 0) therefore matches eigenvectors of the
scalar-normalised transfer A(x) + q^L D(x), integral powers for every L.

The face-move expansion of the same transfer over displaced spin walks
uses the rational two-variable weights of face_weight.  It holds with
unit normalisation against the q^(2m)-twisted walk vectors, which pins
the orientation, the inhomogeneity order and the twist sign in one shot;
face_identity_check is that statement verbatim.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import gmpy2

from .errors import (
    DomainError,
    EigenvectorAmbiguity,
    NoMatch,
)
from .invariants import BratteliDiagram, bratteli_enumerate, e_vector
from .linalg import eig_dense, mat_mul, mat_vec, norm_inf, vec_mat
from .scalars import digits_for_bits, eval_at_q, workprec


def r_entries(q, x, t):
    """R factor (alpha, beta, c_hi, c_lo) in the basis (uu, ud, du, dd).

    Matrix layout: diag(alpha, beta, beta, alpha) with R[ud,du] = c_hi,
    R[du,ud] = c_lo; first tensor slot is the auxiliary space.
    """
    alpha = q * x - t / q
    beta = x - t
    c_hi = (q - 1 / q) * t
    c_lo = (q - 1 / q) * x
    return alpha, beta, c_hi, c_lo


def _apply_r_left(M, sa, sb, ents):
    """Replace M by R_(sa,sb) @ M where sa, sb are bit positions."""
    alpha, beta, c_hi, c_lo = ents
    dim = len(M)
    ba, bb = 1 << sa, 1 << sb
    out = [None] * dim
    for r in range(dim):
        xa, xb = (r >> sa) & 1, (r >> sb) & 1
        if xa == xb:
            out[r] = [alpha * v for v in M[r]]
        elif xa == 0:  # (up, down) row
            other = M[r ^ ba ^ bb]
            out[r] = [beta * v + c_hi * w for v, w in zip(M[r], other)]
        else:
            other = M[r ^ ba ^ bb]
            out[r] = [beta * v + c_lo * w for v, w in zip(M[r], other)]
    return out


class DenseChain:
    """n space sites coupled to an L-site inhomogeneous Matsubara chain.

    q and the inhomogeneities are any field scalars (gmpy2 numbers for
    numeric work, exact field elements for charge-0 symbolic checks).
    kappa is the trace twist of the transfer matrix and the weight in the
    expectation functional; the physical value is -1.  Index layout:
    space bits above Matsubara bits, site 1 most significant.
    """

    def __init__(self, n, L, q, ts, kappa=-1):
        if len(ts) != L:
            raise DomainError("need one inhomogeneity per Matsubara site")
        if n + L > 12:
            raise DomainError("chain too large for dense methods")
        self.n, self.L = n, L
        self.q = q
        self.ts = list(ts)
        self.kappa = kappa
        self._tsm = None

    # -- Matsubara-side objects ---------------------------------------------

    def monodromy(self, x):
        """Auxiliary monodromy at parameter x: matrix on 2^(L+1).

        The auxiliary bit sits above the L Matsubara bits; site 1 is
        applied first (rightmost factor).
        """
        L = self.L
        dim = 1 << (L + 1)
        one = self.q ** 0
        M = [[one if i == j else one * 0 for j in range(dim)] for i in range(dim)]
        for p in range(1, L + 1):
            ents = r_entries(self.q, x, self.ts[p - 1])
            M = _apply_r_left(M, L, L - p, ents)
        return M

    def blocks(self, x):
        T = self.monodromy(x)
        h = 1 << self.L
        A = [row[:h] for row in T[:h]]
        B = [row[h:] for row in T[:h]]
        C = [row[:h] for row in T[h:]]
        D = [row[h:] for row in T[h:]]
        return A, B, C, D

    def transfer(self, x, kappa=None):
        """q^kappa A(x) + q^(-kappa) D(x); twist defaults to the chain's."""
        if kappa is None:
            kappa = self.kappa
        A, _, _, D = self.blocks(x)
        tw = self.q ** kappa
        twi = self.q ** (-kappa)
        return [[tw * a + twi * d for a, d in zip(ra, rd)] for ra, rd in zip(A, D)]

    def transfer_data(self, x, kappa_data=0):
        """A(x) + q^(2 kappa_data + L) D(x): the scalar-normalised transfer
        whose eigenvectors carry Bethe data with the given data twist."""
        A, _, _, D = self.blocks(x)
        tw = self.q ** (2 * kappa_data + self.L)
        return [[a + tw * d for a, d in zip(ra, rd)] for ra, rd in zip(A, D)]

    def data_a(self, x):
        """a(x) = prod (x - t_j), the D-block vacuum value, monic."""
        acc = self.q ** 0
        for t in self.ts:
            acc = acc * (x - t)
        return acc

    def data_d(self, x):
        """d(x) = prod (x - t_j/q^2); the A-block vacuum value is q^L d(x)."""
        acc = self.q ** 0
        for t in self.ts:
            acc = acc * (x - t / (self.q * self.q))
        return acc

    def bethe_vector(self, roots):
        """B(b_1) ... B(b_m) |all-up>, roots already in dense convention."""
        h = 1 << self.L
        one = self.q ** 0
        v = [one * 0] * h
        v[0] = one
        for b in roots:
            _, B, _, _ = self.blocks(b)
            v = mat_vec(B, v)
        return v

    def bethe_covector(self, roots):
        h = 1 << self.L
        one = self.q ** 0
        w = [one * 0] * h
        w[0] = one
        for b in roots:
            _, _, C, _ = self.blocks(b)
            w = vec_mat(w, C)
        return w

    # -- space-Matsubara coupling -------------------------------------------

    def tsm(self):
        """Full T_(S,M) on 2^(n+L); space leg 1 is the leftmost factor."""
        if self._tsm is not None:
            return self._tsm
        n, L = self.n, self.L
        dim = 1 << (n + L)
        one = self.q ** 0
        M = [[one if i == j else one * 0 for j in range(dim)] for i in range(dim)]
        # rightmost factor couples space site n; within one space site the
        # Matsubara site 1 factor is applied first
        for k in range(n, 0, -1):
            sa = L + (n - k)
            for p in range(1, L + 1):
                ents = r_entries(self.q, one, self.ts[p - 1])
                M = _apply_r_left(M, sa, L - p, ents)
        self._tsm = M
        return M

    def twist_weights(self):
        """Diagonal of q^(2 kappa S_S) over space states."""
        n = self.n
        out = []
        for s in range(1 << n):
            down = bin(s).count("1")
            out.append(self.q ** (self.kappa * (n - 2 * down)))
        return out

    def space_numerator(self, op):
        """Tr_S[ T_(S,M) (O q^(2 kappa S_S) (x) 1_M) ] as a 2^L matrix.

        op: dict {(row, col): scalar} over space states.
        """
        n, L = self.n, self.L
        h = 1 << L
        T = self.tsm()
        w = self.twist_weights()
        zero = (self.q ** 0) * 0
        N = [[zero] * h for _ in range(h)]
        for (srow, scol), val in op.items():
            f = val * w[scol]
            base_r = srow << L
            base_c = scol << L
            for mi in range(h):
                Trow = T[base_r + mi]
                Nrow = N[mi]
                for mj in range(h):
                    Nrow[mj] += f * Trow[base_c + mj]
        return N

    def z_functional(self, op, psi_left, psi_right):
        """Z_kappa of the space operator for the given Matsubara state."""
        one = self.q ** 0
        ident = {(s, s): one for s in range(1 << self.n)}
        num = self.space_numerator(op)
        den = self.space_numerator(ident)
        a = _bilinear(psi_left, num, psi_right)
        b = _bilinear(psi_left, den, psi_right)
        return a / b


def _bilinear(wl, M, vr):
    t = mat_vec(M, vr)
    s = wl[0] * t[0]
    for i in range(1, len(t)):
        s += wl[i] * t[i]
    return s


# ---------------------------------------------------------------------------
# Eigenvector selection


def top_eigenpair(chain, bits, gap_tol=None):
    """Left and right eigenvectors for the largest |eigenvalue| of T_M(1).

    Raises EigenvectorAmbiguity when the top two moduli are closer than
    gap_tol (relative).
    """
    one = chain.q ** 0
    T = chain.transfer(one)
    vals, rights, lefts = eig_dense(T, bits, left=True)
    order = sorted(range(len(vals)), key=lambda i: -abs(vals[i]))
    i0 = order[0]
    if gap_tol is None:
        gap_tol = gmpy2.mpfr("1e-10")
    if len(order) > 1:
        v0, v1 = abs(vals[order[0]]), abs(vals[order[1]])
        if v0 == 0 or abs(v0 - v1) / v0 < gap_tol:
            raise EigenvectorAmbiguity("top eigenvalues too close")
    return vals[i0], lefts[i0], rights[i0]


def _prod(it, start):
    acc = start
    for v in it:
        acc = acc * v
    return acc


def eigenvalue_from_data(q, kappa_data, L, a_of, d_of, roots, x):
    """Eigenvalue of transfer_data(x, kappa_data) on the roots' vector.

    q^(2k + L - m) a(x) Q(xq^2)/Q(x) + q^(L + m) d(x) Q(xq^-2)/Q(x),
    with Q(x) = prod (1 - x/b_j); exponents fitted on dense chains and
    exact for the vacuum (m = 0) by the block dictionary.
    """
    m = len(roots)
    qx = q ** 0 * x
    Qx = _prod((1 - qx / b for b in roots), q ** 0)
    Qp = _prod((1 - qx * q * q / b for b in roots), q ** 0)
    Qm = _prod((1 - qx / (q * q * b) for b in roots), q ** 0)
    return (q ** (2 * kappa_data + L - m) * a_of(x) * Qp
            + q ** (L + m) * d_of(x) * Qm) / Qx


def product_form_a(q, ts):
    return lambda x: _prod((x - t for t in ts), q ** 0)


def product_form_d(q, ts):
    return lambda x: _prod((x - t / (q * q) for t in ts), q ** 0)


def match_bethe_state(chain, roots, bits, kappa_data=0, tol=None):
    """Dense eigenpair whose transfer_data eigenvalue matches the data's.

    The data eigenvalue is computed from the chain's product-form a, d
    and the given roots.  Returns (value, left, right); NoMatch when no
    dense eigenvalue agrees within tol, EigenvectorAmbiguity when
    several do.
    """
    with workprec(bits):
        q = chain.q
        one = q ** 0
        a_of = product_form_a(q, chain.ts)
        d_of = product_form_d(q, chain.ts)
        target = eigenvalue_from_data(q, kappa_data, chain.L, a_of, d_of, roots, one)
        T = chain.transfer_data(one, kappa_data)
        vals, rights, lefts = eig_dense(T, bits, left=True)
        scale = max(abs(v) for v in vals)
        if tol is None:
            tol = gmpy2.mpfr(10) ** (-(digits_for_bits(bits) // 2))
        hits = [i for i, v in enumerate(vals) if abs(v - target) <= tol * scale]
        if not hits:
            best = min(abs(v - target) for v in vals)
            raise NoMatch(
                f"no dense eigenvalue within {float(tol):.1e} of Bethe data "
                f"(closest relative gap {float(best / scale):.3e})"
            )
        if len(hits) > 1:
            raise EigenvectorAmbiguity("several dense eigenvalues match")
        i0 = hits[0]
        return vals[i0], lefts[i0], rights[i0]


def onshell_inhomogeneities(q, L, roots_free, ts_free, kappa_data=0):
    """Complete t_1..t_(L-1) with a t_L putting a single root on shell.

    For m = 1 data the equation reduces to a(b) = q^(-2k) d(b); solving
    it for the last inhomogeneity keeps everything else free.  Returns
    the full inhomogeneity list.
    """
    if len(roots_free) != 1 or len(ts_free) != L - 1:
        raise DomainError("recipe covers m=1 with L-1 free inhomogeneities")
    b = roots_free[0]
    one = q ** 0
    ap = _prod((b - t for t in ts_free), one)
    dp = _prod((b - t / (q * q) for t in ts_free), one)
    w = q ** (-2 * kappa_data)
    den = ap - w * dp / (q * q)
    if abs(den) == 0:
        raise DomainError("degenerate data; perturb the free inhomogeneities")
    tL = b * (ap - w * dp) / den
    return list(ts_free) + [tL]


def brute_expectation(op, chain, psi, bits):
    """Z_kappa{op} with |Psi> picked by psi.

    psi: ("max",) for the dominant eigenvector, or ("bethe", roots) /
    ("bethe", roots, kappa_data) for a matched Bethe state.
    """
    with workprec(bits):
        if psi[0] == "max":
            _, wl, vr = top_eigenpair(chain, bits)
        elif psi[0] == "bethe":
            kd = psi[2] if len(psi) > 2 else 0
            _, wl, vr = match_bethe_state(chain, psi[1], bits, kappa_data=kd)
        else:
            raise DomainError(f"unknown selector {psi[0]!r}")
        return chain.z_functional(op, wl, vr)


# ---------------------------------------------------------------------------
# Sanity residuals


def ybe_residual(q, x1, x2, x3):
    """Max-abs defect of R12 R13 R23 = R23 R13 R12 on three sites."""
    one = q ** 0
    dim = 8
    ident = [[one if i == j else one * 0 for j in range(dim)] for i in range(dim)]
    # bits: site1 = 2, site2 = 1, site3 = 0
    def factor(base, pairs):
        M = [row[:] for row in base]
        for (sa, sb, xa, xb) in pairs:
            M = _apply_r_left(M, sa, sb, r_entries(q, xa, xb))
        return M

    lhs = factor(ident, [(1, 0, x2, x3), (2, 0, x1, x3), (2, 1, x1, x2)])
    rhs = factor(ident, [(2, 1, x1, x2), (2, 0, x1, x3), (1, 0, x2, x3)])
    worst = 0
    for r in range(dim):
        for c in range(dim):
            d = abs(lhs[r][c] - rhs[r][c])
            if d > worst:
                worst = d
    return worst


def invariant_subspace_residual(L, q, ts, kappa, bits, x=None):
    """How far T_M(x, kappa) moves the singlet subspace out of itself.

    Orthonormalises the highest-weight-zero vectors, applies the dense
    transfer, and returns the largest relative component outside the
    span.  Vanishes for kappa = -1 at arbitrary inhomogeneities.
    """
    if L % 2:
        raise DomainError("singlet subspace needs even L")
    with workprec(bits):
        chain = DenseChain(0, L, q, ts, kappa=kappa)
        T = chain.transfer(q ** 0 if x is None else x)
        dim = 1 << L
        basis = []
        for J in bratteli_enumerate(L, 0, 0):
            vec = e_vector(L, J, 0, 0)
            v = [gmpy2.mpc(0)] * dim
            for mask, c in vec.items():
                v[mask] = eval_at_q(c, q, bits)
            for e in basis:
                ov = sum((x2.conjugate() * y for x2, y in zip(e, v)), gmpy2.mpc(0))
                v = [y - ov * x2 for x2, y in zip(e, v)]
            nrm = gmpy2.sqrt(sum((abs(x2) ** 2 for x2 in v), gmpy2.mpfr(0)))
            basis.append([x2 / nrm for x2 in v])
        worst = gmpy2.mpfr(0)
        for e in basis:
            w = mat_vec(T, e)
            scale = max(norm_inf(w), gmpy2.mpfr(1e-30))
            for b in basis:
                ov = sum((x2.conjugate() * y for x2, y in zip(b, w)), gmpy2.mpc(0))
                w = [y - ov * x2 for x2, y in zip(b, w)]
            res = norm_inf(w) / scale
            if res > worst:
                worst = res
        return worst


def transfer_commutator_residual(chain, x1, x2):
    T1 = chain.transfer(x1)
    T2 = chain.transfer(x2)
    P = mat_mul(T1, T2)
    Q = mat_mul(T2, T1)
    scale = max(max(abs(v) for v in row) for row in P)
    worst = 0
    for r in range(len(P)):
        for c in range(len(P)):
            d = abs(P[r][c] - Q[r][c])
            if d > worst:
                worst = d
    return worst / scale if scale else worst


# ---------------------------------------------------------------------------
# Face-weight identity


def _qint_num(q, k):
    if k == 0:
        return (q ** 0) * 0
    return (q ** k - q ** (-k)) / (q - 1 / q)


def face_weight(q, x, t, ju_l, jl_l, ju_r, jl_r):
    """Two-walk face weight for doubled spins; None for a forbidden face.

    The face sits between two spin walks: the lower one (jl_l -> jl_r)
    carries the vector being transported, the upper one (ju_l -> ju_r) is
    the displaced walk it expands over.  All four edge differences must
    be +-1/2.  x is the transfer argument, t the column inhomogeneity;
    the weight is rational in (q, x, t) and homogeneous of degree one in
    (x, t), so only x/t matters up to overall scale.
    """
    if min(ju_l, jl_l, ju_r, jl_r) < 0:
        return None
    e = jl_r - jl_l
    eu = ju_r - ju_l
    if abs(e) != 1 or abs(eu) != 1 or abs(ju_l - jl_l) != 1 \
            or abs(ju_r - jl_r) != 1:
        return None
    if eu == e:
        if ju_l == jl_l - e:
            # upper walk trails the step; bare R-diagonal weight
            return q * x - t / q
        # upper walk leads the step
        return _qint_num(q, jl_l + 1) / _qint_num(q, ju_l + 1) * (x - t)
    # crossing faces; the left upper corner fixes the bracket label
    s = ju_l + 1
    if e == 1:
        return (q ** s * x - q ** (-s) * t) / _qint_num(q, s)
    return (q ** s * t - q ** (-s) * x) / _qint_num(q, s)


def closed_walks(L, cap_twoj):
    """Cyclic spin walks (j_0 ... j_L), j_L = j_0, steps of 1/2, capped."""
    out = []
    for start in range(cap_twoj + 1):
        stack = [(start,)]
        while stack:
            w = stack.pop()
            if len(w) == L + 1:
                if w[-1] == start:
                    out.append(w)
                continue
            for nxt in (w[-1] - 1, w[-1] + 1):
                if 0 <= nxt <= cap_twoj and abs(nxt - start) <= L - len(w) + 1:
                    stack.append(w + (nxt,))
    return sorted(out)


def walk_vector(L, walk, q, bits):
    """Twisted magnetic sum of the walk's vector: sum_m q^(2m) E_(m,m)."""
    j2 = walk[0]
    if walk[-1] != j2:
        raise DomainError("walk must return to its starting spin")
    zero = (q ** 0) * 0
    acc = [zero] * (1 << L)
    J = BratteliDiagram(tuple(walk))
    for l in range(j2 + 1):
        m2 = -j2 + 2 * l
        vec = e_vector(L, J, Fraction(m2, 2), Fraction(m2, 2))
        wt = q ** m2
        for mask, coeff in vec.items():
            acc[mask] += wt * eval_at_q(coeff, q, bits)
    return acc


def face_identity_check(L, q, ts, bits, x=None):
    """Max relative residual of the face-move expansion of the transfer.

    For every closed walk J starting at spin 0, applies the dense
    kappa = -1 transfer T(x) to the twisted walk vector and compares
    against

        T(x) W_J = sum_{J'} prod_p F(x, t_p; J'_p, J_p, J'_{p+1}, J_{p+1}) W_{J'},

    J' running over the walks displaced by +-1/2 at every node.  The
    expansion is exact for arbitrary x and inhomogeneities; x defaults
    to a generic off-lattice point (exact dyadic, precision safe).
    """
    if L % 2:
        raise DomainError("Matsubara length must be even")
    with workprec(bits):
        one = q ** 0
        if x is None:
            x = one * gmpy2.mpc(gmpy2.mpfr("1.3125"), gmpy2.mpfr("0.40625"))
        chain = DenseChain(0, L, q, ts, kappa=-1)
        T = chain.transfer(x)
        dim = 1 << L
        vecs = {}
        worst = gmpy2.mpfr(0)
        for w in closed_walks(L, L):
            if w[0] != 0:
                continue
            lhs = mat_vec(T, walk_vector(L, w, q, bits))
            rhs = [gmpy2.mpc(0)] * dim
            for eps in itertools.product((1, -1), repeat=L + 1):
                wp = tuple(w[p] + eps[p] for p in range(L + 1))
                if min(wp) < 0 or wp[0] != wp[-1]:
                    continue
                if any(abs(wp[p + 1] - wp[p]) != 1 for p in range(L)):
                    continue
                X = one
                for p in range(L):
                    X = X * face_weight(q, x, ts[p],
                                        wp[p], w[p], wp[p + 1], w[p + 1])
                if wp not in vecs:
                    vecs[wp] = walk_vector(L, wp, q, bits)
                for i, v in enumerate(vecs[wp]):
                    rhs[i] += X * v
            scale = max(norm_inf(lhs), norm_inf(rhs))
            res = norm_inf([a - b for a, b in zip(lhs, rhs)]) / scale
            if res > worst:
                worst = res
        return worst


# ---------------------------------------------------------------------------
# Restricted rank of the invariant gram matrix


def invariant_gram_rank(L, q, bits, tol_exp=-40):
    """Rank of the twisted gram of highest-weight walk vectors at q.

    The bilinear form is sum_s q^(-weight(s)) v_s w_s, the same twist used
    by operator pairings.  Returns (rank, number of vectors).
    """
    if L % 2:
        raise DomainError("L must be even")
    with workprec(bits):
        diags = bratteli_enumerate(L, 0, 0)
        vecs = []
        for J in diags:
            v = e_vector(L, J, 0, 0)
            vecs.append({m: eval_at_q(c, q, bits) for m, c in v.items()})
        nv = len(vecs)
        G = []
        for i in range(nv):
            row = []
            for j in range(nv):
                s = gmpy2.mpc(0)
                vi, vj = vecs[i], vecs[j]
                if len(vj) < len(vi):
                    vi, vj = vj, vi
                for mask, c in vi.items():
                    d = vj.get(mask)
                    if d is not None:
                        wt = q ** (-(L - 2 * bin(mask).count("1")))
                        s += wt * c * d
                row.append(s)
            G.append(row)
        # row-echelon rank with relative pivot threshold
        M = [row[:] for row in G]
        scale = max(max(abs(v) for v in row) for row in M)
        if scale == 0:
            return 0, nv
        tol = scale * gmpy2.mpfr(10) ** tol_exp
        rank = 0
        rows = list(range(nv))
        cols = list(range(nv))
        while rows and cols:
            best, br, bc = None, None, None
            for r in rows:
                for c in cols:
                    a = abs(M[r][c])
                    if best is None or a > best:
                        best, br, bc = a, r, c
            if best is None or best < tol:
                break
            rank += 1
            piv = M[br][bc]
            for r in rows:
                if r == br:
                    continue
                f = M[r][bc] / piv
                if f == 0:
                    continue
                for c in cols:
                    M[r][c] -= f * M[br][c]
            rows.remove(br)
            cols.remove(bc)
        return rank, nv
