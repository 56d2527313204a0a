"""Dense complex linear algebra on gmpy2 numbers.

Plain list-of-lists matrices.  Everything here stays below a few hundred
rows; clarity and exactness of pivoting matter more than vectorisation.
mpmath is used only where gmpy2 has no algorithm (eigenproblems), with
bit-exact conversion at the boundary.
"""

from __future__ import annotations

import gmpy2
import mpmath

from .errors import NumericalDegeneracy, SingularSystem
from .scalars import mpc_to_mpmath, mpmath_to_mpc, workprec


def mat_identity(n, one=1):
    return [[one if i == j else one * 0 for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    n, k = len(A), len(B)
    m = len(B[0])
    Bt = [[B[r][c] for r in range(k)] for c in range(m)]
    out = []
    for i in range(n):
        Ai = A[i]
        row = []
        for c in range(m):
            Bc = Bt[c]
            s = Ai[0] * Bc[0]
            for t in range(1, k):
                s += Ai[t] * Bc[t]
            row.append(s)
        out.append(row)
    return out


def mat_vec(A, v):
    out = []
    for row in A:
        s = row[0] * v[0]
        for t in range(1, len(v)):
            s += row[t] * v[t]
        out.append(s)
    return out


def vec_mat(v, A):
    n = len(A)
    m = len(A[0])
    return [sum((v[r] * A[r][c] for r in range(n)), start=v[0] * 0) for c in range(m)]


def transpose(A):
    return [list(col) for col in zip(*A)]


def lu_factor(A):
    """In-place-style LU with partial pivoting; returns (LU, perm, parity).

    Raises SingularSystem on an exactly or numerically null pivot column.
    """
    n = len(A)
    LU = [list(row) for row in A]
    perm = list(range(n))
    parity = 1
    for col in range(n):
        piv, best = None, None
        for r in range(col, n):
            a = abs(LU[r][col])
            if best is None or a > best:
                best, piv = a, r
        if best is None or best == 0:
            raise SingularSystem(f"null pivot at column {col}")
        if piv != col:
            LU[piv], LU[col] = LU[col], LU[piv]
            perm[piv], perm[col] = perm[col], perm[piv]
            parity = -parity
        inv = 1 / LU[col][col]
        for r in range(col + 1, n):
            f = LU[r][col] * inv
            if f == 0:
                continue
            LU[r][col] = f
            rowr, rowc = LU[r], LU[col]
            for c in range(col + 1, n):
                rowr[c] -= f * rowc[c]
    return LU, perm, parity


def lu_solve(LU, perm, b):
    n = len(LU)
    x = [b[perm[i]] for i in range(n)]
    for i in range(1, n):
        row = LU[i]
        s = x[i]
        for j in range(i):
            s -= row[j] * x[j]
        x[i] = s
    for i in range(n - 1, -1, -1):
        row = LU[i]
        s = x[i]
        for j in range(i + 1, n):
            s -= row[j] * x[j]
        x[i] = s / row[i]
    return x


def solve(A, b):
    LU, perm, _ = lu_factor(A)
    return lu_solve(LU, perm, b)


def det(A):
    if not A:
        return gmpy2.mpc(1)
    try:
        LU, _, parity = lu_factor(A)
    except SingularSystem:
        return A[0][0] * 0
    d = LU[0][0]
    for i in range(1, len(A)):
        d *= LU[i][i]
    return parity * d


def norm_inf(v):
    m = 0
    for x in v:
        a = abs(x)
        if a > m:
            m = a
    return m


def mat_norm_inf(A):
    return max((norm_inf(row) for row in A), default=0)


def eig_dense(A, bits, left=False):
    """Eigen decomposition through mpmath at the working precision.

    Returns (values, right_vectors[, left_vectors]); vectors are columns
    returned as python lists.  Left vectors satisfy  vL @ A = lam vL  and
    are computed from the transposed problem.
    """
    n = len(A)
    with workprec(bits):
        old = mpmath.mp.prec
        mpmath.mp.prec = bits
        try:
            M = mpmath.matrix([[mpc_to_mpmath(gmpy2.mpc(A[i][j])) for j in range(n)]
                               for i in range(n)])
            vals, ers = mpmath.eig(M)
            out_vals = [mpmath_to_mpc(v) for v in vals]
            rights = [[mpmath_to_mpc(ers[i, j]) for i in range(n)] for j in range(n)]
            if not left:
                return out_vals, rights
            lvals, els = mpmath.eig(M.T)
            lv = [mpmath_to_mpc(v) for v in lvals]
            lefts_raw = [[mpmath_to_mpc(els[i, j]) for i in range(n)] for j in range(n)]
            # pair left vectors with the right spectrum by eigenvalue proximity
            lefts = []
            used = set()
            for v in out_vals:
                bi, bd = None, None
                for i, w in enumerate(lv):
                    if i in used:
                        continue
                    ddist = abs(v - w)
                    if bd is None or ddist < bd:
                        bd, bi = ddist, i
                if bi is None:
                    raise NumericalDegeneracy("left/right spectra do not pair")
                used.add(bi)
                lefts.append(lefts_raw[bi])
            return out_vals, rights, lefts
        finally:
            mpmath.mp.prec = old
