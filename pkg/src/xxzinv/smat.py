"""Dict-of-entries sparse matrices, generic over the scalar.

Keys are (row, col) int pairs; values any field scalar.  Invariant operators
on n sites only populate charge-conserving positions, so dense 2^n storage
would be wasteful and, for exact scalars, slow.
"""

from __future__ import annotations


def sp_zero():
    return {}


def sp_identity(dim, one=1):
    return {(i, i): one for i in range(dim)}


def sp_add(A, B):
    out = dict(A)
    for k, v in B.items():
        s = out.get(k)
        s = v if s is None else s + v
        if s:
            out[k] = s
        elif k in out:
            del out[k]
    return out


def sp_scale(A, c):
    if not c:
        return {}
    return {k: c * v for k, v in A.items()}


def sp_sub(A, B):
    return sp_add(A, sp_scale(B, -1))


def sp_mul(A, B):
    cols = {}
    for (r, c), v in B.items():
        cols.setdefault(r, []).append((c, v))
    out = {}
    for (r, c), v in A.items():
        for c2, w in cols.get(c, ()):
            k = (r, c2)
            s = out.get(k)
            p = v * w
            s = p if s is None else s + p
            if s:
                out[k] = s
            elif k in out:
                del out[k]
    return out


def sp_commutator(A, B):
    return sp_sub(sp_mul(A, B), sp_mul(B, A))


def sp_apply(A, vec):
    """A @ v for v a dict {index: scalar}."""
    out = {}
    for (r, c), a in A.items():
        x = vec.get(c)
        if x is None:
            continue
        s = out.get(r)
        p = a * x
        s = p if s is None else s + p
        if s:
            out[r] = s
        elif r in out:
            del out[r]
    return out


def sp_is_zero(A):
    return not A


def sp_map(A, fn):
    out = {}
    for k, v in A.items():
        w = fn(v)
        if w:
            out[k] = w
    return out


def sp_to_dense(A, dim, zero=0):
    M = [[zero] * dim for _ in range(dim)]
    for (r, c), v in A.items():
        M[r][c] = v
    return M


def sp_max_abs(A):
    m = 0
    for v in A.values():
        a = abs(v)
        if a > m:
            m = a
    return m
