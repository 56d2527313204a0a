from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from xxzinv.errors import DomainError
from xxzinv.scalars import QScalar
from xxzinv.youngspace import (
    YoungVector,
    complete_h,
    cut,
    e_operator,
    elementary_e,
    fock_inverse,
    fock_map,
    lr_sigma,
    parse_partition,
    partition_text,
    schur_eval,
    schur_jacobi_trudi,
    wedge,
    wedge2,
)

q = QScalar.q


@st.composite
def partitions(draw, max_parts=4, max_part=5):
    k = draw(st.integers(0, max_parts))
    parts = sorted(
        draw(st.lists(st.integers(1, max_part), min_size=k, max_size=k)),
        reverse=True,
    )
    return tuple(parts)


def rational_points(n, seed=0):
    # distinct small rationals, exact arithmetic
    vals = [Fraction(2 + 3 * i + seed, 3 + 2 * ((i + seed) % 5)) for i in range(n)]
    out = []
    for i, v in enumerate(vals):
        w = v + Fraction(i * i, 97)
        while w in out:
            w += Fraction(1, 89)
        out.append(w)
    return [QScalar.from_rational(w) for w in out]


# ------------------------------------------------------------------- oracles

def perm_sum_alternant(points, exps):
    """Independent alternant: explicit signed permutation sum."""
    n = len(points)
    total = QScalar.zero()
    for perm in permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        term = QScalar.from_rational(sign)
        for i in range(n):
            term = term * points[i] ** exps[perm[i]]
        total = total + term
    return total


def schur_oracle(lam, points):
    """s_lam via permutation-sum alternant ratio (independent of library path)."""
    s = len(points)
    exps = fock_map(lam, s)
    den_exps = tuple(range(s - 1, -1, -1))
    num = perm_sum_alternant(points, exps)
    den = perm_sum_alternant(points, den_exps)
    return num / den


def brute_asym_wedge(pcoeffs, lam, points):
    """Antisymmetrized P(x_1) * s_lam(x_2..x_n) evaluated at the points."""
    n = len(points)
    total = QScalar.zero()
    vand = QScalar.one()
    for i in range(n):
        for j in range(i + 1, n):
            vand = vand * (points[i] - points[j])
    for perm in permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        pv = QScalar.zero()
        for e, c in enumerate(pcoeffs):
            pv = pv + QScalar.from_rational(c) * points[perm[0]] ** e
        rest = [points[k] for k in perm[1:]]
        term = pv * schur_oracle(lam, rest)
        total = total + (term if sign > 0 else -term)
    return total / vand


def column_det_wedge(pcoeff_lists, lam, slots, points):
    """Evaluation of P_1 ^ ... ^ P_r ^ Y_lam by the bordered determinant:

    det[ P_1(x_a) | ... | P_r(x_a) | x_a^{k_i} ] / Vandermonde, where k_i are
    the Fock modes of lam at the ORIGINAL slot count.  Permutation-sum det,
    independent of the library's insertion logic.
    """
    modes = fock_map(lam, slots)
    n = len(points)
    assert n == slots + len(pcoeff_lists)

    def entry(a, b):
        if b < len(pcoeff_lists):
            pv = QScalar.zero()
            for e, c in enumerate(pcoeff_lists[b]):
                pv = pv + QScalar.from_rational(c) * points[a] ** e
            return pv
        return points[a] ** modes[b - len(pcoeff_lists)]

    total = QScalar.zero()
    for perm in permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        term = QScalar.from_rational(sign)
        for a in range(n):
            term = term * entry(a, perm[a])
        total = total + term
    vand = QScalar.one()
    for i in range(n):
        for j in range(i + 1, n):
            vand = vand * (points[i] - points[j])
    return total / vand


# ---------------------------------------------------------------------- fock

def test_fock_examples():
    assert fock_map((), 3) == (2, 1, 0)
    assert fock_map((2, 1), 2) == (3, 1)
    assert fock_inverse((3, 1)) == (2, 1)
    assert fock_inverse((2, 1, 0)) == ()


def test_fock_domain_error():
    with pytest.raises(DomainError):
        fock_map((1, 1, 1), 2)


@settings(max_examples=50)
@given(partitions(), st.integers(0, 3))
def test_fock_roundtrip(lam, extra):
    slots = len(lam) + extra
    assert fock_inverse(fock_map(lam, slots)) == lam


def test_partition_text_roundtrip():
    assert partition_text((3, 1, 1)) == "[3,1,1]"
    assert parse_partition("[3,1,1]") == (3, 1, 1)
    assert parse_partition("[]") == ()


# ---------------------------------------------------------------- schur eval

def test_schur_trivial():
    assert schur_eval(YoungVector.unit(0), []) == 1
    pts = rational_points(2)
    Y = YoungVector(2, {(1,): QScalar.one()})
    assert schur_eval(Y, pts) == pts[0] + pts[1]


def test_schur_vs_permutation_oracle():
    for lam in [(2, 1), (3,), (2, 2, 1)]:
        pts = rational_points(3, seed=2)
        Y = YoungVector(3, {lam: QScalar.one()})
        assert schur_eval(Y, pts) == schur_oracle(lam, pts)


def test_schur_vs_jacobi_trudi():
    for lam in [(), (1,), (2, 1), (3, 1, 1)]:
        pts = rational_points(3, seed=5)
        Y = YoungVector(3, {lam: QScalar.one()})
        assert schur_eval(Y, pts) == schur_jacobi_trudi(lam, pts)


def test_symmetric_function_helpers():
    pts = rational_points(3, seed=1)
    h = complete_h(pts, 2)
    e = elementary_e(pts, 3)
    x, y, z = pts
    assert h[1] == x + y + z
    assert h[2] == x * x + y * y + z * z + x * y + x * z + y * z
    assert e[2] == x * y + x * z + y * z
    assert e[3] == x * y * z


# --------------------------------------------------------------------- wedge

def test_wedge_single_modes():
    v = wedge([0, 0, 0, 1], YoungVector.unit(0))  # x^3 on empty
    assert v.slots == 1 and v.terms == {(3,): 1}
    v = wedge([1], YoungVector.unit(0))  # 1 on empty
    assert v.slots == 1 and v.terms == {(): 1}


def test_wedge_x2_on_row():
    Y = YoungVector(1, {(1,): QScalar.one()})
    v = wedge([QScalar.zero(), QScalar.zero(), QScalar.one()], Y)
    assert v.slots == 2
    assert set(v.terms) == {(1, 1)}
    assert v.terms[(1, 1)] == QScalar.one()


@settings(max_examples=30, deadline=None)
@given(partitions(max_parts=2, max_part=3),
       st.lists(st.integers(-3, 3), min_size=1, max_size=4))
def test_wedge_vs_column_determinant(lam, pc):
    if not any(pc):
        return
    slots = max(len(lam), 1)
    pts = rational_points(slots + 1, seed=3)
    Y = YoungVector(slots, {lam: QScalar.one()})
    coeffs = [QScalar.from_rational(c) for c in pc]
    got = schur_eval(wedge(coeffs, Y), pts)
    want = column_det_wedge([pc], lam, slots, pts)
    assert got == want


def test_double_wedge_vs_column_determinant():
    lam = (2,)
    pts = rational_points(3, seed=13)
    Y = YoungVector(1, {lam: QScalar.one()})
    P = [1, 0, 2]   # 1 + 2 x^2
    Q = [0, -1, 1]  # -x + x^2
    got = schur_eval(
        wedge([QScalar.from_rational(c) for c in P],
              wedge([QScalar.from_rational(c) for c in Q], Y)),
        pts)
    want = column_det_wedge([P, Q], lam, 1, pts)
    assert got == want


def test_wedge_x2_on_row_matches_antisymmetrization():
    # one starting slot: the plain antisymmetrization oracle applies here
    pts = rational_points(2, seed=4)
    Y = YoungVector(1, {(1,): QScalar.one()})
    got = schur_eval(wedge([QScalar.zero(), QScalar.zero(), QScalar.one()], Y), pts)
    assert got == brute_asym_wedge([0, 0, 1], (1,), pts)


def test_wedge_antisymmetry():
    Y = YoungVector(1, {(2,): QScalar.one()})
    P = [QScalar.zero(), QScalar.one()]            # x
    Q = [QScalar.zero(), QScalar.zero(), QScalar.one()]  # x^2
    a = wedge(P, wedge(Q, Y))
    b = wedge(Q, wedge(P, Y))
    assert (a + b).is_zero()


def test_wedge2_matches_iterated_wedge():
    # x^2 y^1 as a two-variable polynomial equals psi*_2 psi*_1 insertion
    Y = YoungVector(1, {(3,): QScalar.one()})
    two = wedge2({(2, 1): QScalar.one()}, Y)
    it = wedge([QScalar.zero(), QScalar.zero(), QScalar.one()],
               wedge([QScalar.zero(), QScalar.one()], Y))
    assert (two - it).is_zero()
    # swapping the exponents flips the sign
    two_swapped = wedge2({(1, 2): QScalar.one()}, Y)
    assert (two + two_swapped).is_zero()
    # diagonal terms die
    assert wedge2({(2, 2): QScalar.one()}, Y).is_zero()


# --------------------------------------------------------------------- sigma

def test_sigma_examples():
    Y = YoungVector(2, {(1,): 1})
    v = lr_sigma(1, Y)
    assert v.terms == {(2,): 1, (1, 1): 1}
    assert lr_sigma(0, Y) is Y


def test_sigma_slot_cap():
    Y = YoungVector(1, {(1,): 1})
    v = lr_sigma(1, Y)  # only one slot: (1,1) is cut away by the cap
    assert v.terms == {(2,): 1}
    assert lr_sigma(2, Y).is_zero()  # e_2 of one variable is zero


@settings(max_examples=30, deadline=None)
@given(partitions(max_parts=2, max_part=4), st.integers(1, 3))
def test_sigma_is_elementary_multiplication(lam, j):
    slots = len(lam) + j  # uncapped regime
    pts = rational_points(slots, seed=7)
    Y = YoungVector(slots, {lam: QScalar.one()})
    lhs = schur_eval(lr_sigma(j, Y), pts)
    rhs = elementary_e(pts, j)[j] * schur_eval(Y, pts)
    assert lhs == rhs


# ------------------------------------------------------------------------ cut

def test_cut():
    Y = YoungVector(3, {(2,): 1, (1, 1): 2, (1, 1, 1): 3})
    assert cut(1, Y).terms == {(2,): 1}
    assert cut(5, Y).terms == Y.terms
    assert cut(0, YoungVector(3, {(): 5, (1,): 1})).terms == {(): 5}


# ---------------------------------------------------------------- E operator

def test_e_operator_examples():
    assert e_operator(YoungVector.unit(1)).terms == {(): 1}
    Y = YoungVector(2, {(1,): 1})
    assert e_operator(Y).terms == {(1,): 1, (): 1}
    Y = YoungVector(3, {(1, 1): 1})
    assert e_operator(Y).terms == {(1, 1): 1, (1,): 1}
    # with only one output variable the full-length term vanishes
    Y = YoungVector(2, {(1, 1): 1})
    assert e_operator(Y).terms == {(1,): 1}


@settings(max_examples=30, deadline=None)
@given(partitions(max_parts=3, max_part=4), st.integers(1, 3))
def test_e_operator_evaluation_identity(lam, extra):
    slots = len(lam) + extra
    pts = rational_points(slots - 1, seed=11)
    Y = YoungVector(slots, {lam: QScalar.one()})
    lhs = schur_eval(e_operator(Y), pts)
    rhs = schur_eval(Y, pts + [QScalar.one()])
    assert lhs == rhs


def test_e_operator_full_length_term_drops():
    # s_(1,1)(x) in one variable is zero, so E keeps only the interlacings
    Y = YoungVector(2, {(1, 1): 1})
    v = e_operator(Y)
    assert (1, 1) not in v.terms or v.slots >= 2
