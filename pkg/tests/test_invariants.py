"""Symmetric-operator bases: fusion weights, diagrams, identification."""

from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xxzinv.errors import DomainError
from xxzinv.invariants import (
    ArcDiagram,
    BratteliDiagram,
    arc_basis,
    arc_enumerate,
    arc_vector,
    basis_transform,
    bratteli_enumerate,
    chain_generator,
    commutant_residual,
    e_vector,
    from_matrix_units,
    gram_norm,
    identify,
    invariant_trace,
    irreducible_count,
    multiplicity_count,
    orthogonal_basis,
    pairing,
    singlet_vector,
    threej,
    to_matrix_units,
)
from xxzinv.scalars import QScalar, q_int
from xxzinv.smat import sp_apply, sp_commutator, sp_identity, sp_mul, sp_sub

H = Fraction(1, 2)
Q = QScalar.q


def qp(text):
    return QScalar.parse(text)


# -- fusion weights ---------------------------------------------------------

def test_threej_values():
    assert threej(0, 0, -H, up=True) == QScalar.one()
    assert threej(0, 0, H, up=True) == QScalar.one()
    assert threej(H, -H, H, up=False) == -Q(1)
    assert threej(H, H, H, up=False).is_zero()
    assert threej(H, H, H, up=True) == q_int(2)
    assert threej(1, 0, H, up=True) == qp("1 + q^-2")
    assert threej(1, 0, H, up=False) == -qp("q^2")


def test_threej_domain():
    with pytest.raises(DomainError):
        threej(H, Fraction(3, 2), H, up=True)
    with pytest.raises(DomainError):
        threej(H, 0, H, up=True)  # m not in the spin-1/2 ladder


def test_threej_ratio_identity():
    # up-weight minus down-weight telescopes: both share (q^(2m+2) - .)/(q^2-1)
    for tj in range(1, 5):
        for tm in range(-tj, tj + 1, 2):
            j, m = Fraction(tj, 2), Fraction(tm, 2)
            diff = threej(j, m, H, True) - threej(j, m, H, False)
            want = (Q(2 + tj) - Q(-tj)) / (Q(2) - QScalar.one())
            assert diff == want


# -- Bratteli enumeration ---------------------------------------------------

def test_bratteli_counts():
    assert len(bratteli_enumerate(2, 0, 0)) == 1
    assert len(bratteli_enumerate(4, 0, 0)) == 2
    assert len(bratteli_enumerate(6, 0, 0)) == 5
    assert len(bratteli_enumerate(8, 0, 0)) == 14


def test_bratteli_lex_order():
    first = bratteli_enumerate(8, 0, 0)[0]
    assert first.twojs == (0, 1, 0, 1, 0, 1, 0, 1, 0)
    seq = [d.twojs for d in bratteli_enumerate(8, 0, 0)]
    assert seq == sorted(seq)


def test_bratteli_restricted():
    # cap 2j <= r-2 = 1 leaves only the zigzag
    assert len(bratteli_enumerate(6, 0, 0, r=3)) == 1
    full = len(bratteli_enumerate(6, 0, 0))
    capped = len(bratteli_enumerate(6, 0, 0, r=4))
    assert capped < full


@given(st.integers(0, 10), st.integers(0, 5))
def test_multiplicity_formula(k, tj):
    j = Fraction(tj, 2)
    got = len(bratteli_enumerate(k, 0, j))
    assert got == multiplicity_count(k, j)
    if (k - tj) % 2 == 0 and 0 <= tj <= k:
        d = (k - tj) // 2
        assert multiplicity_count(k, j) == comb(k, d) - (comb(k, d - 1) if d else 0)


def test_bratteli_text_roundtrip():
    d = BratteliDiagram.parse("0,1,2,1,0")
    assert d.text() == "0,1,2,1,0"
    assert d.spin(2) == 1
    with pytest.raises(DomainError):
        BratteliDiagram.parse("0,2,0")


# -- fusion-path vectors ----------------------------------------------------

def test_singlet_path_vector():
    J = BratteliDiagram((0, 1, 0))
    v = e_vector(2, J, 0, 0)
    assert v == {0b01: QScalar.one(), 0b10: -Q(1)}


def test_e_vector_invariance_four_sites():
    for J in bratteli_enumerate(4, 0, 0):
        v = e_vector(4, J, 0, 0)
        for g in ("E", "F"):
            X = chain_generator(g, 4)
            assert not sp_apply(X, v)
        K = chain_generator("K", 4)
        assert sp_apply(K, v) == v


@given(st.integers(1, 3), st.data())
@settings(max_examples=30, deadline=None)
def test_e_vector_highest_weight(n, data):
    diags = bratteli_enumerate(2 * n, 0, 0)
    J = data.draw(st.sampled_from(diags))
    v = e_vector(2 * n, J, 0, 0)
    assert v
    E = chain_generator("E", 2 * n)
    assert not sp_apply(E, v)


# -- arc diagrams -----------------------------------------------------------

def test_arc_parse_roundtrip():
    a = ArcDiagram.parse("(()())")
    assert a.arcs == ((1, 6), (2, 3), (4, 5))
    assert a.text() == "(()())"
    assert a.to_bratteli().twojs == (0, 1, 2, 1, 2, 1, 0)
    with pytest.raises(DomainError):
        ArcDiagram.parse("(()")
    with pytest.raises(DomainError):
        ArcDiagram(((1, 3), (2, 4)))  # crossing


def test_arc_catalan_counts():
    for n in range(1, 7):
        assert len(arc_enumerate(n)) == comb(2 * n, n) // (n + 1)


def test_arc_bratteli_bijection():
    for n in range(1, 5):
        keys = [a.to_bratteli().twojs for a in arc_enumerate(n)]
        assert len(set(keys)) == len(keys)
        walks = [d.twojs for d in bratteli_enumerate(2 * n, 0, 0)]
        assert sorted(keys) == sorted(walks)
        assert keys == sorted(keys)  # enumeration is ordered by the key


def test_singlet_vector_entries():
    v = singlet_vector(1, 2, 2)
    assert v == {0b01: QScalar.one(), 0b10: -Q(1)}


# -- identification with operators ------------------------------------------

def test_identity_from_adjacent_singlet():
    op = identify(singlet_vector(1, 2, 2), 1)
    assert op == sp_identity(2, QScalar.one())


def test_identity_from_nested_arcs():
    # fully nested arcs (k, 2n+1-k) identify to the identity operator
    for n in (2, 3):
        arcs = tuple((k, 2 * n + 1 - k) for k in range(1, n + 1))
        op = identify(arc_vector(ArcDiagram(arcs)), n)
        assert op == sp_identity(1 << n, QScalar.one())


def test_all_bases_are_invariant():
    for n in (1, 2, 3):
        for _, op in arc_basis(n):
            assert commutant_residual(op.mat, n) == 0
        for _, op in orthogonal_basis(n):
            assert commutant_residual(op.mat, n) == 0


def test_chain_generator_algebra():
    # K E K^-1 = q^2 E and [E, F] = (K - K^-1)/(q - q^-1) on 3 sites
    n = 3
    E, F = chain_generator("E", n), chain_generator("F", n)
    K, Ki = chain_generator("K", n), chain_generator("Kinv", n)
    lhs = sp_mul(sp_mul(K, E), Ki)
    assert not sp_sub(lhs, {k: Q(2) * v for k, v in E.items()})
    comm = sp_sub(sp_mul(E, F), sp_mul(F, E))
    scale = (Q(1) - Q(-1)) ** -1
    want = {k: scale * v for k, v in sp_sub(K, Ki).items()}
    assert not sp_sub(comm, want)


# -- traces and gram matrix --------------------------------------------------

def test_invariant_trace_examples():
    for n in (1, 2, 3):
        t = invariant_trace(sp_identity(1 << n, QScalar.one()), n)
        assert t == q_int(2) ** n
    sz = {(0, 0): QScalar.one(), (1, 1): -QScalar.one()}
    assert invariant_trace(sz, 1) == qp("q^-1 - q")


def test_gram_pairs_reversed_walks():
    for n in (1, 2, 3):
        basis = orthogonal_basis(n)
        for i, (Ji, Oi) in enumerate(basis):
            for j, (Jj, Oj) in enumerate(basis):
                g = pairing(Oi.mat, Oj.mat, n)
                if Jj.twojs == Ji.reversed().twojs:
                    assert g == gram_norm(Ji)
                else:
                    assert g.is_zero()


def test_gram_norm_values():
    assert gram_norm(BratteliDiagram((0, 1, 0))) == q_int(2)
    J = BratteliDiagram((0, 1, 2, 1, 0))
    assert gram_norm(J) == q_int(2) * q_int(3) * q_int(2)


# -- basis transform ---------------------------------------------------------

def test_basis_transform_small():
    diags, U = basis_transform(1)
    assert len(U) == 1 and U[0][0] == QScalar.one()

    diags, U = basis_transform(2)
    assert U[0][0] == QScalar.one()
    for i in range(len(U)):
        for j in range(i + 1, len(U)):
            assert U[i][j].is_zero()


def test_basis_transform_reexpands():
    for n in (2, 3):
        diags, U = basis_transform(n)
        aops = [op.mat for _, op in arc_basis(n)]
        oops = [op.mat for _, op in orthogonal_basis(n)]
        for i, row in enumerate(U):
            assert not row[i].is_zero()
            for j in range(i + 1, len(row)):
                assert row[j].is_zero()
            acc = {}
            for c, a in zip(row, aops):
                for k, v in a.items():
                    t = acc.get(k, QScalar.zero()) + c * v
                    if t.is_zero():
                        acc.pop(k, None)
                    else:
                        acc[k] = t
            assert not sp_sub(acc, oops[i])


def test_irreducible_counts():
    assert irreducible_count(1)[0] == 0
    assert irreducible_count(2)[0] == 1
    assert irreducible_count(3)[0] == 2
    assert irreducible_count(4)[0] == 6


# -- matrix units -------------------------------------------------------------

def test_matrix_units_roundtrip():
    for n in (1, 2):
        for _, op in arc_basis(n):
            words = to_matrix_units(op.mat, n)
            back = from_matrix_units(words, n)
            assert not sp_sub(back, op.mat)


def test_matrix_units_identity():
    words = to_matrix_units(sp_identity(4, QScalar.one()), 2)
    labels = {w for w, _ in words}
    assert labels == {((1, 1), (1, 1)), ((1, 1), (2, 2)),
                      ((2, 2), (1, 1)), ((2, 2), (2, 2))}
