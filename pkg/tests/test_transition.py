import itertools

import pytest

from qcanon.canon import canonical_basis
from qcanon.pbw import build_basis
from qcanon.qfield import LaurentPoly, parse_laurent, quantum_binom, quantum_int
from qcanon.rootdata import cartan_type, longest_element_words
from qcanon.transition import (
    StructureConstants,
    check_row,
    product_formula,
    structure_constants,
    transition_table,
    verify_degree_bounds,
    verify_dhat_bar_relation,
    verify_similarity,
    zeta_direct,
    zeta_formula,
)
import qcanon.transition as transition_mod

P = parse_laurent
ONE_P = LaurentPoly.const(1)


def test_rank_one_closed_forms(A1):
    cb = canonical_basis(A1, 6)
    sc = StructureConstants(cb)
    for n in range(6):
        b = cb.label_of((n,))
        assert sc.c(1, 1, b) == {cb.label_of((n + 1,)): quantum_int(n + 1)}
        for p in range(0, n + 1):
            assert sc.dhat(1, p, b) == {cb.label_of((n - p,)): LaurentPoly.monomial(-p * n + p * (p + 1) // 2)}
            # d-hat = q^{p<wt b, h> + p(p+1)} bar(d)
            d = sc.d(1, p, b)[cb.label_of((n - p,))]
            assert d.bar().shift(p * (-2 * n) + p * (p + 1)) == sc.dhat(1, p, b)[cb.label_of((n - p,))]


def test_rank_one_identity_tables(A1):
    cb = canonical_basis(A1, 6)
    basis = build_basis(A1, (1,), 6)
    for n in range(7):
        b = cb.label_of((n,))
        assert zeta_direct(basis, b, cb) == {(n,): ONE_P}
        for m in range(7):
            assert zeta_formula(basis, b, (m,), (1,)) == (ONE_P if m == n else LaurentPoly())


def test_a2_root_row(A2):
    cb = canonical_basis(A2, 4)
    b = cb.label_of((0, 1, 0))
    assert zeta_direct(build_basis(A2, (1, 2, 1), 4), b, cb) == {(0, 1, 0): ONE_P, (1, 0, 1): P("q")}
    # other word: F_2 F_1 is the product of the outer root vectors there
    row = zeta_direct(build_basis(A2, (2, 1, 2), 4), b, cb)
    assert row == {(1, 0, 1): ONE_P}


def test_a2_c_row_and_degree_bound(A2):
    cb = canonical_basis(A2, 4)
    b = cb.label_of((0, 1, 0))
    rows = structure_constants(cb, 1, 1, b)
    c = rows["c"]
    lead = cb.crystal_step(b, 1, "f")
    assert c[lead] == quantum_binom(b.epsilon(1) + 1, 1)
    assert len(c) == 2 and all(v == ONE_P for v in c.values())
    for t, v in c.items():
        if t != lead:
            assert t.epsilon(1) > b.epsilon(1) + 1
            assert v.lo >= 1 - (t.epsilon(1) - 1)


@pytest.mark.parametrize("label,h", [("A2", 5), ("B2", 5), ("G2", 4)])
def test_formula_matches_direct(label, h):
    D = cartan_type(label)
    cb = canonical_basis(D, h)
    for w in longest_element_words(D):
        t = transition_table(cb, w, routes="both")
        assert all(t.agree.values())
        pf = product_formula(D, w, cb.word)
        for b in cb.labels(h):
            lead = pf.datum_of(b)
            assert pf.zeta(b, lead) == ONE_P
            assert min(t.rows[b.lusztig_datum]) == lead


@pytest.mark.parametrize("label", ["A2", "B2", "G2", "A3"])
def test_saito_inverse_follows_rotation(label):
    # Lambda_i^{-1} is computed through mod-q datum conversions; the datum
    # (0, c_2, ..., c_N) must come out as (c_2, ..., c_N, 0) in the rotated word
    D = cartan_type(label)
    for w in longest_element_words(D)[:2]:
        pf = product_formula(D, w, w)
        for c in itertools.product(range(3), repeat=len(w) - 1):
            if sum(c) <= 3:
                assert pf.saito_inverse(0, (0,) + c) == c + (0,)


def test_check_row_flags():
    good = {(0, 1): ONE_P, (1, 0): P("q + q^2")}
    assert check_row(good) == {"leading": (0, 1), "unitriangular": True, "integral": True, "positive": True}
    assert not check_row({(0, 1): ONE_P, (1, 0): P("q - q^2")})["positive"]
    assert not check_row({(0, 1): ONE_P, (1, 0): P("1 + q")})["unitriangular"]
    assert not check_row({(0, 1): P("2")})["unitriangular"]


@pytest.mark.parametrize("label", ["A1", "A2", "B2"])
def test_identities_hold(label):
    D = cartan_type(label)
    cb = canonical_basis(D, 4)
    sc = StructureConstants(cb)
    assert verify_similarity(sc, 4, 3).passed
    assert verify_dhat_bar_relation(sc, 4, 3).passed
    assert verify_degree_bounds(sc, 4, 3).passed


def test_similarity_needs_the_truncation(A2, monkeypatch):
    cb = canonical_basis(A2, 4)
    monkeypatch.setattr(transition_mod, "truncate_below", lambda p, m: p)
    rep = verify_similarity(StructureConstants(cb), 4, 3)
    assert not rep.passed and rep.failures


def test_corrupted_dhat_is_caught(A2):
    cb = canonical_basis(A2, 4)
    sc = StructureConstants(cb)
    b = cb.label_of((1, 0, 1))
    row = dict(sc.dhat(1, 1, b))
    t = next(iter(row))
    row[t] = row[t] + P("q^5")
    sc._rows[("dhat", 1, 1, b.lusztig_datum)] = row
    assert not verify_dhat_bar_relation(sc, 4, 1).passed
    assert not verify_degree_bounds(sc, 4, 1).passed
