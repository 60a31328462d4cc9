import pytest

from qcanon.errors import CapacityError, DomainError
from qcanon.rootdata import (
    cartan_type,
    longest_element_words,
    parse_word,
    positive_roots_of,
    reference_word,
    rotate_word,
    simple_reflection,
)

TYPES = ["A1", "A2", "A3", "A4", "B2", "B3", "C2", "C3", "D4", "G2", "F4", "B4", "C4"]


def test_longest_words_small_types(A1, A2, B2):
    assert longest_element_words(A2) == [(1, 2, 1), (2, 1, 2)]
    assert longest_element_words(A1) == [(1,)]
    assert longest_element_words(B2) == [(1, 2, 1, 2), (2, 1, 2, 1)]
    assert len(longest_element_words(cartan_type("A3"))) == 16


def test_positive_roots_of_examples(A1, A2, B2):
    assert positive_roots_of(A2, (1, 2, 1)) == ((1, 0), (1, 1), (0, 1))
    assert positive_roots_of(A1, (1,)) == ((1,),)
    # alpha_1 short in B2
    assert positive_roots_of(B2, (1, 2, 1, 2)) == ((1, 0), (2, 1), (1, 1), (0, 1))


def test_non_reduced_word_rejected(A2):
    with pytest.raises(DomainError):
        positive_roots_of(A2, (1, 1, 2))


def test_simple_reflection_examples(A2):
    assert simple_reflection(A2, 1, (1, 0)) == (-1, 0)
    assert simple_reflection(A2, 1, (0, 1)) == (1, 1)
    B3 = cartan_type("B3")
    mu = (0, 0, 1)
    assert B3.coroot_pairing(1, mu) == 0
    assert simple_reflection(B3, 1, mu) == mu


@pytest.mark.parametrize("label", TYPES)
def test_cartan_invariants(label):
    D = cartan_type(label)
    n = D.rank
    for i in range(n):
        assert D.cartan[i][i] == 2
        for j in range(n):
            if i != j:
                assert D.cartan[i][j] <= 0
            assert D.d[i] * D.cartan[i][j] == D.d[j] * D.cartan[j][i]
    assert min(D.d) == 1


@pytest.mark.parametrize("label", ["A1", "A2", "A3", "B2", "B3", "C3", "G2"])
def test_every_word_gives_every_positive_root(label):
    D = cartan_type(label)
    roots = set(D.positive_roots())
    words = longest_element_words(D, limit=40)
    for w in words:
        betas = positive_roots_of(D, w)
        assert len(betas) == len(roots) == len(w)
        assert set(betas) == roots


@pytest.mark.parametrize("label", ["A2", "B2", "G2", "A3"])
def test_reflections_are_involutions(label):
    D = cartan_type(label)
    for i in D.indices:
        for mu in D.positive_roots():
            assert simple_reflection(D, i, simple_reflection(D, i, mu)) == mu


def test_rotation_moves_first_letter(A2, B2, G2):
    for D in (A2, B2, G2):
        for w in longest_element_words(D):
            r = rotate_word(D, w)
            assert r in longest_element_words(D)
            assert r[:-1] == w[1:]
            assert positive_roots_of(D, r)[-1] == D.simple_root(w[0])


def test_capacity_guard():
    with pytest.raises(CapacityError):
        cartan_type("E8")


def test_parsing(A2):
    assert parse_word("1,2,1", A2) == (1, 2, 1)
    with pytest.raises(DomainError):
        parse_word("1,4", A2)
    with pytest.raises(DomainError):
        cartan_type("Q7")
    assert reference_word(A2) == (1, 2, 1)
