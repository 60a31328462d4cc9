"""Randomized identities, 200 hypothesis samples per type and property.

``SAMPLES`` counts executed examples so the acceptance run can report
how many inputs each property actually saw.
"""
from collections import Counter

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from qcanon.canon import CanonicalBasis, EmbeddedCrystal
from qcanon.mixedalg import MixedElement, braid, from_neg, multiply, project_to_neg
from qcanon.qfield import LaurentPoly, ONE, Scalar
from qcanon.rootdata import cartan_type
from qcanon.uqn import (
    NegElement,
    bilinear_form,
    derivation,
    divided_power,
    generator,
    i_string_decompose,
)

TYPES = ["A2", "B2", "G2"]
N_SAMPLES = 200
SAMPLES = Counter()
BOUNDS = {"A2": 6, "B2": 5, "G2": 5}

# explicit so the acceptance run gets the same behaviour outside pytest
PROPERTY_SETTINGS = settings(
    max_examples=N_SAMPLES,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large, HealthCheck.filter_too_much],
)

_CB = {}


def crystal(label):
    cb = _CB.get(label)
    if cb is None:
        cb = CanonicalBasis(cartan_type(label), BOUNDS[label])
        _CB[label] = cb
    return cb


# ---------------------------------------------------------------------------
# strategies

coefficient = st.builds(
    lambda a, e: Scalar.from_poly(LaurentPoly.monomial(e, a)),
    st.integers(-3, 3).filter(bool),
    st.integers(-2, 2),
)


@st.composite
def neg_element(draw, datum, grade):
    letters = [i for i in datum.indices for _ in range(grade[i - 1])]
    terms = {}
    for _ in range(draw(st.integers(1, 3))):
        w = tuple(draw(st.permutations(letters)))
        terms[w] = draw(coefficient)
    return NegElement(datum, terms, grade)


grades = st.lists(st.integers(0, 2), min_size=2, max_size=2).map(tuple).filter(lambda g: 0 < sum(g) <= 3)


def _mixed(datum, parts):
    out = MixedElement(datum)
    for f, mu, e, c in parts:
        t = MixedElement.scalar(datum, c)
        for a in f:
            t = multiply(t, MixedElement.F(datum, a))
        t = multiply(t, MixedElement.K(datum, mu))
        for a in e:
            t = multiply(t, MixedElement.E(datum, a))
        out = out + t
    return out


# at most two generators per term: in G2 a term F2 F2 E2 already expands
# to 64 terms under one braid and costs over a minute to invert
mixed_parts = st.lists(
    st.tuples(
        st.lists(st.integers(1, 2), max_size=2),
        st.tuples(st.integers(-1, 1), st.integers(-1, 1)),
        st.lists(st.integers(1, 2), max_size=1),
        st.integers(-2, 2).filter(bool),
    ).filter(lambda t: len(t[0]) + len(t[2]) <= 2),
    min_size=1,
    max_size=2,
)


# ---------------------------------------------------------------------------
# U_q(n^-) identities

@pytest.mark.parametrize("label", TYPES)
@PROPERTY_SETTINGS
@given(data=st.data())
def test_form_adjointness(label, data):
    D = cartan_type(label)
    g = data.draw(grades)
    j = data.draw(st.sampled_from(list(D.indices)))
    x = data.draw(neg_element(D, g))
    gy = list(g)
    gy[j - 1] += 1
    y = data.draw(neg_element(D, tuple(gy)))
    qj2 = Scalar.from_poly(LaurentPoly.monomial(2 * D.d[j - 1]))
    lhs = (ONE - qj2) * bilinear_form(generator(D, j) * x, y)
    assert lhs == bilinear_form(x, derivation(y, j))
    SAMPLES[("form adjointness", label)] += 1


@pytest.mark.parametrize("label", TYPES)
@PROPERTY_SETTINGS
@given(data=st.data())
def test_i_string_reconstruction(label, data):
    D = cartan_type(label)
    x = data.draw(neg_element(D, data.draw(grades)))
    i = data.draw(st.sampled_from(list(D.indices)))
    total = NegElement.zero(D, x.grade)
    for n, u in i_string_decompose(x, i):
        assert derivation(u, i).is_zero()
        total = total + divided_power(D, i, n) * u
    assert total == x
    SAMPLES[("i-string reconstruction", label)] += 1


def _kernel_part(x, i):
    # components of the i-string decomposition lie in Ker e'_i
    parts = i_string_decompose(x, i)
    return parts[-1][1] if parts else x


@pytest.mark.parametrize("label", TYPES)
@PROPERTY_SETTINGS
@given(data=st.data())
def test_braid_invariance_of_form(label, data):
    D = cartan_type(label)
    i = data.draw(st.sampled_from(list(D.indices)))
    g = data.draw(grades)
    x = _kernel_part(data.draw(neg_element(D, g)), i)
    y = _kernel_part(data.draw(neg_element(D, g)), i)
    assert derivation(x, i).is_zero() and derivation(y, i).is_zero()
    # (T''_{i,1})^{-1} = T'_{i,-1}; images of Ker e'_i stay in U_q(n^-)
    tx = project_to_neg(braid(from_neg(x), i, "T'", -1))
    ty = project_to_neg(braid(from_neg(y), i, "T'", -1))
    assert bilinear_form(x, y) == bilinear_form(tx, ty)
    SAMPLES[("T'' invariance of the form", label)] += 1


@pytest.mark.parametrize("label", TYPES)
@PROPERTY_SETTINGS
@given(parts=mixed_parts, i=st.integers(1, 2), eps=st.sampled_from([1, -1]))
def test_braid_inverse_pairs(label, parts, i, eps):
    D = cartan_type(label)
    x = _mixed(D, parts)
    assert braid(braid(x, i, "T''", -eps), i, "T'", eps).terms == x.terms
    assert braid(braid(x, i, "T'", eps), i, "T''", -eps).terms == x.terms
    SAMPLES[("braid inverse pairs", label)] += 1


# ---------------------------------------------------------------------------
# crystal identities on random walks through B(infinity)

@st.composite
def walk(draw, label, depth=4):
    """A label reached from the unit by random f~ / f~* steps."""
    cb = crystal(label)
    D = cb.datum
    b = cb.unit()
    for _ in range(draw(st.integers(0, depth))):
        i = draw(st.sampled_from(list(D.indices)))
        direction = draw(st.sampled_from(["f", "f*"]))
        if sum(b.grade) + 1 >= cb.height_bound:
            break
        b = cb.crystal_step(b, i, direction)
    return b


@pytest.mark.parametrize("label", TYPES)
@PROPERTY_SETTINGS
@given(data=st.data())
def test_crystal_axioms(label, data):
    cb = crystal(label)
    D = cb.datum
    b = data.draw(walk(label))
    i = data.draw(st.sampled_from(list(D.indices)))
    starred = data.draw(st.booleans())
    e_dir, f_dir = ("e*", "f*") if starred else ("e", "f")
    eps, phi = b.epsilon(i, starred), b.varphi(i, starred)
    assert phi == eps + D.coroot_pairing(i, b.weight)
    down = cb.crystal_step(b, i, f_dir)
    assert down.weight == D.add(b.weight, D.simple_root(i), -1)
    assert (down.epsilon(i, starred), down.varphi(i, starred)) == (eps + 1, phi - 1)
    assert cb.crystal_step(down, i, e_dir) == b
    up = cb.crystal_step(b, i, e_dir)
    assert (up is None) == (eps == 0)
    if up is not None:
        assert up.weight == D.add(b.weight, D.simple_root(i))
        assert (up.epsilon(i, starred), up.varphi(i, starred)) == (eps - 1, phi + 1)
        assert cb.crystal_step(up, i, f_dir) == b
    SAMPLES[("crystal axioms", label)] += 1


@pytest.mark.parametrize("label", TYPES)
@PROPERTY_SETTINGS
@given(data=st.data())
def test_saito_weight_law(label, data):
    cb = crystal(label)
    D = cb.datum
    b = data.draw(walk(label, 3))
    # push b into {eps_i = 0} (inverse) or {eps*_i = 0} (forward), keeping
    # only choices whose image stays inside the height bound
    options = []
    for i in D.indices:
        for forward in (True, False):
            b0 = cb.apply(b, i, "e*" if forward else "e", b.epsilon(i, forward))
            if sum(D.reflect(i, b0.weight)) >= -cb.height_bound:
                options.append((b0, i, forward))
    b, i, forward = data.draw(st.sampled_from(options))
    r = cb.saito_reflect(b, i, "forward" if forward else "inverse")
    assert r.weight == D.reflect(i, b.weight)
    assert cb.saito_reflect(r, i, "inverse" if forward else "forward") == b
    SAMPLES[("Saito weight law", label)] += 1


@pytest.mark.parametrize("label", TYPES)
@PROPERTY_SETTINGS
@given(data=st.data())
def test_kashiwara_embedding_commutes(label, data):
    cb = crystal(label)
    D = cb.datum
    b = data.draw(walk(label))
    i = data.draw(st.sampled_from(list(D.indices)))
    j = data.draw(st.sampled_from(list(D.indices)))
    ec = EmbeddedCrystal(cb, i)
    pb = cb.kashiwara_embed(b, i)
    assert ec.wt(pb) == b.weight
    assert ec.epsilon(pb, j) == b.epsilon(j) and ec.varphi(pb, j) == b.varphi(j)
    down = cb.crystal_step(b, j, "f")
    assert ec.f(pb, j) == cb.kashiwara_embed(down, i)
    up = cb.crystal_step(b, j, "e")
    img = ec.e(pb, j)
    assert (img is None) if up is None else img == cb.kashiwara_embed(up, i)
    SAMPLES[("Kashiwara embedding", label)] += 1


PROPERTIES = [
    ("form adjointness", test_form_adjointness),
    ("T'' invariance of the form", test_braid_invariance_of_form),
    ("braid inverse pairs", test_braid_inverse_pairs),
    ("i-string reconstruction", test_i_string_reconstruction),
    ("crystal axioms", test_crystal_axioms),
    ("Saito weight law", test_saito_weight_law),
    ("Kashiwara embedding", test_kashiwara_embedding_commutes),
]
