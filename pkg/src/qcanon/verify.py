"""Verification suites over the canonical basis, crystal and transition data.

Each suite returns a list of ``Report`` records.  A report with
``asserted=False`` carries a measurement only (positivity outside the
simply-laced types) and never decides the outcome of a run.
"""
from __future__ import annotations

import time
from typing import List, Sequence

from .canon import CanonicalBasis, EmbeddedCrystal, canonical_basis, mod_q_value
from .errors import CapacityError, DomainError
from .pbw import build_basis
from .qfield import LaurentPoly, ONE, ZERO, is_positive, render
from .rootdata import RootDatum, longest_element_words, format_word
from .straighten import engine
from .transition import (
    Report,
    StructureConstants,
    check_row,
    product_formula,
    transition_table,
    verify_degree_bounds,
    verify_dhat_bar_relation,
    verify_similarity,
)
from .uqn import bilinear_form, kashiwara_op

__all__ = [
    "SUITES",
    "is_simply_laced",
    "run_suite",
    "overall",
    "check_positivity",
    "check_formula",
    "check_duality",
    "check_slice_independence",
    "check_engine_slices",
    "check_crystal_axioms",
    "check_epsilon_steps",
    "check_saito",
    "check_embedding",
    "check_constant_positivity",
]

SUITES = ("positivity", "formula", "duality", "similarity", "crystal")


def is_simply_laced(datum: RootDatum) -> bool:
    return all(x == 1 for x in datum.d)


def _words(datum: RootDatum, words) -> list:
    if words is None:
        return longest_element_words(datum)
    return [tuple(w) for w in words]


def _timed(rep: Report, t0: float) -> Report:
    rep.seconds = time.perf_counter() - t0
    return rep


# ---------------------------------------------------------------------------
# transition coefficients

def check_positivity(cb: CanonicalBasis, word: Sequence[int], max_height: int | None = None) -> List[Report]:
    """zeta rows for one word: unitriangular and integral, positive (ADE only asserted)."""
    t0 = time.perf_counter()
    datum = cb.datum
    h = cb.height_bound if max_height is None else max_height
    params = {"type": datum.type_label, "word": format_word(word), "height": h}
    table = transition_table(cb, word, routes="direct", max_height=h)
    tri = Report("zeta unitriangular", dict(params))
    pos = Report("zeta positive", dict(params), asserted=is_simply_laced(datum))
    negative = 0
    for b, row in table.rows.items():
        res = check_row(row)
        tri.count += 1
        pos.count += 1
        if not (res["unitriangular"] and res["integral"]):
            tri.fail(label=str(b), row={str(d): render(v) for d, v in row.items()})
        if not res["positive"]:
            negative += 1
            pos.fail(label=str(b), row={str(d): render(v) for d, v in row.items()})
    pos.measured = {"rows": pos.count, "rows_with_negative_coefficient": negative}
    if not pos.asserted:
        pos.measured["note"] = "positivity is not asserted outside simply-laced types"
    _timed(tri, t0)
    _timed(pos, t0)
    return [tri, pos]


def check_formula(cb: CanonicalBasis, word: Sequence[int], max_height: int | None = None) -> List[Report]:
    """Product formula against direct expansion, entry by entry."""
    t0 = time.perf_counter()
    datum = cb.datum
    h = cb.height_bound if max_height is None else max_height
    rep = Report("formula = direct", {"type": datum.type_label, "word": format_word(word), "height": h})
    table = transition_table(cb, word, routes="both", max_height=h)
    basis = build_basis(datum, word, cb.height_bound)
    for b, row in table.rows.items():
        rep.count += 1
        if not table.agree[b]:
            formula = product_formula(datum, word, cb.word).row(cb.label_of(b))
            keys = sorted(set(row) | set(formula))
            diff = {str(d): (render(row.get(d, LaurentPoly())), render(formula.get(d, LaurentPoly())))
                    for d in keys if row.get(d) != formula.get(d)}
            rep.fail(label=str(b), differences=diff)
            continue
        res = check_row(row, table.leading[b])
        if not (res["unitriangular"] and res["integral"]):
            rep.fail(label=str(b), reason="row is not unitriangular and integral")
        # the leading tuple of the direct row is the crystal datum for this word
        if min(row) != table.leading[b] or basis.grade_of(min(row)) != cb.label_of(b).grade:
            rep.fail(label=str(b), reason="leading tuple disagrees with the crystal datum")
    return [_timed(rep, t0)]


def check_engine_slices(cb: CanonicalBasis, word: Sequence[int], max_height: int | None = None) -> Report:
    """Straightening-engine slices equal the word-level slices for ``word``."""
    t0 = time.perf_counter()
    datum = cb.datum
    h = cb.height_bound if max_height is None else max_height
    rep = Report("engine = word level", {"type": datum.type_label, "word": format_word(word), "height": h})
    E = engine(datum, word)
    basis = build_basis(datum, word, cb.height_bound)
    for g in basis.grades():
        if sum(g) > h:
            continue
        word_slice = cb.slice_from(basis, g)
        eng = E.slice(g)
        for c, coords in word_slice.pbw_coords.items():
            rep.count += 1
            lead = min(k for k, v in coords.items() if v)
            expected = {k: v.as_laurent() for k, v in coords.items() if v}
            if eng.coords.get(lead) != expected:
                rep.fail(grade=g, datum=str(lead), reason="canonical element differs")
    return _timed(rep, t0)


# ---------------------------------------------------------------------------
# dual PBW basis

def check_duality(datum: RootDatum, word: Sequence[int], max_height: int) -> Report:
    """(dual F^d, F^d') = delta over all tuple pairs up to ``max_height``."""
    t0 = time.perf_counter()
    rep = Report("dual PBW orthogonality", {"type": datum.type_label, "word": format_word(word),
                                            "height": max_height})
    basis = build_basis(datum, word, max_height)
    for g in basis.grades():
        tuples = basis.tuples(g)
        mono = {c: basis.monomial(c) for c in tuples}
        for d in tuples:
            dual = basis.dual_monomial(d)
            for c in tuples:
                v = bilinear_form(dual, mono[c])
                rep.count += 1
                if v != (ONE if c == d else ZERO):
                    rep.fail(d=str(d), d_prime=str(c), value=render(v))
    return _timed(rep, t0)


# ---------------------------------------------------------------------------
# canonical basis and crystal

def check_slice_independence(cb: CanonicalBasis, word: Sequence[int], max_height: int | None = None) -> Report:
    """Canonical elements built from ``word`` coincide with the reference ones."""
    t0 = time.perf_counter()
    datum = cb.datum
    h = cb.height_bound if max_height is None else max_height
    rep = Report("slice independence", {"type": datum.type_label, "word": format_word(word), "height": h})
    basis = build_basis(datum, word, cb.height_bound)
    for g in cb.basis.grades():
        if sum(g) > h:
            continue
        ref = cb.slice(g)
        other = cb.slice_from(basis, g)
        if sorted(ref.elements) != sorted(other.elements):
            rep.fail(grade=g, reason="label sets differ")
            continue
        for c, x in ref.elements.items():
            rep.count += 1
            if not (x == other.elements[c]):
                rep.fail(grade=g, label=str(c), reason="elements differ")
    return _timed(rep, t0)


def _step(cb, b, i, direction):
    try:
        return cb.crystal_step(b, i, direction), True
    except CapacityError:
        return None, False


def check_crystal_axioms(cb: CanonicalBasis, max_height: int | None = None) -> Report:
    """wt/eps/phi bookkeeping under e~, f~ and their starred versions."""
    t0 = time.perf_counter()
    datum = cb.datum
    h = cb.height_bound if max_height is None else max_height
    rep = Report("crystal axioms", {"type": datum.type_label, "height": h})
    skipped = 0
    for b in cb.labels(h):
        for i in datum.indices:
            a_i = datum.simple_root(i)
            for starred in (False, True):
                e_dir, f_dir = ("e*", "f*") if starred else ("e", "f")
                eps = b.epsilon(i, starred)
                phi = b.varphi(i, starred)
                rep.count += 1
                if phi != eps + datum.coroot_pairing(i, b.weight):
                    rep.fail(label=str(b), i=i, starred=starred, axiom="phi = eps + <h_i, wt>")
                up = cb.crystal_step(b, i, e_dir)
                if (up is None) != (eps == 0):
                    rep.fail(label=str(b), i=i, starred=starred, axiom="e~ b = 0 iff eps = 0")
                if up is not None:
                    if (up.weight != datum.add(b.weight, a_i) or up.epsilon(i, starred) != eps - 1
                            or up.varphi(i, starred) != phi + 1):
                        rep.fail(label=str(b), i=i, starred=starred, axiom="e~ bookkeeping")
                    back, ok = _step(cb, up, i, f_dir)
                    if back != b:
                        rep.fail(label=str(b), i=i, starred=starred, axiom="f~ e~ b = b")
                down, ok = _step(cb, b, i, f_dir)
                if not ok:
                    skipped += 1
                    continue
                if (down.weight != datum.add(b.weight, a_i, -1) or down.epsilon(i, starred) != eps + 1
                        or down.varphi(i, starred) != phi - 1):
                    rep.fail(label=str(b), i=i, starred=starred, axiom="f~ bookkeeping")
                if cb.crystal_step(down, i, e_dir) != b:
                    rep.fail(label=str(b), i=i, starred=starred, axiom="e~ f~ b = b")
    rep.measured = {"f_steps_beyond_bound": skipped}
    return _timed(rep, t0)


def check_epsilon_steps(cb: CanonicalBasis, max_height: int | None = None) -> Report:
    """eps_i(b) is the number of e~_i steps, with e~_i G(b) in qL at the end.

    The operator is applied to the element itself (not through the cached
    eps), so an element with eps_i = 0 must have e~_i G(b) = 0 modulo q.
    """
    t0 = time.perf_counter()
    datum = cb.datum
    h = cb.height_bound if max_height is None else max_height
    rep = Report("eps = e~ steps", {"type": datum.type_label, "height": h})
    for b in cb.labels(h):
        for i in datum.indices:
            steps = 0
            cur = b
            while True:
                x = kashiwara_op(cb.element(cur), i, "e")
                hits = [lab for lab, a in cb.canonical_coords(x).items() if mod_q_value(a) != 0]
                if not hits:
                    break
                if len(hits) != 1 or hits[0] != cb.crystal_step(cur, i, "e"):
                    rep.fail(label=str(b), i=i, reason="e~ disagrees with the crystal step")
                    break
                cur = hits[0]
                steps += 1
            rep.count += 1
            if steps != b.epsilon(i):
                rep.fail(label=str(b), i=i, eps=b.epsilon(i), steps=steps)
    return _timed(rep, t0)


def check_saito(cb: CanonicalBasis, max_height: int | None = None) -> Report:
    """wt Lambda_i^{-1} b = s_i wt b, and Lambda_i, Lambda_i^{-1} are inverse."""
    t0 = time.perf_counter()
    datum = cb.datum
    h = cb.height_bound if max_height is None else max_height
    rep = Report("Saito reflection", {"type": datum.type_label, "height": h})
    skipped = 0
    for b in cb.labels(h):
        for i in datum.indices:
            try:
                if b.epsilon(i) == 0:
                    r = cb.saito_reflect(b, i, "inverse")
                    rep.count += 1
                    if r.weight != datum.reflect(i, b.weight):
                        rep.fail(label=str(b), i=i, law="weight", image=str(r))
                    if r.epsilon(i, True) != 0 or cb.saito_reflect(r, i, "forward") != b:
                        rep.fail(label=str(b), i=i, law="Lambda Lambda^-1 = id", image=str(r))
                if b.epsilon(i, True) == 0:
                    r = cb.saito_reflect(b, i, "forward")
                    rep.count += 1
                    if r.weight != datum.reflect(i, b.weight):
                        rep.fail(label=str(b), i=i, law="weight (forward)", image=str(r))
                    if r.epsilon(i) != 0 or cb.saito_reflect(r, i, "inverse") != b:
                        rep.fail(label=str(b), i=i, law="Lambda^-1 Lambda = id", image=str(r))
            except CapacityError:
                skipped += 1
    rep.measured = {"images_beyond_bound": skipped}
    return _timed(rep, t0)


def check_embedding(cb: CanonicalBasis, max_height: int | None = None) -> Report:
    """Psi_i is a crystal morphism into B(inf) x Z commuting with e~_j, f~_j."""
    t0 = time.perf_counter()
    datum = cb.datum
    h = cb.height_bound if max_height is None else max_height
    rep = Report("Kashiwara embedding", {"type": datum.type_label, "height": h})
    skipped = 0
    for i in datum.indices:
        ec = EmbeddedCrystal(cb, i)
        psi = lambda b: cb.kashiwara_embed(b, i)
        for b in cb.labels(h):
            pb = psi(b)
            b0, m = pb
            rep.count += 1
            if b0.epsilon(i, True) != 0 or m > 0:
                rep.fail(label=str(b), i=i, property="image")
            if ec.wt(pb) != b.weight:
                rep.fail(label=str(b), i=i, property="weight")
            for j in datum.indices:
                if ec.epsilon(pb, j) != b.epsilon(j) or ec.varphi(pb, j) != b.varphi(j):
                    rep.fail(label=str(b), i=i, j=j, property="eps/phi")
                up = cb.crystal_step(b, j, "e")
                img = ec.e(pb, j)
                if (up is None and img is not None) or (up is not None and img != psi(up)):
                    rep.fail(label=str(b), i=i, j=j, property="e~ commutes")
                down, ok = _step(cb, b, j, "f")
                if not ok:
                    skipped += 1
                    continue
                try:
                    img = ec.f(pb, j)
                except CapacityError:
                    skipped += 1
                    continue
                if img != psi(down):
                    rep.fail(label=str(b), i=i, j=j, property="f~ commutes")
            fs, ok = _step(cb, b, i, "f*")
            if ok and psi(fs) != (b0, m - 1):
                rep.fail(label=str(b), i=i, property="Psi(f~* b) = (b0, m - 1)")
    rep.measured = {"steps_beyond_bound": skipped}
    return _timed(rep, t0)


def check_constant_positivity(sc: StructureConstants, max_height: int, max_p: int) -> Report:
    """c, d, dhat in N[q, q^-1]; asserted for simply-laced types only."""
    t0 = time.perf_counter()
    cb = sc.cb
    datum = sc.datum
    rep = Report("structure constants positive", {"type": datum.type_label, "height": max_height, "p": max_p},
                 asserted=is_simply_laced(datum))
    negative = 0
    for b in cb.labels(max_height):
        for i in datum.indices:
            for p in range(1, max_p + 1):
                rows = []
                if sum(b.grade) + p <= max_height:
                    rows.append(("c", sc.c(i, p, b)))
                if p <= b.grade[i - 1]:
                    rows.append(("dhat", sc.dhat(i, p, b)))
                    rows.append(("d", sc.d(i, p, b)))
                for kind, row in rows:
                    for t, v in row.items():
                        rep.count += 1
                        if not is_positive(v):
                            negative += 1
                            rep.fail(constant=kind, b=str(b), b_tilde=str(t), i=i, p=p, value=render(v))
    rep.measured = {"entries": rep.count, "negative_entries": negative}
    return _timed(rep, t0)


# ---------------------------------------------------------------------------
# suites

def run_suite(name: str, datum: RootDatum, bound: int, words=None, max_N: int = 3,
              max_p: int = 3) -> List[Report]:
    """Run one suite (or 'all') for ``datum`` up to height ``bound``."""
    if name == "all":
        out = []
        for s in SUITES:
            out.extend(run_suite(s, datum, bound, words, max_N, max_p))
        return out
    if name not in SUITES:
        raise DomainError(f"unknown suite {name!r}; choose from {', '.join(SUITES + ('all',))}")
    if bound < 1:
        raise DomainError("height bound must be at least 1")
    ws = _words(datum, words)
    cb = canonical_basis(datum, bound)
    out: List[Report] = []
    if name == "positivity":
        for w in ws:
            out.extend(check_positivity(cb, w))
    elif name == "formula":
        for w in ws:
            out.append(check_engine_slices(cb, w))
            out.extend(check_formula(cb, w))
    elif name == "duality":
        for w in ws:
            out.append(check_duality(datum, w, bound))
    elif name == "similarity":
        sc = StructureConstants(cb)
        out.append(verify_similarity(sc, bound, max_N))
        out.append(verify_dhat_bar_relation(sc, bound, max_p))
        out.append(verify_degree_bounds(sc, bound, max_p))
        out.append(check_constant_positivity(sc, bound, max_p))
    elif name == "crystal":
        for w in ws:
            if tuple(w) != cb.word:
                out.append(check_slice_independence(cb, w))
        out.append(check_crystal_axioms(cb))
        out.append(check_epsilon_steps(cb))
        out.append(check_saito(cb))
        out.append(check_embedding(cb))
    return out


def overall(reports: Sequence[Report]) -> bool:
    """True iff every asserted report passed."""
    return all(r.passed for r in reports if r.asserted)
