"""Structure constants, transition coefficients and their verification.

Two independent routes to the coefficients zeta_d of G(b) in a PBW basis:

* ``zeta_direct``: expand the word-level canonical element in the PBW basis.
* ``zeta_formula``: the product formula over chains
  b = b_0, b_1, ..., b_{N-1}, 1 with factors d-hat^{i_l, d_l}; each step
  peels the first letter of the word and rotates it to the end.

    Z(l, b) = q_i^{d(d-1)/2} sum_{b~ : eps_i(b~) = 0} dhat^{i,d}_{b,b~} Z(l+1, Lambda_i^{-1} b~)

  The chain leaves the word-level height bound (Saito reflections raise the
  height), so this route runs on the straightening engines of the rotated
  words; its only inputs from the word level are the root vectors and the
  root-vector products that seed each engine.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Dict, List, Sequence

from .canon import CanonicalBasis, CrystalLabel
from .errors import DomainError, IntegrityError
from .pbw import PbwBasis, build_basis, lex_greater
from .qfield import (
    LaurentPoly,
    Scalar,
    in_qZq,
    is_positive,
    quantum_binom,
    render,
    truncate_below,
)
from .rootdata import RootDatum, rotate_word
from .straighten import PbwAlgebra, engine
from .uqn import derivation_power, divided_power

__all__ = [
    "StructureConstants",
    "TransitionTable",
    "ProductFormula",
    "structure_constants",
    "zeta_direct",
    "zeta_formula",
    "transition_table",
    "check_row",
    "verify_similarity",
    "verify_dhat_bar_relation",
    "verify_degree_bounds",
    "Report",
]


def _laurent(x: Scalar, what: str) -> LaurentPoly:
    if not x.is_laurent():
        raise IntegrityError(f"{what} is not a Laurent polynomial: {render(x)}")
    return x.as_laurent()


# ---------------------------------------------------------------------------
# reports

@dataclass
class Report:
    """Outcome of one verification: what was checked, how often, and witnesses."""

    check: str
    params: dict
    passed: bool = True
    count: int = 0
    asserted: bool = True
    failures: list = field(default_factory=list)
    measured: dict = field(default_factory=dict)
    seconds: float = 0.0

    def fail(self, **witness):
        self.passed = False
        if len(self.failures) < 20:
            self.failures.append(witness)

    def as_dict(self) -> dict:
        return {
            "check": self.check,
            "params": self.params,
            "passed": self.passed,
            "asserted": self.asserted,
            "count": self.count,
            "failures": self.failures,
            "measured": self.measured,
        }

    def __str__(self):
        status = "pass" if self.passed else "FAIL"
        if not self.asserted:
            status += " (measured only)"
        return f"{self.check} {self.params}: {status} [{self.count} checked]"


# ---------------------------------------------------------------------------
# structure constants

class StructureConstants:
    """Rows of c, d and d-hat computed from the word-level canonical basis."""

    def __init__(self, cb: CanonicalBasis):
        self.cb = cb
        self.datum = cb.datum
        self._rows: Dict[tuple, Dict[CrystalLabel, LaurentPoly]] = {}

    def _row(self, kind: str, i: int, p: int, b: CrystalLabel):
        key = (kind, i, p, b.lusztig_datum)
        row = self._rows.get(key)
        if row is not None:
            return row
        g = self.cb.element(b)
        if kind == "c":
            x = divided_power(self.datum, i, p) * g
        elif kind == "dhat":
            x = derivation_power(g, i, p, "right")
        elif kind == "d":
            x = derivation_power(g, i, p, "left")
        else:
            raise DomainError(f"unknown structure constant {kind!r}")
        row = {lab: _laurent(v, f"{kind}-constant") for lab, v in self.cb.canonical_coords(x).items()}
        self._rows[key] = row
        return row

    def c(self, i: int, p: int, b: CrystalLabel):
        """{b~: c_{-pi,b}^{b~}} from F_i^{(p)} G(b)."""
        return self._row("c", i, p, b)

    def dhat(self, i: int, p: int, b: CrystalLabel):
        """{b~: dhat_{b,b~}^{i,p}} from (e'_i)^p G(b)."""
        return self._row("dhat", i, p, b)

    def d(self, i: int, p: int, b: CrystalLabel):
        """{b~: d_{b,b~}^{i,p}} from (_ie')^p G(b)."""
        return self._row("d", i, p, b)

    def star_label(self, b: CrystalLabel) -> CrystalLabel:
        """The label of *G(b)."""
        from .uqn import star

        coords = self.cb.canonical_coords(star(self.cb.element(b)))
        if len(coords) != 1:
            raise IntegrityError("* does not map a canonical element to a canonical element")
        (lab, v), = coords.items()
        if v != Scalar.from_poly(LaurentPoly.const(1)):
            raise IntegrityError("* rescales a canonical element")
        return lab


def structure_constants(cb: CanonicalBasis, i: int, p: int, b: CrystalLabel) -> dict:
    sc = StructureConstants(cb)
    return {"c": sc.c(i, p, b), "d": sc.d(i, p, b), "d_hat": sc.dhat(i, p, b)}


# ---------------------------------------------------------------------------
# transition coefficients

def zeta_direct(basis: PbwBasis, b: CrystalLabel, cb: CanonicalBasis) -> Dict[tuple, LaurentPoly]:
    """{d: zeta_d} by expanding G(b) in ``basis``."""
    return {d: _laurent(v, "transition coefficient")
            for d, v in basis.expand(cb.element(b)).items()}


class ProductFormula:
    """Evaluates the chain formula for one reduced word.

    Engines are kept for every rotation of the word; ``Z`` is memoized on
    (step, datum in that step's word, remaining exponents).
    """

    def __init__(self, datum: RootDatum, word: Sequence[int], reference: Sequence[int] | None = None):
        self.datum = datum
        self.word = tuple(word)
        self.N = len(self.word)
        words = [self.word]
        for _ in range(self.N):
            words.append(rotate_word(datum, words[-1]))
        self.words = words
        self.engines: List[PbwAlgebra] = [engine(datum, w) for w in words]
        self.reference = engine(datum, reference) if reference is not None else None
        self._Z: Dict[tuple, LaurentPoly] = {}
        self._dhat: Dict[tuple, dict] = {}
        self._saito: Dict[tuple, tuple] = {}
        self.stats = {"chains": 0, "saito": 0, "dhat_rows": 0}

    # -- pieces ------------------------------------------------------------
    def dhat_row(self, l: int, c: tuple, p: int) -> Dict[tuple, LaurentPoly]:
        """dhat^{i,p}_{b, .} in engine l (i its first letter), b with datum c."""
        key = (l, c, p)
        row = self._dhat.get(key)
        if row is None:
            E = self.engines[l]
            if p == 0:
                row = {c: LaurentPoly.const(1)}
            else:
                # e'_i^p only sees the first PBW slot; G(b) may still have
                # terms with first entry >= p even when c_1 < p
                x = E.e_prime_first(E.canonical(c), p)
                row = E.slice(self._lower(E, c, p)).expand(x) if x else {}
            self._dhat[key] = row
            self.stats["dhat_rows"] += 1
        return row

    def _lower(self, E: PbwAlgebra, c: tuple, p: int) -> tuple:
        g = list(E.grade_of(c))
        g[E.word[0] - 1] -= p
        return tuple(g)

    def saito_inverse(self, l: int, c: tuple) -> tuple:
        """Lambda_i^{-1} of the element with datum c in engine l (needs c_1 = 0).

        Returns its datum in engine l + 1.  Computed through the crystal:
        f~_i^{phi*} (e~_i^*)^{eps*}, where e~_i^* lowers the last entry in
        engine l + 1 (whose last root is alpha_i) and f~_i raises the first
        entry in engine l.
        """
        key = (l, c)
        r = self._saito.get(key)
        if r is not None:
            return r
        if c[0] != 0:
            raise DomainError("Lambda_i^-1 needs eps_i = 0")
        E, F = self.engines[l], self.engines[l + 1]
        i = E.word[0]
        if F.betas[-1] != self.datum.simple_root(i):
            raise IntegrityError("rotated word does not end with the reflected root")
        c1 = E.crystal_datum(c, F)
        eps_star = c1[-1]
        e = F.crystal_datum(c1[:-1] + (0,), E)
        weight = tuple(-x for x in E.grade_of(c))
        phi_star = eps_star + self.datum.coroot_pairing(i, weight)
        if phi_star < 0:
            raise IntegrityError("negative phi* in a Saito reflection")
        r = E.crystal_datum((e[0] + phi_star,) + e[1:], F)
        self._saito[key] = r
        self.stats["saito"] += 1
        return r

    # -- the recursion -------------------------------------------------------
    def Z(self, l: int, c: tuple, tail: tuple) -> LaurentPoly:
        key = (l, c, tail)
        v = self._Z.get(key)
        if v is not None:
            return v
        if not tail:
            v = LaurentPoly.const(1) if not any(c) else LaurentPoly()
            self._Z[key] = v
            return v
        E = self.engines[l]
        i = E.word[0]
        di = self.datum.d[i - 1]
        p = tail[0]
        acc = LaurentPoly()
        for ct, dv in self.dhat_row(l, c, p).items():
            if ct[0] != 0:
                continue
            if len(tail) == 1:
                # the last factor is indexed by the unit label
                if not any(ct):
                    acc = acc + dv
                continue
            self.stats["chains"] += 1
            nxt = self.saito_inverse(l, ct)
            z = self.Z(l + 1, nxt, tail[1:])
            if z:
                acc = acc + dv * z
        v = acc.shift(di * p * (p - 1) // 2) if acc else acc
        self._Z[key] = v
        return v

    def datum_of(self, b) -> tuple:
        """Datum of b (a CrystalLabel for the reference word, or a tuple) in this word."""
        if isinstance(b, CrystalLabel):
            if self.reference is None:
                raise DomainError("no reference engine to translate labels")
            return self.reference.crystal_datum(b.lusztig_datum, self.engines[0])
        return tuple(b)

    def zeta(self, b, d: Sequence[int]) -> LaurentPoly:
        c = self.datum_of(b)
        d = tuple(d)
        if len(d) != self.N:
            raise DomainError("exponent tuple has the wrong length")
        if self.engines[0].grade_of(c) != self.engines[0].grade_of(d):
            return LaurentPoly()
        return self.Z(0, c, d)

    def row(self, b) -> Dict[tuple, LaurentPoly]:
        c = self.datum_of(b)
        E = self.engines[0]
        out = {}
        for d in E.tuples(E.grade_of(c)):
            v = self.Z(0, c, d)
            if v:
                out[d] = v
        return out


_FORMULAS: Dict[tuple, ProductFormula] = {}


def product_formula(datum: RootDatum, word: Sequence[int], reference: Sequence[int]) -> ProductFormula:
    key = (datum, tuple(word), tuple(reference))
    f = _FORMULAS.get(key)
    if f is None:
        f = ProductFormula(datum, word, reference)
        _FORMULAS[key] = f
    return f


def zeta_formula(basis: PbwBasis, b: CrystalLabel, d: Sequence[int], reference: Sequence[int]) -> LaurentPoly:
    """zeta_d^{G(b)} for ``basis.word`` by the chain formula."""
    return product_formula(basis.datum, basis.word, reference).zeta(b, d)


# ---------------------------------------------------------------------------
# tables

@dataclass
class TransitionTable:
    type_label: str
    word: tuple
    bound: int
    rows: Dict[tuple, Dict[tuple, LaurentPoly]]
    leading: Dict[tuple, tuple]
    provenance: Dict[tuple, str]
    agree: Dict[tuple, bool]
    formula_rows: Dict[tuple, Dict[tuple, LaurentPoly]] = field(default_factory=dict)


def transition_table(cb: CanonicalBasis, word: Sequence[int], routes: str = "both",
                     max_height: int | None = None) -> TransitionTable:
    """zeta rows for every label up to ``max_height`` by one or both routes."""
    if routes not in ("direct", "formula", "both"):
        raise DomainError(f"unknown route selection {routes!r}")
    datum = cb.datum
    word = tuple(word)
    h = cb.height_bound if max_height is None else max_height
    basis = build_basis(datum, word, cb.height_bound)
    pf = product_formula(datum, word, cb.word) if routes != "direct" else None
    rows, leading, prov, agree, frows = {}, {}, {}, {}, {}
    for b in cb.labels(h):
        direct = zeta_direct(basis, b, cb) if routes != "formula" else None
        formula = pf.row(b) if pf is not None else None
        row = direct if direct is not None else formula
        rows[b.lusztig_datum] = row
        if formula is not None:
            frows[b.lusztig_datum] = formula
        if pf is not None:
            leading[b.lusztig_datum] = pf.datum_of(b)
        else:
            leading[b.lusztig_datum] = min(row)
        if routes == "both":
            agree[b.lusztig_datum] = direct == formula
            prov[b.lusztig_datum] = "both"
        else:
            prov[b.lusztig_datum] = routes
    return TransitionTable(datum.type_label, word, h, rows, leading, prov, agree, frows)


# ---------------------------------------------------------------------------
# checks on rows

def check_row(row: Dict[tuple, LaurentPoly], leading: tuple | None = None) -> dict:
    """Unitriangularity, integrality and positivity of one zeta row."""
    if leading is None:
        leading = min(row) if row else None
    out = {"leading": leading, "unitriangular": True, "integral": True, "positive": True}
    if leading is None or row.get(leading) != LaurentPoly.const(1):
        out["unitriangular"] = False
    for d, v in row.items():
        if not v.is_integral():
            out["integral"] = False
        if not is_positive(v):
            out["positive"] = False
        if d != leading and (not lex_greater(d, leading) or not in_qZq(v)):
            out["unitriangular"] = False
    return out


# ---------------------------------------------------------------------------
# identities among structure constants

def verify_similarity(sc: StructureConstants, max_height: int, max_N: int) -> Report:
    """c_{-Ni,b}^{b^} and q_i^{d(d-1)/2} [eps_i(b^), N]_i dhat^{i,d}_{b, e~^{eps} b^}
    agree below degree -Delta_i (d - 1) N, where d = eps_i(b^) - N."""
    t0 = time.perf_counter()
    cb = sc.cb
    datum = sc.datum
    rep = Report("similarity", {"type": datum.type_label, "height": max_height, "N": max_N})
    labels = cb.labels(max_height)
    for b in labels:
        for i in datum.indices:
            di = datum.d[i - 1]
            for N in range(0, max_N + 1):
                target = list(b.grade)
                target[i - 1] += N
                if sum(target) > max_height:
                    continue
                crow = sc.c(i, N, b)
                for bh in cb.slice(tuple(target)).labels:
                    e = bh.epsilon(i)
                    if N > e:
                        continue
                    d = e - N
                    top = cb.apply(bh, i, "e", e)
                    lhs = crow.get(bh, LaurentPoly())
                    dh = sc.dhat(i, d, b).get(top, LaurentPoly())
                    rhs = (quantum_binom(e, N, di) * dh).shift(di * d * (d - 1) // 2)
                    m = -di * (d - 1) * N
                    rep.count += 1
                    if truncate_below(lhs, m) != truncate_below(rhs, m):
                        rep.fail(b=str(b), b_hat=str(bh), i=i, N=N, d=d,
                                 lhs=render(lhs), rhs=render(rhs), threshold=m)
    rep.seconds = time.perf_counter() - t0
    return rep


def verify_dhat_bar_relation(sc: StructureConstants, max_height: int, max_p: int) -> Report:
    """dhat_{b,b~} = d_{*b,*b~} and dhat = q_i^{p<wt b, a_i^v> + p(p+1)} bar(d)."""
    t0 = time.perf_counter()
    cb = sc.cb
    datum = sc.datum
    rep = Report("dhat-d relations", {"type": datum.type_label, "height": max_height, "p": max_p})
    star_of = {}
    for b in cb.labels(max_height):
        star_of[b] = sc.star_label(b)
    for b in cb.labels(max_height):
        for i in datum.indices:
            di = datum.d[i - 1]
            for p in range(0, min(max_p, b.grade[i - 1]) + 1):
                dh = sc.dhat(i, p, b)
                dd = sc.d(i, p, b)
                ds = sc.d(i, p, star_of[b])
                targets = set(dh) | set(dd) | {star_of[t] for t in ds}
                shift = di * (p * datum.coroot_pairing(i, b.weight) + p * (p + 1))
                for t in targets:
                    x = dh.get(t, LaurentPoly())
                    ts = star_of.get(t) or sc.star_label(t)
                    y = ds.get(ts, LaurentPoly())
                    z = dd.get(t, LaurentPoly()).bar().shift(shift)
                    rep.count += 1
                    if x != y:
                        rep.fail(identity="star", b=str(b), b_tilde=str(t), i=i, p=p,
                                 dhat=render(x), d_star=render(y))
                    if x != z:
                        rep.fail(identity="bar", b=str(b), b_tilde=str(t), i=i, p=p,
                                 dhat=render(x), twisted=render(z))
    rep.seconds = time.perf_counter() - t0
    return rep


def _in_shifted(v: LaurentPoly, lo: int) -> bool:
    """v in q^lo Z[q]."""
    return not v or (v.lo >= lo and v.is_integral())


def verify_degree_bounds(sc: StructureConstants, max_height: int, max_p: int) -> Report:
    """Leading terms and q q_i^{...} Z[q] memberships for every c and dhat entry."""
    t0 = time.perf_counter()
    cb = sc.cb
    datum = sc.datum
    rep = Report("degree bounds", {"type": datum.type_label, "height": max_height, "p": max_p})
    for b in cb.labels(max_height):
        for i in datum.indices:
            di = datum.d[i - 1]
            eb = b.epsilon(i)
            for p in range(0, max_p + 1):
                # F_i^{(p)} G(b)
                if sum(b.grade) + p <= max_height:
                    row = sc.c(i, p, b)
                    lead = cb.apply(b, i, "f", p)
                    for t, v in row.items():
                        rep.count += 1
                        if t == lead:
                            ok = v == quantum_binom(eb + p, p, di)
                        else:
                            et = t.epsilon(i)
                            ok = et > eb + p and _in_shifted(v, 1 - di * p * (et - p))
                        if not ok:
                            rep.fail(constant="c", b=str(b), b_tilde=str(t), i=i, p=p, value=render(v))
                    if lead not in row:
                        rep.fail(constant="c", b=str(b), i=i, p=p, missing=str(lead))
                # (e'_i)^p G(b)
                if p <= b.grade[i - 1]:
                    row = sc.dhat(i, p, b)
                    lead = cb.apply(b, i, "e", p) if p <= eb else None
                    for t, v in row.items():
                        rep.count += 1
                        if t == lead:
                            ok = v == LaurentPoly.monomial(di * (-p * eb + p * (p + 1) // 2))
                        else:
                            et = t.epsilon(i)
                            ok = et > eb - p and _in_shifted(v, 1 + di * (-p * et - p * (p - 1) // 2))
                        if not ok:
                            rep.fail(constant="dhat", b=str(b), b_tilde=str(t), i=i, p=p, value=render(v))
                    if lead is not None and lead not in row:
                        rep.fail(constant="dhat", b=str(b), i=i, p=p, missing=str(lead))
    rep.seconds = time.perf_counter() - t0
    return rep
