"""Canonical basis slices, crystal operators and Saito reflections.

Canonical basis elements are found inside one weight space of a PBW basis
as the unique bar-invariant elements

    G = F^c + sum_{c' after c} p_{c'} F^{c'},   p_{c'} in q Z[q].

Writing bar(F^c) = sum A_{c,c'} F^{c'} (A unitriangular), the
coefficients satisfy  p_e - bar(p_e) = sum_{c <= d < e} bar(p_d) A_{d,e},
and p_e is the part of the right-hand side with positive exponents.

Crystal labels are Lusztig data with respect to a fixed reference word
(the first reduced word of w_0 in lexicographic order).
"""
from __future__ import annotations

import heapq
import json
import logging
import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from .errors import CapacityError, DomainError, IntegrityError
from .pbw import PbwBasis, build_basis, lex_greater
from .qfield import LaurentPoly, Scalar, ONE, ZERO, as_scalar, parse_scalar, render
from .rootdata import RootDatum, format_word, reference_word
from .uqn import (
    NegElement,
    bar_elem,
    i_string_decompose,
    kashiwara_op,
    star,
)

__all__ = [
    "CanonicalBasisSlice",
    "CrystalLabel",
    "CanonicalBasis",
    "canonical_slice",
    "crystal_step",
    "saito_reflect",
    "kashiwara_embed",
    "solve_bar_invariant",
    "mod_q_value",
    "SliceCache",
    "dump_canonical",
]

log = logging.getLogger(__name__)

SLICE_CACHE_VERSION = 1


# ---------------------------------------------------------------------------
# bar-invariant triangular solve (shared with the straightening engine)

def positive_part(p: LaurentPoly) -> LaurentPoly:
    if not p.coeffs or p.hi < 1:
        return LaurentPoly()
    if p.lo >= 1:
        return p
    return LaurentPoly(1, p.coeffs[1 - p.lo:])


def unitriangular_order(tuples: Sequence[tuple], bar_matrix: Dict[tuple, Dict[tuple, LaurentPoly]]):
    """An order in which ``bar_matrix`` is upper unitriangular.

    Left-lex order is tried first; otherwise a topological order of the
    support graph (ties broken lexicographically).  Returns (order, name).
    """
    for c in tuples:
        if bar_matrix[c].get(c) != LaurentPoly.const(1):
            raise IntegrityError(f"bar matrix has diagonal entry {bar_matrix[c].get(c)} at {c}")
    if all(not lex_greater(c, e) for c in tuples for e in bar_matrix[c]):
        return sorted(tuples), "left-lex"
    indeg = {c: 0 for c in tuples}
    for c in tuples:
        for e in bar_matrix[c]:
            if e != c:
                indeg[e] += 1
    heap = [c for c in tuples if indeg[c] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        c = heapq.heappop(heap)
        order.append(c)
        for e in bar_matrix[c]:
            if e != c:
                indeg[e] -= 1
                if indeg[e] == 0:
                    heapq.heappush(heap, e)
    if len(order) != len(tuples):
        raise IntegrityError("no unitriangular order exists for the bar matrix")
    return order, "topological"


def solve_bar_invariant(tuples: Sequence[tuple], bar_matrix):
    """Canonical elements in PBW coordinates.

    ``bar_matrix[c][e]`` is the coefficient of F^e in bar(F^c) (Laurent).
    Returns (order, order_name, {c: {e: p_{c,e}}}) with p_{c,c} = 1.
    """
    order, name = unitriangular_order(tuples, bar_matrix)
    pos = {c: k for k, c in enumerate(order)}
    result = {}
    for ci, c in enumerate(order):
        p = {c: LaurentPoly.const(1)}
        # acc[e] = sum over settled d of bar(p_d) A_{d,e}; pushed forward as p_d is fixed
        acc: Dict[tuple, LaurentPoly] = {}
        for e, a in bar_matrix[c].items():
            if e != c:
                acc[e] = a
        for e in order[ci + 1:]:
            r = acc.pop(e, None)
            if not r:
                continue
            if r.bar() != -r:
                raise IntegrityError(f"bar-invariance recursion is inconsistent at {c} -> {e}")
            if r.coeff(0) != 0 or not r.is_integral():
                raise IntegrityError(f"non-integral recursion value at {c} -> {e}")
            pe = positive_part(r)
            p[e] = pe
            pb = pe.bar()
            for f, a in bar_matrix[e].items():
                if f != e:
                    if pos[f] <= pos[e]:
                        raise IntegrityError("bar matrix is not triangular in the chosen order")
                    v = acc.get(f)
                    acc[f] = pb * a if v is None else v + pb * a
        if any(acc.values()):
            raise IntegrityError("bar matrix is not triangular in the chosen order")
        result[c] = {e: v for e, v in p.items() if v}
    return order, name, result


def mod_q_value(x: Scalar):
    """Value at q = 0 of a scalar regular there; None if it has a pole."""
    x = as_scalar(x)
    if not x:
        return 0
    if x.num.lo < 0:
        return None
    n0 = x.num.coeff(0)
    d0 = x.den.coeff(0)
    v = n0 / d0 if not isinstance(n0, int) or n0 % d0 else n0 // d0
    return v


# ---------------------------------------------------------------------------
# data types

@dataclass(frozen=True)
class CrystalLabel:
    """A point of B(infinity), named by its Lusztig datum.

    ``eps``, ``eps_star``, ``phi``, ``phi_star`` are tuples indexed by
    root index - 1.
    """

    lusztig_datum: tuple
    weight: tuple
    eps: tuple = field(compare=False)
    eps_star: tuple = field(compare=False)
    phi: tuple = field(compare=False)
    phi_star: tuple = field(compare=False)

    @property
    def grade(self) -> tuple:
        return tuple(-x for x in self.weight)

    def epsilon(self, i: int, starred: bool = False) -> int:
        return (self.eps_star if starred else self.eps)[i - 1]

    def varphi(self, i: int, starred: bool = False) -> int:
        return (self.phi_star if starred else self.phi)[i - 1]

    def __str__(self):
        return "(" + ",".join(map(str, self.lusztig_datum)) + ")"


@dataclass
class CanonicalBasisSlice:
    weight: tuple
    word: tuple
    labels: List[CrystalLabel]
    elements: Dict[tuple, NegElement]
    pbw_coords: Dict[tuple, Dict[tuple, Scalar]]
    order: List[tuple]
    order_name: str

    @property
    def grade(self) -> tuple:
        return tuple(-x for x in self.weight)

    def label(self, datum: tuple) -> CrystalLabel:
        for b in self.labels:
            if b.lusztig_datum == tuple(datum):
                return b
        raise KeyError(datum)

    def __len__(self):
        return len(self.labels)


# ---------------------------------------------------------------------------

def _leading(coords: Dict[tuple, Scalar]) -> tuple:
    return min(c for c, v in coords.items() if v)


def _string_position(x: NegElement, i: int) -> int:
    """max{n : x in F_i^n U}, read off the i-string decomposition."""
    parts = i_string_decompose(x, i)
    return parts[0][0] if parts else 0


class CanonicalBasis:
    """Canonical basis of U_q(n^-) up to a height bound.

    Slices are built on demand from the PBW basis of the reference word (or
    of another reduced word via ``slice_from``) and memoized.
    """

    def __init__(self, datum: RootDatum, height_bound: int, word: Sequence[int] | None = None,
                 cache: "SliceCache | None" = None):
        self.datum = datum
        self.height_bound = height_bound
        self.word = tuple(word) if word is not None else reference_word(datum)
        self.basis = build_basis(datum, self.word, height_bound)
        self.cache = cache
        self._slices: Dict[tuple, CanonicalBasisSlice] = {}
        self._steps: Dict[tuple, Optional[CrystalLabel]] = {}
        self.loaded = 0

    # -- slices -------------------------------------------------------------
    def slice(self, grade: tuple) -> CanonicalBasisSlice:
        grade = tuple(grade)
        s = self._slices.get(grade)
        if s is None:
            if self.cache is not None:
                s = self.cache.load(self, grade)
                if s is not None:
                    self.loaded += 1
            if s is None:
                s = self._build_slice(self.basis, grade)
            self._slices[grade] = s
        return s

    def save(self) -> int:
        """Write every computed reference slice to the cache; returns the count."""
        if self.cache is None:
            return 0
        n = 0
        for g in sorted(self._slices):
            n += self.cache.store(self._slices[g])
        self.cache.write_manifest(self.height_bound)
        return n

    def slice_from(self, basis: PbwBasis, grade: tuple) -> CanonicalBasisSlice:
        """Slice computed from another PBW basis (labels still reference data)."""
        if basis.word == self.word:
            return self.slice(grade)
        return self._build_slice(basis, tuple(grade))

    def _build_slice(self, basis: PbwBasis, grade: tuple) -> CanonicalBasisSlice:
        datum = self.datum
        basis.check_grade(grade)
        tuples = basis.tuples(grade)
        A = {}
        for c in tuples:
            row = basis.expand(bar_elem(basis.monomial(c)))
            clean = {}
            for e, v in row.items():
                if not v.is_laurent():
                    raise IntegrityError(f"bar matrix entry {v} is not Laurent")
                clean[e] = v.num
            A[c] = clean
        order, name, sol = solve_bar_invariant(tuples, A)
        labels = []
        elements = {}
        coords = {}
        for c in order:
            pc = {e: Scalar.from_poly(v) for e, v in sol[c].items()}
            g = basis.element(pc)
            if basis.word == self.word:
                ref = c
                ref_coords = pc
            else:
                ref_coords = self.basis.expand(g)
                ref = _leading(ref_coords)
                if ref_coords[ref] != ONE:
                    raise IntegrityError("canonical element is not unitriangular in the reference basis")
            sg = star(g)
            eps = tuple(_string_position(g, i) for i in datum.indices)
            eps_s = tuple(_string_position(sg, i) for i in datum.indices)
            wt = tuple(-x for x in grade)
            phi = tuple(e + datum.coroot_pairing(i, wt) for e, i in zip(eps, datum.indices))
            phi_s = tuple(e + datum.coroot_pairing(i, wt) for e, i in zip(eps_s, datum.indices))
            lab = CrystalLabel(ref, wt, eps, eps_s, phi, phi_s)
            labels.append(lab)
            elements[ref] = g
            coords[ref] = pc
        labels.sort(key=lambda b: b.lusztig_datum)
        return CanonicalBasisSlice(
            weight=tuple(-x for x in grade),
            word=basis.word,
            labels=labels,
            elements=elements,
            pbw_coords=coords,
            order=list(order),
            order_name=name,
        )

    def slices(self):
        for g in self.basis.grades():
            yield self.slice(g)

    def labels(self, max_height: int | None = None):
        h = self.height_bound if max_height is None else max_height
        out = []
        for g in self.basis.grades():
            if sum(g) <= h:
                out.extend(self.slice(g).labels)
        return out

    # -- label access --------------------------------------------------------
    def label_of(self, lusztig_datum: Sequence[int]) -> CrystalLabel:
        c = tuple(lusztig_datum)
        return self.slice(self.basis.grade_of(c)).label(c)

    def unit(self) -> CrystalLabel:
        return self.label_of((0,) * self.basis.N)

    def element(self, b: CrystalLabel) -> NegElement:
        return self.slice(b.grade).elements[b.lusztig_datum]

    def in_bound(self, grade) -> bool:
        return all(x >= 0 for x in grade) and sum(grade) <= self.height_bound

    # -- expansion in the canonical basis ----------------------------------
    def canonical_coords(self, x: NegElement) -> Dict[CrystalLabel, Scalar]:
        """x = sum a_b G(b); returns {b: a_b} (nonzero entries)."""
        if x.is_formally_zero():
            return {}
        if any(v < 0 for v in x.grade):
            if x.is_zero():
                return {}
            raise IntegrityError("element of negative grade")
        if not self.in_bound(x.grade):
            raise CapacityError(f"weight of height {sum(x.grade)} exceeds the bound {self.height_bound}")
        s = self.slice(x.grade)
        z = dict(self.basis.expand(x))
        out = {}
        for c in s.order:
            a = z.get(c, ZERO)
            if a:
                out[s.label(c)] = a
                for e, v in s.pbw_coords[c].items():
                    if e != c:
                        z[e] = z.get(e, ZERO) - a * v
        return out

    # -- crystal --------------------------------------------------------------
    def crystal_step(self, b: CrystalLabel, i: int, direction: str) -> Optional[CrystalLabel]:
        if direction not in ("e", "f", "e*", "f*"):
            raise DomainError(f"unknown crystal direction {direction!r}")
        key = (b.lusztig_datum, i, direction)
        if key in self._steps:
            return self._steps[key]
        starred = direction.endswith("*")
        kind = direction[0]
        if kind == "e" and b.epsilon(i, starred) == 0:
            self._steps[key] = None
            return None
        target = list(b.grade)
        target[i - 1] += 1 if kind == "f" else -1
        if not self.in_bound(target):
            raise CapacityError(
                f"crystal step {direction}_{i} from {b} leaves the height bound {self.height_bound}"
            )
        g = self.element(b)
        if starred:
            x = star(kashiwara_op(star(g), i, kind))
        else:
            x = kashiwara_op(g, i, kind)
        coeffs = self.canonical_coords(x)
        hit = None
        for lab, a in coeffs.items():
            v = mod_q_value(a)
            if v is None:
                raise IntegrityError(f"crystal step coefficient {a} has a pole at q = 0")
            if v == 1:
                if hit is not None:
                    raise IntegrityError("two canonical elements survive modulo q")
                hit = lab
            elif v != 0:
                raise IntegrityError(f"crystal step coefficient {a} is not 0 or 1 modulo q")
        if hit is None:
            raise IntegrityError(f"crystal step {direction}_{i} of {b} vanished modulo q")
        self._steps[key] = hit
        return hit

    def apply(self, b: CrystalLabel, i: int, direction: str, times: int) -> Optional[CrystalLabel]:
        for _ in range(times):
            if b is None:
                return None
            b = self.crystal_step(b, i, direction)
        return b

    def saito_reflect(self, b: CrystalLabel, i: int, direction: str = "inverse") -> CrystalLabel:
        """Lambda_i^{-1} (direction 'inverse', needs eps_i = 0) or Lambda_i ('forward')."""
        if direction == "inverse":
            if b.epsilon(i) != 0:
                raise DomainError(f"Lambda_{i}^-1 needs eps_{i}(b) = 0, got {b.epsilon(i)}")
            b0 = self.apply(b, i, "e*", b.epsilon(i, True))
            return self.apply(b0, i, "f", b.varphi(i, True))
        if direction == "forward":
            if b.epsilon(i, True) != 0:
                raise DomainError(f"Lambda_{i} needs eps*_{i}(b) = 0, got {b.epsilon(i, True)}")
            b0 = self.apply(b, i, "e", b.epsilon(i))
            return self.apply(b0, i, "f*", b.varphi(i))
        raise DomainError(f"unknown Saito direction {direction!r}")

    def kashiwara_embed(self, b: CrystalLabel, i: int):
        m = b.epsilon(i, True)
        return self.apply(b, i, "e*", m), -m


# ---------------------------------------------------------------------------
# disk cache

def _key(grade) -> str:
    return "_".join(map(str, grade))


class SliceCache:
    """One directory per (type, reference word); one JSON file per weight.

    A manifest records the format version and the largest bound written.
    Files from another version are ignored and the directory is rebuilt;
    ``stale`` records that this happened so callers can report it.  Only
    the process that owns the cache writes to it.
    """

    def __init__(self, root: str, datum: RootDatum, word: Sequence[int]):
        self.datum = datum
        self.word = tuple(word)
        self.path = os.path.join(root, f"{datum.type_label}-{'_'.join(map(str, self.word))}")
        self.stale = False
        self.manifest = self._read_manifest()

    def _read_manifest(self):
        mf = os.path.join(self.path, "manifest.json")
        if not os.path.exists(mf):
            return None
        try:
            with open(mf) as fh:
                data = json.load(fh)
        except ValueError:
            data = {}
        if data.get("version") != SLICE_CACHE_VERSION:
            log.info("slice cache %s has format version %s (expected %s); rebuilding",
                        self.path, data.get("version"), SLICE_CACHE_VERSION)
            self.stale = True
            for name in os.listdir(self.path):
                if name.startswith("slice-") or name == "manifest.json":
                    os.remove(os.path.join(self.path, name))
            return None
        return data

    def _file(self, grade) -> str:
        return os.path.join(self.path, f"slice-{_key(grade)}.json")

    def load(self, cb: CanonicalBasis, grade) -> Optional[CanonicalBasisSlice]:
        if self.manifest is None:
            return None
        path = self._file(grade)
        if not os.path.exists(path):
            return None
        with open(path) as fh:
            data = json.load(fh)
        if data.get("version") != SLICE_CACHE_VERSION or tuple(data["word"]) != cb.word:
            return None
        labels, elements, coords = [], {}, {}
        for entry in data["labels"]:
            c = tuple(entry["datum"])
            labels.append(CrystalLabel(c, tuple(data["weight"]), tuple(entry["eps"]),
                                       tuple(entry["eps_star"]), tuple(entry["phi"]),
                                       tuple(entry["phi_star"])))
            pc = {tuple(int(a) for a in k.split("_")): parse_scalar(v)
                  for k, v in entry["pbw"].items()}
            coords[c] = pc
            elements[c] = cb.basis.element(pc)
        return CanonicalBasisSlice(
            weight=tuple(data["weight"]),
            word=cb.word,
            labels=labels,
            elements=elements,
            pbw_coords=coords,
            order=[tuple(c) for c in data["order"]],
            order_name=data["order_name"],
        )

    def store(self, s: CanonicalBasisSlice) -> int:
        path = self._file(s.grade)
        if os.path.exists(path):
            return 0
        os.makedirs(self.path, exist_ok=True)
        data = {"version": SLICE_CACHE_VERSION, **slice_record(s)}
        tmp = path + ".tmp"
        with open(tmp, "w") as fh:
            json.dump(data, fh, sort_keys=True, indent=1)
        os.replace(tmp, path)
        return 1

    def write_manifest(self, bound: int):
        os.makedirs(self.path, exist_ok=True)
        old = self.manifest["bound"] if self.manifest else 0
        self.manifest = {
            "version": SLICE_CACHE_VERSION,
            "type": self.datum.type_label,
            "word": list(self.word),
            "bound": max(bound, old),
        }
        tmp = os.path.join(self.path, "manifest.json.tmp")
        with open(tmp, "w") as fh:
            json.dump(self.manifest, fh, sort_keys=True, indent=1)
        os.replace(tmp, os.path.join(self.path, "manifest.json"))


def slice_record(s: CanonicalBasisSlice) -> dict:
    """Plain-data form of a slice (rendered scalars, sorted keys)."""
    return {
        "weight": list(s.weight),
        "word": list(s.word),
        "order": [list(c) for c in s.order],
        "order_name": s.order_name,
        "labels": [
            {
                "datum": list(b.lusztig_datum),
                "eps": list(b.eps),
                "eps_star": list(b.eps_star),
                "phi": list(b.phi),
                "phi_star": list(b.phi_star),
                "pbw": {_key(e): render(v) for e, v in sorted(s.pbw_coords[b.lusztig_datum].items())},
            }
            for b in s.labels
        ],
    }


def dump_canonical(cb: CanonicalBasis, max_height: int | None = None) -> dict:
    """Every label up to ``max_height``: datum, weight, eps/eps*, PBW expansion."""
    h = cb.height_bound if max_height is None else max_height
    slices = []
    for g in cb.basis.grades():
        if sum(g) <= h:
            slices.append(slice_record(cb.slice(g)))
    return {
        "type": cb.datum.type_label,
        "reference_word": format_word(cb.word),
        "bound": h,
        "slices": slices,
    }


# ---------------------------------------------------------------------------
# the crystal B(infinity) x Z used to state the embedding

class EmbeddedCrystal:
    """Crystal structure on pairs (b', m) for a fixed index i."""

    def __init__(self, cb: CanonicalBasis, i: int):
        self.cb = cb
        self.i = i

    def wt(self, pair):
        b, m = pair
        w = list(b.weight)
        w[self.i - 1] += m
        return tuple(w)

    def epsilon(self, pair, j):
        b, m = pair
        if j == self.i:
            return max(b.epsilon(j), -m - self.cb.datum.coroot_pairing(j, b.weight))
        return b.epsilon(j)

    def varphi(self, pair, j):
        b, m = pair
        if j == self.i:
            return max(b.varphi(j) + 2 * m, m)
        return b.varphi(j) + m * self.cb.datum.cartan[j - 1][self.i - 1]

    def e(self, pair, j):
        b, m = pair
        if j != self.i or b.varphi(j) >= -m:
            b2 = self.cb.crystal_step(b, j, "e")
            return None if b2 is None else (b2, m)
        return (b, m + 1)

    def f(self, pair, j):
        b, m = pair
        if j != self.i or b.varphi(j) > -m:
            return (self.cb.crystal_step(b, j, "f"), m)
        return (b, m - 1)


# ---------------------------------------------------------------------------
# functional interface

_CONTEXTS: Dict[tuple, CanonicalBasis] = {}


def canonical_basis(datum: RootDatum, height_bound: int) -> CanonicalBasis:
    """Shared CanonicalBasis context per (type, bound)."""
    key = (datum, height_bound)
    cb = _CONTEXTS.get(key)
    if cb is None:
        cb = CanonicalBasis(datum, height_bound)
        _CONTEXTS[key] = cb
    return cb


def canonical_slice(basis: PbwBasis, mu: Sequence[int]) -> CanonicalBasisSlice:
    """Canonical basis elements of weight ``mu`` (a non-positive weight)."""
    grade = tuple(-x for x in mu)
    cb = canonical_basis(basis.datum, basis.height_bound)
    return cb.slice_from(basis, grade)


def crystal_step(cb: CanonicalBasis, b: CrystalLabel, i: int, direction: str):
    return cb.crystal_step(b, i, direction)


def saito_reflect(cb: CanonicalBasis, b: CrystalLabel, i: int, direction: str = "inverse"):
    return cb.saito_reflect(b, i, direction)


def kashiwara_embed(cb: CanonicalBasis, b: CrystalLabel, i: int):
    return cb.kashiwara_embed(b, i)
