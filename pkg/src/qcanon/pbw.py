"""PBW bases of U_q(n^-) attached to reduced words of w_0.

For a reduced word ``i = (i_1, ..., i_N)`` the root vectors are

    X_k = T''_{i_1,1} ... T''_{i_{k-1},1}(F_{i_k})      (weight -beta^k)

and the PBW monomial of an exponent tuple ``c`` is the ordered product of
divided powers ``X_1^{(c_1)} ... X_N^{(c_N)}``, where the divided power of
``X_k`` uses ``q_{i_k}``.  The dual monomial is the rescaled plain power
product

    prod_k q_{i_k}^{c_k(c_k-1)/2} (1 - q_{i_k}^2)^{c_k}  X_1^{c_1} ... X_N^{c_N}

which pairs to the Kronecker delta against the PBW monomials.
"""
from __future__ import annotations

import json
import os
from functools import lru_cache
from typing import Dict, Sequence

from .errors import CapacityError, DomainError, IntegrityError
from .linalg import solve_exact
from .mixedalg import braid, from_neg, project_to_neg
from .qfield import (
    LaurentPoly,
    Scalar,
    ZERO,
    as_scalar,
    parse_scalar,
    quantum_factorial,
    render,
)
from .rootdata import (
    RootDatum,
    cartan_type,
    format_word,
    is_reduced_longest,
    positive_roots_of,
)
from .uqn import (
    NegElement,
    coordinate_vector,
    generator,
    one,
    weight_space,
)

__all__ = [
    "PbwBasis",
    "build_basis",
    "pbw_monomial",
    "dual_pbw_monomial",
    "expand",
    "exponent_tuples",
    "lex_greater",
    "CACHE_FORMAT_VERSION",
]

CACHE_FORMAT_VERSION = 1


def lex_greater(d: Sequence[int], c: Sequence[int]) -> bool:
    """Left-lexicographic order: d > c at the first differing position."""
    for a, b in zip(d, c):
        if a != b:
            return a > b
    return False


def exponent_tuples(betas: Sequence[tuple], grade: tuple) -> list:
    """All c >= 0 with sum c_k beta^k = grade, in increasing lex order."""
    N = len(betas)
    out = []
    rank = len(grade)

    def rec(k, rest, acc):
        if k == N:
            if not any(rest):
                out.append(tuple(acc))
            return
        b = betas[k]
        m = 0
        r = list(rest)
        while True:
            acc.append(m)
            rec(k + 1, tuple(r), acc)
            acc.pop()
            m += 1
            r = [x - y for x, y in zip(r, b)]
            if any(x < 0 for x in r):
                break

    if rank == 0:
        return [()]
    rec(0, tuple(grade), [])
    out.sort()
    return out


def _monomial_scalar(e: int) -> Scalar:
    return Scalar(LaurentPoly.monomial(e), None, _reduced=True)


class PbwBasis:
    """PBW basis for one reduced word, with per-weight caches.

    Per-weight data (exponent tuples, monomials, coordinate matrices, dual
    functionals) are computed on first use and memoized; ``precompute``
    fills every weight up to the height bound.
    """

    def __init__(self, datum: RootDatum, word: Sequence[int], height_bound: int,
                 root_vectors: Sequence[NegElement] | None = None):
        word = tuple(word)
        if height_bound < 0:
            raise DomainError("height bound must be non-negative")
        if not is_reduced_longest(datum, word):
            raise DomainError(f"{format_word(word)} is not a reduced word of w_0 in {datum}")
        self.datum = datum
        self.word = word
        self.height_bound = height_bound
        self.betas = positive_roots_of(datum, word)
        self.root_d = tuple(datum.d[i - 1] for i in word)
        if root_vectors is None:
            root_vectors = [_root_vector(datum, word, k) for k in range(len(word))]
        self.root_vectors = tuple(root_vectors)
        for k, x in enumerate(self.root_vectors):
            if x.grade != self.betas[k]:
                raise IntegrityError(f"root vector {k + 1} has the wrong weight")
        self._tuples: Dict[tuple, list] = {}
        self._plain: Dict[tuple, NegElement] = {}
        self._monomials: Dict[tuple, NegElement] = {}
        self._matrix: Dict[tuple, list] = {}
        self._dual: Dict[tuple, list] = {}

    @property
    def N(self) -> int:
        return len(self.word)

    def __repr__(self):
        return f"PbwBasis({self.datum}, ({format_word(self.word)}), bound={self.height_bound})"

    # -- weights ------------------------------------------------------------
    def check_grade(self, grade: tuple):
        if any(x < 0 for x in grade):
            raise DomainError(f"{grade} is not a non-negative weight")
        if sum(grade) > self.height_bound:
            raise CapacityError(
                f"weight of height {sum(grade)} exceeds the basis bound {self.height_bound}"
            )

    def grade_of(self, c: Sequence[int]) -> tuple:
        g = [0] * self.datum.rank
        for ck, b in zip(c, self.betas):
            if ck:
                for j, x in enumerate(b):
                    g[j] += ck * x
        return tuple(g)

    def tuples(self, grade: tuple) -> list:
        grade = tuple(grade)
        t = self._tuples.get(grade)
        if t is None:
            t = exponent_tuples(self.betas, grade)
            self._tuples[grade] = t
        return t

    def grades(self):
        """All grades of height <= bound, by height then reverse-lex."""
        out = []
        for h in range(self.height_bound + 1):
            out.extend(self.datum.weights_of_height(h))
        return out

    # -- monomials ----------------------------------------------------------
    def plain_monomial(self, c: Sequence[int]) -> NegElement:
        """X_1^{c_1} ... X_N^{c_N} (no divided powers)."""
        c = tuple(c)
        x = self._plain.get(c)
        if x is None:
            k = max((k for k, ck in enumerate(c) if ck), default=None)
            if k is None:
                x = one(self.datum)
            else:
                prev = list(c)
                prev[k] -= 1
                x = self.plain_monomial(prev) * self.root_vectors[k]
            self._plain[c] = x
        return x

    def divided_factor(self, c: Sequence[int]) -> LaurentPoly:
        """prod_k [c_k]_{i_k}!."""
        out = LaurentPoly.const(1)
        for ck, dk in zip(c, self.root_d):
            if ck > 1:
                out = out * quantum_factorial(ck, dk)
        return out

    def monomial(self, c: Sequence[int]) -> NegElement:
        c = tuple(c)
        x = self._monomials.get(c)
        if x is None:
            x = self.plain_monomial(c).scale(Scalar(LaurentPoly.const(1), self.divided_factor(c)))
            self._monomials[c] = x
        return x

    def dual_factor(self, d: Sequence[int]) -> Scalar:
        out = LaurentPoly.const(1)
        for dk, qk in zip(d, self.root_d):
            if dk:
                base = LaurentPoly(0, [1]) - LaurentPoly.monomial(2 * qk)
                out = out * base ** dk
                out = out.shift(qk * dk * (dk - 1) // 2)
        return Scalar.from_poly(out)

    def dual_monomial(self, d: Sequence[int]) -> NegElement:
        return self.plain_monomial(d).scale(self.dual_factor(d))

    # -- coordinate matrices -----------------------------------------------
    def coordinate_matrix(self, grade: tuple) -> list:
        """Rows: coordinate words; columns: PBW monomials (tuple order)."""
        grade = tuple(grade)
        m = self._matrix.get(grade)
        if m is None:
            self.check_grade(grade)
            cols = [coordinate_vector(self.monomial(c)) for c in self.tuples(grade)]
            m = [list(r) for r in zip(*cols)] if cols else []
            self._matrix[grade] = m
        return m

    def dual_functionals(self, grade: tuple) -> list:
        """For each tuple c, a vector phi_c with (F~^c, x) = phi_c . coords(x)."""
        grade = tuple(grade)
        f = self._dual.get(grade)
        if f is None:
            self.check_grade(grade)
            sp = weight_space(self.datum, grade)
            den = Scalar.from_poly(sp.form_denominator())
            f = []
            for c in self.tuples(grade):
                dual = self.dual_monomial(c)
                vec = [ZERO] * sp.dim_words
                for w, v in dual.terms.items():
                    vec[sp.index[w[::-1]]] = vec[sp.index[w[::-1]]] + v
                f.append([v / den if v else ZERO for v in vec])
            self._dual[grade] = f
        return f

    def precompute(self):
        for g in self.grades():
            self.coordinate_matrix(g)
            self.dual_functionals(g)

    # -- expansion ----------------------------------------------------------
    def expand_dual(self, x: NegElement) -> Dict[tuple, Scalar]:
        """PBW coordinates of x via pairing with the dual monomials."""
        if x.is_formally_zero():
            return {}
        self.check_grade(x.grade)
        coords = coordinate_vector(x)
        out = {}
        for c, phi in zip(self.tuples(x.grade), self.dual_functionals(x.grade)):
            acc = ZERO
            for a, b in zip(phi, coords):
                if a and b:
                    acc = acc + a * b
            if acc:
                out[c] = acc
        return out

    def expand_solve(self, x: NegElement) -> Dict[tuple, Scalar]:
        """PBW coordinates of x by exact elimination on the coordinate matrix."""
        if x.is_formally_zero():
            return {}
        self.check_grade(x.grade)
        m = self.coordinate_matrix(x.grade)
        tuples = self.tuples(x.grade)
        if not tuples:
            if not x.is_zero():
                raise IntegrityError("nonzero element in an empty weight space")
            return {}
        sol = solve_exact(m, coordinate_vector(x))
        return {c: v for c, v in zip(tuples, sol) if v}

    def expand(self, x: NegElement, method: str = "dual") -> Dict[tuple, Scalar]:
        if method == "dual":
            return self.expand_dual(x)
        if method == "solve":
            return self.expand_solve(x)
        if method == "both":
            a = self.expand_dual(x)
            b = self.expand_solve(x)
            if a != b:
                raise IntegrityError("the two PBW expansion routes disagree")
            return a
        raise ValueError(f"unknown expansion method {method!r}")

    def element(self, coeffs: Dict[tuple, object]) -> NegElement:
        """sum coeffs[c] F^c as a NegElement."""
        out = None
        for c, v in coeffs.items():
            v = as_scalar(v)
            if not v:
                continue
            t = self.monomial(c).scale(v)
            out = t if out is None else out + t
        if out is None:
            return NegElement.zero(self.datum)
        return out

    # -- serialization ----------------------------------------------------
    def to_json(self) -> dict:
        weights = {}
        for g in sorted(self._matrix):
            weights[",".join(map(str, g))] = {
                "tuples": [list(c) for c in self.tuples(g)],
                "matrix": [[render(v) for v in row] for row in self._matrix[g]],
            }
        return {
            "format": "qcanon-pbw",
            "version": CACHE_FORMAT_VERSION,
            "type": self.datum.type_label,
            "word": list(self.word),
            "bound": self.height_bound,
            "root_vectors": [
                {format_word(w) if w else "": render(c) for w, c in sorted(x.terms.items())}
                for x in self.root_vectors
            ],
            "weights": weights,
        }

    @classmethod
    def from_json(cls, data: dict) -> "PbwBasis":
        if data.get("format") != "qcanon-pbw" or data.get("version") != CACHE_FORMAT_VERSION:
            raise DomainError("PBW cache has an incompatible format version")
        datum = cartan_type(data["type"])
        rvs = []
        for rv in data["root_vectors"]:
            terms = {tuple(int(a) for a in w.split(",")) if w else (): parse_scalar(c)
                     for w, c in rv.items()}
            rvs.append(NegElement(datum, terms))
        basis = cls(datum, data["word"], data["bound"], root_vectors=rvs)
        for key, entry in data["weights"].items():
            g = tuple(int(a) for a in key.split(","))
            if [list(c) for c in basis.tuples(g)] != entry["tuples"]:
                raise DomainError("PBW cache tuples do not match")
            basis._matrix[g] = [[parse_scalar(v) for v in row] for row in entry["matrix"]]
        return basis


def _root_vector(datum: RootDatum, word: tuple, k: int) -> NegElement:
    """T''_{i_1,1} ... T''_{i_{k},1}(F_{i_{k+1}}) (0-based k), applied inside out."""
    return _root_vector_cached(datum, word[: k + 1])


@lru_cache(maxsize=None)
def _root_vector_cached(datum: RootDatum, prefix: tuple) -> NegElement:
    if len(prefix) == 1:
        return generator(datum, prefix[0])
    # T''_{i_1} applied to the root vector of the shorter prefix
    inner = _root_vector_cached(datum, prefix[1:])
    img = braid(from_neg(inner), prefix[0], "T''", 1)
    return project_to_neg(img)


# ---------------------------------------------------------------------------
# functional interface

_REGISTRY: Dict[tuple, PbwBasis] = {}


def build_basis(datum: RootDatum, word: Sequence[int], height_bound: int,
                cache_dir: str | None = None) -> PbwBasis:
    """PBW basis for ``word`` (memoized per (type, word, bound))."""
    key = (datum, tuple(word), height_bound)
    basis = _REGISTRY.get(key)
    if basis is not None:
        return basis
    # a basis with a larger bound serves smaller requests' root vectors
    rvs = None
    for (d2, w2, b2), other in _REGISTRY.items():
        if d2 == datum and w2 == tuple(word):
            rvs = other.root_vectors
            break
    path = _cache_path(cache_dir, datum, word, height_bound) if cache_dir else None
    if path and os.path.exists(path):
        try:
            with open(path) as fh:
                basis = PbwBasis.from_json(json.load(fh))
        except (DomainError, ValueError, KeyError):
            basis = None
    if basis is None:
        basis = PbwBasis(datum, word, height_bound, root_vectors=rvs)
    _REGISTRY[key] = basis
    return basis


def _cache_path(cache_dir, datum, word, bound):
    name = f"pbw-{datum.type_label}-{'_'.join(map(str, word))}-h{bound}.json"
    return os.path.join(cache_dir, name)


def save_basis(basis: PbwBasis, cache_dir: str) -> str:
    os.makedirs(cache_dir, exist_ok=True)
    path = _cache_path(cache_dir, basis.datum, basis.word, basis.height_bound)
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(basis.to_json(), fh, indent=1, sort_keys=True)
    os.replace(tmp, path)
    return path


def pbw_monomial(basis: PbwBasis, c: Sequence[int]) -> NegElement:
    return basis.monomial(c)


def dual_pbw_monomial(basis: PbwBasis, d: Sequence[int]) -> NegElement:
    return basis.dual_monomial(d)


def expand(basis: PbwBasis, x: NegElement, method: str = "dual") -> Dict[tuple, Scalar]:
    return basis.expand(x, method)
