"""Elements of U_q(n^-) as formal combinations of F-words.

A word ``(a_1, ..., a_n)`` stands for ``F_{a_1} ... F_{a_n}``.  Words obey
the quantum Serre relations, so the word expansion of an element is not
unique; equality is decided through the coordinates

    coord_u(x) = (e'_{u_1} o ... o e'_{u_l})(x)

taken over all words ``u`` of the right weight.  These separate points.

The twisted derivations act on a single word by deleting one letter::

    e'_i(F_{a_1}...F_{a_n})  = sum_{a_k = i} q^{-(alpha_i, alpha_{a_1}+...+alpha_{a_{k-1}})} (word without a_k)
    _ie'(F_{a_1}...F_{a_n}) = sum_{a_k = i} q^{-(alpha_i, alpha_{a_{k+1}}+...+alpha_{a_n})} (word without a_k)

which is the product rule e'_i(uv) = e'_i(u) v + q_i^{<wt u, alpha_i^vee>} u e'_i(v)
unrolled over letters.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import permutations
from typing import Dict, Sequence

from .qfield import (
    LaurentPoly,
    Scalar,
    ONE,
    ZERO,
    as_scalar,
    quantum_factorial,
    render,
)
from .qfield import _poly_gcd  # polynomial gcd on coefficient lists
from .rootdata import RootDatum

__all__ = [
    "NegElement",
    "WeightSpace",
    "weight_space",
    "derivation",
    "coordinates",
    "bilinear_form",
    "star",
    "bar_elem",
    "i_string_decompose",
    "kashiwara_op",
    "divided_power",
    "generator",
    "one",
]


def _grade_of(datum: RootDatum, word: Sequence[int]) -> tuple:
    v = [0] * datum.rank
    for a in word:
        v[a - 1] += 1
    return tuple(v)


class NegElement:
    """Homogeneous element of U_q(n^-) held as {word: Scalar}.

    ``grade`` is the positive lattice element nu with weight ``-nu``.
    Equality (``==``) is semantic, via coordinates.
    """

    __slots__ = ("datum", "terms", "grade")

    def __init__(self, datum: RootDatum, terms: Dict[tuple, object] | None = None,
                 grade: tuple | None = None, _trusted: bool = False):
        self.datum = datum
        if _trusted:
            self.terms = terms
        else:
            clean = {}
            for w, c in (terms or {}).items():
                c = as_scalar(c)
                if c:
                    clean[tuple(w)] = c
            self.terms = clean
        if grade is None:
            if self.terms:
                grade = _grade_of(datum, next(iter(self.terms)))
            else:
                grade = datum.zero()
        self.grade = tuple(grade)
        if not _trusted:
            for w in self.terms:
                if _grade_of(datum, w) != self.grade:
                    raise ValueError("NegElement terms are not homogeneous")

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, datum: RootDatum, grade=None) -> "NegElement":
        return cls(datum, {}, grade if grade is not None else datum.zero(), _trusted=True)

    @property
    def weight(self) -> tuple:
        return tuple(-x for x in self.grade)

    def is_formally_zero(self) -> bool:
        return not self.terms

    # -- linear structure -------------------------------------------------
    def _check(self, other):
        if self.datum != other.datum:
            raise ValueError("elements belong to different root data")

    def __add__(self, other: "NegElement") -> "NegElement":
        self._check(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        if self.grade != other.grade:
            raise ValueError("adding elements of different weights")
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w)
            s = c if s is None else s + c
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        return NegElement(self.datum, out, self.grade, _trusted=True)

    def __neg__(self):
        return NegElement(self.datum, {w: -c for w, c in self.terms.items()},
                          self.grade, _trusted=True)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "NegElement":
        c = as_scalar(c)
        if not c:
            return NegElement.zero(self.datum, self.grade)
        if c == ONE:
            return self
        return NegElement(self.datum, {w: v * c for w, v in self.terms.items()},
                          self.grade, _trusted=True)

    def __rmul__(self, c):
        if isinstance(c, NegElement):
            return c.__mul__(self)
        return self.scale(c)

    def __mul__(self, other):
        if not isinstance(other, NegElement):
            return self.scale(other)
        self._check(other)
        grade = tuple(a + b for a, b in zip(self.grade, other.grade))
        out: Dict[tuple, Scalar] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                c = c1 * c2
                s = out.get(w)
                out[w] = c if s is None else s + c
        out = {w: c for w, c in out.items() if c}
        return NegElement(self.datum, out, grade, _trusted=True)

    def __pow__(self, n: int) -> "NegElement":
        result = one(self.datum)
        for _ in range(n):
            result = result * self
        return result

    def map_coefficients(self, f) -> "NegElement":
        return NegElement(self.datum, {w: f(c) for w, c in self.terms.items()}, self.grade)

    # -- semantic equality ------------------------------------------------
    def is_zero(self) -> bool:
        if not self.terms:
            return True
        return not any(coordinate_vector(self))

    def __eq__(self, other):
        if isinstance(other, (int,)) and other == 0:
            return self.is_zero()
        if not isinstance(other, NegElement):
            return NotImplemented
        if self.datum != other.datum:
            return False
        if self.grade != other.grade:
            return self.is_zero() and other.is_zero()
        return (self - other).is_zero()

    __hash__ = None

    # -- rendering --------------------------------------------------------
    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms):
            word = ".".join(f"F{a}" for a in w) if w else "1"
            parts.append(f"({render(self.terms[w])}) {word}")
        return " + ".join(parts)

    def __repr__(self):
        return f"NegElement[{self.render()}]"


def one(datum: RootDatum) -> NegElement:
    return NegElement(datum, {(): ONE}, datum.zero(), _trusted=True)


def generator(datum: RootDatum, i: int) -> NegElement:
    return NegElement(datum, {(i,): ONE}, datum.simple_root(i), _trusted=True)


def divided_power(datum: RootDatum, i: int, n: int) -> NegElement:
    """F_i^{(n)} = F_i^n / [n]_i!."""
    if n < 0:
        raise ValueError("negative divided power")
    c = Scalar(LaurentPoly.const(1), quantum_factorial(n, datum.d[i - 1]))
    grade = tuple(n if k == i - 1 else 0 for k in range(datum.rank))
    return NegElement(datum, {(i,) * n: c}, grade, _trusted=True)


# ---------------------------------------------------------------------------
# derivations

def _delete_letter_terms(datum: RootDatum, word: tuple, i: int, side: str):
    """(exponent, shorter word) pairs for the derivation of a single word."""
    out = []
    n = len(word)
    if side == "right":
        acc = 0
        for k in range(n):
            a = word[k]
            if a == i:
                out.append((-acc, word[:k] + word[k + 1:]))
            acc += datum.form_matrix[i - 1][a - 1]
    else:
        acc = 0
        for k in range(n - 1, -1, -1):
            a = word[k]
            if a == i:
                out.append((-acc, word[:k] + word[k + 1:]))
            acc += datum.form_matrix[i - 1][a - 1]
    return out


def derivation(x: NegElement, i: int, side: str = "right") -> NegElement:
    """e'_i (side='right') or _ie' (side='left')."""
    if side not in ("right", "left"):
        raise ValueError("side must be 'right' or 'left'")
    datum = x.datum
    if x.grade[i - 1] == 0:
        grade = list(x.grade)
        grade[i - 1] -= 1
        return NegElement.zero(datum, tuple(grade))
    grade = list(x.grade)
    grade[i - 1] -= 1
    out: Dict[tuple, Scalar] = {}
    for w, c in x.terms.items():
        for e, v in _delete_letter_terms(datum, w, i, side):
            t = c.shift(e)
            s = out.get(v)
            out[v] = t if s is None else s + t
    out = {w: c for w, c in out.items() if c}
    return NegElement(datum, out, tuple(grade), _trusted=True)


def derivation_power(x: NegElement, i: int, p: int, side: str = "right") -> NegElement:
    for _ in range(p):
        x = derivation(x, i, side)
    return x


# ---------------------------------------------------------------------------
# weight spaces and coordinates

def _words_of_grade(grade: tuple) -> list:
    letters = []
    for k, m in enumerate(grade):
        letters.extend([k + 1] * m)
    return sorted(set(permutations(letters)))


class WeightSpace:
    """Words of one grade and their coordinate table.

    ``table[u][w]`` is coord_u of the single word w; rows are indexed by
    coordinate words, columns by carrier words, both in lexicographic order.
    """

    def __init__(self, datum: RootDatum, grade: tuple):
        self.datum = datum
        self.grade = tuple(grade)
        self.words = _words_of_grade(self.grade) if any(self.grade) else [()]
        self.index = {w: k for k, w in enumerate(self.words)}
        self._table = None

    @property
    def dim_words(self) -> int:
        return len(self.words)

    @property
    def table(self):
        if self._table is None:
            self._table = self._build()
        return self._table

    def _build(self):
        datum = self.datum
        if not any(self.grade):
            return [[LaurentPoly.const(1)]]
        rows = []
        # removal data per word: for each letter j, list of (exp, index in smaller space)
        smaller = {}
        for j in datum.indices:
            if self.grade[j - 1] > 0:
                g = list(self.grade)
                g[j - 1] -= 1
                smaller[j] = weight_space(datum, tuple(g))
        removal = {}
        for j, sp in smaller.items():
            per_word = []
            for w in self.words:
                per_word.append([(e, sp.index[v]) for e, v in
                                 _delete_letter_terms(datum, w, j, "right")])
            removal[j] = per_word
        for u in self.words:
            j = u[-1]
            sp = smaller[j]
            prev = sp.table[sp.index[u[:-1]]]
            row = []
            for terms in removal[j]:
                acc = {}
                for e, idx in terms:
                    p = prev[idx]
                    if p:
                        for ee, c in p.to_dict().items():
                            acc[ee + e] = acc.get(ee + e, 0) + c
                row.append(LaurentPoly.from_dict(acc))
            rows.append(row)
        return rows

    def coordinates_of_terms(self, terms: Dict[tuple, Scalar]) -> list:
        """Coordinate vector (aligned with ``self.words``) of a word combination."""
        if not terms:
            return [ZERO] * len(self.words)
        den, nums = common_denominator(list(terms.values()))
        cols = [(self.index[w], n) for w, n in zip(terms.keys(), nums)]
        table = self.table
        out = []
        for row in table:
            acc = None
            for idx, n in cols:
                p = row[idx]
                if p:
                    t = p * n
                    acc = t if acc is None else acc + t
            if acc is None or not acc:
                out.append(ZERO)
            elif den is None:
                out.append(Scalar(acc, None, _reduced=True))
            else:
                out.append(Scalar(acc, den))
        return out

    def form_denominator(self) -> LaurentPoly:
        """prod_i (1 - q_i^2)^{nu_i}."""
        out = LaurentPoly.const(1)
        for k, m in enumerate(self.grade):
            if m:
                base = LaurentPoly(0, [1]) - LaurentPoly.monomial(2 * self.datum.d[k])
                out = out * base ** m
        return out


@lru_cache(maxsize=None)
def weight_space(datum: RootDatum, grade: tuple) -> WeightSpace:
    return WeightSpace(datum, tuple(grade))


def common_denominator(values: Sequence[Scalar]):
    """(D, [v*D as LaurentPoly]) with D = None when all values are Laurent."""
    dens = []
    for v in values:
        if not v.is_laurent() and v.den not in dens:
            dens.append(v.den)
    if not dens:
        return None, [v.num for v in values]
    D = dens[0]
    for d in dens[1:]:
        g = LaurentPoly(0, _poly_gcd(list(D.coeffs), list(d.coeffs)))
        D = D * d.divexact(g)
    nums = []
    for v in values:
        if v.is_laurent():
            nums.append(v.num * D)
        else:
            nums.append(v.num * D.divexact(v.den))
    return D, nums


def coordinate_vector(x: NegElement) -> list:
    return weight_space(x.datum, x.grade).coordinates_of_terms(x.terms)


def coordinates(x: NegElement) -> Dict[tuple, Scalar]:
    """All coordinates of x, keyed by coordinate word (lexicographic order)."""
    sp = weight_space(x.datum, x.grade)
    vec = sp.coordinates_of_terms(x.terms)
    return {u: c for u, c in zip(sp.words, vec)}


# ---------------------------------------------------------------------------
# bilinear form

def bilinear_form(x: NegElement, y: NegElement) -> Scalar:
    """Kashiwara's form: (1,1)=1, (F_i x, y) = (1-q_i^2)^{-1} (x, e'_i y)."""
    if x.datum != y.datum:
        raise ValueError("elements belong to different root data")
    if x.grade != y.grade or not x.terms or not y.terms:
        return ZERO
    sp = weight_space(x.datum, x.grade)
    coords = coordinate_vector(y)
    # (F_{a_1}..F_{a_n}, y) = D^{-1} (e'_{a_n} o ... o e'_{a_1})(y)
    total = ZERO
    for w, c in x.terms.items():
        v = coords[sp.index[w[::-1]]]
        if v:
            total = total + c * v
    if not total:
        return ZERO
    return total / Scalar.from_poly(sp.form_denominator())


# ---------------------------------------------------------------------------
# involutions

def star(x: NegElement) -> NegElement:
    """The anti-involution fixing every F_i: reverse every word."""
    return NegElement(x.datum, {w[::-1]: c for w, c in x.terms.items()}, x.grade,
                      _trusted=True)


def bar_elem(x: NegElement) -> NegElement:
    """The bar involution: q -> q^{-1} on coefficients, words fixed."""
    return NegElement(x.datum, {w: c.bar() for w, c in x.terms.items()}, x.grade,
                      _trusted=True)


# ---------------------------------------------------------------------------
# i-strings and Kashiwara operators

def derivation_depth(x: NegElement, i: int, side: str = "right") -> int:
    """max{n : (e'_i)^n x != 0} (or with _ie'); -1 for x = 0."""
    if x.is_zero():
        return -1
    n = 0
    y = x
    while True:
        y = derivation(y, i, side)
        if y.is_zero():
            return n
        n += 1


def i_string_decompose(x: NegElement, i: int) -> list:
    """[(n, u_n)] with x = sum F_i^{(n)} u_n and e'_i(u_n) = 0, n ascending."""
    datum = x.datum
    d = datum.d[i - 1]
    out = []
    rest = x
    while not rest.is_zero():
        N = derivation_depth(rest, i)
        u = derivation_power(rest, i, N).scale(Scalar.from_poly(
            LaurentPoly.monomial(d * N * (N - 1) // 2)))
        out.append((N, u))
        rest = rest - divided_power(datum, i, N) * u
    out.sort(key=lambda t: t[0])
    return out


def kashiwara_op(x: NegElement, i: int, direction: str) -> NegElement:
    """Kashiwara's operator e~_i (direction 'e') or f~_i ('f') on U_q(n^-)."""
    if direction not in ("e", "f"):
        raise ValueError("direction must be 'e' or 'f'")
    datum = x.datum
    grade = list(x.grade)
    grade[i - 1] += 1 if direction == "f" else -1
    result = NegElement.zero(datum, tuple(grade))
    for n, u in i_string_decompose(x, i):
        m = n + 1 if direction == "f" else n - 1
        if m < 0:
            continue
        result = result + divided_power(datum, i, m) * u
    return result
