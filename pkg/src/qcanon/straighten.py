"""PBW straightening: U_q(n^-) in divided-PBW coordinates of one reduced word.

An element is a dict {exponent tuple: LaurentPoly}.  Multiplication only
needs the products X_k X_j (j < k) of root vectors, which lie in the span
of monomials supported on positions j..k; these are computed once at word
level and then every product is straightened recursively:

    F^c X_j = [c_j + 1] F^{c + e_j}                  if c vanishes after j
    F^c X_j = [c_k]^{-1} F^{c - e_k} (X_k X_j)       k = last nonzero slot > j

All coefficients stay in Z[q, q^-1] (the divided PBW monomials span the
integral form), so every division is an exact Laurent division.

This lets canonical basis slices be computed at weights far beyond what
the word-coordinate carrier of ``uqn`` can reach.
"""
from __future__ import annotations

from typing import Dict, Sequence

from .canon import solve_bar_invariant
from .errors import IntegrityError
from .pbw import PbwBasis, build_basis, exponent_tuples
from .qfield import LaurentPoly, Scalar, quantum_factorial, quantum_int
from .rootdata import RootDatum, positive_roots_of
from .uqn import NegElement, bar_elem, star

__all__ = ["PbwAlgebra", "EngineSlice", "engine", "mod_q_image"]

ONE_P = LaurentPoly.const(1)


def _add(out: dict, key, v):
    s = out.get(key)
    s = v if s is None else s + v
    if s:
        out[key] = s
    else:
        out.pop(key, None)


def _laurent(x: Scalar, what: str) -> LaurentPoly:
    if not x.is_laurent():
        raise IntegrityError(f"{what} has non-Laurent coefficient {x}")
    return x.as_laurent()


def _divide(x: dict, p: LaurentPoly) -> dict:
    if p == ONE_P:
        return x
    return {c: v.divexact(p) for c, v in x.items()}


class EngineSlice:
    """Canonical basis of one weight in engine coordinates."""

    def __init__(self, grade, order, order_name, coords):
        self.grade = grade
        self.order = order
        self.order_name = order_name
        self.coords = coords  # {datum: {tuple: LaurentPoly}}

    def expand(self, x: dict) -> Dict[tuple, LaurentPoly]:
        """Canonical coordinates of x (engine PBW coordinates)."""
        z = dict(x)
        out = {}
        for c in self.order:
            a = z.get(c)
            if not a:
                continue
            out[c] = a
            for e, v in self.coords[c].items():
                _add(z, e, -(a * v))
        if z:
            raise IntegrityError("element is not in the span of the canonical slice")
        return out


class PbwAlgebra:
    """Straightening engine for one reduced word."""

    def __init__(self, datum: RootDatum, word: Sequence[int]):
        self.datum = datum
        self.word = tuple(word)
        self.N = len(self.word)
        self.betas = positive_roots_of(datum, self.word)
        self.root_d = tuple(datum.d[i - 1] for i in self.word)
        top = max(sum(b) for b in self.betas)
        self.basis: PbwBasis = build_basis(datum, self.word, 2 * top)
        self._comm: Dict[tuple, dict] = {}
        self._mul_root: Dict[tuple, dict] = {}
        self._bar: Dict[tuple, dict] = {}
        self._star: Dict[tuple, dict] = {}
        self._slices: Dict[tuple, EngineSlice] = {}
        self._conv: Dict[tuple, dict] = {}
        self._bar_roots = [self.express(bar_elem(x)) for x in self.basis.root_vectors]
        self._star_roots = [self.express(star(x)) for x in self.basis.root_vectors]

    def __repr__(self):
        return f"PbwAlgebra({self.datum}, {self.word})"

    # -- word-level bridge --------------------------------------------------
    def express(self, x: NegElement) -> dict:
        """Engine coordinates of a word-level element of small height."""
        return {c: _laurent(v, "PBW expansion") for c, v in self.basis.expand(x).items()}

    def root_vector(self, k: int) -> NegElement:
        return self.basis.root_vectors[k]

    def grade_of(self, c) -> tuple:
        return self.basis.grade_of(c)

    def tuples(self, grade) -> list:
        return exponent_tuples(self.betas, tuple(grade))

    # -- multiplication -------------------------------------------------------
    def _commutator(self, j: int, k: int) -> dict:
        """X_k X_j for j < k."""
        key = (j, k)
        r = self._comm.get(key)
        if r is None:
            x = self.basis.root_vectors[k] * self.basis.root_vectors[j]
            r = self.express(x)
            for e in r:
                if any(e[m] for m in range(j)) or any(e[m] for m in range(k + 1, self.N)):
                    raise IntegrityError(f"X_{k + 1} X_{j + 1} is not supported between the two roots")
            self._comm[key] = r
        return r

    def mul_root(self, c: tuple, j: int) -> dict:
        """F^c X_j."""
        key = (c, j)
        r = self._mul_root.get(key)
        if r is not None:
            return r
        k = -1
        for m in range(self.N - 1, -1, -1):
            if c[m]:
                k = m
                break
        if k <= j:
            c2 = list(c)
            c2[j] += 1
            r = {tuple(c2): quantum_int(c[j] + 1, self.root_d[j])}
        else:
            prev = list(c)
            prev[k] -= 1
            prev = tuple(prev)
            acc: dict = {}
            for e, v in self._commutator(j, k).items():
                for t, w in self.mul_mono(prev, e).items():
                    _add(acc, t, v * w)
            r = _divide(acc, quantum_int(c[k], self.root_d[k]))
        self._mul_root[key] = r
        return r

    def mul_mono(self, a: tuple, e: tuple) -> dict:
        """F^a F^e."""
        x = {a: ONE_P}
        den = ONE_P
        for m in range(self.N):
            for _ in range(e[m]):
                y: dict = {}
                for c, v in x.items():
                    for t, w in self.mul_root(c, m).items():
                        _add(y, t, v * w)
                x = y
            if e[m] > 1:
                den = den * quantum_factorial(e[m], self.root_d[m])
        return _divide(x, den)

    def mul(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for a, v in x.items():
            for e, w in y.items():
                vw = v * w
                for t, u in self.mul_mono(a, e).items():
                    _add(out, t, vw * u)
        return out

    # -- involutions ----------------------------------------------------------
    def bar_mono(self, c: tuple) -> dict:
        """bar(F^c) = bar(F^{c - e_k}) bar(X_k) / [c_k], k the last nonzero slot."""
        r = self._bar.get(c)
        if r is not None:
            return r
        k = max((m for m in range(self.N) if c[m]), default=None)
        if k is None:
            r = {c: ONE_P}
        else:
            prev = list(c)
            prev[k] -= 1
            r = _divide(self.mul(self.bar_mono(tuple(prev)), self._bar_roots[k]),
                        quantum_int(c[k], self.root_d[k]))
        self._bar[c] = r
        return r

    def bar(self, x: dict) -> dict:
        out: dict = {}
        for c, v in x.items():
            vb = v.bar()
            for t, w in self.bar_mono(c).items():
                _add(out, t, vb * w)
        return out

    def star_mono(self, c: tuple) -> dict:
        """*(F^c) = *(F^{c - e_k}) *(X_k) / [c_k], k the first nonzero slot."""
        r = self._star.get(c)
        if r is not None:
            return r
        k = min((m for m in range(self.N) if c[m]), default=None)
        if k is None:
            r = {c: ONE_P}
        else:
            prev = list(c)
            prev[k] -= 1
            r = _divide(self.mul(self.star_mono(tuple(prev)), self._star_roots[k]),
                        quantum_int(c[k], self.root_d[k]))
        self._star[c] = r
        return r

    def star(self, x: dict) -> dict:
        out: dict = {}
        for c, v in x.items():
            for t, w in self.star_mono(c).items():
                _add(out, t, v * w)
        return out

    # -- derivation along the first letter -------------------------------------
    def e_prime_first(self, x: dict, p: int) -> dict:
        """(e'_i)^p for i the first letter: F^c -> q_i^{-p(2c_1-p-1)/2} F^{c - p e_1}."""
        d = self.root_d[0]
        out = {}
        for c, v in x.items():
            if c[0] >= p:
                t = (c[0] - p,) + c[1:]
                out[t] = v.shift(-d * p * (2 * c[0] - p - 1) // 2)
        return out

    # -- canonical basis ------------------------------------------------------
    def slice(self, grade) -> EngineSlice:
        grade = tuple(grade)
        s = self._slices.get(grade)
        if s is None:
            tuples = self.tuples(grade)
            A = {c: self.bar_mono(c) for c in tuples}
            order, name, sol = solve_bar_invariant(tuples, A)
            s = EngineSlice(grade, order, name, sol)
            self._slices[grade] = s
        return s

    def canonical(self, c) -> dict:
        c = tuple(c)
        return self.slice(self.grade_of(c)).coords[c]

    @staticmethod
    def leading(x: dict) -> tuple:
        return min(x)

    # -- change of reduced word ---------------------------------------------
    def convert_mono(self, c: tuple, other: "PbwAlgebra") -> dict:
        """F^c of this engine in the coordinates of ``other``."""
        key = (other.word, c)
        r = self._conv.get(key)
        if r is not None:
            return r
        k = max((m for m in range(self.N) if c[m]), default=None)
        if k is None:
            r = {(0,) * other.N: ONE_P}
        else:
            prev = list(c)
            prev[k] -= 1
            rk = self._conv.get((other.word, "root", k))
            if rk is None:
                rk = other.express(self.basis.root_vectors[k])
                self._conv[(other.word, "root", k)] = rk
            r = _divide(other.mul(self.convert_mono(tuple(prev), other), rk),
                        quantum_int(c[k], self.root_d[k]))
        self._conv[key] = r
        return r

    def crystal_datum(self, c, other: "PbwAlgebra") -> tuple:
        """Lusztig datum for ``other`` of the crystal element with datum c here.

        PBW bases of all reduced words agree modulo q, so F^c converted to
        the other word is a single monomial modulo q.
        """
        c = tuple(c)
        if other.word == self.word:
            return c
        return mod_q_image(self.convert_mono(c, other))

    def convert(self, x: dict, other: "PbwAlgebra") -> dict:
        if other.word == self.word:
            return dict(x)
        out: dict = {}
        for c, v in x.items():
            for t, w in self.convert_mono(c, other).items():
                _add(out, t, v * w)
        return out


_ENGINES: Dict[tuple, PbwAlgebra] = {}


def engine(datum: RootDatum, word: Sequence[int]) -> PbwAlgebra:
    key = (datum, tuple(word))
    e = _ENGINES.get(key)
    if e is None:
        e = PbwAlgebra(datum, word)
        _ENGINES[key] = e
    return e


def mod_q_image(x: dict) -> tuple:
    """The unique tuple whose coefficient is 1 modulo q.

    ``x`` must lie in the Z[q]-span of the PBW monomials and be congruent
    to a single monomial modulo q; anything else is an integrity error.
    """
    hit = None
    for c, v in x.items():
        if v.lo < 0:
            raise IntegrityError(f"coefficient {v} at {c} has a pole at q = 0")
        v0 = v.coeff(0)
        if v0 == 1:
            if hit is not None:
                raise IntegrityError("two PBW monomials survive modulo q")
            hit = c
        elif v0 != 0:
            raise IntegrityError(f"coefficient {v} at {c} is not 0 or 1 modulo q")
    if hit is None:
        raise IntegrityError("element vanishes modulo q")
    return hit
