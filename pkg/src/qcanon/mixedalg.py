"""Normal-ordered carrier F-word . K_mu . E-word for braid computations.

Only the relations between E's, F's and K's are imposed:

    K_mu F_j = q^{-(mu, alpha_j)} F_j K_mu
    K_mu E_j = q^{(mu, alpha_j)} E_j K_mu
    E_i F_j  = F_j E_i + delta_ij (K_{alpha_i} - K_{-alpha_i}) / (q_i - q_i^{-1})

so the F-half and the E-half stay free.  Serre relations are never used;
an F-combination produced here may be zero in U_q(n^-) without being
formally zero, which is why ``project_to_neg`` takes a zero test.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Callable, Dict

from .errors import IntegrityError
from .qfield import LaurentPoly, Scalar, ONE, as_scalar, quantum_factorial, render
from .rootdata import RootDatum

__all__ = ["MixedElement", "multiply", "braid", "project_to_neg", "from_neg"]


def _q(e: int) -> Scalar:
    return Scalar(LaurentPoly.monomial(e), None, _reduced=True)


def _add_into(out: dict, key, c):
    s = out.get(key)
    s = c if s is None else s + c
    if s:
        out[key] = s
    else:
        out.pop(key, None)


class MixedElement:
    """Combination of normal-ordered terms ``(f_word, k, e_word)``."""

    __slots__ = ("datum", "terms")

    def __init__(self, datum: RootDatum, terms: Dict[tuple, Scalar] | None = None):
        self.datum = datum
        self.terms = {t: as_scalar(c) for t, c in (terms or {}).items() if c}

    @classmethod
    def _make(cls, datum, terms):
        obj = object.__new__(cls)
        obj.datum = datum
        obj.terms = terms
        return obj

    # -- generators -------------------------------------------------------
    @classmethod
    def F(cls, datum, i):
        return cls._make(datum, {((i,), datum.zero(), ()): ONE})

    @classmethod
    def E(cls, datum, i):
        return cls._make(datum, {((), datum.zero(), (i,)): ONE})

    @classmethod
    def K(cls, datum, mu):
        return cls._make(datum, {((), tuple(mu), ()): ONE})

    @classmethod
    def one(cls, datum):
        return cls.K(datum, datum.zero())

    @classmethod
    def scalar(cls, datum, c):
        return cls._make(datum, {((), datum.zero(), ()): as_scalar(c)}) if c else cls(datum)

    # -- linear structure -------------------------------------------------
    def __add__(self, other):
        out = dict(self.terms)
        for t, c in other.terms.items():
            _add_into(out, t, c)
        return MixedElement._make(self.datum, out)

    def __neg__(self):
        return MixedElement._make(self.datum, {t: -c for t, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = as_scalar(c)
        if not c:
            return MixedElement(self.datum)
        return MixedElement._make(self.datum, {t: v * c for t, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, MixedElement):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, c):
        return self.scale(c)

    def is_formally_zero(self) -> bool:
        return not self.terms

    def weight(self):
        """Weight of the first term (all terms share it)."""
        for f, k, e in self.terms:
            w = [0] * self.datum.rank
            for a in f:
                w[a - 1] -= 1
            for a in e:
                w[a - 1] += 1
            return tuple(w)
        return self.datum.zero()

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (f, k, e) in sorted(self.terms):
            bits = [f"F{a}" for a in f]
            if any(k):
                kk = "+".join(f"{c}α{j + 1}" if c != 1 else f"α{j + 1}"
                              for j, c in enumerate(k) if c)
                bits.append(f"K[{kk}]")
            bits += [f"E{a}" for a in e]
            parts.append(f"({render(self.terms[(f, k, e)])}) " + (" ".join(bits) or "1"))
        return " + ".join(parts)

    def __repr__(self):
        return f"MixedElement[{self.render()}]"


# ---------------------------------------------------------------------------
# normal ordering

@lru_cache(maxsize=None)
def _e_past_f(datum: RootDatum, e_word: tuple, f_word: tuple):
    """Normal form of E-word . F-word as a tuple of ((f, k, e), Scalar)."""
    if not e_word or not f_word:
        return ((((f_word), datum.zero(), e_word), ONE),)
    i = e_word[-1]
    rest_e = e_word[:-1]
    di = datum.d[i - 1]
    inv = Scalar(LaurentPoly.const(1), LaurentPoly(-di, [-1] + [0] * (2 * di - 1) + [1]))
    # E_i . f = f E_i + sum_k [f_k = i] f[:k] (K_i - K_-i)/(q_i - q_i^{-1}) f[k+1:]
    pieces = [((f_word, datum.zero(), (i,)), ONE)]
    ai = datum.simple_root(i)
    mai = tuple(-x for x in ai)
    for k, a in enumerate(f_word):
        if a != i:
            continue
        tail = f_word[k + 1:]
        s = 0
        for b in tail:
            s += datum.form_matrix[i - 1][b - 1]
        short = f_word[:k] + tail
        # K_{±i} tail = q^{∓(alpha_i, wt_F(tail))} tail K_{±i}; wt_F(tail) = -sum alpha
        pieces.append(((short, ai, ()), inv * _q(-s)))
        pieces.append(((short, mai, ()), -(inv * _q(s))))
    out: dict = {}
    for (f2, k2, e2), c in pieces:
        # rest_e . f2 . K_k2 . e2
        for (f3, k3, e3), c3 in _e_past_f(datum, rest_e, f2):
            # e3 K_k2 = q^{-(k2, wt e3)} K_k2 e3 with wt e3 = +sum alpha
            s = 0
            for b in e3:
                s -= datum.form_simple(b, k2)
            key = (f3, tuple(x + y for x, y in zip(k3, k2)), e3 + e2)
            _add_into(out, key, c * c3 * _q(s))
    return tuple(out.items())


def _mul_terms(datum, t1, t2):
    f1, k1, e1 = t1
    f2, k2, e2 = t2
    out = {}
    for (f3, k3, e3), c in _e_past_f(datum, e1, f2):
        # k1 . f3 = q^{-(k1, sum alpha_f3)} f3 k1 ;  e3 . k2 = q^{-(k2, sum alpha_e3)} k2 e3
        s = 0
        for b in f3:
            s -= datum.form_simple(b, k1)
        for b in e3:
            s -= datum.form_simple(b, k2)
        k = tuple(a + b + cc for a, b, cc in zip(k1, k3, k2))
        _add_into(out, (f1 + f3, k, e3 + e2), c * _q(s))
    return out


def multiply(x: MixedElement, y: MixedElement) -> MixedElement:
    """Product in normal order."""
    datum = x.datum
    out: dict = {}
    for t1, c1 in x.terms.items():
        for t2, c2 in y.terms.items():
            for t, c in _mul_terms(datum, t1, t2).items():
                _add_into(out, t, c1 * c2 * c)
    return MixedElement._make(datum, out)


# ---------------------------------------------------------------------------
# braid symmetries

def _power(x: MixedElement, n: int) -> MixedElement:
    out = MixedElement.one(x.datum)
    for _ in range(n):
        out = multiply(out, x)
    return out


def _div_power(datum, gen, i, n):
    base = MixedElement.F(datum, i) if gen == "F" else MixedElement.E(datum, i)
    c = Scalar(LaurentPoly.const(1), quantum_factorial(n, datum.d[i - 1]))
    return _power(base, n).scale(c)


@lru_cache(maxsize=None)
def _generator_image(datum: RootDatum, gen: str, j: int, i: int, variant: str, eps: int):
    """Image of E_j or F_j under T'_{i,eps} / T''_{i,eps}."""
    di = datum.d[i - 1]
    ai = datum.simple_root(i)
    K_eps = MixedElement.K(datum, tuple(eps * x for x in ai))
    K_meps = MixedElement.K(datum, tuple(-eps * x for x in ai))
    Ei, Fi = MixedElement.E(datum, i), MixedElement.F(datum, i)
    if j == i:
        if variant == "T''":
            if gen == "E":
                return -multiply(Fi, K_eps)
            return -multiply(K_meps, Ei)
        if gen == "E":
            return -multiply(K_eps, Fi)
        return -multiply(Ei, K_meps)
    m = -datum.cartan[i - 1][j - 1]
    G = MixedElement.E(datum, j) if gen == "E" else MixedElement.F(datum, j)
    out = MixedElement(datum)
    for r in range(m + 1):
        s = m - r
        sign = -1 if r % 2 else 1
        if variant == "T''":
            if gen == "F":
                # sum (-1)^r q_i^{eps r} F_i^{(r)} F_j F_i^{(s)}
                term = multiply(multiply(_div_power(datum, "F", i, r), G), _div_power(datum, "F", i, s))
                c = _q(eps * r * di)
            else:
                # sum (-1)^r q_i^{-eps r} E_i^{(s)} E_j E_i^{(r)}
                term = multiply(multiply(_div_power(datum, "E", i, s), G), _div_power(datum, "E", i, r))
                c = _q(-eps * r * di)
        else:
            if gen == "E":
                # sum (-1)^r q_i^{eps r} E_i^{(r)} E_j E_i^{(s)}
                term = multiply(multiply(_div_power(datum, "E", i, r), G), _div_power(datum, "E", i, s))
                c = _q(eps * r * di)
            else:
                # sum (-1)^r q_i^{-eps r} F_i^{(s)} F_j F_i^{(r)}
                term = multiply(multiply(_div_power(datum, "F", i, s), G), _div_power(datum, "F", i, r))
                c = _q(-eps * r * di)
        out = out + term.scale(c * sign)
    return out


@lru_cache(maxsize=1 << 14)
def _term_image(datum, term, i, variant, eps):
    # callers only read .terms of the cached result
    f, k, e = term
    out = MixedElement.one(datum)
    for a in f:
        out = multiply(out, _generator_image(datum, "F", a, i, variant, eps))
    out = multiply(out, MixedElement.K(datum, datum.reflect(i, k)))
    for a in e:
        out = multiply(out, _generator_image(datum, "E", a, i, variant, eps))
    return out


def braid(x: MixedElement, i: int, variant: str = "T''", eps: int = 1) -> MixedElement:
    """Apply T'_{i,eps} (variant "T'") or T''_{i,eps} (variant "T''")."""
    if variant not in ("T'", "T''"):
        raise ValueError("variant must be \"T'\" or \"T''\"")
    if eps not in (1, -1):
        raise ValueError("eps must be +1 or -1")
    datum = x.datum
    out: dict = {}
    for t, c in x.terms.items():
        for t2, c2 in _term_image(datum, t, i, variant, eps).terms.items():
            _add_into(out, t2, c * c2)
    return MixedElement._make(datum, out)


# ---------------------------------------------------------------------------
# conversion to and from U_q(n^-)

def from_neg(x) -> MixedElement:
    """Embed a NegElement (pure F-words)."""
    datum = x.datum
    z = datum.zero()
    return MixedElement._make(datum, {(w, z, ()): c for w, c in x.terms.items()})


def project_to_neg(x: MixedElement, zero_oracle: Callable | None = None):
    """Extract the F-only part, checking every other group is a zero ghost.

    Terms are grouped by (K-part, E-word).  The group with trivial K and no
    E becomes the result; each remaining group's F-combination must be
    zero in U_q(n^-) according to ``zero_oracle`` (default: the coordinate
    test of ``uqn``).
    """
    from .uqn import NegElement

    datum = x.datum
    if zero_oracle is None:
        zero_oracle = lambda el: el.is_zero()
    groups: dict = {}
    for (f, k, e), c in x.terms.items():
        groups.setdefault((k, e), {})[f] = c
    z = datum.zero()
    main = groups.pop((z, ()), {})
    for (k, e), fs in sorted(groups.items()):
        el = NegElement(datum, fs)
        if not zero_oracle(el):
            raise IntegrityError(
                f"component with K{list(k)} E{list(e)} is not zero: {el.render()}"
            )
    return NegElement(datum, main)
