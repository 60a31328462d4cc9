"""Exact arithmetic over Q(q).

Two value types live here:

* ``LaurentPoly`` -- a finitely supported Laurent polynomial in ``q`` with
  rational (normally integer) coefficients, stored densely as a lowest
  exponent plus a coefficient tuple.
* ``Scalar`` -- a reduced quotient of Laurent polynomials.

Both are immutable and hashable.  Equality is structural because both are
kept in a canonical form.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Union

__all__ = [
    "LaurentPoly",
    "Scalar",
    "NonExactDivision",
    "Q",
    "ONE",
    "ZERO",
    "quantum_int",
    "quantum_binom",
    "quantum_factorial",
    "bar",
    "truncate_below",
    "is_positive",
    "is_laurent",
    "parse_laurent",
    "as_scalar",
]


class NonExactDivision(ArithmeticError):
    """Raised when a Laurent polynomial division leaves a remainder."""


def _num(c):
    # Keep integers as int; collapse integral fractions.
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _trimmed(lo: int, cs: list) -> "LaurentPoly":
    # coefficients already normalized by _num; strip zero ends
    start = 0
    n = len(cs)
    while start < n and not cs[start]:
        start += 1
    if start == n:
        return ZERO_POLY
    end = n
    while not cs[end - 1]:
        end -= 1
    return LaurentPoly._raw(lo + start, tuple(cs[start:end]))


class LaurentPoly:
    """Laurent polynomial ``sum c_k q^(lo + k)``.

    The coefficient tuple never has zero entries at either end, and the
    zero polynomial is ``lo == 0, coeffs == ()``.
    """

    __slots__ = ("lo", "coeffs", "_hash")

    def __init__(self, lo: int = 0, coeffs: Iterable = ()):
        cs = [_num(c) for c in coeffs]
        start = 0
        while start < len(cs) and cs[start] == 0:
            start += 1
        end = len(cs)
        while end > start and cs[end - 1] == 0:
            end -= 1
        if start == end:
            self.lo = 0
            self.coeffs = ()
        else:
            self.lo = lo + start
            self.coeffs = tuple(cs[start:end])
        self._hash = None

    @classmethod
    def _raw(cls, lo, coeffs):
        # trusted constructor: coeffs already trimmed
        obj = object.__new__(cls)
        obj.lo = lo
        obj.coeffs = coeffs
        obj._hash = None
        return obj

    @classmethod
    def from_dict(cls, d: dict) -> "LaurentPoly":
        d = {e: c for e, c in d.items() if c != 0}
        if not d:
            return ZERO_POLY
        lo, hi = min(d), max(d)
        return cls(lo, [d.get(e, 0) for e in range(lo, hi + 1)])

    @classmethod
    def const(cls, c) -> "LaurentPoly":
        return cls(0, (c,))

    @classmethod
    def monomial(cls, e: int, c=1) -> "LaurentPoly":
        return cls(e, (c,))

    # -- inspection -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    @property
    def hi(self) -> int:
        """Highest exponent (undefined for zero; returns lo - 1)."""
        return self.lo + len(self.coeffs) - 1

    def degree_range(self):
        if not self.coeffs:
            return None
        return self.lo, self.hi

    def to_dict(self) -> dict:
        return {self.lo + k: c for k, c in enumerate(self.coeffs) if c != 0}

    def coeff(self, e: int):
        k = e - self.lo
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return 0

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.coeffs)

    def is_constant(self) -> bool:
        return not self.coeffs or (self.lo == 0 and len(self.coeffs) == 1)

    def is_monomial(self) -> bool:
        return len(self.coeffs) == 1

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if type(other) is not LaurentPoly:
            if isinstance(other, (int, Fraction)):
                other = LaurentPoly.const(other)
            else:
                return NotImplemented
        if not other.coeffs:
            return self
        if not self.coeffs:
            return other
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        out = [0] * (hi - lo + 1)
        a = self.lo - lo
        for k, c in enumerate(self.coeffs):
            out[a + k] = c
        b = other.lo - lo
        for k, c in enumerate(other.coeffs):
            out[b + k] += c
        if self._frac() or other._frac():
            out = [_num(c) for c in out]
        return _trimmed(lo, out)

    def _frac(self) -> bool:
        for c in self.coeffs:
            if type(c) is not int:
                return True
        return False

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(self.lo, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if type(other) is not LaurentPoly and isinstance(other, (int, Fraction)):
            if other == 0:
                return ZERO_POLY
            return LaurentPoly._raw(self.lo, tuple(_num(c * other) for c in self.coeffs))
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return ZERO_POLY
        if len(other.coeffs) == 1:
            c0 = other.coeffs[0]
            if c0 == 1:
                return LaurentPoly._raw(self.lo + other.lo, self.coeffs)
            return LaurentPoly._raw(self.lo + other.lo,
                                    tuple(_num(c * c0) for c in self.coeffs))
        if len(self.coeffs) == 1:
            return other * self
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        oc = other.coeffs
        for k, c in enumerate(self.coeffs):
            if c:
                for m, d in enumerate(oc):
                    out[k + m] += c * d
        if self._frac() or other._frac():
            out = [_num(c) for c in out]
        return _trimmed(self.lo + other.lo, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a Laurent polynomial")
        result = ONE_POLY
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by q^k."""
        if not self.coeffs:
            return self
        return LaurentPoly._raw(self.lo + k, self.coeffs)

    def substitute_power(self, m: int) -> "LaurentPoly":
        """Substitute q -> q^m (m may be negative)."""
        if not self.coeffs:
            return self
        if m == 1:
            return self
        return LaurentPoly.from_dict({m * e: c for e, c in self.to_dict().items()})

    def bar(self) -> "LaurentPoly":
        if not self.coeffs:
            return self
        return LaurentPoly._raw(-self.hi, self.coeffs[::-1])

    def divexact(self, other: "LaurentPoly") -> "LaurentPoly":
        """Exact quotient; raises NonExactDivision on a remainder."""
        if not other.coeffs:
            raise ZeroDivisionError("division by zero Laurent polynomial")
        if not self.coeffs:
            return self
        if len(other.coeffs) == 1:
            c0 = other.coeffs[0]
            if c0 == 1:
                return LaurentPoly._raw(self.lo - other.lo, self.coeffs)
            return LaurentPoly(self.lo - other.lo, [_div(c, c0) for c in self.coeffs])
        n = len(self.coeffs)
        m = len(other.coeffs)
        if n < m:
            raise NonExactDivision
        rem = list(self.coeffs)
        lead = other.coeffs[-1]
        oc = other.coeffs
        quot = [0] * (n - m + 1)
        for k in range(n - m, -1, -1):
            c = rem[k + m - 1]
            if c == 0:
                continue
            t = _div(c, lead)
            quot[k] = t
            for j in range(m):
                rem[k + j] -= t * oc[j]
        if any(rem[: m - 1]):
            raise NonExactDivision
        return LaurentPoly(self.lo - other.lo, quot)

    # -- comparison -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.lo == other.lo and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return not self.coeffs
            return self.lo == 0 and self.coeffs == (other,)
        if isinstance(other, Scalar):
            return other == self
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            if self.lo == 0 and len(self.coeffs) <= 1:
                h = hash(self.coeffs[0]) if self.coeffs else 0
            else:
                h = hash((self.lo, self.coeffs))
            self._hash = h
        return h

    def __repr__(self):
        return f"LaurentPoly({render_laurent(self)!r})"

    def __str__(self):
        return render_laurent(self)


def _div(a, b):
    if isinstance(a, int) and isinstance(b, int):
        if a % b == 0:
            return a // b
        return Fraction(a, b)
    return _num(Fraction(a) / b)


ZERO_POLY = LaurentPoly._raw(0, ())
ONE_POLY = LaurentPoly._raw(0, (1,))
Q_POLY = LaurentPoly._raw(1, (1,))


# ---------------------------------------------------------------------------
# polynomial gcd helpers (ordinary polynomials, coefficient lists low->high)

def _content(cs):
    g = 0
    dens = 1
    for c in cs:
        if isinstance(c, Fraction):
            dens = dens * c.denominator // gcd(dens, c.denominator)
    ints = [int(c * dens) for c in cs]
    for c in ints:
        g = gcd(g, c)
    return ints, g


def _primitive(cs):
    """Scale a coefficient list to a primitive integer list."""
    ints, g = _content(cs)
    if g == 0:
        return ints
    return [c // g for c in ints]


def _poly_rem(a, b):
    # a, b integer lists (low->high), b nonzero; pseudo-remainder
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(a) - 1 >= db and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        la = a[-1]
        shift = len(a) - 1 - db
        a = [x * lb for x in a]
        for j in range(db + 1):
            a[shift + j] -= la * b[j]
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_gcd(a, b):
    """Primitive gcd of two integer coefficient lists (low->high)."""
    a = _primitive(a)
    b = _primitive(b)
    while a and a[-1] == 0:
        a.pop()
    while b and b[-1] == 0:
        b.pop()
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _poly_rem(a, b)
        a, b = b, (_primitive(r) if r else [])
    if not a:
        return [1]
    if a[-1] < 0:
        a = [-x for x in a]
    return a


class Scalar:
    """An element of Q(q) held as num/den with den normalized.

    Normal form: the denominator is an ordinary polynomial (lowest exponent
    0) with primitive integer coefficients and positive constant term, and
    it shares no factor with the numerator.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None, _reduced=False):
        if not isinstance(num, LaurentPoly):
            num = LaurentPoly.const(num)
        if den is None:
            den = ONE_POLY
        elif not isinstance(den, LaurentPoly):
            den = LaurentPoly.const(den)
        if not den.coeffs:
            raise ZeroDivisionError("Scalar with zero denominator")
        self._hash = None
        if _reduced or (den.lo == 0 and den.coeffs == (1,)):
            self.num, self.den = num, den
            return
        self.num, self.den = _normalize(num, den)

    # -- constructors -----------------------------------------------------
    @classmethod
    def from_poly(cls, p: LaurentPoly) -> "Scalar":
        return cls(p, ONE_POLY, _reduced=True)

    def is_zero(self) -> bool:
        return not self.num.coeffs

    def __bool__(self):
        return bool(self.num.coeffs)

    def is_laurent(self) -> bool:
        return self.den.lo == 0 and self.den.coeffs == (1,)

    def as_laurent(self) -> LaurentPoly:
        if not self.is_laurent():
            raise ValueError(f"{self} is not a Laurent polynomial")
        return self.num

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.den is other.den or self.den == other.den:
            if self.den.coeffs == (1,):
                return Scalar(self.num + other.num, ONE_POLY, _reduced=True)
            return Scalar(self.num + other.num, self.den)
        return Scalar(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.den.coeffs == (1,) and other.den.coeffs == (1,):
            return Scalar(self.num * other.num, ONE_POLY, _reduced=True)
        return Scalar(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if not self.num.coeffs:
            raise ZeroDivisionError("inverse of zero")
        return Scalar(self.den, self.num)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if other.num.is_monomial() and other.den.coeffs == (1,) and self.den.coeffs == (1,):
            c = other.num.coeffs[0]
            return Scalar(LaurentPoly(self.num.lo - other.num.lo,
                                      [_div(x, c) for x in self.num.coeffs]),
                          ONE_POLY, _reduced=True)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return _coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return Scalar(self.num ** n, self.den ** n, _reduced=True)

    def shift(self, k: int) -> "Scalar":
        return Scalar(self.num.shift(k), self.den, _reduced=True)

    def bar(self) -> "Scalar":
        if self.den.coeffs == (1,):
            return Scalar(self.num.bar(), ONE_POLY, _reduced=True)
        return Scalar(self.num.bar(), self.den.bar())

    # -- comparison -------------------------------------------------------
    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return False
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(self.num) if self.den.coeffs == (1,) else hash((self.num, self.den))
            self._hash = h
        return h

    def __repr__(self):
        return f"Scalar({str(self)!r})"

    def __str__(self):
        if self.is_laurent():
            return render_laurent(self.num)
        return f"({render_laurent(self.num)})/({render_laurent(self.den)})"


def _coerce(x):
    if isinstance(x, Scalar):
        return x
    if isinstance(x, LaurentPoly):
        return Scalar(x, ONE_POLY, _reduced=True)
    if isinstance(x, (int, Fraction)):
        return Scalar(LaurentPoly.const(x), ONE_POLY, _reduced=True)
    return NotImplemented


def as_scalar(x) -> Scalar:
    s = _coerce(x)
    if s is NotImplemented:
        raise TypeError(f"cannot interpret {x!r} as a scalar")
    return s


@lru_cache(maxsize=1 << 16)
def _normalize(num: LaurentPoly, den: LaurentPoly):
    if not num.coeffs:
        return ZERO_POLY, ONE_POLY
    # move the monomial part of den into num
    shift = -den.lo
    dc = list(den.coeffs)
    nc = list(num.coeffs)
    nlo = num.lo + shift
    if len(dc) > 1:
        g = _poly_gcd(nc, dc)
        if len(g) > 1:
            gp = LaurentPoly(0, g)
            nq = LaurentPoly(0, nc).divexact(gp)
            dq = LaurentPoly(0, dc).divexact(gp)
            nlo += nq.lo
            nc = list(nq.coeffs)
            dc = list(dq.coeffs)
            # dq may have gained a low-order monomial factor of zero? no:
            # dc[0] != 0 before division, so the quotient's constant term is nonzero.
    # scale den to a primitive integer polynomial with positive constant term
    lcm_den = 1
    for c in dc:
        if isinstance(c, Fraction):
            lcm_den = lcm_den * c.denominator // gcd(lcm_den, c.denominator)
    ints = [int(c * lcm_den) for c in dc]
    g = 0
    for c in ints:
        g = gcd(g, c)
    if ints[0] < 0:
        g = -g
    dints = [c // g for c in ints]
    factor = Fraction(lcm_den, g)
    if factor != 1:
        nc = [_num(c * factor) for c in nc]
    return LaurentPoly(nlo, nc), LaurentPoly(0, dints)


ZERO = Scalar(ZERO_POLY, ONE_POLY, _reduced=True)
ONE = Scalar(ONE_POLY, ONE_POLY, _reduced=True)
Q = Scalar(Q_POLY, ONE_POLY, _reduced=True)


# ---------------------------------------------------------------------------
# quantum numbers

@lru_cache(maxsize=None)
def _qint(n: int, step: int) -> LaurentPoly:
    # [n] evaluated at q^step
    if n == 0:
        return ZERO_POLY
    sign = 1 if n > 0 else -1
    m = abs(n)
    d = {}
    for k in range(m):
        e = step * (m - 1 - 2 * k)
        d[e] = d.get(e, 0) + sign
    return LaurentPoly.from_dict(d)


def _step_for(i, datum=None):
    if i is None:
        return 1
    if isinstance(i, int) and datum is None:
        # a bare integer is taken to be the exponent of q_i
        return i
    return datum.d[i - 1]


def quantum_int(n: int, i=None, datum=None) -> LaurentPoly:
    """[n] or [n]_i.

    ``i`` may be ``None`` (plain q), or the exponent ``d_i`` with
    ``q_i = q^{d_i}`` when no datum is given, or a 1-based root index
    together with a ``RootDatum``.
    """
    return _qint(n, _step_for(i, datum))


@lru_cache(maxsize=None)
def _qfact(n: int, step: int) -> LaurentPoly:
    out = ONE_POLY
    for k in range(1, n + 1):
        out = out * _qint(k, step)
    return out


def quantum_factorial(n: int, i=None, datum=None) -> LaurentPoly:
    if n < 0:
        raise ValueError("factorial of a negative integer")
    return _qfact(n, _step_for(i, datum))


@lru_cache(maxsize=None)
def _qbinom(n: int, k: int, step: int) -> LaurentPoly:
    if k == 0:
        return ONE_POLY
    top = ONE_POLY
    for j in range(k):
        top = top * _qint(n - j, step)
    return top.divexact(_qfact(k, step))


def quantum_binom(n: int, k: int, i=None, datum=None) -> LaurentPoly:
    """Gaussian binomial [n over k] (q -> q_i), by exact division."""
    if k < 0:
        raise ValueError("k must be non-negative")
    return _qbinom(n, k, _step_for(i, datum))


# ---------------------------------------------------------------------------
# free-function interface

def bar(x):
    """q -> q^{-1} on a LaurentPoly or Scalar."""
    if isinstance(x, (LaurentPoly, Scalar)):
        return x.bar()
    return as_scalar(x).bar()


def truncate_below(p, m: int) -> LaurentPoly:
    """Terms of ``p`` with exponent strictly below ``m``."""
    if isinstance(p, Scalar):
        p = p.as_laurent()
    if not p.coeffs:
        return p
    return LaurentPoly(p.lo, p.coeffs[: max(0, m - p.lo)])


def is_positive(p) -> bool:
    """True iff every coefficient is >= 0 (Laurent input required)."""
    if isinstance(p, Scalar):
        if not p.is_laurent():
            return False
        p = p.num
    return all(c >= 0 for c in p.coeffs)


def is_laurent(x) -> bool:
    if isinstance(x, LaurentPoly):
        return True
    return as_scalar(x).is_laurent()


def in_qZq(p) -> bool:
    """True iff ``p`` lies in q Z[q]."""
    if isinstance(p, Scalar):
        if not p.is_laurent():
            return False
        p = p.num
    return not p.coeffs or (p.lo >= 1 and p.is_integral())


def is_integral_laurent(x) -> bool:
    if isinstance(x, Scalar):
        return x.is_laurent() and x.num.is_integral()
    return x.is_integral()


# ---------------------------------------------------------------------------
# text form:  q^-1 + 2 + 3*q^2

def _render_coeff(c) -> str:
    return str(c)


def render_laurent(p: LaurentPoly) -> str:
    if not p.coeffs:
        return "0"
    parts = []
    for k, c in enumerate(p.coeffs):
        if c == 0:
            continue
        e = p.lo + k
        neg = c < 0
        a = -c if neg else c
        if e == 0:
            body = _render_coeff(a)
        else:
            mono = "q" if e == 1 else f"q^{e}"
            body = mono if a == 1 else f"{_render_coeff(a)}*{mono}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


def render(x) -> str:
    """Text form of a LaurentPoly or Scalar."""
    if isinstance(x, LaurentPoly):
        return render_laurent(x)
    return str(as_scalar(x))


_TERM = re.compile(
    r"^(?P<coef>\d+(?:/\d+)?)?(?:(?P<star>\*)?q(?:\^(?P<exp>-?\d+))?)?$"
)


def parse_laurent(text: str) -> LaurentPoly:
    """Parse the rendering grammar back into a LaurentPoly."""
    s = text.strip()
    if not s:
        raise ValueError("empty polynomial text")
    # tokenise into signed terms
    s = s.replace(" ", "")
    terms = []
    buf = ""
    for k, ch in enumerate(s):
        if ch in "+-" and k > 0 and s[k - 1] != "^":
            terms.append(buf)
            buf = ch
        else:
            buf += ch
    terms.append(buf)
    d = {}
    for t in terms:
        if not t:
            raise ValueError(f"malformed polynomial text: {text!r}")
        sign = 1
        if t[0] in "+-":
            sign = -1 if t[0] == "-" else 1
            t = t[1:]
        m = _TERM.match(t)
        if not m or not t:
            raise ValueError(f"malformed term {t!r} in {text!r}")
        coef = m.group("coef")
        has_q = "q" in t
        if coef is not None and has_q and not m.group("star"):
            raise ValueError(f"missing '*' in term {t!r}")
        c = Fraction(coef) if coef is not None else Fraction(1)
        e = int(m.group("exp")) if m.group("exp") is not None else (1 if has_q else 0)
        d[e] = d.get(e, 0) + sign * c
    return LaurentPoly.from_dict({e: _num(c) for e, c in d.items()})


def parse_scalar(text: str) -> Scalar:
    s = text.strip()
    if s.startswith("(") and ")/(" in s and s.endswith(")"):
        a, b = s[1:-1].split(")/(", 1)
        return Scalar(parse_laurent(a), parse_laurent(b))
    return Scalar.from_poly(parse_laurent(s))


ScalarLike = Union[Scalar, LaurentPoly, int, Fraction]
