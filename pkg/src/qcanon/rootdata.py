"""Cartan data of finite type, Weyl group actions and reduced words.

Root indices are 1-based everywhere in the public interface, matching the
usual ``(1,2,1)`` notation for reduced words.  Weights of the root lattice
are plain integer tuples in the basis of simple roots.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import CapacityError, DomainError

__all__ = [
    "RootDatum",
    "Weight",
    "ReducedWord",
    "cartan_type",
    "longest_element_words",
    "positive_roots_of",
    "simple_reflection",
    "parse_word",
    "format_word",
    "MAX_RANK",
    "MAX_POSITIVE_ROOTS",
]

Weight = tuple
ReducedWord = tuple

MAX_RANK = 4
MAX_POSITIVE_ROOTS = 36


def _chain(n):
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        a[i][i] = 2
        if i + 1 < n:
            a[i][i + 1] = a[i + 1][i] = -1
    return a


def _cartan_and_lengths(family: str, n: int):
    """Cartan matrix a[i][j] = <alpha_i^vee, alpha_j> and squared lengths/2.

    Conventions: in B_n the root alpha_1 is the short one, in C_n alpha_1 is
    the long one, in G_2 alpha_1 is short, F_4 follows the Bourbaki labels.
    """
    if family == "A" and n >= 1:
        return _chain(n), [1] * n
    if family == "B" and n >= 2:
        a = _chain(n)
        a[0][1] = -2
        return a, [1] + [2] * (n - 1)
    if family == "C" and n >= 2:
        a = _chain(n)
        a[1][0] = -2
        return a, [2] + [1] * (n - 1)
    if family == "D" and n >= 4:
        a = _chain(n)
        a[n - 2][n - 1] = a[n - 1][n - 2] = 0
        a[n - 3][n - 1] = a[n - 1][n - 3] = -1
        return a, [1] * n
    if family == "E" and n in (6, 7, 8):
        a = [[0] * n for _ in range(n)]
        for i in range(n):
            a[i][i] = 2
        edges = [(1, 3), (3, 4), (4, 5), (2, 4)] + [(k, k + 1) for k in range(5, n)]
        for i, j in edges:
            a[i - 1][j - 1] = a[j - 1][i - 1] = -1
        return a, [1] * n
    if family == "F" and n == 4:
        a = _chain(4)
        a[2][1] = -2
        return a, [2, 2, 1, 1]
    if family == "G" and n == 2:
        return [[2, -3], [-1, 2]], [1, 3]
    raise DomainError(f"unsupported Cartan type {family}{n}")


def _num_positive_roots(family: str, n: int) -> int:
    return {
        "A": n * (n + 1) // 2,
        "B": n * n,
        "C": n * n,
        "D": n * (n - 1),
        "E": {6: 36, 7: 63, 8: 120}.get(n, 0),
        "F": 24,
        "G": 6,
    }[family]


@dataclass(frozen=True)
class RootDatum:
    """Finite-type root datum.

    ``cartan[i][j]`` is ``<alpha_{i+1}^vee, alpha_{j+1}>`` and ``d[i]`` is
    ``(alpha_{i+1}, alpha_{i+1}) / 2`` so that ``q_i = q^{d[i]}``.
    """

    type_label: str
    cartan: tuple
    d: tuple
    form_matrix: tuple = field(repr=False)

    @property
    def rank(self) -> int:
        return len(self.d)

    @property
    def indices(self) -> range:
        return range(1, self.rank + 1)

    # -- lattice arithmetic ---------------------------------------------
    def simple_root(self, i: int) -> Weight:
        v = [0] * self.rank
        v[i - 1] = 1
        return tuple(v)

    def zero(self) -> Weight:
        return (0,) * self.rank

    def form(self, mu: Sequence[int], nu: Sequence[int]) -> int:
        """Symmetric form (mu, nu) on the root lattice."""
        f = self.form_matrix
        total = 0
        for a, x in enumerate(mu):
            if x:
                row = f[a]
                for b, y in enumerate(nu):
                    if y:
                        total += x * y * row[b]
        return total

    def form_simple(self, i: int, nu: Sequence[int]) -> int:
        """(alpha_i, nu)."""
        row = self.form_matrix[i - 1]
        return sum(row[b] * y for b, y in enumerate(nu) if y)

    def coroot_pairing(self, i: int, mu: Sequence[int]) -> int:
        """<alpha_i^vee, mu>."""
        row = self.cartan[i - 1]
        return sum(row[b] * y for b, y in enumerate(mu) if y)

    def reflect(self, i: int, mu: Sequence[int]) -> Weight:
        """s_i(mu) = mu - <alpha_i^vee, mu> alpha_i."""
        p = self.coroot_pairing(i, mu)
        if p == 0:
            return tuple(mu)
        out = list(mu)
        out[i - 1] -= p
        return tuple(out)

    def reflect_word(self, word: Sequence[int], mu: Sequence[int]) -> Weight:
        """s_{w_1} ... s_{w_k}(mu) (rightmost reflection applied first)."""
        for i in reversed(word):
            mu = self.reflect(i, mu)
        return tuple(mu)

    def height(self, mu: Sequence[int]) -> int:
        return sum(mu)

    def add(self, mu, nu, scale: int = 1) -> Weight:
        return tuple(a + scale * b for a, b in zip(mu, nu))

    def is_short(self, i: int) -> bool:
        return self.d[i - 1] == min(self.d)

    # -- roots ------------------------------------------------------------
    def num_positive_roots(self) -> int:
        family, n = self.type_label[0], int(self.type_label[1:])
        return _num_positive_roots(family, n)

    def positive_roots(self) -> tuple:
        return _positive_roots(self)

    def weights_of_height(self, h: int) -> list:
        """All non-negative lattice points of height h (lexicographic)."""
        out = []

        def rec(k, left, acc):
            if k == self.rank - 1:
                out.append(tuple(acc + [left]))
                return
            for x in range(left, -1, -1):
                rec(k + 1, left - x, acc + [x])

        if self.rank == 0:
            return [()]
        rec(0, h, [])
        return sorted(out, reverse=True)

    def longest_image(self, i: int) -> int:
        """Index j with -w_0(alpha_i) = alpha_j."""
        return _longest_involution(self)[i - 1]

    def __str__(self):
        return self.type_label


@lru_cache(maxsize=None)
def _positive_roots(datum: RootDatum) -> tuple:
    seen = set()
    frontier = [datum.simple_root(i) for i in datum.indices]
    seen.update(frontier)
    while frontier:
        new = []
        for mu in frontier:
            for i in datum.indices:
                nu = datum.reflect(i, mu)
                if all(x >= 0 for x in nu) and nu not in seen:
                    seen.add(nu)
                    new.append(nu)
        frontier = new
    return tuple(sorted(seen, key=lambda r: (sum(r), r)))


@lru_cache(maxsize=None)
def _longest_involution(datum: RootDatum) -> tuple:
    word = next(_reduced_words(datum))
    out = []
    for i in datum.indices:
        img = datum.reflect_word(word, datum.simple_root(i))
        neg = tuple(-x for x in img)
        out.append(neg.index(1) + 1)
    return tuple(out)


@lru_cache(maxsize=None)
def cartan_type(label: str) -> RootDatum:
    """Parse a label such as ``A2``, ``B2`` or ``G2``."""
    label = label.strip().upper().replace("_", "")
    if len(label) < 2 or not label[1:].isdigit():
        raise DomainError(f"malformed Cartan type {label!r}")
    family, n = label[0], int(label[1:])
    a, lengths = _cartan_and_lengths(family, n)
    if n > MAX_RANK or _num_positive_roots(family, n) > MAX_POSITIVE_ROOTS:
        raise CapacityError(
            f"type {label} exceeds the supported size "
            f"(rank <= {MAX_RANK}, at most {MAX_POSITIVE_ROOTS} positive roots)"
        )
    form = tuple(tuple(lengths[i] * a[i][j] for j in range(n)) for i in range(n))
    for i in range(n):
        for j in range(n):
            if form[i][j] != form[j][i]:
                raise DomainError(f"Cartan matrix of {label} is not symmetrizable")
    return RootDatum(
        type_label=f"{family}{n}",
        cartan=tuple(tuple(r) for r in a),
        d=tuple(lengths),
        form_matrix=form,
    )


def _is_positive(mu) -> bool:
    return all(x >= 0 for x in mu)


def _reduced_words(datum: RootDatum) -> Iterator[tuple]:
    """Lexicographic enumeration of reduced words of w_0.

    The element built so far is tracked by the images of the simple roots
    under w (columns of its matrix).  Appending i is a length increase iff
    w(alpha_i) is positive, and every element lies below w_0, so a
    depth-first search never gets stuck.
    """
    n = datum.rank
    N = datum.num_positive_roots()
    start = tuple(datum.simple_root(i) for i in datum.indices)

    def act(images, mu):
        out = [0] * n
        for k, c in enumerate(mu):
            if c:
                img = images[k]
                for m in range(n):
                    out[m] += c * img[m]
        return tuple(out)

    def rec(images, word):
        if len(word) == N:
            yield tuple(word)
            return
        for i in datum.indices:
            if _is_positive(images[i - 1]):
                # w s_i: image of alpha_j is w(s_i alpha_j)
                new = tuple(act(images, datum.reflect(i, datum.simple_root(j)))
                            for j in datum.indices)
                word.append(i)
                yield from rec(new, word)
                word.pop()

    yield from rec(start, [])


def longest_element_words(datum: RootDatum, limit=None) -> list:
    """Reduced words of w_0 in lexicographic order (at most ``limit``)."""
    if datum.num_positive_roots() > MAX_POSITIVE_ROOTS:
        raise CapacityError(f"{datum} has too many positive roots")
    out = []
    for w in _reduced_words(datum):
        out.append(w)
        if limit is not None and limit != "all" and len(out) >= limit:
            break
    return out


@lru_cache(maxsize=None)
def reference_word(datum: RootDatum) -> tuple:
    """The first reduced word of w_0 in lexicographic order."""
    return next(_reduced_words(datum))


def is_reduced_longest(datum: RootDatum, word: Sequence[int]) -> bool:
    return len(word) == datum.num_positive_roots() and _is_reduced(datum, word)


def _is_reduced(datum: RootDatum, word: Sequence[int]) -> bool:
    # word is reduced iff every beta^k is a positive root
    for k in range(len(word)):
        beta = datum.reflect_word(word[:k], datum.simple_root(word[k]))
        if not _is_positive(beta):
            return False
    return True


def positive_roots_of(datum: RootDatum, word: Sequence[int]) -> tuple:
    """(beta^1, ..., beta^N) with beta^k = s_{i_1}...s_{i_{k-1}}(alpha_{i_k})."""
    word = tuple(word)
    for i in word:
        if not 1 <= i <= datum.rank:
            raise DomainError(f"root index {i} out of range for {datum}")
    betas = []
    for k in range(len(word)):
        beta = datum.reflect_word(word[:k], datum.simple_root(word[k]))
        if not _is_positive(beta):
            raise DomainError(f"word {format_word(word)} is not reduced")
        betas.append(beta)
    if len(set(betas)) != len(betas):
        raise DomainError(f"word {format_word(word)} is not reduced")
    return tuple(betas)


def simple_reflection(datum: RootDatum, i: int, mu: Sequence[int]) -> Weight:
    return datum.reflect(i, mu)


def rotate_word(datum: RootDatum, word: Sequence[int]) -> tuple:
    """(i_2, ..., i_N, i_1') with alpha_{i_1'} = -w_0(alpha_{i_1})."""
    word = tuple(word)
    return word[1:] + (datum.longest_image(word[0]),)


def parse_word(text: str, datum: RootDatum | None = None) -> tuple:
    """Parse ``"1,2,1"`` into ``(1, 2, 1)``."""
    try:
        word = tuple(int(t) for t in text.replace(" ", "").split(",") if t)
    except ValueError:
        raise DomainError(f"malformed reduced word {text!r}") from None
    if datum is not None:
        if not is_reduced_longest(datum, word):
            raise DomainError(
                f"{format_word(word)} is not a reduced word of the longest element of {datum}"
            )
    return word


def format_word(word: Sequence[int]) -> str:
    return ",".join(str(i) for i in word)
