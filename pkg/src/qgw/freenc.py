"""Graded quotients of free algebras on matrix-entry generators.

Generators are the ``N*N`` matrix entries (letters ``0 .. N*N-1``, row-major)
and optionally a central letter ``f`` (letter ``-1``). Words are tuples of
letters. The word order is degree first, then lexicographic in the letter
order, so ``f`` is the smallest letter.

All relations are homogeneous, so each graded piece is computed by exact
linear algebra; no rewriting system is needed. The quotient is built one
degree at a time in reduced coordinates: a degree-``d`` element is written as
a combination of ``u·x`` with ``u`` a normal word of degree ``d-1`` and ``x`` a
letter, and the ideal is cut out there. In each degree the pivot of a row is
its largest word, which makes the surviving (normal) words the standard words
for that order. With ``f`` present the commutators ``x f - f x`` are part of the
ideal, so normal words carry their ``f`` letters in front.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from .exactalg import (
    QF_ONE,
    QF_ZERO,
    QFrac,
    QMatrix,
    QScalar,
    Reducer,
    echelonize,
    frac_row_to_poly_row,
    kernel_vectors,
    poly_to_qscalar,
)

F_LETTER = -1

Word = tuple


def canonical(word: Sequence[int]) -> Word:
    """Move every ``f`` to the front (``f`` is central)."""
    nf = sum(1 for x in word if x == F_LETTER)
    if not nf:
        return tuple(word)
    return (F_LETTER,) * nf + tuple(x for x in word if x != F_LETTER)


def word_key(w: Word):
    return (len(w), w)


class Alphabet:
    """Matrix-entry generators ``X^i_j`` plus an optional central ``f``."""

    def __init__(self, N: int, has_f: bool = False, symbol: str = "T", size: int | None = None):
        self.N = N
        self.has_f = has_f
        self.symbol = symbol
        # size set: a plain alphabet x1..x_size instead of matrix entries
        self.size = size

    @classmethod
    def plain(cls, n: int, has_f: bool = False) -> "Alphabet":
        return cls(0, has_f, "x", size=n)

    @property
    def n_matrix(self) -> int:
        return self.N * self.N if self.size is None else self.size

    @property
    def matrix_letters(self) -> list[int]:
        return list(range(self.n_matrix))

    @property
    def letters(self) -> list[int]:
        return ([F_LETTER] if self.has_f else []) + self.matrix_letters

    def letter(self, i: int, j: int) -> int:
        return i * self.N + j

    def index(self, letter: int) -> tuple[int, int]:
        return divmod(letter, self.N)

    def name(self, letter: int) -> str:
        if letter == F_LETTER:
            return "f"
        if self.size is not None:
            return f"{self.symbol}{letter + 1}"
        i, j = divmod(letter, self.N)
        return f"{self.symbol}^{i + 1}_{j + 1}"

    def word_name(self, w: Word) -> str:
        return "*".join(self.name(x) for x in w) if w else "1"

    def with_f(self, has_f: bool = True) -> "Alphabet":
        return Alphabet(self.N, has_f, self.symbol, self.size)

    def renamed(self, symbol: str) -> "Alphabet":
        return Alphabet(self.N, self.has_f, symbol, self.size)

    def words(self, d: int) -> list[Word]:
        """Canonical words of degree ``d`` in increasing order."""
        out = []
        m = self.matrix_letters
        fmax = d if self.has_f else 0
        for a in range(fmax + 1):
            for tail in product(m, repeat=d - a):
                out.append((F_LETTER,) * a + tail)
        out.sort()
        return out

    def word_count(self, d: int) -> int:
        n = self.n_matrix
        if not self.has_f:
            return n ** d
        return sum(n ** k for k in range(d + 1))

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self._key() == other._key()

    def _key(self):
        return (self.N, self.has_f, self.symbol, self.size)

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"Alphabet(N={self.N}, has_f={self.has_f}, symbol={self.symbol!r})"


def _coef(x) -> QFrac:
    return QFrac.coerce(x)


class NCPoly:
    """Noncommutative polynomial: canonical word -> nonzero coefficient in Q(q)."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        t: dict = {}
        if terms:
            for w, c in terms.items():
                w = canonical(w)
                c = _coef(c)
                s = t.get(w)
                s = c if s is None else s + c
                if s:
                    t[w] = s
                else:
                    t.pop(w, None)
        self.terms = t

    @classmethod
    def _raw(cls, t: dict) -> "NCPoly":
        obj = cls.__new__(cls)
        obj.terms = t
        return obj

    @classmethod
    def word(cls, w: Sequence[int], coef=1) -> "NCPoly":
        return cls({tuple(w): coef})

    @classmethod
    def one(cls) -> "NCPoly":
        return cls({(): 1})

    @classmethod
    def zero(cls) -> "NCPoly":
        return cls._raw({})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degrees(self) -> set[int]:
        return {len(w) for w in self.terms}

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def component(self, d: int) -> "NCPoly":
        return NCPoly._raw({w: c for w, c in self.terms.items() if len(w) == d})

    def __add__(self, other: "NCPoly") -> "NCPoly":
        t = dict(self.terms)
        for w, c in other.terms.items():
            s = t.get(w)
            s = c if s is None else s + c
            if s:
                t[w] = s
            else:
                t.pop(w, None)
        return NCPoly._raw(t)

    def __neg__(self) -> "NCPoly":
        return NCPoly._raw({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "NCPoly") -> "NCPoly":
        return self + (-other)

    def scale(self, s) -> "NCPoly":
        s = _coef(s)
        if not s:
            return NCPoly.zero()
        return NCPoly._raw({w: c * s for w, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, NCPoly):
            return self.scale(other)
        t: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = canonical(w1 + w2)
                c = c1 * c2
                s = t.get(w)
                t[w] = c if s is None else s + c
        return NCPoly._raw({w: c for w, c in t.items() if c})

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.terms == other.terms

    def evaluate_at(self, q0) -> dict[Word, Fraction]:
        out = {}
        for w, c in self.terms.items():
            v = c.evaluate_at(q0)
            if v:
                out[w] = v
        return out

    def format(self, alphabet: Alphabet) -> str:
        if not self.terms:
            return "0"
        parts = [f"({c})*{alphabet.word_name(w)}" for w, c in sorted(self.terms.items(), key=lambda x: word_key(x[0]))]
        return " + ".join(parts)

    def __repr__(self):
        return f"NCPoly({len(self.terms)} terms)"


def gen(letter: int, coef=1) -> NCPoly:
    return NCPoly.word((letter,), coef)


class RelationSet:
    """Homogeneous relations over an alphabet, reduced to a linearly independent family per degree."""

    def __init__(self, alphabet: Alphabet, relations: Iterable[NCPoly]):
        self.alphabet = alphabet
        by_deg: dict[int, list[NCPoly]] = {}
        for r in relations:
            if r.is_zero():
                continue
            if not r.is_homogeneous():
                raise ValueError("relations must be homogeneous")
            by_deg.setdefault(r.degree(), []).append(r)
        self.relations: list[NCPoly] = []
        for d in sorted(by_deg):
            self.relations.extend(_independent(by_deg[d]))

    def degrees(self) -> list[int]:
        return sorted({r.degree() for r in self.relations})

    def of_degree(self, d: int) -> list[NCPoly]:
        return [r for r in self.relations if r.degree() == d]

    def min_degree(self) -> int:
        return min(self.degrees(), default=0)

    def extended(self, more: Iterable[NCPoly], alphabet: Alphabet | None = None) -> "RelationSet":
        return RelationSet(alphabet or self.alphabet, list(self.relations) + list(more))

    def __len__(self):
        return len(self.relations)


def _independent(polys: list[NCPoly]) -> list[NCPoly]:
    """Row-reduce homogeneous polys of one degree; return the reduced basis."""
    words = sorted({w for p in polys for w in p.terms}, reverse=True)
    col = {w: i for i, w in enumerate(words)}
    piv = echelonize(frac_row_to_poly_row({col[w]: c for w, c in p.terms.items()}) for p in polys)
    out = []
    for c in sorted(piv):
        out.append(NCPoly._raw({words[j]: QFrac(v) for j, v in piv[c].items()}))
    return out


# ---------------------------------------------------------------------------
# direct ideal slice
# ---------------------------------------------------------------------------


def ideal_slice(rels: RelationSet, d: int) -> tuple[list[Word], QMatrix]:
    """Degree-``d`` slice of the two-sided ideal, in the canonical word basis.

    Returns ``(words, M)``: ``words`` in decreasing order, ``M`` the reduced
    echelon form whose rows span ``{u·rho·v}``. Built directly from all
    placements of every relation; used as the independent route against the
    incremental construction in :func:`build_quotient`.
    """
    A = rels.alphabet
    words = sorted(A.words(d), reverse=True)
    col = {w: i for i, w in enumerate(words)}
    rows = []
    for rho in rels.relations:
        k = rho.degree()
        if k > d:
            continue
        for a in range(d - k + 1):
            for u in _raw_words(A, a):
                for v in _raw_words(A, d - k - a):
                    row: dict = {}
                    for w, c in rho.terms.items():
                        j = col[canonical(u + w + v)]
                        s = row.get(j)
                        row[j] = c if s is None else s + c
                    rows.append(row)
    piv = echelonize(frac_row_to_poly_row(r) for r in rows)
    pcols = sorted(piv)
    data = [[poly_to_qscalar(piv[c][j]) if j in piv[c] else QScalar() for j in range(len(words))] for c in pcols]
    return words, QMatrix(data, len(pcols), len(words))


def _raw_words(A: Alphabet, n: int) -> Iterable[Word]:
    if A.has_f:
        # f is central: only f-free placements plus f-powers in front are distinct after canonicalisation
        return sorted({canonical(w) for w in product(A.letters, repeat=n)})
    return product(A.matrix_letters, repeat=n)


# ---------------------------------------------------------------------------
# incremental graded quotient
# ---------------------------------------------------------------------------


class DegreeData:
    __slots__ = ("normal", "index", "cols", "colindex", "reducer", "word_count", "ideal_dim")

    def __init__(self, normal, cols=None, reducer=None, word_count=0):
        self.normal: list[Word] = normal
        self.index = {w: i for i, w in enumerate(normal)}
        self.cols: list[Word] = cols or []
        self.colindex = {w: i for i, w in enumerate(self.cols)}
        self.reducer: Reducer | None = reducer
        self.word_count = word_count
        self.ideal_dim = word_count - len(normal)


class DegreeOverflow(ValueError):
    pass


class GradedQuotient:
    """Degreewise quotient ``T<letters> / (relations)`` up to ``max_degree``."""

    def __init__(self, rels: RelationSet, max_degree: int):
        if max_degree < 0:
            raise ValueError("max_degree must be >= 0")
        self.rels = rels
        self.alphabet = rels.alphabet
        self.max_degree = max_degree
        A = self.alphabet
        self.letters = A.letters
        internal = [dict(r.terms) for r in rels.relations]
        if A.has_f:
            for x in A.matrix_letters:
                internal.append({(x, F_LETTER): QF_ONE, (F_LETTER, x): -QF_ONE})
        if any(len(w) < 2 for r in internal for w in r):
            raise ValueError("relations of degree < 2 are not supported")
        self._rels = internal
        self._rel_deg = [len(next(iter(r))) for r in internal]
        self._nf_cache: dict[Word, dict] = {}
        self.degrees: list[DegreeData] = []
        self.degrees.append(DegreeData([()], word_count=1))
        if max_degree >= 1:
            self.degrees.append(DegreeData(sorted((x,) for x in self.letters), word_count=A.word_count(1)))
        for d in range(2, max_degree + 1):
            self.degrees.append(self._build_degree(d))

    # construction ------------------------------------------------------------
    def _build_degree(self, d: int) -> DegreeData:
        prev = self.degrees[d - 1].normal
        cols = sorted((u + (x,) for u in prev for x in self.letters), reverse=True)
        colindex = {w: i for i, w in enumerate(cols)}
        rows = []
        for rho, k in zip(self._rels, self._rel_deg):
            if k > d:
                continue
            for u in self.degrees[d - k].normal:
                row: dict = {}
                for w, c in rho.items():
                    head = self._nf(u + w[:-1])
                    x = w[-1]
                    for v, cv in head.items():
                        j = colindex[v + (x,)]
                        t = cv * c
                        s = row.get(j)
                        row[j] = t if s is None else s + t
                rows.append(row)
        piv = echelonize(frac_row_to_poly_row(r) for r in rows)
        normal = sorted(cols[j] for j in range(len(cols)) if j not in piv)
        data = DegreeData(normal, cols, Reducer(piv), self.alphabet.word_count(d))
        return data

    def _nf(self, w: Word) -> dict:
        """Normal form of a raw word as ``{normal word: QFrac}``."""
        d = len(w)
        if d <= 1:
            return {w: QF_ONE}
        hit = self._nf_cache.get(w)
        if hit is not None:
            return hit
        if d >= len(self.degrees):
            raise DegreeOverflow(f"degree {d} exceeds the quotient cap {self.max_degree}")
        data = self.degrees[d]
        head = self._nf(w[:-1])
        x = w[-1]
        vec = {data.colindex[v + (x,)]: c for v, c in head.items()}
        red = data.reducer.reduce(vec)
        out = {data.cols[j]: c for j, c in red.items()}
        self._nf_cache[w] = out
        return out

    # queries -----------------------------------------------------------------
    def dims(self) -> list[int]:
        return [len(D.normal) for D in self.degrees]

    def dim(self, d: int) -> int:
        return len(self.degrees[d].normal)

    def normal_words(self, d: int) -> list[Word]:
        return list(self.degrees[d].normal)

    def word_count(self, d: int) -> int:
        return self.degrees[d].word_count

    def ideal_dim(self, d: int) -> int:
        return self.degrees[d].ideal_dim

    def _check_degree(self, d: int):
        if d > self.max_degree:
            raise DegreeOverflow(f"degree {d} exceeds the quotient cap {self.max_degree}")

    def reduce_word(self, w: Word) -> NCPoly:
        self._check_degree(len(w))
        return NCPoly._raw(dict(self._nf(tuple(w))))

    def normal_form(self, p: NCPoly) -> NCPoly:
        acc: dict = {}
        for w, c in p.terms.items():
            self._check_degree(len(w))
            for v, cv in self._nf(w).items():
                t = cv * c
                s = acc.get(v)
                acc[v] = t if s is None else s + t
        return NCPoly._raw({w: c for w, c in acc.items() if c})

    def multiply(self, a: NCPoly, b: NCPoly) -> NCPoly:
        if a.terms and b.terms:
            self._check_degree(a.degree() + b.degree())
        return self.normal_form(a * b)

    def coordinates(self, p: NCPoly, d: int) -> dict[int, QFrac]:
        """Coordinates of a degree-``d`` element in the normal-word basis (by index)."""
        idx = self.degrees[d].index
        nf = self.normal_form(p)
        out = {}
        for w, c in nf.terms.items():
            if len(w) != d:
                raise ValueError(f"element is not homogeneous of degree {d}")
            out[idx[w]] = c
        return out

    def from_coordinates(self, vec: dict, d: int) -> NCPoly:
        words = self.degrees[d].normal
        return NCPoly._raw({words[i]: QFrac.coerce(c) for i, c in vec.items() if c})

    def commutator(self, a: NCPoly, b: NCPoly) -> NCPoly:
        return self.normal_form(a * b - b * a)


def build_quotient(rels: RelationSet, max_degree: int) -> GradedQuotient:
    return GradedQuotient(rels, max_degree)


def normal_form(p: NCPoly, gq: GradedQuotient) -> NCPoly:
    return gq.normal_form(p)


def nc_multiply(a: NCPoly, b: NCPoly, gq: GradedQuotient) -> NCPoly:
    return gq.multiply(a, b)


def _poly_vec_to_ncpoly(vec: dict, words: list[Word]) -> NCPoly:
    return NCPoly._raw({words[i]: QFrac(p) for i, p in vec.items()})


def centralizer_basis(gq: GradedQuotient, d: int) -> list[NCPoly]:
    """Basis of degree-``d`` elements commuting with every generator in the quotient."""
    if d + 1 > gq.max_degree:
        raise DegreeOverflow(f"centralizer at degree {d} needs the quotient up to degree {d + 1}")
    basis = gq.degrees[d].normal
    gens = [x for x in gq.alphabet.matrix_letters]
    idx_next = gq.degrees[d + 1].index
    rows: dict = {}
    for b, w in enumerate(basis):
        for g in gens:
            com = {}
            for v, c in gq._nf(w + (g,)).items():
                com[v] = c
            for v, c in gq._nf((g,) + w).items():
                s = com.get(v)
                com[v] = -c if s is None else s - c
            for v, c in com.items():
                if c:
                    rows.setdefault((g, idx_next[v]), {})[b] = c
    vecs = kernel_vectors(rows.values(), len(basis))
    return [_poly_vec_to_ncpoly(v, basis) for v in vecs]


def span_rank(gq: GradedQuotient, elems: Iterable[NCPoly], d: int) -> int:
    """Rank over Q(q) of degree-``d`` elements of the quotient."""
    rows = [gq.coordinates(e, d) for e in elems]
    return len(echelonize(frac_row_to_poly_row(r) for r in rows if r))
