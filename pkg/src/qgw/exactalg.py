"""Exact scalars in the deformation parameter q and exact linear algebra over Q(q).

Two scalar types live here:

``QScalar``
    A Laurent polynomial in ``q`` with rational coefficients. This is the
    coefficient type of R-matrices, metric forms and defining relations.

``QFrac``
    An element of the fraction field Q(q). Normal forms in a quotient algebra
    are obtained by dividing by pivot entries, so the quotient machinery works
    over this field. Internally it is a reduced pair of ``flint.fmpz_poly``.

The elimination kernel is fraction-free: rows are kept as primitive integer
polynomial vectors and combined as ``a*r - b*p``. Denominators only appear
when a reduced row is read back as a rewriting rule.
"""
from __future__ import annotations

import heapq
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import flint

_ZPoly = flint.fmpz_poly
_ZERO_POLY = _ZPoly([])
_ONE_POLY = _ZPoly([1])


def _fmpq_to_fraction(x) -> Fraction:
    return Fraction(int(x.p), int(x.q))


def _poly_at_one(p: _ZPoly) -> tuple[int, int]:
    """Value and first derivative of an integer polynomial at q = 1."""
    val = 0
    der = 0
    for i, c in enumerate(p.coeffs()):
        c = int(c)
        val += c
        der += i * c
    return val, der


def _monomial_poly(k: int) -> _ZPoly:
    return _ZPoly([0] * k + [1])


class QScalar:
    """Laurent polynomial in ``q`` over the rationals.

    Stored as a map exponent -> nonzero ``Fraction``. Instances are immutable
    and hashable; equality is equality of term maps.
    """

    __slots__ = ("_t", "_h")

    def __init__(self, terms: dict | None = None):
        t = {}
        if terms:
            for e, c in terms.items():
                c = Fraction(c)
                if c:
                    t[int(e)] = c
        self._t = t
        self._h = None

    @classmethod
    def _raw(cls, t: dict) -> "QScalar":
        obj = cls.__new__(cls)
        obj._t = t
        obj._h = None
        return obj

    @classmethod
    def const(cls, c) -> "QScalar":
        return cls({0: c})

    @classmethod
    def monomial(cls, c, e: int) -> "QScalar":
        return cls({e: c})

    @classmethod
    def q(cls) -> "QScalar":
        return cls({1: 1})

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self) -> bool:
        return bool(self._t)

    def is_monomial(self) -> bool:
        return len(self._t) == 1

    def valuation(self) -> int:
        return min(self._t) if self._t else 0

    def degree(self) -> int:
        return max(self._t) if self._t else 0

    def term_count(self) -> int:
        return len(self._t)

    # arithmetic ------------------------------------------------------------
    def __add__(self, other):
        other = _as_qscalar(other)
        if other is NotImplemented:
            return NotImplemented
        if not other._t:
            return self
        if not self._t:
            return other
        t = dict(self._t)
        for e, c in other._t.items():
            s = t.get(e, 0) + c
            if s:
                t[e] = s
            else:
                t.pop(e, None)
        return QScalar._raw(t)

    __radd__ = __add__

    def __neg__(self):
        return QScalar._raw({e: -c for e, c in self._t.items()})

    def __sub__(self, other):
        other = _as_qscalar(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_qscalar(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, QFrac):
            return NotImplemented
        other = _as_qscalar(other)
        if other is NotImplemented:
            return NotImplemented
        if not self._t or not other._t:
            return ZERO
        t: dict[int, Fraction] = {}
        for e1, c1 in self._t.items():
            for e2, c2 in other._t.items():
                e = e1 + e2
                t[e] = t.get(e, 0) + c1 * c2
        return QScalar._raw({e: c for e, c in t.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def inverse(self) -> "QScalar":
        """Inverse of a unit; only monomials are units in Q[q, 1/q]."""
        if not self.is_monomial():
            raise ZeroDivisionError(f"{self} is not a unit of the Laurent ring")
        (e, c), = self._t.items()
        return QScalar._raw({-e: 1 / c})

    def __eq__(self, other):
        if isinstance(other, QScalar):
            return self._t == other._t
        if isinstance(other, (int, Fraction)):
            return self._t == ({0: Fraction(other)} if other else {})
        if isinstance(other, QFrac):
            return other == self
        return NotImplemented

    def __hash__(self):
        if self._h is None:
            self._h = hash(frozenset(self._t.items()))
        return self._h

    # specialization ----------------------------------------------------------
    def evaluate_at(self, q0) -> Fraction:
        q0 = Fraction(q0)
        if q0 == 0:
            raise ZeroDivisionError("a Laurent polynomial cannot be evaluated at q = 0")
        return sum((c * q0 ** e for e, c in self._t.items()), Fraction(0))

    def derivative_at_one(self) -> Fraction:
        return sum((c * e for e, c in self._t.items()), Fraction(0))

    def bar(self) -> "QScalar":
        """The involution q -> 1/q."""
        return QScalar._raw({-e: c for e, c in self._t.items()})

    # formatting --------------------------------------------------------------
    def __str__(self) -> str:
        if not self._t:
            return "0"
        return " + ".join(f"{c}*q^{e}" for e, c in sorted(self._t.items()))

    def __repr__(self) -> str:
        return f"QScalar({self})"

    @classmethod
    def parse(cls, s: str) -> "QScalar":
        """Inverse of ``str``: parses ``"c_k*q^k + ..."``."""
        s = s.strip()
        if s == "0":
            return ZERO
        t = {}
        for part in s.split(" + "):
            c, _, e = part.partition("*q^")
            t[int(e)] = t.get(int(e), 0) + Fraction(c)
        return cls(t)


def _as_qscalar(x):
    if isinstance(x, QScalar):
        return x
    if isinstance(x, (int, Fraction)):
        return QScalar._raw({0: Fraction(x)} if x else {})
    return NotImplemented


ZERO = QScalar()
ONE = QScalar({0: 1})
Q = QScalar({1: 1})


def qs(x) -> QScalar:
    """Coerce an int, Fraction or QScalar to QScalar."""
    out = _as_qscalar(x)
    if out is NotImplemented:
        raise TypeError(f"cannot coerce {type(x).__name__} to QScalar")
    return out


def laurent_to_poly(s: QScalar) -> tuple[_ZPoly, int, int]:
    """Write ``s = poly * q**shift / den`` with ``poly`` integral and ``q``-free at 0."""
    if not s._t:
        return _ZERO_POLY, 0, 1
    den = 1
    for c in s._t.values():
        den = den * c.denominator // _gcd(den, c.denominator)
    lo = min(s._t)
    hi = max(s._t)
    coeffs = [0] * (hi - lo + 1)
    for e, c in s._t.items():
        coeffs[e - lo] = int(c * den)
    return _ZPoly(coeffs), lo, den


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def poly_to_qscalar(p: _ZPoly, shift: int = 0, den: int = 1) -> QScalar:
    t = {}
    for i, c in enumerate(p.coeffs()):
        c = int(c)
        if c:
            t[i + shift] = Fraction(c, den)
    return QScalar._raw(t)


class QFrac:
    """Element of the fraction field Q(q), kept as a reduced ratio of integer polynomials.

    Canonical form: ``gcd(num, den) = 1`` in Z[q] and ``den`` has a positive
    leading coefficient. Zero is ``0/1``.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: _ZPoly, den: _ZPoly = _ONE_POLY, _reduced: bool = False):
        if not _reduced:
            if den.is_zero():
                raise ZeroDivisionError("zero denominator")
            if num.is_zero():
                num, den = _ZERO_POLY, _ONE_POLY
            else:
                g = num.gcd(den)
                if not g.is_one():
                    num = num // g
                    den = den // g
                if den.leading_coefficient() < 0:
                    num, den = -num, -den
        self.num = num
        self.den = den

    @classmethod
    def coerce(cls, x) -> "QFrac":
        if isinstance(x, QFrac):
            return x
        if isinstance(x, QScalar):
            p, shift, d = laurent_to_poly(x)
            if shift >= 0:
                return cls(p * _monomial_poly(shift) if shift else p, _ZPoly([d]))
            return cls(p, _ZPoly([0] * (-shift) + [d]))
        if isinstance(x, int):
            return cls(_ZPoly([x]), _ONE_POLY, _reduced=True)
        if isinstance(x, Fraction):
            return cls(_ZPoly([x.numerator]), _ZPoly([x.denominator]), _reduced=True)
        raise TypeError(f"cannot coerce {type(x).__name__} to QFrac")

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def __add__(self, other):
        other = _as_qfrac(other)
        if other is NotImplemented:
            return NotImplemented
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        if self.den == other.den:
            return QFrac(self.num + other.num, self.den)
        return QFrac(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return QFrac(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        other = _as_qfrac(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_qfrac(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _as_qfrac(other)
        if other is NotImplemented:
            return NotImplemented
        if self.num.is_zero() or other.num.is_zero():
            return QF_ZERO
        return QFrac(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "QFrac":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return QFrac(self.den, self.num)

    def __truediv__(self, other):
        other = _as_qfrac(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _as_qfrac(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __eq__(self, other):
        other = _as_qfrac(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((tuple(int(c) for c in self.num.coeffs()), tuple(int(c) for c in self.den.coeffs())))

    def is_laurent(self) -> bool:
        """True iff the denominator is ``c * q**k``."""
        coeffs = self.den.coeffs()
        return sum(1 for c in coeffs if c) == 1

    def to_qscalar(self) -> QScalar:
        if not self.is_laurent():
            raise ValueError(f"{self} is not a Laurent polynomial")
        k = self.den.degree()
        d = int(self.den.coeffs()[k])
        return poly_to_qscalar(self.num, -k, d)

    def evaluate_at(self, q0) -> Fraction:
        q0 = Fraction(q0)
        if q0 == 0:
            raise ZeroDivisionError("evaluation at q = 0")
        x = flint.fmpq(q0.numerator, q0.denominator)
        d = _fmpq_to_fraction(self.den(x))
        if d == 0:
            raise ZeroDivisionError(f"{self} has a pole at q = {q0}")
        return _fmpq_to_fraction(self.num(x)) / d

    def derivative_at_one(self) -> Fraction:
        n0, n1 = _poly_at_one(self.num)
        d0, d1 = _poly_at_one(self.den)
        if d0 == 0:
            raise ZeroDivisionError(f"{self} has a pole at q = 1")
        return Fraction(n1 * d0 - n0 * d1, d0 * d0)

    def __str__(self) -> str:
        if self.is_laurent():
            return str(self.to_qscalar())
        return f"({poly_to_qscalar(self.num)})/({poly_to_qscalar(self.den)})"

    def __repr__(self) -> str:
        return f"QFrac({self})"


def _as_qfrac(x):
    if isinstance(x, QFrac):
        return x
    if isinstance(x, (QScalar, int, Fraction)):
        return QFrac.coerce(x)
    return NotImplemented


QF_ZERO = QFrac(_ZERO_POLY, _ONE_POLY, _reduced=True)
QF_ONE = QFrac(_ONE_POLY, _ONE_POLY, _reduced=True)


def derivative_at_one(s) -> Fraction:
    """d/dq of ``s`` at q = 1."""
    if isinstance(s, (int, Fraction)):
        return Fraction(0)
    return s.derivative_at_one()


def evaluate_at(s, q0) -> Fraction:
    """Exact substitution ``q = q0``; ``q0`` must be nonzero."""
    if Fraction(q0) == 0:
        raise ZeroDivisionError("q0 must be nonzero")
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    return s.evaluate_at(q0)


# ---------------------------------------------------------------------------
# dense matrices
# ---------------------------------------------------------------------------


class QMatrix:
    """Dense rectangular matrix of ``QScalar`` entries (immutable)."""

    __slots__ = ("rows", "cols", "_e")

    def __init__(self, entries: Sequence[Sequence], rows: int | None = None, cols: int | None = None):
        e = tuple(tuple(qs(x) for x in row) for row in entries)
        r = len(e) if rows is None else rows
        c = (len(e[0]) if e else 0) if cols is None else cols
        if len(e) != r or any(len(row) != c for row in e):
            raise ValueError("ragged or mis-sized matrix entries")
        self.rows = r
        self.cols = c
        self._e = e

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        return cls([[ZERO] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def from_sparse(cls, rows: int, cols: int, items: dict) -> "QMatrix":
        data = [[ZERO] * cols for _ in range(rows)]
        for (i, j), v in items.items():
            data[i][j] = qs(v)
        return cls(data, rows, cols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self._e[i][j]

    def row(self, i: int) -> tuple:
        return self._e[i]

    def to_lists(self) -> list[list[QScalar]]:
        return [list(r) for r in self._e]

    def nonzero_items(self) -> Iterable[tuple[int, int, QScalar]]:
        for i, row in enumerate(self._e):
            for j, x in enumerate(row):
                if x:
                    yield i, j, x

    def __eq__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        return self.shape == other.shape and self._e == other._e

    def __hash__(self):
        return hash(self._e)

    def __add__(self, other: "QMatrix") -> "QMatrix":
        self._check_same(other)
        return QMatrix([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self._e, other._e)], self.rows, self.cols)

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        self._check_same(other)
        return QMatrix([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self._e, other._e)], self.rows, self.cols)

    def __neg__(self) -> "QMatrix":
        return QMatrix([[-a for a in r] for r in self._e], self.rows, self.cols)

    def scale(self, s) -> "QMatrix":
        s = qs(s)
        return QMatrix([[s * a for a in r] for r in self._e], self.rows, self.cols)

    def _check_same(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        other_rows = [[(j, x) for j, x in enumerate(r) if x] for r in other._e]
        out = []
        for r in self._e:
            acc: dict[int, QScalar] = {}
            for k, a in enumerate(r):
                if not a:
                    continue
                for j, b in other_rows[k]:
                    acc[j] = acc.get(j, ZERO) + a * b
            out.append([acc.get(j, ZERO) for j in range(other.cols)])
        return QMatrix(out, self.rows, other.cols)

    def transpose(self) -> "QMatrix":
        return QMatrix([list(c) for c in zip(*self._e)] if self.rows else [], self.cols, self.rows)

    def kron(self, other: "QMatrix") -> "QMatrix":
        r2, c2 = other.shape
        out = [[ZERO] * (self.cols * c2) for _ in range(self.rows * r2)]
        for i, j, a in self.nonzero_items():
            for k, l, b in other.nonzero_items():
                out[i * r2 + k][j * c2 + l] = a * b
        return QMatrix(out, self.rows * r2, self.cols * c2)

    def map(self, fn) -> "QMatrix":
        return QMatrix([[fn(a) for a in r] for r in self._e], self.rows, self.cols)

    def evaluate_at(self, q0) -> list[list[Fraction]]:
        return [[a.evaluate_at(q0) for a in r] for r in self._e]

    def derivative_at_one(self) -> list[list[Fraction]]:
        return [[a.derivative_at_one() for a in r] for r in self._e]

    def is_zero(self) -> bool:
        return not any(a for r in self._e for a in r)

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == QMatrix.identity(self.rows)

    def inverse(self) -> "QMatrix":
        """Inverse over the Laurent ring; raises if singular or not Laurent-invertible."""
        if self.rows != self.cols:
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        rows = []
        for i in range(n):
            row = {j: QFrac.coerce(x) for j, x in enumerate(self._e[i]) if x}
            row[n + i] = QF_ONE
            rows.append(row)
        piv = echelonize([frac_row_to_poly_row(r) for r in rows])
        if sorted(piv)[:n] != list(range(n)) or len(piv) != n:
            raise ZeroDivisionError("matrix is singular")
        out = [[ZERO] * n for _ in range(n)]
        for i in range(n):
            prow = piv[i]
            a = prow[i]
            for j, b in prow.items():
                if j >= n:
                    out[i][j - n] = QFrac(b, a).to_qscalar()
        return QMatrix(out, n, n)

    def det(self) -> QFrac:
        """Determinant over Q(q) by Gaussian elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        m = [[QFrac.coerce(x) for x in r] for r in self._e]
        det = QF_ONE
        for c in range(n):
            p = next((r for r in range(c, n) if m[r][c]), None)
            if p is None:
                return QF_ZERO
            if p != c:
                m[c], m[p] = m[p], m[c]
                det = -det
            pivot = m[c][c]
            det = det * pivot
            inv = pivot.inverse()
            for r in range(c + 1, n):
                if m[r][c]:
                    f = m[r][c] * inv
                    m[r] = [a - f * b if b else a for a, b in zip(m[r], m[c])]
        return det

    def __repr__(self) -> str:
        return f"QMatrix({self.rows}x{self.cols})"


# ---------------------------------------------------------------------------
# fraction-free sparse elimination
# ---------------------------------------------------------------------------

PolyRow = dict  # column index -> nonzero fmpz_poly


def _row_cost(row: PolyRow) -> int:
    return sum(p.length() for p in row.values())


def primitive_row(row: PolyRow) -> PolyRow:
    """Divide a polynomial row by the gcd of its entries; leading entry gets a positive leading coefficient."""
    if not row:
        return row
    it = iter(row.values())
    g = next(it)
    for p in it:
        if g.is_one():
            break
        g = g.gcd(p)
    lead = row[min(row)]
    if lead.leading_coefficient() < 0:
        g = -g
    if g.is_one():
        return row
    return {k: p // g for k, p in row.items()}


def _combine(r: PolyRow, a, b, p: PolyRow) -> PolyRow:
    """Return primitive(a*r - b*p)."""
    out = {k: a * v for k, v in r.items()}
    for k, v in p.items():
        w = out.get(k)
        w = -(b * v) if w is None else w - b * v
        if w.is_zero():
            out.pop(k, None)
        else:
            out[k] = w
    return primitive_row(out)


def echelonize(rows: Iterable[PolyRow]) -> dict[int, PolyRow]:
    """Fully reduced fraction-free row echelon form.

    The pivot of a row is its smallest column index. When several rows compete
    for a pivot column, the one with the fewest polynomial terms is kept.
    Returns ``{pivot_column: row}``; each row is primitive and has zeros in
    every other pivot column.
    """
    buckets: dict[int, list[PolyRow]] = {}
    heap: list[int] = []

    def push(r: PolyRow):
        c = min(r)
        b = buckets.get(c)
        if b is None:
            buckets[c] = [r]
            heapq.heappush(heap, c)
        else:
            b.append(r)

    for r in rows:
        if r:
            push(primitive_row(r))

    pivots: dict[int, PolyRow] = {}
    while heap:
        c = heapq.heappop(heap)
        cand = buckets.pop(c)
        best = min(range(len(cand)), key=lambda i: _row_cost(cand[i]))
        p = cand[best]
        a = p[c]
        for i, r in enumerate(cand):
            if i == best:
                continue
            nr = _combine(r, a, r[c], p)
            if nr:
                push(nr)
        pivots[c] = p

    order = sorted(pivots)
    for idx in range(len(order) - 1, -1, -1):
        c = order[idx]
        p = pivots[c]
        a = p[c]
        for c2 in order[:idx]:
            r = pivots[c2]
            b = r.get(c)
            if b is not None:
                pivots[c2] = _combine(r, a, b, p)
    return pivots


def frac_row_to_poly_row(row: dict) -> PolyRow:
    """Clear denominators of a row of QFrac (or QScalar) entries; result is primitive."""
    entries = {k: QFrac.coerce(v) for k, v in row.items() if v}
    if not entries:
        return {}
    lcm = _ONE_POLY
    for v in entries.values():
        d = v.den
        if not d.is_one():
            g = lcm.gcd(d)
            lcm = lcm * (d // g)
    out = {}
    for k, v in entries.items():
        out[k] = v.num * (lcm // v.den) if not v.den.is_one() else v.num * lcm
    return primitive_row(out)


class RREFResult(NamedTuple):
    rank: int
    pivot_columns: list[int]
    row_basis: QMatrix
    kernel_basis: QMatrix


def rref(m: QMatrix) -> RREFResult:
    """Rank, pivot columns, row-space basis and right-kernel basis of ``m`` over Q(q).

    ``row_basis`` is the reduced echelon form with denominators cleared (one row
    per pivot). ``kernel_basis`` has one column per non-pivot column of ``m``.
    """
    rows = []
    for r in m._e:
        rows.append(frac_row_to_poly_row({j: x for j, x in enumerate(r) if x}))
    piv = echelonize(rows)
    pcols = sorted(piv)
    basis = []
    for c in pcols:
        basis.append([poly_to_qscalar(piv[c][j]) if j in piv[c] else ZERO for j in range(m.cols)])
    row_basis = QMatrix(basis, len(pcols), m.cols)
    free = [j for j in range(m.cols) if j not in piv]
    kcols = []
    for fcol in free:
        vec = {fcol: QF_ONE}
        for c in pcols:
            b = piv[c].get(fcol)
            if b is not None:
                vec[c] = QFrac(-b, piv[c][c])
        prow = frac_row_to_poly_row(vec)
        kcols.append([poly_to_qscalar(prow[j]) if j in prow else ZERO for j in range(m.cols)])
    kernel = QMatrix([[kcols[k][i] for k in range(len(free))] for i in range(m.cols)], m.cols, len(free))
    return RREFResult(len(pcols), pcols, row_basis, kernel)


def rank_of_rows(rows: Iterable[dict]) -> int:
    """Rank over Q(q) of sparse rows with QScalar/QFrac entries."""
    return len(echelonize(frac_row_to_poly_row(r) for r in rows))


def same_row_space(a: Iterable[dict], b: Iterable[dict]) -> bool:
    """Exact equality of the spans of two families of sparse rows."""
    a = [frac_row_to_poly_row(r) for r in a]
    b = [frac_row_to_poly_row(r) for r in b]
    ra = len(echelonize(a))
    rb = len(echelonize(b))
    return ra == rb == len(echelonize(a + b))


class Reducer:
    """Rewriting rules read off a fully reduced echelon form.

    For a pivot column ``c`` with row ``a*e_c + sum_j b_j e_j`` the rule is
    ``e_c -> -sum_j (b_j / a) e_j``; every ``j`` is a non-pivot column.
    """

    __slots__ = ("rules",)

    def __init__(self, pivots: dict[int, PolyRow]):
        rules = {}
        for c, row in pivots.items():
            a = row[c]
            rules[c] = [(j, QFrac(-b, a)) for j, b in row.items() if j != c]
        self.rules = rules

    def is_pivot(self, c: int) -> bool:
        return c in self.rules

    def reduce(self, vec: dict) -> dict:
        """Reduce a sparse QFrac vector modulo the row space."""
        out: dict = {}
        for c, v in vec.items():
            if not v:
                continue
            rule = self.rules.get(c)
            if rule is None:
                w = out.get(c)
                out[c] = v if w is None else w + v
            else:
                for j, coef in rule:
                    w = out.get(j)
                    t = coef * v
                    out[j] = t if w is None else w + t
        return {k: v for k, v in out.items() if v}


def kernel_vectors(rows: Iterable[dict], ncols: int) -> list[PolyRow]:
    """Right-kernel basis of the matrix with the given sparse rows, one vector per free column.

    Vectors are returned with denominators cleared (primitive integer polynomial rows).
    """
    piv = echelonize(frac_row_to_poly_row(r) for r in rows)
    out = []
    for fcol in range(ncols):
        if fcol in piv:
            continue
        vec = {fcol: QF_ONE}
        for c, row in piv.items():
            b = row.get(fcol)
            if b is not None:
                vec[c] = QFrac(-b, row[c])
        out.append(frac_row_to_poly_row(vec))
    return out
