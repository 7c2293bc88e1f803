"""Twisting the multiplication of matrix coefficients, and transport of ideals.

The twist relating the two presentations is, on a pair of generators,

    T^i_j . T^k_l  =  sum (R^-1)^{ik}_{ab} R^{cb}_{jd} K^a_c K^d_l,

i.e. ``T1 T2 = R^-1 K1 R K2``. Under this substitution ``R T1 T2 - T2 T1 R``
becomes ``R21^-1 (R21 K1 R12 K2 - K2 R21 K1 R12)``, so the FRT ideal is carried
onto the RE ideal. The substitution is the inverse ``Omega_2^-1`` of the
degree-2 automorphism; higher degrees use the recursion

    Omega_n^-1 = (Omega_m^-1 (x) Omega_k^-1) . G_{m,k},
    G_{m,k}(T^I_J T^K_L) = sum Y^{IK}_{AB} X^{CB}_{JD} K^A_C K^D_L,

with ``X`` the image of ``(Delta^m (x) Delta^k) R`` on ``V^{(x)m} (x) V^{(x)k}``
and ``Y = X^-1``. No matrix of size ``N^{2n}`` is ever inverted.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .exactalg import QF_ONE, QFrac, QMatrix, echelonize, frac_row_to_poly_row, same_row_space
from .freenc import F_LETTER, Alphabet, NCPoly, RelationSet, canonical
from .rmat import RMatrixData, SeriesId, build_R, conj_flip, leg_embed

# twist caps mirror the quotient caps
TWIST_CAPS = {2: 4, 3: 3}


def _add(t: dict, k, v):
    s = t.get(k)
    s = v if s is None else s + v
    if s:
        t[k] = s
    else:
        t.pop(k, None)


def _split_index(idx: int, N: int, n: int) -> tuple:
    out = []
    for _ in range(n):
        idx, r = divmod(idx, N)
        out.append(r)
    return tuple(reversed(out))


def _join_index(t: tuple, N: int) -> int:
    v = 0
    for x in t:
        v = v * N + x
    return v


class GeneratorCocycle:
    """The twist on words in the matrix generators, degree by degree."""

    def __init__(self, rdata: RMatrixData, flip_legs: bool = False):
        self.rdata = rdata
        self.N = rdata.N
        # negative control: use R21 where R belongs
        self.R = conj_flip(rdata.R, self.N) if flip_legs else rdata.R
        self.flip_legs = flip_legs
        self._xy: dict = {}
        self._cache: dict = {}
        self._g2 = None

    # coproduct images -------------------------------------------------------
    def _XY(self, m: int, k: int):
        key = (m, k)
        hit = self._xy.get(key)
        if hit is not None:
            return hit
        N, n = self.N, m + k
        X = QMatrix.identity(N ** n)
        for j in range(n - 1, m - 1, -1):
            for i in range(m):
                X = X @ leg_embed(self.R, N, n, (i, j))
        Y = X.inverse()
        Nk = N ** k
        yrows: dict = {}
        for r, c, v in Y.nonzero_items():
            I, K = divmod(r, Nk)
            A, B = divmod(c, Nk)
            yrows.setdefault((I, K), []).append((A, B, QFrac.coerce(v)))
        xrows: dict = {}
        for r, c, v in X.nonzero_items():
            C, B = divmod(r, Nk)
            J, D = divmod(c, Nk)
            xrows.setdefault((C, B, J), []).append((D, QFrac.coerce(v)))
        hit = (X, Y, yrows, xrows)
        self._xy[key] = hit
        return hit

    def G(self, word: tuple, m: int) -> dict:
        """``G_{m,k}`` applied to one word of matrix letters, split after ``m`` letters."""
        N = self.N
        n = len(word)
        k = n - m
        _, _, yrows, xrows = self._XY(m, k)
        rows = [divmod(x, N) for x in word]
        I = _join_index(tuple(r[0] for r in rows[:m]), N)
        J = _join_index(tuple(r[1] for r in rows[:m]), N)
        K = _join_index(tuple(r[0] for r in rows[m:]), N)
        L = tuple(r[1] for r in rows[m:])
        out: dict = {}
        Nm = N ** m
        for A, B, y in yrows.get((I, K), ()):
            At = _split_index(A, N, m)
            for C in range(Nm):
                for D, x in xrows.get((C, B, J), ()):
                    Ct = _split_index(C, N, m)
                    Dt = _split_index(D, N, k)
                    w = tuple(a * N + c for a, c in zip(At, Ct)) + tuple(d * N + l for d, l in zip(Dt, L))
                    _add(out, w, y * x)
        return out

    # Omega^-1 -----------------------------------------------------------------
    def omega_inv(self, word: tuple, split: Optional[int] = None) -> dict:
        """``Omega_n^-1`` on one word. ``split`` picks the outermost partition ``(m, n-m)``;
        inner levels always split off the last letter."""
        n = len(word)
        if n <= 1:
            return {word: QF_ONE}
        m = n - 1 if split is None else split
        key = (word, m)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        out: dict = {}
        for w, c in self.G(word, m).items():
            left = self.omega_inv(w[:m])
            right = self.omega_inv(w[m:])
            for u, cu in left.items():
                for v, cv in right.items():
                    _add(out, u + v, c * cu * cv)
        self._cache[key] = out
        return out

    def omega_inv_matrix(self, n: int, split: Optional[int] = None) -> QMatrix:
        """Dense ``Omega_n^-1`` on the degree-``n`` word space (column = input word)."""
        size = (self.N ** 2) ** n
        items = {}
        for col in range(size):
            w = _split_index(col, self.N ** 2, n)
            for v, c in self.omega_inv(w, split).items():
                items[(_join_index(v, self.N ** 2), col)] = c.to_qscalar()
        return QMatrix.from_sparse(size, size, items)

    @property
    def F2(self) -> QMatrix:
        """``Omega_2``: the cocycle on the degree-2 generator space."""
        if self._g2 is None:
            self._g2 = self.omega_inv_matrix(2).inverse()
        return self._g2

    def omega_matrix(self, n: int) -> QMatrix:
        return self.omega_inv_matrix(n).inverse()

    def apply(self, p: NCPoly) -> NCPoly:
        """``Omega^-1`` on an element; ``f`` letters pass through unchanged."""
        t: dict = {}
        for w, c in p.terms.items():
            nf = sum(1 for x in w if x == F_LETTER)
            body = w[nf:]
            for v, cv in self.omega_inv(body).items():
                _add(t, (F_LETTER,) * nf + v, c * cv)
        return NCPoly._raw(t)


def generator_cocycle(rdata: RMatrixData, flip_legs: bool = False) -> GeneratorCocycle:
    return GeneratorCocycle(rdata, flip_legs)


def transport_element(p: NCPoly, gc: GeneratorCocycle, target: Optional[Alphabet] = None) -> NCPoly:
    return gc.apply(p)


def transport_ideal(W: RelationSet, gc: GeneratorCocycle, target: Optional[Alphabet] = None) -> RelationSet:
    A = target or W.alphabet.renamed("K")
    return RelationSet(A, [gc.apply(r) for r in W.relations])


def _rows(polys, index: dict) -> list[dict]:
    out = []
    for p in polys:
        row = {}
        for w, c in p.terms.items():
            j = index.setdefault(w, len(index))
            row[j] = c
        if row:
            out.append(row)
    return out


def same_span(a: list[NCPoly], b: list[NCPoly]) -> bool:
    index: dict = {}
    return same_row_space(_rows(a, index), _rows(b, index))


def span_dim(a: list[NCPoly]) -> int:
    return len(echelonize(frac_row_to_poly_row(r) for r in _rows(a, {})))


def partition_independent(gc: GeneratorCocycle, n: int = 3) -> bool:
    """Every outer partition ``(m, n-m)`` gives the same ``Omega_n^-1``."""
    ref = None
    for m in range(1, n):
        M = gc.omega_inv_matrix(n, m)
        if ref is None:
            ref = M
        elif M != ref:
            return False
    return True


def verify_twist_correspondence(sid: SeriesId, flip_legs: bool = False, rdata: Optional[RMatrixData] = None) -> dict:
    """Transport the FRT presentation and compare with the RE presentation."""
    from .qfun import frt_relation_polys, orthogonality_polys, re_orthogonality_polys, re_relation_polys

    rdata = rdata or build_R(sid)
    N = rdata.N
    gc = generator_cocycle(rdata, flip_legs)
    has_f = sid.series != "A"
    AT = Alphabet(N, has_f=has_f, symbol="T")
    AK = Alphabet(N, has_f=has_f, symbol="K")
    frt = frt_relation_polys(rdata.R, AT)
    re = re_relation_polys(rdata.R, AK)
    moved = [gc.apply(p) for p in frt]
    report = {
        "series": str(sid),
        "flip_legs": flip_legs,
        "frt_span_dim": span_dim(frt),
        "re_span_dim": span_dim(re),
        "degree2_span_equal": same_span(moved, re),
        "q1_identity": all(
            v.evaluate_at(1) == (1 if k == w else 0)
            for w in [(a, b) for a in AT.matrix_letters for b in AT.matrix_letters]
            for k, v in gc.omega_inv(w).items()
        ),
        "omega3_partition_independent": partition_independent(gc, 3),
    }
    checks = ["degree2_span_equal", "q1_identity", "omega3_partition_independent"]
    if has_f:
        frt_group = [gc.apply(p) for p in frt + orthogonality_polys(rdata.B_form, AT)]
        re_group = re + re_orthogonality_polys(rdata, AK)
        report["group_span_equal"] = same_span(frt_group, re_group)
        report["group_span_dim"] = span_dim(re_group)
        checks.append("group_span_equal")
    report["pass"] = all(report[c] for c in checks)
    return report
