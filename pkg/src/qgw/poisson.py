"""Classical Poisson brackets on matrix coordinates from a classical r-matrix.

Coordinates ``x^i_j`` are numbered ``i*N + j``. Commutative polynomials are
dicts ``{sorted tuple of coordinate numbers: Fraction}``.

For ``xi`` in ``gl(V)`` the invariant vector fields act on coordinates by
``xi^l x = X xi`` and ``xi^r x = xi X`` (matrix entries), and the adjoint field
is ``xi^l - xi^r``. Writing a two-tensor as ``sum c e_ac (x) e_bd`` the brackets are

* DS:  ``r^{l,l} - r^{r,r}``;
* STS: ``r_-^{ad,ad} + Omega^{r,l} - Omega^{l,r}``.

Each table is built twice: termwise from the vector fields, and from the
closed matrix form (``[X1 X2, r]`` for DS; ``X1X2 r_- + r_- X1X2 - X1 r_- X2 -
X2 r_- X1 + X2 Omega X1 - X1 Omega X2`` for STS).
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .exactalg import QFrac, QMatrix
from .rmat import RMatrixData, SeriesId, build_R

Poly = dict


class NotFlatError(ValueError):
    """The free presentation has no monomial basis at degree 2 (no PBW correspondence)."""


# ---------------------------------------------------------------------------
# commutative polynomials
# ---------------------------------------------------------------------------


def padd(*ps: Poly) -> Poly:
    out: dict = {}
    for p in ps:
        for m, c in p.items():
            out[m] = out.get(m, 0) + c
    return {m: c for m, c in out.items() if c}


def pscale(p: Poly, s) -> Poly:
    if not s:
        return {}
    return {m: c * s for m, c in p.items()}


def psub(a: Poly, b: Poly) -> Poly:
    return padd(a, pscale(b, -1))


def pmul(a: Poly, b: Poly) -> Poly:
    out: dict = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = tuple(sorted(m1 + m2))
            out[m] = out.get(m, 0) + c1 * c2
    return {m: c for m, c in out.items() if c}


def pvar(v: int) -> Poly:
    return {(v,): Fraction(1)}


def pconst(c) -> Poly:
    return {(): Fraction(c)} if c else {}


def pderiv(p: Poly, v: int) -> Poly:
    out: dict = {}
    for m, c in p.items():
        k = m.count(v)
        if k:
            i = m.index(v)
            mm = m[:i] + m[i + 1:]
            out[mm] = out.get(mm, 0) + c * k
    return {m: c for m, c in out.items() if c}


def peval(p: Poly, point: list) -> Fraction:
    total = Fraction(0)
    for m, c in p.items():
        t = Fraction(c)
        for v in m:
            t *= point[v]
        total += t
    return total


def pformat(p: Poly, N: int) -> list:
    out = []
    for m, c in sorted(p.items()):
        name = "*".join(f"x^{v // N + 1}_{v % N + 1}" for v in m) or "1"
        out.append([name, str(c)])
    return out


# ---------------------------------------------------------------------------
# brackets
# ---------------------------------------------------------------------------


def _tensor_entries(M: QMatrix, N: int) -> list:
    """``[(a, c, b, d, value)]`` for ``M = sum value e_ac (x) e_bd`` (rational entries)."""
    out = []
    for r, col, x in M.nonzero_items():
        a, b = divmod(r, N)
        c, d = divmod(col, N)
        v = x.evaluate_at(1) if hasattr(x, "evaluate_at") else Fraction(x)
        if v:
            out.append((a, c, b, d, Fraction(v)))
    return out


def _left_field(a: int, c: int, N: int) -> Callable[[int], Poly]:
    """``(e_ac)^l`` on coordinate ``i*N+j``: ``(X e_ac)_ij = X_ia delta_cj``."""

    def act(v: int) -> Poly:
        i, j = divmod(v, N)
        return pvar(i * N + a) if j == c else {}

    return act


def _right_field(a: int, c: int, N: int) -> Callable[[int], Poly]:
    """``(e_ac)^r`` on coordinate ``i*N+j``: ``(e_ac X)_ij = delta_ia X_cj``."""

    def act(v: int) -> Poly:
        i, j = divmod(v, N)
        return pvar(c * N + j) if i == a else {}

    return act


def _ad_field(a: int, c: int, N: int) -> Callable[[int], Poly]:
    L = _left_field(a, c, N)
    R = _right_field(a, c, N)
    return lambda v: psub(L(v), R(v))


def _bivector_on_coords(terms: list, u: int, v: int) -> Poly:
    """``sum coef * F(x_u) * G(x_v)`` for terms ``(coef, F, G)``."""
    acc: list = []
    for coef, F, G in terms:
        fu = F(u)
        if not fu:
            continue
        gv = G(v)
        if gv:
            acc.append(pscale(pmul(fu, gv), coef))
    return padd(*acc)


def _ds_terms(r: QMatrix, N: int) -> list:
    out = []
    for a, c, b, d, val in _tensor_entries(r, N):
        out.append((val, _left_field(a, c, N), _left_field(b, d, N)))
        out.append((-val, _right_field(a, c, N), _right_field(b, d, N)))
    return out


def _sts_terms(r_minus: QMatrix, omega: QMatrix, N: int) -> list:
    out = []
    for a, c, b, d, val in _tensor_entries(r_minus, N):
        out.append((val, _ad_field(a, c, N), _ad_field(b, d, N)))
    for a, c, b, d, val in _tensor_entries(omega, N):
        out.append((val, _right_field(a, c, N), _left_field(b, d, N)))
        out.append((-val, _left_field(a, c, N), _right_field(b, d, N)))
    return out


@dataclass
class PoissonSpec:
    kind: str
    rdata: RMatrixData
    table: list  # table[u][v]: Poly

    @property
    def N(self) -> int:
        return self.rdata.N

    def bracket(self, f: Poly, g: Poly) -> Poly:
        """Leibniz extension of the coordinate table."""
        n = self.N * self.N
        df = [pderiv(f, u) for u in range(n)]
        dg = [pderiv(g, v) for v in range(n)]
        acc = []
        for u in range(n):
            if not df[u]:
                continue
            for v in range(n):
                if dg[v] and self.table[u][v]:
                    acc.append(pmul(pmul(df[u], dg[v]), self.table[u][v]))
        return padd(*acc)

    def to_json(self) -> dict:
        N = self.N
        entries = {}
        for u in range(N * N):
            for v in range(N * N):
                key = f"({u // N + 1},{u % N + 1}),({v // N + 1},{v % N + 1})"
                entries[key] = pformat(self.table[u][v], N)
        return {"kind": self.kind, "series": str(self.rdata.id), "N": N, "entries": entries}


def _table_from_terms(terms: list, N: int) -> list:
    n = N * N
    return [[_bivector_on_coords(terms, u, v) for v in range(n)] for u in range(n)]


def ds_bracket_table(rdata: RMatrixData, r: Optional[QMatrix] = None) -> PoissonSpec:
    N = rdata.N
    r = rdata.r_classical if r is None else r
    return PoissonSpec("DS", rdata, _table_from_terms(_ds_terms(r, N), N))


def sts_bracket_table(rdata: RMatrixData, r_minus: Optional[QMatrix] = None, omega: Optional[QMatrix] = None) -> PoissonSpec:
    N = rdata.N
    r_minus = rdata.r_minus if r_minus is None else r_minus
    omega = rdata.Omega_rep if omega is None else omega
    return PoissonSpec("STS", rdata, _table_from_terms(_sts_terms(r_minus, omega, N), N))


# closed matrix forms ----------------------------------------------------------


def _rat(M: QMatrix, N: int) -> dict:
    """Operator on V(x)V as ``{(i,k,j,l): Fraction}``."""
    out = {}
    for r, c, x in M.nonzero_items():
        v = x.evaluate_at(1)
        if v:
            i, k = divmod(r, N)
            j, l = divmod(c, N)
            out[(i, k, j, l)] = Fraction(v)
    return out


def _x(i, j, N):
    return pvar(i * N + j)


def _closed_entry(N: int, i: int, k: int, j: int, l: int, parts: list) -> Poly:
    """Sum of sandwich terms for entry ``(i,k),(j,l)``.

    Each part is ``(sign, pattern, op)`` with pattern one of
    ``"XXr"``, ``"rXX"``, ``"X1rX2"``, ``"X2rX1"``.
    """
    acc = []
    for sign, pattern, op in parts:
        for (a, b, c, d), v in op.items():
            s = sign * v
            if pattern == "XXr":
                # (X1 X2 M)_{ik,jl} = X_ia X_kb M_{ab,jl}
                if (c, d) == (j, l):
                    acc.append(pscale(pmul(_x(i, a, N), _x(k, b, N)), s))
            elif pattern == "rXX":
                # (M X1 X2)_{ik,jl} = M_{ik,cd} X_cj X_dl
                if (a, b) == (i, k):
                    acc.append(pscale(pmul(_x(c, j, N), _x(d, l, N)), s))
            elif pattern == "X1rX2":
                # X_ia M_{ak,jd} X_dl
                if b == k and c == j:
                    acc.append(pscale(pmul(_x(i, a, N), _x(d, l, N)), s))
            elif pattern == "X2rX1":
                # X_kb M_{ib,cl} X_cj
                if a == i and d == l:
                    acc.append(pscale(pmul(_x(k, b, N), _x(c, j, N)), s))
    return padd(*acc)


def _closed_table(N: int, parts: list) -> list:
    n = N * N
    table = [[{} for _ in range(n)] for _ in range(n)]
    for u in range(n):
        i, j = divmod(u, N)
        for v in range(n):
            k, l = divmod(v, N)
            table[u][v] = _closed_entry(N, i, k, j, l, parts)
    return table


def ds_closed_form(rdata: RMatrixData, r: Optional[QMatrix] = None) -> list:
    """``{X1, X2} = [X1 X2, r]``."""
    N = rdata.N
    rr = _rat(rdata.r_classical if r is None else r, N)
    return _closed_table(N, [(1, "XXr", rr), (-1, "rXX", rr)])


def sts_closed_form(rdata: RMatrixData, r_minus: Optional[QMatrix] = None, omega: Optional[QMatrix] = None) -> list:
    N = rdata.N
    rm = _rat(rdata.r_minus if r_minus is None else r_minus, N)
    om = _rat(rdata.Omega_rep if omega is None else omega, N)
    return _closed_table(
        N,
        [(1, "XXr", rm), (1, "rXX", rm), (-1, "X1rX2", rm), (-1, "X2rX1", rm), (1, "X2rX1", om), (-1, "X1rX2", om)],
    )


# ---------------------------------------------------------------------------
# Jacobi
# ---------------------------------------------------------------------------


def jacobiator(spec: PoissonSpec, f: Poly, g: Poly, h: Poly) -> Poly:
    b = spec.bracket
    return padd(b(f, b(g, h)), b(g, b(h, f)), b(h, b(f, g)))


def generator_jacobiators(spec: PoissonSpec) -> dict:
    """Jacobiators of all generator triples ``u < v < w`` (others follow by antisymmetry)."""
    n = spec.N * spec.N
    out = {}
    for u in range(n):
        for v in range(u + 1, n):
            for w in range(v + 1, n):
                out[(u, v, w)] = jacobiator(spec, pvar(u), pvar(v), pvar(w))
    return out


def is_antisymmetric(spec: PoissonSpec) -> bool:
    n = spec.N * spec.N
    return all(padd(spec.table[u][v], spec.table[v][u]) == {} for u in range(n) for v in range(n))


# exact rational matrices ------------------------------------------------------


def _mat_mul(A, B):
    n, m, p = len(A), len(B), len(B[0])
    return [[sum((A[i][k] * B[k][j] for k in range(m)), Fraction(0)) for j in range(p)] for i in range(n)]


def _mat_inv(A):
    n = len(A)
    M = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    for col in range(n):
        p = next((r for r in range(col, n) if M[r][col]), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        M[col], M[p] = M[p], M[col]
        pv = M[col][col]
        M[col] = [x / pv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col]:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [row[n:] for row in M]


def _transpose(A):
    return [list(r) for r in zip(*A)]


def _identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def classical_form(rdata: RMatrixData) -> list:
    B = rdata.B_form
    return [[Fraction(B[(i, j)].evaluate_at(1)) for j in range(B.cols)] for i in range(B.rows)]


def on_variety(X, B0, f) -> bool:
    """``B X^t B^-1 X == f^2``."""
    lhs = _mat_mul(_mat_mul(_mat_mul(B0, _transpose(X)), _mat_inv(B0)), X)
    n = len(X)
    return lhs == [[f * f * int(i == j) for j in range(n)] for i in range(n)]


def cayley_point(B0, rng: random.Random, symplectic: bool, f: Fraction) -> list:
    """``f (1-S)(1+S)^-1`` with ``S = B0 Z``; ``Z`` antisymmetric (orthogonal) or symmetric (symplectic)."""
    n = len(B0)
    while True:
        Z = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                if i == j and not symplectic:
                    continue
                v = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
                Z[i][j] = v
                Z[j][i] = v if symplectic else -v
        S = _mat_mul(B0, Z)
        I = _identity(n)
        try:
            inv = _mat_inv([[I[i][j] + S[i][j] for j in range(n)] for i in range(n)])
        except ZeroDivisionError:
            continue
        O = _mat_mul([[I[i][j] - S[i][j] for j in range(n)] for i in range(n)], inv)
        return [[f * x for x in row] for row in O]


def jacobi_check_on_variety(spec: PoissonSpec, n_points: int = 20, seed: int = 0) -> dict:
    """Series A: symbolic vanishing. Otherwise: exact vanishing at Cayley points, plus an off-variety control."""
    sid = spec.rdata.id
    jac = generator_jacobiators(spec)
    report = {"kind": spec.kind, "series": str(sid), "triples": len(jac)}
    if sid.series == "A":
        nonzero = [k for k, v in jac.items() if v]
        report.update({"mode": "symbolic", "nonzero_triples": len(nonzero), "pass": not nonzero})
        return report
    rng = random.Random(seed)
    B0 = classical_form(spec.rdata)
    N = spec.N
    points_ok = 0
    for _ in range(n_points):
        f = Fraction(rng.randint(1, 5), rng.randint(1, 3))
        X = cayley_point(B0, rng, sid.series == "C", f)
        if not on_variety(X, B0, f):
            raise ArithmeticError("Cayley point is off the variety")
        flat = [X[i][j] for i in range(N) for j in range(N)]
        if all(peval(p, flat) == 0 for p in jac.values()):
            points_ok += 1
    # off-variety control: a generic rational matrix
    generic = [Fraction(rng.randint(-7, 7), rng.randint(1, 5)) for _ in range(N * N)]
    off_values = [peval(p, generic) for p in jac.values()]
    off_nonzero = any(v != 0 for v in off_values)
    symbolic_zero = all(not v for v in jac.values())
    report.update(
        {
            "mode": "points",
            "points": n_points,
            "points_vanishing": points_ok,
            "off_variety_nonzero": off_nonzero,
            "identically_zero": symbolic_zero,
            "pass": points_ok == n_points,
        }
    )
    return report


def conjugation_invariant_part(spec: PoissonSpec, g: list) -> bool:
    """The ``Omega`` part of STS is invariant under ``X -> g X g^-1`` for ``g`` in the group.

    Checks ``{x_u o phi, x_v o phi} == {x_u, x_v} o phi`` symbolically.
    """
    N = spec.N
    zero = QMatrix.zeros(N * N, N * N)
    om = sts_bracket_table(spec.rdata, r_minus=zero)
    gi = _mat_inv(g)
    # phi^*(x_ij) = sum_ab g_ia x_ab gi_bj
    pull = []
    for i in range(N):
        for j in range(N):
            acc = [pscale(pvar(a * N + b), g[i][a] * gi[b][j]) for a in range(N) for b in range(N) if g[i][a] and gi[b][j]]
            pull.append(padd(*acc))

    def compose(p: Poly) -> Poly:
        acc = []
        for m, c in p.items():
            t = pconst(c)
            for v in m:
                t = pmul(t, pull[v])
            acc.append(t)
        return padd(*acc)

    n = N * N
    for u in range(n):
        for v in range(n):
            if om.bracket(pull[u], pull[v]) != compose(om.table[u][v]):
                return False
    return True


# ---------------------------------------------------------------------------
# semiclassical comparison
# ---------------------------------------------------------------------------


def pbw_reducer(pres):
    """Degree-2 reduction onto nondecreasing words.

    Columns are ordered with the decreasing words first, so every pivot lands
    on a decreasing word when the relations specialize to commutativity at
    q = 1. The surviving nondecreasing words then match commutative monomials
    and the coordinates stay regular at q = 1, which the deglex normal basis
    does not guarantee.
    """
    from .exactalg import Reducer, echelonize, frac_row_to_poly_row

    letters = pres.alphabet.matrix_letters
    dec = [(a, b) for a in letters for b in letters if a > b]
    inc = [(a, b) for a in letters for b in letters if a <= b]
    cols = dec + inc
    index = {w: i for i, w in enumerate(cols)}
    rows = []
    for r in pres.relations.relations:
        if r.degree() != 2 or any(x < 0 for w in r.terms for x in w):
            continue
        rows.append(frac_row_to_poly_row({index[w]: c for w, c in r.terms.items()}))
    piv = echelonize(rows)
    if sorted(piv) != list(range(len(dec))):
        raise NotFlatError("degree-2 relations do not solve for the decreasing words")
    return Reducer(piv), index, inc


def semiclassical_compare(pres, spec: PoissonSpec) -> dict:
    """Find one constant ``c`` with ``d/dq [a, b]|_{q=1} = c {a, b}`` for all generator pairs.

    Commutators are reduced onto nondecreasing words (see :func:`pbw_reducer`),
    which correspond one-to-one to commutative monomials.
    """
    try:
        red, index, inc = pbw_reducer(pres)
    except NotFlatError as exc:
        return {
            "algebra": pres.kind.lower(),
            "bracket": spec.kind,
            "series": str(pres.series),
            "applicable": False,
            "reason": str(exc),
            "pass": None,
        }
    letters = pres.alphabet.matrix_letters
    c = None
    consistent = True
    n_pairs = 0
    for a in letters:
        for b in letters:
            n_pairs += 1
            vec: dict = {}
            for w, s in (((a, b), 1), ((b, a), -1)):
                j = index[w]
                vec[j] = vec.get(j, 0) + s
            vec = {j: QFrac.coerce(v) for j, v in vec.items() if v}
            first: dict = {}
            for j, coef in red.reduce(vec).items():
                if coef.evaluate_at(1) != 0:
                    consistent = False
                d = coef.derivative_at_one()
                if d:
                    first[tuple(sorted(inc[j - (len(index) - len(inc))]))] = d
            ratio = _ratio(first, spec.table[a][b])
            if ratio is False:
                consistent = False
            elif ratio is not None:
                if c is None:
                    c = ratio
                elif c != ratio:
                    consistent = False
    return {
        "algebra": pres.kind.lower(),
        "bracket": spec.kind,
        "series": str(pres.series),
        "applicable": True,
        "c": None if c is None else str(c),
        "pairs": n_pairs,
        "pass": consistent and c is not None,
    }


def _ratio(quantum: dict, classical: dict):
    """``c`` with ``quantum = c * classical``; None if both vanish; False if not proportional."""
    if not quantum and not classical:
        return None
    if not classical or not quantum or set(quantum) != set(classical):
        return False
    it = iter(classical)
    m0 = next(it)
    c = Fraction(quantum[m0]) / classical[m0]
    for m in classical:
        if quantum[m] != c * classical[m]:
            return False
    return c
