"""Quadratic presentations of quantized matrix function algebras and their group quotients.

Three kinds of presentation share one alphabet layout:

* ``FRT``: generators ``T^i_j`` with ``R T1 T2 = T2 T1 R``;
* ``RE``: generators ``K^i_j`` with ``R21 K1 R12 K2 = K2 R21 K1 R12``;
* ``CLASSICAL``: the commutative coordinate ring, used as the dimension oracle.

Group models: ``free`` (no group relations), ``sharp`` (homogenized group
relations with a central degree-1 generator ``f``) and ``unitf`` (the sharp
model read at filtration level, i.e. after setting ``f = 1``).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Optional

from .exactalg import QF_ONE, QFrac, QMatrix, echelonize, frac_row_to_poly_row
from .freenc import (
    F_LETTER,
    Alphabet,
    DegreeOverflow,
    GradedQuotient,
    NCPoly,
    RelationSet,
    build_quotient,
    canonical,
    centralizer_basis,
)
from .rmat import ConventionError, RMatrixData, SeriesId, build_R, conj_flip

KINDS = ("FRT", "RE", "CLASSICAL")
MODELS = ("free", "sharp", "unitf")

# default degree caps by matrix size
DEFAULT_CAPS = {2: 4, 3: 3}


def default_cap(N: int) -> int:
    return DEFAULT_CAPS.get(N, 2)


@dataclass
class AlgebraPresentation:
    kind: str
    rdata: RMatrixData
    alphabet: Alphabet
    relations: RelationSet
    group_model: str = "free"
    notes: dict = field(default_factory=dict)

    @property
    def N(self) -> int:
        return self.rdata.N

    @property
    def series(self) -> SeriesId:
        return self.rdata.id

    def quotient(self, max_degree: int) -> GradedQuotient:
        return build_quotient(self.relations, max_degree)

    def to_json(self) -> dict:
        return presentation_to_json(self)


# ---------------------------------------------------------------------------
# relation assembly
# ---------------------------------------------------------------------------


def _sparse4(M: QMatrix, N: int) -> dict:
    """``{(i,k): [(j,l, coef)]}`` for the nonzero entries of an operator on V⊗V."""
    out: dict = {}
    for r, c, x in M.nonzero_items():
        i, k = divmod(r, N)
        j, l = divmod(c, N)
        out.setdefault((i, k), []).append((j, l, QFrac.coerce(x)))
    return out


def _by_col(M: QMatrix, N: int) -> dict:
    """``{(j,l): [(i,k, coef)]}``."""
    out: dict = {}
    for r, c, x in M.nonzero_items():
        i, k = divmod(r, N)
        j, l = divmod(c, N)
        out.setdefault((j, l), []).append((i, k, QFrac.coerce(x)))
    return out


def _add(t: dict, w, c):
    s = t.get(w)
    t[w] = c if s is None else s + c


def frt_relation_polys(R: QMatrix, A: Alphabet) -> list[NCPoly]:
    """The ``N^4`` entries of ``R T1 T2 - T2 T1 R`` (unreduced)."""
    N = A.N
    rows = _sparse4(R, N)
    cols = _by_col(R, N)
    L = A.letter
    out = []
    for i in range(N):
        for k in range(N):
            for j in range(N):
                for l in range(N):
                    t: dict = {}
                    for a, b, c in rows.get((i, k), ()):
                        _add(t, (L(a, j), L(b, l)), c)
                    for a, b, c in cols.get((j, l), ()):
                        _add(t, (L(k, b), L(i, a)), -c)
                    out.append(NCPoly(t))
    return out


def re_relation_polys(R: QMatrix, A: Alphabet) -> list[NCPoly]:
    """The ``N^4`` entries of ``R21 K1 R12 K2 - K2 R21 K1 R12`` (unreduced)."""
    N = A.N
    R21 = conj_flip(R, N)
    r21_rows = _sparse4(R21, N)
    r_rows = _sparse4(R, N)
    r_cols = _by_col(R, N)
    L = A.letter
    out = []
    for i in range(N):
        for k in range(N):
            for j in range(N):
                for l in range(N):
                    t: dict = {}
                    # (R21)^{ik}_{ab} K^a_c R^{cb}_{jd} K^d_l
                    for a, b, c1 in r21_rows.get((i, k), ()):
                        for c in range(N):
                            for jj, d, c2 in r_rows.get((c, b), ()):
                                if jj == j:
                                    _add(t, (L(a, c), L(d, l)), c1 * c2)
                    # K^k_b (R21)^{ib}_{ad} K^a_c R^{cd}_{jl}
                    for c, d, c2 in r_cols.get((j, l), ()):
                        for b in range(N):
                            for a, dd, c1 in r21_rows.get((i, b), ()):
                                if dd == d:
                                    _add(t, (L(k, b), L(a, c)), -(c1 * c2))
                    out.append(NCPoly(t))
    return out


def commutator_polys(A: Alphabet) -> list[NCPoly]:
    m = A.matrix_letters
    return [NCPoly({(x, y): 1, (y, x): -1}) for x in m for y in m if x < y]


def frt_relations(rdata: RMatrixData, alphabet: Optional[Alphabet] = None) -> RelationSet:
    A = alphabet or Alphabet(rdata.N, symbol="T")
    return RelationSet(A, frt_relation_polys(rdata.R, A))


def re_relations(rdata: RMatrixData, alphabet: Optional[Alphabet] = None) -> RelationSet:
    A = alphabet or Alphabet(rdata.N, symbol="K")
    return RelationSet(A, re_relation_polys(rdata.R, A))


def classical_relations(rdata: RMatrixData, alphabet: Optional[Alphabet] = None) -> RelationSet:
    A = alphabet or Alphabet(rdata.N, symbol="x")
    return RelationSet(A, commutator_polys(A))


# ---------------------------------------------------------------------------
# commutative limits
# ---------------------------------------------------------------------------


def classical_limit(p: NCPoly) -> dict:
    """Value at q = 1 as a commutative polynomial ``{sorted word: Fraction}``."""
    out: dict = {}
    for w, c in p.terms.items():
        v = c.evaluate_at(1)
        if v:
            key = tuple(sorted(w))
            out[key] = out.get(key, 0) + v
    return {k: v for k, v in out.items() if v}


def classical_determinant(A: Alphabet) -> dict:
    N = A.N
    out: dict = {}
    for perm in permutations(range(N)):
        inv = sum(1 for a in range(N) for b in range(a + 1, N) if perm[a] > perm[b])
        key = tuple(sorted(A.letter(i, perm[i]) for i in range(N)))
        out[key] = Fraction((-1) ** inv)
    return out


def identity_word(A: Alphabet) -> tuple:
    return tuple(A.letter(i, i) for i in range(A.N))


# ---------------------------------------------------------------------------
# quantum determinant
# ---------------------------------------------------------------------------


def _solve_limit(cands: list[NCPoly], target: dict) -> Optional[list[Fraction]]:
    """Rational coefficients ``a`` with ``sum a_i limit(cand_i) = target``; None if impossible or not unique."""
    lims = [classical_limit(c) for c in cands]
    keys = sorted(set(target).union(*[set(l) for l in lims]))
    n = len(cands)
    # augmented system over Q
    rows = [[Fraction(l.get(k, 0)) for l in lims] + [Fraction(target.get(k, 0))] for k in keys]
    piv_cols = []
    r = 0
    for col in range(n):
        p = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pv = rows[r][col]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv_cols.append(col)
        r += 1
    if any(all(x == 0 for x in row[:n]) and row[n] for row in rows):
        return None
    if len(piv_cols) < n:
        return None
    sol = [Fraction(0)] * n
    for i, col in enumerate(piv_cols):
        sol[col] = rows[i][n]
    return sol


def normalize_identity_word(p: NCPoly, A: Alphabet) -> NCPoly:
    w = identity_word(A)
    c = p.terms.get(w)
    if c is None:
        raise ConventionError("identity-permutation word missing from the determinant candidate")
    return p.scale(c.inverse())


def quantum_determinant(pres: AlgebraPresentation, gq: Optional[GradedQuotient] = None) -> NCPoly:
    """Degree-``N`` central element with classical limit ``det``.

    FRT side: solved from the degree-``N`` centralizer of the free-matrix
    quotient. There the centralizer is one-dimensional, so centrality plus the
    classical limit fix the element up to the normalization (coefficient 1 on
    ``X^1_1 X^2_2 ... X^N_N``).

    RE side: the centralizer in degree ``N`` also contains powers and products
    of lower central elements, so the limit condition alone does not single out
    one element over Q(q). The RE determinant is therefore the twist transport
    of the FRT determinant, checked to be central and to have the determinant
    as classical limit.
    """
    if pres.series.series != "A":
        raise ValueError("quantum_determinant is defined here for series A")
    if pres.kind not in ("FRT", "RE"):
        raise ValueError("quantum_determinant needs an FRT or RE presentation")
    N = pres.N
    A = pres.alphabet.with_f(False)
    if pres.kind == "FRT":
        base = build_quotient(frt_relations(pres.rdata, A), N + 1)
        cands = centralizer_basis(base, N)
        if len(cands) != 1:
            raise ConventionError(f"expected a one-dimensional degree-{N} centralizer, found {len(cands)}")
        sol = _solve_limit(cands, classical_determinant(A))
        if sol is None:
            raise ConventionError("no central element with the classical determinant as limit")
        det = normalize_identity_word(cands[0].scale(QFrac.coerce(sol[0])), A)
    else:
        from .twistmod import generator_cocycle, transport_element

        gc = generator_cocycle(pres.rdata)
        frt_pres = make_presentation(pres.series, "FRT", "free")
        det_t = quantum_determinant(frt_pres)
        base = build_quotient(re_relations(pres.rdata, A), N + 1)
        # the transported word expansion itself; deglex normal forms can have poles at q = 1
        det = normalize_identity_word(transport_element(det_t, gc, A), A)
    _check_central(det, base)
    if classical_limit(det) != classical_determinant(A):
        raise ConventionError("determinant candidate has the wrong classical limit")
    return det


def _check_central(z: NCPoly, gq: GradedQuotient):
    for x in gq.alphabet.matrix_letters:
        g = NCPoly.word((x,))
        if gq.commutator(z, g):
            raise ConventionError("determinant candidate is not central")


# ---------------------------------------------------------------------------
# group relations
# ---------------------------------------------------------------------------


def _fpow(n: int) -> tuple:
    return (F_LETTER,) * n


def _mat_inverse(M: QMatrix) -> list[list[QFrac]]:
    inv = M.inverse()
    return [[QFrac.coerce(inv[(i, j)]) for j in range(M.cols)] for i in range(M.rows)]


def _mat(M: QMatrix) -> list[list[QFrac]]:
    return [[QFrac.coerce(M[(i, j)]) for j in range(M.cols)] for i in range(M.rows)]


def orthogonality_polys(B: QMatrix, A: Alphabet) -> list[NCPoly]:
    """Entries of ``B X^t B^-1 X - f^2`` and ``X B X^t B^-1 - f^2`` (``X`` the generator matrix).

    The second family is written as ``X B X^t - f^2 B`` (right-multiplied by ``B``).
    """
    N = A.N
    Bm = _mat(B)
    Bi = _mat_inverse(B)
    L = A.letter
    ff = _fpow(2)
    out = []
    # (X^t B^-1 X)_{jl} = sum_{ik} Binv_{ik} X^i_j X^k_l  = f^2 Binv_{jl}
    for j in range(N):
        for l in range(N):
            t: dict = {}
            for i in range(N):
                for k in range(N):
                    if Bi[i][k]:
                        _add(t, (L(i, j), L(k, l)), Bi[i][k])
            if Bi[j][l]:
                _add(t, ff, -Bi[j][l])
            out.append(NCPoly(t))
    # (X B X^t)_{ik} = sum_{jl} B_{jl} X^i_j X^k_l = f^2 B_{ik}
    for i in range(N):
        for k in range(N):
            t = {}
            for j in range(N):
                for l in range(N):
                    if Bm[j][l]:
                        _add(t, (L(i, j), L(k, l)), Bm[j][l])
            if Bm[i][k]:
                _add(t, ff, -Bm[i][k])
            out.append(NCPoly(t))
    return out


def twisted_quadratic(R: QMatrix, weights: dict, A: Alphabet) -> NCPoly:
    """RE-side image of ``sum w[(i,j,k,l)] T^i_j T^k_l``.

    Uses ``T^i_j T^k_l -> sum (R^-1)^{ik}_{ab} R^{cb}_{jd} K^a_c K^d_l``.
    """
    N = A.N
    Rinv = R.inverse()
    ri = _sparse4(Rinv, N)
    rr = _sparse4(R, N)
    L = A.letter
    t: dict = {}
    for (i, j, k, l), w in weights.items():
        for a, b, c1 in ri.get((i, k), ()):
            for c in range(N):
                for jj, d, c2 in rr.get((c, b), ()):
                    if jj == j:
                        _add(t, (L(a, c), L(d, l)), w * c1 * c2)
    return NCPoly(t)


def re_orthogonality_polys(rdata: RMatrixData, A: Alphabet) -> list[NCPoly]:
    """RE-side orthogonality relations assembled directly from the twisted quadratic form."""
    N = A.N
    Bm = _mat(rdata.B_form)
    Bi = _mat_inverse(rdata.B_form)
    ff = NCPoly.word(_fpow(2))
    out = []
    for j in range(N):
        for l in range(N):
            w = {(i, j, k, l): Bi[i][k] for i in range(N) for k in range(N) if Bi[i][k]}
            p = twisted_quadratic(rdata.R, w, A)
            if Bi[j][l]:
                p = p - ff.scale(Bi[j][l])
            out.append(p)
    for i in range(N):
        for k in range(N):
            w = {(i, j, k, l): Bm[j][l] for j in range(N) for l in range(N) if Bm[j][l]}
            p = twisted_quadratic(rdata.R, w, A)
            if Bm[i][k]:
                p = p - ff.scale(Bm[i][k])
            out.append(p)
    return out


def group_relations(pres: AlgebraPresentation, model: str) -> RelationSet:
    """Relations of ``pres`` augmented with the homogenized group relations of ``model``."""
    if model not in MODELS:
        raise ValueError(f"unknown group model {model!r}")
    if model == "free":
        return pres.relations
    A = pres.alphabet
    if not A.has_f:
        raise ValueError("the sharp model needs the central generator f in the alphabet")
    sid = pres.series
    N = pres.N
    base = [r for r in pres.relations.relations]
    if sid.series == "A":
        if pres.kind == "CLASSICAL":
            det = NCPoly({w: c for w, c in classical_determinant(A).items()})
        else:
            det = quantum_determinant(pres)
        extra = [det - NCPoly.word(_fpow(N))]
    elif pres.kind == "FRT":
        extra = orthogonality_polys(pres.rdata.B_form, A)
    elif pres.kind == "RE":
        extra = re_orthogonality_polys(pres.rdata, A)
    else:
        B0 = pres.rdata.B_form.map(lambda x: _const(x.evaluate_at(1)))
        extra = orthogonality_polys(B0, A)
    return RelationSet(A, base + extra)


def _const(v):
    from .exactalg import qs

    return qs(v)


# ---------------------------------------------------------------------------
# presentations
# ---------------------------------------------------------------------------


def make_presentation(sid: SeriesId, kind: str, model: str = "free", rdata: Optional[RMatrixData] = None) -> AlgebraPresentation:
    if kind not in KINDS:
        raise ValueError(f"unknown presentation kind {kind!r}")
    if model not in MODELS:
        raise ValueError(f"unknown group model {model!r}")
    rdata = rdata or build_R(sid)
    has_f = model != "free"
    symbol = {"FRT": "T", "RE": "K", "CLASSICAL": "x"}[kind]
    A = Alphabet(rdata.N, has_f=has_f, symbol=symbol)
    base_builder = {"FRT": frt_relations, "RE": re_relations, "CLASSICAL": classical_relations}[kind]
    rels = base_builder(rdata, A)
    pres = AlgebraPresentation(kind, rdata, A, rels, model)
    if model != "free":
        pres.relations = group_relations(pres, model)
    return pres


def classical_oracle(pres: AlgebraPresentation) -> AlgebraPresentation:
    return make_presentation(pres.series, "CLASSICAL", pres.group_model, pres.rdata)


# ---------------------------------------------------------------------------
# flatness
# ---------------------------------------------------------------------------


def f_injectivity(gq: GradedQuotient, d_max: int) -> list[bool]:
    """Whether multiplication by ``f`` is injective from degree ``d`` to ``d+1`` for ``d < d_max``."""
    out = []
    for d in range(min(d_max, gq.max_degree - 1) + 1):
        imgs = [gq.coordinates(NCPoly.word((F_LETTER,) + w), d + 1) for w in gq.normal_words(d)]
        rank = len(echelonize(frac_row_to_poly_row(r) for r in imgs if r))
        out.append(rank == gq.dim(d))
    return out


def flatness_check(pres: AlgebraPresentation, d_max: int) -> dict:
    """Compare quotient dims with the classical oracle degreewise."""
    q_gq = pres.quotient(d_max + (1 if pres.group_model == "unitf" else 0))
    c_gq = classical_oracle(pres).quotient(d_max)
    qd = q_gq.dims()[: d_max + 1]
    cd = c_gq.dims()
    per = [{"degree": d, "quantum": qd[d], "classical": cd[d], "pass": qd[d] == cd[d]} for d in range(d_max + 1)]
    report = {
        "series": str(pres.series),
        "algebra": pres.kind.lower(),
        "model": pres.group_model,
        "max_degree": d_max,
        "quantum_dims": qd,
        "classical_dims": cd,
        "degrees": per,
        "pass": qd == cd,
    }
    if pres.group_model == "unitf":
        inj = f_injectivity(q_gq, d_max)
        report["filtered_dims"] = qd
        report["f_injective"] = inj
        report["pass"] = report["pass"] and all(inj)
    return report


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def poly_to_json(p: NCPoly, A: Alphabet) -> list:
    return [[A.word_name(w), str(c)] for w, c in sorted(p.terms.items(), key=lambda x: (len(x[0]), x[0]))]


def presentation_to_json(pres: AlgebraPresentation) -> dict:
    A = pres.alphabet
    return {
        "kind": pres.kind,
        "series": pres.series.series,
        "rank": pres.series.rank,
        "N": pres.N,
        "model": pres.group_model,
        "alphabet": [A.name(x) for x in A.letters],
        "relations": [poly_to_json(r, A) for r in pres.relations.relations],
    }


def presentation_json(pres: AlgebraPresentation) -> str:
    return json.dumps(presentation_to_json(pres), indent=2, sort_keys=True)
