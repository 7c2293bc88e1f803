"""Centers of the quantized algebras, classical invariants, and freeness over the center."""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Optional

import flint

from .exactalg import QFrac, echelonize, frac_row_to_poly_row
from .freenc import F_LETTER, DegreeOverflow, GradedQuotient, NCPoly, centralizer_basis
from .rmat import ConventionError, RMatrixData, SeriesId
from .poisson import cayley_point, classical_form, _mat_inv, _mat_mul


# ---------------------------------------------------------------------------
# classical invariants of conjugation
# ---------------------------------------------------------------------------


def _monomials(n_vars: int, d: int) -> list[tuple]:
    return list(combinations_with_replacement(range(n_vars), d))


def lie_algebra_basis(sid: SeriesId, B0: Optional[list] = None) -> list[list[list[Fraction]]]:
    """Rational basis of the Lie algebra acting on V (``gl_N`` for series A)."""
    N = sid.N
    if sid.series == "A":
        out = []
        for a in range(N):
            for c in range(N):
                m = [[Fraction(0)] * N for _ in range(N)]
                m[a][c] = Fraction(1)
                out.append(m)
        return out
    symplectic = sid.series == "C"
    out = []
    for i in range(N):
        for j in range(i, N):
            if i == j and not symplectic:
                continue
            Z = [[Fraction(0)] * N for _ in range(N)]
            Z[i][j] = Fraction(1)
            Z[j][i] = Fraction(1 if symplectic else -1)
            out.append(_mat_mul(B0, Z))
    return out


def _linear_forms_conj(g, gi, N) -> list[dict]:
    """``(g X g^-1)_ij`` as linear forms ``{var: coef}``."""
    out = []
    for i in range(N):
        for j in range(N):
            form = {}
            for a in range(N):
                if not g[i][a]:
                    continue
                for b in range(N):
                    if gi[b][j]:
                        form[a * N + b] = form.get(a * N + b, 0) + g[i][a] * gi[b][j]
            out.append({k: v for k, v in form.items() if v})
    return out


def _rank(rows: list[dict], ncols: int) -> int:
    rows = [r for r in rows if r]
    if not rows:
        return 0
    M = flint.fmpq_mat(len(rows), ncols)
    for i, r in enumerate(rows):
        for j, v in r.items():
            M[i, j] = flint.fmpq(v.numerator, v.denominator)
    return M.rref()[1]


def invariants_by_derivations(sid: SeriesId, d: int, B0: Optional[list] = None) -> int:
    """Dimension of degree-``d`` polynomials killed by every adjoint derivation."""
    N = sid.N
    n = N * N
    mons = _monomials(n, d)
    idx = {m: i for i, m in enumerate(mons)}
    if d == 0:
        return 1
    rows_by_out: dict = {}
    for k, xi in enumerate(lie_algebra_basis(sid, B0)):
        # D(x_ij) = ([xi, X])_ij
        dx = []
        for i in range(N):
            for j in range(N):
                form = {}
                for a in range(N):
                    if xi[i][a]:
                        form[a * N + j] = form.get(a * N + j, 0) + xi[i][a]
                    if xi[a][j]:
                        form[i * N + a] = form.get(i * N + a, 0) - xi[a][j]
                dx.append({v: c for v, c in form.items() if c})
        for col, m in enumerate(mons):
            for pos, v in enumerate(m):
                rest = m[:pos] + m[pos + 1:]
                for w, c in dx[v].items():
                    out = tuple(sorted(rest + (w,)))
                    key = (k, idx[out])
                    row = rows_by_out.setdefault(key, {})
                    row[col] = row.get(col, 0) + c
    rows = [{c: v for c, v in r.items() if v} for r in rows_by_out.values()]
    return len(mons) - _rank(rows, len(mons))


def group_points(sid: SeriesId, count: int, seed: int = 0, B0: Optional[list] = None) -> list:
    rng = random.Random(seed)
    N = sid.N
    out = []
    while len(out) < count:
        if sid.series == "A":
            g = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(N)] for _ in range(N)]
            try:
                _mat_inv(g)
            except ZeroDivisionError:
                continue
        else:
            g = cayley_point(B0, rng, sid.series == "C", Fraction(1))
        out.append(g)
    return out


def invariants_by_group(sid: SeriesId, d: int, n_points: int = 4, seed: int = 0, B0: Optional[list] = None) -> int:
    """Dimension of the degree-``d`` fixed space of conjugation by sampled rational group points."""
    N = sid.N
    n = N * N
    mons = _monomials(n, d)
    idx = {m: i for i, m in enumerate(mons)}
    if d == 0:
        return 1
    rows_by_out: dict = {}
    for k, g in enumerate(group_points(sid, n_points, seed, B0)):
        forms = _linear_forms_conj(g, _mat_inv(g), N)
        for col, m in enumerate(mons):
            prod = {(): Fraction(1)}
            for v in m:
                nxt: dict = {}
                for mono, c in prod.items():
                    for w, cw in forms[v].items():
                        key = tuple(sorted(mono + (w,)))
                        nxt[key] = nxt.get(key, 0) + c * cw
                prod = nxt
            prod[m] = prod.get(m, 0) - 1
            for mono, c in prod.items():
                if c:
                    row = rows_by_out.setdefault((k, idx[mono]), {})
                    row[col] = row.get(col, 0) + c
    rows = [{c: v for c, v in r.items() if v} for r in rows_by_out.values()]
    return len(mons) - _rank(rows, len(mons))


def classical_invariant_dims(sid: SeriesId, d_max: int, B0: Optional[list] = None, seed: int = 0) -> dict:
    """Both routes, degree by degree."""
    deriv = [invariants_by_derivations(sid, d, B0) for d in range(d_max + 1)]
    group = [invariants_by_group(sid, d, seed=seed, B0=B0) for d in range(d_max + 1)]
    return {"derivations": deriv, "group": group, "agree": deriv == group}


# ---------------------------------------------------------------------------
# quantum centers
# ---------------------------------------------------------------------------


def commute_in(gq: GradedQuotient, a: NCPoly, b: NCPoly) -> bool:
    return gq.commutator(a, b).is_zero()


def is_central(gq: GradedQuotient, z: NCPoly) -> bool:
    return all(commute_in(gq, z, NCPoly.word((x,))) for x in gq.alphabet.letters if x != F_LETTER)


def center_report(gq: GradedQuotient, rdata: RMatrixData, d_max: int, seed: int = 0) -> dict:
    """Centralizer dims per degree, compared with the classical invariant dims."""
    if d_max + 1 > gq.max_degree:
        raise DegreeOverflow(f"center through degree {d_max} needs the quotient up to {d_max + 1}")
    sid = rdata.id
    B0 = None if sid.series == "A" else classical_form(rdata)
    bases = [centralizer_basis(gq, d) for d in range(d_max + 1)]
    dims = [len(b) for b in bases]
    oracle = classical_invariant_dims(sid, d_max, B0, seed)
    commute = True
    for d1 in range(1, d_max + 1):
        for d2 in range(d1, d_max + 1 - d1):
            for z1 in bases[d1]:
                for z2 in bases[d2]:
                    if not commute_in(gq, z1, z2):
                        commute = False
    A = gq.alphabet
    return {
        "series": str(sid),
        "max_degree": d_max,
        "center_dims": dims,
        "classical_dims": oracle["derivations"],
        "classical_routes_agree": oracle["agree"],
        "match": dims == oracle["derivations"],
        "pairwise_commute": commute,
        "bases": [[str_poly(z, A) for z in b] for b in bases],
        "_bases": bases,
    }


def str_poly(p: NCPoly, A) -> list:
    return [[A.word_name(w), str(c)] for w, c in sorted(p.terms.items(), key=lambda x: (len(x[0]), x[0]))]


def quantum_trace(gq: GradedQuotient, rdata: RMatrixData) -> NCPoly:
    """The degree-1 central element of an RE quotient with the trace as its q = 1 limit."""
    basis = [z for z in centralizer_basis(gq, 1) if all(x != F_LETTER for w in z.terms for x in w)]
    if gq.alphabet.has_f:
        raise ValueError("quantum_trace expects the free RE quotient (no f)")
    if len(basis) != 1:
        raise ConventionError(f"degree-1 centralizer has dimension {len(basis)}, expected 1")
    z = basis[0]
    A = gq.alphabet
    lead = z.terms.get((A.letter(0, 0),))
    if lead is None:
        raise ConventionError("quantum trace has no K^1_1 component")
    z = z.scale(lead.inverse())
    for w, c in z.terms.items():
        i, j = A.index(w[0])
        if c.evaluate_at(1) != (1 if i == j else 0):
            raise ConventionError("quantum trace does not specialize to the trace")
    return z


def trace_weights(z: NCPoly, A) -> list[list[str]]:
    """The weighting matrix ``W`` with ``z = sum W_ji K^i_j``, as strings."""
    N = A.N
    W = [["0"] * N for _ in range(N)]
    for w, c in z.terms.items():
        i, j = A.index(w[0])
        W[j][i] = str(c)
    return W


def transported_center_inclusion(frt_gq: GradedQuotient, re_gq: GradedQuotient, gc, d_max: int) -> dict:
    """Transport the FRT center into the RE quotient and test centrality there."""
    per = []
    for d in range(d_max + 1):
        frt_basis = centralizer_basis(frt_gq, d)
        moved = [re_gq.normal_form(gc.apply(z)) for z in frt_basis]
        central = all(is_central(re_gq, m) for m in moved)
        rank = len(echelonize(frac_row_to_poly_row(re_gq.coordinates(m, d)) for m in moved if m))
        per.append(
            {
                "degree": d,
                "frt_center_dim": len(frt_basis),
                "transported_rank": rank,
                "re_center_dim": len(centralizer_basis(re_gq, d)),
                "inside_re_center": central,
            }
        )
    return {"degrees": per, "pass": all(p["inside_re_center"] and p["transported_rank"] == p["frt_center_dim"] for p in per)}


# ---------------------------------------------------------------------------
# freeness over the center
# ---------------------------------------------------------------------------


def _center_monomials(gens: list[tuple[NCPoly, int]], d: int, gq: GradedQuotient) -> list[NCPoly]:
    """Normal forms of all monomials of total degree ``d`` in the (commuting) generators."""
    out = []

    def rec(start: int, deg: int, acc: NCPoly):
        if deg == d:
            out.append(gq.normal_form(acc))
            return
        for k in range(start, len(gens)):
            g, dg = gens[k]
            if deg + dg <= d:
                rec(k, deg + dg, acc * g)

    rec(0, 0, NCPoly.one())
    return out


def _rank_of(gq: GradedQuotient, elems: list[NCPoly], d: int) -> int:
    return len(echelonize(frac_row_to_poly_row(gq.coordinates(e, d)) for e in elems if e))


def freeness_report(
    gq: GradedQuotient,
    gens: list[tuple[NCPoly, int]],
    d_max: int,
    fixed_E: Optional[list[list[NCPoly]]] = None,
) -> dict:
    """Check ``A_d = sum_i I_i E_{d-i}`` as a direct sum for ``d <= d_max``.

    ``gens`` are center generators with their degrees. ``E_d`` is the span of
    the normal words outside the pivots of ``sum_{i>0} I_i E_{d-i}``. Passing
    ``fixed_E`` reuses a previously chosen ``E`` instead of recomputing it.
    """
    I = [_center_monomials(gens, d, gq) for d in range(d_max + 1)]
    E: list[list[NCPoly]] = []
    per = []
    ok_all = True
    for d in range(d_max + 1):
        lower = [gq.multiply(i, e) for k in range(1, d + 1) for i in I[k] for e in E[d - k]]
        if fixed_E is not None:
            Ed = fixed_E[d]
        else:
            rows = [gq.coordinates(x, d) for x in lower]
            piv = echelonize(frac_row_to_poly_row(r) for r in rows if r)
            words = gq.normal_words(d)
            Ed = [NCPoly.word(words[j]) for j in range(len(words)) if j not in piv]
        E.append(Ed)
        dim_I = [_rank_of(gq, I[k], k) for k in range(d + 1)]
        domain = sum(dim_I[k] * len(E[d - k]) for k in range(d + 1))
        image = _rank_of(gq, lower + list(Ed), d)
        A_d = gq.dim(d)
        injective = image == domain
        surjective = image == A_d
        ok = injective and surjective
        ok_all = ok_all and ok
        per.append(
            {
                "degree": d,
                "A_dim": A_d,
                "I_dim": dim_I[d],
                "E_dim": len(Ed),
                "domain_dim": domain,
                "image_dim": image,
                "convolution": [dim_I[k] * len(E[d - k]) for k in range(d + 1)],
                "injective": injective,
                "surjective": surjective,
                "pass": ok,
            }
        )
    first_fail = next((p["degree"] for p in per if not p["pass"]), None)
    return {
        "degrees": per,
        "A_dims": [p["A_dim"] for p in per],
        "I_dims": [p["I_dim"] for p in per],
        "E_dims": [p["E_dim"] for p in per],
        "first_failure": first_fail,
        "pass": ok_all,
        "_E": E,
    }
