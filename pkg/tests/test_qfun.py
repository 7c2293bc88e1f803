import json
import random
from fractions import Fraction

import pytest

from qgw.exactalg import Q, QFrac
from qgw.freenc import Alphabet, NCPoly, RelationSet, build_quotient, centralizer_basis, ideal_slice
from qgw.qfun import (
    classical_determinant,
    classical_limit,
    commutator_polys,
    flatness_check,
    frt_relation_polys,
    frt_relations,
    make_presentation,
    orthogonality_polys,
    presentation_json,
    quantum_determinant,
    re_relation_polys,
    re_relations,
)
from qgw.rmat import SeriesId

from conftest import fraction_rank


@pytest.mark.parametrize("builder", [frt_relations, re_relations])
def test_sl2_relations_span_six(rdata_cache, builder):
    rels = builder(rdata_cache("A", 1))
    assert len(rels.of_degree(2)) == 6


@pytest.mark.parametrize("builder", [frt_relation_polys, re_relation_polys])
def test_q1_span_is_commutators(rdata_cache, builder):
    A = Alphabet(2)
    words = A.words(2)

    def at1(polys):
        return [[p.evaluate_at(1).get(w, 0) for w in words] for p in polys]

    raw, comm = at1(builder(rdata_cache("A", 1).R, A)), at1(commutator_polys(A))
    assert fraction_rank(raw) == fraction_rank(comm) == fraction_rank(raw + comm) == 6


def test_sl3_degree_two(rdata_cache):
    gq = build_quotient(frt_relations(rdata_cache("A", 2)), 2)
    assert gq.dims() == [1, 9, 45]


def test_frt_quantum_determinant_sl2():
    pres = make_presentation(SeriesId("A", 1), "FRT")
    A = pres.alphabet
    det = quantum_determinant(pres)
    L = A.letter
    expected = NCPoly({(L(0, 0), L(1, 1)): 1, (L(0, 1), L(1, 0)): -QFrac.coerce(Q)})
    gq = pres.quotient(2)
    assert gq.normal_form(det) == gq.normal_form(expected)
    assert classical_limit(det) == classical_determinant(A)


def test_classical_det_is_multiplicative():
    A = Alphabet(3)
    det = classical_determinant(A)
    rng = random.Random(2)

    def ev(m):
        total = Fraction(0)
        for mono, c in det.items():
            t = Fraction(c)
            for x in mono:
                i, j = A.index(x)
                t *= m[i][j]
            total += t
        return total

    for _ in range(5):
        a = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(3)] for _ in range(3)]
        b = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(3)] for _ in range(3)]
        ab = [[sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3)] for i in range(3)]
        assert ev(ab) == ev(a) * ev(b)


def test_re_determinant_is_central_sl2():
    pres = make_presentation(SeriesId("A", 1), "RE")
    det = quantum_determinant(pres)
    gq = pres.quotient(3)
    for x in pres.alphabet.matrix_letters:
        assert gq.commutator(det, NCPoly.word((x,))).is_zero()
    L = pres.alphabet.letter
    assert det.terms[(L(0, 0), L(1, 1))] == QFrac.coerce(1)
    # degree-2 centre: trace squared and the determinant
    assert len(centralizer_basis(gq, 2)) == 2


def test_determinant_rejects_other_series():
    with pytest.raises(ValueError):
        quantum_determinant(make_presentation(SeriesId("C", 1), "FRT"))


@pytest.mark.parametrize("kind", ["FRT", "RE"])
def test_sl2_sharp_model(kind):
    rep = flatness_check(make_presentation(SeriesId("A", 1), kind, "sharp"), 4)
    assert rep["quantum_dims"] == [1, 5, 14, 30, 55]
    assert rep["pass"]


def test_spurious_relation_breaks_flatness():
    pres = make_presentation(SeriesId("A", 1), "FRT")
    A = pres.alphabet
    bogus = NCPoly.word((A.letter(0, 0), A.letter(0, 0)))
    pres.relations = pres.relations.extended([bogus])
    rep = flatness_check(pres, 3)
    assert not rep["pass"]
    assert rep["degrees"][2]["quantum"] < rep["degrees"][2]["classical"]


def test_unit_f_model_sl2():
    rep = flatness_check(make_presentation(SeriesId("A", 1), "RE", "unitf"), 3)
    assert rep["pass"]
    assert all(rep["f_injective"])


@pytest.mark.parametrize("series", ["B", "C"])
@pytest.mark.parametrize("kind", ["FRT", "RE"])
def test_orthogonal_and_symplectic_sharp(series, kind):
    rep = flatness_check(make_presentation(SeriesId(series, 1), kind, "sharp"), 3)
    assert rep["quantum_dims"] == rep["classical_dims"]


def test_transposed_form_is_not_flat(rdata_cache):
    rd = rdata_cache("B", 1)
    good = make_presentation(SeriesId("B", 1), "FRT", "sharp")
    A = good.alphabet
    bad = RelationSet(A, list(frt_relations(rd, A).relations) + orthogonality_polys(rd.B_form.transpose(), A))
    assert build_quotient(bad, 2).dim(2) < good.quotient(2).dim(2)


def test_presentation_json_round_trips():
    pres = make_presentation(SeriesId("A", 1), "RE")
    data = json.loads(presentation_json(pres))
    assert data["kind"] == "RE" and data["N"] == 2
    assert len(data["alphabet"]) == 4
    assert len(data["relations"]) == 6
    assert presentation_json(pres) == presentation_json(make_presentation(SeriesId("A", 1), "RE"))


def test_unknown_kind_or_model():
    with pytest.raises(ValueError):
        make_presentation(SeriesId("A", 1), "XYZ")
    with pytest.raises(ValueError):
        make_presentation(SeriesId("A", 1), "FRT", "bogus")
