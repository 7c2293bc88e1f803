import pytest

from qgw.centermod import (
    center_report,
    classical_invariant_dims,
    freeness_report,
    invariants_by_derivations,
    invariants_by_group,
    is_central,
    quantum_trace,
    trace_weights,
    transported_center_inclusion,
)
from qgw.cli import center_generators
from qgw.exactalg import Q, QFrac
from qgw.freenc import F_LETTER, NCPoly
from qgw.poisson import classical_form
from qgw.qfun import make_presentation
from qgw.rmat import SeriesId
from qgw.twistmod import generator_cocycle

SL2 = SeriesId("A", 1)


@pytest.fixture(scope="module")
def sl2_quotients():
    re = make_presentation(SL2, "RE")
    frt = make_presentation(SL2, "FRT")
    return re, re.quotient(5), frt.quotient(5)


def test_gl_invariants_by_two_routes():
    # gl2 invariants in degree d: monomials in (trace, det), i.e. floor(d/2) + 1
    dims = classical_invariant_dims(SL2, 4)
    assert dims["derivations"] == dims["group"] == [1, 1, 2, 2, 3]


def test_orthogonal_invariants_agree(rdata_cache):
    sid = SeriesId("B", 1)
    B0 = classical_form(rdata_cache("B", 1))
    assert [invariants_by_derivations(sid, d, B0) for d in range(3)] == [
        invariants_by_group(sid, d, seed=1, B0=B0) for d in range(3)
    ]


def test_re_center_matches_invariants(rdata_cache, sl2_quotients):
    _, re_gq, _ = sl2_quotients
    rep = center_report(re_gq, rdata_cache("A", 1), 4)
    assert rep["center_dims"] == [1, 1, 2, 2, 3]
    assert rep["match"] and rep["pairwise_commute"] and rep["classical_routes_agree"]


def test_frt_center_has_no_degree_one_part(rdata_cache, sl2_quotients):
    _, _, frt_gq = sl2_quotients
    rep = center_report(frt_gq, rdata_cache("A", 1), 4)
    assert rep["center_dims"] == [1, 0, 1, 0, 1]


def test_quantum_trace_weights(rdata_cache, sl2_quotients):
    re, re_gq, _ = sl2_quotients
    z = quantum_trace(re_gq, rdata_cache("A", 1))
    assert is_central(re_gq, z)
    W = trace_weights(z, re.alphabet)
    assert W[0][1] == W[1][0] == "0"
    assert len(z.terms) == 2
    L = re.alphabet.letter
    assert z.terms[(L(1, 1),)] == QFrac.coerce(Q ** -2)


def test_transported_frt_center_is_central(rdata_cache, sl2_quotients):
    _, re_gq, frt_gq = sl2_quotients
    rep = transported_center_inclusion(frt_gq, re_gq, generator_cocycle(rdata_cache("A", 1)), 4)
    assert rep["pass"]
    assert [p["transported_rank"] for p in rep["degrees"]] == [1, 0, 1, 0, 1]


@pytest.fixture(scope="module")
def sl2_freeness(sl2_quotients):
    _, re_gq, _ = sl2_quotients
    gens = center_generators(re_gq, 2) + [(NCPoly.word((F_LETTER,)), 1)]
    gq = make_presentation(SL2, "RE", "sharp").quotient(4)
    return gq, gens, freeness_report(gq, gens, 4)


def test_freeness_dims(sl2_freeness):
    _, _, rep = sl2_freeness
    assert rep["A_dims"] == [1, 5, 14, 30, 55]
    assert rep["E_dims"] == [1, 3, 5, 7, 9]
    assert rep["I_dims"] == [1, 2, 3, 4, 5]
    assert rep["degrees"][4]["convolution"] == [9, 14, 15, 12, 5]
    assert rep["pass"]


def test_freeness_control_fails(sl2_freeness):
    gq, gens, rep = sl2_freeness
    bad = [(NCPoly.word((1,)), 1)] + gens[1:]
    ctrl = freeness_report(gq, bad, 4, fixed_E=rep["_E"])
    assert not ctrl["pass"]
    assert ctrl["first_failure"] is not None and ctrl["first_failure"] <= 3
