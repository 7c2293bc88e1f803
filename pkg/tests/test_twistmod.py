import pytest

from qgw.exactalg import QMatrix
from qgw.freenc import Alphabet, RelationSet, build_quotient
from qgw.qfun import frt_relation_polys, re_relations
from qgw.rmat import SeriesId
from qgw.twistmod import (
    generator_cocycle,
    partition_independent,
    span_dim,
    transport_ideal,
    verify_twist_correspondence,
)


@pytest.mark.parametrize("rank", [1, 2])
def test_series_a_transport_matches_re(rdata_cache, rank):
    rep = verify_twist_correspondence(SeriesId("A", rank), rdata=rdata_cache("A", rank))
    assert rep["pass"]
    assert rep["frt_span_dim"] == rep["re_span_dim"]


def test_flipped_legs_fail(rdata_cache):
    rep = verify_twist_correspondence(SeriesId("A", 1), flip_legs=True, rdata=rdata_cache("A", 1))
    assert not rep["degree2_span_equal"]
    assert not rep["pass"]


def test_F2_limit_and_determinant(rdata_cache):
    gc = generator_cocycle(rdata_cache("A", 1))
    F2 = gc.F2
    assert F2.map(lambda x: x.evaluate_at(1)) == QMatrix.identity(16).map(lambda x: x.evaluate_at(1))
    d = F2.det()
    assert d.is_laurent() and len(d.to_qscalar().terms) == 1


def test_omega3_partition_independence(rdata_cache):
    assert partition_independent(generator_cocycle(rdata_cache("A", 1)), 3)


def test_transport_preserves_span_dimension(rdata_cache):
    rd = rdata_cache("A", 1)
    gc = generator_cocycle(rd)
    frt = frt_relation_polys(rd.R, Alphabet(2))
    assert span_dim([gc.apply(p) for p in frt]) == span_dim(frt) == 6


def test_transported_quotient_dims(rdata_cache):
    rd = rdata_cache("A", 1)
    gc = generator_cocycle(rd)
    A = Alphabet(2)
    moved = transport_ideal(RelationSet(A, frt_relation_polys(rd.R, A)), gc, Alphabet(2, symbol="K"))
    assert build_quotient(moved, 3).dims() == build_quotient(re_relations(rd), 3).dims() == [1, 4, 10, 20]


@pytest.mark.parametrize("series", ["B", "C"])
def test_group_relations_transport(rdata_cache, series):
    rep = verify_twist_correspondence(SeriesId(series, 1), rdata=rdata_cache(series, 1))
    assert rep["group_span_equal"]
    assert rep["pass"]
