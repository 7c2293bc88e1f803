from fractions import Fraction

import pytest

from qgw.exactalg import ONE, Q, QMatrix, qs
from qgw.rmat import (
    SeriesId,
    _r_matrix,
    build_B,
    build_R,
    check_cybe,
    check_hecke,
    check_qybe,
    classical_parts,
    conj_flip,
    flip,
)


@pytest.mark.parametrize("series,rank", [("A", 1), ("A", 2), ("B", 1), ("C", 1), ("C", 2), ("D", 2)])
def test_gates_pass(rdata_cache, series, rank):
    rd = rdata_cache(series, rank)
    assert check_qybe(rd.R)
    assert check_cybe(rd.r_classical)
    assert rd.R.map(lambda x: qs(x.evaluate_at(1))).is_identity()


def test_hecke_for_series_a(rdata_cache):
    assert check_hecke(rdata_cache("A", 1).R)
    assert check_hecke(rdata_cache("A", 2).R)


def test_broken_off_diagonal_fails_qybe():
    R = _r_matrix(SeriesId("A", 1))
    # the (q - 1/q) entry sits at e_21 (x) e_12 in the lower-triangular convention
    bad = QMatrix.from_sparse(4, 4, {**{(r, c): x for r, c, x in R.nonzero_items()}, (2, 1): ONE})
    assert not check_qybe(bad)


def test_flipped_legs_still_solve_qybe(rdata_cache):
    R = rdata_cache("A", 1).R
    assert check_qybe(conj_flip(R, 2))
    assert flip(2) @ flip(2) == QMatrix.identity(4)


def test_classical_r_of_sl2():
    r, r_minus, omega = classical_parts(_r_matrix(SeriesId("A", 1)))
    entries = {(i, j): x.evaluate_at(1) for i, j, x in r.nonzero_items()}
    assert entries == {(0, 0): Fraction(1, 2), (2, 1): Fraction(1), (3, 3): Fraction(1, 2)}
    # Omega is the symmetric part, r_minus the skew part
    assert conj_flip(omega, 2) == omega
    assert conj_flip(r_minus, 2) == -r_minus


def test_cybe_rejects_nonsolution(rdata_cache):
    rd = rdata_cache("A", 1)
    assert not check_cybe(rd.r_classical + rd.r_minus)
    assert check_cybe(QMatrix.zeros(4, 4))


def test_B_form_limits():
    B = build_B(SeriesId("B", 1))
    B0 = B.evaluate_at(1)
    assert B0 == [[0, 0, 1], [0, 1, 0], [1, 0, 0]]
    C0 = build_B(SeriesId("C", 1)).evaluate_at(1)
    assert C0 == [[0, 1], [-1, 0]]


def test_series_validation():
    with pytest.raises(ValueError):
        SeriesId("E", 1)
    with pytest.raises(ValueError):
        SeriesId("D", 1)
    with pytest.raises(ValueError):
        SeriesId("A", 0)
    assert SeriesId("B", 2).N == 5 and SeriesId("C", 2).N == 4 and SeriesId("A", 2).N == 3


def test_series_a_has_no_form():
    with pytest.raises(ValueError):
        build_B(SeriesId("A", 1))
    assert build_R(SeriesId("A", 1)).B_form is None
