"""Standard (zero-weight) R-matrices of the classical series in the basic representation.

Index conventions: a basis vector of ``V⊗V`` with legs ``(i, k)`` has index
``i*N + k``; the entry ``R[(i,k),(j,l)]`` is the coefficient of
``e_ij ⊗ e_kl``.

Every constructed R-matrix is gate-checked (QYBE, classical limit, cYBE of the
derived classical part and, for series A, the Hecke condition) before it is
returned.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .exactalg import ONE, ZERO, Q, QMatrix, QScalar, qs


class ConventionError(RuntimeError):
    """A constructed object failed one of its defining identities."""


SERIES = ("A", "B", "C", "D")


@dataclass(frozen=True)
class SeriesId:
    series: str
    rank: int

    def __post_init__(self):
        if self.series not in SERIES:
            raise ValueError(f"unknown series {self.series!r}; expected one of {', '.join(SERIES)}")
        if not isinstance(self.rank, int) or self.rank < 1:
            raise ValueError(f"rank must be a positive integer, got {self.rank!r}")
        if self.series == "D" and self.rank < 2:
            raise ValueError("series D needs rank >= 2")

    @property
    def N(self) -> int:
        return {"A": self.rank + 1, "B": 2 * self.rank + 1}.get(self.series, 2 * self.rank)

    @property
    def label(self) -> str:
        n = self.N
        return {"A": f"sl({n})", "B": f"so({n})", "C": f"sp({n})", "D": f"so({n})"}[self.series]

    def __str__(self) -> str:
        return f"{self.series}{self.rank}"


@dataclass(frozen=True)
class RMatrixData:
    id: SeriesId
    R: QMatrix
    B_form: Optional[QMatrix]
    r_classical: QMatrix
    r_minus: QMatrix
    Omega_rep: QMatrix

    @property
    def N(self) -> int:
        return self.id.N


# ---------------------------------------------------------------------------
# tensor-leg helpers
# ---------------------------------------------------------------------------


def flip(N: int) -> QMatrix:
    """Leg exchange on V⊗V."""
    return QMatrix.from_sparse(N * N, N * N, {(i * N + k, k * N + i): ONE for i in range(N) for k in range(N)})


def conj_flip(M: QMatrix, N: int) -> QMatrix:
    """``P M P``: the same operator with its two legs exchanged."""
    items = {}
    for a, b, x in M.nonzero_items():
        i, k = divmod(a, N)
        j, l = divmod(b, N)
        items[(k * N + i, l * N + j)] = x
    return QMatrix.from_sparse(M.rows, M.cols, items)


def leg_embed(M: QMatrix, N: int, n: int, legs: tuple[int, int]) -> QMatrix:
    """Embed an operator on V⊗V into V^{⊗n}, acting on ``legs`` (0-based, ordered)."""
    a, b = legs
    dim = N ** n
    items = {}
    nz = list(M.nonzero_items())
    pa = N ** (n - 1 - a)
    pb = N ** (n - 1 - b)
    for base in range(dim):
        ia = (base // pa) % N
        ib = (base // pb) % N
        if ia or ib:
            continue
        for r, c, x in nz:
            i, k = divmod(r, N)
            j, l = divmod(c, N)
            items[(base + i * pa + k * pb, base + j * pa + l * pb)] = x
    return QMatrix.from_sparse(dim, dim, items)


# ---------------------------------------------------------------------------
# series data
# ---------------------------------------------------------------------------


def _rho2(sid: SeriesId) -> list[int]:
    """Twice the Weyl-vector weights attached to the basis of V (integers)."""
    n = sid.rank
    if sid.series == "B":
        # rho = (n-1/2, ..., 1/2, 0, -1/2, ..., -n+1/2)
        return [2 * n - 1 - 2 * i for i in range(n)] + [0] + [-(2 * i + 1) for i in range(n)]
    if sid.series == "C":
        return [2 * (n - i) for i in range(n)] + [-2 * (i + 1) for i in range(n)]
    if sid.series == "D":
        return [2 * (n - 1 - i) for i in range(n)] + [-2 * i for i in range(n)]
    raise ValueError("no rho vector for series A")


def _eps(sid: SeriesId) -> list[int]:
    N = sid.N
    if sid.series == "C":
        return [1] * (N // 2) + [-1] * (N // 2)
    return [1] * N


def _qpow(sid: SeriesId, half_exponent: int) -> QScalar:
    """``q_std ** (half_exponent / 2)`` expressed in the working parameter.

    For series B the working parameter is ``q_std ** (1/2)``, which keeps
    every entry Laurent; for C and D all half exponents are even.
    """
    if sid.series == "B":
        return QScalar.monomial(1, half_exponent)
    if half_exponent % 2:
        raise ConventionError(f"odd half-exponent {half_exponent} for series {sid.series}")
    return QScalar.monomial(1, half_exponent // 2)


def _r_matrix(sid: SeriesId) -> QMatrix:
    """The R-matrix with its off-diagonal ``(q - 1/q)`` terms in the lower triangle.

    Assembled in the upper-triangular form and returned with legs exchanged.
    """
    return conj_flip(_r_upper(sid), sid.N)


def _r_upper(sid: SeriesId) -> QMatrix:
    N = sid.N
    items: dict = {}

    def put(i, j, k, l, x):
        key = (i * N + k, j * N + l)
        items[key] = items.get(key, ZERO) + x

    if sid.series == "A":
        qq = Q
        for i in range(N):
            for j in range(N):
                put(i, i, j, j, qq if i == j else ONE)
        for i in range(N):
            for j in range(i + 1, N):
                put(i, j, j, i, qq - qq ** -1)
        return QMatrix.from_sparse(N * N, N * N, items)

    rho2 = _rho2(sid)
    eps = _eps(sid)
    qq = _qpow(sid, 2)
    qinv = _qpow(sid, -2)
    diff = qq - qinv

    def prime(i):
        return N - 1 - i

    for i in range(N):
        for j in range(N):
            if i == j:
                put(i, i, i, i, ONE if i == prime(i) else qq)
            elif j == prime(i):
                put(i, i, j, j, qinv)
            else:
                put(i, i, j, j, ONE)
    for i in range(N):
        for j in range(i + 1, N):
            put(i, j, j, i, diff)
            coef = -diff * _qpow(sid, rho2[j] - rho2[i]) * (eps[i] * eps[j])
            put(i, j, prime(i), prime(j), coef)
    return QMatrix.from_sparse(N * N, N * N, {k: v for k, v in items.items() if v})


def build_B(sid: SeriesId) -> QMatrix:
    """Invariant metric ``B`` of the orthogonal/symplectic series.

    Antidiagonal: ``B[i, i'] = eps_i * q**(-rho_i)``, so that ``B`` at q = 1 is
    the classical form (symmetric for B/D, antisymmetric for C).
    """
    if sid.series == "A":
        raise ValueError("series A has no invariant bilinear form on V")
    N = sid.N
    rho2 = _rho2(sid)
    eps = _eps(sid)
    items = {(i, N - 1 - i): _qpow(sid, -rho2[i]) * eps[i] for i in range(N)}
    return QMatrix.from_sparse(N, N, items)


# ---------------------------------------------------------------------------
# Yang-Baxter checks
# ---------------------------------------------------------------------------


def _perfect_root(n: int) -> int:
    r = int(round(n ** 0.5))
    for c in (r - 1, r, r + 1):
        if c > 0 and c * c == n:
            return c
    raise ValueError(f"{n} is not a perfect square")


def _yb_legs(M: QMatrix) -> tuple[QMatrix, QMatrix, QMatrix]:
    if M.rows != M.cols:
        raise ValueError("expected a square matrix")
    N = _perfect_root(M.rows)
    return (leg_embed(M, N, 3, (0, 1)), leg_embed(M, N, 3, (0, 2)), leg_embed(M, N, 3, (1, 2)))


def check_qybe(R: QMatrix) -> bool:
    """``R12 R13 R23 == R23 R13 R12`` exactly."""
    r12, r13, r23 = _yb_legs(R)
    return r12 @ r13 @ r23 == r23 @ r13 @ r12


def _comm(a: QMatrix, b: QMatrix) -> QMatrix:
    return a @ b - b @ a


def check_cybe(r: QMatrix) -> bool:
    """``[r12, r13] + [r12, r23] + [r13, r23] == 0`` exactly."""
    r12, r13, r23 = _yb_legs(r)
    return (_comm(r12, r13) + _comm(r12, r23) + _comm(r13, r23)).is_zero()


def check_hecke(R: QMatrix) -> bool:
    """``(PR - q)(PR + 1/q) == 0``."""
    N = _perfect_root(R.rows)
    Rh = flip(N) @ R
    I = QMatrix.identity(N * N)
    return ((Rh - I.scale(Q)) @ (Rh + I.scale(Q ** -1))).is_zero()


def classical_parts(R: QMatrix) -> tuple[QMatrix, QMatrix, QMatrix]:
    """``(r, r_minus, Omega)`` with ``r = (1/2) dR/dq`` at q = 1."""
    N = _perfect_root(R.rows)
    d = R.derivative_at_one()
    r = QMatrix([[qs(x / 2) for x in row] for row in d], R.rows, R.cols)
    r21 = conj_flip(r, N)
    half = Fraction(1, 2)
    r_minus = (r - r21).scale(half)
    omega = (r + r21).scale(half)
    return r, r_minus, omega


def build_R(sid: SeriesId) -> RMatrixData:
    """Construct and gate-check the R-matrix data for ``sid``."""
    R = _r_matrix(sid)
    N = sid.N
    if R.map(lambda x: qs(x.evaluate_at(1))) != QMatrix.identity(N * N):
        raise ConventionError(f"R({sid}) is not the identity at q = 1")
    if not check_qybe(R):
        raise ConventionError(f"R({sid}) fails the quantum Yang-Baxter equation")
    if sid.series == "A" and not check_hecke(R):
        raise ConventionError(f"R({sid}) fails the Hecke condition")
    r, r_minus, omega = classical_parts(R)
    if not check_cybe(r):
        raise ConventionError(f"classical r({sid}) fails the classical Yang-Baxter equation")
    B = None
    if sid.series != "A":
        B = build_B(sid)
        B.inverse()
    return RMatrixData(sid, R, B, r, r_minus, omega)
