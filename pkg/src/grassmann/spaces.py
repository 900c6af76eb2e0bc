"""Inner and outer spaces of multivectors, blade factorizations and carvings."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg as sla

from .multiindex import lex_key
from .multivector import (Blade, Multivector, blade_from_columns, contract_left,
                          contract_right, wedge)

# singular values below RANK_RTOL * largest are treated as zero
RANK_RTOL = 1e-9
# residual allowed when comparing computed subspaces
SPAN_TOL = 1e-9
RECON_RTOL = 1e-8


def _null(mat: np.ndarray, n: int) -> np.ndarray:
    if mat.size == 0:
        return np.eye(n, dtype=complex)
    return sla.null_space(mat, rcond=RANK_RTOL)


def _orth(mat: np.ndarray, n: int) -> np.ndarray:
    if mat.size == 0 or not np.any(mat):
        return np.zeros((n, 0), dtype=complex)
    return sla.orth(mat, rcond=RANK_RTOL)


@dataclass(frozen=True)
class SubspaceBasis:
    """Orthonormal columns spanning a subspace of the n-dimensional space."""

    columns: np.ndarray = field(compare=False)

    def __post_init__(self):
        cols = np.asarray(self.columns, dtype=complex)
        if cols.ndim != 2:
            raise ValueError("columns must be a 2-d array")
        # fix each column's phase (first clearly nonzero entry real positive)
        # so printed bases do not depend on SVD sign choices
        cols = cols.copy()
        for j in range(cols.shape[1]):
            big = np.flatnonzero(np.abs(cols[:, j]) > 1e-12)
            if big.size:
                x = cols[big[0], j]
                cols[:, j] *= np.conj(x) / abs(x)
        object.__setattr__(self, "columns", cols)

    @classmethod
    def span(cls, vectors, n: int | None = None) -> "SubspaceBasis":
        """Orthonormal basis of the span of the given columns."""
        arr = np.asarray(vectors, dtype=complex)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1)
        n = arr.shape[0] if n is None else n
        return cls(_orth(arr, n))

    @classmethod
    def whole(cls, n: int) -> "SubspaceBasis":
        return cls(np.eye(n, dtype=complex))

    @classmethod
    def zero(cls, n: int) -> "SubspaceBasis":
        return cls(np.zeros((n, 0), dtype=complex))

    @property
    def n(self) -> int:
        return self.columns.shape[0]

    @property
    def dim(self) -> int:
        return self.columns.shape[1]

    def projector(self) -> np.ndarray:
        Q = self.columns
        return Q @ Q.conj().T

    def complement(self) -> "SubspaceBasis":
        if self.dim == 0:
            return SubspaceBasis.whole(self.n)
        return SubspaceBasis(_null(self.columns.conj().T, self.n))

    def residual(self, vectors) -> float:
        """Largest distance from a column of ``vectors`` to this subspace."""
        V = np.asarray(vectors, dtype=complex)
        if V.size == 0:
            return 0.0
        R = V - self.projector() @ V
        return float(np.max(np.linalg.norm(R, axis=0)))

    def contains(self, other: "SubspaceBasis", tol: float = SPAN_TOL) -> bool:
        return self.residual(other.columns) <= tol

    def equals(self, other: "SubspaceBasis", tol: float = SPAN_TOL) -> bool:
        return self.dim == other.dim and self.contains(other, tol)

    def __add__(self, other: "SubspaceBasis") -> "SubspaceBasis":
        return SubspaceBasis(_orth(np.hstack([self.columns, other.columns]), self.n))

    def intersect(self, other: "SubspaceBasis") -> "SubspaceBasis":
        if self.dim == 0 or other.dim == 0:
            return SubspaceBasis.zero(self.n)
        K = _null(np.hstack([self.columns, -other.columns]), self.dim + other.dim)
        return SubspaceBasis(_orth(self.columns @ K[: self.dim], self.n))

    def is_orthogonal_to(self, other: "SubspaceBasis", tol: float = SPAN_TOL) -> bool:
        if self.dim == 0 or other.dim == 0:
            return True
        return float(np.max(np.abs(self.columns.conj().T @ other.columns))) <= tol

    def blade(self) -> Multivector:
        """Unit blade of the subspace in the standard gauge."""
        return gauge(blade_from_columns(self.columns))

    def vectors(self) -> list[np.ndarray]:
        return [self.columns[:, k] for k in range(self.dim)]


def gauge_factor(B: Multivector) -> complex:
    """Scalar taking B to unit norm with its first coefficient real positive.

    "First" means smallest index tuple in lexicographic order.
    """
    nb = B.norm()
    if nb == 0:
        raise ValueError("cannot gauge the zero blade")
    first = min(B.terms, key=lambda b: lex_key(b)[1])
    c = B.terms[first]
    return abs(c) / (c * nb)


def gauge(B: Multivector) -> Multivector:
    return B * gauge_factor(B)


# ---------------------------------------------------------------------------

def _operator_columns(M: Multivector, op) -> np.ndarray:
    """Matrix whose column j lists the coefficients of op(e_j, M)."""
    n = M.n
    cols = [op(Multivector(n, {1 << j: 1}), M) for j in range(n)]
    rows = sorted(set().union(*(c.terms for c in cols)))
    where = {b: r for r, b in enumerate(rows)}
    mat = np.zeros((len(rows), n), dtype=complex)
    for j, c in enumerate(cols):
        for b, v in c.terms.items():
            mat[where[b], j] = v
    return mat


def inner_space(M: Multivector) -> SubspaceBasis:
    """Vectors whose wedge with M vanishes."""
    return SubspaceBasis(_null(_operator_columns(M, wedge), M.n))


def outer_space(M: Multivector) -> SubspaceBasis:
    """Smallest subspace whose exterior algebra holds M."""
    # v -> v⌋M is conjugate-linear, so its kernel is the conjugate of the
    # nullspace of the coefficient matrix
    kernel = _null(_operator_columns(M, contract_left), M.n).conj()
    return SubspaceBasis(kernel).complement()


def blade_space(B) -> SubspaceBasis:
    if isinstance(B, Blade):
        if B.vectors is not None:
            return SubspaceBasis.span(B.vectors, B.n)
        B = B.mv
    return outer_space(B)


def contained(M: Multivector, N: Multivector) -> bool:
    """True when the outer space of M lies inside the inner space of N."""
    return inner_space(N).contains(outer_space(M))


def _sum_check(M: Multivector, parts: Sequence[Multivector]):
    total = Multivector.zero(M.n)
    for P in parts:
        total = total + P
    if (total - M).norm() > RECON_RTOL * max(M.norm(), 1.0):
        raise ValueError("parts do not sum to M")


def is_balanced(M: Multivector, parts: Sequence[Multivector], side: str = "both") -> bool:
    if side not in ("inner", "outer", "both"):
        raise ValueError(f"side must be inner, outer or both, got {side!r}")
    _sum_check(M, parts)
    ok = True
    if side in ("inner", "both"):
        common = SubspaceBasis.whole(M.n)
        for P in parts:
            common = common.intersect(inner_space(P))
        ok = ok and common.equals(inner_space(M))
    if side in ("outer", "both"):
        total = SubspaceBasis.zero(M.n)
        for P in parts:
            total = total + outer_space(P)
        ok = ok and total.equals(outer_space(M))
    return ok


# ---------------------------------------------------------------------------
# factorizations M = B^N and carvings M = N⌋B

@dataclass(frozen=True)
class FactorizationResult:
    B: Blade
    N: Multivector
    kind: str
    residual: float
    flags: dict


@dataclass(frozen=True)
class CarvingResult:
    B: Blade
    N: Multivector
    kind: str
    residual: float
    flags: dict


def _as_mv(B) -> Multivector:
    return B.mv if isinstance(B, Blade) else B


def classify_factorization(M: Multivector, B, N: Multivector) -> dict:
    Bm = _as_mv(B)
    if (wedge(Bm, N) - M).norm() > RECON_RTOL * max(M.norm(), 1e-300):
        raise ValueError("B^N does not reconstruct M")
    SB = blade_space(B)
    SN = outer_space(N)
    flags = {
        "efficient": SN.intersect(SB).dim == 0,
        "orthogonal": SN.is_orthogonal_to(SB),
        "maximal": SB.equals(inner_space(M)),
    }
    flags["optimal"] = flags["efficient"] and flags["maximal"]
    return flags


def classify_carving(M: Multivector, B, N: Multivector) -> dict:
    Bm = _as_mv(B)
    if (contract_left(N, Bm) - M).norm() > RECON_RTOL * max(M.norm(), 1e-300):
        raise ValueError("N⌋B does not reconstruct M")
    SB = blade_space(B)
    SN = outer_space(N)
    flags = {
        "efficient": SN.intersect(SB.complement()).dim == 0,
        "internal": SB.contains(SN),
        "minimal": SB.equals(outer_space(M)),
    }
    flags["optimal"] = flags["efficient"] and flags["minimal"]
    return flags


def _blade_of(space: SubspaceBasis) -> Blade:
    if space.dim == 0:
        return Blade(Multivector.scalar(space.n, 1), np.zeros((space.n, 0)))
    raw = blade_from_columns(space.columns)
    f = gauge_factor(raw)
    # fold the gauge phase into the first factor so the vectors stay exact
    cols = space.columns.copy()
    cols[:, 0] *= f
    return Blade(raw * f, cols)


def factorize_maximal(M: Multivector) -> FactorizationResult:
    if M.is_zero():
        raise ValueError("the zero multivector has no canonical factorization")
    B = _blade_of(inner_space(M))
    N = contract_left(B.mv, M) / B.mv.norm2()
    res = (wedge(B.mv, N) - M).norm()
    return FactorizationResult(B, N, "maximal-orthogonal-optimal", res,
                               classify_factorization(M, B, N))


def carve_minimal(M: Multivector) -> CarvingResult:
    if M.is_zero():
        raise ValueError("the zero multivector has no canonical carving")
    B = _blade_of(outer_space(M))
    N = contract_right(B.mv, M) / B.mv.norm2()
    res = (contract_left(N, B.mv) - M).norm()
    return CarvingResult(B, N, "minimal-internal-optimal", res,
                         classify_carving(M, B, N))
