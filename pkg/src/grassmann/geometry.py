"""Principal angles, PO/OP factorizations, asymmetric angles, projections."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .multivector import Blade, Multivector, blade_from_columns, inner
from .outermorphism import Outermorphism
from .spaces import (RANK_RTOL, SubspaceBasis, blade_space, inner_space,
                     outer_space)

# cosines below this count as right angles, above 1 - this as zero angles
SIGMA_ZERO = 1e-9
SIGMA_ONE = 1e-12


def _columns(V, n: int | None = None) -> np.ndarray:
    if isinstance(V, SubspaceBasis):
        return V.columns
    if isinstance(V, (Blade, Multivector)):
        return blade_space(V).columns
    if isinstance(V, np.ndarray):
        arr = V.astype(complex)
        return arr.reshape(-1, 1) if arr.ndim == 1 else arr
    vecs = [np.asarray(v, dtype=complex) for v in V]
    if not vecs:
        if n is None:
            raise ValueError("empty basis needs an explicit dimension")
        return np.zeros((n, 0), dtype=complex)
    return np.column_stack(vecs)


def _orthonormal(V: np.ndarray) -> np.ndarray:
    if V.shape[1] == 0:
        return V
    s = np.linalg.svd(V, compute_uv=False)
    if s[-1] <= RANK_RTOL * s[0]:
        raise ValueError("basis vectors are linearly dependent")
    return np.linalg.qr(V)[0]


def _snap(sigma: np.ndarray) -> np.ndarray:
    sigma = np.clip(sigma, 0.0, 1.0)
    sigma[sigma < SIGMA_ZERO] = 0.0
    sigma[sigma > 1 - SIGMA_ONE] = 1.0
    return sigma


@dataclass(frozen=True)
class PrincipalData:
    """Cosines (descending) with associated principal bases as columns."""

    cosines: np.ndarray
    left_basis: np.ndarray
    right_basis: np.ndarray

    @property
    def angles(self) -> np.ndarray:
        return np.arccos(self.cosines)

    @property
    def sines(self) -> np.ndarray:
        return np.sqrt(np.clip(1 - self.cosines ** 2, 0.0, 1.0))

    def intersection_dim(self) -> int:
        return int(np.sum(self.cosines == 1.0))


def principal_angles(V, W, n: int | None = None) -> PrincipalData:
    """Principal data of span(V) and span(W) via SVD of the cross-Gram matrix."""
    Qv = _orthonormal(_columns(V, n))
    Qw = _orthonormal(_columns(W, n))
    p, q = Qv.shape[1], Qw.shape[1]
    if p == 0 or q == 0:
        return PrincipalData(np.zeros(0), Qv, Qw)
    U, s, Vh = np.linalg.svd(Qv.conj().T @ Qw)
    return PrincipalData(_snap(s), Qv @ U, Qw @ Vh.conj().T)


def principal_data_of_blades(A, B) -> PrincipalData:
    return principal_angles(blade_space(A), blade_space(B))


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class POFactorization:
    B_P: Multivector
    B_perp: Blade
    eps_B: complex
    order: str = "PO"

    def product(self) -> Multivector:
        if self.order == "PO":
            return self.B_P ^ self.B_perp.mv
        return self.B_perp.mv ^ self.B_P


def _mv(X) -> Multivector:
    return X.mv if isinstance(X, Blade) else X


def po_factorize(B, A, order: str = "PO") -> POFactorization:
    """Split B into a part aligned with A and a part completely orthogonal to it."""
    if order not in ("PO", "OP"):
        raise ValueError("order must be 'PO' or 'OP'")
    Bm, Am = _mv(B), _mv(A)
    if Bm.is_zero() or Am.is_zero():
        raise ValueError("PO factorization needs nonzero blades")
    n = Bm.n
    SA, SB = blade_space(A), blade_space(B)
    p, q = SA.dim, SB.dim
    m = min(p, q)
    if q == 0:
        eps = Bm.scalar_part() / abs(Bm.scalar_part())
        return POFactorization(Bm, Blade(Multivector.scalar(n, 1), np.zeros((n, 0))), eps, order)
    f = principal_angles(SA, SB).right_basis if p else SB.columns
    F = blade_from_columns(f)
    nb = Bm.norm()
    eps = inner(F, Bm) / nb
    eps /= abs(eps)
    B_P = blade_from_columns(f[:, :m]) * (eps * nb)
    perp_cols = f[:, m:].copy()
    sign = -1 if (m * (q - m)) % 2 else 1
    if order == "OP" and sign < 0 and perp_cols.shape[1]:
        perp_cols[:, 0] *= -1
    return POFactorization(B_P, Blade(blade_from_columns(perp_cols), perp_cols), eps, order)


def asym_angle_cos(A, B) -> tuple[complex, float]:
    """(oriented, unoriented) cosines of the asymmetric angle of A with B."""
    Am, Bm = _mv(A), _mv(B)
    if Am.is_zero():
        return 1.0 + 0j, 1.0
    if Bm.is_zero():
        return (1.0 + 0j, 1.0) if Am.grade() == 0 else (0j, 0.0)
    pd = principal_data_of_blades(A, B)
    p, q = pd.left_basis.shape[1], pd.right_basis.shape[1]
    if p > q:
        return 0j, 0.0
    po = po_factorize(B, A)
    oriented = inner(Am, po.B_P) / (Am.norm() * Bm.norm())
    return complex(oriented), float(np.prod(pd.cosines))


def cos_angle_with_complement(A, B) -> float:
    """Cosine of the asymmetric angle of [A] with the complement of [B]."""
    pd = principal_data_of_blades(A, B)
    return float(np.prod(pd.sines))


def cos_complement_angle(A, B) -> float:
    """Cosine of the asymmetric angle of the complement of [A] with [B]."""
    SA, SB = blade_space(A), blade_space(B)
    n = SA.n
    if SA.dim == n or SB.dim == n:
        return 1.0
    if (SA + SB).dim != n:
        return 0.0
    pd = principal_angles(SA, SB)
    r = pd.intersection_dim()
    return float(np.prod(pd.sines[r:]))


# ---------------------------------------------------------------------------

def projection_matrix(V, n: int | None = None) -> np.ndarray:
    Q = _orthonormal(_columns(V, n))
    return Q @ Q.conj().T


def project(M: Multivector, V) -> Multivector:
    """Orthogonal projection of M onto the exterior algebra of span(V)."""
    return Outermorphism(projection_matrix(V, M.n)).apply(M)


def partially_orthogonal_subspaces(V, W, n: int | None = None) -> bool:
    """Some nonzero vector of V is orthogonal to all of W."""
    Qv, Qw = _columns(V, n), _columns(W, n)
    if Qv.shape[1] == 0:
        return False
    if Qv.shape[1] > Qw.shape[1]:
        return True
    return bool(np.any(principal_angles(Qv, Qw).cosines == 0.0))


def orthogonality(M: Multivector, N: Multivector, kind: str) -> bool:
    if kind == "plain":
        return abs(inner(M, N)) <= 1e-9 * max(M.norm() * N.norm(), 1e-300)
    if kind == "complete":
        return outer_space(M).is_orthogonal_to(outer_space(N))
    if kind == "partial":
        if M.is_zero():
            return False
        I = inner_space(M)
        return I.intersect(outer_space(N).complement()).dim > 0
    raise ValueError(f"unknown orthogonality kind {kind!r}")
