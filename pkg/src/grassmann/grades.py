"""Generalized grades, simplicity tests and Plücker relations."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .multiindex import pairs_bits, popcount, subsets_of_grade
from .multivector import Multivector, contract_left, wedge
from .spaces import inner_space, outer_space

SIMPLE_TOL = 1e-9


@dataclass(frozen=True)
class GradeProfile:
    inner: int
    outer: int
    bottom: Optional[int] = None
    top: Optional[int] = None


def grade_profile(M: Multivector) -> GradeProfile:
    if M.is_zero():
        return GradeProfile(inner=M.n, outer=0)
    g = M.grades()
    return GradeProfile(inner_space(M).dim, outer_space(M).dim, g[0], g[-1])


def is_simple(M: Multivector) -> bool:
    """Zero and scalars count as simple; otherwise compare inner and outer spaces."""
    if M.is_zero():
        return True
    return inner_space(M).dim == outer_space(M).dim


def _homogeneous(H: Multivector) -> int:
    if not H.is_homogeneous():
        raise ValueError("expected a homogeneous multivector")
    return H.grade() or 0


def cartan_residual(H: Multivector) -> float:
    """max over basis (p-1)-blades F of |(F⌋H)^H| / |H|^2."""
    p = _homogeneous(H)
    if H.is_zero() or p == 0:
        return 0.0
    h2 = H.norm2()
    worst = 0.0
    for j in subsets_of_grade(H.n, p - 1):
        F = Multivector(H.n, {j: 1})
        worst = max(worst, wedge(contract_left(F, H), H).norm() / h2)
    return worst


def plucker_residuals(H: Multivector) -> list[tuple[int, int, float]]:
    """Residual of every quadratic Plücker relation, keyed by bitmasks (j, k).

    j runs over grade p-1 and k over grade p+1.
    """
    p = _homogeneous(H)
    n = H.n
    lam = H.terms
    out = []
    if p == 0 or p >= n:
        return out
    for j in subsets_of_grade(n, p - 1):
        for k in subsets_of_grade(n, p + 1):
            total = 0j
            rest = k & ~j
            while rest:
                i = rest & -rest
                rest ^= i
                a = lam.get(j | i)
                b = lam.get(k & ~i)
                if a is None or b is None:
                    continue
                s = -1 if (pairs_bits(j, i) + pairs_bits(k, i)) & 1 else 1
                total += s * a * b
            out.append((j, k, abs(total)))
    return out


def plucker_max(H: Multivector) -> float:
    res = plucker_residuals(H)
    return max((r for _, _, r in res), default=0.0)


def plucker_simple(H: Multivector, tol: float = SIMPLE_TOL) -> bool:
    return plucker_max(H) <= tol * H.norm2()


def cartan_simple(H: Multivector, tol: float = SIMPLE_TOL) -> bool:
    return cartan_residual(H) <= tol


def grade_bounds_ok(prof: GradeProfile) -> bool:
    if prof.bottom is None:
        return True
    return prof.inner <= prof.bottom <= prof.top <= prof.outer


def nonzero_grades(M: Multivector) -> list[int]:
    return sorted({popcount(b) for b in M.terms})
