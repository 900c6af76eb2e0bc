"""Star operators, regressive product, join and meet."""
from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .multiindex import check_dim, concat_sign
from .multivector import Blade, Multivector, _check, contract_left, contract_right


@dataclass(frozen=True)
class Orientation:
    """Unit pseudoscalar ``unit * e_1...n``."""

    n: int
    unit: complex = 1.0

    def __post_init__(self):
        check_dim(self.n)
        u = complex(self.unit)
        if abs(abs(u) - 1) > 1e-12:
            raise ValueError(f"orientation unit must have modulus 1, got {u}")
        object.__setattr__(self, "unit", u)

    @classmethod
    def from_phase(cls, n: int, phase: float) -> "Orientation":
        return cls(n, cmath.exp(1j * phase))

    @property
    def omega(self) -> Multivector:
        return Multivector.pseudoscalar(self.n, self.unit)


def _orientation(M: Multivector, omega: Orientation | None) -> Orientation:
    if omega is None:
        return Orientation(M.n)
    if omega.n != M.n:
        raise ValueError(f"ambient mismatch: {M.n} vs orientation {omega.n}")
    return omega


def rstar(M: Multivector, omega: Orientation | None = None) -> Multivector:
    return contract_left(M, _orientation(M, omega).omega)


def lstar(M: Multivector, omega: Orientation | None = None) -> Multivector:
    return contract_right(_orientation(M, omega).omega, M)


def star(M: Multivector, side: str = "right", omega: Orientation | None = None) -> Multivector:
    if side == "right":
        return rstar(M, omega)
    if side == "left":
        return lstar(M, omega)
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def star_wrt_blade(M: Multivector, side: str, B) -> Multivector:
    """Star relative to a unit blade B (lands in the exterior algebra of [B])."""
    Bm = B.mv if isinstance(B, Blade) else B
    _check(M, Bm)
    if abs(Bm.norm() - 1) > 1e-9:
        raise ValueError("star relative to a blade needs a unit blade")
    if side == "right":
        return contract_left(M, Bm)
    if side == "left":
        return contract_right(Bm, M)
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def regressive(M: Multivector, N: Multivector, omega: Orientation | None = None) -> Multivector:
    """Regressive product, term by term on basis blades."""
    _check(M, N)
    o = _orientation(M, omega)
    full = (1 << M.n) - 1
    out: dict[int, complex] = {}
    for a, x in M.terms.items():
        for b, y in N.terms.items():
            if a | b != full:
                continue
            s = concat_sign(a & ~b, b & ~a)
            out[a & b] = out.get(a & b, 0) + s * x * y
    # for a general unit the star-dual construction picks up its conjugate
    return Multivector(M.n, out, M.tol) * o.unit.conjugate()


# ---------------------------------------------------------------------------

def join(A, B) -> Blade:
    """Unit blade spanning [A] + [B].

    Generator columns (A's then B's) are orthonormalised in order, skipping
    those already in the span, so the result is reproducible.
    """
    from .spaces import blade_space

    Am = A.mv if isinstance(A, Blade) else A
    Bm = B.mv if isinstance(B, Blade) else B
    if Am.is_zero() or Bm.is_zero():
        raise ValueError("join of a zero blade")
    cols = np.hstack([blade_space(A).columns, blade_space(B).columns])
    basis = []
    for k in range(cols.shape[1]):
        v = cols[:, k].copy()
        for _ in range(2):  # second pass for stability
            for q in basis:
                v = v - (q.conj() @ v) * q
        nv = np.linalg.norm(v)
        if nv > 1e-9:
            basis.append(v / nv)
    Q = np.array(basis).T if basis else np.zeros((Am.n, 0), complex)
    return Blade.from_vectors(Q, Am.n)


def meet(A, B, J) -> Multivector:
    """Blade spanning [A] ∩ [B], given a unit blade J over [A] + [B]."""
    Am = A.mv if isinstance(A, Blade) else A
    Bm = B.mv if isinstance(B, Blade) else B
    Jm = J.mv if isinstance(J, Blade) else J
    if Am.is_zero() or Bm.is_zero():
        raise ValueError("meet of a zero blade")
    return contract_left(star_wrt_blade(Bm, "left", Jm), Am)
