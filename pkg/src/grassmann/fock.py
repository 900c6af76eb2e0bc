"""Exterior/interior product operators and fermionic creation/annihilation.

The exterior algebra doubles as fermionic Fock space: e_k is the state with
modes k occupied.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import multiindex as mi
from .multiindex import MultiIndex, pairs_bits, popcount
from .multivector import Blade, Multivector, contract_left, wedge

KINDS = ("exterior", "interior", "creation", "annihilation", "occupancy", "vacancy", "composed")


def _seq(r, n: int) -> tuple[int, ...]:
    if isinstance(r, MultiIndex):
        return r.indices()
    r = tuple(r)
    if any(i < 1 or i > n for i in r):
        raise ValueError(f"mode index out of range for n={n}: {r}")
    return r


@dataclass(frozen=True)
class FockOperator:
    """Linear operator on the exterior algebra, applied lazily."""

    kind: str
    payload: object
    n: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown operator kind {self.kind!r}")

    @property
    def parity(self) -> int:
        k, pl = self.kind, self.payload
        if k in ("exterior", "interior"):
            g = pl.grades()
            if len({x % 2 for x in g}) > 1:
                raise ValueError("operator by a mixed-parity multivector has no parity")
            return g[0] % 2 if g else 0
        if k in ("creation", "annihilation"):
            return len(pl) % 2
        if k in ("occupancy", "vacancy"):
            return 0
        return sum(op.parity for op in pl) % 2

    def apply(self, M: Multivector) -> Multivector:
        if M.n != self.n:
            raise ValueError(f"ambient mismatch: {M.n} vs {self.n}")
        k, pl = self.kind, self.payload
        if k == "exterior":
            return wedge(pl, M)
        if k == "interior":
            return contract_left(pl, M)
        if k == "creation":
            return wedge(Multivector.basis(self.n, pl), M)
        if k == "annihilation":
            return contract_left(Multivector.basis(self.n, pl), M)
        if k == "occupancy":
            return creation(pl, self.n).apply(annihilation(pl, self.n).apply(M))
        if k == "vacancy":
            return annihilation(pl, self.n).apply(creation(pl, self.n).apply(M))
        for op in reversed(pl):
            M = op.apply(M)
        return M

    __call__ = apply

    def __matmul__(self, other: "FockOperator") -> "FockOperator":
        return compose(self, other)

    def to_matrix(self) -> np.ndarray:
        """Dense 2^n x 2^n matrix in the bitmask basis (for checks only)."""
        N = 1 << self.n
        out = np.zeros((N, N), dtype=complex)
        for b in range(N):
            out[:, b] = self.apply(Multivector(self.n, {b: 1})).to_dense()
        return out


def exterior(M: Multivector) -> FockOperator:
    return FockOperator("exterior", M, M.n)


def interior(M: Multivector) -> FockOperator:
    return FockOperator("interior", M, M.n)


def creation(r: Sequence[int] | MultiIndex, n: int) -> FockOperator:
    return FockOperator("creation", _seq(r, n), n)


def annihilation(r: Sequence[int] | MultiIndex, n: int) -> FockOperator:
    return FockOperator("annihilation", _seq(r, n), n)


def occupancy(i: Sequence[int] | MultiIndex, n: int) -> FockOperator:
    return FockOperator("occupancy", _seq(i, n), n)


def vacancy(i: Sequence[int] | MultiIndex, n: int) -> FockOperator:
    return FockOperator("vacancy", _seq(i, n), n)


def compose(*ops: FockOperator) -> FockOperator:
    """Product ops[0] ops[1] ... (rightmost acts first)."""
    if len({op.n for op in ops}) != 1:
        raise ValueError("operators act on different dimensions")
    return FockOperator("composed", tuple(ops), ops[0].n)


def apply(op: FockOperator, M: Multivector) -> Multivector:
    return op.apply(M)


def supercommute(S: FockOperator, T: FockOperator, M: Multivector) -> Multivector:
    """[[S, T]] M = S T M - (-1)^(st) T S M."""
    sign = -1 if (S.parity * T.parity) % 2 else 1
    return S.apply(T.apply(M)) - sign * T.apply(S.apply(M))


# ---------------------------------------------------------------------------
# supercommutator of a creation and an annihilation operator

def _bits(i, n: int) -> int:
    if isinstance(i, MultiIndex):
        return i.bits
    if isinstance(i, int):
        return i
    return mi.indices_to_bits(_seq(i, n))


def supercommutator_direct(i, j, M: Multivector) -> Multivector:
    """Brute force [[a_i^dagger, a_j]] M from the operator definitions."""
    n = M.n
    I = mi.bits_to_indices(_bits(i, n))
    J = mi.bits_to_indices(_bits(j, n))
    return supercommute(creation(I, n), annihilation(J, n), M)


def supercommutator_closed(i, j, k, n: int | None = None) -> tuple[int, int]:
    """Closed form of [[a_i^dagger, a_j]] e_k as (sign, bitmask).

    The sign is 0 when the result vanishes.  Arguments are MultiIndex values
    or bitmasks.
    """
    if n is None:
        n = next((x.n for x in (i, j, k) if isinstance(x, MultiIndex)), mi.DIM_CAP)
    i, j, k = _bits(i, n), _bits(j, n), _bits(k, n)
    x = j & ~(i | k)
    y = (i & k) & ~j
    if x or y:
        return 0, 0
    c = i & j & k
    d = (i & j) & ~k
    coef = (1 if d == 0 else 0) - (1 if c == 0 else 0)
    if coef == 0:
        return 0, 0
    a = i & ~j
    b = (j & k) & ~i
    e = k & ~(i | j)
    expo = popcount(d) + pairs_bits(a | b, d | e)
    sign = coef * (-1 if expo & 1 else 1)
    return sign, a | c | e


def closed_as_multivector(i, j, k, n: int) -> Multivector:
    s, b = supercommutator_closed(i, j, k, n)
    return Multivector(n, {b: s}) if s else Multivector.zero(n)


# ---------------------------------------------------------------------------

def leibniz_supercommutator(B: Blade, M: Multivector) -> float:
    """Max entry difference between [[i_B, e_M]] and its subblade expansion.

    Both sides are built as dense 2^n x 2^n matrices.
    """
    if B.vectors is None:
        raise ValueError("blade carries no vector factorization")
    if not M.is_homogeneous():
        raise ValueError("M must be homogeneous")
    n = M.n
    p = B.vectors.shape[1]
    iB, eM = interior(B.mv), exterior(M)
    sign = -1 if (p * (M.grade() or 0)) % 2 else 1
    lhs = iB.to_matrix() @ eM.to_matrix() - sign * eM.to_matrix() @ iB.to_matrix()
    rhs = exterior(contract_left(B.mv, M)).to_matrix()
    full = (1 << p) - 1
    for sel in range(1, full):
        comp = full & ~sel
        s = mi.concat_sign(sel, comp)
        Bi = B.subblade([t for t in range(p) if sel >> t & 1])
        Bc = B.subblade([t for t in range(p) if comp >> t & 1])
        inner_part = contract_left(Bc, M.ginv(popcount(sel)))
        rhs = rhs + s * exterior(inner_part).to_matrix() @ interior(Bi).to_matrix()
    return float(np.max(np.abs(lhs - rhs))) if lhs.size else 0.0
