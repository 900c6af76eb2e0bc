"""Sparse multivectors over R or C in a fixed orthonormal basis.

A multivector is a map from bitmask (see :mod:`grassmann.multiindex`) to a
complex coefficient.  Coefficients with magnitude at most ``tol`` are dropped.
"""
from __future__ import annotations

import math
import numbers
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import multiindex as mi
from .multiindex import MultiIndex, concat_sign, lex_key, pairs_bits, popcount

TOL = 1e-12

INVOLUTIONS = ("grade", "reversion", "clifford", "check")


def _key(k, n: int) -> int:
    if isinstance(k, MultiIndex):
        if k.n != n:
            raise ValueError(f"index ambient {k.n} does not match {n}")
        return k.bits
    if isinstance(k, (tuple, list)):
        return mi.indices_to_bits(k)
    return int(k)


class Multivector:
    """Immutable sparse multivector in ambient dimension ``n``.

    Python operators: ``+ - *`` (scalar), ``^`` wedge, ``M << N`` left
    contraction (M contracts N) and ``N >> M`` right contraction
    (M contracts N from the right).
    """

    __slots__ = ("n", "terms", "tol")
    # keep numpy scalars from treating a multivector as a sequence
    __array_ufunc__ = None
    __iter__ = None

    def __init__(self, n: int, terms: Mapping | None = None, tol: float = TOL):
        mi.check_dim(n)
        clean = {}
        full = 1 << n
        if terms:
            for k, c in terms.items():
                b = _key(k, n)
                if b < 0 or b >= full:
                    raise ValueError(f"basis index {mi.bits_to_indices(b)} out of range for n={n}")
                c = complex(c)
                if abs(c) > tol:
                    clean[b] = clean.get(b, 0) + c
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "terms", {b: c for b, c in clean.items() if abs(c) > tol})
        object.__setattr__(self, "tol", tol)

    def __setattr__(self, name, value):
        raise AttributeError("Multivector is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "Multivector":
        return cls(n)

    @classmethod
    def scalar(cls, n: int, c: complex = 1.0) -> "Multivector":
        return cls(n, {0: c})

    @classmethod
    def basis(cls, n: int, indices: Sequence[int], coef: complex = 1.0) -> "Multivector":
        """Coefficient times e_r for an arbitrary sequence r (sorted with sign)."""
        idx = tuple(indices)
        if any(i < 1 or i > n for i in idx):
            raise ValueError(f"index out of range for n={n}: {idx}")
        s = mi.epsilon(idx)
        if s == 0:
            return cls(n)
        return cls(n, {mi.indices_to_bits(idx): s * coef})

    @classmethod
    def pseudoscalar(cls, n: int, coef: complex = 1.0) -> "Multivector":
        return cls(n, {(1 << n) - 1: coef})

    @classmethod
    def from_dense(cls, arr, n: int | None = None, tol: float = TOL) -> "Multivector":
        arr = np.asarray(arr)
        if n is None:
            n = int(round(math.log2(len(arr))))
        if len(arr) != 1 << n:
            raise ValueError("dense array length must be 2**n")
        nz = np.nonzero(np.abs(arr) > tol)[0]
        return cls(n, {int(b): arr[b] for b in nz}, tol)

    def to_dense(self) -> np.ndarray:
        """Coefficient array indexed by bitmask."""
        out = np.zeros(1 << self.n, dtype=complex)
        for b, c in self.terms.items():
            out[b] = c
        return out

    # -- access -----------------------------------------------------------

    def items(self):
        """(bits, coefficient) pairs sorted by grade, then lexicographically."""
        return sorted(self.terms.items(), key=lambda t: lex_key(t[0]))

    def coef(self, indices) -> complex:
        return self.terms.get(_key(indices, self.n), 0j)

    def __getitem__(self, indices) -> complex:
        return self.coef(indices)

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_real(self, tol: float | None = None) -> bool:
        t = self.tol if tol is None else tol
        return all(abs(c.imag) <= t for c in self.terms.values())

    def grades(self) -> list[int]:
        return sorted({popcount(b) for b in self.terms})

    def is_homogeneous(self) -> bool:
        return len(self.grades()) <= 1

    def grade(self) -> int | None:
        """The grade of a nonzero homogeneous multivector (None otherwise)."""
        g = self.grades()
        return g[0] if len(g) == 1 else None

    def scalar_part(self) -> complex:
        return self.terms.get(0, 0j)

    def norm2(self) -> float:
        return sum(abs(c) ** 2 for c in self.terms.values())

    def norm(self) -> float:
        return math.sqrt(self.norm2())

    # -- arithmetic -------------------------------------------------------

    def _same(self, other: "Multivector"):
        if not isinstance(other, Multivector):
            raise TypeError(f"expected Multivector, got {type(other).__name__}")
        if other.n != self.n:
            raise ValueError(f"ambient mismatch: {self.n} vs {other.n}")

    def _coerce(self, other):
        if isinstance(other, numbers.Number):
            return Multivector.scalar(self.n, other)
        self._same(other)
        return other

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        for b, c in other.terms.items():
            t[b] = t.get(b, 0) + c
        return Multivector(self.n, t, self.tol)

    __radd__ = __add__

    def __neg__(self):
        return Multivector(self.n, {b: -c for b, c in self.terms.items()}, self.tol)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            other = complex(other)
            return Multivector(self.n, {b: c * other for b, c in self.terms.items()}, self.tol)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, numbers.Number):
            return self * (1 / complex(other))
        return NotImplemented

    def __xor__(self, other):
        return wedge(self, self._coerce(other))

    def __rxor__(self, other):
        return wedge(self._coerce(other), self)

    def __lshift__(self, other):
        return contract_left(self, self._coerce(other))

    def __rshift__(self, other):
        return contract_right(self, self._coerce(other))

    def __eq__(self, other):
        if isinstance(other, numbers.Number):
            other = Multivector.scalar(self.n, other)
        if not isinstance(other, Multivector):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    __hash__ = None

    def allclose(self, other, tol: float = 1e-9) -> bool:
        """Max coefficient difference at most tol."""
        other = self._coerce(other)
        keys = self.terms.keys() | other.terms.keys()
        return all(abs(self.coef(k) - other.coef(k)) <= tol for k in keys)

    def conj(self) -> "Multivector":
        return Multivector(self.n, {b: c.conjugate() for b, c in self.terms.items()}, self.tol)

    def grade_project(self, p: int) -> "Multivector":
        return grade_project(self, p)

    def involution(self, kind: str) -> "Multivector":
        return involution(self, kind)

    def reverse(self) -> "Multivector":
        return involution(self, "reversion")

    def ginv(self, times: int = 1) -> "Multivector":
        """Grade involution applied ``times`` times."""
        if times % 2 == 0:
            return self
        return involution(self, "grade")

    def __repr__(self):
        return f"Multivector(n={self.n}, {format_mv(self)!r})"

    def __str__(self):
        return format_mv(self)


# ---------------------------------------------------------------------------
# formatting

def format_number(x: float, digits: int = 12) -> str:
    if x == 0:
        return "0"
    s = f"{x:.{digits}g}"
    if "e" in s or "E" in s:
        # keep exponents unambiguous next to basis symbols
        s = f"{x:.{digits}f}".rstrip("0").rstrip(".")
        if s in ("", "-", "0", "-0"):
            s = f"{x:.{digits}g}".replace("e", "E")
    return s


def format_scalar(c: complex, digits: int = 12) -> str:
    re_s = format_number(c.real, digits)
    im_s = format_number(c.imag, digits)
    if im_s == "0" or im_s == "-0":
        return re_s
    if re_s == "0" or re_s == "-0":
        return f"{im_s}i"
    sign = "-" if im_s.startswith("-") else "+"
    return f"({re_s}{sign}{im_s.lstrip('-')}i)"


def format_basis(b: int, n: int) -> str:
    idx = mi.bits_to_indices(b)
    if n <= 9:
        return "e" + "".join(map(str, idx))
    return "e{" + ",".join(map(str, idx)) + "}"


def format_mv(M: Multivector, digits: int = 12) -> str:
    """Text form readable back by the expression parser."""
    parts = []
    for b, c in M.items():
        s = format_scalar(c, digits)
        if s == "0":
            continue
        if b == 0:
            parts.append(s)
            continue
        e = format_basis(b, M.n)
        if s == "1":
            parts.append(e)
        elif s == "-1":
            parts.append("-" + e)
        else:
            parts.append(f"{s}*{e}")
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


# ---------------------------------------------------------------------------
# core products

def _check(M: Multivector, N: Multivector):
    if not isinstance(M, Multivector) or not isinstance(N, Multivector):
        raise TypeError("expected Multivector operands")
    if M.n != N.n:
        raise ValueError(f"ambient mismatch: {M.n} vs {N.n}")


def from_vector(coords: Sequence[complex], n: int | None = None) -> Multivector:
    coords = list(coords)
    if n is None:
        n = len(coords)
    if len(coords) != n:
        raise ValueError(f"expected {n} coordinates, got {len(coords)}")
    return Multivector(n, {1 << i: c for i, c in enumerate(coords)})


def to_vector(M: Multivector) -> np.ndarray:
    """Coordinates of the grade-1 part."""
    v = np.zeros(M.n, dtype=complex)
    for i in range(M.n):
        v[i] = M.terms.get(1 << i, 0)
    return v


def wedge(M: Multivector, N: Multivector) -> Multivector:
    _check(M, N)
    out: dict[int, complex] = {}
    for a, x in M.terms.items():
        for b, y in N.terms.items():
            if a & b:
                continue
            s = -1 if pairs_bits(a, b) & 1 else 1
            out[a | b] = out.get(a | b, 0) + s * x * y
    return Multivector(M.n, out, M.tol)


def wedge_all(vs: Iterable[Multivector], n: int) -> Multivector:
    out = Multivector.scalar(n, 1)
    for v in vs:
        out = wedge(out, v)
    return out


def inner(M: Multivector, N: Multivector) -> complex:
    """Hermitian inner product, conjugate-linear in the left entry."""
    _check(M, N)
    small, big = (M.terms, N.terms) if len(M.terms) <= len(N.terms) else (N.terms, M.terms)
    total = 0j
    for b in small:
        if b in big:
            total += M.terms[b].conjugate() * N.terms[b]
    return total


def contract_left(M: Multivector, N: Multivector) -> Multivector:
    """M contracted into N from the left; conjugate-linear in M."""
    _check(M, N)
    out: dict[int, complex] = {}
    for a, x in M.terms.items():
        xc = x.conjugate()
        for b, y in N.terms.items():
            if a & ~b:
                continue
            r = b ^ a
            s = -1 if pairs_bits(a, r) & 1 else 1
            out[r] = out.get(r, 0) + s * xc * y
    return Multivector(M.n, out, M.tol)


def contract_right(N: Multivector, M: Multivector) -> Multivector:
    """N contracted by M from the right; conjugate-linear in M."""
    _check(N, M)
    out: dict[int, complex] = {}
    for a, x in M.terms.items():
        xc = x.conjugate()
        for b, y in N.terms.items():
            if a & ~b:
                continue
            r = b ^ a
            s = -1 if pairs_bits(r, a) & 1 else 1
            out[r] = out.get(r, 0) + s * xc * y
    return Multivector(M.n, out, M.tol)


def _involution_sign(kind: str, p: int, n: int) -> int:
    if kind == "grade":
        return -1 if p & 1 else 1
    if kind == "reversion":
        return -1 if (p * (p - 1) // 2) & 1 else 1
    if kind == "clifford":
        return mi.zeta(p)
    if kind == "check":
        return -1 if ((n + 1) * p) & 1 else 1
    raise ValueError(f"unknown involution {kind!r}; expected one of {INVOLUTIONS}")


def involution(M: Multivector, kind: str) -> Multivector:
    signs = {}
    out = {}
    for b, c in M.terms.items():
        p = popcount(b)
        if p not in signs:
            signs[p] = _involution_sign(kind, p, M.n)
        out[b] = signs[p] * c
    return Multivector(M.n, out, M.tol)


def grade_project(M: Multivector, p: int) -> Multivector:
    return Multivector(M.n, {b: c for b, c in M.terms.items() if popcount(b) == p}, M.tol)


# ---------------------------------------------------------------------------
# field handling

@dataclass(frozen=True)
class Space:
    """Ambient dimension plus scalar field; real spaces reject imaginary parts."""

    n: int
    complex_field: bool = False
    tol: float = TOL

    def __post_init__(self):
        mi.check_dim(self.n)

    @property
    def field(self) -> str:
        return "complex" if self.complex_field else "real"

    def check(self, M: Multivector) -> Multivector:
        if M.n != self.n:
            raise ValueError(f"ambient mismatch: {M.n} vs {self.n}")
        if not self.complex_field and not M.is_real(self.tol):
            raise ValueError("nonzero imaginary part in a real space")
        return M

    def mv(self, terms: Mapping | None = None) -> Multivector:
        return self.check(Multivector(self.n, terms, self.tol))

    def e(self, *indices: int, coef: complex = 1.0) -> Multivector:
        return self.check(Multivector.basis(self.n, indices, coef))

    def scalar(self, c: complex) -> Multivector:
        return self.mv({0: c})

    def vector(self, coords: Sequence[complex]) -> Multivector:
        return self.check(from_vector(coords, self.n))


# ---------------------------------------------------------------------------
# blades with explicit vector factorizations

def _as_columns(vectors, n: int) -> np.ndarray:
    arr = np.asarray(vectors, dtype=complex)
    if arr.ndim == 1:
        arr = arr.reshape(n, -1) if arr.size else np.zeros((n, 0), complex)
    if arr.shape[0] != n:
        raise ValueError(f"vectors must have {n} coordinates")
    return arr


@dataclass(frozen=True)
class Blade:
    """A simple multivector, optionally with vectors whose wedge is ``mv``.

    ``vectors`` is an ``n x p`` array; column k is the k-th factor.
    """

    mv: Multivector
    vectors: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.vectors is not None:
            cols = _as_columns(self.vectors, self.mv.n)
            object.__setattr__(self, "vectors", cols)
            rebuilt = blade_from_columns(cols)
            scale = max(self.mv.norm(), rebuilt.norm(), 1.0)
            if (rebuilt - self.mv).norm() > 1e-9 * scale:
                raise ValueError("vectors do not reproduce the blade")
        else:
            from .grades import is_simple
            if not is_simple(self.mv):
                raise ValueError("multivector is not simple")

    @classmethod
    def from_vectors(cls, vectors, n: int | None = None) -> "Blade":
        arr = np.asarray(vectors, dtype=complex)
        if n is None:
            # a list of vectors (rows) is the natural input
            arr = arr.T if arr.ndim == 2 else arr.reshape(-1, 0)
            n = arr.shape[0]
        cols = _as_columns(arr, n)
        return cls(blade_from_columns(cols), cols)

    @property
    def n(self) -> int:
        return self.mv.n

    @property
    def grade(self) -> int:
        if self.vectors is not None:
            return self.vectors.shape[1]
        g = self.mv.grade()
        return 0 if g is None else g

    def subblade(self, sel: Sequence[int]) -> Multivector:
        """Wedge of the factors at 0-based positions ``sel`` (1 when empty)."""
        if self.vectors is None:
            raise ValueError("blade carries no vector factorization")
        return blade_from_columns(self.vectors[:, list(sel)])

    def norm(self) -> float:
        return self.mv.norm()


def blade_from_columns(cols: np.ndarray) -> Multivector:
    cols = np.asarray(cols, dtype=complex)
    n = cols.shape[0]
    out = Multivector.scalar(n, 1)
    for k in range(cols.shape[1]):
        out = wedge(out, from_vector(cols[:, k], n))
    return out


def contract_blades_det(A: Blade, B: Blade) -> Multivector:
    """Left contraction of two decomposed blades by determinant expansion.

    Works in any coordinates for the factors: the matrix has one row per
    factor w_b of B, with the inner products <v_a, w_b> followed by the
    coordinates of w_b at the selected basis indices.
    """
    if A.vectors is None or B.vectors is None:
        raise ValueError("both blades need vector factorizations")
    if A.n != B.n:
        raise ValueError("ambient mismatch")
    V, W = A.vectors, B.vectors
    n, p, q = A.n, V.shape[1], W.shape[1]
    if p > q:
        return Multivector.zero(n)
    gram = W.T @ V.conj()  # gram[b, a] = <v_a, w_b>
    out = {}
    for combo in combinations(range(n), q - p):
        mat = np.hstack([gram, W[list(combo), :].T]) if combo else gram
        out[sum(1 << c for c in combo)] = np.linalg.det(mat) if q else 1.0
    return Multivector(n, out)


def leibniz_rhs(B: Blade, M: Multivector, N: Multivector) -> Multivector:
    """Expand B contracted into M^N as a sum over splittings of B's factors."""
    if B.vectors is None:
        raise ValueError("blade carries no vector factorization")
    _check(M, N)
    p = B.vectors.shape[1]
    full = (1 << p) - 1
    total = Multivector.zero(M.n)
    for sel in range(1 << p):
        comp = full & ~sel
        s = concat_sign(sel, comp)
        Bi = B.subblade([k for k in range(p) if sel >> k & 1])
        Bc = B.subblade([k for k in range(p) if comp >> k & 1])
        left = contract_left(Bc, M.ginv(popcount(sel)))
        total = total + s * wedge(left, contract_left(Bi, N))
    return total


def contract_subblade_expansion(H: Multivector, B: Blade) -> Multivector:
    """Contract homogeneous H into B via inner products with subblades of B."""
    if B.vectors is None:
        raise ValueError("blade carries no vector factorization")
    if not H.is_homogeneous():
        raise ValueError("H must be homogeneous")
    q = B.vectors.shape[1]
    p = H.grade() or 0
    if H.is_zero() or p > q:
        return Multivector.zero(B.n)
    total = Multivector.zero(B.n)
    full = (1 << q) - 1
    for sel in mi.subsets_of_grade(q, p):
        comp = full & ~sel
        s = concat_sign(sel, comp)
        Bi = B.subblade([k for k in range(q) if sel >> k & 1])
        Bc = B.subblade([k for k in range(q) if comp >> k & 1])
        total = total + (s * inner(H, Bi)) * Bc
    return total


CONVENTIONS = ("I_left", "I_right", "II_left", "II_right", "III_left", "III_right", "hestenes")


def convention_contract(conv: str, A: Multivector, B: Multivector) -> Multivector:
    """Contractions under other common sign/side conventions.

    I is the native convention; II swaps the sides; III reverses the
    contractor; hestenes is the grade-symmetrised III product.
    """
    _check(A, B)
    if conv == "I_left":
        return contract_left(A, B)
    if conv == "I_right":
        return contract_right(A, B)
    if conv == "II_left":
        return contract_right(B, A)
    if conv == "II_right":
        return contract_left(B, A)
    if conv == "III_left":
        return contract_left(A.reverse(), B)
    if conv == "III_right":
        return contract_right(A, B.reverse())
    if conv == "hestenes":
        if not (A.is_homogeneous() and B.is_homogeneous()):
            raise ValueError("hestenes product needs homogeneous operands")
        if A.is_zero() or B.is_zero():
            return Multivector.zero(A.n)
        if A.grade() <= B.grade():
            return contract_left(A.reverse(), B)
        return contract_right(A, B.reverse())
    raise ValueError(f"unknown convention {conv!r}")
