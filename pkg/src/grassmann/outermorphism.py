"""Linear maps extended to the exterior algebra."""
from __future__ import annotations

import threading
from math import comb

import numpy as np

from .multiindex import bits_to_indices, subsets_of_grade
from .multivector import Multivector, blade_from_columns
from .star import Orientation, lstar, rstar

INVERT_RTOL = 1e-10


class Outermorphism:
    """Extension of an ``n_out x n_in`` matrix (columns are images of e_j)."""

    def __init__(self, matrix):
        mat = np.array(matrix, dtype=complex)
        if mat.ndim != 2:
            raise ValueError("matrix must be 2-d")
        self.matrix = mat
        self._images: dict[int, Multivector] = {}
        self._blocks: dict[int, np.ndarray] = {}
        self._lock = threading.Lock()

    @property
    def n_in(self) -> int:
        return self.matrix.shape[1]

    @property
    def n_out(self) -> int:
        return self.matrix.shape[0]

    @property
    def square(self) -> bool:
        return self.n_in == self.n_out

    def image(self, bits: int) -> Multivector:
        """T applied to the basis blade with the given bitmask."""
        with self._lock:
            hit = self._images.get(bits)
        if hit is None:
            cols = self.matrix[:, [i - 1 for i in bits_to_indices(bits)]]
            hit = blade_from_columns(cols) if cols.shape[1] else Multivector.scalar(self.n_out, 1)
            with self._lock:
                self._images[bits] = hit
        return hit

    def grade_block(self, p: int) -> np.ndarray:
        """Matrix of T on grade p in lexicographic index order (entries are minors)."""
        with self._lock:
            blk = self._blocks.get(p)
        if blk is not None:
            return blk
        rows = {b: r for r, b in enumerate(subsets_of_grade(self.n_out, p))}
        blk = np.zeros((comb(self.n_out, p), comb(self.n_in, p)), dtype=complex)
        for c, b in enumerate(subsets_of_grade(self.n_in, p)):
            for r, v in self.image(b).terms.items():
                blk[rows[r], c] = v
        with self._lock:
            self._blocks[p] = blk
        return blk

    def apply(self, M: Multivector) -> Multivector:
        if M.n != self.n_in:
            raise ValueError(f"input dimension {M.n} does not match map ({self.n_in})")
        out: dict[int, complex] = {}
        for b, c in M.terms.items():
            for r, v in self.image(b).terms.items():
                out[r] = out.get(r, 0) + c * v
        return Multivector(self.n_out, out, M.tol)

    __call__ = apply

    def adjoint(self) -> "Outermorphism":
        return Outermorphism(self.matrix.conj().T)

    def compose(self, other: "Outermorphism") -> "Outermorphism":
        """self after other."""
        return Outermorphism(self.matrix @ other.matrix)

    def _top(self) -> Multivector:
        return self.image((1 << self.n_in) - 1)

    def det(self) -> complex:
        if not self.square:
            raise ValueError("determinant needs a square map")
        return self._top().coef((1 << self.n_out) - 1)

    def volume_factor(self) -> float:
        """Norm of the image of the unit pseudoscalar."""
        return self._top().norm()

    def is_invertible(self) -> bool:
        if not self.square:
            return False
        s = np.linalg.svd(self.matrix, compute_uv=False)
        return s.size == 0 or s[-1] > INVERT_RTOL * s[0]

    def induced_orientation(self, omega: Orientation | None = None) -> Orientation:
        """Orientation of the image of omega, normalised."""
        if not self.square:
            raise ValueError("induced orientation implemented for square maps only")
        omega = omega or Orientation(self.n_in)
        d = self.det()
        if abs(d) == 0:
            raise ValueError("singular map induces no orientation")
        return Orientation(self.n_out, omega.unit * d / abs(d))

    def inverse_apply(self, N: Multivector, omega: Orientation | None = None) -> Multivector:
        """Apply the inverse map through the adjoint and the star operators."""
        if not self.is_invertible():
            raise ValueError("map is not invertible")
        omega = omega or Orientation(self.n_in)
        omega_t = self.induced_orientation(omega)
        vf = self.volume_factor()
        return lstar(self.adjoint().apply(rstar(N, omega_t)), omega) / vf


def identity(n: int) -> Outermorphism:
    return Outermorphism(np.eye(n))
