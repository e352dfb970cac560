from functools import lru_cache
from typing import Callable, Optional, Tuple

import numpy as np
import scipy.fft
import scipy.linalg

from src.errors import DimensionMismatch, DomainError, ResourceLimit
from src.types import Definiteness

DENSE_MAX_SITES = 4096

class SymToeplitz:
    """
    Symmetric (block-)Toeplitz matrix on a periodic lattice, stored by its first
    (block-)row: M[p][q] = scale * first_row[(p - q) mod dims].

    For the infinite lattice pass `element_fn` instead of `first_row`; elements are
    then evaluated lazily by index difference and the matrix is never materialized.
    """

    def __init__(
        self,
        first_row: Optional[np.ndarray] = None,
        scale: float = 1.0,
        definiteness: Definiteness = Definiteness.NEG_SEMI_DEF,
        element_fn: Optional[Callable[[Tuple[int, ...]], float]] = None,
        dimension: Optional[int] = None,
    ):
        if (first_row is None) == (element_fn is None):
            raise DomainError("Give exactly one of first_row or element_fn")

        self.scale = float(scale)
        self.definiteness = Definiteness(definiteness)

        if first_row is not None:
            row = np.array(first_row, dtype=float)
            if row.ndim == 0 or row.size == 0:
                raise DimensionMismatch("first_row must be a non-empty array")
            row.setflags(write=False)
            self.first_row = row
            self.dims = row.shape
            self.dimension = row.ndim
            self._element_fn = None
        else:
            if dimension is None:
                raise DomainError("dimension is required for a lazily evaluated matrix")
            self.first_row = None
            self.dims = None
            self.dimension = int(dimension)
            self._element_fn = lru_cache(maxsize=None)(element_fn)

    @property
    def is_infinite(self) -> bool:
        return self.first_row is None

    @property
    def n_sites(self) -> int:
        if self.is_infinite:
            raise DomainError("The infinite lattice matrix has no finite size")
        return self.first_row.size

    def _as_index(self, p) -> Tuple[int, ...]:
        p = tuple(int(c) for c in np.atleast_1d(p))
        if len(p) != self.dimension:
            raise DimensionMismatch(f"index {p} has {len(p)} components, matrix is {self.dimension}D")
        return p

    def element(self, p, q) -> float:
        p, q = self._as_index(p), self._as_index(q)
        diff = tuple(a - b for a, b in zip(p, q))
        if self.is_infinite:
            # cubic symmetry: elements depend on |p_j - q_j| only
            return self.scale * self._element_fn(tuple(abs(d) for d in diff))
        return self.scale * float(self.first_row[tuple(d % n for d, n in zip(diff, self.dims))])

    def to_dense(self) -> np.ndarray:
        if self.is_infinite:
            raise DomainError("The infinite lattice matrix cannot be materialized")
        if self.n_sites > DENSE_MAX_SITES:
            raise ResourceLimit(f"Dense matrix with {self.n_sites} sites exceeds cap {DENSE_MAX_SITES}")

        if self.dimension == 1:
            return self.scale * scipy.linalg.circulant(self.first_row)

        dims = np.array(self.dims)
        sites = np.indices(self.dims).reshape(self.dimension, -1).T
        diff = (sites[:, None, :] - sites[None, :, :]) % dims
        return self.scale * self.first_row[tuple(np.moveaxis(diff, -1, 0))]

    def matvec(self, u) -> np.ndarray:
        """Circular convolution of the first row with u via FFT; keeps u's shape."""
        if self.is_infinite:
            raise DomainError("matvec needs a finite lattice")
        u = np.asarray(u)
        if u.size != self.n_sites:
            raise DimensionMismatch(f"vector has {u.size} entries, matrix has {self.n_sites} sites")

        field = u.reshape(self.dims)
        product = scipy.fft.ifftn(scipy.fft.fftn(self.first_row) * scipy.fft.fftn(field))
        if not np.iscomplexobj(u):
            product = product.real
        return (self.scale * product).reshape(u.shape)

    def eigenvalues(self) -> np.ndarray:
        """Bloch-mode eigenvalues in FFT order (flattened)."""
        if self.is_infinite:
            raise DomainError("eigenvalues need a finite lattice")
        return self.scale * scipy.fft.fftn(self.first_row).real.ravel()

    def row_sums(self) -> np.ndarray:
        if self.is_infinite:
            raise DomainError("row sums need a finite lattice")
        return np.full(self.n_sites, self.scale * float(np.sum(self.first_row)))

    def __repr__(self):
        extent = "infinite" if self.is_infinite else "x".join(map(str, self.dims))
        return f"SymToeplitz({extent}, scale={self.scale}, {self.definiteness.value})"
