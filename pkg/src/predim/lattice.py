"""Tabulated subspace lattice of a small ambient F_p^n.

Every subspace is indexed in canonical enumeration order and carried as a
bitmask over the p^n vectors it contains.  Containment, meets and joins are
read off those masks instead of re-running elimination, which is what makes
exhaustive lemma sweeps over thousands of structures affordable.
"""
from __future__ import annotations

from functools import cached_property, lru_cache

import numpy as np

from .linalg import (
    Subspace,
    check_budget,
    count_subspaces,
    enumerate_subspaces,
    enumerate_vectors,
    span,
    vector_index,
)


def member_mask(H: Subspace) -> int:
    p = H.p
    mask = 0
    for v in H.members():
        mask |= 1 << vector_index(v, p)
    return mask


class SubspaceLattice:
    def __init__(self, n: int, p: int, limit: int | None = None):
        check_budget(p**n, f"vectors of F_{p}^{n}", limit)
        self.n = n
        self.p = p
        self.subspaces = list(enumerate_subspaces(n, p, limit=limit))
        self.size = len(self.subspaces)
        self.index = {H: i for i, H in enumerate(self.subspaces)}
        self.dims = np.array([H.dim for H in self.subspaces], dtype=np.int64)
        self.masks = [member_mask(H) for H in self.subspaces]
        self.mask_index = {m: i for i, m in enumerate(self.masks)}
        self.vectors = list(enumerate_vectors(n, p))
        self.zero = 0
        self.top = self.size - 1

    @cached_property
    def members(self) -> np.ndarray:
        """Boolean incidence matrix, subspaces x vectors."""
        nv = len(self.vectors)
        out = np.zeros((self.size, nv), dtype=bool)
        for i, m in enumerate(self.masks):
            out[i] = [(m >> j) & 1 for j in range(nv)]
        return out

    @cached_property
    def leq(self) -> np.ndarray:
        """``leq[i, j]`` is true when subspace i is contained in subspace j."""
        A = self.members.astype(np.int32)
        outside = (A @ (1 - A).T) == 0
        return outside

    @cached_property
    def meet(self) -> np.ndarray:
        N = self.size
        out = np.empty((N, N), dtype=np.int64)
        for i in range(N):
            mi = self.masks[i]
            for j in range(i, N):
                out[i, j] = out[j, i] = self.mask_index[mi & self.masks[j]]
        return out

    @cached_property
    def join(self) -> np.ndarray:
        """Smallest common superspace, read from the containment table."""
        N = self.size
        leq = self.leq
        big = self.n + 1
        out = np.empty((N, N), dtype=np.int64)
        for i in range(N):
            common = leq[i][None, :] & leq
            keyed = np.where(common, self.dims[None, :], big)
            out[i] = keyed.argmin(axis=1)
        return out

    @cached_property
    def line(self) -> np.ndarray:
        """Index of span(v) for each vector v in enumeration order."""
        return np.array(
            [self.index[span([v], self.n, self.p)] for v in self.vectors], dtype=np.int64
        )

    def find(self, H: Subspace) -> int:
        return self.index[H]


@lru_cache(maxsize=16)
def get_lattice(n: int, p: int, limit: int | None = None) -> SubspaceLattice:
    check_budget(count_subspaces(n, p), f"subspaces of F_{p}^{n}", limit)
    return SubspaceLattice(n, p, limit)
