"""Whole-lattice tables of δ, selfsufficiency, CSS and cl_k for one structure.

The direct functions in :mod:`predim.closure` answer one query at a time.
Here every subspace of the ambient is handled at once with numpy over the
lattice tables, which is what the exhaustive lemma sweeps run on.  Indices
refer to :class:`~predim.lattice.SubspaceLattice` order.
"""
from __future__ import annotations

from functools import cached_property, lru_cache
from typing import Callable

import numpy as np

from .exterior import lambda2_embed, wedge_dim
from .lattice import SubspaceLattice, get_lattice, member_mask
from .structure import BilinearStructure, n_of

MASK_BUDGET = 4096
BIG = np.iinfo(np.int64).max // 4

DeltaFault = Callable[[np.ndarray, SubspaceLattice], np.ndarray]


@lru_cache(maxsize=16)
def _lambda2_masks(n: int, p: int) -> tuple[int, ...]:
    L = get_lattice(n, p)
    return tuple(member_mask(lambda2_embed(H)) for H in L.subspaces)


def relation_dims(S: BilinearStructure, lattice: SubspaceLattice) -> np.ndarray:
    """dim N(H) for every H in the lattice.

    Small wedge ambients intersect member bitmasks; larger ones fall back to
    elimination.
    """
    p, n = S.p, S.n
    D = wedge_dim(n)
    if p**D <= MASK_BUDGET:
        logs = {p**d: d for d in range(D + 1)}
        R = member_mask(S.relations)
        return np.array([logs[(R & m).bit_count()] for m in _lambda2_masks(n, p)], dtype=np.int64)
    return np.array([n_of(S, H).dim for H in lattice.subspaces], dtype=np.int64)


class StructureTable:
    def __init__(
        self,
        S: BilinearStructure,
        limit: int | None = None,
        delta_fault: DeltaFault | None = None,
    ):
        self.S = S
        self.lattice = L = get_lattice(S.n, S.p, limit)
        self.dim_n = relation_dims(S, L)
        delta = S.k * L.dims - self.dim_n
        if delta_fault is not None:
            delta = delta_fault(delta.copy(), L)
        self.delta = delta

    @cached_property
    def few_relations_witness(self) -> int | None:
        bad = np.flatnonzero(self.dim_n > self.S.k * self.lattice.dims)
        return int(bad[0]) if bad.size else None

    @property
    def few_relations(self) -> bool:
        return self.few_relations_witness is None

    @cached_property
    def min_above(self) -> np.ndarray:
        """Minimum of δ over all superspaces of each subspace."""
        return np.where(self.lattice.leq, self.delta[None, :], BIG).min(axis=1)

    @cached_property
    def selfsufficient(self) -> np.ndarray:
        return self.delta <= self.min_above

    @cached_property
    def _css_search(self) -> tuple[np.ndarray, np.ndarray]:
        L = self.lattice
        key = self.delta * (L.n + 1) + L.dims
        keyed = np.where(L.leq, key[None, :], BIG)
        best = keyed.min(axis=1)
        ties = (keyed == best[:, None]).sum(axis=1)
        return keyed.argmin(axis=1), ties

    @property
    def css(self) -> np.ndarray:
        """Minimum-dimension δ-minimizing superspace of each subspace."""
        return self._css_search[0]

    @property
    def css_unique(self) -> np.ndarray:
        return self._css_search[1] == 1

    @cached_property
    def css_delta(self) -> np.ndarray:
        return self.delta[self.css]

    @cached_property
    def in_closure(self) -> np.ndarray:
        """``in_closure[B, A]``: A ⊆ cl_k(B) as sets of generators."""
        L = self.lattice
        return self.css_delta[L.join] == self.css_delta[:, None]

    @cached_property
    def closure_vectors(self) -> np.ndarray:
        """``closure_vectors[B, v]``: vector v lies in cl_k(B)."""
        return self.in_closure[:, self.lattice.line]

    @cached_property
    def closure_index(self) -> np.ndarray:
        """Lattice index of cl_k(B) when it is a subspace, else -1."""
        out = np.full(self.lattice.size, -1, dtype=np.int64)
        weights = 1 << np.arange(len(self.lattice.vectors), dtype=object)
        for b, row in enumerate(self.closure_vectors):
            mask = int(np.sum(weights[row])) if row.any() else 0
            out[b] = self.lattice.mask_index.get(mask, -1)
        return out

    @cached_property
    def minimal_extensions(self) -> np.ndarray:
        """``minimal_extensions[H, K]`` for selfsufficient H.

        For K ⊇ H and H selfsufficient, δ_rel(K/H) = δ(K) - δ(H) ≥ 0, so K is
        minimal when it ties δ(H) and no strictly intermediate space does.
        """
        L = self.lattice
        eye = np.eye(L.size, dtype=bool)
        strict = L.leq & ~eye
        ss = self.selfsufficient
        zero_rel = strict & (self.delta[None, :] == self.delta[:, None]) & ss[:, None]
        blocked = (zero_rel.astype(np.int32) @ strict.astype(np.int32)) > 0
        return zero_rel & ~blocked & ss[None, :]

    def delta_rel_closed(self, k_idx: int, h_idx: int) -> int:
        L = self.lattice
        top = L.join[k_idx, h_idx]
        return int(self.delta[top] - self.delta[h_idx])

    def delta_rel_min(self, k_idx: int, h_idx: int) -> int:
        """The minimum over K₁ with K₁ + H = K + H and K₁ ∩ H selfsufficient."""
        L = self.lattice
        top = L.join[k_idx, h_idx]
        cand = L.join[:, h_idx] == top
        low = L.meet[:, h_idx]
        cand &= self.selfsufficient[low]
        return int((self.delta[cand] - self.delta[low[cand]]).min())

    def chain(self, h_idx: int) -> tuple[list[int], list[list[int]]]:
        """Closure chain from a selfsufficient H, restricted to cl_k(H)."""
        L = self.lattice
        inside = self.closure_vectors[h_idx]
        members = L.members
        chain = [h_idx]
        steps: list[list[int]] = []
        current = h_idx
        while True:
            cand = np.flatnonzero(self.minimal_extensions[current]) if self.selfsufficient[current] else []
            exts = [int(K) for K in cand if not (members[K] & ~inside).any()]
            steps.append(exts)
            if not exts:
                break
            for K in exts:
                current = int(L.join[current, K])
            chain.append(current)
        return chain, steps
