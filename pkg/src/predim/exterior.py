"""The exterior square Λ²(F_p^n).

Bivector coordinates are indexed by pairs (i, j), i < j, in lexicographic
order: (0,1), (0,2), ..., (0,n-1), (1,2), ...  The structure file format
depends on this order.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .linalg import (
    Subspace,
    Vector,
    _span,
    check_budget,
    check_prime,
    check_vector,
    enumerate_subspaces,
    gaussian_binomial,
    rank,
)


@lru_cache(maxsize=None)
def wedge_pairs(n: int) -> tuple[tuple[int, int], ...]:
    return tuple((i, j) for i in range(n) for j in range(i + 1, n))


@lru_cache(maxsize=None)
def wedge_position(n: int) -> dict[tuple[int, int], int]:
    return {pair: pos for pos, pair in enumerate(wedge_pairs(n))}


def wedge_dim(n: int) -> int:
    return n * (n - 1) // 2


@dataclass(frozen=True)
class Bivector:
    p: int
    n: int
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != wedge_dim(self.n):
            raise ValueError(
                f"bivector over n={self.n} needs {wedge_dim(self.n)} coordinates, got {len(self.coords)}"
            )

    @classmethod
    def zero(cls, n: int, p: int) -> "Bivector":
        return cls(p, n, (0,) * wedge_dim(n))

    @classmethod
    def basis(cls, i: int, j: int, n: int, p: int) -> "Bivector":
        """e_i ∧ e_j; for i > j this is the negated basis element."""
        if i == j:
            return cls.zero(n, p)
        sign = 1
        if i > j:
            i, j, sign = j, i, p - 1
        coords = [0] * wedge_dim(n)
        coords[wedge_position(n)[i, j]] = sign % p
        return cls(p, n, tuple(coords))

    @classmethod
    def parse(cls, text: str, n: int, p: int) -> "Bivector":
        check_prime(p)
        text = text.strip()
        try:
            coords = tuple(int(t) for t in text.split(",")) if text else ()
        except ValueError:
            raise ValueError(f"malformed bivector literal {text!r}") from None
        return cls(p, n, check_vector(coords, p, wedge_dim(n)))

    def _check(self, other: "Bivector") -> None:
        if (self.p, self.n) != (other.p, other.n):
            raise ValueError("bivectors over different ambients")

    def __add__(self, other: "Bivector") -> "Bivector":
        self._check(other)
        p = self.p
        return Bivector(p, self.n, tuple((a + b) % p for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Bivector":
        p = self.p
        return Bivector(p, self.n, tuple((-a) % p for a in self.coords))

    def __sub__(self, other: "Bivector") -> "Bivector":
        return self + (-other)

    def __rmul__(self, c: int) -> "Bivector":
        p = self.p
        return Bivector(p, self.n, tuple((c * a) % p for a in self.coords))

    def __bool__(self) -> bool:
        return any(self.coords)

    def matrix(self) -> list[list[int]]:
        """The n x n alternating matrix with A[i][j] = coord(i, j) = -A[j][i]."""
        n, p = self.n, self.p
        A = [[0] * n for _ in range(n)]
        for (i, j), c in zip(wedge_pairs(n), self.coords):
            A[i][j] = c
            A[j][i] = (-c) % p
        return A

    @property
    def rank(self) -> int:
        return bivector_rank(self)

    def __str__(self) -> str:
        return ",".join(str(x) for x in self.coords)


def wedge(u: Sequence[int], v: Sequence[int], p: int) -> Bivector:
    if len(u) != len(v):
        raise ValueError(f"wedge of vectors of lengths {len(u)} and {len(v)}")
    n = len(u)
    coords = tuple((u[i] * v[j] - u[j] * v[i]) % p for i, j in wedge_pairs(n))
    return Bivector(p, n, coords)


def lambda2_embed(H: Subspace) -> Subspace:
    """Λ²H as a subspace of Λ²M, spanned by wedges of basis pairs of H."""
    n, p = H.ambient_dim, H.p
    rows = [
        wedge(H.basis[a], H.basis[b], p).coords
        for a in range(H.dim)
        for b in range(a + 1, H.dim)
    ]
    return _span(rows, wedge_dim(n), p)


def wedge_ambient(n: int, p: int) -> Subspace:
    return Subspace.full(wedge_dim(n), p)


def build_w(m: int, vectors: Sequence[Sequence[int]], p: int) -> Bivector:
    """Σ_{i<m} a_{2i} ∧ a_{2i+1} for 2m linearly independent vectors."""
    if m < 1:
        raise ValueError("m must be positive")
    if len(vectors) != 2 * m:
        raise ValueError(f"build_w({m}) needs {2 * m} vectors, got {len(vectors)}")
    n = len(vectors[0])
    vecs = [check_vector(v, p, n) for v in vectors]
    if rank(vecs, p) != 2 * m:
        raise ValueError("build_w needs linearly independent vectors")
    w = Bivector.zero(n, p)
    for i in range(m):
        w = w + wedge(vecs[2 * i], vecs[2 * i + 1], p)
    return w


def bivector_rank(w: Bivector) -> int:
    return rank(w.matrix(), w.p)


def row_space(w: Bivector) -> Subspace:
    """Row space of the alternating matrix; the smallest E with w ∈ Λ²E."""
    return _span(w.matrix(), w.n, w.p)


def embeds(E: Subspace, w: Bivector) -> bool:
    """Whether w lies in Λ²E, decided by elimination in Λ²M."""
    return w.coords in lambda2_embed(E)


def min_support_dim_oracle(w: Bivector, limit: int | None = None) -> int:
    """Smallest dim E such that w ∈ Λ²E, by scanning subspaces.

    E ⊆ E' implies Λ²E ⊆ Λ²E', so the set of dimensions admitting a witness
    is upward closed.  Scanning from the top down, the answer is one more
    than the first dimension with no witness.  Nothing about ranks is used.
    """
    n, p = w.n, w.p
    spent = 0
    for d in range(n, -1, -1):
        spent += gaussian_binomial(n, d, p)
        check_budget(spent, f"min-support scan over F_{p}^{n}", limit)
        if not any(embeds(E, w) for E in enumerate_subspaces(n, p, dims=[d], limit=limit)):
            return d + 1
    return 0


def apply_basis_change(T: Sequence[Sequence[int]], w: Bivector) -> Bivector:
    """Induced action of the linear map T (columns are images of e_i) on Λ²M.

    The alternating matrix transforms as A -> T A Tᵀ, which matches
    T(u) ∧ T(v) for decomposable bivectors.
    """
    n, p = w.n, w.p
    A = w.matrix()
    TA = [[sum(T[i][a] * A[a][b] for a in range(n)) % p for b in range(n)] for i in range(n)]
    B = [[sum(TA[i][b] * T[j][b] for b in range(n)) % p for j in range(n)] for i in range(n)]
    return Bivector(p, n, tuple(B[i][j] for i, j in wedge_pairs(n)))


def apply_linear(T: Sequence[Sequence[int]], v: Sequence[int], p: int) -> Vector:
    n = len(v)
    return tuple(sum(T[i][j] * v[j] for j in range(n)) % p for i in range(len(T)))
