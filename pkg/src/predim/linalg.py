"""Exact linear algebra over a prime field F_p.

Vectors are plain tuples of residues in ``[0, p)``.  A :class:`Subspace`
stores its reduced row-echelon basis, so two subspaces are equal exactly
when they are equal as Python values.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

from .errors import GuardrailExceeded

Vector = tuple[int, ...]

DEFAULT_GUARDRAIL = 10**6
GUARDRAIL_ENV = "PREDIM_GUARDRAIL"


def guardrail(limit: int | None = None) -> int:
    """Resolve an enumeration budget: explicit value, then env var, then default."""
    if limit is not None:
        return int(limit)
    env = os.environ.get(GUARDRAIL_ENV)
    return int(env) if env else DEFAULT_GUARDRAIL


def check_budget(count: int, what: str, limit: int | None = None) -> None:
    budget = guardrail(limit)
    if count > budget:
        raise GuardrailExceeded(what, count, budget)


@lru_cache(maxsize=None)
def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p**0.5) + 1))


def check_prime(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"modulus {p!r} is not prime")
    return p


def check_vector(v: Sequence[int], p: int, n: int) -> Vector:
    v = tuple(v)
    if len(v) != n:
        raise ValueError(f"vector {v} has length {len(v)}, expected {n}")
    for x in v:
        if not isinstance(x, int) or not 0 <= x < p:
            raise ValueError(f"coordinate {x!r} of {v} is not a residue mod {p}")
    return v


def rref(rows: Iterable[Sequence[int]], p: int) -> tuple[list[Vector], list[int]]:
    """Gauss-Jordan elimination mod p.

    Returns the nonzero rows of the reduced row-echelon form and their pivot
    columns.  Input rows are not modified.
    """
    work = [list(r) for r in rows]
    if not work:
        return [], []
    m, ncols = len(work), len(work[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        for i in range(r, m):
            if work[i][c]:
                break
        else:
            continue
        work[r], work[i] = work[i], work[r]
        row = work[r]
        if row[c] != 1:
            inv = pow(row[c], -1, p)
            row = work[r] = [(x * inv) % p for x in row]
        for i in range(m):
            f = work[i][c]
            if i != r and f:
                if p == 2:
                    work[i] = [a ^ b for a, b in zip(work[i], row)]
                else:
                    work[i] = [(a - f * b) % p for a, b in zip(work[i], row)]
        pivots.append(c)
        r += 1
    return [tuple(x) for x in work[:r]], pivots


def rank(rows: Iterable[Sequence[int]], p: int) -> int:
    return len(rref(rows, p)[1])


@dataclass(frozen=True)
class Subspace:
    """A subspace of F_p^n held as its canonical RREF basis."""

    p: int
    ambient_dim: int
    basis: tuple[Vector, ...] = ()

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(i for i, x in enumerate(row) if x) for row in self.basis)

    @classmethod
    def zero(cls, n: int, p: int) -> "Subspace":
        return cls(check_prime(p), n, ())

    @classmethod
    def full(cls, n: int, p: int) -> "Subspace":
        check_prime(p)
        return cls(p, n, tuple(unit(i, n) for i in range(n)))

    def reduce(self, v: Sequence[int]) -> Vector:
        """Remainder of ``v`` after clearing the pivot columns of the basis."""
        p = self.p
        out = list(v)
        for row, c in zip(self.basis, self.pivots):
            f = out[c]
            if f:
                out = [(a - f * b) % p for a, b in zip(out, row)]
        return tuple(out)

    def __contains__(self, v: Sequence[int]) -> bool:
        if len(v) != self.ambient_dim:
            raise ValueError(f"vector of length {len(v)} in ambient {self.ambient_dim}")
        return not any(self.reduce(v))

    def __le__(self, other: "Subspace") -> bool:
        _check_compatible(self, other)
        return self.dim <= other.dim and all(row in other for row in self.basis)

    def __lt__(self, other: "Subspace") -> bool:
        return self.dim < other.dim and self <= other

    def __add__(self, other: "Subspace") -> "Subspace":
        return subspace_sum(self, other)

    def __and__(self, other: "Subspace") -> "Subspace":
        return intersect(self, other)

    def members(self) -> Iterator[Vector]:
        """All p^dim vectors of the subspace (unordered)."""
        p, n = self.p, self.ambient_dim
        if not self.basis:
            yield (0,) * n
            return
        for coeffs in itertools.product(range(p), repeat=self.dim):
            v = [0] * n
            for c, row in zip(coeffs, self.basis):
                if c:
                    v = [(a + c * b) % p for a, b in zip(v, row)]
            yield tuple(v)

    def __str__(self) -> str:
        return format_subspace(self)


def _check_compatible(H: Subspace, K: Subspace) -> None:
    if H.p != K.p or H.ambient_dim != K.ambient_dim:
        raise ValueError(
            f"incompatible subspaces: F_{H.p}^{H.ambient_dim} vs F_{K.p}^{K.ambient_dim}"
        )


def unit(i: int, n: int) -> Vector:
    return tuple(1 if j == i else 0 for j in range(n))


def span(vectors: Iterable[Sequence[int]], ambient_dim: int, p: int) -> Subspace:
    check_prime(p)
    rows = [check_vector(v, p, ambient_dim) for v in vectors]
    return _span(rows, ambient_dim, p)


def _span(rows: Sequence[Sequence[int]], n: int, p: int) -> Subspace:
    basis, _ = rref(rows, p)
    return Subspace(p, n, tuple(basis))


def subspace_sum(H: Subspace, K: Subspace) -> Subspace:
    _check_compatible(H, K)
    if not K.basis:
        return H
    if not H.basis:
        return K
    return _span(H.basis + K.basis, H.ambient_dim, H.p)


def intersect(H: Subspace, K: Subspace) -> Subspace:
    """Zassenhaus: rows [h | h] and [k | 0]; zero left halves carry H ∩ K."""
    _check_compatible(H, K)
    n, p = H.ambient_dim, H.p
    if not H.basis or not K.basis:
        return Subspace(p, n, ())
    zeros = (0,) * n
    rows = [h + h for h in H.basis] + [k + zeros for k in K.basis]
    reduced, _ = rref(rows, p)
    meet = [row[n:] for row in reduced if not any(row[:n])]
    return _span(meet, n, p)


def contains_subspace(H: Subspace, K: Subspace) -> bool:
    """True when K ⊆ H."""
    return K <= H


# -- literals ---------------------------------------------------------------

def parse_vector(text: str, p: int, n: int) -> Vector:
    text = text.strip()
    try:
        coords = tuple(int(t) for t in text.split(",")) if text else ()
    except ValueError:
        raise ValueError(f"malformed vector literal {text!r}") from None
    return check_vector(coords, p, n)


def parse_vectors(text: str, p: int, n: int) -> list[Vector]:
    return [parse_vector(chunk, p, n) for chunk in text.split(";") if chunk.strip()]


def parse_subspace(text: str, p: int, n: int) -> Subspace:
    """Parse ``1,0,0;0,1,0``; an empty literal or ``-`` is the zero subspace."""
    if text.strip() == "-":
        return Subspace.zero(n, p)
    return span(parse_vectors(text, p, n), n, p)


def format_vector(v: Sequence[int]) -> str:
    return ",".join(str(x) for x in v)


def format_subspace(H: Subspace) -> str:
    return ";".join(format_vector(row) for row in H.basis) or "-"


# -- enumeration ------------------------------------------------------------

def gaussian_binomial(n: int, d: int, p: int) -> int:
    if d < 0 or d > n:
        return 0
    num = den = 1
    for i in range(d):
        num *= p ** (n - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


def count_subspaces(n: int, p: int, dims: Iterable[int] | None = None) -> int:
    dims = range(n + 1) if dims is None else dims
    return sum(gaussian_binomial(n, d, p) for d in dims)


def vector_index(v: Sequence[int], p: int) -> int:
    """Position of ``v`` in :func:`enumerate_vectors` order."""
    idx = 0
    for x in v:
        idx = idx * p + x
    return idx


def enumerate_vectors(n: int, p: int, limit: int | None = None) -> Iterator[Vector]:
    check_prime(p)
    check_budget(p**n, f"vectors of F_{p}^{n}", limit)
    return itertools.product(range(p), repeat=n)


def _rref_bases(n: int, d: int, p: int) -> Iterator[tuple[Vector, ...]]:
    for pivots in itertools.combinations(range(n), d):
        pivot_set = set(pivots)
        free = [(r, c) for r, pc in enumerate(pivots) for c in range(pc + 1, n) if c not in pivot_set]
        for values in itertools.product(range(p), repeat=len(free)):
            rows = [[0] * n for _ in range(d)]
            for r, pc in enumerate(pivots):
                rows[r][pc] = 1
            for (r, c), x in zip(free, values):
                rows[r][c] = x
            yield tuple(tuple(row) for row in rows)


def enumerate_subspaces(
    n: int, p: int, dims: Iterable[int] | None = None, limit: int | None = None
) -> Iterator[Subspace]:
    """Every subspace of F_p^n, ordered by dimension then lexicographic basis.

    ``dims`` restricts the dimensions produced.  The guardrail is checked
    against the total count before anything is yielded.
    """
    check_prime(p)
    dims = sorted(set(range(n + 1) if dims is None else dims) & set(range(n + 1)))
    check_budget(count_subspaces(n, p, dims), f"subspaces of F_{p}^{n}", limit)
    return _enumerate(n, p, dims)


def _enumerate(n: int, p: int, dims: list[int]) -> Iterator[Subspace]:
    for d in dims:
        for basis in sorted(_rref_bases(n, d, p)):
            yield Subspace(p, n, basis)


def _canonical_order(spaces: Iterable[Subspace]) -> list[Subspace]:
    return sorted(spaces, key=lambda S: (S.dim, S.basis))


def enumerate_superspaces(H: Subspace, limit: int | None = None) -> Iterator[Subspace]:
    """All K with H ⊆ K ⊆ F_p^n, lifted from subspaces of the quotient.

    The quotient is coordinatized by the non-pivot columns of H, and each
    quotient basis vector is lifted with zeros in H's pivot columns.
    """
    n, p = H.ambient_dim, H.p
    free = [c for c in range(n) if c not in set(H.pivots)]
    q = len(free)
    check_budget(count_subspaces(q, p), f"superspaces of a {H.dim}-dim subspace of F_{p}^{n}", limit)
    out = []
    for Q in _enumerate(q, p, list(range(q + 1))):
        lifted = []
        for row in Q.basis:
            v = [0] * n
            for c, x in zip(free, row):
                v[c] = x
            lifted.append(v)
        out.append(_span(list(H.basis) + lifted, n, p))
    return iter(_canonical_order(out))


def enumerate_subspaces_of(H: Subspace, limit: int | None = None) -> Iterator[Subspace]:
    """All subspaces of H, in canonical order."""
    n, p, d = H.ambient_dim, H.p, H.dim
    check_budget(count_subspaces(d, p), f"subspaces of a {d}-dim subspace", limit)
    out = []
    for C in _enumerate(d, p, list(range(d + 1))):
        rows = []
        for coeffs in C.basis:
            v = [0] * n
            for c, row in zip(coeffs, H.basis):
                if c:
                    v = [(a + c * b) % p for a, b in zip(v, row)]
            rows.append(v)
        out.append(_span(rows, n, p))
    return iter(_canonical_order(out))
