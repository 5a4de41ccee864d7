"""Alternating bilinear maps in pair form (M, N(β)).

M = F_p^n and W is never built: it is the quotient Λ²M / N(β), with
elements represented by their reduced coset representatives.  Predimension
values are kept scaled by k so that every comparison is integer-exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Sequence

from .exterior import Bivector, lambda2_embed, wedge, wedge_dim
from .linalg import (
    Subspace,
    check_prime,
    check_vector,
    enumerate_subspaces,
    intersect,
    span,
)


@dataclass(frozen=True)
class BilinearStructure:
    p: int
    n: int
    k: int
    relations: Subspace

    def __post_init__(self):
        check_prime(self.p)
        if self.n < 0:
            raise ValueError(f"negative ambient dimension {self.n}")
        if not isinstance(self.k, int) or self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k!r}")
        R = self.relations
        if R.p != self.p or R.ambient_dim != wedge_dim(self.n):
            raise ValueError(
                f"relations must live in F_{self.p}^{wedge_dim(self.n)}, "
                f"got F_{R.p}^{R.ambient_dim}"
            )

    @classmethod
    def from_relations(cls, p: int, n: int, k: int, rels: Sequence[Sequence[int]] = ()) -> "BilinearStructure":
        check_prime(p)
        return cls(p, n, k, span(rels, wedge_dim(n), p))

    def with_k(self, k: int) -> "BilinearStructure":
        return BilinearStructure(self.p, self.n, k, self.relations)

    def ambient(self) -> Subspace:
        return Subspace.full(self.n, self.p)

    def zero(self) -> Subspace:
        return Subspace.zero(self.n, self.p)

    def _check(self, H: Subspace) -> None:
        if H.p != self.p or H.ambient_dim != self.n:
            raise ValueError(f"subspace of F_{H.p}^{H.ambient_dim} in a structure on F_{self.p}^{self.n}")


@dataclass(frozen=True, order=True)
class ScaledDelta:
    """k·δ_k(H) = k·dim(H) - dim(N(H)), an exact integer."""

    value: int
    k: int

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.value, self.k)

    def __int__(self) -> int:
        return self.value

    def __str__(self) -> str:
        return f"{self.value} (delta = {self.fraction})"


@lru_cache(maxsize=65536)
def n_of(S: BilinearStructure, H: Subspace) -> Subspace:
    """N(H) = N(β) ∩ Λ²H."""
    S._check(H)
    return intersect(S.relations, lambda2_embed(H))


def delta(S: BilinearStructure, H: Subspace) -> ScaledDelta:
    return ScaledDelta(S.k * H.dim - n_of(S, H).dim, S.k)


def beta_map(S: BilinearStructure, u: Sequence[int], v: Sequence[int]) -> Bivector:
    """β(u, v) as the canonical representative of u ∧ v modulo N(β)."""
    u = check_vector(u, S.p, S.n)
    v = check_vector(v, S.p, S.n)
    w = wedge(u, v, S.p)
    return Bivector(S.p, S.n, S.relations.reduce(w.coords))


@dataclass(frozen=True)
class FewRelationsVerdict:
    holds: bool
    witness: Subspace | None = None
    witness_relations: int | None = None

    def __bool__(self) -> bool:
        return self.holds


def check_few_relations(S: BilinearStructure, limit: int | None = None) -> FewRelationsVerdict:
    """Check dim N(H) ≤ k·dim H for every subspace H of the ambient.

    Subspaces are scanned dimension-major, so the first violation found is a
    witness of minimal dimension.
    """
    for H in enumerate_subspaces(S.n, S.p, limit=limit):
        r = n_of(S, H).dim
        if r > S.k * H.dim:
            return FewRelationsVerdict(False, H, r)
    return FewRelationsVerdict(True)


# -- file format ------------------------------------------------------------

class StructureFormatError(ValueError):
    pass


def parse_structure(text: str) -> BilinearStructure:
    """Parse the line-oriented structure format.

    Lines are ``p <prime>``, ``dim <n>``, ``k <int>`` and any number of
    ``rel <residues>``; ``#`` starts a comment.  Residues may be separated
    by whitespace or commas.
    """
    fields: dict[str, int] = {}
    rels: list[list[str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, *rest = line.split()
        if key == "rel":
            rels.append(" ".join(rest).replace(",", " ").split())
        elif key in ("p", "dim", "k"):
            if len(rest) != 1:
                raise StructureFormatError(f"line {lineno}: '{key}' takes one value")
            if key in fields:
                raise StructureFormatError(f"line {lineno}: duplicate '{key}'")
            try:
                fields[key] = int(rest[0])
            except ValueError:
                raise StructureFormatError(f"line {lineno}: bad integer {rest[0]!r}") from None
        else:
            raise StructureFormatError(f"line {lineno}: unknown keyword {key!r}")
    for key in ("p", "dim", "k"):
        if key not in fields:
            raise StructureFormatError(f"missing '{key}' line")
    p, n, k = fields["p"], fields["dim"], fields["k"]
    check_prime(p)
    D = wedge_dim(n)
    vectors = []
    for tokens in rels:
        try:
            coords = [int(t) for t in tokens]
        except ValueError:
            raise StructureFormatError(f"bad residue in rel line {' '.join(tokens)!r}") from None
        try:
            vectors.append(check_vector(coords, p, D))
        except ValueError as exc:
            raise StructureFormatError(str(exc)) from None
    try:
        return BilinearStructure(p, n, k, span(vectors, D, p))
    except ValueError as exc:
        raise StructureFormatError(str(exc)) from None


def serialize_structure(S: BilinearStructure) -> str:
    lines = [f"p {S.p}", f"dim {S.n}", f"k {S.k}"]
    lines += ["rel " + " ".join(str(x) for x in row) for row in S.relations.basis]
    return "\n".join(lines) + "\n"


def load_structure(path: str | Path) -> BilinearStructure:
    return parse_structure(Path(path).read_text())


def parse_inline(text: str) -> BilinearStructure:
    """Inline form of the file format with ';' in place of newlines."""
    return parse_structure(text.replace(";", "\n"))
