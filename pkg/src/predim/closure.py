"""Selfsufficiency, selfsufficient closure and the combinatorial closure.

Everything here is relative to the finite ambient M = F_p^n of a
:class:`BilinearStructure`; "every finite superspace" means every superspace
inside M.  These functions enumerate superspaces directly and are memoized
per (structure, subspace).  :mod:`predim.analysis` computes the same
quantities for every subspace at once from lattice tables.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import FormulaMismatch, NotSelfsufficient
from .linalg import (
    Subspace,
    Vector,
    enumerate_subspaces_of,
    enumerate_superspaces,
    enumerate_vectors,
    format_subspace,
    span,
)
from .structure import BilinearStructure, ScaledDelta, delta, n_of

_CACHE = 65536


@lru_cache(maxsize=_CACHE)
def is_selfsufficient(S: BilinearStructure, H: Subspace, limit: int | None = None) -> bool:
    S._check(H)
    d = delta(S, H).value
    return all(delta(S, K).value >= d for K in enumerate_superspaces(H, limit))


@lru_cache(maxsize=_CACHE)
def css(S: BilinearStructure, H: Subspace, limit: int | None = None) -> Subspace:
    """Smallest selfsufficient superspace of H.

    Among superspaces minimizing δ, the one of least dimension.  Two distinct
    minimizers of equal dimension would contradict closure of selfsufficient
    spaces under intersection, so a tie is reported as an internal error.
    """
    S._check(H)
    best = None
    winners: list[Subspace] = []
    for K in enumerate_superspaces(H, limit):
        key = (delta(S, K).value, K.dim)
        if best is None or key < best:
            best, winners = key, [K]
        elif key == best:
            winners.append(K)
    if len(winners) != 1:
        raise FormulaMismatch(f"{len(winners)} minimal-dimension δ-minimizers above {format_subspace(H)}")
    return winners[0]


def css_by_intersection(S: BilinearStructure, H: Subspace, limit: int | None = None) -> Subspace:
    """Literal definition: intersection of all selfsufficient superspaces of H."""
    out = S.ambient()
    for K in enumerate_superspaces(H, limit):
        if is_selfsufficient(S, K, limit):
            out = out & K
    return out


def _span_of(S: BilinearStructure, vectors: Iterable[Sequence[int]]) -> Subspace:
    return span(vectors, S.n, S.p)


def d_k(S: BilinearStructure, A: Iterable[Sequence[int]], limit: int | None = None) -> ScaledDelta:
    return delta(S, css(S, _span_of(S, A), limit))


def in_closure(
    S: BilinearStructure,
    A: Iterable[Sequence[int]],
    B: Iterable[Sequence[int]],
    limit: int | None = None,
) -> bool:
    """A ⊆ cl_k(B): adjoining A leaves δ of the selfsufficient closure unchanged."""
    A, B = list(A), list(B)
    return d_k(S, B, limit) == d_k(S, A + B, limit)


@dataclass(frozen=True)
class ClosureSet:
    vectors: frozenset[Vector]
    subspace: Subspace | None

    @property
    def is_subspace(self) -> bool:
        return self.subspace is not None

    def __contains__(self, v: Sequence[int]) -> bool:
        return tuple(v) in self.vectors

    def covers(self, K: Subspace) -> bool:
        if self.subspace is not None:
            return K <= self.subspace
        return all(v in self.vectors for v in K.members())


def _closed_set_span(vectors: frozenset[Vector], n: int, p: int) -> Subspace | None:
    zero = (0,) * n
    if zero not in vectors:
        return None
    for a in vectors:
        for c in range(2, p):
            if tuple((c * x) % p for x in a) not in vectors:
                return None
        for b in vectors:
            if tuple((x + y) % p for x, y in zip(a, b)) not in vectors:
                return None
    return span(vectors, n, p)


@lru_cache(maxsize=_CACHE)
def closure_set(S: BilinearStructure, B: Subspace, limit: int | None = None) -> ClosureSet:
    """{a ∈ M : a ∈ cl_k(B)}, plus a verdict on whether it is a subspace."""
    S._check(B)
    target = delta(S, css(S, B, limit)).value
    line_of = lambda a: _span_of(S, [a])
    members = frozenset(
        tuple(a)
        for a in enumerate_vectors(S.n, S.p, limit)
        if delta(S, css(S, B + line_of(a), limit)).value == target
    )
    return ClosureSet(members, _closed_set_span(members, S.n, S.p))


def _require_selfsufficient(S: BilinearStructure, H: Subspace, limit: int | None) -> None:
    if not is_selfsufficient(S, H, limit):
        raise NotSelfsufficient(f"{format_subspace(H)} is not selfsufficient")


@lru_cache(maxsize=_CACHE)
def delta_rel(
    S: BilinearStructure, K: Subspace, H: Subspace, limit: int | None = None
) -> ScaledDelta:
    """Scaled relative predimension δ_k(K/H) for selfsufficient H.

    Computed both as the minimum of δ(K₁) - δ(K₁ ∩ H) over K₁ with
    K₁ + H = K + H and K₁ ∩ H selfsufficient, and in closed form as
    k·dim((K+H)/H) - dim(N(K+H)/N(H)).  A disagreement raises.
    """
    S._check(K)
    _require_selfsufficient(S, H, limit)
    top = K + H
    best = None
    for K1 in enumerate_subspaces_of(top, limit):
        if K1 + H != top:
            continue
        low = K1 & H
        if not is_selfsufficient(S, low, limit):
            continue
        value = delta(S, K1).value - delta(S, low).value
        if best is None or value < best:
            best = value
    closed = S.k * (top.dim - H.dim) - (n_of(S, top).dim - n_of(S, H).dim)
    if best != closed:
        raise FormulaMismatch(
            f"δ_rel({format_subspace(K)} / {format_subspace(H)}): minimum {best} != closed form {closed}"
        )
    return ScaledDelta(closed, S.k)


@lru_cache(maxsize=_CACHE)
def minimal_extensions(S: BilinearStructure, H: Subspace, limit: int | None = None) -> tuple[Subspace, ...]:
    """Selfsufficient K ⊋ H with δ_rel(K/H) = 0 and δ_rel(L/H) > 0 strictly between.

    Superspaces arrive in dimension order, so a zero-δ_rel candidate is
    minimal unless it contains an earlier zero-δ_rel space other than H.
    """
    _require_selfsufficient(S, H, limit)
    zeros: list[Subspace] = []
    found: list[Subspace] = []
    for K in enumerate_superspaces(H, limit):
        if K == H or delta_rel(S, K, H, limit).value != 0:
            continue
        if not any(L <= K for L in zeros):
            if is_selfsufficient(S, K, limit):
                found.append(K)
        zeros.append(K)
    return tuple(found)


@dataclass
class ClosureReport:
    input: Subspace
    css: Subspace
    d_k: ScaledDelta
    closure: ClosureSet
    chain: list[Subspace] = field(default_factory=list)
    extensions: list[list[Subspace]] = field(default_factory=list)

    @property
    def reaches_closure(self) -> bool:
        return self.closure.subspace is not None and self.chain[-1] == self.closure.subspace

    def render_text(self) -> str:
        lines = [
            f"input   {self.input}",
            f"css     {self.css}",
            f"d_k     {self.d_k.value} (scaled by k={self.d_k.k}; d_k = {self.d_k.fraction})",
        ]
        if self.closure.subspace is not None:
            lines.append(f"closure {self.closure.subspace} (subspace, dim {self.closure.subspace.dim})")
        else:
            lines.append(f"closure {len(self.closure.vectors)} vectors, not a subspace")
        lines.append(f"chain   {len(self.chain)} member(s)")
        for i, Hi in enumerate(self.chain):
            lines.append(f"  H{i} = {Hi}")
            exts = self.extensions[i] if i < len(self.extensions) else []
            for K in exts:
                lines.append(f"    minimal extension {K}")
        lines.append(f"final member equals closure: {'yes' if self.reaches_closure else 'no'}")
        return "\n".join(lines) + "\n"

    def render_machine(self) -> str:
        lines = [
            "format 1",
            f"input {self.input}",
            f"css {self.css}",
            f"dk_scaled {self.d_k.value}",
            f"dk {self.d_k.fraction}",
            f"closure_subspace {'yes' if self.closure.is_subspace else 'no'}",
            f"closure_size {len(self.closure.vectors)}",
        ]
        if self.closure.subspace is not None:
            lines.append(f"closure_dim {self.closure.subspace.dim}")
            lines.append(f"closure {self.closure.subspace}")
        lines.append(f"chain_length {len(self.chain)}")
        for i, Hi in enumerate(self.chain):
            lines.append(f"chain {i} {Hi}")
        for i, exts in enumerate(self.extensions):
            lines.append(f"extensions {i} {len(exts)}")
            for j, K in enumerate(exts):
                lines.append(f"extension {i} {j} {K}")
        lines.append(f"reaches_closure {'yes' if self.reaches_closure else 'no'}")
        return "\n".join(lines) + "\n"


def closure_chain(S: BilinearStructure, H: Subspace, limit: int | None = None) -> ClosureReport:
    """H = H₀ ⊂ H₁ ⊂ …, each step adding every minimal extension inside cl_k(H)."""
    _require_selfsufficient(S, H, limit)
    cl = closure_set(S, H, limit)
    C = css(S, H, limit)
    report = ClosureReport(H, C, delta(S, C), cl, [H], [])
    current = H
    while True:
        exts = [K for K in minimal_extensions(S, current, limit) if cl.covers(K)]
        report.extensions.append(exts)
        if not exts:
            break
        nxt = current
        for K in exts:
            nxt = nxt + K
        report.chain.append(nxt)
        current = nxt
    return report
