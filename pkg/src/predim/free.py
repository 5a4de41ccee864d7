"""The free structure ⟨M, Λ²M, ∧⟩ and the bivectors w_m.

Orbits of the w_{g(i)} are separated by bivector rank, which is invariant
under the action induced on Λ²M by a change of basis of M.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GuardrailExceeded
from .exterior import (
    Bivector,
    bivector_rank,
    build_w,
    embeds,
    min_support_dim_oracle,
    wedge_dim,
)
from .linalg import (
    Subspace,
    check_budget,
    check_prime,
    count_subspaces,
    enumerate_subspaces,
    rref,
    unit,
)
from .structure import BilinearStructure


def free_structure(n: int, p: int, k: int) -> BilinearStructure:
    check_prime(p)
    return BilinearStructure(p, n, k, Subspace.zero(wedge_dim(n), p))


def g_sequence(count: int) -> list[int]:
    """g(0) = 1, g(i+1) = 2 g(i) + 1."""
    if count < 1:
        raise ValueError("count must be at least 1")
    out = [1]
    while len(out) < count:
        out.append(2 * out[-1] + 1)
    return out


def standard_w(m: int, p: int, n: int | None = None) -> Bivector:
    """w_m on the first 2m standard basis vectors of F_p^n (n defaults to 2m)."""
    n = 2 * m if n is None else n
    return build_w(m, [unit(i, n) for i in range(2 * m)], p)


@dataclass(frozen=True)
class FreeWitness:
    m: int
    w: Bivector
    rank: int
    g_index: int | None = None


def orbit_separation_witnesses(count: int, p: int, limit: int | None = None) -> list[FreeWitness]:
    """w_{g(i)} for i < count in F_p^n with n = 2 g(count-1).

    Pairwise distinct ranks certify pairwise distinct orbits.
    """
    check_prime(p)
    gs = g_sequence(count)
    n = 2 * gs[-1]
    check_budget(wedge_dim(n), f"Λ² coordinates of F_{p}^{n}", limit)
    out = []
    for i, m in enumerate(gs):
        w = standard_w(m, p, n)
        out.append(FreeWitness(m, w, bivector_rank(w), i))
    return out


def orbit_verdict(witnesses: list[FreeWitness]) -> str:
    ranks = [w.rank for w in witnesses]
    distinct = len(set(ranks)) == len(ranks)
    if distinct:
        return (
            f"{len(ranks)} elements w_g(i) defined by the same scheme have pairwise distinct "
            f"rank invariants {ranks}, so they lie in {len(ranks)} distinct orbits; "
            "unboundedly many such orbits rule out countable categoricity of the free structure"
        )
    return f"ranks {ranks} are not pairwise distinct"


@dataclass
class Lemma41Verdict:
    m: int
    p: int
    passed: bool
    mode: str
    checked: int
    rank: int
    threshold: int | None
    threshold_source: str
    counterexample: Subspace | None = None
    notes: list[str] = field(default_factory=list)

    def render_text(self) -> str:
        lines = [
            f"w_{self.m} over F_{self.p}^{2 * self.m}: {'pass' if self.passed else 'FAIL'}",
            f"mode {self.mode}, {self.checked} subspaces E with dim E < {self.m} checked",
            f"rank(w_{self.m}) = {self.rank}",
        ]
        if self.threshold is not None:
            lines.append(
                f"observed threshold: w ∈ Λ²E first possible at dim E = {self.threshold} "
                f"({self.threshold_source})"
            )
        if self.counterexample is not None:
            lines.append(f"counterexample E = {self.counterexample}")
        lines += self.notes
        return "\n".join(lines) + "\n"


def _sample_subspaces(n: int, p: int, d: int, count: int, rng: np.random.Generator):
    for _ in range(count):
        while True:
            rows = rng.integers(0, p, size=(d, n)).tolist()
            basis, piv = rref(rows, p)
            if len(piv) == d:
                yield Subspace(p, n, tuple(basis))
                break


def verify_lemma_4_1(
    m: int,
    p: int,
    mode: str = "auto",
    samples: int = 200,
    seed: int = 0,
    limit: int | None = None,
    oracle_max_n: int = 8,
) -> Lemma41Verdict:
    """Check w_m ∉ Λ²E for every E ⊆ ⟨a_0..a_{2m-1}⟩ with dim E < m.

    With A the standard basis of F_p^{2m} the span of A is the whole
    ambient.  ``mode`` is ``exhaustive``, ``sampled`` or ``auto`` (exhaustive
    when the guardrail allows it).  The smallest dim E with w ∈ Λ²E is also
    measured, by the min-support scan when 2m ≤ ``oracle_max_n`` and the
    guardrail allow it, otherwise from the rank.
    """
    check_prime(p)
    n = 2 * m
    w = standard_w(m, p)
    dims = list(range(m))
    need = count_subspaces(n, p, dims)
    if mode == "auto":
        try:
            check_budget(need, "", limit)
            mode = "exhaustive"
        except GuardrailExceeded:
            mode = "sampled"
    if mode == "exhaustive":
        spaces = enumerate_subspaces(n, p, dims=dims, limit=limit)
    elif mode == "sampled":
        rng = np.random.default_rng([seed, m, p])
        spaces = (E for d in dims for E in _sample_subspaces(n, p, d, samples, rng))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    checked = 0
    bad = None
    for E in spaces:
        checked += 1
        if embeds(E, w):
            bad = E
            break
    r = bivector_rank(w)
    threshold, source = r, "bivector rank"
    if n <= oracle_max_n:
        try:
            threshold, source = min_support_dim_oracle(w, limit), "exhaustive min-support scan"
        except GuardrailExceeded:
            pass
    notes = []
    if threshold is not None and threshold > m:
        notes.append(f"no E with dim E < {threshold} contains w_{m}; the stated bound dim E < {m} is not sharp")
    return Lemma41Verdict(m, p, bad is None, mode, checked, r, threshold, source, bad, notes)
