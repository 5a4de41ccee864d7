"""Structure catalogs and one exhaustive/sampled check per lemma.

A suite walks its catalog entry by entry.  Each entry is independent, so
entries may be spread over worker processes; results are merged back in
catalog order, which makes the outcome identical for any worker count.
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

import numpy as np

from .analysis import DeltaFault, StructureTable, _lambda2_masks
from .exterior import bivector_rank, min_support_dim_oracle, wedge_dim
from .free import g_sequence, orbit_separation_witnesses, standard_w, verify_lemma_4_1
from .lattice import member_mask
from .linalg import check_prime, enumerate_subspaces, format_subspace, span
from .structure import BilinearStructure, n_of, serialize_structure

DEFAULT_SEED = 20240611
DEFAULT_SAMPLES = 40
LEMMA41_SAMPLES = 200

LEMMA_IDS = ("L3.1", "L3.2", "CSS-oracle", "L3.3", "DREL", "L4.1", "L5.1", "L5.2", "T6.1-chain")


@dataclass(frozen=True)
class CatalogConfig:
    mode: str = "exhaustive"
    ps: tuple[int, ...] = (2,)
    ns: tuple[int, ...] = (1, 2, 3)
    ks: tuple[int, ...] = (1, 2, 3)
    seed: int = DEFAULT_SEED
    samples: int = DEFAULT_SAMPLES
    few_relations_only: bool = False
    m_max: int = 5
    limit: int | None = None

    def __post_init__(self):
        if self.mode not in ("exhaustive", "sampled"):
            raise ValueError(f"unknown catalog mode {self.mode!r}")
        for p in self.ps:
            check_prime(p)
        if any(k < 1 for k in self.ks) or any(n < 1 for n in self.ns):
            raise ValueError("catalog needs n ≥ 1 and k ≥ 1")

    def describe(self) -> str:
        extra = f" samples={self.samples} seed={self.seed}" if self.mode == "sampled" else ""
        few = " few-relations-only" if self.few_relations_only else ""
        return f"{self.mode} p={list(self.ps)} n={list(self.ns)} k={list(self.ks)}{extra}{few}"


Catalog = Sequence[CatalogConfig]


@dataclass(frozen=True)
class CatalogEntry:
    position: tuple[int, ...]
    structure: BilinearStructure
    mode: str
    few_relations: bool


def _sampled_relations(p: int, n: int, seed: int, samples: int):
    D = wedge_dim(n)
    rng = np.random.default_rng([seed, p, n])
    out = []
    for _ in range(samples):
        r = int(rng.integers(0, D + 1))
        gens = rng.integers(0, p, size=(r, D)).tolist()
        out.append(span(gens, D, p))
    return out


def generate_catalog(config: CatalogConfig, part: int = 0) -> Iterator[CatalogEntry]:
    """Structures of one catalog part, ordered by p, n, k, then relations.

    Structures failing the few-relations check are tagged, never dropped,
    unless ``few_relations_only`` is set.
    """
    for p in config.ps:
        for n in config.ns:
            D = wedge_dim(n)
            if config.mode == "exhaustive":
                rels = list(enumerate_subspaces(D, p, limit=config.limit))
            else:
                rels = _sampled_relations(p, n, config.seed, config.samples)
            for k in config.ks:
                for i, R in enumerate(rels):
                    S = BilinearStructure(p, n, k, R)
                    few = StructureTable(S, config.limit).few_relations
                    if config.few_relations_only and not few:
                        continue
                    yield CatalogEntry((part, p, n, k, i), S, config.mode, few)


def catalog_entries(catalog: Catalog) -> list[CatalogEntry]:
    return [e for part, cfg in enumerate(catalog) for e in generate_catalog(cfg, part)]


# -- per-structure checks ----------------------------------------------------
#
# Each check gets the table of one structure and returns (instances,
# counterexample text or None).  Counterexamples are the first hit in
# lattice order.

def _sub(T: StructureTable, i: int) -> str:
    return format_subspace(T.lattice.subspaces[int(i)])


def _first(bad: np.ndarray) -> tuple[int, ...] | None:
    hits = np.argwhere(bad)
    return tuple(int(x) for x in hits[0]) if len(hits) else None


def check_l31(T: StructureTable) -> tuple[int, str | None]:
    L, d = T.lattice, T.delta
    s, t = d[L.join], d[L.meet]
    dh, dk = d[:, None], d[None, :]
    clause1 = s + t <= dh + dk
    clause2 = ~(s > dk) | (t < dh)
    clause3 = ~(s >= dk) | (t <= dh)
    instances = L.size * L.size
    for name, ok in (("i", clause1), ("ii", clause2), ("iii", clause3)):
        hit = _first(~ok)
        if hit:
            h, k = hit
            return instances, f"clause {name} fails for H={_sub(T, h)} K={_sub(T, k)}"
    if T.few_relations:
        hit = _first(d < 0)
        if hit:
            return instances, f"negative predimension at H={_sub(T, hit[0])}"
    return instances, None


def check_l32(T: StructureTable) -> tuple[int, str | None]:
    ss = T.selfsufficient
    pairs = ss[:, None] & ss[None, :]
    hit = _first(pairs & ~ss[T.lattice.meet])
    if hit:
        h, k = hit
        return int(pairs.sum()), f"H={_sub(T, h)} and K={_sub(T, k)} selfsufficient, intersection is not"
    return int(pairs.sum()), None


def check_css(T: StructureTable) -> tuple[int, str | None]:
    L = T.lattice
    members = L.members
    chosen = L.leq & T.selfsufficient[None, :]
    literal = np.all(members[None, :, :] | ~chosen[:, :, None], axis=1)
    for h in range(L.size):
        row = literal[h]
        mask = sum(1 << int(j) for j in np.flatnonzero(row))
        idx = L.mask_index.get(mask)
        if not T.css_unique[h]:
            return L.size, f"several minimal-dimension δ-minimizers above H={_sub(T, h)}"
        if idx != T.css[h]:
            return L.size, f"css search {_sub(T, T.css[h])} != intersection of selfsufficient superspaces of H={_sub(T, h)}"
        if T.css_delta[h] != T.min_above[h]:
            return L.size, f"δ(css(H)) != min δ over superspaces for H={_sub(T, h)}"
    return L.size, None


def check_l33(T: StructureTable) -> tuple[int, str | None]:
    L = T.lattice
    C = T.in_closure
    Ci = C.astype(np.int64)
    N = L.size
    instances = N + 2 * N**3 + N * N
    if not C.diagonal().all() or (L.members & ~T.closure_vectors).any():
        h = int(np.flatnonzero(~C.diagonal() | (L.members & ~T.closure_vectors).any(axis=1))[0])
        return instances, f"extensivity fails: A={_sub(T, h)} not inside cl_k(A)"
    leaks = (Ci @ (1 - Ci).T) > 0
    hit = _first(L.leq & leaks)
    if hit:
        a, b = hit
        return instances, f"monotonicity fails: A={_sub(T, a)} ⊆ B={_sub(T, b)} but cl_k(A) ⊄ cl_k(B)"
    twice = (Ci @ Ci) > 0
    hit = _first(twice & ~C)
    if hit:
        a, c = hit
        return instances, f"idempotence fails: C={_sub(T, c)} in cl_k(cl_k(A)) but not cl_k(A) for A={_sub(T, a)}"
    memb = L.members.astype(np.int64)
    elementwise = (T.closure_vectors.astype(np.int64) @ memb.T) == memb.sum(axis=1)[None, :]
    hit = _first(elementwise != C)
    if hit:
        b, a = hit
        return instances, f"set and elementwise closure disagree for A={_sub(T, a)} over B={_sub(T, b)}"
    return instances, None


def check_drel(T: StructureTable) -> tuple[int, str | None]:
    L, d = T.lattice, T.delta
    instances = 0
    for h in np.flatnonzero(T.selfsufficient):
        top = L.join[:, h]
        low = L.meet[:, h]
        values = d - d[low]
        ok_k1 = T.selfsufficient[low]
        cand = (top[None, :] == top[:, None]) & ok_k1[None, :]
        mins = np.where(cand, values[None, :], np.iinfo(np.int64).max).min(axis=1)
        closed = d[top] - d[h]
        instances += L.size
        hit = _first(mins != closed)
        if hit:
            k = hit[0]
            return instances, f"δ_rel(K/H) min {mins[k]} != closed {closed[k]} for K={_sub(T, k)} H={_sub(T, h)}"
    return instances, None


def check_l51(T: StructureTable) -> tuple[int, str | None]:
    L = T.lattice
    ME = T.minimal_extensions
    instances = 0
    for h in np.flatnonzero(T.selfsufficient):
        ks = np.flatnonzero(ME[h])
        if not ks.size:
            continue
        ls = np.flatnonzero(T.selfsufficient & L.leq[h])
        bad = ~L.leq[np.ix_(ks, ls)] & (L.meet[np.ix_(ks, ls)] != h)
        instances += bad.size
        hit = _first(bad)
        if hit:
            k, l = ks[hit[0]], ls[hit[1]]
            return instances, (
                f"minimal extension K={_sub(T, k)} of H={_sub(T, h)} neither inside "
                f"L={_sub(T, l)} nor independent from it over H"
            )
    return instances, None


def _relation_masks(T: StructureTable) -> list[int] | None:
    S = T.S
    if S.p ** wedge_dim(S.n) > 4096:
        return None
    R = member_mask(S.relations)
    return [R & m for m in _lambda2_masks(S.n, S.p)]


def _popdim(mask: int, p: int) -> int:
    size, d = mask.bit_count(), 0
    while size > 1:
        size //= p
        d += 1
    return d


def check_l52(T: StructureTable) -> tuple[int, str | None]:
    L, S = T.lattice, T.S
    memb = L.members.astype(np.int64)
    outside = (~T.closure_vectors).astype(np.int64)
    covered = (outside @ memb.T) == 0  # covered[H, K]: K ⊆ cl_k(H)
    nmask = _relation_masks(T)
    instances = 0
    for h in np.flatnonzero(T.selfsufficient):
        group = np.flatnonzero(covered[h] & T.selfsufficient & L.leq[h])
        for a, k in enumerate(group):
            for l in group[a:]:
                if L.meet[k, l] != h:
                    continue
                instances += 1
                top = L.join[k, l]
                if nmask is not None:
                    nk, nl, nt = nmask[k], nmask[l], nmask[top]
                    inside = ((nk | nl) & ~nt) == 0
                    summed = _popdim(nk, S.p) + _popdim(nl, S.p) - _popdim(nk & nl, S.p)
                    ok = inside and summed == _popdim(nt, S.p)
                else:
                    Ks, Ls = L.subspaces[k], L.subspaces[l]
                    ok = n_of(S, Ks + Ls) == n_of(S, Ks) + n_of(S, Ls)
                if not ok:
                    return instances, (
                        f"N(L+K) != N(L)+N(K) for H={_sub(T, h)} K={_sub(T, k)} L={_sub(T, l)}"
                    )
    return instances, None


def check_t61(T: StructureTable) -> tuple[int, str | None]:
    instances = 0
    for h in np.flatnonzero(T.selfsufficient):
        instances += 1
        chain, steps = T.chain(int(h))
        target = T.css_delta[h]
        cl = T.closure_index[h]
        if cl != h and not steps[0]:
            return instances, f"closure of H={_sub(T, h)} is strict but no minimal extension lies inside it"
        for i, hi in enumerate(chain):
            if not T.selfsufficient[hi]:
                return instances, f"chain member H{i}={_sub(T, hi)} from H={_sub(T, h)} is not selfsufficient"
            if T.delta[hi] != target:
                return instances, f"chain member H{i}={_sub(T, hi)} from H={_sub(T, h)} has δ {T.delta[hi]} != d_k {target}"
        if cl < 0:
            return instances, f"cl_k(H) is not a subspace for H={_sub(T, h)}"
        if chain[-1] != cl:
            return instances, f"chain from H={_sub(T, h)} stops at {_sub(T, chain[-1])}, closure is {_sub(T, cl)}"
    return instances, None


STRUCTURE_CHECKS: dict[str, Callable[[StructureTable], tuple[int, str | None]]] = {
    "L3.1": check_l31,
    "L3.2": check_l32,
    "CSS-oracle": check_css,
    "L3.3": check_l33,
    "DREL": check_drel,
    "L5.1": check_l51,
    "L5.2": check_l52,
    "T6.1-chain": check_t61,
}


# -- suites ----------------------------------------------------------------

@dataclass
class SuiteResult:
    lemma_id: str
    instances: int
    passed: bool
    seed: int
    time_ms: int
    counterexample: str | None = None
    coverage: list[str] = field(default_factory=list)

    def machine_line(self, timing: bool = True) -> str:
        t = str(self.time_ms) if timing else "-"
        status = "pass" if self.passed else "fail"
        return f"SUITE {self.lemma_id} {status} instances={self.instances} seed={self.seed} time_ms={t}"

    def render_text(self, timing: bool = True) -> str:
        lines = [self.machine_line(timing)]
        lines += [f"  covered {c}" for c in self.coverage]
        if self.counterexample:
            lines.append("  counterexample:")
            lines += ["    " + ln for ln in self.counterexample.rstrip("\n").splitlines()]
        return "\n".join(lines) + "\n"


def default_catalog(lemma_id: str, seed: int = DEFAULT_SEED, samples: int = DEFAULT_SAMPLES) -> tuple[CatalogConfig, ...]:
    exhaustive3 = CatalogConfig("exhaustive", (2,), (1, 2, 3), (1, 2, 3), seed)
    sampled4 = CatalogConfig("sampled", (2, 3), (4,), (1, 2, 3), seed, samples)
    exhaustive4 = CatalogConfig("exhaustive", (2,), (1, 2, 3, 4), (1, 2, 3), seed, few_relations_only=True)
    if lemma_id in ("L3.1", "L3.2", "CSS-oracle"):
        return (exhaustive3, sampled4)
    if lemma_id in ("L3.3", "DREL"):
        return (exhaustive3,)
    if lemma_id in ("L5.1", "L5.2", "T6.1-chain"):
        return (exhaustive4,)
    if lemma_id == "L4.1":
        return (CatalogConfig("exhaustive", (2, 3), (1,), (1,), seed, LEMMA41_SAMPLES, m_max=5),)
    raise KeyError(f"unknown lemma id {lemma_id!r}")


def _run_entries(lemma_id: str, entries: list[CatalogEntry], fault: DeltaFault | None):
    check = STRUCTURE_CHECKS[lemma_id]
    out = []
    for e in entries:
        T = StructureTable(e.structure, delta_fault=fault)
        out.append(check(T))
    return out


def _chunks(items: list, parts: int) -> list[list]:
    size = -(-len(items) // parts) if items else 0
    return [items[i : i + size] for i in range(0, len(items), size)] if size else []


def _map(fn, jobs: list[tuple], workers: int) -> list:
    if workers <= 1 or len(jobs) <= 1:
        return [fn(*job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, *job) for job in jobs]
        return [f.result() for f in futures]


def _counterexample_text(entry: CatalogEntry, detail: str) -> str:
    tag = "few relations" if entry.few_relations else "few relations FAIL"
    return (
        f"{detail}\nstructure ({entry.mode}, {tag}, position {list(entry.position)}):\n"
        + serialize_structure(entry.structure)
    )


def _lemma41_unit(m: int, p: int, seed: int, samples: int, limit: int | None):
    """One (m, p) point: exhaustive or sampled lemma check, rank, oracle."""
    verdict = verify_lemma_4_1(m, p, samples=samples, seed=seed, limit=limit)
    problems = []
    if not verdict.passed:
        problems.append(f"w_{m} ∈ Λ²E for E={verdict.counterexample} with dim E < {m} (p={p})")
    if verdict.rank != 2 * m:
        problems.append(f"rank(w_{m}) = {verdict.rank} != {2 * m} (p={p})")
    if verdict.threshold_source.startswith("exhaustive") and verdict.threshold != verdict.rank:
        problems.append(f"min-support {verdict.threshold} != rank {verdict.rank} for w_{m} (p={p})")
    cover = f"m={m} p={p} {verdict.mode} E-checks={verdict.checked} threshold={verdict.threshold} via {verdict.threshold_source}"
    return verdict.checked + 1, problems, cover


def _run_lemma41(cfg: CatalogConfig, workers: int) -> tuple[int, list[str], list[str]]:
    jobs = [(m, p, cfg.seed, cfg.samples, cfg.limit) for p in cfg.ps for m in range(1, cfg.m_max + 1)]
    results = _map(_lemma41_unit, jobs, workers)
    instances = sum(r[0] for r in results)
    problems = [msg for r in results for msg in r[1]]
    coverage = [r[2] for r in results]
    if g_sequence(3) != [1, 3, 7]:
        problems.append(f"g_sequence(3) = {g_sequence(3)}")
    for p in cfg.ps:
        ranks = [w.rank for w in orbit_separation_witnesses(2, p, cfg.limit)]
        instances += 1
        if ranks != [2, 6]:
            problems.append(f"orbit witness ranks {ranks} != [2, 6] (p={p})")
        coverage.append(f"orbit witnesses count=2 p={p} ranks={ranks}")
    return instances, problems, coverage


def run_suite(
    lemma_id: str,
    catalog: Catalog | None = None,
    workers: int = 1,
    delta_fault: DeltaFault | None = None,
) -> SuiteResult:
    """Run the named lemma check over a catalog (the shipped default if None)."""
    if lemma_id not in LEMMA_IDS:
        raise KeyError(f"unknown lemma id {lemma_id!r}; known: {', '.join(LEMMA_IDS)}")
    catalog = tuple(catalog) if catalog is not None else default_catalog(lemma_id)
    seed = catalog[0].seed if catalog else DEFAULT_SEED
    start = time.perf_counter()
    if lemma_id == "L4.1":
        instances, problems, coverage = 0, [], []
        for cfg in catalog:
            i, pr, cv = _run_lemma41(cfg, workers)
            instances += i
            problems += pr
            coverage += cv
        elapsed = int((time.perf_counter() - start) * 1000)
        return SuiteResult(lemma_id, instances, not problems, seed, elapsed, "\n".join(problems) or None, coverage)

    entries = catalog_entries(catalog)
    jobs = [(lemma_id, chunk, delta_fault) for chunk in _chunks(entries, max(1, workers))]
    per_entry = [r for chunk in _map(_run_entries, jobs, workers) for r in chunk]
    instances = sum(r[0] for r in per_entry)
    counterexample = None
    for entry, (_, detail) in zip(entries, per_entry):
        if detail is not None:
            counterexample = _counterexample_text(entry, detail)
            break
    coverage = []
    for part, cfg in enumerate(catalog):
        mine = [(e, r) for e, r in zip(entries, per_entry) if e.position[0] == part]
        tagged = sum(1 for e, _ in mine if e.few_relations)
        coverage.append(
            f"{cfg.describe()}: structures={len(mine)} few-relations={tagged} "
            f"instances={sum(r[0] for _, r in mine)}"
        )
    elapsed = int((time.perf_counter() - start) * 1000)
    return SuiteResult(lemma_id, instances, counterexample is None, seed, elapsed, counterexample, coverage)


def run_all(workers: int = 1, seed: int = DEFAULT_SEED, samples: int = DEFAULT_SAMPLES) -> list[SuiteResult]:
    return [run_suite(i, default_catalog(i, seed, samples), workers) for i in LEMMA_IDS]


def off_by_one_at_zero(delta: np.ndarray, lattice) -> np.ndarray:
    """Fault injection for sanity checks: raise δ of the zero subspace by one."""
    delta[lattice.zero] += 1
    return delta
