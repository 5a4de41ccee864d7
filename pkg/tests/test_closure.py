import itertools

import numpy as np
import pytest

from predim.analysis import StructureTable
from predim.closure import (
    closure_chain,
    closure_set,
    css,
    css_by_intersection,
    d_k,
    delta_rel,
    in_closure,
    is_selfsufficient,
    minimal_extensions,
)
from predim.errors import NotSelfsufficient
from predim.exterior import wedge_dim
from predim.linalg import Subspace, enumerate_subspaces, enumerate_superspaces, span
from predim.structure import BilinearStructure, check_few_relations, delta

from conftest import E0, E1, E2, sub


# -- examples -----------------------------------------------------------------

def test_selfsufficient_examples(s1, s2):
    assert is_selfsufficient(s1, s1.ambient())
    assert is_selfsufficient(s1, sub(E0))
    assert not is_selfsufficient(s2, sub(E0))


def test_css_examples(s1, s2):
    H = sub(E0)
    assert css(s1, H) == H
    assert css(s2, H) == s2.ambient()
    # [DERIVED] brute-force minimum of δ over superspaces
    assert delta(s2, css(s2, H)).value == min(delta(s2, K).value for K in enumerate_superspaces(H)) == 0


def test_dk_examples(s1, s2):
    assert d_k(s1, []).value == 0
    assert d_k(s2, [E0]).value == 0
    assert d_k(s1, [E0]).value == 1


def test_in_closure_examples(s1):
    assert in_closure(s1, [(1, 1, 0)], [E0, E1])
    assert in_closure(s1, [E1], [E0])
    assert not in_closure(s1, [E2], [E0])
    assert d_k(s1, [E0, E2]).value == 2


def test_closure_set_examples(s1, s2):
    full = closure_set(s1, s1.ambient())
    assert full.subspace == s1.ambient() and len(full.vectors) == 8
    c = closure_set(s1, sub(E0))
    assert c.subspace == sub(E0, E1) and len(c.vectors) == 4
    z = closure_set(s2, s2.zero())
    assert z.subspace == s2.ambient()


def test_delta_rel_examples(s1, s2):
    H = sub(E0)
    assert delta_rel(s1, H, H).value == 0
    assert delta_rel(s2, sub(E0), s2.zero()).value == 1
    assert delta_rel(s1, sub(E0, E1), H).value == 0
    with pytest.raises(NotSelfsufficient):
        delta_rel(s2, s2.ambient(), sub(E0))


def test_minimal_extension_examples(s1, s2):
    assert minimal_extensions(s1, s1.ambient()) == ()
    assert minimal_extensions(s2, s2.zero()) == (s2.ambient(),)
    assert minimal_extensions(s1, sub(E0)) == (sub(E0, E1),)


def test_chain_examples(s1, s2):
    r = closure_chain(s2, s2.zero())
    assert r.chain == [s2.zero(), s2.ambient()] and r.reaches_closure
    r = closure_chain(s1, sub(E0))
    assert r.chain == [sub(E0), sub(E0, E1)] and r.reaches_closure
    r = closure_chain(s1, s1.ambient())
    assert r.chain == [s1.ambient()]
    with pytest.raises(NotSelfsufficient):
        closure_chain(s2, sub(E0))


def test_report_renderings(s1):
    r = closure_chain(s1, sub(E0))
    text = r.render_text()
    assert "closure 1,0,0;0,1,0 (subspace, dim 2)" in text
    machine = r.render_machine().splitlines()
    assert machine[0] == "format 1"
    assert "chain 1 1,0,0;0,1,0" in machine and "reaches_closure yes" in machine


# -- exhaustive cross-checks: direct route vs lattice tables vs literal oracles ---

def catalog(n, p, ks):
    for R in enumerate_subspaces(wedge_dim(n), p):
        for k in ks:
            yield BilinearStructure(p, n, k, R)


@pytest.mark.parametrize("n,p,ks", [(2, 2, (1, 2)), (3, 2, (1, 2, 3)), (2, 3, (1, 2))])
def test_direct_and_table_agree(n, p, ks):
    spaces = list(enumerate_subspaces(n, p))
    for S in catalog(n, p, ks):
        T = StructureTable(S)
        L = T.lattice
        assert [H for H in L.subspaces] == spaces
        for i, H in enumerate(spaces):
            assert T.delta[i] == delta(S, H).value
            ss = is_selfsufficient(S, H)
            assert bool(T.selfsufficient[i]) == ss
            C = css(S, H)
            assert L.subspaces[T.css[i]] == C == css_by_intersection(S, H)
            assert T.css_unique[i]
            cl = closure_set(S, H)
            idx = T.closure_index[i]
            if cl.subspace is None:
                assert idx == -1
            else:
                assert L.subspaces[idx] == cl.subspace
            if ss:
                got = {L.subspaces[j] for j in np.flatnonzero(T.minimal_extensions[i])}
                assert got == set(minimal_extensions(S, H))
        assert T.few_relations == check_few_relations(S).holds


@pytest.mark.parametrize("n,p", [(2, 2), (3, 2), (2, 3)])
def test_css_axioms(n, p):
    spaces = list(enumerate_subspaces(n, p))
    for S in catalog(n, p, (1, 2)):
        for H in spaces:
            C = css(S, H)
            assert H <= C and css(S, C) == C and is_selfsufficient(S, C)
            assert delta(S, C).value == min(delta(S, K).value for K in enumerate_superspaces(H))
        for H, K in itertools.product(spaces, repeat=2):
            if H <= K:
                assert css(S, H) <= css(S, K)
            if is_selfsufficient(S, H) and is_selfsufficient(S, K):
                assert is_selfsufficient(S, H & K)


@pytest.mark.parametrize("n,p", [(2, 2), (3, 2)])
def test_closure_axioms_over_generating_sets(n, p):
    spaces = list(enumerate_subspaces(n, p))
    for S in catalog(n, p, (1, 2)):
        cl = {H: closure_set(S, H) for H in spaces}
        for A in spaces:
            assert all(a in cl[A] for a in A.members())  # extensivity
        for A, B in itertools.product(spaces, repeat=2):
            if A <= B:
                assert cl[A].vectors <= cl[B].vectors  # monotonicity
        for A in spaces:
            # idempotence: whatever lies in the closure of cl(A)-generators lies in cl(A)
            for c in cl[A].vectors:
                assert in_closure(S, [c], list(A.basis))
            assert cl[A].is_subspace
            assert cl[cl[A].subspace].vectors == cl[A].vectors


@pytest.mark.parametrize("n,p", [(2, 2), (3, 2)])
def test_delta_rel_min_equals_closed(n, p):
    spaces = list(enumerate_subspaces(n, p))
    for S in catalog(n, p, (1, 2)):
        for H in spaces:
            if not is_selfsufficient(S, H):
                continue
            for K in spaces:
                d = delta_rel(S, K, H).value  # raises on mismatch
                assert d == delta(S, K + H).value - delta(S, H).value


def test_free_structure_closure():
    from predim.free import free_structure

    for n, p, k in [(3, 2, 1), (2, 3, 2), (4, 2, 3)]:
        S = free_structure(n, p, k)
        for H in enumerate_subspaces(n, p):
            assert delta(S, H).value == k * H.dim
            assert is_selfsufficient(S, H) and css(S, H) == H
            if n <= 3:
                assert closure_set(S, H).subspace == H
