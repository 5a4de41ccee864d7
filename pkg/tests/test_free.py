import pytest

from predim.closure import is_selfsufficient
from predim.exterior import bivector_rank, build_w, min_support_dim_oracle
from predim.free import (
    free_structure,
    g_sequence,
    orbit_separation_witnesses,
    orbit_verdict,
    standard_w,
    verify_lemma_4_1,
)
from predim.errors import GuardrailExceeded
from predim.linalg import enumerate_subspaces, unit
from predim.structure import check_few_relations, delta


def test_free_structure_examples():
    S = free_structure(3, 2, 1)
    assert S.relations.dim == 0
    for H in enumerate_subspaces(3, 2):
        assert delta(S, H).value == H.dim
    assert delta(free_structure(2, 3, 2), free_structure(2, 3, 2).ambient()).value == 4


@pytest.mark.parametrize("n,p", [(1, 2), (2, 2), (3, 2), (4, 2), (2, 3), (3, 3), (4, 3)])
def test_free_structure_every_subspace_selfsufficient(n, p):
    for k in (1, 2, 3):
        S = free_structure(n, p, k)
        assert check_few_relations(S).holds
        assert all(is_selfsufficient(S, H) for H in enumerate_subspaces(n, p))


def test_g_sequence():
    assert g_sequence(1) == [1]  # [PAPER] g(0) = 1
    assert g_sequence(3) == [1, 3, 7]  # [PAPER] g(i+1) = 2g(i) + 1
    assert g_sequence(4) == [1, 3, 7, 15]
    with pytest.raises(ValueError):
        g_sequence(0)


def test_orbit_witnesses():
    assert [w.rank for w in orbit_separation_witnesses(1, 2)] == [2]
    ws = orbit_separation_witnesses(2, 2)
    assert [w.rank for w in ws] == [2, 6]
    assert all(w.w.n == 6 for w in ws)
    ws3 = orbit_separation_witnesses(3, 2)
    assert [w.rank for w in ws3] == [2, 6, 14]
    assert [w.g_index for w in ws3] == [0, 1, 2]
    assert "distinct" in orbit_verdict(ws3)
    with pytest.raises(GuardrailExceeded):
        orbit_separation_witnesses(3, 2, limit=50)


@pytest.mark.parametrize("m", range(1, 6))
@pytest.mark.parametrize("p", [2, 3])
def test_rank_of_w_m(m, p):
    w = standard_w(m, p)
    assert w == build_w(m, [unit(i, 2 * m) for i in range(2 * m)], p)
    assert bivector_rank(w) == 2 * m


def test_w_m_check_examples():
    v1 = verify_lemma_4_1(1, 2)
    assert v1.passed and v1.checked == 1  # only the zero subspace
    v2 = verify_lemma_4_1(2, 2)
    assert v2.passed and v2.mode == "exhaustive"
    assert v2.threshold == 4 and v2.threshold_source.startswith("exhaustive")
    assert v2.notes  # the stated bound is reported as not sharp
    v3 = verify_lemma_4_1(3, 2)
    assert v3.passed and v3.rank == 6 and v3.threshold == 6


def test_w_m_sampled_check_is_seeded():
    a = verify_lemma_4_1(4, 3, mode="sampled", samples=20, seed=9, oracle_max_n=0)
    b = verify_lemma_4_1(4, 3, mode="sampled", samples=20, seed=9, oracle_max_n=0)
    assert a.passed and a.checked == 4 * 20
    assert a.render_text() == b.render_text()
    assert a.threshold_source == "bivector rank"


def test_w_m_threshold_matches_oracle():
    for m, p in [(2, 3), (3, 3), (4, 2)]:
        v = verify_lemma_4_1(m, p, mode="sampled", samples=10)
        assert v.threshold == min_support_dim_oracle(standard_w(m, p)) == 2 * m
