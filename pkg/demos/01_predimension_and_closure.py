"""Walk through predimension, selfsufficiency and the closure chain on F_2^3.

Two structures are compared: one relation e0∧e1, and every bivector a relation.
Run with ``python demos/01_predimension_and_closure.py``.
"""
from predim import (
    BilinearStructure,
    closure_chain,
    closure_set,
    css,
    delta,
    enumerate_subspaces,
    is_selfsufficient,
    n_of,
    span,
)

one = BilinearStructure.from_relations(2, 3, 1, [(1, 0, 0)])
full = BilinearStructure.from_relations(2, 3, 1, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])

for name, S in [("one relation", one), ("all relations", full)]:
    print(f"== {name} ==")
    print(f"{'subspace':<22}{'dim':>4}{'dim N':>6}{'delta':>6}  selfsufficient")
    for H in enumerate_subspaces(3, 2):
        ss = "yes" if is_selfsufficient(S, H) else ""
        print(f"{str(H):<22}{H.dim:>4}{n_of(S, H).dim:>6}{delta(S, H).value:>6}  {ss}")
    H = span([(1, 0, 0)], 3, 2)
    print(f"css({H}) = {css(S, H)}")
    base = css(S, H)
    cl = closure_set(S, base)
    print(f"cl_k({base}) has {len(cl.vectors)} vectors; subspace: {cl.is_subspace}")
    print(closure_chain(S, base).render_text())
