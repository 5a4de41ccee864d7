"""Rank separates the w_m in the free structure.

Prints the ranks of w_{g(i)}, checks that a random change of basis keeps them,
and shows where membership w_m ∈ Λ²E first becomes possible.
"""
import numpy as np

from predim import g_sequence, orbit_separation_witnesses, verify_lemma_4_1
from predim.exterior import apply_basis_change, bivector_rank
from predim.free import orbit_verdict
from predim.linalg import rank

p, count = 2, 3
witnesses = orbit_separation_witnesses(count, p)
print("g:", g_sequence(count))
for w in witnesses:
    print(f"w_{w.m}: rank {w.rank}")
print(orbit_verdict(witnesses))

rng = np.random.default_rng(0)
n = witnesses[-1].w.n
while True:
    T = rng.integers(0, p, size=(n, n)).tolist()
    if rank(T, p) == n:
        break
print("ranks after a random basis change:", [bivector_rank(apply_basis_change(T, w.w)) for w in witnesses])

for m in (1, 2, 3):
    print(verify_lemma_4_1(m, p).render_text())
