"""Run the property suites on a reduced catalog and show a deliberately broken run.

The full default catalogs are what ``predim verify all`` uses; here the
exhaustive range is cut to n ≤ 3 so the script finishes in a few seconds.
"""
from predim.propcheck import LEMMA_IDS, CatalogConfig, off_by_one_at_zero, run_suite

small = (CatalogConfig("exhaustive", (2,), (1, 2, 3), (1, 2)),)
small_few = (CatalogConfig("exhaustive", (2,), (1, 2, 3), (1, 2), few_relations_only=True),)
lemma41 = (CatalogConfig("exhaustive", (2, 3), (1,), (1,), m_max=3),)

for lemma in LEMMA_IDS:
    catalog = lemma41 if lemma == "L4.1" else small_few if lemma in ("L5.1", "L5.2", "T6.1-chain") else small
    print(run_suite(lemma, catalog).render_text(), end="")

print("\nwith δ(0) shifted by one:")
print(run_suite("L3.1", small, delta_fault=off_by_one_at_zero).render_text())
