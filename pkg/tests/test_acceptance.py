"""Acceptance criteria, one test each.

Each test runs the named scenarios with default parameters, prints one
line ``criterion N: PASS|FAIL`` (visible with ``pytest -s`` or when run as a
script) and asserts that every claim passed within the time bound.
"""
import sys
import time

import pytest

from austere_eds import scenarios as sc

CRITERIA = {
    1: ("prolongation dimensions", [("lemma_prolong_bc", {})], 1),
    2: ("austere tests", [("austere_maximal_spaces", {})], 5),
    3: ("type A torsion", [("typeA_torsion_gk6", {})], 30),
    4: ("type A characters", [("prop_charA", {})], 120),
    5: ("high codimension r=7 and r=8", [("typeA_highcodim", {"r": 7}), ("typeA_highcodim", {"r": 8})], 300),
    6: ("integral-element dimension by normal rank", [("prop_sixteen", {})], 60),
    7: ("type B normal rank 5", [("typeB_forced_forms", {}), ("typeB_delta5_nonexistence", {})], 600),
    8: ("type C characters", [("typeC_characters", {})], 120),
    9: ("type C characteristic variety", [("typeC_char_variety", {})], 600),
    10: ("type C at lambda1 = +-1", [("prop_notone", {})], 600),
    11: ("type C prolonged and degenerate", [("prop_heliC", {})], 120),
    12: ("normal rank 2 cases", [("k2_case_1a", {}), ("k2_case_2a", {}), ("k2_case_2b", {})], 300),
    13: ("identity suite", [("cmissing_identities", {}), ("so6_beta_structure", {})], 60),
    14: ("numeric suite", [("helicoid_numeric", {}), ("segre_numeric", {})], 10),
}


def evaluate(number: int):
    title, runs, bound = CRITERIA[number]
    start = time.perf_counter()
    reports = [sc.run(name, seed=0, params=params) for name, params in runs]
    elapsed = time.perf_counter() - start
    failed = [f"{r.scenario}: {c.label} ({c.status}; expected {c.expected}, computed {c.computed[:200]})"
              for r in reports for c in r.claims if c.status != "pass"]
    if elapsed > bound:
        failed.append(f"took {elapsed:.1f} s, bound {bound} s")
    print(f"criterion {number:2d}: {'PASS' if not failed else 'FAIL'}  {title}")
    return failed


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    failed = evaluate(number)
    assert not failed, "\n".join(failed)


if __name__ == "__main__":
    sys.exit(1 if any([evaluate(n) for n in sorted(CRITERIA)]) else 0)
