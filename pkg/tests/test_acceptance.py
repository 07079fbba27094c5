"""Acceptance checks, one test per criterion.

Every suite is run through the ``verify`` command so the checks see the same
JSON report a user would. Each test records a PASS/FAIL line; the lines are
printed at the end of the pytest session (see conftest.py) and when this
file is executed directly.
"""

import functools
import json
import re
import sys

from click.testing import CliRunner

from focount.cli import main
from focount.corpus import FO_CORPUS, QF_CORPUS, REL_CORPUS, V1, V2, corpus_queries
from focount.logic import classify_fragment

RESULTS: dict[int, tuple[bool, str]] = {}

_TIMING = re.compile(r',?\n  "timing": \{\n    "seconds": [0-9.e+-]+\n  \}')


@functools.cache
def raw_report(suite: str, jobs: int = 1, run: int = 0) -> str:
    """Text printed by ``verify`` for one suite; ``run`` only distinguishes repeated executions."""
    result = CliRunner().invoke(main, ["verify", "--suite", suite, "--jobs", str(jobs)])
    assert result.exit_code in (0, 1), result.output
    return result.stdout


def outputs(suite: str) -> dict:
    return json.loads(raw_report(suite))["outputs"]


def criterion(number: int, title: str):
    def wrap(fn):
        @functools.wraps(fn)
        def test():
            try:
                fn()
            except AssertionError:
                RESULTS[number] = (False, title)
                print(f"criterion {number:2d} FAIL  {title}")
                raise
            RESULTS[number] = (True, title)
            print(f"criterion {number:2d} PASS  {title}")
        return test
    return wrap


def counts(rows, key="lhs"):
    return [int(r[key]) for r in rows]


def assert_all_ok(out: dict, minimum: int = 1):
    assert out["passed"], out["counterexample"]
    assert out["failures"] == 0 and out["checked"] >= minimum
    assert all(r["ok"] and r["lhs"] == r["rhs"] for r in out["instances"])


@criterion(1, "Skolem counts equal proof-tree counts on >= 200 random pairs, n in {2,3}")
def test_criterion_01_skolem_equals_proof_trees():
    out = outputs("skolem-eq-prooftrees")
    assert_all_ok(out, minimum=200)
    assert {r["size"] for r in out["instances"]} == {2, 3}


@criterion(2, "skolemize/deskolemize preserve counts and round-trip up to renaming")
def test_criterion_02_skolem_equals_prefix():
    out = outputs("skolem-eq-prefix")
    assert_all_ok(out, minimum=200)
    assert all(r["round_trip"] for r in out["instances"])
    assert all(r["deskolemized"] == r["lhs"] for r in out["instances"] if "deskolemized" in r)
    # the sentence part uses the same random pairs as criterion 1
    labels = {r["label"] for r in outputs("skolem-eq-prooftrees")["instances"]}
    assert labels <= {r["label"] for r in out["instances"]}


@criterion(3, "to_pi1 preserves functional counts, 20 formulas, all structures n <= 3, two vocabularies")
def test_criterion_03_fo_equals_pi1():
    out = outputs("fo-eq-pi1")
    assert len(FO_CORPUS) == 20
    assert any(classify_fragment(q).name == "Sigma2" for _, _, _, q in corpus_queries(FO_CORPUS))
    # V1 has 2^n structures of size n (one unary relation); V2 adds a constant, giving n * 2^n
    per_formula = {V1: sum(2**n for n in (1, 2, 3)), V2: sum(n * 2**n for n in (1, 2, 3))}
    expected = sum(per_formula[voc] for _, voc, _, _ in corpus_queries(FO_CORPUS))
    assert out["checked"] == expected
    assert_all_ok(out, minimum=expected)


@criterion(4, "relations_to_functions preserves counts, 20 formulas, n in {2,3}")
def test_criterion_04_rel_equals_func():
    out = outputs("rel-eq-func")
    assert len(REL_CORPUS) == 20
    assert {r["size"] for r in out["instances"]} == {2, 3}
    assert_all_ok(out, minimum=len(REL_CORPUS))


@criterion(5, "closed form equals brute force on quantifier-free formulas; divisibility holds")
def test_criterion_05_sigma0_closed_form():
    out = outputs("sigma0-closed-form")
    assert_all_ok(out)
    assert all(r["divisible"] for r in out["instances"])
    assert {r["size"] for r in out["instances"]} == {1, 2, 3}
    # exhaustive: 2 + 4 + 8 structures over V1 per formula
    assert out["checked"] == 14 * len(QF_CORPUS)


@criterion(6, "edge fixture gives 2^|E| Skolem functions: 1, 2, 4, 8, 16")
def test_criterion_06_edge_fixture():
    out = outputs("edge-skolem")
    assert_all_ok(out)
    assert counts(out["instances"]) == [1, 2, 4, 8, 16]
    assert counts(out["instances"], "proof_trees") == [1, 2, 4, 8, 16]
    three = out["instances"][3]
    assert three["label"] == "|E|=3" and three["lhs"] == "8"


@criterion(7, "3DNF formula counts satisfying assignments on 20 random formulas")
def test_criterion_07_dnf_example():
    out = outputs("dnf-example")
    assert_all_ok(out)
    assert sum(1 for r in out["instances"] if r["label"].startswith("random")) == 20
    assert all(r["size"] <= 4 for r in out["instances"])


@criterion(8, "function encoding equals relational count times 64 on 10 random 2-variable formulas")
def test_criterion_08_dnf_func_reduction():
    out = outputs("dnf-func-reduction")
    assert_all_ok(out)
    randoms = [r for r in out["instances"] if r["label"].startswith("random")]
    assert len(randoms) == 10
    assert all(r["size"] == 2 and r["scale"] == "64" for r in out["instances"])


@criterion(9, "3CNF counts via 3DNF match truth tables on 20 random formulas")
def test_criterion_09_cnf_via_dnf():
    out = outputs("cnf-dnf-reduction")
    assert_all_ok(out)
    assert sum(1 for r in out["instances"] if r["label"].startswith("random")) == 20


@criterion(10, "successor formula has exactly one model for n = 1..5")
def test_criterion_10_succ_unique():
    out = outputs("succ-unique")
    assert_all_ok(out)
    assert [r["size"] for r in out["instances"]] == [1, 2, 3, 4, 5]
    assert counts(out["instances"]) == [1] * 5
    assert all(r["successor_tables_satisfy"] for r in out["instances"])


@criterion(11, "parity circuits have proof-tree counts 1, 0, 1, 0 for n = 2..5")
def test_criterion_11_parity_family():
    out = outputs("parity-family")
    assert_all_ok(out)
    assert counts(out["instances"]) == [1, 0, 1, 0]


SUITES = ("skolem-eq-prooftrees", "skolem-eq-prefix", "fo-eq-pi1", "rel-eq-func", "sigma0-closed-form",
          "edge-skolem", "dnf-example", "dnf-func-reduction", "cnf-dnf-reduction", "succ-unique", "parity-family")


@criterion(12, "every suite report is byte-identical across runs and across 1 vs 4 threads")
def test_criterion_12_determinism():
    for suite in SUITES:
        first = _TIMING.sub("", raw_report(suite, 1, 0))
        assert '"timing"' not in first
        assert first == _TIMING.sub("", raw_report(suite, 1, 1)), suite
        assert first == _TIMING.sub("", raw_report(suite, 4, 0)), suite


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    for t in tests:
        try:
            t()
        except AssertionError:
            pass
    sys.exit(0 if all(ok for ok, _ in RESULTS.values()) else 1)
