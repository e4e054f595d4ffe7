import pytest

from app.fo.compiler import decide_sentence
from app.fo.parser import parse_formula
from app.presentations.validation import validate_presentation
from app.structures.antichain import antichain_tree
from app.structures.catalogue import (
    ALGEBRA_AXIOMS,
    ATOMLESS,
    SOME_ATOM,
    catalogue_elements,
    run_axiom_catalogue,
    run_instance_catalogue,
)


def test_b1_validates_exactly(b1):
    report = validate_presentation(b1)
    assert len(report.checks) == 10
    assert all(c.status == "exact-pass" for c in report.checks)
    assert report.seed is None


@pytest.mark.slow
def test_b2_validates(b2):
    report = validate_presentation(b2, seed=3, samples=40)
    statuses = {c.name: c.status for c in report.checks}
    assert statuses["reflexivity"] == "exact-pass"
    assert statuses["symmetry"] == "exact-pass"
    assert statuses["transitivity"] == "sampled-pass"
    assert report.passed and report.seed == 3


@pytest.mark.parametrize("kind", ["word", "tree"])
def test_instance_catalogue(kind, b1, b2):
    p = b1 if kind == "word" else b2
    results = run_instance_catalogue(p)
    assert [r.witness for r in results if not r.passed] == []


def test_catalogue_elements_are_distinct():
    elements = catalogue_elements("tree")
    assert elements["half"] != elements["cohalf"]
    assert elements["half"] == antichain_tree()


@pytest.mark.parametrize("name", sorted(ALGEBRA_AXIOMS))
def test_axioms_hold_in_b1(b1, name):
    assert decide_sentence(b1, parse_formula(ALGEBRA_AXIOMS[name])).verdict


def test_b1_is_atomless(b1):
    assert decide_sentence(b1, parse_formula(ATOMLESS)).verdict
    assert not decide_sentence(b1, parse_formula(SOME_ATOM)).verdict


def test_axiom_catalogue_skips_trees(b1, b2):
    assert run_axiom_catalogue(b2) == []
    results = run_axiom_catalogue(b1)
    assert len(results) == 10 and all(r.passed for r in results)


def test_nonzero_element_exists_in_b2(b2):
    decision = decide_sentence(b2, parse_formula("exists x. x != 0"))
    assert decision.verdict
    assert decision.witnesses["x"] is not None


@pytest.mark.slow
def test_b2_existential_facts(b2):
    assert decide_sentence(b2, parse_formula("exists x, y. (cap(x,y) = 0 & x != 0 & y != 0)")).verdict
    assert not decide_sentence(b2, parse_formula("exists x. (x != 0 & x = 0)")).verdict


def test_antichain_tree_is_nonzero(b2):
    half = antichain_tree()
    assert not b2.holds("zero", [half])
    assert b2.holds("eq", [half, half])


def test_idempotence_in_b1(b1):
    assert decide_sentence(b1, parse_formula("forall x. eq(cap(x,x),x)")).verdict
