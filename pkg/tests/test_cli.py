import json

import pytest

from app.automata.formats import load
from app.cli.commands import (
    cmd_build,
    cmd_decide,
    cmd_difftest,
    cmd_empty,
    cmd_member,
    cmd_validate,
)
from app.cli.suites import run_suite
from app.fo.interpretations import apply_interpretation, ring_interpretation, unitriangular_interpretation
from app.fo.toy import toy_sentences
from app.presentations.bundle import load_presentation
from app.structures.registry import Builder, BuilderRegistry, default_registry
from app.utils.error_handling import CapacityError, InputError, handle_exceptions
from main import main

NO_ACCEPTING = "buchi\nalphabet: 0, 1\nstates: 1\ninitial: 0\ntrans: 0 0 0\ntrans: 0 1 0\n"


@pytest.fixture(scope="module")
def b1_bundle(tmp_path_factory):
    directory = tmp_path_factory.mktemp("bundles") / "b1"
    outcome = cmd_build("B1", directory)
    assert outcome.is_ok
    return directory


@pytest.fixture
def fin_file(tmp_path):
    outcome = cmd_build("fin", tmp_path / "fin")
    assert outcome.is_ok
    return tmp_path / "fin.aut"


def test_registry_lists_builders():
    names = [b.name for b in default_registry().all()]
    assert names == sorted(names)
    assert {"fin", "fin_k", "T", "T_I", "B1", "B2", "chain", "antichain", "ring", "matrix", "ut"} <= set(names)


def test_builder_parameters():
    registry = default_registry()
    assert registry.get("chain").build(2) == registry.get("chain").build(2)
    assert registry.get("fin_k").usage().startswith("fin_k <k>")
    with pytest.raises(InputError):
        registry.get("fin").build(3)
    with pytest.raises(ValueError):
        registry.get("nope")


def test_registry_rejects_duplicates():
    registry = BuilderRegistry()
    builder = Builder(name="x", description="x", make=lambda: None)
    registry.register(builder)
    assert registry.has("x")
    with pytest.raises(ValueError):
        registry.register(builder)


def test_build_list():
    outcome = cmd_build(None)
    assert outcome.is_ok
    assert any(line.startswith("chain <n>") for line in outcome.payload["builders"])


def test_build_errors():
    assert cmd_build("nope").exit_code == 2
    assert cmd_build("fin", parameter=3).exit_code == 2


def test_build_unitriangular_writes_interpretation(tmp_path):
    outcome = cmd_build("ut", tmp_path / "ut3")
    assert outcome.is_ok
    assert outcome.payload["compiled"] is False
    assert "letter budget" in outcome.payload["reason"]
    written = tmp_path / "ut3" / "unitriangular3.interp"
    assert outcome.payload["interpretation"] == str(written)
    assert load(written) == unitriangular_interpretation(3)
    assert not (tmp_path / "ut3" / "manifest.toml").exists()


def test_build_ring_compiles_bundle(tmp_path, b1):
    outcome = cmd_build("ring", tmp_path / "ring")
    assert outcome.is_ok and outcome.payload["compiled"] is True
    assert load(tmp_path / "ring" / "ring.interp") == ring_interpretation()
    ring = load_presentation(tmp_path / "ring")
    assert ring.functions == {"plus": 2, "times": 2}
    assert ring == apply_interpretation(b1, ring_interpretation())


def test_build_tree_artifacts(tmp_path):
    outcome = cmd_build("chain", tmp_path / "chain", 2)
    assert outcome.is_ok and outcome.payload["path"].endswith(".rtree")
    assert cmd_build("T", tmp_path / "t").payload["built"] == "muller"


def test_validate_bundle(b1_bundle):
    outcome = cmd_validate(b1_bundle)
    assert outcome.is_ok
    assert len(outcome.payload["checks"]) == 10
    assert "seed" not in outcome.payload


@pytest.mark.slow
def test_validate_with_catalogue(b1_bundle):
    outcome = cmd_validate(b1_bundle, catalogue=True)
    assert outcome.is_ok
    assert len(outcome.payload["checks"]) == 40


def test_decide_inline_and_from_file(b1_bundle, tmp_path):
    outcome = cmd_decide(b1_bundle, "forall x. eq(cap(x,x),x)")
    assert outcome.is_ok and outcome.payload["verdict"] is True
    sentence = tmp_path / "zero.fo"
    sentence.write_text("exists x. (x = 0 & x = 1)\n")
    outcome = cmd_decide(b1_bundle, str(sentence))
    assert outcome.is_ok and outcome.payload["verdict"] is False


def test_decide_reports_witness(b1_bundle):
    outcome = cmd_decide(b1_bundle, "exists x. x != 0")
    assert outcome.payload["verdict"] is True
    assert "x" in outcome.payload["witness"]


def test_decide_errors(b1_bundle):
    assert cmd_decide(b1_bundle, "forall x. x = ").exit_code == 2
    assert cmd_decide(b1_bundle, "subset(x,y)").exit_code == 2


def test_member(fin_file, tmp_path):
    lasso = tmp_path / "w.lasso"
    lasso.write_text("lasso\n1 1|0\n")
    outcome = cmd_member(fin_file, lasso)
    assert outcome.is_ok and outcome.payload["accepted"] is True
    lasso.write_text("lasso\n|0 1\n")
    assert cmd_member(fin_file, lasso).payload["accepted"] is False


def test_member_kind_mismatch(fin_file, tmp_path):
    cmd_build("chain", tmp_path / "chain")
    assert cmd_member(fin_file, tmp_path / "chain.rtree").exit_code == 2
    assert cmd_member(tmp_path / "chain.rtree", tmp_path / "chain.rtree").exit_code == 2


def test_empty_writes_witness(fin_file, tmp_path):
    outcome = cmd_empty(fin_file, tmp_path / "w" / "fin.witness")
    assert outcome.is_ok and outcome.payload["empty"] is False
    assert (tmp_path / "w" / "fin.witness").is_file()
    assert cmd_member(fin_file, tmp_path / "w" / "fin.witness").payload["accepted"] is True


def test_empty_default_witness_path(fin_file, tmp_path, settings):
    settings.cli.output_dir = str(tmp_path / "out")
    outcome = cmd_empty(fin_file)
    assert outcome.payload["witness_file"].endswith("fin.witness")


def test_empty_language(tmp_path):
    path = tmp_path / "none.aut"
    path.write_text(NO_ACCEPTING)
    outcome = cmd_empty(path)
    assert outcome.is_ok and outcome.payload == {"empty": True}


def test_missing_file_is_an_error(tmp_path):
    outcome = cmd_member(tmp_path / "missing.aut", tmp_path / "missing.lasso")
    assert outcome.status == "error" and outcome.exit_code == 2


def test_handle_exceptions_returns_outcomes():
    @handle_exceptions({CapacityError: "Budget exceeded"})
    def exhausted():
        raise CapacityError("too many states", {"budget": 5})

    @handle_exceptions({CapacityError: "Budget exceeded"})
    def broken():
        raise KeyError("q")

    outcome = exhausted()
    assert outcome.status == "error" and outcome.exit_code == 2
    assert outcome.payload["error"] == "Budget exceeded"
    assert outcome.payload["details"] == {"budget": "5"}
    assert broken().payload["error"] == "An unexpected error occurred"


@pytest.mark.parametrize("suite,count", [("parity", 10), ("enumeration", 4), ("antichain", 20), ("lift", 10)])
def test_difftest_suites(suite, count):
    outcome = cmd_difftest(suite, seed=1, count=count)
    assert outcome.is_ok, outcome.payload["failures"]
    assert outcome.payload["cases"] > 0
    assert outcome.payload["seed"] == 1


def test_difftest_complementation_sample():
    report = run_suite("complementation", seed=2, count=10)
    assert report.passed, report.failures


def test_unknown_suite():
    assert cmd_difftest("nope", seed=1).exit_code == 2


def test_main_exit_codes(tmp_path, settings, capsys):
    assert main(["difftest", "enumeration", "--count", "3"]) == 0
    assert main(["member", str(tmp_path / "a.aut"), str(tmp_path / "w.lasso")]) == 2
    assert main(["--config", str(tmp_path / "missing.toml"), "build", "--list"]) == 2
    capsys.readouterr()
    with pytest.raises(SystemExit) as excinfo:
        main(["bogus"])
    assert excinfo.value.code == 2


def test_main_json_output(settings, capsys):
    assert main(["--format", "json", "--seed", "5", "build", "--list"]) == 0
    document = json.loads(capsys.readouterr().out)
    assert document["status"] == "ok"
    assert settings.sampling.seed == 5


def test_main_validate_failure_exit_code(b1, tmp_path, settings, capsys):
    from app.presentations.bundle import save_presentation
    from app.presentations.model import Presentation

    broken = Presentation(
        kind="word",
        name="broken",
        base=b1.base,
        domain=b1.domain,
        equality=b1.relations["subset"].automaton,
        domain_universal=True,
    )
    save_presentation(broken, tmp_path / "broken")
    assert main(["validate", str(tmp_path / "broken")]) == 1
    assert "status: fail" in capsys.readouterr().out


@pytest.mark.slow
@pytest.mark.parametrize(
    "suite,cases",
    [
        ("complementation", 200 * 50),
        ("parity", 2 * 100),
        ("antichain", 8 + 2 * 500),
        ("fo-toy", len(list(toy_sentences())) + len(list(toy_sentences("Q", "S")))),
    ],
)
def test_difftest_suites_at_default_scale(suite, cases):
    report = run_suite(suite, seed=7)
    assert report.passed, report.failures[:5]
    assert report.cases >= cases


def test_difftest_seed_after_suite_name(settings, capsys):
    assert main(["--format", "json", "difftest", "enumeration", "--seed", "3", "--count", "2"]) == 0
    assert json.loads(capsys.readouterr().out)["payload"]["seed"] == 3
    assert main(["--format", "json", "--seed", "4", "difftest", "enumeration", "--count", "2"]) == 0
    assert json.loads(capsys.readouterr().out)["payload"]["seed"] == 4
