"""Command functions behind the CLI subcommands.

Each command returns a CommandOutcome; exceptions from the engines are
turned into error outcomes by handle_exceptions. Verdicts (membership,
emptiness, truth of a sentence) are reported in the payload with status
ok; status fail is reserved for checks that did not hold.
"""
from pathlib import Path
from typing import Any, Dict, Optional, Union

from app.automata.buchi import BuchiAutomaton, word_emptiness, word_membership
from app.automata.formats import dumps, load, save
from app.automata.tree import MullerTreeAutomaton, ParityTreeAutomaton, tree_emptiness, tree_membership
from app.cli.suites import run_suite
from app.config.settings import get_settings
from app.fo.compiler import decide_sentence
from app.fo.interpretations import Interpretation
from app.fo.parser import parse_formula
from app.models.result import CommandOutcome
from app.models.trees import RegularTree
from app.models.words import LassoWord
from app.presentations.bundle import load_presentation, save_presentation
from app.presentations.model import Presentation, element_text
from app.presentations.validation import validate_presentation
from app.structures.catalogue import run_axiom_catalogue, run_instance_catalogue
from app.structures.registry import Builder, default_registry
from app.utils.error_handling import (
    CapacityError,
    InputError,
    InvariantViolation,
    PresentationError,
    UnsupportedFragmentError,
    handle_exceptions,
)
from app.utils.helpers import format_duration, sanitize_filename, timed
from app.utils.logger import get_logger

logger = get_logger(__name__)

PathLike = Union[str, Path]

ENGINE_ERRORS = {
    InputError: "Invalid input",
    PresentationError: "Invalid presentation",
    CapacityError: "Budget exceeded",
    UnsupportedFragmentError: "Unsupported formula",
    InvariantViolation: "Internal check failed",
    ValueError: "Invalid argument",
}


def _load_automaton(path: PathLike):
    document = load(path)
    if not isinstance(document, (BuchiAutomaton, MullerTreeAutomaton, ParityTreeAutomaton)):
        raise InputError(f"{path} holds a {type(document).__name__}, not an automaton")
    return document


@handle_exceptions(ENGINE_ERRORS)
def cmd_member(automaton_path: PathLike, element_path: PathLike) -> CommandOutcome:
    """Decide whether the automaton accepts a lasso or regular tree."""
    automaton = _load_automaton(automaton_path)
    element = load(element_path)
    if isinstance(automaton, BuchiAutomaton):
        if not isinstance(element, LassoWord):
            raise InputError(f"{element_path}: a Büchi automaton reads lassos, got a {type(element).__name__}")
        accepted = word_membership(automaton, element)
    else:
        if not isinstance(element, RegularTree):
            raise InputError(f"{element_path}: a tree automaton reads regular trees, got a {type(element).__name__}")
        accepted = tree_membership(automaton, element)
    return CommandOutcome.ok_outcome({"accepted": accepted, "element": element_text(element)})


@handle_exceptions(ENGINE_ERRORS)
def cmd_empty(automaton_path: PathLike, witness_path: Optional[PathLike] = None) -> CommandOutcome:
    """Decide emptiness and write a witness file when the language is not empty."""
    automaton = _load_automaton(automaton_path)
    if isinstance(automaton, BuchiAutomaton):
        witness = word_emptiness(automaton)
    else:
        witness = tree_emptiness(automaton)
    if witness is None:
        return CommandOutcome.ok_outcome({"empty": True})
    if witness_path is None:
        witness_path = Path(get_settings().cli.output_dir) / f"{Path(automaton_path).stem}.witness"
    written = save(witness, witness_path)
    logger.info(f"wrote witness {element_text(witness)} to {written}")
    return CommandOutcome.ok_outcome({"empty": False, "witness": element_text(witness), "witness_file": str(written)})


@handle_exceptions(ENGINE_ERRORS)
def cmd_validate(
    directory: PathLike, seed: Optional[int] = None, samples: Optional[int] = None, catalogue: bool = False
) -> CommandOutcome:
    """Validate a presentation bundle, optionally with the instance catalogue."""
    p = load_presentation(directory)
    report = validate_presentation(p, seed=seed, samples=samples)
    checks = list(report.checks)
    if catalogue:
        checks += run_instance_catalogue(p) + run_axiom_catalogue(p)
    payload = {"presentation": p.describe(), "checks": [c.line() for c in checks]}
    if report.seed is not None:
        payload["seed"] = report.seed
    failed = [c.name for c in checks if not c.passed]
    if failed:
        return CommandOutcome.fail_outcome(f"{len(failed)} checks failed: {', '.join(failed)}", payload)
    return CommandOutcome.ok_outcome(payload)


def _sentence_text(sentence: str) -> str:
    path = Path(sentence)
    if path.suffix in (".fo", ".txt") and path.is_file():
        return path.read_text(encoding="utf-8").strip()
    return sentence


@handle_exceptions(ENGINE_ERRORS)
def cmd_decide(directory: PathLike, sentence: str) -> CommandOutcome:
    """Decide a sentence, given inline or as a .fo/.txt file, in a presented structure."""
    p = load_presentation(directory)
    formula = parse_formula(_sentence_text(sentence))
    decision, seconds = timed(decide_sentence, p, formula)
    logger.info(f"decided in {format_duration(seconds)}")
    payload = {"sentence": str(formula), "verdict": decision.verdict}
    if decision.witnesses:
        payload["witness"] = {v: element_text(e) for v, e in decision.witnesses.items()}
    return CommandOutcome.ok_outcome(payload)


def _build_interpretation(builder: Builder, interpretation: Interpretation, directory: Path) -> CommandOutcome:
    """Write the interpretation, then its compiled bundle when it fits the budgets.

    A budget abort during compilation keeps the outcome ok.
    """
    written = save(interpretation, directory / f"{sanitize_filename(interpretation.name)}.interp")
    logger.info(f"wrote interpretation {interpretation.name} to {written}")
    payload: Dict[str, Any] = {
        "built": f"interpretation {interpretation.name} of dimension {interpretation.dimension}",
        "interpretation": str(written),
        "path": str(directory),
    }
    try:
        p, seconds = timed(builder.compile, interpretation)
    except CapacityError as e:
        logger.warning(f"compilation of {interpretation.name} aborted: {e.message}")
        payload.update({"compiled": False, "reason": e.message})
        return CommandOutcome.ok_outcome(payload)
    save_presentation(p, directory)
    logger.info(f"compiled {p.name} in {format_duration(seconds)}")
    payload.update({"compiled": True, "presentation": p.describe()})
    return CommandOutcome.ok_outcome(payload)


@handle_exceptions(ENGINE_ERRORS)
def cmd_build(
    name: Optional[str], output: Optional[PathLike] = None, parameter: Optional[int] = None
) -> CommandOutcome:
    """Materialize a named builder: presentations become bundles, the rest single files.

    Interpretations are written to `<output>/<name>.interp` and compiled into a
    bundle in the same directory when they fit the budgets. With no name,
    lists the registry.
    """
    registry = default_registry()
    if name is None:
        return CommandOutcome.ok_outcome({"builders": [b.usage() for b in registry.all()]})
    builder = registry.get(name)
    artifact = builder.build(parameter)
    label = sanitize_filename(name if parameter is None else f"{name}{parameter}")
    if output is None:
        output = Path(get_settings().cli.output_dir) / label
    if isinstance(artifact, Interpretation):
        return _build_interpretation(builder, artifact, Path(output))
    if isinstance(artifact, Presentation):
        written = save_presentation(artifact, output)
        payload = {"built": artifact.describe(), "path": str(written.parent)}
    else:
        path = Path(output)
        if path.suffix == "":
            path = path.with_suffix(".rtree" if isinstance(artifact, RegularTree) else ".aut")
        written = save(artifact, path)
        payload = {"built": dumps(artifact).splitlines()[0], "path": str(written)}
    logger.info(f"built {name} at {payload['path']}")
    return CommandOutcome.ok_outcome(payload)


@handle_exceptions(ENGINE_ERRORS)
def cmd_difftest(suite: str, seed: Optional[int] = None, count: Optional[int] = None) -> CommandOutcome:
    """Run a differential-test suite and report its failures."""
    seed = get_settings().sampling.seed if seed is None else seed
    report = run_suite(suite, seed, count)
    payload = {"suite": report.suite, "seed": report.seed, "cases": report.cases, "failures": report.failures[:20]}
    if not report.passed:
        return CommandOutcome.fail_outcome(f"{len(report.failures)} of {report.cases} cases failed", payload)
    return CommandOutcome.ok_outcome(payload)
