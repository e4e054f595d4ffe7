"""Differential-test suites: automaton constructions against brute-force oracles.

Every suite takes a seed and a case count and returns a SuiteReport; runs
with the same arguments produce the same report.
"""
import random
from typing import Callable, Dict, List, Optional

from app.automata.buchi import word_membership
from app.automata.complement import word_complement
from app.automata.games import solve_by_enumeration, solve_parity_game, verify_strategy
from app.automata.sampling import (
    make_rng,
    random_buchi,
    random_lasso,
    random_parity_game,
    random_regular_tree,
)
from app.automata.tree import (
    lift_word_automaton_leftmost,
    tree_is_empty,
    tree_membership,
    tree_product,
)
from app.config.settings import get_settings
from app.fo.compiler import CompilationCache, decide_sentence
from app.fo.interpretations import apply_interpretation
from app.fo.toy import (
    default_toy_structure,
    evaluate,
    evaluate_interpreted,
    pairing_interpretation,
    pairing_toy_structure,
    toy_presentation,
    toy_sentences,
)
from app.models.alphabet import BINARY
from app.models.result import SuiteReport
from app.structures.addresses import addresses, max_antichain, node_index, node_unindex
from app.structures.antichain import (
    antichain_oracle,
    antichain_tree,
    build_antichain_automaton,
    build_no_antichain_automaton,
    chain_tree,
)
from app.structures.fin import fin_chain_holds
from app.utils.helpers import timeit
from app.utils.logger import get_logger

logger = get_logger(__name__)

LASSOS_PER_AUTOMATON = 50
TRUNCATION_DEPTH = 6
FIRST_ADDRESSES = ("", "l", "r", "ll", "lr", "rl", "rr", "lll", "llr", "lrl", "lrr", "rll", "rlr", "rrl", "rrr")


def complementation_suite(seed: int, count: int = 200) -> SuiteReport:
    """Random automata against their complements on random lassos."""
    rng = make_rng(seed)
    report = SuiteReport(suite="complementation", seed=seed)
    settings = get_settings().sampling
    for i in range(count):
        a = random_buchi(rng, BINARY)
        c = word_complement(a)
        for _ in range(LASSOS_PER_AUTOMATON):
            w = random_lasso(rng, BINARY, settings.max_stem, settings.max_loop)
            report.record(
                word_membership(a, w) != word_membership(c, w), f"automaton {i}: {a.describe()} on {w}"
            )
    return report


def parity_suite(seed: int, count: int = 100) -> SuiteReport:
    """Zielonka against the strategy-enumeration oracle on random games."""
    rng = make_rng(seed)
    report = SuiteReport(suite="parity", seed=seed)
    for i in range(count):
        game = random_parity_game(rng)
        solution = solve_parity_game(game)
        reference = solve_by_enumeration(game)
        report.record(solution.win == reference.win, f"game {i}: winning regions differ")
        report.record(verify_strategy(game, solution), f"game {i}: strategies fail verification")
    return report


def antichain_suite(seed: int, count: int = 500) -> SuiteReport:
    """T and T_I against the oracle, plus the fixed witnesses and layer checks."""
    rng = make_rng(seed)
    report = SuiteReport(suite="antichain", seed=seed)
    t_auto, ti_auto = build_antichain_automaton(), build_no_antichain_automaton()
    report.record(tree_is_empty(tree_product(t_auto, ti_auto)), "product of T and T_I is not empty")
    for n in range(6):
        report.record(tree_membership(ti_auto, chain_tree(n)), f"chain_tree({n}) rejected by T_I")
    report.record(tree_membership(t_auto, antichain_tree()), "antichain_tree() rejected by T")
    max_nodes = get_settings().sampling.max_tree_nodes
    for i in range(count):
        t = random_regular_tree(rng, BINARY, max_nodes)
        verdict = antichain_oracle(t)
        in_t, in_ti = tree_membership(t_auto, t), tree_membership(ti_auto, t)
        report.record(in_t == verdict.is_infinite, f"tree {i}: T says {in_t}, oracle {verdict} on {t.canonical()}")
        report.record(in_ti != in_t, f"tree {i}: T and T_I agree on {t.canonical()}")
        if not verdict.is_infinite:
            truncated = max_antichain(t.truncate(TRUNCATION_DEPTH))
            report.record(
                truncated <= verdict.width,
                f"tree {i}: truncation has an antichain of {truncated} above width {verdict.width}",
            )
    return report


def lift_suite(seed: int, count: int = 100) -> SuiteReport:
    """Leftmost-branch lifting against word membership on the leftmost lasso."""
    rng = make_rng(seed)
    report = SuiteReport(suite="lift", seed=seed)
    max_nodes = get_settings().sampling.max_tree_nodes
    for i in range(count):
        b = random_buchi(rng, BINARY)
        t = random_regular_tree(rng, BINARY, max_nodes)
        expected = word_membership(b, t.leftmost_lasso())
        report.record(
            tree_membership(lift_word_automaton_leftmost(b), t) == expected,
            f"case {i}: {b.describe()} on {t.canonical()}",
        )
    return report


def _pick(rng: random.Random, items: List, count: Optional[int]) -> List:
    if count is None or count >= len(items):
        return items
    return [items[k] for k in sorted(rng.sample(range(len(items)), count))]


def fo_toy_suite(seed: int, count: Optional[int] = None) -> SuiteReport:
    """Sentence decisions on finite toy structures against direct evaluation.

    Covers the grammar of toy_sentences over a three-element structure and
    over pairs from a two-element structure; `count` samples each catalogue.
    """
    rng = make_rng(seed)
    report = SuiteReport(suite="fo-toy", seed=seed)
    structure = default_toy_structure()
    p = toy_presentation(structure)
    cache = CompilationCache(p)
    for sentence in _pick(rng, list(toy_sentences()), count):
        verdict = decide_sentence(p, sentence, cache).verdict
        expected = evaluate(structure, sentence, {})
        report.record(verdict == expected, f"{sentence}: decided {verdict}, expected {expected}")
    logger.debug(f"fo-toy: {len(cache)} subformulas compiled, {cache.hits} reused")
    pairs = pairing_toy_structure()
    interpretation = pairing_interpretation()
    interpreted = apply_interpretation(toy_presentation(pairs, "pairs"), interpretation, complements=True)
    cache = CompilationCache(interpreted)
    for sentence in _pick(rng, list(toy_sentences("Q", "S")), count):
        verdict = decide_sentence(interpreted, sentence, cache).verdict
        expected = evaluate_interpreted(pairs, interpretation, sentence, {})
        report.record(verdict == expected, f"pairing {sentence}: decided {verdict}, expected {expected}")
    logger.debug(f"fo-toy pairing: {len(cache)} subformulas compiled, {cache.hits} reused")
    return report


def enumeration_suite(seed: int, count: int = 8) -> SuiteReport:
    """Node enumeration order and bijectivity, and the Fin_k inclusion chain.

    `count` is the address length up to which bijectivity is checked.
    """
    report = SuiteReport(suite="enumeration", seed=seed)
    for n, expected in enumerate(FIRST_ADDRESSES):
        actual = node_unindex(n)
        report.record(actual.path == expected, f"address {n} is {actual}, expected {expected or 'ε'}")
    seen = set()
    for u in addresses(count):
        n = node_index(u)
        report.record(node_unindex(n) == u and n not in seen, f"address {u} maps to {n}")
        seen.add(n)
    report.record(seen == set(range(len(seen))), f"indices up to length {count} are not an initial segment")
    for k in range(6):
        report.record(fin_chain_holds(k), f"Fin_{k} ⊆ Fin_{k + 1} ⊆ Fin fails")
    return report


SUITES: Dict[str, Callable[..., SuiteReport]] = {
    "complementation": complementation_suite,
    "parity": parity_suite,
    "antichain": antichain_suite,
    "lift": lift_suite,
    "fo-toy": fo_toy_suite,
    "enumeration": enumeration_suite,
}


@timeit
def run_suite(name: str, seed: int, count: Optional[int] = None) -> SuiteReport:
    """Run a suite by name with its default case count unless one is given.

    Raises:
        ValueError: If the suite name is unknown
    """
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}, expected one of {', '.join(SUITES)}")
    suite = SUITES[name]
    report = suite(seed) if count is None else suite(seed, count)
    logger.info(f"suite {name}: {report.cases} cases, {len(report.failures)} failures")
    return report
