"""Checking that a presentation really presents a structure.

The equality automaton must accept an equivalence relation on the domain
that is compatible with every relation: whenever x_i = y_i for all i,
R(x_1..x_k) holds iff R(y_1..y_k) holds. Word presentations are checked
exactly by inclusion tests. Tree presentations check reflexivity and
symmetry exactly through a registered complement of equality and sample
the remaining checks on random regular trees.
"""
import random
from typing import List, Optional, Sequence, Tuple

from app.automata.sampling import make_rng, random_regular_tree
from app.config.settings import get_settings
from app.models.alphabet import BINARY
from app.models.result import CheckResult, ValidationReport
from app.models.trees import RegularTree
from app.presentations import engine
from app.presentations.model import EQUALITY, Presentation, accepts, tuple_text
from app.utils.logger import get_logger

logger = get_logger(__name__)

# A check is: premises (atom, positions) over `arity` tracks, conclusion (atom, positions).
Premises = List[Tuple[str, Tuple[int, ...]]]


def _equivalence_checks() -> List[Tuple[str, int, Premises, Tuple[str, Tuple[int, ...]]]]:
    return [
        ("reflexivity", 1, [], (EQUALITY, (0, 0))),
        ("symmetry", 2, [(EQUALITY, (0, 1))], (EQUALITY, (1, 0))),
        ("transitivity", 3, [(EQUALITY, (0, 1)), (EQUALITY, (1, 2))], (EQUALITY, (0, 2))),
    ]


def _compatibility_check(name: str, arity: int):
    """R(x) and x_i = y_i for all i imply R(y), over tracks x_1..x_k y_1..y_k."""
    premises: Premises = [(name, tuple(range(arity)))]
    premises += [(EQUALITY, (i, arity + i)) for i in range(arity)]
    return f"compatibility[{name}]", 2 * arity, premises, (name, tuple(range(arity, 2 * arity)))


def _exact(
    p: Presentation, name: str, arity: int, premises: Premises, conclusion: Tuple[str, Tuple[int, ...]]
) -> CheckResult:
    """Emptiness of domain^arity ∩ premises ∩ ¬conclusion, with a counterexample on failure."""
    hypothesis = engine.domain_power(p, arity)
    for atom, positions in premises:
        hypothesis = engine.intersect(p, hypothesis, engine.on_tracks(p, p.atom(atom), arity, positions))
    atom, positions = conclusion
    negated = p.complement(atom)
    if negated is None:
        negated = engine.negate(p, p.atom(atom))
    violation = engine.intersect(p, hypothesis, engine.on_tracks(p, negated, arity, positions))
    witness = engine.member(violation)
    if witness is None:
        return CheckResult(name=name, mode="exact", status="exact-pass")
    elements = engine.split_tuple(p, witness, arity)
    logger.info(f"{p.name}: {name} fails on {tuple_text(elements)}")
    return CheckResult(name=name, mode="exact", status="exact-fail", witness=tuple_text(elements))


def _perturb(rng: random.Random, p: Presentation, t: RegularTree) -> RegularTree:
    """Change t on the 1-set of a random noise tree, often a finite one."""
    noise = random_regular_tree(rng, BINARY, get_settings().sampling.max_tree_nodes)
    if rng.random() < 0.5:
        noise = _finite_part(noise, rng.randint(0, 2))
    letters = p.base.letters
    shift = {a: letters[(i + 1) % len(letters)] for i, a in enumerate(letters)}
    return RegularTree.combine([t, noise], lambda pair: shift[pair[0]] if pair[1] == 1 else pair[0])


def _finite_part(t: RegularTree, depth: int) -> RegularTree:
    """The labels of t up to `depth`, with 0 everywhere below."""
    rows: List[List] = []
    frontier = [(t.root, 0)]
    rows.append([t.labels[t.root], -1, -1])
    for _ in range(depth):
        next_frontier = []
        for node, index in frontier:
            for slot, child in ((1, t.left[node]), (2, t.right[node])):
                rows.append([t.labels[child], -1, -1])
                rows[index][slot] = len(rows) - 1
                next_frontier.append((child, len(rows) - 1))
        frontier = next_frontier
    zero = len(rows)
    rows.append([0, zero, zero])
    for row in rows:
        row[1] = zero if row[1] < 0 else row[1]
        row[2] = zero if row[2] < 0 else row[2]
    return RegularTree.from_rows([tuple(r) for r in rows])


def _sample_tuple(rng: random.Random, p: Presentation, arity: int) -> List[RegularTree]:
    """Tuples whose later components are often perturbations of earlier ones."""
    max_nodes = get_settings().sampling.max_tree_nodes
    elements: List[RegularTree] = []
    for _ in range(arity):
        if elements and rng.random() < 0.7:
            elements.append(_perturb(rng, p, rng.choice(elements)))
        else:
            elements.append(random_regular_tree(rng, p.base, max_nodes))
    return elements


def _sampled(
    p: Presentation,
    name: str,
    arity: int,
    premises: Premises,
    conclusion: Tuple[str, Tuple[int, ...]],
    rng: random.Random,
    samples: int,
) -> CheckResult:
    def holds(atom: str, positions: Sequence[int], elements: Sequence[RegularTree]) -> bool:
        return accepts(p.atom(atom), [elements[i] for i in positions])

    for _ in range(samples):
        elements = _sample_tuple(rng, p, arity)
        if not p.domain_universal and not all(accepts(p.domain, [e]) for e in elements):
            continue
        if all(holds(atom, positions, elements) for atom, positions in premises):
            if not holds(*conclusion, elements):
                logger.info(f"{p.name}: {name} fails on {tuple_text(elements)}")
                return CheckResult(
                    name=name, mode="sampled", status="sampled-fail", witness=tuple_text(elements), samples=samples
                )
    return CheckResult(name=name, mode="sampled", status="sampled-pass", samples=samples)


def validate_presentation(
    p: Presentation, seed: Optional[int] = None, samples: Optional[int] = None
) -> ValidationReport:
    """Check that equality is an equivalence compatible with every relation.

    Args:
        p: Presentation to check
        seed: Seed for sampled checks; defaults to the configured seed
        samples: Tuples per sampled check; defaults to the configured count

    Returns:
        One report line per check, in the order reflexivity, symmetry,
        transitivity, then compatibility per relation in name order
    """
    settings = get_settings().sampling
    seed = settings.seed if seed is None else seed
    samples = settings.samples if samples is None else samples
    rng = make_rng(seed)
    checks = _equivalence_checks() + [
        _compatibility_check(name, p.relations[name].arity) for name in sorted(p.relations)
    ]
    results: List[CheckResult] = []
    exact_tree = p.complement(EQUALITY) is not None
    for name, arity, premises, conclusion in checks:
        if p.kind == "word":
            result = _exact(p, name, arity, premises, conclusion)
        elif exact_tree and name in ("reflexivity", "symmetry"):
            result = _exact(p, name, arity, premises, conclusion)
        else:
            result = _sampled(p, name, arity, premises, conclusion, rng, samples)
        logger.debug(f"{p.name}: {result.line()}")
        results.append(result)
    report = ValidationReport(kind=p.kind, seed=seed if p.kind == "tree" else None, checks=results)
    logger.info(f"validated {p.describe()}: {'pass' if report.passed else 'fail'}")
    return report
