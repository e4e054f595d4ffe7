"""Variable-free instance checks shared by both quotient boolean algebras.

The same catalogue runs against P(N)/Fin and P({l,r}*)/I with
corresponding witness elements; both algebras must give the expected
verdict on every check.
"""
from typing import Dict, List, Tuple

from pydantic import BaseModel, ConfigDict

from app.fo.compiler import decide_sentence
from app.fo.parser import parse_formula
from app.models.result import CheckResult
from app.models.trees import RegularTree
from app.models.words import LassoWord
from app.presentations.model import Element, Presentation
from app.structures.antichain import antichain_tree, chain_tree
from app.structures.atomless import atomless_split
from app.utils.logger import get_logger

logger = get_logger(__name__)


class InstanceCheck(BaseModel):
    """An atom applied to named catalogue elements, with its expected truth value."""
    model_config = ConfigDict(frozen=True)

    relation: str
    arguments: Tuple[str, ...]
    expected: bool

    @property
    def name(self) -> str:
        return f"{self.relation}({','.join(self.arguments)})"


def _check(relation: str, *arguments: str, expected: bool = True) -> InstanceCheck:
    return InstanceCheck(relation=relation, arguments=arguments, expected=expected)


INSTANCE_CHECKS: Tuple[InstanceCheck, ...] = (
    _check("eq", "zero", "zero"),
    _check("eq", "finite", "zero"),
    _check("eq", "one", "one"),
    _check("eq", "zero", "one", expected=False),
    _check("subset", "zero", "half"),
    _check("subset", "half", "one"),
    _check("subset", "half", "cohalf", expected=False),
    _check("eq", "half", "zero", expected=False),
    _check("eq", "half", "one", expected=False),
    _check("cap", "half", "cohalf", "zero"),
    _check("cup", "half", "cohalf", "one"),
    _check("neg", "half", "cohalf"),
    _check("neg", "zero", "one"),
    _check("neg", "finite", "one"),
    _check("cap", "half", "one", "half"),
    _check("cup", "finite", "half", "half"),
    _check("subset", "split", "one"),
    _check("eq", "split", "zero", expected=False),
    _check("eq", "split", "one", expected=False),
    _check("zero", "finite"),
)


def catalogue_elements(kind: str) -> Dict[str, Element]:
    """Witness elements: 0, 1, a finite (ideal) set, two complementary halves and a split of 1."""
    if kind == "word":
        one = LassoWord.of((), (1,))
        return {
            "zero": LassoWord.of((), (0,)),
            "one": one,
            "finite": LassoWord.of((1, 1, 1), (0,)),
            "half": LassoWord.of((), (1, 0)),
            "cohalf": LassoWord.of((), (0, 1)),
            "split": atomless_split(one, "word"),
        }
    one = RegularTree.constant(1)
    half = antichain_tree()
    return {
        "zero": RegularTree.constant(0),
        "one": one,
        "finite": chain_tree(2),
        "half": half,
        "cohalf": half.map_labels(lambda b: 1 - b),
        "split": atomless_split(one, "tree"),
    }


def run_instance_catalogue(p: Presentation) -> List[CheckResult]:
    """Evaluate every catalogue check against the presentation."""
    elements = catalogue_elements(p.kind)
    results = []
    for check in INSTANCE_CHECKS:
        actual = p.holds(check.relation, [elements[a] for a in check.arguments])
        ok = actual == check.expected
        results.append(
            CheckResult(
                name=check.name,
                mode="exact",
                status="exact-pass" if ok else "exact-fail",
                witness=None if ok else f"expected {check.expected}, got {actual}",
            )
        )
    failures = sum(1 for r in results if not r.passed)
    logger.info(f"instance catalogue on {p.name}: {len(results) - failures} passed, {failures} failed")
    return results


ALGEBRA_AXIOMS: Dict[str, str] = {
    "cap-commutative": "forall x, y. cap(x,y) = cap(y,x)",
    "cup-commutative": "forall x, y. cup(x,y) = cup(y,x)",
    "cap-associative": "forall x, y, z. cap(cap(x,y),z) = cap(x,cap(y,z))",
    "cup-associative": "forall x, y, z. cup(cup(x,y),z) = cup(x,cup(y,z))",
    "cap-absorption": "forall x, y. cap(x,cup(x,y)) = x",
    "cup-absorption": "forall x, y. cup(x,cap(x,y)) = x",
    "cap-complement": "forall x. cap(x,neg(x)) = 0",
    "cup-complement": "forall x. cup(x,neg(x)) = 1",
}

ATOMLESS = "forall x. (x != 0 -> exists z. (z != 0 & subset(z,x) & z != x))"
SOME_ATOM = "exists x. (x != 0 & forall z. (subset(z,x) -> (z = 0 | z = x)))"


def run_axiom_catalogue(p: Presentation) -> List[CheckResult]:
    """Decide the boolean-algebra axioms and atomlessness over a word presentation.

    Universal sentences leave the tree fragment, so tree presentations get
    no axiom checks.
    """
    if p.kind != "word":
        return []
    expectations = {name: (text, True) for name, text in ALGEBRA_AXIOMS.items()}
    expectations["atomless"] = (ATOMLESS, True)
    expectations["some-atom"] = (SOME_ATOM, False)
    results = []
    for name, (text, expected) in expectations.items():
        actual = decide_sentence(p, parse_formula(text)).verdict
        ok = actual == expected
        results.append(
            CheckResult(
                name=name,
                mode="exact",
                status="exact-pass" if ok else "exact-fail",
                witness=None if ok else f"expected {expected}, got {actual}",
            )
        )
    logger.info(f"axiom catalogue on {p.name}: {sum(r.passed for r in results)}/{len(results)} passed")
    return results
