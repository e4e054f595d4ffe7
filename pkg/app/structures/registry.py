"""Named builders for every concrete construction, as exposed by `build`.

Interpretation builders also name the presentation they are applied to.
"""
from typing import Callable, Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

from app.automata.buchi import BuchiAutomaton
from app.automata.tree import MullerTreeAutomaton, ParityTreeAutomaton
from app.fo.interpretations import (
    Interpretation,
    apply_interpretation,
    matrix_interpretation,
    ring_interpretation,
    unitriangular_interpretation,
)
from app.models.trees import RegularTree
from app.presentations.model import Presentation
from app.structures.antichain import (
    antichain_tree,
    build_antichain_automaton,
    build_no_antichain_automaton,
    chain_tree,
)
from app.structures.boolean_algebras import build_B1_presentation, build_B2_presentation
from app.structures.fin import build_fin_automaton, build_fin_k_automaton
from app.utils.error_handling import InputError
from app.utils.logger import get_logger

logger = get_logger(__name__)

Artifact = Union[BuchiAutomaton, MullerTreeAutomaton, ParityTreeAutomaton, RegularTree, Presentation, Interpretation]


class Builder(BaseModel):
    """A named construction, optionally taking one natural-number parameter."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    description: str
    make: Callable[..., Artifact]
    parameter: Optional[str] = Field(None, description="Name of the parameter, if the builder takes one")
    default: Optional[int] = None
    source: Optional[Callable[[], Presentation]] = Field(
        None, description="Presentation an interpretation builder is applied to"
    )

    def build(self, argument: Optional[int] = None) -> Artifact:
        """Run the builder.

        Raises:
            InputError: If a parameter is missing or given to a builder without one
        """
        if self.parameter is None:
            if argument is not None:
                raise InputError(f"builder {self.name} takes no parameter")
            return self.make()
        value = argument if argument is not None else self.default
        if value is None:
            raise InputError(f"builder {self.name} needs the parameter {self.parameter}")
        return self.make(value)

    def compile(self, interpretation: Interpretation) -> Presentation:
        """Apply an interpretation made by this builder to its source presentation.

        Raises:
            InputError: If the builder has no source presentation
            CapacityError: If the interpreted relations exceed the letter or state budget
        """
        if self.source is None:
            raise InputError(f"builder {self.name} has no source presentation")
        return apply_interpretation(self.source(), interpretation)

    def usage(self) -> str:
        suffix = f" <{self.parameter}>" if self.parameter else ""
        return f"{self.name}{suffix}: {self.description}"


class BuilderRegistry(BaseModel):
    """Registry of builders, looked up by name."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    builders: Dict[str, Builder] = Field(default_factory=dict)

    def register(self, builder: Builder) -> None:
        """Register a builder.

        Raises:
            ValueError: If a builder with the same name already exists
        """
        if builder.name in self.builders:
            raise ValueError(f"Builder with name '{builder.name}' already registered")
        self.builders[builder.name] = builder
        logger.debug(f"Registered builder: {builder.name}")

    def has(self, name: str) -> bool:
        return name in self.builders

    def get(self, name: str) -> Builder:
        """Get a builder by name.

        Raises:
            ValueError: If no builder has that name
        """
        if name not in self.builders:
            raise ValueError(f"Builder '{name}' not found in registry")
        return self.builders[name]

    def all(self) -> List[Builder]:
        return [self.builders[name] for name in sorted(self.builders)]


def _ring() -> Presentation:
    return apply_interpretation(build_B1_presentation(), ring_interpretation())


def default_registry() -> BuilderRegistry:
    registry = BuilderRegistry()
    for builder in (
        Builder(name="fin", description="Büchi automaton for words with finitely many 1s", make=build_fin_automaton),
        Builder(
            name="fin_k",
            description="Büchi automaton for words with at most k letters 1",
            make=build_fin_k_automaton,
            parameter="k",
            default=1,
        ),
        Builder(
            name="T",
            description="Muller tree automaton for 1-sets with an infinite antichain",
            make=build_antichain_automaton,
        ),
        Builder(
            name="T_I",
            description="Muller tree automaton for 1-sets without an infinite antichain",
            make=build_no_antichain_automaton,
        ),
        Builder(name="B1", description="word presentation of P(N)/Fin", make=build_B1_presentation),
        Builder(name="B2", description="tree presentation of P({l,r}*)/I", make=build_B2_presentation),
        Builder(
            name="chain",
            description="regular tree whose 1-set is the chain l^n r^+",
            make=chain_tree,
            parameter="n",
            default=0,
        ),
        Builder(name="antichain", description="regular tree whose 1-set is the antichain l^* r", make=antichain_tree),
        Builder(
            name="ring",
            description="boolean ring interpreted in B1",
            make=ring_interpretation,
            source=build_B1_presentation,
        ),
        Builder(
            name="matrix",
            description="n x n matrices over the boolean ring of B1",
            make=matrix_interpretation,
            source=_ring,
            parameter="n",
            default=2,
        ),
        Builder(
            name="ut",
            description="upper unitriangular n x n matrices over the boolean ring of B1",
            make=unitriangular_interpretation,
            source=_ring,
            parameter="n",
            default=3,
        ),
    ):
        registry.register(builder)
    return registry
