import pytest

from app.automata.buchi import word_cylindrify, word_membership
from app.automata.formats import dumps, load, loads, parse_buchi, parse_rtree, parse_tree_automaton, save
from app.automata.tree import MullerTreeAutomaton, ParityTreeAutomaton
from app.fo.interpretations import matrix_interpretation, ring_interpretation, unitriangular_interpretation
from app.fo.toy import pairing_interpretation
from app.models.alphabet import BINARY, Alphabet
from app.models.trees import RegularTree
from app.models.words import LassoWord
from app.presentations.bundle import load_presentation, save_presentation
from app.presentations.model import Presentation
from app.structures.antichain import build_antichain_automaton, chain_tree
from app.structures.registry import default_registry
from app.utils.error_handling import InputError

FIN_TEXT = """buchi
# finitely many 1s
alphabet: 0, 1
states: 2
initial: 0
accepting: 1
trans: 0 0 0
trans: 0 1 0
trans: 0 0 1
trans: 1 0 1
"""


def test_parse_buchi():
    a = parse_buchi(FIN_TEXT)
    assert a.num_states == 2
    assert a.alphabet == BINARY
    assert word_membership(a, LassoWord.of((1,), (0,)))


def test_buchi_document_round_trip(fin):
    again = loads(dumps(fin))
    assert again == fin


def test_product_alphabet_round_trip(fin):
    wide = word_cylindrify(fin, 0, Alphabet.of("ab"))
    text = dumps(wide)
    assert "tracks: 2" in text
    assert loads(text).alphabet == wide.alphabet


def test_tree_automaton_round_trip():
    t = build_antichain_automaton()
    again = loads(dumps(t))
    assert isinstance(again, MullerTreeAutomaton)
    assert again.designated == t.designated
    assert again.transitions == t.transitions


def test_parity_document():
    text = "parity\nalphabet: 0, 1\nstates: 1\ninitial: 0\ntrans: 0 0 0 0\nprio: 0 2\n"
    p = parse_tree_automaton(text)
    assert isinstance(p, ParityTreeAutomaton)
    assert p.priority == (2,)
    with pytest.raises(InputError, match="line 3"):
        parse_tree_automaton(text.replace("states: 1", "states: x"))


def test_rtree_and_lasso_documents():
    t = chain_tree(2)
    assert parse_rtree(dumps(t)) == t
    assert loads("lasso\n1 0|0 1\n") == LassoWord.of((1, 0), (0, 1))
    assert loads("0|1") == LassoWord.of((0,), (1,))


def test_errors_carry_line_numbers():
    with pytest.raises(InputError, match="line 6"):
        parse_buchi(FIN_TEXT.replace("accepting: 1", "bogus: 1"))
    with pytest.raises(InputError, match="line 9"):
        parse_buchi(FIN_TEXT.replace("trans: 0 0 1", "trans: 0 0"))
    with pytest.raises(InputError):
        loads("automaton\n")
    with pytest.raises(InputError):
        parse_buchi(FIN_TEXT.replace("trans: 1 0 1", "trans: 1 2 1"))


def test_rtree_node_ids():
    with pytest.raises(InputError):
        parse_rtree("rtree\nroot: 0\nnode: 0 1 0 2\nnode: 2 0 0 0\n")


def test_save_and_load(tmp_path, fin):
    path = save(fin, tmp_path / "nested" / "fin.aut")
    assert load(path) == fin
    with pytest.raises(InputError):
        load(tmp_path / "missing.aut")


def test_regular_tree_save(tmp_path):
    t = RegularTree.from_rows([(0, 1, 0), (1, 1, 1)])
    assert load(save(t, tmp_path / "t.rtree")) == t


PAIRING_TEXT = """interpretation
name: pairing
dimension: 2
domain: x := true
equality: x y := x_0 = y_0 & x_1 = y_1
relation: Q x := P(x_0) & !P(x_1)
relation: S x y := R(x_0,y_1) | x_1 = y_0
"""


def test_parse_interpretation():
    assert loads(PAIRING_TEXT) == pairing_interpretation()
    assert dumps(pairing_interpretation()) == PAIRING_TEXT


@pytest.mark.parametrize(
    "make", [ring_interpretation, lambda: matrix_interpretation(2), lambda: unitriangular_interpretation(3)]
)
def test_interpretation_document_round_trip(tmp_path, make):
    interpretation = make()
    text = dumps(interpretation)
    assert text.startswith("interpretation\n")
    assert f"dimension: {interpretation.dimension}" in text
    assert load(save(interpretation, tmp_path / "i.interp")) == interpretation


@pytest.mark.parametrize(
    "old,new,line",
    [
        ("dimension: 2", "dimension: 0", 3),
        ("relation: Q x := P(x_0) & !P(x_1)", "relation: Q x := P(x_0) &", 6),
        ("relation: S x y :=", "relation: S x y", 7),
        ("relation: S", "relation: Q", 7),
        ("relation: Q", "colour: Q", 6),
    ],
)
def test_interpretation_errors_carry_line_numbers(old, new, line):
    with pytest.raises(InputError, match=f"line {line}"):
        loads(PAIRING_TEXT.replace(old, new))


def test_invalid_interpretation_document():
    with pytest.raises(InputError, match="missing 'equality'"):
        loads(PAIRING_TEXT.replace("equality: x y := x_0 = y_0 & x_1 = y_1\n", ""))
    with pytest.raises(InputError, match="invalid interpretation"):
        loads(PAIRING_TEXT.replace("x_1 = y_0", "x_1 = z_0"))
    with pytest.raises(InputError, match="invalid interpretation"):
        loads(PAIRING_TEXT + "function: S 1\nfunction: Q 1\n")


@pytest.mark.parametrize("name", [b.name for b in default_registry().all()])
def test_builder_output_round_trips(tmp_path, name):
    """Every builder output is written and read back unchanged"""
    artifact = default_registry().get(name).build()
    if isinstance(artifact, Presentation):
        save_presentation(artifact, tmp_path / name)
        assert load_presentation(tmp_path / name) == artifact
    else:
        assert loads(dumps(artifact)) == artifact
