import pytest

from app.automata.buchi import word_membership
from app.automata.tree import universal_tree_automaton
from app.models.alphabet import BINARY, Alphabet
from app.models.words import LassoWord
from app.presentations import engine
from app.presentations.bundle import MANIFEST, load_presentation, save_presentation
from app.presentations.model import Presentation, Relation, accepts
from app.presentations.validation import validate_presentation
from app.utils.error_handling import InputError, PresentationError, UnsupportedFragmentError

FINITE = LassoWord.of((1, 1), (0,))
EVENS = LassoWord.of((), (1, 0))
ODDS = LassoWord.of((), (0, 1))


def _broken(b1) -> Presentation:
    """Almost-inclusion posing as equality"""
    return Presentation(
        kind="word",
        name="broken",
        base=BINARY,
        domain=b1.domain,
        equality=b1.relations["subset"].automaton,
        relations={"zero": b1.relations["zero"]},
        domain_universal=True,
    )


def test_holds(b1):
    assert b1.holds("eq", [FINITE, LassoWord.of((), (0,))])
    assert b1.holds("=", [EVENS, EVENS])
    assert not b1.holds("subset", [EVENS, ODDS])
    with pytest.raises(PresentationError):
        b1.holds("eq", [EVENS])
    with pytest.raises(PresentationError):
        b1.holds("atom", [EVENS])


def test_describe(b1):
    text = b1.describe()
    assert text.startswith("word presentation B1")
    assert "cap/3" in text and "=/2" in text


def test_broken_equality_is_caught(b1):
    report = validate_presentation(_broken(b1))
    statuses = {c.name: c.status for c in report.checks}
    assert statuses["reflexivity"] == "exact-pass"
    assert statuses["transitivity"] == "exact-pass"
    assert statuses["symmetry"] == "exact-fail"
    assert statuses["compatibility[zero]"] == "exact-fail"
    assert not report.passed
    assert report.check("symmetry").witness


def test_signature_errors(b1):
    with pytest.raises(PresentationError, match="reserved"):
        Presentation(
            kind="word", base=BINARY, domain=b1.domain, equality=b1.equality, relations={"=": b1.relations["eq"]}
        )
    with pytest.raises(PresentationError, match="track"):
        Presentation(
            kind="word",
            base=BINARY,
            domain=b1.domain,
            equality=b1.equality,
            relations={"zero": Relation(arity=1, automaton=b1.equality)},
        )
    with pytest.raises(PresentationError, match="graph"):
        Presentation(
            kind="word",
            base=BINARY,
            domain=b1.domain,
            equality=b1.equality,
            relations={"eq": b1.relations["eq"]},
            functions={"eq": 2},
        )
    with pytest.raises(PresentationError, match="unary"):
        Presentation(
            kind="word",
            base=BINARY,
            domain=b1.domain,
            equality=b1.equality,
            relations=dict(b1.relations),
            constants={"0": "eq"},
        )


def test_kind_must_match_automata(b1):
    with pytest.raises(PresentationError):
        Presentation(kind="tree", base=BINARY, domain=universal_tree_automaton(BINARY), equality=b1.equality)


def test_bundle_round_trip(tmp_path, b1):
    manifest = save_presentation(b1, tmp_path / "b1")
    assert manifest.name == MANIFEST
    assert (tmp_path / "b1" / "complement-equality.aut").is_file()
    assert load_presentation(tmp_path / "b1") == b1


def test_bundle_errors(tmp_path, b1):
    with pytest.raises(InputError):
        load_presentation(tmp_path)
    save_presentation(b1, tmp_path / "b1")
    manifest = tmp_path / "b1" / MANIFEST
    manifest.write_text(manifest.read_text().replace('equality = "equality.aut"\n', ""))
    with pytest.raises(PresentationError, match="equality"):
        load_presentation(tmp_path / "b1")
    manifest.write_text("kind = [")
    with pytest.raises(InputError):
        load_presentation(tmp_path / "b1")


def test_on_tracks_diagonal(b1):
    """eq read on one track twice accepts every element"""
    diagonal = engine.on_tracks(b1, b1.equality, 1, [0, 0])
    assert diagonal.alphabet == BINARY
    assert word_membership(diagonal, EVENS)


def test_on_tracks_swap(b1):
    swapped = engine.on_tracks(b1, b1.relations["subset"].automaton, 2, [1, 0])
    assert accepts(swapped, [EVENS, FINITE])
    assert not accepts(swapped, [FINITE, EVENS])


def test_select_tracks():
    source, target = Alphabet.power(BINARY, 2), Alphabet.power(BINARY, 3)
    assert engine.select_tracks(source, target, [2, 0])((1, 0, 0)) == (0, 1)


def test_member_and_split(b1):
    witness = engine.member(b1.relations["cap"].automaton)
    assert witness is not None
    x, y, z = engine.split_tuple(b1, witness, 3)
    assert b1.holds("cap", [x, y, z])
    assert engine.member(engine.nothing(b1, 2)) is None


def test_domain_power_and_negate(b1, b2):
    assert engine.domain_power(b1, 2).alphabet == b1.tracks(2)
    assert accepts(engine.negate(b1, b1.relations["zero"].automaton), [EVENS])
    with pytest.raises(UnsupportedFragmentError):
        engine.negate(b2, b2.domain)
