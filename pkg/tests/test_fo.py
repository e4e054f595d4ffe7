import pytest

from app.fo.compiler import CompilationCache, compile_formula, decide_sentence
from app.fo.formula import And, Atom, Exists, NameSupply, Not, Or, Var, atom, nnf, substitute
from app.fo.interpretations import Definition, Interpretation, apply_interpretation, translate
from app.fo.parser import parse_formula
from app.fo.toy import (
    default_toy_structure,
    element_word,
    evaluate,
    evaluate_interpreted,
    pairing_interpretation,
    pairing_toy_structure,
    toy_presentation,
    toy_sentences,
)
from app.models.words import LassoWord
from app.presentations.model import accepts
from app.utils.error_handling import InputError, UnsupportedFragmentError

FINITE = LassoWord.of((1, 1), (0,))
EVENS = LassoWord.of((), (1, 0))

PAIRING_SENTENCES = [
    "exists x. Q(x)",
    "forall x. exists y. S(x,y)",
    "exists x. forall y. S(x,y)",
    "forall x, y. (S(x,y) -> S(y,x))",
    "exists x, y. (x != y & Q(x) & Q(y))",
    "forall x. (Q(x) -> exists y. (S(y,x) & !Q(y)))",
]


@pytest.fixture(scope="module")
def toy():
    return toy_presentation(default_toy_structure())


@pytest.fixture(scope="module")
def paired():
    return apply_interpretation(toy_presentation(pairing_toy_structure()), pairing_interpretation())


def test_precedence():
    f = parse_formula("p(x) | q(x) & r(x)")
    assert isinstance(f, Or) and isinstance(f.parts[1], And)
    g = parse_formula("!p(x) & q(x)")
    assert isinstance(g, And) and isinstance(g.parts[0], Not)
    h = parse_formula("exists x. p(x) & q(x)")
    assert isinstance(h, Exists) and isinstance(h.body, And)


def test_implication_is_right_associative():
    f = parse_formula("p(x) -> q(x) -> r(x)")
    assert f == parse_formula("!p(x) | (!q(x) | r(x))")


def test_terms_and_constants():
    f = parse_formula("cap(x,neg(y)) = 0")
    assert isinstance(f, Atom) and f.relation == "="
    assert str(f) == "cap(x,neg(y)) = 0"
    assert parse_formula("x != y") == Not(body=atom("=", "x", "y"))


def test_printing_round_trips():
    for text in ["forall x. exists y. (R(x,y) | !P(y))", "exists x, y. (x = y & P(x))"]:
        f = parse_formula(text)
        assert parse_formula(str(f)) == f


@pytest.mark.parametrize(
    "text,column",
    [("p(x) $ q(x)", 6), ("exists . p(x)", 8), ("p(x) &", 7), ("x", 2), ("p(x))", 5)],
)
def test_parse_errors_report_columns(text, column):
    with pytest.raises(InputError, match=f"column {column}"):
        parse_formula(text)


def test_empty_formula():
    with pytest.raises(InputError):
        parse_formula("   ")


def test_nnf_pushes_negations():
    f = nnf(parse_formula("!(forall x. p(x) & !q(x))"))
    assert f == parse_formula("exists x. !p(x) | q(x)")


def test_substitute_renames_bound_variables():
    f = substitute(parse_formula("exists y. r(x,y)"), {"x": Var(name="y")}, NameSupply())
    assert f.free_variables() == {"y"}
    assert f.quantifier_depth() == 1


def test_compile_binary_relation(b1):
    a = compile_formula(b1, parse_formula("subset(x,y)"))
    assert accepts(a, [FINITE, EVENS])
    assert not accepts(a, [EVENS, FINITE])
    swapped = compile_formula(b1, parse_formula("subset(x,y)"), ["y", "x"])
    assert accepts(swapped, [EVENS, FINITE])


def test_compile_with_terms(b1):
    a = compile_formula(b1, parse_formula("cap(x,neg(x)) = y"))
    assert accepts(a, [EVENS, FINITE])
    assert not accepts(a, [EVENS, EVENS])


def test_compile_extra_track(b1):
    a = compile_formula(b1, parse_formula("x = 0"), ["x", "y"])
    assert accepts(a, [FINITE, EVENS])


@pytest.mark.parametrize(
    "text,variables",
    [
        ("subset(x,y,z)", None),
        ("atom(x)", None),
        ("zap(x) = y", None),
        ("x = 7", None),
        ("cap(x) = y", None),
        ("forall x. x = x", None),
        ("subset(x,y)", ["x"]),
        ("subset(x,y)", ["x", "x", "y"]),
    ],
)
def test_compile_errors(b1, text, variables):
    with pytest.raises(InputError):
        compile_formula(b1, parse_formula(text), variables)


def test_tree_fragment(b2):
    with pytest.raises(UnsupportedFragmentError):
        compile_formula(b2, parse_formula("forall y. subset(x,y)"))
    with pytest.raises(UnsupportedFragmentError):
        decide_sentence(b2, parse_formula("forall x. x = x"))


def test_decide_with_witness(b1):
    decision = decide_sentence(b1, parse_formula("exists x. (x != 0 & x != 1)"))
    assert decision.verdict
    x = decision.witnesses["x"]
    assert not b1.holds("zero", [x]) and not b1.holds("one", [x])


def test_decide_false_and_closed(b1):
    assert not decide_sentence(b1, parse_formula("exists x. (x = 0 & x = 1)")).verdict
    assert decide_sentence(b1, parse_formula("true | exists x. x = 0")).verdict
    with pytest.raises(InputError):
        decide_sentence(b1, parse_formula("subset(x,y)"))


def test_toy_presentation_elements(toy):
    r = compile_formula(toy, parse_formula("R(x,y)"))
    assert accepts(r, [element_word(0), element_word(1, (2, 0))])
    assert not accepts(r, [element_word(1), element_word(0)])
    assert toy.holds("=", [element_word(2), element_word(2, (0, 1))])


def test_toy_catalogue_against_evaluator(toy, rng):
    """Sampled toy sentences decide as the brute-force evaluator says"""
    structure = default_toy_structure()
    sentences = list(toy_sentences())
    assert len(sentences) > 100
    for sentence in rng.sample(sentences, 60):
        assert decide_sentence(toy, sentence).verdict == evaluate(structure, sentence, {}), str(sentence)


def test_evaluator_rejects_terms():
    with pytest.raises(InputError):
        evaluate(default_toy_structure(), parse_formula("exists x. f(x) = x"), {})
    with pytest.raises(InputError):
        evaluate(default_toy_structure(), parse_formula("exists x. T(x)"), {})


@pytest.mark.parametrize("text", PAIRING_SENTENCES)
def test_pairing_interpretation(paired, text):
    sentence = parse_formula(text)
    expected = evaluate_interpreted(pairing_toy_structure(), pairing_interpretation(), sentence, {})
    assert decide_sentence(paired, sentence).verdict == expected


@pytest.mark.parametrize("text", PAIRING_SENTENCES[:3])
def test_translation_agrees(text):
    source = toy_presentation(pairing_toy_structure())
    sentence = parse_formula(text)
    translated = translate(pairing_interpretation(), sentence)
    expected = evaluate_interpreted(pairing_toy_structure(), pairing_interpretation(), sentence, {})
    assert decide_sentence(source, translated).verdict == expected
    assert evaluate(pairing_toy_structure(), translated, {}) == expected


TOY_SAMPLE = list(toy_sentences())[::37]

PADDED = Interpretation(
    name="padded",
    dimension=2,
    domain=Definition.of("x", "true"),
    equality=Definition.of("x y", "x_0 = y_0"),
    relations={"P": Definition.of("x", "P(x_0)"), "R": Definition.of("x y", "R(x_0,y_0)")},
)


@pytest.fixture(scope="module")
def padded(toy):
    """The toy structure again, each element carrying an ignored second component"""
    return apply_interpretation(toy, PADDED, complements=True)


@pytest.mark.parametrize("sentence", TOY_SAMPLE, ids=str)
def test_negation_flips_verdict(toy, sentence):
    assert decide_sentence(toy, Not(body=sentence)).verdict != decide_sentence(toy, sentence).verdict


@pytest.mark.parametrize(
    "text",
    [
        "exists x. (x != 0 & x != 1)",
        "forall x. exists y. (subset(x,y) & x != y)",
        "forall x. (subset(x,0) -> x = 0)",
    ],
)
def test_negation_flips_verdict_in_b1(b1, text):
    sentence = parse_formula(text)
    assert decide_sentence(b1, Not(body=sentence)).verdict != decide_sentence(b1, sentence).verdict


@pytest.mark.slow
def test_negation_flips_verdict_on_whole_catalogue(toy):
    cache = CompilationCache(toy)
    for sentence in toy_sentences():
        positive = decide_sentence(toy, sentence, cache).verdict
        assert decide_sentence(toy, Not(body=sentence), cache).verdict != positive, str(sentence)


@pytest.mark.parametrize(
    "text", ["P(x)", "R(x,y)", "exists y. R(x,y)", "forall y. (R(x,y) | x = y)", "x != y & !P(y)"]
)
def test_toy_membership_ignores_representative(toy, rng, text):
    formula = parse_formula(text)
    automaton = compile_formula(toy, formula)
    arity = len(formula.free_variables())
    for _ in range(10):
        values = [rng.randrange(3) for _ in range(arity)]
        first = [element_word(a, [rng.randrange(3) for _ in range(rng.randrange(3))]) for a in values]
        second = [element_word(a, [rng.randrange(3) for _ in range(rng.randrange(3))]) for a in values]
        assert all(toy.holds("=", [u, v]) for u, v in zip(first, second))
        assert accepts(automaton, first) == accepts(automaton, second)


@pytest.mark.parametrize(
    "text", ["x = 0", "exists z. (subset(z,x) & z != x & z != 0)", "exists y. (subset(x,y) & y != 1)"]
)
def test_b1_membership_ignores_finite_changes(b1, text):
    automaton = compile_formula(b1, parse_formula(text))
    for word in (EVENS, FINITE, LassoWord.of((), (1,)), LassoWord.of((0, 1), (0, 0, 1))):
        variant = LassoWord.of(tuple(1 - a for a in word.stem + word.loop), word.loop)
        assert b1.holds("=", [word, variant])
        assert accepts(automaton, [word]) == accepts(automaton, [variant])


def test_padded_presentation_registers_complements(padded):
    assert set(padded.complements) == {"=", "P", "R"}
    assert padded.holds("=", [LassoWord.of((), ((2, 0),)), LassoWord.of((), ((2, 1),))])


@pytest.mark.parametrize("sentence", TOY_SAMPLE, ids=str)
def test_verdict_independent_of_presentation(toy, padded, sentence):
    """A second presentation of the same structure, with a coarser equality, decides alike"""
    assert decide_sentence(padded, sentence).verdict == decide_sentence(toy, sentence).verdict


def test_cache_is_shared_across_sentences(toy):
    cache = CompilationCache(toy)
    first = decide_sentence(toy, parse_formula("exists x. forall y. (R(x,y) | !P(y))"), cache)
    compiled = len(cache)
    second = decide_sentence(toy, parse_formula("forall x. exists y. !(R(x,y) | !P(y))"), cache)
    assert first.verdict != second.verdict
    assert cache.hits > 0
    assert len(cache) >= compiled
    assert decide_sentence(toy, parse_formula("exists x. forall y. (R(x,y) | !P(y))"), cache) == first


def test_cache_belongs_to_one_presentation(toy, b1):
    with pytest.raises(InputError, match="cache"):
        decide_sentence(b1, parse_formula("exists x. x = 0"), CompilationCache(toy))
