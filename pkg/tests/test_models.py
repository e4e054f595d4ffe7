import pytest

from app.models.alphabet import BINARY, Alphabet, format_letter, parse_letter
from app.models.result import CheckResult, CommandOutcome, ValidationReport
from app.models.trees import AntichainVerdict, NodeAddress, RegularTree
from app.models.words import LassoWord
from app.utils.error_handling import InputError


def test_alphabet_power_letters():
    """Letters of a product alphabet are tuples in lexicographic order"""
    pair = Alphabet.power(BINARY, 2)
    assert pair.arity == 2
    assert pair.letters == ((0, 0), (0, 1), (1, 0), (1, 1))
    assert pair.split((0, 1)) == (0, 1)
    assert pair.join([1, 0]) == (1, 0)
    assert BINARY.split(1) == (1,)


def test_alphabet_rejects_duplicates():
    with pytest.raises(InputError):
        Alphabet.of((0, 0))


def test_alphabet_track_operations():
    three = Alphabet.product(BINARY, Alphabet.of("ab"), BINARY)
    assert three.drop_track(1).tracks == (BINARY.tracks[0], BINARY.tracks[0])
    assert three.permute([1, 0, 2]).tracks[0] == ("a", "b")
    with pytest.raises(InputError):
        three.permute([0, 0, 1])


def test_letter_format_round_trip():
    assert format_letter((0, (1, 0))) == "(0,(1,0))"
    assert parse_letter("(0,(1,0))") == (0, (1, 0))
    assert parse_letter("a") == "a"


def test_lasso_normalization():
    """Different lassos of the same word normalize identically"""
    a = LassoWord.of((0, 1), (0, 1))
    b = LassoWord.of((), (0, 1, 0, 1))
    assert a.same_word(b)
    assert not a.same_word(LassoWord.of((), (1, 0)))


def test_lasso_needs_loop():
    with pytest.raises(InputError):
        LassoWord.of((0,), ())


def test_lasso_parse_and_zip():
    w = LassoWord.parse("1 0|0")
    assert w.letter(0) == 1 and w.letter(5) == 0
    zipped = LassoWord.zip([w, LassoWord.of((), (1, 0))])
    assert zipped.unzip(2)[0].same_word(w)
    assert zipped.letter(1) == (0, 0)


def test_regular_tree_bisimilar_graphs_are_equal():
    one_node = RegularTree.constant(1)
    two_nodes = RegularTree.from_rows([(1, 1, 1), (1, 0, 0)])
    assert one_node == two_nodes
    assert hash(one_node) == hash(two_nodes)
    assert two_nodes.minimized().size == 1


def test_regular_tree_unfold_and_leftmost():
    t = RegularTree.from_rows([(0, 1, 0), (1, 1, 0)])
    assert t.unfold("") == 0
    assert t.unfold("l") == 1
    assert t.unfold(NodeAddress(path="lr")) == 0
    assert t.leftmost_lasso().same_word(LassoWord.of((0,), (1,)))
    assert t.truncate(1) == frozenset({"l"})


def test_regular_tree_rejects_dangling_successor():
    with pytest.raises(InputError):
        RegularTree.from_rows([(0, 1, 0)])


def test_node_address_validation():
    assert NodeAddress.parse("ε").path == ""
    assert NodeAddress(path="l").is_prefix_of(NodeAddress(path="lr"))
    with pytest.raises(InputError):
        NodeAddress(path="lx")


def test_antichain_verdict_shape():
    assert AntichainVerdict.finite(2).width == 2
    assert AntichainVerdict.infinite().is_infinite
    with pytest.raises(InputError):
        AntichainVerdict(kind="infinite", width=3)


def test_command_outcome_exit_codes_and_render():
    ok = CommandOutcome.ok_outcome({"verdict": True, "checks": ["a", "b"]})
    assert ok.exit_code == 0
    assert ok.render() == "status: ok\nverdict: True\nchecks[0]: a\nchecks[1]: b"
    assert CommandOutcome.fail_outcome("x failed").exit_code == 1
    assert CommandOutcome.error_outcome("Bad", "reason").exit_code == 2
    assert '"status": "error"' in CommandOutcome.error_outcome("Bad", "reason").render("json")


def test_command_outcome_fail_needs_reason():
    with pytest.raises(ValueError):
        CommandOutcome(status="fail")


def test_validation_report_lines():
    report = ValidationReport(
        kind="tree",
        seed=3,
        checks=[
            CheckResult(name="reflexivity", mode="exact", status="exact-pass"),
            CheckResult(name="transitivity", mode="sampled", status="sampled-fail", witness="(a, b)", samples=4),
        ],
    )
    assert not report.passed
    assert report.lines() == [
        "reflexivity exact exact-pass",
        "transitivity sampled sampled-fail samples=4 witness=(a, b)",
    ]
    assert report.check("reflexivity").passed
