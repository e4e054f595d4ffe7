"""Line-based text formats for automata, regular trees, lassos and interpretations.

Every format starts with a header line (``buchi``, ``muller``, ``parity``,
``rtree``, ``lasso`` or ``interpretation``) followed by ``key: value``
lines. Blank lines and lines starting with ``#`` are ignored. Parse errors
carry the line number.
"""
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from app.automata.buchi import BuchiAutomaton
from app.automata.tree import MullerTreeAutomaton, ParityTreeAutomaton
from app.fo.interpretations import Definition, Interpretation
from app.fo.parser import parse_formula
from app.models.alphabet import Alphabet, Letter, format_letter, parse_letter
from app.models.trees import RegularTree
from app.models.words import LassoWord
from app.utils.error_handling import InputError, OmegaError
from app.utils.helpers import split_top_level

Document = Union[BuchiAutomaton, MullerTreeAutomaton, ParityTreeAutomaton, RegularTree, LassoWord, Interpretation]

HEADERS = ("buchi", "muller", "parity", "rtree", "lasso", "interpretation")


def _error(line: int, message: str) -> InputError:
    return InputError(f"line {line}: {message}", {"line": line})


def _lines(text: str) -> List[Tuple[int, str]]:
    result = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            result.append((number, line))
    return result


def _fields(text: str, header: str) -> List[Tuple[int, str, str]]:
    lines = _lines(text)
    if not lines:
        raise _error(1, f"empty document, expected header '{header}'")
    number, first = lines[0]
    if first != header:
        raise _error(number, f"expected header '{header}', found {first!r}")
    fields = []
    for number, line in lines[1:]:
        if ":" not in line:
            raise _error(number, f"expected 'key: value', found {line!r}")
        key, value = line.split(":", 1)
        fields.append((number, key.strip(), value.strip()))
    return fields


def _int(number: int, text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise _error(number, f"expected an integer, found {text!r}")


def _letter(number: int, text: str) -> Letter:
    try:
        return parse_letter(text)
    except OmegaError as e:
        raise _error(number, e.message)


def _single(fields, key: str, default: Optional[str] = None) -> Tuple[int, Optional[str]]:
    found = [(n, v) for n, k, v in fields if k == key]
    if len(found) > 1:
        raise _error(found[1][0], f"duplicate '{key}' line")
    if not found:
        if default is None:
            raise _error(fields[-1][0] if fields else 1, f"missing '{key}' line")
        return 0, default
    return found[0]


def dump_alphabet(alphabet: Alphabet) -> List[str]:
    lines = [f"alphabet: {alphabet}"]
    if alphabet.arity > 1:
        lines.append(f"tracks: {alphabet.arity}")
    return lines


def _parse_alphabet(fields) -> Alphabet:
    number, text = _single(fields, "alphabet")
    letters = [_letter(number, part) for part in split_top_level(text)]
    if not letters:
        raise _error(number, "empty alphabet")
    track_number, tracks_text = _single(fields, "tracks", "1")
    arity = _int(track_number, tracks_text)
    try:
        if arity == 1:
            return Alphabet.of(letters)
        tracks: List[List[Letter]] = [[] for _ in range(arity)]
        for letter in letters:
            if not isinstance(letter, tuple) or len(letter) != arity:
                raise _error(number, f"letter {format_letter(letter)} does not have {arity} components")
            for i, part in enumerate(letter):
                if part not in tracks[i]:
                    tracks[i].append(part)
        alphabet = Alphabet(tracks=tuple(tuple(t) for t in tracks))
    except InputError as e:
        if e.message.startswith("line "):
            raise
        raise _error(number, e.message)
    if set(alphabet.letters) != set(letters):
        raise _error(number, "letters do not form a full product of the tracks")
    return alphabet


def _state_list(number: int, text: str) -> List[int]:
    return [_int(number, part) for part in split_top_level(text)] if text else []


def dump_buchi(a: BuchiAutomaton) -> str:
    lines = ["buchi"] + dump_alphabet(a.alphabet)
    lines.append(f"states: {a.num_states}")
    lines.append(f"initial: {', '.join(str(q) for q in sorted(a.initial))}")
    lines.append(f"accepting: {', '.join(str(q) for q in sorted(a.accepting))}")
    lines += [f"trans: {p} {format_letter(x)} {q}" for p, x, q in a.transitions]
    return "\n".join(lines) + "\n"


def parse_buchi(text: str) -> BuchiAutomaton:
    """Parse the `buchi` format.

    Raises:
        InputError: With the offending line number
    """
    fields = _fields(text, "buchi")
    alphabet = _parse_alphabet(fields)
    number, states_text = _single(fields, "states")
    num_states = _int(number, states_text)
    init_number, init_text = _single(fields, "initial", "")
    acc_number, acc_text = _single(fields, "accepting", "")
    transitions = []
    for number, key, value in fields:
        if key == "trans":
            parts = value.split()
            if len(parts) != 3:
                raise _error(number, "expected 'trans: q letter q2'")
            transitions.append((_int(number, parts[0]), _letter(number, parts[1]), _int(number, parts[2])))
        elif key not in ("alphabet", "tracks", "states", "initial", "accepting"):
            raise _error(number, f"unknown key {key!r}")
    try:
        return BuchiAutomaton.build(
            alphabet,
            num_states,
            _state_list(init_number, init_text),
            _state_list(acc_number, acc_text),
            transitions,
        )
    except InputError as e:
        raise InputError(f"invalid automaton: {e.message}")


def dump_tree_automaton(a: Union[MullerTreeAutomaton, ParityTreeAutomaton]) -> str:
    header = "parity" if isinstance(a, ParityTreeAutomaton) else "muller"
    lines = [header] + dump_alphabet(a.alphabet)
    lines.append(f"states: {a.num_states}")
    lines.append(f"initial: {a.initial}")
    lines += [f"trans: {q} {format_letter(x)} {ql} {qr}" for q, x, ql, qr in a.transitions]
    if isinstance(a, MullerTreeAutomaton) and a.designated is not None:
        members = sorted(sorted(m) for m in a.designated)
        lines.append("acc: " + " ".join("{" + ",".join(str(q) for q in m) + "}" for m in members))
    else:
        lines += [f"prio: {q} {p}" for q, p in enumerate(a.priority)]
    return "\n".join(lines) + "\n"


def _parse_sets(number: int, text: str) -> List[frozenset]:
    sets = []
    for chunk in text.split("}"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if not chunk.startswith("{"):
            raise _error(number, f"expected '{{...}}', found {chunk!r}")
        sets.append(frozenset(_state_list(number, chunk[1:])))
    return sets


def parse_tree_automaton(text: str) -> Union[MullerTreeAutomaton, ParityTreeAutomaton]:
    """Parse the `muller` or `parity` format.

    A `muller` document lists its designated family with `acc:` lines, or
    gives `prio:` lines for the family of sets with an even maximum.

    Raises:
        InputError: With the offending line number
    """
    lines = _lines(text)
    header = lines[0][1] if lines else ""
    if header not in ("muller", "parity"):
        raise _error(lines[0][0] if lines else 1, f"expected header 'muller' or 'parity', found {header!r}")
    fields = _fields(text, header)
    alphabet = _parse_alphabet(fields)
    number, states_text = _single(fields, "states")
    num_states = _int(number, states_text)
    init_number, init_text = _single(fields, "initial")
    transitions = []
    designated: List[frozenset] = []
    has_acc = False
    priority: Dict[int, int] = {}
    for number, key, value in fields:
        if key == "trans":
            parts = value.split()
            if len(parts) != 4:
                raise _error(number, "expected 'trans: q letter ql qr'")
            q, ql, qr = (_int(number, parts[i]) for i in (0, 2, 3))
            transitions.append((q, _letter(number, parts[1]), ql, qr))
        elif key == "acc":
            if header == "parity":
                raise _error(number, "parity automata take 'prio:' lines, not 'acc:'")
            has_acc = True
            designated += _parse_sets(number, value)
        elif key == "prio":
            parts = value.split()
            if len(parts) != 2:
                raise _error(number, "expected 'prio: q p'")
            priority[_int(number, parts[0])] = _int(number, parts[1])
        elif key not in ("alphabet", "tracks", "states", "initial"):
            raise _error(number, f"unknown key {key!r}")
    if has_acc and priority:
        raise _error(init_number, "give either 'acc:' or 'prio:' lines, not both")
    common: Dict[str, Any] = dict(
        alphabet=alphabet,
        num_states=num_states,
        initial=_int(init_number, init_text),
        transitions=tuple(dict.fromkeys(transitions)),
    )
    if priority or header == "parity":
        missing = [q for q in range(num_states) if q not in priority]
        if missing:
            raise _error(init_number, f"no priority given for state {missing[0]}")
        common["priority"] = tuple(priority[q] for q in range(num_states))
    else:
        common["designated"] = frozenset(designated)
    try:
        if header == "parity":
            return ParityTreeAutomaton(**common)
        return MullerTreeAutomaton(**common)
    except InputError as e:
        raise InputError(f"invalid automaton: {e.message}")


def dump_rtree(t: RegularTree) -> str:
    lines = ["rtree", f"root: {t.root}"]
    lines += [
        f"node: {n} {format_letter(t.labels[n])} {t.left[n]} {t.right[n]}" for n in range(t.size)
    ]
    return "\n".join(lines) + "\n"


def parse_rtree(text: str) -> RegularTree:
    """Parse the `rtree` format; node ids must be 0 .. n-1 in any order."""
    fields = _fields(text, "rtree")
    root_number, root_text = _single(fields, "root")
    rows: Dict[int, Tuple[Letter, int, int]] = {}
    for number, key, value in fields:
        if key == "node":
            parts = value.split()
            if len(parts) != 4:
                raise _error(number, "expected 'node: id label left right'")
            node = _int(number, parts[0])
            if node in rows:
                raise _error(number, f"node {node} defined twice")
            rows[node] = (_letter(number, parts[1]), _int(number, parts[2]), _int(number, parts[3]))
        elif key != "root":
            raise _error(number, f"unknown key {key!r}")
    if sorted(rows) != list(range(len(rows))):
        raise InputError("node ids must be 0 .. n-1")
    try:
        return RegularTree.from_rows([rows[n] for n in range(len(rows))], root=_int(root_number, root_text))
    except InputError as e:
        raise InputError(f"invalid regular tree: {e.message}")


def dump_lasso(w: LassoWord) -> str:
    return f"lasso\n{w}\n"


def parse_lasso(text: str) -> LassoWord:
    """Parse a lasso document, or a bare `stem|loop` line."""
    lines = _lines(text)
    if lines and lines[0][1] == "lasso":
        lines = lines[1:]
    if len(lines) != 1:
        raise _error(lines[1][0] if len(lines) > 1 else 1, "expected exactly one 'stem|loop' line")
    number, line = lines[0]
    try:
        return LassoWord.parse(line)
    except OmegaError as e:
        raise _error(number, e.message)


def _definition_line(key: str, d: Definition) -> str:
    return f"{key} {' '.join(d.params)} := {d.formula}"


def dump_interpretation(i: Interpretation) -> str:
    lines = ["interpretation", f"name: {i.name}", f"dimension: {i.dimension}"]
    lines.append(_definition_line("domain:", i.domain))
    lines.append(_definition_line("equality:", i.equality))
    lines += [_definition_line(f"relation: {name}", d) for name, d in sorted(i.relations.items())]
    lines += [f"function: {name} {arity}" for name, arity in sorted(i.functions.items())]
    lines += [f"constant: {symbol} {relation}" for symbol, relation in sorted(i.constants.items())]
    return "\n".join(lines) + "\n"


def _definition(number: int, text: str) -> Definition:
    if ":=" not in text:
        raise _error(number, "expected 'params := formula'")
    params, body = text.split(":=", 1)
    try:
        return Definition(params=tuple(params.split()), formula=parse_formula(body.strip()))
    except InputError as e:
        raise _error(number, e.message)


def parse_interpretation(text: str) -> Interpretation:
    """Parse the `interpretation` format.

    Relation lines read ``relation: name params := formula``, function lines
    ``function: name arity`` and constant lines ``constant: symbol relation``.

    Raises:
        InputError: With the offending line number
    """
    fields = _fields(text, "interpretation")
    _, name = _single(fields, "name")
    dim_number, dim_text = _single(fields, "dimension")
    domain_number, domain_text = _single(fields, "domain")
    equality_number, equality_text = _single(fields, "equality")
    dimension = _int(dim_number, dim_text)
    if dimension < 1:
        raise _error(dim_number, f"dimension must be positive, got {dimension}")
    relations: Dict[str, Definition] = {}
    functions: Dict[str, int] = {}
    constants: Dict[str, str] = {}
    for number, key, value in fields:
        if key == "relation":
            parts = value.split(None, 1)
            if len(parts) != 2:
                raise _error(number, "expected 'relation: name params := formula'")
            relation = parts[0]
            if relation in relations:
                raise _error(number, f"relation {relation} defined twice")
            relations[relation] = _definition(number, parts[1])
        elif key in ("function", "constant"):
            parts = value.split()
            if len(parts) != 2:
                raise _error(number, f"expected '{key}: name value'")
            if key == "function":
                functions[parts[0]] = _int(number, parts[1])
            else:
                constants[parts[0]] = parts[1]
        elif key not in ("name", "dimension", "domain", "equality"):
            raise _error(number, f"unknown key {key!r}")
    try:
        return Interpretation(
            name=name,
            dimension=dimension,
            domain=_definition(domain_number, domain_text),
            equality=_definition(equality_number, equality_text),
            relations=relations,
            functions=functions,
            constants=constants,
        )
    except InputError as e:
        if e.message.startswith("line "):
            raise
        raise InputError(f"invalid interpretation: {e.message}")


def dumps(document: Document) -> str:
    if isinstance(document, BuchiAutomaton):
        return dump_buchi(document)
    if isinstance(document, (MullerTreeAutomaton, ParityTreeAutomaton)):
        return dump_tree_automaton(document)
    if isinstance(document, RegularTree):
        return dump_rtree(document)
    if isinstance(document, LassoWord):
        return dump_lasso(document)
    if isinstance(document, Interpretation):
        return dump_interpretation(document)
    raise InputError(f"cannot serialize {type(document).__name__}")


def loads(text: str) -> Document:
    """Parse any document, dispatching on its header line."""
    lines = _lines(text)
    if not lines:
        raise _error(1, "empty document")
    header = lines[0][1]
    if header == "buchi":
        return parse_buchi(text)
    if header in ("muller", "parity"):
        return parse_tree_automaton(text)
    if header == "rtree":
        return parse_rtree(text)
    if header == "interpretation":
        return parse_interpretation(text)
    if header == "lasso" or "|" in header:
        return parse_lasso(text)
    raise _error(lines[0][0], f"unknown header {header!r}, expected one of {', '.join(HEADERS)}")


def load(path: Union[str, Path]) -> Document:
    path = Path(path)
    if not path.is_file():
        raise InputError(f"no such file: {path}")
    try:
        return loads(path.read_text(encoding="utf-8"))
    except InputError as e:
        raise InputError(f"{path}: {e.message}", e.details)


def save(document: Document, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(document), encoding="utf-8")
    return path
