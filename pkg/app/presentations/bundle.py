"""Presentation bundles: a directory with `manifest.toml` and one file per automaton.

Example manifest::

    kind = "word"
    name = "B1"
    domain = "domain.aut"
    equality = "equality.aut"
    domain_universal = true

    [relations.subset]
    arity = 2
    file = "subset.aut"

    [complements]
    "=" = "complement-equality.aut"

    [functions]
    cap = 2

    [constants]
    "0" = "zero"
"""
import json
from pathlib import Path
from typing import Any, Dict, List, Union

import tomli

from app.automata.formats import load, save
from app.presentations.model import EQUALITY, Presentation, Relation
from app.utils.error_handling import InputError, PresentationError
from app.utils.helpers import ensure_directory, sanitize_filename
from app.utils.logger import get_logger

logger = get_logger(__name__)

MANIFEST = "manifest.toml"


def _quote(text: str) -> str:
    return json.dumps(text, ensure_ascii=False)


def _file_for(name: str) -> str:
    return ("equality" if name == EQUALITY else sanitize_filename(name)) + ".aut"


def save_presentation(p: Presentation, directory: Union[str, Path]) -> Path:
    """Write a presentation bundle and return the manifest path."""
    root = Path(ensure_directory(str(directory)))
    lines: List[str] = [
        f"kind = {_quote(p.kind)}",
        f"name = {_quote(p.name)}",
        'domain = "domain.aut"',
        'equality = "equality.aut"',
        f"domain_universal = {'true' if p.domain_universal else 'false'}",
    ]
    save(p.domain, root / "domain.aut")
    save(p.equality, root / "equality.aut")
    for name in sorted(p.relations):
        relation = p.relations[name]
        filename = "relation-" + _file_for(name)
        save(relation.automaton, root / filename)
        lines += ["", f"[relations.{_quote(name)}]", f"arity = {relation.arity}", f"file = {_quote(filename)}"]
    sections: Dict[str, Dict[str, Any]] = {
        "complements": {},
        "functions": dict(p.functions),
        "constants": {k: _quote(v) for k, v in p.constants.items()},
    }
    for name in sorted(p.complements):
        filename = "complement-" + _file_for(name)
        save(p.complements[name], root / filename)
        sections["complements"][name] = _quote(filename)
    for section, entries in sections.items():
        if entries:
            lines += ["", f"[{section}]"]
            lines += [f"{_quote(k)} = {v}" for k, v in sorted(entries.items())]
    manifest = root / MANIFEST
    manifest.write_text("\n".join(lines) + "\n", encoding="utf-8")
    logger.info(f"saved {p.describe()} to {root}")
    return manifest


def load_presentation(directory: Union[str, Path]) -> Presentation:
    """Read a presentation bundle.

    Raises:
        InputError: If the manifest or an automaton file is missing or malformed
        PresentationError: If the automata do not fit together
    """
    root = Path(directory)
    manifest = root / MANIFEST
    if not manifest.is_file():
        raise InputError(f"no {MANIFEST} in {root}")
    try:
        with open(manifest, "rb") as f:
            data = tomli.load(f)
    except tomli.TOMLDecodeError as e:
        raise InputError(f"{manifest}: {e}")
    try:
        domain = load(root / data["domain"])
        relations = {
            name: Relation(arity=entry["arity"], automaton=load(root / entry["file"]))
            for name, entry in data.get("relations", {}).items()
        }
        return Presentation(
            kind=data["kind"],
            name=data.get("name", root.name),
            base=domain.alphabet,
            domain=domain,
            equality=load(root / data["equality"]),
            relations=relations,
            complements={name: load(root / f) for name, f in data.get("complements", {}).items()},
            functions=data.get("functions", {}),
            constants=data.get("constants", {}),
            domain_universal=data.get("domain_universal", False),
        )
    except KeyError as e:
        raise PresentationError(f"{manifest}: missing key {e}")
