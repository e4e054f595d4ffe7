import itertools
from functools import lru_cache
from typing import Any, Dict, FrozenSet, Hashable, Iterable, List, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.utils.error_handling import InputError

Letter = Hashable


def format_letter(letter: Letter) -> str:
    """Render a letter in the text formats: atoms as-is, tuples as (a,b)."""
    if isinstance(letter, tuple):
        return "(" + ",".join(format_letter(part) for part in letter) + ")"
    return str(letter)


def parse_letter(text: str) -> Letter:
    """Inverse of format_letter; digit-only atoms become ints."""
    text = text.strip()
    if not text:
        raise InputError("empty letter")
    value, rest = _parse_letter_at(text, 0)
    if rest != len(text):
        raise InputError(f"trailing characters in letter: {text!r}")
    return value


def _parse_letter_at(text: str, pos: int) -> Tuple[Letter, int]:
    if text[pos] == "(":
        parts: List[Letter] = []
        pos += 1
        while True:
            part, pos = _parse_letter_at(text, pos)
            parts.append(part)
            if pos >= len(text):
                raise InputError(f"unbalanced letter: {text!r}")
            if text[pos] == ",":
                pos += 1
                continue
            if text[pos] == ")":
                return tuple(parts), pos + 1
            raise InputError(f"unexpected {text[pos]!r} in letter {text!r}")
    end = pos
    while end < len(text) and text[end] not in ",()":
        end += 1
    atom = text[pos:end].strip()
    if not atom:
        raise InputError(f"empty component in letter {text!r}")
    return (int(atom) if atom.lstrip("-").isdigit() else atom), end


class Alphabet(BaseModel):
    """A product of finite track alphabets.

    An alphabet of arity 1 has plain letters; an alphabet of arity n > 1 has
    n-tuples as letters, enumerated in the lexicographic order of the tracks.
    """
    model_config = ConfigDict(frozen=True)

    tracks: Tuple[Tuple[Any, ...], ...] = Field(..., description="Letters of each track, in order")

    @model_validator(mode="after")
    def _check_tracks(self) -> "Alphabet":
        if not self.tracks:
            raise InputError("an alphabet needs at least one track")
        for track in self.tracks:
            if not track:
                raise InputError("alphabet tracks must be non-empty")
            if len(set(track)) != len(track):
                raise InputError(f"duplicate letters in track {track!r}")
        return self

    @classmethod
    def of(cls, letters: Iterable[Letter]) -> "Alphabet":
        return cls(tracks=(tuple(letters),))

    @classmethod
    def product(cls, *alphabets: "Alphabet") -> "Alphabet":
        tracks: Tuple[Tuple[Any, ...], ...] = ()
        for alphabet in alphabets:
            tracks += alphabet.tracks
        return cls(tracks=tracks)

    @classmethod
    def power(cls, base: "Alphabet", n: int) -> "Alphabet":
        if n < 1:
            raise InputError("alphabet power needs n >= 1")
        return cls.product(*([base] * n))

    @property
    def arity(self) -> int:
        return len(self.tracks)

    @property
    def size(self) -> int:
        size = 1
        for track in self.tracks:
            size *= len(track)
        return size

    @property
    def letters(self) -> Tuple[Letter, ...]:
        return _letters(self.tracks)

    @property
    def letter_set(self) -> FrozenSet[Letter]:
        return _letter_set(self.tracks)

    @property
    def letter_index(self) -> Dict[Letter, int]:
        return _letter_index(self.tracks)

    def __contains__(self, letter: Letter) -> bool:
        return letter in self.letter_set

    def track(self, i: int) -> "Alphabet":
        self._check_track(i)
        return Alphabet(tracks=(self.tracks[i],))

    def split(self, letter: Letter) -> Tuple[Letter, ...]:
        """Components of a letter, one per track."""
        return (letter,) if self.arity == 1 else tuple(letter)

    def join(self, components: Sequence[Letter]) -> Letter:
        """Letter from its per-track components."""
        if len(components) != self.arity:
            raise InputError(f"expected {self.arity} components, got {len(components)}")
        return components[0] if self.arity == 1 else tuple(components)

    def drop_track(self, i: int) -> "Alphabet":
        self._check_track(i)
        if self.arity < 2:
            raise InputError("cannot drop the only track of an alphabet")
        return Alphabet(tracks=self.tracks[:i] + self.tracks[i + 1:])

    def insert_track(self, i: int, track: "Alphabet") -> "Alphabet":
        if not 0 <= i <= self.arity:
            raise InputError(f"track position {i} out of range for arity {self.arity}")
        return Alphabet(tracks=self.tracks[:i] + track.tracks + self.tracks[i:])

    def permute(self, order: Sequence[int]) -> "Alphabet":
        """Alphabet whose track j is track order[j] of this one."""
        if sorted(order) != list(range(self.arity)):
            raise InputError(f"{list(order)} is not a permutation of the tracks")
        return Alphabet(tracks=tuple(self.tracks[i] for i in order))

    def is_base_power(self) -> bool:
        return all(track == self.tracks[0] for track in self.tracks)

    def _check_track(self, i: int) -> None:
        if not 0 <= i < self.arity:
            raise InputError(f"track {i} out of range for arity {self.arity}")

    def __str__(self) -> str:
        return ", ".join(format_letter(letter) for letter in self.letters)


BINARY = Alphabet.of((0, 1))


@lru_cache(maxsize=512)
def _letters(tracks: Tuple[Tuple[Any, ...], ...]) -> Tuple[Letter, ...]:
    if len(tracks) == 1:
        return tracks[0]
    return tuple(itertools.product(*tracks))


@lru_cache(maxsize=512)
def _letter_set(tracks: Tuple[Tuple[Any, ...], ...]) -> FrozenSet[Letter]:
    return frozenset(_letters(tracks))


@lru_cache(maxsize=512)
def _letter_index(tracks: Tuple[Tuple[Any, ...], ...]) -> Dict[Letter, int]:
    return {letter: i for i, letter in enumerate(_letters(tracks))}
