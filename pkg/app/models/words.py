import math
from typing import Any, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.models.alphabet import Alphabet, Letter, format_letter, parse_letter
from app.utils.error_handling import InputError


class LassoWord(BaseModel):
    """An ultimately periodic omega-word stem . loop^omega."""
    model_config = ConfigDict(frozen=True)

    stem: Tuple[Any, ...] = Field(default=(), description="Finite prefix, possibly empty")
    loop: Tuple[Any, ...] = Field(..., description="Repeated part, at least one letter")

    @model_validator(mode="after")
    def _check_loop(self) -> "LassoWord":
        if not self.loop:
            raise InputError("a lasso needs a non-empty loop")
        return self

    @classmethod
    def of(cls, stem: Sequence[Letter], loop: Sequence[Letter]) -> "LassoWord":
        return cls(stem=tuple(stem), loop=tuple(loop))

    def letter(self, i: int) -> Letter:
        if i < len(self.stem):
            return self.stem[i]
        return self.loop[(i - len(self.stem)) % len(self.loop)]

    def letters(self) -> Tuple[Letter, ...]:
        return self.stem + self.loop

    def check_alphabet(self, alphabet: Alphabet) -> None:
        for letter in self.stem + self.loop:
            if letter not in alphabet:
                raise InputError(f"letter {format_letter(letter)} is not in the alphabet {alphabet}")

    def normalized(self) -> "LassoWord":
        """Primitive loop and shortest stem denoting the same word."""
        loop = self.loop
        n = len(loop)
        for p in range(1, n + 1):
            if n % p == 0 and loop[:p] * (n // p) == loop:
                loop = loop[:p]
                break
        stem = self.stem
        while stem and stem[-1] == loop[-1]:
            stem = stem[:-1]
            loop = (loop[-1],) + loop[:-1]
        return LassoWord(stem=stem, loop=loop)

    def same_word(self, other: "LassoWord") -> bool:
        return self.normalized() == other.normalized()

    @classmethod
    def zip(cls, words: Sequence["LassoWord"]) -> "LassoWord":
        """Convolution of same-length omega-words into one word over tuples."""
        if not words:
            raise InputError("nothing to zip")
        stem_length = max(len(w.stem) for w in words)
        loop_length = 1
        for w in words:
            loop_length = loop_length * len(w.loop) // math.gcd(loop_length, len(w.loop))
        stem = tuple(tuple(w.letter(i) for w in words) for i in range(stem_length))
        loop = tuple(
            tuple(w.letter(i) for w in words)
            for i in range(stem_length, stem_length + loop_length)
        )
        return cls(stem=stem, loop=loop)

    def unzip(self, arity: int) -> Tuple["LassoWord", ...]:
        return tuple(
            LassoWord(
                stem=tuple(letter[i] for letter in self.stem),
                loop=tuple(letter[i] for letter in self.loop),
            )
            for i in range(arity)
        )

    def map(self, fn) -> "LassoWord":
        return LassoWord(stem=tuple(fn(a) for a in self.stem), loop=tuple(fn(a) for a in self.loop))

    def __str__(self) -> str:
        stem = " ".join(format_letter(a) for a in self.stem)
        loop = " ".join(format_letter(a) for a in self.loop)
        return f"{stem}|{loop}"

    @classmethod
    def parse(cls, text: str) -> "LassoWord":
        """Parse the `stem|loop` format, letters separated by spaces."""
        if text.count("|") != 1:
            raise InputError(f"lasso must contain exactly one '|': {text!r}")
        stem_text, loop_text = text.split("|")
        stem = tuple(parse_letter(t) for t in stem_text.split())
        loop = tuple(parse_letter(t) for t in loop_text.split())
        return cls(stem=stem, loop=loop)
