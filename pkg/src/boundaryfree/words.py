"""Freely reduced words over named generators.

A word is a tuple of letters ``(name, exp)`` with ``exp`` in ``{+1, -1}``,
kept freely reduced (no adjacent ``x * x^-1``).  Powers are stored expanded,
so ``a^3`` is three letters.  This module also owns the text syntax used
everywhere else: ``*`` composes left to right, ``^n`` is an integer power,
``^w`` with a word argument is conjugation ``w^-1 * g * w``, and ``1`` is
the identity.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping

Letter = tuple[str, int]
Word = tuple[Letter, ...]

EMPTY: Word = ()


def reduce_word(letters: Iterable[Letter]) -> Word:
    out: list[Letter] = []
    for sym, exp in letters:
        if out and out[-1][0] == sym and out[-1][1] == -exp:
            out.pop()
        else:
            out.append((sym, exp))
    return tuple(out)


def mul(*words: Word) -> Word:
    merged: list[Letter] = []
    for w in words:
        merged.extend(w)
    return reduce_word(merged)


def inv(word: Word) -> Word:
    return tuple((sym, -exp) for sym, exp in reversed(word))


def power(word: Word, n: int) -> Word:
    if n == 0:
        return EMPTY
    base = word if n > 0 else inv(word)
    return mul(*([base] * abs(n)))


def conjugate(word: Word, by: Word) -> Word:
    """``word^by`` in the usual convention: by^-1 * word * by."""
    return mul(inv(by), word, by)


def commutator(u: Word, v: Word) -> Word:
    return mul(inv(u), inv(v), u, v)


def substitute(word: Word, images: Mapping[str, Word]) -> Word:
    """Apply the endomorphism sending each generator to its image."""
    out: list[Letter] = []
    for sym, exp in word:
        img = images[sym]
        out.extend(img if exp > 0 else inv(img))
    return reduce_word(out)


def generators_of(word: Word) -> set[str]:
    return {sym for sym, _ in word}


_TOKEN = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*|-?\d+|[*^()])")


class WordSyntaxError(ValueError):
    pass


def _tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise WordSyntaxError(f"cannot tokenize {text[pos:]!r}")
            break
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens: list[str]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise WordSyntaxError("unexpected end of word")
        self.pos += 1
        return tok

    def parse_word(self) -> Word:
        factors = [self.parse_factor()]
        while self.peek() == "*":
            self.take()
            factors.append(self.parse_factor())
        return mul(*factors)

    def parse_factor(self) -> Word:
        base = self.parse_atom()
        while self.peek() == "^":
            self.take()
            tok = self.peek()
            if tok is None:
                raise WordSyntaxError("dangling '^'")
            if re.fullmatch(r"-?\d+", tok):
                self.take()
                base = power(base, int(tok))
            else:
                base = conjugate(base, self.parse_atom())
        return base

    def parse_atom(self) -> Word:
        tok = self.take()
        if tok == "(":
            inner = self.parse_word()
            if self.take() != ")":
                raise WordSyntaxError("unbalanced parentheses")
            return inner
        if tok == "1":
            return EMPTY
        if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok):
            return ((tok, 1),)
        raise WordSyntaxError(f"unexpected token {tok!r}")


def parse_word(text: str) -> Word:
    """Parse the CLI word syntax, e.g. ``a*b^-1*(a*c)^2`` or ``t^x``."""
    if "{" in text:
        raise WordSyntaxError("word contains an uninstantiated family exponent")
    parser = _Parser(_tokenize(text))
    word = parser.parse_word()
    if parser.peek() is not None:
        raise WordSyntaxError(f"trailing input at {parser.tokens[parser.pos:]!r}")
    return word


def is_family(text: str) -> bool:
    return "{i}" in text


def instantiate_family(text: str, i: int) -> Word:
    """Replace the family exponent marker ``{i}`` and parse."""
    return parse_word(text.replace("{i}", str(i)))


def word_text(word: Word) -> str:
    """Inverse of parse_word, with runs collapsed into powers."""
    if not word:
        return "1"
    runs: list[tuple[str, int]] = []
    for sym, exp in word:
        if runs and runs[-1][0] == sym and (runs[-1][1] > 0) == (exp > 0):
            runs[-1] = (sym, runs[-1][1] + exp)
        else:
            runs.append((sym, exp))
    return "*".join(sym if k == 1 else f"{sym}^{k}" for sym, k in runs)
