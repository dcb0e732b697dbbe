"""Recursive-descent parser for algebra expressions.

Grammar::

    expr   := term (("+" | "-") term)*
    term   := factor ("*" factor)*
    factor := "-" factor | INT | "(" expr ")" | gen
    gen    := "p" set | "p{" set "}" | "q" set | "s{" word "," set "}" | "S{" word "," set "}"
    set    := "[" vertex* "]"

``S`` is the starred generator.  Integers act as scalars and may only
multiply elements (a bare nonzero integer has no meaning without a unit).
"""

from __future__ import annotations

import re
from typing import List, Tuple, Union

from core.dynamical_system import parse_word
from core.errors import GbdsError, ParseError
from core.skew_algebra import AlgebraElement, SystemAlgebra

Value = Union[int, AlgebraElement]

_TOKEN = re.compile(r"\s*(?:(\d+)|(\[[^\]]*\])|([psSq])|([-+*(){},]))")


def _tokenize(text: str) -> List[Tuple[str, str]]:
    tokens: List[Tuple[str, str]] = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        match = _TOKEN.match(text, pos)
        if match is None:
            # words inside s{...} are read separately
            tokens.append(("char", text[pos]))
            pos += 1
            continue
        number, members, gen, punct = match.groups()
        if number is not None:
            tokens.append(("int", number))
        elif members is not None:
            tokens.append(("set", members))
        elif gen is not None:
            tokens.append(("gen", gen))
        else:
            tokens.append(("punct", punct))
        pos = match.end()
    return tokens


class _Parser:
    def __init__(self, algebra: SystemAlgebra, text: str):
        self.algebra = algebra
        self.system = algebra.system
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def error(self, reason: str) -> ParseError:
        return ParseError("expr", f"{reason} (token {self.pos} of {self.text!r})")

    def peek(self) -> Tuple[str, str]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else ("end", "")

    def take(self, kind: str, value: str = None) -> str:
        token = self.peek()
        if token[0] != kind or (value is not None and token[1] != value):
            raise self.error(f"expected {value or kind}, found {token[1] or 'end'}")
        self.pos += 1
        return token[1]

    def as_element(self, value: Value) -> AlgebraElement:
        if isinstance(value, AlgebraElement):
            return value
        if value == 0:
            return self.algebra.zero()
        raise self.error("a scalar needs an element to act on")

    # grammar -----------------------------------------------------------

    def expr(self) -> Value:
        value = self.term()
        while self.peek() in (("punct", "+"), ("punct", "-")):
            op = self.take("punct")
            right = self.as_element(self.term())
            left = self.as_element(value)
            value = left + right if op == "+" else left - right
        return value

    def term(self) -> Value:
        value = self.factor()
        while self.peek() == ("punct", "*"):
            self.take("punct", "*")
            value = value * self.factor()
        return value

    def factor(self) -> Value:
        kind, text = self.peek()
        if (kind, text) == ("punct", "-"):
            self.take("punct", "-")
            inner = self.factor()
            return -inner
        if kind == "int":
            self.take("int")
            return int(text)
        if (kind, text) == ("punct", "("):
            self.take("punct", "(")
            value = self.expr()
            self.take("punct", ")")
            return value
        if kind == "gen":
            return self.generator()
        raise self.error(f"unexpected {text or 'end'}")

    def member(self, text: str) -> int:
        try:
            return self.system.algebra.member(text[1:-1].split())
        except GbdsError as exc:
            raise self.error(str(exc)) from exc

    def word(self) -> str:
        chars = []
        while self.peek() != ("punct", ","):
            kind, text = self.peek()
            if kind == "end":
                raise self.error("unterminated word")
            chars.append(text)
            self.pos += 1
        return "".join(chars)

    def generator(self) -> AlgebraElement:
        gen = self.take("gen")
        if gen in ("p", "q"):
            braced = self.peek() == ("punct", "{")
            if braced:
                self.take("punct", "{")
            A = self.member(self.take("set"))
            if braced:
                self.take("punct", "}")
            return self.algebra.inject_p(A) if gen == "p" else self.algebra.q_element(A)
        self.take("punct", "{")
        word = parse_word(self.word(), self.system.alphabet)
        self.take("punct", ",")
        A = self.member(self.take("set"))
        self.take("punct", "}")
        return self.algebra.inject_s_word(word, A, starred=gen == "S")


def parse_expression(algebra: SystemAlgebra, text: str) -> AlgebraElement:
    parser = _Parser(algebra, text)
    value = parser.expr()
    if parser.peek()[0] != "end":
        raise parser.error(f"trailing {parser.peek()[1]}")
    return parser.as_element(value)


__all__ = ["parse_expression"]
