"""Concrete syntax for formulas.

Prenex quantifiers, then implication (right associative), disjunction,
conjunction, binary temporal operators (right associative), unary
operators, atoms.  Temporal operators take an optional interval such
as [2,5) or (0,inf).  Operator names and `exists`, `forall`, `TOP`,
`BOT`, `inf` are reserved and cannot name propositions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .formulas import (
    EXISTS, FORALL, UNTIMED, And, Atom, Bottom, DualHist, DualSince,
    DualUntil, Formula, Hist, HyperFormula, Implies, Interval, Not, Or,
    Quantifier, Since, Top, Until, eventually, globally, next_, subformulas,
    weak_eventually, weak_globally, weak_until,
)


class ParseError(ValueError):
    pass


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<comment>\#[^\n]*)
      | (?P<arrow>->)
      | (?P<number>\d+)
      | (?P<name>[A-Za-z_][A-Za-z0-9_]*[!?]?)
      | (?P<sym>[()\[\],.&|~])
    """,
    re.VERBOSE,
)

_RESERVED = {
    "exists", "forall", "TOP", "BOT", "inf",
    "U", "S", "X", "F", "G", "H", "dU", "dS", "dH", "wF", "wG", "wU",
}

_BINARY_OPS = {"U", "S", "dU", "dS", "wU"}
_UNARY_OPS = {"X", "F", "G", "H", "dH", "wF", "wG"}


def _tokenize(text: str, source: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise ParseError(f"{source}:{line}:{col}: unexpected character {text[pos]!r}")
        kind = match.lastgroup or ""
        chunk = match.group()
        if kind not in ("ws", "comment"):
            tokens.append(_Token(kind, chunk, line, col))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            col = len(chunk) - chunk.rindex("\n")
        else:
            col += len(chunk)
        pos = match.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token], source: str) -> None:
        self.tokens = tokens
        self.index = 0
        self.source = source

    def peek(self, ahead: int = 0) -> _Token:
        return self.tokens[min(self.index + ahead, len(self.tokens) - 1)]

    def advance(self) -> _Token:
        token = self.tokens[self.index]
        if token.kind != "eof":
            self.index += 1
        return token

    def error(self, token: _Token, message: str) -> ParseError:
        return ParseError(f"{self.source}:{token.line}:{token.col}: {message}")

    def expect(self, text: str, what: str) -> _Token:
        token = self.advance()
        if token.text != text:
            raise self.error(token, f"expected {what}, found {token.text or 'end of input'!r}")
        return token

    # prefix

    def parse_hyper(self) -> HyperFormula:
        prefix: list[Quantifier] = []
        while self.peek().text in (EXISTS, FORALL):
            kind = self.advance().text
            name = self.advance()
            if name.kind != "name" or name.text in _RESERVED:
                raise self.error(name, "expected a trace variable name")
            self.expect(".", "`.` after the quantified variable")
            prefix.append(Quantifier(kind, name.text))
        matrix = self.parse_implies()
        trailing = self.peek()
        if trailing.kind != "eof":
            raise self.error(trailing, f"unexpected {trailing.text!r} after formula")
        try:
            phi = HyperFormula(tuple(prefix), matrix)
        except ValueError as exc:
            raise ParseError(f"{self.source}: {exc}") from exc
        if prefix:
            for sub in _bare_atoms(matrix):
                raise ParseError(
                    f"{self.source}: atom {sub.prop!r} must be trace-indexed "
                    "under quantifiers")
        return phi

    # operators by precedence

    def parse_implies(self) -> Formula:
        left = self.parse_or()
        if self.peek().text == "->":
            self.advance()
            return Implies(left, self.parse_implies())
        return left

    def parse_or(self) -> Formula:
        left = self.parse_and()
        if self.peek().text == "|":
            self.advance()
            return Or(left, self.parse_or())
        return left

    def parse_and(self) -> Formula:
        left = self.parse_temporal()
        if self.peek().text == "&":
            self.advance()
            return And(left, self.parse_and())
        return left

    def parse_temporal(self) -> Formula:
        left = self.parse_unary()
        token = self.peek()
        if token.text in _BINARY_OPS:
            self.advance()
            interval = self.parse_interval_opt()
            right = self.parse_temporal()
            try:
                if token.text == "U":
                    return Until(left, right, interval)
                if token.text == "S":
                    return Since(left, right, interval)
                if token.text == "dU":
                    return DualUntil(left, right, interval)
                if token.text == "dS":
                    return DualSince(left, right, interval)
                return weak_until(left, right, interval)
            except ValueError as exc:
                raise self.error(token, str(exc)) from exc
        return left

    def parse_unary(self) -> Formula:
        token = self.peek()
        if token.text == "~":
            self.advance()
            return Not(self.parse_unary())
        if token.text in _UNARY_OPS:
            self.advance()
            interval = self.parse_interval_opt()
            arg = self.parse_unary()
            try:
                builder = {
                    "X": next_, "F": eventually, "G": globally,
                    "wF": weak_eventually, "wG": weak_globally,
                    "H": Hist, "dH": DualHist,
                }[token.text]
                return builder(arg, interval)
            except ValueError as exc:
                raise self.error(token, str(exc)) from exc
        return self.parse_atom()

    def parse_interval_opt(self) -> Interval:
        token = self.peek()
        if token.text == "[" or (token.text == "(" and self.peek(1).kind == "number"):
            return self.parse_interval()
        return UNTIMED

    def parse_interval(self) -> Interval:
        opener = self.advance()
        lower_closed = opener.text == "["
        lo = self.advance()
        if lo.kind != "number":
            raise self.error(lo, "expected interval lower bound")
        self.expect(",", "`,` in interval")
        hi = self.advance()
        upper: Optional[int]
        if hi.text == "inf":
            upper = None
        elif hi.kind == "number":
            upper = int(hi.text)
        else:
            raise self.error(hi, "expected interval upper bound or inf")
        closer = self.advance()
        if closer.text not in ("]", ")"):
            raise self.error(closer, "expected `]` or `)` closing the interval")
        try:
            return Interval(int(lo.text), upper, lower_closed, closer.text == "]")
        except ValueError as exc:
            raise self.error(opener, str(exc)) from exc

    def parse_atom(self) -> Formula:
        token = self.advance()
        if token.text == "(":
            inner = self.parse_implies()
            self.expect(")", "`)`")
            return inner
        if token.text in (EXISTS, FORALL):
            raise self.error(token, "quantifiers are allowed only in the prefix")
        if token.text in ("TOP", "BOT"):
            var = self.parse_var_index_opt()
            return Top(var) if token.text == "TOP" else Bottom(var)
        if token.kind == "name" and token.text not in _RESERVED:
            var = self.parse_var_index_opt()
            return Atom(token.text, var)
        raise self.error(token, f"expected an atom, found {token.text or 'end of input'!r}")

    def parse_var_index_opt(self) -> Optional[str]:
        if self.peek().text != "[":
            return None
        self.advance()
        name = self.advance()
        if name.kind != "name" or name.text in _RESERVED:
            raise self.error(name, "expected a trace variable inside `[ ]`")
        self.expect("]", "`]`")
        return name.text


def _bare_atoms(psi: Formula):
    for sub in subformulas(psi):
        if isinstance(sub, Atom) and sub.var is None:
            yield sub


def parse_formula(text: str, source: str = "<formula>") -> HyperFormula:
    return _Parser(_tokenize(text, source), source).parse_hyper()


def parse_matrix(text: str, source: str = "<formula>") -> Formula:
    """Parse a quantifier-free formula; trace variables may appear free."""
    parser = _Parser(_tokenize(text, source), source)
    head = parser.peek()
    if head.text in (EXISTS, FORALL):
        raise parser.error(head, "expected a quantifier-free formula")
    matrix = parser.parse_implies()
    trailing = parser.peek()
    if trailing.kind != "eof":
        raise parser.error(trailing, f"unexpected {trailing.text!r} after formula")
    return matrix
