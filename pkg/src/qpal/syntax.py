"""Concrete ASCII syntax: tokenizer, recursive-descent parser and printer.

Grammar (loosest to tightest)::

    imp   ::= or ["->" imp]
    or    ::= and ("|" and)*
    and   ::= unary ("&" unary)*
    unary ::= "~" unary | "K" id unary | "M" id unary
            | "[" imp "]" unary | "<" imp ">" unary
            | "box" unary | "dia" unary
            | "[{" ids "}]" unary | "<{" ids "}>" unary
            | "[<{" ids "}>]" unary | "<[{" ids "}]>" unary
            | "(" imp ")" | "true" | "false" | id
"""

from __future__ import annotations

import re
from typing import List, NamedTuple

from .formula import (
    And,
    Announce,
    ArbBox,
    ArbDia,
    Atom,
    Bot,
    CoalBox,
    CoalDia,
    DiaAnnounce,
    Formula,
    GroupBox,
    GroupDia,
    Imp,
    Know,
    MaybeKnow,
    Not,
    Or,
    Top,
)


class ParseError(ValueError):
    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")


class Token(NamedTuple):
    kind: str
    value: str
    pos: int


# Longest first: "[<{" must win over "[" followed by "<{".
_PUNCT = [
    "[<{", "<[{", "}>]", "}]>",
    "[{", "<{", "}]", "}>", "->",
    "[", "]", "<", ">", "(", ")", "~", "&", "|", ",",
]
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_KEYWORDS = {"true", "false", "K", "M", "box", "dia"}


def tokenize(text: str) -> List[Token]:
    tokens = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
            continue
        m = _IDENT.match(text, i)
        if m:
            word = m.group()
            tokens.append(Token("kw" if word in _KEYWORDS else "id", word, i))
            i = m.end()
            continue
        for p in _PUNCT:
            if text.startswith(p, i):
                tokens.append(Token("op", p, i))
                i += len(p)
                break
        else:
            raise ParseError(f"unknown token {c!r}", i, text)
    tokens.append(Token("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, message: str) -> ParseError:
        tok = self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.value)
        return ParseError(f"{message}, found {found}", tok.pos, self.text)

    def accept(self, value: str) -> bool:
        if self.tok.kind in ("op", "kw") and self.tok.value == value:
            self.i += 1
            return True
        return False

    def expect(self, value: str) -> None:
        if not self.accept(value):
            raise self.error(f"expected {value!r}")

    def ident(self) -> str:
        if self.tok.kind != "id":
            raise self.error("expected identifier")
        value = self.tok.value
        self.i += 1
        return value

    def idlist(self, close: str) -> frozenset:
        ids: List[str] = []
        if not (self.tok.kind == "op" and self.tok.value == close):
            ids.append(self.ident())
            while self.accept(","):
                ids.append(self.ident())
        if len(set(ids)) != len(ids):
            raise self.error("duplicate agent in group")
        self.expect(close)
        return frozenset(ids)

    def parse(self) -> Formula:
        f = self.imp()
        if self.tok.kind != "eof":
            raise self.error("unexpected trailing input")
        return f

    def imp(self) -> Formula:
        left = self.disj()
        if self.accept("->"):
            return Imp(left, self.imp())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.accept("|"):
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.accept("&"):
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.tok
        if tok.kind == "id":
            self.i += 1
            return Atom(tok.value)
        if tok.kind == "eof":
            raise self.error("missing operand")
        self.i += 1
        v = tok.value
        if v == "true":
            return Top()
        if v == "false":
            return Bot()
        if v == "~":
            return Not(self.unary())
        if v in ("K", "M"):
            agent = self.ident()
            return (Know if v == "K" else MaybeKnow)(agent, self.unary())
        if v == "box":
            return ArbBox(self.unary())
        if v == "dia":
            return ArbDia(self.unary())
        if v == "(":
            f = self.imp()
            self.expect(")")
            return f
        if v == "[":
            ann = self.imp()
            self.expect("]")
            return Announce(ann, self.unary())
        if v == "<":
            ann = self.imp()
            self.expect(">")
            return DiaAnnounce(ann, self.unary())
        if v == "[{":
            return GroupBox(self.idlist("}]"), self.unary())
        if v == "<{":
            return GroupDia(self.idlist("}>"), self.unary())
        if v == "[<{":
            return CoalBox(self.idlist("}>]"), self.unary())
        if v == "<[{":
            return CoalDia(self.idlist("}]>"), self.unary())
        self.i -= 1
        raise self.error("unexpected token")


def parse(text: str) -> Formula:
    """Parse ASCII text into a formula.  Raises :class:`ParseError`."""
    return _Parser(text).parse()


_IMP, _OR, _AND, _UNARY = 1, 2, 3, 4


def _group(g) -> str:
    return "{" + ",".join(sorted(g)) + "}"


def _render(f: Formula):
    if isinstance(f, Atom):
        return f.name, _UNARY
    if isinstance(f, Top):
        return "true", _UNARY
    if isinstance(f, Bot):
        return "false", _UNARY
    if isinstance(f, And):
        return f"{_wrap(f.left, _AND)} & {_wrap(f.right, _AND + 1)}", _AND
    if isinstance(f, Or):
        return f"{_wrap(f.left, _OR)} | {_wrap(f.right, _OR + 1)}", _OR
    if isinstance(f, Imp):
        return f"{_wrap(f.left, _IMP + 1)} -> {_wrap(f.right, _IMP)}", _IMP
    if isinstance(f, Not):
        return "~" + _wrap(f.body, _UNARY), _UNARY
    if isinstance(f, Know):
        return f"K {f.agent} {_wrap(f.body, _UNARY)}", _UNARY
    if isinstance(f, MaybeKnow):
        return f"M {f.agent} {_wrap(f.body, _UNARY)}", _UNARY
    if isinstance(f, ArbBox):
        return "box " + _wrap(f.body, _UNARY), _UNARY
    if isinstance(f, ArbDia):
        return "dia " + _wrap(f.body, _UNARY), _UNARY
    if isinstance(f, Announce):
        inner = render(f.announcement)
        if inner.startswith("<{"):  # "[<{" would lex as a coalition box
            inner = f"({inner})"
        return f"[{inner}]{_wrap(f.body, _UNARY)}", _UNARY
    if isinstance(f, DiaAnnounce):
        inner = render(f.announcement)
        if inner.startswith("[{"):  # "<[{" would lex as a coalition diamond
            inner = f"({inner})"
        return f"<{inner}>{_wrap(f.body, _UNARY)}", _UNARY
    if isinstance(f, GroupBox):
        return f"[{_group(f.group)}]{_wrap(f.body, _UNARY)}", _UNARY
    if isinstance(f, GroupDia):
        return f"<{_group(f.group)}>{_wrap(f.body, _UNARY)}", _UNARY
    if isinstance(f, CoalBox):
        return f"[<{_group(f.group)}>]{_wrap(f.body, _UNARY)}", _UNARY
    if isinstance(f, CoalDia):
        return f"<[{_group(f.group)}]>{_wrap(f.body, _UNARY)}", _UNARY
    raise TypeError(f"not a formula: {f!r}")


def _wrap(f: Formula, level: int) -> str:
    s, prec = _render(f)
    return f"({s})" if prec < level else s


def render(f: Formula) -> str:
    """Print with the fewest parentheses that still re-parse to ``f``."""
    return _render(f)[0]
