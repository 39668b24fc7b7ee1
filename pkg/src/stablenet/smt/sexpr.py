"""Minimal S-expression reader for solver output."""
from __future__ import annotations

import re

_TOKEN = re.compile(r'\s*(?:(\()|(\))|("(?:[^"]|"")*")|(\|[^|]*\|)|([^\s()";|]+)|(;[^\n]*))')


class SexprError(ValueError):
    pass


def tokenize(text: str):
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                return
            raise SexprError(f"cannot tokenize near {text[pos:pos + 30]!r}")
        pos = m.end()
        lpar, rpar, string, quoted, atom, _comment = m.groups()
        if lpar:
            yield "("
        elif rpar:
            yield ")"
        elif string is not None:
            yield string
        elif quoted is not None:
            yield quoted[1:-1]
        elif atom is not None:
            yield atom


def parse_all(text: str) -> list:
    """Parse every top-level expression in *text*; lists become Python lists."""
    stack: list[list] = [[]]
    for tok in tokenize(text):
        if tok == "(":
            stack.append([])
        elif tok == ")":
            if len(stack) == 1:
                raise SexprError("unbalanced ')'")
            done = stack.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(tok)
    if len(stack) != 1:
        raise SexprError("unbalanced '('")
    return stack[0]


def to_text(e) -> str:
    if isinstance(e, list):
        return "(" + " ".join(to_text(x) for x in e) + ")"
    return e


def atom_value(e):
    """Decode a literal: bool, int, bitvector (as int) or ``(- n)``."""
    if isinstance(e, list):
        if len(e) == 2 and e[0] == "-":
            return -atom_value(e[1])
        if len(e) == 3 and e[0] == "_" and e[1].startswith("bv"):
            return int(e[1][2:])
        raise SexprError(f"not a literal: {to_text(e)}")
    if e == "true":
        return True
    if e == "false":
        return False
    if e.startswith("#b"):
        return int(e[2:], 2)
    if e.startswith("#x"):
        return int(e[2:], 16)
    try:
        return int(e)
    except ValueError:
        raise SexprError(f"not a literal: {e}") from None
