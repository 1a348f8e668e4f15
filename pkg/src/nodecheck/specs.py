"""Spec requests: the flag-reset template and a small CTL parser.

Grammar (binding loosest to tightest): ``->`` (right associative), ``|``,
``&``, then prefix operators ``!``, ``AG``, ``AF``, ``AX``, ``EG``, ``EF``,
``EX`` and the bracketed ``E [ f U g ]``; atoms are ``name = value``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Union

from .errors import CtlParseError
from .ir import (
    CtlAF,
    CtlAG,
    CtlAX,
    CtlAnd,
    CtlAtom,
    CtlEF,
    CtlEG,
    CtlEU,
    CtlEX,
    CtlFormula,
    CtlImplies,
    CtlNot,
    CtlOr,
)


@dataclass(frozen=True)
class FlagReset:
    """Template: whenever ``var`` takes ``set_value``, it must eventually
    take ``reset_value`` again."""

    var: str
    set_value: str
    reset_value: str

    def expand(self) -> CtlFormula:
        return CtlAG(
            CtlImplies(
                CtlAtom(self.var, self.set_value),
                CtlAF(CtlAtom(self.var, self.reset_value)),
            )
        )


SpecRequest = Union[FlagReset, CtlFormula]


def expand_spec(req: SpecRequest) -> CtlFormula:
    return req.expand() if isinstance(req, FlagReset) else req


_TOKEN = re.compile(r"\s*(->|[()\[\]=!&|]|[A-Za-z_][A-Za-z0-9_]*)")
_UNARY = {"AG": CtlAG, "AF": CtlAF, "AX": CtlAX, "EG": CtlEG, "EF": CtlEF, "EX": CtlEX}
_KEYWORDS = set(_UNARY) | {"E", "U"}


def _tokenize(text: str) -> list[str]:
    tokens, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise CtlParseError(
                    f"unexpected character {text[pos:].strip()[0]!r} in formula"
                )
            break
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens: list[str], text: str):
        self.tokens = tokens
        self.pos = 0
        self.text = text

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None:
            raise CtlParseError(f"unexpected end of formula: {self.text!r}")
        if expected is not None and tok != expected:
            raise CtlParseError(f"expected {expected!r}, found {tok!r}")
        self.pos += 1
        return tok

    def formula(self) -> CtlFormula:
        left = self.disjunction()
        if self.peek() == "->":
            self.take()
            return CtlImplies(left, self.formula())
        return left

    def disjunction(self) -> CtlFormula:
        left = self.conjunction()
        while self.peek() == "|":
            self.take()
            left = CtlOr(left, self.conjunction())
        return left

    def conjunction(self) -> CtlFormula:
        left = self.unary()
        while self.peek() == "&":
            self.take()
            left = CtlAnd(left, self.unary())
        return left

    def unary(self) -> CtlFormula:
        tok = self.peek()
        if tok == "!":
            self.take()
            return CtlNot(self.unary())
        if tok in _UNARY:
            self.take()
            return _UNARY[tok](self.unary())
        if tok == "E":
            self.take()
            self.take("[")
            left = self.formula()
            self.take("U")
            right = self.formula()
            self.take("]")
            return CtlEU(left, right)
        return self.primary()

    def primary(self) -> CtlFormula:
        tok = self.take()
        if tok == "(":
            inner = self.formula()
            self.take(")")
            return inner
        if not re.match(r"[A-Za-z_][A-Za-z0-9_]*\Z", tok) or tok in _KEYWORDS:
            raise CtlParseError(f"expected atom or '(', found {tok!r}")
        self.take("=")
        value = self.take()
        if not re.match(r"[A-Za-z_][A-Za-z0-9_]*\Z", value):
            raise CtlParseError(f"expected value after '=', found {value!r}")
        return CtlAtom(tok, value)


def parse_ctl(text: str) -> CtlFormula:
    parser = _Parser(_tokenize(text), text)
    f = parser.formula()
    if parser.peek() is not None:
        raise CtlParseError(f"trailing input after formula: {parser.peek()!r}")
    return f


def load_spec_requests(text: str) -> list[SpecRequest]:
    """Load a spec-request document: flag-reset templates and raw CTL strings.

    Document shape::

        {"specs": [{"flag_reset": {"var": ..., "set": ..., "reset": ...}},
                   {"ctl": "AG (AF sw = on)"}]}
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CtlParseError(
            f"syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("specs"), list):
        raise CtlParseError("spec document must be {'specs': [...]}")
    out: list[SpecRequest] = []
    for i, entry in enumerate(doc["specs"]):
        if not isinstance(entry, dict):
            raise CtlParseError(f"spec #{i} must be an object")
        if "flag_reset" in entry:
            fr = entry["flag_reset"]
            try:
                out.append(
                    FlagReset(str(fr["var"]), str(fr["set"]), str(fr["reset"]))
                )
            except (KeyError, TypeError) as exc:
                raise CtlParseError(
                    f"spec #{i}: flag_reset needs 'var', 'set', 'reset'"
                ) from exc
        elif "ctl" in entry:
            out.append(parse_ctl(str(entry["ctl"])))
        else:
            raise CtlParseError(f"spec #{i}: need 'flag_reset' or 'ctl'")
    return out


def load_spec_requests_file(path: str) -> list[SpecRequest]:
    with open(path, encoding="utf-8") as f:
        return load_spec_requests(f.read())
