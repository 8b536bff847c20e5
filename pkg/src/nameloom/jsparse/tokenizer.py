"""On-demand ECMAScript tokenizer.

Produces one token at a time so the parser can drive re-lexing where the
grammar demands it (template literal continuations). Regex literals vs.
division are disambiguated from the previous significant token, which is
correct for all realistic code but has two known blind spots:

* a regex literal directly after a control-flow `)` (``if (x) /re/...``)
  is lexed as division;
* a division directly after `}` (``x = {a: 1}/2``) is lexed as a regex.

Neither shape occurs in minifier output or ordinary hand-written code.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ParseError

KEYWORDS = frozenset(
    """break case catch class const continue debugger default delete do else
    enum export extends finally for function if import in instanceof new
    return super switch this throw try typeof var void while with yield
    let null true false""".split()
)

# Punctuators ordered longest-first for maximal-munch matching.
PUNCTUATORS = sorted(
    [
        ">>>=", "===", "!==", "**=", "<<=", ">>=", ">>>", "...", "&&=", "||=",
        "??=", "=>", "==", "!=", "<=", ">=", "&&", "||", "??", "?.", "++",
        "--", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>",
        "**", "(", ")", "[", "]", "{", "}", ";", ",", "<", ">", "+", "-",
        "*", "/", "%", "&", "|", "^", "!", "~", "?", ":", "=", ".", "@",
    ],
    key=len,
    reverse=True,
)

# After these, a `/` starts a division; everywhere else it starts a regex.
_DIVISION_PUNCT = frozenset({")", "]", "++", "--"})
_DIVISION_KEYWORDS = frozenset({"this", "super", "true", "false", "null"})

_ESCAPES = {
    "n": "\n", "t": "\t", "r": "\r", "b": "\b", "f": "\f", "v": "\v", "0": "\0",
}


@dataclass
class Token:
    type: str       # ident | keyword | punct | num | str | regex | template | eof
    value: object   # lexeme or decoded payload
    start: int
    end: int
    nl_before: bool

    def matches(self, type_: str, value=None) -> bool:
        return self.type == type_ and (value is None or self.value == value)


@dataclass
class TemplateChunk:
    """One quasi of a template literal plus how it terminated."""

    cooked: str
    raw: str
    is_tail: bool   # ended with ` (tail) rather than ${ (head/middle)


def _is_id_start(ch: str) -> bool:
    return ch.isalpha() or ch in "$_"


def _is_id_part(ch: str) -> bool:
    return ch.isalnum() or ch in "$_"


class Tokenizer:
    def __init__(self, source: str):
        self.source = source
        self.pos = 0
        self.prev: Token | None = None
        if source.startswith("#!"):
            nl = source.find("\n")
            self.pos = len(source) if nl < 0 else nl

    def clone(self) -> "Tokenizer":
        twin = Tokenizer.__new__(Tokenizer)
        twin.source = self.source
        twin.pos = self.pos
        twin.prev = self.prev
        return twin

    def error(self, message: str, offset: int | None = None) -> ParseError:
        offset = self.pos if offset is None else offset
        line = self.source.count("\n", 0, offset) + 1
        col = offset - (self.source.rfind("\n", 0, offset) + 1) + 1
        return ParseError(message, offset, line, col)

    def _skip_blanks(self) -> bool:
        """Advance past whitespace and comments; report newline crossings."""
        src, n = self.source, len(self.source)
        saw_nl = False
        while self.pos < n:
            ch = src[self.pos]
            if ch in " \t\r\f\v ﻿":
                self.pos += 1
            elif ch == "\n" or ch in "  ":
                saw_nl = True
                self.pos += 1
            elif ch == "/" and self.pos + 1 < n and src[self.pos + 1] == "/":
                end = src.find("\n", self.pos)
                self.pos = n if end < 0 else end
            elif ch == "/" and self.pos + 1 < n and src[self.pos + 1] == "*":
                end = src.find("*/", self.pos + 2)
                if end < 0:
                    raise self.error("unterminated block comment")
                if "\n" in src[self.pos:end]:
                    saw_nl = True
                self.pos = end + 2
            else:
                break
        return saw_nl

    def _regex_allowed(self) -> bool:
        prev = self.prev
        if prev is None:
            return True
        if prev.type in ("ident", "num", "str", "regex", "template"):
            return False
        if prev.type == "keyword":
            return prev.value not in _DIVISION_KEYWORDS
        return prev.value not in _DIVISION_PUNCT

    def next_token(self) -> Token:
        nl = self._skip_blanks()
        src, n = self.source, len(self.source)
        start = self.pos
        if start >= n:
            tok = Token("eof", None, n, n, nl)
            self.prev = tok
            return tok
        ch = src[start]

        if _is_id_start(ch):
            tok = self._read_identifier(start, nl)
        elif ch.isdigit() or (ch == "." and start + 1 < n and src[start + 1].isdigit()):
            tok = self._read_number(start, nl)
        elif ch in "'\"":
            tok = self._read_string(start, nl)
        elif ch == "`":
            chunk = self._read_template_chunk(start + 1)
            tok = Token("template", chunk, start, self.pos, nl)
        elif ch == "/" and self._regex_allowed():
            tok = self._read_regex(start, nl)
        else:
            tok = self._read_punct(start, nl)
        self.prev = tok
        return tok

    def continue_template(self, brace_offset: int) -> Token:
        """Re-lex from a `}` as the continuation of an open template."""
        self.pos = brace_offset
        chunk = self._read_template_chunk(brace_offset + 1)
        tok = Token("template", chunk, brace_offset, self.pos, False)
        self.prev = tok
        return tok

    def _read_identifier(self, start: int, nl: bool) -> Token:
        src, n = self.source, len(self.source)
        pos = start + 1
        while pos < n and _is_id_part(src[pos]):
            pos += 1
        word = src[start:pos]
        self.pos = pos
        kind = "keyword" if word in KEYWORDS else "ident"
        return Token(kind, word, start, pos, nl)

    def _read_number(self, start: int, nl: bool) -> Token:
        src, n = self.source, len(self.source)
        pos = start
        if src[pos] == "0" and pos + 1 < n and src[pos + 1] in "xXoObB":
            digits = {
                "x": "0123456789abcdefABCDEF", "o": "01234567", "b": "01",
            }[src[pos + 1].lower()]
            pos += 2
            first = pos
            while pos < n and (src[pos] in digits or src[pos] == "_"):
                pos += 1
            if pos == first:
                raise self.error("malformed numeric literal", start)
            raw = src[start:pos]
            value = int(raw.replace("_", ""), 0)
        else:
            while pos < n and (src[pos].isdigit() or src[pos] == "_"):
                pos += 1
            if pos < n and src[pos] == ".":
                pos += 1
                while pos < n and (src[pos].isdigit() or src[pos] == "_"):
                    pos += 1
            if pos < n and src[pos] in "eE":
                mark = pos
                pos += 1
                if pos < n and src[pos] in "+-":
                    pos += 1
                if pos >= n or not src[pos].isdigit():
                    pos = mark
                else:
                    while pos < n and src[pos].isdigit():
                        pos += 1
            raw = src[start:pos]
            value = float(raw.replace("_", ""))
            if value.is_integer() and "e" not in raw.lower() and "." not in raw:
                value = int(value)
        if pos < n and src[pos] == "n":   # BigInt suffix
            pos += 1
        if pos < n and _is_id_start(src[pos]):
            raise self.error("identifier starts immediately after number", pos)
        self.pos = pos
        return Token("num", value, start, pos, nl)

    def _read_string(self, start: int, nl: bool) -> Token:
        src, n = self.source, len(self.source)
        quote = src[start]
        pos = start + 1
        out = []
        while pos < n:
            ch = src[pos]
            if ch == quote:
                self.pos = pos + 1
                return Token("str", "".join(out), start, pos + 1, nl)
            if ch == "\n":
                raise self.error("unterminated string literal", start)
            if ch == "\\":
                pos, piece = self._read_escape(pos)
                out.append(piece)
            else:
                out.append(ch)
                pos += 1
        raise self.error("unterminated string literal", start)

    def _read_escape(self, pos: int) -> tuple[int, str]:
        """Decode one backslash escape starting at `pos`; return (new_pos, text)."""
        src, n = self.source, len(self.source)
        if pos + 1 >= n:
            raise self.error("dangling escape", pos)
        ch = src[pos + 1]
        if ch in _ESCAPES:
            return pos + 2, _ESCAPES[ch]
        if ch == "x" and pos + 3 < n:
            try:
                return pos + 4, chr(int(src[pos + 2:pos + 4], 16))
            except ValueError:
                raise self.error("bad \\x escape", pos) from None
        if ch == "u":
            if pos + 2 < n and src[pos + 2] == "{":
                close = src.find("}", pos + 3)
                if close < 0:
                    raise self.error("bad \\u{} escape", pos)
                try:
                    return close + 1, chr(int(src[pos + 3:close], 16))
                except ValueError:
                    raise self.error("bad \\u{} escape", pos) from None
            if pos + 5 < n:
                try:
                    return pos + 6, chr(int(src[pos + 2:pos + 6], 16))
                except ValueError:
                    raise self.error("bad \\u escape", pos) from None
            raise self.error("bad \\u escape", pos)
        if ch == "\n":      # line continuation
            return pos + 2, ""
        if ch == "\r":
            skip = 3 if pos + 2 < n and src[pos + 2] == "\n" else 2
            return pos + skip, ""
        return pos + 2, ch

    def _read_template_chunk(self, pos: int) -> TemplateChunk:
        src, n = self.source, len(self.source)
        raw_start = pos
        out = []
        while pos < n:
            ch = src[pos]
            if ch == "`":
                self.pos = pos + 1
                return TemplateChunk("".join(out), src[raw_start:pos], True)
            if ch == "$" and pos + 1 < n and src[pos + 1] == "{":
                self.pos = pos + 2
                return TemplateChunk("".join(out), src[raw_start:pos], False)
            if ch == "\\":
                pos, piece = self._read_escape(pos)
                out.append(piece)
            else:
                out.append(ch)
                pos += 1
        raise self.error("unterminated template literal", raw_start - 1)

    def _read_regex(self, start: int, nl: bool) -> Token:
        src, n = self.source, len(self.source)
        pos = start + 1
        in_class = False
        while pos < n:
            ch = src[pos]
            if ch == "\\":
                pos += 2
                continue
            if ch == "\n":
                break
            if in_class:
                if ch == "]":
                    in_class = False
            elif ch == "[":
                in_class = True
            elif ch == "/":
                pos += 1
                while pos < n and _is_id_part(src[pos]):
                    pos += 1
                self.pos = pos
                return Token("regex", src[start:pos], start, pos, nl)
            pos += 1
        raise self.error("unterminated regular expression", start)

    def _read_punct(self, start: int, nl: bool) -> Token:
        src = self.source
        for punct in PUNCTUATORS:
            if src.startswith(punct, start):
                # `?.3` is a ternary with a fractional operand, not chaining
                if punct == "?." and start + 2 < len(src) and src[start + 2].isdigit():
                    continue
                self.pos = start + len(punct)
                return Token("punct", punct, start, self.pos, nl)
        raise self.error(f"unexpected character {src[start]!r}", start)
