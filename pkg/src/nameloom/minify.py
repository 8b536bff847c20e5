"""Built-in scope-aware alpha-renamer used to manufacture evaluation inputs.

Every local variable and formal parameter is renamed to a short opaque name
(a, b, ..., z, aa, ...) in a seeded-random order, without changing program
behavior: globals and properties are untouched, captures are impossible by
construction, and bindings tainted by `with`/`eval` are left alone. The
ground-truth map records, per function, the (minifiedName, originalName)
pairs in first-appearance order.

Whitespace compaction is separate and off by default; it re-emits the exact
token lexemes with minimal separators.
"""

from __future__ import annotations

import random

from .errors import ParseError
from .extraction import SourceAnalysis, analyze_source
from .jsparse.tokenizer import KEYWORDS, Tokenizer
from .rename import Renamer
from .scopes import Binding


# reserved words plus contextual ones the grammar treats specially
_UNUSABLE = frozenset(KEYWORDS) | {"of", "as", "get", "set", "async", "await"}


def short_names():
    """a..z, aa, ab, ... skipping reserved words."""
    alphabet = "abcdefghijklmnopqrstuvwxyz"
    length = 1
    while True:
        def emit(prefix: str, remaining: int):
            if remaining == 0:
                yield prefix
                return
            for ch in alphabet:
                yield from emit(prefix + ch, remaining - 1)
        for name in emit("", length):
            if name not in _UNUSABLE:
                yield name
        length += 1


def minify_targets(analysis: SourceAnalysis) -> list[Binding]:
    """Bindings the minifier renames: record variables of every function,
    in (function, appearance) order, taint-frozen ones excluded."""
    seen: set[int] = set()
    out: list[Binding] = []
    for fn in analysis.functions:
        for var in fn.variables:
            binding = var.binding
            if id(binding) in seen:
                continue
            seen.add(id(binding))
            if analysis.scope_info.is_frozen(binding):
                continue
            out.append(binding)
    return out


def alpha_minify(source: str, seed: int = 0, path: str = "<memory>",
                 compact: bool = False) -> tuple[str, dict]:
    """Minify `source`; returns (minified text, ground-truth map).

    Raises ParseError on unparseable input. The ground truth lists, per
    function ordinal, the renamed variables as [minifiedName, originalName]
    pairs; tainted (never-renamed) variables are reported separately.
    """
    analysis = analyze_source(source, path)
    targets = minify_targets(analysis)
    renamer = Renamer(analysis)

    order = list(targets)
    random.Random(seed).shuffle(order)
    pending = {id(b) for b in order}
    for binding in order:
        pending.discard(id(binding))
        for name in short_names():
            if renamer.is_safe(binding, name, ignore=pending):
                renamer.rename(binding, name)
                break

    minified = renamer.apply()
    functions = []
    for fn in analysis.functions:
        pairs = []
        skipped = []
        for var in fn.variables:
            new = renamer.final.get(id(var.binding))
            if new is None:
                skipped.append(var.name)
            else:
                pairs.append([new, var.name])
        entry = {
            "ordinal": fn.record.ordinal,
            "name": fn.record.name,
            "variables": pairs,
        }
        if skipped:
            entry["skipped"] = skipped
        functions.append(entry)
    truth = {"seed": seed, "functions": functions}
    if compact:
        minified = compact_whitespace(minified)
    return minified, truth


_IDENTISH = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789$_")


def compact_whitespace(source: str) -> str:
    """Strip comments and collapse whitespace to the minimum that keeps the
    token stream identical."""
    lexer = Tokenizer(source)
    out: list[str] = []
    prev_last = ""
    while True:
        tok = lexer.next_token()
        if tok.type == "eof":
            break
        text = source[tok.start:tok.end]
        first = text[0]
        if out and _needs_space(prev_last, first):
            out.append(" ")
        out.append(text)
        prev_last = text[-1]
    return "".join(out)


def _needs_space(last: str, first: str) -> bool:
    if last in _IDENTISH and first in _IDENTISH:
        return True
    # keep +/- sequences and comment-forming pairs apart
    if last == "+" and first == "+":
        return True
    if last == "-" and first == "-":
        return True
    if last == "/" and first in "/*":
        return True
    return False


def reminify_isomorphic(original_minified: str, recovered: str,
                        seed: int = 0) -> bool:
    """Check that re-minifying `recovered` gives back `original_minified`'s
    structure (AST equality up to identifier labels)."""
    from .jsparse import ast_equal, parse
    try:
        re_min, _ = alpha_minify(recovered, seed=seed)
    except ParseError:
        return False
    return ast_equal(parse(re_min), parse(original_minified),
                     ignore_identifier_names=True)
