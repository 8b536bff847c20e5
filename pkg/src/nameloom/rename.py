"""Scope-aware identifier renaming with capture avoidance.

A rename of binding B to name N is vetoed when it would change program
behavior:

* another binding in B's scope already ends up named N;
* a reference inside B's scope subtree that (post-rename) reads name N and
  currently resolves outside B's scope would start resolving to B;
* one of B's own occurrences would fall under an inner scope that declares N;
* B is tainted by `with`/direct `eval`, where nothing is provably safe.

Renames are applied as textual patches on the original source, so all
formatting survives. Shorthand object properties are expanded
(``{a}`` -> ``{a: newName}``) to keep the property key stable.
"""

from __future__ import annotations

from .extraction import SourceAnalysis
from .jsparse.tokenizer import KEYWORDS
from .scopes import Binding, Scope


def is_valid_identifier(name: str) -> bool:
    if not name or name in KEYWORDS:
        return False
    first = name[0]
    if not (first.isalpha() or first in "$_"):
        return False
    return all(c.isalnum() or c in "$_" for c in name[1:])


class Renamer:
    def __init__(self, analysis: SourceAnalysis):
        self.analysis = analysis
        self.info = analysis.scope_info
        self.final: dict[int, str] = {}       # id(binding) -> new name
        self.renamed: list[Binding] = []

    def final_name(self, binding: Binding) -> str:
        return self.final.get(id(binding), binding.name)

    def _declares(self, scope: Scope, name: str, skip: Binding,
                  ignore: set[int]) -> bool:
        for binding in scope.bindings.values():
            if binding is skip or id(binding) in ignore:
                continue
            if self.final_name(binding) == name:
                return True
        return False

    def _shadowed_between(self, start: Scope, stop: Scope, name: str,
                          skip: Binding, ignore: set[int]) -> bool:
        """True if some scope on [start..stop) declares `name`."""
        scope = start
        while scope is not None and scope is not stop:
            if self._declares(scope, name, skip, ignore):
                return True
            scope = scope.parent
        return False

    def is_safe(self, binding: Binding, new_name: str,
                ignore: set[int] | None = None) -> bool:
        if new_name == binding.name:
            return True
        if not is_valid_identifier(new_name):
            return False
        if self.info.is_frozen(binding):
            return False
        ignore = ignore or set()
        home = binding.scope
        if self._declares(home, new_name, binding, ignore):
            return False
        # would any reference in the subtree start resolving to the binding?
        for scope in home.iter_subtree():
            for orig_name, _node, resolved in scope.refs:
                if resolved is binding:
                    continue
                post = self.final_name(resolved) if resolved is not None else orig_name
                if post != new_name:
                    continue
                if not self._shadowed_between(scope, home, new_name,
                                              binding, ignore):
                    return False
        # would any of the binding's own occurrences get shadowed?
        node_scope = self.info.node_scope
        for node in binding.nodes:
            scope = node_scope.get(id(node))
            if scope is None:
                continue
            if self._shadowed_between(scope, home, new_name, binding, ignore):
                return False
        return True

    def rename(self, binding: Binding, new_name: str) -> None:
        self.final[id(binding)] = new_name
        self.renamed.append(binding)

    def apply(self) -> str:
        """Splice every occurrence of every renamed binding into the source."""
        source = self.analysis.source
        parents = self.analysis.parents
        edits: list[tuple[int, int, str]] = []
        for binding in self.renamed:
            new_name = self.final[id(binding)]
            if new_name == binding.name:
                continue
            for node in binding.nodes:
                text = new_name
                parent = parents.get(id(node))
                if parent is not None and parent.get("type") == "Property" \
                        and parent.get("shorthand") and parent.get("key") is node:
                    text = f"{binding.name}: {new_name}"
                elif parent is not None and parent.get("type") == "AssignmentPattern" \
                        and parent.get("left") is node:
                    grand = parents.get(id(parent))
                    if grand is not None and grand.get("type") == "Property" \
                            and grand.get("shorthand"):
                        text = f"{binding.name}: {new_name}"
                edits.append((node["start"], node["end"], text))
        edits.sort()
        for (s1, e1, _), (s2, _, _) in zip(edits, edits[1:]):
            assert e1 <= s2, "overlapping rename edits"
        out = []
        cursor = 0
        for start, end, text in edits:
            out.append(source[cursor:start])
            out.append(text)
            cursor = end
        out.append(source[cursor:])
        return "".join(out)
