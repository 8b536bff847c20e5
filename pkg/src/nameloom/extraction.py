"""Turn ECMAScript source into per-function variable relation graphs.

A variable's usage context is a star of edges from the variable to the
non-minified names it touches (the pivots): fields it reads, methods it
calls, callees it is passed to, and callees/fields whose value it receives.
Pivots are never local variables; an identifier callee that resolves to a
binding inside some function is rejected, so extraction is stable under
alpha-renaming of locals.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import IntEnum

from . import scopes
from .jsparse import parse
from .jsparse.estree import parent_map, walk

STOPWORDS = frozenset(
    ["a", "an", "the", "of", "to", "in", "on", "for", "and", "or", "at", "by"]
)

_FUNCTION_TYPES = ("FunctionDeclaration", "FunctionExpression",
                   "ArrowFunctionExpression")

_CAMEL = re.compile(r"[A-Z]+(?=[A-Z][a-z])|[A-Z]?[a-z]+|[A-Z]+")


class RelType(IntEnum):
    """The four relation kinds; values double as the wire encoding."""

    FIELD_ACCESS = 0
    METHOD_CALL = 1
    ARGUMENT = 2
    ASSIGNMENT = 3

    @property
    def label(self) -> str:
        return ("fieldAccess", "methodCall", "argument", "assignment")[self]

    @classmethod
    def from_label(cls, label: str) -> "RelType":
        return {
            "fieldAccess": cls.FIELD_ACCESS, "methodCall": cls.METHOD_CALL,
            "argument": cls.ARGUMENT, "assignment": cls.ASSIGNMENT,
        }[label]


@dataclass(frozen=True)
class RelationEdge:
    pivot: str
    rel: RelType

    def __post_init__(self):
        if not self.pivot or any(c.isspace() for c in self.pivot):
            raise ValueError(f"invalid pivot {self.pivot!r}")

    def __repr__(self):
        return f"({self.pivot}, {self.rel.label})"


@dataclass(frozen=True)
class RelationGraph:
    """Star graph of one variable's relation edges (deduplicated)."""

    variable: str
    edges: frozenset[RelationEdge]

    def __len__(self):
        return len(self.edges)


@dataclass
class FunctionRecord:
    ordinal: int                 # index within the file, parse order
    name: str                    # "" when anonymous and underivable
    name_tokens: tuple[str, ...]
    path: str
    span: tuple[int, int]
    variables: list[tuple[str, RelationGraph]] = field(default_factory=list)

    def variable_names(self) -> list[str]:
        return [name for name, _ in self.variables]


@dataclass
class VariableInfo:
    """A record variable plus its binding, for renaming workflows."""

    name: str
    binding: scopes.Binding
    graph: RelationGraph


@dataclass
class FunctionInfo:
    node: dict
    record: FunctionRecord
    variables: list[VariableInfo]


@dataclass
class SourceAnalysis:
    source: str
    path: str
    ast: dict
    scope_info: scopes.ScopeInfo
    parents: dict[int, dict]
    functions: list[FunctionInfo]

    @property
    def records(self) -> list[FunctionRecord]:
        return [fn.record for fn in self.functions]


def tokenize_name(name: str) -> list[str]:
    """Lowercased key tokens of an identifier, stopwords removed.

    Splits on underscores, `$`, digits and any other non-letter, then on
    camelCase boundaries (uppercase runs stay one token: JSONTree -> json,
    tree). Order preserved; duplicates allowed.
    """
    tokens = []
    for run in re.split(r"[^a-zA-Z]+", name):
        for part in _CAMEL.findall(run):
            low = part.lower()
            if low not in STOPWORDS:
                tokens.append(low)
    return tokens


def derive_function_name(fn_node: dict, parents: dict[int, dict]) -> str:
    """Declared name, else the assignment/property target's last identifier."""
    ident = fn_node.get("id")
    if ident is not None:
        return ident["name"]
    parent = parents.get(id(fn_node))
    if parent is None:
        return ""
    ptype = parent["type"]
    if ptype == "VariableDeclarator" and parent.get("init") is fn_node:
        if parent["id"]["type"] == "Identifier":
            return parent["id"]["name"]
    elif ptype == "AssignmentExpression" and parent.get("right") is fn_node:
        return _target_name(parent["left"])
    elif ptype == "Property" and parent.get("value") is fn_node:
        return _key_name(parent)
    elif ptype == "MethodDefinition" and parent.get("value") is fn_node:
        return _key_name(parent)
    return ""


def _target_name(target: dict) -> str:
    if target["type"] == "Identifier":
        return target["name"]
    if target["type"] == "MemberExpression":
        return _member_pivot(target) or ""
    return ""


def _key_name(prop: dict) -> str:
    key = prop["key"]
    if prop.get("computed"):
        return ""
    if key["type"] == "Identifier":
        return key["name"]
    if key["type"] == "Literal" and isinstance(key["value"], str):
        return key["value"]
    return ""


def _member_pivot(member: dict) -> str | None:
    """Pivot carried by a member access: the final property name."""
    prop = member["property"]
    if not member["computed"]:
        return prop["name"]
    if prop["type"] == "Literal" and isinstance(prop["value"], str):
        value = prop["value"]
        if value and not any(c.isspace() for c in value):
            return value
    return None


class _EdgeCollector:
    def __init__(self, info: scopes.ScopeInfo, parents: dict[int, dict]):
        self.info = info
        self.parents = parents

    def _callee_pivot(self, callee: dict) -> str | None:
        if callee["type"] == "MemberExpression":
            return _member_pivot(callee)
        if callee["type"] == "Identifier":
            binding = self.info.binding_of.get(id(callee))
            if binding is None or binding.scope.function_scope().kind == "global":
                return callee["name"]   # pivots are never locals
        return None

    def _rhs_pivots(self, expr: dict) -> list[str]:
        type_ = expr["type"]
        if type_ == "MemberExpression":
            pivot = _member_pivot(expr)
            return [pivot] if pivot else []
        if type_ in ("CallExpression", "NewExpression"):
            pivot = self._callee_pivot(expr["callee"])
            return [pivot] if pivot else []
        if type_ == "LogicalExpression":
            return self._rhs_pivots(expr["left"]) + self._rhs_pivots(expr["right"])
        if type_ == "ConditionalExpression":
            return (self._rhs_pivots(expr["consequent"])
                    + self._rhs_pivots(expr["alternate"]))
        if type_ == "SequenceExpression":
            return self._rhs_pivots(expr["expressions"][-1])
        if type_ == "AssignmentExpression":
            return self._rhs_pivots(expr["right"])
        if type_ == "AwaitExpression":
            return self._rhs_pivots(expr["argument"])
        return []

    def edges_for(self, binding: scopes.Binding) -> frozenset[RelationEdge]:
        edges: set[RelationEdge] = set()
        for ref in binding.nodes:
            parent = self.parents.get(id(ref))
            if parent is None:
                continue
            ptype = parent["type"]
            if ptype == "MemberExpression" and parent["object"] is ref:
                pivot = _member_pivot(parent)
                if pivot:
                    grand = self.parents.get(id(parent))
                    is_callee = (grand is not None
                                 and grand["type"] in ("CallExpression",
                                                       "NewExpression")
                                 and grand["callee"] is parent)
                    edges.add(RelationEdge(pivot, RelType.FIELD_ACCESS))
                    if is_callee:
                        # calling v.m() implies accessing member m as well
                        edges.add(RelationEdge(pivot, RelType.METHOD_CALL))
            elif ptype in ("CallExpression", "NewExpression") \
                    and any(arg is ref for arg in parent["arguments"]):
                pivot = self._callee_pivot(parent["callee"])
                if pivot:
                    edges.add(RelationEdge(pivot, RelType.ARGUMENT))
            if ptype == "VariableDeclarator" and parent["id"] is ref \
                    and parent.get("init") is not None:
                for pivot in self._rhs_pivots(parent["init"]):
                    edges.add(RelationEdge(pivot, RelType.ASSIGNMENT))
            elif ptype == "AssignmentExpression" and parent["left"] is ref \
                    and parent["operator"] == "=":
                for pivot in self._rhs_pivots(parent["right"]):
                    edges.add(RelationEdge(pivot, RelType.ASSIGNMENT))
        return frozenset(edges)


def analyze_source(source: str, path: str = "<memory>") -> SourceAnalysis:
    """Parse and fully analyze one file: scopes, records, relation graphs."""
    ast = parse(source)
    info = scopes.analyze(ast)
    parents = parent_map(ast)
    collector = _EdgeCollector(info, parents)
    functions = []
    ordinal = 0
    for node in walk(ast):
        if node["type"] not in _FUNCTION_TYPES:
            continue
        name = derive_function_name(node, parents)
        variables = []
        for binding in info.local_bindings(node):
            graph = RelationGraph(binding.name, collector.edges_for(binding))
            variables.append(VariableInfo(binding.name, binding, graph))
        record = FunctionRecord(
            ordinal=ordinal,
            name=name,
            name_tokens=tuple(tokenize_name(name)),
            path=path,
            span=(node["start"], node["end"]),
            variables=[(v.name, v.graph) for v in variables],
        )
        functions.append(FunctionInfo(node=node, record=record,
                                      variables=variables))
        ordinal += 1
    return SourceAnalysis(source=source, path=path, ast=ast, scope_info=info,
                          parents=parents, functions=functions)


def parse_functions(source: str, path: str = "<memory>") -> list[FunctionRecord]:
    """One FunctionRecord per function (nested included), parse order."""
    return analyze_source(source, path).records


def extract_relations(fn_node: dict, variable: str,
                      analysis: SourceAnalysis | None = None) -> RelationGraph:
    """Relation graph of `variable` declared in `fn_node`'s scope.

    When `analysis` is omitted, `fn_node` must be a Program or function node
    that can be analyzed standalone.
    """
    if analysis is None:
        if fn_node["type"] == "Program":
            root = fn_node
        elif fn_node["type"] == "FunctionDeclaration":
            root = {"type": "Program", "start": fn_node["start"],
                    "end": fn_node["end"], "sourceType": "script",
                    "body": [fn_node]}
        else:
            root = {"type": "Program", "start": fn_node["start"],
                    "end": fn_node["end"], "sourceType": "script",
                    "body": [{"type": "ExpressionStatement",
                              "start": fn_node["start"], "end": fn_node["end"],
                              "expression": fn_node}]}
        info = scopes.analyze(root)
        parents = parent_map(root)
    else:
        info = analysis.scope_info
        parents = analysis.parents
    scope = info.scope_of_node.get(id(fn_node)) or info.root
    binding = scope.lookup(variable)
    if binding is None:
        raise KeyError(f"variable {variable!r} not found in scope")
    collector = _EdgeCollector(info, parents)
    return RelationGraph(variable, collector.edges_for(binding))
