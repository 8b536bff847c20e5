"""Scope analysis over ESTree ASTs: bindings, references, rename safety.

Two passes over the tree share one traversal skeleton: the first registers
every binding in its scope (honoring var/function hoisting), the second
resolves every identifier reference through the scope chain. The result is
enough to answer the two questions the rest of the toolchain asks:

* which local variables does each function own (extraction), and
* is it safe to rename binding B to name N (minifier and recovery).

Simplifications that are deliberate: function declarations bind in the
nearest function scope even inside blocks, and a function body block does
not open an extra block scope. Scopes under `with` and scopes that can be
seen by a direct `eval` call are tainted; tainted bindings are never renamed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .jsparse import parse
from .jsparse.estree import is_node

_FUNCTION_TYPES = ("FunctionDeclaration", "FunctionExpression",
                   "ArrowFunctionExpression")


@dataclass
class Binding:
    name: str
    kind: str                 # var | let | const | param | function | class |
                              # catch | fn-name | import
    scope: "Scope"
    decl_nodes: list[dict] = field(default_factory=list)
    references: list[dict] = field(default_factory=list)
    tainted: bool = False    # some reference sits under a `with`

    @property
    def nodes(self) -> list[dict]:
        return self.decl_nodes + self.references

    @property
    def first_offset(self) -> int:
        return min(n["start"] for n in self.nodes)

    def __repr__(self):
        return f"Binding({self.name!r}, {self.kind}, refs={len(self.references)})"


@dataclass
class Scope:
    kind: str                 # global | function | block | catch | with | name
    node: dict
    parent: "Scope | None"
    is_function_scope: bool
    bindings: dict[str, Binding] = field(default_factory=dict)
    children: list["Scope"] = field(default_factory=list)
    refs: list[tuple[str, dict, "Binding | None"]] = field(default_factory=list)
    under_with: bool = False
    has_eval_below: bool = False

    def function_scope(self) -> "Scope":
        scope = self
        while not scope.is_function_scope:
            scope = scope.parent
        return scope

    def lookup(self, name: str) -> "Binding | None":
        scope = self
        while scope is not None:
            binding = scope.bindings.get(name)
            if binding is not None:
                return binding
            scope = scope.parent
        return None

    def iter_subtree(self):
        stack = [self]
        while stack:
            scope = stack.pop()
            yield scope
            stack.extend(scope.children)


class ScopeInfo:
    """Analysis result: scope tree plus per-identifier resolution."""

    def __init__(self, ast: dict):
        self.ast = ast
        self.root: Scope | None = None
        self.scope_of_node: dict[int, Scope] = {}
        self.binding_of: dict[int, Binding] = {}
        self.node_scope: dict[int, Scope] = {}
        self.global_refs: list[tuple[str, dict, Scope]] = []

    def function_scope_for(self, fn_node: dict) -> Scope:
        return self.scope_of_node[id(fn_node)]

    def local_bindings(self, fn_node: dict) -> list[Binding]:
        """Bindings owned by `fn_node` (params and var/let/const), ordered
        by first textual appearance."""
        root = self.function_scope_for(fn_node)
        out = []
        stack = [root]
        while stack:
            scope = stack.pop()
            for binding in scope.bindings.values():
                if binding.kind in ("var", "let", "const", "param"):
                    out.append(binding)
            for child in scope.children:
                if not child.is_function_scope and child.kind != "name":
                    stack.append(child)
        out.sort(key=lambda b: b.first_offset)
        return out

    def is_frozen(self, binding: Binding) -> bool:
        """True when renaming `binding` can never be proven safe."""
        return (binding.tainted or binding.scope.under_with
                or binding.scope.has_eval_below)


def analyze(ast: dict) -> ScopeInfo:
    info = ScopeInfo(ast)
    builder = _ScopeBuilder(info)
    builder.run()
    return info


def analyze_source(source: str) -> ScopeInfo:
    return analyze(parse(source))


def pattern_identifiers(pattern: dict) -> list[dict]:
    """Identifier nodes bound by a binding pattern (defaults excluded)."""
    out: list[dict] = []
    _collect_pattern(pattern, out)
    return out


def _collect_pattern(node: dict, out: list[dict]) -> None:
    type_ = node["type"]
    if type_ == "Identifier":
        out.append(node)
    elif type_ == "ArrayPattern":
        for el in node["elements"]:
            if el is not None:
                _collect_pattern(el, out)
    elif type_ == "ObjectPattern":
        for prop in node["properties"]:
            if prop["type"] == "RestElement":
                _collect_pattern(prop["argument"], out)
            else:
                _collect_pattern(prop["value"], out)
    elif type_ == "AssignmentPattern":
        _collect_pattern(node["left"], out)
    elif type_ == "RestElement":
        _collect_pattern(node["argument"], out)
    # MemberExpression targets bind nothing


def _pattern_expressions(node: dict) -> list[dict]:
    """Expression nodes evaluated inside a pattern: defaults, computed keys."""
    out: list[dict] = []

    def visit(n: dict) -> None:
        type_ = n["type"]
        if type_ == "ArrayPattern":
            for el in n["elements"]:
                if el is not None:
                    visit(el)
        elif type_ == "ObjectPattern":
            for prop in n["properties"]:
                if prop["type"] == "RestElement":
                    visit(prop["argument"])
                else:
                    if prop.get("computed"):
                        out.append(prop["key"])
                    visit(prop["value"])
        elif type_ == "AssignmentPattern":
            visit(n["left"])
            out.append(n["right"])
        elif type_ == "RestElement":
            visit(n["argument"])
        elif type_ == "MemberExpression":
            out.append(n)
    visit(node)
    return out


class _ScopeBuilder:
    def __init__(self, info: ScopeInfo):
        self.info = info
        self.declaring = True

    def run(self) -> None:
        ast = self.info.ast
        root = Scope("global", ast, None, is_function_scope=True)
        self.info.root = root
        self.info.scope_of_node[id(ast)] = root
        self.declaring = True
        for stmt in ast["body"]:
            self._stmt(stmt, root)
        self.declaring = False
        for stmt in ast["body"]:
            self._stmt(stmt, root)
        self._propagate_taint(root, under_with=False)

    def _propagate_taint(self, scope: Scope, under_with: bool) -> None:
        under_with = under_with or scope.kind == "with"
        scope.under_with = under_with
        if under_with:
            for _, _, binding in scope.refs:
                if binding is not None:
                    binding.tainted = True
        for child in scope.children:
            self._propagate_taint(child, under_with)
        scope.has_eval_below = scope.has_eval_below or any(
            c.has_eval_below for c in scope.children)

    # -- scope helpers -------------------------------------------------------

    def _child_scope(self, kind: str, node: dict, parent: Scope,
                     is_function: bool = False, key: object = None) -> Scope:
        memo = id(node) if key is None else (id(node), key)
        if self.declaring:
            scope = Scope(kind, node, parent, is_function_scope=is_function)
            parent.children.append(scope)
            self.info.scope_of_node[memo] = scope
            return scope
        return self.info.scope_of_node[memo]

    def _declare(self, ident: dict, kind: str, scope: Scope) -> None:
        if not self.declaring:
            return
        target = scope
        if kind in ("var", "function"):
            target = scope.function_scope()
        binding = target.bindings.get(ident["name"])
        if binding is None:
            binding = Binding(ident["name"], kind, target)
            target.bindings[ident["name"]] = binding
        binding.decl_nodes.append(ident)
        self.info.binding_of[id(ident)] = binding
        self.info.node_scope[id(ident)] = scope

    def _reference(self, ident: dict, scope: Scope) -> None:
        if self.declaring:
            return
        binding = scope.lookup(ident["name"])
        scope.refs.append((ident["name"], ident, binding))
        self.info.node_scope[id(ident)] = scope
        if binding is not None:
            binding.references.append(ident)
            self.info.binding_of[id(ident)] = binding
        else:
            self.info.global_refs.append((ident["name"], ident, scope))

    # -- statement traversal ---------------------------------------------------

    def _stmt(self, node: dict, scope: Scope) -> None:
        type_ = node["type"]
        method = getattr(self, f"_stmt_{type_}", None)
        if method is not None:
            method(node, scope)
            return
        # generic statements: visit expression-bearing fields
        for key in ("expression", "argument", "object", "test", "discriminant"):
            val = node.get(key)
            if is_node(val):
                self._expr(val, scope)
        for key in ("body", "consequent", "alternate", "block", "handler",
                    "finalizer", "cases"):
            val = node.get(key)
            if is_node(val):
                self._stmt(val, scope)
            elif isinstance(val, list):
                for item in val:
                    if is_node(item):
                        self._stmt(item, scope)

    def _stmt_BlockStatement(self, node: dict, scope: Scope) -> None:
        inner = self._child_scope("block", node, scope)
        for stmt in node["body"]:
            self._stmt(stmt, inner)

    def _stmt_VariableDeclaration(self, node: dict, scope: Scope) -> None:
        kind = node["kind"]
        for decl in node["declarations"]:
            for ident in pattern_identifiers(decl["id"]):
                self._declare(ident, kind, scope)
            for expr in _pattern_expressions(decl["id"]):
                self._expr(expr, scope)
            if decl["init"] is not None:
                self._expr(decl["init"], scope)

    def _stmt_FunctionDeclaration(self, node: dict, scope: Scope) -> None:
        if node["id"] is not None:
            self._declare(node["id"], "function", scope)
        self._function(node, scope)

    def _stmt_ClassDeclaration(self, node: dict, scope: Scope) -> None:
        if node["id"] is not None:
            self._declare(node["id"], "class", scope)
        self._class_tail(node, scope)

    def _stmt_ExpressionStatement(self, node: dict, scope: Scope) -> None:
        self._expr(node["expression"], scope)

    def _stmt_IfStatement(self, node: dict, scope: Scope) -> None:
        self._expr(node["test"], scope)
        self._stmt(node["consequent"], scope)
        if node["alternate"] is not None:
            self._stmt(node["alternate"], scope)

    def _stmt_ForStatement(self, node: dict, scope: Scope) -> None:
        inner = self._child_scope("block", node, scope)
        if node["init"] is not None:
            if node["init"]["type"] == "VariableDeclaration":
                self._stmt_VariableDeclaration(node["init"], inner)
            else:
                self._expr(node["init"], inner)
        if node["test"] is not None:
            self._expr(node["test"], inner)
        if node["update"] is not None:
            self._expr(node["update"], inner)
        self._stmt(node["body"], inner)

    def _for_in_of(self, node: dict, scope: Scope) -> None:
        inner = self._child_scope("block", node, scope)
        left = node["left"]
        if left["type"] == "VariableDeclaration":
            self._stmt_VariableDeclaration(left, inner)
        else:
            self._assign_target(left, inner)
        self._expr(node["right"], inner)
        self._stmt(node["body"], inner)

    _stmt_ForInStatement = _for_in_of
    _stmt_ForOfStatement = _for_in_of

    def _stmt_WhileStatement(self, node: dict, scope: Scope) -> None:
        self._expr(node["test"], scope)
        self._stmt(node["body"], scope)

    def _stmt_DoWhileStatement(self, node: dict, scope: Scope) -> None:
        self._stmt(node["body"], scope)
        self._expr(node["test"], scope)

    def _stmt_ReturnStatement(self, node: dict, scope: Scope) -> None:
        if node["argument"] is not None:
            self._expr(node["argument"], scope)

    def _stmt_ThrowStatement(self, node: dict, scope: Scope) -> None:
        self._expr(node["argument"], scope)

    def _stmt_LabeledStatement(self, node: dict, scope: Scope) -> None:
        self._stmt(node["body"], scope)

    def _stmt_BreakStatement(self, node: dict, scope: Scope) -> None:
        pass

    _stmt_ContinueStatement = _stmt_BreakStatement
    _stmt_EmptyStatement = _stmt_BreakStatement
    _stmt_DebuggerStatement = _stmt_BreakStatement

    def _stmt_TryStatement(self, node: dict, scope: Scope) -> None:
        self._stmt(node["block"], scope)
        if node["handler"] is not None:
            handler = node["handler"]
            catch = self._child_scope("catch", handler, scope)
            if handler["param"] is not None:
                for ident in pattern_identifiers(handler["param"]):
                    self._declare(ident, "catch", catch)
                for expr in _pattern_expressions(handler["param"]):
                    self._expr(expr, catch)
            self._stmt(handler["body"], catch)
        if node["finalizer"] is not None:
            self._stmt(node["finalizer"], scope)

    def _stmt_SwitchStatement(self, node: dict, scope: Scope) -> None:
        self._expr(node["discriminant"], scope)
        inner = self._child_scope("block", node, scope)
        for case in node["cases"]:
            if case["test"] is not None:
                self._expr(case["test"], inner)
            for stmt in case["consequent"]:
                self._stmt(stmt, inner)

    def _stmt_WithStatement(self, node: dict, scope: Scope) -> None:
        self._expr(node["object"], scope)
        inner = self._child_scope("with", node, scope)
        self._stmt(node["body"], inner)

    def _stmt_ImportDeclaration(self, node: dict, scope: Scope) -> None:
        for spec in node["specifiers"]:
            self._declare(spec["local"], "import", scope)

    def _stmt_ExportNamedDeclaration(self, node: dict, scope: Scope) -> None:
        if node.get("declaration") is not None:
            self._stmt(node["declaration"], scope)
        elif node.get("source") is None:
            for spec in node.get("specifiers", []):
                self._reference(spec["local"], scope)

    def _stmt_ExportDefaultDeclaration(self, node: dict, scope: Scope) -> None:
        decl = node["declaration"]
        if decl["type"] in ("FunctionDeclaration", "ClassDeclaration"):
            if decl["id"] is None:
                self._function(decl, scope) if decl["type"] == "FunctionDeclaration" \
                    else self._class_tail(decl, scope)
            else:
                self._stmt(decl, scope)
        else:
            self._expr(decl, scope)

    def _stmt_ExportAllDeclaration(self, node: dict, scope: Scope) -> None:
        pass

    # -- functions and classes ---------------------------------------------------

    def _function(self, node: dict, outer: Scope) -> None:
        scope = self._child_scope("function", node, outer, is_function=True)
        for param in node["params"]:
            for ident in pattern_identifiers(param):
                self._declare(ident, "param", scope)
            for expr in _pattern_expressions(param):
                self._expr(expr, scope)
        body = node["body"]
        if body["type"] == "BlockStatement":
            # the body block shares the function scope
            for stmt in body["body"]:
                self._stmt(stmt, scope)
        else:
            self._expr(body, scope)

    def _class_tail(self, node: dict, scope: Scope) -> None:
        if node["superClass"] is not None:
            self._expr(node["superClass"], scope)
        for member in node["body"]["body"]:
            if member.get("computed"):
                self._expr(member["key"], scope)
            if member["type"] == "MethodDefinition":
                self._expr(member["value"], scope)
            elif member.get("value") is not None:
                self._expr(member["value"], scope)

    # -- expression traversal ----------------------------------------------------

    def _expr(self, node: dict, scope: Scope) -> None:
        type_ = node["type"]
        if type_ == "Identifier":
            self._reference(node, scope)
        elif type_ == "MemberExpression":
            self._expr(node["object"], scope)
            if node["computed"]:
                self._expr(node["property"], scope)
        elif type_ in ("CallExpression", "NewExpression"):
            if not self.declaring and type_ == "CallExpression" \
                    and node["callee"]["type"] == "Identifier" \
                    and node["callee"]["name"] == "eval":
                scope.has_eval_below = True
            self._expr(node["callee"], scope)
            for arg in node["arguments"]:
                self._expr(arg, scope)
        elif type_ == "AssignmentExpression":
            self._assign_target(node["left"], scope)
            self._expr(node["right"], scope)
        elif type_ == "FunctionExpression":
            if node["id"] is not None:
                wrapper = self._child_scope("name", node, scope, key="name")
                self._declare(node["id"], "fn-name", wrapper)
                self._function(node, wrapper)
            else:
                self._function(node, scope)
        elif type_ == "ArrowFunctionExpression":
            self._function(node, scope)
        elif type_ == "ClassExpression":
            if node["id"] is not None:
                wrapper = self._child_scope("name", node, scope, key="name")
                self._declare(node["id"], "class", wrapper)
                self._class_tail(node, wrapper)
            else:
                self._class_tail(node, scope)
        elif type_ == "ObjectExpression":
            for prop in node["properties"]:
                if prop["type"] == "SpreadElement":
                    self._expr(prop["argument"], scope)
                    continue
                if prop.get("computed"):
                    self._expr(prop["key"], scope)
                self._expr(prop["value"], scope)
        elif type_ == "ArrayExpression":
            for el in node["elements"]:
                if el is not None:
                    self._expr(el, scope)
        elif type_ == "SequenceExpression":
            for expr in node["expressions"]:
                self._expr(expr, scope)
        elif type_ in ("BinaryExpression", "LogicalExpression"):
            self._expr(node["left"], scope)
            self._expr(node["right"], scope)
        elif type_ == "ConditionalExpression":
            self._expr(node["test"], scope)
            self._expr(node["consequent"], scope)
            self._expr(node["alternate"], scope)
        elif type_ in ("UnaryExpression", "UpdateExpression", "AwaitExpression",
                       "SpreadElement", "RestElement"):
            self._expr(node["argument"], scope)
        elif type_ == "YieldExpression":
            if node["argument"] is not None:
                self._expr(node["argument"], scope)
        elif type_ == "TemplateLiteral":
            for expr in node["expressions"]:
                self._expr(expr, scope)
        elif type_ == "TaggedTemplateExpression":
            self._expr(node["tag"], scope)
            self._expr(node["quasi"], scope)
        elif type_ == "AssignmentPattern":
            self._assign_target(node["left"], scope)
            self._expr(node["right"], scope)
        elif type_ in ("ArrayPattern", "ObjectPattern"):
            self._assign_target(node, scope)
        # ThisExpression, Super, Literal, MetaProperty: nothing to do

    def _assign_target(self, node: dict, scope: Scope) -> None:
        """Visit an assignment target; identifiers are write references."""
        type_ = node["type"]
        if type_ == "Identifier":
            self._reference(node, scope)
        elif type_ == "MemberExpression":
            self._expr(node, scope)
        elif type_ == "ArrayPattern":
            for el in node["elements"]:
                if el is not None:
                    self._assign_target(el, scope)
        elif type_ == "ObjectPattern":
            for prop in node["properties"]:
                if prop["type"] == "RestElement":
                    self._assign_target(prop["argument"], scope)
                else:
                    if prop.get("computed"):
                        self._expr(prop["key"], scope)
                    self._assign_target(prop["value"], scope)
        elif type_ == "AssignmentPattern":
            self._assign_target(node["left"], scope)
            self._expr(node["right"], scope)
        elif type_ == "RestElement":
            self._assign_target(node["argument"], scope)
        else:
            self._expr(node, scope)
