"""Recursive-descent ECMAScript parser producing ESTree-shaped dict nodes.

Covers ES5 plus the ES2015+ constructs that appear in ordinary and minified
code: let/const, arrow functions, classes, template literals, destructuring,
default/rest parameters, spread, for-of, generators, async/await, optional
chaining and import/export. Every node is a plain dict with ``type``,
``start`` and ``end`` (byte offsets) plus the standard ESTree fields, so the
downstream adapters stay compatible with any ESTree front end.

Known non-goals: JSX, TypeScript syntax, `let` as a plain identifier,
template literals inside arrow-parameter defaults, identifier escape
sequences.
"""

from __future__ import annotations

from ..errors import ParseError
from .tokenizer import Token, Tokenizer

_BINARY_PREC = {
    "??": 1, "||": 2, "&&": 3, "|": 4, "^": 5, "&": 6,
    "==": 7, "!=": 7, "===": 7, "!==": 7,
    "<": 8, ">": 8, "<=": 8, ">=": 8, "instanceof": 8, "in": 8,
    "<<": 9, ">>": 9, ">>>": 9,
    "+": 10, "-": 10,
    "*": 11, "/": 11, "%": 11,
    "**": 12,
}

_ASSIGN_OPS = frozenset({
    "=", "+=", "-=", "*=", "/=", "%=", "<<=", ">>=", ">>>=", "&=", "|=",
    "^=", "**=", "&&=", "||=", "??=",
})

_UNARY_OPS = frozenset({"!", "~", "+", "-", "typeof", "void", "delete"})


def parse(source: str) -> dict:
    """Parse `source` into an ESTree Program node. Raises ParseError."""
    return _Parser(source).parse_program()


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.lexer = Tokenizer(source)
        self.tok: Token = self.lexer.next_token()
        self.fn_stack: list[tuple[bool, bool]] = []  # (is_async, is_generator)

    # -- token plumbing ----------------------------------------------------

    def _advance(self) -> Token:
        prev = self.tok
        self.tok = self.lexer.next_token()
        return prev

    def _at(self, type_: str, value=None) -> bool:
        return self.tok.matches(type_, value)

    def _eat(self, type_: str, value=None) -> bool:
        if self.tok.matches(type_, value):
            self._advance()
            return True
        return False

    def _expect(self, type_: str, value=None) -> Token:
        if not self.tok.matches(type_, value):
            want = value if value is not None else type_
            raise self._error(f"expected {want!r}, found {self._describe()}")
        return self._advance()

    def _describe(self) -> str:
        if self.tok.type == "eof":
            return "end of input"
        return repr(self.tok.value)

    def _error(self, message: str) -> ParseError:
        return self.lexer.error(message, self.tok.start)

    def _peek_clone(self) -> tuple[Tokenizer, Token]:
        twin = self.lexer.clone()
        return twin, twin.next_token()

    def _semicolon(self) -> None:
        """Consume a statement terminator, applying automatic insertion."""
        if self._eat("punct", ";"):
            return
        if self._at("punct", "}") or self._at("eof") or self.tok.nl_before:
            return
        raise self._error("expected ';'")

    def _node(self, type_: str, start: int, end: int, **fields) -> dict:
        node = {"type": type_, "start": start, "end": end}
        node.update(fields)
        return node

    def _in_async(self) -> bool:
        return bool(self.fn_stack) and self.fn_stack[-1][0]

    # -- program and statements --------------------------------------------

    def parse_program(self) -> dict:
        body = []
        while not self._at("eof"):
            body.append(self.parse_statement())
        return self._node("Program", 0, len(self.source),
                          body=body, sourceType="script")

    def parse_statement(self) -> dict:
        tok = self.tok
        if tok.type == "punct":
            if tok.value == "{":
                return self._parse_block()
            if tok.value == ";":
                self._advance()
                return self._node("EmptyStatement", tok.start, tok.end)
        if tok.type == "keyword":
            handler = {
                "var": self._parse_variable_statement,
                "let": self._parse_variable_statement,
                "const": self._parse_variable_statement,
                "function": lambda: self._parse_function(declaration=True),
                "class": lambda: self._parse_class(declaration=True),
                "if": self._parse_if,
                "for": self._parse_for,
                "while": self._parse_while,
                "do": self._parse_do_while,
                "return": self._parse_return,
                "break": lambda: self._parse_break_continue("BreakStatement"),
                "continue": lambda: self._parse_break_continue("ContinueStatement"),
                "throw": self._parse_throw,
                "try": self._parse_try,
                "switch": self._parse_switch,
                "debugger": self._parse_debugger,
                "with": self._parse_with,
                "import": self._parse_import,
                "export": self._parse_export,
            }.get(tok.value)
            if handler is not None:
                return handler()
        if tok.type == "ident":
            if tok.value == "async":
                twin, nxt = self._peek_clone()
                if nxt.matches("keyword", "function") and not nxt.nl_before:
                    self._advance()
                    return self._parse_function(declaration=True, is_async=True)
            twin, nxt = self._peek_clone()
            if nxt.matches("punct", ":"):
                label = self._parse_identifier()
                self._expect("punct", ":")
                body = self.parse_statement()
                return self._node("LabeledStatement", label["start"], body["end"],
                                  label=label, body=body)
        expr = self.parse_expression()
        self._semicolon()
        return self._node("ExpressionStatement", expr["start"],
                          self.lexer.prev.end, expression=expr)

    def _parse_block(self) -> dict:
        start = self._expect("punct", "{").start
        body = []
        while not self._at("punct", "}"):
            if self._at("eof"):
                raise self._error("unterminated block")
            body.append(self.parse_statement())
        end = self._expect("punct", "}").end
        return self._node("BlockStatement", start, end, body=body)

    def _parse_variable_statement(self) -> dict:
        decl = self._parse_variable_declaration()
        self._semicolon()
        decl["end"] = self.lexer.prev.end
        return decl

    def _parse_variable_declaration(self, no_in: bool = False) -> dict:
        kw = self._advance()
        declarations = [self._parse_declarator(no_in)]
        while self._eat("punct", ","):
            declarations.append(self._parse_declarator(no_in))
        return self._node("VariableDeclaration", kw.start, declarations[-1]["end"],
                          kind=kw.value, declarations=declarations)

    def _parse_declarator(self, no_in: bool) -> dict:
        target = self._parse_binding_target()
        init = None
        if self._eat("punct", "="):
            init = self.parse_assignment(no_in=no_in)
        end = init["end"] if init else target["end"]
        return self._node("VariableDeclarator", target["start"], end,
                          id=target, init=init)

    def _parse_if(self) -> dict:
        start = self._advance().start
        self._expect("punct", "(")
        test = self.parse_expression()
        self._expect("punct", ")")
        consequent = self.parse_statement()
        alternate = None
        if self._eat("keyword", "else"):
            alternate = self.parse_statement()
        end = (alternate or consequent)["end"]
        return self._node("IfStatement", start, end, test=test,
                          consequent=consequent, alternate=alternate)

    def _parse_for(self) -> dict:
        start = self._advance().start
        self._expect("punct", "(")
        init = None
        if self._at("punct", ";"):
            self._advance()
        else:
            if self.tok.type == "keyword" and self.tok.value in ("var", "let", "const"):
                init = self._parse_variable_declaration(no_in=True)
            else:
                init = self.parse_expression(no_in=True)
            if self._at("keyword", "in") or self._at("ident", "of"):
                return self._parse_for_in_of(start, init)
            self._expect("punct", ";")
        test = None if self._at("punct", ";") else self.parse_expression()
        self._expect("punct", ";")
        update = None if self._at("punct", ")") else self.parse_expression()
        self._expect("punct", ")")
        body = self.parse_statement()
        return self._node("ForStatement", start, body["end"],
                          init=init, test=test, update=update, body=body)

    def _parse_for_in_of(self, start: int, left: dict) -> dict:
        is_of = self.tok.value == "of"
        self._advance()
        if left["type"] not in ("VariableDeclaration",):
            left = self._to_pattern(left)
        right = self.parse_assignment() if is_of else self.parse_expression()
        self._expect("punct", ")")
        body = self.parse_statement()
        type_ = "ForOfStatement" if is_of else "ForInStatement"
        return self._node(type_, start, body["end"], left=left, right=right, body=body)

    def _parse_while(self) -> dict:
        start = self._advance().start
        self._expect("punct", "(")
        test = self.parse_expression()
        self._expect("punct", ")")
        body = self.parse_statement()
        return self._node("WhileStatement", start, body["end"], test=test, body=body)

    def _parse_do_while(self) -> dict:
        start = self._advance().start
        body = self.parse_statement()
        self._expect("keyword", "while")
        self._expect("punct", "(")
        test = self.parse_expression()
        end = self._expect("punct", ")").end
        self._eat("punct", ";")
        return self._node("DoWhileStatement", start, end, body=body, test=test)

    def _parse_return(self) -> dict:
        tok = self._advance()
        argument = None
        if not (self._at("punct", ";") or self._at("punct", "}")
                or self._at("eof") or self.tok.nl_before):
            argument = self.parse_expression()
        self._semicolon()
        return self._node("ReturnStatement", tok.start, self.lexer.prev.end,
                          argument=argument)

    def _parse_break_continue(self, type_: str) -> dict:
        tok = self._advance()
        label = None
        if self._at("ident") and not self.tok.nl_before:
            label = self._parse_identifier()
        self._semicolon()
        return self._node(type_, tok.start, self.lexer.prev.end, label=label)

    def _parse_throw(self) -> dict:
        tok = self._advance()
        if self.tok.nl_before:
            raise self._error("newline not allowed after 'throw'")
        argument = self.parse_expression()
        self._semicolon()
        return self._node("ThrowStatement", tok.start, self.lexer.prev.end,
                          argument=argument)

    def _parse_try(self) -> dict:
        start = self._advance().start
        block = self._parse_block()
        handler = None
        finalizer = None
        if self._at("keyword", "catch"):
            cstart = self._advance().start
            param = None
            if self._eat("punct", "("):
                param = self._parse_binding_target()
                self._expect("punct", ")")
            body = self._parse_block()
            handler = self._node("CatchClause", cstart, body["end"],
                                 param=param, body=body)
        if self._eat("keyword", "finally"):
            finalizer = self._parse_block()
        if handler is None and finalizer is None:
            raise self._error("try requires catch or finally")
        end = (finalizer or handler)["end"]
        return self._node("TryStatement", start, end, block=block,
                          handler=handler, finalizer=finalizer)

    def _parse_switch(self) -> dict:
        start = self._advance().start
        self._expect("punct", "(")
        discriminant = self.parse_expression()
        self._expect("punct", ")")
        self._expect("punct", "{")
        cases = []
        while not self._at("punct", "}"):
            if self._eat("keyword", "case"):
                cstart = self.lexer.prev.start
                test = self.parse_expression()
            elif self._eat("keyword", "default"):
                cstart = self.lexer.prev.start
                test = None
            else:
                raise self._error("expected 'case' or 'default'")
            self._expect("punct", ":")
            consequent = []
            while not (self._at("punct", "}") or self._at("keyword", "case")
                       or self._at("keyword", "default")):
                consequent.append(self.parse_statement())
            cend = consequent[-1]["end"] if consequent else self.lexer.prev.end
            cases.append(self._node("SwitchCase", cstart, cend,
                                    test=test, consequent=consequent))
        end = self._expect("punct", "}").end
        return self._node("SwitchStatement", start, end,
                          discriminant=discriminant, cases=cases)

    def _parse_debugger(self) -> dict:
        tok = self._advance()
        self._semicolon()
        return self._node("DebuggerStatement", tok.start, self.lexer.prev.end)

    def _parse_with(self) -> dict:
        start = self._advance().start
        self._expect("punct", "(")
        obj = self.parse_expression()
        self._expect("punct", ")")
        body = self.parse_statement()
        return self._node("WithStatement", start, body["end"],
                          object=obj, body=body)

    # -- modules -------------------------------------------------------------

    def _parse_import(self) -> dict:
        start = self._advance().start
        if self._at("punct", "("):   # dynamic import() in expression position
            callee = self._node("Identifier", start, start + 6, name="import")
            expr = self._finish_call_member(callee)
            self._semicolon()
            return self._node("ExpressionStatement", start, self.lexer.prev.end,
                              expression=expr)
        specifiers = []
        if self._at("str"):
            source = self._parse_literal()
        else:
            if self._at("ident"):
                local = self._parse_identifier()
                specifiers.append(self._node(
                    "ImportDefaultSpecifier", local["start"], local["end"],
                    local=local))
                if self._at("punct", ","):
                    self._advance()
            if self._eat("punct", "*"):
                self._expect_contextual("as")
                local = self._parse_identifier()
                specifiers.append(self._node(
                    "ImportNamespaceSpecifier", local["start"], local["end"],
                    local=local))
            elif self._at("punct", "{"):
                specifiers.extend(self._parse_named_imports())
            self._expect_contextual("from")
            source = self._parse_literal()
        self._semicolon()
        return self._node("ImportDeclaration", start, self.lexer.prev.end,
                          specifiers=specifiers, source=source)

    def _parse_named_imports(self) -> list[dict]:
        self._expect("punct", "{")
        out = []
        while not self._at("punct", "}"):
            imported = self._parse_identifier(allow_keyword=True)
            local = imported
            if self._at("ident", "as"):
                self._advance()
                local = self._parse_identifier()
            out.append(self._node("ImportSpecifier", imported["start"],
                                  local["end"], imported=imported, local=local))
            if not self._eat("punct", ","):
                break
        self._expect("punct", "}")
        return out

    def _parse_export(self) -> dict:
        start = self._advance().start
        if self._eat("keyword", "default"):
            if self._at("keyword", "function") or self._at("keyword", "class"):
                decl = self.parse_statement()
            elif self._at("ident", "async"):
                decl = self.parse_statement()
            else:
                decl = self.parse_assignment()
                self._semicolon()
            return self._node("ExportDefaultDeclaration", start,
                              self.lexer.prev.end, declaration=decl)
        if self._eat("punct", "*"):
            if self._at("ident", "as"):
                self._advance()
                self._parse_identifier()
            self._expect_contextual("from")
            source = self._parse_literal()
            self._semicolon()
            return self._node("ExportAllDeclaration", start, self.lexer.prev.end,
                              source=source)
        if self._at("punct", "{"):
            self._expect("punct", "{")
            specifiers = []
            while not self._at("punct", "}"):
                local = self._parse_identifier(allow_keyword=True)
                exported = local
                if self._at("ident", "as"):
                    self._advance()
                    exported = self._parse_identifier(allow_keyword=True)
                specifiers.append(self._node(
                    "ExportSpecifier", local["start"], exported["end"],
                    local=local, exported=exported))
                if not self._eat("punct", ","):
                    break
            self._expect("punct", "}")
            source = None
            if self._at("ident", "from"):
                self._advance()
                source = self._parse_literal()
            self._semicolon()
            return self._node("ExportNamedDeclaration", start, self.lexer.prev.end,
                              declaration=None, specifiers=specifiers, source=source)
        decl = self.parse_statement()
        return self._node("ExportNamedDeclaration", start, decl["end"],
                          declaration=decl, specifiers=[], source=None)

    def _expect_contextual(self, word: str) -> None:
        if not self._at("ident", word):
            raise self._error(f"expected '{word}'")
        self._advance()

    # -- functions and classes ----------------------------------------------

    def _parse_function(self, declaration: bool, is_async: bool = False) -> dict:
        start = self.lexer.prev.start if is_async else self.tok.start
        self._expect("keyword", "function")
        generator = self._eat("punct", "*")
        ident = self._parse_identifier() if self._at("ident") else None
        if declaration and ident is None:
            raise self._error("function declaration requires a name")
        params = self._parse_params()
        body = self._with_fn_context(is_async, generator, self._parse_block)
        type_ = "FunctionDeclaration" if declaration else "FunctionExpression"
        return self._node(type_, start, body["end"], id=ident, params=params,
                          body=body, generator=generator, **{"async": is_async})

    def _with_fn_context(self, is_async: bool, generator: bool, thunk):
        self.fn_stack.append((is_async, generator))
        try:
            return thunk()
        finally:
            self.fn_stack.pop()

    def _parse_params(self) -> list[dict]:
        self._expect("punct", "(")
        params = []
        while not self._at("punct", ")"):
            if self._eat("punct", "..."):
                rstart = self.lexer.prev.start
                target = self._parse_binding_target()
                params.append(self._node("RestElement", rstart, target["end"],
                                         argument=target))
            else:
                params.append(self._parse_binding_element())
            if not self._eat("punct", ","):
                break
        self._expect("punct", ")")
        return params

    def _parse_binding_element(self) -> dict:
        target = self._parse_binding_target()
        if self._eat("punct", "="):
            default = self.parse_assignment()
            return self._node("AssignmentPattern", target["start"],
                              default["end"], left=target, right=default)
        return target

    def _parse_binding_target(self) -> dict:
        if self._at("punct", "["):
            return self._parse_array_pattern()
        if self._at("punct", "{"):
            return self._parse_object_pattern()
        return self._parse_identifier()

    def _parse_array_pattern(self) -> dict:
        start = self._expect("punct", "[").start
        elements = []
        while not self._at("punct", "]"):
            if self._at("punct", ","):
                elements.append(None)   # elision
                self._advance()
                continue
            if self._eat("punct", "..."):
                rstart = self.lexer.prev.start
                target = self._parse_binding_target()
                elements.append(self._node("RestElement", rstart, target["end"],
                                           argument=target))
            else:
                elements.append(self._parse_binding_element())
            if not self._eat("punct", ","):
                break
        end = self._expect("punct", "]").end
        return self._node("ArrayPattern", start, end, elements=elements)

    def _parse_object_pattern(self) -> dict:
        start = self._expect("punct", "{").start
        properties = []
        while not self._at("punct", "}"):
            if self._eat("punct", "..."):
                rstart = self.lexer.prev.start
                target = self._parse_binding_target()
                properties.append(self._node("RestElement", rstart,
                                             target["end"], argument=target))
            else:
                key, computed = self._parse_property_key()
                if self._eat("punct", ":"):
                    value = self._parse_binding_element()
                    shorthand = False
                elif self._eat("punct", "="):
                    default = self.parse_assignment()
                    value = self._node("AssignmentPattern", key["start"],
                                       default["end"], left=key, right=default)
                    shorthand = True
                else:
                    value = key
                    shorthand = True
                properties.append(self._node(
                    "Property", key["start"], value["end"], key=key,
                    value=value, kind="init", computed=computed,
                    shorthand=shorthand, method=False))
            if not self._eat("punct", ","):
                break
        end = self._expect("punct", "}").end
        return self._node("ObjectPattern", start, end, properties=properties)

    def _parse_class(self, declaration: bool) -> dict:
        start = self._advance().start
        ident = self._parse_identifier() if self._at("ident") else None
        if declaration and ident is None:
            raise self._error("class declaration requires a name")
        superclass = None
        if self._eat("keyword", "extends"):
            superclass = self._parse_lhs_expression()
        bstart = self._expect("punct", "{").start
        body = []
        while not self._at("punct", "}"):
            if self._eat("punct", ";"):
                continue
            body.append(self._parse_class_member())
        end = self._expect("punct", "}").end
        class_body = self._node("ClassBody", bstart, end, body=body)
        type_ = "ClassDeclaration" if declaration else "ClassExpression"
        return self._node(type_, start, end, id=ident,
                          superClass=superclass, body=class_body)

    def _parse_class_member(self) -> dict:
        start = self.tok.start
        static = False
        if self._at("ident", "static"):
            twin, nxt = self._peek_clone()
            if not nxt.matches("punct", "(") and not nxt.matches("punct", "="):
                self._advance()
                static = True
        is_async = False
        generator = False
        kind = "method"
        if self._at("ident", "async"):
            twin, nxt = self._peek_clone()
            if not nxt.matches("punct", "(") and not nxt.matches("punct", "=") \
                    and not nxt.nl_before:
                self._advance()
                is_async = True
        if self._eat("punct", "*"):
            generator = True
        if self.tok.type == "ident" and self.tok.value in ("get", "set"):
            twin, nxt = self._peek_clone()
            if not nxt.matches("punct", "(") and not nxt.matches("punct", "="):
                kind = self.tok.value
                self._advance()
        key, computed = self._parse_property_key()
        if self._at("punct", "("):
            params = self._parse_params()
            body = self._with_fn_context(is_async, generator, self._parse_block)
            value = self._node("FunctionExpression", key["end"], body["end"],
                               id=None, params=params, body=body,
                               generator=generator, **{"async": is_async})
            mkind = kind if kind in ("get", "set") else (
                "constructor" if not computed and key.get("name") == "constructor"
                else "method")
            return self._node("MethodDefinition", start, body["end"], key=key,
                              value=value, kind=mkind, computed=computed,
                              static=static)
        value = None
        if self._eat("punct", "="):
            value = self.parse_assignment()
        self._semicolon()
        return self._node("PropertyDefinition", start, self.lexer.prev.end,
                          key=key, value=value, computed=computed, static=static)

    def _parse_property_key(self) -> tuple[dict, bool]:
        tok = self.tok
        if self._eat("punct", "["):
            key = self.parse_assignment()
            self._expect("punct", "]")
            return key, True
        if tok.type in ("ident", "keyword"):
            self._advance()
            return self._node("Identifier", tok.start, tok.end, name=tok.value), False
        if tok.type in ("str", "num"):
            return self._parse_literal(), False
        raise self._error("expected property key")

    # -- expressions ----------------------------------------------------------

    def parse_expression(self, no_in: bool = False) -> dict:
        expr = self.parse_assignment(no_in=no_in)
        if self._at("punct", ","):
            expressions = [expr]
            while self._eat("punct", ","):
                expressions.append(self.parse_assignment(no_in=no_in))
            return self._node("SequenceExpression", expr["start"],
                              expressions[-1]["end"], expressions=expressions)
        return expr

    def parse_assignment(self, no_in: bool = False) -> dict:
        if self._at("keyword", "yield") and self.fn_stack and self.fn_stack[-1][1]:
            return self._parse_yield()
        arrow = self._try_parse_arrow()
        if arrow is not None:
            return arrow
        left = self._parse_conditional(no_in)
        if self.tok.type == "punct" and self.tok.value in _ASSIGN_OPS:
            op = self._advance().value
            if op == "=":
                left = self._to_pattern(left, assignment=True)
            elif left["type"] not in ("Identifier", "MemberExpression"):
                raise self._error("invalid assignment target")
            right = self.parse_assignment(no_in=no_in)
            return self._node("AssignmentExpression", left["start"], right["end"],
                              operator=op, left=left, right=right)
        if left["type"] == "Identifier" and self._at("punct", "=>") \
                and not self.tok.nl_before:
            return self._finish_arrow(left["start"], [left], is_async=False)
        return left

    def _parse_yield(self) -> dict:
        start = self._advance().start
        delegate = self._eat("punct", "*")
        argument = None
        if not (self.tok.nl_before or self.tok.type == "eof"
                or (self.tok.type == "punct"
                    and self.tok.value in (")", "]", "}", ",", ";", ":"))):
            argument = self.parse_assignment()
        end = argument["end"] if argument else self.lexer.prev.end
        return self._node("YieldExpression", start, end,
                          argument=argument, delegate=delegate)

    def _try_parse_arrow(self) -> dict | None:
        """Detect `(params) =>` / `async (params) =>` / `async x =>` heads."""
        is_async = False
        if self._at("ident", "async"):
            twin, nxt = self._peek_clone()
            if nxt.matches("ident") and not nxt.nl_before:
                after = twin.next_token()
                if after.matches("punct", "=>") and not after.nl_before:
                    start = self._advance().start   # async
                    param = self._parse_identifier()
                    return self._finish_arrow(start, [param], is_async=True)
                return None
            if nxt.matches("punct", "(") and not nxt.nl_before:
                if not self._parens_lead_to_arrow(twin, opener=nxt):
                    return None
                is_async = True
                start = self._advance().start       # async
                params = self._parse_params()
                return self._finish_arrow(start, params, is_async=True)
            return None
        if self._at("punct", "("):
            twin = self.lexer.clone()
            if self._parens_lead_to_arrow(twin, opener=self.tok):
                start = self.tok.start
                params = self._parse_params()
                return self._finish_arrow(start, params, is_async=False)
        return None

    def _parens_lead_to_arrow(self, twin: Tokenizer, opener: Token | None = None) -> bool:
        """Scan a clone past the balanced `( ... )` and test for `=>`."""
        tok = opener if opener is not None else twin.next_token()
        if not tok.matches("punct", "("):
            return False
        depth = 1
        while depth > 0:
            try:
                tok = twin.next_token()
            except ParseError:
                return False
            if tok.type == "eof":
                return False
            if tok.matches("punct", "("):
                depth += 1
            elif tok.matches("punct", ")"):
                depth -= 1
        try:
            after = twin.next_token()
        except ParseError:
            return False
        return after.matches("punct", "=>") and not after.nl_before

    def _finish_arrow(self, start: int, params: list[dict], is_async: bool) -> dict:
        self._expect("punct", "=>")
        if self._at("punct", "{"):
            body = self._with_fn_context(is_async, False, self._parse_block)
        else:
            body = self._with_fn_context(
                is_async, False, lambda: self.parse_assignment())
        return self._node("ArrowFunctionExpression", start, body["end"],
                          id=None, params=params, body=body, generator=False,
                          expression=body["type"] != "BlockStatement",
                          **{"async": is_async})

    def _parse_conditional(self, no_in: bool) -> dict:
        test = self._parse_binary(0, no_in)
        if not self._at("punct", "?"):
            return test
        self._advance()
        consequent = self.parse_assignment()
        self._expect("punct", ":")
        alternate = self.parse_assignment(no_in=no_in)
        return self._node("ConditionalExpression", test["start"], alternate["end"],
                          test=test, consequent=consequent, alternate=alternate)

    def _parse_binary(self, min_prec: int, no_in: bool) -> dict:
        left = self._parse_unary()
        while True:
            op = None
            if self.tok.type == "punct" and self.tok.value in _BINARY_PREC:
                op = self.tok.value
            elif self._at("keyword", "instanceof"):
                op = "instanceof"
            elif self._at("keyword", "in") and not no_in:
                op = "in"
            if op is None:
                return left
            prec = _BINARY_PREC[op]
            if prec <= min_prec:
                return left
            self._advance()
            # `**` is right-associative, everything else left-associative
            right = self._parse_binary(prec - 1 if op == "**" else prec, no_in)
            type_ = "LogicalExpression" if op in ("&&", "||", "??") else "BinaryExpression"
            left = self._node(type_, left["start"], right["end"],
                              operator=op, left=left, right=right)

    def _parse_unary(self) -> dict:
        tok = self.tok
        if (tok.type == "punct" and tok.value in ("!", "~", "+", "-")) or \
                (tok.type == "keyword" and tok.value in ("typeof", "void", "delete")):
            self._advance()
            argument = self._parse_unary()
            return self._node("UnaryExpression", tok.start, argument["end"],
                              operator=tok.value, argument=argument, prefix=True)
        if tok.type == "punct" and tok.value in ("++", "--"):
            self._advance()
            argument = self._parse_unary()
            return self._node("UpdateExpression", tok.start, argument["end"],
                              operator=tok.value, argument=argument, prefix=True)
        if tok.matches("ident", "await") and self._in_async():
            self._advance()
            argument = self._parse_unary()
            return self._node("AwaitExpression", tok.start, argument["end"],
                              argument=argument)
        expr = self._parse_postfix()
        return expr

    def _parse_postfix(self) -> dict:
        expr = self._parse_lhs_expression()
        if self.tok.type == "punct" and self.tok.value in ("++", "--") \
                and not self.tok.nl_before:
            op = self._advance()
            expr = self._node("UpdateExpression", expr["start"], op.end,
                              operator=op.value, argument=expr, prefix=False)
        return expr

    def _parse_lhs_expression(self) -> dict:
        if self._at("keyword", "new"):
            return self._finish_call_member(self._parse_new())
        return self._finish_call_member(self._parse_primary())

    def _parse_new(self) -> dict:
        start = self._advance().start
        if self._eat("punct", "."):
            prop = self._parse_identifier()   # new.target
            return self._node("MetaProperty", start, prop["end"],
                              meta={"type": "Identifier", "start": start,
                                    "end": start + 3, "name": "new"},
                              property=prop)
        if self._at("keyword", "new"):
            callee = self._parse_new()
        else:
            callee = self._parse_primary()
        # member accesses bind to the callee before the argument list
        while True:
            if self._eat("punct", "."):
                prop = self._parse_identifier(allow_keyword=True)
                callee = self._node("MemberExpression", callee["start"], prop["end"],
                                    object=callee, property=prop,
                                    computed=False, optional=False)
            elif self._at("punct", "["):
                self._advance()
                prop = self.parse_expression()
                end = self._expect("punct", "]").end
                callee = self._node("MemberExpression", callee["start"], end,
                                    object=callee, property=prop,
                                    computed=True, optional=False)
            else:
                break
        arguments = []
        end = callee["end"]
        if self._at("punct", "("):
            arguments, end = self._parse_arguments()
        return self._node("NewExpression", start, end,
                          callee=callee, arguments=arguments)

    def _parse_arguments(self) -> tuple[list[dict], int]:
        self._expect("punct", "(")
        args = []
        while not self._at("punct", ")"):
            if self._eat("punct", "..."):
                sstart = self.lexer.prev.start
                arg = self.parse_assignment()
                args.append(self._node("SpreadElement", sstart, arg["end"],
                                       argument=arg))
            else:
                args.append(self.parse_assignment())
            if not self._eat("punct", ","):
                break
        end = self._expect("punct", ")").end
        return args, end

    def _finish_call_member(self, expr: dict) -> dict:
        while True:
            if self._eat("punct", "."):
                prop = self._parse_identifier(allow_keyword=True)
                expr = self._node("MemberExpression", expr["start"], prop["end"],
                                  object=expr, property=prop,
                                  computed=False, optional=False)
            elif self._eat("punct", "?."):
                if self._at("punct", "("):
                    args, end = self._parse_arguments()
                    expr = self._node("CallExpression", expr["start"], end,
                                      callee=expr, arguments=args, optional=True)
                elif self._at("punct", "["):
                    self._advance()
                    prop = self.parse_expression()
                    end = self._expect("punct", "]").end
                    expr = self._node("MemberExpression", expr["start"], end,
                                      object=expr, property=prop,
                                      computed=True, optional=True)
                else:
                    prop = self._parse_identifier(allow_keyword=True)
                    expr = self._node("MemberExpression", expr["start"], prop["end"],
                                      object=expr, property=prop,
                                      computed=False, optional=True)
            elif self._at("punct", "["):
                self._advance()
                prop = self.parse_expression()
                end = self._expect("punct", "]").end
                expr = self._node("MemberExpression", expr["start"], end,
                                  object=expr, property=prop,
                                  computed=True, optional=False)
            elif self._at("punct", "("):
                args, end = self._parse_arguments()
                expr = self._node("CallExpression", expr["start"], end,
                                  callee=expr, arguments=args, optional=False)
            elif self._at("template"):
                quasi = self._parse_template()
                expr = self._node("TaggedTemplateExpression", expr["start"],
                                  quasi["end"], tag=expr, quasi=quasi)
            else:
                return expr

    def _parse_primary(self) -> dict:
        tok = self.tok
        if tok.type == "ident":
            if tok.value == "async":
                twin, nxt = self._peek_clone()
                if nxt.matches("keyword", "function") and not nxt.nl_before:
                    self._advance()
                    return self._parse_function(declaration=False, is_async=True)
            return self._parse_identifier()
        if tok.type == "keyword":
            if tok.value == "this":
                self._advance()
                return self._node("ThisExpression", tok.start, tok.end)
            if tok.value in ("true", "false"):
                self._advance()
                return self._node("Literal", tok.start, tok.end,
                                  value=tok.value == "true", raw=tok.value)
            if tok.value == "null":
                self._advance()
                return self._node("Literal", tok.start, tok.end,
                                  value=None, raw="null")
            if tok.value == "function":
                return self._parse_function(declaration=False)
            if tok.value == "class":
                return self._parse_class(declaration=False)
            if tok.value == "super":
                self._advance()
                return self._node("Super", tok.start, tok.end)
            if tok.value == "new":
                return self._parse_new()
            if tok.value == "import":
                self._advance()
                return self._node("Identifier", tok.start, tok.end, name="import")
            if tok.value in ("yield", "let"):
                # tolerated as plain identifiers outside their special spots
                self._advance()
                return self._node("Identifier", tok.start, tok.end, name=tok.value)
            raise self._error(f"unexpected keyword {tok.value!r}")
        if tok.type in ("num", "str"):
            return self._parse_literal()
        if tok.type == "regex":
            self._advance()
            body, _, flags = tok.value.rpartition("/")
            return self._node("Literal", tok.start, tok.end, value=tok.value,
                              raw=tok.value,
                              regex={"pattern": body[1:], "flags": flags})
        if tok.type == "template":
            return self._parse_template()
        if tok.matches("punct", "("):
            self._advance()
            expr = self.parse_expression()
            self._expect("punct", ")")
            return expr
        if tok.matches("punct", "["):
            return self._parse_array_literal()
        if tok.matches("punct", "{"):
            return self._parse_object_literal()
        raise self._error(f"unexpected token {self._describe()}")

    def _parse_literal(self) -> dict:
        tok = self.tok
        if tok.type not in ("num", "str"):
            raise self._error("expected literal")
        self._advance()
        raw = self.source[tok.start:tok.end]
        return self._node("Literal", tok.start, tok.end, value=tok.value, raw=raw)

    def _parse_identifier(self, allow_keyword: bool = False) -> dict:
        tok = self.tok
        if tok.type == "ident" or (allow_keyword and tok.type == "keyword"):
            self._advance()
            return self._node("Identifier", tok.start, tok.end, name=tok.value)
        raise self._error(f"expected identifier, found {self._describe()}")

    def _parse_array_literal(self) -> dict:
        start = self._expect("punct", "[").start
        elements = []
        while not self._at("punct", "]"):
            if self._at("punct", ","):
                elements.append(None)
                self._advance()
                continue
            if self._eat("punct", "..."):
                sstart = self.lexer.prev.start
                arg = self.parse_assignment()
                elements.append(self._node("SpreadElement", sstart, arg["end"],
                                           argument=arg))
            else:
                elements.append(self.parse_assignment())
            if not self._eat("punct", ","):
                break
        end = self._expect("punct", "]").end
        return self._node("ArrayExpression", start, end, elements=elements)

    def _parse_object_literal(self) -> dict:
        start = self._expect("punct", "{").start
        properties = []
        while not self._at("punct", "}"):
            properties.append(self._parse_object_property())
            if not self._eat("punct", ","):
                break
        end = self._expect("punct", "}").end
        return self._node("ObjectExpression", start, end, properties=properties)

    def _parse_object_property(self) -> dict:
        pstart = self.tok.start
        if self._eat("punct", "..."):
            arg = self.parse_assignment()
            return self._node("SpreadElement", pstart, arg["end"], argument=arg)
        is_async = False
        generator = False
        if self._at("ident", "async"):
            twin, nxt = self._peek_clone()
            if not nxt.matches("punct", ":") and not nxt.matches("punct", "(") \
                    and not nxt.matches("punct", ",") and not nxt.matches("punct", "}") \
                    and not nxt.nl_before:
                self._advance()
                is_async = True
        if self._eat("punct", "*"):
            generator = True
        if not is_async and not generator and self.tok.type == "ident" \
                and self.tok.value in ("get", "set"):
            twin, nxt = self._peek_clone()
            if not (nxt.matches("punct", ":") or nxt.matches("punct", "(")
                    or nxt.matches("punct", ",") or nxt.matches("punct", "}")
                    or nxt.matches("punct", "=")):
                kind = self.tok.value
                self._advance()
                key, computed = self._parse_property_key()
                params = self._parse_params()
                body = self._with_fn_context(False, False, self._parse_block)
                value = self._node("FunctionExpression", key["end"], body["end"],
                                   id=None, params=params, body=body,
                                   generator=False, **{"async": False})
                return self._node("Property", pstart, body["end"], key=key,
                                  value=value, kind=kind, computed=computed,
                                  shorthand=False, method=False)
        key, computed = self._parse_property_key()
        if self._at("punct", "("):
            params = self._parse_params()
            body = self._with_fn_context(is_async, generator, self._parse_block)
            value = self._node("FunctionExpression", key["end"], body["end"],
                               id=None, params=params, body=body,
                               generator=generator, **{"async": is_async})
            return self._node("Property", pstart, body["end"], key=key,
                              value=value, kind="init", computed=computed,
                              shorthand=False, method=True)
        if self._eat("punct", ":"):
            value = self.parse_assignment()
            return self._node("Property", pstart, value["end"], key=key,
                              value=value, kind="init", computed=computed,
                              shorthand=False, method=False)
        if key["type"] != "Identifier":
            raise self._error("expected ':' after property key")
        if self._eat("punct", "="):
            # only meaningful once reinterpreted as a destructuring pattern
            default = self.parse_assignment()
            value = self._node("AssignmentPattern", key["start"], default["end"],
                               left=key, right=default)
            return self._node("Property", pstart, default["end"], key=key,
                              value=value, kind="init", computed=False,
                              shorthand=True, method=False)
        return self._node("Property", pstart, key["end"], key=key, value=key,
                          kind="init", computed=False, shorthand=True,
                          method=False)

    def _parse_template(self) -> dict:
        head = self._expect("template")
        chunk = head.value
        start = head.start
        quasis = [self._node("TemplateElement", head.start, head.end,
                             value={"raw": chunk.raw, "cooked": chunk.cooked},
                             tail=chunk.is_tail)]
        expressions = []
        while not chunk.is_tail:
            expressions.append(self.parse_expression())
            if not self._at("punct", "}"):
                raise self._error("expected '}' in template literal")
            tok = self.lexer.continue_template(self.tok.start)
            chunk = tok.value
            quasis.append(self._node("TemplateElement", tok.start, tok.end,
                                     value={"raw": chunk.raw, "cooked": chunk.cooked},
                                     tail=chunk.is_tail))
            self.tok = self.lexer.next_token()
        return self._node("TemplateLiteral", start, quasis[-1]["end"],
                          quasis=quasis, expressions=expressions)

    # -- pattern reinterpretation ---------------------------------------------

    def _to_pattern(self, node: dict, assignment: bool = False) -> dict:
        """Reinterpret an already-parsed expression as an assignment target."""
        type_ = node["type"]
        if type_ in ("Identifier", "MemberExpression", "ArrayPattern",
                     "ObjectPattern", "AssignmentPattern", "RestElement"):
            return node
        if type_ == "ArrayExpression":
            node["type"] = "ArrayPattern"
            node["elements"] = [
                self._to_pattern(el) if el is not None else None
                for el in node["elements"]
            ]
            return node
        if type_ == "ObjectExpression":
            node["type"] = "ObjectPattern"
            for prop in node["properties"]:
                if prop["type"] == "SpreadElement":
                    prop["type"] = "RestElement"
                    prop["argument"] = self._to_pattern(prop["argument"])
                else:
                    prop["value"] = self._to_pattern(prop["value"])
            return node
        if type_ == "SpreadElement":
            node["type"] = "RestElement"
            node["argument"] = self._to_pattern(node["argument"])
            return node
        if type_ == "AssignmentExpression" and node["operator"] == "=":
            return self._node("AssignmentPattern", node["start"], node["end"],
                              left=self._to_pattern(node["left"]),
                              right=node["right"])
        if assignment and type_ in ("CallExpression",):
            raise self.lexer.error("invalid assignment target", node["start"])
        raise self.lexer.error("invalid destructuring target", node["start"])
