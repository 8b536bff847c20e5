import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nameloom.errors import ParseError
from nameloom.jsparse import ast_equal, parse, walk
from nameloom.jsparse.tokenizer import Tokenizer


def types_of(source):
    return [n["type"] for n in walk(parse(source))]


def test_program_shape():
    ast = parse("var x = 1;")
    assert ast["type"] == "Program"
    assert ast["body"][0]["type"] == "VariableDeclaration"
    decl = ast["body"][0]["declarations"][0]
    assert decl["id"]["name"] == "x"
    assert decl["init"]["value"] == 1


@pytest.mark.parametrize("source", [
    "var s = \"he said \\\"hi\\\"\";",
    "let {a, b: [c, ...d], e = 3} = obj;",
    "const f = async (g, h = {}) => g + h;",
    "class Q extends P { constructor(x) { super(x); } static get y() { return 1; } }",
    "for (const [k, v] of Object.entries(o)) log(k in o, v);",
    "function* gen() { yield a ? b : c; yield* rest; }",
    "x?.y?.[\"z\"]?.(1);",
    "switch (x) { case 1: break; default: f(); }",
    "label: for (;;) { continue label; }",
    "new a.b.C(1, ...rest).d(e);",
    "o = { async m() { await p; }, *g() {}, get v() { return 1; }, set v(x) {}, [k]: 2, short };",
    "try { f(); } catch { g(); } finally { h(); }",
    "do { i++; } while (i < 10);",
    "import dflt, {a as b} from \"mod\"; export default function seven() {}",
    "var re = /ab[c/]d\\//gi; var div = a / b / c;",
    "p = cond ?.3 : 4;",
    "tagged`one ${x} two ${f({y: `inner ${z}`})} three`;",
    "({x = 1, ...rest} = opts);",
    "with (o) { x(); }",
    "a\nb\n++c",
])
def test_parses(source):
    assert parse(source)["type"] == "Program"


def test_identifier_positions_roundtrip():
    source = "function add(first, second) { return first + second; }"
    for node in walk(parse(source)):
        if node["type"] == "Identifier":
            assert source[node["start"]:node["end"]] == node["name"]


def test_asi_inserts_after_newline():
    ast = parse("a = 1\nb = 2")
    assert len(ast["body"]) == 2


def test_asi_return_restriction():
    ast = parse("function f() { return\n1; }")
    fn = ast["body"][0]
    ret = fn["body"]["body"][0]
    assert ret["type"] == "ReturnStatement" and ret["argument"] is None


def test_postfix_no_newline():
    ast = parse("a\n++b")
    assert ast["body"][0]["expression"]["type"] == "Identifier"
    assert ast["body"][1]["expression"]["type"] == "UpdateExpression"


def test_regex_vs_division():
    ast = parse("x = a / b; y = /a[/]b/g;")
    div = ast["body"][0]["expression"]["right"]
    assert div["type"] == "BinaryExpression"
    regex = ast["body"][1]["expression"]["right"]
    assert regex["regex"]["flags"] == "g"


def test_template_nesting():
    ast = parse("t = `a ${ `b ${x}` } c`;")
    outer = ast["body"][0]["expression"]["right"]
    assert outer["type"] == "TemplateLiteral"
    assert outer["expressions"][0]["type"] == "TemplateLiteral"
    assert [q["value"]["cooked"] for q in outer["quasis"]] == ["a ", " c"]


def test_precedence():
    ast = parse("r = 1 + 2 * 3 ** 2 ** 1;")
    # 1 + (2 * (3 ** (2 ** 1)))
    add = ast["body"][0]["expression"]["right"]
    assert add["operator"] == "+"
    mul = add["right"]
    assert mul["operator"] == "*"
    pow_outer = mul["right"]
    assert pow_outer["operator"] == "**"
    assert pow_outer["right"]["operator"] == "**"


def test_parse_error_position():
    with pytest.raises(ParseError) as excinfo:
        parse("var x = ;")
    err = excinfo.value
    assert err.line == 1 and err.column == 9


def test_parse_error_line_counting():
    with pytest.raises(ParseError) as excinfo:
        parse("f();\ng();\nvar = 3;")
    assert excinfo.value.line == 3


def test_unterminated_string():
    with pytest.raises(ParseError):
        parse("var s = 'oops")


def test_ast_equal_ignores_identifier_names():
    a = parse("function f(x) { return x + 1; }")
    b = parse("function g(y) { return y + 1; }")
    c = parse("function g(y) { return y + 2; }")
    assert ast_equal(a, b, ignore_identifier_names=True)
    assert not ast_equal(a, b)
    assert not ast_equal(a, c, ignore_identifier_names=True)


def test_tokenizer_clone_independent():
    lexer = Tokenizer("a b c")
    assert lexer.next_token().value == "a"
    twin = lexer.clone()
    assert twin.next_token().value == "b"
    assert lexer.next_token().value == "b"


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10**9))
def test_random_generated_sources_parse(seed):
    import random as random_mod

    from oracles import random_corpus
    rng = random_mod.Random(seed)
    for text in random_corpus(rng, max_functions=12).values():
        assert parse(text)["type"] == "Program"


def test_determinism():
    src = "function f(a) { return a.map(x => x * 2); }"
    assert parse(src) == parse(src)
