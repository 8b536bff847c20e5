"""Stress coverage: dense minifier-style syntax, compacted pipelines, and
soundness at a few hundred functions."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fixtures import CORPUS
from oracles import random_corpus, random_function

from nameloom.evaluation import evaluate
from nameloom.extraction import parse_functions
from nameloom.index import build_index
from nameloom.jsparse import ast_equal, parse
from nameloom.minify import alpha_minify, compact_whitespace
from nameloom.recovery import RecoveryConfig, recover_file

DENSE_SOURCES = [
    'function f(e){var r=e.a||e.b,n={};return r?(r.getData&&(n.x=r.getData("Text")),n):n}',
    '!function(e){e.exports=function(t){return t*2}}(m);',
    'function g(a){for(var i=0,n=a.length;i<n;i++)a[i]&&a[i]();return a}',
    'var u="undefined"!=typeof window?window:this;',
    'function k(n){do{n--}while(n>0);return n}',
    'function m(s){return s.replace(/a+/g,"b").split(/,/)}',
    'var w=new a.b.C().d(e).f;',
    'function p(a,b){if(a=b.next())return q(a,(b.done=!0,b))}',
    'function s(x){outer:for(;;){switch(x){case 1:break outer;default:x--}}return x}',
    'var o={get v(){return 1},set v(x){this._v=x}};',
    'var arr=[,,1,,2,],obj={a:1,};',
    'function t(o){return void 0!==o&&"k"in o?o.k:void 0}',
    'var fn=(a,b=a+1)=>({sum:a+b});',
    'class K{constructor(){this.n=0}["dyn"+1](){return 2}static of(x){return new K(x)}}',
    'var r2=async()=>(await load()).map(x=>x.id);',
    'for(;;);',
    'if(a);else;',
    'throw{code:1};',
    'for(var k in o)delete o[k];',
    'var x2={get get(){return 1},set set(v){}};',
    'x=a?b=>c:d=>e;',
    'var d=new Date;',
    'a=b=c=1;',
    'var s2=1//comment at eof',
    'while(a)if(b)c();else break;',
    'var big={"quoted key":1,42:"num key"};',
    'a=(b,c,d);',
    'var neg=- -x;',
    'var tpl=`${`${x}`}`;',
    'f(...a,...b);',
    'let[first,...others]=list;',
    'const{length:len=0}=str;',
]


@pytest.mark.parametrize("source", DENSE_SOURCES)
def test_dense_minified_syntax_parses(source):
    assert parse(source)["type"] == "Program"


def test_dense_comma_style_extraction():
    records = parse_functions(DENSE_SOURCES[0])
    graphs = dict(records[0].variables)
    labels = {name: sorted((e.pivot, e.rel.label) for e in g.edges)
              for name, g in graphs.items()}
    assert labels["r"] == [("a", "assignment"), ("b", "assignment"),
                           ("getData", "fieldAccess"), ("getData", "methodCall")]
    assert labels["e"] == [("a", "fieldAccess"), ("b", "fieldAccess")]


def test_compaction_preserves_extraction_across_corpus():
    for rel, source in CORPUS.items():
        compacted = compact_whitespace(source)
        assert ast_equal(parse(compacted), parse(source)), rel
        before = [(r.name, r.variable_names()) for r in parse_functions(source)]
        after = [(r.name, r.variable_names())
                 for r in parse_functions(compacted)]
        assert before == after, rel


def test_recovery_from_compacted_minified_input(corpus_dir, corpus_index):
    fig1 = (corpus_dir / "clipboard" / "util.js").read_text()
    dense, truth = alpha_minify(fig1, seed=9, compact=True)
    assert "\n" not in dense.strip()
    rewritten, report = recover_file(dense, corpus_index, RecoveryConfig())
    applied = {v["minified"]: v["applied"]
               for v in report["functions"][0]["variables"]}
    hits = sum(1 for new, orig in truth["functions"][0]["variables"]
               if applied.get(new) == orig)
    assert hits == 6
    assert ast_equal(parse(rewritten), parse(fig1),
                     ignore_identifier_names=True)


@settings(max_examples=15, deadline=None)
@given(st.integers(min_value=0, max_value=10**9))
def test_minify_recover_soundness_on_random_sources(tmp_path_factory, seed):
    """Whatever the accuracy, the round trip must stay a pure renaming."""
    rng = random.Random(seed)
    files = random_corpus(rng, max_functions=12)
    root = tmp_path_factory.mktemp("snd")
    for rel, text in files.items():
        (root / rel).write_text(text)
    index = build_index(root)
    config = RecoveryConfig()
    for text in files.values():
        minified, _ = alpha_minify(text, seed=seed & 0xFFFF)
        rewritten, _ = recover_file(minified, index, config)
        assert ast_equal(parse(rewritten), parse(text),
                         ignore_identifier_names=True)


def test_scale_sanity(tmp_path):
    """A few hundred ambiguous functions: still fast, still sound."""
    rng = random.Random(2024)
    for i in range(40):
        n = rng.randint(3, 8)
        (tmp_path / f"mod_{i:03d}.js").write_text(
            f"// module {i}\n"
            + "\n".join(random_function(rng) for _ in range(n)))
    index = build_index(tmp_path)
    assert index.meta["functions"] > 150
    report = evaluate(tmp_path, index, RecoveryConfig())
    # the generator reuses a 12-name vocabulary, so collisions abound;
    # the floor only guards against total collapse
    assert report.accuracy > 0.1
    assert report.per_var_ms <= 50.0
