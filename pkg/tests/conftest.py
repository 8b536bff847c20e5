import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fixtures import write_corpus  # noqa: E402

from nameloom.index import build_index  # noqa: E402
from nameloom.recovery import RecoveryConfig  # noqa: E402


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("corpus")
    return write_corpus(root)


@pytest.fixture(scope="session")
def corpus_index(corpus_dir):
    return build_index(corpus_dir)


@pytest.fixture(scope="session")
def default_config():
    return RecoveryConfig()


# the spec's 4-function co-occurrence fixture:
# F1 getData:{data,i}  F2:{data,i}  F3:{data}  F4:{x}
FOUR_FN_FILES = {
    "f1.js": "function getData() { var data = src.fetch(); var i = 0; use(data, i); }",
    "f2.js": "function second() { var data = src.fetch(); var i = 1; use(data, i); }",
    "f3.js": "function third() { var data = src.load(); emit(data); }",
    "f4.js": "function fourth() { var x = 9; emit(x); }",
}


@pytest.fixture(scope="session")
def four_fn_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("four")
    for name, text in FOUR_FN_FILES.items():
        (root / name).write_text(text)
    return root


@pytest.fixture(scope="session")
def four_fn_index(four_fn_dir):
    return build_index(four_fn_dir)
