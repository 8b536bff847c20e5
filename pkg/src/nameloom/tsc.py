"""Task-specific context: how likely a variable name is inside a function
with a given name.

The score is a Jaccard-style ratio over function sets: functions containing
both the variable name and the function name, over functions containing
either. The tokenized variant takes the best ratio over the function name's
key tokens, which generalizes better on small corpora.
"""

from __future__ import annotations

from .extraction import tokenize_name
from .index import CorpusIndex

FULL_NAME = "full"
TOKENIZED = "token"


def _ratio(n_both: int, n_vn: int, n_fn: int) -> float:
    denom = n_vn + n_fn - n_both
    return n_both / denom if denom else 0.0


def task_score(vn: int | None, fn: str, index: CorpusIndex) -> float:
    """TC of variable-name id `vn` for functions named `fn`, in [0,1]."""
    return _ratio(*index.count_name_with_function_name(vn, fn, FULL_NAME))


def task_score_tokenized(vn: int | None, fn: str, index: CorpusIndex) -> float:
    """Best TC of `vn` over the key tokens of `fn`; 0 when `fn` has none."""
    best = 0.0
    for token in set(tokenize_name(fn)):
        best = max(best, _ratio(
            *index.count_name_with_function_name(vn, token, TOKENIZED)))
    return best


def task_candidates(fn: str, index: CorpusIndex, mode: str = FULL_NAME,
                    limit: int = 50) -> list[tuple[int, float]]:
    """All names scoring > 0 for `fn`, best first, truncated to `limit`.

    Ties break on the name string. Unknown or empty function names yield an
    empty list.
    """
    if limit < 1:
        raise ValueError("limit must be >= 1")
    if not fn:
        return []
    scorer = task_score if mode == FULL_NAME else task_score_tokenized
    scored = []
    for nid in index.name_postings:
        score = scorer(nid, fn, index)
        if score > 0.0:
            scored.append((nid, score))
    scored.sort(key=lambda item: (-item[1], index.name(item[0])))
    return scored[:limit]
