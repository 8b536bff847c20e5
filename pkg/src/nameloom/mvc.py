"""Multiple-variable context: co-occurrence association over name sets.

`assoc` is the ratio of functions containing every name in a set to the
functions containing any of them. The multi-variable score of an (ordered)
name assignment averages `assoc` over all its size-J subsets, since full
n-way co-occurrences are too sparse to observe directly; the combined form
blends that with the mean per-variable candidate score.
"""

from __future__ import annotations

from itertools import combinations

from .index import CorpusIndex


def assoc(names, index: CorpusIndex) -> float:
    """Association of a name-id set: |∩ postings| / |∪ postings|, 0 on 0/0."""
    ids = set(names)
    if not ids:
        raise ValueError("assoc requires at least one name")
    n_inter, n_union = index.count_all(ids)
    return n_inter / n_union if n_union else 0.0


def mc_score(names, index: CorpusIndex, j: int = 2,
             cache: "AssocCache | None" = None) -> float:
    """Mean association over all size-min(j, n) subsets of `names`.

    Duplicate ids are collapsed first; subsets whose union count is zero
    contribute 0 to the mean.
    """
    ids = sorted(set(names))
    if not ids:
        raise ValueError("mc_score requires at least one name")
    size = min(j, len(ids))
    lookup = cache.assoc if cache is not None else (lambda s: assoc(s, index))
    total = 0.0
    count = 0
    for subset in combinations(ids, size):
        total += lookup(frozenset(subset))
        count += 1
    return total / count


def mc_score_combined(names, st_scores, index: CorpusIndex, j: int = 2,
                      gamma: float = 1.0, theta: float = 0.0,
                      cache: "AssocCache | None" = None) -> float:
    """gamma * mc_score + theta * mean(st_scores)."""
    names = list(names)
    st_scores = list(st_scores)
    if len(names) != len(st_scores):
        raise ValueError("names and st_scores must align")
    mc = mc_score(names, index, j, cache) if gamma else 0.0
    st = sum(st_scores) / len(st_scores) if theta and st_scores else 0.0
    return gamma * mc + theta * st


class AssocCache:
    """Per-session memo for assoc lookups plus an incremental pair-sum helper
    for the default pairwise (J=2) beam scoring."""

    def __init__(self, index: CorpusIndex):
        self.index = index
        self._memo: dict[frozenset, float] = {}

    def assoc(self, ids: frozenset) -> float:
        hit = self._memo.get(ids)
        if hit is None:
            hit = assoc(ids, self.index)
            self._memo[ids] = hit
        return hit

    def pair_sum_with(self, new_id: int, existing) -> float:
        """Sum of assoc(new, x) over `existing` ids (dedup-aware)."""
        total = 0.0
        for other in set(existing):
            if other == new_id:
                continue
            total += self.assoc(frozenset((new_id, other)))
        return total
