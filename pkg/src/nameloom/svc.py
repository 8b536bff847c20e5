"""Single-variable context: match one relation graph against the corpus.

The graph matching score of a stored graph for a query graph is the
fraction of the query's edges found (identically) in the stored graph. A
name scores the maximum over all of its stored graphs; names whose best
graph clears the threshold become candidates.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import MatchError
from .extraction import RelationGraph
from .index import CorpusIndex

_EPS = 1e-12   # float guard: ratios of small ints vs. a decimal threshold


@dataclass(frozen=True)
class SvcCandidate:
    name_id: int
    name: str
    score: float


def match_score(query: RelationGraph, stored: RelationGraph) -> float:
    """rho(query, stored): share of query edges present in stored, in [0,1].

    Undefined (MatchError) for zero-edge queries; such variables must be
    routed to the task-specific context instead.
    """
    if not query.edges:
        raise MatchError(f"variable {query.variable!r} has no relation edges")
    return len(query.edges & stored.edges) / len(query.edges)


def single_var_candidates(query: RelationGraph, index: CorpusIndex,
                          phi: float) -> list[SvcCandidate]:
    """Names with at least one stored graph scoring >= phi, best score each.

    Sorted by score descending, ties by name ascending. Equals brute force
    over the whole graph store but runs off the edge postings.
    """
    if not 0 < phi <= 1:
        raise ValueError(f"phi must be in (0, 1], got {phi}")
    if not query.edges:
        raise MatchError(f"variable {query.variable!r} has no relation edges")
    denom = len(query.edges)
    best: dict[int, float] = {}
    for nid, matches in index.candidates_by_edges(query).items():
        top = max(matched for _, matched in matches) / denom
        if top + _EPS >= phi:
            best[nid] = top
    candidates = [
        SvcCandidate(nid, index.name(nid), score)
        for nid, score in best.items()
    ]
    candidates.sort(key=lambda c: (-c.score, c.name))
    return candidates
