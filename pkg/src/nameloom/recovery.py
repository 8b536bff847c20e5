"""Name recovery for one function or one file.

Per variable, the single-variable and task contexts are blended into one
ranked candidate list (ST = alpha * SC + beta * TC). The beam search then
assigns names jointly: start from the variable with the most relation
edges, repeatedly pick the remaining variable whose best extension scores
highest, extend every kept partial assignment with every candidate, score
with gamma * MC + theta * mean(ST), and keep the best K. Duplicate names
within one partial assignment are pruned at extension; an assignment that
loses every extension that way survives with a seeded-random pick (flagged
in diagnostics).

Every sort breaks ties the same way: score descending, then mean candidate
score, then name strings, then appearance order. Identical inputs and seed
give identical results.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field, replace

from .errors import EmptyRecovery
from .extraction import (FunctionInfo, FunctionRecord, RelationGraph,
                         SourceAnalysis, analyze_source)
from .index import CorpusIndex
from .mvc import AssocCache, mc_score
from .rename import Renamer
from .svc import SvcCandidate, single_var_candidates
from .tsc import FULL_NAME, TOKENIZED, task_candidates


@dataclass(frozen=True)
class RecoveryConfig:
    """Tuning knobs; the defaults are the accuracy-optimal settings."""

    phi: float = 0.8          # graph-matching threshold
    beam_k: int = 30          # beam width
    assoc_j: int = 2          # co-occurrence subset size
    alpha: float = 0.75       # SC weight in the ST blend
    beta: float = 0.25        # TC weight in the ST blend
    gamma: float = 1.0        # MC weight in beam scoring
    theta: float = 0.0        # mean-ST weight in beam scoring
    c_max: int = 50           # per-variable candidate cap
    tsc_mode: str = FULL_NAME
    seed: int = 0

    def validate(self) -> None:
        if not 0 < self.phi <= 1:
            raise ValueError(f"phi must be in (0, 1], got {self.phi}")
        if self.beam_k < 1:
            raise ValueError("beam_k must be >= 1")
        if self.assoc_j < 2:
            raise ValueError("assoc_j must be >= 2")
        if min(self.alpha, self.beta, self.gamma, self.theta) < 0:
            raise ValueError("weights must be non-negative")
        if self.alpha + self.beta <= 0:
            raise ValueError("alpha + beta must be positive")
        if self.c_max < 1:
            raise ValueError("c_max must be >= 1")
        if self.tsc_mode not in (FULL_NAME, TOKENIZED):
            raise ValueError(f"unknown tsc_mode {self.tsc_mode!r}")


@dataclass
class CandidateList:
    variable: str
    entries: list[tuple[int, str, float]]   # (name_id, name, st) best first

    def names(self) -> list[str]:
        return [name for _, name, _ in self.entries]


@dataclass
class BeamEntry:
    variables: tuple[str, ...]
    name_ids: tuple[int, ...]
    names: tuple[str, ...]
    sts: tuple[float, ...]
    mc: float
    pair_sum: float = 0.0     # cached sum of pairwise assocs (J=2 fast path)
    has_dup: bool = False     # a seeded-random fallback introduced a repeat

    @property
    def mean_st(self) -> float:
        return sum(self.sts) / len(self.sts)

    def sort_key(self):
        # a repeat-name fallback entry never outranks a clean one: its score
        # is inflated (duplicates collapse before the subset average)
        return (self.has_dup, -self.mc, -self.mean_st, self.names)


@dataclass
class RecoveryResult:
    ranked: list[tuple[dict[str, str], float]] = field(default_factory=list)
    alternatives: dict[str, list[str]] = field(default_factory=dict)
    unrecovered: list[str] = field(default_factory=list)
    candidate_lists: dict[str, CandidateList] = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)

    @property
    def assignment(self) -> dict[str, str]:
        """Top-1 assignment (empty when nothing was recovered)."""
        return self.ranked[0][0] if self.ranked else {}


def combine_st(svc_list: list[SvcCandidate] | None,
               tsc_list: list[tuple[int, float]],
               alpha: float, beta: float, c_max: int,
               index: CorpusIndex, variable: str = "") -> CandidateList:
    """Blend both candidate sources; a missing side contributes score 0."""
    if alpha < 0 or beta < 0:
        raise ValueError("weights must be non-negative")
    sc_by_id = {c.name_id: c.score for c in (svc_list or [])}
    tc_by_id = dict(tsc_list)
    entries = []
    for nid in sc_by_id.keys() | tc_by_id.keys():
        st = alpha * sc_by_id.get(nid, 0.0) + beta * tc_by_id.get(nid, 0.0)
        entries.append((nid, index.name(nid), st))
    entries.sort(key=lambda item: (-item[2], item[1]))
    return CandidateList(variable, entries[:c_max])


def pick_first_variable(items: list[tuple[str, RelationGraph]]) -> str:
    """The variable with the most relation edges; appearance breaks ties."""
    if not items:
        raise ValueError("no variables to pick from")
    best_var, best_edges = items[0][0], len(items[0][1].edges)
    for var, graph in items[1:]:
        if len(graph.edges) > best_edges:
            best_var, best_edges = var, len(graph.edges)
    return best_var


def _score_extension(entry: BeamEntry, nid: int, name: str, st: float,
                     cache: AssocCache, config: RecoveryConfig,
                     force_dup: bool = False) -> BeamEntry:
    name_ids = entry.name_ids + (nid,)
    sts = entry.sts + (st,)
    n = len(name_ids)
    if config.assoc_j == 2 and not entry.has_dup and not force_dup:
        pair_sum = entry.pair_sum + cache.pair_sum_with(nid, entry.name_ids)
        n_pairs = n * (n - 1) // 2
        mc = pair_sum / n_pairs if n_pairs else cache.assoc(frozenset((nid,)))
    else:
        pair_sum = 0.0
        mc = mc_score(name_ids, cache.index, config.assoc_j, cache)
    combined = config.gamma * mc + config.theta * (sum(sts) / n)
    return BeamEntry(
        variables=entry.variables,        # caller appends the variable
        name_ids=name_ids,
        names=entry.names + (name,),
        sts=sts,
        mc=combined,
        pair_sum=pair_sum,
        has_dup=entry.has_dup or force_dup,
    )


def _extensions_for(beam: list[BeamEntry], variable: str,
                    candidates: CandidateList, cache: AssocCache,
                    config: RecoveryConfig) -> list[BeamEntry]:
    """All duplicate-free extensions of the beam with `variable`'s names."""
    out = []
    for entry in beam:
        used = set(entry.name_ids)
        for nid, name, st in candidates.entries:
            if nid in used:
                continue
            ext = _score_extension(entry, nid, name, st, cache, config)
            out.append(replace(ext, variables=entry.variables + (variable,)))
    return out


def pick_next_variable(beam: list[BeamEntry],
                       remaining: dict[str, CandidateList],
                       config: RecoveryConfig, index: CorpusIndex,
                       cache: AssocCache | None = None) -> str:
    """Greedy choice: the variable whose best extension scores highest.

    Appearance order (the `remaining` dict order) breaks ties and is the
    fallback when no variable has a duplicate-free extension.
    """
    if not remaining:
        raise ValueError("no remaining variables")
    cache = cache or AssocCache(index)
    best_var = None
    best_score = float("-inf")
    for variable, candidates in remaining.items():
        exts = _extensions_for(beam, variable, candidates, cache, config)
        if not exts:
            continue
        top = max(ext.mc for ext in exts)
        if top > best_score:
            best_var, best_score = variable, top
    if best_var is None:
        return next(iter(remaining))
    return best_var


def mvar(candidates: dict[str, CandidateList],
         graphs: dict[str, RelationGraph],
         config: RecoveryConfig, index: CorpusIndex) -> RecoveryResult:
    """Beam search over joint assignments; returns the ranked beam.

    `candidates` must be in variable appearance order. Variables with empty
    candidate lists are reported unrecovered and excluded from the search.
    """
    config.validate()
    order = list(candidates)
    active = [v for v in order if candidates[v].entries]
    unrecovered = [v for v in order if not candidates[v].entries]
    if not active:
        raise EmptyRecovery("every candidate list is empty")

    cache = AssocCache(index)
    rng = random.Random(config.seed)
    fallbacks: list[str] = []

    first = pick_first_variable(
        [(v, graphs.get(v, RelationGraph(v, frozenset()))) for v in active])
    beam: list[BeamEntry] = []
    for nid, name, st in candidates[first].entries:
        singleton = cache.assoc(frozenset((nid,)))
        mc = config.gamma * singleton + config.theta * st
        beam.append(BeamEntry((first,), (nid,), (name,), (st,), mc))
    beam.sort(key=BeamEntry.sort_key)
    beam = beam[:config.beam_k]

    remaining = {v: candidates[v] for v in active if v != first}
    while remaining:
        variable = pick_next_variable(beam, remaining, config, index, cache)
        cand = remaining.pop(variable)
        extended = _extensions_for(beam, variable, cand, cache, config)
        # an entry whose every extension was pruned as a duplicate survives
        # with a seeded-random pick (repeat allowed, flagged)
        for entry in beam:
            if any(nid not in entry.name_ids for nid, _, _ in cand.entries):
                continue
            pick = rng.randrange(len(cand.entries))
            nid, name, st = cand.entries[pick]
            ext = _score_extension(entry, nid, name, st, cache, config,
                                   force_dup=True)
            extended.append(replace(ext, variables=entry.variables + (variable,)))
            fallbacks.append(variable)
        extended.sort(key=BeamEntry.sort_key)
        beam = extended[:config.beam_k]

    ranked = [(dict(zip(e.variables, e.names)), e.mc) for e in beam]
    alternatives = {
        v: candidates[v].names()[:5] for v in order if candidates[v].entries
    }
    return RecoveryResult(
        ranked=ranked,
        alternatives=alternatives,
        unrecovered=unrecovered,
        candidate_lists=dict(candidates),
        diagnostics={"duplicate_fallbacks": fallbacks},
    )


def build_candidates(record: FunctionRecord, index: CorpusIndex,
                     config: RecoveryConfig) -> dict[str, CandidateList]:
    """Per-variable combined candidate lists, in appearance order."""
    tsc_list = task_candidates(record.name, index, config.tsc_mode,
                               limit=config.c_max)
    out: dict[str, CandidateList] = {}
    for name, graph in record.variables:
        svc_list = None
        if graph.edges:
            svc_list = single_var_candidates(graph, index, config.phi)
        out[name] = combine_st(svc_list, tsc_list, config.alpha, config.beta,
                               config.c_max, index, variable=name)
    return out


def recover_function(record: FunctionRecord, index: CorpusIndex,
                     config: RecoveryConfig) -> RecoveryResult:
    """Full recovery for one function record.

    Zero-variable functions give an empty result; a function where no
    variable has any candidate reports every variable unrecovered.
    """
    config.validate()
    started = time.perf_counter()
    if not record.variables:
        return RecoveryResult(diagnostics={"elapsed_ms": 0.0})
    candidates = build_candidates(record, index, config)
    graphs = dict(record.variables)
    if not any(cl.entries for cl in candidates.values()):
        return RecoveryResult(
            unrecovered=[name for name, _ in record.variables],
            candidate_lists=candidates,
            diagnostics={"elapsed_ms": (time.perf_counter() - started) * 1e3},
        )
    result = mvar(candidates, graphs, config, index)
    result.diagnostics["elapsed_ms"] = (time.perf_counter() - started) * 1e3
    return result


def recover_analysis(analysis: SourceAnalysis, index: CorpusIndex,
                     config: RecoveryConfig) -> list[tuple[FunctionInfo, RecoveryResult]]:
    return [(fn, recover_function(fn.record, index, config))
            for fn in analysis.functions]


def recover_file(source: str, index: CorpusIndex, config: RecoveryConfig,
                 path: str = "<memory>") -> tuple[str, dict]:
    """Recover every function in a file and apply the top-1 assignment.

    Renames are applied with capture checks; an unsafe candidate falls back
    to the next one, and a variable with no safe candidate keeps its
    minified name. Returns (rewritten source, per-function report).
    """
    analysis = analyze_source(source, path)
    outcomes = recover_analysis(analysis, index, config)
    renamer = Renamer(analysis)

    report_functions = []
    for fn, result in outcomes:
        assignment = result.assignment
        st_of = {
            v: {name: st for _, name, st in clist.entries}
            for v, clist in result.candidate_lists.items()
        }
        var_reports = []
        for var in fn.variables:
            chosen = assignment.get(var.name)
            ranked_names = []
            if chosen is not None:
                ranked_names.append(chosen)
            clist = result.candidate_lists.get(var.name)
            if clist is not None:
                ranked_names.extend(
                    n for n in clist.names() if n not in ranked_names)
            applied = None
            for name in ranked_names:
                if renamer.is_safe(var.binding, name):
                    renamer.rename(var.binding, name)
                    applied = name
                    break
            reason = None
            if applied is None:
                reason = "no-candidates" if not ranked_names else "conflict"
            var_reports.append({
                "minified": var.name,
                "recovered": chosen,
                "applied": applied,
                "score": st_of.get(var.name, {}).get(chosen),
                "alternatives": ranked_names[1:6],
                "unrecovered_reason": reason,
            })
        report_functions.append({
            "ordinal": fn.record.ordinal,
            "name": fn.record.name,
            "span": list(fn.record.span),
            "assignment_score": result.ranked[0][1] if result.ranked else None,
            "variables": var_reports,
            "unrecovered": result.unrecovered,
            "duplicate_fallbacks": result.diagnostics.get("duplicate_fallbacks", []),
            "elapsed_ms": round(result.diagnostics.get("elapsed_ms", 0.0), 3),
        })

    rewritten = renamer.apply()
    report = {
        "file": path,
        "functions": report_functions,
        "config": {
            "phi": config.phi, "beam_k": config.beam_k,
            "assoc_j": config.assoc_j, "alpha": config.alpha,
            "beta": config.beta, "gamma": config.gamma,
            "theta": config.theta, "c_max": config.c_max,
            "tsc_mode": config.tsc_mode, "seed": config.seed,
        },
    }
    return rewritten, report
