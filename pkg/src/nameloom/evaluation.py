"""Accuracy harness: minify, recover, compare against the originals.

A variable counts as a hit only when the recovered name string-equals the
original; variables the tool declines to name count as misses. Global
(top-level) variables are excluded from the denominator by default since
they are never minified; `all_vars` adds them back as trivial hits.

Reports carry timings for operators, but determinism checks must use the
canonical payload (timings stripped): wall-clock noise is the only
non-deterministic field.
"""

from __future__ import annotations

import json
import time
import zlib
from dataclasses import dataclass, field
from pathlib import Path

from .errors import EmptyTestSet, ParseError
from .extraction import analyze_source
from .index import CorpusIndex, build_index
from .minify import alpha_minify
from .recovery import RecoveryConfig, recover_analysis


@dataclass(frozen=True)
class SelfRecovery:
    """Test on the same files the index was built from (upper bound)."""

    label = "self-recovery"


@dataclass(frozen=True)
class HoldOut:
    """Test on fold `test_fold` of `folds`; the index must exclude it."""

    folds: int
    test_fold: int

    @property
    def label(self) -> str:
        return f"holdout-{self.test_fold}-of-{self.folds}"


@dataclass
class AccuracyReport:
    split: str
    config: dict
    total: int = 0
    hits: int = 0
    files: list[dict] = field(default_factory=list)
    skipped: list[dict] = field(default_factory=list)
    per_file_ms: float = 0.0
    per_var_ms: float = 0.0
    ablation: list[dict] | None = None

    @property
    def accuracy(self) -> float:
        return self.hits / self.total if self.total else 0.0

    def payload(self, timings: bool = True) -> dict:
        out = {
            "split": self.split,
            "config": self.config,
            "total_variables": self.total,
            "hits": self.hits,
            "accuracy": round(self.accuracy, 6),
            "files": [
                {k: v for k, v in row.items() if timings or k != "ms"}
                for row in self.files
            ],
            "skipped": self.skipped,
        }
        if timings:
            out["per_file_ms"] = round(self.per_file_ms, 3)
            out["per_var_ms"] = round(self.per_var_ms, 3)
        if self.ablation is not None:
            out["ablation"] = [
                {k: v for k, v in row.items() if timings or k != "per_var_ms"}
                for row in self.ablation
            ]
        return out

    def to_json(self, timings: bool = True) -> str:
        return json.dumps(self.payload(timings), indent=2, sort_keys=True) + "\n"

    def canonical_json(self) -> str:
        """Deterministic serialization: identical runs are byte-identical."""
        return self.to_json(timings=False)

    def to_text(self) -> str:
        lines = [
            f"split:     {self.split}",
            f"files:     {len(self.files)} evaluated, {len(self.skipped)} skipped",
            f"variables: {self.total}",
            f"hits:      {self.hits}",
            f"accuracy:  {self.accuracy:.4f}",
            f"time:      {self.per_file_ms:.2f} ms/file, "
            f"{self.per_var_ms:.3f} ms/variable",
        ]
        if self.ablation is not None:
            lines.append("")
            lines.append(f"{'contexts':<16} {'accuracy':>9} {'ms/var':>8}")
            for row in self.ablation:
                lines.append(f"{row['contexts']:<16} {row['accuracy']:>9.4f} "
                             f"{row['per_var_ms']:>8.3f}")
        return "\n".join(lines) + "\n"


def _file_seed(rel: str, seed: int) -> int:
    return zlib.crc32(rel.encode("utf-8")) ^ (seed & 0xFFFFFFFF)


def _config_snapshot(config: RecoveryConfig) -> dict:
    return {
        "phi": config.phi, "beam_k": config.beam_k, "assoc_j": config.assoc_j,
        "alpha": config.alpha, "beta": config.beta, "gamma": config.gamma,
        "theta": config.theta, "c_max": config.c_max,
        "tsc_mode": config.tsc_mode, "seed": config.seed,
    }


def test_files(corpus_dir: str | Path, split) -> list[Path]:
    root = Path(corpus_dir)
    files = sorted(root.rglob("*.js"),
                   key=lambda p: p.relative_to(root).as_posix())
    if isinstance(split, HoldOut):
        files = [p for i, p in enumerate(files) if i % split.folds == split.test_fold]
    if not files:
        raise EmptyTestSet(f"no test files under {root} for split")
    return files


def _evaluate_one_config(files: list[Path], root: Path, index: CorpusIndex,
                         config: RecoveryConfig, all_vars: bool):
    total = hits = 0
    rows = []
    skipped = []
    elapsed_total = 0.0
    for path in files:
        rel = path.relative_to(root).as_posix()
        try:
            source = path.read_text(encoding="utf-8", errors="replace")
            minified, truth = alpha_minify(source, seed=_file_seed(rel, config.seed))
            started = time.perf_counter()
            analysis = analyze_source(minified, rel)
            outcomes = recover_analysis(analysis, index, config)
            elapsed = (time.perf_counter() - started) * 1e3
        except ParseError as exc:
            skipped.append({"file": rel, "error": str(exc)})
            continue
        assignments = {fn.record.ordinal: result.assignment
                       for fn, result in outcomes}
        file_total = file_hits = 0
        for entry in truth["functions"]:
            assignment = assignments.get(entry["ordinal"], {})
            for minified_name, original in entry["variables"]:
                file_total += 1
                if assignment.get(minified_name) == original:
                    file_hits += 1
        if all_vars:
            for binding in analysis.scope_info.root.bindings.values():
                if binding.kind in ("var", "let", "const"):
                    file_total += 1
                    file_hits += 1    # globals are never minified
        total += file_total
        hits += file_hits
        elapsed_total += elapsed
        rows.append({"file": rel, "variables": file_total, "hits": file_hits,
                     "ms": round(elapsed, 3)})
    return total, hits, rows, skipped, elapsed_total


def ablation_configs(base: RecoveryConfig) -> list[tuple[str, RecoveryConfig]]:
    """The six context combinations, weakest first."""
    from dataclasses import replace
    gamma = base.gamma if base.gamma > 0 else 1.0
    return [
        ("tsc", replace(base, alpha=0.0, beta=1.0, gamma=0.0, theta=1.0)),
        ("svc", replace(base, alpha=1.0, beta=0.0, gamma=0.0, theta=1.0)),
        ("tsc+svc", replace(base, gamma=0.0, theta=1.0)),
        ("tsc+mvc", replace(base, alpha=0.0, beta=1.0, gamma=gamma,
                            theta=base.theta)),
        ("svc+mvc", replace(base, alpha=1.0, beta=0.0, gamma=gamma,
                            theta=base.theta)),
        ("tsc+svc+mvc", base),
    ]


def evaluate(corpus_dir: str | Path, index: CorpusIndex,
             config: RecoveryConfig, split=SelfRecovery(),
             ablate: bool = False, all_vars: bool = False) -> AccuracyReport:
    """Minify every test file, recover it, score exact-match accuracy."""
    config.validate()
    root = Path(corpus_dir)
    files = test_files(root, split)
    total, hits, rows, skipped, elapsed = _evaluate_one_config(
        files, root, index, config, all_vars)
    report = AccuracyReport(
        split=split.label,
        config=_config_snapshot(config),
        total=total,
        hits=hits,
        files=rows,
        skipped=skipped,
        per_file_ms=elapsed / len(rows) if rows else 0.0,
        per_var_ms=elapsed / total if total else 0.0,
    )
    if ablate:
        report.ablation = []
        for label, variant in ablation_configs(config):
            v_total, v_hits, v_rows, _, v_elapsed = _evaluate_one_config(
                files, root, index, variant, all_vars)
            report.ablation.append({
                "contexts": label,
                "accuracy": round(v_hits / v_total, 6) if v_total else 0.0,
                "hits": v_hits,
                "total": v_total,
                "per_var_ms": round(v_elapsed / v_total, 3) if v_total else 0.0,
            })
    return report


def cross_validate(corpus_dir: str | Path, folds: int,
                   config: RecoveryConfig, jobs: int = 1,
                   all_vars: bool = False) -> list[AccuracyReport]:
    """Per-fold evaluation: each fold is tested against an index built from
    the other folds."""
    root = Path(corpus_dir)
    files = sorted(root.rglob("*.js"),
                   key=lambda p: p.relative_to(root).as_posix())
    if len(files) < folds:
        raise EmptyTestSet(f"{len(files)} files cannot fill {folds} folds")
    reports = []
    for fold in range(folds):
        train = {p.relative_to(root).as_posix()
                 for i, p in enumerate(files) if i % folds != fold}
        index = build_index(root, jobs=jobs, include=train)
        reports.append(evaluate(root, index, config,
                                split=HoldOut(folds, fold), all_vars=all_vars))
    return reports


SWEEP_PARAMETERS = ("phi", "beam", "j", "alpha", "gamma", "datasize")


def sensitivity_sweep(corpus_dir: str | Path, parameter: str, grid: list,
                      config: RecoveryConfig,
                      index: CorpusIndex | None = None) -> list[dict]:
    """Evaluate once per grid value; returns rows of
    {parameter, value, accuracy, per_var_ms}.

    `alpha` sweeps the SC weight with beta = 1 - alpha; `gamma` sweeps the
    MC weight with theta = 1 - gamma. `datasize` interprets values as
    training fold counts out of max(grid)+1 folds, testing on the last.
    """
    from dataclasses import replace
    if parameter not in SWEEP_PARAMETERS:
        raise ValueError(f"unknown sweep parameter {parameter!r}; "
                         f"expected one of {SWEEP_PARAMETERS}")
    root = Path(corpus_dir)
    rows = []
    if parameter == "datasize":
        files = sorted(root.rglob("*.js"),
                       key=lambda p: p.relative_to(root).as_posix())
        folds_total = int(max(grid)) + 1
        rels = [p.relative_to(root).as_posix() for p in files]
        test_fold = folds_total - 1
        for value in grid:
            train = {rel for i, rel in enumerate(rels)
                     if (i % folds_total) < int(value)}
            fold_index = build_index(root, include=train)
            report = evaluate(root, fold_index, config,
                              split=HoldOut(folds_total, test_fold))
            rows.append({"parameter": parameter, "value": value,
                         "accuracy": round(report.accuracy, 6),
                         "per_var_ms": round(report.per_var_ms, 3)})
        return rows

    shared = index if index is not None else build_index(root)
    for value in grid:
        if parameter == "phi":
            variant = replace(config, phi=float(value))
        elif parameter == "beam":
            variant = replace(config, beam_k=int(value))
        elif parameter == "j":
            variant = replace(config, assoc_j=int(value))
        elif parameter == "alpha":
            variant = replace(config, alpha=float(value), beta=1.0 - float(value))
        else:
            variant = replace(config, gamma=float(value), theta=1.0 - float(value))
        report = evaluate(root, shared, variant)
        rows.append({"parameter": parameter, "value": value,
                     "accuracy": round(report.accuracy, 6),
                     "per_var_ms": round(report.per_var_ms, 3)})
    return rows


def sweep_csv(rows: list[dict]) -> str:
    lines = ["parameter,value,accuracy,per_var_ms"]
    for row in rows:
        lines.append(f"{row['parameter']},{row['value']},"
                     f"{row['accuracy']},{row['per_var_ms']}")
    return "\n".join(lines) + "\n"


def ablation_csv(rows: list[dict]) -> str:
    lines = ["contexts,accuracy,hits,total,per_var_ms"]
    for row in rows:
        lines.append(f"{row['contexts']},{row['accuracy']},{row['hits']},"
                     f"{row['total']},{row['per_var_ms']}")
    return "\n".join(lines) + "\n"
