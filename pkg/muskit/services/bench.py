"""Batch evaluation: run named configurations over a CNF corpus, rank them by
MUS count and score them with PAR2.

Jobs run in a process pool; only the event loop touches the record list.
"""
import asyncio
import csv
import logging
from concurrent.futures import Executor, ProcessPoolExecutor, ThreadPoolExecutor
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence

from muskit.models.cnf import CnfFormula
from muskit.schemas.bench import BenchConfigFile, BenchConfigSpec, ConfigScore, RunRecord, Scoreboard
from muskit.schemas.encoding import EncodingOptions
from muskit.schemas.enumeration import Engine, EnumerationBudget, EnumerationResult, HybridPolicy
from muskit.services.cnf import read_dimacs
from muskit.services.enumerate import (
    asp_route_enumerate,
    bundled_seed_shrink,
    hybrid_enumerate,
    oracle_enumerate,
)

logger = logging.getLogger(__name__)

CSV_FIELDS = ["instance", "config", "engine", "mus_count", "solved", "elapsed", "timeout", "error"]


def instance_ranks(counts: Dict[str, int]) -> Dict[str, float]:
    """Rank configs on one instance by MUS count, ties sharing their mean position."""
    ordered = sorted(counts.items(), key=lambda kv: -kv[1])
    ranks: Dict[str, float] = {}
    start = 0
    while start < len(ordered):
        end = start
        while end + 1 < len(ordered) and ordered[end + 1][1] == ordered[start][1]:
            end += 1
        mean_position = (start + 1 + end + 1) / 2
        for name, _ in ordered[start:end + 1]:
            ranks[name] = mean_position
        start = end + 1
    return ranks


def _by_instance(records: Iterable[RunRecord]) -> Dict[str, Dict[str, RunRecord]]:
    grouped: Dict[str, Dict[str, RunRecord]] = {}
    for record in records:
        grouped.setdefault(record.instance, {})[record.config] = record
    return grouped


def rank_configs(records: Sequence[RunRecord]) -> Dict[str, float]:
    """Average rank per config; a config without a record on an instance counts 0 MUSes there."""
    if not records:
        raise ValueError("No run records to rank")
    configs = sorted({r.config for r in records})
    grouped = _by_instance(records)
    totals = {c: 0.0 for c in configs}
    for runs in grouped.values():
        counts = {c: runs[c].mus_count if c in runs else 0 for c in configs}
        for c, rank in instance_ranks(counts).items():
            totals[c] += rank
    return {c: totals[c] / len(grouped) for c in configs}


def par2(records: Sequence[RunRecord]) -> Dict[str, float]:
    scores: Dict[str, List[float]] = {}
    for r in records:
        scores.setdefault(r.config, []).append(r.elapsed if r.solved else 2 * r.timeout)
    return {c: sum(v) / len(v) for c, v in sorted(scores.items())}


def build_scoreboard(records: Sequence[RunRecord]) -> Scoreboard:
    ranks = rank_configs(records)
    penalties = par2(records)
    solved: Dict[str, int] = {c: 0 for c in ranks}
    for r in records:
        solved[r.config] += int(r.solved)
    scores = [
        ConfigScore(config=c, average_rank=ranks[c], solved=solved[c], par2=penalties.get(c, 0.0))
        for c in sorted(ranks, key=lambda c: (ranks[c], c))
    ]
    return Scoreboard(
        instances=len({r.instance for r in records}),
        timeout=max(r.timeout for r in records),
        scores=scores,
    )


def run_config(formula: CnfFormula, spec: BenchConfigSpec, timeout: float) -> EnumerationResult:
    budget = EnumerationBudget(timeout=timeout)
    flags = spec.flags
    if spec.engine is Engine.ORACLE:
        return oracle_enumerate(formula)
    if spec.engine is Engine.ASP_ROUTE:
        return asp_route_enumerate(formula, EncodingOptions(heuristics_enabled=flags), timeout=timeout)
    if spec.engine is Engine.SEED_SHRINK:
        return bundled_seed_shrink(formula, EncodingOptions(heuristics_enabled=flags), budget)
    policy = HybridPolicy(clause_threshold=spec.threshold) if spec.threshold else None
    return hybrid_enumerate(formula, policy, EncodingOptions(heuristics_enabled=flags), budget)


def run_job(path: str, spec: BenchConfigSpec, timeout: float) -> RunRecord:
    """One (instance, config) run; errors become unsolved records."""
    instance = Path(path).name
    try:
        result = run_config(read_dimacs(path), spec, timeout)
    except Exception as e:
        logger.error(f"Run {instance} / {spec.name} failed: {e}")
        return RunRecord(instance=instance, config=spec.name, mus_count=0, solved=False,
                         elapsed=0.0, timeout=timeout, error=str(e))
    solved = result.complete and result.elapsed <= timeout
    return RunRecord(
        instance=instance,
        config=spec.name,
        mus_count=result.count,
        solved=solved,
        elapsed=result.elapsed,
        timeout=timeout,
        engine=result.engine,
    )


def discover_instances(directory: Path) -> List[Path]:
    paths = sorted(p for p in Path(directory).iterdir() if p.suffix == ".cnf")
    if not paths:
        raise ValueError(f"No .cnf instances in {directory}")
    return paths


def load_configs(path: Path) -> List[BenchConfigSpec]:
    return BenchConfigFile.model_validate_json(Path(path).read_text()).configs


async def run_bench(
    instances: Sequence[Path],
    configs: Sequence[BenchConfigSpec],
    timeout: float,
    jobs: int = 1,
    processes: bool = True,
) -> List[RunRecord]:
    """Run every config on every instance with at most `jobs` runs in flight."""
    loop = asyncio.get_running_loop()
    semaphore = asyncio.Semaphore(jobs)
    records: List[RunRecord] = []
    executor: Executor = ProcessPoolExecutor(max_workers=jobs) if processes else ThreadPoolExecutor(max_workers=jobs)

    async def one(path: Path, spec: BenchConfigSpec) -> None:
        async with semaphore:
            record = await loop.run_in_executor(executor, run_job, str(path), spec, timeout)
        records.append(record)
        logger.info(f"{record.instance} / {record.config}: {record.mus_count} MUSes, solved={record.solved}")

    try:
        await asyncio.gather(*(one(p, s) for p in instances for s in configs))
    finally:
        executor.shutdown(wait=True)
    return sorted(records, key=lambda r: (r.instance, r.config))


def write_records_csv(path: Path, records: Iterable[RunRecord]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=CSV_FIELDS)
        w.writeheader()
        for r in records:
            row = r.model_dump(mode="json")
            row["elapsed"] = f"{r.elapsed:.6f}"
            w.writerow({k: row[k] if row[k] is not None else "" for k in CSV_FIELDS})


def read_records_csv(path: Path) -> List[RunRecord]:
    with Path(path).open(newline="") as f:
        return [
            RunRecord(
                instance=row["instance"],
                config=row["config"],
                engine=row["engine"] or None,
                mus_count=int(row["mus_count"]),
                solved=row["solved"] == "True",
                elapsed=float(row["elapsed"]),
                timeout=float(row["timeout"]),
                error=row["error"],
            )
            for row in csv.DictReader(f)
        ]


def write_scoreboard(path: Path, board: Scoreboard) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(board.model_dump_json(indent=2) + "\n")
