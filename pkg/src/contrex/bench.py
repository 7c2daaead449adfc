"""Desk-scale computational evaluation: timings and quality-vs-length trade-off.

For each (size, instance, question, variant) cell the runner solves the base
problem once per instance, derives and solves the what-if problem per
question, and records inclusive timings (model building plus solving) along
with the quality metrics. Output is CSV; plotting is out of scope.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, List, Mapping, Optional, Sequence, Tuple

from . import domains
from .errors import PropertyInfeasibleError, SolveTimeoutError
from .explain import Explanation, full_explanation
from .hypothetical import build_hypothetical, derive_weights, solve_hypothetical
from .model import Assignment, Model, evaluate_objective
from .rationals import Rational
from .solver import OPTIMAL, SolveParams, solve

CSV_COLUMNS = (
    "domain",
    "size",
    "instance_seed",
    "question_id",
    "variant",
    "status",
    "t_solve_s",
    "t_explain_s",
    "q_original",
    "q_hypothetical",
    "subopt_ratio",
    "expl_length",
)

DEFAULT_LADDERS = {
    "kp": [{"agents": a, "items": 10} for a in (4, 6, 8, 10)],
    "kp-fair": [{"agents": a, "items": 10} for a in (4, 6, 8, 10)],
    "tap": [{"agents": 5, "tasks": t} for t in (10, 15, 20, 25)],
    "wsp": [{"agents": a, "tables": 3} for a in (6, 8, 10)],
    "cvrp": [{"points": p, "vehicles": 2} for p in (4, 5, 6)],
}

_SIZE_KEY = {"kp": "agents", "kp-fair": "agents", "tap": "tasks", "wsp": "agents", "cvrp": "points"}


@dataclass(frozen=True)
class ExperimentConfig:
    domain: str
    sizes: Tuple[Mapping, ...]
    instances_per_size: int = 10
    questions_per_instance: int = 10
    variants: Tuple[str, ...] = ("q", "c")
    seed: int = 0
    solver: SolveParams = field(default_factory=SolveParams)

    def __post_init__(self):
        if self.instances_per_size < 1 or self.questions_per_instance < 1:
            raise ValueError("all counts must be >= 1")


@dataclass(frozen=True)
class BenchRecord:
    domain: str
    size: int
    instance_seed: int
    question_id: str
    variant: str
    status: str
    t_solve_s: float
    t_explain_s: Optional[float]
    q_original: Optional[Rational]
    q_hypothetical: Optional[Rational]
    subopt_ratio: Optional[Fraction]
    expl_length: Optional[int]


@dataclass(frozen=True)
class Metrics:
    ratio: Optional[Fraction]
    length: int
    status: str  # "ok" | "division-by-zero"


@dataclass(frozen=True)
class BenchCell:
    """One record plus the live objects, for invariant checks in tests."""

    record: BenchRecord
    model: Model
    solution: Optional[Assignment]
    s_prime: Optional[Assignment]
    explanation: Optional[Explanation]
    total_change: Optional[Rational]


def default_config(domain: str, **overrides) -> ExperimentConfig:
    if domain not in DEFAULT_LADDERS:
        raise ValueError(f"no default ladder for domain {domain!r}")
    return ExperimentConfig(domain=domain, sizes=tuple(DEFAULT_LADDERS[domain]), **overrides)


def compute_metrics(model: Model, original: Assignment, hypothetical: Assignment, explanation: Explanation) -> Metrics:
    """Suboptimality ratio q(S)/q(S') in native sense, and the explanation length."""
    q_orig = evaluate_objective(model, original)
    q_hyp = evaluate_objective(model, hypothetical)
    if q_hyp == 0:
        return Metrics(ratio=None, length=explanation.length, status="division-by-zero")
    return Metrics(ratio=Fraction(q_orig) / Fraction(q_hyp), length=explanation.length, status="ok")


def size_label(domain: str, size_params: Mapping) -> int:
    return int(size_params[_SIZE_KEY.get(domain, next(iter(size_params)))])


def instance_seed_for(config: ExperimentConfig, size_index: int, instance_index: int) -> int:
    return config.seed * 100003 + size_index * 1009 + instance_index


def iter_cells(config: ExperimentConfig) -> Iterator[BenchCell]:
    """Deterministic cell stream; solver timeouts become records, not crashes."""
    for si, size_params in enumerate(config.sizes):
        size = size_label(config.domain, size_params)
        for ii in range(config.instances_per_size):
            seed = instance_seed_for(config, si, ii)
            t0 = time.monotonic()
            instance = domains.generate_instance(config.domain, size_params, seed)
            model = domains.build_model(instance)
            base = solve(model, config.solver)
            t_solve = time.monotonic() - t0
            if base.status != OPTIMAL:
                yield BenchCell(
                    record=BenchRecord(
                        domain=config.domain,
                        size=size,
                        instance_seed=seed,
                        question_id="-",
                        variant="-",
                        status=base.status,
                        t_solve_s=t_solve,
                        t_explain_s=None,
                        q_original=None,
                        q_hypothetical=None,
                        subopt_ratio=None,
                        expl_length=None,
                    ),
                    model=model,
                    solution=base.assignment,
                    s_prime=None,
                    explanation=None,
                    total_change=None,
                )
                continue
            q_original = evaluate_objective(model, base.assignment)
            questions = domains.enumerate_questions(model, base.assignment)
            sampled = domains.sample_questions(questions, config.questions_per_instance, seed + 7919)
            for question in sampled:
                for variant in config.variants:
                    yield _ask_cell(
                        config, model, instance, base.assignment, q_original,
                        size, seed, question, variant, t_solve,
                    )


def _ask_cell(config, model, instance, solution, q_original, size, seed, question, variant, t_solve) -> BenchCell:
    t0 = time.monotonic()
    status = OPTIMAL
    s_prime = explanation = total_change = None
    q_hyp = ratio = length = None
    try:
        weights = derive_weights(model, variant)
        problem = build_hypothetical(model, solution, question.prop, weights)
        outcome = solve_hypothetical(problem, config.solver)
        s_prime = outcome.s_prime
        total_change = outcome.total_change
        explanation = full_explanation(problem, s_prime)
        metrics = compute_metrics(model, solution, s_prime, explanation)
        status = OPTIMAL if metrics.status == "ok" else "DivisionByZero"
        q_hyp = outcome.q_hypothetical
        ratio = metrics.ratio
        length = metrics.length
    except PropertyInfeasibleError:
        status = "PropertyInfeasible"
    except SolveTimeoutError:
        status = "TimedOut"
    t_explain = time.monotonic() - t0
    return BenchCell(
        record=BenchRecord(
            domain=config.domain,
            size=size,
            instance_seed=seed,
            question_id=question.variable,
            variant=variant,
            status=status,
            t_solve_s=t_solve,
            t_explain_s=t_explain,
            q_original=q_original if status in (OPTIMAL, "DivisionByZero") else None,
            q_hypothetical=q_hyp,
            subopt_ratio=ratio,
            expl_length=length,
        ),
        model=model,
        solution=solution,
        s_prime=s_prime,
        explanation=explanation,
        total_change=total_change,
    )


def run_experiment(config: ExperimentConfig) -> List[BenchRecord]:
    """All records in canonical order (sorted keys, independent of execution order)."""
    records = [cell.record for cell in iter_cells(config)]
    records.sort(key=lambda r: (r.domain, r.size, r.instance_seed, r.question_id, r.variant))
    return records


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.6f}"
    if isinstance(value, Fraction):
        return repr(float(value))
    return str(value)


def records_to_rows(records: Sequence[BenchRecord]) -> List[List[str]]:
    rows = [list(CSV_COLUMNS)]
    for r in records:
        rows.append(
            [
                r.domain,
                str(r.size),
                str(r.instance_seed),
                r.question_id,
                r.variant,
                r.status,
                _fmt(r.t_solve_s),
                _fmt(r.t_explain_s),
                _fmt(r.q_original),
                _fmt(r.q_hypothetical),
                _fmt(r.subopt_ratio),
                _fmt(r.expl_length),
            ]
        )
    return rows


def write_csv(records: Sequence[BenchRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerows(records_to_rows(records))


def config_from_json(payload: Mapping) -> ExperimentConfig:
    domain = payload["domain"]
    sizes = tuple(payload.get("sizes") or DEFAULT_LADDERS[domain])
    solver_payload = payload.get("solver", {})
    solver = SolveParams(
        time_limit=float(solver_payload.get("time_limit", 60.0)),
        node_limit=solver_payload.get("node_limit"),
    )
    return ExperimentConfig(
        domain=domain,
        sizes=sizes,
        instances_per_size=int(payload.get("instances_per_size", 10)),
        questions_per_instance=int(payload.get("questions_per_instance", 10)),
        variants=tuple(payload.get("variants", ("q", "c"))),
        seed=int(payload.get("seed", 0)),
        solver=solver,
    )
