"""Turn a pair of solutions into abstract and full contrastive explanations.

The abstract explanation is the quality difference q(S) - q(S') in the
model's native sense. The full explanation lists, per agent, the solution
variables whose value increased or decreased, each with its unsigned
objective contribution |c * delta|. Objective terms over non-solution
variables (auxiliary terms such as fairness counters, or coupling variables
that shadow the real decision variables) are reported as one residual
amount so the quality difference decomposes exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Tuple

from .errors import MismatchedVariableSetsError
from .hypothetical import HypotheticalProblem
from .model import MAXIMIZE, Assignment, Model, evaluate_objective
from .rationals import Rational, rational_to_json, simplify


@dataclass(frozen=True)
class ChangeSet:
    increases: Tuple[int, ...]  # solution variable ids with S'_v > S_v
    decreases: Tuple[int, ...]


@dataclass(frozen=True)
class ExplanationEntry:
    var_id: int
    name: str
    agents: Tuple[str, ...]
    delta: Rational
    contribution: Rational  # |c * delta|, sign carried by increase/decrease membership


@dataclass(frozen=True)
class Explanation:
    quality_diff: Rational  # q(S) - q(S'), native sense
    direction: str
    increases: Tuple[ExplanationEntry, ...]
    decreases: Tuple[ExplanationEntry, ...]
    per_agent: Mapping[str, Tuple[Tuple[ExplanationEntry, ...], Tuple[ExplanationEntry, ...]]]
    residual_fg: Rational  # objective diff over non-solution-variable terms
    length: int
    suboptimality_ratio: Optional[Fraction]  # q(S) / q(S'); None when q(S') == 0
    q_original: Rational
    q_hypothetical: Rational
    sense: str


def compute_changes(model: Model, original: Assignment, hypothetical: Assignment) -> ChangeSet:
    """Partition the solution variables that differ between the two assignments."""
    if len(original.values) != len(hypothetical.values):
        raise MismatchedVariableSetsError(
            f"assignments cover {len(original.values)} vs {len(hypothetical.values)} variables"
        )
    inc, dec = [], []
    for vid in model.solution_var_ids:
        before, after = original.values[vid], hypothetical.values[vid]
        if after > before:
            inc.append(vid)
        elif after < before:
            dec.append(vid)
    return ChangeSet(increases=tuple(inc), decreases=tuple(dec))


def _direction_label(model: Model, diff: Rational) -> str:
    noun = model.metadata.get("objective_noun", "objective" if model.sense == MAXIMIZE else "cost")
    if diff == 0:
        return f"no change in {noun}"
    if model.sense == MAXIMIZE:
        verb = "loss" if diff > 0 else "gain"
    else:
        verb = "increase" if diff < 0 else "decrease"
    return f"{verb} of {abs(diff)} {noun} units"


def abstract_explanation(model: Model, original: Assignment, hypothetical: Assignment):
    """Quality difference in native sense plus a human direction label."""
    diff = simplify(evaluate_objective(model, original) - evaluate_objective(model, hypothetical))
    return diff, _direction_label(model, diff)


def full_explanation(problem: HypotheticalProblem, s_prime: Assignment) -> Explanation:
    """Per-agent increase/decrease sets with contributions, metrics included.

    A change whose variable involves k agents shows up under all k agents in
    the per-agent view but exactly once in the flat sets and in the length.
    """
    model = problem.base_model
    original = problem.original_solution
    changes = compute_changes(model, original, s_prime)

    def entry(vid: int) -> ExplanationEntry:
        v = model.variables[vid]
        delta = simplify(s_prime.values[vid] - original.values[vid])
        coef = model.objective_coefficient(vid)
        return ExplanationEntry(
            var_id=vid,
            name=v.name,
            agents=v.agents,
            delta=delta,
            contribution=simplify(abs(coef * delta)),
        )

    increases = tuple(entry(vid) for vid in changes.increases)
    decreases = tuple(entry(vid) for vid in changes.decreases)

    per_agent = {}
    for agent in model.agents:
        inc_a = tuple(e for e in increases if agent in e.agents)
        dec_a = tuple(e for e in decreases if agent in e.agents)
        if inc_a or dec_a:
            per_agent[agent] = (inc_a, dec_a)

    q_orig = evaluate_objective(model, original)
    q_hyp = evaluate_objective(model, s_prime)
    diff = simplify(q_orig - q_hyp)

    solution_ids = set(model.solution_var_ids)
    residual = simplify(
        sum(
            c * (original.values[vid] - s_prime.values[vid])
            for vid, c in model.objective
            if vid not in solution_ids
        )
    )

    ratio = None
    if q_hyp != 0:
        ratio = Fraction(q_orig) / Fraction(q_hyp)

    return Explanation(
        quality_diff=diff,
        direction=_direction_label(model, diff),
        increases=increases,
        decreases=decreases,
        per_agent=per_agent,
        residual_fg=residual,
        length=len(increases) + len(decreases),
        suboptimality_ratio=ratio,
        q_original=q_orig,
        q_hypothetical=q_hyp,
        sense=model.sense,
    )


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RenderTemplate:
    """Domain phrasing hooks; the generic fallback uses raw variable names."""

    objective_noun: str = "objective"
    item_labels: Mapping[str, str] = field(default_factory=dict)  # variable name -> short label

    def label(self, entry: ExplanationEntry) -> str:
        return self.item_labels.get(entry.name, entry.name)


@dataclass(frozen=True)
class RenderedExplanation:
    headline: str
    table: Mapping
    text: str


EMPTY_MESSAGE = "The requested property is already satisfied; nothing changes."


def render_explanation(
    explanation: Explanation,
    instance=None,
    template: Optional[RenderTemplate] = None,
) -> RenderedExplanation:
    """Headline sentence plus a per-agent removed/added table (and a text mirror).

    A missing template falls back to generic phrasing; rendering never fails.
    """
    if template is None:
        template = _template_for_instance(instance)

    noun = template.objective_noun
    diff = explanation.quality_diff

    if explanation.length == 0:
        headline = EMPTY_MESSAGE
    elif diff == 0:
        headline = f"Total {noun} would not change"
    elif explanation.sense == MAXIMIZE:
        word = "decrease" if diff > 0 else "increase"
        headline = f"Total {noun} would {word} by {abs(diff)}"
    else:
        word = "increase" if diff < 0 else "decrease"
        headline = f"Total {noun} would {word} by {abs(diff)}"

    agents = [a for a in _agent_order(explanation)]
    removed = {}
    added = {}
    for agent in agents:
        inc_a, dec_a = explanation.per_agent.get(agent, ((), ()))
        if dec_a:
            removed[agent] = {
                "items": [template.label(e) for e in dec_a],
                "contribution": rational_to_json(simplify(sum(e.contribution for e in dec_a))),
            }
        if inc_a:
            added[agent] = {
                "items": [template.label(e) for e in inc_a],
                "contribution": rational_to_json(simplify(sum(e.contribution for e in inc_a))),
            }

    table = {
        "agents": agents,
        "removed_label": f"Removed items ({noun})",
        "added_label": f"Added items ({noun})",
        "removed": removed,
        "added": added,
    }
    if explanation.residual_fg != 0:
        table["residual_note"] = f"fairness/auxiliary terms: {_signed(explanation.residual_fg)}"

    text = _render_text(headline, table)
    return RenderedExplanation(headline=headline, table=table, text=text)


def _signed(value: Rational) -> str:
    return f"+{value}" if value > 0 else f"{value}"


def _agent_order(explanation: Explanation):
    return list(explanation.per_agent.keys())


def _cell(block, agent) -> str:
    info = block.get(agent)
    if not info:
        return "-"
    return f"{', '.join(info['items'])} ({info['contribution']})"


def _render_text(headline: str, table: Mapping) -> str:
    agents = table["agents"]
    if not agents:
        return headline
    rows = [
        [""] + list(agents),
        [table["removed_label"]] + [_cell(table["removed"], a) for a in agents],
        [table["added_label"]] + [_cell(table["added"], a) for a in agents],
    ]
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
    out = [headline, *lines]
    if "residual_note" in table:
        out.append(table["residual_note"])
    return "\n".join(out)


def _template_for_instance(instance) -> RenderTemplate:
    if instance is not None:
        try:
            from .domains import template_for_instance

            return template_for_instance(instance)
        except Exception:
            pass
    return RenderTemplate()


def explanation_to_json(explanation: Explanation) -> dict:
    def entries(seq):
        return [
            {
                "var": e.name,
                "agents": list(e.agents),
                "contribution": rational_to_json(e.contribution),
            }
            for e in seq
        ]

    return {
        "abstract": {
            "quality_diff": rational_to_json(explanation.quality_diff),
            "direction": explanation.direction,
        },
        "increases": entries(explanation.increases),
        "decreases": entries(explanation.decreases),
        "per_agent": {
            agent: {"increases": entries(inc), "decreases": entries(dec)}
            for agent, (inc, dec) in explanation.per_agent.items()
        },
        "residual_fg": rational_to_json(explanation.residual_fg),
        "length": explanation.length,
        "suboptimality_ratio": (
            None if explanation.suboptimality_ratio is None else float(explanation.suboptimality_ratio)
        ),
    }
