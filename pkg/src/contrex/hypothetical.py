"""Derive and solve the what-if problem behind a "why not P?" question.

Given a model, its solved assignment S, and a property P (variable fixings
the user wants enforced), we build a new model that

* keeps every original variable and constraint,
* adds one equality per fixing,
* adds one continuous change variable per solution variable, bounded by
  [0, u-l] and linked so it dominates |x' - s| on both sides,
* maximizes ``alpha * f(x') - beta * sum(change)`` in normalized max sense.

With the weights below both named variants are exactly lexicographic:
the quality-first variant cannot trade one unit of objective for any number
of changes, and the change-minimizing variant cannot trade one avoided
change for the whole objective range.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Tuple

from .errors import (
    InfeasibleTargetError,
    NonIntegralObjectiveError,
    PropertyInfeasibleError,
    SolveTimeoutError,
    UnknownVariableError,
    ValidationError,
)
from .model import (
    CONTINUOUS,
    EQ,
    LE,
    MAXIMIZE,
    Assignment,
    LinearConstraint,
    Model,
    Variable,
    build_model,
    check_feasibility,
    evaluate_objective,
    normalize_sense,
)
from .rationals import Rational, is_integral, simplify, to_rational
from .solver import INFEASIBLE, OPTIMAL, SolveParams, SolveResult, solve

VARIANT_QUALITY = "q"
VARIANT_CHANGES = "c"
VARIANT_CUSTOM = "custom"


@dataclass(frozen=True)
class Property:
    """The enforced hypothesis: fix named decision variables to 0/1."""

    fixings: Tuple[Tuple[int, int], ...]  # (variable id, target value)
    description: str = ""


@dataclass(frozen=True)
class Weights:
    alpha: Rational
    beta: Rational
    variant: str = VARIANT_CUSTOM

    def __post_init__(self):
        if self.alpha <= 0 or self.beta <= 0:
            raise ValidationError("weights must be strictly positive")


@dataclass(frozen=True)
class HypotheticalProblem:
    model: Model  # derived, max sense
    base_model: Model
    original_solution: Assignment  # complete over base_model
    prop: Property
    weights: Weights
    z_vars: Mapping[int, int]  # base solution var id -> change var id
    property_constraint_ids: Tuple[int, ...]
    z_constraint_ids: Tuple[int, ...]


@dataclass(frozen=True)
class HypotheticalOutcome:
    result: SolveResult
    s_prime: Assignment  # restriction to the base model's variables
    q_hypothetical: Rational  # base objective of s_prime, native sense
    total_change: Rational  # sum of change-variable values at the optimum


def derive_weights(
    model: Model,
    variant: str,
    alpha: Optional[Rational] = None,
    beta: Optional[Rational] = None,
) -> Weights:
    """Weights making the chosen variant exactly lexicographic.

    Quality-first: alpha = |S|+1, beta = 1 (a unit of objective outweighs
    every possible change, since the change sum is at most |S|).
    Change-minimizing: alpha = 1, beta = R+1 with R the objective's total
    coefficient range (one avoided change outweighs any quality swing).
    """
    n_solution = len(model.solution_var_ids)
    if variant in (VARIANT_QUALITY, VARIANT_CHANGES):
        if n_solution < 1:
            raise ValidationError("model has no solution variables")
        if any(not is_integral(c) for _vid, c in model.objective):
            raise NonIntegralObjectiveError(
                "lexicographic weights need an integral objective; pass custom alpha/beta"
            )
        if variant == VARIANT_QUALITY:
            return Weights(alpha=n_solution + 1, beta=1, variant=VARIANT_QUALITY)
        reach = 0
        for vid, c in model.objective:
            v = model.variables[vid]
            reach += abs(c) * (v.upper - v.lower)
        return Weights(alpha=1, beta=simplify(reach + 1), variant=VARIANT_CHANGES)
    if variant == VARIANT_CUSTOM:
        if alpha is None or beta is None:
            raise ValidationError("custom variant requires alpha and beta")
        return Weights(alpha=to_rational(alpha), beta=to_rational(beta), variant=VARIANT_CUSTOM)
    raise ValidationError(f"unknown variant {variant!r}")


def build_hypothetical(
    model: Model,
    solution: Assignment,
    prop: Property,
    weights: Weights,
) -> HypotheticalProblem:
    """Derived model: base + property equalities + change machinery + weighted objective."""
    if not prop.fixings:
        raise ValidationError("property needs at least one fixing")
    feas = check_feasibility(model, solution)
    if not feas.feasible:
        raise ValidationError("original solution is not feasible for the model")

    n = len(model.variables)
    for vid, target in prop.fixings:
        if not (0 <= vid < n):
            raise UnknownVariableError(f"variable id {vid} not in model")
        if target not in (0, 1):
            raise InfeasibleTargetError(f"fixing target must be 0 or 1, got {target!r}")
        v = model.variables[vid]
        if target < v.lower or target > v.upper:
            raise InfeasibleTargetError(f"target {target} outside bounds of {v.name!r}")

    norm = normalize_sense(model)
    variables = list(norm.variables)
    z_vars = {}
    for sid in norm.solution_var_ids:
        base = norm.variables[sid]
        zid = len(variables)
        variables.append(
            Variable(
                id=zid,
                name=f"delta[{base.name}]",
                kind=CONTINUOUS,
                lower=0,
                upper=simplify(base.upper - base.lower),
                is_solution_var=False,
                agents=base.agents,
            )
        )
        z_vars[sid] = zid

    constraints = list(norm.constraints)
    property_ids = []
    for vid, target in prop.fixings:
        property_ids.append(len(constraints))
        constraints.append(LinearConstraint(((vid, 1),), EQ, target, name=f"fix[{norm.variables[vid].name}]"))

    z_ids = []
    for sid, zid in z_vars.items():
        s_val = solution.values[sid]
        z_ids.append(len(constraints))
        constraints.append(LinearConstraint(((sid, 1), (zid, -1)), LE, s_val, name=f"chg+[{norm.variables[sid].name}]"))
        z_ids.append(len(constraints))
        constraints.append(LinearConstraint(((sid, -1), (zid, -1)), LE, simplify(-s_val), name=f"chg-[{norm.variables[sid].name}]"))

    alpha, beta = weights.alpha, weights.beta
    objective = [(vid, simplify(alpha * c)) for vid, c in norm.objective]
    objective += [(zid, simplify(-beta)) for zid in z_vars.values()]

    meta = dict(norm.metadata)
    meta["hypothetical"] = True
    # first-dive hints: per changed-vs-kept value, score alpha*c*v - beta*|v - s|
    # so the search reaches a near-original incumbent early
    hints = {}
    obj_map = {vid: c for vid, c in norm.objective}
    for sid in z_vars:
        v = norm.variables[sid]
        if not (isinstance(v.lower, int) and isinstance(v.upper, int)):
            continue  # hints must stay JSON-plain
        s_val = solution.values[sid]
        c = obj_map.get(sid, 0)
        score_hi = alpha * c * v.upper - beta * abs(v.upper - s_val)
        score_lo = alpha * c * v.lower - beta * abs(v.lower - s_val)
        hints[v.name] = v.upper if score_hi >= score_lo else v.lower
    meta["value_hint"] = hints
    derived = build_model(variables, constraints, objective, MAXIMIZE, norm.agents, meta)
    return HypotheticalProblem(
        model=derived,
        base_model=model,
        original_solution=solution,
        prop=prop,
        weights=weights,
        z_vars=z_vars,
        property_constraint_ids=tuple(property_ids),
        z_constraint_ids=tuple(z_ids),
    )


def solve_hypothetical(
    problem: HypotheticalProblem, params: SolveParams = SolveParams()
) -> HypotheticalOutcome:
    """Solve the derived model; report S' under the base objective, never the weighted one."""
    result = solve(problem.model, params)
    if result.status == INFEASIBLE:
        raise PropertyInfeasibleError(problem.prop)
    if result.status != OPTIMAL:
        raise SolveTimeoutError("hypothetical solve hit its limit")

    n_base = len(problem.base_model.variables)
    s_prime = Assignment(result.assignment.values[:n_base])
    q_hyp = evaluate_objective(problem.base_model, s_prime)
    total_change = simplify(sum(result.assignment.values[zid] for zid in problem.z_vars.values()))
    return HypotheticalOutcome(
        result=result,
        s_prime=s_prime,
        q_hypothetical=q_hyp,
        total_change=total_change,
    )


# ---------------------------------------------------------------------------
# JSON wire format
# ---------------------------------------------------------------------------

def property_to_json(model: Model, prop: Property) -> dict:
    return {
        "fixings": [[model.variables[vid].name, target] for vid, target in prop.fixings],
        "description": prop.description,
    }


def property_from_json(model: Model, payload: Mapping) -> Property:
    fixings = []
    for name, target in payload.get("fixings", ()):
        var = model.variable_by_name(name)
        if var is None:
            raise UnknownVariableError(f"unknown variable name {name!r}")
        fixings.append((var.id, int(target)))
    return Property(fixings=tuple(fixings), description=payload.get("description", ""))


def parse_variant(flag) -> Tuple[str, Optional[Rational], Optional[Rational]]:
    """Accept "q" | "c" | {"alpha": A, "beta": B} and return (variant, alpha, beta)."""
    if isinstance(flag, str):
        if flag in (VARIANT_QUALITY, VARIANT_CHANGES):
            return flag, None, None
        raise ValidationError(f"unknown variant flag {flag!r}")
    if isinstance(flag, Mapping) and "alpha" in flag and "beta" in flag:
        return VARIANT_CUSTOM, to_rational(flag["alpha"]), to_rational(flag["beta"])
    raise ValidationError(f"cannot parse variant {flag!r}")
