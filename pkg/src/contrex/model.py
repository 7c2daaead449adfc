"""Linear optimization models over typed variables.

A model is a sense-tagged linear objective plus linear constraints over
binary / bounded-integer / continuous variables. Some variables are flagged
as *solution variables*: the subset that actually represents a solution and
is the only part counted when diffing two solutions. Every variable carries
the (possibly empty) set of agents it involves.

Models are immutable value objects; all derivations build new models.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Optional, Sequence, Tuple

from .errors import (
    IncompleteAssignmentError,
    NonIntegralValueError,
    ValidationError,
)
from .rationals import Rational, is_integral, rational_to_json, simplify, to_rational

BINARY = "binary"
INTEGER = "integer"
CONTINUOUS = "continuous"
KINDS = (BINARY, INTEGER, CONTINUOUS)

LE = "<="
EQ = "="
GE = ">="
RELATIONS = (LE, EQ, GE)

MAXIMIZE = "max"
MINIMIZE = "min"

# absolute feasibility tolerance, only relevant when a backend hands us floats
FLOAT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Variable:
    id: int
    name: str
    kind: str = BINARY
    lower: Rational = 0
    upper: Rational = 1
    is_solution_var: bool = False
    agents: Tuple[str, ...] = ()

    @property
    def is_integer_kind(self) -> bool:
        return self.kind in (BINARY, INTEGER)


@dataclass(frozen=True)
class LinearConstraint:
    terms: Tuple[Tuple[int, Rational], ...]
    relation: str
    rhs: Rational
    name: str = ""


@dataclass(frozen=True)
class Model:
    variables: Tuple[Variable, ...]
    constraints: Tuple[LinearConstraint, ...]
    objective: Tuple[Tuple[int, Rational], ...]
    sense: str
    agents: Tuple[str, ...]
    metadata: Mapping = field(default_factory=dict)

    def variable_by_name(self, name: str) -> Optional[Variable]:
        return self._name_index().get(name)

    def _name_index(self):
        # lazy cache; object.__setattr__ because the dataclass is frozen
        cache = self.__dict__.get("_names")
        if cache is None:
            cache = {v.name: v for v in self.variables}
            object.__setattr__(self, "_names", cache)
        return cache

    @property
    def solution_var_ids(self) -> Tuple[int, ...]:
        return tuple(v.id for v in self.variables if v.is_solution_var)

    def objective_coefficient(self, var_id: int) -> Rational:
        cache = self.__dict__.get("_obj_map")
        if cache is None:
            cache = {vid: coef for vid, coef in self.objective}
            object.__setattr__(self, "_obj_map", cache)
        return cache.get(var_id, 0)


@dataclass(frozen=True)
class Assignment:
    """A complete valuation, indexed densely by variable id."""

    values: Tuple[Rational, ...]

    def value(self, var_id: int) -> Rational:
        return self.values[var_id]

    def as_dict(self, model: Model) -> dict:
        return {v.name: self.values[v.id] for v in model.variables}


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    violations: Tuple[Tuple[int, Rational], ...] = ()  # (constraint index, slack)


def _check_terms(terms, n_vars, where):
    seen = set()
    out = []
    for vid, coef in terms:
        if not isinstance(vid, int) or not (0 <= vid < n_vars):
            raise ValidationError(f"{where}: variable id {vid!r} out of range")
        if vid in seen:
            raise ValidationError(f"{where}: duplicate variable id {vid}")
        seen.add(vid)
        out.append((vid, to_rational(coef)))
    return tuple(out)


def build_model(
    variables: Sequence[Variable],
    constraints: Sequence[LinearConstraint],
    objective: Iterable[Tuple[int, Rational]],
    sense: str,
    agents: Sequence[str] = (),
    metadata: Optional[Mapping] = None,
) -> Model:
    """Validated constructor; rejects the first violated structural rule."""
    if sense not in (MAXIMIZE, MINIMIZE):
        raise ValidationError(f"unknown sense {sense!r}")
    agent_list = tuple(agents)
    if len(set(agent_list)) != len(agent_list):
        raise ValidationError("duplicate agent identifiers")

    vars_ = []
    names_seen = set()
    for i, v in enumerate(variables):
        if v.id != i:
            raise ValidationError(f"variable ids must be dense: expected {i}, got {v.id}")
        if v.kind not in KINDS:
            raise ValidationError(f"variable {v.name!r}: unknown kind {v.kind!r}")
        lower, upper = to_rational(v.lower), to_rational(v.upper)
        if lower > upper:
            raise ValidationError(f"variable {v.name!r}: lower {lower} > upper {upper}")
        if v.kind == BINARY and (lower != 0 or upper != 1):
            raise ValidationError(f"variable {v.name!r}: binary bounds must be [0, 1]")
        if v.kind == INTEGER:
            # round inward: lossless for the integral feasible set
            lower, upper = math.ceil(lower), math.floor(upper)
            if lower > upper:
                raise ValidationError(f"variable {v.name!r}: no integral point in bounds")
        if v.is_solution_var:
            if not v.name:
                raise ValidationError(f"solution variable {v.id} has an empty name")
            if v.name in names_seen:
                raise ValidationError(f"duplicate solution variable name {v.name!r}")
        if v.name:
            names_seen.add(v.name)
        agent_set = tuple(v.agents)
        for a in agent_set:
            if a not in agent_list:
                raise ValidationError(f"variable {v.name!r}: agent {a!r} not declared on the model")
        vars_.append(replace(v, lower=lower, upper=upper, agents=agent_set))

    n = len(vars_)
    cons = []
    for ci, c in enumerate(constraints):
        if c.relation not in RELATIONS:
            raise ValidationError(f"constraint {ci}: unknown relation {c.relation!r}")
        cons.append(
            LinearConstraint(
                terms=_check_terms(c.terms, n, f"constraint {ci}"),
                relation=c.relation,
                rhs=to_rational(c.rhs),
                name=c.name,
            )
        )

    obj = _check_terms(objective, n, "objective")
    meta = dict(metadata) if metadata else {}
    return Model(
        variables=tuple(vars_),
        constraints=tuple(cons),
        objective=obj,
        sense=sense,
        agents=agent_list,
        metadata=meta,
    )


def _require_complete(model: Model, assignment: Assignment):
    if len(assignment.values) != len(model.variables):
        raise IncompleteAssignmentError(
            f"assignment covers {len(assignment.values)} of {len(model.variables)} variables"
        )


def evaluate_objective(model: Model, assignment: Assignment) -> Rational:
    """Objective value in the model's native sense (no sign normalization)."""
    _require_complete(model, assignment)
    return simplify(sum(coef * assignment.values[vid] for vid, coef in model.objective))


def _activity(constraint: LinearConstraint, values) -> Rational:
    return sum(coef * values[vid] for vid, coef in constraint.terms)


def check_feasibility(model: Model, assignment: Assignment) -> FeasibilityResult:
    """Exact constraint check; 1e-9 absolute tolerance applies only to float data."""
    _require_complete(model, assignment)
    values = assignment.values
    has_floats = any(isinstance(x, float) for x in values)
    for v in model.variables:
        x = values[v.id]
        if v.is_integer_kind:
            if isinstance(x, float):
                if abs(x - round(x)) > FLOAT_TOLERANCE:
                    raise NonIntegralValueError(f"{v.name or v.id} = {x}")
            elif not is_integral(x):
                raise NonIntegralValueError(f"{v.name or v.id} = {x}")

    violations = []
    for ci, c in enumerate(model.constraints):
        act = _activity(c, values)
        if c.relation == LE:
            slack = c.rhs - act
            bad = slack < (-FLOAT_TOLERANCE if has_floats else 0)
        elif c.relation == GE:
            slack = act - c.rhs
            bad = slack < (-FLOAT_TOLERANCE if has_floats else 0)
        else:
            slack = c.rhs - act
            bad = (abs(slack) > FLOAT_TOLERANCE) if has_floats else (slack != 0)
        if bad:
            violations.append((ci, simplify(slack) if not isinstance(slack, float) else slack))
    for v in model.variables:
        x = values[v.id]
        eps = FLOAT_TOLERANCE if isinstance(x, float) else 0
        if x < v.lower - eps:
            violations.append((-1 - v.id, simplify(x - v.lower)))  # negative pseudo-index: bound violation
        elif x > v.upper + eps:
            violations.append((-1 - v.id, simplify(v.upper - x)))
    if violations:
        return FeasibilityResult(False, tuple(violations))
    return FeasibilityResult(True)


def normalize_sense(model: Model) -> Model:
    """Equivalent maximization model; a metadata flag records the flip for un-flipping q at the boundary."""
    if model.sense == MAXIMIZE:
        return model
    meta = dict(model.metadata)
    meta["sense_flipped"] = True
    return Model(
        variables=model.variables,
        constraints=model.constraints,
        objective=tuple((vid, simplify(-coef)) for vid, coef in model.objective),
        sense=MAXIMIZE,
        agents=model.agents,
        metadata=meta,
    )


# ---------------------------------------------------------------------------
# JSON wire format
# ---------------------------------------------------------------------------

def model_to_json(model: Model) -> dict:
    return {
        "sense": model.sense,
        "agents": list(model.agents),
        "variables": [
            {
                "name": v.name,
                "kind": v.kind,
                "lb": rational_to_json(v.lower),
                "ub": rational_to_json(v.upper),
                "solution": v.is_solution_var,
                "agents": list(v.agents),
            }
            for v in model.variables
        ],
        "constraints": [
            {
                "terms": [[model.variables[vid].name, rational_to_json(coef)] for vid, coef in c.terms],
                "rel": c.relation,
                "rhs": rational_to_json(c.rhs),
            }
            for c in model.constraints
        ],
        "objective": [[model.variables[vid].name, rational_to_json(coef)] for vid, coef in model.objective],
        "metadata": dict(model.metadata),
    }


def model_from_json(payload: Mapping) -> Model:
    try:
        raw_vars = payload["variables"]
        variables = [
            Variable(
                id=i,
                name=rv["name"],
                kind=rv.get("kind", BINARY),
                lower=to_rational(rv.get("lb", 0)),
                upper=to_rational(rv.get("ub", 1)),
                is_solution_var=bool(rv.get("solution", False)),
                agents=tuple(rv.get("agents", ())),
            )
            for i, rv in enumerate(raw_vars)
        ]
        ids = {v.name: v.id for v in variables}

        def _term(pair):
            name, coef = pair
            if name not in ids:
                raise ValidationError(f"unknown variable name {name!r}")
            return (ids[name], to_rational(coef))

        constraints = [
            LinearConstraint(
                terms=tuple(_term(t) for t in rc["terms"]),
                relation=rc["rel"],
                rhs=to_rational(rc["rhs"]),
                name=rc.get("name", ""),
            )
            for rc in payload.get("constraints", ())
        ]
        objective = tuple(_term(t) for t in payload.get("objective", ()))
        return build_model(
            variables,
            constraints,
            objective,
            sense=payload["sense"],
            agents=payload.get("agents", ()),
            metadata=payload.get("metadata"),
        )
    except ValidationError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed model JSON: {exc}") from exc


def model_json_dumps(model: Model) -> str:
    return json.dumps(model_to_json(model), sort_keys=True, separators=(",", ":"))


def assignment_to_json(model: Model, assignment: Assignment) -> dict:
    return {v.name: rational_to_json(assignment.values[v.id]) for v in model.variables}


def assignment_from_json(model: Model, payload: Mapping) -> Assignment:
    values = [0] * len(model.variables)
    for v in model.variables:
        if v.name not in payload:
            raise IncompleteAssignmentError(f"missing value for {v.name!r}")
        values[v.id] = to_rational(payload[v.name])
    return Assignment(tuple(values))
