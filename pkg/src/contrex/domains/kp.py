"""Shared-depot knapsack: agents own items, the depot has limited capacity.

Two flavours: the plain utility-maximizing model, and a fairness variant
that also rewards the smallest per-agent count of included items through an
auxiliary integer variable.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping, Tuple

from ..errors import InvalidParamsError
from ..model import GE, LE, MAXIMIZE, INTEGER, LinearConstraint, Model, Variable, build_model
from ..rationals import ceil_div

DOMAIN = "kp"
DOMAIN_FAIR = "kp-fair"


@dataclass(frozen=True)
class KpInstance:
    domain: str
    agents: Tuple[str, ...]
    items: Tuple[str, ...]
    utility: Mapping[str, Mapping[str, int]]  # agent -> item -> utility units
    space: Mapping[str, int]  # item -> space units
    depotCapacity: int
    seed: int = 0


def generate(params: Mapping, seed: int, fair: bool = False) -> KpInstance:
    n_agents = int(params.get("agents", 4))
    n_items = int(params.get("items", 10))
    if n_agents < 2 or n_items < 2:
        raise InvalidParamsError("knapsack generation needs at least 2 agents and 2 items")
    rng = random.Random(seed)
    agents = tuple(f"a{i + 1}" for i in range(n_agents))
    items = tuple(f"i{j + 1}" for j in range(n_items))
    utility = {a: {i: rng.randint(1, 5) for i in items} for a in agents}
    space = {i: rng.randint(1, 10) for i in items}
    total_space = sum(space[i] for i in items) * n_agents  # one copy of every item per agent
    capacity = ceil_div(3 * total_space, 10)
    return KpInstance(
        domain=DOMAIN_FAIR if fair else DOMAIN,
        agents=agents,
        items=items,
        utility=utility,
        space=space,
        depotCapacity=capacity,
        seed=seed,
    )


def build(instance: KpInstance) -> Model:
    variables = []
    cap_terms = []
    objective = []
    for a in instance.agents:
        owned = instance.utility.get(a, {})
        for i in instance.items:
            if i not in owned:
                continue
            vid = len(variables)
            variables.append(
                Variable(vid, f"x[{a}][{i}]", is_solution_var=True, agents=(a,))
            )
            cap_terms.append((vid, instance.space[i]))
            objective.append((vid, owned[i]))

    constraints = [LinearConstraint(tuple(cap_terms), LE, instance.depotCapacity, name="depotCapacity")]

    if instance.domain == DOMAIN_FAIR:
        min_id = len(variables)
        variables.append(
            Variable(min_id, "minItems", kind=INTEGER, lower=0, upper=len(instance.items))
        )
        by_agent = {a: [] for a in instance.agents}
        for v in variables[:min_id]:
            by_agent[v.agents[0]].append(v.id)
        for a in instance.agents:
            terms = tuple((vid, 1) for vid in by_agent[a]) + ((min_id, -1),)
            constraints.append(LinearConstraint(terms, GE, 0, name=f"minItems[{a}]"))
        objective.append((min_id, 1))

    return build_model(
        variables,
        constraints,
        objective,
        MAXIMIZE,
        agents=instance.agents,
        metadata={"domain": instance.domain, "objective_noun": "utility"},
    )


def question_prompt(agent: str, item: str) -> str:
    return f"Why was {agent}'s {item} not included in the depot?"


def item_label(agent: str, item: str) -> str:
    return item


def to_json(instance: KpInstance) -> dict:
    return {
        "domain": instance.domain,
        "agents": list(instance.agents),
        "items": list(instance.items),
        "utility": {a: dict(m) for a, m in instance.utility.items()},
        "space": dict(instance.space),
        "depotCapacity": instance.depotCapacity,
        "seed": instance.seed,
    }


def from_json(payload: Mapping) -> KpInstance:
    return KpInstance(
        domain=payload["domain"],
        agents=tuple(payload["agents"]),
        items=tuple(payload["items"]),
        utility={a: {i: int(u) for i, u in m.items()} for a, m in payload["utility"].items()},
        space={i: int(s) for i, s in payload["space"].items()},
        depotCapacity=int(payload["depotCapacity"]),
        seed=int(payload.get("seed", 0)),
    )
