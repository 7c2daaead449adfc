"""Task allocation: every task to exactly one agent, workloads capped."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping, Tuple

from ..errors import InvalidParamsError
from ..model import EQ, LE, MAXIMIZE, LinearConstraint, Model, Variable, build_model
from ..rationals import ceil_div

DOMAIN = "tap"


@dataclass(frozen=True)
class TapInstance:
    domain: str
    agents: Tuple[str, ...]
    tasks: Tuple[str, ...]
    utility: Mapping[str, Mapping[str, int]]  # agent -> task -> utility units
    workload: Mapping[str, int]  # agent -> max task count
    seed: int = 0


def generate(params: Mapping, seed: int) -> TapInstance:
    n_agents = int(params.get("agents", 5))
    n_tasks = int(params.get("tasks", 10))
    if n_agents < 1 or n_tasks < 1:
        raise InvalidParamsError("task allocation needs at least 1 agent and 1 task")
    rng = random.Random(seed)
    agents = tuple(f"a{i + 1}" for i in range(n_agents))
    tasks = tuple(f"t{j + 1}" for j in range(n_tasks))
    utility = {a: {t: rng.randint(1, 10) for t in tasks} for a in agents}
    cap = ceil_div(n_tasks, n_agents) + 1
    workload = {a: cap for a in agents}
    return TapInstance(DOMAIN, agents, tasks, utility, workload, seed)


def build(instance: TapInstance) -> Model:
    variables = []
    index = {}
    objective = []
    for a in instance.agents:
        for t in instance.tasks:
            vid = len(variables)
            index[(a, t)] = vid
            variables.append(Variable(vid, f"x[{a}][{t}]", is_solution_var=True, agents=(a,)))
            objective.append((vid, instance.utility[a][t]))

    constraints = []
    for a in instance.agents:
        terms = tuple((index[(a, t)], 1) for t in instance.tasks)
        constraints.append(LinearConstraint(terms, LE, instance.workload[a], name=f"workload[{a}]"))
    for t in instance.tasks:
        terms = tuple((index[(a, t)], 1) for a in instance.agents)
        constraints.append(LinearConstraint(terms, EQ, 1, name=f"assigned[{t}]"))

    return build_model(
        variables,
        constraints,
        objective,
        MAXIMIZE,
        agents=instance.agents,
        metadata={"domain": DOMAIN, "objective_noun": "utility"},
    )


def question_prompt(agent: str, task: str) -> str:
    return f"Why was task {task} not allocated to {agent}?"


def item_label(agent: str, task: str) -> str:
    return task


def to_json(instance: TapInstance) -> dict:
    return {
        "domain": DOMAIN,
        "agents": list(instance.agents),
        "tasks": list(instance.tasks),
        "utility": {a: dict(m) for a, m in instance.utility.items()},
        "workload": dict(instance.workload),
        "seed": instance.seed,
    }


def from_json(payload: Mapping) -> TapInstance:
    return TapInstance(
        domain=DOMAIN,
        agents=tuple(payload["agents"]),
        tasks=tuple(payload["tasks"]),
        utility={a: {t: int(u) for t, u in m.items()} for a, m in payload["utility"].items()},
        workload={a: int(w) for a, w in payload["workload"].items()},
        seed=int(payload.get("seed", 0)),
    )
