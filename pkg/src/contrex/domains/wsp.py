"""Wedding seating: agents to tables, pairwise affinities rewarded.

The pair variable x[a|b][t] earns affinity(a, b) when both sit at table t.
Linking constraints push pair variables down whenever the two seats
disagree; the positive affinities pull them up at optimality, so no
pair-side assignment equality is needed (adding one would make every
instance with more than one occupied table infeasible).

Seat variables y[a][t] are the solution variables; pair variables are
askable ("why aren't we together at t?") but do not count as changes, since
a single seat move would otherwise be counted twice.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping, Tuple

from ..errors import InvalidParamsError
from ..model import EQ, LE, MAXIMIZE, LinearConstraint, Model, Variable, build_model
from ..rationals import ceil_div

DOMAIN = "wsp"


@dataclass(frozen=True)
class WspInstance:
    domain: str
    agents: Tuple[str, ...]
    tables: Tuple[str, ...]
    affinity: Tuple[Tuple[str, str, int], ...]  # (agent, agent, affinity units), each unordered pair once
    capacity: Mapping[str, int]  # table -> seats
    seed: int = 0


def generate(params: Mapping, seed: int) -> WspInstance:
    n_agents = int(params.get("agents", 6))
    n_tables = int(params.get("tables", 3))
    if n_agents < 2 or n_tables < 1:
        raise InvalidParamsError("seating generation needs at least 2 agents and 1 table")
    rng = random.Random(seed)
    agents = tuple(f"a{i + 1}" for i in range(n_agents))
    tables = tuple(f"T{j + 1}" for j in range(n_tables))
    affinity = tuple(
        (agents[i], agents[j], rng.randint(1, 10))
        for i in range(n_agents)
        for j in range(i + 1, n_agents)
    )
    cap = ceil_div(n_agents, n_tables) + 1
    capacity = {t: cap for t in tables}
    return WspInstance(DOMAIN, agents, tables, affinity, capacity, seed)


def build(instance: WspInstance) -> Model:
    variables = []
    pair_index = {}
    objective = []
    for a1, a2, aff in instance.affinity:
        for t in instance.tables:
            vid = len(variables)
            pair_index[(a1, a2, t)] = vid
            variables.append(Variable(vid, f"x[{a1}|{a2}][{t}]", agents=(a1, a2)))
            objective.append((vid, aff))
    seat_index = {}
    for a in instance.agents:
        for t in instance.tables:
            vid = len(variables)
            seat_index[(a, t)] = vid
            variables.append(Variable(vid, f"y[{a}][{t}]", is_solution_var=True, agents=(a,)))

    constraints = []
    for a in instance.agents:
        terms = tuple((seat_index[(a, t)], 1) for t in instance.tables)
        constraints.append(LinearConstraint(terms, EQ, 1, name=f"seated[{a}]"))
    for a1, a2, _aff in instance.affinity:
        for t in instance.tables:
            terms = (
                (pair_index[(a1, a2, t)], 2),
                (seat_index[(a1, t)], -1),
                (seat_index[(a2, t)], -1),
            )
            constraints.append(LinearConstraint(terms, LE, 0, name=f"link[{a1}|{a2}][{t}]"))
    for t in instance.tables:
        terms = tuple((seat_index[(a, t)], 1) for a in instance.agents)
        constraints.append(LinearConstraint(terms, LE, instance.capacity[t], name=f"capacity[{t}]"))

    askable = [variables[pair_index[(a1, a2, t)]].name for a1, a2, _ in instance.affinity for t in instance.tables]
    return build_model(
        variables,
        constraints,
        objective,
        MAXIMIZE,
        agents=instance.agents,
        metadata={"domain": DOMAIN, "objective_noun": "affinity", "askable": askable},
    )


def seat_prompt(agent: str, table: str) -> str:
    return f"Why was {agent} not seated at table {table}?"


def pair_prompt(a1: str, a2: str, table: str) -> str:
    return f"Why were {a1} and {a2} not seated together at table {table}?"


def to_json(instance: WspInstance) -> dict:
    return {
        "domain": DOMAIN,
        "agents": list(instance.agents),
        "tables": list(instance.tables),
        "affinity": [[a1, a2, aff] for a1, a2, aff in instance.affinity],
        "capacity": dict(instance.capacity),
        "seed": instance.seed,
    }


def from_json(payload: Mapping) -> WspInstance:
    return WspInstance(
        domain=DOMAIN,
        agents=tuple(payload["agents"]),
        tables=tuple(payload["tables"]),
        affinity=tuple((a1, a2, int(aff)) for a1, a2, aff in payload["affinity"]),
        capacity={t: int(c) for t, c in payload["capacity"].items()},
        seed=int(payload.get("seed", 0)),
    )
