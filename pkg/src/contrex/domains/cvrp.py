"""Capacitated vehicle routing with asymmetric integer distances.

Every vehicle leaves the depot exactly once and returns (flow
conservation); each non-depot point is entered exactly once; a vehicle may
visit at most capacity(v) points; all 2^m - 1 nonempty subsets of non-depot
points carry an explicit leave-the-subset constraint, which rules out
subtours. The subset family explodes, so model building refuses more than
10 non-depot points.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Tuple

from ..errors import InvalidParamsError, TooManyPointsError
from ..model import EQ, GE, LE, MINIMIZE, LinearConstraint, Model, Variable, build_model
from ..rationals import ceil_div

DOMAIN = "cvrp"
DEPOT = "Depot"
MAX_NON_DEPOT_POINTS = 10


@dataclass(frozen=True)
class CvrpInstance:
    domain: str
    points: Tuple[str, ...]  # includes the depot, listed first
    vehicles: Tuple[str, ...]
    distance: Mapping[str, Mapping[str, int]]  # ordered pair -> distance units, asymmetric
    capacity: Mapping[str, int]  # vehicle -> visit count
    seed: int = 0


def generate(params: Mapping, seed: int) -> CvrpInstance:
    n_points = int(params.get("points", 4))  # non-depot points
    n_vehicles = int(params.get("vehicles", 2))
    if n_vehicles < 1 or n_points < n_vehicles:
        raise InvalidParamsError("routing generation needs points >= vehicles >= 1")
    rng = random.Random(seed)
    points = (DEPOT,) + tuple(f"p{i + 1}" for i in range(n_points))
    vehicles = tuple(f"v{k + 1}" for k in range(n_vehicles))
    distance = {
        i: {j: rng.randint(1, 100) for j in points if j != i}
        for i in points
    }
    cap = ceil_div(n_points, n_vehicles) + 1
    capacity = {v: cap for v in vehicles}
    return CvrpInstance(DOMAIN, points, vehicles, distance, capacity, seed)


def build(instance: CvrpInstance) -> Model:
    points = instance.points
    stops = [p for p in points if p != DEPOT]
    m = len(stops)
    if m > MAX_NON_DEPOT_POINTS:
        raise TooManyPointsError(f"{m} non-depot points would need {2 ** m - 1} subset constraints")

    variables = []
    arc = {}
    objective = []
    for i in points:
        for j in points:
            if i == j:
                continue
            for v in instance.vehicles:
                vid = len(variables)
                arc[(i, j, v)] = vid
                variables.append(Variable(vid, f"x[{i}][{j}][{v}]", is_solution_var=True, agents=(v,)))
                objective.append((vid, instance.distance[i][j]))

    constraints = []
    for i in points:
        for v in instance.vehicles:
            terms = tuple((arc[(i, j, v)], 1) for j in points if j != i) + tuple(
                (arc[(j, i, v)], -1) for j in points if j != i
            )
            constraints.append(LinearConstraint(terms, EQ, 0, name=f"flow[{i}][{v}]"))
    for p in stops:
        terms = tuple((arc[(i, p, v)], 1) for i in points if i != p for v in instance.vehicles)
        constraints.append(LinearConstraint(terms, EQ, 1, name=f"visit[{p}]"))
    for v in instance.vehicles:
        terms = tuple((arc[(DEPOT, j, v)], 1) for j in stops)
        constraints.append(LinearConstraint(terms, EQ, 1, name=f"depart[{v}]"))
    for v in instance.vehicles:
        # visit count: arcs entering non-depot points
        terms = tuple((arc[(i, j, v)], 1) for j in stops for i in points if i != j)
        constraints.append(LinearConstraint(terms, LE, instance.capacity[v], name=f"capacity[{v}]"))
    for size in range(1, m + 1):
        for subset in combinations(stops, size):
            inside = set(subset)
            terms = tuple(
                (arc[(i, j, v)], 1)
                for i in subset
                for j in points
                if j not in inside and j != i
                for v in instance.vehicles
            )
            constraints.append(
                LinearConstraint(terms, GE, 1, name=f"leave[{'|'.join(subset)}]")
            )

    return build_model(
        variables,
        constraints,
        objective,
        MINIMIZE,
        agents=instance.vehicles,
        metadata={"domain": DOMAIN, "objective_noun": "distance"},
    )


def question_prompt(i: str, j: str, vehicle: str) -> str:
    return f"Why did vehicle {vehicle} not travel from {i} to {j}?"


def item_label(i: str, j: str, vehicle: str) -> str:
    return f"{i}→{j}"


def decode_routes(instance: CvrpInstance, values_by_name: Mapping[str, int]) -> Mapping[str, Tuple[str, ...]]:
    """Per-vehicle visiting order, depot excluded. Raises on malformed arc sets."""
    routes = {}
    for v in instance.vehicles:
        succ = {}
        for i in instance.points:
            for j in instance.points:
                if i != j and values_by_name.get(f"x[{i}][{j}][{v}]") == 1:
                    if i in succ:
                        raise ValueError(f"vehicle {v} leaves {i} twice")
                    succ[i] = j
        route = []
        here = DEPOT
        if DEPOT not in succ:
            raise ValueError(f"vehicle {v} never leaves the depot")
        while True:
            here = succ.pop(here)
            if here == DEPOT:
                break
            if here in route:
                raise ValueError(f"vehicle {v} revisits {here}")
            route.append(here)
        if succ:
            raise ValueError(f"vehicle {v} has a detached subtour through {sorted(succ)}")
        routes[v] = tuple(route)
    return routes


def to_json(instance: CvrpInstance) -> dict:
    return {
        "domain": DOMAIN,
        "points": list(instance.points),
        "vehicles": list(instance.vehicles),
        "distance": {i: dict(m) for i, m in instance.distance.items()},
        "capacity": dict(instance.capacity),
        "seed": instance.seed,
    }


def from_json(payload: Mapping) -> CvrpInstance:
    points = tuple(payload["points"])
    if DEPOT not in points:
        raise InvalidParamsError("routing instance must include the Depot point")
    if points[0] != DEPOT:
        points = (DEPOT,) + tuple(p for p in points if p != DEPOT)
    return CvrpInstance(
        domain=DOMAIN,
        points=points,
        vehicles=tuple(payload["vehicles"]),
        distance={i: {j: int(d) for j, d in m.items()} for i, m in payload["distance"].items()},
        capacity={v: int(c) for v, c in payload["capacity"].items()},
        seed=int(payload.get("seed", 0)),
    )
