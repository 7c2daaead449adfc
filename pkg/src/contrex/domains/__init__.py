"""Instance generators, model builders, and question enumeration per domain."""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass
from importlib import resources
from typing import List, Mapping, Sequence, Union

from ..errors import InvalidParamsError
from ..explain import RenderTemplate
from ..hypothetical import Property
from ..model import Assignment, Model
from . import cvrp, kp, tap, wsp

Instance = Union[kp.KpInstance, tap.TapInstance, wsp.WspInstance, cvrp.CvrpInstance]

DOMAINS = (kp.DOMAIN, kp.DOMAIN_FAIR, tap.DOMAIN, wsp.DOMAIN, cvrp.DOMAIN)

_NAME_RX = re.compile(r"^([xy])\[([^\]]+)\]\[([^\]]+)\](?:\[([^\]]+)\])?$")


@dataclass(frozen=True)
class Question:
    prop: Property
    prompt: str
    variable: str


def generate_instance(domain: str, size_params: Mapping, seed: int) -> Instance:
    """Deterministic per (domain, params, seed)."""
    if domain == kp.DOMAIN:
        return kp.generate(size_params, seed)
    if domain == kp.DOMAIN_FAIR:
        return kp.generate(size_params, seed, fair=True)
    if domain == tap.DOMAIN:
        return tap.generate(size_params, seed)
    if domain == wsp.DOMAIN:
        return wsp.generate(size_params, seed)
    if domain == cvrp.DOMAIN:
        return cvrp.generate(size_params, seed)
    raise InvalidParamsError(f"unknown domain {domain!r}")


def build_model(instance: Instance) -> Model:
    if isinstance(instance, kp.KpInstance):
        return kp.build(instance)
    if isinstance(instance, tap.TapInstance):
        return tap.build(instance)
    if isinstance(instance, wsp.WspInstance):
        return wsp.build(instance)
    if isinstance(instance, cvrp.CvrpInstance):
        return cvrp.build(instance)
    raise InvalidParamsError(f"not a domain instance: {type(instance).__name__}")


def instance_to_json(instance: Instance) -> dict:
    if isinstance(instance, kp.KpInstance):
        return kp.to_json(instance)
    if isinstance(instance, tap.TapInstance):
        return tap.to_json(instance)
    if isinstance(instance, wsp.WspInstance):
        return wsp.to_json(instance)
    if isinstance(instance, cvrp.CvrpInstance):
        return cvrp.to_json(instance)
    raise InvalidParamsError(f"not a domain instance: {type(instance).__name__}")


def instance_from_json(payload: Mapping) -> Instance:
    domain = payload.get("domain")
    if domain in (kp.DOMAIN, kp.DOMAIN_FAIR):
        return kp.from_json(payload)
    if domain == tap.DOMAIN:
        return tap.from_json(payload)
    if domain == wsp.DOMAIN:
        return wsp.from_json(payload)
    if domain == cvrp.DOMAIN:
        return cvrp.from_json(payload)
    raise InvalidParamsError(f"unknown domain {domain!r}")


def question_prompt_for(domain: str, name: str) -> str:
    match = _NAME_RX.match(name)
    if not match:
        return f"Why does the solution not set {name}?"
    head, first, second, third = match.groups()
    if domain in (kp.DOMAIN, kp.DOMAIN_FAIR):
        return kp.question_prompt(first, second)
    if domain == tap.DOMAIN:
        return tap.question_prompt(first, second)
    if domain == wsp.DOMAIN:
        if head == "y":
            return wsp.seat_prompt(first, second)
        a1, a2 = first.split("|", 1)
        return wsp.pair_prompt(a1, a2, second)
    if domain == cvrp.DOMAIN:
        return cvrp.question_prompt(first, second, third)
    return f"Why does the solution not set {name}?"


def enumerate_questions(model: Model, solution: Assignment) -> List[Question]:
    """One question per askable variable that sits at zero, ordered by variable id."""
    domain = model.metadata.get("domain", "")
    askable_extra = set(model.metadata.get("askable", ()))
    questions = []
    for v in model.variables:
        if not (v.is_solution_var or v.name in askable_extra):
            continue
        if solution.values[v.id] != 0:
            continue
        prompt = question_prompt_for(domain, v.name)
        questions.append(
            Question(
                prop=Property(fixings=((v.id, 1),), description=prompt),
                prompt=prompt,
                variable=v.name,
            )
        )
    return questions


def sample_questions(questions: Sequence[Question], k: int, seed: int) -> List[Question]:
    """Uniform sample without replacement; the full list (original order) when k >= len."""
    if k < 0:
        raise InvalidParamsError("sample size must be non-negative")
    if k >= len(questions):
        return list(questions)
    return random.Random(seed).sample(list(questions), k)


def template_for_instance(instance: Instance) -> RenderTemplate:
    labels = {}
    if isinstance(instance, kp.KpInstance):
        for a, owned in instance.utility.items():
            for i in owned:
                labels[f"x[{a}][{i}]"] = kp.item_label(a, i)
        return RenderTemplate(objective_noun="utility", item_labels=labels)
    if isinstance(instance, tap.TapInstance):
        for a in instance.agents:
            for t in instance.tasks:
                labels[f"x[{a}][{t}]"] = tap.item_label(a, t)
        return RenderTemplate(objective_noun="utility", item_labels=labels)
    if isinstance(instance, wsp.WspInstance):
        for a in instance.agents:
            for t in instance.tables:
                labels[f"y[{a}][{t}]"] = f"seat at {t}"
        for a1, a2, _aff in instance.affinity:
            for t in instance.tables:
                labels[f"x[{a1}|{a2}][{t}]"] = f"together at {t}"
        return RenderTemplate(objective_noun="affinity", item_labels=labels)
    if isinstance(instance, cvrp.CvrpInstance):
        for i in instance.points:
            for j in instance.points:
                if i == j:
                    continue
                for v in instance.vehicles:
                    labels[f"x[{i}][{j}][{v}]"] = cvrp.item_label(i, j, v)
        return RenderTemplate(objective_noun="distance", item_labels=labels)
    return RenderTemplate()


def load_fixture(name: str) -> Instance:
    """Golden instances shipped with the package (kp-micro, tap-micro)."""
    path = resources.files("contrex.fixtures").joinpath(f"{name}.json")
    try:
        payload = json.loads(path.read_text())
    except FileNotFoundError:
        raise InvalidParamsError(f"unknown fixture {name!r}") from None
    return instance_from_json(payload)
