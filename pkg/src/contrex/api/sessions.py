"""In-memory session store with JSON persistence.

A session holds one instance, its solved model, and the ordered ask
history. Asks on one session are serialized by a per-session lock so the
history is a total order; distinct sessions proceed in parallel.
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional

from .. import domains
from ..errors import SchemaVersionMismatchError, ValidationError
from ..model import Assignment, Model, assignment_from_json, assignment_to_json
from ..solver import SolveParams, SolveResult, solve
from ..rationals import rational_to_json

SCHEMA_VERSION = 1

_GENSPEC_KEYS = {"agents", "items", "tasks", "tables", "points", "vehicles"}


@dataclass
class Session:
    id: str
    instance: domains.Instance
    model: Model
    solution: Assignment
    solve_result: SolveResult
    history: List[dict] = field(default_factory=list)
    created: float = field(default_factory=time.time)
    updated: float = field(default_factory=time.time)
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)


def _looks_like_instance(payload: Mapping) -> bool:
    return any(k in payload for k in ("utility", "affinity", "distance"))


def instance_from_payload(payload: Mapping) -> domains.Instance:
    """Accept a full instance, a {"fixture": name} reference, or a genspec."""
    if not isinstance(payload, Mapping):
        raise ValidationError("instance payload must be a JSON object")
    if "fixture" in payload:
        return domains.load_fixture(payload["fixture"])
    if _looks_like_instance(payload):
        try:
            return domains.instance_from_json(payload)
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed instance JSON: {exc}") from exc
    if "domain" not in payload:
        raise ValidationError("payload needs a 'domain' (genspec) or full instance fields")
    params = {k: v for k, v in payload.items() if k in _GENSPEC_KEYS}
    return domains.generate_instance(payload["domain"], params, int(payload.get("seed", 0)))


def create_session(payload: Mapping, params: SolveParams = SolveParams()) -> Session:
    instance = instance_from_payload(payload)
    model = domains.build_model(instance)
    result = solve(model, params)
    if result.status != "Optimal":
        from ..errors import SolveTimeoutError

        raise SolveTimeoutError(f"base solve ended with status {result.status}")
    return Session(
        id=uuid.uuid4().hex,
        instance=instance,
        model=model,
        solution=result.assignment,
        solve_result=result,
    )


def session_to_json(session: Session) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "id": session.id,
        "instance": domains.instance_to_json(session.instance),
        "solution": assignment_to_json(session.model, session.solution),
        "objective": rational_to_json(session.solve_result.objective),
        "history": session.history,
        "created": session.created,
        "updated": session.updated,
    }


def persist_session(session: Session, path) -> None:
    with session.lock:
        payload = session_to_json(session)
    with open(path, "w") as fh:
        json.dump(payload, fh, sort_keys=True, indent=1)


def load_session(path) -> Session:
    with open(path) as fh:
        payload = json.load(fh)
    if payload.get("schema_version") != SCHEMA_VERSION:
        raise SchemaVersionMismatchError(
            f"session schema {payload.get('schema_version')!r} != {SCHEMA_VERSION}"
        )
    instance = domains.instance_from_json(payload["instance"])
    model = domains.build_model(instance)
    solution = assignment_from_json(model, payload["solution"])
    from ..model import check_feasibility, evaluate_objective

    if not check_feasibility(model, solution).feasible:
        raise ValidationError("persisted solution is not feasible for its instance")
    result = SolveResult(status="Optimal", assignment=solution, objective=evaluate_objective(model, solution))
    session = Session(
        id=payload["id"],
        instance=instance,
        model=model,
        solution=solution,
        solve_result=result,
        history=list(payload["history"]),
        created=payload["created"],
        updated=payload["updated"],
    )
    return session


class SessionStore:
    """Token-keyed in-memory store; creation/lookup is thread-safe."""

    def __init__(self):
        self._sessions: Dict[str, Session] = {}
        self._lock = threading.Lock()

    def add(self, session: Session) -> Session:
        with self._lock:
            self._sessions[session.id] = session
        return session

    def get(self, session_id: str) -> Optional[Session]:
        with self._lock:
            return self._sessions.get(session_id)
