"""HTTP/JSON service exposing the solve -> question -> explain loop."""

from __future__ import annotations

import time
from pathlib import Path
from typing import Mapping, Optional

from fastapi import Body, FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .. import domains
from ..errors import (
    InvalidParamsError,
    PropertyInfeasibleError,
    SchemaVersionMismatchError,
    SolveTimeoutError,
    UnknownVariableError,
    ValidationError,
)
from ..explain import explanation_to_json, full_explanation, render_explanation
from ..hypothetical import Property, build_hypothetical, derive_weights, solve_hypothetical
from ..model import assignment_to_json
from ..rationals import rational_to_json
from ..solver import SolveParams
from .sessions import Session, SessionStore, create_session, load_session, persist_session

ERROR_STATUS = {
    "validation_error": 400,
    "invalid_params": 400,
    "unknown_variable": 404,
    "not_found": 404,
    "property_infeasible": 409,
    "schema_version_mismatch": 409,
    "solve_timeout": 503,
}


class ApiError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


def _session_summary(session: Session) -> dict:
    return {
        "id": session.id,
        "domain": session.model.metadata.get("domain", ""),
        "status": session.solve_result.status,
        "objective": rational_to_json(session.solve_result.objective),
        "solution": assignment_to_json(session.model, session.solution),
        "agents": list(session.model.agents),
        "history_length": len(session.history),
    }


def _questions_json(session: Session) -> list:
    questions = domains.enumerate_questions(session.model, session.solution)
    return [
        {
            "variable": q.variable,
            "prompt": q.prompt,
            "agents": list(session.model.variable_by_name(q.variable).agents),
        }
        for q in questions
    ]


def perform_ask(session: Session, body: Mapping, params: SolveParams = SolveParams()) -> dict:
    """Build, solve, and explain one question; appends to the session history."""
    variable = body.get("variable")
    if not variable:
        raise ValidationError("ask body needs a 'variable'")
    var = session.model.variable_by_name(variable)
    askable = set(session.model.metadata.get("askable", ()))
    if var is None or not (var.is_solution_var or var.name in askable):
        raise UnknownVariableError(f"no askable variable named {variable!r}")

    variant_flag = body.get("variant", "q")
    if isinstance(variant_flag, str) and ("alpha" in body or "beta" in body):
        variant_flag = {"alpha": body.get("alpha"), "beta": body.get("beta")}
    from ..hypothetical import parse_variant

    variant, alpha, beta = parse_variant(variant_flag)
    weights = derive_weights(session.model, variant, alpha=alpha, beta=beta)

    domain = session.model.metadata.get("domain", "")
    prompt = domains.question_prompt_for(domain, variable)
    prop = Property(fixings=((var.id, 1),), description=prompt)

    t0 = time.monotonic()
    problem = build_hypothetical(session.model, session.solution, prop, weights)
    outcome = solve_hypothetical(problem, params)
    explanation = full_explanation(problem, outcome.s_prime)
    rendered = render_explanation(explanation, session.instance)
    t_explain = time.monotonic() - t0

    expl_json = explanation_to_json(explanation)
    expl_json["rendered"] = {
        "headline": rendered.headline,
        "table": rendered.table,
        "text": rendered.text,
    }
    response = {
        "session": session.id,
        "question": {"variable": variable, "prompt": prompt},
        "variant": variant,
        "weights": {"alpha": rational_to_json(weights.alpha), "beta": rational_to_json(weights.beta)},
        "s_prime": assignment_to_json(session.model, outcome.s_prime),
        "explanation": expl_json,
        "metrics": {
            "quality_diff": expl_json["abstract"]["quality_diff"],
            "length": explanation.length,
            "suboptimality_ratio": expl_json["suboptimality_ratio"],
        },
        "timings": {"t_explain_s": t_explain},
    }
    entry = {k: v for k, v in response.items() if k != "timings"}
    session.history.append(entry)
    session.updated = time.time()
    return response


def create_app(solver_params: SolveParams = SolveParams(), static_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="contrex", docs_url=None, redoc_url=None)
    store = SessionStore()
    app.state.store = store

    def fail(code: str, message: str) -> ApiError:
        return ApiError(code, message)

    @app.exception_handler(ApiError)
    async def _api_error(_request: Request, exc: ApiError):
        return JSONResponse(
            status_code=ERROR_STATUS.get(exc.code, 500),
            content={"error": exc.code, "message": exc.message},
        )

    @app.exception_handler(RequestValidationError)
    async def _body_error(_request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"error": "validation_error", "message": str(exc)},
        )

    def _get_session(session_id: str) -> Session:
        session = store.get(session_id)
        if session is None:
            raise fail("not_found", f"no session {session_id!r}")
        return session

    @app.post("/sessions")
    def post_sessions(payload: dict = Body(...)):
        try:
            session = store.add(create_session(payload, solver_params))
        except (ValidationError, InvalidParamsError) as exc:
            raise fail("validation_error", str(exc))
        except SolveTimeoutError as exc:
            raise fail("solve_timeout", str(exc))
        return _session_summary(session)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        session = _get_session(session_id)
        summary = _session_summary(session)
        summary["instance"] = domains.instance_to_json(session.instance)
        summary["history"] = session.history
        return summary

    @app.get("/sessions/{session_id}/questions")
    def get_questions(session_id: str):
        return _questions_json(_get_session(session_id))

    @app.post("/sessions/{session_id}/ask")
    def post_ask(session_id: str, body: dict = Body(...)):
        session = _get_session(session_id)
        with session.lock:  # asks on one session are serialized
            try:
                return perform_ask(session, body, solver_params)
            except UnknownVariableError as exc:
                raise fail("unknown_variable", str(exc))
            except PropertyInfeasibleError:
                raise fail(
                    "property_infeasible",
                    "the requested property contradicts the problem constraints",
                )
            except SolveTimeoutError as exc:
                raise fail("solve_timeout", str(exc))
            except ValidationError as exc:
                raise fail("validation_error", str(exc))

    @app.post("/sessions/{session_id}/persist")
    def post_persist(session_id: str, body: dict = Body(...)):
        session = _get_session(session_id)
        path = body.get("path")
        if not path:
            raise fail("validation_error", "persist body needs a 'path'")
        persist_session(session, path)
        return {"persisted": path, "id": session.id}

    @app.post("/sessions/load")
    def post_load(body: dict = Body(...)):
        path = body.get("path")
        if not path:
            raise fail("validation_error", "load body needs a 'path'")
        try:
            session = store.add(load_session(path))
        except FileNotFoundError:
            raise fail("not_found", f"no session file at {path!r}")
        except SchemaVersionMismatchError as exc:
            raise fail("schema_version_mismatch", str(exc))
        except (ValidationError, InvalidParamsError) as exc:
            raise fail("validation_error", str(exc))
        return _session_summary(session)

    if static_dir and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
