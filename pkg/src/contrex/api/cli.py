"""Command-line interface: gen / solve / questions / ask / bench / serve."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .. import bench as bench_mod
from .. import domains
from ..errors import ContrexError
from ..explain import explanation_to_json, full_explanation, render_explanation
from ..hypothetical import Property, build_hypothetical, derive_weights, solve_hypothetical
from ..model import assignment_from_json, assignment_to_json
from ..rationals import rational_to_json
from ..solver import SolveParams, solve

SIZE_FLAGS = ("agents", "items", "tasks", "tables", "points", "vehicles")


def _write_json(payload, out):
    text = json.dumps(payload, indent=1, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _load_instance(path):
    return domains.instance_from_json(json.loads(Path(path).read_text()))


def _load_solution(model, path):
    payload = json.loads(Path(path).read_text())
    return assignment_from_json(model, payload.get("assignment", payload))


def cmd_gen(args):
    if args.fixture:
        instance = domains.load_fixture(args.fixture)
    else:
        params = {k: getattr(args, k) for k in SIZE_FLAGS if getattr(args, k) is not None}
        instance = domains.generate_instance(args.domain, params, args.seed)
    _write_json(domains.instance_to_json(instance), args.output)


def _solve_params(args) -> SolveParams:
    return SolveParams(time_limit=args.time_limit)


def cmd_solve(args):
    instance = _load_instance(args.instance)
    model = domains.build_model(instance)
    result = solve(model, _solve_params(args))
    payload = {
        "status": result.status,
        "objective": None if result.objective is None else rational_to_json(result.objective),
        "assignment": None if result.assignment is None else assignment_to_json(model, result.assignment),
        "stats": {"nodes": result.stats.nodes, "wall_seconds": result.stats.wall_seconds},
    }
    _write_json(payload, args.output)
    return 0 if result.status == "Optimal" else 1


def cmd_questions(args):
    instance = _load_instance(args.instance)
    model = domains.build_model(instance)
    solution = _load_solution(model, args.solution)
    questions = domains.enumerate_questions(model, solution)
    _write_json([{"variable": q.variable, "prompt": q.prompt} for q in questions], args.output)


def cmd_ask(args):
    instance = _load_instance(args.instance)
    model = domains.build_model(instance)
    solution = _load_solution(model, args.solution)
    var = model.variable_by_name(args.var)
    if var is None:
        raise ContrexError(f"unknown variable {args.var!r}")
    if args.alpha is not None or args.beta is not None:
        weights = derive_weights(model, "custom", alpha=args.alpha, beta=args.beta)
    else:
        weights = derive_weights(model, args.variant)
    prompt = domains.question_prompt_for(model.metadata.get("domain", ""), args.var)
    prop = Property(fixings=((var.id, 1),), description=prompt)
    problem = build_hypothetical(model, solution, prop, weights)
    outcome = solve_hypothetical(problem, _solve_params(args))
    explanation = full_explanation(problem, outcome.s_prime)
    rendered = render_explanation(explanation, instance)
    payload = explanation_to_json(explanation)
    payload["rendered"] = {"headline": rendered.headline, "table": rendered.table, "text": rendered.text}
    payload["s_prime"] = assignment_to_json(model, outcome.s_prime)
    payload["question"] = {"variable": args.var, "prompt": prompt}
    _write_json(payload, args.output)
    if not args.output:
        return
    print(rendered.text)


def cmd_bench(args):
    if args.config:
        payload = json.loads(Path(args.config).read_text())
        if args.domain and "domain" not in payload:
            payload["domain"] = args.domain
        config = bench_mod.config_from_json(payload)
    else:
        config = bench_mod.default_config(args.domain)
    records = bench_mod.run_experiment(config)
    bench_mod.write_csv(records, args.out)
    print(f"{len(records)} records -> {args.out}")


def cmd_serve(args):
    import uvicorn

    from .service import create_app

    port = int(os.environ.get("CMAOE_PORT", args.port))
    static = args.static
    if static is None and Path("frontend/dist").is_dir():
        static = "frontend/dist"
    app = create_app(SolveParams(time_limit=args.time_limit), static_dir=static)
    uvicorn.run(app, host=args.host, port=port, log_level="warning")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="contrex",
        description="Solve multi-agent optimization instances and explain why a solution lacks a property.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate an instance")
    p.add_argument("--domain", choices=domains.DOMAINS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fixture", help="ship a golden fixture instead of generating")
    for flag in SIZE_FLAGS:
        p.add_argument(f"--{flag}", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="solve an instance to optimality")
    p.add_argument("instance")
    p.add_argument("--time-limit", type=float, default=60.0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("questions", help="list askable questions for a solved instance")
    p.add_argument("instance")
    p.add_argument("solution")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_questions)

    p = sub.add_parser("ask", help="explain why the solution does not set a variable")
    p.add_argument("instance")
    p.add_argument("solution")
    p.add_argument("--var", required=True)
    p.add_argument("--variant", choices=["q", "c"], default="q")
    p.add_argument("--alpha", type=int)
    p.add_argument("--beta", type=int)
    p.add_argument("--time-limit", type=float, default=60.0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_ask)

    p = sub.add_parser("bench", help="run the computational evaluation, emit CSV")
    p.add_argument("--domain", choices=list(bench_mod.DEFAULT_LADDERS))
    p.add_argument("--config", help="JSON experiment config")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--time-limit", type=float, default=60.0)
    p.add_argument("--static", help="directory of web client assets to serve")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code = args.func(args)
    except ContrexError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return code or 0


if __name__ == "__main__":
    sys.exit(main())
