"""Operator command line: init, serve, questions, policy, verify, export, simulate.

All mutating commands go through the same platform command path as the
HTTP API and refuse to run while a service instance holds the ledger
write lock. Exit code 0 on success, 1 with a diagnostic on stderr
otherwise (2 for usage errors).
"""

from __future__ import annotations

import argparse
import fcntl
import json
import sys
from contextlib import contextmanager
from pathlib import Path

from . import analytics
from .config import ServiceConfig, load_config
from .errors import DomainError, LedgerError
from .eventlog import EventStore
from .incentives import IncentivePolicy
from .platform import FeedbackPlatform
from .simulate import fieldstudy_plan, make_clock, run_simulation, uniform_plan


class CliError(Exception):
    pass


@contextmanager
def write_lock(config: ServiceConfig, blocking: bool = False):
    """Exclusive ledger lock; serve holds it for its whole lifetime."""
    Path(config.data_dir).mkdir(parents=True, exist_ok=True)
    fh = open(config.lock_path, "a+")
    try:
        flags = fcntl.LOCK_EX if blocking else fcntl.LOCK_EX | fcntl.LOCK_NB
        try:
            fcntl.flock(fh.fileno(), flags)
        except OSError:
            raise CliError(
                "the ledger is locked by a running service; stop it before mutating"
            ) from None
        yield
    finally:
        fh.close()  # releases the lock


def open_platform(config: ServiceConfig, sync: bool = True, clock=None) -> FeedbackPlatform:
    Path(config.data_dir).mkdir(parents=True, exist_ok=True)
    store = EventStore(config.ledger_path, sync=sync, clock=clock)
    return FeedbackPlatform(store)


def require_initialized(platform: FeedbackPlatform) -> None:
    if platform.state.money_supply is None:
        raise CliError("ledger has no genesis yet; run 'feedledger init' first")


# -- commands -----------------------------------------------------------------


def cmd_init(args, config: ServiceConfig) -> int:
    with write_lock(config):
        platform = open_platform(config)
        supply = args.supply if args.supply is not None else config.genesis_supply
        platform.initialize(
            money_supply=supply,
            policies=config.policies,
            area_tags=config.area_tags,
            admin_address=config.admin_address,
            admin_key=config.admin_token or None,
        )
        platform.store.close()
    print(f"initialized ledger at {config.ledger_path} with money supply {supply}")
    return 0


def cmd_serve(args, config: ServiceConfig) -> int:
    import uvicorn

    from .api import create_app

    with write_lock(config):
        platform = open_platform(config)
        require_initialized(platform)
        report = platform.verify()
        if not report.ok:
            raise CliError(f"refusing to serve: hash chain broken at seq {report.first_bad_seq}")
        app = create_app(platform, config)
        host = args.host or config.host
        port = args.port or config.port
        print(f"serving on http://{host}:{port} ({report.checked} events verified)")
        uvicorn.run(app, host=host, port=port, log_level="warning")
    return 0


def cmd_questions_load(args, config: ServiceConfig) -> int:
    path = Path(args.file)
    if not path.exists():
        raise CliError(f"question file {path} does not exist")
    try:
        specs = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CliError(f"question file is not valid JSON: {exc}") from exc
    if isinstance(specs, dict):
        specs = specs.get("questions", [])
    if not isinstance(specs, list):
        raise CliError("question file must hold a list of question specs")
    with write_lock(config):
        platform = open_platform(config)
        require_initialized(platform)
        created = platform.load_questions(specs, actor=config.admin_address)
        platform.store.close()
    print(f"loaded {len(created)} questions: {', '.join(q.question_id for q in created)}")
    return 0


def cmd_policy_set(args, config: ServiceConfig) -> int:
    with write_lock(config):
        platform = open_platform(config)
        require_initialized(platform)
        current = platform.state.policies.get(args.cohort)
        enabled = {"on": True, "off": False}[args.incentives] if args.incentives else (
            current.incentives_enabled if current else True
        )
        policy = IncentivePolicy(
            cohort_id=args.cohort,
            incentives_enabled=enabled,
            money_per_answer=args.money_per_answer
            if args.money_per_answer is not None
            else (current.money_per_answer if current else 1),
            context_per_contextualization=args.context_per_action
            if args.context_per_action is not None
            else (current.context_per_contextualization if current else 1),
            vote_cost_context=args.vote_cost
            if args.vote_cost is not None
            else (current.vote_cost_context if current else 1),
        )
        applied = platform.set_policy(policy, actor=config.admin_address)
        platform.store.close()
    print(
        f"cohort {applied.cohort_id}: incentives "
        f"{'on' if applied.incentives_enabled else 'off'}, "
        f"{applied.money_per_answer}/answer, "
        f"{applied.context_per_contextualization}/contextualization, "
        f"vote cost {applied.vote_cost_context}"
    )
    return 0


def cmd_verify(args, config: ServiceConfig) -> int:
    from .eventlog import verify_log_file

    if not config.ledger_path.exists():
        raise CliError(f"no ledger at {config.ledger_path}")
    report = verify_log_file(config.ledger_path)
    if report.ok:
        print(f"ok: {report.checked} events, chain intact")
        return 0
    print(f"TAMPERED: first bad record at seq {report.first_bad_seq}", file=sys.stderr)
    return 1


def cmd_export(args, config: ServiceConfig) -> int:
    platform = open_platform(config)
    require_initialized(platform)
    state = platform.state
    if args.report == "interactions":
        text = analytics.interaction_report_csv(analytics.interaction_report(state))
    elif args.report == "contextualization":
        text = analytics.contextualization_csv(analytics.contextualization_percentage(state))
    elif args.report == "leaderboard":
        text = analytics.leaderboard_csv(analytics.leaderboard(state))
    else:
        raise CliError(f"unknown report {args.report!r}")
    platform.store.close()
    if args.out == "-":
        sys.stdout.write(text)
    else:
        analytics.export_csv(text, args.out)
        print(f"wrote {args.report} report to {args.out}")
    return 0


def cmd_simulate(args, config: ServiceConfig) -> int:
    with write_lock(config):
        ledger = config.ledger_path
        if ledger.exists() and ledger.stat().st_size > 0:
            raise CliError(f"{ledger} already holds events; simulate needs a fresh ledger")
        if args.profile == "fieldstudy":
            plan = fieldstudy_plan(args.users)
        else:
            plan = uniform_plan(args.users)
        plan.genesis_supply = config.genesis_supply
        platform = open_platform(config, sync=False, clock=make_clock())
        summary = run_simulation(platform, plan, seed=args.seed)
        platform.store.close()
    print(json.dumps(summary, indent=2, sort_keys=True))
    return 0


# -- argument wiring ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="feedledger",
        description="Feedback platform with token incentives on an append-only ledger",
    )
    parser.add_argument("--config", "-c", help="path to the service config file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("init", help="create the ledger and write genesis events")
    p.add_argument("--supply", type=int, default=None, help="money token supply")
    p.set_defaults(func=cmd_init)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default=None)
    p.add_argument("--port", type=int, default=None)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("questions", help="question authoring")
    qsub = p.add_subparsers(dest="questions_command", required=True)
    ql = qsub.add_parser("load", help="load a question spec file (all-or-nothing)")
    ql.add_argument("file")
    ql.set_defaults(func=cmd_questions_load)

    p = sub.add_parser("policy", help="incentive policy configuration")
    psub = p.add_subparsers(dest="policy_command", required=True)
    ps = psub.add_parser("set", help="set one cohort's incentive policy")
    ps.add_argument("--cohort", required=True)
    ps.add_argument("--incentives", choices=["on", "off"], default=None)
    ps.add_argument("--vote-cost", type=int, default=None)
    ps.add_argument("--money-per-answer", type=int, default=None)
    ps.add_argument("--context-per-action", dest="context_per_action", type=int, default=None)
    ps.set_defaults(func=cmd_policy_set)

    p = sub.add_parser("verify", help="recompute the hash chain")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export", help="export an analytics report as CSV")
    p.add_argument("--report", required=True, choices=["interactions", "contextualization", "leaderboard"])
    p.add_argument("--out", required=True, help="output file, or - for stdout")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("simulate", help="generate a deterministic synthetic ledger")
    p.add_argument("--users", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--profile", choices=["uniform", "fieldstudy"], default="uniform")
    p.set_defaults(func=cmd_simulate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config)
        return args.func(args, config)
    except (CliError, DomainError, LedgerError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
