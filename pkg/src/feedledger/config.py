"""Service configuration: a single JSON file, overridable via FEEDLEDGER_CONFIG.

The file seeds genesis values (supply, policies, tag vocabulary) that are
materialized as ledger events at ``init`` time; afterwards the ledger is
authoritative and changes go through admin commands, not config edits.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DomainError
from .incentives import DEFAULT_POLICIES, IncentivePolicy

ENV_CONFIG = "FEEDLEDGER_CONFIG"

DEFAULT_ABOUT = (
    "This platform collects your feedback on the organization's services, "
    "both as answers to posted questions and as free posts on the feedback wall. "
    "Answering and contextualizing can earn tokens depending on your group."
)

DEFAULT_NETIQUETTE = (
    "Be respectful. Feedback addresses processes and services, never people. "
    "No personal data, no insults, no spam. Votes are for surfacing the most "
    "useful feedback, not for campaigns."
)


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8080
    data_dir: str = "data"
    genesis_supply: int = 1_000_000
    default_cohort: str = "treatment"
    allow_reanswer: bool = True
    session_ttl_minutes: int = 24 * 60
    admins: list[str] = field(default_factory=lambda: ["admin"])
    admin_token: str = ""
    policies: dict[str, IncentivePolicy] = field(default_factory=lambda: dict(DEFAULT_POLICIES))
    area_tags: list[str] = field(
        default_factory=lambda: [
            "opening-hours",
            "collections",
            "digital-services",
            "facilities",
            "events",
            "support",
        ]
    )
    about_text: str = DEFAULT_ABOUT
    netiquette: str = DEFAULT_NETIQUETTE
    leaderboard_size: int = 10
    source_path: str | None = None

    @property
    def admin_address(self) -> str:
        return self.admins[0]

    @property
    def ledger_path(self) -> Path:
        return Path(self.data_dir) / "ledger.log"

    @property
    def lock_path(self) -> Path:
        return Path(self.data_dir) / "ledger.lock"


def _parse_policies(raw: dict) -> dict[str, IncentivePolicy]:
    policies = {}
    for cohort, body in raw.items():
        if not isinstance(body, dict):
            raise DomainError("invalid-spec", f"policy for {cohort!r} must be an object")
        policy = IncentivePolicy(
            cohort_id=cohort,
            incentives_enabled=bool(body.get("incentives_enabled", True)),
            money_per_answer=body.get("money_per_answer", 1),
            context_per_contextualization=body.get("context_per_contextualization", 1),
            vote_cost_context=body.get("vote_cost_context", 1),
        )
        policy.validate()
        policies[cohort] = policy.normalized()
    return policies


def load_config(path: str | Path | None = None) -> ServiceConfig:
    """Load config from ``path``, the env override, or defaults when absent."""
    if path is None:
        path = os.environ.get(ENV_CONFIG)
    if path is None:
        return ServiceConfig()
    path = Path(path)
    if not path.exists():
        raise DomainError("config-not-found", f"config file {path} does not exist")
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DomainError("config-not-found", f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise DomainError("config-not-found", f"config file {path} must hold a JSON object")

    config = ServiceConfig(source_path=str(path))
    listen = raw.get("listen", {})
    config.host = listen.get("host", config.host)
    config.port = listen.get("port", config.port)
    config.data_dir = raw.get("data_dir", config.data_dir)
    config.genesis_supply = raw.get("genesis_supply", config.genesis_supply)
    config.default_cohort = raw.get("default_cohort", config.default_cohort)
    config.allow_reanswer = raw.get("allow_reanswer", config.allow_reanswer)
    config.session_ttl_minutes = raw.get("session_ttl_minutes", config.session_ttl_minutes)
    admins = raw.get("admins", raw.get("admin_address", config.admins))
    config.admins = [admins] if isinstance(admins, str) else list(admins)
    if not config.admins or any(not isinstance(a, str) or not a for a in config.admins):
        raise DomainError("invalid-spec", "admins must be a non-empty list of addresses")
    config.admin_token = raw.get("admin_token", config.admin_token)
    if "policies" in raw:
        config.policies = _parse_policies(raw["policies"])
    if "area_tags" in raw:
        tags = raw["area_tags"]
        if not isinstance(tags, list) or any(not isinstance(t, str) for t in tags):
            raise DomainError("invalid-spec", "area_tags must be a list of strings")
        config.area_tags = tags
    about = raw.get("about", {})
    config.about_text = about.get("text", config.about_text)
    config.netiquette = about.get("netiquette", config.netiquette)
    config.leaderboard_size = raw.get("leaderboard_size", config.leaderboard_size)

    # paths in the file are relative to the file itself
    if not Path(config.data_dir).is_absolute():
        config.data_dir = str(path.parent / config.data_dir)
    if config.default_cohort not in config.policies:
        raise DomainError(
            "invalid-spec", f"default cohort {config.default_cohort!r} has no policy block"
        )
    return config
