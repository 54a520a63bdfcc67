"""Per-cohort incentive policy: which feedback actions move which tokens.

Feedback comes first, tokens second: a reward that cannot be paid never
rejects the feedback that triggered it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class IncentivePolicy:
    cohort_id: str
    incentives_enabled: bool = True
    money_per_answer: int = 1
    context_per_contextualization: int = 1
    vote_cost_context: int = 1

    def normalized(self) -> "IncentivePolicy":
        """Disabled cohorts pay nothing and vote for free."""
        if not self.incentives_enabled:
            return IncentivePolicy(
                cohort_id=self.cohort_id,
                incentives_enabled=False,
                money_per_answer=0,
                context_per_contextualization=0,
                vote_cost_context=0,
            )
        return self

    def validate(self) -> None:
        if not self.cohort_id or not self.cohort_id.strip():
            raise DomainError("invalid-spec", "cohort_id must be non-empty")
        for name in ("money_per_answer", "context_per_contextualization", "vote_cost_context"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 0:
                raise DomainError("invalid-spec", f"{name} must be a non-negative integer")

    def to_payload(self) -> dict:
        return {
            "change": "policy",
            "cohort": self.cohort_id,
            "incentives_enabled": self.incentives_enabled,
            "money_per_answer": self.money_per_answer,
            "context_per_contextualization": self.context_per_contextualization,
            "vote_cost_context": self.vote_cost_context,
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "IncentivePolicy":
        return cls(
            cohort_id=payload["cohort"],
            incentives_enabled=payload["incentives_enabled"],
            money_per_answer=payload["money_per_answer"],
            context_per_contextualization=payload["context_per_contextualization"],
            vote_cost_context=payload["vote_cost_context"],
        )


DEFAULT_POLICIES = {
    "treatment": IncentivePolicy(cohort_id="treatment"),
    "control": IncentivePolicy(cohort_id="control", incentives_enabled=False).normalized(),
}


def answer_reward(policy: IncentivePolicy) -> int:
    """Money units owed for a first answer under this policy."""
    return policy.money_per_answer if policy.incentives_enabled else 0


def contextualization_reward(policy: IncentivePolicy) -> int:
    """Context units minted per accepted contextualization."""
    return policy.context_per_contextualization if policy.incentives_enabled else 0


def vote_cost(policy: IncentivePolicy) -> int:
    return policy.vote_cost_context if policy.incentives_enabled else 0
