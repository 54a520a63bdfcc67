"""The two token economies.

Money is pre-mined at genesis into the treasury, capped at that supply,
and pegged at 0.20 CHF per unit; it only ever moves by transfer. Context
is uncapped, minted one action at a time, and burned when spent on votes,
so total-minted doubles as an activity counter.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal

MONEY = "money"
CONTEXT = "context"

CHF_PER_MONEY_UNIT = Decimal("0.20")


@dataclass(frozen=True)
class TokenDefinition:
    token_id: str
    supply_policy: str  # "pre-mined-capped" | "mint-on-action"
    peg_currency: str | None = None
    peg_rate: Decimal | None = None


MONEY_TOKEN = TokenDefinition(
    token_id=MONEY,
    supply_policy="pre-mined-capped",
    peg_currency="CHF",
    peg_rate=CHF_PER_MONEY_UNIT,
)

CONTEXT_TOKEN = TokenDefinition(token_id=CONTEXT, supply_policy="mint-on-action")

TOKENS = {MONEY: MONEY_TOKEN, CONTEXT: CONTEXT_TOKEN}


def chf_value(money_units: int) -> Decimal:
    """Exact CHF value of a Money balance at the fixed peg."""
    return (Decimal(money_units) * CHF_PER_MONEY_UNIT).quantize(Decimal("0.01"))
