"""The experimental design: treatments, scenarios, and the price list.

Every treatment offers a choice between a lighter option A and a
heavier option B (15 extra decoding tasks) whose pay rises down a
16-row price list. Treatments differ only in how the same total
outcomes are split between the presented choice and an endowment
granted outside it; LOW is the exception, dropping the endowed work
entirely so that narrow and broad evaluations can be told apart.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .preferences import Bundle

__all__ = [
    "Treatment",
    "Scenario",
    "TreatmentSpec",
    "PriceList",
    "BASE_WAGE",
    "treatment_spec",
    "price_list",
]

BASE_WAGE = 4.00
"""Dollars already attached to option A; extra wages come on top."""


class Treatment(enum.Enum):
    BROAD = "BROAD"
    NARROW = "NARROW"
    LOW = "LOW"
    PARTIAL = "PARTIAL"
    BEFORE = "BEFORE"
    AFTER = "AFTER"


class Scenario(enum.Enum):
    S1 = "S1"
    S2 = "S2"


@dataclass(frozen=True)
class TreatmentSpec:
    """One treatment x scenario cell: presented options plus endowment."""

    treatment: Treatment
    scenario: Scenario
    option_a: Bundle
    option_b_tasks: int
    endowment: Bundle
    base_wage: float = BASE_WAGE

    def option_b(self, extra_wage: float) -> Bundle:
        """Option B at a given extra wage: 15 more tasks, more money."""
        return Bundle(self.option_b_tasks, self.option_a.money + extra_wage)

    def full_outcome(self, presented: Bundle) -> Bundle:
        """Presented option plus the endowment."""
        return presented + self.endowment


@dataclass(frozen=True)
class PriceList:
    """Ascending extra-wage grid; the shipped design has 16 rows."""

    extra_wages: tuple[float, ...]

    def __post_init__(self) -> None:
        if list(self.extra_wages) != sorted(self.extra_wages):
            raise ValueError("extra_wages must be ascending")


# (a_tasks, a_money, b_tasks, endow_tasks, endow_money); BEFORE and
# AFTER share NARROW's outcome structure by construction
_NARROW_ROWS = {
    Scenario.S1: (0, 4.0, 15, 15, 2.0),
    Scenario.S2: (15, 4.0, 30, 15, 2.0),
}
_TABLE: dict[tuple[Treatment, Scenario], tuple[int, float, int, int, float]] = {
    (Treatment.BROAD, Scenario.S1): (15, 6.0, 30, 0, 0.0),
    (Treatment.NARROW, Scenario.S1): _NARROW_ROWS[Scenario.S1],
    (Treatment.LOW, Scenario.S1): (0, 4.0, 15, 0, 2.0),
    (Treatment.PARTIAL, Scenario.S1): (15, 4.0, 30, 0, 2.0),
    (Treatment.BEFORE, Scenario.S1): _NARROW_ROWS[Scenario.S1],
    (Treatment.AFTER, Scenario.S1): _NARROW_ROWS[Scenario.S1],
    (Treatment.BROAD, Scenario.S2): (30, 6.0, 45, 0, 0.0),
    (Treatment.NARROW, Scenario.S2): _NARROW_ROWS[Scenario.S2],
    (Treatment.LOW, Scenario.S2): (15, 4.0, 30, 0, 2.0),
    (Treatment.PARTIAL, Scenario.S2): (30, 4.0, 45, 0, 2.0),
    (Treatment.BEFORE, Scenario.S2): _NARROW_ROWS[Scenario.S2],
    (Treatment.AFTER, Scenario.S2): _NARROW_ROWS[Scenario.S2],
}


def treatment_spec(t: Treatment, s: Scenario) -> TreatmentSpec:
    """The design-table row for one treatment x scenario cell."""
    a_tasks, a_money, b_tasks, e_tasks, e_money = _TABLE[(t, s)]
    return TreatmentSpec(
        treatment=t,
        scenario=s,
        option_a=Bundle(a_tasks, a_money),
        option_b_tasks=b_tasks,
        endowment=Bundle(e_tasks, e_money),
    )


def price_list() -> PriceList:
    """The 16-row extra-wage grid: 0.25 to 4.00 in 0.25 steps."""
    return PriceList(tuple(0.25 * k for k in range(1, 17)))
