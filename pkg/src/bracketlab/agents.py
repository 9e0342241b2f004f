"""Bracketing modes: how an agent frames a presented choice.

A Broad agent evaluates presented options together with the endowment,
a Narrow agent evaluates the presented options alone, and a Partial
agent counts endowed tasks but not endowed money. ConvexKappa is a
reduced form defined directly on reservation wages, r(kappa) =
(1 - kappa) * r_broad + kappa * r_narrow, the quantity the kappa
estimator targets; it has no utility-level counterpart here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .design import PriceList, Treatment, TreatmentSpec, price_list
from .preferences import ROOT_TOL, Bundle, UtilityModel

__all__ = [
    "Broad",
    "Narrow",
    "Partial",
    "ConvexKappa",
    "BracketingMode",
    "Agent",
    "ModeUnsupported",
    "NoIndifference",
    "CENSOR_CODE",
    "WAGE_BRACKET",
    "evaluate_option",
    "reservation_wage_exact",
    "snap_to_list",
]

CENSOR_CODE = 4.25
"""Recorded wage when option B is rejected on every list row."""

WAGE_BRACKET = 100.0
"""Reservation wages are searched for on [-WAGE_BRACKET, WAGE_BRACKET]."""

_SNAP_SLACK = 1e-7  # absorbs root-finding error when r sits on a grid point


class ModeUnsupported(Exception):
    """The operation is not defined for this bracketing mode."""


class NoIndifference(Exception):
    """No wage in the search bracket makes the agent indifferent."""


@dataclass(frozen=True)
class Broad:
    pass


@dataclass(frozen=True)
class Narrow:
    pass


@dataclass(frozen=True)
class Partial:
    pass


@dataclass(frozen=True)
class ConvexKappa:
    """Reservation-wage mixture weight on the narrow frame.

    Values outside [0, 1] are allowed; empirical estimates can exceed 1.
    """

    kappa: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.kappa):
            raise ValueError("kappa must be finite")


BracketingMode = Broad | Narrow | Partial | ConvexKappa


@dataclass(frozen=True)
class Agent:
    """A preference model plus the frame it is applied through.

    framing_shift (dollars) moves the narrow-frame reservation wage,
    and only in the BEFORE and AFTER treatments; it models attention
    effects of announcing endowed work early or late.
    """

    model: UtilityModel
    mode: BracketingMode
    framing_shift: float = 0.0


def _framed_value(model: UtilityModel, mode: BracketingMode, presented: Bundle, endowment: Bundle) -> float:
    if isinstance(mode, Broad):
        return model.value(presented.tasks + endowment.tasks, presented.money + endowment.money)
    if isinstance(mode, Narrow):
        return model.value(presented.tasks, presented.money)
    if isinstance(mode, Partial):
        return model.value(presented.tasks + endowment.tasks, presented.money)
    raise ModeUnsupported(f"{type(mode).__name__} has no utility-level evaluation")


def evaluate_option(agent: Agent, presented: Bundle, endowment: Bundle) -> float:
    """Utility of a presented option as seen through the agent's frame."""
    return _framed_value(agent.model, agent.mode, presented, endowment)


def _mode_reservation(model: UtilityModel, mode: BracketingMode, spec: TreatmentSpec) -> float:
    """Extra wage equating the framed values of options A and B."""
    at, am = spec.option_a.tasks, spec.option_a.money
    bt = spec.option_b_tasks
    et, em = spec.endowment.tasks, spec.endowment.money
    if isinstance(mode, Broad):
        target = model.value(at + et, am + em)
        task_arg, money_base = bt + et, am + em
    elif isinstance(mode, Narrow):
        target = model.value(at, am)
        task_arg, money_base = bt, am
    elif isinstance(mode, Partial):
        target = model.value(at + et, am)
        task_arg, money_base = bt + et, am
    else:
        raise ModeUnsupported(f"{type(mode).__name__} is not a pure frame")

    def gap(r: float) -> float:
        return model.value(task_arg, money_base + r) - target

    lo, hi = -WAGE_BRACKET, WAGE_BRACKET
    if not gap(lo) <= 0.0 <= gap(hi):  # also catches NaN
        raise NoIndifference(
            f"no switch on [-{WAGE_BRACKET:g}, {WAGE_BRACKET:g}] for {spec.treatment.value} {spec.scenario.value}"
        )
    while hi - lo > ROOT_TOL:
        mid = 0.5 * (lo + hi)
        if gap(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def reservation_wage_exact(agent: Agent, spec: TreatmentSpec) -> float:
    """Continuous extra wage at which the agent switches to option B.

    ConvexKappa agents get the affine combination of the Broad and
    Narrow wages. The framing shift enters through the narrow
    component and only under BEFORE or AFTER.
    """
    shift = agent.framing_shift if spec.treatment in (Treatment.BEFORE, Treatment.AFTER) else 0.0
    mode = agent.mode
    if isinstance(mode, ConvexKappa):
        r_broad = _mode_reservation(agent.model, Broad(), spec)
        r_narrow = _mode_reservation(agent.model, Narrow(), spec) + shift
        return (1.0 - mode.kappa) * r_broad + mode.kappa * r_narrow
    r = _mode_reservation(agent.model, mode, spec)
    if isinstance(mode, Narrow):
        r += shift
    return r


def snap_to_list(r: float, plist: PriceList | None = None) -> tuple[float, bool]:
    """Record a continuous wage on the grid: (recorded wage, censored).

    The agent accepts at indifference, so the recorded wage is the
    smallest grid wage at or above r; above the grid the record is
    CENSOR_CODE with the censored flag set.
    """
    if plist is None:
        plist = price_list()
    for wage in plist.extra_wages:
        if wage >= r - _SNAP_SLACK:
            return wage, False
    return CENSOR_CODE, True
