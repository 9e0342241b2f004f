"""Simulated price-list sessions over heterogeneous populations.

Each synthetic subject draws covariates and preference parameters from
a population specification, goes through both scenarios of one
treatment, and leaves a 16-row accept/reject record per scenario. The
random stream for subject j is derived from (master seed, j) alone, so
subject j faces the same preference draw in every treatment (common
random numbers) and the dataset is identical under any worker count.
"""
from __future__ import annotations

import hashlib
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Mapping

import numpy as np
from scipy.special import ndtr, ndtri

from .agents import (
    Agent,
    Broad,
    CENSOR_CODE,
    ConvexKappa,
    Narrow,
    reservation_wage_exact,
    snap_to_list,
)
from .design import Scenario, Treatment, price_list, treatment_spec
from .preferences import CaraMoneyPowerCost, QuasiLinearPowerCost, UtilityModel

__all__ = [
    "Covariates",
    "ScenarioOutcome",
    "SubjectRecord",
    "Dataset",
    "MixtureComposition",
    "KappaComposition",
    "PopulationSpec",
    "classify_consistency",
    "simulate_subject",
    "simulate_dataset",
    "subject_stream",
    "iter_observations",
    "write_csv",
    "read_csv",
    "DataFormatError",
    "CSV_COLUMNS",
]

N_ROWS = 16

_TEDIOUSNESS_CENTER = 5.5  # midpoint of the 1..10 scale


@dataclass(frozen=True)
class Covariates:
    male: bool
    age: int
    tediousness: int

    def __post_init__(self) -> None:
        if not 1 <= self.tediousness <= 10:
            raise ValueError("tediousness is a 1..10 scale")
        if self.age < 0:
            raise ValueError("age must be nonnegative")


@dataclass(frozen=True)
class ScenarioOutcome:
    """One price list worth of behavior from one subject."""

    scenario: Scenario
    choices: tuple[bool, ...]
    res_wage: float
    censored: bool
    consistent: bool

    def __post_init__(self) -> None:
        if len(self.choices) != N_ROWS:
            raise ValueError(f"expected {N_ROWS} choices, got {len(self.choices)}")
        if self.consistent:
            if any(self.choices[i] and not self.choices[i + 1] for i in range(N_ROWS - 1)):
                raise ValueError("consistent record with non-monotone choices")
            expected = _switch_wage(self.choices)
            if abs(self.res_wage - expected) > 1e-9:
                raise ValueError(f"res_wage {self.res_wage} does not match switch point {expected}")
            if self.censored != (not any(self.choices)):
                raise ValueError("censored flag contradicts the choice rows")


@dataclass(frozen=True)
class SubjectRecord:
    subject_id: str
    treatment: Treatment
    outcomes: tuple[ScenarioOutcome, ...]
    covariates: Covariates

    def __post_init__(self) -> None:
        if not self.outcomes:
            raise ValueError("a record needs at least one scenario outcome")


@dataclass(frozen=True)
class Dataset:
    """Subject records plus provenance; provenance is not compared."""

    records: tuple[SubjectRecord, ...]
    seed: int | None = field(default=None, compare=False)
    spec_digest: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        ids = [r.subject_id for r in self.records]
        if len(set(ids)) != len(ids):
            raise ValueError("subject_ids must be unique")

    def __len__(self) -> int:
        return len(self.records)


@dataclass(frozen=True)
class MixtureComposition:
    """Each subject is Narrow with probability narrow_share, else Broad."""

    narrow_share: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.narrow_share <= 1.0:
            raise ValueError("narrow_share must lie in [0, 1]")


@dataclass(frozen=True)
class KappaComposition:
    """Every subject mixes frames at reservation-wage level with weight kappa."""

    kappa: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.kappa):
            raise ValueError("kappa must be finite")


@dataclass(frozen=True)
class PopulationSpec:
    """Everything simulate_dataset needs, including the master seed.

    Cost scale alpha is log-normal around alpha_location with a linear
    tediousness link on the log scale; convexity gamma is normal,
    truncated to gamma_bounds, with a location shift for men. Defaults
    are calibrated so simulated reservation wages land mid price list
    with a realistic censoring share; the example config documents them.
    """

    counts: Mapping[Treatment, int]
    seed: int
    composition: MixtureComposition | KappaComposition = MixtureComposition(1.0)
    alpha_location: float = math.log(0.004)
    alpha_scale: float = 0.35
    alpha_tediousness_link: float = 0.08
    gamma_location: float = 2.0
    gamma_scale: float = 0.15
    gamma_male_shift: float = -0.10
    gamma_bounds: tuple[float, float] = (1.0, 4.0)
    rho: float | None = None
    tremble: float = 0.05
    male_share: float = 0.5
    age_range: tuple[int, int] = (18, 70)
    framing_shift: float = 0.0

    def __post_init__(self) -> None:
        for t, n in self.counts.items():
            if not isinstance(t, Treatment):
                raise ValueError(f"counts key {t!r} is not a Treatment")
            if n < 0:
                raise ValueError("counts must be nonnegative")
        for name in ("alpha_location", "alpha_scale", "alpha_tediousness_link",
                     "gamma_location", "gamma_scale", "gamma_male_shift", "framing_shift"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.alpha_scale < 0 or self.gamma_scale < 0:
            raise ValueError("distribution scales must be nonnegative")
        lo, hi = self.gamma_bounds
        if not (1.0 <= lo <= hi):
            raise ValueError("gamma_bounds must satisfy 1 <= lo <= hi")
        if not 0.0 <= self.tremble <= 1.0:
            raise ValueError("tremble is a probability")
        if not 0.0 <= self.male_share <= 1.0:
            raise ValueError("male_share is a probability")
        if self.age_range[0] > self.age_range[1] or self.age_range[0] < 0:
            raise ValueError("age_range must be a nonnegative (lo, hi) pair")
        if self.rho is not None and (self.rho == 0 or not math.isfinite(self.rho)):
            raise ValueError("rho must be nonzero and finite when set")


def _switch_wage(choices: tuple[bool, ...]) -> float:
    wages = price_list().extra_wages
    for wage, accepted in zip(wages, choices):
        if accepted:
            return wage
    return CENSOR_CODE


def classify_consistency(choices: tuple[bool, ...]) -> tuple[bool, float]:
    """Monotonicity flag and recorded wage for one 16-row price list.

    The recorded wage is the smallest accepted wage (the switch point
    when the rows are monotone) or the censor code when every row
    rejects.
    """
    if len(choices) != N_ROWS:
        raise ValueError(f"expected {N_ROWS} choices, got {len(choices)}")
    consistent = not any(choices[i] and not choices[i + 1] for i in range(N_ROWS - 1))
    return consistent, _switch_wage(choices)


def simulate_subject(
    rng: np.random.Generator,
    agent: Agent,
    treatment: Treatment,
    covariates: Covariates,
    *,
    subject_id: str = "",
    tremble: float = 0.0,
) -> SubjectRecord:
    """Run one agent through both scenarios of one treatment.

    The rng is consumed only for tremble draws (16 per scenario, drawn
    only when tremble > 0), keeping streams aligned across runs that
    differ only in the tremble rate being zero or absent.
    """
    wages = price_list().extra_wages
    outcomes = []
    for scenario in (Scenario.S1, Scenario.S2):
        r = reservation_wage_exact(agent, treatment_spec(treatment, scenario))
        snapped, censored = snap_to_list(r)
        flags = [(not censored) and wage >= snapped - 1e-12 for wage in wages]
        if tremble > 0.0:
            u = rng.random(N_ROWS)
            flags = [f != (ui < tremble) for f, ui in zip(flags, u)]
        consistent, recorded = classify_consistency(tuple(flags))
        outcomes.append(
            ScenarioOutcome(
                scenario=scenario,
                choices=tuple(flags),
                res_wage=recorded,
                censored=not any(flags),
                consistent=consistent,
            )
        )
    return SubjectRecord(subject_id, treatment, tuple(outcomes), covariates)


def subject_stream(seed: int, index: int) -> np.random.Generator:
    """Independent per-subject stream keyed by (master seed, index).

    The key deliberately omits the treatment so subject j shares one
    parameter draw across all treatments.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, index))))


def _truncated_normal(u: float, loc: float, scale: float, lo: float, hi: float) -> float:
    if scale == 0.0:
        return min(max(loc, lo), hi)
    a = ndtr((lo - loc) / scale)
    b = ndtr((hi - loc) / scale)
    x = loc + scale * float(ndtri(a + u * (b - a)))
    return min(max(x, lo), hi)


def _draw_subject(spec: PopulationSpec, rng: np.random.Generator) -> tuple[Covariates, Agent]:
    # draw order is part of the determinism contract: male, age,
    # tediousness, alpha shock, gamma quantile, then the mode draw
    male = rng.random() < spec.male_share
    age = int(rng.integers(spec.age_range[0], spec.age_range[1] + 1))
    tediousness = int(rng.integers(1, 11))
    z_alpha = rng.standard_normal()
    u_gamma = rng.random()
    if isinstance(spec.composition, MixtureComposition):
        mode = Narrow() if rng.random() < spec.composition.narrow_share else Broad()
    else:
        mode = ConvexKappa(spec.composition.kappa)
    alpha = math.exp(
        spec.alpha_location
        + spec.alpha_tediousness_link * (tediousness - _TEDIOUSNESS_CENTER)
        + spec.alpha_scale * z_alpha
    )
    gamma_loc = spec.gamma_location + (spec.gamma_male_shift if male else 0.0)
    gamma = _truncated_normal(u_gamma, gamma_loc, spec.gamma_scale, *spec.gamma_bounds)
    model: UtilityModel
    if spec.rho is None:
        model = QuasiLinearPowerCost(alpha=alpha, gamma=gamma)
    else:
        model = CaraMoneyPowerCost(rho=spec.rho, alpha=alpha, gamma=gamma)
    return Covariates(male, age, tediousness), Agent(model, mode, spec.framing_shift)


def population_digest(spec: PopulationSpec) -> str:
    counts = sorted((t.value, n) for t, n in spec.counts.items())
    payload = repr((counts,) + tuple(
        getattr(spec, name)
        for name in (
            "seed", "composition", "alpha_location", "alpha_scale",
            "alpha_tediousness_link", "gamma_location", "gamma_scale",
            "gamma_male_shift", "gamma_bounds", "rho", "tremble",
            "male_share", "age_range", "framing_shift",
        )
    ))
    return hashlib.sha256(payload.encode()).hexdigest()[:12]


def simulate_dataset(spec: PopulationSpec, workers: int = 1) -> Dataset:
    """Simulate every subject in the population specification.

    Deterministic for a fixed seed under any worker count; records are
    ordered by treatment (declaration order), then subject index.
    """

    def build(job: tuple[Treatment, int]) -> SubjectRecord:
        treatment, j = job
        rng = subject_stream(spec.seed, j)
        covariates, agent = _draw_subject(spec, rng)
        return simulate_subject(
            rng,
            agent,
            treatment,
            covariates,
            subject_id=f"{treatment.value}-{j:04d}",
            tremble=spec.tremble,
        )

    jobs = [
        (treatment, j)
        for treatment in Treatment
        for j in range(spec.counts.get(treatment, 0))
    ]
    if workers <= 1:
        records = [build(job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(build, jobs))
    return Dataset(tuple(records), seed=spec.seed, spec_digest=population_digest(spec))


def iter_observations(
    dataset: Dataset, drop_inconsistent: bool = True
) -> Iterator[tuple[SubjectRecord, ScenarioOutcome]]:
    """Yield (record, scenario outcome) rows, filtering inconsistent ones."""
    for record in dataset.records:
        for outcome in record.outcomes:
            if drop_inconsistent and not outcome.consistent:
                continue
            yield record, outcome


CSV_COLUMNS = (
    ("subject_id", "treatment", "scenario")
    + tuple(f"c{i:02d}" for i in range(1, N_ROWS + 1))
    + ("res_wage", "censored", "consistent", "gender", "age", "tediousness")
)


class DataFormatError(Exception):
    """A data file does not match the expected CSV schema."""


def write_csv(dataset: Dataset, path: str) -> None:
    """One row per subject x scenario; money as two-decimal strings."""
    lines = [",".join(CSV_COLUMNS)]
    for record in dataset.records:
        for outcome in record.outcomes:
            cells = [record.subject_id, record.treatment.value, outcome.scenario.value]
            cells += ["1" if c else "0" for c in outcome.choices]
            cells += [
                f"{outcome.res_wage:.2f}",
                "1" if outcome.censored else "0",
                "1" if outcome.consistent else "0",
                "male" if record.covariates.male else "female",
                str(record.covariates.age),
                str(record.covariates.tediousness),
            ]
            lines.append(",".join(cells))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def _parse_row(line_no: int, cells: list[str]) -> tuple[str, Treatment, ScenarioOutcome, Covariates]:
    if len(cells) != len(CSV_COLUMNS):
        raise DataFormatError(f"line {line_no}: expected {len(CSV_COLUMNS)} fields, got {len(cells)}")
    try:
        treatment = Treatment(cells[1])
        scenario = Scenario(cells[2])
        choices = tuple(_parse_flag(c) for c in cells[3 : 3 + N_ROWS])
        res_wage = float(cells[3 + N_ROWS])
        censored = _parse_flag(cells[4 + N_ROWS])
        consistent = _parse_flag(cells[5 + N_ROWS])
        gender = cells[6 + N_ROWS]
        if gender not in ("male", "female"):
            raise ValueError(f"gender must be male or female, got {gender!r}")
        covariates = Covariates(gender == "male", int(cells[7 + N_ROWS]), int(cells[8 + N_ROWS]))
        outcome = ScenarioOutcome(scenario, choices, res_wage, censored, consistent)
    except DataFormatError:
        raise
    except ValueError as exc:
        raise DataFormatError(f"line {line_no}: {exc}") from exc
    return cells[0], treatment, outcome, covariates


def _parse_flag(cell: str) -> bool:
    if cell == "1":
        return True
    if cell == "0":
        return False
    raise ValueError(f"expected 0 or 1, got {cell!r}")


def read_csv(path: str) -> Dataset:
    """Parse a dataset CSV back into records; inverse of write_csv."""
    with open(path, newline="") as fh:
        lines = [ln for ln in fh.read().splitlines() if ln]
    if not lines:
        raise DataFormatError("empty file")
    header = lines[0].split(",")
    if header != list(CSV_COLUMNS):
        raise DataFormatError(f"line 1: bad header, expected {','.join(CSV_COLUMNS)}")
    rows = [_parse_row(i + 2, lines[i + 1].split(",")) for i in range(len(lines) - 1)]

    records = []
    i = 0
    while i < len(rows):
        sid, treatment, outcome, covariates = rows[i]
        outcomes = [outcome]
        j = i + 1
        while j < len(rows) and rows[j][0] == sid:
            if rows[j][1] != treatment or rows[j][3] != covariates:
                raise DataFormatError(f"line {j + 2}: subject {sid} changes treatment or covariates")
            outcomes.append(rows[j][2])
            j += 1
        records.append(SubjectRecord(sid, treatment, tuple(outcomes), covariates))
        i = j
    try:
        return Dataset(tuple(records))
    except ValueError as exc:
        raise DataFormatError(str(exc)) from exc
