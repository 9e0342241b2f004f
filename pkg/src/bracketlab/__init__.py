"""Choice-bracketing laboratory for work/money price-list experiments.

Three layers, usable separately:

- simulate: parameterized preferences and bracketing modes generate
  synthetic multiple-price-list datasets (`PopulationSpec`,
  `simulate_dataset`).
- estimate: cell summaries, rank-sum tests, the bracketing-weight
  regression, right-censored Tobit, and power analysis
  (`summarize_means`, `mwu_test`, `nls_kappa`, `tobit_right`,
  `power_two_sample`).
- verify: numerical probes of the identification propositions
  (`additivity_residual`, `unidentifiability_probe`,
  `cara_shift_invariance`, `mixture_linearity`, `warp_scan`).

The `bracketlab` console script exposes all three as subcommands.
"""

from .preferences import (
    Bundle,
    CaraMoneyPowerCost,
    CrraMoney,
    LinearMetric,
    Lottery,
    NonMonotoneModel,
    QuasiLinearPowerCost,
    ROOT_TOL,
    UtilityModel,
    ZERO_BUNDLE,
    certainty_equivalent,
    expected_utility,
    money_metric,
    utility,
)
from .design import (
    BASE_WAGE,
    PriceList,
    Scenario,
    Treatment,
    TreatmentSpec,
    price_list,
    treatment_spec,
)
from .agents import (
    Agent,
    BracketingMode,
    Broad,
    CENSOR_CODE,
    ConvexKappa,
    ModeUnsupported,
    Narrow,
    NoIndifference,
    Partial,
    evaluate_option,
    reservation_wage_exact,
    snap_to_list,
)
from .experiment import (
    CSV_COLUMNS,
    Covariates,
    DataFormatError,
    Dataset,
    KappaComposition,
    MixtureComposition,
    PopulationSpec,
    ScenarioOutcome,
    SubjectRecord,
    classify_consistency,
    iter_observations,
    population_digest,
    read_csv,
    simulate_dataset,
    simulate_subject,
    write_csv,
)
from .estimation import (
    AllCensored,
    CellSummary,
    Degenerate,
    EmptySample,
    InvalidParams,
    KappaFit,
    MwuResult,
    NotConverged,
    OlsFit,
    RankDeficient,
    TobitFit,
    TooLarge,
    kappa_profile_oracle,
    mwu_exact,
    mwu_test,
    nls_kappa,
    ols,
    power_two_sample,
    summarize_means,
    tobit_right,
)
from .theory import (
    ChoiceTrace,
    ChosenNotInMenu,
    MenuPair,
    TieDetected,
    Violation,
    ViolationReport,
    ZooEntry,
    additivity_residual,
    cara_shift_invariance,
    epsilon_menu_pair,
    maximizer_choices,
    mixture_linearity,
    model_zoo,
    trace_pair,
    unidentifiability_probe,
    warp_scan,
)
from .config import ConfigError, RunConfig, example_config, parse_config

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # preferences
    "Bundle",
    "ZERO_BUNDLE",
    "Lottery",
    "UtilityModel",
    "QuasiLinearPowerCost",
    "CaraMoneyPowerCost",
    "LinearMetric",
    "CrraMoney",
    "NonMonotoneModel",
    "ROOT_TOL",
    "utility",
    "expected_utility",
    "money_metric",
    "certainty_equivalent",
    # design
    "Treatment",
    "Scenario",
    "TreatmentSpec",
    "PriceList",
    "treatment_spec",
    "price_list",
    "BASE_WAGE",
    # agents
    "Agent",
    "BracketingMode",
    "Broad",
    "Narrow",
    "Partial",
    "ConvexKappa",
    "ModeUnsupported",
    "NoIndifference",
    "CENSOR_CODE",
    "evaluate_option",
    "reservation_wage_exact",
    "snap_to_list",
    # experiment
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
    "iter_observations",
    "population_digest",
    "read_csv",
    "write_csv",
    "CSV_COLUMNS",
    "DataFormatError",
    # estimation
    "CellSummary",
    "MwuResult",
    "KappaFit",
    "TobitFit",
    "OlsFit",
    "summarize_means",
    "mwu_test",
    "mwu_exact",
    "nls_kappa",
    "kappa_profile_oracle",
    "tobit_right",
    "power_two_sample",
    "ols",
    "EmptySample",
    "TooLarge",
    "Degenerate",
    "NotConverged",
    "AllCensored",
    "RankDeficient",
    "InvalidParams",
    # theory
    "MenuPair",
    "ChoiceTrace",
    "Violation",
    "ViolationReport",
    "TieDetected",
    "ChosenNotInMenu",
    "additivity_residual",
    "trace_pair",
    "unidentifiability_probe",
    "epsilon_menu_pair",
    "cara_shift_invariance",
    "mixture_linearity",
    "warp_scan",
    "maximizer_choices",
    "ZooEntry",
    "model_zoo",
    # config
    "ConfigError",
    "RunConfig",
    "parse_config",
    "example_config",
]
