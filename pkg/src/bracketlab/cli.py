"""Command-line surface: simulate, estimate, power, verify.

Exit codes are a stable contract: 0 on success, 1 when estimation,
verification, or file IO fails, 2 on usage errors including malformed
configuration.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .agents import CENSOR_CODE
from .config import ConfigError, parse_config
from .design import Scenario, Treatment
from .estimation import (
    AllCensored,
    Degenerate,
    EmptySample,
    InvalidParams,
    NotConverged,
    RankDeficient,
    mwu_test,
    nls_kappa,
    power_two_sample,
    summarize_means,
    tobit_right,
)
from .experiment import DataFormatError, iter_observations, read_csv, simulate_dataset, write_csv
from .preferences import Bundle, Lottery, money_metric
from .reports import (
    MwuRow,
    VerifyRow,
    render_kappa_csv,
    render_kappa_markdown,
    render_means_csv,
    render_means_markdown,
    render_mwu_csv,
    render_mwu_markdown,
    render_tobit_csv,
    render_tobit_markdown,
    render_verify_csv,
    render_verify_markdown,
    render_verify_text,
)
from .theory import (
    DEMO_TOL,
    MenuPair,
    additivity_residual,
    cara_shift_invariance,
    epsilon_menu_pair,
    maximizer_choices,
    mixture_linearity,
    model_zoo,
    unidentifiability_probe,
    warp_scan,
)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

SUITES = ("additivity", "unidentifiability", "cara", "mixture", "warp", "all")

_FAILURES = (
    EmptySample,
    Degenerate,
    NotConverged,
    AllCensored,
    RankDeficient,
    DataFormatError,
    OSError,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bracketlab",
        description="Simulate, estimate, and verify work/money choice-bracketing designs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="generate a synthetic price-list dataset")
    sim.add_argument("--config", required=True, help="INI run configuration")
    sim.add_argument("--out", required=True, help="output CSV path")
    sim.add_argument("--seed", type=int, default=None, help="override the config seed")
    sim.add_argument("--workers", type=int, default=None, help="simulation threads")
    sim.set_defaults(func=cmd_simulate)

    est = sub.add_parser("estimate", help="estimate statistics from a dataset CSV")
    est.add_argument("stat", choices=("means", "mwu", "kappa", "tobit"))
    est.add_argument("--data", required=True, help="dataset CSV path")
    est.add_argument("--out", required=True, help="report output directory")
    est.add_argument("--config", default=None, help="optional INI with [estimators] defaults")
    est.add_argument("--censor-limit", type=float, default=None)
    est.add_argument("--continuity", action="store_true", default=None)
    est.add_argument("--keep-inconsistent", action="store_true", default=None)
    est.set_defaults(func=cmd_estimate)

    pwr = sub.add_parser("power", help="two-sample sample-size calculation")
    pwr.add_argument("--d", type=float, required=True, help="standardized effect size")
    pwr.add_argument("--alpha", type=float, default=0.05)
    pwr.add_argument("--power", type=float, default=0.90)
    pwr.add_argument("--ratio", type=float, default=1.0, help="larger/smaller group ratio")
    pwr.add_argument("--are", action="store_true", help="inflate by the rank-sum efficiency bound")
    pwr.set_defaults(func=cmd_power)

    ver = sub.add_parser("verify", help="run the identification check suites")
    ver.add_argument("--suite", choices=SUITES, default="all")
    ver.add_argument("--out", default=None, help="optional report output directory")
    ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidParams as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _FAILURES as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


# ---------------------------------------------------------------- simulate


def cmd_simulate(args) -> int:
    config = parse_config(args.config, seed_override=args.seed)
    workers = args.workers if args.workers is not None else config.workers
    if workers < 1:
        raise ConfigError("--workers must be at least 1")
    dataset = simulate_dataset(config.population, workers=workers)
    write_csv(dataset, args.out)
    print(f"wrote {len(dataset)} subjects to {args.out}")
    return EXIT_OK


# ---------------------------------------------------------------- estimate


def _resolved_options(args):
    """Flag > config > built-in default for the estimator options."""
    if args.config is not None:
        cfg = parse_config(args.config, require_seed=False)
        censor, continuity, keep = cfg.censor_limit, cfg.continuity, not cfg.drop_inconsistent
    else:
        censor, continuity, keep = CENSOR_CODE, False, False
    if args.censor_limit is not None:
        censor = args.censor_limit
    if args.continuity is not None:
        continuity = args.continuity
    if args.keep_inconsistent is not None:
        keep = args.keep_inconsistent
    return censor, continuity, not keep


def _cell_wages(dataset, drop_inconsistent):
    cells: dict[tuple[Treatment, Scenario], list[float]] = {}
    for record, outcome in iter_observations(dataset, drop_inconsistent):
        cells.setdefault((record.treatment, outcome.scenario), []).append(outcome.res_wage)
    return cells


def _write_reports(out_dir: str, stem: str, markdown: str, csv_text: str) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / f"{stem}.md").write_text(markdown, encoding="utf-8")
    (out / f"{stem}.csv").write_text(csv_text, encoding="utf-8")
    print(f"wrote {out / f'{stem}.md'} and {out / f'{stem}.csv'}")


def cmd_estimate(args) -> int:
    censor, continuity, drop = _resolved_options(args)
    dataset = read_csv(args.data)
    if args.stat == "means":
        cells = summarize_means(dataset, drop_inconsistent=drop)
        if not cells:
            raise EmptySample("no scenario observations after filtering")
        _write_reports(args.out, "means", render_means_markdown(cells), render_means_csv(cells))
    elif args.stat == "mwu":
        wages = _cell_wages(dataset, drop)
        rows = []
        for scenario in Scenario:
            present = [t for t in Treatment if (t, scenario) in wages]
            for i, t_a in enumerate(present):
                for t_b in present[i + 1 :]:
                    x, y = wages[(t_a, scenario)], wages[(t_b, scenario)]
                    rows.append(
                        MwuRow(scenario, t_a, t_b, len(x), len(y), mwu_test(x, y, continuity))
                    )
        if not rows:
            raise EmptySample("need at least two treatments with data in one scenario")
        _write_reports(args.out, "mwu", render_mwu_markdown(rows), render_mwu_csv(rows))
    elif args.stat == "kappa":
        fit = nls_kappa(dataset)
        _write_reports(args.out, "kappa", render_kappa_markdown(fit), render_kappa_csv(fit))
    else:
        fits = _tobit_fits(dataset, drop, censor)
        _write_reports(args.out, "tobit", render_tobit_markdown(fits), render_tobit_csv(fits))
    return EXIT_OK


def _tobit_fits(dataset, drop_inconsistent, censor):
    """Per scenario: reservation wage on an intercept plus arm dummies.

    The first treatment present (in declaration order) is the baseline.
    """
    wages = _cell_wages(dataset, drop_inconsistent)
    fits = []
    for scenario in Scenario:
        present = [t for t in Treatment if (t, scenario) in wages]
        if not present:
            continue
        y, dummies = [], []
        for t in present:
            for wage in wages[(t, scenario)]:
                y.append(wage)
                dummies.append(t)
        X = np.column_stack(
            [np.ones(len(y))] + [[1.0 if d is t else 0.0 for d in dummies] for t in present[1:]]
        )
        names = ["const"] + [t.value for t in present[1:]]
        fits.append((scenario, names, tobit_right(np.asarray(y), X, limit=censor)))
    if not fits:
        raise EmptySample("no scenario observations after filtering")
    return fits


# ------------------------------------------------------------------- power


def cmd_power(args) -> int:
    n_large, n_small = power_two_sample(args.d, args.alpha, args.power, args.ratio, args.are)
    print(f"n_large={n_large} n_small={n_small}")
    return EXIT_OK


# ------------------------------------------------------------------ verify

_PASS_TOL = 1e-9
_COIN = Lottery(((Bundle(0, 0.0), 0.5), (Bundle(0, 1.0), 0.5)))
_POSITIVE_COIN = Lottery(((Bundle(0, 1.0), 0.5), (Bundle(0, 2.0), 0.5)))
_WEALTH_GRID = (0.0, 1.0, 2.5)
_POSITIVE_WEALTH_GRID = (1.0, 10.0)
_P_GRID = tuple(k / 10.0 for k in range(1, 10))


def _status(observed_clean: bool, expect_clean: bool) -> str:
    if observed_clean == expect_clean:
        return "pass" if expect_clean else "expected violation"
    return "FAIL"


def _generic_battery() -> list[MenuPair]:
    zero = Bundle(0, 0.0)
    return [
        MenuPair((zero, Bundle(5, 1.0), Bundle(10, 2.0)), (zero, Bundle(3, 0.5), Bundle(8, 2.5))),
        MenuPair((zero, Bundle(7, 1.25)), (zero, Bundle(2, 0.75))),
    ]


def _random_menu_battery(n_menus: int = 100, seed: int = 7):
    rng = np.random.default_rng(seed)
    menus = []
    for _ in range(n_menus):
        size = int(rng.integers(2, 6))
        menus.append(
            tuple(
                Bundle(int(rng.integers(0, 21)), float(rng.uniform(0.5, 8.0)))
                for _ in range(size)
            )
        )
    return menus


def _additivity_rows() -> list[VerifyRow]:
    rows = []
    for entry in model_zoo():
        if entry.expect_additive is None:
            continue
        residual = additivity_residual(entry.model, entry.grid)
        if entry.expect_additive:
            rows.append(
                VerifyRow(
                    "additivity",
                    entry.name,
                    "grid residual",
                    f"{residual:.3e}",
                    "< 1e-09",
                    _status(residual < _PASS_TOL, True),
                )
            )
        else:
            a, b = entry.witness
            witness = abs(
                money_metric(entry.model, a + b)
                - money_metric(entry.model, a)
                - money_metric(entry.model, b)
            )
            rows.append(
                VerifyRow(
                    "additivity",
                    entry.name,
                    "witness residual",
                    f"{witness:.4f}",
                    "> 0.001",
                    _status(witness <= DEMO_TOL, False),
                )
            )
    return rows


def _unidentifiability_rows() -> list[VerifyRow]:
    rows = []
    for entry in model_zoo():
        if entry.expect_additive is None:
            continue
        if entry.expect_additive:
            report = unidentifiability_probe(entry.model, _generic_battery())
            rows.append(
                VerifyRow(
                    "unidentifiability",
                    entry.name,
                    "menu violations",
                    str(len(report)),
                    "0",
                    _status(len(report) == 0, True),
                )
            )
        else:
            a, b = entry.witness
            gap = abs(
                money_metric(entry.model, a + b)
                - money_metric(entry.model, a)
                - money_metric(entry.model, b)
            )
            pair = epsilon_menu_pair(entry.model, a, b, gap / 4.0)
            report = unidentifiability_probe(entry.model, [pair])
            rows.append(
                VerifyRow(
                    "unidentifiability",
                    entry.name,
                    "menu violations",
                    str(len(report)),
                    "> 0",
                    _status(len(report) == 0, False),
                )
            )
    return rows


def _cara_rows() -> list[VerifyRow]:
    rows = []
    for entry in model_zoo():
        if entry.expect_cara is None:
            continue
        if entry.positive_money_only:
            gap = cara_shift_invariance(entry.model, _POSITIVE_COIN, _POSITIVE_WEALTH_GRID)
        else:
            gap = cara_shift_invariance(entry.model, _COIN, _WEALTH_GRID)
        expected = "< 1e-09" if entry.expect_cara else "> 0.001"
        observed_clean = gap < _PASS_TOL if entry.expect_cara else gap <= DEMO_TOL
        rows.append(
            VerifyRow(
                "cara",
                entry.name,
                "max CE shift",
                f"{gap:.3e}",
                expected,
                _status(observed_clean, entry.expect_cara),
            )
        )
    return rows


def _mixture_rows() -> list[VerifyRow]:
    rows = []
    for entry in model_zoo():
        if entry.expect_mixture is None:
            continue
        gap = mixture_linearity(entry.model, _COIN, _P_GRID)
        expected = "< 1e-09" if entry.expect_mixture else "> 0.001"
        observed_clean = gap < _PASS_TOL if entry.expect_mixture else gap <= DEMO_TOL
        rows.append(
            VerifyRow(
                "mixture",
                entry.name,
                "max linearity gap",
                f"{gap:.4f}" if gap >= DEMO_TOL else f"{gap:.3e}",
                expected,
                _status(observed_clean, entry.expect_mixture),
            )
        )
    return rows


def _warp_rows() -> list[VerifyRow]:
    menus = _random_menu_battery()
    rows = []
    for entry in model_zoo():
        report = warp_scan(maximizer_choices(entry.model, menus))
        rows.append(
            VerifyRow(
                "warp",
                entry.name,
                "violations in 100 menus",
                str(len(report)),
                "0",
                _status(len(report) == 0, True),
            )
        )
    return rows


_SUITE_RUNNERS = {
    "additivity": _additivity_rows,
    "unidentifiability": _unidentifiability_rows,
    "cara": _cara_rows,
    "mixture": _mixture_rows,
    "warp": _warp_rows,
}


def verify_rows(suite: str = "all") -> list[VerifyRow]:
    """All VerifyRow results for one suite name (or every suite)."""
    if suite == "all":
        rows = []
        for runner in _SUITE_RUNNERS.values():
            rows.extend(runner())
        return rows
    return _SUITE_RUNNERS[suite]()


def cmd_verify(args) -> int:
    rows = verify_rows(args.suite)
    print(render_verify_text(rows), end="")
    if args.out is not None:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "verify.md").write_text(render_verify_markdown(rows), encoding="utf-8")
        (out / "verify.csv").write_text(render_verify_csv(rows), encoding="utf-8")
    return EXIT_OK if all(r.ok for r in rows) else EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
