"""Monte Carlo study engine and table emission.

A study runs over a grid of cells: true shape ratio ``R`` x set sizes
``(r1, r2)`` x cycle count ``m`` x estimation method.  Each cell/method pair
simulates ``replications`` independent samples (simple random samples of
size ``r*m`` for ``srs``/``bayes``, ranked set samples of design ``(r, m)``
for ``rss``), estimates the corrected ratio and the three overlap
coefficients, and aggregates bias, mean squared error, interval coverage,
and mean interval length.

Interpretation notes baked into the emitted artifacts:

* the published study tables label the interval-coverage column ``ratio``;
  here it is computed as the empirical coverage proportion of the nominal
  ``1 - level_alpha0`` interval, and both the plain and the bias-corrected
  interval variants are emitted (as two sibling CSV files);
* efficiency is MSE(srs) / MSE(rss) at equal retained sample sizes, so
  values above one favour ranked set sampling;
* the published efficiency tables are not reproducible from the published
  formulas, so they are transcribed verbatim into a fixtures file and
  compared cell by cell in a discrepancy report instead of being asserted.

Reproducibility: every replication draws from its own PCG64 generator seeded
by a SplitMix64 fold of (master_seed, namespace, cell_index, replication).
Results are therefore independent of scheduling, and re-running a config
yields byte-identical CSV output, with any number of workers.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace

import numpy as np

from . import _seeds
from .dist_core import DomainError, InverseLomax
from .estimators import (
    METHOD_RSS,
    METHOD_SRS,
    METHODS,
    SOURCE_DERIVED,
    SOURCES,
    alpha_bayes_jeffreys,
    alpha_rss,
    confidence_interval,
    delta_bias,
    delta_variance,
    mle_alpha_srs,
    ratio_estimate,
)
from .overlap import MEASURES, overlap_value
from .sampling import RssDesign, SrsDesign, draw_rss, draw_srs

__all__ = [
    "DEFAULT_R_VALUES",
    "DEFAULT_SET_SIZES",
    "DEFAULT_FIGURE_R_GRID",
    "STUDY_CSV_COLUMNS",
    "ConfigError",
    "MissingCellError",
    "StudyConfig",
    "StudyRow",
    "StudyResult",
    "EfficiencyCell",
    "analytic_mse",
    "analytic_efficiency",
    "efficiency_grid",
    "efficiency_cells_from_result",
    "run_study",
    "emit_rows_csv",
    "parse_rows_csv",
    "emit_tables",
    "emit_figure_data",
    "discrepancy_report",
]

DEFAULT_R_VALUES = (0.1, 0.5, 0.75, 0.8, 0.9)
DEFAULT_SET_SIZES = tuple((r1, r2) for r1 in (2, 3, 4, 5) for r2 in (2, 3, 4, 5))
DEFAULT_FIGURE_R_GRID = tuple(round(0.05 * k, 2) for k in range(1, 20))

STUDY_CSV_COLUMNS = (
    "method",
    "measure",
    "R",
    "r1",
    "r2",
    "m",
    "reps",
    "abs_bias",
    "signed_bias",
    "mse",
    "coverage",
    "ci_length",
    "efficiency",
    "formula_source",
    "seed",
)


class ConfigError(ValueError):
    """A study configuration is malformed."""


class MissingCellError(ValueError):
    """Table emission was asked for a grid the rows do not cover."""

    def __init__(self, cells: list[str]):
        self.cells = list(cells)
        preview = "; ".join(self.cells)
        super().__init__(f"missing {len(self.cells)} grid cell(s): {preview}")


def _round6(x: float) -> float:
    return float(f"{float(x):.6g}")


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.6g}"


@dataclass
class StudyConfig:
    """Grid and execution parameters for one study run.

    ``figure_r_grid`` is only consulted by :func:`emit_figure_data`; the
    dense default covers (0, 1) in steps of 0.05.
    """

    r_values: tuple = DEFAULT_R_VALUES
    alpha2: float = 1.0
    set_sizes: tuple = DEFAULT_SET_SIZES
    cycles: tuple = (8,)
    replications: int = 1000
    level_alpha0: float = 0.05
    master_seed: int = 0
    formula_source: str = SOURCE_DERIVED
    figure_r_grid: tuple | None = None

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        try:
            self.r_values = tuple(float(r) for r in self.r_values)
        except (TypeError, ValueError):
            raise ConfigError("r_values must be a sequence of numbers") from None
        if not self.r_values or any(not math.isfinite(r) or r <= 0 for r in self.r_values):
            raise ConfigError("r_values must be nonempty, positive, and finite")
        try:
            self.set_sizes = tuple((int(a), int(b)) for a, b in self.set_sizes)
        except (TypeError, ValueError):
            raise ConfigError("set_sizes must be a sequence of (r1, r2) pairs") from None
        if not self.set_sizes or any(a < 1 or b < 1 for a, b in self.set_sizes):
            raise ConfigError("set sizes must be integers >= 1")
        try:
            self.cycles = tuple(int(m) for m in self.cycles)
        except (TypeError, ValueError):
            raise ConfigError("cycles must be a sequence of integers") from None
        if not self.cycles or any(m < 1 for m in self.cycles):
            raise ConfigError("cycles must be integers >= 1")
        if not isinstance(self.replications, int) or self.replications < 1:
            raise ConfigError("replications must be an integer >= 1")
        self.alpha2 = float(self.alpha2)
        if not math.isfinite(self.alpha2) or self.alpha2 <= 0:
            raise ConfigError("alpha2 must be positive and finite")
        self.level_alpha0 = float(self.level_alpha0)
        if not (0.0 < self.level_alpha0 < 1.0):
            raise ConfigError("level_alpha0 must lie strictly inside (0, 1)")
        if not isinstance(self.master_seed, int) or self.master_seed < 0:
            raise ConfigError("master_seed must be a nonnegative integer")
        if self.formula_source not in SOURCES:
            raise ConfigError(f"formula_source must be one of {SOURCES}")
        if self.figure_r_grid is not None:
            try:
                self.figure_r_grid = tuple(float(r) for r in self.figure_r_grid)
            except (TypeError, ValueError):
                raise ConfigError("figure_r_grid must be a sequence of numbers") from None
            if not self.figure_r_grid or any(
                not math.isfinite(r) or r <= 0 for r in self.figure_r_grid
            ):
                raise ConfigError("figure_r_grid must be nonempty, positive, and finite")

    @classmethod
    def from_dict(cls, data: dict) -> "StudyConfig":
        if not isinstance(data, dict):
            raise ConfigError("configuration must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown configuration key(s): {', '.join(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> "StudyConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}") from None
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        out = {
            "r_values": list(self.r_values),
            "alpha2": self.alpha2,
            "set_sizes": [list(p) for p in self.set_sizes],
            "cycles": list(self.cycles),
            "replications": self.replications,
            "level_alpha0": self.level_alpha0,
            "master_seed": self.master_seed,
            "formula_source": self.formula_source,
        }
        if self.figure_r_grid is not None:
            out["figure_r_grid"] = list(self.figure_r_grid)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


@dataclass(frozen=True)
class StudyRow:
    """One (method, measure, cell) aggregate; float fields are stored already
    rounded to six significant digits so CSV emission round-trips exactly."""

    method: str
    measure: str
    R: float
    r1: int
    r2: int
    m: int
    reps: int
    abs_bias: float
    signed_bias: float
    mse: float
    coverage: float
    ci_length: float
    efficiency: float | None
    formula_source: str
    seed: int


@dataclass(frozen=True)
class EfficiencyCell:
    """Analytic (and optionally simulated) MSE ratio for one grid cell."""

    measure: str
    R: float
    r1: int
    r2: int
    m: int
    analytic_eff: float
    empirical_eff: float | None = None


@dataclass
class StudyResult:
    rows: list = field(default_factory=list)
    rows_corrected: list = field(default_factory=list)
    skipped: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# Analytic efficiency
# ---------------------------------------------------------------------------


def analytic_mse(measure, R, method, design1, design2, source=SOURCE_DERIVED) -> float:
    """Delta-method MSE (variance plus squared bias) at the true ratio."""
    v = delta_variance(measure, R, method, design1, design2, source)
    b = delta_bias(measure, R, method, design1, design2, source)
    return v + b * b


def analytic_efficiency(measure, R, r1, r2, m, source=SOURCE_DERIVED) -> float:
    """MSE(srs)/MSE(rss) at equal retained sizes n_i = r_i * m."""
    srs = analytic_mse(measure, R, METHOD_SRS, SrsDesign(r1 * m), SrsDesign(r2 * m), source)
    rss = analytic_mse(measure, R, METHOD_RSS, RssDesign(r1, m), RssDesign(r2, m), source)
    return srs / rss


def efficiency_grid(
    r_values=DEFAULT_R_VALUES,
    set_sizes=DEFAULT_SET_SIZES,
    cycles=(8, 40),
    source=SOURCE_DERIVED,
) -> list:
    cells = []
    for m in cycles:
        for measure in MEASURES:
            for R in r_values:
                for r1, r2 in set_sizes:
                    cells.append(
                        EfficiencyCell(
                            measure=measure,
                            R=float(R),
                            r1=int(r1),
                            r2=int(r2),
                            m=int(m),
                            analytic_eff=analytic_efficiency(measure, R, r1, r2, m, source),
                        )
                    )
    return cells


def efficiency_cells_from_result(cfg: "StudyConfig", result: "StudyResult") -> list:
    """Analytic efficiency over the config grid, annotated with the simulated
    MSE ratios carried by the ranked-set study rows where available."""
    empirical = {
        (row.measure, row.R, row.r1, row.r2, row.m): row.efficiency
        for row in result.rows
        if row.method == METHOD_RSS
    }
    cells = []
    for m in cfg.cycles:
        for measure in MEASURES:
            for R in cfg.r_values:
                for r1, r2 in cfg.set_sizes:
                    cells.append(
                        EfficiencyCell(
                            measure=measure,
                            R=float(R),
                            r1=int(r1),
                            r2=int(r2),
                            m=int(m),
                            analytic_eff=analytic_efficiency(
                                measure, R, r1, r2, m, cfg.formula_source
                            ),
                            empirical_eff=empirical.get(
                                (measure, _round6(R), int(r1), int(r2), int(m))
                            ),
                        )
                    )
    return cells


# ---------------------------------------------------------------------------
# Simulation
# ---------------------------------------------------------------------------


def _enumerate_cells(cfg: StudyConfig) -> list:
    return [
        (R, r1, r2, m, method)
        for R in cfg.r_values
        for (r1, r2) in cfg.set_sizes
        for m in cfg.cycles
        for method in METHODS
    ]


def _run_cell(cfg: StudyConfig, namespace: int, cell_index: int, cell, keep_reps=False):
    R, r1, r2, m, method = cell
    n1, n2 = r1 * m, r2 * m
    if method != METHOD_RSS and n2 < 3:
        return {"skipped": f"n2 = {n2} < 3: srs/bayes variance formulas undefined"}

    alpha1 = R * cfg.alpha2
    d1 = InverseLomax(alpha1)
    d2 = InverseLomax(cfg.alpha2)
    level = 1.0 - cfg.level_alpha0
    truth = {meas: float(overlap_value(meas, R)) for meas in MEASURES}
    reps = cfg.replications

    err = {meas: np.empty(reps) for meas in MEASURES}
    cov_u = {meas: np.empty(reps) for meas in MEASURES}
    len_u = {meas: np.empty(reps) for meas in MEASURES}
    cov_c = {meas: np.empty(reps) for meas in MEASURES}
    len_c = {meas: np.empty(reps) for meas in MEASURES}
    ratios = np.empty(reps) if keep_reps else None

    for rep in range(reps):
        rng = _seeds.stream(cfg.master_seed, namespace, cell_index, rep)
        if method == METHOD_RSS:
            a1 = alpha_rss(draw_rss(d1, RssDesign(r1, m), rng))
            a2 = alpha_rss(draw_rss(d2, RssDesign(r2, m), rng))
        else:
            x1 = draw_srs(d1, SrsDesign(n1), rng)
            x2 = draw_srs(d2, SrsDesign(n2), rng)
            if method == METHOD_SRS:
                a1, a2 = mle_alpha_srs(x1), mle_alpha_srs(x2)
            else:
                a1, a2 = alpha_bayes_jeffreys(x1), alpha_bayes_jeffreys(x2)
        est = ratio_estimate(a1, a2, cfg.formula_source)
        rhat = est.unbiased
        if ratios is not None:
            ratios[rep] = rhat
        for meas in MEASURES:
            point = float(overlap_value(meas, rhat))
            var = delta_variance(meas, rhat, method, est.design1, est.design2, cfg.formula_source)
            bias = delta_bias(meas, rhat, method, est.design1, est.design2, cfg.formula_source)
            ci_u = confidence_interval(point, var, 0.0, level, bias_corrected=False)
            ci_c = confidence_interval(point, var, bias, level, bias_corrected=True)
            err[meas][rep] = point - truth[meas]
            cov_u[meas][rep] = 1.0 if ci_u.lo <= truth[meas] <= ci_u.hi else 0.0
            len_u[meas][rep] = ci_u.hi - ci_u.lo
            cov_c[meas][rep] = 1.0 if ci_c.lo <= truth[meas] <= ci_c.hi else 0.0
            len_c[meas][rep] = ci_c.hi - ci_c.lo

    out = {"measures": {}}
    for meas in MEASURES:
        out["measures"][meas] = {
            "signed_bias": float(np.mean(err[meas])),
            "mse": float(np.mean(err[meas] ** 2)),
            "coverage": float(np.mean(cov_u[meas])),
            "ci_length": float(np.mean(len_u[meas])),
            "coverage_corrected": float(np.mean(cov_c[meas])),
            "ci_length_corrected": float(np.mean(len_c[meas])),
        }
    if keep_reps:
        out["ratios"] = ratios
    return out


def _cell_task(args):
    cfg, namespace, cell_index, cell = args
    return cell_index, _run_cell(cfg, namespace, cell_index, cell)


def run_study(cfg: StudyConfig, workers: int = 1, namespace: int = 0) -> StudyResult:
    """Execute the full grid and aggregate per-cell rows.

    ``workers > 1`` distributes cells over a process pool; the per-replication
    seeding makes the result identical to the sequential run.
    """
    cfg.validate()
    cells = _enumerate_cells(cfg)
    tasks = [(cfg, namespace, idx, cell) for idx, cell in enumerate(cells)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = dict(pool.map(_cell_task, tasks, chunksize=1))
    else:
        outcomes = dict(map(_cell_task, tasks))

    result = StudyResult()
    mse_srs: dict = {}
    # first pass: collect srs MSEs so rss rows can carry empirical efficiency
    for idx, cell in enumerate(cells):
        R, r1, r2, m, method = cell
        outcome = outcomes[idx]
        if method == METHOD_SRS and "skipped" not in outcome:
            for meas in MEASURES:
                mse_srs[(R, r1, r2, m, meas)] = outcome["measures"][meas]["mse"]

    for idx, cell in enumerate(cells):
        R, r1, r2, m, method = cell
        outcome = outcomes[idx]
        if "skipped" in outcome:
            result.skipped.append(
                {"R": R, "r1": r1, "r2": r2, "m": m, "method": method,
                 "reason": outcome["skipped"]}
            )
            continue
        seed = _seeds.derive_seed(cfg.master_seed, namespace, idx)
        for meas in MEASURES:
            agg = outcome["measures"][meas]
            efficiency = None
            if method == METHOD_RSS:
                base = mse_srs.get((R, r1, r2, m, meas))
                if base is not None and agg["mse"] > 0.0:
                    efficiency = _round6(base / agg["mse"])
            common = dict(
                method=method,
                measure=meas,
                R=_round6(R),
                r1=r1,
                r2=r2,
                m=m,
                reps=cfg.replications,
                abs_bias=_round6(abs(agg["signed_bias"])),
                signed_bias=_round6(agg["signed_bias"]),
                mse=_round6(agg["mse"]),
                efficiency=efficiency,
                formula_source=cfg.formula_source,
                seed=seed,
            )
            result.rows.append(
                StudyRow(coverage=_round6(agg["coverage"]),
                         ci_length=_round6(agg["ci_length"]), **common)
            )
            result.rows_corrected.append(
                StudyRow(coverage=_round6(agg["coverage_corrected"]),
                         ci_length=_round6(agg["ci_length_corrected"]), **common)
            )

    result.metadata = {
        "config": cfg.to_dict(),
        "rng": "numpy PCG64",
        "numpy_version": np.__version__,
        "seeding": "SplitMix64 fold of (master_seed, namespace, cell_index, replication)",
        "namespace": namespace,
        "columns": list(STUDY_CSV_COLUMNS),
        "notes": [
            "coverage is the empirical coverage proportion of the nominal "
            "(1 - level_alpha0) interval (the 'ratio' column of the published layout)",
            "efficiency = MSE(srs) / MSE(rss) at equal retained sample sizes",
            "interval variants: plain intervals in rows, bias-corrected in rows_corrected",
        ],
    }
    return result


# ---------------------------------------------------------------------------
# CSV emission / parsing
# ---------------------------------------------------------------------------


def emit_rows_csv(rows) -> str:
    """Pinned long-format schema, LF line endings, six significant digits."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(STUDY_CSV_COLUMNS)
    for row in rows:
        writer.writerow(
            [
                row.method,
                row.measure,
                _fmt(row.R),
                row.r1,
                row.r2,
                row.m,
                row.reps,
                _fmt(row.abs_bias),
                _fmt(row.signed_bias),
                _fmt(row.mse),
                _fmt(row.coverage),
                _fmt(row.ci_length),
                _fmt(row.efficiency),
                row.formula_source,
                row.seed,
            ]
        )
    return buf.getvalue()


def parse_rows_csv(text: str) -> list:
    """Inverse of :func:`emit_rows_csv`; exact because rows store rounded values."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header != list(STUDY_CSV_COLUMNS):
        raise ConfigError(f"unexpected study CSV header: {header}")
    rows = []
    for rec in reader:
        if not rec:
            continue
        rows.append(
            StudyRow(
                method=rec[0],
                measure=rec[1],
                R=float(rec[2]),
                r1=int(rec[3]),
                r2=int(rec[4]),
                m=int(rec[5]),
                reps=int(rec[6]),
                abs_bias=float(rec[7]),
                signed_bias=float(rec[8]),
                mse=float(rec[9]),
                coverage=float(rec[10]),
                ci_length=float(rec[11]),
                efficiency=None if rec[12] == "" else float(rec[12]),
                formula_source=rec[13],
                seed=int(rec[14]),
            )
        )
    return rows


# ---------------------------------------------------------------------------
# Table emission
# ---------------------------------------------------------------------------


def _check_grid(present: set, expected: list, describe) -> None:
    missing = [describe(cell) for cell in expected if cell not in present]
    if missing:
        raise MissingCellError(missing)


def emit_tables(items, layout: str, fmt: str = "text", grid: dict | None = None) -> str:
    """Render either efficiency cells or study rows into a table artifact.

    ``layout='eff_table'`` consumes :class:`EfficiencyCell` items and renders
    the R x (r1, r2) efficiency grids per measure and cycle count.
    ``layout='bias_table'`` consumes :class:`StudyRow` items and renders
    |bias| / coverage / interval-length blocks per method and measure.

    ``grid`` may pin the expected cell grid, e.g.
    ``{"r_values": [...], "set_sizes": [...], "cycles": [...]}``; missing
    cells raise :class:`MissingCellError` naming every absent cell.
    """
    if layout == "eff_table":
        return _emit_eff_table(items, fmt, grid)
    if layout == "bias_table":
        return _emit_bias_table(items, fmt, grid)
    raise DomainError(f"unknown layout {layout!r}; expected 'eff_table' or 'bias_table'")


def _expected_grid(grid, items, attrs):
    if grid is not None:
        r_values = [float(r) for r in grid["r_values"]]
        set_sizes = [(int(a), int(b)) for a, b in grid["set_sizes"]]
        cycles = [int(m) for m in grid["cycles"]]
    elif items:
        r_values = sorted({it.R for it in items})
        set_sizes = sorted({(it.r1, it.r2) for it in items})
        cycles = sorted({it.m for it in items})
    else:
        raise MissingCellError(["(no rows and no grid supplied)"])
    return r_values, set_sizes, cycles


def _emit_eff_table(cells, fmt, grid):
    r_values, set_sizes, cycles = _expected_grid(grid, cells, None)
    present = {(c.measure, c.R, c.r1, c.r2, c.m): c for c in cells}
    expected = [
        (meas, float(R), r1, r2, m)
        for m in cycles
        for meas in MEASURES
        for R in r_values
        for (r1, r2) in set_sizes
    ]
    _check_grid(
        set(present),
        expected,
        lambda c: f"measure={c[0]} R={_fmt(c[1])} r1={c[2]} r2={c[3]} m={c[4]}",
    )

    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["measure", "R", "r1", "r2", "m", "analytic_eff", "empirical_eff"])
        for key in expected:
            c = present[key]
            writer.writerow(
                [c.measure, _fmt(c.R), c.r1, c.r2, c.m, _fmt(c.analytic_eff), _fmt(c.empirical_eff)]
            )
        return buf.getvalue()
    if fmt == "json":
        records = [
            {
                "measure": present[k].measure,
                "R": present[k].R,
                "r1": present[k].r1,
                "r2": present[k].r2,
                "m": present[k].m,
                "analytic_eff": present[k].analytic_eff,
                "empirical_eff": present[k].empirical_eff,
            }
            for k in expected
        ]
        return json.dumps({"layout": "eff_table", "cells": records}, indent=2) + "\n"
    if fmt != "text":
        raise DomainError(f"unknown format {fmt!r}; expected text, csv, or json")

    r1_set = sorted({p[0] for p in set_sizes})
    r2_set = sorted({p[1] for p in set_sizes})
    lines = []
    for m in cycles:
        lines.append(f"Relative efficiency MSE(srs)/MSE(rss), m={m} cycles")
        lines.append("(values above 1 favour ranked set sampling)")
        for meas in MEASURES:
            lines.append(f"  measure={meas}")
            for R in r_values:
                header = f"    R={_fmt(R):<8}" + "".join(f"{f'r2={r2}':>10}" for r2 in r2_set)
                lines.append(header)
                for r1 in r1_set:
                    rowvals = []
                    for r2 in r2_set:
                        c = present.get((meas, float(R), r1, r2, m))
                        rowvals.append(f"{_fmt(c.analytic_eff) if c else '-':>10}")
                    lines.append(f"    r1={r1:<7}" + "".join(rowvals))
        lines.append("")
    return "\n".join(lines) + "\n"


def _emit_bias_table(rows, fmt, grid):
    r_values, set_sizes, cycles = _expected_grid(grid, rows, None)
    methods = [m for m in METHODS]
    present = {(r.method, r.measure, r.R, r.r1, r.r2, r.m): r for r in rows}
    expected = [
        (method, meas, float(R), r1, r2, m)
        for m in cycles
        for R in r_values
        for (r1, r2) in set_sizes
        for method in methods
        for meas in MEASURES
    ]
    _check_grid(
        set(present),
        expected,
        lambda c: f"method={c[0]} measure={c[1]} R={_fmt(c[2])} r1={c[3]} r2={c[4]} m={c[5]}",
    )

    if fmt == "csv":
        return emit_rows_csv([present[k] for k in expected])
    if fmt == "json":
        records = [
            {
                "method": r.method,
                "measure": r.measure,
                "R": r.R,
                "r1": r.r1,
                "r2": r.r2,
                "m": r.m,
                "abs_bias": r.abs_bias,
                "coverage": r.coverage,
                "ci_length": r.ci_length,
            }
            for r in (present[k] for k in expected)
        ]
        return json.dumps({"layout": "bias_table", "cells": records}, indent=2) + "\n"
    if fmt != "text":
        raise DomainError(f"unknown format {fmt!r}; expected text, csv, or json")

    lines = []
    some = next(iter(present.values()))
    for m in cycles:
        for R in r_values:
            lines.append(
                f"m={m}  R={_fmt(R)}  source={some.formula_source}  "
                "(ratio = empirical coverage of the nominal interval; "
                "L = mean interval length)"
            )
            head = f"  {'measure':<8}{'(r1,r2)':<9}"
            for method in methods:
                head += f"{method + ':|bias|':>14}{method + ':ratio':>13}{method + ':L':>10}"
            lines.append(head)
            for meas in MEASURES:
                for r1, r2 in set_sizes:
                    line = f"  {meas:<8}{f'({r1},{r2})':<9}"
                    for method in methods:
                        r = present.get((method, meas, float(R), r1, r2, m))
                        if r is None:
                            line += f"{'-':>14}{'-':>13}{'-':>10}"
                        else:
                            line += (
                                f"{_fmt(r.abs_bias):>14}{_fmt(r.coverage):>13}"
                                f"{_fmt(r.ci_length):>10}"
                            )
                    lines.append(line)
            lines.append("")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Figure data
# ---------------------------------------------------------------------------


def emit_figure_data(cfg: StudyConfig, workers: int = 1) -> str:
    """Long-format (method, measure, R, bias, mse) curves over a dense ratio grid.

    Uses the first (r1, r2) pair and first cycle count of the config as the
    fixed design, and a separate seed namespace so figure replications never
    reuse study streams.
    """
    grid = cfg.figure_r_grid if cfg.figure_r_grid is not None else DEFAULT_FIGURE_R_GRID
    sub = replace(
        cfg,
        r_values=tuple(grid),
        set_sizes=(cfg.set_sizes[0],),
        cycles=(cfg.cycles[0],),
        figure_r_grid=None,
    )
    result = run_study(sub, workers=workers, namespace=1)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["method", "measure", "R", "bias", "mse"])
    for row in result.rows:
        writer.writerow([row.method, row.measure, _fmt(row.R), _fmt(row.signed_bias), _fmt(row.mse)])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Discrepancy report against the transcribed published tables
# ---------------------------------------------------------------------------


def _published_tables() -> dict:
    from importlib.resources import files

    text = files("ovlomax.data").joinpath("published_tables.json").read_text(encoding="utf-8")
    return json.loads(text)


def discrepancy_report(source: str = SOURCE_DERIVED) -> str:
    """CSV of printed vs computed values for every transcribed table cell.

    Efficiency cells are recomputed analytically.  Real-data cells come from
    the bundled datasets; ranked-set cells there are reported as NaN because
    no ranked-set design is stated for that example (the printed values are
    recorded, nothing is computable to compare them against).
    """
    from .reports import real_data_summary

    fixtures = _published_tables()
    rows = []

    for m_key in sorted(fixtures["efficiency"], key=int):
        m = int(m_key)
        table = f"efficiency_m{m}"
        block = fixtures["efficiency"][m_key]
        for R_key in sorted(block, key=float):
            R = float(R_key)
            for meas in MEASURES:
                values = block[R_key][meas]
                for i, r1 in enumerate((2, 3, 4, 5)):
                    for j, r2 in enumerate((2, 3, 4, 5)):
                        printed = float(values[i][j])
                        computed = analytic_efficiency(meas, R, r1, r2, m, source)
                        rows.append(
                            (table, f"measure={meas}:R={_fmt(R)}:r1={r1}:r2={r2}", printed, computed)
                        )

    real = fixtures["real_data"]
    summary = real_data_summary(source)
    rows.append(("real_data", "alpha1", real["alpha1"], summary["alpha1"]))
    rows.append(("real_data", "alpha2", real["alpha2"], summary["alpha2"]))
    rows.append(("real_data", "ratio", real["ratio"], summary["ratio_raw"]))
    for meas in MEASURES:
        rows.append(
            ("real_data", f"estimate:{meas}", real["estimates"][meas], summary["estimates"][meas])
        )
    for meas in MEASURES:
        for method in METHODS:
            comp = summary["methods"].get(method)
            bias = comp["bias"][meas] if comp else math.nan
            var = comp["variance"][meas] if comp else math.nan
            ci = comp["ci"][meas] if comp else (math.nan, math.nan)
            rows.append(("real_data", f"bias:{meas}:{method}", real["bias"][meas][method], bias))
            rows.append(("real_data", f"var:{meas}:{method}", real["var"][meas][method], var))
            rows.append(("real_data", f"ci_lo:{meas}:{method}", real["ci"][meas][method][0], ci[0]))
            rows.append(("real_data", f"ci_hi:{meas}:{method}", real["ci"][meas][method][1], ci[1]))

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["table", "cell", "printed_value", "computed_value", "abs_diff"])
    for table, cell, printed, computed in rows:
        diff = abs(printed - computed)
        writer.writerow([table, cell, _fmt(printed), _fmt(computed), _fmt(diff)])
    return buf.getvalue()
