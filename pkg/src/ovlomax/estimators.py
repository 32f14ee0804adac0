"""Shape, ratio, and overlap estimation with delta-method uncertainty.

Three estimation pipelines share one backbone.  Writing ``t_j = log(1 + 1/x_j)``
(exponential with mean alpha under the standardized inverse Lomax law):

* ``srs``   mean of the ``t_j`` over a simple random sample; Gamma(n, alpha/n).
* ``rss``   mean of the retained ranked-set values' transforms; unbiased with
  variance ``alpha**2 * H_r / (m * r**2)`` where ``H_r`` is the r-th harmonic
  number.
* ``bayes`` Jeffreys-prior posterior mode, ``sum(t_j) / (n + 1)``;
  Gamma(n, alpha/(n+1)).

The shape ratio feeds the closed-form overlap coefficients, and first/second
order delta expansions in the ratio give variances, biases, and normal-theory
intervals.

Every variance/bias formula exists in two modes.  ``derived`` recomputes the
constants from the exact moment algebra of the sampling laws and is the
default.  ``as-published`` reproduces the originally published expressions
verbatim, including the spots where those disagree with their own derivations
(the Matusita bias constant is twice the derived value, the divergence-based
bias differs in sign and in a denominator power, and the Bayes constants are
dimensionally inconsistent for unequal sample sizes).  The two modes are kept
side by side and never merged silently; report builders warn when they
disagree.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dist_core import DomainError, log_transform, std_normal_quantile
from .overlap import (
    MEASURES,
    OverlapTriple,
    overlap_curvature,
    overlap_grad_sq,
)
from .sampling import RankedSample, RssDesign, SrsDesign

__all__ = [
    "METHOD_SRS",
    "METHOD_RSS",
    "METHOD_BAYES",
    "METHODS",
    "SOURCE_DERIVED",
    "SOURCE_AS_PUBLISHED",
    "SOURCES",
    "AlphaEstimate",
    "RatioEstimate",
    "DeltaMethodReport",
    "ConfidenceInterval",
    "DegenerateDesignError",
    "MethodMismatchError",
    "harmonic",
    "mle_alpha_srs",
    "alpha_rss",
    "alpha_bayes_jeffreys",
    "ratio_estimate",
    "ovl_point",
    "ratio_variance_factor",
    "delta_variance",
    "delta_bias",
    "confidence_interval",
]

METHOD_SRS = "srs"
METHOD_RSS = "rss"
METHOD_BAYES = "bayes"
METHODS = (METHOD_SRS, METHOD_RSS, METHOD_BAYES)

SOURCE_DERIVED = "derived"
SOURCE_AS_PUBLISHED = "as-published"
SOURCES = (SOURCE_DERIVED, SOURCE_AS_PUBLISHED)


class DegenerateDesignError(DomainError):
    """The design is too small for the requested variance formula (n2 < 3)."""


class MethodMismatchError(ValueError):
    """The two shape estimates come from different estimation methods."""


@dataclass(frozen=True)
class AlphaEstimate:
    """A single population's shape estimate together with its design."""

    value: float
    method: str
    design: SrsDesign | RssDesign


@dataclass(frozen=True)
class RatioEstimate:
    """Shape ratio estimate alpha1_hat / alpha2_hat.

    ``unbiased`` applies the method's mean correction to ``raw``; for ``rss``
    no correction is published and the two coincide.  ``variance`` is the
    plug-in variance of the corrected ratio, or None for the degenerate
    srs/bayes case n2 < 3 (the point estimate is still usable).
    """

    raw: float
    unbiased: float
    variance: float | None
    method: str
    design1: SrsDesign | RssDesign
    design2: SrsDesign | RssDesign
    source: str = SOURCE_DERIVED


@dataclass(frozen=True)
class DeltaMethodReport:
    """Delta-method summary of one overlap coefficient at the estimated ratio."""

    measure: str
    point: float
    variance: float | None
    bias: float | None
    formula_source: str


@dataclass(frozen=True)
class ConfidenceInterval:
    lo: float
    hi: float
    level: float
    bias_corrected: bool
    clamped: bool


def harmonic(r: int) -> float:
    """H_r = 1 + 1/2 + ... + 1/r."""
    if not isinstance(r, (int, np.integer)) or r < 1:
        raise DomainError("r must be a positive integer")
    return float(sum(1.0 / i for i in range(1, int(r) + 1)))


def _validate_sample(sample) -> np.ndarray:
    arr = np.asarray(sample, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise DomainError("sample must be a nonempty one-dimensional collection")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise DomainError("sample values must be positive and finite")
    return arr


def mle_alpha_srs(sample) -> AlphaEstimate:
    """Maximum-likelihood shape estimate from a simple random sample."""
    arr = _validate_sample(sample)
    value = float(np.mean(log_transform(arr)))
    return AlphaEstimate(value=value, method=METHOD_SRS, design=SrsDesign(arr.size))


def alpha_rss(ranked: RankedSample) -> AlphaEstimate:
    """Unbiased shape estimate from a ranked set sample (mean over all
    retained transforms; the rank sum telescopes, so no rank weights appear)."""
    value = float(np.mean(log_transform(ranked.values)))
    return AlphaEstimate(value=value, method=METHOD_RSS, design=ranked.design)


def alpha_bayes_jeffreys(sample) -> AlphaEstimate:
    """Posterior mode under the Jeffreys prior 1/alpha: sum(t_j)/(n+1),
    i.e. n/(n+1) times the maximum-likelihood estimate."""
    arr = _validate_sample(sample)
    value = float(np.sum(log_transform(arr)) / (arr.size + 1))
    return AlphaEstimate(value=value, method=METHOD_BAYES, design=SrsDesign(arr.size))


def _validate_source(source: str) -> str:
    if source not in SOURCES:
        raise DomainError(f"unknown formula source {source!r}; expected one of {SOURCES}")
    return source


def _srs_factor(n1: int, n2: int) -> float:
    # Var(corrected ratio) / R**2 for the srs pipeline; exact, not asymptotic.
    if n2 < 3:
        raise DegenerateDesignError(f"variance formula requires n2 >= 3, got n2={n2}")
    return (n1 + n2 - 1) / (n1 * (n2 - 2))


def _rss_factor(d1: RssDesign, d2: RssDesign) -> float:
    # Sum of squared coefficients of variation of the two shape estimates.
    return harmonic(d1.r) / (d1.m * d1.r**2) + harmonic(d2.r) / (d2.m * d2.r**2)


def ratio_variance_factor(
    method: str,
    design1: SrsDesign | RssDesign,
    design2: SrsDesign | RssDesign,
    source: str = SOURCE_DERIVED,
) -> float:
    """Var(corrected ratio)/R**2 for a method/design pair.

    Raises :class:`DegenerateDesignError` when the srs/bayes formula is
    undefined (n2 < 3).
    """
    _validate_source(source)
    if method == METHOD_RSS:
        if not isinstance(design1, RssDesign) or not isinstance(design2, RssDesign):
            raise DomainError("rss variance requires ranked designs")
        return _rss_factor(design1, design2)
    if method == METHOD_SRS:
        return _srs_factor(design1.n, design2.n)
    if method == METHOD_BAYES:
        n1, n2 = design1.n, design2.n
        base = _srs_factor(n1, n2)
        if source == SOURCE_DERIVED:
            # the derived mean correction maps the bayes ratio onto the
            # corrected srs ratio exactly, so the factor is shared
            return base
        return ((n1 - 1) / (n2 - 1)) ** 2 * base
    raise DomainError(f"unknown method {method!r}; expected one of {METHODS}")


def ratio_estimate(
    a1: AlphaEstimate, a2: AlphaEstimate, source: str = SOURCE_DERIVED
) -> RatioEstimate:
    """Combine two shape estimates of the same method into a ratio estimate."""
    _validate_source(source)
    if a1.method != a2.method:
        raise MethodMismatchError(f"cannot mix methods {a1.method!r} and {a2.method!r}")
    method = a1.method
    raw = a1.value / a2.value

    if method == METHOD_RSS:
        unbiased = raw
    elif method == METHOD_SRS:
        n2 = a2.design.n
        unbiased = raw * (n2 - 1) / n2
    elif method == METHOD_BAYES:
        n1, n2 = a1.design.n, a2.design.n
        if source == SOURCE_DERIVED:
            unbiased = raw * (n1 + 1) * (n2 - 1) / (n1 * (n2 + 1))
        else:
            unbiased = raw * n1 * (n1 - 1) * (n1 + 1) / (n2**2 * (n2 + 1))
    else:
        raise DomainError(f"unknown method {method!r}; expected one of {METHODS}")

    try:
        factor = ratio_variance_factor(method, a1.design, a2.design, source)
    except DegenerateDesignError:
        variance = None
    else:
        variance = unbiased**2 * factor

    return RatioEstimate(
        raw=raw,
        unbiased=unbiased,
        variance=variance,
        method=method,
        design1=a1.design,
        design2=a2.design,
        source=source,
    )


def ovl_point(est: RatioEstimate) -> OverlapTriple:
    """All three overlap coefficients at the corrected ratio estimate."""
    return OverlapTriple.from_ratio(est.unbiased)


# ---------------------------------------------------------------------------
# Published variance/bias shapes, reproduced verbatim for as-published mode.
# ---------------------------------------------------------------------------


def _published_var_shape(measure: str, r: float) -> float:
    if measure == "rho":
        return r * (1.0 - r) ** 2 / (1.0 + r) ** 4
    if measure == "delta":
        if r == 1.0:
            return math.exp(-2.0)  # continuous limit of the printed expression
        return r ** (2.0 / (1.0 - r)) * math.log(r) ** 2 / (1.0 - r) ** 2
    if measure == "lambda":
        return r * r * (1.0 - r * r) ** 2 / (r * r - r + 1.0) ** 4
    raise DomainError(f"unknown measure {measure!r}; expected one of {MEASURES}")


def _published_bias_shape(measure: str, r: float) -> float:
    if measure == "rho":
        return math.sqrt(r) * (3.0 * r * r - 6.0 * r - 1.0) / (1.0 + r) ** 3
    if measure == "lambda":
        return (r**5 - 3.0 * r**3 - r * r) / (r * r - r + 1.0) ** 2
    if measure == "delta":
        if r == 1.0:
            return math.nan  # the printed bracket diverges at the symmetry point
        logr = math.log(r)
        bracket = (
            r ** ((2.0 * r - 1.0) / (1.0 - r)) * r * (2.0 * r - logr - 2.0) * logr
            - (r - 1.0) ** 2
        ) / (r - 1.0) ** 3
        signed = r * r * bracket
        return -signed if r < 1.0 else signed
    raise DomainError(f"unknown measure {measure!r}; expected one of {MEASURES}")


def _published_bias_constant(
    measure: str, method: str, design1, design2
) -> float:
    # Each published bias expression carries its own leading constant; the
    # 1/2 appears only for the Matusita coefficient (and for the simple
    # random sampling Weitzman line, but not its ranked-set analogue).
    if method == METHOD_SRS:
        base = _srs_factor(design1.n, design2.n)
        return base / 2.0 if measure in ("rho", "delta") else base
    if method == METHOD_RSS:
        base = _rss_factor(design1, design2)
        return base / 2.0 if measure == "rho" else base
    if method == METHOD_BAYES:
        n1, n2 = design1.n, design2.n
        if n2 < 3:
            raise DegenerateDesignError(f"bias formula requires n2 >= 3, got n2={n2}")
        base = ((n2 + 2) / (n1 + 1)) ** 2 * n1 * (n1 + n2 - 1) / ((n2 - 1) ** 2 * (n2 - 2))
        return base / 2.0 if measure == "rho" else base
    raise DomainError(f"unknown method {method!r}; expected one of {METHODS}")


def delta_variance(
    measure: str,
    ratio: float,
    method: str,
    design1: SrsDesign | RssDesign,
    design2: SrsDesign | RssDesign,
    source: str = SOURCE_DERIVED,
) -> float:
    """First-order variance of an overlap coefficient at the given ratio.

    ``derived`` evaluates (dg/dR)**2 * Var(ratio); at R=1 the Matusita and
    divergence coefficients have zero slope, while the Weitzman coefficient
    keeps its two-sided kink limit exp(-2) * Var(ratio).
    """
    _validate_source(source)
    r = float(ratio)
    if not math.isfinite(r) or r <= 0.0:
        raise DomainError("ratio must be positive and finite")
    factor = ratio_variance_factor(method, design1, design2, source)
    if source == SOURCE_DERIVED:
        return factor * r * r * float(overlap_grad_sq(measure, r))
    return factor * _published_var_shape(measure, r)


def delta_bias(
    measure: str,
    ratio: float,
    method: str,
    design1: SrsDesign | RssDesign,
    design2: SrsDesign | RssDesign,
    source: str = SOURCE_DERIVED,
) -> float:
    """Second-order bias of an overlap coefficient at the given ratio.

    ``derived`` evaluates Var(ratio) * d2g/dR2 / 2.  ``as-published``
    reproduces the printed expressions with their own constants; for the
    Weitzman coefficient the printed bracket has no finite value at R=1 and
    NaN is returned there.
    """
    _validate_source(source)
    r = float(ratio)
    if not math.isfinite(r) or r <= 0.0:
        raise DomainError("ratio must be positive and finite")
    if source == SOURCE_DERIVED:
        factor = ratio_variance_factor(method, design1, design2, source)
        return 0.5 * factor * r * r * float(overlap_curvature(measure, r))
    constant = _published_bias_constant(measure, method, design1, design2)
    return constant * _published_bias_shape(measure, r)


def confidence_interval(
    point: float,
    variance: float,
    bias: float = 0.0,
    level: float = 0.95,
    bias_corrected: bool = False,
) -> ConfidenceInterval:
    """Normal-theory interval for an overlap coefficient, clamped to [0, 1].

    With ``bias_corrected`` the interval is centred on ``point - bias``;
    otherwise ``bias`` is ignored.
    """
    point = float(point)
    variance = float(variance)
    level = float(level)
    if not (0.0 < level < 1.0):
        raise DomainError("confidence level must lie strictly inside (0, 1)")
    if not math.isfinite(variance) or variance < 0.0:
        raise DomainError("variance must be finite and nonnegative")
    center = point - float(bias) if bias_corrected else point
    half = std_normal_quantile(1.0 - (1.0 - level) / 2.0) * math.sqrt(variance)
    lo, hi = center - half, center + half
    # clip both ends into [0, 1]; monotone, so lo <= hi survives even when a
    # bias-corrected centre lands entirely outside the unit interval
    clamped_lo = min(max(lo, 0.0), 1.0)
    clamped_hi = min(max(hi, 0.0), 1.0)
    return ConfidenceInterval(
        lo=clamped_lo,
        hi=clamped_hi,
        level=level,
        bias_corrected=bool(bias_corrected),
        clamped=(clamped_lo != lo) or (clamped_hi != hi),
    )
