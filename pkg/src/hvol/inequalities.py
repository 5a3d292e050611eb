"""Property suites for the volume estimates, swept over seeded weights.

Quantifiers over all valuations are tested on the monomial family only,
the one family with computable closed forms here; the suite reports carry
that restriction in their names.  Sweeps are seeded and deterministic:
sample weights are exact rationals drawn log-uniformly from a fixed box,
margins are computed in exact arithmetic, and every verdict keeps its
worst-case witnesses so the reported margin can be re-derived exactly.

Checks:

* ``thm13`` -- the skewness properness bound on smooth points:
  vol * (max x)^{n-1} * (min x) >= 2^{-n}, through the sharper product
  identity prod_{middle i} (x_max / x_i) >= 1.
* ``skew2`` -- the dimension-2 identity vol = 1 / (x_max * x_min), exact.
* ``dfem`` -- the multiplicity bound: normalized volume >= n^n on smooth
  points, with equality only on the diagonal.
* ``proper`` -- the properness ratio hvol * v(m) / A: per-sample >= 1 on
  smooth points (the displayed chain with constant 1) and a positive,
  sample-stable empirical infimum elsewhere.

The smooth-point linear chain min(x) <= x_i <= sum(x) (the coordinate
consequence of the two-sided comparison with the order valuation) is
asserted on every proper-suite sample.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import core
from .exact import Scalar
from .models import DomainError, Model, SmoothPoint, a_singularity

_EXACT_TOL = Fraction(1, 10**12)
_STABILITY_BUDGET = 0.05


@dataclass(frozen=True)
class InequalityVerdict:
    """Outcome of one property sweep.

    ``min_margin`` is the worst slack seen (LHS - RHS or ratio - 1,
    depending on the check); ``witnesses`` are the weights attaining it,
    kept exact so the margin can be recomputed bit for bit.  ``extra``
    carries check-specific numbers such as the empirical properness
    constant.
    """

    name: str
    samples: int
    min_margin: float
    witnesses: tuple[tuple[Scalar, ...], ...]
    passed: bool
    min_margin_exact: Optional[Fraction] = None
    extra: dict = field(default_factory=dict)


def worker_cap() -> int:
    """Upper bound on worker parallelism from HVOL_THREADS (default 1).

    Sweeps are evaluated sequentially (and vectorized where it matters),
    which trivially respects any cap; the variable is validated so that a
    malformed setting fails loudly instead of being ignored.
    """
    raw = os.environ.get("HVOL_THREADS")
    if raw is None:
        return 1
    try:
        cap = int(raw)
    except ValueError as exc:
        raise DomainError(f"HVOL_THREADS must be a positive integer, got {raw!r}") from exc
    if cap < 1:
        raise DomainError(f"HVOL_THREADS must be >= 1, got {cap}")
    return cap


def sample_weight(
    rng: np.random.Generator,
    dim: int,
    low: Fraction = Fraction(1, 1000),
    high: Fraction = Fraction(1000),
    edge_mass: float = 0.3,
) -> tuple[Fraction, ...]:
    """One exact rational weight with corner-stressed coordinates.

    Each coordinate independently sits at the box edge ``low`` or ``high``
    with probability ``edge_mass`` apiece, and is log-uniform over the box
    otherwise.  The atoms make every box corner a near-certain hit over
    thousands of samples, so empirical infima saturate at the true box
    minimum instead of creeping with the sample count; the continuum keeps
    the interior covered.
    """
    rolls = rng.uniform(0.0, 1.0, size=dim)
    exps = rng.uniform(math.log10(float(low)), math.log10(float(high)), size=dim)
    out = []
    for roll, e in zip(rolls, exps):
        if roll < edge_mass:
            out.append(Fraction(low))
        elif roll < 2 * edge_mass:
            out.append(Fraction(high))
        else:
            out.append(Fraction(round(10.0**e * 10**6), 10**6))
    return tuple(out)


def skewness_s(weight: Sequence[Scalar]) -> int:
    """Integer skewness bracket max(2, ceil(x_max / x_min)) after normalizing v(m)=1."""
    x = [Fraction(v) if not isinstance(v, Fraction) else v for v in weight]
    if any(not v > 0 for v in x):
        raise DomainError("weights must be positive")
    sup = max(x) / min(x)
    s = max(2, math.ceil(sup))
    if s > 2 * sup:
        raise AssertionError("the integer bracket exceeded twice the skewness")
    return s


# ---------------------------------------------------------------------------
# per-sample margins (public so that verdict witnesses can be re-evaluated)


def thm13_margin(model: SmoothPoint, weight) -> Fraction:
    """Slack of the skewness properness bound: LHS - 2^{-n}.

    The left side vol * (max x)^{n-1} * (min x) collapses exactly to the
    product of (x_max / x_i) over the middle coordinates, which is at
    least 1; both the collapse and the sharper product bound are asserted
    here, and the returned margin is against the theorem's own constant.
    """
    x = sorted(core.check_weight_exact(model, weight))
    n = model.dim
    vol = core.volume(model, x)
    lhs = vol * x[-1] ** (n - 1) * x[0]
    product = Fraction(1)
    for xi in x[1:-1]:
        product *= x[-1] / xi
    if lhs != product:
        raise AssertionError("closed form and product form disagree")
    if product < 1:
        raise AssertionError("the product of max-coordinate ratios dropped below 1")
    return lhs - Fraction(1, 2**n)


def skew2_margin(weight) -> Fraction:
    """Negated absolute defect of the dimension-2 identity (0 exactly)."""
    model = SmoothPoint(2)
    x = core.check_weight_exact(model, weight)
    vol = core.volume(model, x)
    return -abs(vol - 1 / (max(x) * min(x)))


def dfem_margin(model: SmoothPoint, weight) -> Fraction:
    """Normalized-volume slack over the smooth minimum: hvol / n^n - 1."""
    x = core.check_weight_exact(model, weight)
    hvol = core.normalized_volume(model, x).normalized_volume
    return hvol / Fraction(model.dim) ** model.dim - 1


def proper_ratio(model: Model, weight) -> Fraction:
    """The properness ratio hvol * v(m) / A at one weight."""
    report = core.normalized_volume(model, weight)
    return (
        report.normalized_volume * report.ideal_value / report.log_discrepancy
    )


# ---------------------------------------------------------------------------
# sweeps


def check_theorem13(model: SmoothPoint, samples: int = 10**4, seed: int = 0) -> InequalityVerdict:
    rng = np.random.default_rng(seed)
    worst: Optional[Fraction] = None
    witness = None
    for _ in range(samples):
        x = sample_weight(rng, model.dim)
        margin = thm13_margin(model, x)
        if worst is None or margin < worst:
            worst, witness = margin, x
    return _verdict(f"thm13-smooth-n{model.dim}", samples, worst, witness)


def check_skewness_identity_dim2(samples: int = 10**3, seed: int = 0) -> InequalityVerdict:
    rng = np.random.default_rng(seed)
    worst: Optional[Fraction] = None
    witness = None
    for _ in range(samples):
        x = sample_weight(rng, 2)
        margin = skew2_margin(x)
        if worst is None or margin < worst:
            worst, witness = margin, x
    return _verdict("skew2-identity", samples, worst, witness)


def check_dfem(model: SmoothPoint, samples: int = 10**4, seed: int = 0) -> InequalityVerdict:
    rng = np.random.default_rng(seed)
    worst: Optional[Fraction] = None
    witness = None
    for _ in range(samples):
        x = sample_weight(rng, model.dim)
        margin = dfem_margin(model, x)
        if worst is None or margin < worst:
            worst, witness = margin, x
    return _verdict(f"dfem-smooth-n{model.dim}", samples, worst, witness)


def check_properness_ratio(model: Model, samples: int = 10**4, seed: int = 0) -> InequalityVerdict:
    """Empirical properness constant and its stability under sample doubling.

    Draws 2 * samples weights; the infimum over the first half against the
    infimum over all of them measures stability (the full infimum can only
    be lower).  On smooth models the ratio is additionally asserted to be
    at least 1 per sample, and the coordinate chain min(x) <= x_i <= sum(x)
    is asserted exactly.
    """
    rng = np.random.default_rng(seed)
    dim = model.ambient_dim
    smooth = isinstance(model, SmoothPoint)
    ratios: list[Fraction] = []
    witness_of: dict[int, tuple] = {}
    for i in range(2 * samples):
        x = sample_weight(rng, dim)
        ratio = proper_ratio(model, x)
        ratios.append(ratio)
        witness_of[i] = x
        if smooth:
            # two-sided comparison with the order valuation, constant 1:
            # min(x) <= v_x(z_i) = x_i <= sum(x) = A for every coordinate
            total = sum(x)
            lo = min(x)
            for xi in x:
                if not lo <= xi <= total:
                    raise AssertionError("coordinate chain violated")
    k_half = min(ratios[:samples])
    k_full = min(ratios)
    drift = float((k_half - k_full) / k_half) if k_half > 0 else math.inf
    worst_index = ratios.index(k_full)
    witness = witness_of[worst_index]
    if smooth:
        margin_exact = min(k_full - 1, Fraction(_STABILITY_BUDGET) - Fraction(drift).limit_denominator(10**9))
        name = f"proper-smooth-n{model.dim}"
    else:
        margin_exact = min(k_full, Fraction(_STABILITY_BUDGET) - Fraction(drift).limit_denominator(10**9))
        name = f"proper-hypersurface-dim{model.dim}"
    verdict = _verdict(name, 2 * samples, margin_exact, witness)
    verdict.extra.update(
        {"k_hat": float(k_full), "k_hat_half_sample": float(k_half), "drift": drift}
    )
    return verdict


def run_suite(
    suite: str = "all",
    samples: int = 10**4,
    seed: int = 20260810,
    dims: Sequence[int] = (2, 3, 4, 5),
) -> list[InequalityVerdict]:
    """Run one named suite (or all of them) and return the verdicts."""
    worker_cap()  # validate the parallelism cap even though sweeps run sequentially
    known = {"all", "thm13", "skew2", "dfem", "proper"}
    if suite not in known:
        raise DomainError(f"unknown suite {suite!r}; choose one of {sorted(known)}")
    verdicts: list[InequalityVerdict] = []
    if suite in ("all", "thm13"):
        for n in dims:
            verdicts.append(check_theorem13(SmoothPoint(n), samples, seed + n))
    if suite in ("all", "skew2"):
        verdicts.append(check_skewness_identity_dim2(samples, seed))
    if suite in ("all", "dfem"):
        for n in dims:
            verdicts.append(check_dfem(SmoothPoint(n), samples, seed + 10 * n))
    if suite in ("all", "proper"):
        for n in dims:
            verdicts.append(check_properness_ratio(SmoothPoint(n), samples, seed + 100 * n))
        for n in dims:
            verdicts.append(
                check_properness_ratio(a_singularity(n, 2), samples, seed + 1000 * n)
            )
    return verdicts


def _verdict(name, samples, margin_exact, witness) -> InequalityVerdict:
    passed = margin_exact >= -_EXACT_TOL
    return InequalityVerdict(
        name=name,
        samples=samples,
        min_margin=float(margin_exact),
        witnesses=(witness,) if witness is not None else (),
        passed=bool(passed),
        min_margin_exact=margin_exact if isinstance(margin_exact, Fraction) else None,
    )
