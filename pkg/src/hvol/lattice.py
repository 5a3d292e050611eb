"""Lattice-point colength oracle for volumes of monomial valuations.

The volume of a valuation is the limit of n! * dim(R/a_r) / r^n, where
a_r collects the elements of value at least r.  For monomial valuations
the colength is a lattice count:

* smooth n-space: #{ e in Z^n_{>=0} : <x, e> < r }
* hypersurface { f = 0 }: inclusion-exclusion of two smooth counts,
  #{ <x,e> < r } - #{ <x,e> < r - v_x(f) } in the ambient space.  This is
  an asymptotic surrogate: its leading term matches dim(R/a_r), which is
  all the volume limit sees.
* toric cone: #{ y in (dual cone) cap Z^n : <y, x> < r }

Counts are exact.  Weights and radii are cleared to a common integer
scale (counts are invariant under simultaneous rescaling of weight and
radius) and the smooth count runs as a coin-counting cumulative table,
which is deterministic and fast enough for four ambient dimensions at the
default radii.  The estimates here never consult the closed forms in
``core``; they are the independent check on them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .exact import Scalar, as_scalar, common_denominator
from .models import (
    CapacityError,
    DomainError,
    Hypersurface,
    Model,
    SmoothPoint,
    ToricCone,
    UnsupportedModelError,
    check_weight,
)
from .core import weighted_order

_COUNT_CAP = 1 << 62
_SCALE_CAP = 20_000_000
_BOX_CAP = 20_000_000

#: multipliers of max(x) for the default radii schedule: eight geometric
#: steps from 16 to 512, rounded to integers.
DEFAULT_RADIUS_MULTIPLIERS = tuple(round(16 * 2 ** (5 * j / 7)) for j in range(8))


@dataclass(frozen=True)
class ColengthSeries:
    """Colengths and volume estimates along an increasing radius schedule."""

    radii: tuple[Scalar, ...]
    colengths: tuple[int, ...]
    vol_estimates: tuple[Scalar, ...]

    @property
    def estimate(self) -> Scalar:
        """The oracle's volume estimate: the last (largest-radius) entry."""
        return self.vol_estimates[-1]


def default_radii(model: Model, weight: Sequence[Scalar]) -> tuple[Scalar, ...]:
    x = check_weight(model, weight)
    top = max(abs(v) for v in x) if isinstance(model, ToricCone) else max(x)
    return tuple(m * top for m in DEFAULT_RADIUS_MULTIPLIERS)


def colength_smooth(n: int, weight: Sequence[Scalar], radius) -> int:
    """Exact #{ e in Z^n_{>=0} : <x, e> < r }."""
    x = check_weight(SmoothPoint(n), weight)
    r = as_scalar(radius)
    if not r > 0:
        return 0
    scaled, bounds = _scaled_weight_and_bounds(x, [r])
    return _smooth_counts(scaled, bounds)[0]


def colength_hypersurface(model: Hypersurface, weight: Sequence[Scalar], radius) -> int:
    """Inclusion-exclusion ambient count whose leading term is dim(R/a_r)."""
    x = check_weight(model, weight)
    r = as_scalar(radius)
    if not r > 0:
        return 0
    v = weighted_order(x, model.support)
    scaled, bounds = _scaled_weight_and_bounds(x, [r, r - v])
    outer, inner = _smooth_counts(scaled, bounds)
    return outer - inner


def colength_toric(model: ToricCone, weight: Sequence[Scalar], radius) -> int:
    """Exact #{ y in dual-cone lattice : <y, x> < r }."""
    x = check_weight(model, weight)  # interior check keeps the count finite
    r = as_scalar(radius)
    if not r > 0:
        return 0
    return _toric_count(model, x, r)


def colength(model: Model, weight: Sequence[Scalar], radius) -> int:
    if isinstance(model, SmoothPoint):
        return colength_smooth(model.dim, weight, radius)
    if isinstance(model, Hypersurface):
        return colength_hypersurface(model, weight, radius)
    if isinstance(model, ToricCone):
        return colength_toric(model, weight, radius)
    raise UnsupportedModelError(f"unknown model kind {model!r}")


def estimate_volume(
    model: Model, weight: Sequence[Scalar], radii: Optional[Sequence] = None
) -> ColengthSeries:
    """Volume estimates n! * colength / r^n along a radius schedule.

    The exponent n is the intrinsic dimension of the germ, so for a
    hypersurface the ambient count is divided by r^(ambient-1).
    """
    x = check_weight(model, weight)
    schedule = tuple(as_scalar(r) for r in (radii if radii is not None else default_radii(model, x)))
    if not schedule:
        raise DomainError("radius schedule must be non-empty")
    if any(not r > 0 for r in schedule):
        raise DomainError("radii must be positive")
    if any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise DomainError("radius schedule must be strictly increasing")
    n = model.dim
    counts = _schedule_counts(model, x, schedule)
    estimates = tuple(
        math.factorial(n) * c / (r**n) for c, r in zip(counts, schedule)
    )
    return ColengthSeries(radii=schedule, colengths=tuple(counts), vol_estimates=estimates)


def _schedule_counts(model, x, schedule):
    if isinstance(model, SmoothPoint):
        scaled, bounds = _scaled_weight_and_bounds(x, schedule)
        return _smooth_counts(scaled, bounds)
    if isinstance(model, Hypersurface):
        v = weighted_order(x, model.support)
        cuts = list(schedule) + [r - v for r in schedule]
        scaled, bounds = _scaled_weight_and_bounds(x, cuts)
        counts = _smooth_counts(scaled, bounds)
        m = len(schedule)
        return [counts[i] - counts[m + i] for i in range(m)]
    if isinstance(model, ToricCone):
        return [_toric_count(model, x, r) for r in schedule]
    raise UnsupportedModelError(f"unknown model kind {model!r}")


def _exact_fractions(values):
    return [v if isinstance(v, Fraction) else Fraction(v) for v in values]


def _scaled_weight_and_bounds(x, radii):
    """Clear denominators: integer weights a_i and strict integer bounds.

    Returns (a, bounds) where the count for radius r is
    #{ e : sum a_i e_i <= bound } with bound = ceil(lcm * r) - 1.
    Non-positive radii get bound -1 (empty count).  Floats are converted
    exactly, so callers should prefer rational inputs; an oversized common
    scale raises CapacityError rather than degrade precision.
    """
    xs = _exact_fractions(x)
    rs = _exact_fractions(radii)
    lcm = common_denominator(xs + [r for r in rs if r > 0])
    if lcm * max(max(xs), max((r for r in rs if r > 0), default=Fraction(1))) > _SCALE_CAP:
        raise CapacityError(
            "weight/radius denominators need an integer scale beyond capacity; "
            "use rationals with moderate denominators"
        )
    a = [int(v * lcm) for v in xs]
    bounds = []
    for r in rs:
        if r <= 0:
            bounds.append(-1)
            continue
        # strict inequality <x,e> < r  <=>  sum a_i e_i <= ceil(lcm*r) - 1
        bounds.append(math.ceil(r * lcm) - 1)
    return a, bounds


def _smooth_counts(a: Sequence[int], bounds: Sequence[int]) -> list[int]:
    """#{ e >= 0 : sum a_i e_i <= B } for every B in bounds, exactly.

    One cumulative coin table at the largest bound serves all of them.
    Intermediate table entries are bounded by the final count, so a single
    a-priori capacity estimate guards int64 arithmetic.
    """
    top = max(bounds)
    if top < 0:
        return [0] * len(bounds)
    if top > _SCALE_CAP:
        raise CapacityError(f"scaled radius {top} exceeds the counting capacity")
    n = len(a)
    smallest = min(a)
    # upper bound on the final count: a full simplex with the cheapest coin
    reach = top // smallest + n
    estimate = math.comb(reach, n)
    if estimate > _COUNT_CAP:
        raise CapacityError(
            f"count estimate {estimate} exceeds platform integer capacity"
        )
    table = np.zeros(top + 1, dtype=np.int64)
    table[0] = 1
    for coin in a:
        if coin <= top:
            for s in range(coin):
                table[s::coin] = np.cumsum(table[s::coin])
        # a coin larger than the budget contributes multiplicity 0 only
    prefix = np.cumsum(table)
    return [int(prefix[b]) if b >= 0 else 0 for b in bounds]


def _toric_count(model: ToricCone, x, r) -> int:
    rays = model.dual_rays()
    ray_values = [sum(w * xi for w, xi in zip(ray, x)) for ray in rays]
    rank = model.rank
    caps = [r / rv for rv in ray_values]
    lo, hi = [0] * rank, [0] * rank
    for ray, cap in zip(rays, caps):
        for k in range(rank):
            reach = ray[k] * cap
            if reach < 0:
                lo[k] += math.floor(reach)
            else:
                hi[k] += math.ceil(reach)
    box = 1
    for l, h in zip(lo, hi):
        box *= h - l + 1
    if box > _BOX_CAP:
        raise CapacityError(f"toric bounding box of size {box} exceeds capacity")
    axes = np.ix_(*(np.arange(l, h + 1, dtype=np.int64) for l, h in zip(lo, hi)))
    inside = None
    for gen in model.generators:
        pairing = sum(int(g) * axis for g, axis in zip(gen, axes))
        cond = pairing >= 0
        inside = cond if inside is None else (inside & cond)
    # strict budget <y, x> < r on the common integer scale
    xs = _exact_fractions(x)
    lcm = common_denominator(xs + [Fraction(r)])
    a = [int(v * lcm) for v in xs]
    scaled = Fraction(r) * lcm
    bound = int(scaled) - 1 if scaled == int(scaled) else int(math.floor(scaled))
    budget = sum(int(ai) * axis for ai, axis in zip(a, axes))
    inside = inside & (budget <= bound)
    return int(np.count_nonzero(inside))
