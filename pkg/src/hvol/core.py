"""Closed-form invariants of monomial valuations on model singularities.

For a weight x the valuation v_x assigns <x, e> to the monomial with
exponent e and extends by the minimum rule.  The three model classes admit
closed forms:

* smooth n-space:  A = sum(x),  vol = 1 / prod(x)
* hypersurface { f = 0 }:  A = sum(x) - v_x(f),  vol = v_x(f) / prod(x),
  where v_x(f) is the minimum weight of a monomial of f.  The A formula is
  the continuous extension of the weighted-blow-up discrepancy; it is the
  exact log discrepancy for generic weights and is adopted here for every
  positive weight.
* simplicial toric cone:  A = <gamma, x>,  vol = |det W| / prod <w_i, x>
  with w_i the primitive dual rays, equal to n! times the Euclidean volume
  of the dual-cone slab { y : <y, x> <= 1 }.

The normalized volume is A^n * vol with n the intrinsic dimension of the
germ (never the ambient dimension).  All functions return exact Fractions
on rational inputs.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .exact import Scalar, det_fraction, is_exact
from .models import (
    DomainError,
    ExponentVector,
    Hypersurface,
    InvalidModelError,
    Model,
    NonKltWeightError,
    SmoothPoint,
    ToricCone,
    UnsupportedModelError,
    check_weight,
)


@dataclass(frozen=True)
class ValuationReport:
    """All invariants of one (model, weight) pair.

    ``skewness`` is sup over the maximal ideal of v_x / ord; it has a
    closed form (max coordinate) only on smooth points and is ``None``
    ("unavailable") on the other model classes, where only the lower bound
    max_i x_i is known.
    """

    log_discrepancy: Scalar
    volume: Scalar
    normalized_volume: Scalar
    ideal_value: Scalar
    skewness: Optional[Scalar]


def check_weight_exact(model: Model, weight: Sequence[Scalar]):
    """Validate a weight and insist on the exact-rational path."""
    x = check_weight(model, weight)
    if not is_exact(x):
        raise DomainError("this operation requires exact rational weights")
    return x


def weighted_order(x: Sequence[Scalar], support: Sequence[ExponentVector]) -> Scalar:
    """min over the support of <x, e>: the weight of f under v_x."""
    if not support:
        raise InvalidModelError("empty support has no weighted order")
    values = _pairings(x, support)
    return min(values)


def active_monomials(
    x: Sequence[Scalar], support: Sequence[ExponentVector], rel_tol: float = 1e-9
) -> tuple[ExponentVector, ...]:
    """The exponent vectors attaining the weighted order (exact on rationals)."""
    if not support:
        raise InvalidModelError("empty support has no weighted order")
    values = _pairings(x, support)
    low = min(values)
    if is_exact(x):
        hits = [e for e, v in zip(support, values) if v == low]
    else:
        cut = low * (1 + rel_tol) + rel_tol * 1e-300
        hits = [e for e, v in zip(support, values) if float(v) <= float(cut)]
    return tuple(sorted(tuple(e) for e in hits))


def _pairings(x, support):
    values = []
    for e in support:
        if len(e) != len(x):
            raise DomainError(f"exponent vector {e} does not match weight length {len(x)}")
        if any(c < 0 for c in e):
            raise InvalidModelError(f"negative exponent in {e}")
        values.append(sum(xi * ei for xi, ei in zip(x, e) if ei))
    for xi in x:
        if not xi > 0:
            raise DomainError("weighted order needs strictly positive weights")
    return values


def log_discrepancy(model: Model, weight: Sequence[Scalar]) -> Scalar:
    """Log discrepancy A(v_x) of the monomial valuation on the model."""
    x = check_weight(model, weight)
    if isinstance(model, SmoothPoint):
        return sum(x)
    if isinstance(model, Hypersurface):
        a = sum(x) - weighted_order(x, model.support)
        if not a > 0:
            raise NonKltWeightError(
                f"log discrepancy {a} <= 0 at weight {x}: the weight left the klt-valid region"
            )
        return a
    if isinstance(model, ToricCone):
        return sum(g * xi for g, xi in zip(model.gorenstein_vector, x))
    raise UnsupportedModelError(f"unknown model kind {model!r}")


def volume(model: Model, weight: Sequence[Scalar]) -> Scalar:
    """Volume of v_x: the normalized asymptotic colength of its valuation ideals."""
    x = check_weight(model, weight)
    if isinstance(model, SmoothPoint):
        return 1 / _product(x)
    if isinstance(model, Hypersurface):
        return weighted_order(x, model.support) / _product(x)
    if isinstance(model, ToricCone):
        rays = model.dual_rays()
        det = abs(det_fraction([[Fraction(r) for r in ray] for ray in rays]))
        denom = _product(tuple(sum(r * xi for r, xi in zip(ray, x)) for ray in rays))
        return det / denom
    raise UnsupportedModelError(f"unknown model kind {model!r}")


def ideal_value(model: Model, weight: Sequence[Scalar]) -> Scalar:
    """v_x(m), the weight of the maximal ideal."""
    x = check_weight(model, weight)
    if isinstance(model, (SmoothPoint, Hypersurface)):
        return min(x)
    if isinstance(model, ToricCone):
        return _toric_ideal_value(model, x)
    raise UnsupportedModelError(f"unknown model kind {model!r}")


def skewness(model: Model, weight: Sequence[Scalar]) -> Optional[Scalar]:
    """sup_m v_x/ord; closed form (max coordinate) on smooth points only."""
    x = check_weight(model, weight)
    if isinstance(model, SmoothPoint):
        return max(x)
    return None


def normalized_volume(model: Model, weight: Sequence[Scalar]) -> ValuationReport:
    """Assemble A, vol, A^n * vol and companions, n = intrinsic dimension."""
    x = check_weight(model, weight)
    a = log_discrepancy(model, x)
    vol = volume(model, x)
    n = model.dim
    return ValuationReport(
        log_discrepancy=a,
        volume=vol,
        normalized_volume=a**n * vol,
        ideal_value=ideal_value(model, x),
        skewness=skewness(model, x),
    )


def lct_of_valuation_ideals(model: Model, weight: Sequence[Scalar]) -> Scalar:
    """Log canonical threshold of the graded family of valuation ideals of v_x.

    Only the smooth model has the closed form sum(x); the lct of a_r(v_x)
    is sum(x)/r for every radius, so the graded limit is sum(x).
    """
    if not isinstance(model, SmoothPoint):
        raise UnsupportedModelError("lct of valuation ideals is only available on smooth points")
    x = check_weight(model, weight)
    return sum(x)


def _product(values) -> Scalar:
    out = values[0]
    for v in values[1:]:
        out = out * v
    return out


def _toric_ideal_value(model: ToricCone, x) -> Scalar:
    """Smallest positive pairing <y, x> over nonzero lattice points of the dual cone.

    The minimum is attained inside the bounded slab { <y, x> <= min_i <w_i, x> },
    which contains at least the primitive dual rays; a direct bounded
    enumeration is exact and independent of the colength oracle.
    """
    rays = model.dual_rays()
    ray_values = [sum(r * xi for r, xi in zip(ray, x)) for ray in rays]
    bound = min(ray_values)
    # box containing { y = sum t_i w_i : t_i >= 0, sum t_i <w_i, x> <= bound }
    rank = model.rank
    caps = [bound / rv for rv in ray_values]
    lo, hi = [0] * rank, [0] * rank
    for ray, cap in zip(rays, caps):
        for k in range(rank):
            reach = ray[k] * cap
            if reach < 0:
                lo[k] += math.floor(reach)
            else:
                hi[k] += math.ceil(reach)
    best = None
    gens = model.generators
    for y in itertools.product(*(range(l, h + 1) for l, h in zip(lo, hi))):
        if all(v == 0 for v in y):
            continue
        if any(sum(yk * gk for yk, gk in zip(y, gen)) < 0 for gen in gens):
            continue
        value = sum(yk * xk for yk, xk in zip(y, x))
        if value > 0 and (best is None or value < best):
            best = value
    if best is None:
        raise DomainError("could not locate a nonzero dual-cone lattice point")
    return best
