"""Exact-rational scalar handling and small exact linear algebra.

All closed-form operations in this package run on ``fractions.Fraction``
when given rational inputs and fall back to floats otherwise.  The helpers
here define that coercion, the "p/q" text form used by the CLI and the
model files, and the few pieces of exact linear algebra (determinants,
inverses, nullspaces) needed for toric dual cones and tie-stratum bases.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Sequence, Union

Scalar = Union[Fraction, float]

_RATIONAL_RE = re.compile(r"^(-?\d+)(?:/(\d+))?$")


def as_scalar(value) -> Scalar:
    """Coerce a number to Fraction (exact path) or float (numeric path)."""
    if isinstance(value, bool):
        raise TypeError("booleans are not valid numeric inputs")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return value
    # numpy floats/ints and other numeric scalars
    if hasattr(value, "item"):
        return as_scalar(value.item())
    raise TypeError(f"unsupported numeric type: {type(value).__name__}")


def is_exact(values: Sequence[Scalar]) -> bool:
    return all(isinstance(v, Fraction) for v in values)


def parse_rational(text) -> Fraction:
    """Parse an integer or a "p/q" string into an exact Fraction."""
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"expected integer or 'p/q' string, got {text!r}")
    m = _RATIONAL_RE.match(text.strip())
    if not m or (m.group(2) is not None and int(m.group(2)) == 0):
        raise ValueError(f"not a rational literal: {text!r}")
    return Fraction(int(m.group(1)), int(m.group(2)) if m.group(2) else 1)


def format_scalar(value: Scalar) -> Union[str, float]:
    """Exact values render as "p/q" strings in lowest terms, floats as floats."""
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}" if value.denominator != 1 else str(value.numerator)
    return float(f"{value:.12g}")


def common_denominator(values: Sequence[Fraction]) -> int:
    den = 1
    for v in values:
        den = den * v.denominator // math.gcd(den, v.denominator)
    return den


def det_fraction(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    n = len(rows)
    m = [[Fraction(x) for x in row] for row in rows]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            factor = m[r][col] * inv
            if factor:
                for c in range(col, n):
                    m[r][c] -= factor * m[col][c]
    return det


def inverse_fraction(rows: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    """Exact matrix inverse via Gauss-Jordan; raises on singular input."""
    n = len(rows)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(rows)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("matrix is singular")
        m[col], m[pivot] = m[pivot], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                factor = m[r][col]
                m[r] = [a - factor * b for a, b in zip(m[r], m[col])]
    return [row[n:] for row in m]


def nullspace_fraction(rows: Sequence[Sequence[Fraction]], width: int) -> list[tuple[Fraction, ...]]:
    """Exact basis of {h : rows @ h = 0} in dimension ``width``."""
    m = [[Fraction(x) for x in row] for row in rows if any(row)]
    pivots: list[int] = []
    r = 0
    for col in range(width):
        pivot = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                factor = m[i][col]
                m[i] = [a - factor * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    basis = []
    free = [c for c in range(width) if c not in pivots]
    for fc in free:
        vec = [Fraction(0)] * width
        vec[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -m[i][fc]
        basis.append(tuple(vec))
    return basis


def primitive_integer_vector(vec: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector on its ray."""
    fracs = [Fraction(v) for v in vec]
    if all(v == 0 for v in fracs):
        raise ValueError("zero vector has no primitive representative")
    den = common_denominator(fracs)
    ints = [int(v * den) for v in fracs]
    g = 0
    for x in ints:
        g = math.gcd(g, abs(x))
    return tuple(x // g for x in ints)
