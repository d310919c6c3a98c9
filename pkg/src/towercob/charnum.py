"""Characteristic numbers of tower varieties.

Power sums of Chern roots are accumulated factor by factor: a line class
contributes ``l^k``, a twisted block ``E (x) L`` contributes
``sum_j binom(k, j) p_j(E) l^(k-j)`` with ``p_j(E)`` from Newton's identities
on ``c(E)``.  This touches only sparse classes; :func:`newton_power_sum`
applies Newton's identities to the full total Chern class instead and is kept
as an independent cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Sequence

from .ring import ExactScalar, RingClass, exp_nilpotent, integrate, invert_unit
from .varieties import (LineClass, NegLineClass, TangentFactor, TwistedBlock, Variety,
                        _linear)


def twisted_chern(bundle_chern: RingClass, rank: int, twist: RingClass) -> RingClass:
    """Total Chern class of ``E (x) L``: ``c_k = sum_j binom(m-j, k-j) c_j(E) c1(L)^(k-j)``."""
    ring = bundle_chern.ring
    comps = [bundle_chern.component(j) for j in range(rank + 1)]
    powers = [ring.one()]
    for _ in range(rank):
        powers.append(powers[-1] * twist)
    out = ring.zero()
    for k in range(rank + 1):
        for j in range(k + 1):
            c = comb(rank - j, k - j)
            if c and not comps[j].is_zero():
                out = out + comps[j] * powers[k - j] * c
    return out


def factor_chern(f: TangentFactor) -> RingClass:
    if isinstance(f, LineClass):
        return 1 + f.c1
    if isinstance(f, NegLineClass):
        return 1 - f.c1
    return twisted_chern(f.bundle_chern, f.rank, f.twist_c1)


def total_chern(V: Variety) -> RingClass:
    out = V.ring.one()
    for f in V.tangent:
        out = out * factor_chern(f)
    return out


def chern_class(V: Variety, k: int) -> RingClass:
    return total_chern(V).component(k)


def newton_power_sum(total: RingClass, k: int, rank: int | None = None) -> RingClass:
    """``k``-th power sum of the roots of a bundle with total Chern class ``total``.

    ``p_k = c_1 p_{k-1} - c_2 p_{k-2} + ... + (-1)^(k-1) k c_k``; ``p_0`` is ``rank``.
    """
    ring = total.ring
    if k == 0:
        if rank is None:
            raise ValueError("p_0 needs the rank")
        return ring.scalar(rank)
    c = [total.component(i) for i in range(k + 1)]
    p = [None]
    for m in range(1, k + 1):
        acc = c[m] * ((-1) ** (m - 1) * m)
        for i in range(1, m):
            if not c[i].is_zero():
                acc = acc + c[i] * p[m - i] * (-1) ** (i - 1)
        p.append(acc)
    return p[k]


def _factor_power_sum(f: TangentFactor, k: int) -> RingClass:
    if isinstance(f, LineClass):
        return f.c1 ** k
    if isinstance(f, NegLineClass):
        return (-f.c1) ** k
    ring = f.twist_c1.ring
    out = ring.zero()
    twist_pow = ring.one()
    for j in range(k, -1, -1):
        # j runs down so that twist_pow = l^(k-j)
        pj = newton_power_sum(f.bundle_chern, j, f.rank)
        if not pj.is_zero():
            out = out + pj * twist_pow * comb(k, j)
        twist_pow = twist_pow * f.twist_c1
    return out


def power_sum(V: Variety, k: int) -> RingClass:
    """``k``-th power sum of the stable tangent Chern roots; ``p_0`` is the stable root count."""
    if k < 0:
        raise ValueError("power index must be non-negative")
    if k == 0:
        return V.ring.scalar(V.stable_rank)
    out = V.ring.zero()
    if k > V.dim:
        return out
    for f in V.tangent:
        out = out + _factor_power_sum(f, k)
    return out


def milnor_number(V: Variety) -> ExactScalar:
    if V.dim == 0:
        return 0
    return integrate(power_sum(V, V.dim))


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(sorted(self.parts, reverse=True))
        if any(p <= 0 for p in parts):
            raise ValueError("partition parts must be positive")
        object.__setattr__(self, "parts", parts)

    @property
    def size(self) -> int:
        return sum(self.parts)


def chern_number(V: Variety, omega: Partition | Sequence[int]) -> ExactScalar:
    if not isinstance(omega, Partition):
        omega = Partition(tuple(omega))
    if omega.size != V.dim:
        raise ValueError(f"partition of {omega.size} does not match dimension {V.dim}")
    total = total_chern(V)
    out = V.ring.one()
    for part in omega.parts:
        out = out * total.component(part)
    return integrate(out)


# ---------------------------------------------------------------------------
# Todd genus
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli numbers with ``B_1 = -1/2`` from ``sum_{k<=n} binom(n+1, k) B_k = 0``."""
    if n == 0:
        return Fraction(1)
    return -sum(comb(n + 1, k) * bernoulli(k) for k in range(n)) / (n + 1)


class ToddSeries:
    """Coefficients of ``x / (1 - e^-x)`` and of its logarithm."""

    def __init__(self, order: int):
        self.order = order
        # d/dx log(x/(1-e^-x)) = 1/x - 1/(e^x - 1) = -sum_{n>=1} B_n x^(n-1)/n!
        self.coefficients = [Fraction(0)] + [-bernoulli(k) / (k * factorial(k))
                                             for k in range(1, order + 1)]
        # x/(1-e^-x) = sum (-1)^n B_n x^n / n!
        self.todd_coefficients = [(-1) ** k * bernoulli(k) / factorial(k) for k in range(order + 1)]

    def __getitem__(self, k: int) -> Fraction:
        return self.coefficients[k]


def todd_genus(V: Variety) -> ExactScalar:
    """``<exp(sum_k L_k p_k), [V]>`` in the rational twin of ``V``'s ring."""
    n = V.dim
    if n == 0:
        return 1
    series = ToddSeries(n)
    rring = V.ring.as_rational()
    log_td = rring.zero()
    for k in range(1, n + 1):
        if series[k]:
            log_td = log_td + power_sum(V, k).to_rational() * series[k]
    return integrate(exp_nilpotent(log_td))


# ---------------------------------------------------------------------------
# blow-ups and bounded flag bundles
# ---------------------------------------------------------------------------

def blowup_milnor(X: Variety, Y: Variety) -> ExactScalar:
    """``s_n`` of the blow-up: ``s_n(X) - s_n(Y)`` with ``Y`` the projectivized normal correction."""
    if X.dim != Y.dim:
        raise ValueError(f"dimension mismatch: {X.dim} vs {Y.dim}")
    if X is Y:
        return 0
    return milnor_number(X) - milnor_number(Y)


def closed_form_bf_milnor(base: Variety, line_c1s: Sequence) -> ExactScalar:
    """``s_{n+k}`` of ``bf_bundle(base, line_c1s)`` evaluated in the base ring."""
    xs = [_linear(base.ring, x, "line class") for x in line_c1s]
    k = len(xs) - 1
    total = base.dim + k
    if total % 2 == 0:
        return 0
    ring = base.ring
    denom = ring.one()
    for x in xs[:k]:
        denom = denom * (1 + x)
    return 2 * integrate((1 + xs[k]) ** (total - 1) * invert_unit(denom))


__all__ = [
    "Partition", "ToddSeries", "bernoulli", "blowup_milnor", "chern_class",
    "chern_number", "closed_form_bf_milnor", "factor_chern", "milnor_number",
    "newton_power_sum", "power_sum", "todd_genus", "total_chern", "twisted_chern",
]
