"""Moment series over one retained variable.

Tracking a second object property as full two-variable series can cost
too much memory; a vector of moment series M_0..M_m in the retained
variable carries enough to recover means and higher moments. M_0 is
the plain enumeration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidStateError
from .rings import ValueRing
from .series import (
    BIGINT,
    SparseGF,
    SparseGF2,
    ZERO_GF,
    gf_add,
    gf_coefficient,
    gf_scale,
    gf_shift,
    gf_truncate,
)


@dataclass(frozen=True)
class MomentVector:
    """Series M_0..M_max_order; all share the retained variable."""

    moments: tuple

    @property
    def max_order(self) -> int:
        return len(self.moments) - 1

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.moments)


def moment_unit(max_order: int, ring: ValueRing = BIGINT) -> MomentVector:
    """The vector of an empty object: M_0 = 1, tracked quantity 0."""
    one = SparseGF(0, (ring.from_int(1),))
    return MomentVector((one,) + (ZERO_GF,) * max_order)


def moment_zero(max_order: int) -> MomentVector:
    return MomentVector((ZERO_GF,) * (max_order + 1))


def moment_add(a: MomentVector, b: MomentVector, ring: ValueRing = BIGINT) -> MomentVector:
    if a.max_order != b.max_order:
        raise InvalidStateError("moment vectors of different orders")
    return MomentVector(tuple(gf_add(x, y, ring) for x, y in zip(a.moments, b.moments)))


def moment_scale(a: MomentVector, k: int, ring: ValueRing = BIGINT) -> MomentVector:
    return MomentVector(tuple(gf_scale(m, k, ring) for m in a.moments))


def moment_update(M: MomentVector, c: int, s: int, ring: ValueRing = BIGINT) -> MomentVector:
    """Absorb one growth step adding c to the retained variable and s to
    the tracked quantity.

    New M_m = x^c * sum_{k=0..m} C(m,k) s^k M_{m-k}, all computed from
    the pre-update moments. s may be signed; c may not (the retained
    variable is the series cutoff axis).
    """
    if c < 0:
        raise InvalidStateError(f"negative retained-variable increment {c}")
    out = []
    for m in range(M.max_order + 1):
        acc = M.moments[m]
        sk = 1
        for k in range(1, m + 1):
            sk *= s
            if sk == 0:
                break
            acc = gf_add(acc, gf_scale(M.moments[m - k], math.comb(m, k) * sk, ring), ring)
        out.append(gf_shift(acc, c))
    return MomentVector(tuple(out))


def moment_truncate(M: MomentVector, max_exponent: int, ring: ValueRing = BIGINT) -> MomentVector:
    return MomentVector(tuple(gf_truncate(m, max_exponent, ring) for m in M.moments))


def moment_mean(M: MomentVector, i: int) -> Fraction:
    """Exact mean of the tracked quantity at retained-variable index i."""
    if M.max_order < 1:
        raise InvalidStateError("need M_1 to compute a mean")
    m0 = gf_coefficient(M.moments[0], i)
    if m0 == 0:
        raise InvalidStateError(f"M_0 coefficient at {i} is zero")
    return Fraction(gf_coefficient(M.moments[1], i), m0)


def moments_from_gf2(a: SparseGF2, max_order: int, ring: ValueRing = BIGINT) -> MomentVector:
    """Marginal moments of a full two-variable series: the independent
    route used to cross-check moment propagation."""
    out = [ZERO_GF] * (max_order + 1)
    for i, row in enumerate(a.rows):
        x = a.offset_x + i
        for j, coeff in enumerate(row):
            if ring.is_zero(coeff):
                continue
            y = a.offset_y + j
            for m in range(max_order + 1):
                term = SparseGF(x, (ring.scalar_mul(coeff, y**m),))
                out[m] = gf_add(out[m], term, ring)
    return MomentVector(tuple(out))
