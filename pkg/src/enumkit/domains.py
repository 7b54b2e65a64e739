"""Engine-facing value domains.

Engines are written against one small interface: ring arithmetic plus
the series hooks (shift, truncate, minimum exponent, length). Scalar
rings implement it directly; these adapters lift one-variable series,
two-variable series, and moment vectors to the same surface so a single
engine serves counting runs, series runs, and moment runs.
"""

from __future__ import annotations

import json

from .errors import InvalidStateError
from .moments import (
    MomentVector,
    moment_add,
    moment_scale,
    moment_truncate,
    moment_unit,
    moment_update,
    moment_zero,
)
from .rings import ValueRing
from .series import (
    SparseGF,
    SparseGF2,
    ZERO_GF,
    ZERO_GF2,
    gf2_add,
    gf2_from_term,
    gf2_render,
    gf2_scale,
    gf2_shift,
    gf2_to_json,
    gf2_truncate_x,
    gf_add,
    gf_mul_truncated,
    gf_render,
    gf_scale,
    gf_shift,
    gf_to_json,
    gf_truncate,
)


class Gf1Domain:
    """One-variable series values over a scalar ring."""

    variables = 1

    def __init__(self, ring: ValueRing):
        self.ring = ring
        self.name = f"gf[{ring.name}]"

    def zero(self):
        return ZERO_GF

    def from_int(self, k: int):
        if k == 0:
            return ZERO_GF
        return SparseGF(0, (self.ring.from_int(k),))

    def add(self, a, b):
        return gf_add(a, b, self.ring)

    def scalar_mul(self, a, k: int):
        return gf_scale(a, k, self.ring)

    def mul(self, a, b):
        # product terms on series values are not part of any shipped
        # problem, but the operation is well defined
        if a.is_zero() or b.is_zero():
            return ZERO_GF
        return gf_mul_truncated(a, b, a.max_exponent + b.max_exponent, self.ring)

    def shift(self, a, exponents: tuple[int, ...]):
        return gf_shift(a, exponents[0]) if exponents else a

    def truncate(self, a, max_exponent: int):
        return gf_truncate(a, max_exponent, self.ring)

    def is_zero(self, a) -> bool:
        return a.is_zero()

    def min_exponent(self, a) -> int:
        if a.is_zero():
            raise InvalidStateError("zero series has no minimum exponent")
        return a.offset

    def length(self, a) -> int:
        return len(a.coeffs)

    def render(self, a) -> str:
        return gf_render(a, self.ring)

    def encode(self, a) -> bytes:
        return json.dumps(gf_to_json(a, self.ring), separators=(",", ":")).encode("ascii")

    def bit_length(self, a) -> int:
        if a.is_zero():
            return 1
        return max(self.ring.bit_length(c) for c in a.coeffs)


class Gf2Domain:
    """Two-variable series values; the first axis is the series cutoff."""

    variables = 2

    def __init__(self, ring: ValueRing):
        self.ring = ring
        self.name = f"gf2[{ring.name}]"

    def zero(self):
        return ZERO_GF2

    def from_int(self, k: int):
        if k == 0:
            return ZERO_GF2
        return gf2_from_term(self.ring.from_int(k), 0, 0, self.ring)

    def add(self, a, b):
        return gf2_add(a, b, self.ring)

    def scalar_mul(self, a, k: int):
        return gf2_scale(a, k, self.ring)

    def mul(self, a, b):
        raise InvalidStateError("two-variable series do not support product terms")

    def shift(self, a, exponents: tuple[int, ...]):
        return gf2_shift(a, exponents[0], exponents[1])

    def truncate(self, a, max_exponent: int):
        return gf2_truncate_x(a, max_exponent, self.ring)

    def is_zero(self, a) -> bool:
        return a.is_zero()

    def min_exponent(self, a) -> int:
        if a.is_zero():
            raise InvalidStateError("zero series has no minimum exponent")
        return a.offset_x

    def length(self, a) -> int:
        return sum(len(row) for row in a.rows)

    def render(self, a) -> str:
        return gf2_render(a, self.ring)

    def encode(self, a) -> bytes:
        return json.dumps(gf2_to_json(a, self.ring), separators=(",", ":")).encode("ascii")

    def bit_length(self, a) -> int:
        if a.is_zero():
            return 1
        return max(self.ring.bit_length(c) for row in a.rows for c in row)


class MomentDomain:
    """Moment-vector values; shifts feed the binomial update rule.

    Expects two shift components per step: the retained-variable
    increment and the tracked-quantity increment (which may be signed).
    """

    variables = 2

    def __init__(self, ring: ValueRing, max_order: int):
        if max_order < 0:
            raise InvalidStateError("max_order must be >= 0")
        self.ring = ring
        self.max_order = max_order
        self.name = f"moments[{ring.name},m={max_order}]"

    def zero(self):
        return moment_zero(self.max_order)

    def from_int(self, k: int):
        if k == 0:
            return moment_zero(self.max_order)
        return moment_scale(moment_unit(self.max_order, self.ring), k, self.ring)

    def add(self, a, b):
        return moment_add(a, b, self.ring)

    def scalar_mul(self, a, k: int):
        return moment_scale(a, k, self.ring)

    def mul(self, a, b):
        raise InvalidStateError("moment vectors do not support product terms")

    def shift(self, a, exponents: tuple[int, ...]):
        return moment_update(a, exponents[0], exponents[1], self.ring)

    def truncate(self, a, max_exponent: int):
        return moment_truncate(a, max_exponent, self.ring)

    def is_zero(self, a) -> bool:
        return a.is_zero()

    def min_exponent(self, a) -> int:
        offsets = [m.offset for m in a.moments if not m.is_zero()]
        if not offsets:
            raise InvalidStateError("zero moment vector has no minimum exponent")
        return min(offsets)

    def length(self, a) -> int:
        return sum(len(m.coeffs) for m in a.moments)

    def render(self, a) -> str:
        return "; ".join(
            f"M_{m}: {gf_render(g, self.ring)}" for m, g in enumerate(a.moments)
        )

    def encode(self, a) -> bytes:
        payload = [gf_to_json(m, self.ring) for m in a.moments]
        return json.dumps(payload, separators=(",", ":")).encode("ascii")

    def bit_length(self, a) -> int:
        bits = [self.ring.bit_length(c) for m in a.moments for c in m.coeffs]
        return max(bits) if bits else 1


__all__ = ["Gf1Domain", "Gf2Domain", "MomentDomain", "MomentVector"]
