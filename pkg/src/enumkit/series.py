"""Sparse generating functions.

A one-variable series is stored as a start exponent plus a dense block
of coefficients; most per-state series are short and contiguous, so
this wastes almost nothing while keeping indexing trivial. Two-variable
series use a dense rectangle with one offset per axis.

Coefficients live in a value ring (exact integers by default), so the
same containers serve the checked, modular, and big-integer backends.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidStateError
from .rings import BigIntRing, ValueRing

BIGINT = BigIntRing()


@dataclass(frozen=True)
class SparseGF:
    """One-variable series: coeffs[i] multiplies x**(offset + i).

    Normalized form has non-zero first and last coefficients; the zero
    series is canonically (offset 0, empty coeffs).
    """

    offset: int
    coeffs: tuple

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def max_exponent(self) -> int:
        if not self.coeffs:
            raise InvalidStateError("zero series has no top exponent")
        return self.offset + len(self.coeffs) - 1


ZERO_GF = SparseGF(0, ())


def _normalize(offset: int, coeffs: list, ring: ValueRing) -> SparseGF:
    lo = 0
    hi = len(coeffs)
    while lo < hi and ring.is_zero(coeffs[lo]):
        lo += 1
    while hi > lo and ring.is_zero(coeffs[hi - 1]):
        hi -= 1
    if lo == hi:
        return ZERO_GF
    return SparseGF(offset + lo, tuple(coeffs[lo:hi]))


def gf_from_term(coeff, exponent: int, ring: ValueRing = BIGINT) -> SparseGF:
    if ring.is_zero(coeff):
        return ZERO_GF
    return SparseGF(exponent, (coeff,))


def gf_coefficient(a: SparseGF, exponent: int, ring: ValueRing = BIGINT):
    i = exponent - a.offset
    if 0 <= i < len(a.coeffs):
        return a.coeffs[i]
    return ring.zero()


def gf_add(a: SparseGF, b: SparseGF, ring: ValueRing = BIGINT) -> SparseGF:
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    offset = min(a.offset, b.offset)
    top = max(a.offset + len(a.coeffs), b.offset + len(b.coeffs))
    out = [ring.zero()] * (top - offset)
    for i, c in enumerate(a.coeffs):
        out[a.offset - offset + i] = c
    for i, c in enumerate(b.coeffs):
        j = b.offset - offset + i
        out[j] = ring.add(out[j], c)
    return _normalize(offset, out, ring)


def gf_scale(a: SparseGF, k: int, ring: ValueRing = BIGINT) -> SparseGF:
    if a.is_zero() or k == 1:
        return a
    return _normalize(a.offset, [ring.scalar_mul(c, k) for c in a.coeffs], ring)


def gf_shift(a: SparseGF, shift: int) -> SparseGF:
    """Multiply by x**shift; pure offset move, coefficients untouched."""
    if shift < 0:
        raise InvalidStateError(f"negative shift {shift}")
    if a.is_zero() or shift == 0:
        return a
    return SparseGF(a.offset + shift, a.coeffs)


def gf_truncate(a: SparseGF, max_exponent: int, ring: ValueRing = BIGINT) -> SparseGF:
    """Drop coefficients above max_exponent."""
    if a.is_zero() or a.max_exponent <= max_exponent:
        return a
    if a.offset > max_exponent:
        return ZERO_GF
    return _normalize(a.offset, list(a.coeffs[: max_exponent - a.offset + 1]), ring)


def gf_mul_truncated(a: SparseGF, b: SparseGF, max_exponent: int, ring: ValueRing = BIGINT) -> SparseGF:
    """Product truncated at max_exponent. The only multiplication the
    series layer needs (bridge chaining); no FFT, no general convolution
    surface."""
    if a.is_zero() or b.is_zero():
        return ZERO_GF
    offset = a.offset + b.offset
    if offset > max_exponent:
        return ZERO_GF
    out = [ring.zero()] * (max_exponent - offset + 1)
    for i, ca in enumerate(a.coeffs):
        if ring.is_zero(ca):
            continue
        ea = a.offset + i
        for j, cb in enumerate(b.coeffs):
            e = ea + b.offset + j
            if e > max_exponent:
                break
            out[e - offset] = ring.add(out[e - offset], ring.mul(ca, cb))
    return _normalize(offset, out, ring)


def gf_render(a: SparseGF, ring: ValueRing = BIGINT) -> str:
    if a.is_zero():
        return "0"
    parts = []
    for i, c in enumerate(a.coeffs):
        if ring.is_zero(c):
            continue
        parts.append(f"{ring.render(c)} * x^{a.offset + i}")
    return " + ".join(parts)


def gf_to_json(a: SparseGF, ring: ValueRing = BIGINT) -> dict:
    """JSON-style record with exact decimal coefficient strings."""
    return {"offset": a.offset, "coeffs": [ring.render(c) for c in a.coeffs]}


# bridge reconstruction: full objects chained from irreducible pieces
# with one linking step, b = b_i + x b_i^2 + x^2 b_i^3 + ...


def bridge_from_irreducible(b_i: SparseGF, max_exponent: int, ring: ValueRing = BIGINT) -> SparseGF:
    """Evaluate b = b_i / (1 - x * b_i) truncated at max_exponent."""
    if b_i.is_zero():
        return ZERO_GF
    if b_i.offset < 1:
        raise InvalidStateError("irreducible series must have no constant term")
    b_i = gf_truncate(b_i, max_exponent, ring)
    # fixed point of b = b_i + x * b_i * b; each pass settles one more order
    b = b_i
    while True:
        nxt = gf_add(b_i, gf_shift(gf_mul_truncated(b_i, b, max_exponent, ring), 1), ring)
        nxt = gf_truncate(nxt, max_exponent, ring)
        if nxt == b:
            return b
        b = nxt


def irreducible_from_bridge(b: SparseGF, max_exponent: int, ring: ValueRing = BIGINT) -> SparseGF:
    """Invert the chaining: b_i = b / (1 + x * b), truncated."""
    if b.is_zero():
        return ZERO_GF
    if b.offset < 1:
        raise InvalidStateError("bridge series must have no constant term")
    b = gf_truncate(b, max_exponent, ring)
    b_i = b
    while True:
        correction = gf_scale(gf_shift(gf_mul_truncated(b, b_i, max_exponent, ring), 1), -1, ring)
        nxt = gf_truncate(gf_add(b, correction, ring), max_exponent, ring)
        if nxt == b_i:
            return b_i
        b_i = nxt


@dataclass(frozen=True)
class SparseGF2:
    """Two-variable series: rows[i][j] multiplies x**(ox+i) * y**(oy+j)."""

    offset_x: int
    offset_y: int
    rows: tuple

    def is_zero(self) -> bool:
        return not self.rows


ZERO_GF2 = SparseGF2(0, 0, ())


def _normalize2(ox: int, oy: int, rows: list[list], ring: ValueRing) -> SparseGF2:
    def row_zero(r):
        return all(ring.is_zero(c) for c in r)

    lo = 0
    hi = len(rows)
    while lo < hi and row_zero(rows[lo]):
        lo += 1
    while hi > lo and row_zero(rows[hi - 1]):
        hi -= 1
    rows = rows[lo:hi]
    if not rows:
        return ZERO_GF2
    ox += lo
    width = len(rows[0])
    clo = 0
    chi = width
    while clo < chi and all(ring.is_zero(r[clo]) for r in rows):
        clo += 1
    while chi > clo and all(ring.is_zero(r[chi - 1]) for r in rows):
        chi -= 1
    return SparseGF2(ox, oy + clo, tuple(tuple(r[clo:chi]) for r in rows))


def gf2_from_term(coeff, ex: int, ey: int, ring: ValueRing = BIGINT) -> SparseGF2:
    if ring.is_zero(coeff):
        return ZERO_GF2
    return SparseGF2(ex, ey, ((coeff,),))


def gf2_coefficient(a: SparseGF2, ex: int, ey: int, ring: ValueRing = BIGINT):
    i = ex - a.offset_x
    if not a.rows or not 0 <= i < len(a.rows):
        return ring.zero()
    j = ey - a.offset_y
    if not 0 <= j < len(a.rows[i]):
        return ring.zero()
    return a.rows[i][j]


def gf2_add(a: SparseGF2, b: SparseGF2, ring: ValueRing = BIGINT) -> SparseGF2:
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    ox = min(a.offset_x, b.offset_x)
    oy = min(a.offset_y, b.offset_y)
    top_x = max(a.offset_x + len(a.rows), b.offset_x + len(b.rows))
    top_y = max(a.offset_y + len(a.rows[0]), b.offset_y + len(b.rows[0]))
    out = [[ring.zero()] * (top_y - oy) for _ in range(top_x - ox)]
    for src in (a, b):
        for i, row in enumerate(src.rows):
            oi = src.offset_x - ox + i
            for j, c in enumerate(row):
                oj = src.offset_y - oy + j
                out[oi][oj] = ring.add(out[oi][oj], c)
    return _normalize2(ox, oy, out, ring)


def gf2_scale(a: SparseGF2, k: int, ring: ValueRing = BIGINT) -> SparseGF2:
    if a.is_zero() or k == 1:
        return a
    rows = [[ring.scalar_mul(c, k) for c in row] for row in a.rows]
    return _normalize2(a.offset_x, a.offset_y, rows, ring)


def gf2_shift(a: SparseGF2, sx: int, sy: int) -> SparseGF2:
    if sx < 0 or sy < 0:
        raise InvalidStateError(f"negative shift ({sx}, {sy})")
    if a.is_zero() or (sx == 0 and sy == 0):
        return a
    return SparseGF2(a.offset_x + sx, a.offset_y + sy, a.rows)


def gf2_truncate_x(a: SparseGF2, max_exponent: int, ring: ValueRing = BIGINT) -> SparseGF2:
    """Cut the first (volume) axis; the second axis is never the series
    cutoff variable."""
    if a.is_zero():
        return a
    top = a.offset_x + len(a.rows) - 1
    if top <= max_exponent:
        return a
    if a.offset_x > max_exponent:
        return ZERO_GF2
    rows = [list(r) for r in a.rows[: max_exponent - a.offset_x + 1]]
    return _normalize2(a.offset_x, a.offset_y, rows, ring)


def gf2_render(a: SparseGF2, ring: ValueRing = BIGINT) -> str:
    if a.is_zero():
        return "0"
    parts = []
    for i, row in enumerate(a.rows):
        for j, c in enumerate(row):
            if ring.is_zero(c):
                continue
            parts.append(f"{ring.render(c)} * x^{a.offset_x + i} * y^{a.offset_y + j}")
    return " + ".join(parts)


def gf2_to_json(a: SparseGF2, ring: ValueRing = BIGINT) -> dict:
    return {
        "offset_x": a.offset_x,
        "offset_y": a.offset_y,
        "rows": [[ring.render(c) for c in row] for row in a.rows],
    }
