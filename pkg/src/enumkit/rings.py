"""Value rings and CRT reconstruction.

Three interchangeable rings back the engines: checked 64-bit integers
(the default; overflow is an error, never a silent wrap), residues
modulo a fixed integer, and exact big integers. All three expose the
same small interface so engines and generating-function containers stay
ring-agnostic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigError, RingOverflowError

INT64_MIN = -(1 << 63)
INT64_MAX = (1 << 63) - 1

# Largest primes below 2^31: residue products fit comfortably in 64-bit
# intermediates on any host.
DEFAULT_MODULI = (2147483647, 2147483629, 2147483587)


class ValueRing:
    """Common ring interface.

    Scalar rings carry no generating-function variables, so the series
    hooks (`shift`, `truncate`, `min_exponent`, `length`) degenerate:
    a shift by a non-zero exponent is a contract violation.
    """

    name: str = "ring"

    def zero(self):
        return 0

    def from_int(self, k: int):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def scalar_mul(self, a, k: int):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        return a == 0

    def render(self, a) -> str:
        return str(a)

    def encode(self, a) -> bytes:
        return self.render(a).encode("ascii")

    def bit_length(self, a) -> int:
        # bit length of 0 is defined as 1 so histograms partition cleanly
        return max(1, int(a).bit_length())

    # series hooks (degenerate for scalar rings)

    def shift(self, a, exponents: tuple[int, ...]):
        if any(exponents):
            raise ConfigError(f"ring {self.name} carries no variables; cannot shift by {exponents}")
        return a

    def truncate(self, a, max_exponent: int):
        return a

    def min_exponent(self, a) -> int:
        return 0

    def length(self, a) -> int:
        return 1


class BigIntRing(ValueRing):
    """Arbitrary-precision integers; exact, no rounding."""

    name = "bigint"

    def from_int(self, k: int):
        return k

    def add(self, a, b):
        return a + b

    def scalar_mul(self, a, k: int):
        return a * k

    def mul(self, a, b):
        return a * b


class Int64Ring(ValueRing):
    """Signed 64-bit integers with overflow checking."""

    name = "int64"

    def _check(self, v: int, op: str) -> int:
        if v < INT64_MIN or v > INT64_MAX:
            raise RingOverflowError(f"int64 {op} overflowed ({v})")
        return v

    def from_int(self, k: int):
        return self._check(k, "literal")

    def add(self, a, b):
        return self._check(a + b, "add")

    def scalar_mul(self, a, k: int):
        return self._check(a * k, "scalar_mul")

    def mul(self, a, b):
        return self._check(a * b, "mul")


class ModRing(ValueRing):
    """Residues modulo a fixed integer > 1."""

    def __init__(self, modulus: int):
        if modulus <= 1:
            raise ConfigError(f"modulus must exceed 1, got {modulus}")
        self.modulus = modulus
        self.name = f"mod:{modulus}"

    def from_int(self, k: int):
        return k % self.modulus

    def add(self, a, b):
        return (a + b) % self.modulus

    def scalar_mul(self, a, k: int):
        return (a * k) % self.modulus

    def mul(self, a, b):
        return (a * b) % self.modulus


@dataclass(frozen=True)
class ModulusSet:
    """Pairwise-coprime moduli; coprimality is checked at construction."""

    moduli: tuple[int, ...]

    def __post_init__(self):
        if not self.moduli:
            raise ConfigError("empty modulus set")
        for m in self.moduli:
            if m <= 1:
                raise ConfigError(f"modulus must exceed 1, got {m}")
        for i in range(len(self.moduli)):
            for j in range(i + 1, len(self.moduli)):
                g = math.gcd(self.moduli[i], self.moduli[j])
                if g != 1:
                    raise ConfigError(
                        f"moduli {self.moduli[i]} and {self.moduli[j]} share factor {g}"
                    )

    def rings(self) -> list[ModRing]:
        return [ModRing(m) for m in self.moduli]

    @property
    def product(self) -> int:
        p = 1
        for m in self.moduli:
            p *= m
        return p


def crt_reconstruct(residues: list[int], moduli: ModulusSet) -> int:
    """Unique x in [0, prod(m)) with x = r_i mod m_i for every i."""
    if len(residues) != len(moduli.moduli):
        raise ConfigError(
            f"{len(residues)} residues for {len(moduli.moduli)} moduli"
        )
    for r, m in zip(residues, moduli.moduli):
        if not 0 <= r < m:
            raise ConfigError(f"residue {r} outside [0, {m})")
    total = 0
    product = moduli.product
    for r, m in zip(residues, moduli.moduli):
        others = product // m
        inv = pow(others, -1, m)
        total = (total + r * inv * others) % product
    return total


def crt_check(residues: list[int], moduli: ModulusSet) -> tuple[int, bool]:
    """Reconstruct with a leave-one-out redundancy check.

    Returns (value, consistent). With k >= 3 moduli the value is also
    reconstructed from every (k-1)-subset; a corrupted residue makes the
    subset reconstructions disagree as long as the true value fits in
    the smallest subset product.
    """
    value = crt_reconstruct(residues, moduli)
    if len(moduli.moduli) < 3:
        return value, True
    for drop in range(len(moduli.moduli)):
        sub_m = ModulusSet(tuple(m for i, m in enumerate(moduli.moduli) if i != drop))
        sub_r = [r for i, r in enumerate(residues) if i != drop]
        if crt_reconstruct(sub_r, sub_m) != value:
            return value, False
    return value, True


def make_ring(spec: str) -> ValueRing:
    """Parse a ring spec: 'int64', 'bigint', or 'mod:<m>'."""
    if spec == "int64":
        return Int64Ring()
    if spec == "bigint":
        return BigIntRing()
    if spec.startswith("mod:"):
        try:
            m = int(spec[4:])
        except ValueError as exc:
            raise ConfigError(f"bad modulus in ring spec {spec!r}") from exc
        return ModRing(m)
    raise ConfigError(f"unknown ring spec {spec!r}")
