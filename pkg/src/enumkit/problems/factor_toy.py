"""Factorizing toy problem.

The root splits into two independent bracket segments whose counts
multiply, f(Pair(a,b)) = f(Seg(a,a)) * f(Seg(b,b)). Memoized recursion
handles the product like any other term; frontier iteration must reject
it, and this plugin exists mainly to exercise both behaviours.
"""

from __future__ import annotations

from ..errors import InvalidStateError
from ..model import (
    Expansion,
    ProblemDefinition,
    StateKey,
    product_term,
    sum_term,
    terminal_term,
)


class FactorToyProblem(ProblemDefinition):
    num_variables = 0
    name = "factor-toy"

    def __init__(self, a: int, b: int):
        if a < 0 or b < 0:
            raise InvalidStateError("segment sizes must be >= 0")
        self.a = a
        self.b = b

    def root(self) -> StateKey:
        return f"P:{self.a},{self.b}".encode("ascii")

    @staticmethod
    def _decode(key: StateKey):
        kind, payload = key.split(b":")
        left, right = payload.split(b",")
        return kind, int(left), int(right)

    def hierarchy(self, key: StateKey):
        kind, left, right = self._decode(key)
        if kind == b"P":
            return (2 * left + 2 * right + 1,)
        return (left + right,)

    def describe(self, key: StateKey) -> str:
        kind, left, right = self._decode(key)
        if kind == b"P":
            return f"Pair({left},{right})"
        return f"Seg({left},{right})"

    def expand(self, key: StateKey) -> Expansion:
        kind, o, c = self._decode(key)
        if kind == b"P":
            return Expansion(
                (product_term((f"S:{o},{o}".encode(), f"S:{c},{c}".encode())),)
            )
        if kind != b"S":
            raise InvalidStateError(f"bad factor-toy key {key!r}")
        # clean bracket recursion on each segment
        if o == 0 and c == 0:
            return Expansion((terminal_term(1),))
        if o > c:
            raise InvalidStateError(f"unclean segment ({o},{c})")
        if o == c:
            return Expansion((sum_term(f"S:{o - 1},{c}".encode()),))
        terms = []
        if o > 0:
            terms.append(sum_term(f"S:{o - 1},{c}".encode()))
        if c - 1 >= o:
            terms.append(sum_term(f"S:{o},{c - 1}".encode()))
        return Expansion(tuple(terms))


def factor_toy_count(a: int, b: int, engine: str = "dp") -> int:
    """Catalan(a) * Catalan(b), evaluated through the product term."""
    from ..dp import dp_evaluate
    from ..rings import BigIntRing
    from ..tm import tm_evaluate

    problem = FactorToyProblem(a, b)
    if engine == "dp":
        return dp_evaluate(problem, BigIntRing()).value
    if engine == "tm":
        return tm_evaluate(problem, BigIntRing()).value
    raise InvalidStateError(f"unknown engine {engine!r}")
