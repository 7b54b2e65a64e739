"""Well-formed bracket expressions.

A state is the pair (open brackets left, closing brackets left). The
clean formulation never steps into o > c territory; the unclean variant
drops that guard and relies on such states evaluating to zero, which is
exactly the wasted work cleanliness audits are meant to expose.
"""

from __future__ import annotations

from ..errors import InvalidStateError
from ..model import (
    EMPTY_EXPANSION,
    Expansion,
    ProblemDefinition,
    StateKey,
    sum_term,
    terminal_term,
)


def _encode(o: int, c: int) -> bytes:
    return f"{o},{c}".encode("ascii")


def _decode(key: bytes) -> tuple[int, int]:
    try:
        o_raw, c_raw = key.split(b",")
        return int(o_raw), int(c_raw)
    except ValueError as exc:
        raise InvalidStateError(f"bad bracket key {key!r}") from exc


class BracketProblem(ProblemDefinition):
    num_variables = 0

    def __init__(self, n: int, clean: bool = True):
        if n < 0:
            raise InvalidStateError("n must be >= 0")
        self.n = n
        self.clean = clean
        self.name = "brackets" if clean else "brackets-unclean"

    def root(self) -> StateKey:
        return _encode(self.n, self.n)

    def hierarchy(self, key: StateKey):
        o, c = _decode(key)
        return (o + c,)

    # each step removes one bracket, so the level already fixes o + c and
    # only o needs storing per frontier entry
    def split_key(self, key: StateKey) -> bytes:
        o, _ = _decode(key)
        return str(o).encode("ascii")

    def join_key(self, level, stored: bytes) -> StateKey:
        o = int(stored)
        return _encode(o, level[0] - o)

    def describe(self, key: StateKey) -> str:
        o, c = _decode(key)
        return f"({o},{c})"

    def expand(self, key: StateKey) -> Expansion:
        o, c = _decode(key)
        if o < 0 or c < 0:
            raise InvalidStateError(f"negative bracket counts in {key!r}")
        if o == 0 and c == 0:
            return Expansion((terminal_term(1),))
        if o > c:
            if self.clean:
                raise InvalidStateError(f"unclean bracket state ({o},{c})")
            return EMPTY_EXPANSION  # f = 0, reached only by the unclean variant
        if self.clean and o == c and o > 0:
            return Expansion((sum_term(_encode(o - 1, c)),))
        terms = []
        if o > 0:
            terms.append(sum_term(_encode(o - 1, c)))
        if c > 0 and (not self.clean or c - 1 >= o):
            terms.append(sum_term(_encode(o, c - 1)))
        return Expansion(tuple(terms))


def brackets_oracle(n: int) -> int:
    """Exhaustive count: walk every balanced bracket string individually.

    Deliberately the naive recursion with no memoization; size limited
    because the walk is exponential.
    """
    if not 0 <= n <= 14:
        raise InvalidStateError("brackets oracle supports 0 <= n <= 14")

    def walk(o_left: int, c_left: int) -> int:
        if o_left == 0 and c_left == 0:
            return 1
        total = 0
        if o_left > 0:
            total += walk(o_left - 1, c_left)
        if c_left > o_left:
            total += walk(o_left, c_left - 1)
        return total

    return walk(n, n)
