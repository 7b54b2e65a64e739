"""Directed animals on the square lattice, grown row by row.

The lattice is taken rotated so growth runs downward: an occupied site
at position p makes positions p and p+1 of the next row reachable. A
state records the reachable-but-undecided sites of the row in progress,
the sites already made reachable in the next row, and the growth budget
left; recording reachable sites (rather than occupied ones) lets many
growth histories share one state.

Two formulations of the same count:

* A processes one reachable site per step (occupied or not), so a step
  may leave the budget untouched; its hierarchy is the pair
  (budget, reachable-site count).
* B jumps straight to the next occupied site, consuming one budget unit
  per step; its hierarchy is the budget alone and is ideal.
"""

from __future__ import annotations

from ..errors import InvalidStateError
from ..model import (
    Expansion,
    ProblemDefinition,
    StateKey,
    sum_term,
    terminal_term,
)


def _mask(positions) -> int:
    bits = 0
    for p in positions:
        bits |= 1 << p
    return bits


def _positions(mask: int) -> list[int]:
    out = []
    p = 0
    while mask:
        if mask & 1:
            out.append(p)
        mask >>= 1
        p += 1
    return out


def _normalize(cur: frozenset, nxt: frozenset, budget: int):
    """Advance to the next row when the current one is exhausted, then
    translate so the smallest position is zero."""
    if not cur and nxt:
        cur, nxt = nxt, frozenset()
    if not cur:
        return frozenset(), frozenset(), budget
    base = min(cur | nxt) if nxt else min(cur)
    if base:
        cur = frozenset(p - base for p in cur)
        nxt = frozenset(p - base for p in nxt)
    return cur, nxt, budget


def _encode(cur: frozenset, nxt: frozenset, budget: int) -> bytes:
    return f"{budget}:{_mask(cur):x}:{_mask(nxt):x}".encode("ascii")


def _decode(key: bytes) -> tuple[frozenset, frozenset, int]:
    try:
        b_raw, cur_raw, nxt_raw = key.split(b":")
        return (
            frozenset(_positions(int(cur_raw, 16))),
            frozenset(_positions(int(nxt_raw, 16))),
            int(b_raw),
        )
    except ValueError as exc:
        raise InvalidStateError(f"bad directed-animal key {key!r}") from exc


def state_key(cur, nxt, budget: int) -> StateKey:
    """Canonical key for explicit site sets; used by tests that build the
    same boundary through different growth histories."""
    if budget < 0:
        raise InvalidStateError("negative budget")
    return _encode(*_normalize(frozenset(cur), frozenset(nxt), budget))


class DirectedAnimalProblem(ProblemDefinition):
    num_variables = 0

    def __init__(self, n: int, formulation: str = "b"):
        if n < 1:
            raise InvalidStateError("animal size must be >= 1")
        if formulation not in ("a", "b"):
            raise InvalidStateError(f"unknown formulation {formulation!r}")
        self.n = n
        self.formulation = formulation
        self.name = f"diran-{formulation}"

    def root(self) -> StateKey:
        return _encode(frozenset((0,)), frozenset(), self.n)

    def hierarchy(self, key: StateKey):
        cur, nxt, budget = _decode(key)
        if self.formulation == "b":
            return (budget,)
        return (budget, len(cur) + len(nxt))

    def split_key(self, key: StateKey) -> bytes:
        # the budget is implicit in the level for both hierarchies
        _, cur_raw, nxt_raw = key.split(b":")
        return cur_raw + b":" + nxt_raw

    def join_key(self, level, stored: bytes) -> StateKey:
        return str(level[0]).encode("ascii") + b":" + stored

    def describe(self, key: StateKey) -> str:
        cur, nxt, budget = _decode(key)
        return f"f({self._render_mask(cur, nxt)},{self._render_window(nxt)},{budget})"

    @staticmethod
    def _render_window(cells: frozenset) -> str:
        if not cells:
            return "0"
        lo, hi = min(cells), max(cells)
        return "".join("1" if p in cells else "0" for p in range(lo, hi + 1))

    @staticmethod
    def _render_mask(cur: frozenset, nxt: frozenset) -> str:
        # the window stretches to the rightmost decided site, whose trace
        # is the next-row sites it made reachable
        if not cur:
            return "0"
        hi = max(cur)
        if nxt:
            hi = max(hi, max(nxt) - 1)
        return "".join("1" if p in cur else "0" for p in range(min(cur), hi + 1))

    def expand(self, key: StateKey) -> Expansion:
        cur, nxt, budget = _decode(key)
        if budget == 0:
            return Expansion((terminal_term(1),))
        if not cur:
            raise InvalidStateError(f"no growth site in non-terminal state {key!r}")
        if self.formulation == "a":
            return self._expand_one_site(cur, nxt, budget)
        return self._expand_next_occupied(cur, nxt, budget)

    def _expand_one_site(self, cur, nxt, budget) -> Expansion:
        g = max(cur)
        rest = cur - {g}
        terms = [
            sum_term(_encode(*_normalize(rest, nxt | {g, g + 1}, budget - 1)))
        ]
        if rest or nxt:
            # skipping the last reachable site would strand the animal
            terms.append(sum_term(_encode(*_normalize(rest, nxt, budget))))
        return Expansion(tuple(terms))

    def _expand_next_occupied(self, cur, nxt, budget) -> Expansion:
        terms = []
        for g in sorted(cur, reverse=True):
            rest = frozenset(p for p in cur if p < g)
            terms.append(
                sum_term(_encode(*_normalize(rest, nxt | {g, g + 1}, budget - 1)))
            )
        if nxt:
            # every current-row site passed over; growth continues from the
            # sites the occupied ones opened up
            for h in sorted(nxt, reverse=True):
                rest = frozenset(p for p in nxt if p < h)
                terms.append(
                    sum_term(_encode(*_normalize(rest, frozenset((h, h + 1)), budget - 1)))
                )
        return Expansion(tuple(terms))


def diran_count(n: int, formulation: str = "b", engine: str = "dp") -> int:
    """Count n-site directed animals with either engine."""
    from ..dp import dp_evaluate
    from ..rings import BigIntRing
    from ..tm import tm_evaluate

    problem = DirectedAnimalProblem(n, formulation)
    ring = BigIntRing()
    if engine == "dp":
        return dp_evaluate(problem, ring).value
    if engine == "tm":
        return tm_evaluate(problem, ring).value
    raise InvalidStateError(f"unknown engine {engine!r}")


def diran_oracle(n: int) -> int:
    """Full-history enumeration: branch on every reachable site, one site
    per step, never merging states. Exponential; kept for verification."""
    if not 1 <= n <= 14:
        raise InvalidStateError("directed-animal oracle supports 1 <= n <= 14")
    count = 0

    def walk(greys: frozenset, budget: int):
        nonlocal count
        if budget == 0:
            count += 1
            return
        if not greys:
            return
        # uppermost row, rightmost site
        row = min(r for r, _ in greys)
        col = max(c for r, c in greys if r == row)
        g = (row, col)
        rest = greys - {g}
        opened = {(row + 1, col), (row + 1, col + 1)}
        walk(rest | opened, budget - 1)
        if rest:
            walk(rest, budget)

    walk(frozenset(((0, 0),)), n)
    return count
