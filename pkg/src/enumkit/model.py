"""Problem-definition contract and structural audits.

A problem is a recursively defined counting equation: every state has a
canonical byte key, an expansion into weighted child terms plus an
optional terminal constant, and a hierarchy value that strictly
decreases along every edge (so the call graph is loop-free). Engines
never look inside keys; everything problem-specific happens behind this
contract.
"""

from __future__ import annotations

import bisect
import enum
import os
from collections import deque
from dataclasses import dataclass, field

from .errors import AuditTruncatedError, InvalidStateError

StateKey = bytes
Hierarchy = tuple  # tuple of non-negative ints, compared lexicographically

DEFAULT_STATE_LIMIT = 10_000_000
STATE_LIMIT_ENV = "ENUMKIT_STATE_LIMIT"


def default_state_limit() -> int:
    raw = os.environ.get(STATE_LIMIT_ENV)
    if raw:
        try:
            return int(raw)
        except ValueError:
            pass
    return DEFAULT_STATE_LIMIT


class TermKind(enum.Enum):
    SUM = "sum"
    PRODUCT = "product"
    TERMINAL = "terminal"


@dataclass(frozen=True)
class Term:
    """One right-hand-side contribution to f(state).

    Sum terms carry exactly one child, product terms at least two,
    terminals none. The weight is a positive scalar plus a vector of
    exponent increments, one per tracked variable.
    """

    kind: TermKind
    children: tuple = ()
    scalar: int = 1
    shift: tuple = ()

    def __post_init__(self):
        if self.scalar < 1:
            raise InvalidStateError(f"term scalar must be >= 1, got {self.scalar}")
        n = len(self.children)
        if self.kind is TermKind.SUM and n != 1:
            raise InvalidStateError(f"sum term needs exactly one child, got {n}")
        if self.kind is TermKind.PRODUCT and n < 2:
            raise InvalidStateError(f"product term needs >= 2 children, got {n}")
        if self.kind is TermKind.TERMINAL and n != 0:
            raise InvalidStateError(f"terminal term takes no children, got {n}")
        # the first shift component is the series cutoff axis and may not
        # decrease; later components may be signed (moment tracking)
        if self.shift and self.shift[0] < 0:
            raise InvalidStateError(f"negative cutoff-axis shift {self.shift}")


def sum_term(child: StateKey, scalar: int = 1, shift: tuple = ()) -> Term:
    return Term(TermKind.SUM, (child,), scalar, shift)


def product_term(children: tuple, scalar: int = 1, shift: tuple = ()) -> Term:
    return Term(TermKind.PRODUCT, tuple(children), scalar, shift)


def terminal_term(scalar: int = 1, shift: tuple = ()) -> Term:
    return Term(TermKind.TERMINAL, (), scalar, shift)


@dataclass(frozen=True)
class Expansion:
    terms: tuple

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)


EMPTY_EXPANSION = Expansion(())


class ProblemDefinition:
    """Contract every problem plugin implements.

    expand and hierarchy must be pure functions of the key so instances
    are safe for concurrent read-only use. Keys are canonical: equal
    bytes if and only if the states are interchangeable downstream.
    """

    name: str = "problem"
    # number of tracked generating-function variables (0 for plain counts)
    num_variables: int = 0

    def root(self) -> StateKey:
        raise NotImplementedError

    def expand(self, key: StateKey) -> Expansion:
        raise NotImplementedError

    def hierarchy(self, key: StateKey) -> Hierarchy:
        raise NotImplementedError

    def describe(self, key: StateKey) -> str:
        raise NotImplementedError

    # Frontier storage split: the part of the key the hierarchy level
    # already implies is not stored per state. Problems with an ideal
    # hierarchy override these to shrink frontier keys.

    def split_key(self, key: StateKey) -> bytes:
        return key

    def join_key(self, level: Hierarchy, stored: bytes) -> StateKey:
        return stored

    # Optional hooks

    def completion_lower_bound(self, key: StateKey) -> int | None:
        """Minimum further variable-0 weight any completion adds, or None
        when the problem offers no trimming bound."""
        return None

    def group_key(self, key: StateKey) -> int:
        raise InvalidStateError(f"problem {self.name} defines no state grouping")


@dataclass
class HierarchyAudit:
    """Result of a reachability sweep checking the no-loops contract."""

    violations: list = field(default_factory=list)  # (parent, child) pairs
    ideal: bool = True
    truncated: bool = False
    states_seen: int = 0


def _child_keys(expansion: Expansion):
    for term in expansion:
        for child in term.children:
            yield child


def audit_hierarchy(problem: ProblemDefinition, root: StateKey | None = None,
                    limit: int | None = None) -> HierarchyAudit:
    """Breadth-first sweep up to `limit` distinct states.

    Reports every edge whose hierarchy fails to strictly decrease, plus
    whether the hierarchy is ideal: every edge lands on the next level
    that actually occurs below its parent (no level skipping).
    """
    if limit is None:
        limit = default_state_limit()
    if limit <= 0:
        raise InvalidStateError("audit limit must be positive")
    if root is None:
        root = problem.root()

    result = HierarchyAudit()
    seen = {root: problem.hierarchy(root)}
    queue = deque([root])
    edges = []
    while queue:
        key = queue.popleft()
        h = seen[key]
        for child in _child_keys(problem.expand(key)):
            hc = seen.get(child)
            if hc is None:
                hc = problem.hierarchy(child)
                if len(seen) >= limit:
                    result.truncated = True
                    queue.clear()
                    break
                seen[child] = hc
                queue.append(child)
            edges.append((key, child, h, hc))
            if not hc < h:
                result.violations.append((key, child))
    result.states_seen = len(seen)

    levels = sorted(set(seen.values()))
    for _, _, h, hc in edges:
        if not hc < h:
            result.ideal = False
            continue
        i = bisect.bisect_left(levels, h)
        # levels[i] == h when the parent level is in the set; the edge is
        # ideal only if the child sits on the closest occupied level below
        if i == 0 or levels[i - 1] != hc:
            result.ideal = False
    return result


def reachable_state_count(problem: ProblemDefinition, root: StateKey | None = None,
                          limit: int | None = None) -> int:
    """Number of distinct states reachable from the root, inclusive."""
    if limit is None:
        limit = default_state_limit()
    if root is None:
        root = problem.root()
    seen = {root}
    queue = deque([root])
    while queue:
        key = queue.popleft()
        for child in _child_keys(problem.expand(key)):
            if child not in seen:
                if len(seen) >= limit:
                    raise AuditTruncatedError(
                        f"reachable set exceeds limit {limit} for {problem.name}"
                    )
                seen.add(child)
                queue.append(child)
    return len(seen)


def cleanliness_audit(problem: ProblemDefinition, domain, root: StateKey | None = None,
                      limit: int | None = None,
                      max_exponent: int | None = None) -> list:
    """Evaluate f over every reachable state and return those with f = 0.

    An empty list means the definition is clean from this root: no
    reachable state does useless work. For series problems a cutoff can
    be supplied; each state's value is then truncated at what remains of
    the budget after the cheapest path reaching it, which is the notion
    of uselessness trimming targets.
    """
    if limit is None:
        limit = default_state_limit()
    if root is None:
        root = problem.root()

    # forward sweep: reachable set plus cheapest variable-0 cost to reach
    expansions: dict[StateKey, Expansion] = {}
    min_reach: dict[StateKey, int] = {root: 0}
    order = [root]
    queue = deque([root])
    while queue:
        key = queue.popleft()
        exp = problem.expand(key)
        expansions[key] = exp
        base = min_reach[key]
        for term in exp:
            step = base + (term.shift[0] if term.shift else 0)
            for child in term.children:
                known = min_reach.get(child)
                if known is None:
                    if len(expansions) + len(queue) >= limit:
                        raise AuditTruncatedError(
                            f"cleanliness sweep exceeds limit {limit} for {problem.name}"
                        )
                    min_reach[child] = step
                    order.append(child)
                    queue.append(child)
                elif step < known:
                    # hierarchy ordering makes a later cheaper path possible;
                    # re-relax the subtree
                    min_reach[child] = step
                    queue.append(child)

    # backward evaluation, deepest levels first
    order.sort(key=problem.hierarchy)
    values: dict[StateKey, object] = {}
    for key in order:
        acc = domain.zero()
        budget = None
        if max_exponent is not None:
            budget = max_exponent - min_reach[key]
        for term in expansions[key]:
            if term.kind is TermKind.TERMINAL:
                part = domain.shift(domain.from_int(term.scalar), term.shift)
            elif term.kind is TermKind.SUM:
                part = domain.shift(values[term.children[0]], term.shift)
            else:
                part = values[term.children[0]]
                for child in term.children[1:]:
                    part = domain.mul(part, values[child])
                part = domain.shift(part, term.shift)
            if term.scalar != 1:
                part = domain.scalar_mul(part, term.scalar)
            if budget is not None:
                part = domain.truncate(part, budget)
            acc = domain.add(acc, part)
        values[key] = acc

    return [key for key in values if domain.is_zero(values[key])]
