"""Recursive evaluation with a memo table.

The evaluator runs on an explicit work stack so deep chains surface as
a structured resource error instead of blowing the interpreter stack.
Product terms are supported (the one capability frontier iteration
cannot offer), and values may be cached probabilistically through a
deterministic accumulator, trading recomputation time for memory.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ConfigError, ResourceLimitError
from .model import ProblemDefinition, StateKey, TermKind

DEFAULT_MAX_STACK = 1_000_000


class CacheConfig:
    """Probabilistic store policy: add p per decision, store on overflow.

    The accumulator is exact (decimal fractions), so N decisions yield
    floor(N*p) or ceil(N*p) stores with no float drift, and a run is
    reproducible for any p.
    """

    def __init__(self, store_probability: float = 1.0):
        p = Fraction(str(store_probability))
        if not 0 < p <= 1:
            raise ConfigError(f"store probability must be in (0, 1], got {store_probability}")
        self.store_probability = p
        self.accumulator = Fraction(0)

    def store_decision(self) -> bool:
        self.accumulator += self.store_probability
        if self.accumulator >= 1:
            self.accumulator -= 1
            return True
        return False


def store_decision(config: CacheConfig) -> bool:
    return config.store_decision()


@dataclass
class Cache:
    """Memo table plus traffic counters.

    A present key always holds the complete expansion result for that
    state; partial values are never stored.
    """

    values: dict = field(default_factory=dict)
    hits: int = 0
    misses: int = 0
    stores: int = 0


@dataclass
class DpRun:
    value: object
    cache: Cache
    expansions: int  # expand() calls, recomputations included


class _Frame:
    __slots__ = ("key", "terms", "ti", "ci", "acc", "factors")

    def __init__(self, key, terms, zero):
        self.key = key
        self.terms = terms
        self.ti = 0
        self.ci = 0
        self.acc = zero
        self.factors = []


def dp_evaluate(problem: ProblemDefinition, domain, root: StateKey | None = None,
                config: CacheConfig | None = None, cache: Cache | None = None,
                max_stack: int = DEFAULT_MAX_STACK,
                state_limit: int | None = None) -> DpRun:
    """Evaluate f(root) with memoization.

    The result is identical for every store probability; only the cache
    footprint and the amount of recomputation change. The root's value
    is always stored so reruns against the same cache are free.
    """
    if root is None:
        root = problem.root()
    if config is None:
        config = CacheConfig()
    if cache is None:
        cache = Cache()

    expansions = 0
    stack: list[_Frame] = []
    ret = None
    have_ret = False

    def open_frame(key) -> None:
        nonlocal expansions
        if len(stack) >= max_stack:
            raise ResourceLimitError(
                f"evaluation stack exceeded {max_stack} frames at {problem.describe(key)}"
            )
        expansions += 1
        stack.append(_Frame(key, problem.expand(key).terms, domain.zero()))

    cached_root = cache.values.get(root)
    if cached_root is not None:
        cache.hits += 1
        return DpRun(cached_root, cache, 0)
    cache.misses += 1
    open_frame(root)

    while stack:
        f = stack[-1]
        if have_ret:
            f.factors.append(ret)
            f.ci += 1
            have_ret = False

        descended = False
        while f.ti < len(f.terms):
            term = f.terms[f.ti]
            if term.kind is TermKind.TERMINAL:
                part = domain.shift(domain.from_int(term.scalar), term.shift)
                f.acc = domain.add(f.acc, part)
                f.ti += 1
                continue
            if f.ci < len(term.children):
                child = term.children[f.ci]
                hit = cache.values.get(child)
                if hit is not None:
                    cache.hits += 1
                    f.factors.append(hit)
                    f.ci += 1
                    continue
                cache.misses += 1
                open_frame(child)
                descended = True
                break
            part = f.factors[0]
            for extra in f.factors[1:]:
                part = domain.mul(part, extra)
            part = domain.shift(part, term.shift)
            if term.scalar != 1:
                part = domain.scalar_mul(part, term.scalar)
            f.acc = domain.add(f.acc, part)
            f.ti += 1
            f.ci = 0
            f.factors = []

        if descended:
            continue

        stack.pop()
        value = f.acc
        if f.key == root or config.store_decision():
            if f.key not in cache.values:
                if state_limit is not None and len(cache.values) >= state_limit:
                    raise ResourceLimitError(f"cache exceeded state limit {state_limit}")
                cache.values[f.key] = value
            cache.stores += 1
        ret = value
        have_ret = True

    return DpRun(ret, cache, expansions)


def cache_stats(cache: Cache, domain) -> dict:
    """Counters plus a histogram of the minimal bit width of each stored
    value (bit length of zero counts as 1)."""
    histogram: dict[int, int] = {}
    for value in cache.values.values():
        bits = domain.bit_length(value)
        histogram[bits] = histogram.get(bits, 0) + 1
    return {
        "entries": len(cache.values),
        "hits": cache.hits,
        "misses": cache.misses,
        "stores": cache.stores,
        "bit_length_histogram": dict(sorted(histogram.items())),
    }


@dataclass
class DuplicateGroup:
    value: object
    keys: list
    descriptions: list


def duplicate_value_report(cache: Cache, problem: ProblemDefinition,
                           min_value: int = 1, min_group_size: int = 2) -> list[DuplicateGroup]:
    """States sharing an identical cached value, largest values first.

    Meant for inspection after a full (p = 1) run: repeated large values
    usually point at an equivalence the state encoding misses.
    """
    by_value: dict = {}
    for key, value in cache.values.items():
        by_value.setdefault(value, []).append(key)
    groups = []
    for value, keys in by_value.items():
        if len(keys) < min_group_size:
            continue
        if min_value is not None and value < min_value:
            continue
        keys.sort()
        groups.append(DuplicateGroup(value, keys, [problem.describe(k) for k in keys]))
    groups.sort(key=lambda g: g.keys[0])
    groups.sort(key=lambda g: g.value, reverse=True)
    return groups
