"""Level-synchronous frontier evaluation.

States are processed strictly in decreasing hierarchy order, one level
at a time; identical states arriving at a level merge additively, so
each distinct state is expanded exactly once even when edges skip
levels (those children wait in pending buckets keyed by their exact
level). Terminal contributions accumulate into the output as they are
produced, and a processed level is released eagerly, which is where the
memory advantage over memoized recursion comes from.
"""

from __future__ import annotations

import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .errors import InvalidStateError, ProductTermError, ResourceLimitError
from .model import Hierarchy, ProblemDefinition, StateKey, TermKind


@dataclass
class RunStats:
    states_per_level: list = field(default_factory=list)  # (level, count)
    peak_frontier: int = 0
    # concurrent live states: frontier being drained plus all pending
    # buckets; roughly twice a single frontier when the hierarchy is ideal
    peak_live: int = 0
    expansions: int = 0
    terminal_trace: list = field(default_factory=list)  # (level, value)
    gf_length_histogram: dict = field(default_factory=dict)
    level_values: list | None = None

    def to_json(self, domain) -> dict:
        return {
            "states_per_level": [[list(level), count] for level, count in self.states_per_level],
            "peak_frontier": self.peak_frontier,
            "peak_live": self.peak_live,
            "expansions": self.expansions,
            "terminal_trace": [
                [list(level), domain.render(value)] for level, value in self.terminal_trace
            ],
            "gf_length_histogram": {str(k): v for k, v in sorted(self.gf_length_histogram.items())},
        }


@dataclass
class TmRun:
    value: object
    stats: RunStats


def _apply_weight(domain, value, term, max_exponent):
    out = domain.shift(value, term.shift)
    if term.scalar != 1:
        out = domain.scalar_mul(out, term.scalar)
    if max_exponent is not None:
        out = domain.truncate(out, max_exponent)
    return out


def _expand_state(problem, domain, level, skey, value, max_exponent, trim):
    """One state's contribution: (terminal part or None, child records)."""
    full = problem.join_key(level, skey)
    if problem.hierarchy(full) != level:
        raise InvalidStateError(
            f"frontier key at level {level} decodes to level {problem.hierarchy(full)}"
        )
    terminal = None
    children = []
    for term in problem.expand(full).terms:
        if term.kind is TermKind.PRODUCT:
            raise ProductTermError(
                f"product term at state {problem.describe(full)}; "
                "frontier iteration only supports cumulative sums"
            )
        weighted = _apply_weight(domain, value, term, max_exponent)
        if domain.is_zero(weighted):
            continue
        if term.kind is TermKind.TERMINAL:
            terminal = weighted if terminal is None else domain.add(terminal, weighted)
            continue
        child = term.children[0]
        if trim:
            bound = problem.completion_lower_bound(child)
            if bound is not None and domain.min_exponent(weighted) + bound > max_exponent:
                continue
        child_level = problem.hierarchy(child)
        if not child_level < level:
            raise InvalidStateError(
                f"hierarchy does not decrease: {problem.describe(full)} -> "
                f"{problem.describe(child)}"
            )
        children.append((child_level, problem.split_key(child), weighted))
    return terminal, children


def _tm_run(problem: ProblemDefinition, domain, root: StateKey | None,
            max_exponent: int | None, trim: bool,
            capture_level_values: bool, state_limit: int | None) -> TmRun:
    if trim and max_exponent is None:
        raise InvalidStateError("trimming needs a series cutoff")
    if root is None:
        root = problem.root()
    stats = RunStats()
    if capture_level_values:
        stats.level_values = []

    pending: dict[Hierarchy, dict[bytes, object]] = {
        problem.hierarchy(root): {problem.split_key(root): domain.from_int(1)}
    }
    pending_total = 1
    stats.peak_live = 1
    total = domain.zero()

    while pending:
        level = max(pending)
        frontier = pending.pop(level)
        pending_total -= len(frontier)
        stats.states_per_level.append((level, len(frontier)))
        if len(frontier) > stats.peak_frontier:
            stats.peak_frontier = len(frontier)
            histogram: dict[int, int] = {}
            for v in frontier.values():
                n = domain.length(v)
                histogram[n] = histogram.get(n, 0) + 1
            stats.gf_length_histogram = histogram
        if capture_level_values:
            stats.level_values.append((level, list(frontier.values())))

        level_terminal = None
        for skey in list(frontier.keys()):
            value = frontier.pop(skey)
            stats.expansions += 1
            terminal, children = _expand_state(
                problem, domain, level, skey, value, max_exponent, trim
            )
            if terminal is not None:
                level_terminal = terminal if level_terminal is None else domain.add(level_terminal, terminal)
            for child_level, cskey, cvalue in children:
                bucket = pending.get(child_level)
                if bucket is None:
                    bucket = pending[child_level] = {}
                held = bucket.get(cskey)
                if held is None:
                    if state_limit is not None and pending_total >= state_limit:
                        raise ResourceLimitError(f"live states exceeded limit {state_limit}")
                    bucket[cskey] = cvalue
                    pending_total += 1
                else:
                    bucket[cskey] = domain.add(held, cvalue)
            live = pending_total + len(frontier)
            if live > stats.peak_live:
                stats.peak_live = live

        if level_terminal is not None:
            total = domain.add(total, level_terminal)
            stats.terminal_trace.append((level, level_terminal))

    return TmRun(total, stats)


def tm_evaluate(problem: ProblemDefinition, ring, root: StateKey | None = None,
                capture_level_values: bool = False,
                state_limit: int | None = None) -> TmRun:
    """Plain counting run; equals dp_evaluate on the same inputs."""
    return _tm_run(problem, ring, root, None, False, capture_level_values, state_limit)


def tm_evaluate_series(problem: ProblemDefinition, domain, max_exponent: int,
                       root: StateKey | None = None, trim: bool = False,
                       capture_level_values: bool = False,
                       state_limit: int | None = None) -> TmRun:
    """Series run: per-state values are generating functions, weights are
    applied as exponent shifts, and everything is truncated at
    max_exponent after each shift. With trim on, states whose cheapest
    conceivable completion overshoots the cutoff are discarded."""
    if max_exponent < 0:
        raise InvalidStateError("max_exponent must be >= 0")
    return _tm_run(problem, domain, root, max_exponent, trim, capture_level_values, state_limit)


def serialize_frontier(frontier: dict[bytes, object], domain) -> bytes:
    """Canonical dump: records sorted by key bytes, each record a
    big-endian u32 key length, the key, a u32 value length, and the
    domain encoding of the value. Dumps of equal frontiers are equal."""
    out = bytearray()
    for key in sorted(frontier.keys()):
        encoded = domain.encode(frontier[key])
        out += struct.pack(">I", len(key))
        out += key
        out += struct.pack(">I", len(encoded))
        out += encoded
    return bytes(out)


@dataclass
class GroupViolation:
    child: bytes
    parent_groups: tuple


def tm_evaluate_grouped(problem: ProblemDefinition, domain, max_exponent: int | None = None,
                        root: StateKey | None = None, trim: bool = False,
                        partition=None, schedule=None, threads: int = 1,
                        collect_violations: list | None = None,
                        state_limit: int | None = None) -> TmRun:
    """Frontier run with per-level group partitioning.

    Groups at one level are independent: each is processed with its own
    small map and its finished output is serialized as sorted records.
    Outputs are then concatenated in ascending group order, so the
    result is byte-identical no matter how the schedule orders (or
    parallelizes) the groups. `schedule` reorders processing only;
    `threads` > 1 runs groups of a level concurrently.
    """
    if root is None:
        root = problem.root()
    if partition is None:
        partition = problem.group_key
    stats = RunStats()

    pending: dict[Hierarchy, dict[bytes, object]] = {
        problem.hierarchy(root): {problem.split_key(root): domain.from_int(1)}
    }
    pending_total = 1
    stats.peak_live = 1
    total = domain.zero()
    child_parent_groups: dict[bytes, set] = {} if collect_violations is not None else None

    def process_group(level, items):
        terminal = None
        records = []
        expansions = 0
        for skey, value in items:
            expansions += 1
            t, children = _expand_state(problem, domain, level, skey, value, max_exponent, trim)
            if t is not None:
                terminal = t if terminal is None else domain.add(terminal, t)
            records.extend(children)
        records.sort(key=lambda r: (r[0], r[1]))
        return terminal, records, expansions

    while pending:
        level = max(pending)
        frontier = pending.pop(level)
        pending_total -= len(frontier)
        stats.states_per_level.append((level, len(frontier)))
        stats.peak_frontier = max(stats.peak_frontier, len(frontier))

        groups: dict[int, list] = {}
        for skey, value in frontier.items():
            g = partition(problem.join_key(level, skey))
            groups.setdefault(g, []).append((skey, value))
        frontier = None

        order = schedule(sorted(groups)) if schedule else sorted(groups)
        if sorted(order) != sorted(groups):
            raise InvalidStateError("schedule must permute the level's groups")

        outputs: dict[int, tuple] = {}
        if threads > 1 and len(order) > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                futures = {g: pool.submit(process_group, level, groups[g]) for g in order}
            for g in order:
                outputs[g] = futures[g].result()
        else:
            for g in order:
                outputs[g] = process_group(level, groups[g])

        level_terminal = None
        for g in sorted(outputs):
            terminal, records, expansions = outputs[g]
            stats.expansions += expansions
            if terminal is not None:
                level_terminal = terminal if level_terminal is None else domain.add(level_terminal, terminal)
            for child_level, cskey, cvalue in records:
                if child_parent_groups is not None:
                    child_parent_groups.setdefault((child_level, cskey), set()).add(g)
                bucket = pending.get(child_level)
                if bucket is None:
                    bucket = pending[child_level] = {}
                held = bucket.get(cskey)
                if held is None:
                    if state_limit is not None and pending_total >= state_limit:
                        raise ResourceLimitError(f"live states exceeded limit {state_limit}")
                    bucket[cskey] = cvalue
                    pending_total += 1
                else:
                    bucket[cskey] = domain.add(held, cvalue)
        if level_terminal is not None:
            total = domain.add(total, level_terminal)
            stats.terminal_trace.append((level, level_terminal))
        stats.peak_live = max(stats.peak_live, pending_total)
        if child_parent_groups is not None:
            for (_, cskey), parents in child_parent_groups.items():
                if len(parents) > 1:
                    collect_violations.append(GroupViolation(cskey, tuple(sorted(parents))))
            child_parent_groups.clear()

    return TmRun(total, stats)


def peak_memory_comparison(problem: ProblemDefinition, domain, root: StateKey | None = None,
                           max_exponent: int | None = None) -> dict:
    """Run both engines and report the memory drivers side by side."""
    from .dp import dp_evaluate

    if max_exponent is None:
        tm = tm_evaluate(problem, domain, root)
    else:
        tm = tm_evaluate_series(problem, domain, max_exponent, root)
    dp = dp_evaluate(problem, domain, root)
    return {
        "tm_peak_states": tm.stats.peak_live,
        "tm_peak_frontier": tm.stats.peak_frontier,
        "dp_cache_entries": len(dp.cache.values),
        "equal": tm.value == dp.value,
    }
