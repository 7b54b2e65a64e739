"""Fixed 3D polycubes by the finite-lattice route.

One lattice run processes box sites in layer/row/column order, one site
per step. The state is the cross-section behind the most recent site:
a color per cell (zero empty, equal colors connected through processed
cells), four touched-side flags, and, implicitly through the step
number, the kink position and layer. An object is emitted the moment
its last cell leaves the cross-section, which, together with requiring
all four sides touched and a minimum completion height, makes every
fixed polycube of a given bounding box appear exactly once.

Totals are assembled over normalized boxes w <= d <= h, weighting each
by the number of distinct axis orderings.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ..domains import Gf1Domain, Gf2Domain, MomentDomain
from ..errors import ConfigError, InvalidStateError
from ..model import (
    EMPTY_EXPANSION,
    Expansion,
    ProblemDefinition,
    StateKey,
    sum_term,
    terminal_term,
)
from ..rings import BigIntRing
from ..tm import tm_evaluate_grouped, tm_evaluate_series
from .polycube_trim import completion_bound

FLAG_XLO, FLAG_XHI, FLAG_YLO, FLAG_YHI = 1, 2, 4, 8
ALL_FLAGS = 15


@dataclass(frozen=True)
class LatticeSpec:
    """Box dimensions normalized to width <= depth <= height; any axis
    ordering enumerates the same objects."""

    width: int
    depth: int
    height: int

    def __post_init__(self):
        if not 1 <= self.width <= self.depth <= self.height:
            raise ConfigError(
                f"lattice must satisfy 1 <= w <= d <= h, got "
                f"{self.width}x{self.depth}x{self.height}"
            )

    @classmethod
    def from_dims(cls, a: int, b: int, c: int) -> "LatticeSpec":
        w, d, h = sorted((a, b, c))
        return cls(w, d, h)

    @property
    def orientations(self) -> int:
        return _orientations(self.width, self.depth, self.height)


def _orientations(w: int, d: int, h: int) -> int:
    if w == d == h:
        return 1
    if w == d or d == h or w == h:
        return 3
    return 6


def canonicalize_colors(cells):
    """Relabel connectivity colors to the lexicographically least
    sequence in cell order; idempotent and partition-preserving."""
    if isinstance(cells, Boundary):
        return Boundary(
            cells.width, canonicalize_colors(cells.cells), cells.kink,
            cells.flags, cells.layer,
        )
    mapping = {}
    nxt = 1
    out = []
    for c in cells:
        if not c:
            out.append(0)
            continue
        m = mapping.get(c)
        if m is None:
            m = mapping[c] = nxt
            nxt += 1
        out.append(m)
    return tuple(out)


@dataclass(frozen=True)
class Boundary:
    """Cross-section snapshot: cells in row-major (y, x) order; cells at
    index >= kink lag one layer behind the rest."""

    width: int
    cells: tuple
    kink: int
    flags: int
    layer: int


def _mirror_cells(cells: tuple, width: int) -> tuple:
    out = []
    for start in range(0, len(cells), width):
        out.extend(reversed(cells[start:start + width]))
    return tuple(out)


def _mirror_flags(flags: int) -> int:
    return (flags & (FLAG_YLO | FLAG_YHI)) | ((flags & FLAG_XLO) << 1) | ((flags & FLAG_XHI) >> 1)


def reflect_canonicalize(b: Boundary) -> Boundary:
    """Pick the smaller of a boundary and its x-mirror (by encoded byte
    order). Only valid when the kink sits at a row completion, where the
    processed region is mirror-symmetric."""
    if b.kink % b.width != 0:
        raise InvalidStateError(f"kink {b.kink} is mid-row; reflection would change the count")
    cells = canonicalize_colors(b.cells)
    mirrored = canonicalize_colors(_mirror_cells(b.cells, b.width))
    mflags = _mirror_flags(b.flags)
    if (bytes(mirrored), mflags) < (bytes(cells), b.flags):
        return Boundary(b.width, mirrored, b.kink, mflags, b.layer)
    return Boundary(b.width, cells, b.kink, b.flags, b.layer)


@lru_cache(maxsize=None)
def _cached_bound(colors, flags, width, depth, kink, layer, min_height):
    return completion_bound(colors, flags, width, depth, kink, layer, min_height)


class PolycubeLattice(ProblemDefinition):
    """One W x D x H box run counting spanning polycubes per height.

    Options:
      track_surface   second series variable = surface area delta per cube
      prior_plane_removal  drop a boundary cell once only the next site
                      can see it and its component survives elsewhere
                      (defaults on, but off when tracking surface, where
                      the dropped cell's faces still matter)
      reflect         mirror-canonicalize at row completions
      terminal_perms  weight each finished height h by the number of box
                      orientations of (W, D, h); lets a single memoized
                      run produce the orientation-weighted total
      budget_in_state carry cells-used in the key so expansion itself can
                      refuse over-budget growth (memoized-recursion mode;
                      frontier runs prune through the engine instead)
    """

    def __init__(self, width: int, depth: int, height: int, max_n: int, *,
                 min_height: int = 1, track_surface: bool = False,
                 prior_plane_removal: bool | None = None, reflect: bool = False,
                 terminal_perms: bool = False, budget_in_state: bool = False,
                 trim_in_expand: bool = False):
        if not 1 <= width <= depth:
            raise ConfigError("need 1 <= width <= depth")
        if height < 1 or max_n < 1:
            raise ConfigError("height and max_n must be >= 1")
        if width * depth > 255 or width * depth * height + 1 > 65535:
            raise ConfigError("box too large for the state encoding")
        if min_height > height:
            raise ConfigError("min_height exceeds the box height")
        self.width = width
        self.depth = depth
        self.height = height
        self.max_n = max_n
        self.min_height = min_height
        self.track_surface = track_surface
        if prior_plane_removal is None:
            prior_plane_removal = not track_surface
        if prior_plane_removal and track_surface:
            raise ConfigError(
                "prior-plane removal merges states with different covered "
                "faces; not valid while tracking surface area"
            )
        self.prior_plane_removal = prior_plane_removal
        self.reflect = reflect
        self.terminal_perms = terminal_perms
        self.budget_in_state = budget_in_state
        self.trim_in_expand = trim_in_expand
        self.area = width * depth
        self.total_sites = self.area * height
        self.num_variables = 2 if track_surface else 1
        self.name = f"polycube[{width}x{depth}x{height}]"
        self._zero_shift = (0,) * self.num_variables
        bits = []
        for k in range(self.area):
            y, x = divmod(k, width)
            f = 0
            if x == 0:
                f |= FLAG_XLO
            if x == width - 1:
                f |= FLAG_XHI
            if y == 0:
                f |= FLAG_YLO
            if y == depth - 1:
                f |= FLAG_YHI
            bits.append(f)
        self._side_bits = tuple(bits)

    # keys: 2-byte step counter (+1 byte cells-used in budget mode),
    # color byte per cell, flags byte

    def _key(self, s: int, used: int, cells, flags: int) -> StateKey:
        head = s.to_bytes(2, "big")
        if self.budget_in_state:
            head += bytes((used,))
        return head + bytes(cells) + bytes((flags,))

    def _decode(self, key: StateKey):
        s = int.from_bytes(key[:2], "big")
        if self.budget_in_state:
            return s, key[2], tuple(key[3:-1]), key[-1]
        return s, 0, tuple(key[2:-1]), key[-1]

    def root(self) -> StateKey:
        return self._key(0, 0, (0,) * self.area, 0)

    def hierarchy(self, key: StateKey):
        s = int.from_bytes(key[:2], "big")
        return (self.total_sites - s,)

    def split_key(self, key: StateKey) -> bytes:
        return key[2:]

    def join_key(self, level, stored: bytes) -> StateKey:
        return (self.total_sites - level[0]).to_bytes(2, "big") + stored

    def describe(self, key: StateKey) -> str:
        s, used, cells, flags = self._decode(key)
        z, k = divmod(s, self.area)
        rows = [
            list(cells[r * self.width:(r + 1) * self.width])
            for r in range(self.depth)
        ]
        sides = "".join(
            name for bit, name in ((1, "W"), (2, "E"), (4, "N"), (8, "S")) if flags & bit
        )
        extra = f" used={used}" if self.budget_in_state else ""
        return f"site={s} z={z} kink={k}{extra} sides={sides or '-'} cells={rows}"

    def boundary(self, key: StateKey) -> Boundary:
        s, _, cells, flags = self._decode(key)
        z, k = divmod(s, self.area)
        return Boundary(self.width, cells, k, flags, z)

    def group_key(self, key: StateKey) -> int:
        s, _, cells, _ = self._decode(key)
        k = s % self.area if s < self.total_sites else 0
        g = 0
        area = self.area
        for i in range(area):
            if i == k:
                continue
            if cells[i]:
                g |= 1 << ((i - k - 1) % area)
        return g

    def completion_lower_bound(self, key: StateKey) -> int | None:
        s, _, cells, flags = self._decode(key)
        if s >= self.total_sites:
            return 0
        z, k = divmod(s, self.area)
        return _cached_bound(
            cells, flags, self.width, self.depth, k,
            min(z, self.min_height), self.min_height,
        )

    def _terminal_scalar(self, h: int) -> int:
        return _orientations(self.width, self.depth, h) if self.terminal_perms else 1

    def _child_key(self, s_new: int, used: int, cells, flags: int) -> StateKey:
        cells = canonicalize_colors(cells)
        if self.prior_plane_removal and s_new < self.total_sites:
            k2 = s_new % self.area
            pc = cells[k2]
            if pc:
                y2, x2 = divmod(k2, self.width)
                r2 = cells[k2 - self.width] if y2 else 0
                c2 = cells[k2 - 1] if x2 else 0
                if pc == r2 or pc == c2:
                    work = list(cells)
                    work[k2] = 0
                    cells = canonicalize_colors(work)
        if self.reflect and (s_new % self.area) % self.width == 0:
            mirrored = canonicalize_colors(_mirror_cells(cells, self.width))
            mflags = _mirror_flags(flags)
            if (bytes(mirrored), mflags) < (bytes(cells), flags):
                cells, flags = mirrored, mflags
        return self._key(s_new, used, cells, flags)

    def expand(self, key: StateKey) -> Expansion:
        s, used, cells, flags = self._decode(key)
        if s > self.total_sites:
            raise InvalidStateError(f"step counter {s} beyond the box")
        if s == self.total_sites:
            present = {c for c in cells if c}
            if len(present) == 1 and flags == ALL_FLAGS and self.height >= self.min_height:
                return Expansion(
                    (terminal_term(self._terminal_scalar(self.height), self._zero_shift),)
                )
            return EMPTY_EXPANSION

        z, k = divmod(s, self.area)
        p_col = cells[k]
        y, x = divmod(k, self.width)
        r_col = cells[k - self.width] if y else 0
        c_col = cells[k - 1] if x else 0
        terms = []

        # place a cube at the next site
        if not self.budget_in_state or self._growth_allowed(s, used, cells, flags):
            occ = (p_col > 0) + (r_col > 0) + (c_col > 0)
            work = list(cells)
            joined = {c for c in (p_col, r_col, c_col) if c}
            if joined:
                target = min(joined)
                if len(joined) > 1:
                    for i, c in enumerate(work):
                        if c in joined:
                            work[i] = target
                work[k] = target
            else:
                work[k] = self.area + 1  # fresh component, renumbered below
            shift = (1,) if not self.track_surface else (1, 6 - 2 * occ)
            terms.append(
                sum_term(
                    self._child_key(s + 1, used + 1, work, flags | self._side_bits[k]),
                    shift=shift,
                )
            )

        # leave the next site empty
        if p_col and all(c != p_col for i, c in enumerate(cells) if i != k):
            # the covered cell was its component's last boundary presence
            if not any(c for i, c in enumerate(cells) if i != k):
                if flags == ALL_FLAGS and z >= self.min_height:
                    terms.append(terminal_term(self._terminal_scalar(z), self._zero_shift))
                # otherwise the object cannot satisfy the box contract: dead
            # with other components still live the buried one can never rejoin
        else:
            work = list(cells)
            work[k] = 0
            if any(work) or s + 1 < self.area:
                terms.append(sum_term(self._child_key(s + 1, used, work, flags), shift=self._zero_shift))
            # an empty boundary after the first layer would restart the
            # object; refuse it for uniqueness in the stacking direction
        return Expansion(tuple(terms))

    def _growth_allowed(self, s: int, used: int, cells, flags: int) -> bool:
        if used + 1 > self.max_n:
            return False
        if not self.trim_in_expand:
            return True
        # conservative: the new cube can only improve connectivity, so
        # the parent's bound minus one is a valid child bound
        z, k = divmod(s, self.area)
        bound = _cached_bound(
            cells, flags, self.width, self.depth, k,
            min(z, self.min_height), self.min_height,
        )
        return used + max(0, bound - 1) + 1 <= self.max_n


def _make_domain(ring, mode: str, moment_order: int):
    if mode == "volume":
        return Gf1Domain(ring)
    if mode == "surface":
        return Gf2Domain(ring)
    if mode == "moments":
        return MomentDomain(ring, moment_order)
    raise ConfigError(f"unknown polycube value mode {mode!r}")


@dataclass
class LatticeRun:
    """Per-completion-height series from one box run."""

    width: int
    depth: int
    height: int
    max_n: int
    per_height: dict
    stats: object
    domain: object


def enumerate_lattice(width: int, depth: int, height: int, max_n: int, *,
                      ring=None, mode: str = "volume", moment_order: int = 2,
                      trim: bool = True, reflect: bool = False,
                      grouped: bool = False, threads: int = 1,
                      min_height: int = 1, state_limit: int | None = None,
                      schedule=None) -> LatticeRun:
    """Run one box, returning the series of spanning polycubes (all four
    sides touched) for every completion height up to the box height."""
    if grouped and reflect:
        raise ConfigError("reflection breaks the occupancy grouping invariant; pick one")
    if ring is None:
        ring = BigIntRing()
    domain = _make_domain(ring, mode, moment_order)
    problem = PolycubeLattice(
        width, depth, height, max_n,
        min_height=min_height,
        track_surface=(mode != "volume"),
        reflect=reflect,
    )
    if grouped:
        run = tm_evaluate_grouped(
            problem, domain, max_exponent=max_n, trim=trim,
            threads=threads, schedule=schedule, state_limit=state_limit,
        )
    else:
        run = tm_evaluate_series(
            problem, domain, max_n, trim=trim, state_limit=state_limit,
        )
    per_height: dict[int, object] = {}
    for level, value in run.stats.terminal_trace:
        h = (problem.total_sites - level[0]) // problem.area
        held = per_height.get(h)
        per_height[h] = value if held is None else domain.add(held, value)
    return LatticeRun(width, depth, height, max_n, per_height, run.stats, domain)


@dataclass
class AssemblyResult:
    """Orientation-weighted totals over all normalized boxes."""

    total: object
    domain: object
    boxes: list

    def coefficients(self, max_n: int) -> list[int]:
        """Counts for sizes 1..max_n (volume mode only)."""
        from ..series import gf_coefficient

        return [gf_coefficient(self.total, n, self.domain.ring) for n in range(1, max_n + 1)]


def _box_schedule(max_n: int):
    w = 1
    while 3 * w <= max_n + 2:
        d = w
        while w + 2 * d <= max_n + 2:
            yield w, d, max_n + 2 - w - d
            d += 1
        w += 1


def assemble_counts(max_n: int, *, ring=None, mode: str = "volume",
                    moment_order: int = 2, trim: bool = True,
                    engine: str = "tm", reflect: bool = False,
                    grouped: bool = False, threads: int = 1,
                    state_limit: int | None = None) -> AssemblyResult:
    """Total fixed polycubes by volume, up to max_n.

    Every bounding box w <= d <= h with w + d + h <= max_n + 2 can host a
    spanning polycube of at most max_n cells (a connected spanning set
    needs at least w + d + h - 2). Heights below d belong to some other
    normalized box, so each (w, d) pair runs once up to its tallest
    useful height with d as the minimum completion height.
    """
    if max_n < 1:
        raise ConfigError("max_n must be >= 1")
    if ring is None:
        ring = BigIntRing()
    domain = _make_domain(ring, mode, moment_order)
    total = domain.zero()
    boxes = []
    for w, d, h_max in _box_schedule(max_n):
        if engine == "dp":
            from ..dp import dp_evaluate

            problem = PolycubeLattice(
                w, d, h_max, max_n, min_height=d,
                track_surface=(mode != "volume"),
                terminal_perms=True, budget_in_state=True, trim_in_expand=trim,
            )
            value = domain.truncate(dp_evaluate(problem, domain).value, max_n)
            total = domain.add(total, value)
            boxes.append({"box": [w, d, h_max], "weighted": True})
            continue
        if engine != "tm":
            raise ConfigError(f"unknown assembly engine {engine!r}")
        run = enumerate_lattice(
            w, d, h_max, max_n, ring=ring, mode=mode, moment_order=moment_order,
            trim=trim, reflect=reflect, grouped=grouped, threads=threads,
            min_height=d, state_limit=state_limit,
        )
        for h in sorted(run.per_height):
            series = run.per_height[h]
            weighted = domain.scalar_mul(series, _orientations(w, d, h))
            total = domain.add(total, weighted)
            boxes.append({
                "box": [w, d, h],
                "orientations": _orientations(w, d, h),
                "states_processed": run.stats.expansions,
            })
    return AssemblyResult(total, domain, boxes)


# independent verification: direct cell-by-cell enumeration


def polycube_counts_oracle(n: int) -> list[int]:
    """Fixed polycube counts for sizes 1..n by direct enumeration.

    Each polycube is generated exactly once, rooted at its first cell in
    (z, y, x) order; no size-n run revisits an object. Exponential in
    output size, so capped.
    """
    if not 1 <= n <= 9:
        raise InvalidStateError("polycube oracle supports 1 <= n <= 9")
    counts = [0] * (n + 1)
    origin = (0, 0, 0)
    reached = {origin}

    def allowed(cell):
        z, y, x = cell
        if z != 0:
            return z > 0
        if y != 0:
            return y > 0
        return x >= 0

    def neighbors(cell):
        z, y, x = cell
        return (
            (z - 1, y, x), (z + 1, y, x),
            (z, y - 1, x), (z, y + 1, x),
            (z, y, x - 1), (z, y, x + 1),
        )

    def grow(untried: list, size: int):
        while untried:
            cell = untried.pop()
            counts[size + 1] += 1
            if size + 1 < n:
                fresh = [
                    v for v in neighbors(cell)
                    if v not in reached and allowed(v)
                ]
                reached.update(fresh)
                grow(untried + fresh, size + 1)
                reached.difference_update(fresh)

    grow([origin], 0)
    return counts[1:]


def polycube_oracle(n: int) -> int:
    """Number of fixed polycubes of exactly n cells."""
    return polycube_counts_oracle(n)[n - 1]


def brute_force_polycubes(n: int) -> list[frozenset]:
    """All fixed polycubes of exactly n cells as translation-normalized
    cell sets; a slower generator kept for bounding-box and surface
    checks."""
    if not 1 <= n <= 7:
        raise InvalidStateError("cell-set generator supports 1 <= n <= 7")

    def normalize(cells):
        mx = min(c[0] for c in cells)
        my = min(c[1] for c in cells)
        mz = min(c[2] for c in cells)
        return frozenset((cx - mx, cy - my, cz - mz) for cx, cy, cz in cells)

    current = {frozenset(((0, 0, 0),))}
    for _ in range(n - 1):
        grown = set()
        for shape in current:
            for cx, cy, cz in shape:
                for dx, dy, dz in (
                    (1, 0, 0), (-1, 0, 0), (0, 1, 0),
                    (0, -1, 0), (0, 0, 1), (0, 0, -1),
                ):
                    cell = (cx + dx, cy + dy, cz + dz)
                    if cell in shape:
                        continue
                    grown.add(normalize(shape | {cell}))
        current = grown
    return sorted(current, key=sorted)


def surface_area(cells: frozenset) -> int:
    area = 0
    for cx, cy, cz in cells:
        for dx, dy, dz in (
            (1, 0, 0), (-1, 0, 0), (0, 1, 0),
            (0, -1, 0), (0, 0, 1), (0, 0, -1),
        ):
            if (cx + dx, cy + dy, cz + dz) not in cells:
                area += 1
    return area


def bounding_box(cells: frozenset) -> tuple[int, int, int]:
    """Extents along (x, y, z) of a normalized cell set."""
    return (
        max(c[0] for c in cells) + 1,
        max(c[1] for c in cells) + 1,
        max(c[2] for c in cells) + 1,
    )
