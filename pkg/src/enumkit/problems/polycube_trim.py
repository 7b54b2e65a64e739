"""Conservative completion bound for polycube boundary states.

Given a boundary (cross-section colors, touched-side flags, kink and
layer), compute a lower bound on how many cells any valid finished
polycube still needs: connect every color class, reach the untouched
lattice sides, and climb to the minimum allowed completion height.
States whose cheapest series term plus this bound overshoots the series
cutoff can be discarded without changing any coefficient; the bound is
deliberately conservative (never above the true minimum), so imperfect
pruning costs time, not correctness.
"""

from __future__ import annotations

from functools import lru_cache

INF = 1 << 30


class TrimGrid:
    """Candidate cells for connection paths: the layer just above each
    boundary cell, plus one extra row above the kink row so paths can
    cross between the two height levels of the kinked surface.

    Nodes are (lift, y, x) with lift 0 directly above the older (lower)
    part of the boundary and lift 1 one level higher; adjacency is plain
    3D face adjacency restricted to the node set.
    """

    def __init__(self, width: int, depth: int, kink: int):
        self.width = width
        self.depth = depth
        self.kink = kink
        ky, kx = divmod(kink, width)
        nodes = []
        for y in range(depth):
            for x in range(width):
                lift = 1 if y * width + x < kink else 0
                nodes.append((lift, y, x))
        for x in range(kx, width):
            nodes.append((1, ky, x))
        self.nodes = tuple(nodes)
        self.index = {node: i for i, node in enumerate(nodes)}
        neighbors = []
        for lift, y, x in nodes:
            adj = []
            for cand in (
                (lift, y - 1, x),
                (lift, y + 1, x),
                (lift, y, x - 1),
                (lift, y, x + 1),
                (lift - 1, y, x),
                (lift + 1, y, x),
            ):
                j = self.index.get(cand)
                if j is not None:
                    adj.append(j)
            neighbors.append(tuple(adj))
        self.neighbors = tuple(neighbors)
        # primary node above each boundary cell, by cell index
        self.above = tuple(
            self.index[(1 if i < kink else 0, i // width, i % width)]
            for i in range(width * depth)
        )

    def __len__(self):
        return len(self.nodes)


@lru_cache(maxsize=4096)
def build_grid(width: int, depth: int, kink: int) -> TrimGrid:
    return TrimGrid(width, depth, kink)


def color_seed_nodes(colors, grid: TrimGrid, color: int) -> set[int]:
    """Grid nodes face-adjacent to some boundary cell of this color."""
    width = grid.width
    kink = grid.kink
    seeds = set()
    found = False
    for i, c in enumerate(colors):
        if c != color:
            continue
        found = True
        seeds.add(grid.above[i])
        if i < kink:
            # cells in the newer part sit level with the lift-0 nodes
            y, x = divmod(i, width)
            for ny, nx in ((y - 1, x), (y + 1, x), (y, x - 1), (y, x + 1)):
                if 0 <= ny < grid.depth and 0 <= nx < width:
                    j = ny * width + nx
                    if j >= kink:
                        seeds.add(grid.above[j])
    if not found:
        raise ValueError(f"color {color} absent from boundary")
    return seeds


def color_table(colors, grid: TrimGrid, color: int) -> list[int]:
    """Minimum cells needed to reach each grid node from the color,
    the reached node included; breadth-first from the seed set."""
    dist = [INF] * len(grid)
    frontier = list(color_seed_nodes(colors, grid, color))
    for i in frontier:
        dist[i] = 1
    while frontier:
        nxt = []
        for i in frontier:
            d = dist[i] + 1
            for j in grid.neighbors[i]:
                if d < dist[j]:
                    dist[j] = d
                    nxt.append(j)
        frontier = nxt
    return dist


def consistency(table, grid: TrimGrid) -> list[int]:
    """Greatest fixed point <= table with every node at most one above
    its cheapest neighbor; idempotent."""
    out = list(table)
    changed = True
    while changed:
        changed = False
        for i, adj in enumerate(grid.neighbors):
            best = out[i]
            for j in adj:
                if out[j] + 1 < best:
                    best = out[j] + 1
            if best < out[i]:
                out[i] = best
                changed = True
    return out


def _combine(a, b, grid: TrimGrid) -> list[int]:
    # cells to realize both connection tasks through one shared node
    merged = [
        (a[i] + b[i] - 1) if a[i] < INF and b[i] < INF else INF
        for i in range(len(grid))
    ]
    return consistency(merged, grid)


def connection_cost(colors, grid: TrimGrid) -> int:
    """Lower bound on cells needed to join all color classes.

    Exact for up to four classes (pairwise tables, then junction tables
    folding in one more class at a time); for five or more, the cost of
    connecting the first three is combined with each leftover class
    separately and the worst case taken, which can only undershoot.
    """
    present = sorted({c for c in colors if c})
    if len(present) <= 1:
        return 0
    tables = {c: color_table(colors, grid, c) for c in present}
    a, b = present[0], present[1]
    if len(present) == 2:
        ta, tb = tables[a], tables[b]
        return min(ta[i] + tb[i] for i in range(len(grid))) - 1
    c = present[2]
    bitable = _combine(tables[a], tables[b], grid)
    if len(present) == 3:
        tc = tables[c]
        return min(bitable[i] + tc[i] for i in range(len(grid))) - 1
    tritable = _combine(bitable, tables[c], grid)
    for x, y, z in ((a, c, b), (b, c, a)):
        alt = _combine(_combine(tables[x], tables[y], grid), tables[z], grid)
        tritable = [min(u, v) for u, v in zip(tritable, alt)]
    worst = 0
    for d in present[3:]:
        td = tables[d]
        near = min(tritable[i] for i in range(len(grid)) if td[i] == 1)
        worst = max(worst, near)
    return worst


def completion_bound(colors, flags: int, width: int, depth: int, kink: int,
                     layer: int, min_height: int) -> int:
    """Cells still needed to finish: connection + untouched sides +
    height climb, with at most one overlap discount."""
    occupied = [i for i, c in enumerate(colors) if c]
    if not occupied:
        # a spanning connected object over extents width x depth x
        # min_height needs at least the sum of extents minus two
        return width + depth + min_height - 2

    grid = build_grid(width, depth, kink)
    cc = connection_cost(colors, grid)

    xs = [i % width for i in occupied]
    ys = [i // width for i in occupied]
    edge = 0
    bottom_gap = 0
    if not flags & 1:
        edge += min(xs)
    if not flags & 2:
        edge += width - 1 - max(xs)
    if not flags & 4:
        edge += min(ys)
    if not flags & 8:
        bottom_gap = depth - 1 - max(ys)
        edge += bottom_gap

    top_layer = layer if any(colors[i] for i in range(kink)) else layer - 1
    height = max(0, (min_height - 1) - top_layer)

    discount = 0
    if cc > 0 and height > 0:
        # one connection cell doubles as the first climb cell
        discount = 1
    elif cc > 0 and bottom_gap > 0 and kink // width >= depth - 2:
        # connection work near the kink can run in the row that also
        # reaches the far side
        discount = 1
    return max(0, cc + edge + height - discount)
