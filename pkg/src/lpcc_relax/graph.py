"""Conflict-graph machinery: covers, partitions, cliques, odd (anti)holes.

All searches are deterministic pure functions of the graph, so repeated runs
over the same instance produce identical structures (and hence identical
relaxations and cut pools).
"""
from __future__ import annotations

import random
from dataclasses import dataclass


class NotACover(ValueError):
    """Raised when a claimed vertex cover leaves some edge uncovered."""


@dataclass(frozen=True)
class ConflictGraph:
    n: int
    adjacency: tuple[tuple[int, ...], ...]

    @staticmethod
    def from_edges(n: int, edges) -> "ConflictGraph":
        adj: list[set[int]] = [set() for _ in range(n)]
        for (i, j) in edges:
            if i == j:
                raise ValueError(f"loop edge ({i},{i})")
            adj[i].add(j)
            adj[j].add(i)
        return ConflictGraph(n, tuple(tuple(sorted(s)) for s in adj))

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in self.adjacency[i]
                if i < j]

    def degree(self, i: int) -> int:
        return len(self.adjacency[i])

    def neighbors(self, i: int) -> tuple[int, ...]:
        return self.adjacency[i]

    def has_edge(self, i: int, j: int) -> bool:
        return j in self.adjacency[i]

    def neighborhood(self, nodes) -> frozenset[int]:
        out: set[int] = set()
        for i in nodes:
            out.update(self.adjacency[i])
        return frozenset(out)

    def complement(self) -> "ConflictGraph":
        edges = [(i, j) for i in range(self.n) for j in range(i + 1, self.n)
                 if j not in self.adjacency[i]]
        return ConflictGraph.from_edges(self.n, edges)

    def to_dot(self) -> str:
        lines = ["graph conflict {"]
        for i in range(self.n):
            lines.append(f"  {i};")
        for (i, j) in self.edges:
            lines.append(f"  {i} -- {j};")
        lines.append("}")
        return "\n".join(lines)


def erdos_renyi(n: int, rho: float, seed: int) -> ConflictGraph:
    """Each of the C(n,2) pairs is an edge independently with probability rho."""
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"rho={rho} outside [0,1]")
    rng = random.Random(seed)
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < rho:
                edges.append((i, j))
    return ConflictGraph.from_edges(n, edges)


def approx_min_vertex_cover(g: ConflictGraph) -> frozenset[int]:
    """Maximal-matching 2-approximation, scanning edges lexicographically.

    Both endpoints of every matched edge enter the cover (so the result is
    at most twice the minimum vertex cover), then a pruning pass removes
    vertices whose edges are all covered by the rest -- on a matching this
    drops one endpoint per edge and halves the cover.
    """
    cover: set[int] = set()
    matched: set[int] = set()
    for i in range(g.n):
        if i in matched:
            continue
        for j in g.adjacency[i]:
            if j > i and j not in matched:
                matched.add(i)
                matched.add(j)
                cover.add(i)
                cover.add(j)
                break
    for i in sorted(cover):
        if all(j in cover for j in g.adjacency[i] if j != i):
            cover.discard(i)
    return frozenset(cover)


@dataclass(frozen=True)
class CoverPartition:
    """Disjoint groups of cover nodes with identical neighborhoods.

    Within each group T every node i satisfies delta(i) = delta(T), which is
    exactly the condition under which the per-group disjunction
    (y(T) = 0  or  y(delta(T)) = 0) is valid.
    """

    groups: tuple[tuple[int, ...], ...]
    group_neighborhood: tuple[frozenset[int], ...]

    def __len__(self) -> int:
        return len(self.groups)

    @property
    def cover(self) -> frozenset[int]:
        return frozenset(i for grp in self.groups for i in grp)


def feasible_cover_partition(g: ConflictGraph, cover) -> CoverPartition:
    """Partition a vertex cover into classes of identical neighborhoods.

    Neighborhood-equality classes are the coarsest grouping guaranteed
    feasible, which keeps the partition (and the relaxation it induces)
    as small as possible.
    """
    cover = set(cover)
    for (i, j) in g.edges:
        if i not in cover and j not in cover:
            raise NotACover(f"edge ({i},{j}) uncovered")
    by_nbhd: dict[frozenset[int], list[int]] = {}
    for i in sorted(cover):
        by_nbhd.setdefault(frozenset(g.adjacency[i]), []).append(i)
    groups = sorted(tuple(v) for v in by_nbhd.values())
    return CoverPartition(
        groups=tuple(groups),
        group_neighborhood=tuple(g.neighborhood(grp) for grp in groups),
    )


def singleton_partition(g: ConflictGraph) -> CoverPartition:
    """All singletons of non-isolated nodes (the T* of the dominance result)."""
    nodes = [i for i in range(g.n) if g.degree(i) > 0]
    return CoverPartition(
        groups=tuple((i,) for i in nodes),
        group_neighborhood=tuple(frozenset(g.adjacency[i]) for i in nodes),
    )


def maximal_cliques(g: ConflictGraph, limit: int = 10_000):
    """All maximal cliques via pivoting Bron-Kerbosch.

    Returns (cliques, truncated); enumeration stops after ``limit`` cliques.
    """
    adj = [set(a) for a in g.adjacency]
    cliques: list[tuple[int, ...]] = []
    truncated = False

    def expand(r: list[int], p: set[int], x: set[int]) -> bool:
        nonlocal truncated
        if not p and not x:
            cliques.append(tuple(sorted(r)))
            if len(cliques) >= limit:
                truncated = True
                return False
            return True
        pivot = max(sorted(p | x), key=lambda u: len(p & adj[u]))
        for v in sorted(p - adj[pivot]):
            if not expand(r + [v], p & adj[v], x & adj[v]):
                return False
            p.remove(v)
            x.add(v)
        return True

    expand([], set(range(g.n)), set())
    return sorted(cliques), truncated


def _verify_hole(g: ConflictGraph, cycle: tuple[int, ...]) -> bool:
    k = len(cycle)
    if k < 5 or k % 2 == 0 or len(set(cycle)) != k:
        return False
    pos = {v: t for t, v in enumerate(cycle)}
    for t, v in enumerate(cycle):
        nxt = cycle[(t + 1) % k]
        if not g.has_edge(v, nxt):
            return False
        for w in g.adjacency[v]:
            if w in pos and pos[w] not in ((t + 1) % k, (t - 1) % k):
                return False  # chord
    return True


def odd_holes(g: ConflictGraph, max_len: int = 9) -> list[tuple[int, ...]]:
    """Heuristic supply of chordless odd cycles of length 5..max_len.

    BFS trees rooted at each node; every non-tree edge closes a candidate
    cycle through the root, which is then verified odd and chordless.
    Length-3 cycles are excluded: clique cuts dominate them.
    """
    if max_len < 5 or max_len % 2 == 0:
        raise ValueError("max_len must be odd and >= 5")
    found: dict[frozenset[int], tuple[int, ...]] = {}
    for root in range(g.n):
        parent = {root: None}
        order = [root]
        qi = 0
        while qi < len(order):
            u = order[qi]
            qi += 1
            for w in g.adjacency[u]:
                if w not in parent:
                    parent[w] = u
                    order.append(w)

        def path_to_root(v: int) -> list[int]:
            path = [v]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            return path

        for (a, b) in g.edges:
            if a not in parent or parent.get(b) == a or parent.get(a) == b:
                continue
            pa, pb = path_to_root(a), path_to_root(b)
            if set(pa) & set(pb) != {root}:
                continue
            cycle = tuple(pa + pb[-2::-1])
            if len(cycle) > max_len:
                continue
            key = frozenset(cycle)
            if key not in found and _verify_hole(g, cycle):
                found[key] = cycle
    return sorted(found.values(), key=lambda c: (len(c), c))


def odd_antiholes(g: ConflictGraph, max_len: int = 9) -> list[tuple[int, ...]]:
    """Node sets whose complement-induced subgraph is a chordless odd cycle."""
    comp = g.complement()
    holes = odd_holes(comp, max_len)
    out = []
    for cycle in holes:
        assert _verify_hole(comp, cycle)
        out.append(tuple(sorted(cycle)))
    return sorted(set(out), key=lambda c: (len(c), c))
