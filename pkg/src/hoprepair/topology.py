"""Multi-hop network model: undirected connected graphs with unit-cost
directed link usage, plus tandem (path) and grid (4-neighbor lattice)
generators and BFS distances.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field as dc_field


class TopologyError(ValueError):
    pass


@dataclass(frozen=True)
class Topology:
    """Undirected connected graph on nodes 1..n. Grids carry (row, col) labels."""

    n: int
    edges: frozenset  # frozenset of (u, v) with u < v
    labels: dict | None = dc_field(default=None, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise TopologyError("need at least one node")
        for u, v in self.edges:
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise TopologyError(f"edge ({u},{v}) references unknown node")
            if u == v:
                raise TopologyError(f"self-loop at node {u}")
            if u > v:
                raise TopologyError("edges must be stored as (min, max) pairs")
        if self.n > 1 and not self._connected():
            raise TopologyError("graph must be connected")

    def _connected(self) -> bool:
        seen = {1}
        queue = deque([1])
        adj = self.adjacency()
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        return len(seen) == self.n

    def adjacency(self) -> dict:
        adj = {u: [] for u in range(1, self.n + 1)}
        for u, v in sorted(self.edges):
            adj[u].append(v)
            adj[v].append(u)
        for u in adj:
            adj[u].sort()
        return adj

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def directed_links(self) -> list:
        """Both orientations of every edge, deterministically ordered."""
        links = []
        for u, v in sorted(self.edges):
            links.append((u, v))
            links.append((v, u))
        return links

    def distances_from(self, src: int) -> dict:
        """BFS hop distances from src to every node."""
        if not 1 <= src <= self.n:
            raise TopologyError(f"node {src} not in topology")
        dist = {src: 0}
        queue = deque([src])
        adj = self.adjacency()
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        return dist

    def hop_distance(self, a: int, b: int) -> int:
        if not 1 <= b <= self.n:
            raise TopologyError(f"node {b} not in topology")
        return self.distances_from(a)[b]

    def to_edge_list(self) -> str:
        return "\n".join(f"{u} {v}" for u, v in sorted(self.edges)) + "\n"


def make_tandem(n: int) -> Topology:
    """Path graph 1 - 2 - ... - n."""
    if n < 2:
        raise TopologyError(f"a tandem needs at least 2 nodes, got {n}")
    edges = frozenset((i, i + 1) for i in range(1, n))
    return Topology(n=n, edges=edges)


def make_grid(r: int, s: int) -> Topology:
    """r x s 4-neighbor lattice; node (i, j) has id (i-1)*s + j (row-major)."""
    if r < 1 or s < 1 or r * s < 2:
        raise TopologyError(f"degenerate grid dimensions {r}x{s}")

    def nid(i, j):
        return (i - 1) * s + j

    edges = set()
    labels = {}
    for i in range(1, r + 1):
        for j in range(1, s + 1):
            labels[nid(i, j)] = (i, j)
            if j < s:
                edges.add((nid(i, j), nid(i, j + 1)))
            if i < r:
                edges.add((nid(i, j), nid(i + 1, j)))
    return Topology(n=r * s, edges=frozenset(edges), labels=labels)


def from_edge_list(text: str) -> Topology:
    """Parse 'u v' pairs, one per line, 1-based node ids. Blank lines and
    '#' comments are ignored."""
    edges = set()
    max_node = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise TopologyError(f"line {lineno}: expected 'u v', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise TopologyError(f"line {lineno}: non-integer node id") from exc
        if u == v:
            raise TopologyError(f"line {lineno}: self-loop at {u}")
        edges.add((min(u, v), max(u, v)))
        max_node = max(max_node, u, v)
    if not edges:
        raise TopologyError("empty edge list")
    return Topology(n=max_node, edges=frozenset(edges))
