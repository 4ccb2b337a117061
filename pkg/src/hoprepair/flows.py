"""Integer max-flow (Edmonds-Karp) with min-cut extraction.

Callers scale rational capacities to a common denominator first, so all
arithmetic here is exact integer arithmetic.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence


@dataclass
class FlowResult:
    value: int
    reached_limit: bool
    source_side: frozenset | None  # residual-reachable set; None when limit hit


def max_flow(
    n_nodes: int,
    arcs: Sequence[tuple],
    src: int,
    dst: int,
    limit: int | None = None,
) -> FlowResult:
    """Max flow from src to dst over directed arcs (u, v, capacity).

    Nodes are 0..n_nodes-1. When `limit` is given, augmentation stops as
    soon as the flow reaches it (the exact value beyond the limit is not
    needed for feasibility tests). The min-cut source side is returned
    only when the limit was not reached.
    """
    # Adjacency with paired residual arcs.
    head: list[list[int]] = [[] for _ in range(n_nodes)]
    to: list[int] = []
    cap: list[int] = []

    def add_arc(u: int, v: int, c: int) -> None:
        head[u].append(len(to))
        to.append(v)
        cap.append(c)
        head[v].append(len(to))
        to.append(u)
        cap.append(0)

    for u, v, c in arcs:
        if c > 0:
            add_arc(u, v, c)

    value = 0
    while limit is None or value < limit:
        # BFS for a shortest augmenting path.
        parent_arc = [-1] * n_nodes
        parent_arc[src] = -2
        queue = deque([src])
        found = False
        while queue and not found:
            u = queue.popleft()
            for aid in head[u]:
                v = to[aid]
                if parent_arc[v] == -1 and cap[aid] > 0:
                    parent_arc[v] = aid
                    if v == dst:
                        found = True
                        break
                    queue.append(v)
        if not found:
            break
        # Bottleneck along the path.
        bottleneck = None
        v = dst
        while v != src:
            aid = parent_arc[v]
            if bottleneck is None or cap[aid] < bottleneck:
                bottleneck = cap[aid]
            v = to[aid ^ 1]
        if limit is not None:
            bottleneck = min(bottleneck, limit - value)
        v = dst
        while v != src:
            aid = parent_arc[v]
            cap[aid] -= bottleneck
            cap[aid ^ 1] += bottleneck
            v = to[aid ^ 1]
        value += bottleneck

    if limit is not None and value >= limit:
        return FlowResult(value=value, reached_limit=True, source_side=None)

    # Residual reachability gives the min cut.
    seen = [False] * n_nodes
    seen[src] = True
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for aid in head[u]:
            v = to[aid]
            if not seen[v] and cap[aid] > 0:
                seen[v] = True
                queue.append(v)
    return FlowResult(
        value=value,
        reached_limit=False,
        source_side=frozenset(i for i in range(n_nodes) if seen[i]),
    )
