from __future__ import annotations

import heapq
from collections.abc import Callable, Hashable, Iterable

from .errors import SearchCapExceeded


def bidirectional_path(
    start: Hashable,
    goal: Hashable,
    neighbors: Callable[[Hashable], Iterable[Hashable]],
    cap: int,
) -> list | None:
    """Shortest-ish path in an undirected graph, or None if the two nodes are disconnected.

    Expands the smaller frontier each round, so the search stops as soon as the
    smaller of the two components is exhausted.  ``neighbors`` must be symmetric.
    Raises SearchCapExceeded once more than ``cap`` nodes have been visited.
    """
    if start == goal:
        return [start]
    seen_a: dict = {start: None}
    seen_b: dict = {goal: None}
    front_a = [start]
    front_b = [goal]
    while front_a and front_b:
        forward = len(front_a) <= len(front_b)
        own, other = (seen_a, seen_b) if forward else (seen_b, seen_a)
        frontier = front_a if forward else front_b
        nxt = []
        for u in frontier:
            for v in neighbors(u):
                if v in own:
                    continue
                own[v] = u
                if v in other:
                    return _join(v, seen_a, seen_b)
                nxt.append(v)
            if len(seen_a) + len(seen_b) > cap:
                raise SearchCapExceeded(
                    f"search visited more than {cap} nodes", visited=len(seen_a) + len(seen_b)
                )
        if forward:
            front_a = nxt
        else:
            front_b = nxt
    return None


def guided_path(start: tuple, goal: tuple, neighbors: Callable[[tuple], Iterable[tuple]], budget: int) -> list | None:
    """Greedy best-first search towards ``goal`` by Hamming distance.

    Only ever returns genuine paths; None means "not found within budget",
    never "disconnected".
    """
    def h(node):
        return sum(a != b for a, b in zip(node, goal))

    prev: dict = {start: None}
    heap = [(h(start), 0, start)]
    tick = 0
    while heap:
        _, _, u = heapq.heappop(heap)
        if u == goal:
            path = []
            while u is not None:
                path.append(u)
                u = prev[u]
            return path[::-1]
        for v in neighbors(u):
            if v not in prev:
                prev[v] = u
                tick += 1
                heapq.heappush(heap, (h(v), tick, v))
        if len(prev) > budget:
            return None
    return None


def _join(meet, seen_a: dict, seen_b: dict) -> list:
    left = []
    node = meet
    while node is not None:
        left.append(node)
        node = seen_a[node]
    left.reverse()
    node = seen_b[meet]
    while node is not None:
        left.append(node)
        node = seen_b[node]
    return left


def component(start: Hashable, neighbors: Callable[[Hashable], Iterable[Hashable]], cap: int) -> set:
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in neighbors(u):
            if v not in seen:
                seen.add(v)
                stack.append(v)
                if len(seen) > cap:
                    raise SearchCapExceeded(f"component exceeds {cap} nodes", visited=len(seen))
    return seen
