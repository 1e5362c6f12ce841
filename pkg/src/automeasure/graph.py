"""Small digraph helpers over vertices 0..n-1 given as adjacency lists."""

from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence


def strongly_connected_components(adj: Sequence[Iterable[int]]) -> list[list[int]]:
    """Tarjan's algorithm, iterative so deep chains do not hit the recursion limit.

    Components are returned in reverse topological order (sinks first).
    """
    n = len(adj)
    adj = [list(a) for a in adj]
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    components: list[list[int]] = []
    counter = 0

    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            if i < len(adj[v]):
                work[-1] = (v, i + 1)
                w = adj[v][i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                components.append(sorted(comp))
    return components


def is_strongly_connected(adj: Sequence[Iterable[int]]) -> bool:
    return len(adj) > 0 and len(strongly_connected_components(adj)) == 1


def closed_components(adj: Sequence[Iterable[int]]) -> list[list[int]]:
    """Components with no edge leaving them (the recurrent classes of a chain)."""
    adj = [list(a) for a in adj]
    comps = strongly_connected_components(adj)
    where = {}
    for ci, comp in enumerate(comps):
        for v in comp:
            where[v] = ci
    closed = []
    for ci, comp in enumerate(comps):
        if all(where[w] == ci for v in comp for w in adj[v]):
            closed.append(comp)
    return sorted(closed)


def reachable(adj: Sequence[Iterable[int]], sources: Iterable[int]) -> set[int]:
    seen = set(sources)
    queue = deque(seen)
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen
