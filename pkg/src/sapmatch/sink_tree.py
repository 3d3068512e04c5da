"""Bounded-depth dynamic shortest paths to a fixed sink in a directed graph.

Supports arc deletions freely, arc insertions under the caller's guarantee
that no insertion shortens any distance, and whole-node removal.  Distances
are maintained exactly up to ``depth_limit``; anything further is collapsed
into a single HIGH level.  Deletion repair is the usual scan-and-raise: a
node whose supporting arc disappears rescans its out-arcs and, if its level
rose, notifies the nodes it was supporting.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable

from .errors import InvariantViolation


class SinkDistanceTree:
    """Directed graph + levels + parent pointers toward the sink.

    ``level[v]`` is the exact distance from ``v`` to the sink when it is at
    most ``depth_limit``; the sentinel value ``high`` (= depth_limit + 1)
    means "further than the limit".  Levels never decrease over the life of
    the structure; a violation of that contract raises InvariantViolation.
    """

    def __init__(
        self,
        node_count: int,
        sink: int,
        depth_limit: int,
        arcs: Iterable[tuple[int, int]] = (),
    ):
        if depth_limit < 1:
            raise ValueError("depth limit must be at least 1")
        if not 0 <= sink < node_count:
            raise ValueError("sink out of range")
        self.node_count = node_count
        self.sink = sink
        self.depth_limit = depth_limit
        self.high = depth_limit + 1
        self.out: list[set[int]] = [set() for _ in range(node_count)]
        self.into: list[set[int]] = [set() for _ in range(node_count)]
        self.deleted: set[int] = set()
        for u, v in arcs:
            self._check_endpoints(u, v)
            self.out[u].add(v)
            self.into[v].add(u)
        self.level = [self.high] * node_count
        self.parent: list[int | None] = [None] * node_count
        self.level[sink] = 0
        self._init_levels()

    def _check_endpoints(self, u: int, v: int) -> None:
        if not (0 <= u < self.node_count and 0 <= v < self.node_count) or u == v:
            raise ValueError("arc endpoints must be distinct nodes")
        if u == self.sink:
            raise ValueError("arcs may not leave the sink")

    def _init_levels(self) -> None:
        queue = deque([self.sink])
        while queue:
            v = queue.popleft()
            if self.level[v] == self.depth_limit:
                continue
            for u in sorted(self.into[v]):
                if self.level[u] > self.level[v] + 1:
                    self.level[u] = self.level[v] + 1
                    self.parent[u] = v
                    queue.append(u)

    def has_arc(self, u: int, v: int) -> bool:
        return v in self.out[u]

    def insert_arc(self, u: int, v: int) -> None:
        """Add an arc; by contract the arc must not shorten any distance."""
        self._check_endpoints(u, v)
        if u in self.deleted or v in self.deleted:
            raise ValueError("cannot attach arcs to a removed node")
        if v in self.out[u]:
            raise ValueError("arc already present")
        self.out[u].add(v)
        self.into[v].add(u)
        if self.level[v] + 1 < self.level[u]:
            raise InvariantViolation(
                f"arc ({u},{v}) would shorten the distance of {u}; "
                "insertions must never decrease distances"
            )

    def delete_arc(self, u: int, v: int) -> None:
        if v not in self.out[u]:
            raise ValueError("arc not present")
        self.out[u].discard(v)
        self.into[v].discard(u)
        if self.parent[u] == v:
            self._repair([u])

    def delete_node(self, v: int) -> None:
        """Remove a node and all incident arcs; its level becomes permanently HIGH."""
        if v == self.sink:
            raise ValueError("the sink cannot be removed")
        if v in self.deleted:
            raise ValueError("node already removed")
        seeds = [u for u in self.into[v] if self.parent[u] == v]
        for u in self.into[v]:
            self.out[u].discard(v)
        for w in self.out[v]:
            self.into[w].discard(v)
        self.out[v].clear()
        self.into[v].clear()
        self.deleted.add(v)
        self.level[v] = self.high
        self.parent[v] = None
        self._repair(seeds)

    def _repair(self, seeds: Iterable[int]) -> None:
        queue = deque(seeds)
        while queue:
            u = queue.popleft()
            if u == self.sink or u in self.deleted:
                continue
            best = self.high
            support = None
            for w in self.out[u]:
                candidate = self.level[w] + 1
                if candidate < best or (candidate == best and (support is None or w < support)):
                    best = candidate
                    support = w
            if best > self.depth_limit:
                best, support = self.high, None
            if best < self.level[u]:
                raise InvariantViolation(f"level of node {u} tried to decrease")
            if best > self.level[u]:
                self.level[u] = best
                self.parent[u] = support
                queue.extend(x for x in self.into[u] if self.parent[x] == u)
            else:
                self.parent[u] = support

    def path_to_sink(self, u: int) -> list[int]:
        """The tracked shortest path from ``u`` to the sink (inclusive)."""
        if self.level[u] > self.depth_limit:
            raise ValueError("node is beyond the depth limit")
        path = [u]
        v = u
        while v != self.sink:
            nxt = self.parent[v]
            if nxt is None or nxt not in self.out[v]:
                raise InvariantViolation(f"broken parent chain at node {v}")
            path.append(nxt)
            v = nxt
        if len(path) - 1 != self.level[u]:
            raise InvariantViolation("parent chain length disagrees with the level")
        return path

    def validate_against_bfs(self) -> None:
        """Check every level and parent pointer against a fresh truncated BFS."""
        dist = {self.sink: 0}
        queue = deque([self.sink])
        while queue:
            v = queue.popleft()
            if dist[v] == self.depth_limit:
                continue
            for u in self.into[v]:
                if u not in dist and u not in self.deleted:
                    dist[u] = dist[v] + 1
                    queue.append(u)
        for v in range(self.node_count):
            if v == self.sink:
                continue
            if v in self.deleted:
                if self.level[v] != self.high:
                    raise InvariantViolation(f"removed node {v} must sit at the HIGH level")
                continue
            expected = dist.get(v, self.high)
            if self.level[v] != expected:
                raise InvariantViolation(
                    f"node {v}: stored level {self.level[v]} but true distance is {expected}"
                )
            if self.level[v] <= self.depth_limit:
                p = self.parent[v]
                if p is None or p not in self.out[v] or self.level[p] != self.level[v] - 1:
                    raise InvariantViolation(f"node {v} has an inconsistent parent pointer")
