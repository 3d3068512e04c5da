"""Integer max-flow via blocking flows, with access to both extreme min cuts."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass


class FlowNetwork:
    """A directed network with integer capacities, one source, one sink."""

    def __init__(self, node_count: int, source: int, sink: int):
        if not (0 <= source < node_count and 0 <= sink < node_count) or source == sink:
            raise ValueError("source and sink must be distinct nodes of the network")
        self.node_count = node_count
        self.source = source
        self.sink = sink
        # Arc i and its reverse are stored at 2i and 2i+1.
        self.head: list[list[int]] = [[] for _ in range(node_count)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add_arc(self, u: int, v: int, capacity: int) -> int:
        if capacity < 0:
            raise ValueError("capacities must be nonnegative")
        if v == self.source or u == self.sink:
            raise ValueError("arcs may not enter the source or leave the sink")
        arc_id = len(self.to)
        self.to.extend((v, u))
        self.cap.extend((capacity, 0))
        self.head[u].append(arc_id)
        self.head[v].append(arc_id + 1)
        return arc_id


@dataclass
class MaxFlowResult:
    value: int
    _net: FlowNetwork
    _residual: list[int]
    _original: list[int]

    def arc_flow(self, arc_id: int) -> int:
        return self._original[arc_id] - self._residual[arc_id]

    def min_cut_source_side(self) -> set[int]:
        """The inclusion-minimal min cut: nodes residual-reachable from the source."""
        seen = {self._net.source}
        queue = deque(seen)
        while queue:
            u = queue.popleft()
            for arc in self._net.head[u]:
                v = self._net.to[arc]
                if self._residual[arc] > 0 and v not in seen:
                    seen.add(v)
                    queue.append(v)
        return seen

    def max_cut_source_side(self) -> set[int]:
        """The inclusion-maximal min cut: complement of the nodes that still reach the sink."""
        reaches = {self._net.sink}
        queue = deque(reaches)
        while queue:
            v = queue.popleft()
            for arc in self._net.head[v]:
                # arc^1 runs to[arc] -> v; it has residual iff cap[arc^1] > 0
                u = self._net.to[arc]
                if self._residual[arc ^ 1] > 0 and u not in reaches:
                    reaches.add(u)
                    queue.append(u)
        return set(range(self._net.node_count)) - reaches


def max_flow(net: FlowNetwork) -> MaxFlowResult:
    """Dinic's algorithm: repeated level graphs, each saturated by a blocking flow."""
    cap = list(net.cap)
    to = net.to
    head = net.head
    source, sink = net.source, net.sink
    level = [0] * net.node_count
    it = [0] * net.node_count
    total = 0

    def bfs() -> bool:
        for i in range(net.node_count):
            level[i] = -1
        level[source] = 0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for arc in head[u]:
                v = to[arc]
                if cap[arc] > 0 and level[v] < 0:
                    level[v] = level[u] + 1
                    queue.append(v)
        return level[sink] >= 0

    def blocking_dfs() -> int:
        # Iterative DFS along level-increasing residual arcs.
        pushed = 0
        path: list[int] = []
        u = source
        while True:
            if u == sink:
                bottleneck = min(cap[a] for a in path)
                for a in path:
                    cap[a] -= bottleneck
                    cap[a ^ 1] += bottleneck
                pushed += bottleneck
                # Retreat to the first saturated arc on the path.
                for idx, a in enumerate(path):
                    if cap[a] == 0:
                        del path[idx:]
                        break
                u = to[path[-1]] if path else source
                continue
            advanced = False
            while it[u] < len(head[u]):
                arc = head[u][it[u]]
                v = to[arc]
                if cap[arc] > 0 and level[v] == level[u] + 1:
                    path.append(arc)
                    u = v
                    advanced = True
                    break
                it[u] += 1
            if advanced:
                continue
            level[u] = -1  # dead end in this phase
            if not path:
                return pushed
            last = path.pop()
            u = to[last ^ 1]
            it[u] += 1

    while bfs():
        for i in range(net.node_count):
            it[i] = 0
        total += blocking_dfs()
    return MaxFlowResult(total, net, cap, list(net.cap))
