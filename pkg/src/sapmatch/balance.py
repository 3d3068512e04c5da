"""Exact balanced-load analysis of a bipartite prefix.

Each client spreads one unit of demand over its neighbor servers; a spread is
*balanced* when every client only uses its least-loaded neighbors.  The
resulting per-server totals ("necessities") are unique for a given graph and
are computed here exactly, as rationals, by repeatedly peeling off the client
set that maximizes |K| / |N(K)|.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import InvariantViolation
from .flownet import FlowNetwork, max_flow
from .instance import ArrivalInstance
from .matching import SapEngine

Adjacency = Mapping[int, Sequence[int]]


@dataclass(frozen=True)
class Peel:
    ratio: Fraction
    clients: frozenset[int]
    servers: frozenset[int]


@dataclass
class BalancedFlow:
    """Unique per-server necessities, one realizing edge spread, and the peel trace."""

    necessity: dict[int, Fraction]
    edge_flow: dict[tuple[int, int], Fraction]
    peels: tuple[Peel, ...]

    def max_necessity(self) -> Fraction:
        if not self.peels:
            return Fraction(0)
        return self.peels[0].ratio

    def check(self, adjacency: Adjacency) -> None:
        """Raise unless this object satisfies all of its structural invariants."""
        for c, nbrs in adjacency.items():
            total = sum((self.edge_flow.get((c, s), Fraction(0)) for s in nbrs), Fraction(0))
            if total != 1:
                raise InvariantViolation(f"client {c} spreads {total}, not 1")
        per_server: dict[int, Fraction] = {}
        for (c, s), x in self.edge_flow.items():
            if x < 0:
                raise InvariantViolation("negative edge flow")
            per_server[s] = per_server.get(s, Fraction(0)) + x
        for s, total in per_server.items():
            if total != self.necessity.get(s, Fraction(0)):
                raise InvariantViolation(f"server {s} receives {total} != necessity")
        for c, nbrs in adjacency.items():
            least = min(self.necessity[s] for s in nbrs)
            for s in nbrs:
                if self.edge_flow.get((c, s), Fraction(0)) > 0 and self.necessity[s] != least:
                    raise InvariantViolation(f"client {c} sends flow to a non-least-loaded server")
        for earlier, later in zip(self.peels, self.peels[1:]):
            if not later.ratio < earlier.ratio:
                raise InvariantViolation("peel ratios must strictly decrease")
        spread = sum((p.ratio * len(p.servers) for p in self.peels), Fraction(0))
        if spread != len(adjacency):
            raise InvariantViolation("total necessity must equal the number of clients")


def _check_adjacency(adjacency: Adjacency) -> None:
    for c, nbrs in adjacency.items():
        if len(nbrs) == 0:
            raise ValueError(f"client {c} has no neighbors; remove isolated clients first")


def _demand_network(adjacency: Adjacency, p: int, q: int):
    """Scaled integer network testing whether all per-server loads can stay <= p/q.

    Every client must ship q units; a server accepts at most p.  The
    client->server arcs are effectively unbounded.
    """
    clients = sorted(adjacency)
    servers = sorted({s for nbrs in adjacency.values() for s in nbrs})
    source = 0
    sink = 1 + len(clients) + len(servers)
    net = FlowNetwork(sink + 1, source, sink)
    cnode = {c: 1 + i for i, c in enumerate(clients)}
    snode = {s: 1 + len(clients) + j for j, s in enumerate(servers)}
    bulk = q * len(clients)
    middle: dict[tuple[int, int], int] = {}
    for c in clients:
        net.add_arc(source, cnode[c], q)
        for s in adjacency[c]:
            middle[(c, s)] = net.add_arc(cnode[c], snode[s], bulk)
    for s in servers:
        net.add_arc(snode[s], sink, p)
    return net, cnode, snode, middle


def limit_feasible(adjacency: Adjacency, limit: Fraction) -> bool:
    """Can one unit per client be spread so no server receives more than ``limit``?"""
    if limit <= 0:
        raise ValueError("load limit must be positive")
    _check_adjacency(adjacency)
    if not adjacency:
        return True
    limit = Fraction(limit)
    net, _, _, _ = _demand_network(adjacency, limit.numerator, limit.denominator)
    return max_flow(net).value == limit.denominator * len(adjacency)


def max_ratio(adjacency: Adjacency) -> tuple[Fraction, frozenset[int]]:
    """The largest |K| / |N(K)| over nonempty client sets, and the largest K attaining it.

    The ratio is located by walking the Stern-Brocot tree with the (monotone)
    feasibility predicate; every candidate is a fraction with numerator at
    most |C| and denominator at most |S|, so the walk pins it down exactly.
    """
    _check_adjacency(adjacency)
    if not adjacency:
        raise ValueError("max_ratio needs at least one client")
    client_count = len(adjacency)
    server_count = len({s for nbrs in adjacency.values() for s in nbrs})

    lo = (0, 1)  # below every feasible limit
    hi = (1, 0)  # stands in for +infinity, always feasible
    while True:
        med = (lo[0] + hi[0], lo[1] + hi[1])
        if med[0] > client_count or med[1] > server_count:
            break
        if limit_feasible(adjacency, Fraction(med[0], med[1])):
            hi = med
        else:
            lo = med
    if hi == (1, 0):
        raise InvariantViolation("no feasible ratio found within the candidate bounds")
    lam = Fraction(hi[0], hi[1])

    # Probe just below lam: every maximizing client set now shows up on the
    # source side of the largest min cut, and nothing else does (candidate
    # ratios with denominator <= |S| are at least 1/|S|^2 apart, so this probe
    # separates the maximizers from everything smaller).
    probe = lam - Fraction(1, 2 * server_count * server_count * client_count)
    net, cnode, _, _ = _demand_network(adjacency, probe.numerator, probe.denominator)
    side = max_flow(net).max_cut_source_side()
    tight = frozenset(c for c, node in cnode.items() if node in side)
    if not tight:
        raise InvariantViolation("tight set extraction produced an empty set")
    hood = set()
    for c in tight:
        hood.update(adjacency[c])
    if Fraction(len(tight), len(hood)) != lam:
        raise InvariantViolation("extracted set does not attain the maximal ratio")
    return lam, tight


def balanced_flow(adjacency: Adjacency, server_count: int | None = None) -> BalancedFlow:
    """Compute the unique balanced spread by iterated peeling.

    Each round takes the largest client set maximizing |K| / |N(K)|, fixes
    that ratio as the necessity of every server in N(K), recovers a realizing
    integer flow inside the peel, removes K and N(K), and repeats.  Servers a
    peel never touches end at necessity 0.
    """
    _check_adjacency(adjacency)
    remaining: dict[int, tuple[int, ...]] = {c: tuple(nbrs) for c, nbrs in adjacency.items()}
    necessity: dict[int, Fraction] = {}
    if server_count is not None:
        necessity = {s: Fraction(0) for s in range(server_count)}
    edge_flow: dict[tuple[int, int], Fraction] = {}
    peels: list[Peel] = []

    while remaining:
        lam, tight = max_ratio(remaining)
        if peels and not lam < peels[-1].ratio:
            raise InvariantViolation("peeling must produce strictly decreasing ratios")
        peel_servers: set[int] = set()
        for c in tight:
            peel_servers.update(remaining[c])

        sub = {c: remaining[c] for c in tight}
        net, _, _, middle = _demand_network(sub, lam.numerator, lam.denominator)
        result = max_flow(net)
        if result.value != lam.denominator * len(tight):
            raise InvariantViolation("peel flow failed to saturate its clients")
        for (c, s), arc in middle.items():
            units = result.arc_flow(arc)
            if units:
                edge_flow[(c, s)] = Fraction(units, lam.denominator)

        for s in peel_servers:
            necessity[s] = lam
        peels.append(Peel(lam, frozenset(tight), frozenset(peel_servers)))

        survivors: dict[int, tuple[int, ...]] = {}
        for c, nbrs in remaining.items():
            if c in tight:
                continue
            kept = tuple(s for s in nbrs if s not in peel_servers)
            if not kept:
                raise InvariantViolation(
                    "a surviving client lost its whole neighborhood to a peel"
                )
            survivors[c] = kept
        remaining = survivors

    return BalancedFlow(necessity, edge_flow, tuple(peels))


def effective_clients(instance: ArrivalInstance, prefix_len: int | None = None) -> frozenset[int]:
    """Clients whose arrival increased the maximum matching size.

    The protocol keeps the matching maximum at all times, so these are
    exactly the clients a fresh baseline run matches on arrival.
    """
    if prefix_len is None:
        prefix_len = instance.client_count
    if not 0 <= prefix_len <= instance.client_count:
        raise ValueError("prefix length out of range")
    engine = SapEngine(instance, capacity=[1] * instance.server_count)
    grew = []
    for c in range(prefix_len):
        if engine.step(c).matched:
            grew.append(c)
    return frozenset(grew)


def effective_necessities(
    instance: ArrivalInstance, prefix_len: int | None = None
) -> dict[int, Fraction]:
    """Balanced necessities of the prefix graph restricted to its effective clients.

    Always at most 1 per server: the restricted graph admits a matching that
    covers every one of its clients.
    """
    members = effective_clients(instance, prefix_len)
    adjacency = {c: instance.neighbors(c) for c in sorted(members)}
    flow = balanced_flow(adjacency, server_count=instance.server_count)
    if any(v > 1 for v in flow.necessity.values()):
        raise InvariantViolation("effective necessities can never exceed 1")
    return flow.necessity
