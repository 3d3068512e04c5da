"""Dynamic engine: tree paths, brute-force fallback, pruning, digraph integrity."""

from __future__ import annotations

import math
from fractions import Fraction

import pytest

from sapmatch import (
    ArrivalInstance,
    FastSapEngine,
    default_depth_limit,
    effective_necessities,
    gen_random,
    gen_star_chain,
    run_fast_sap,
    run_sap,
    star_chain_probes,
)
from conftest import instance_corpus


def rebuild_arcs(engine: FastSapEngine) -> set[tuple[int, int]]:
    """The arc set the digraph should hold, reconstructed from the matching alone."""
    inst = engine.instance
    n = inst.client_count
    dead = engine.tree.deleted
    arcs: set[tuple[int, int]] = set()
    for c in range(n):
        cnode = c
        if cnode in dead:
            continue
        if c >= engine.state.arrived_count:
            arcs.add((cnode, engine.sink))
            continue
        home = engine.state.server_of_client[c]
        for s in inst.neighbors(c):
            snode = engine._server_node(s)
            if snode in dead:
                continue
            if home == s:
                arcs.add((snode, cnode))
            else:
                arcs.add((cnode, snode))
    for s in range(inst.server_count):
        snode = engine._server_node(s)
        if snode not in dead and engine.state.is_free(s):
            arcs.add((snode, engine.sink))
    return arcs


def current_arcs(engine: FastSapEngine) -> set[tuple[int, int]]:
    return {
        (u, v)
        for u in range(engine.tree.node_count)
        for v in engine.tree.out[u]
    }


class TestBasics:
    def test_initial_levels(self):
        inst = ArrivalInstance.build(2, [])
        engine = FastSapEngine(inst, depth_limit=3)
        assert engine.tree.level[engine._server_node(0)] == 1
        assert engine.tree.level[engine._server_node(1)] == 1
        assert engine.tree.level[engine.sink] == 0

    def test_depth_limit_validation(self):
        with pytest.raises(ValueError):
            FastSapEngine(ArrivalInstance.build(1, [[0]]), depth_limit=0)

    def test_direct_neighbor_via_tree(self):
        engine = FastSapEngine(ArrivalInstance.build(1, [[0]]), depth_limit=3)
        rec = engine.step(0)
        assert rec.path_edges == 1
        assert engine.log.tree_paths == 1
        assert engine.log.brute_paths == 0

    def test_capacitated_rejected(self):
        with pytest.raises(ValueError):
            FastSapEngine(ArrivalInstance.build(1, [[0]], capacities=[2]))

    def test_default_depth_limit(self):
        assert default_depth_limit(1) == 1
        n = 100
        assert default_depth_limit(n) == math.ceil(math.sqrt(n * math.log(n)))


class TestPruning:
    def test_saturated_component_pruned(self):
        inst = ArrivalInstance.build(1, [[0], [0], [0]])
        engine = FastSapEngine(inst, depth_limit=4, debug=True)
        engine.step(0)
        rec = engine.step(1)
        assert not rec.matched
        assert engine.log.brute_failures == 1
        # the failed search swallowed the whole component
        (event,) = engine.prune_events
        assert event.servers == frozenset({0})
        assert 1 in event.clients
        # later arrivals never traverse the pruned region again
        rec = engine.step(2)
        assert not rec.matched
        assert engine.log.pruned_nodes >= 3

    def test_pruned_servers_fully_necessary(self):
        corpus = instance_corpus(
            25, seed=71, max_clients=30, max_servers=10, max_degree=2
        )
        seen = 0
        for inst in corpus:
            engine = FastSapEngine(inst)
            for c in range(inst.client_count):
                before = len(engine.prune_events)
                engine.step(c)
                for event in engine.prune_events[before:]:
                    seen += 1
                    necessity = effective_necessities(inst, c + 1)
                    for s in event.servers:
                        assert necessity[s] == Fraction(1)
        assert seen >= 5  # the corpus must actually exercise pruning

    def test_pruning_never_changes_lengths(self):
        # degree-1-heavy instances prune a lot; the search in the pruned
        # digraph must still return the true shortest length, measured by an
        # oracle that sees the whole graph
        from sapmatch import oracle_shortest_aug_path

        for inst in instance_corpus(20, seed=72, max_clients=40, max_servers=8,
                                    max_degree=2):
            engine = FastSapEngine(inst, debug=True)
            neighbors = [inst.neighbors(c) for c in range(inst.client_count)]
            caps = [1] * inst.server_count
            for c in range(inst.client_count):
                snapshot = list(engine.state.server_of_client) + [None]
                rec = engine.step(c)
                assert rec.path_edges == oracle_shortest_aug_path(
                    neighbors, snapshot, caps, c
                )


class TestBruteForceBranch:
    def test_long_chain_taken_by_brute_force(self):
        inst = gen_star_chain(5)
        engine = FastSapEngine(inst, depth_limit=3, debug=True)
        state, log = engine.run()
        probes = star_chain_probes(5)
        lengths = [log.records[p].path_edges for p in probes]
        assert lengths == [1, 3, 5, 7, 9]
        # probes needing more than depth_limit edges + 1 (the sink hop) fall back
        assert log.brute_paths == sum(1 for L in lengths if L + 1 > 3)
        assert log.brute_failures == 0

    def test_brute_successes_within_long_path_budget(self):
        inst = gen_star_chain(8)
        n = inst.client_count
        for h in (3, 5, 9):
            _, log = run_fast_sap(inst, depth_limit=h)
            assert log.brute_paths <= 4 * n * math.log(n) / h


class TestDigraphIntegrity:
    def test_rebuild_and_compare_after_each_arrival(self):
        for inst in instance_corpus(10, seed=73, max_clients=20, max_servers=8):
            engine = FastSapEngine(inst, debug=True)
            for c in range(inst.client_count):
                engine.step(c)
                assert current_arcs(engine) == rebuild_arcs(engine)

    def test_debug_validation_runs_star_chain(self):
        # exercises tree paths, brute paths, and every reversal under full checks
        run_fast_sap(gen_star_chain(6), depth_limit=4, debug=True)


class TestEngineEquivalence:
    def test_per_arrival_outcome_matches_naive(self, medium_corpus):
        # Ties may be broken differently, so the matchings (and later path
        # lengths) can diverge; what must agree per arrival is whether the
        # client is matched at all, i.e. the matching size.
        for inst in medium_corpus[:15]:
            _, log_naive = run_sap(inst)
            _, log_fast = run_fast_sap(inst)
            assert [r.matched for r in log_naive.records] == [
                r.matched for r in log_fast.records
            ]

    def test_final_sizes_match_on_star_chains(self):
        for depth in range(1, 8):
            inst = gen_star_chain(depth)
            _, log_naive = run_sap(inst)
            for h in (1, 2, 5, None):
                _, log_fast = run_fast_sap(inst, depth_limit=h)
                assert log_fast.matched_count() == log_naive.matched_count()

    def test_arrival_order_enforced(self):
        engine = FastSapEngine(gen_random(4, 4, 2, seed=1))
        engine.step(0)
        with pytest.raises(ValueError):
            engine.step(2)
