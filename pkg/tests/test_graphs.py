from itertools import combinations, permutations, product
from math import factorial

import networkx as nx
import pytest
from networkx.algorithms.isomorphism import DiGraphMatcher, GraphMatcher
from pydantic import ValidationError

from helpers import random_perm
from rackbench.errors import DegreeMismatchError, GroupTooLargeError, OrderOutOfRangeError
from rackbench.utils.cayley import cayley_digraph
from rackbench.utils.graphs import (
    Digraph,
    Graph,
    automorphism_group,
    complement,
    complete_digraph,
    complete_graph,
    cycle_graph,
    edgeless_graph,
    is_automorphism,
    path_graph,
    star_graph,
    underlying_graph,
)
from rackbench.utils.perm import Perm, compose, inverse


def brute_force_automorphisms(g):
    return {
        Perm(images=p) for p in permutations(range(g.order))
        if is_automorphism(g, Perm(images=p))
    }


def networkx_automorphism_count(g):
    nxg = g.to_networkx()
    matcher = DiGraphMatcher(nxg, nxg) if g.directed else GraphMatcher(nxg, nxg)
    return sum(1 for _ in matcher.isomorphisms_iter())


def test_graph_normalizes_and_validates():
    g = Graph(order=3, edges=frozenset({(2, 0), (0, 2), (1, 2)}))
    assert g.edges == frozenset({(0, 2), (1, 2)})
    assert g.has_edge(2, 0)
    with pytest.raises(ValidationError):
        Graph(order=2, edges=frozenset({(1, 1)}))
    with pytest.raises(ValidationError):
        Graph(order=2, edges=frozenset({(0, 2)}))


def test_digraph_allows_loops():
    d = Digraph(order=2, edges=frozenset({(0, 0), (0, 1)}))
    assert d.has_edge(0, 0)
    assert not d.has_edge(1, 0)
    with pytest.raises(ValidationError):
        Digraph(order=2, edges=frozenset({(0, 5)}))


def test_families():
    assert len(complete_graph(3).edges) == 3
    assert len(star_graph(2).edges) == 2
    assert star_graph(2).order == 3
    assert all(0 in e for e in star_graph(4).edges)
    assert len(complete_digraph(3, with_loops=True).edges) == 9
    assert len(complete_digraph(3).edges) == 6
    assert path_graph(4).edges == frozenset({(0, 1), (1, 2), (2, 3)})
    assert cycle_graph(4).edges == frozenset({(0, 1), (1, 2), (2, 3), (0, 3)})
    assert edgeless_graph(5).edges == frozenset()
    assert star_graph(0).order == 1
    assert complete_graph(0).order == 0


@pytest.mark.parametrize("builder,n", [
    (cycle_graph, 2),
    (path_graph, 1),
    (star_graph, -1),
    (complete_graph, -1),
])
def test_family_minimums(builder, n):
    with pytest.raises(OrderOutOfRangeError):
        builder(n)


def test_underlying_graph():
    three_cycle = Digraph(order=3, edges=frozenset({(0, 1), (1, 2), (2, 0)}))
    assert underlying_graph(three_cycle) == cycle_graph(3)
    assert underlying_graph(complete_digraph(3, with_loops=True)) == complete_graph(3)
    assert underlying_graph(Digraph(order=2, edges=frozenset({(1, 1)}))) == edgeless_graph(2)


def test_is_automorphism_basic():
    assert is_automorphism(cycle_graph(3), Perm.identity(3))
    assert is_automorphism(cycle_graph(3), Perm(images=(1, 2, 0)))
    assert not is_automorphism(path_graph(3), Perm(images=(1, 0, 2)))
    with pytest.raises(DegreeMismatchError):
        is_automorphism(cycle_graph(3), Perm.identity(4))


def test_is_automorphism_on_full_cayley_digraph(ex_not):
    d = cayley_digraph(ex_not, range(3))
    assert is_automorphism(d, Perm(images=(1, 0, 2)))
    assert not is_automorphism(d, Perm(images=(0, 2, 1)))


@pytest.mark.parametrize("n", range(1, 8))
def test_family_automorphism_orders(n):
    assert automorphism_group(complete_graph(n)).order() == factorial(n)
    assert automorphism_group(star_graph(n - 1)).order() == factorial(n - 1) * (2 if n == 2 else 1)
    if n >= 2:
        assert automorphism_group(path_graph(n)).order() == 2
    if n >= 3:
        assert automorphism_group(cycle_graph(n)).order() == 2 * n


def test_automorphism_examples(ex_5quandle):
    assert automorphism_group(complete_graph(4)).order() == 24
    assert automorphism_group(path_graph(5)).order() == 2
    assert automorphism_group(cycle_graph(5)).order() == 10
    partial = cayley_digraph(ex_5quandle, [0])
    assert automorphism_group(partial).order() == 6
    assert automorphism_group(underlying_graph(partial)).order() == 12


def test_automorphism_group_of_empty_graph():
    group = automorphism_group(Graph(order=0))
    assert group.order() == 1
    assert group.elements()[0].degree == 0


def test_automorphism_group_cap():
    with pytest.raises(GroupTooLargeError):
        automorphism_group(edgeless_graph(5), cap=50)


@pytest.mark.parametrize("n", range(1, 6))
def test_automorphisms_match_brute_force_on_all_graphs(n):
    pairs = list(combinations(range(n), 2))
    for mask in product([False, True], repeat=len(pairs)):
        g = Graph(order=n, edges=frozenset(p for p, keep in zip(pairs, mask) if keep))
        assert automorphism_group(g).element_set() == brute_force_automorphisms(g)


def test_automorphisms_match_brute_force_on_random_digraphs(rng):
    for _ in range(200):
        n = rng.randint(1, 5)
        edges = frozenset(
            (u, v) for u in range(n) for v in range(n) if rng.random() < 0.35
        )
        d = Digraph(order=n, edges=edges)
        assert automorphism_group(d).element_set() == brute_force_automorphisms(d)


def test_automorphism_counts_match_networkx(rng):
    graphs = [complete_graph(5), cycle_graph(6), path_graph(6), star_graph(4), edgeless_graph(4)]
    for _ in range(20):
        graphs.append(Graph.from_networkx(nx.gnp_random_graph(6, 0.4, seed=rng.randint(0, 10**6))))
    for g in graphs:
        assert automorphism_group(g).order() == networkx_automorphism_count(g)


def test_automorphism_group_is_closed():
    for g in (cycle_graph(6), star_graph(3), complete_digraph(3, with_loops=True)):
        elements = automorphism_group(g).element_set()
        assert all(is_automorphism(g, p) for p in elements)
        assert all(compose(p, q) in elements for p in elements for q in elements)
        assert all(inverse(p) in elements for p in elements)


def test_complement_has_same_automorphisms(rng):
    for _ in range(60):
        n = rng.randint(1, 6)
        g = Graph(order=n, edges=frozenset(
            (u, v) for u, v in combinations(range(n), 2) if rng.random() < 0.5
        ))
        h = complement(g)
        assert complement(h) == g
        assert automorphism_group(g).element_set() == automorphism_group(h).element_set()


def test_digraph_complement_includes_loops():
    d = Digraph(order=2, edges=frozenset({(0, 1)}))
    assert complement(d).edges == frozenset({(0, 0), (1, 1), (1, 0)})


def test_random_relabeling_preserves_automorphism_order(rng):
    g = cycle_graph(7)
    p = random_perm(rng, 7)
    relabeled = Graph(order=7, edges=frozenset((p(u), p(v)) for u, v in g.edges))
    assert automorphism_group(relabeled).order() == 14


def test_networkx_round_trip():
    g = cycle_graph(5)
    assert Graph.from_networkx(g.to_networkx()) == g
    assert g.adjacency().sum() == 10
