from __future__ import annotations

import random

import networkx as nx
import pytest

from strukt.core import Graph, Ordering, ContractViolationException, GraphParseException, serialize_graph, high_degree_vertices
from strukt.generators import clique, cycle, grid, random_graph
from strukt.admissibility import INFINITY, ordering_admissibility, admissibility_exact, is_x_based
from strukt.cliquesum import (TreeEdge, CliqueSumTree, clique_sum, compose, base_ordering, converse_ordering,
	tree_from_json, tree_to_json, load_tree, dump_tree)


###################################
# Clique-sums
###################################

def test_triangles_over_an_edge():
	g = clique_sum(clique(3), clique(3), {0: 0, 1: 1})
	assert len(g) == 4 and len(g.edges) == 5
	seamless = clique_sum(clique(3), clique(3), {0: 0, 1: 1}, deleted=[(0, 1)])
	assert len(seamless.edges) == 4
	assert all(seamless.degree(v) == 2 for v in seamless.vertices)


def test_empty_overlap_is_disjoint_union():
	g = clique_sum(cycle(4), clique(3), {})
	assert len(g) == 7 and len(g.edges) == 7
	assert not g.is_connected()


def test_full_overlap_of_identical_cliques():
	assert clique_sum(clique(4), clique(4), {i: i for i in range(4)}) == clique(4)


def test_child_vertices_are_renumbered_after_the_parent():
	g = clique_sum(cycle(4), clique(3), {2: 0})
	assert g.vertices == (0, 1, 2, 3, 4, 5)
	assert g.has_edge(0, 4) and g.has_edge(0, 5) and g.has_edge(4, 5)


@pytest.mark.parametrize("overlap, deleted, clause", [
	({0: 0, 1: 0}, (), "overlap-injective"),
	({7: 0}, (), "overlap-domain"),
	({0: 9}, (), "overlap-image"),
	({0: 0, 2: 2}, (), "overlap-clique"),
	({0: 0, 1: 1}, [(0, 3)], "deleted-edges"),
])
def test_clique_sum_contract(overlap, deleted, clause):
	with pytest.raises(ContractViolationException) as info:
		clique_sum(cycle(4), cycle(4), overlap, deleted)
	assert info.value.clause == clause


###################################
# Trees
###################################

def _strip():
	return CliqueSumTree([clique(3), clique(3), clique(3)], [TreeEdge(0, 1, {0: 1, 1: 2}), TreeEdge(1, 2, {0: 0, 1: 2})])


def test_compose_single_piece():
	assert compose(CliqueSumTree([grid(2, 3)])) == grid(2, 3)


def test_compose_strip_of_triangles():
	g = compose(_strip())
	assert len(g) == 5 and len(g.edges) == 7
	assert sorted(g.degree(v) for v in g.vertices) == [2, 2, 3, 3, 4]


def test_compose_star_of_cliques():
	k = 4
	tree = CliqueSumTree([clique(3)] * (k + 1), [TreeEdge(0, i, {0: 0}) for i in range(1, k + 1)])
	g = compose(tree)
	assert len(g) == 1 + 2 * (k + 1)
	assert g.degree(0) == 2 * (k + 1)
	assert len(g.edges) == 3 * (k + 1)


def test_composed_ids_use_block_offsets():
	tree = _strip()
	ids = tree.composed_ids()
	assert ids[0] == {0: 0, 1: 1, 2: 2}
	assert ids[1] == {0: 1, 1: 2, 2: 5}
	assert ids[2] == {0: 1, 1: 5, 2: 8}


def test_compose_keep_deleted():
	tree = CliqueSumTree([clique(3), clique(3)], [TreeEdge(0, 1, {0: 0, 1: 1}, deleted=[(0, 1)])])
	assert len(compose(tree).edges) == 4
	assert len(compose(tree, keep_deleted=True).edges) == 5


def test_compose_does_not_depend_on_piece_listing():
	pieces = [clique(4), cycle(5), clique(3)]
	edges = [TreeEdge(0, 1, {0: 0, 1: 1}), TreeEdge(1, 2, {0: 3})]
	listed = CliqueSumTree(pieces, edges)
	permuted = CliqueSumTree([pieces[2], pieces[0], pieces[1]], [TreeEdge(1, 2, {0: 0, 1: 1}), TreeEdge(2, 0, {0: 3})])
	assert nx.is_isomorphic(compose(listed).to_networkx(), compose(permuted).to_networkx())


@pytest.mark.parametrize("pieces, edges", [
	([], []),
	([clique(3), clique(3)], []),
	([clique(3), clique(3)], [TreeEdge(0, 0, {})]),
	([clique(3), clique(3), clique(3)], [TreeEdge(0, 2, {}), TreeEdge(1, 2, {})]),
	([clique(3), clique(3)], [TreeEdge(0, 5, {})]),
])
def test_tree_shape(pieces, edges):
	with pytest.raises(ContractViolationException) as info:
		CliqueSumTree(pieces, edges).validate()
	assert info.value.clause == "tree-shape"


def test_invalid_overlap_names_the_tree_edge():
	tree = CliqueSumTree([cycle(4), cycle(4)], [TreeEdge(0, 1, {0: 0, 2: 2})])
	with pytest.raises(ContractViolationException) as info:
		compose(tree)
	assert info.value.clause == "overlap-clique"
	assert "tree edge 0" in str(info.value)


###################################
# Orderings
###################################

def test_base_ordering():
	g = clique(4).add_edges([(0, 4), (0, 5)], vertices=[4, 5])
	order = base_ordering(g, {2, 3}, 3)
	assert order == [2, 3, 0, 1, 4, 5]
	assert is_x_based(Ordering(order), {2, 3})


def test_converse_ordering_two_k4_on_a_triangle():
	tree = CliqueSumTree([clique(4), clique(4)], [TreeEdge(0, 1, {0: 0, 1: 1, 2: 2})])
	g = compose(tree)
	order = converse_ordering(tree, 3, 0)
	assert sorted(order) == list(g.vertices)
	assert ordering_admissibility(g, order, INFINITY).value <= 3
	assert admissibility_exact(g, INFINITY).value <= 3


def test_converse_ordering_star_of_triangles():
	tree = CliqueSumTree([clique(3)] * 5, [TreeEdge(0, i, {0: 0}) for i in range(1, 5)])
	order = converse_ordering(tree, 2, 1)
	assert ordering_admissibility(compose(tree), order, INFINITY).value <= 3


def test_converse_ordering_checks_degree_profile():
	tree = CliqueSumTree([clique(3), clique(5)], [TreeEdge(0, 1, {0: 0})])
	with pytest.raises(ContractViolationException) as info:
		converse_ordering(tree, 3, 0)
	assert info.value.clause == "degree-profile"
	assert "piece 1" in str(info.value)


def _random_tree(rng, seed):
	count = rng.randint(1, 5)
	pieces = [random_graph(rng.randint(1, 8), rng.choice([0.3, 0.5, 0.8]), seed * 10 + i) for i in range(count)]
	edges = []
	for child in range(1, count):
		parent = rng.randrange(child)
		options = [{}]
		options += [{c: p} for c in pieces[child].vertices for p in pieces[parent].vertices]
		options += [{c1: p1, c2: p2} for c1, c2 in pieces[child].edges for p1, p2 in pieces[parent].edges]
		overlap = rng.choice(options)
		deleted = []
		if len(overlap) == 2 and rng.random() < 0.5:
			deleted = [tuple(overlap.values())]
		edges.append(TreeEdge(parent, child, overlap, deleted))
	return CliqueSumTree(pieces, edges)


def test_converse_ordering_bound_on_random_trees():
	rng = random.Random(31)
	for seed in range(100):
		tree = _random_tree(rng, seed)
		D = rng.randint(1, 4)
		a = max(len(high_degree_vertices(g, D)) for g in tree.pieces)
		order = converse_ordering(tree, D, a)
		value = ordering_admissibility(compose(tree), order, INFINITY).value
		assert value <= a + D
		assert value <= ordering_admissibility(compose(tree, keep_deleted=True), order, INFINITY).value


###################################
# JSON
###################################

def test_tree_json_round_trip():
	tree = CliqueSumTree([clique(3), cycle(4)], [TreeEdge(0, 1, {0: 1, 1: 2}, deleted=[(1, 2)])])
	back = load_tree(dump_tree(tree))
	assert compose(back) == compose(tree)
	assert tree_to_json(back) == tree_to_json(tree)


def test_tree_json_reads_piece_files(tmp_path):
	(tmp_path / "k3.txt").write_text(serialize_graph(clique(3)))
	doc = {"format": 1, "pieces": [{"file": "k3.txt"}, {"graph": serialize_graph(clique(3))}],
		"tree_edges": [{"parent": 0, "child": 1, "overlap": [[0, 0], [1, 1]], "deleted": []}]}
	tree = tree_from_json(doc, str(tmp_path))
	assert len(compose(tree).edges) == 5


@pytest.mark.parametrize("doc", [
	{"format": 2, "pieces": []},
	{"format": 1, "pieces": [], "extra": True},
	{"format": 1, "pieces": [{"graph": "p 1\n", "file": "x"}]},
	{"format": 1, "pieces": [{"graph": "p 1\n"}], "tree_edges": [{"parent": 0, "child": "one"}]},
	{"format": 1, "pieces": [{"graph": "p 2\n"}], "tree_edges": [{"parent": 0, "child": 0, "overlap": [[1]]}]},
])
def test_tree_json_rejects(doc):
	with pytest.raises(GraphParseException):
		tree_from_json(doc)


def test_tree_json_rejects_bad_text():
	with pytest.raises(GraphParseException):
		load_tree("{not json")


def test_tree_json_needs_contiguous_piece_ids():
	tree = CliqueSumTree([Graph([0, 2], [(0, 2)])])
	with pytest.raises(ContractViolationException) as info:
		tree_to_json(tree)
	assert info.value.clause == "piece-ids"
