'''
Shared constructions for the test-suite: plane embeddings, vortices, patches and a family of
accepted structure certificates together with single-field mutations that must be rejected.
'''
from __future__ import annotations

import copy

import networkx as nx

from strukt.core import Graph, Reason
from strukt.embedding import Embedding, DiskGraph, parse_surface
from strukt.generators import clique, cycle, grid, double_wheel
from strukt.cliquesum import CliqueSumTree, TreeEdge, compose
from strukt.certcheck import (Vortex, Outgrowth, BasicWitness, Pasting, PatchTree, PieceWitness,
	StructureCertificate, CertificateParams, BOUNDED_DEGREE, NONEMBEDDABLE_SURFACE, FEW_VORTEX_FACES)


###################################
# Embeddings
###################################

def plane_embedding(g):
	ok, pe = nx.check_planarity(g.to_networkx())
	assert ok, "graph is not planar"
	return Embedding(g, {v: tuple(pe.neighbors_cw_order(v)) if g.degree(v) else () for v in g.vertices})


def face_with(e, vertices):
	'''
	Vertex sequence of the unique face whose vertex set is exactly vertices
	'''
	matches = [f for f in e.faces() if set(f.vertices) == set(vertices)]
	assert len(matches) == 1, f"{len(matches)} faces on {sorted(vertices)}"
	return tuple(matches[0].vertices)


def grid_outer(r, c):
	return {i * c + j for i in range(r) for j in range(c) if i in (0, r - 1) or j in (0, c - 1)}


def grid_disk(r, c, boundary=None):
	g = grid(r, c)
	e = plane_embedding(g)
	outer = face_with(e, grid_outer(r, c))
	chosen = set(outer) if boundary is None else set(boundary)
	return DiskGraph(e, outer, [v for v in outer if v in chosen])


###################################
# Vortices and patches
###################################

def star_vortex(center, boundary, face):
	'''
	A new vertex joined to every boundary vertex; bag j is {v_j, center}
	'''
	g = Graph(list(boundary) + [center], [(center, b) for b in boundary])
	return Vortex(g, boundary, [{b, center} for b in boundary], face)


def walk_order(walk, chosen, first=None):
	boundary = [v for v in walk if v in chosen]
	if first is not None:
		k = boundary.index(first)
		boundary = boundary[k:] + boundary[:k]
	return boundary


def wheel_patch(walk, hub, x, y):
	'''
	Disk bounded by the 4-cycle walk: a hub joined to the cycle plus two degree-3 vertices
	x (in the triangle hub, walk[0], walk[1]) and y (in hub, walk[2], walk[3]); the hub has degree 6.
	'''
	a, b, c, d = walk
	edges = [(a, b), (b, c), (c, d), (d, a)]
	edges += [(hub, v) for v in walk]
	edges += [(x, hub), (x, a), (x, b), (y, hub), (y, c), (y, d)]
	g = Graph(list(walk) + [hub, x, y], edges)
	e = plane_embedding(g)
	outer = face_with(e, walk)
	return PatchTree(BasicWitness(DiskGraph(e, outer, outer), S=[hub]))


###################################
# Accepted certificates
###################################

def _single_piece(piece, H, witness, params):
	tree = CliqueSumTree([piece])
	return StructureCertificate(compose(tree), H, tree, [witness], params)


def _with_apex(piece, apex_count, attach):
	apex = []
	for _ in range(apex_count):
		v = max(piece.vertices) + 1
		piece = piece.add_edges([(v, w) for w in attach], vertices=[v])
		apex.append(v)
	return piece, apex


def bounded_degree_certificate(pieces, tree_edges, D, a=0, apex=None):
	tree = CliqueSumTree(pieces, tree_edges)
	apex = apex or [[] for _ in pieces]
	params = CertificateParams(n=0, D=D, m=0, k=0, p=0, a=a)
	witnesses = [PieceWitness(A, BOUNDED_DEGREE) for A in apex]
	return StructureCertificate(compose(tree), clique(5), tree, witnesses, params)


def wheel_graph(n):
	return Graph(range(n + 1), [(i, (i + 1) % n) for i in range(n)] + [(i, n) for i in range(n)])


def case1_certificates():
	result = []
	result.append(bounded_degree_certificate([clique(4)], [], D=3))
	result.append(bounded_degree_certificate([cycle(6)], [], D=2))
	chain = [TreeEdge(0, 1, {0: 0, 1: 1}), TreeEdge(1, 2, {0: 2, 1: 3})]
	result.append(bounded_degree_certificate([cycle(5), cycle(5), cycle(5)], chain, D=2))
	result.append(bounded_degree_certificate([grid(3, 3), clique(4)], [TreeEdge(0, 1, {0: 0, 1: 1}, deleted=[(0, 1)])], D=4))
	result.append(bounded_degree_certificate([clique(4), clique(4)], [TreeEdge(0, 1, {0: 0, 1: 1, 2: 2})], D=3))
	result.append(bounded_degree_certificate([wheel_graph(5)], [], D=3, a=1, apex=[[5]]))
	star = [TreeEdge(0, i + 1, {0: u, 1: v}) for i, (u, v) in enumerate([(0, 1), (1, 2), (2, 3)])]
	result.append(bounded_degree_certificate([clique(4), cycle(4), cycle(4), cycle(4)], star, D=3))
	return result


def grid_outgrowth(r, c, outer_boundary, inner_faces=(), first_inner=None):
	'''
	Base grid(r, c); one star vortex on the outer face attached to outer_boundary and one on each
	listed inner square. Vortex centers are numbered from r * c.
	'''
	base = plane_embedding(grid(r, c))
	next_id = r * c
	walk = face_with(base, grid_outer(r, c))
	vortices = [star_vortex(next_id, walk_order(walk, outer_boundary), walk)]
	next_id += 1
	for square in inner_faces:
		walk = face_with(base, square)
		first = first_inner if first_inner in square else None
		vortices.append(star_vortex(next_id, walk_order(walk, square, first), walk))
		next_id += 1
	return Outgrowth(base, vortices)


def nonembeddable_certificate(H, r, c, outer_boundary, inner_faces=(), apex=0):
	o = grid_outgrowth(r, c, outer_boundary, inner_faces)
	piece, A = _with_apex(o.graph(), apex, sorted(outer_boundary))
	k = len(o.vortices)
	params = CertificateParams(n=4, D=4, m=1, k=k, p=1, a=apex)
	witness = PieceWitness(A, NONEMBEDDABLE_SURFACE, o, parse_surface(f"sphere/b{k}"))
	return _single_piece(piece, H, witness, params)


def case2_certificates():
	result = []
	for H in (clique(5), nx_k33()):
		result.append(nonembeddable_certificate(H, 3, 3, {0, 1, 2, 5}))
		result.append(nonembeddable_certificate(H, 3, 3, {0, 1, 2, 5}, inner_faces=[{3, 4, 6, 7}]))
		result.append(nonembeddable_certificate(H, 3, 4, {0, 1, 2, 3, 7}))
		result.append(nonembeddable_certificate(H, 3, 3, {0, 1, 2, 5}, apex=1))
	return result


def nx_k33():
	return Graph.from_networkx(nx.complete_bipartite_graph(3, 3))


HIGH_OUTER = {0, 1, 2, 3, 7, 11}
LOW_INNER = {5, 6, 9, 10}
PATCH_SQUARES = ({0, 1, 4, 5}, {2, 3, 6, 7})


def few_vortex_outgrowth(second):
	'''
	grid(3, 4) with a degree-6 vortex center on the outer face (the only vertex of degree > 5) and
	optionally a degree-4 vortex center on the inner square {5, 6, 9, 10}, listed from vertex 5.
	'''
	return grid_outgrowth(3, 4, HIGH_OUTER, [LOW_INNER] if second else [], first_inner=5)


def few_vortex_certificate(second=False, patches=0, apex=0):
	o = few_vortex_outgrowth(second)
	next_id = max(o.graph().vertices) + 1
	pastings = []
	piece = o.graph()
	for square in PATCH_SQUARES[:patches]:
		walk = face_with(o.base, square)
		patch = wheel_patch(walk, next_id, next_id + 1, next_id + 2)
		next_id += 3
		pastings.append(Pasting(walk, patch))
		piece = piece.add_edges(patch.graph().edges, vertices=patch.graph().vertices)
	piece, A = _with_apex(piece, apex, sorted(HIGH_OUTER))
	params = CertificateParams(n=4, D=5, m=1, k=2, p=2, a=apex)
	witness = PieceWitness(A, FEW_VORTEX_FACES, o, parse_surface(f"sphere/b{len(o.vortices)}"), pastings)
	return _single_piece(piece, double_wheel(4), witness, params)


def mixed_certificate():
	'''
	A bounded-degree K4 glued along an edge to a few-vortex-faces piece
	'''
	c = few_vortex_certificate(second=True, patches=1)
	tree = CliqueSumTree([clique(4), c.tree.pieces[0]], [TreeEdge(0, 1, {0: 0, 1: 1})])
	pieces = [PieceWitness([], BOUNDED_DEGREE), c.pieces[0]]
	return StructureCertificate(compose(tree), c.H, tree, pieces, c.params)


def case3_certificates():
	return [
		few_vortex_certificate(),
		few_vortex_certificate(second=True),
		few_vortex_certificate(second=True, patches=1),
		few_vortex_certificate(second=True, patches=2),
		few_vortex_certificate(patches=2),
		few_vortex_certificate(second=True, patches=2, apex=1),
		mixed_certificate(),
	]


def accepted_certificates():
	return case1_certificates() + case2_certificates() + case3_certificates()


###################################
# Mutations
###################################

def _recompose(c):
	c.host = compose(c.tree)
	return c


def _outgrowth_piece(c):
	for i, w in enumerate(c.pieces):
		if w.outgrowth is not None:
			return i, w
	return None, None


def mutate_drop_bag_vertex(c):
	_, w = _outgrowth_piece(c)
	v = w.outgrowth.vortices[0]
	bags = list(v.decomposition.bags)
	bags[0] = bags[0] - {v.boundary[0]}
	w.outgrowth.vortices[0] = Vortex(v.graph, v.boundary, bags, v.face)
	return c


def mutate_swap_attachment_order(c):
	_, w = _outgrowth_piece(c)
	v = w.outgrowth.vortices[0]
	boundary = list(v.boundary)
	bags = list(v.decomposition.bags)
	boundary[1], boundary[2] = boundary[2], boundary[1]
	bags[1], bags[2] = bags[2], bags[1]
	w.outgrowth.vortices[0] = Vortex(v.graph, boundary, bags, v.face)
	return c


def mutate_widen_bag(c):
	'''
	Adds boundary vertices to every bag until the width exceeds p; the decomposition stays valid
	'''
	_, w = _outgrowth_piece(c)
	v = w.outgrowth.vortices[0]
	bags = [set(b) for b in v.decomposition.bags]
	for x in v.boundary:
		if max(len(b) for b in bags) - 1 > c.params.p:
			break
		for b in bags:
			b.add(x)
	w.outgrowth.vortices[0] = Vortex(v.graph, v.boundary, bags, v.face)
	return c


def mutate_share_vortex_vertex(c):
	_, w = _outgrowth_piece(c)
	first, second = w.outgrowth.vortices[0], w.outgrowth.vortices[1]
	c1 = next(x for x in first.graph.vertices if x not in first.boundary)
	c2 = next(x for x in second.graph.vertices if x not in second.boundary)
	mapping = {x: x for x in second.graph.vertices}
	mapping[c2] = c1
	bags = [{mapping[x] for x in b} for b in second.decomposition.bags]
	w.outgrowth.vortices[1] = Vortex(second.graph.relabel(mapping), second.boundary, bags, second.face)
	return c


def mutate_claim_embeddable_surface(c):
	_, w = _outgrowth_piece(c)
	w.surface = parse_surface(f"torus/b{len(w.outgrowth.vortices)}")
	return c


def mutate_move_high_vertex_out(c):
	'''
	Moves the center of the first vortex, with its edges, into the base graph
	'''
	_, w = _outgrowth_piece(c)
	o = w.outgrowth
	v = o.vortices[0]
	center = next(x for x in v.graph.vertices if x not in v.boundary)
	base = o.base.graph.add_edges(v.graph.edges, vertices=[center])
	o.base = plane_embedding(base)
	o.vortices[0] = Vortex(Graph(v.boundary, []), v.boundary, [{b} for b in v.boundary], v.face)
	return c


def mutate_raise_second_vortex(c):
	'''
	Adds the diagonal from the first boundary vertex of the second vortex, pushing that vertex above D
	'''
	i, w = _outgrowth_piece(c)
	v = w.outgrowth.vortices[1]
	b = v.boundary
	bags = [set(x) for x in v.decomposition.bags]
	bags[1].add(b[0])
	bags[2].add(b[0])
	w.outgrowth.vortices[1] = Vortex(v.graph.add_edges([(b[0], b[2])]), b, bags, v.face)
	c.tree.pieces[i] = c.tree.pieces[i].add_edges([(b[0], b[2])])
	return _recompose(c)


def mutate_merge_patch_faces(c):
	_, w = _outgrowth_piece(c)
	w.patches[1] = Pasting(w.patches[0].face, w.patches[1].patch)
	return c


def mutate_inflate_degree(c):
	'''
	Attaches pendant vertices to a vertex of maximum degree in the first piece until it exceeds D
	'''
	g = c.tree.pieces[0]
	rest = g.remove_vertices(c.pieces[0].apex)
	v = max(rest.vertices, key=rest.degree)
	start = max(g.vertices) + 1
	new = list(range(start, start + c.params.D + 1 - rest.degree(v)))
	c.tree.pieces[0] = g.add_edges([(v, x) for x in new], vertices=new)
	return _recompose(c)


def mutate_grow_apex(c):
	w = c.pieces[0]
	g = c.tree.pieces[0]
	extra = [v for v in g.vertices if v not in w.apex][:c.params.a + 1 - len(w.apex)]
	w.apex = w.apex | frozenset(extra)
	return c


def mutate_extra_host_edge(c):
	'''
	Hangs a fresh pendant vertex off the smallest host vertex
	'''
	h = c.host
	fresh = max(h.vertices) + 1
	c.host = h.add_edges([(min(h.vertices), fresh)], vertices=[fresh])
	return c


MUTATIONS = {
	"drop-bag-vertex": (mutate_drop_bag_vertex, Reason.BOUNDARY_BAG_MEMBERSHIP),
	"swap-attachment-order": (mutate_swap_attachment_order, Reason.ATTACHMENT_ORDER),
	"widen-bag": (mutate_widen_bag, Reason.WIDTH),
	"share-vortex-vertex": (mutate_share_vortex_vertex, Reason.VORTEX_DISJOINTNESS),
	"claim-embeddable-surface": (mutate_claim_embeddable_surface, Reason.H_EMBEDS),
	"move-high-vertex-out": (mutate_move_high_vertex_out, Reason.HIGH_DEGREE_OUTSIDE_VORTEX),
	"raise-second-vortex": (mutate_raise_second_vortex, Reason.TOO_MANY_HIGH_DEGREE_VORTICES),
	"merge-patch-faces": (mutate_merge_patch_faces, Reason.DISTINCT_FACES),
	"inflate-degree": (mutate_inflate_degree, Reason.MAX_DEGREE),
	"grow-apex": (mutate_grow_apex, Reason.APEX_BUDGET),
	"extra-host-edge": (mutate_extra_host_edge, Reason.HOST_COMPOSITION),
}


def applicable_mutations(c):
	'''
	Names of the mutations that make sense for certificate c
	'''
	names = ["grow-apex", "extra-host-edge"]
	_, w = _outgrowth_piece(c)
	if w is None:
		return names + ["inflate-degree"]
	names += ["drop-bag-vertex", "swap-attachment-order", "widen-bag"]
	vortices = w.outgrowth.vortices
	if len(vortices) >= 2:
		names.append("share-vortex-vertex")
	if w.case == NONEMBEDDABLE_SURFACE:
		names.append("claim-embeddable-surface")
	if w.case == FEW_VORTEX_FACES:
		names.append("move-high-vertex-out")
		if len(vortices) >= 2:
			names.append("raise-second-vortex")
		if len(w.patches) >= 2:
			names.append("merge-patch-faces")
	return names


def mutated(c, name):
	func, reason = MUTATIONS[name]
	return func(copy.deepcopy(c)), reason
