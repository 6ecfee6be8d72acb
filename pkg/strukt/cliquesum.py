import itertools
import json
import logging
import os

from .core import (Graph, Ordering, parse_graph, serialize_graph, high_degree_vertices,
	ContractViolationException, GraphParseException)

_logger = logging.getLogger("strukt")

TREE_FORMAT = 1

def _edge_key(u, v):
	return (u, v) if u < v else (v, u)

def _is_clique(g, vertices):
	return all(g.has_edge(u, v) for u, v in itertools.combinations(vertices, 2))

###################################
# Clique-sum of two graphs
###################################

def _check_overlap(g_parent, g_child, overlap, deleted, where):
	image = list(overlap.values())
	if len(set(image)) != len(image):
		raise ContractViolationException(f"{where}: overlap map is not injective", "overlap-injective")
	for c, p in overlap.items():
		if c not in g_child:
			raise ContractViolationException(f"{where}: overlap domain vertex {c} is not in the child", "overlap-domain")
		if p not in g_parent:
			raise ContractViolationException(f"{where}: overlap image vertex {p} is not in the parent", "overlap-image")
	if not _is_clique(g_child, overlap.keys()):
		raise ContractViolationException(f"{where}: overlap domain is not a clique of the child", "overlap-clique")
	if not _is_clique(g_parent, image):
		raise ContractViolationException(f"{where}: overlap image is not a clique of the parent", "overlap-clique")
	image_set = set(image)
	for u, v in deleted:
		if u not in image_set or v not in image_set or u == v:
			raise ContractViolationException(f"{where}: deleted edge ({u}, {v}) is not an edge of the identified clique", "deleted-edges")

def clique_sum(g1, g2, overlap, deleted=()):
	'''
	Identifies each vertex c of g2 in the overlap with overlap[c] of g1 and removes the deleted edges
	(named by g1 identifiers). g1 keeps its identifiers; the remaining vertices of g2 are numbered
	from max(V(g1)) + 1 in ascending order.
	'''
	overlap = dict(overlap)
	deleted = [_edge_key(u, v) for u, v in deleted]
	_check_overlap(g1, g2, overlap, deleted, "clique_sum")
	start = max(g1.vertices, default=-1) + 1
	fresh = [v for v in g2.vertices if v not in overlap]
	mapping = dict(overlap)
	mapping.update({v:start + i for i, v in enumerate(fresh)})
	vertices = list(g1.vertices) + [mapping[v] for v in fresh]
	edges = set(g1.edges) | {_edge_key(mapping[u], mapping[v]) for u, v in g2.edges}
	return Graph(vertices, edges - set(deleted))

###################################
# Clique-sum trees
###################################

class TreeEdge():
	'''
	overlap maps child vertices to parent vertices; deleted names edges by parent vertices.
	'''
	def __init__(self, parent, child, overlap, deleted=()):
		self.parent = parent
		self.child = child
		self.overlap = dict(overlap)
		self.deleted = frozenset(_edge_key(u, v) for u, v in deleted)

	def __repr__(self):
		return f"TreeEdge({self.parent} -> {self.child}, overlap={self.overlap}, deleted={sorted(self.deleted)})"

class CliqueSumTree():
	def __init__(self, pieces, tree_edges=()):
		self.pieces = list(pieces)
		self.tree_edges = list(tree_edges)

	def validate(self):
		'''
		Returns (root, pieces in breadth-first order, tree edge of each non-root piece)
		'''
		n = len(self.pieces)
		if n == 0:
			raise ContractViolationException("a clique-sum tree needs at least one piece", "tree-shape")
		if len(self.tree_edges) != n - 1:
			raise ContractViolationException(f"{n} pieces need {n - 1} tree edges, got {len(self.tree_edges)}", "tree-shape")
		incoming = {}
		children = {i:[] for i in range(n)}
		for k, te in enumerate(self.tree_edges):
			if not (0 <= te.parent < n and 0 <= te.child < n) or te.parent == te.child:
				raise ContractViolationException(f"tree edge {k} names an invalid piece", "tree-shape")
			if te.child in incoming:
				raise ContractViolationException(f"piece {te.child} has two parents", "tree-shape")
			incoming[te.child] = te
			children[te.parent].append(te.child)
		roots = [i for i in range(n) if i not in incoming]
		if len(roots) != 1:
			raise ContractViolationException("tree edges do not form a rooted tree", "tree-shape")
		order = [roots[0]]
		for i in order:
			order.extend(sorted(children[i]))
		if len(order) != n:
			raise ContractViolationException("tree edges do not form a rooted tree", "tree-shape")
		for k, te in enumerate(self.tree_edges):
			_check_overlap(self.pieces[te.parent], self.pieces[te.child], te.overlap, te.deleted, f"tree edge {k} ({te.parent} -> {te.child})")
		return roots[0], order, incoming

	def composed_ids(self):
		'''
		For each piece, the map from its vertices to composed identifiers: a vertex is named after the
		topmost piece holding it, as offset(piece) + local id, offsets accumulating max local id + 1.
		'''
		_, order, incoming = self.validate()
		offsets = []
		total = 0
		for g in self.pieces:
			offsets.append(total)
			total += max(g.vertices, default=-1) + 1
		ids = {}
		for i in order:
			te = incoming.get(i)
			local = {}
			for v in self.pieces[i].vertices:
				if te is not None and v in te.overlap:
					local[v] = ids[te.parent][te.overlap[v]]
				else:
					local[v] = offsets[i] + v
			ids[i] = local
		return [ids[i] for i in range(len(self.pieces))]

def compose(t, keep_deleted=False):
	'''
	The clique-sum of the tree's pieces; with keep_deleted the seam edges stay (the undeleted composition).
	'''
	ids = t.composed_ids()
	vertices = set()
	edges = set()
	for g, local in zip(t.pieces, ids):
		vertices.update(local.values())
		edges.update(_edge_key(local[u], local[v]) for u, v in g.edges)
	if not keep_deleted:
		for te in t.tree_edges:
			local = ids[te.parent]
			edges -= {_edge_key(local[u], local[v]) for u, v in te.deleted}
	return Graph(vertices, edges)

###################################
# Low-admissibility orderings
###################################

def base_ordering(g, X, D):
	'''
	X first, then the remaining vertices of degree > D, then the rest, each block by identifier
	'''
	X = set(X)
	high = sorted(v for v in high_degree_vertices(g, D) if v not in X)
	high_set = set(high)
	rest = sorted(v for v in g.vertices if v not in X and v not in high_set)
	return sorted(X) + high + rest

def converse_ordering(t, D, a):
	'''
	An ordering of compose(t) with infinity-admissibility at most a + D, provided every piece has at
	most a vertices of degree greater than D. Each piece is ordered clique first, then its
	high-degree vertices, then the rest; children follow their parents without their clique.
	'''
	for i, g in enumerate(t.pieces):
		high = high_degree_vertices(g, D)
		if len(high) > a:
			raise ContractViolationException(f"piece {i} has {len(high)} vertices of degree > {D}, more than a = {a}", "degree-profile")
	_, order, incoming = t.validate()
	ids = t.composed_ids()
	sequence = []
	placed = set()
	for i in order:
		te = incoming.get(i)
		X = te.overlap.keys() if te is not None else ()
		for v in base_ordering(t.pieces[i], X, D):
			cv = ids[i][v]
			if cv not in placed:
				placed.add(cv)
				sequence.append(cv)
	_logger.debug("converse_ordering: %d vertices over %d pieces", len(sequence), len(t.pieces))
	return Ordering(sequence)

###################################
# JSON interchange
###################################

def _reject_unknown(obj, allowed, where):
	if not isinstance(obj, dict):
		raise GraphParseException(f"{where}: expected a JSON object")
	unknown = set(obj) - set(allowed)
	if unknown:
		raise GraphParseException(f"{where}: unknown fields {sorted(unknown)}")

def _load_piece(obj, base_dir, where):
	_reject_unknown(obj, ("graph", "file"), where)
	if ("graph" in obj) == ("file" in obj):
		raise GraphParseException(f"{where}: give exactly one of 'graph' and 'file'")
	if "graph" in obj:
		return parse_graph(obj["graph"])
	path = obj["file"]
	if base_dir is not None and not os.path.isabs(path):
		path = os.path.join(base_dir, path)
	with open(path) as f:
		return parse_graph(f.read())

def _pairs(value, where):
	try:
		return [(int(a), int(b)) for a, b in value]
	except (TypeError, ValueError):
		raise GraphParseException(f"{where}: expected a list of integer pairs")

def tree_from_json(obj, base_dir=None, where="tree"):
	_reject_unknown(obj, ("format", "pieces", "tree_edges"), where)
	if obj.get("format") != TREE_FORMAT:
		raise GraphParseException(f"{where}: unsupported format {obj.get('format')!r}")
	pieces = [_load_piece(p, base_dir, f"{where}.pieces[{i}]") for i, p in enumerate(obj.get("pieces", []))]
	tree_edges = []
	for k, te in enumerate(obj.get("tree_edges", [])):
		at = f"{where}.tree_edges[{k}]"
		_reject_unknown(te, ("parent", "child", "overlap", "deleted"), at)
		try:
			parent, child = int(te["parent"]), int(te["child"])
		except (KeyError, TypeError, ValueError):
			raise GraphParseException(f"{at}: 'parent' and 'child' must be integers")
		overlap = dict(_pairs(te.get("overlap", []), at))
		tree_edges.append(TreeEdge(parent, child, overlap, _pairs(te.get("deleted", []), at)))
	return CliqueSumTree(pieces, tree_edges)

def tree_to_json(t):
	for i, g in enumerate(t.pieces):
		if g.vertices != tuple(range(len(g))):
			raise ContractViolationException(f"piece {i} must use identifiers 0..{len(g) - 1} to be written", "piece-ids")
	return {
		"format": TREE_FORMAT,
		"pieces": [{"graph": serialize_graph(g)} for g in t.pieces],
		"tree_edges": [{
			"parent": te.parent,
			"child": te.child,
			"overlap": [[c, p] for c, p in sorted(te.overlap.items())],
			"deleted": [list(e) for e in sorted(te.deleted)],
		} for te in t.tree_edges],
	}

def load_tree(text, base_dir=None):
	try:
		obj = json.loads(text)
	except json.JSONDecodeError as e:
		raise GraphParseException(f"invalid JSON: {e.msg}", e.lineno)
	return tree_from_json(obj, base_dir)

def dump_tree(t):
	return json.dumps(tree_to_json(t), indent=1, sort_keys=True)
