import itertools
import logging
import math
import re

import networkx as nx

from .core import (Graph, Budget, resolve_budget, DomainException, GraphParseException,
	GraphValidationException, StruktException)
from . import mphelper

_logger = logging.getLogger("strukt")

INFINITY = math.inf

# Degree at which a vertex must be dominated by a chosen face
DEFAULT_THRESHOLD = 4

def _edge_key(u, v):
	return (u, v) if u < v else (v, u)

###################################
# Surfaces
###################################

class Surface():
	'''
	Sigma(c, h, b) in canonical form: euler_genus = c + 2h, with c = 0 when orientable and h = 0 otherwise.
	'''
	def __init__(self, orientable, euler_genus, boundary_components=0):
		if euler_genus < 0 or boundary_components < 0:
			raise DomainException("Euler genus and boundary count must be nonnegative")
		if orientable and euler_genus % 2 != 0:
			raise DomainException(f"An orientable surface has even Euler genus, got {euler_genus}")
		if not orientable and euler_genus == 0:
			raise DomainException("A non-orientable surface has Euler genus at least 1")
		self.orientable = orientable
		self.euler_genus = euler_genus
		self.boundary_components = boundary_components

	@property
	def crosscaps(self):
		return 0 if self.orientable else self.euler_genus

	@property
	def handles(self):
		return self.euler_genus // 2 if self.orientable else 0

	def closed(self):
		return Surface(self.orientable, self.euler_genus, 0)

	def is_sphere(self):
		return self.orientable and self.euler_genus == 0

	@property
	def name(self):
		if self.orientable:
			base = {0:"sphere", 2:"torus"}.get(self.euler_genus, f"o{self.euler_genus // 2}")
		else:
			base = {1:"projective", 2:"klein"}.get(self.euler_genus, f"n{self.euler_genus}")
		if self.boundary_components:
			base += f"/b{self.boundary_components}"
		return base

	def __eq__(self, other):
		return isinstance(other, Surface) and (self.orientable, self.euler_genus, self.boundary_components) == (other.orientable, other.euler_genus, other.boundary_components)

	def __hash__(self):
		return hash((self.orientable, self.euler_genus, self.boundary_components))

	def __repr__(self):
		return f"Surface({self.name})"

SPHERE = Surface(True, 0)

_NAMED_SURFACES = {
	"sphere": (True, 0),
	"torus": (True, 2),
	"projective": (False, 1),
	"klein": (False, 2),
}

def parse_surface(text):
	'''
	sphere, torus, projective, klein, o<h> (h handles) or n<c> (c crosscaps), optionally followed by /b<k>
	'''
	m = re.fullmatch(r"\s*([a-z]+|o\d+|n\d+)(?:/b(\d+))?\s*", text)
	if m is None:
		raise DomainException(f"Unknown surface {text!r}")
	body, boundary = m.group(1), int(m.group(2) or 0)
	if body in _NAMED_SURFACES:
		orientable, eg = _NAMED_SURFACES[body]
	elif body[0] == "o" and body[1:].isdigit():
		orientable, eg = True, 2 * int(body[1:])
	elif body[0] == "n" and body[1:].isdigit():
		orientable, eg = False, int(body[1:])
	else:
		raise DomainException(f"Unknown surface {text!r}")
	return Surface(orientable, eg, boundary)

def _compatible_classes(s):
	'''
	(orientable, max euler genus) classes of cellular embeddings that extend to embeddings in s
	'''
	if s.orientable:
		return [(True, s.euler_genus)]
	classes = [(False, s.euler_genus)]
	if s.euler_genus - 1 >= 0:
		classes.append((True, s.euler_genus - 1))
	return classes

###################################
# Embeddings and faces
###################################

class FaceWalk():
	'''
	A face as a cyclic sequence of sides (tail, head, state). A graph with a single vertex
	and no edges has one face with no sides, holding that vertex.
	'''
	def __init__(self, sides, isolated=None):
		self.sides = tuple(sides)
		self.isolated = isolated

	@property
	def vertices(self):
		if self.sides:
			return tuple(side[0] for side in self.sides)
		return (self.isolated,) if self.isolated is not None else ()

	@property
	def edges(self):
		return tuple(_edge_key(side[0], side[1]) for side in self.sides)

	def is_cycle(self):
		vs = self.vertices
		return len(vs) >= 3 and len(set(vs)) == len(vs)

	def __len__(self):
		return len(self.sides)

	def __repr__(self):
		return f"FaceWalk({list(self.vertices)})"

class Embedding():
	'''
	Rotation system with edge signature. rotation[v] is the cyclic order of the neighbors of v;
	signature maps (u, v) with u < v to +1 or -1 and defaults to +1.
	'''
	def __init__(self, graph, rotation, signature=None):
		self.graph = graph
		self.rotation = {v:tuple(rotation.get(v, ())) for v in graph.vertices}
		for v in graph.vertices:
			rv = self.rotation[v]
			if len(rv) != len(set(rv)) or set(rv) != set(graph.neighbors(v)):
				raise GraphValidationException(f"Rotation at {v} does not list its incident edges exactly once")
		self.signature = {e:1 for e in graph.edges}
		if signature:
			for (u, v), s in signature.items():
				key = _edge_key(u, v)
				if key not in self.signature:
					raise GraphValidationException(f"Signature given for non-edge ({u}, {v})")
				if s not in (1, -1):
					raise GraphValidationException(f"Signature of ({u}, {v}) must be +1 or -1")
				self.signature[key] = s
		self._faces = None

	def sign(self, u, v):
		return self.signature[_edge_key(u, v)]

	def faces(self):
		if self._faces is None:
			self._faces = trace_faces(self)
		return self._faces

	def is_orientable(self):
		'''
		True iff vertex flips can make every signature +1 (spanning-tree normalization)
		'''
		flip = {}
		for root in self.graph.vertices:
			if root in flip:
				continue
			flip[root] = 1
			stack = [root]
			while stack:
				v = stack.pop()
				for w in sorted(self.graph.neighbors(v)):
					if w not in flip:
						flip[w] = flip[v] * self.sign(v, w)
						stack.append(w)
		return all(s * flip[u] * flip[v] == 1 for (u, v), s in self.signature.items())

	def is_closed_2cell(self):
		if len(self.graph.edges) == 0:
			return False
		return all(f.is_cycle() for f in self.faces())

	def __repr__(self):
		return f"Embedding({self.graph!r})"

def _step(rot, index, sign, triple):
	v, w, s = triple
	s2 = s * sign[_edge_key(v, w)]
	around = rot[w]
	i = index[w][v]
	x = around[(i + 1) % len(around)] if s2 > 0 else around[i - 1]
	return (w, x, s2)

def _reverse(sign, triple):
	v, w, s = triple
	return (w, v, -s * sign[_edge_key(v, w)])

def _trace_orbits(rot, sign, signed=True, count_only=False):
	'''
	Orbits of the face-tracing step over sides (tail, head, state), one per face.
	Without signed, every signature is +1 and the state -1 orbits are the reverses of the +1 orbits.
	'''
	index = {v:{x:i for i, x in enumerate(around)} for v, around in rot.items()}
	darts = sorted((v, w) for v, around in rot.items() for w in around)
	visited = set()
	orbits = []
	count = 0
	for s0 in ((1, -1) if signed else (1,)):
		for v, w in darts:
			start = (v, w, s0)
			if start in visited:
				continue
			orbit = []
			cur = start
			while True:
				visited.add(cur)
				visited.add(_reverse(sign, cur))
				if not count_only:
					orbit.append(cur)
				cur = _step(rot, index, sign, cur)
				if cur == start:
					break
			count += 1
			if not count_only:
				orbits.append(orbit)
	return count if count_only else orbits

def trace_faces(e):
	g = e.graph
	if not g.is_connected():
		raise DomainException("Face tracing needs a connected graph; embed components separately")
	if len(g) == 0:
		return []
	if len(g.edges) == 0:
		return [FaceWalk((), g.vertices[0])]
	signed = any(s < 0 for s in e.signature.values())
	return [FaceWalk(o) for o in _trace_orbits(e.rotation, e.signature, signed=signed)]

def euler_genus(e):
	'''
	Returns (eg, orientable) with eg = 2 - |V| + |E| - |F|
	'''
	g = e.graph
	if len(g) == 0:
		return 0, True
	faces = e.faces()
	return 2 - len(g) + len(g.edges) - len(faces), e.is_orientable()

def find_face(faces, vertices, reflect=True):
	'''
	The face whose vertex sequence equals vertices up to rotation (and reflection), or None
	'''
	target = list(vertices)
	for f in faces:
		if cyclic_equal(list(f.vertices), target, reflect):
			return f
	return None

def cyclic_equal(a, b, reflect=True):
	if len(a) != len(b):
		return False
	if len(a) == 0:
		return True
	candidates = [b, b[::-1]] if reflect else [b]
	for c in candidates:
		doubled = c + c
		for i in range(len(c)):
			if doubled[i:i + len(c)] == a:
				return True
	return False

def occurs_in_cyclic_order(sequence, walk, reflect=True):
	'''
	True iff the distinct vertices of sequence all occur on walk, in this cyclic order (or reversed with reflect)
	'''
	sequence = list(sequence)
	if len(sequence) != len(set(sequence)):
		return False
	first = {}
	for i, v in enumerate(walk):
		first.setdefault(v, i)
	if any(v not in first for v in sequence):
		return False
	if len(sequence) <= 2:
		return True
	for seq in ([sequence, sequence[::-1]] if reflect else [sequence]):
		positions = [first[v] for v in seq]
		descents = sum(1 for i in range(len(positions)) if positions[i] > positions[(i + 1) % len(positions)])
		if descents == 1:
			return True
	return False

###################################
# Interchange format
###################################

def serialize_embedding(e):
	lines = []
	for v in e.graph.vertices:
		lines.append(f"r {v}: " + " ".join(str(w) for w in e.rotation[v]))
	for (u, v), s in sorted(e.signature.items()):
		lines.append(f"s {u} {v} {'+' if s > 0 else '-'}")
	return "\n".join(lines) + "\n"

def parse_embedding(text, graph=None):
	'''
	Lines "r <v>: <n1> <n2> ..." (cyclic order) and "s <u> <v> <+|->"; "#" starts a comment line.
	'''
	rotation = {}
	signature = {}
	for lineno, raw in enumerate(text.splitlines(), start=1):
		line = raw.strip()
		if line == "" or line.startswith("#"):
			continue
		m = re.fullmatch(r"r\s+(\d+)\s*:\s*((?:\d+\s*)*)", line)
		if m is not None:
			v = int(m.group(1))
			if v in rotation:
				raise GraphParseException(f"rotation of {v} given twice", lineno)
			rotation[v] = tuple(int(x) for x in m.group(2).split())
			continue
		m = re.fullmatch(r"s\s+(\d+)\s+(\d+)\s+([+-])", line)
		if m is not None:
			signature[(int(m.group(1)), int(m.group(2)))] = 1 if m.group(3) == "+" else -1
			continue
		raise GraphParseException(f"expected an 'r' or 's' line, got {line!r}", lineno)
	if graph is None:
		edges = set()
		for v, around in rotation.items():
			for w in around:
				if w not in rotation or v not in rotation[w]:
					raise GraphValidationException(f"Rotation lists {w} at {v} but not {v} at {w}")
				if v == w:
					raise GraphValidationException(f"Loop at vertex {v}")
				edges.add(_edge_key(v, w))
		graph = Graph(rotation.keys(), edges)
	elif set(rotation) != set(graph.vertices):
		raise GraphValidationException("Embedding vertices differ from the graph's")
	return Embedding(graph, rotation, signature)

###################################
# Enumeration
###################################

class _InsertionSearch():
	'''
	Enumerates cellular embeddings of a connected graph by inserting edges one at a time:
	first a BFS tree from the root (the vertex of maximum degree), then the other edges, each at a
	corner of both ends and, for the non-orientable class, with either sign. Tree edges keep sign +1,
	so the non-orientable class is exactly the systems with some negative sign. A partial system
	with F faces and r edges left ends with at most F + r faces, which bounds the Euler genus.
	'''
	def __init__(self, g, orientable, max_eg, budget):
		self.g = g
		self.orientable = orientable
		self.max_eg = max_eg
		self.budget = budget
		self.root = min(g.vertices, key=lambda v: (-g.degree(v), v))
		self.f_need = 2 - len(g) + len(g.edges) - max_eg
		parent = {self.root:None}
		order = [self.root]
		tree = []
		for v in order:
			for w in sorted(g.neighbors(v)):
				if w not in parent:
					parent[w] = v
					order.append(w)
					tree.append((v, w))
		tree_keys = {_edge_key(u, v) for u, v in tree}
		self.root_edges = [(p, c) for p, c in tree if p == self.root]
		self.tree_rest = [(p, c) for p, c in tree if p != self.root]
		self.nontree = [e for e in g.edges if e not in tree_keys]
		self.root_neighbors = sorted(g.neighbors(self.root))

	@property
	def shard_count(self):
		return math.factorial(max(len(self.root_neighbors) - 1, 0))

	def root_rotation(self, shard):
		if len(self.root_neighbors) == 0:
			return ()
		first, rest = self.root_neighbors[0], self.root_neighbors[1:]
		perm = next(itertools.islice(itertools.permutations(rest), shard, None))
		return (first,) + perm

	def run(self, shard):
		if len(self.g.edges) == 0:
			if self.orientable and self.max_eg >= 0:
				yield Embedding(self.g, {v:() for v in self.g.vertices})
			return
		rot = {v:[] for v in self.g.vertices}
		rot[self.root] = list(self.root_rotation(shard))
		sign = {}
		for p, c in self.root_edges:
			rot[c] = [p]
			sign[_edge_key(p, c)] = 1
		yield from self._insert_tree(0, rot, sign)

	def _insert_tree(self, i, rot, sign):
		if i == len(self.tree_rest):
			yield from self._insert_nontree(0, rot, sign, 0)
			return
		self.budget.tick()
		p, c = self.tree_rest[i]
		key = _edge_key(p, c)
		around = rot[p]
		sign[key] = 1
		rot[c] = [p]
		for gap in range(len(around)):
			around.insert(gap + 1, c)
			yield from self._insert_tree(i + 1, rot, sign)
			del around[gap + 1]
		rot[c] = []
		del sign[key]

	def _insert_nontree(self, j, rot, sign, negatives):
		self.budget.tick()
		remaining = len(self.nontree) - j
		faces = _trace_orbits(rot, sign, signed=negatives > 0, count_only=True)
		if faces + remaining < self.f_need:
			return
		if remaining == 0:
			if self.orientable or negatives > 0:
				yield Embedding(self.g, rot, sign)
			return
		u, v = self.nontree[j]
		key = (u, v)
		at_u, at_v = rot[u], rot[v]
		signs = (1,) if self.orientable else (1, -1)
		for gu in range(len(at_u)):
			at_u.insert(gu + 1, v)
			for gv in range(len(at_v)):
				at_v.insert(gv + 1, u)
				for s in signs:
					sign[key] = s
					yield from self._insert_nontree(j + 1, rot, sign, negatives + (1 if s < 0 else 0))
				del sign[key]
				del at_v[gv + 1]
			del at_u[gu + 1]

def enumerate_embeddings(g, orientable, max_eg, budget=None, shards=None):
	'''
	Yields every cellular embedding of g of the given orientability class with euler genus at most
	max_eg, up to vertex flips. shards restricts the search to those rotations of the root vertex.
	'''
	_require_connected(g)
	budget = resolve_budget(budget, "embedding enumeration")
	search = _InsertionSearch(g, orientable, max_eg, budget)
	for shard in (range(search.shard_count) if shards is None else shards):
		yield from search.run(shard)

def _require_connected(g):
	if len(g) == 0:
		raise DomainException("The graph has no vertices")
	if not g.is_connected():
		raise DomainException("The graph is disconnected; components are not combined")

def _exists_shard(job):
	g, orientable, max_eg, shard, limit = job
	search = _InsertionSearch(g, orientable, max_eg, Budget(limit, "embedding enumeration"))
	for _ in search.run(shard):
		return True
	return False

def _exists(g, orientable, max_eg, budget, workers):
	search = _InsertionSearch(g, orientable, max_eg, budget)
	if workers != 1 and search.shard_count > 1:
		jobs = [(g, orientable, max_eg, shard, budget.limit) for shard in range(search.shard_count)]
		return any(mphelper.map_shards(_exists_shard, jobs, nthread=workers))
	for shard in range(search.shard_count):
		for _ in search.run(shard):
			return True
	return False

def is_planar(g):
	return nx.check_planarity(g.to_networkx())[0]

def min_genus(g, orientable, budget=None, workers=1):
	'''
	Minimum euler genus over cellular embeddings of the class; INFINITY when there is none
	(a tree has no non-orientable embedding).
	'''
	_require_connected(g)
	budget = resolve_budget(budget, "genus search")
	cyclomatic = len(g.edges) - len(g) + 1
	if orientable:
		if is_planar(g):
			return 0
		for eg in range(2, 2 * (cyclomatic // 2) + 1, 2):
			_logger.debug("min_genus: trying orientable euler genus %d", eg)
			if _exists(g, True, eg, budget, workers):
				return eg
		raise StruktException("Orientable genus search found no embedding")
	if cyclomatic == 0:
		return INFINITY
	for eg in range(1, cyclomatic + 1):
		_logger.debug("min_genus: trying non-orientable euler genus %d", eg)
		if _exists(g, False, eg, budget, workers):
			return eg
	raise StruktException("Non-orientable genus search found no embedding")

def embeds_in(g, s, budget=None, workers=1):
	'''
	True iff g embeds in the closed surface s: an orientable s of euler genus e takes orientable
	embeddings of euler genus <= e; a non-orientable one also takes orientable embeddings of euler genus <= e - 1.
	'''
	_require_connected(g)
	if s.boundary_components:
		raise DomainException("embeds_in takes a surface without boundary")
	if is_planar(g):
		return True
	budget = resolve_budget(budget, "genus search")
	if s.orientable:
		return min_genus(g, True, budget, workers) <= s.euler_genus
	if min_genus(g, False, budget, workers) <= s.euler_genus:
		return True
	return s.euler_genus >= 1 and min_genus(g, True, budget, workers) <= s.euler_genus - 1

###################################
# Face domination
###################################

def _min_cover(cover_sets, targets, limit):
	'''
	Indices of a smallest family of cover_sets covering targets with at most limit members, or None.
	Among the smallest families the lexicographically first is returned.
	'''
	targets = frozenset(targets)
	if len(targets) == 0:
		return []
	seen = {}
	for i, cs in enumerate(cover_sets):
		cs = frozenset(cs) & targets
		if cs and cs not in seen:
			seen[cs] = i
	useful = sorted(seen.items(), key=lambda item: item[1])
	largest = max((len(cs) for cs, _ in useful), default=0)
	for k in range(1, min(limit, len(useful)) + 1):
		if largest * k < len(targets):
			continue
		for combo in itertools.combinations(useful, k):
			if frozenset().union(*(cs for cs, _ in combo)) == targets:
				return [i for _, i in combo]
	return None

def high_vertices(g, threshold=DEFAULT_THRESHOLD):
	return frozenset(v for v in g.vertices if g.degree(v) >= threshold)

def dominating_faces(e, threshold=DEFAULT_THRESHOLD):
	'''
	A minimum set of faces such that every vertex of degree >= threshold lies on one of them
	'''
	faces = e.faces()
	targets = high_vertices(e.graph, threshold)
	chosen = _min_cover([set(f.vertices) for f in faces], targets, len(targets))
	return [faces[i] for i in chosen]

def _domination_number(e, targets, limit):
	faces = e.faces()
	chosen = _min_cover([set(f.vertices) for f in faces], targets, limit)
	return None if chosen is None else len(chosen)

###################################
# mf
###################################

def _set_partitions(items, k):
	'''
	Partitions of items into exactly k nonempty blocks, in restricted-growth order
	'''
	n = len(items)
	blocks = []
	def rec(i):
		if i == n:
			if len(blocks) == k:
				yield [list(b) for b in blocks]
			return
		if n - i < k - len(blocks):
			return
		for b in blocks:
			b.append(items[i])
			yield from rec(i + 1)
			b.pop()
		if len(blocks) < k:
			blocks.append([items[i]])
			yield from rec(i + 1)
			blocks.pop()
	yield from rec(0)

def _apex_embedding(g, groups):
	'''
	Planar embedding of g in which every group lies on a common face, or None.
	One new vertex per group, adjacent to the group, must keep the graph planar.
	'''
	ng = g.to_networkx()
	top = max(g.vertices) + 1
	for i, group in enumerate(groups):
		for v in group:
			ng.add_edge(top + i, v)
	planar, pe = nx.check_planarity(ng)
	if not planar:
		return None
	rotation = {v:tuple(w for w in pe.neighbors_cw_order(v) if w < top) for v in g.vertices}
	return Embedding(g, rotation)

def _sphere_optima(g, threshold, budget):
	'''
	Yields (k, embedding) for the smallest feasible k, once per feasible grouping of the high vertices
	'''
	if not is_planar(g):
		return
	targets = sorted(high_vertices(g, threshold))
	if len(targets) == 0:
		budget.tick()
		yield 0, _apex_embedding(g, [])
		return
	for k in range(1, len(targets) + 1):
		found = False
		for groups in _set_partitions(targets, k):
			budget.tick()
			e = _apex_embedding(g, groups)
			if e is not None:
				found = True
				yield k, e
		if found:
			return

def _mf_shard(job):
	g, orientable, max_eg, shard, threshold, best, limit = job
	search = _InsertionSearch(g, orientable, max_eg, Budget(limit, "mf search"))
	return _best_in_shard(search, shard, high_vertices(g, threshold), best)

def _best_in_shard(search, shard, targets, best):
	lower = 1 if targets else 0
	for e in search.run(shard):
		limit = len(targets) if best == INFINITY else best - 1
		value = _domination_number(e, targets, limit)
		if value is not None and value < best:
			best = value
			if best <= lower:
				break
	return best

def mf(h, s, threshold=DEFAULT_THRESHOLD, budget=None, workers=1, method="auto"):
	'''
	Minimum number of faces dominating the vertices of degree >= threshold, over all embeddings of h
	in the closed surface s; INFINITY when h does not embed in s.
	method is "auto", "planarity" (sphere only) or "enumerate".
	'''
	_require_connected(h)
	if s.boundary_components:
		raise DomainException("mf takes a surface without boundary; use Surface.closed()")
	budget = resolve_budget(budget, "mf search")
	if method not in ("auto", "planarity", "enumerate"):
		raise DomainException(f"Unknown mf method {method!r}")
	if method == "planarity" and not s.is_sphere():
		raise DomainException("The planarity method applies to the sphere only")
	if s.is_sphere() and method != "enumerate":
		for k, _ in _sphere_optima(h, threshold, budget):
			return k
		return INFINITY

	targets = high_vertices(h, threshold)
	lower = 1 if targets else 0
	best = INFINITY
	for orientable, max_eg in _compatible_classes(s):
		search = _InsertionSearch(h, orientable, max_eg, budget)
		_logger.debug("mf: class orientable=%s max_eg=%d, %d shards", orientable, max_eg, search.shard_count)
		if workers != 1 and search.shard_count > 1:
			jobs = [(h, orientable, max_eg, shard, threshold, best, budget.limit) for shard in range(search.shard_count)]
			best = min([best] + mphelper.map_shards(_mf_shard, jobs, nthread=workers))
		else:
			for shard in range(search.shard_count):
				best = _best_in_shard(search, shard, targets, best)
				if best <= lower:
					break
		if best <= lower:
			break
	return best

def _optimal_embeddings(h, s, value, threshold, budget):
	targets = high_vertices(h, threshold)
	if s.is_sphere():
		for k, e in _sphere_optima(h, threshold, budget):
			if k == value:
				yield e
	for orientable, max_eg in _compatible_classes(s):
		for e in enumerate_embeddings(h, orientable, max_eg, budget):
			if _domination_number(e, targets, value) == value:
				yield e

###################################
# Nice embeddings
###################################

class NicifyException(StruktException):
	pass

class _EmbeddingEditor():
	'''
	Mutable rotation system for local repairs. paths maps each original edge to its current
	subdivided path; tracked holds sides whose faces must be followed through subdivisions.
	'''
	def __init__(self, e):
		self.rot = {v:list(e.rotation[v]) for v in e.graph.vertices}
		self.sign = dict(e.signature)
		self.next_id = max(e.graph.vertices) + 1
		self.paths = {edge:[edge[0], edge[1]] for edge in e.graph.edges}
		self.owner = {edge:edge for edge in e.graph.edges}
		self.tracked = {}
		self.original_vertices = frozenset(e.graph.vertices)

	def degree(self, v):
		return len(self.rot[v])

	def orbits(self):
		return _trace_orbits(self.rot, self.sign)

	def orbit(self, start):
		index = {v:{x:i for i, x in enumerate(around)} for v, around in self.rot.items()}
		result = [start]
		cur = _step(self.rot, index, self.sign, start)
		while cur != start:
			result.append(cur)
			cur = _step(self.rot, index, self.sign, cur)
		return result

	def subdivide(self, x, y):
		z = self.next_id
		self.next_id += 1
		self.rot[x][self.rot[x].index(y)] = z
		self.rot[y][self.rot[y].index(x)] = z
		self.rot[z] = [x, y]
		s = self.sign.pop(_edge_key(x, y))
		self.sign[_edge_key(x, z)] = s
		self.sign[_edge_key(z, y)] = 1
		orig = self.owner.pop(_edge_key(x, y), None)
		if orig is not None:
			p = self.paths[orig]
			for i in range(len(p) - 1):
				if {p[i], p[i + 1]} == {x, y}:
					p.insert(i + 1, z)
					break
			self.owner[_edge_key(x, z)] = orig
			self.owner[_edge_key(z, y)] = orig
		for name, (p, q, st) in list(self.tracked.items()):
			if {p, q} == {x, y}:
				self.tracked[name] = (p, z, st)
		return z

	def _insert_at_corner(self, corner, new):
		prev, v, _, state = corner
		around = self.rot[v]
		i = around.index(prev)
		if state > 0:
			around.insert(i + 1, new)
		else:
			around.insert(i, new)

	def add_chord(self, corner_a, corner_b):
		'''
		Corners are (prev, vertex, next, state) taken from one face walk; the chord splits that face in two.
		'''
		a, b = corner_a[1], corner_b[1]
		self._insert_at_corner(corner_a, b)
		self._insert_at_corner(corner_b, a)
		self.sign[_edge_key(a, b)] = corner_a[3] * corner_b[3]

	def corner(self, orbit, k):
		return (orbit[k - 1][0], orbit[k][0], orbit[k][1], orbit[k][2])

	def cut_corner(self, orbit, k):
		'''
		Separates the corner of orbit at position k by a triangle; returns a side of the remaining face
		'''
		u, v, w = orbit[k - 1][0], orbit[k][0], orbit[k][1]
		start_state = orbit[k - 1][2]
		a = self.subdivide(v, u)
		b = self.subdivide(v, w)
		start = (u, a, start_state)
		o = self.orbit(start)
		self.add_chord(self.corner(o, 1), self.corner(o, 3))
		return start

	def graph(self):
		return Graph(self.rot.keys(), self.sign.keys())

	def embedding(self):
		return Embedding(self.graph(), self.rot, self.sign)

def _find_leaf(editor):
	for v in sorted(editor.rot):
		if editor.degree(v) == 1:
			return v
	return None

def _repair_leaf(editor, l):
	x = editor.rot[l][0]
	if editor.degree(x) == 1:
		editor.subdivide(x, l)
		return
	start = None
	for o in editor.orbits():
		for t in o:
			if t[0] == x and t[1] == l:
				start = t
				break
		if start is not None:
			break
	o = editor.orbit(start)
	z = o[2][1]
	editor.subdivide(x, z)
	o = editor.orbit(start)
	editor.add_chord(editor.corner(o, 1), editor.corner(o, 3))

def _find_doubled_edge(editor):
	for o in editor.orbits():
		first = {}
		for i, t in enumerate(o):
			key = _edge_key(t[0], t[1])
			if key in first:
				return o, first[key], i
			first[key] = i
	return None

def _repair_doubled_edge(editor, o, i, j):
	'''
	Adds a chord between subdivision points on the two arcs of the walk between the two traversals,
	so the traversals end in different faces.
	'''
	L = len(o)
	options = []
	for a in range(i + 1, j):
		for b in range(j + 1, i + L):
			options.append((a - i + b - j, a, b % L))
	for _, a, b in sorted(options):
		edge_a = _edge_key(o[a][0], o[a][1])
		edge_b = _edge_key(o[b][0], o[b][1])
		if edge_a == edge_b:
			continue
		sa = editor.subdivide(*edge_a)
		sb = editor.subdivide(*edge_b)
		start = o[0]
		if _edge_key(start[0], start[1]) == edge_a:
			start = (start[0], sa, start[2])
		elif _edge_key(start[0], start[1]) == edge_b:
			start = (start[0], sb, start[2])
		walk = editor.orbit(start)
		# Every split side of the old walk now takes two positions
		def shifted(m):
			return m + sum(1 for x in range(m) if _edge_key(o[x][0], o[x][1]) in (edge_a, edge_b))
		editor.add_chord(editor.corner(walk, shifted(a) + 1), editor.corner(walk, shifted(b) + 1))
		return
	raise NicifyException("No chord separates a doubled edge")

def _find_repeated_vertex(editor):
	for o in editor.orbits():
		seen = set()
		for k, t in enumerate(o):
			if t[0] in seen:
				return o, k
			seen.add(t[0])
	return None

def _repair_once(editor):
	leaf = _find_leaf(editor)
	if leaf is not None:
		_logger.debug("nicify: leaf gadget at %d", leaf)
		_repair_leaf(editor, leaf)
		return True
	found = _find_doubled_edge(editor)
	if found is not None:
		_logger.debug("nicify: separating a doubled edge")
		_repair_doubled_edge(editor, *found)
		return True
	found = _find_repeated_vertex(editor)
	if found is not None:
		o, k = found
		_logger.debug("nicify: cutting the corner of repeated vertex %d", o[k][0])
		editor.cut_corner(o, k)
		return True
	return False

class NicifyResult():
	'''
	Unpacks as (graph, embedding, faces); model is the topological-minor model of the input graph.
	'''
	def __init__(self, graph, embedding, faces, model):
		self.graph = graph
		self.embedding = embedding
		self.faces = faces
		self.model = model

	def __iter__(self):
		return iter((self.graph, self.embedding, self.faces))

def _face_of(faces, side, sign):
	for f in faces:
		if side in f.sides or _reverse(sign, side) in f.sides:
			return f
	return None

def _nicify_candidate(h, e, value, max_steps):
	from .patterns import TopMinorModel

	editor = _EmbeddingEditor(e)
	steps = 0
	while _repair_once(editor):
		steps += 1
		if steps > max_steps:
			raise NicifyException(f"Repairs did not converge within {max_steps} steps")

	targets = sorted(high_vertices(h))
	current = editor.embedding()
	chosen = dominating_faces(current)
	if len(chosen) > value:
		_logger.debug("nicify: candidate needs %d faces after repairs, wanted %d", len(chosen), value)
		return None
	for i, f in enumerate(chosen):
		editor.tracked[i] = f.sides[0]

	for v in targets:
		holders = [i for i in range(len(chosen)) if v in {t[0] for t in editor.orbit(editor.tracked[i])}]
		for i in holders[1:]:
			o = editor.orbit(editor.tracked[i])
			k = next(k for k, t in enumerate(o) if t[0] == v)
			editor.tracked[i] = editor.cut_corner(o, k)

	while True:
		g = editor.graph()
		triangles = g.triangles()
		if len(triangles) == 0:
			break
		counts = {}
		for a, b, c in triangles:
			for edge in ((a, b), (a, c), (b, c)):
				counts[edge] = counts.get(edge, 0) + 1
		edge = min(counts, key=lambda x: (-counts[x], x))
		editor.subdivide(*edge)

	final = editor.embedding()
	faces = final.faces()
	chosen_faces = [_face_of(faces, editor.tracked[i], final.signature) for i in range(len(chosen))]
	model = TopMinorModel({v:v for v in h.vertices}, {edge:tuple(p) for edge, p in editor.paths.items()})
	return NicifyResult(final.graph, final, chosen_faces, model)

def nicify(h, s, budget=None, max_steps=10000):
	'''
	Returns a triangle-free graph containing h as a topological minor, with a closed 2-cell embedding
	in s and a set of mf(h, s) faces such that every vertex of degree >= 4 lies on exactly one of them.
	'''
	_require_connected(h)
	if len(h.edges) == 0:
		raise DomainException("nicify needs at least one edge")
	s = s.closed()
	budget = resolve_budget(budget, "nicify")
	value = mf(h, s, budget=budget)
	if value == INFINITY:
		raise DomainException(f"The graph does not embed in {s.name}")
	for e in _optimal_embeddings(h, s, value, DEFAULT_THRESHOLD, budget):
		result = _nicify_candidate(h, e, value, max_steps)
		if result is not None:
			return result
	raise NicifyException("No optimal embedding could be repaired")

###################################
# Disk graphs
###################################

class DiskGraph():
	'''
	A plane embedding whose outer face contains the disk boundary; boundary_vertices lie on it in order.
	'''
	def __init__(self, embedding, outer_face, boundary_vertices):
		self.embedding = embedding
		self.graph = embedding.graph
		self.outer_face = tuple(outer_face)
		self.boundary_vertices = tuple(boundary_vertices)

	def problems(self):
		problems = []
		if len(self.graph) == 0:
			if self.boundary_vertices:
				problems.append("boundary vertices on an empty graph")
			return problems
		if not self.graph.is_connected():
			problems.append("disk graph is disconnected")
			return problems
		eg, _ = euler_genus(self.embedding)
		if eg != 0:
			problems.append(f"disk graph embedding has euler genus {eg}")
		if find_face(self.embedding.faces(), self.outer_face) is None:
			problems.append("outer face is not a face of the embedding")
		if not occurs_in_cyclic_order(self.boundary_vertices, self.outer_face):
			problems.append("boundary vertices do not occur on the outer face in order")
		return problems

def radial_distance(d, u, w):
	'''
	Fewest vertices on a curve from u to w meeting the graph only in vertices: half the distance
	in the vertex-face incidence graph, plus one.
	'''
	if u == w:
		return 1
	radial = nx.Graph()
	for i, f in enumerate(d.embedding.faces()):
		for v in f.vertices:
			radial.add_edge(("v", v), ("f", i))
	try:
		return nx.shortest_path_length(radial, ("v", u), ("v", w)) // 2 + 1
	except (nx.NetworkXNoPath, nx.NodeNotFound):
		return INFINITY
