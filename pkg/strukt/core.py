from enum import Enum
import itertools
import logging
import os

import networkx as nx

_logger = logging.getLogger("strukt")

###################################
# Exceptions
###################################

class StruktException(Exception):
	'''
	Base class of every error raised by strukt
	'''
	pass

class GraphParseException(StruktException):
	'''
	A text or JSON document cannot be parsed
	'''
	def __init__(self, message, line=None):
		if line is not None:
			message = f"line {line}: {message}"
		super().__init__(message)
		self.line = line

class GraphValidationException(StruktException):
	'''
	A document parses but violates an invariant of the type it describes
	'''
	pass

class MissingEdgeException(StruktException):
	pass

class DomainException(StruktException):
	'''
	An argument lies outside the domain of an operation
	'''
	pass

class ContractViolationException(StruktException):
	'''
	A precondition clause of an operation does not hold. clause is a stable identifier.
	'''
	def __init__(self, message, clause=None):
		if clause is not None:
			message = f"[{clause}] {message}"
		super().__init__(message)
		self.clause = clause

class BudgetExceededException(StruktException):
	def __init__(self, message, budget=None, label=None):
		super().__init__(message)
		self.budget = budget
		self.label = label

###################################
# Verdicts and budgets
###################################

class Reason(Enum):
	'''
	Stable identifiers of the clauses a checker can reject
	'''
	# Pattern models
	BRANCH_INJECTIVE = "branch-injective"
	MISSING_PATH = "missing-path"
	PATH_ENDPOINTS = "path-endpoints"
	PATH_EDGES = "path-edges"
	INTERNAL_DISJOINTNESS = "internal-disjointness"
	EDGE_DISJOINTNESS = "edge-disjointness"
	STRONGNESS = "strongness"
	# Vortices and outgrowths
	PATH_DECOMPOSITION = "path-decomposition"
	BAG_COUNT = "bag-count"
	WIDTH = "width"
	BOUNDARY_BAG_MEMBERSHIP = "boundary-bag-membership"
	STANDARD_INTERSECTION = "standard-intersection"
	VORTEX_COUNT = "vortex-count"
	VORTEX_DISJOINTNESS = "vortex-disjointness"
	VORTEX_EDGE_DISJOINTNESS = "vortex-edge-disjointness"
	ATTACHMENT_SET = "attachment-set"
	ATTACHMENT_ORDER = "attachment-order"
	DESIGNATED_FACE = "designated-face"
	DISTINCT_FACES = "distinct-faces"
	BASE_EMBEDDING = "base-embedding"
	# Basic graphs, patches, expansions
	DISK_EMBEDDING = "disk-embedding"
	BOUNDARY_SIZE = "boundary-size"
	ANCHOR_COUNT = "anchor-count"
	APEX_COUNT = "apex-count"
	WITNESS_VERTICES = "witness-vertices"
	FAR_HIGH_DEGREE = "far-high-degree"
	FACE_NOT_CYCLE = "face-not-cycle"
	PASTING_FACE = "pasting-face"
	PASTING_LABELS = "pasting-labels"
	PASTING_VERTEX_CLASH = "pasting-vertex-clash"
	EXPANSION_FACE = "expansion-face"
	EXPANSION_SUBGRAPH = "expansion-subgraph"
	EXPANSION_VORTEX = "expansion-vortex"
	# Structure certificates
	TREE_INVALID = "tree-invalid"
	HOST_COMPOSITION = "host-composition"
	PIECE_COUNT = "piece-count"
	APEX_BUDGET = "apex-budget"
	CASE_TAG = "case-tag"
	MAX_DEGREE = "max-degree"
	OUTGROWTH_GRAPH = "outgrowth-graph"
	SURFACE_GENUS = "surface-genus"
	H_EMBEDS = "h-embeds"
	H_NOT_EMBEDS = "h-not-embeds"
	MF_TOO_SMALL = "mf-too-small"
	HIGH_DEGREE_OUTSIDE_VORTEX = "high-degree-outside-vortex"
	TOO_MANY_HIGH_DEGREE_VORTICES = "too-many-high-degree-vortices"

class Verdict():
	'''
	Result of a checker. Truthy iff accepted. reasons is a list of (reason_id, detail) pairs.
	'''
	def __init__(self, reasons=None, notes=None):
		self.reasons = list(reasons) if reasons is not None else []
		self.notes = list(notes) if notes is not None else []

	@property
	def ok(self):
		return len(self.reasons) == 0

	@property
	def reason_ids(self):
		return [reason_id for reason_id, _ in self.reasons]

	def fail(self, reason_id, detail=""):
		_logger.debug("Check failed: %s %s", reason_id, detail)
		self.reasons.append((reason_id, detail))

	def extend(self, other, prefix=""):
		for reason_id, detail in other.reasons:
			self.reasons.append((reason_id, prefix + detail))
		self.notes.extend(n for n in other.notes if n not in self.notes)

	def note(self, text):
		if text not in self.notes:
			self.notes.append(text)

	def __bool__(self):
		return self.ok

	def __repr__(self):
		return f"Verdict(ok={self.ok}, reasons={self.reasons!r})"

	def to_json(self):
		return {
			"ok": self.ok,
			"reasons": [{"id": _reason_value(r), "detail": d} for r, d in self.reasons],
			"notes": list(self.notes),
		}

def _reason_value(r):
	return r.value if isinstance(r, Enum) else str(r)

DEFAULT_BUDGET = 1000000
ENV_BUDGET = "STRUKT_BUDGET"

class Budget():
	'''
	Counts search nodes and raises BudgetExceededException past the limit.
	'''
	def __init__(self, limit=None, label="search"):
		if limit is None:
			limit = default_budget()
		if limit <= 0:
			raise DomainException(f"Budget must be positive, got {limit}")
		self.limit = limit
		self.label = label
		self.used = 0

	def tick(self, n=1):
		self.used += n
		if self.used > self.limit:
			raise BudgetExceededException(f"{self.label} exceeded its budget of {self.limit} nodes", self.limit, self.label)

	def __repr__(self):
		return f"Budget({self.used}/{self.limit}, {self.label!r})"

def default_budget():
	value = os.environ.get(ENV_BUDGET)
	if value is None or value.strip() == "":
		return DEFAULT_BUDGET
	try:
		return int(value)
	except ValueError:
		raise DomainException(f"{ENV_BUDGET} must be an integer, got {value!r}")

def resolve_budget(budget, label="search"):
	if budget is None:
		return Budget(label=label)
	if isinstance(budget, Budget):
		return budget
	return Budget(int(budget), label)

###################################
# Graph
###################################

def _edge_key(u, v):
	return (u, v) if u < v else (v, u)

class Graph():
	'''
	Immutable simple undirected graph over integer vertex identifiers.
	'''
	def __init__(self, vertices=(), edges=()):
		vertices = set(vertices)
		adj = {v:set() for v in vertices}
		edge_set = set()
		for u, v in edges:
			if u == v:
				raise GraphValidationException(f"Loop at vertex {u}")
			if u not in adj or v not in adj:
				raise GraphValidationException(f"Edge ({u}, {v}) has an endpoint outside the vertex set")
			edge_set.add(_edge_key(u, v))
			adj[u].add(v)
			adj[v].add(u)
		self._vertices = tuple(sorted(vertices))
		self._edges = tuple(sorted(edge_set))
		self._adj = {v:frozenset(n) for v, n in adj.items()}

	@classmethod
	def from_networkx(cls, ng):
		return cls(ng.nodes(), ng.edges())

	def to_networkx(self):
		ng = nx.Graph()
		ng.add_nodes_from(self._vertices)
		ng.add_edges_from(self._edges)
		return ng

	@property
	def vertices(self):
		return self._vertices

	@property
	def edges(self):
		return self._edges

	def neighbors(self, v):
		return self._adj[v]

	def degree(self, v):
		return len(self._adj[v])

	def max_degree(self):
		return max((len(n) for n in self._adj.values()), default=0)

	def has_vertex(self, v):
		return v in self._adj

	def has_edge(self, u, v):
		return u in self._adj and v in self._adj[u]

	def __len__(self):
		return len(self._vertices)

	def __contains__(self, v):
		return v in self._adj

	def __eq__(self, other):
		return isinstance(other, Graph) and self._vertices == other._vertices and self._edges == other._edges

	def __hash__(self):
		return hash((self._vertices, self._edges))

	def __repr__(self):
		return f"Graph(|V|={len(self._vertices)}, |E|={len(self._edges)})"

	def is_connected(self):
		if len(self._vertices) == 0:
			return True
		seen = {self._vertices[0]}
		stack = [self._vertices[0]]
		while stack:
			v = stack.pop()
			for w in self._adj[v]:
				if w not in seen:
					seen.add(w)
					stack.append(w)
		return len(seen) == len(self._vertices)

	def subgraph(self, vertices):
		vertices = set(vertices)
		return Graph(vertices, [(u, v) for u, v in self._edges if u in vertices and v in vertices])

	def remove_vertices(self, vertices):
		vertices = set(vertices)
		return self.subgraph(v for v in self._vertices if v not in vertices)

	def add_edges(self, edges, vertices=()):
		return Graph(set(self._vertices) | set(vertices), list(self._edges) + list(edges))

	def remove_edges(self, edges):
		removed = {_edge_key(u, v) for u, v in edges}
		return Graph(self._vertices, [e for e in self._edges if e not in removed])

	def relabel(self, mapping):
		return Graph([mapping[v] for v in self._vertices], [(mapping[u], mapping[v]) for u, v in self._edges])

	def compact(self):
		'''
		Relabels vertices to 0..n-1 preserving their order.
		'''
		return self.relabel({v:i for i, v in enumerate(self._vertices)})

	def triangles(self):
		result = []
		for u, v in self._edges:
			for w in sorted(self._adj[u] & self._adj[v]):
				if w > v:
					result.append((u, v, w))
		return result

###################################
# Edge-list format
###################################

def parse_graph(text):
	'''
	Parses the edge-list format: a header "p <n>" followed by "e <u> <v>" lines; "#" starts a comment line.
	'''
	n = None
	edges = []
	for lineno, raw in enumerate(text.splitlines(), start=1):
		line = raw.strip()
		if line == "" or line.startswith("#"):
			continue
		parts = line.split()
		if n is None:
			if len(parts) != 2 or parts[0] != "p":
				raise GraphParseException(f"expected 'p <num_vertices>', got {line!r}", lineno)
			n = _parse_int(parts[1], lineno)
			if n < 0:
				raise GraphParseException("negative vertex count", lineno)
			continue
		if len(parts) != 3 or parts[0] != "e":
			raise GraphParseException(f"expected 'e <u> <v>', got {line!r}", lineno)
		u = _parse_int(parts[1], lineno)
		v = _parse_int(parts[2], lineno)
		if not (0 <= u < n and 0 <= v < n):
			raise GraphParseException(f"edge ({u}, {v}) outside 0..{n - 1}", lineno)
		if u == v:
			raise GraphValidationException(f"line {lineno}: loop at vertex {u}")
		edges.append((u, v))
	if n is None:
		raise GraphParseException("missing 'p <num_vertices>' header")
	return Graph(range(n), edges)

def _parse_int(token, lineno):
	try:
		return int(token)
	except ValueError:
		raise GraphParseException(f"expected an integer, got {token!r}", lineno)

def serialize_graph(g):
	'''
	Canonical edge-list text. Vertices that are not exactly 0..n-1 are relabeled in
	ascending order and the original identifiers are recorded in a comment line.
	'''
	lines = []
	if g.vertices != tuple(range(len(g))):
		lines.append("# ids " + " ".join(str(v) for v in g.vertices))
		g = g.compact()
	lines.append(f"p {len(g)}")
	lines.extend(f"e {u} {v}" for u, v in g.edges)
	return "\n".join(lines) + "\n"

###################################
# Graph operations
###################################

def subdivide_edge(g, e):
	'''
	Replaces e by a path through a new vertex numbered max(V) + 1.
	'''
	u, v = e
	if not g.has_edge(u, v):
		raise MissingEdgeException(f"Edge ({u}, {v}) is not in the graph")
	w = max(g.vertices) + 1
	edges = [x for x in g.edges if x != _edge_key(u, v)] + [(u, w), (w, v)]
	return Graph(list(g.vertices) + [w], edges)

def high_degree_vertices(g, d):
	return frozenset(v for v in g.vertices if g.degree(v) > d)

###################################
# Orderings and path decompositions
###################################

class Ordering():
	def __init__(self, sequence, graph=None):
		self.sequence = tuple(sequence)
		if len(set(self.sequence)) != len(self.sequence):
			raise DomainException("Ordering repeats a vertex")
		if graph is not None and set(self.sequence) != set(graph.vertices):
			raise DomainException("Ordering is not a permutation of the vertex set")
		self._position = {v:i for i, v in enumerate(self.sequence)}

	def position(self, v):
		'''
		1-indexed position of v
		'''
		return self._position[v] + 1

	def prefix(self, k):
		'''
		The vertices strictly before position k (1-indexed)
		'''
		return frozenset(self.sequence[:k - 1])

	def __len__(self):
		return len(self.sequence)

	def __iter__(self):
		return iter(self.sequence)

	def __getitem__(self, i):
		return self.sequence[i]

	def __eq__(self, other):
		return isinstance(other, Ordering) and self.sequence == other.sequence

	def __hash__(self):
		return hash(self.sequence)

	def __repr__(self):
		return f"Ordering({list(self.sequence)})"

class PathDecomposition():
	def __init__(self, bags):
		self.bags = tuple(frozenset(b) for b in bags)

	@property
	def width(self):
		return max((len(b) for b in self.bags), default=0) - 1

	def vertices(self):
		return frozenset().union(*self.bags) if self.bags else frozenset()

	def interval(self, v):
		'''
		(first, last) 0-indexed positions of the bags containing v, or None
		'''
		positions = [i for i, b in enumerate(self.bags) if v in b]
		if len(positions) == 0:
			return None
		return positions[0], positions[-1]

	def validate(self, g):
		'''
		Returns a list of (reason, detail) pairs; empty iff this is a path decomposition of g.
		'''
		problems = []
		for v in g.vertices:
			positions = [i for i, b in enumerate(self.bags) if v in b]
			if len(positions) == 0:
				problems.append(("vertex-coverage", f"vertex {v} lies in no bag"))
			elif positions[-1] - positions[0] + 1 != len(positions):
				problems.append(("contiguity", f"bags containing {v} are not contiguous"))
		for u, v in g.edges:
			if not any(u in b and v in b for b in self.bags):
				problems.append(("edge-coverage", f"edge ({u}, {v}) lies in no bag"))
		extra = self.vertices() - set(g.vertices)
		if extra:
			problems.append(("vertex-coverage", f"bags mention vertices outside the graph: {sorted(extra)}"))
		return problems

	def is_valid(self, g):
		return len(self.validate(g)) == 0

	def __len__(self):
		return len(self.bags)

	def __repr__(self):
		return f"PathDecomposition({[sorted(b) for b in self.bags]})"

###################################
# Finite metrics
###################################

class FiniteMetric():
	def __init__(self, points, dist):
		'''
		dist is a callable or a mapping keyed by (x, y); it is read symmetrically.
		'''
		self.points = frozenset(points)
		self._dist = dist

	def __call__(self, x, y):
		if x == y:
			return 0
		if callable(self._dist):
			return self._dist(x, y)
		if (x, y) in self._dist:
			return self._dist[(x, y)]
		return self._dist[(y, x)]

	@classmethod
	def from_graph(cls, g):
		'''
		Shortest-path metric of a connected graph
		'''
		if not g.is_connected():
			raise DomainException("Shortest-path metric needs a connected graph")
		lengths = dict(nx.all_pairs_shortest_path_length(g.to_networkx()))
		return cls(g.vertices, lambda x, y: lengths[x][y])

	def validate(self):
		problems = []
		pts = sorted(self.points)
		for x, y in itertools.combinations(pts, 2):
			if self(x, y) < 0 or self(x, y) != self(y, x):
				problems.append(f"distance between {x} and {y} is negative or asymmetric")
		for x, y, z in itertools.permutations(pts, 3):
			if self(x, z) > self(x, y) + self(y, z):
				problems.append(f"triangle inequality fails for {x}, {y}, {z}")
		return problems

def sparsify_radii(t, n, f):
	'''
	The radii t_0 = t, t_i = t_{i-1} + f(t_{i-1}) for i < n
	'''
	ts = [t]
	for _ in range(1, max(n, 1)):
		ts.append(ts[-1] + f(ts[-1]))
	return ts

def metric_sparsify(m, Z, U, Zpp, t, n, f):
	'''
	Greedy sparsification. Returns (Zp, tp) with Zpp <= Zp <= Z, every point of U within
	distance < tp of Zp, and distinct points of Zp at distance >= f(tp).
	When two points are too close, the one outside Zpp with the smallest identifier is dropped.
	'''
	Z = frozenset(Z)
	U = frozenset(U)
	Zpp = frozenset(Zpp)
	if t <= 0:
		raise ContractViolationException("radius must be positive", "radius")
	if len(Z) > n:
		raise ContractViolationException(f"|Z| = {len(Z)} exceeds n = {n}", "size-bound")
	if not Zpp <= Z:
		raise ContractViolationException("Zpp is not a subset of Z", "retained-subset")
	if not (Z | U) <= m.points:
		raise ContractViolationException("Z and U must be points of the metric", "points")
	for u in sorted(U):
		if not any(m(u, z) < t for z in Z):
			raise ContractViolationException(f"point {u} is not within distance {t} of Z", "coverage")
	ts = sparsify_radii(t, n, f)
	T = ts[-1]
	for x, y in itertools.combinations(sorted(Zpp), 2):
		if m(x, y) < T:
			raise ContractViolationException(f"retained points {x} and {y} are closer than {T}", "retained-separation")

	current = set(Z)
	i = 0
	while True:
		radius = ts[i]
		bound = f(radius)
		close = [z for z in sorted(current - Zpp) if any(m(z, y) < bound for y in current if y != z)]
		if len(close) == 0:
			_logger.debug("metric_sparsify stopped at step %d with %d points", i, len(current))
			return frozenset(current), radius
		# Zpp points are pairwise >= T >= bound apart, so a close pair always has a point outside Zpp
		current.discard(close[0])
		i += 1
