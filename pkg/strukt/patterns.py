from collections import Counter
import logging

import networkx as nx

from .core import Verdict, Reason, BudgetExceededException, GraphParseException, resolve_budget, Budget
from . import mphelper

_logger = logging.getLogger("strukt")

TOPOLOGICAL = "topological"
IMMERSION = "immersion"
STRONG_IMMERSION = "strong"

def _edge_key(u, v):
	return (u, v) if u < v else (v, u)

###################################
# Models
###################################

class TopMinorModel():
	'''
	branch maps V(H) into V(G); paths maps each edge (u, v), u < v, of H to a path from branch[u] to branch[v].
	'''
	kind = TOPOLOGICAL

	def __init__(self, branch, paths):
		self.branch = dict(branch)
		self.paths = {_edge_key(u, v):tuple(p) if u < v else tuple(reversed(p)) for (u, v), p in paths.items()}

	def to_json(self):
		return {
			"kind": self.kind,
			"branch": [[v, b] for v, b in sorted(self.branch.items())],
			"paths": [{"edge": list(e), "path": list(p)} for e, p in sorted(self.paths.items())],
		}

	def __eq__(self, other):
		return type(self) is type(other) and self.to_json() == other.to_json()

	def __repr__(self):
		return f"{type(self).__name__}(branch={self.branch})"

class ImmersionModel(TopMinorModel):
	kind = IMMERSION

	def __init__(self, branch, paths, strong=False):
		super().__init__(branch, paths)
		self.strong = strong

	def to_json(self):
		result = super().to_json()
		result["strong"] = self.strong
		return result

def model_from_json(obj):
	if not isinstance(obj, dict) or obj.get("kind") not in (TOPOLOGICAL, IMMERSION):
		raise GraphParseException("a model needs 'kind' of 'topological' or 'immersion'")
	allowed = {"kind", "branch", "paths"} | ({"strong"} if obj["kind"] == IMMERSION else set())
	unknown = set(obj) - allowed
	if unknown:
		raise GraphParseException(f"model: unknown fields {sorted(unknown)}")
	try:
		branch = {int(v):int(b) for v, b in obj.get("branch", [])}
		paths = {(int(p["edge"][0]), int(p["edge"][1])):[int(x) for x in p["path"]] for p in obj.get("paths", [])}
	except (KeyError, TypeError, ValueError, IndexError):
		raise GraphParseException("model: malformed branch or paths")
	if obj["kind"] == TOPOLOGICAL:
		return TopMinorModel(branch, paths)
	return ImmersionModel(branch, paths, bool(obj.get("strong", False)))

def verify_model(h, g, m):
	'''
	Checks every invariant of a topological-minor or immersion model of h in g
	'''
	verdict = Verdict()
	if set(m.branch) != set(h.vertices) or any(b not in g for b in m.branch.values()):
		verdict.fail(Reason.BRANCH_INJECTIVE, "branch map does not send V(H) into V(G)")
	if len(set(m.branch.values())) != len(m.branch):
		verdict.fail(Reason.BRANCH_INJECTIVE, "two vertices of H share a branch vertex")
	branch_set = set(m.branch.values())
	edge_use = Counter()
	internal_use = Counter()
	for u, v in h.edges:
		p = m.paths.get((u, v))
		if p is None:
			verdict.fail(Reason.MISSING_PATH, f"no path for edge ({u}, {v})")
			continue
		if len(p) < 2 or p[0] != m.branch.get(u) or p[-1] != m.branch.get(v):
			verdict.fail(Reason.PATH_ENDPOINTS, f"path for ({u}, {v}) does not join the branch vertices")
		if len(set(p)) != len(p) or any(not g.has_edge(a, b) for a, b in zip(p, p[1:])):
			verdict.fail(Reason.PATH_EDGES, f"path for ({u}, {v}) is not a path of G")
		edge_use.update(_edge_key(a, b) for a, b in zip(p, p[1:]))
		internal_use.update(p[1:-1])
		if m.kind == TOPOLOGICAL or m.strong:
			hits = sorted(set(p[1:-1]) & branch_set)
			if hits:
				reason = Reason.INTERNAL_DISJOINTNESS if m.kind == TOPOLOGICAL else Reason.STRONGNESS
				verdict.fail(reason, f"path for ({u}, {v}) passes through branch vertices {hits}")
	if set(m.paths) - set(h.edges):
		verdict.fail(Reason.MISSING_PATH, f"paths given for non-edges {sorted(set(m.paths) - set(h.edges))}")
	if m.kind == TOPOLOGICAL:
		shared = sorted(x for x, n in internal_use.items() if n > 1)
		if shared:
			verdict.fail(Reason.INTERNAL_DISJOINTNESS, f"internal vertices {shared} lie on several paths")
	shared_edges = sorted(e for e, n in edge_use.items() if n > 1)
	if shared_edges:
		verdict.fail(Reason.EDGE_DISJOINTNESS, f"edges {shared_edges} lie on several paths")
	return verdict

###################################
# Search
###################################

class _PatternSearch():
	'''
	Backtracking over branch injections, pattern vertices by decreasing degree, routing the edges back
	to already placed vertices right after each placement. Paths are tried shortest first and the
	enumeration of simple paths is exhaustive, so a failed search proves absence.
	'''
	def __init__(self, h, g, kind, budget):
		self.h = h
		self.g = g
		self.kind = kind
		self.budget = budget
		self.h_order = sorted(h.vertices, key=lambda v: (-h.degree(v), v))
		position = {v:i for i, v in enumerate(self.h_order)}
		self.back_edges = [[(x, y) for y in sorted(h.neighbors(x), key=lambda y: position[y]) if position[y] < i] for i, x in enumerate(self.h_order)]
		self.candidates = sorted(g.vertices, key=lambda v: (-g.degree(v), v))
		self.branch = {}
		self.branch_vertices = set()
		self.internal = Counter()
		self.used_edges = set()
		self.paths = {}

	def top_candidates(self):
		if len(self.h_order) == 0:
			return []
		need = self.h.degree(self.h_order[0])
		return [c for c in self.candidates if self.g.degree(c) >= need]

	def run(self, first_candidates=None):
		if len(self.h_order) == 0:
			return self._model()
		if len(self.h) > len(self.g):
			return None
		return self._assign(0, first_candidates)

	def _model(self):
		if self.kind == TOPOLOGICAL:
			return TopMinorModel(self.branch, self.paths)
		return ImmersionModel(self.branch, self.paths, self.kind == STRONG_IMMERSION)

	def _blocked_for_branch(self, c):
		if c in self.branch_vertices:
			return True
		return self.kind != IMMERSION and self.internal[c] > 0

	def _forward_ok(self, x, c):
		need = self.h.degree(x)
		if self.kind == TOPOLOGICAL:
			targets = {self.branch[y] for y in self.h.neighbors(x) if y in self.branch}
			free = sum(1 for w in self.g.neighbors(c) if self.internal[w] == 0 and (w not in self.branch_vertices or w in targets))
		else:
			free = sum(1 for w in self.g.neighbors(c) if _edge_key(c, w) not in self.used_edges)
		return free >= need

	def _assign(self, i, restrict=None):
		if i == len(self.h_order):
			return self._model()
		x = self.h_order[i]
		need = self.h.degree(x)
		for c in (self.candidates if restrict is None else restrict):
			if self.g.degree(c) < need:
				break
			if self._blocked_for_branch(c) or not self._forward_ok(x, c):
				continue
			self.budget.tick()
			self.branch[x] = c
			self.branch_vertices.add(c)
			found = self._route(i, 0)
			if found is not None:
				return found
			self.branch_vertices.discard(c)
			del self.branch[x]
		return None

	def _routing_graph(self, s, t):
		sub = nx.Graph()
		sub.add_nodes_from((s, t))
		for a, b in self.g.edges:
			if self.kind == TOPOLOGICAL:
				if all(w in (s, t) or (w not in self.branch_vertices and self.internal[w] == 0) for w in (a, b)):
					sub.add_edge(a, b)
			else:
				if (a, b) in self.used_edges:
					continue
				if self.kind == STRONG_IMMERSION and any(w not in (s, t) and w in self.branch_vertices for w in (a, b)):
					continue
				sub.add_edge(a, b)
		return sub

	def _paths(self, s, t):
		sub = self._routing_graph(s, t)
		if not nx.has_path(sub, s, t):
			return
		yield from nx.shortest_simple_paths(sub, s, t)

	def _route(self, i, j):
		edges = self.back_edges[i]
		if j == len(edges):
			return self._assign(i + 1)
		x, y = edges[j]
		s, t = self.branch[x], self.branch[y]
		for p in self._paths(s, t):
			self.budget.tick()
			p = tuple(p)
			key = _edge_key(x, y)
			self.paths[key] = p if key[0] == x else tuple(reversed(p))
			self.internal.update(p[1:-1])
			path_edges = {_edge_key(a, b) for a, b in zip(p, p[1:])}
			self.used_edges |= path_edges
			found = self._route(i, j + 1)
			if found is not None:
				return found
			self.used_edges -= path_edges
			self.internal.subtract(p[1:-1])
			del self.paths[key]
		return None

def _check_sizes(h, g, max_host_vertices, max_pattern_edges):
	if len(g) > max_host_vertices:
		raise BudgetExceededException(f"Host has {len(g)} vertices, above the limit of {max_host_vertices}", max_host_vertices, "pattern search")
	if len(h.edges) > max_pattern_edges:
		raise BudgetExceededException(f"Pattern has {len(h.edges)} edges, above the limit of {max_pattern_edges}", max_pattern_edges, "pattern search")

def _search_shard(job):
	h, g, kind, candidate, limit = job
	return _PatternSearch(h, g, kind, Budget(limit, "pattern search")).run([candidate])

def _find(h, g, kind, budget, workers, max_host_vertices, max_pattern_edges):
	_check_sizes(h, g, max_host_vertices, max_pattern_edges)
	budget = resolve_budget(budget, "pattern search")
	search = _PatternSearch(h, g, kind, budget)
	if workers != 1 and len(h) > 0 and len(h) <= len(g):
		candidates = search.top_candidates()
		if len(candidates) > 1:
			jobs = [(h, g, kind, c, budget.limit) for c in candidates]
			for model in mphelper.map_shards(_search_shard, jobs, nthread=workers):
				if model is not None:
					return model
			return None
	model = search.run()
	_logger.debug("%s search finished after %d nodes: %s", kind, budget.used, "found" if model else "none")
	return model

def find_topological_minor(h, g, budget=None, workers=1, max_host_vertices=30, max_pattern_edges=12):
	'''
	A model of a subdivision of h inside g, or None when g has no such subgraph
	'''
	return _find(h, g, TOPOLOGICAL, budget, workers, max_host_vertices, max_pattern_edges)

def find_immersion(h, g, strong=False, budget=None, workers=1, max_host_vertices=30, max_pattern_edges=12):
	kind = STRONG_IMMERSION if strong else IMMERSION
	return _find(h, g, kind, budget, workers, max_host_vertices, max_pattern_edges)
