import logging
import math

import networkx as nx

from .core import Ordering, DomainException, BudgetExceededException, resolve_budget

_logger = logging.getLogger("strukt")

INFINITY = math.inf

def parse_depth(text):
	if str(text).strip().lower() in ("inf", "infinity", "∞"):
		return INFINITY
	try:
		d = int(text)
	except ValueError:
		raise DomainException(f"Depth must be a positive integer or 'inf', got {text!r}")
	if d < 1:
		raise DomainException(f"Depth must be positive, got {d}")
	return d

def format_depth(d):
	return "inf" if d == INFINITY else str(d)

class AdmissibilityReport():
	def __init__(self, value, ordering, per_vertex):
		self.value = value
		self.ordering = ordering
		self.per_vertex = per_vertex

	def to_json(self):
		return {
			"value": self.value,
			"ordering": list(self.ordering.sequence),
			"per_vertex": {str(v):b for v, b in sorted(self.per_vertex.items())},
		}

	def __repr__(self):
		return f"AdmissibilityReport(value={self.value}, ordering={list(self.ordering.sequence)})"

###################################
# Backconnectivity
###################################

def _fan_flow(g, v, prefix):
	'''
	Maximum number of paths from v to prefix pairwise meeting only in v, with internal vertices
	outside prefix; vertex capacities by splitting every other vertex into an in and out copy.
	'''
	flow = nx.DiGraph()
	sink = ("sink",)
	for p in prefix:
		flow.add_edge(("in", p), sink, capacity=1)
	for x in g.vertices:
		if x != v and x not in prefix:
			flow.add_edge(("in", x), ("out", x), capacity=1)
	for x, y in g.edges:
		for a, b in ((x, y), (y, x)):
			if a in prefix or b == v:
				continue
			flow.add_edge(("out", a), ("in", b), capacity=1)
	source = ("out", v)
	if source not in flow or sink not in flow:
		return 0
	return nx.maximum_flow_value(flow, source, sink)

def _bounded_paths(g, v, prefix, d, budget):
	'''
	Simple paths of length <= d from v ending in prefix with internal vertices outside prefix
	'''
	paths = []
	stack = [(v, (v,))]
	while stack:
		x, path = stack.pop()
		budget.tick()
		if len(path) - 1 >= d:
			continue
		for y in sorted(g.neighbors(x)):
			if y in path:
				continue
			if y in prefix:
				paths.append(path + (y,))
			else:
				stack.append((y, path + (y,)))
	return paths

def _max_packing(paths, bound, budget):
	'''
	Largest family of paths sharing only their first vertex
	'''
	paths = sorted(paths, key=lambda p: (len(p), p))
	tails = [frozenset(p[1:]) for p in paths]
	best = 0
	def rec(i, used, size):
		nonlocal best
		budget.tick()
		if size > best:
			best = size
		if best >= bound or i == len(paths):
			return
		if size + (len(paths) - i) <= best:
			return
		if not (tails[i] & used):
			rec(i + 1, used | tails[i], size + 1)
			if best >= bound:
				return
		rec(i + 1, used, size)
	rec(0, frozenset(), 0)
	return best

def fan_number(g, v, prefix, d, budget=None):
	'''
	d-backconnectivity of v when exactly the vertices of prefix precede it
	'''
	prefix = frozenset(prefix)
	if d == 1:
		return sum(1 for w in g.neighbors(v) if w in prefix)
	if d == INFINITY:
		return _fan_flow(g, v, prefix)
	budget = resolve_budget(budget, "bounded path packing")
	bound = min(g.degree(v), len(prefix))
	return _max_packing(_bounded_paths(g, v, prefix, d, budget), bound, budget)

def backconnectivity(g, order, k, d, budget=None):
	'''
	d-backconnectivity of the k-th vertex (1-indexed) of order
	'''
	if not isinstance(order, Ordering):
		order = Ordering(order, g)
	if not 1 <= k <= len(order):
		raise DomainException(f"Position {k} outside 1..{len(order)}")
	return fan_number(g, order[k - 1], order.prefix(k), d, budget)

def ordering_admissibility(g, order, d, budget=None):
	if not isinstance(order, Ordering):
		order = Ordering(order, g)
	if set(order.sequence) != set(g.vertices):
		raise DomainException("Ordering is not a permutation of the vertex set")
	budget = resolve_budget(budget, "bounded path packing")
	per_vertex = {}
	for k, v in enumerate(order.sequence, start=1):
		per_vertex[v] = fan_number(g, v, order.prefix(k), d, budget)
	return AdmissibilityReport(max(per_vertex.values(), default=0), order, per_vertex)

###################################
# Minimization over orderings
###################################

class _FanCache():
	'''
	Fan numbers keyed by (vertex, prefix set); a position's value depends only on the set before it.
	'''
	def __init__(self, g, d, budget):
		self.g = g
		self.d = d
		self.budget = budget
		self.values = {}

	def __call__(self, v, prefix):
		key = (v, prefix)
		if key not in self.values:
			self.values[key] = fan_number(self.g, v, prefix, self.d, self.budget)
		return self.values[key]

def degeneracy(g):
	'''
	Classical degeneracy, the largest core number
	'''
	if len(g) == 0:
		return 0
	return max(nx.core_number(g.to_networkx()).values())

def _greedy_order(g, fan):
	remaining = set(g.vertices)
	reversed_order = []
	while remaining:
		best = min(sorted(remaining), key=lambda v: fan(v, frozenset(remaining - {v})))
		reversed_order.append(best)
		remaining.discard(best)
	return Ordering(reversed(reversed_order), g)

def admissibility_greedy(g, d, budget=None):
	'''
	Builds the ordering back to front, each time placing last the remaining vertex with the fewest
	fan paths into the others (smallest identifier on ties). An upper bound on the d-admissibility.
	'''
	budget = resolve_budget(budget, "admissibility greedy")
	fan = _FanCache(g, d, budget)
	order = _greedy_order(g, fan)
	return ordering_admissibility(g, order, d, budget)

def admissibility_exact(g, d, budget=None, max_vertices=16):
	'''
	Minimum d-admissibility over all orderings, with a witness. Orderings are built from the back;
	for each candidate value the search memoizes the remaining sets already shown infeasible.
	'''
	if len(g) > max_vertices:
		raise BudgetExceededException(f"Exact admissibility is limited to {max_vertices} vertices, got {len(g)}", max_vertices, "admissibility exact")
	budget = resolve_budget(budget, "admissibility exact")
	if len(g) == 0:
		return AdmissibilityReport(0, Ordering(()), {})
	fan = _FanCache(g, d, budget)
	upper = ordering_admissibility(g, _greedy_order(g, fan), d, budget)
	lower = degeneracy(g)
	_logger.debug("admissibility_exact: searching values %d..%d", lower, upper.value - 1)
	for k in range(lower, upper.value):
		failed = set()
		choice = {}
		def feasible(remaining):
			if len(remaining) == 0:
				return True
			if remaining in failed:
				return False
			budget.tick()
			for v in sorted(remaining):
				rest = remaining - {v}
				if fan(v, rest) <= k and feasible(rest):
					choice[remaining] = v
					return True
			failed.add(remaining)
			return False
		full = frozenset(g.vertices)
		if feasible(full):
			reversed_order = []
			remaining = full
			while remaining:
				v = choice[remaining]
				reversed_order.append(v)
				remaining = remaining - {v}
			return ordering_admissibility(g, Ordering(reversed(reversed_order), g), d, budget)
	return upper

def is_x_based(order, X):
	'''
	True iff the vertices of X form a prefix of order
	'''
	X = set(X)
	return set(order.sequence[:len(X)]) == X
