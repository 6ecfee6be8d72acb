import logging
import math

import networkx as nx

from .core import Graph, DomainException

_logger = logging.getLogger("strukt")

###################################
# Standard families
###################################

def clique(n):
	_require(n >= 1, f"clique needs n >= 1, got {n}")
	return Graph(range(n), [(u, v) for u in range(n) for v in range(u + 1, n)])

def cycle(n):
	_require(n >= 3, f"cycle needs n >= 3, got {n}")
	return Graph(range(n), [(i, (i + 1) % n) for i in range(n)])

def path(n):
	_require(n >= 1, f"path needs n >= 1, got {n}")
	return Graph(range(n), [(i, i + 1) for i in range(n - 1)])

def grid(r, c):
	'''
	r x c grid; vertex (i, j) is numbered i * c + j
	'''
	_require(r >= 1 and c >= 1, f"grid needs positive dimensions, got {r}x{c}")
	edges = []
	for i in range(r):
		for j in range(c):
			if j + 1 < c:
				edges.append((i * c + j, i * c + j + 1))
			if i + 1 < r:
				edges.append((i * c + j, (i + 1) * c + j))
	return Graph(range(r * c), edges)

def complete_bipartite(a, b):
	_require(a >= 1 and b >= 1, f"complete_bipartite needs positive sides, got {a}, {b}")
	return Graph(range(a + b), [(u, a + v) for u in range(a) for v in range(b)])

def random_graph(n, p, seed):
	'''
	Seeded Erdos-Renyi G(n, p)
	'''
	_require(n >= 1, f"random_graph needs n >= 1, got {n}")
	_require(0 <= p <= 1, f"edge probability must lie in [0, 1], got {p}")
	return Graph.from_networkx(nx.gnp_random_graph(n, p, seed=seed))

###################################
# Structural families
###################################

def double_wheel(n):
	'''
	Cycle 0..n-1 plus the nonadjacent hubs n and n+1, each adjacent to the whole cycle.
	'''
	_require(n >= 3, f"double_wheel needs n >= 3, got {n}")
	edges = [(i, (i + 1) % n) for i in range(n)]
	edges += [(i, n) for i in range(n)]
	edges += [(i, n + 1) for i in range(n)]
	return Graph(range(n + 2), edges)

def m_graph(t):
	'''
	w = 0, w_i = i for 1 <= i <= t, z_ij = t + 1 + (i - 1) * t + (j - 1), edges w z_ij and w_i z_ij.
	'''
	_require(t >= 1, f"m_graph needs t >= 1, got {t}")
	edges = []
	for i in range(1, t + 1):
		for j in range(1, t + 1):
			z = t + 1 + (i - 1) * t + (j - 1)
			edges.append((0, z))
			edges.append((i, z))
	return Graph(range(1 + t + t * t), edges)

def _wall_layout(rows, cols):
	'''
	Returns (graph, coordinates). The rows x cols wall is the (rows + 1) x (2 cols + 2) grid where the
	vertical edge between (i, j) and (i + 1, j) is kept iff j and i have the same parity, followed by
	repeated removal of degree-1 vertices; remaining vertices are numbered row-major.
	'''
	width = 2 * cols + 2
	ng = nx.Graph()
	for i in range(rows + 1):
		for j in range(width):
			ng.add_node((i, j))
			if j + 1 < width:
				ng.add_edge((i, j), (i, j + 1))
			if i < rows and j % 2 == i % 2:
				ng.add_edge((i, j), (i + 1, j))
	while True:
		leaves = [v for v in ng.nodes() if ng.degree(v) <= 1]
		if len(leaves) == 0:
			break
		ng.remove_nodes_from(leaves)
	cells = sorted(ng.nodes())
	index = {cell:k for k, cell in enumerate(cells)}
	g = Graph(range(len(cells)), [(index[a], index[b]) for a, b in ng.edges()])
	coordinates = {index[(i, j)]:(j, -i) for i, j in cells}
	return g, coordinates

def wall(rows, cols):
	'''
	|V| = (rows + 1)(2 cols + 2) - 2 and |E| = (rows + 1)(2 cols + 1) - 2 + rows (cols + 1)
	'''
	_require(rows >= 1 and cols >= 1, f"wall needs positive dimensions, got {rows}x{cols}")
	return _wall_layout(rows, cols)[0]

def admissibility_wall(t):
	'''
	The t^2 x t^2 wall with every perimeter edge subdivided once and t added vertices in the outer
	face; added vertex i is adjacent to the i-th block of t consecutive subdivision vertices,
	counted around the outer face.
	'''
	from .embedding import Embedding, trace_faces

	_require(t >= 2, f"admissibility_wall needs t >= 2, got {t}")
	g, xy = _wall_layout(t * t, t * t)
	rotation = {}
	for v in g.vertices:
		x0, y0 = xy[v]
		rotation[v] = tuple(sorted(g.neighbors(v), key=lambda w: math.atan2(xy[w][1] - y0, xy[w][0] - x0)))
	faces = trace_faces(Embedding(g, rotation))
	outer = max(faces, key=len)
	perimeter = [(side[0], side[1]) for side in outer.sides]
	if len(perimeter) < t * t:
		raise DomainException(f"Perimeter has {len(perimeter)} edges, fewer than t^2 = {t * t}")

	next_id = len(g)
	vertices = list(g.vertices)
	edges = set(g.edges)
	subdivision = []
	for u, v in perimeter:
		edges.discard((min(u, v), max(u, v)))
		edges.add((u, next_id))
		edges.add((next_id, v))
		vertices.append(next_id)
		subdivision.append(next_id)
		next_id += 1
	for i in range(t):
		hub = next_id
		next_id += 1
		vertices.append(hub)
		for z in subdivision[i * t:(i + 1) * t]:
			edges.add((z, hub))
	_logger.debug("admissibility_wall(%d): %d vertices, outer face of length %d", t, len(vertices), len(perimeter))
	return Graph(vertices, edges)

def admissibility_wall_hubs(t):
	'''
	Identifiers of the t added vertices of admissibility_wall(t)
	'''
	g = admissibility_wall(t)
	return list(g.vertices[-t:])

def _require(condition, message):
	if not condition:
		raise DomainException(message)

FAMILIES = {
	"clique": (clique, 1),
	"cycle": (cycle, 1),
	"path": (path, 1),
	"grid": (grid, 2),
	"bipartite": (complete_bipartite, 2),
	"doublewheel": (double_wheel, 1),
	"mgraph": (m_graph, 1),
	"wall": (wall, 2),
	"admwall": (admissibility_wall, 1),
	"random": (random_graph, 3),
}
