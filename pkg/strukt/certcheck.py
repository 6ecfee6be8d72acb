import itertools
import json
import logging
import math

from .core import (Graph, PathDecomposition, Verdict, Reason, parse_graph, serialize_graph,
	ContractViolationException, GraphParseException)
from .embedding import (DiskGraph, SPHERE, parse_surface, parse_embedding, serialize_embedding, euler_genus,
	embeds_in, mf, radial_distance, cyclic_equal, occurs_in_cyclic_order, _compatible_classes)
from .cliquesum import compose, tree_from_json, tree_to_json, _reject_unknown
from . import mphelper

_logger = logging.getLogger("strukt")

INFINITY = math.inf
CERTIFICATE_FORMAT = 1

BOUNDED_DEGREE = "bounded-degree"
NONEMBEDDABLE_SURFACE = "nonembeddable-surface"
FEW_VORTEX_FACES = "few-vortex-faces"
CASES = (BOUNDED_DEGREE, NONEMBEDDABLE_SURFACE, FEW_VORTEX_FACES)

BORDERED_MF_NOTE = "mf over a surface with boundary is taken over the closed surface obtained by capping every boundary component"

def _edge_key(u, v):
	return (u, v) if u < v else (v, u)

def _union(graphs):
	vertices = set()
	edges = set()
	for g in graphs:
		vertices.update(g.vertices)
		edges.update(g.edges)
	return Graph(vertices, edges)

###################################
# Witness types
###################################

class Vortex():
	'''
	graph is attached through boundary (v_1..v_r, base identifiers); decomposition has one bag per boundary vertex.
	face is the vertex sequence of the base face the vortex sits in.
	'''
	def __init__(self, graph, boundary, decomposition, face=()):
		self.graph = graph
		self.boundary = tuple(boundary)
		self.decomposition = decomposition if isinstance(decomposition, PathDecomposition) else PathDecomposition(decomposition)
		self.face = tuple(face)

	def __repr__(self):
		return f"Vortex(boundary={list(self.boundary)}, bags={len(self.decomposition)})"

class Outgrowth():
	def __init__(self, base, vortices=(), strict=False):
		self.base = base
		self.vortices = list(vortices)
		self.strict = strict

	def graph(self):
		return _union([self.base.graph] + [v.graph for v in self.vortices])

class ExpansionParams():
	'''
	(n, t, D, m, a): boundary length bound, anchor bound (INFINITY allowed), degree bound, curve length bound, apex bound
	'''
	def __init__(self, n, t, D, m, a):
		self.n = n
		self.t = t
		self.D = D
		self.m = m
		self.a = a

	def __repr__(self):
		return f"ExpansionParams(n={self.n}, t={self.t}, D={self.D}, m={self.m}, a={self.a})"

class BasicWitness():
	def __init__(self, disk, S=(), A=(), params=None):
		self.disk = disk
		self.S = frozenset(S)
		self.A = frozenset(A)
		self.params = params

class Pasting():
	'''
	Pastes patch into the face with vertex sequence face; the child boundary must run along that face.
	'''
	def __init__(self, face, patch, strict=False):
		self.face = tuple(face)
		self.patch = patch
		self.strict = strict

class PatchTree():
	def __init__(self, root, pastings=()):
		self.root = root
		self.pastings = list(pastings)

	def graph(self):
		return _union([self.root.disk.graph] + [p.patch.graph() for p in self.pastings])

	@property
	def boundary(self):
		return self.root.disk.boundary_vertices

class CertificateParams():
	def __init__(self, n, D, m, k, p, a, t=None):
		self.n = n
		self.D = D
		self.m = m
		self.k = k
		self.p = p
		self.a = a
		self.t = t

class PieceWitness():
	'''
	apex is A_i; outgrowth, surface and patches are in the piece's own identifiers.
	'''
	def __init__(self, apex, case, outgrowth=None, surface=None, patches=()):
		self.apex = frozenset(apex)
		self.case = case
		self.outgrowth = outgrowth
		self.surface = surface
		self.patches = list(patches)

class StructureCertificate():
	def __init__(self, host, H, tree, pieces, params, threshold=4):
		self.host = host
		self.H = H
		self.tree = tree
		self.pieces = list(pieces)
		self.params = params
		self.threshold = threshold

###################################
# Vortices and outgrowths
###################################

def _check_decomposition(v, verdict):
	for clause, detail in v.decomposition.validate(v.graph):
		verdict.fail(Reason.PATH_DECOMPOSITION, f"{clause}: {detail}")
	if len(v.decomposition) != len(v.boundary):
		verdict.fail(Reason.BAG_COUNT, f"{len(v.boundary)} boundary vertices but {len(v.decomposition)} bags")
	if len(set(v.boundary)) != len(v.boundary):
		verdict.fail(Reason.BOUNDARY_BAG_MEMBERSHIP, "boundary repeats a vertex")
	for j, (x, bag) in enumerate(zip(v.boundary, v.decomposition.bags), start=1):
		if x not in bag:
			verdict.fail(Reason.BOUNDARY_BAG_MEMBERSHIP, f"boundary vertex {x} missing from bag {j}")

def check_vortex(v, p):
	'''
	Valid path decomposition of width <= p with the j-th boundary vertex in the j-th bag
	'''
	verdict = Verdict()
	_check_decomposition(v, verdict)
	if v.decomposition.width > p:
		verdict.fail(Reason.WIDTH, f"width {v.decomposition.width} exceeds {p}")
	return verdict

def check_standard_vortex(v, p):
	'''
	Valid path decomposition with the j-th boundary vertex in the j-th bag and any two bags sharing at most p vertices
	'''
	verdict = Verdict()
	_check_decomposition(v, verdict)
	bags = v.decomposition.bags
	for i, j in itertools.combinations(range(len(bags)), 2):
		shared = len(bags[i] & bags[j])
		if shared > p:
			verdict.fail(Reason.STANDARD_INTERSECTION, f"bags {i + 1} and {j + 1} share {shared} vertices")
	return verdict

def _base_faces(base, verdict):
	g = base.graph
	if not g.is_connected():
		verdict.fail(Reason.BASE_EMBEDDING, "base graph is disconnected")
		return None
	return base.faces()

def _face_index(faces, sequence, reflect=True):
	for i, f in enumerate(faces):
		if cyclic_equal(list(f.vertices), list(sequence), reflect):
			return i
	return None

def check_outgrowth(o, k, p):
	verdict = Verdict()
	if len(o.vortices) > k:
		verdict.fail(Reason.VORTEX_COUNT, f"{len(o.vortices)} vortices, at most {k} allowed")
	faces = _base_faces(o.base, verdict)
	base = o.base.graph
	base_edges = set(base.edges)
	used_faces = {}
	for i, v in enumerate(o.vortices):
		verdict.extend(check_vortex(v, p), f"vortex {i}: ")
		attached = set(base.vertices) & set(v.graph.vertices)
		if attached != set(v.boundary) or not set(v.boundary) <= set(v.graph.vertices):
			verdict.fail(Reason.ATTACHMENT_SET, f"vortex {i}: base vertices {sorted(attached)} differ from boundary {sorted(v.boundary)}")
		shared = sorted(base_edges & set(v.graph.edges))
		if shared:
			verdict.fail(Reason.VORTEX_EDGE_DISJOINTNESS, f"vortex {i} shares base edges {shared}")
		if faces is None or len(v.boundary) == 0:
			continue
		index = _face_index(faces, v.face)
		if index is None:
			verdict.fail(Reason.DESIGNATED_FACE, f"vortex {i}: {list(v.face)} is not a face of the base")
			continue
		if index in used_faces:
			verdict.fail(Reason.DISTINCT_FACES, f"vortices {used_faces[index]} and {i} sit in the same face")
		used_faces.setdefault(index, i)
		if not occurs_in_cyclic_order(v.boundary, faces[index].vertices, reflect=not o.strict):
			verdict.fail(Reason.ATTACHMENT_ORDER, f"vortex {i}: boundary does not follow the face in cyclic order")
	for (i, a), (j, b) in itertools.combinations(enumerate(o.vortices), 2):
		shared = sorted(set(a.graph.vertices) & set(b.graph.vertices))
		if shared:
			verdict.fail(Reason.VORTEX_DISJOINTNESS, f"vortices {i} and {j} share vertices {shared}")
	return verdict

###################################
# Basic graphs, patches, expansions
###################################

def check_basic(w, params=None):
	'''
	Size bounds, and every vertex outside A of degree > D within m vertices (along a curve meeting the
	graph only in vertices) of some vertex of S. With t infinite the anchor conditions are vacuous.
	'''
	params = params if params is not None else w.params
	if params is None:
		raise ContractViolationException("check_basic needs (n, t, D, m, a)", "params")
	verdict = Verdict()
	g = w.disk.graph
	problems = w.disk.problems()
	for problem in problems:
		verdict.fail(Reason.DISK_EMBEDDING, problem)
	outside = sorted((w.S | w.A) - set(g.vertices))
	if outside:
		verdict.fail(Reason.WITNESS_VERTICES, f"S or A name vertices {outside} outside the graph")
	if len(w.disk.boundary_vertices) > params.n:
		verdict.fail(Reason.BOUNDARY_SIZE, f"{len(w.disk.boundary_vertices)} boundary vertices, at most {params.n} allowed")
	if len(w.A) > params.a:
		verdict.fail(Reason.APEX_COUNT, f"|A| = {len(w.A)} exceeds {params.a}")
	if params.t == INFINITY:
		return verdict
	if len(w.S) >= params.t:
		verdict.fail(Reason.ANCHOR_COUNT, f"|S| = {len(w.S)} is not below t = {params.t}")
	if problems:
		return verdict
	anchors = sorted(w.S & set(g.vertices))
	for v in g.vertices:
		if v in w.A or g.degree(v) <= params.D:
			continue
		if not any(radial_distance(w.disk, v, s) <= params.m for s in anchors):
			verdict.fail(Reason.FAR_HIGH_DEGREE, f"vertex {v} of degree {g.degree(v)} is farther than {params.m} from S")
	return verdict

def _check_pasting(faces, pasting, taken, used_faces, outer, where, verdict, missing_reason):
	'''
	Checks one pasting of pasting.patch into faces; taken holds the vertices present before it.
	'''
	index = _face_index(faces, pasting.face) if faces is not None else None
	if index is None:
		verdict.fail(missing_reason, f"{where}: {list(pasting.face)} is not a face")
		return
	if outer is not None and index == outer:
		verdict.fail(Reason.PASTING_FACE, f"{where}: pasting into the outer face")
	if index in used_faces:
		verdict.fail(Reason.DISTINCT_FACES, f"{where}: face already used by {used_faces[index]}")
	used_faces.setdefault(index, where)
	walk = faces[index].vertices
	if not faces[index].is_cycle():
		verdict.fail(Reason.FACE_NOT_CYCLE, f"{where}: face walk {list(walk)} is not a cycle")
	if not cyclic_equal(list(pasting.patch.boundary), list(walk), reflect=not pasting.strict):
		verdict.fail(Reason.PASTING_LABELS, f"{where}: child boundary {list(pasting.patch.boundary)} does not match the face")
	clash = sorted((set(pasting.patch.graph().vertices) & taken) - set(walk))
	if clash:
		verdict.fail(Reason.PASTING_VERTEX_CLASH, f"{where}: child reuses vertices {clash}")

def check_patch(t, params):
	'''
	Every node is basic; children are pasted into pairwise distinct inner faces of their parent, each
	bounded by a cycle that matches the child's boundary.
	'''
	verdict = Verdict()
	verdict.extend(check_basic(t.root, params))
	embedding = t.root.disk.embedding
	faces = None
	outer = None
	if len(t.pastings) > 0 and not t.root.disk.problems():
		faces = embedding.faces()
		outer = _face_index(faces, t.root.disk.outer_face)
	taken = set(t.root.disk.graph.vertices)
	used_faces = {}
	for i, pasting in enumerate(t.pastings):
		where = f"pasting {i}"
		_check_pasting(faces, pasting, taken, used_faces, outer, where, verdict, Reason.PASTING_FACE)
		verdict.extend(check_patch(pasting.patch, params), f"{where}: ")
		taken |= set(pasting.patch.graph().vertices)
	return verdict

def check_expansion(gp, o, patches, params):
	'''
	gp consists of the vortices of o and a subgraph of the base with patches pasted into distinct faces
	'''
	verdict = Verdict()
	faces = _base_faces(o.base, verdict)
	taken = set(o.graph().vertices)
	used_faces = {}
	composition = [o.base.graph]
	for i, pasting in enumerate(patches):
		where = f"patch {i}"
		_check_pasting(faces, pasting, taken, used_faces, None, where, verdict, Reason.EXPANSION_FACE)
		verdict.extend(check_patch(pasting.patch, params), f"{where}: ")
		patch_graph = pasting.patch.graph()
		taken |= set(patch_graph.vertices)
		composition.append(patch_graph)
	pasted = _union(composition)
	gp_vertices = set(gp.vertices)
	gp_edges = set(gp.edges)
	vortex_vertices = set()
	vortex_edges = set()
	for i, v in enumerate(o.vortices):
		missing_vertices = sorted(set(v.graph.vertices) - gp_vertices)
		missing_edges = sorted(set(v.graph.edges) - gp_edges)
		if missing_vertices or missing_edges:
			verdict.fail(Reason.EXPANSION_VORTEX, f"vortex {i} is not part of the graph: vertices {missing_vertices}, edges {missing_edges}")
		vortex_vertices |= set(v.graph.vertices)
		vortex_edges |= set(v.graph.edges)
	stray_vertices = sorted(gp_vertices - vortex_vertices - set(pasted.vertices))
	stray_edges = sorted(e for e in gp_edges - vortex_edges if not pasted.has_edge(*e))
	if stray_vertices or stray_edges:
		verdict.fail(Reason.EXPANSION_SUBGRAPH, f"vertices {stray_vertices} and edges {stray_edges} are not in the pasted composition")
	return verdict

###################################
# Structure certificates
###################################

def _check_surface_genus(o, s, verdict):
	g = o.base.graph
	if not g.is_connected():
		return
	eg, orientable = euler_genus(o.base)
	for cls_orientable, max_eg in _compatible_classes(s.closed()):
		if cls_orientable == orientable and eg <= max_eg:
			return
	kind = "orientable" if orientable else "non-orientable"
	verdict.fail(Reason.SURFACE_GENUS, f"{kind} base embedding of euler genus {eg} does not fit {s.name}")

def _check_outgrowth_piece(c, w, verdict):
	if w.outgrowth is None or w.surface is None:
		verdict.fail(Reason.CASE_TAG, f"case {w.case} needs an outgrowth and a surface")
		return False
	verdict.extend(check_outgrowth(w.outgrowth, c.params.k, c.params.p))
	_check_surface_genus(w.outgrowth, w.surface, verdict)
	return True

def _check_piece(c, i, budget):
	verdict = Verdict()
	g = c.tree.pieces[i]
	w = c.pieces[i]
	params = c.params
	outside = sorted(w.apex - set(g.vertices))
	if outside:
		verdict.fail(Reason.WITNESS_VERTICES, f"apex vertices {outside} are not in the piece")
	if len(w.apex) > params.a:
		verdict.fail(Reason.APEX_BUDGET, f"|A| = {len(w.apex)} exceeds a = {params.a}")
	gi = g.remove_vertices(w.apex)
	if w.case == BOUNDED_DEGREE:
		if gi.max_degree() > params.D:
			verdict.fail(Reason.MAX_DEGREE, f"maximum degree {gi.max_degree()} exceeds D = {params.D}")
		return verdict
	if w.case == NONEMBEDDABLE_SURFACE:
		if not _check_outgrowth_piece(c, w, verdict):
			return verdict
		if w.outgrowth.graph() != gi:
			verdict.fail(Reason.OUTGROWTH_GRAPH, "outgrowth is not the piece minus its apex set")
		closed = w.surface.closed()
		if embeds_in(c.H, closed, budget):
			verdict.fail(Reason.H_EMBEDS, f"H embeds in {closed.name}")
		return verdict
	if w.case != FEW_VORTEX_FACES:
		verdict.fail(Reason.CASE_TAG, f"unknown case {w.case!r}")
		return verdict
	if not _check_outgrowth_piece(c, w, verdict):
		return verdict
	closed = w.surface.closed()
	if w.surface.boundary_components:
		verdict.note(BORDERED_MF_NOTE)
	if not embeds_in(c.H, closed, budget):
		verdict.fail(Reason.H_NOT_EMBEDS, f"H does not embed in {closed.name}")
		return verdict
	value = mf(c.H, closed, c.threshold, budget)
	if value < 2:
		verdict.fail(Reason.MF_TOO_SMALL, f"mf(H, {closed.name}) = {value} is below 2")
	outgrowth_graph = w.outgrowth.graph()
	high_vortices = set()
	for v in outgrowth_graph.vertices:
		if outgrowth_graph.degree(v) <= params.D:
			continue
		holders = [j for j, vx in enumerate(w.outgrowth.vortices) if v in vx.graph]
		if len(holders) == 0:
			verdict.fail(Reason.HIGH_DEGREE_OUTSIDE_VORTEX, f"vertex {v} of degree {outgrowth_graph.degree(v)} lies in no vortex")
		high_vortices.update(holders)
	if len(high_vortices) >= value:
		verdict.fail(Reason.TOO_MANY_HIGH_DEGREE_VORTICES, f"{len(high_vortices)} vortices hold high-degree vertices, mf is {value}")
	t = mf(c.H, SPHERE, c.threshold, budget) if embeds_in(c.H, SPHERE, budget) else INFINITY
	expansion_params = ExpansionParams(params.n, t, params.D, params.m, params.a)
	verdict.extend(check_expansion(gi, w.outgrowth, w.patches, expansion_params))
	return verdict

def _piece_shard(job):
	c, i, limit = job
	return _check_piece(c, i, limit)

def check_certificate(c, budget=None, workers=1):
	'''
	Checks the clique-sum tree composes to the host and every piece against its tagged case.
	Budget overruns in mf or embeddability propagate; no verdict is guessed.
	'''
	verdict = Verdict()
	try:
		c.tree.validate()
	except ContractViolationException as e:
		verdict.fail(Reason.TREE_INVALID, str(e))
		return verdict
	if len(c.pieces) != len(c.tree.pieces):
		verdict.fail(Reason.PIECE_COUNT, f"{len(c.tree.pieces)} pieces but {len(c.pieces)} witnesses")
		return verdict
	if compose(c.tree).compact() != c.host.compact():
		verdict.fail(Reason.HOST_COMPOSITION, "composing the tree does not give the host")
	if not c.H.is_connected() or len(c.H) == 0:
		needs_h = [i for i, w in enumerate(c.pieces) if w.case != BOUNDED_DEGREE]
		if needs_h:
			raise ContractViolationException("H must be a non-empty connected graph", "pattern")
	if workers != 1 and len(c.pieces) > 1:
		limit = budget.limit if hasattr(budget, "limit") else budget
		results = mphelper.map_shards(_piece_shard, [(c, i, limit) for i in range(len(c.pieces))], nthread=workers)
	else:
		results = [_check_piece(c, i, budget) for i in range(len(c.pieces))]
	for i, result in enumerate(results):
		verdict.extend(result, f"piece {i}: ")
	_logger.info("Certificate %s with %d pieces", "accepted" if verdict else "rejected", len(c.pieces))
	return verdict

###################################
# JSON format
###################################

def _int_list(value, where):
	try:
		return [int(x) for x in value]
	except (TypeError, ValueError):
		raise GraphParseException(f"{where}: expected a list of integers")

def _explicit_graph(obj, where):
	_reject_unknown(obj, ("vertices", "edges"), where)
	vertices = _int_list(obj.get("vertices", []), where)
	try:
		edges = [(int(u), int(v)) for u, v in obj.get("edges", [])]
	except (TypeError, ValueError):
		raise GraphParseException(f"{where}: edges must be integer pairs")
	return Graph(vertices, edges)

def _explicit_graph_json(g):
	return {"vertices": list(g.vertices), "edges": [list(e) for e in g.edges]}

def _vortex_from_json(obj, where):
	_reject_unknown(obj, ("graph", "boundary", "bags", "face"), where)
	bags = [_int_list(b, where) for b in obj.get("bags", [])]
	return Vortex(_explicit_graph(obj.get("graph", {}), f"{where}.graph"), _int_list(obj.get("boundary", []), where),
		PathDecomposition(bags), _int_list(obj.get("face", []), where))

def _outgrowth_from_json(obj, where):
	_reject_unknown(obj, ("embedding", "vortices", "strict"), where)
	base = parse_embedding(obj.get("embedding", ""))
	vortices = [_vortex_from_json(v, f"{where}.vortices[{i}]") for i, v in enumerate(obj.get("vortices", []))]
	return Outgrowth(base, vortices, bool(obj.get("strict", False)))

def _outgrowth_to_json(o):
	return {
		"embedding": serialize_embedding(o.base),
		"strict": o.strict,
		"vortices": [{
			"graph": _explicit_graph_json(v.graph),
			"boundary": list(v.boundary),
			"bags": [sorted(b) for b in v.decomposition.bags],
			"face": list(v.face),
		} for v in o.vortices],
	}

def _patch_from_json(obj, where):
	_reject_unknown(obj, ("embedding", "outer_face", "boundary", "S", "A", "pastings"), where)
	disk = DiskGraph(parse_embedding(obj.get("embedding", "")), _int_list(obj.get("outer_face", []), where),
		_int_list(obj.get("boundary", []), where))
	root = BasicWitness(disk, _int_list(obj.get("S", []), where), _int_list(obj.get("A", []), where))
	return PatchTree(root, _pastings_from_json(obj.get("pastings", []), where))

def _pastings_from_json(items, where):
	pastings = []
	for i, item in enumerate(items):
		at = f"{where}.pastings[{i}]"
		_reject_unknown(item, ("face", "patch", "strict"), at)
		pastings.append(Pasting(_int_list(item.get("face", []), at), _patch_from_json(item.get("patch", {}), f"{at}.patch"),
			bool(item.get("strict", False))))
	return pastings

def _pastings_to_json(pastings):
	return [{"face": list(p.face), "strict": p.strict, "patch": _patch_to_json(p.patch)} for p in pastings]

def _patch_to_json(t):
	disk = t.root.disk
	return {
		"embedding": serialize_embedding(disk.embedding),
		"outer_face": list(disk.outer_face),
		"boundary": list(disk.boundary_vertices),
		"S": sorted(t.root.S),
		"A": sorted(t.root.A),
		"pastings": _pastings_to_json(t.pastings),
	}

def _number(value, where, allow_infinity=False):
	if allow_infinity and str(value).lower() in ("inf", "infinity"):
		return INFINITY
	try:
		return int(value)
	except (TypeError, ValueError):
		raise GraphParseException(f"{where}: expected an integer")

def _format_number(value):
	return "inf" if value == INFINITY else value

def certificate_from_json(obj, base_dir=None):
	_reject_unknown(obj, ("format", "host", "H", "tree", "params", "pieces", "threshold"), "certificate")
	if obj.get("format") != CERTIFICATE_FORMAT:
		raise GraphParseException(f"certificate: unsupported format {obj.get('format')!r}")
	for key in ("host", "H", "tree", "params", "pieces"):
		if key not in obj:
			raise GraphParseException(f"certificate: missing field {key!r}")
	raw = obj["params"]
	_reject_unknown(raw, ("n", "D", "m", "k", "p", "a", "t"), "certificate.params")
	try:
		params = CertificateParams(*[_number(raw[key], f"params.{key}") for key in ("n", "D", "m", "k", "p", "a")],
			t=_number(raw["t"], "params.t", True) if "t" in raw else None)
	except KeyError as e:
		raise GraphParseException(f"certificate.params: missing {e.args[0]!r}")
	pieces = []
	for i, item in enumerate(obj["pieces"]):
		where = f"certificate.pieces[{i}]"
		_reject_unknown(item, ("apex", "case", "surface", "outgrowth", "patches"), where)
		case = item.get("case")
		if case not in CASES:
			raise GraphParseException(f"{where}: case must be one of {', '.join(CASES)}")
		outgrowth = _outgrowth_from_json(item["outgrowth"], f"{where}.outgrowth") if "outgrowth" in item else None
		surface = parse_surface(item["surface"]) if "surface" in item else None
		patches = _pastings_from_json(item.get("patches", []), where)
		pieces.append(PieceWitness(_int_list(item.get("apex", []), where), case, outgrowth, surface, patches))
	return StructureCertificate(parse_graph(obj["host"]), parse_graph(obj["H"]), tree_from_json(obj["tree"], base_dir, "certificate.tree"),
		pieces, params, _number(obj.get("threshold", 4), "threshold"))

def certificate_to_json(c):
	params = {"n": c.params.n, "D": c.params.D, "m": c.params.m, "k": c.params.k, "p": c.params.p, "a": c.params.a}
	if c.params.t is not None:
		params["t"] = _format_number(c.params.t)
	pieces = []
	for w in c.pieces:
		item = {"apex": sorted(w.apex), "case": w.case}
		if w.surface is not None:
			item["surface"] = w.surface.name
		if w.outgrowth is not None:
			item["outgrowth"] = _outgrowth_to_json(w.outgrowth)
		if w.patches:
			item["patches"] = _pastings_to_json(w.patches)
		pieces.append(item)
	return {
		"format": CERTIFICATE_FORMAT,
		"host": serialize_graph(c.host),
		"H": serialize_graph(c.H),
		"tree": tree_to_json(c.tree),
		"params": params,
		"threshold": c.threshold,
		"pieces": pieces,
	}

def load_certificate(text, base_dir=None):
	try:
		obj = json.loads(text)
	except json.JSONDecodeError as e:
		raise GraphParseException(f"invalid JSON: {e.msg}", e.lineno)
	return certificate_from_json(obj, base_dir)

def dump_certificate(c):
	return json.dumps(certificate_to_json(c), indent=1, sort_keys=True)
