import json
import logging
import os
import sys

from .core import Budget, StruktException, DomainException, GraphParseException, parse_graph, serialize_graph
from . import generators
from .embedding import (INFINITY, parse_surface, mf, min_genus, nicify, serialize_embedding)
from .admissibility import (parse_depth, format_depth, admissibility_exact, admissibility_greedy, ordering_admissibility)
from .cliquesum import load_tree, compose, converse_ordering
from .patterns import find_topological_minor, find_immersion
from .certcheck import load_certificate, check_certificate

_logger = logging.getLogger("strukt")

# Exit statuses
OK = 0
NEGATIVE = 1
USAGE = 2
BUDGET = 3

class CommandResult():
	'''
	status is the exit status; text goes to standard output, payload is the --json rendering.
	'''
	def __init__(self, status, text, payload):
		self.status = status
		self.text = text
		self.payload = payload

	def render(self, as_json):
		if as_json:
			return json.dumps(self.payload, indent=1, sort_keys=True) + "\n"
		return self.text if self.text.endswith("\n") else self.text + "\n"

###################################
# Input helpers
###################################

def read_text(path):
	'''
	"-" reads standard input
	'''
	if path == "-":
		return sys.stdin.read()
	with open(path) as f:
		return f.read()

def read_graph(path):
	return parse_graph(read_text(path))

def _budget(args):
	return Budget(args.budget, args.command) if args.budget is not None else None

def _number(value):
	return "inf" if value == INFINITY else value

def _parse_params(family, params):
	func, arity = generators.FAMILIES[family]
	if len(params) != arity:
		raise DomainException(f"{family} takes {arity} parameter(s), got {len(params)}")
	values = []
	for i, p in enumerate(params):
		try:
			values.append(float(p) if family == "random" and i == 1 else int(p))
		except ValueError:
			raise DomainException(f"{family}: parameter {p!r} is not a number")
	return func, values

###################################
# Subcommands
###################################

def cmd_gen(args):
	func, values = _parse_params(args.family, args.params)
	g = func(*values)
	text = serialize_graph(g)
	return CommandResult(OK, text, {"family": args.family, "params": values, "graph": text})

def cmd_adm(args):
	g = read_graph(args.graph)
	d = parse_depth(args.depth)
	budget = _budget(args)
	if args.eval is not None:
		try:
			order = [int(x) for x in read_text(args.eval).split()]
		except ValueError:
			raise GraphParseException("an ordering file lists vertex identifiers separated by whitespace")
		report = ordering_admissibility(g, order, d, budget)
		mode = "eval"
	elif args.greedy:
		report = admissibility_greedy(g, d, budget)
		mode = "greedy"
	else:
		report = admissibility_exact(g, d, budget)
		mode = "exact"
	text = f"value {report.value}\nordering {' '.join(str(v) for v in report.ordering)}\n"
	payload = dict(report.to_json(), depth=format_depth(d), mode=mode)
	return CommandResult(OK, text, payload)

def cmd_mf(args):
	h = read_graph(args.graph)
	s = parse_surface(args.surface)
	value = mf(h, s, threshold=args.threshold, budget=_budget(args), workers=args.workers)
	return CommandResult(OK, f"{_number(value)}\n", {"mf": _number(value), "surface": s.name, "threshold": args.threshold})

def cmd_genus(args):
	g = read_graph(args.graph)
	orientable = not args.nonorientable
	value = min_genus(g, orientable, _budget(args), args.workers)
	return CommandResult(OK, f"{_number(value)}\n", {"euler_genus": _number(value), "orientable": orientable})

def cmd_nicify(args):
	h = read_graph(args.graph)
	s = parse_surface(args.surface)
	result = nicify(h, s, _budget(args))
	faces = [list(f.vertices) for f in result.faces]
	lines = [serialize_embedding(result.embedding).rstrip("\n")]
	lines.extend("# face " + " ".join(str(v) for v in f) for f in faces)
	payload = {
		"graph": serialize_graph(result.graph),
		"embedding": serialize_embedding(result.embedding),
		"faces": faces,
		"model": result.model.to_json(),
	}
	return CommandResult(OK, "\n".join(lines) + "\n", payload)

def _model_result(model):
	if model is None:
		return CommandResult(NEGATIVE, "none\n", {"found": False})
	return CommandResult(OK, json.dumps(model.to_json(), sort_keys=True) + "\n", {"found": True, "model": model.to_json()})

def cmd_topminor(args):
	model = find_topological_minor(read_graph(args.pattern), read_graph(args.host), _budget(args), args.workers)
	return _model_result(model)

def cmd_immerse(args):
	model = find_immersion(read_graph(args.pattern), read_graph(args.host), args.strong, _budget(args), args.workers)
	return _model_result(model)

def _load_tree(path):
	base_dir = None if path == "-" else os.path.dirname(os.path.abspath(path))
	return load_tree(read_text(path), base_dir)

def cmd_compose(args):
	g = compose(_load_tree(args.tree), keep_deleted=args.keep_deleted)
	text = serialize_graph(g)
	return CommandResult(OK, text, {"graph": text})

def cmd_order(args):
	t = _load_tree(args.tree)
	order = converse_ordering(t, args.D, args.a)
	report = ordering_admissibility(compose(t), order, INFINITY)
	text = f"ordering {' '.join(str(v) for v in order)}\nvalue {report.value}\n"
	return CommandResult(OK, text, {"ordering": list(order.sequence), "value": report.value, "bound": args.a + args.D})

def cmd_check(args):
	base_dir = None if args.certificate == "-" else os.path.dirname(os.path.abspath(args.certificate))
	cert = load_certificate(read_text(args.certificate), base_dir)
	verdict = check_certificate(cert, _budget(args), args.workers)
	lines = ["accepted" if verdict else "rejected"]
	lines.extend(f"{r['id']}: {r['detail']}" for r in verdict.to_json()["reasons"])
	lines.extend(f"note: {n}" for n in verdict.notes)
	return CommandResult(OK if verdict else NEGATIVE, "\n".join(lines) + "\n", verdict.to_json())

COMMANDS = {
	"gen": cmd_gen,
	"adm": cmd_adm,
	"mf": cmd_mf,
	"genus": cmd_genus,
	"nicify": cmd_nicify,
	"topminor": cmd_topminor,
	"immerse": cmd_immerse,
	"compose": cmd_compose,
	"order": cmd_order,
	"check": cmd_check,
}
