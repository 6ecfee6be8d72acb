import argparse
import logging
import sys

from .core import StruktException, BudgetExceededException
from . import commands
from .generators import FAMILIES
from .embedding import DEFAULT_THRESHOLD

_logger = logging.getLogger("strukt")

def build_parser():
	parser = argparse.ArgumentParser(prog="strukt", description="Structural graph toolkit: embeddings, admissibility, clique-sums, patterns and certificate checking.")
	parser.add_argument("--json", action="store_true", help="Machine-readable output")
	parser.add_argument("--budget", type=int, default=None, help="Search node budget (default: STRUKT_BUDGET or 1000000)")
	parser.add_argument("--workers", type=int, default=1, help="Worker processes for searches; 0 means one per CPU")
	parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG logging on stderr")
	sub = parser.add_subparsers(dest="command", metavar="command")
	sub.required = True

	p = sub.add_parser("gen", help="Generate a graph family")
	p.add_argument("family", choices=sorted(FAMILIES))
	p.add_argument("params", nargs="*")

	p = sub.add_parser("adm", help="Admissibility of a graph")
	p.add_argument("graph")
	p.add_argument("--depth", required=True, help="Positive integer or 'inf'")
	mode = p.add_mutually_exclusive_group()
	mode.add_argument("--exact", action="store_true")
	mode.add_argument("--greedy", action="store_true")
	mode.add_argument("--eval", metavar="ORDERING", default=None)

	p = sub.add_parser("mf", help="Minimum number of faces dominating the high-degree vertices")
	p.add_argument("graph")
	p.add_argument("--surface", required=True)
	p.add_argument("--threshold", type=int, default=DEFAULT_THRESHOLD)

	p = sub.add_parser("genus", help="Minimum euler genus")
	p.add_argument("graph")
	p.add_argument("--nonorientable", action="store_true")

	p = sub.add_parser("nicify", help="Nice embedding of a graph")
	p.add_argument("graph")
	p.add_argument("--surface", required=True)

	p = sub.add_parser("topminor", help="Topological minor test")
	p.add_argument("pattern")
	p.add_argument("host")

	p = sub.add_parser("immerse", help="Immersion test")
	p.add_argument("pattern")
	p.add_argument("host")
	p.add_argument("--strong", action="store_true")

	p = sub.add_parser("compose", help="Compose a clique-sum tree")
	p.add_argument("tree")
	p.add_argument("--keep-deleted", action="store_true")

	p = sub.add_parser("order", help="Low-admissibility ordering of a clique-sum tree")
	p.add_argument("tree")
	p.add_argument("--D", type=int, required=True)
	p.add_argument("--a", type=int, required=True)

	p = sub.add_parser("check", help="Check a structure certificate")
	p.add_argument("certificate")
	return parser

def _configure_logging(verbose):
	level = logging.WARNING if verbose == 0 else logging.INFO if verbose == 1 else logging.DEBUG
	logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")

def main(argv=None):
	parser = build_parser()
	try:
		args = parser.parse_args(argv)
	except SystemExit as e:
		return e.code
	_configure_logging(args.verbose)
	try:
		result = commands.COMMANDS[args.command](args)
	except BudgetExceededException as e:
		print(f"error: {e}", file=sys.stderr)
		return commands.BUDGET
	except (StruktException, OSError) as e:
		print(f"error: {e}", file=sys.stderr)
		return commands.USAGE
	sys.stdout.write(result.render(args.json))
	return result.status

if __name__ == "__main__":
	sys.exit(main())
