"""
Command-line entry point: ``analyze``, ``spectrum``, ``verify`` and ``gen``.

Exit codes: 0 on success, 1 on any input or validation error (including a chain
too large for exact enumeration without ``--heuristic``), 2 when a containment
check fails.
"""

import argparse
import logging
import sys
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from markov.bounds.verdict import lemma_checks, verify_report
from markov.cli.chain_file import FORMATS, ChainFile, generate, parse_chain_file, parse_gen_spec, write_chain_file
from markov.cli.report import (
	SCHEMA_VERSION,
	AnalysisRecord,
	analysis_document,
	bounds_document,
	chain_document,
	check_document,
	render_text,
	spectrum_document,
	to_json,
	verdict_document,
)
from markov.errors import EmptyFamily, MarkovChainError, StateSpaceTooLarge
from markov.isoperimetry.constants import K_sup, k_inf
from markov.isoperimetry.cuts import CutReport, Family
from markov.settings import Settings, load_settings
from markov.spectral.spectrum import spectrum, spectrum_of_square
from utils.log import configure_logging

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_DIR = Path(__file__).resolve().parents[2] / "configs"

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_CHECK_FAILED = 2


class Timer:
	"""Wall-clock seconds per named phase."""

	def __init__(self):
		self.phases: Dict[str, float] = {}

	@contextmanager
	def phase(self, name: str) -> Iterator[None]:
		start = time.perf_counter()
		try:
			yield
		finally:
			self.phases[name] = self.phases.get(name, 0.0) + time.perf_counter() - start


def _steps(text: str) -> List[int]:
	try:
		steps = [int(item) for item in text.split(",") if item.strip()]
	except ValueError as e:
		raise argparse.ArgumentTypeError(f"--steps expects comma-separated integers, got {text!r}") from e
	if not steps or any(n < 1 for n in steps):
		raise argparse.ArgumentTypeError("--steps needs at least one positive integer")
	return steps


def _key_value(text: str) -> Sequence[str]:
	key, separator, value = text.partition("=")
	if not separator:
		raise argparse.ArgumentTypeError(f"--param expects key=value, got {text!r}")
	return key.strip(), value


def _common_parser() -> argparse.ArgumentParser:
	common = argparse.ArgumentParser(add_help=False)
	common.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug logging")
	common.add_argument(
		"--config-dir",
		default=str(DEFAULT_CONFIG_DIR),
		help="Directory holding <area>/<name>.yaml settings (default: configs/)",
	)
	common.add_argument("--tol-row", type=float, help="Row-sum tolerance for stochastic matrices")
	common.add_argument("--tol-stat", type=float, help="Tolerance for the stationary distribution")
	common.add_argument("--tol-rev", type=float, help="Tolerance for detailed balance")
	common.add_argument("--tol-gap", type=float, help="Threshold for the positivity predicates")
	common.add_argument("-o", "--output", help="Write the report here instead of standard output")
	return common


def _chain_parser(common: argparse.ArgumentParser) -> argparse.ArgumentParser:
	chain = argparse.ArgumentParser(add_help=False, parents=[common])
	chain.add_argument("path", nargs="?", help="Chain file (matrix-text or structured JSON)")
	chain.add_argument("--gen", metavar="FAMILY:SIZE[:K=V,...][:SEED]", help="Use a generated chain instead of a file")
	chain.add_argument("--input-format", choices=FORMATS, default="auto", help="Chain file format (default: auto)")
	chain.add_argument("--format", choices=["json", "text"], default="json", help="Report format (default: json)")
	chain.add_argument("--no-timing", action="store_true", help="Leave timing out of the report")
	chain.add_argument("--kappa", type=float, help="Lawler-Sokal constant (at least 1)")
	chain.add_argument("--workers", type=int, help="Threads for exact enumeration")
	return chain


def build_parser() -> argparse.ArgumentParser:
	common = _common_parser()
	chain = _chain_parser(common)

	parser = argparse.ArgumentParser(
		prog="markov",
		description="Isoperimetric constants and L2 spectra of finite reversible Markov chains",
	)
	subparsers = parser.add_subparsers(dest="command", required=True)

	analyze = subparsers.add_parser(
		"analyze", parents=[chain], help="Constants, spectrum, bounds and verdict for one chain")
	analyze.add_argument(
		"--family", choices=["strict", "closed"], default="closed", help="Family for the k_n list (default: closed)")
	analyze.add_argument("--steps", type=_steps, default=[1, 2], help="Comma-separated n for k_n (default: 1,2)")
	analyze.add_argument(
		"--heuristic",
		action="store_true",
		help="Fall back to one-sided heuristic bounds when the chain is too large to enumerate",
	)
	analyze.add_argument("--seed", type=int, help="Seed for the local-search heuristic")
	analyze.add_argument("--restarts", type=int, help="Restarts for the local-search heuristic")
	analyze.set_defaults(handler=run_analyze)

	spectrum_parser = subparsers.add_parser("spectrum", parents=[chain], help="Eigenvalues and spectral gaps")
	spectrum_parser.set_defaults(handler=run_spectrum)

	verify = subparsers.add_parser("verify", parents=[chain], help="Run every containment and per-set check")
	verify.add_argument("--steps", type=_steps, default=[2, 3, 4], help="n for the per-set checks (default: 2,3,4)")
	verify.set_defaults(handler=run_verify)

	gen = subparsers.add_parser("gen", parents=[common], help="Write a generated chain file")
	gen.add_argument("family", help="cycle, lazy-cycle, complete, birth-death, path or random-reversible")
	gen.add_argument("size", type=int)
	gen.add_argument("--seed", type=int, default=0)
	gen.add_argument("--param", type=_key_value, action="append", default=[], help="Family parameter as key=value")
	gen.add_argument(
		"--file-format", choices=["structured", "matrix-text"], default="structured", help="Output file format")
	gen.set_defaults(handler=run_gen)
	return parser


def _settings(args: argparse.Namespace) -> Settings:
	config_dir = Path(args.config_dir)
	settings = load_settings(str(config_dir)) if config_dir.is_dir() else Settings()
	if not config_dir.is_dir():
		logger.info("Config directory %s not found, using defaults", config_dir)

	chain, enumeration, eigen, bounds = settings.chain, settings.enumeration, settings.eigen, settings.bounds
	for flag, field in (("tol_row", "row_tol"), ("tol_stat", "stat_tol"), ("tol_rev", "rev_tol")):
		if getattr(args, flag, None) is not None:
			chain = chain.replace(**{field: getattr(args, flag)})
	if getattr(args, "tol_gap", None) is not None:
		eigen = eigen.replace(gap_tol=args.tol_gap)
		bounds = bounds.replace(gap_tol=args.tol_gap)
	if getattr(args, "kappa", None) is not None:
		bounds = bounds.replace(kappa=args.kappa)
	for flag, field in (("seed", "seed"), ("restarts", "restarts"), ("workers", "max_workers")):
		if getattr(args, flag, None) is not None and args.command != "gen":
			enumeration = enumeration.replace(**{field: getattr(args, flag)})
	return Settings(chain=chain, enumeration=enumeration, eigen=eigen, bounds=bounds)


def _load_chain(args: argparse.Namespace, settings: Settings) -> ChainFile:
	if args.gen and args.path:
		raise MarkovChainError("Give either a chain file or --gen, not both")
	if args.gen:
		family, size, params, seed = parse_gen_spec(args.gen)
		return generate(family, size, params, seed, settings.chain)
	if not args.path:
		raise MarkovChainError("A chain file or --gen is required")
	return parse_chain_file(args.path, args.input_format, settings.chain)


def _emit(args: argparse.Namespace, document: Dict) -> None:
	fmt = getattr(args, "format", "json")
	text = to_json(document) if fmt == "json" else render_text(document)
	if args.output:
		Path(args.output).write_text(text, encoding="utf-8")
	else:
		sys.stdout.write(text)


def _strict_or_none(compute: Callable[[], CutReport], notes: List[str]) -> Optional[CutReport]:
	try:
		return compute()
	except EmptyFamily as e:
		notes.append(str(e))
		return None


def run_analyze(args: argparse.Namespace, settings: Settings) -> int:
	source = _load_chain(args, settings)
	chain = source.chain
	timer = Timer()
	notes: List[str] = []
	enumeration = settings.enumeration

	heuristic = False
	if chain.n_states > enumeration.exact_max_states:
		if not args.heuristic:
			raise StateSpaceTooLarge(
				f"{chain.n_states} states exceed the exact enumeration limit of "
				f"{enumeration.exact_max_states}; pass --heuristic for one-sided bounds")
		heuristic = True
		notes.append("heuristic mode: k values are upper bounds on the infimum, K is a lower bound on the supremum")
		logger.warning("Chain has %d states; switching to heuristic mode", chain.n_states)

	bounds = None
	if not chain.reversible:
		notes.append("chain is not reversible: spectrum and bounds skipped")
	elif heuristic:
		notes.append("bounds need exact constants and were skipped in heuristic mode")
	else:
		with timer.phase("bounds"):
			bounds = verify_report(chain, settings.bounds, settings)
		if bounds.k_strict is None:
			notes.append(f"the {Family.STRICT_HALF.value} family is empty; gap bounds use the closed-half k")

	# cut reports the bounds already enumerated; None marks an empty family
	known: Dict[Tuple[int, Family], Optional[CutReport]] = {}
	if bounds is not None:
		known = {
			(1, Family.STRICT_HALF): bounds.k_strict,
			(1, Family.CLOSED_HALF): bounds.k,
			(2, Family.CLOSED_HALF): bounds.k2,
		}

	def k_report(n: int, family: Family) -> CutReport:
		if known.get((n, family)) is not None:
			return known[(n, family)]
		return k_inf(chain, n, family, enumeration, heuristic=heuristic, eigen_settings=settings.eigen)

	def strict_report(n: int) -> Optional[CutReport]:
		if (n, Family.STRICT_HALF) in known:
			return known[(n, Family.STRICT_HALF)]
		return _strict_or_none(lambda: k_report(n, Family.STRICT_HALF), notes)

	with timer.phase("cuts"):
		k_strict = strict_report(1)
		k_closed = k_report(1, Family.CLOSED_HALF)
		K = bounds.K if bounds is not None else K_sup(
			chain, enumeration, heuristic=heuristic, eigen_settings=settings.eigen)
		step_family = Family.parse(args.family)
		k_steps = []
		for n in args.steps:
			report = strict_report(n) if step_family is Family.STRICT_HALF else None
			k_steps.append(report if report is not None else k_report(n, Family.CLOSED_HALF))

	report_spectrum = None
	if chain.reversible:
		with timer.phase("spectrum"):
			report_spectrum = bounds.spectrum if bounds is not None else spectrum(chain, settings.eigen)

	record = AnalysisRecord(
		name=source.name or "chain",
		chain=chain,
		mode="heuristic" if heuristic else "exact",
		k_closed=k_closed,
		K=K,
		k_steps=tuple(k_steps),
		k_strict=k_strict,
		spectrum=report_spectrum,
		bounds=bounds,
		timing=None if args.no_timing else dict(timer.phases),
		notes=tuple(notes),
	)
	_emit(args, analysis_document(record))
	return EXIT_OK if record.passed else EXIT_CHECK_FAILED


def run_spectrum(args: argparse.Namespace, settings: Settings) -> int:
	source = _load_chain(args, settings)
	timer = Timer()
	with timer.phase("spectrum"):
		report = spectrum(source.chain, settings.eigen)
		square = spectrum_of_square(source.chain, settings.eigen)
	document = {
		"schema": SCHEMA_VERSION,
		"chain": chain_document(source.name or "chain", source.chain),
		"spectrum": spectrum_document(report),
		"two_step_eigenvalues": spectrum_document(square)["eigenvalues"],
		"timing": None if args.no_timing else dict(timer.phases),
	}
	_emit(args, document)
	return EXIT_OK


def run_verify(args: argparse.Namespace, settings: Settings) -> int:
	source = _load_chain(args, settings)
	chain = source.chain
	timer = Timer()
	notes: List[str] = []

	with timer.phase("bounds"):
		bounds = verify_report(chain, settings.bounds, settings)
	checks = list(bounds.checks)
	if chain.n_states <= settings.bounds.lemma_max_states:
		with timer.phase("per-set"):
			checks.extend(lemma_checks(chain, args.steps, settings.bounds))
	else:
		notes.append(
			f"per-set checks skipped above {settings.bounds.lemma_max_states} states")

	passed = all(check.passed for check in checks)
	document = {
		"schema": SCHEMA_VERSION,
		"chain": chain_document(source.name or "chain", chain),
		"bounds": bounds_document(bounds),
		"verdict": verdict_document(bounds.verdict),
		"checks": [check_document(check) for check in checks],
		"passed": passed,
		"notes": notes,
		"timing": None if args.no_timing else dict(timer.phases),
	}
	_emit(args, document)
	return EXIT_OK if passed else EXIT_CHECK_FAILED


def run_gen(args: argparse.Namespace, settings: Settings) -> int:
	params = {key: value for key, value in args.param}
	source = generate(args.family, args.size, params, args.seed, settings.chain)
	text = write_chain_file(source, args.output, args.file_format)
	if not args.output:
		sys.stdout.write(text)
	return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
	parser = build_parser()
	args = parser.parse_args(argv)
	configure_logging(args.verbose)
	try:
		settings = _settings(args)
		return args.handler(args, settings)
	except (ValueError, OSError) as e:
		# MarkovChainError derives from ValueError; load_yaml raises plain ValueError
		print(f"ERROR: {e}", file=sys.stderr)
		return EXIT_INPUT_ERROR
