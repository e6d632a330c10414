"""
Chain input files and the built-in generators behind ``gen`` and ``--gen``.

Two formats are read:
  * matrix-text: n lines of n whitespace-separated reals, one row per line;
  * structured: a JSON object {"n": ..., "P": [[...]], "pi": [...], "name": ...}
    where "pi" and "name" are optional.
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from markov.chain.core import MarkovChain, build_chain
from markov.chain.generators import FAMILIES
from markov.errors import BadParams, DimensionMismatch, ParseError
from markov.settings import ChainSettings

logger = logging.getLogger(__name__)

FORMATS = ("auto", "matrix-text", "structured")

# keyword parameters each generator family accepts besides size
FAMILY_PARAMS: Dict[str, Tuple[str, ...]] = {
	"cycle": (),
	"lazy-cycle": ("hold",),
	"complete": (),
	"birth-death": ("up", "down"),
	"path": (),
	"random-reversible": ("density",),
}


@dataclass(frozen=True, eq=False)
class ChainFile:
	n: int
	P: np.ndarray
	chain: MarkovChain
	pi: Optional[np.ndarray] = None
	name: Optional[str] = None


def _sniff(text: str) -> str:
	stripped = text.lstrip()
	return "structured" if stripped.startswith("{") else "matrix-text"


def _parse_matrix_text(text: str) -> List[List[float]]:
	rows = []
	for line_number, line in enumerate(text.splitlines(), start=1):
		if not line.strip():
			continue
		row = []
		position = 0
		for token in line.split():
			start = line.index(token, position)
			position = start + len(token)
			try:
				row.append(float(token))
			except ValueError as e:
				raise ParseError(f"Not a real number: {token!r}", line=line_number, column=start + 1) from e
		rows.append(row)

	if not rows:
		raise ParseError("Matrix file is empty", line=1, column=1)
	n = len(rows)
	for index, row in enumerate(rows):
		if len(row) != n:
			raise DimensionMismatch(f"Row {index} has {len(row)} entries; expected {n} for {n} rows")
	return rows


def _real_array(name: str, value: Any) -> np.ndarray:
	try:
		return np.asarray(value, dtype=float)
	except (TypeError, ValueError) as e:
		raise ParseError(f"Field {name!r} must hold real numbers") from e


def _parse_structured(text: str) -> Tuple[np.ndarray, Optional[np.ndarray], Optional[str]]:
	try:
		document = json.loads(text)
	except json.JSONDecodeError as e:
		raise ParseError(f"Invalid JSON: {e.msg}", line=e.lineno, column=e.colno) from e
	if not isinstance(document, dict):
		raise ParseError("Structured chain file must hold a JSON object", line=1, column=1)

	unknown = sorted(set(document) - {"n", "P", "pi", "name"})
	if unknown:
		raise ParseError(f"Unknown fields: {', '.join(unknown)}")
	if "n" not in document or "P" not in document:
		raise ParseError("Structured chain file needs both 'n' and 'P'")

	n = document["n"]
	if not isinstance(n, int) or isinstance(n, bool):
		raise ParseError(f"Field 'n' must be an integer, got {n!r}")
	rows = document["P"]
	if not isinstance(rows, list) or any(not isinstance(row, list) for row in rows):
		raise ParseError("Field 'P' must be a list of rows")
	if len(rows) != n or any(len(row) != n for row in rows):
		raise DimensionMismatch(f"'P' is not {n} x {n}")
	matrix = _real_array("P", rows)

	pi = None
	if document.get("pi") is not None:
		pi = _real_array("pi", document["pi"])
		if pi.shape != (n,):
			raise DimensionMismatch(f"'pi' has {pi.size} entries, expected {n}")

	name = document.get("name")
	if name is not None and not isinstance(name, str):
		raise ParseError(f"Field 'name' must be a string, got {name!r}")
	return matrix, pi, name


def parse_chain_file(
		path: str,
		fmt: str = "auto",
		settings: Optional[ChainSettings] = None,
) -> ChainFile:
	"""Read a chain file and validate it through ``build_chain``."""
	if fmt not in FORMATS:
		raise ParseError(f"Unknown chain file format {fmt!r}; expected one of {', '.join(FORMATS)}")
	file_path = Path(path)
	if not file_path.exists():
		raise FileNotFoundError(f"Chain file not found at: {file_path}")
	text = file_path.read_text(encoding="utf-8")

	if fmt == "auto":
		fmt = _sniff(text)
	logger.debug("Reading %s as %s", file_path, fmt)

	if fmt == "structured":
		matrix, pi, name = _parse_structured(text)
	else:
		matrix, pi, name = np.asarray(_parse_matrix_text(text), dtype=float), None, None

	chain = build_chain(matrix, settings, pi=pi)
	return ChainFile(n=chain.n_states, P=chain.p, chain=chain, pi=pi, name=name or file_path.stem)


def write_chain_file(chain_file: ChainFile, path: Optional[str] = None, fmt: str = "structured") -> str:
	"""
	Serialize with shortest round-trip floats. Writes to ``path`` when given and
	returns the text either way.
	"""
	if fmt == "structured":
		document: Dict[str, Any] = {"n": chain_file.n, "P": chain_file.P.tolist()}
		if chain_file.pi is not None:
			document["pi"] = chain_file.pi.tolist()
		if chain_file.name is not None:
			document["name"] = chain_file.name
		text = json.dumps(document, indent=2) + "\n"
	elif fmt == "matrix-text":
		text = "".join(" ".join(repr(float(x)) for x in row) + "\n" for row in chain_file.P)
	else:
		raise ParseError(f"Cannot write chain file format {fmt!r}")

	if path is not None:
		Path(path).write_text(text, encoding="utf-8")
	return text


def generate(
		family: str,
		size: int,
		params: Optional[Dict[str, Any]] = None,
		seed: int = 0,
		settings: Optional[ChainSettings] = None,
) -> ChainFile:
	"""Build a chain from a named family; deterministic given all arguments."""
	if family not in FAMILIES:
		raise BadParams(f"Unknown family {family!r}; expected one of {', '.join(sorted(FAMILIES))}")
	params = dict(params or {})
	unknown = sorted(set(params) - set(FAMILY_PARAMS[family]))
	if unknown:
		raise BadParams(f"Family {family} does not take: {', '.join(unknown)}")

	if family == "random-reversible":
		matrix = FAMILIES[family](size, seed=seed, **params)
	else:
		matrix = FAMILIES[family](size, **params)

	chain = build_chain(matrix, settings)
	label = ",".join(f"{key}={params[key]}" for key in sorted(params))
	name = f"{family}-{size}" + (f"-{label}" if label else "")
	if family == "random-reversible":
		name += f"-seed{seed}"
	return ChainFile(n=chain.n_states, P=chain.p, chain=chain, pi=chain.weights, name=name)


def parse_gen_spec(spec: str) -> Tuple[str, int, Dict[str, float], int]:
	"""
	Split ``family:size[:key=value,...][:seed]`` into its parts.

	>>> parse_gen_spec("random-reversible:6:density=0.5:42")
	('random-reversible', 6, {'density': 0.5}, 42)
	"""
	parts = spec.split(":")
	if not 2 <= len(parts) <= 4:
		raise BadParams(f"Generator spec {spec!r} must look like family:size[:key=value,...][:seed]")
	family, size_text = parts[0], parts[1]
	try:
		size = int(size_text)
	except ValueError as e:
		raise BadParams(f"Generator size must be an integer, got {size_text!r}") from e

	params: Dict[str, float] = {}
	if len(parts) >= 3 and parts[2]:
		for item in parts[2].split(","):
			key, separator, value = item.partition("=")
			if not separator:
				raise BadParams(f"Generator parameter {item!r} must be key=value")
			try:
				params[key.strip()] = float(value)
			except ValueError as e:
				raise BadParams(f"Generator parameter {key} must be a number, got {value!r}") from e

	seed = 0
	if len(parts) == 4 and parts[3]:
		try:
			seed = int(parts[3])
		except ValueError as e:
			raise BadParams(f"Generator seed must be an integer, got {parts[3]!r}") from e
	return family, size, params, seed
