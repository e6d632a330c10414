"""
Report documents for the CLI: plain dicts ready for ``json.dumps`` and a text
rendering of the same content.

Every float is emitted as the shortest decimal that round-trips; non-finite
values become null.
"""

import json
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from markov.bounds.formulas import Interval
from markov.bounds.verdict import BoundReport, ContainmentCheck, Theorem2Verdict
from markov.chain.core import MarkovChain
from markov.isoperimetry.cuts import CutReport
from markov.spectral.spectrum import SpectrumReport

SCHEMA_VERSION = "1"


@dataclass(frozen=True, eq=False)
class AnalysisRecord:
	name: str
	chain: MarkovChain
	mode: str
	k_closed: CutReport
	K: CutReport
	k_steps: Tuple[CutReport, ...] = ()
	# None when the strict-half family is empty
	k_strict: Optional[CutReport] = None
	spectrum: Optional[SpectrumReport] = None
	bounds: Optional[BoundReport] = None
	timing: Optional[Dict[str, float]] = None
	notes: Tuple[str, ...] = ()

	@property
	def checks(self) -> List[ContainmentCheck]:
		return list(self.bounds.checks) if self.bounds is not None else []

	@property
	def passed(self) -> bool:
		return all(check.passed for check in self.checks)


def _real(value: Optional[float]) -> Optional[float]:
	if value is None:
		return None
	value = float(value)
	return value if math.isfinite(value) else None


def _reals(values: Sequence[float]) -> List[Optional[float]]:
	return [_real(value) for value in values]


def chain_document(name: str, chain: MarkovChain) -> Dict[str, Any]:
	return {
		"name": name,
		"n_states": chain.n_states,
		"reversible": chain.reversible,
		"asymmetry": _real(chain.asymmetry),
		"pi": _reals(chain.weights),
	}


def cut_document(report: Optional[CutReport]) -> Optional[Dict[str, Any]]:
	if report is None:
		return None
	return {
		"value": _real(report.value),
		"n_steps": report.n_steps,
		"family": report.family.value,
		"objective": report.objective.value,
		"mode": report.mode.value,
		"witness": list(report.subset.states),
		"witness_mass": _real(report.subset.mass),
	}


def spectrum_document(report: Optional[SpectrumReport]) -> Optional[Dict[str, Any]]:
	if report is None:
		return None
	return {
		"eigenvalues": _reals(report.eigenvalues),
		"gap_at_one": _real(report.gap_at_one),
		"gap_at_minus_one": _real(report.gap_at_minus_one),
		"spectral_gap": _real(report.spectral_gap),
		"extreme_modulus": _real(report.extreme_modulus),
		"has_gap": report.has_gap(),
		"sweeps": report.sweeps,
	}


def _interval(interval: Interval) -> List[Optional[float]]:
	return [_real(interval.lower), _real(interval.upper)]


def verdict_document(verdict: Optional[Theorem2Verdict]) -> Optional[Dict[str, Any]]:
	if verdict is None:
		return None
	return {
		"r": _real(verdict.r),
		"k": _real(verdict.k),
		"K": _real(verdict.K),
		"k2": _real(verdict.k2),
		"has_gap": verdict.has_gap,
		"cond_kK": verdict.cond_kK,
		"cond_k2": verdict.cond_k2,
		"consistent": verdict.consistent,
	}


def check_document(check: ContainmentCheck) -> Dict[str, Any]:
	return {
		"name": check.name,
		"measured": _real(check.measured),
		"lower": _real(check.lower),
		"upper": _real(check.upper),
		"margin": check.margin,
		"passed": check.passed,
	}


def bounds_document(report: Optional[BoundReport]) -> Optional[Dict[str, Any]]:
	if report is None:
		return None
	bound = report.k2_bound
	return {
		"gap_k": _real(report.gap_k),
		"lawler_sokal": _interval(report.lawler_sokal),
		"theorem2_interval": _interval(report.theorem2_interval),
		"k2_lower_bound": {
			"value": _real(bound.value),
			"raw": _real(bound.raw),
			"delta": _real(bound.delta),
			"eps1": _real(bound.eps1),
			"eps2": _real(bound.eps2),
			"eps": _real(bound.eps),
		},
		"k2": cut_document(report.k2),
	}


def analysis_document(record: AnalysisRecord) -> Dict[str, Any]:
	return {
		"schema": SCHEMA_VERSION,
		"chain": chain_document(record.name, record.chain),
		"mode": record.mode,
		"cuts": {
			"k_strict": cut_document(record.k_strict),
			"k_closed": cut_document(record.k_closed),
			"k_n": [cut_document(report) for report in record.k_steps],
			"K": cut_document(record.K),
		},
		"spectrum": spectrum_document(record.spectrum),
		"bounds": bounds_document(record.bounds),
		"verdict": verdict_document(record.bounds.verdict if record.bounds is not None else None),
		"checks": [check_document(check) for check in record.checks],
		"passed": record.passed,
		"notes": list(record.notes),
		"timing": record.timing,
	}


def to_json(document: Dict[str, Any]) -> str:
	return json.dumps(document, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _format(value: Optional[float]) -> str:
	return "n/a" if value is None else repr(float(value))


def render_text(document: Dict[str, Any]) -> str:
	"""Human-readable rendering of any report document built in this module."""
	lines = []
	chain = document.get("chain")
	if chain is not None:
		lines.append(f"Chain {chain['name']}: {chain['n_states']} states, reversible={chain['reversible']}")
	if "mode" in document:
		lines.append(f"Mode: {document['mode']}")

	cuts = document.get("cuts")
	if cuts is not None:
		for label, key in (("k (strict-half)", "k_strict"), ("k (closed-half)", "k_closed"), ("K", "K")):
			lines.append(_line_from_cut(label, cuts[key]))
		for cut in cuts["k_n"]:
			lines.append(_line_from_cut(f"k_{cut['n_steps']}", cut))

	spectrum = document.get("spectrum")
	if spectrum is not None:
		lines.append("Eigenvalues: " + ", ".join(_format(value) for value in spectrum["eigenvalues"]))
		lines.append(
			f"Gap at 1: {_format(spectrum['gap_at_one'])}  gap at -1: {_format(spectrum['gap_at_minus_one'])}"
			f"  spectral gap: {_format(spectrum['spectral_gap'])}")

	bounds = document.get("bounds")
	if bounds is not None:
		lines.append(f"Lawler-Sokal interval for the gap at 1: {_pair(bounds['lawler_sokal'])}")
		lines.append(f"Spectrum interval on mean-zero functions: {_pair(bounds['theorem2_interval'])}")
		lines.append(f"k2 lower bound: {_format(bounds['k2_lower_bound']['value'])}")

	verdict = document.get("verdict")
	if verdict is not None:
		lines.append(
			f"Verdict: has_gap={verdict['has_gap']} cond_kK={verdict['cond_kK']} "
			f"cond_k2={verdict['cond_k2']} consistent={verdict['consistent']}")

	for check in document.get("checks", []):
		status = "ok" if check["passed"] else "FAILED"
		lines.append(
			f"  [{status}] {check['name']}: {_format(check['measured'])} in "
			f"[{_format(check['lower'])}, {_format(check['upper'])}] +/- {check['margin']}")
	if "passed" in document:
		lines.append("All checks passed" if document["passed"] else "Some checks FAILED")
	for note in document.get("notes", []):
		lines.append(f"Note: {note}")
	return "\n".join(lines) + "\n"


def _pair(values: Sequence[Optional[float]]) -> str:
	return f"[{_format(values[0])}, {_format(values[1])}]"


def _line_from_cut(label: str, cut: Optional[Dict[str, Any]]) -> str:
	if cut is None:
		return f"{label}: empty family"
	states = "{" + ", ".join(str(state) for state in cut["witness"]) + "}"
	return f"{label}: {_format(cut['value'])}  ({cut['family']}, {cut['mode']}, witness {states})"
