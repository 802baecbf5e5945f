"""Input parsing and the analysis report.

Input files are JSON objects ``{"n": int, "F": gram, "G": gram}`` (pencils)
or ``{"n": int, "gram": gram}`` (single forms), optionally carrying
``"schema": 1``.  Unknown keys are rejected.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from quadpencil.forms import FormError, QuadraticForm, rank
from quadpencil.local import REAL, LocalPlace, WittData, witt_index_local
from quadpencil.pencil import (
    Pencil,
    PencilClass,
    PencilError,
    SweepResult,
    char_poly,
    classify,
    four_rank6_decompose,
    mordell_sweep,
)
from quadpencil.residues import ResidueContext, ResidueError, plane_criterion
from quadpencil.scalars import Poly, ScalarError, as_fraction, factor_over_Q

SCHEMA = 1


class ParseError(ValueError):
    """Malformed input (exit code 1)."""


class ValidationError(ValueError):
    """Well-formed input violating a mathematical precondition (exit code 2)."""


def _check_keys(data, allowed: set, required: set, what: str):
    if not isinstance(data, dict):
        raise ParseError(f"{what}: expected a JSON object")
    extra = set(data) - allowed
    if extra:
        raise ParseError(f"{what}: unknown field(s) {sorted(extra)}")
    missing = required - set(data)
    if missing:
        raise ParseError(f"{what}: missing field(s) {sorted(missing)}")
    if "schema" in data and data["schema"] != SCHEMA:
        raise ParseError(f"{what}: unsupported schema {data['schema']!r}")


def _gram(rows, name: str):
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ParseError(f"{name}: expected a list of rows")
    out = []
    for i, r in enumerate(rows):
        row = []
        for j, x in enumerate(r):
            if isinstance(x, bool) or not isinstance(x, (int, str)):
                raise ParseError(f"{name}[{i}][{j}]: expected an integer or a 'p/q' string")
            try:
                row.append(as_fraction(x))
            except (ScalarError, ZeroDivisionError) as exc:
                raise ParseError(f"{name}[{i}][{j}]: {exc}") from exc
        out.append(row)
    return out


def _form(rows, n: int, name: str) -> QuadraticForm:
    g = _gram(rows, name)
    if len(g) != n or any(len(r) != n for r in g):
        raise ValidationError(f"{name}: Gram matrix is not {n}x{n}")
    try:
        return QuadraticForm(g)
    except FormError as exc:
        raise ValidationError(f"{name}: {exc}") from exc


def _n(data) -> int:
    n = data["n"]
    if isinstance(n, bool) or not isinstance(n, int):
        raise ParseError("n: expected an integer")
    if n < 1:
        raise ValidationError("n must be positive")
    return n


def pencil_from_data(data) -> Pencil:
    _check_keys(data, {"schema", "n", "F", "G"}, {"n", "F", "G"}, "pencil")
    n = _n(data)
    F, G = _form(data["F"], n, "F"), _form(data["G"], n, "G")
    try:
        return Pencil(F, G)
    except PencilError as exc:
        raise ValidationError(str(exc)) from exc


def form_from_data(data) -> QuadraticForm:
    _check_keys(data, {"schema", "n", "gram"}, {"n", "gram"}, "form")
    return _form(data["gram"], _n(data), "gram")


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    return loads(text)


def pencil_to_data(P: Pencil) -> dict:
    return {"schema": SCHEMA, **P.to_json()}


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# --------------------------------------------------------------------------
# report

REPORT_KEYS = {
    "schema", "input", "chi", "chi_factors", "classification", "witt", "sweep",
    "decomposition", "residues", "plane_criterion", "warnings",
}


@dataclass
class AnalysisReport:
    pencil: Pencil
    chi: Poly
    chi_factors: list
    classification: PencilClass
    witt: dict  # {"F": [WittData], "G": [...]} for nondegenerate forms
    sweep: SweepResult | dict  # result, or {"skipped": reason}
    decomposition: dict
    residues: dict
    plane_criterion: dict
    warnings: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "input": self.pencil.to_json(),
            "chi": self.chi.to_json(),
            "chi_factors": [{"factor": q.to_json(), "multiplicity": e} for q, e in self.chi_factors],
            "classification": self.classification.to_json(),
            "witt": {k: [w.to_json() for w in v] if isinstance(v, list) else v for k, v in self.witt.items()},
            "sweep": self.sweep.to_json() if isinstance(self.sweep, SweepResult) else self.sweep,
            "decomposition": self.decomposition,
            "residues": self.residues,
            "plane_criterion": self.plane_criterion,
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_json(cls, d: dict) -> "AnalysisReport":
        _check_keys(d, REPORT_KEYS, REPORT_KEYS - {"schema"}, "report")
        pencil = pencil_from_data(d["input"])
        witt = {k: [WittData.from_json(w) for w in v] if isinstance(v, list) else v for k, v in d["witt"].items()}
        sweep = d["sweep"]
        if "skipped" not in sweep:
            sweep = SweepResult.from_json(sweep)
        return cls(
            pencil,
            Poly.from_json(d["chi"]),
            [(Poly.from_json(f["factor"]), int(f["multiplicity"])) for f in d["chi_factors"]],
            PencilClass.from_json(d["classification"]),
            witt,
            sweep,
            d["decomposition"],
            d["residues"],
            d["plane_criterion"],
            list(d["warnings"]),
        )


def _skip(reason: str) -> dict:
    return {"skipped": reason}


def analyze(P: Pencil, places=None) -> AnalysisReport:
    """Run every analysis whose preconditions hold; the others record why not."""
    if places is None:
        places = [REAL, LocalPlace(2), LocalPlace(3), LocalPlace(5)]
    chi, _ = char_poly(P)
    factors = factor_over_Q(chi) if chi else []
    cls = classify(P)
    warnings = ["geometric integrality of X not checked"]
    if cls.out_of_taxonomy:
        warnings.append("out-of-taxonomy dimension")

    witt = {}
    for name, q in (("F", P.F), ("G", P.G)):
        if rank(q) == q.dim:
            witt[name] = [witt_index_local(q, v) for v in places]
        else:
            witt[name] = _skip(f"{name} is degenerate")

    degenerate = cls.tag == "DegeneratePencil"
    if degenerate:
        sweep = _skip("degenerate pencil")
    else:
        try:
            sweep = mordell_sweep(P)
        except PencilError as exc:
            sweep = _skip(str(exc))

    if cls.tag == "FourRank6":
        try:
            decomposition = four_rank6_decompose(P).to_json()
        except PencilError as exc:
            decomposition = _skip(str(exc))
    else:
        decomposition = _skip(f"pencil is {cls.tag}")

    if degenerate:
        residues = _skip("degenerate pencil")
        verdict = _skip("degenerate pencil")
    else:
        try:
            v = plane_criterion(ResidueContext(P))
            verdict = v.to_json()
            verdict.pop("points")
            residues = {"points": [r.to_json() for r in v.table]}
        except (PencilError, ResidueError) as exc:
            residues = _skip(str(exc))
            verdict = _skip(str(exc))
    return AnalysisReport(P, chi, factors, cls, witt, sweep, decomposition, residues, verdict, warnings)
