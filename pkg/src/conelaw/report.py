"""Suite orchestration and report serialization (JSON, witness CSV, plain text)."""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from conelaw import __version__
from conelaw.checkers import (
    DEFAULT_RADII,
    DEFAULT_TOL,
    FD_STEP,
    HESSIAN_FD_STEP,
    check_concavity,
    check_concavity_hessian,
    check_homogeneity,
    check_homogeneity_chain,
    check_ratio_constancy_1d,
    check_superadditivity,
    estimate_apex_liminf,
)
from conelaw.deduction import TheoremReport, deduce_third_property
from conelaw.domain import Region, SampleConfig, sample_region
from conelaw.errors import ContractError
from conelaw.falsifier import SEARCHABLE, SearchBudget, falsify
from conelaw.fields import CATALOG, ScalarField, build_field, negate
from conelaw.verdicts import LiminfClass, LiminfEstimate, Status, Verdict

PROPERTIES = ("H", "Sp", "SpStrict", "Cc", "CcStrict", "hessian", "liminf", "chain", "ratio", "S", "Cv")
FORMATS = ("json", "csv", "text")
# Points used by the per-point finite-difference checks.
HESSIAN_POINTS = 200
RATIO_GRID = 200

_DEFAULT_PROPERTY_FOR = {
    "H": "H", "Sp": "Sp", "SpStrict": "SpStrict", "Cc": "Cc", "CcStrict": "CcStrict",
    "LiminfOK": "liminf", "RatioConstant": "ratio", "S": "S", "Cv": "Cv",
}


class UsageError(ContractError):
    """Bad names or combinations in a run configuration."""


@dataclass
class RunConfig:
    field: str
    field_params: dict = field(default_factory=dict)
    properties: list = field(default_factory=list)
    sample: SampleConfig = field(default_factory=SampleConfig)
    tol: float = DEFAULT_TOL
    fd_step: float = FD_STEP
    radii: list = field(default_factory=lambda: list(DEFAULT_RADII))
    deduce: bool = False
    falsify: list = field(default_factory=list)
    expect: dict = field(default_factory=dict)
    threads: int = 1
    out: Optional[str] = None
    format: str = "json"

    def to_dict(self) -> dict:
        return {
            "field": self.field,
            "field_params": dict(self.field_params),
            "properties": list(self.properties),
            "sample": self.sample.to_dict(),
            "tol": self.tol,
            "fd_step": self.fd_step,
            "radii": list(self.radii),
            "deduce": self.deduce,
            "falsify": list(self.falsify),
            "expect": dict(self.expect),
            "threads": self.threads,
            "out": self.out,
            "format": self.format,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        return cls(
            field=d["field"],
            field_params=dict(d["field_params"]),
            properties=list(d["properties"]),
            sample=SampleConfig.from_dict(d["sample"]),
            tol=float(d["tol"]),
            fd_step=float(d["fd_step"]),
            radii=[float(r) for r in d["radii"]],
            deduce=bool(d["deduce"]),
            falsify=list(d["falsify"]),
            expect={k: bool(v) for k, v in d["expect"].items()},
            threads=int(d["threads"]),
            out=d.get("out"),
            format=d.get("format", "json"),
        )


@dataclass
class Report:
    version: str
    config: RunConfig
    verdicts: list = field(default_factory=list)
    liminf: Optional[LiminfEstimate] = None
    theorem: Optional[TheoremReport] = None
    mismatches: list = field(default_factory=list)
    duration_s: float = 0.0

    @property
    def exit_status(self) -> int:
        return 1 if self.mismatches else 0

    def witnesses(self):
        chain = self.theorem.chain_evidence if self.theorem else []
        return [v.witness for v in [*self.verdicts, *chain] if v.witness is not None]

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "version": self.version,
            "config": self.config.to_dict(),
            "verdicts": [v.to_dict() for v in self.verdicts],
            "liminf": None if self.liminf is None else self.liminf.to_dict(),
            "theorem": None if self.theorem is None else self.theorem.to_dict(),
            "mismatches": list(self.mismatches),
            "exit_status": self.exit_status,
        }
        if timing:
            out["duration_s"] = self.duration_s
        return out

    def __eq__(self, other):
        if not isinstance(other, Report):
            return NotImplemented
        return self.to_dict() == other.to_dict()


def resolve_field(cfg: RunConfig) -> ScalarField:
    try:
        return build_field(cfg.field, **cfg.field_params)
    except TypeError as exc:
        raise UsageError(f"bad parameters for field {cfg.field!r}: {exc}") from None
    except ContractError as exc:
        if cfg.field not in CATALOG:
            raise UsageError(str(exc)) from None
        raise


def _default_properties(f: ScalarField) -> list:
    props = [_DEFAULT_PROPERTY_FOR[k] for k in f.declared_properties if k in _DEFAULT_PROPERTY_FOR]
    if isinstance(f.region, Region):
        return props
    return [p for p in props if p in ("Cc", "Cv")]


def _relabel(v: Verdict, prop: str) -> Verdict:
    w = v.witness
    return Verdict(prop, v.status, v.samples_checked, v.worst_margin, w, v.skipped, v.method, v.diagnostics)


def _liminf_verdict_truth(est: LiminfEstimate) -> Optional[bool]:
    if est.classification is LiminfClass.INCONCLUSIVE:
        return None
    return est.ok


def run_suite(cfg: RunConfig) -> Report:
    """Run every requested check on the configured field and compare with its expectations."""
    started = time.perf_counter()
    unknown = [p for p in [*cfg.properties, *cfg.falsify] if p not in PROPERTIES]
    if unknown:
        raise UsageError(f"unknown properties {unknown}; valid properties: {', '.join(PROPERTIES)}")
    bad_falsify = [p for p in cfg.falsify if p not in SEARCHABLE]
    if bad_falsify:
        raise UsageError(f"--falsify accepts {', '.join(SEARCHABLE)}, got {bad_falsify}")
    f = resolve_field(cfg)
    props = list(cfg.properties) or _default_properties(f)
    is_cone_field = isinstance(f.region, Region)
    cone_only = {"H", "Sp", "SpStrict", "S", "liminf", "chain"}
    if not is_cone_field and (cone_only & set(props) or cfg.falsify or cfg.deduce):
        raise UsageError(f"{f.name} is not defined on a cone; only Cc/Cv/hessian checks apply")

    sample, tol = cfg.sample, cfg.tol
    report = Report(__version__, cfg)
    verdicts = report.verdicts

    for prop in props:
        if prop == "H":
            verdicts.append(check_homogeneity(f, sample, tol=tol, threads=cfg.threads))
        elif prop == "Sp":
            verdicts.append(check_superadditivity(f, sample, tol, threads=cfg.threads))
            if f.declared_properties.get("SpStrict") and "SpStrict" not in props:
                verdicts.append(check_superadditivity(f, sample, tol, strict=True, threads=cfg.threads))
        elif prop == "SpStrict":
            verdicts.append(check_superadditivity(f, sample, tol, strict=True, threads=cfg.threads))
        elif prop == "Cc":
            verdicts.append(check_concavity(f, sample, tol=tol, threads=cfg.threads))
        elif prop == "S":
            verdicts.append(_relabel(check_superadditivity(negate(f), sample, tol, threads=cfg.threads), "S"))
        elif prop == "Cv":
            verdicts.append(_relabel(check_concavity(negate(f), sample, tol=tol, threads=cfg.threads), "Cv"))
        elif prop in ("hessian", "CcStrict"):
            pts = sample_region(f.region, sample.with_count(min(sample.count, HESSIAN_POINTS)), stream=12)
            verdict, diag = check_concavity_hessian(f, pts, fd_step=HESSIAN_FD_STEP, tol=tol)
            if prop == "hessian":
                verdicts.append(verdict)
            elif diag.strict is None:
                raise UsageError("CcStrict needs a two-dimensional field")
            else:
                verdicts.append(diag.strict)
        elif prop == "liminf":
            report.liminf = estimate_apex_liminf(f, cfg.radii, seed=sample.seed, tol=tol)
        elif prop == "chain":
            verdicts.extend(check_homogeneity_chain(f, sample, tol=tol))
        elif prop == "ratio":
            if f.dimension != 1:
                raise UsageError("the ratio test needs a one-dimensional field")
            lo, hi = sample.coord_range
            verdicts.append(check_ratio_constancy_1d(f, np.geomspace(lo, hi, RATIO_GRID), tol))

    budget = SearchBudget(seed=sample.seed, coord_range=sample.coord_range)
    for prop in cfg.falsify:
        verdicts.append(falsify(f, prop, budget, tol))

    if cfg.deduce:
        if report.liminf is None:
            report.liminf = estimate_apex_liminf(f, cfg.radii, seed=sample.seed, tol=tol)
        report.theorem = _deduce(f, verdicts, report.liminf, sample)

    report.mismatches = _mismatches(f, cfg, report)
    report.duration_s = time.perf_counter() - started
    return report


def _deduce(f: ScalarField, verdicts: list, liminf: LiminfEstimate, sample: SampleConfig) -> TheoremReport:
    known = {}
    for v in verdicts:
        if v.method != "sampling" or v.status.holds() is None:
            continue
        if v.property in ("H", "Sp", "Cc"):
            known.setdefault(v.property, v)
        elif v.property == "SpStrict" and v.status is Status.SATISFIED:
            known.setdefault("Sp", v)
    pairs = [("H", "Sp"), ("H", "Cc"), ("Sp", "Cc"), ("Sp", "H")]
    available = [(a, b) for a, b in pairs if a in known and b in known]
    if not available:
        raise UsageError("--deduce needs sampling verdicts on two of H, Sp, Cc")
    first = None
    for a, b in available:
        rep = deduce_third_property(known[a], known[b], liminf, field=f, cfg=sample)
        first = first or rep
        if rep.deduced is not None:
            return rep
    return first


def _mismatches(f: ScalarField, cfg: RunConfig, report: Report) -> list:
    expected = {**f.declared_properties, **cfg.expect}
    out = []
    for v in report.verdicts:
        if v.property not in expected:
            continue
        holds = v.status.holds()
        if holds is None:
            out.append(f"{v.property} ({v.method}): {v.status.value}, expected {expected[v.property]}")
        elif holds != expected[v.property]:
            out.append(f"{v.property} ({v.method}): holds={holds}, expected {expected[v.property]}")
    if report.liminf is not None and "LiminfOK" in expected and "liminf" in (cfg.properties or _default_properties(f)):
        truth = _liminf_verdict_truth(report.liminf)
        if truth != expected["LiminfOK"]:
            out.append(f"LiminfOK: {report.liminf.classification.value}, expected {expected['LiminfOK']}")
    th = report.theorem
    if th is not None and th.deduced is not None:
        prop, value = th.deduced
        if prop in expected and expected[prop] != value:
            out.append(f"deduced {prop}={value} contradicts expected {expected[prop]}")
        for v in report.verdicts:
            if v.property == prop and v.status.holds() is not None and v.status.holds() != value:
                out.append(f"deduced {prop}={value} contradicts {v.method} verdict {v.status.value}")
    return out


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def report_json(r: Report, timing: bool = True) -> str:
    return json.dumps(r.to_dict(timing), indent=2, default=_json_default) + "\n"


def parse_report(data) -> Report:
    d = json.loads(data.decode() if isinstance(data, bytes) else data)
    liminf = None if d["liminf"] is None else LiminfEstimate.from_dict(d["liminf"])
    return Report(
        version=d["version"],
        config=RunConfig.from_dict(d["config"]),
        verdicts=[Verdict.from_dict(v) for v in d["verdicts"]],
        liminf=liminf,
        theorem=None if d["theorem"] is None else TheoremReport.from_dict(d["theorem"], liminf),
        mismatches=list(d.get("mismatches", [])),
        duration_s=float(d.get("duration_s", 0.0)),
    )


CSV_COLUMNS = ("property", "points", "lambda", "values", "violation")


def _fmt(x) -> str:
    return repr(float(x))


def witnesses_csv(r: Report) -> str:
    """One row per witness; coordinates of a point are ';'-joined and points are '|'-joined."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for w in r.witnesses():
        writer.writerow([
            w.property,
            "|".join(";".join(_fmt(c) for c in p) for p in w.points),
            "" if w.lam is None else _fmt(w.lam),
            ";".join(_fmt(v) for v in w.values),
            _fmt(w.violation),
        ])
    return buf.getvalue()


def report_text(r: Report) -> str:
    cfg = r.config
    params = ", ".join(f"{k}={v}" for k, v in cfg.field_params.items())
    lines = [f"conelaw {r.version}: field {cfg.field}({params})"]
    for v in r.verdicts:
        line = f"  {v.property:<13} {v.status.value:<20} samples={v.samples_checked} worst_margin={v.worst_margin:.6g}"
        if v.method != "sampling":
            line += f" [{v.method}]"
        if v.skipped:
            line += f" skipped={v.skipped}"
        lines.append(line)
        if v.witness is not None:
            w = v.witness
            lam = "" if w.lam is None else f" lambda={w.lam:.6g}"
            lines.append(f"    witness {list(w.points)}{lam} violation={w.violation:.6g}")
    if r.liminf is not None:
        inf = ", ".join("empty" if m is None else f"{m:.4g}" for m in r.liminf.shell_infima)
        lines.append(f"  liminf        {r.liminf.classification.value} (shell infima: {inf})")
    if r.theorem is not None:
        th = r.theorem
        given = ", ".join(f"{k}={'yes' if v else 'no'}" for k, v in th.given.items())
        lines.append(f"  deduction     {th.narrative}  [{th.rule.value}] given {given}")
        if th.deduced is not None:
            prop, val = th.deduced
            lines.append(f"    expected {prop}: {'holds' if val else 'fails'}")
        if th.note:
            lines.append(f"    {th.note}")
        for v in th.chain_evidence:
            lines.append(f"    {v.property:<9} {v.status.value}")
    if r.mismatches:
        lines.append("  mismatches:")
        lines.extend(f"    {m}" for m in r.mismatches)
    else:
        lines.append("  all checked properties match expectations")
    lines.append(f"  duration {r.duration_s:.2f}s")
    return "\n".join(lines) + "\n"


def emit_report(r: Report, fmt: str = "json", out: Optional[str] = None) -> bytes:
    """Render ``r`` and, when ``out`` is given, write it there."""
    if fmt == "json":
        text = report_json(r)
    elif fmt == "csv":
        text = witnesses_csv(r)
    elif fmt == "text":
        text = report_text(r)
    else:
        raise UsageError(f"format must be one of {FORMATS}")
    data = text.encode()
    if out is not None:
        try:
            Path(out).write_bytes(data)
        except OSError as exc:
            raise OSError(exc.errno, f"cannot write report to {out}: {exc.strerror}", out) from None
    return data
