"""Deduce the third of (H), (Sp), (Cc) from verdicts on the other two.

Rules (X = holds, ~X = fails; the liminf is taken at the cone apex):

    H,  Sp                   => Cc
    H,  Cc                   => Sp
    Sp, Cc, liminf >= 0      => H
    Sp, ~H, liminf >= 0      => ~Cc   (contrapositive of the previous rule)
    Sp, Cc, liminf failing   => nothing: f0 in the catalog satisfies Sp and Cc but not H
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from conelaw.checkers import check_homogeneity_chain
from conelaw.domain import SampleConfig
from conelaw.errors import ContractError
from conelaw.verdicts import LiminfEstimate, Status, Verdict

CORE = ("H", "Sp", "Cc")


class Rule(str, Enum):
    HSP_IMPLIES_CC = "HSp_implies_Cc"
    HCC_IMPLIES_SP = "HCc_implies_Sp"
    SPCC_LIMINF_IMPLIES_H = "SpCc_liminf_implies_H"
    SP_NOTH_LIMINF_IMPLIES_NOTCC = "Sp_notH_liminf_implies_notCc"
    INAPPLICABLE = "Inapplicable"


NARRATIVE = {
    Rule.HSP_IMPLIES_CC: "H ∧ Sp ⇒ Cc",
    Rule.HCC_IMPLIES_SP: "H ∧ Cc ⇒ Sp",
    Rule.SPCC_LIMINF_IMPLIES_H: "Sp ∧ Cc ∧ liminf ⇒ H",
    Rule.SP_NOTH_LIMINF_IMPLIES_NOTCC: "Sp ∧ ¬H ∧ liminf ⇒ ¬Cc",
    Rule.INAPPLICABLE: "no deduction",
}

COUNTEREXAMPLE_NOTE = (
    "Sp and Cc do not imply H without liminf >= 0 at the apex: "
    "catalog field 'f0' satisfies Sp and Cc, violates H, and diverges to -inf at the apex"
)


@dataclass
class TheoremReport:
    given: dict[str, bool]
    liminf: Optional[LiminfEstimate]
    rule: Rule
    deduced: Optional[tuple[str, bool]] = None
    chain_evidence: list[Verdict] = field(default_factory=list)
    note: str = ""

    @property
    def narrative(self) -> str:
        return NARRATIVE[self.rule]

    def to_dict(self) -> dict:
        return {
            "given": dict(self.given),
            "rule": self.rule.value,
            "narrative": self.narrative,
            "deduced": None if self.deduced is None else {"property": self.deduced[0], "expected": self.deduced[1]},
            "chain": [v.to_dict() for v in self.chain_evidence],
            "note": self.note,
        }

    @classmethod
    def from_dict(cls, d: dict, liminf: Optional[LiminfEstimate] = None) -> "TheoremReport":
        ded = d.get("deduced")
        return cls(
            given={k: bool(v) for k, v in d["given"].items()},
            liminf=liminf,
            rule=Rule(d["rule"]),
            deduced=None if ded is None else (ded["property"], bool(ded["expected"])),
            chain_evidence=[Verdict.from_dict(v) for v in d.get("chain", [])],
            note=d.get("note", ""),
        )


def _truth(v: Verdict) -> tuple[str, bool]:
    prop = v.property
    if prop == "SpStrict":
        # strict superadditivity implies Sp; its failure says nothing about Sp
        if v.status is not Status.SATISFIED:
            raise ContractError("a failed strict-superadditivity verdict cannot stand in for Sp")
        return "Sp", True
    if prop not in CORE:
        raise ContractError(f"deduction takes verdicts on H, Sp or Cc, got {prop!r}")
    holds = v.status.holds()
    if holds is None:
        raise ContractError(f"{prop} verdict is {v.status.value}; need Satisfied or Falsified")
    return prop, holds


def deduce_third_property(va: Verdict, vb: Verdict, liminf: Optional[LiminfEstimate], *, field=None,
                          cfg: Optional[SampleConfig] = None, n_max: int = 12) -> TheoremReport:
    """Apply the rule table to two verdicts.

    When the Sp+Cc+liminf rule fires and ``field`` is given, the proof chain
    is run on it and attached as evidence.
    """
    (pa, ta), (pb, tb) = _truth(va), _truth(vb)
    if pa == pb:
        raise ContractError(f"both verdicts concern {pa}")
    given = {pa: ta, pb: tb}
    liminf_ok = liminf is not None and liminf.ok
    report = TheoremReport(given, liminf, Rule.INAPPLICABLE)

    if field is not None and not getattr(field.region, "satisfies_assumption_a", False):
        report.note = f"{field.name} is not defined on an open cone; the theorem does not apply"
        return report

    if given.get("H") is True and given.get("Sp") is True:
        report.rule, report.deduced = Rule.HSP_IMPLIES_CC, ("Cc", True)
    elif given.get("H") is True and given.get("Cc") is True:
        report.rule, report.deduced = Rule.HCC_IMPLIES_SP, ("Sp", True)
    elif given.get("Sp") is True and given.get("Cc") is True:
        if liminf_ok:
            report.rule, report.deduced = Rule.SPCC_LIMINF_IMPLIES_H, ("H", True)
            if field is not None:
                report.chain_evidence = check_homogeneity_chain(field, cfg or SampleConfig(), n_max)
        else:
            report.note = COUNTEREXAMPLE_NOTE
    elif given.get("Sp") is True and given.get("H") is False and liminf_ok:
        report.rule, report.deduced = Rule.SP_NOTH_LIMINF_IMPLIES_NOTCC, ("Cc", False)
    return report
