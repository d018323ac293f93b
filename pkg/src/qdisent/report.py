"""Report records shared by the library and the CLI, with text and JSON renderings."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import catalog
from .disentangle import Classification, DisentanglementReport, Machine, classify, run_all
from .fileformat import matrix_to_json
from .linalg import as_tolerance

REPRODUCED = "REPRODUCED"
CONSISTENT = "CONSISTENT"
MISMATCH = "MISMATCH"


@dataclass
class ClaimCheck:
    name: str
    claim: str
    machine: Machine
    status: str
    detail: str = ""


@dataclass
class Report:
    command: str
    set_name: str | None = None
    classification: Classification | None = None
    states: list[DisentanglementReport] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    claims: list[ClaimCheck] = field(default_factory=list)

    def to_dict(self) -> dict:
        out = {"command": self.command, "warnings": list(self.warnings), "notes": list(self.notes)}
        if self.set_name is not None:
            out["set"] = self.set_name
        if self.classification is not None:
            out["classification"] = classification_to_dict(self.classification)
        if self.states:
            out["states"] = [disentanglement_to_dict(r) for r in self.states]
        if self.claims:
            out["claims"] = [
                {"name": c.name, "claim": c.claim, "machine": c.machine.value,
                 "status": c.status, "detail": c.detail}
                for c in self.claims
            ]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        lines = [f"== {self.command}" + (f": {self.set_name}" if self.set_name else "")]
        if self.classification is not None:
            c = self.classification
            lines += [
                f"perfectly distinguishable : {c.perfectly_distinguishable}",
                f"identical marginals       : {c.identical_marginals}",
                f"commuting marginals (A)   : {c.commuting_marginals_A}",
                f"commuting marginals (B)   : {c.commuting_marginals_B}",
                f"selected machine          : {c.selected_machine.value}",
            ]
        for r in self.states:
            lines += ["", f"-- state {r.input_label or '<input>'}"
                      + (f" via {r.machine.value}" if r.machine else "")]
            lines += ["output:", format_matrix(r.output.rho)]
            lines += [
                f"marginal deviation A : {r.marginal_deviation_A:.3e}",
                f"marginal deviation B : {r.marginal_deviation_B:.3e}",
                f"output is product    : {r.output_is_product}",
                f"output is separable  : {r.output_is_separable}",
                f"PPT margin           : {r.ppt_margin:.3e}",
            ]
            lines += [f"note: {n}" for n in r.notes]
        for c in self.claims:
            lines.append(f"[{c.status:10s}] {c.name:12s} {c.machine.value:16s} {c.claim}")
            if c.detail:
                lines.append(f"{'':14s}{c.detail}")
        lines += [f"note: {n}" for n in self.notes]
        lines += [f"warning: {w}" for w in self.warnings]
        return "\n".join(lines) + "\n"


def classification_to_dict(c: Classification) -> dict:
    return {
        "perfectly_distinguishable": c.perfectly_distinguishable,
        "identical_marginals": c.identical_marginals,
        "commuting_marginals_A": c.commuting_marginals_A,
        "commuting_marginals_B": c.commuting_marginals_B,
        "selected_machine": c.selected_machine.value,
        "all_members_separable": c.all_members_separable,
    }


def disentanglement_to_dict(r: DisentanglementReport) -> dict:
    return {
        "input_label": r.input_label,
        "machine": r.machine.value if r.machine else None,
        "dims": list(r.output.dims),
        "output": matrix_to_json(r.output.rho),
        "marginal_deviation_A": r.marginal_deviation_A,
        "marginal_deviation_B": r.marginal_deviation_B,
        "output_is_product": r.output_is_product,
        "output_is_separable": r.output_is_separable,
        "ppt_margin": r.ppt_margin,
        "notes": list(r.notes),
    }


def format_matrix(m, decimals: int = 6) -> str:
    m = np.asarray(m)
    real = bool(np.all(np.abs(m.imag) < 0.5 * 10.0 ** -decimals))
    cells = []
    for row in m:
        if real:
            cells.append([f"{z.real:.{decimals}f}" for z in row])
        else:
            cells.append([f"{z.real:.{decimals}f}{z.imag:+.{decimals}f}j" for z in row])
    width = max(len(c) for row in cells for c in row)
    return "\n".join("  " + "  ".join(c.rjust(width) for c in row) for row in cells)


def judge(entry: catalog.CatalogEntry, cls: Classification, reports, tol) -> tuple[str, str]:
    """Compare one catalog claim with what the machines actually did."""
    m = cls.selected_machine
    kind = entry.claim_kind
    preserved = all(r.marginals_preserved(tol) for r in reports)
    if kind == catalog.CLAIM_PRODUCT:
        ok = m.yields_product and preserved and all(r.output_is_product for r in reports)
        return (REPRODUCED if ok else MISMATCH), "every member mapped to the product of its marginals"
    if kind == catalog.CLAIM_SEPARABLE_ONLY:
        ok = (
            m.party is not None
            and preserved
            and all(r.output_is_separable for r in reports)
            and not all(r.output_is_product for r in reports)
        )
        return (REPRODUCED if ok else MISMATCH), "separable outputs with preserved marginals; no product machine applies"
    if kind == catalog.CLAIM_NOT_PRODUCT:
        ok = not m.yields_product
        return (CONSISTENT if ok else MISMATCH), "no product-state condition holds (impossibility not proven here)"
    if kind == catalog.CLAIM_IMPOSSIBLE:
        ok = m is Machine.NONE
        return (CONSISTENT if ok else MISMATCH), "no sufficient condition holds (impossibility not proven here)"
    raise ValueError(f"unknown claim kind {kind!r}")


def demo(tol=None) -> Report:
    """Classify and disentangle every catalog set and check each recorded claim."""
    tol = as_tolerance(tol)
    report = Report("demo")
    for name in catalog.names():
        entry = catalog.get(name)
        cls = classify(entry.set, tol)
        reports = run_all(entry.set, "auto", tol) if cls.selected_machine is not Machine.NONE else []
        status, detail = judge(entry, cls, reports, tol)
        report.claims.append(ClaimCheck(name, entry.claim, cls.selected_machine, status, detail))
        report.warnings.extend(f"{name}: {w}" for w in entry.set.warnings)
    return report
