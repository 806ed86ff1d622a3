"""Checklists and the completeness / stability / reliability metrics.

A checklist is a named set of leveled requirements; each requirement is
backed by a declarative rule evaluated against the research object's full
statement view (structural statements plus annotation bodies). Metrics:

* completeness: level-weighted fraction of satisfied requirements,
* stability: one minus the mean absolute change of completeness over the
  most recent evaluations,
* reliability: latest completeness times stability.

All three live in [0, 1] and completeness is monotone under statement
addition (no rule is negated).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from datetime import datetime
from importlib import resources
from pathlib import Path
from typing import Sequence, Union

from .errors import EmptyHistory, UnknownChecklist
from .manifest import render_statement, ro_statements
from .model import Iri, Literal, ResearchObject, Statement, utcnow


class Level:
    MANDATORY = "Mandatory"
    DESIRABLE = "Desirable"
    OPTIONAL = "Optional"
    ALL = (MANDATORY, DESIRABLE, OPTIONAL)


DEFAULT_WEIGHTS = {Level.MANDATORY: 1.0, Level.DESIRABLE: 0.5, Level.OPTIONAL: 0.25}


# ---------------------------------------------------------------------------
# Rules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExistsAnnotation:
    """A statement with this predicate exists on the RO itself
    (scope ``RO``) or on a resource of the given kind."""

    predicate: str
    scope: str = "RO"


@dataclass(frozen=True)
class ExistsResource:
    kind: str


@dataclass(frozen=True)
class ValueMatches:
    predicate: str
    regex: str


@dataclass(frozen=True)
class MinCount:
    n: int
    predicate: str | None = None
    kind: str | None = None


RuleExpr = Union[ExistsAnnotation, ExistsResource, ValueMatches, MinCount]


def rule_from_dict(d: dict) -> RuleExpr:
    kind = d.get("type")
    if kind == "ExistsAnnotation":
        return ExistsAnnotation(d["predicate"], d.get("scope", "RO"))
    if kind == "ExistsResource":
        return ExistsResource(d["kind"])
    if kind == "ValueMatches":
        re.compile(d["regex"])
        return ValueMatches(d["predicate"], d["regex"])
    if kind == "MinCount":
        n = int(d["n"])
        if n < 1:
            raise ValueError("MinCount needs n >= 1")
        return MinCount(n, d.get("predicate"), d.get("kind"))
    raise ValueError(f"unknown rule type {kind!r}")


def rule_to_dict(rule: RuleExpr) -> dict:
    if isinstance(rule, ExistsAnnotation):
        return {"type": "ExistsAnnotation", "predicate": rule.predicate, "scope": rule.scope}
    if isinstance(rule, ExistsResource):
        return {"type": "ExistsResource", "kind": rule.kind}
    if isinstance(rule, ValueMatches):
        return {"type": "ValueMatches", "predicate": rule.predicate, "regex": rule.regex}
    return {"type": "MinCount", "n": rule.n, "predicate": rule.predicate, "kind": rule.kind}


@dataclass(frozen=True)
class Requirement:
    id: str
    level: str
    rule: RuleExpr
    description: str = ""


@dataclass(frozen=True)
class Checklist:
    name: str
    requirements: tuple[Requirement, ...]
    extends: str | None = None


def flatten_checklist(
    checklist: Checklist, by_name: dict[str, Checklist] | None = None
) -> list[Requirement]:
    """Resolve the extension chain into one requirement list; the base
    checklist's requirements come first."""
    by_name = by_name or {}
    chain: list[Checklist] = []
    seen: set[str] = set()
    current: Checklist | None = checklist
    while current is not None:
        if current.name in seen:
            raise ValueError(f"checklist extension cycle through {current.name!r}")
        seen.add(current.name)
        chain.append(current)
        if current.extends is None:
            current = None
        else:
            parent = by_name.get(current.extends)
            if parent is None:
                raise UnknownChecklist(f"checklist {current.extends!r} not found")
            current = parent
    flat: list[Requirement] = []
    ids: set[str] = set()
    for cl in reversed(chain):
        for req in cl.requirements:
            if req.id in ids:
                raise ValueError(f"duplicate requirement id {req.id!r} after flattening")
            ids.add(req.id)
            flat.append(req)
    return flat


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RequirementResult:
    satisfied: bool
    evidence: str | None = None


@dataclass(frozen=True)
class QualityReport:
    ro_id: str
    checklist_name: str
    per_requirement: dict[str, RequirementResult]
    completeness: float
    passes_mandatory: bool
    evaluated_at: datetime

    def to_dict(self) -> dict:
        return {
            "roId": self.ro_id,
            "checklist": self.checklist_name,
            "completeness": self.completeness,
            "passesMandatory": self.passes_mandatory,
            "evaluatedAt": self.evaluated_at.isoformat(),
            "requirements": {
                rid: {"satisfied": r.satisfied, "evidence": r.evidence}
                for rid, r in self.per_requirement.items()
            },
        }


def _object_text(stmt: Statement) -> str:
    return stmt.object.text if isinstance(stmt.object, Literal) else stmt.object.value


def _check_rule(
    rule: RuleExpr, ro: ResearchObject, statements: list[Statement]
) -> RequirementResult:
    def scope_subjects(scope: str) -> set[Iri]:
        if scope == "RO":
            return {ro.id}
        return {r.id for r in ro.resources if r.kind.value == scope}

    if isinstance(rule, ExistsAnnotation):
        subjects = scope_subjects(rule.scope)
        for stmt in statements:
            if stmt.predicate.value == rule.predicate and stmt.subject in subjects:
                return RequirementResult(True, render_statement(stmt))
        return RequirementResult(False)

    if isinstance(rule, ExistsResource):
        for res in ro.resources:
            if res.kind.value == rule.kind:
                return RequirementResult(True, f"resource {res.id}")
        return RequirementResult(False)

    if isinstance(rule, ValueMatches):
        pattern = re.compile(rule.regex)
        for stmt in statements:
            if stmt.predicate.value == rule.predicate and pattern.search(_object_text(stmt)):
                return RequirementResult(True, render_statement(stmt))
        return RequirementResult(False)

    if isinstance(rule, MinCount):
        if rule.predicate is not None:
            hits = [s for s in statements if s.predicate.value == rule.predicate]
            if len(hits) >= rule.n:
                return RequirementResult(True, render_statement(hits[0]))
            return RequirementResult(False)
        matching = [r for r in ro.resources if r.kind.value == rule.kind]
        if len(matching) >= rule.n:
            return RequirementResult(True, f"resource {matching[0].id}")
        return RequirementResult(False)

    raise TypeError(f"unknown rule {rule!r}")


def evaluate(
    ro: ResearchObject,
    checklist: Checklist,
    by_name: dict[str, Checklist] | None = None,
    weights: dict[str, float] | None = None,
    now: datetime | None = None,
) -> QualityReport:
    """Test every flattened requirement against the research object."""
    weights = weights or DEFAULT_WEIGHTS
    flat = flatten_checklist(checklist, by_name or _builtin_index())
    statements = ro_statements(ro)

    per: dict[str, RequirementResult] = {}
    total = 0.0
    achieved = 0.0
    passes_mandatory = True
    for req in flat:
        result = _check_rule(req.rule, ro, statements)
        per[req.id] = result
        w = weights[req.level]
        total += w
        if result.satisfied:
            achieved += w
        elif req.level == Level.MANDATORY:
            passes_mandatory = False

    completeness = achieved / total if total > 0 else 1.0
    return QualityReport(
        ro_id=ro.id.value,
        checklist_name=checklist.name,
        per_requirement=per,
        completeness=completeness,
        passes_mandatory=passes_mandatory,
        evaluated_at=now or utcnow(),
    )


# ---------------------------------------------------------------------------
# History metrics
# ---------------------------------------------------------------------------

def stability_of(completeness_series: Sequence[float], window: int = 10) -> float:
    """1 - mean absolute completeness change over the last ``window``
    reports; series shorter than two report 1.0 (nothing has changed)."""
    recent = list(completeness_series)[-window:]
    if len(recent) < 2:
        return 1.0
    deltas = [abs(b - a) for a, b in zip(recent, recent[1:])]
    return 1.0 - sum(deltas) / len(deltas)


@dataclass
class QualityHistory:
    """Time-ordered evaluation history of one research object."""

    ro_id: str
    reports: list[QualityReport] = field(default_factory=list)
    window: int = 10
    stability: float = 1.0
    reliability: float = 0.0

    def append(self, report: QualityReport) -> None:
        self.reports.append(report)
        self.reports.sort(key=lambda r: r.evaluated_at)
        self.stability = stability_of([r.completeness for r in self.reports], self.window)
        self.reliability = self.reports[-1].completeness * self.stability


def stability(history: QualityHistory, window: int = 10) -> float:
    return stability_of([r.completeness for r in history.reports], window)


def reliability(history: QualityHistory) -> float:
    """Latest completeness times stability."""
    if not history.reports:
        raise EmptyHistory(f"no quality reports for {history.ro_id}")
    return history.reports[-1].completeness * stability(history, history.window)


# ---------------------------------------------------------------------------
# Built-in checklists
# ---------------------------------------------------------------------------

def load_checklist(data: dict) -> Checklist:
    reqs = tuple(
        Requirement(
            id=r["id"],
            level=r["level"],
            rule=rule_from_dict(r["rule"]),
            description=r.get("description", ""),
        )
        for r in data["requirements"]
    )
    for req in reqs:
        if req.level not in Level.ALL:
            raise ValueError(f"unknown requirement level {req.level!r}")
    return Checklist(name=data["name"], requirements=reqs, extends=data.get("extends"))


def load_checklist_file(path: str | Path) -> Checklist:
    return load_checklist(json.loads(Path(path).read_text(encoding="utf-8")))


_BUILTIN_FILES = (
    "basic.json",
    "workflow.json",
    "data_product.json",
    "research_product.json",
    "bibliographic.json",
    "fair_audit.json",
)

_builtins_cache: list[Checklist] | None = None


def builtin_checklists() -> list[Checklist]:
    """The six bundled checklists, parsed through the regular loader."""
    global _builtins_cache
    if _builtins_cache is None:
        base = resources.files("roengine").joinpath("data/checklists")
        _builtins_cache = [
            load_checklist(json.loads(base.joinpath(name).read_text(encoding="utf-8")))
            for name in _BUILTIN_FILES
        ]
    return list(_builtins_cache)


def _builtin_index() -> dict[str, Checklist]:
    return {c.name: c for c in builtin_checklists()}


def checklist_by_name(name: str) -> Checklist:
    index = _builtin_index()
    if name not in index:
        raise UnknownChecklist(f"no checklist named {name!r}")
    return index[name]


def fair_audit(ro: ResearchObject, now: datetime | None = None) -> QualityReport:
    """Evaluate the built-in 12-principle FAIR audit (all mandatory)."""
    return evaluate(ro, checklist_by_name("FAIRAudit"), now=now)
