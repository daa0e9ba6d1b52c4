"""Replacing null markers by actual values without breaking FDs.

Each function returns the realized relation together with the ordered plan
that produced it, so the substitution can be audited or replayed one step
at a time.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import PreconditionFailed
from .fds import FD, check_1rhs, decompose_rhs, determines_graph
from .relation import Null, Relation, fresh_values, identity_key
from .semantics import holds_literal, holds_super_reflexive

LHS_ARBITRARY = "LHS-arbitrary"
RHS_GROUP_VALUE = "RHS-group-value"
RHS_FRESH = "RHS-fresh"
LFD_SINGLE_FRESH = "LFD-single-fresh"


@dataclass(frozen=True)
class PlanStep:
    occ: int
    row: int
    attr: str
    value: str
    reason: str

    def __str__(self) -> str:
        return f"occ={self.occ} attr={self.attr} value={self.value} reason={self.reason}"


@dataclass
class RealizationPlan:
    steps: list[PlanStep] = field(default_factory=list)
    # attribute batches in the order they were processed (set realization only)
    rounds: list[tuple[str, ...]] = field(default_factory=list)
    # literal plans are only safe as a whole: filling one of two identical
    # markers separates them, so partial application is refused
    atomic: bool = False

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self) -> Iterator[PlanStep]:
        return iter(self.steps)

    def assignment(self, upto: int | None = None) -> dict[int, str]:
        return {s.occ: s.value for s in self.steps[:upto]}

    def apply(self, r: Relation, upto: int | None = None) -> Relation:
        """Apply the first ``upto`` steps (all of them by default)."""
        if self.atomic and upto is not None and 0 < upto < len(self.steps):
            raise ValueError("this plan must be applied as a whole")
        return r.substitute(self.assignment(upto))

    def lines(self) -> list[str]:
        return [str(s) for s in self.steps]


def realize_literal(r: Relation, fds: Iterable[FD]) -> tuple[Relation, RealizationPlan]:
    """Give every marker the same value, one not already in the relation."""
    fds = list(fds)
    violations = [v.violation for v in (holds_literal(r, f) for f in fds) if not v]
    if violations:
        raise PreconditionFailed("FDs do not hold literally", violations)
    plan = RealizationPlan(atomic=True)
    markers = r.markers()
    if markers:
        value = next(fresh_values(r.values()))
        for row_id, attr, marker in markers:
            plan.steps.append(PlanStep(marker.occ, row_id, attr, value, LFD_SINGLE_FRESH))
    return plan.apply(r), plan


def _fill_arbitrary(r: Relation, attrs, fresh, plan: RealizationPlan) -> Relation:
    """Each marker in ``attrs`` gets its own fresh value."""
    before = len(plan.steps)
    wanted = set(attrs)
    for row in sorted(r.rows, key=lambda row: row.id):
        for attr, marker in row.nulls():
            if attr in wanted:
                plan.steps.append(PlanStep(marker.occ, row.id, attr, next(fresh), LHS_ARBITRARY))
    return r.substitute({s.occ: s.value for s in plan.steps[before:]})


def _fill_from_groups(r: Relation, fd: FD, fresh, plan: RealizationPlan) -> Relation:
    """Realize the single RHS column of ``fd`` once its LHS is marker-free.

    Rows are grouped by LHS value; a group's markers take the group's one
    present RHS value, or a single fresh value shared by the whole group.
    """
    (attr,) = fd.rhs
    lhs_pos = r.schema.indices(fd.lhs)
    a = r.schema.index(attr)
    groups: dict[tuple, list] = defaultdict(list)
    for row in sorted(r.rows, key=lambda row: row.id):
        key = identity_key(row, lhs_pos)
        if None in key:
            raise AssertionError(f"LHS of {fd} still holds markers in row {row.id}")
        groups[key].append(row)
    before = len(plan.steps)
    for members in groups.values():
        present = [row.cells[a] for row in members if not isinstance(row.cells[a], Null)]
        value, reason = (present[0], RHS_GROUP_VALUE) if present else (None, RHS_FRESH)
        for row in members:
            cell = row.cells[a]
            if isinstance(cell, Null):
                if value is None:
                    value = next(fresh)
                plan.steps.append(PlanStep(cell.occ, row.id, attr, value, reason))
    return r.substitute({s.occ: s.value for s in plan.steps[before:]})


def realize_sr_fd(r: Relation, fd: FD) -> tuple[Relation, RealizationPlan]:
    """Realize every marker in the columns of one super-reflexive FD.

    LHS markers first receive distinct fresh values, which cannot break the
    FD.  With the LHS now marker-free, each RHS column is filled group by
    group.
    """
    verdict = holds_super_reflexive(r, fd)
    if not verdict:
        raise PreconditionFailed(f"{fd} does not hold super-reflexively", [verdict.violation])
    plan = RealizationPlan()
    fresh = fresh_values(r.values())
    current = _fill_arbitrary(r, fd.lhs, fresh, plan)
    for part in decompose_rhs(fd):
        current = _fill_from_groups(current, part, fresh, plan)
    return current, plan


def realize_sr_set(
    r: Relation, fds: Iterable[FD], nullable: Iterable[str] | None = None
) -> tuple[Relation, RealizationPlan]:
    """Realize all markers in nullable attributes under a set of SRFDs.

    Requires the 1RHS condition.  Attributes are processed in rounds: those
    no remaining nullable attribute determines go first, each filled through
    the single FD that has it on the right (or with fresh values if none
    does).  Nullable attributes outside the minimal cover are filled last.
    """
    fds = list(fds)
    nullable = r.schema.nullable if nullable is None else frozenset(nullable)
    violations = [v.violation for v in (holds_super_reflexive(r, f) for f in fds) if not v]
    if violations:
        raise PreconditionFailed("FDs do not hold super-reflexively", violations)
    report = check_1rhs(fds, nullable)
    if not report.ok:
        raise PreconditionFailed(
            "1RHS condition violated: " + "; ".join(map(str, report.violations)),
            report.violations,
        )
    relevant = set().union(*(f.attributes for f in fds)) if fds else set()
    stray = sorted({attr for _, attr, _ in r.markers(relevant)} - nullable)
    if stray:
        raise PreconditionFailed(f"markers present in attributes declared non-nullable: {stray}")

    cover = report.cover
    nodes = nullable & cover.attributes
    graph = determines_graph(cover, nodes)
    rhs_fd = {next(iter(f.rhs)): f for f in cover}

    plan = RealizationPlan()
    fresh = fresh_values(r.values())
    current = r
    remaining = set(nodes)
    while remaining:
        batch = sorted(a for a in remaining if not graph.predecessors(a) & remaining)
        if not batch:
            raise AssertionError(f"determines graph has a cycle among {sorted(remaining)}")
        plan.rounds.append(tuple(batch))
        for attr in batch:
            if attr in rhs_fd:
                current = _fill_from_groups(current, rhs_fd[attr], fresh, plan)
            else:
                current = _fill_arbitrary(current, [attr], fresh, plan)
        remaining -= set(batch)

    leftover = tuple(sorted(set(nullable) - nodes))
    if leftover:
        plan.rounds.append(leftover)
        current = _fill_arbitrary(current, leftover, fresh, plan)
    return current, plan
