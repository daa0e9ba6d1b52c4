"""Incremental, index-backed enforcement of literal and super-reflexive FDs.

Each literal FD ``X -> Y`` gets one ordered composite index on ``X``; a
lookup returns exactly the rows whose ``X`` is identical to the new row's.
Super-reflexive FDs share one ordered index per LHS attribute mapping each
value (and the null bucket) to an ascending posting list of row ids; the
candidates for a new row are the intersection, over its present LHS values,
of "same value or null".

Markers sort after every value by default (``null_sort="high"``).
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from sortedcontainers import SortedDict, SortedList

from .errors import InitialViolation, SchemaError
from .fds import FD, FDSet, decompose_rhs
from .relation import Null, Relation, Row, identity_key
from .semantics import Violation, holds_literal, holds_super_reflexive

log = logging.getLogger(__name__)


def intersect_sorted(lists: Sequence[Sequence[int]]) -> list[int]:
    """Intersection of ascending, duplicate-free id lists.

    Starts from the shortest list and merges each remaining list against the
    running result, so the cost is linear in the total input size.
    """
    if not lists:
        return []
    ordered = sorted(lists, key=len)
    result = list(ordered[0])
    for other in ordered[1:]:
        if not result:
            break
        merged = []
        i = j = 0
        n, m = len(result), len(other)
        while i < n and j < m:
            a, b = result[i], other[j]
            if a == b:
                merged.append(a)
                i += 1
                j += 1
            elif a < b:
                i += 1
            else:
                j += 1
        result = merged
    return result


def _component(cell, null_high: bool):
    # Values and the null bucket are wrapped so they compare within one ordering.
    if isinstance(cell, Null):
        return (1, "") if null_high else (-1, "")
    return (0, cell)


@dataclass
class WriteOutcome:
    accepted: bool
    violations: list[Violation] = field(default_factory=list)
    # summed |S| over every FD probed, and the breakdown keyed by ("literal" | "sr", fd)
    candidate_set_size: int = 0
    candidates: dict[tuple[str, FD], int] = field(default_factory=dict)
    row_id: int | None = None

    def __bool__(self) -> bool:
        return self.accepted


class _CompositeIndex:
    """Ordered map from the LHS identity key to the ascending ids sharing it."""

    def __init__(self, positions: tuple[int, ...], null_high: bool):
        self.positions = positions
        self.null_high = null_high
        self.entries: SortedDict = SortedDict()

    def key(self, row: Row):
        return tuple(_component(row.cells[p], self.null_high) for p in self.positions)

    def add(self, row: Row) -> None:
        self.entries.setdefault(self.key(row), SortedList()).add(row.id)

    def remove(self, row: Row) -> None:
        k = self.key(row)
        ids = self.entries[k]
        ids.remove(row.id)
        if not ids:
            del self.entries[k]

    def lookup(self, row: Row) -> Sequence[int]:
        return self.entries.get(self.key(row), ())


class _AttributeIndex:
    """Ordered map from one attribute's value (or the null bucket) to posting lists."""

    def __init__(self, position: int, null_high: bool):
        self.position = position
        self.null_high = null_high
        self.entries: SortedDict = SortedDict()

    def key(self, cell):
        return _component(cell, self.null_high)

    def add(self, row: Row) -> None:
        self.entries.setdefault(self.key(row.cells[self.position]), SortedList()).add(row.id)

    def remove(self, row: Row) -> None:
        k = self.key(row.cells[self.position])
        ids = self.entries[k]
        ids.remove(row.id)
        if not ids:
            del self.entries[k]

    def same_or_null(self, value: str) -> list[int]:
        """Ids whose cell equals ``value`` or is a marker, ascending."""
        exact = self.entries.get(self.key(value), ())
        nulls = self.entries.get(self.key(Null(0)), ())
        if not nulls:
            return list(exact)
        if not exact:
            return list(nulls)
        return list(heapq.merge(exact, nulls))


class IndexedRelation:
    """A mutable relation kept consistent with a set of literal and SR FDs."""

    def __init__(
        self,
        r: Relation,
        literal_fds: Iterable[FD] = (),
        sr_fds: Iterable[FD] = (),
        null_sort: str = "high",
    ):
        if null_sort not in ("high", "low"):
            raise ValueError("null_sort must be 'high' or 'low'")
        self.schema = r.schema
        self.literal_fds = FDSet(literal_fds)
        self.sr_fds = FDSet(sr_fds)
        self.literal_fds.validate(self.schema.attributes)
        self.sr_fds.validate(self.schema.attributes)

        bad = [holds_literal(r, f) for f in self.literal_fds]
        bad += [holds_super_reflexive(r, f) for f in self.sr_fds]
        bad = [v.violation for v in bad if not v]
        if bad:
            raise InitialViolation(
                "relation already violates: " + "; ".join(str(v.fd) for v in bad), bad
            )

        null_high = null_sort == "high"
        self._rows: dict[int, Row] = {row.id: row for row in r.rows}
        self._next_id = max(self._rows, default=0) + 1
        self._all_ids: SortedList = SortedList()
        self._composite = {
            f: _CompositeIndex(self.schema.indices(f.lhs), null_high) for f in self.literal_fds
        }
        self._sr_parts = list(FDSet(part for f in self.sr_fds for part in decompose_rhs(f)))
        sr_attrs = set().union(*(f.lhs for f in self._sr_parts)) if self._sr_parts else set()
        self._attr_index = {
            a: _AttributeIndex(self.schema.index(a), null_high) for a in sorted(sr_attrs)
        }
        for row in self._rows.values():
            self._index(row)

    def __len__(self) -> int:
        return len(self._rows)

    def _index(self, row: Row) -> None:
        for idx in self._composite.values():
            idx.add(row)
        for idx in self._attr_index.values():
            idx.add(row)
        self._all_ids.add(row.id)

    def _unindex(self, row: Row) -> None:
        for idx in self._composite.values():
            idx.remove(row)
        for idx in self._attr_index.values():
            idx.remove(row)
        self._all_ids.remove(row.id)

    def relation(self) -> Relation:
        return Relation(self.schema, (self._rows[i] for i in self._all_ids))

    def make_row(self, cells: Sequence, row_id: int | None = None) -> Row:
        """Coerce cells into a row of this schema; every marker gets a fresh occurrence."""
        if isinstance(cells, Row):
            cells = cells.cells
        cells = [None if isinstance(c, Null) else c for c in cells]
        if len(cells) != len(self.schema):
            raise SchemaError(f"expected {len(self.schema)} cells, got {len(cells)}")
        probe = Relation.from_rows(self.schema, [cells])
        return Row(self._next_id if row_id is None else row_id, probe.rows[0].cells, self.schema)

    def literal_candidates(self, fd: FD, row: Row, exclude: int | None = None) -> list[int]:
        ids = self._composite[fd].lookup(row)
        return [i for i in ids if i != exclude]

    def sr_candidates(self, fd: FD, row: Row, exclude: int | None = None) -> list[int]:
        lists = []
        for a in sorted(fd.lhs):
            cell = row[a]
            if not isinstance(cell, Null):
                lists.append(self._attr_index[a].same_or_null(cell))
        if not lists:
            if fd.lhs:
                log.warning("%s: new row has an all-null LHS; scanning the whole relation", fd)
            ids = list(self._all_ids)
        else:
            ids = intersect_sorted(lists)
        return [i for i in ids if i != exclude]

    def _check(self, row: Row, exclude: int | None) -> WriteOutcome:
        outcome = WriteOutcome(True, row_id=row.id)
        for fd in self.literal_fds:
            rhs_pos = self.schema.indices(fd.rhs)
            ids = self._composite[fd].lookup(row)
            size = len(ids) - (exclude is not None and exclude in ids)
            outcome.candidates[("literal", fd)] = size
            if not size:
                continue
            # S already satisfies the FD, so its rows agree on Y; one representative decides
            first = ids[0] if ids[0] != exclude else ids[1]
            if identity_key(self._rows[first], rhs_pos) != identity_key(row, rhs_pos):
                outcome.violations.append(
                    Violation(fd, (first, row.id), "identical on LHS, not identical on RHS")
                )
        for fd in self._sr_parts:
            (attr,) = fd.rhs
            value = row[attr]
            if isinstance(value, Null):
                outcome.candidates[("sr", fd)] = 0
                continue
            ids = self.sr_candidates(fd, row, exclude)
            outcome.candidates[("sr", fd)] = len(ids)
            a = self.schema.index(attr)
            for i in ids:
                other = self._rows[i].cells[a]
                if not isinstance(other, Null) and other != value:
                    outcome.violations.append(
                        Violation(fd, (i, row.id), "LHS comparison not false, RHS comparison false")
                    )
                    break
        outcome.candidate_set_size = sum(outcome.candidates.values())
        outcome.accepted = not outcome.violations
        return outcome

    def try_insert(self, cells: Sequence | Row) -> WriteOutcome:
        row = self.make_row(cells)
        outcome = self._check(row, exclude=None)
        if outcome.accepted:
            self._rows[row.id] = row
            self._index(row)
            self._next_id += 1
        return outcome

    def try_update(self, old_id: int, cells: Sequence | Row) -> WriteOutcome:
        """Delete-then-insert, checked before anything is changed; the row keeps its id."""
        if old_id not in self._rows:
            raise KeyError(f"no row with id {old_id}")
        row = self.make_row(cells, row_id=old_id)
        outcome = self._check(row, exclude=old_id)
        if outcome.accepted:
            self._unindex(self._rows[old_id])
            self._rows[old_id] = row
            self._index(row)
        return outcome

    def delete(self, row_id: int) -> None:
        """Deletions never violate an FD, so no check is needed."""
        self._unindex(self._rows.pop(row_id))


def build(
    r: Relation,
    literal_fds: Iterable[FD] = (),
    sr_fds: Iterable[FD] = (),
    null_sort: str = "high",
) -> IndexedRelation:
    return IndexedRelation(r, literal_fds, sr_fds, null_sort)
