"""Schemas, null markers, rows and multiset relations.

Values are plain strings.  A missing value is a :class:`Null` marker; every
marker carries its own occurrence id so that a valuation can address it
independently of every other marker in the relation.
"""

from __future__ import annotations

import csv
import enum
import io
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import SchemaError

_occurrences = itertools.count(1)


@dataclass(frozen=True)
class Null:
    occ: int

    def __repr__(self) -> str:
        return f"␀{self.occ}"


Cell = Union[str, Null]


def fresh_null() -> Null:
    return Null(next(_occurrences))


def is_null(cell: Cell) -> bool:
    return isinstance(cell, Null)


class TruthValue(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    def __and__(self, other: TruthValue) -> TruthValue:
        if self is TruthValue.FALSE or other is TruthValue.FALSE:
            return TruthValue.FALSE
        if self is TruthValue.TRUE and other is TruthValue.TRUE:
            return TruthValue.TRUE
        return TruthValue.UNKNOWN

    def __bool__(self) -> bool:
        raise TypeError("a TruthValue has no implicit boolean value; compare it explicitly")


@dataclass(frozen=True)
class Schema:
    attributes: tuple[str, ...]
    nullable: frozenset[str] = None  # type: ignore[assignment]

    def __post_init__(self):
        attrs = tuple(self.attributes)
        object.__setattr__(self, "attributes", attrs)
        if len(set(attrs)) != len(attrs):
            raise SchemaError(f"duplicate attribute names in {list(attrs)}")
        nullable = frozenset(attrs) if self.nullable is None else frozenset(self.nullable)
        unknown = nullable - set(attrs)
        if unknown:
            raise SchemaError(f"nullable attributes not in schema: {sorted(unknown)}")
        object.__setattr__(self, "nullable", nullable)
        object.__setattr__(self, "_positions", {a: i for i, a in enumerate(attrs)})

    def __len__(self) -> int:
        return len(self.attributes)

    def __contains__(self, attr: object) -> bool:
        return attr in self._positions

    def index(self, attr: str) -> int:
        try:
            return self._positions[attr]
        except KeyError:
            raise SchemaError(f"unknown attribute {attr!r}; schema is {list(self.attributes)}") from None

    def indices(self, attrs: Iterable[str]) -> tuple[int, ...]:
        """Positions of ``attrs`` in schema order."""
        return tuple(sorted(self.index(a) for a in set(attrs)))

    def ordered(self, attrs: Iterable[str]) -> tuple[str, ...]:
        return tuple(self.attributes[i] for i in self.indices(attrs))

    def check(self, attrs: Iterable[str]) -> frozenset[str]:
        attrs = frozenset(attrs)
        for a in attrs:
            self.index(a)
        return attrs


@dataclass(frozen=True)
class Row:
    """One tuple of a relation.  ``id`` is unique within its relation."""

    id: int
    cells: tuple[Cell, ...]
    schema: Schema = field(compare=False, repr=False)

    def __getitem__(self, attr: str) -> Cell:
        return self.cells[self.schema.index(attr)]

    def nulls(self) -> Iterator[tuple[str, Null]]:
        for attr, cell in zip(self.schema.attributes, self.cells):
            if isinstance(cell, Null):
                yield attr, cell

    def as_dict(self) -> dict[str, Cell]:
        return dict(zip(self.schema.attributes, self.cells))


def _coerce_cell(cell) -> Cell:
    if cell is None:
        return fresh_null()
    if isinstance(cell, (str, Null)):
        return cell
    raise TypeError(f"cells must be str, None or Null, got {type(cell).__name__}")


class Relation:
    """A finite multiset of rows over a schema.  Immutable once built."""

    def __init__(self, schema: Schema, rows: Iterable[Row] = ()):
        self.schema = schema
        self.rows: tuple[Row, ...] = tuple(rows)
        self._validate()
        self._by_id = {row.id: row for row in self.rows}

    @classmethod
    def from_rows(
        cls,
        attributes: Sequence[str] | Schema,
        rows: Iterable[Sequence],
        nullable: Iterable[str] | None = None,
        start_id: int = 1,
    ) -> Relation:
        """Build a relation from plain sequences; ``None`` becomes a fresh marker."""
        if isinstance(attributes, Schema):
            schema = attributes
        else:
            schema = Schema(tuple(attributes), None if nullable is None else frozenset(nullable))
        built = []
        for i, raw in enumerate(rows, start=start_id):
            cells = tuple(_coerce_cell(c) for c in raw)
            built.append(Row(i, cells, schema))
        return cls(schema, built)

    def _validate(self) -> None:
        seen_ids: set[int] = set()
        seen_occ: set[int] = set()
        arity = len(self.schema)
        for row in self.rows:
            if len(row.cells) != arity:
                raise SchemaError(f"row {row.id} has {len(row.cells)} cells, schema has {arity}")
            if row.id in seen_ids:
                raise SchemaError(f"duplicate row id {row.id}")
            seen_ids.add(row.id)
            if row.schema is not self.schema and row.schema != self.schema:
                raise SchemaError(f"row {row.id} belongs to a different schema")
            for attr, marker in row.nulls():
                if attr not in self.schema.nullable:
                    raise SchemaError(f"row {row.id}: attribute {attr!r} is not nullable")
                if marker.occ in seen_occ:
                    raise SchemaError(f"null marker occurrence {marker.occ} used twice")
                seen_occ.add(marker.occ)

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self) -> Iterator[Row]:
        return iter(self.rows)

    def __repr__(self) -> str:
        return f"Relation({list(self.schema.attributes)}, {len(self.rows)} rows)"

    @property
    def attributes(self) -> tuple[str, ...]:
        return self.schema.attributes

    def row(self, row_id: int) -> Row:
        try:
            return self._by_id[row_id]
        except KeyError:
            raise KeyError(f"no row with id {row_id}") from None

    def markers(self, attrs: Iterable[str] | None = None) -> list[tuple[int, str, Null]]:
        """(row id, attribute, marker) for every null in ``attrs`` (default: all)."""
        wanted = None if attrs is None else self.schema.check(attrs)
        out = []
        for row in self.rows:
            for attr, marker in row.nulls():
                if wanted is None or attr in wanted:
                    out.append((row.id, attr, marker))
        return out

    def has_nulls(self, attrs: Iterable[str] | None = None) -> bool:
        return bool(self.markers(attrs))

    def values(self, attrs: Iterable[str] | None = None) -> set[str]:
        idx = range(len(self.schema)) if attrs is None else self.schema.indices(attrs)
        return {row.cells[i] for row in self.rows for i in idx if not isinstance(row.cells[i], Null)}

    def with_rows(self, rows: Iterable[Row]) -> Relation:
        return Relation(self.schema, rows)

    def substitute(self, assignment: Mapping[int, str]) -> Relation:
        """Replace markers whose occurrence id is in ``assignment`` by the mapped value."""
        rows = []
        for row in self.rows:
            cells = tuple(
                assignment.get(c.occ, c) if isinstance(c, Null) else c for c in row.cells
            )
            rows.append(Row(row.id, cells, self.schema))
        return Relation(self.schema, rows)

    def records(self) -> list[list[str | None]]:
        """Plain lists with ``None`` for markers, in row order."""
        return [[None if isinstance(c, Null) else c for c in row.cells] for row in self.rows]

    def to_csv(self, null_token: str = "") -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.schema.attributes)
        for rec in self.records():
            writer.writerow([null_token if c is None else c for c in rec])
        return buf.getvalue()


def read_csv(source, null_token: str = "", nullable: Iterable[str] | None = None) -> Relation:
    """Parse CSV text (or an open file) into a relation.

    The header row names the attributes; a cell equal to ``null_token``
    becomes a fresh null marker.
    """
    text = source if isinstance(source, str) else source.read()
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise SchemaError("CSV input has no header row") from None
    header = [h.strip() for h in header]
    rows = []
    for lineno, rec in enumerate(reader, start=2):
        if not rec:
            continue
        if len(rec) != len(header):
            raise SchemaError(f"line {lineno}: expected {len(header)} fields, got {len(rec)}")
        rows.append([None if c == null_token else c for c in rec])
    return Relation.from_rows(header, rows, nullable=nullable)


def load_csv(path, null_token: str = "", nullable: Iterable[str] | None = None) -> Relation:
    with open(path, newline="", encoding="utf-8") as fh:
        return read_csv(fh, null_token=null_token, nullable=nullable)


def _cell_eq3(a: Cell, b: Cell) -> TruthValue:
    if isinstance(a, Null) or isinstance(b, Null):
        return TruthValue.UNKNOWN
    return TruthValue.TRUE if a == b else TruthValue.FALSE


def eq3(t: Row, u: Row, attrs: Iterable[str]) -> TruthValue:
    """Codd's three-valued comparison of ``t[X]`` and ``u[X]``."""
    result = TruthValue.TRUE
    for i in t.schema.indices(attrs):
        result = result & _cell_eq3(t.cells[i], u.cells[i])
        if result is TruthValue.FALSE:
            return result
    return result


def identical(t: Row, u: Row, attrs: Iterable[str]) -> bool:
    """True when, attribute by attribute, both cells are markers or both hold the same value."""
    for i in t.schema.indices(attrs):
        a, b = t.cells[i], u.cells[i]
        if isinstance(a, Null) or isinstance(b, Null):
            if not (isinstance(a, Null) and isinstance(b, Null)):
                return False
        elif a != b:
            return False
    return True


def is_duplicate(t: Row, u: Row) -> bool:
    return identical(t, u, t.schema.attributes)


def identity_key(row: Row, positions: Sequence[int]) -> tuple[str | None, ...]:
    """Hashable key under which two rows collide iff they are identical on ``positions``."""
    return tuple(None if isinstance(row.cells[i], Null) else row.cells[i] for i in positions)


def project(r: Relation, attrs: Iterable[str]) -> Relation:
    """Projection with duplicate elimination; the first row of each identity class is kept."""
    attrs = r.schema.ordered(attrs)
    positions = r.schema.indices(attrs)
    schema = Schema(attrs, r.schema.nullable & set(attrs))
    seen: set[tuple] = set()
    rows = []
    for row in r.rows:
        key = identity_key(row, positions)
        if key in seen:
            continue
        seen.add(key)
        rows.append(Row(row.id, tuple(row.cells[i] for i in positions), schema))
    return Relation(schema, rows)


def fresh_values(taken: Iterable[str]) -> Iterator[str]:
    """Yield ``⊥0, ⊥1, ...`` skipping anything in ``taken``."""
    taken = set(taken)
    for i in itertools.count():
        value = f"⊥{i}"
        if value not in taken:
            yield value
