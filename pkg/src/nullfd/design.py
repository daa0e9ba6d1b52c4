"""Logical design over literal FDs: keys, foreign keys, joins and decomposition.

All matching here uses identity: a marker matches a marker and nothing else,
so markers behave like one more ordinary value.
"""

from __future__ import annotations

import itertools
import json
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable

from .errors import PreconditionFailed, SchemaError
from .fds import FD, implies
from .relation import Relation, Schema, identity_key, project
from .semantics import holds_literal

MAX_KEY_ARITY = 12


def _classes(r: Relation, attrs) -> int:
    positions = r.schema.indices(attrs)
    return len({identity_key(row, positions) for row in r.rows})


def is_literal_superkey(r: Relation, attrs: Iterable[str]) -> bool:
    """``X -> sch(r)`` holds literally: no two non-duplicate rows are identical on ``X``."""
    return _classes(r, attrs) == _classes(r, r.attributes)


@dataclass(frozen=True)
class LiteralKeyReport:
    superkeys: tuple[frozenset[str], ...]
    keys: tuple[frozenset[str], ...]


def literal_keys(r: Relation, max_arity: int = MAX_KEY_ARITY) -> LiteralKeyReport:
    """All nonempty literal superkeys and the minimal ones among them, by ascending size."""
    attrs = r.attributes
    if not attrs:
        raise SchemaError("relation has an empty schema")
    if len(attrs) > max_arity:
        raise SchemaError(f"key enumeration refused for arity {len(attrs)} > {max_arity}")
    full = _classes(r, attrs)
    superkeys, keys = [], []
    for size in range(1, len(attrs) + 1):
        for combo in itertools.combinations(attrs, size):
            candidate = frozenset(combo)
            if _classes(r, candidate) != full:
                continue
            superkeys.append(candidate)
            if not any(k < candidate for k in keys):
                keys.append(candidate)
    return LiteralKeyReport(tuple(superkeys), tuple(keys))


@dataclass(frozen=True)
class ForeignKeyReport:
    holds: bool
    contains_key: bool
    unmatched: tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return self.holds


def check_literal_fk(r1: Relation, r2: Relation, attrs: Iterable[str]) -> ForeignKeyReport:
    """Every ``r1`` row must have an identical match on ``X`` in ``r2``, and ``X`` must contain a literal key of ``r2``."""
    attrs = frozenset(attrs)
    # the two schemas may order columns differently; line them up by name
    order1 = [r1.schema.index(a) for a in sorted(attrs)]
    order2 = [r2.schema.index(a) for a in sorted(attrs)]
    contains_key = is_literal_superkey(r2, attrs)
    targets = {identity_key(row, order2) for row in r2.rows}
    unmatched = tuple(row.id for row in r1.rows if identity_key(row, order1) not in targets)
    return ForeignKeyReport(contains_key and not unmatched, contains_key, unmatched)


def literal_join(r1: Relation, r2: Relation, attrs: Iterable[str]) -> Relation:
    """Pair rows identical on ``attrs``; columns of ``r1`` first, then the rest of ``r2``.

    Markers in the output are fresh occurrences.
    """
    attrs = sorted(attrs)
    for a in attrs:
        r1.schema.index(a)
        r2.schema.index(a)
    extra = [a for a in r2.attributes if a not in r1.schema]
    schema = Schema(
        r1.attributes + tuple(extra),
        r1.schema.nullable | (r2.schema.nullable & set(extra)),
    )
    k1 = [r1.schema.index(a) for a in attrs]
    k2 = [r2.schema.index(a) for a in attrs]
    extra_pos = [r2.schema.index(a) for a in extra]
    buckets: dict[tuple, list] = defaultdict(list)
    for row in r2.rows:
        buckets[identity_key(row, k2)].append(row)
    out = []
    for t1 in r1.rows:
        for t2 in buckets.get(identity_key(t1, k1), ()):
            out.append(list(t1.cells) + [t2.cells[p] for p in extra_pos])
    records = [[c if isinstance(c, str) else None for c in rec] for rec in out]
    return Relation.from_rows(schema, records)


@dataclass(frozen=True)
class LosslessReport:
    lossless: bool
    spurious: tuple[tuple, ...] = ()
    missing: tuple[tuple, ...] = ()

    def __bool__(self) -> bool:
        return self.lossless

    @property
    def counterexample(self) -> tuple | None:
        for group in (self.spurious, self.missing):
            if group:
                return group[0]
        return None


def _content(r: Relation, attributes) -> set[tuple]:
    positions = [r.schema.index(a) for a in attributes]
    return {identity_key(row, positions) for row in r.rows}


def check_lossless(r: Relation, left: Iterable[str], right: Iterable[str]) -> LosslessReport:
    """Does ``π_left(r)`` literally joined with ``π_right(r)`` give back ``r``?

    Rows are compared as identity classes (duplicates do not count); a
    counterexample is a row present on one side only, with ``None`` for markers.
    """
    left, right = r.schema.check(left), r.schema.check(right)
    if left | right != set(r.attributes):
        raise SchemaError(
            f"fragments do not cover the schema: missing {sorted(set(r.attributes) - left - right)}"
        )
    joined = literal_join(project(r, left), project(r, right), left & right)
    original = _content(r, r.attributes)
    rebuilt = _content(joined, r.attributes)
    return LosslessReport(
        original == rebuilt,
        tuple(sorted(rebuilt - original, key=repr)),
        tuple(sorted(original - rebuilt, key=repr)),
    )


@dataclass(frozen=True)
class Decomposition:
    fd: FD
    fragments: tuple[frozenset[str], frozenset[str]]
    lossless: bool = field(default=False)

    def __str__(self) -> str:
        z, w = (", ".join(sorted(f)) for f in self.fragments)
        verdict = "lossless" if self.lossless else "LOSSY"
        return f"split on {self.fd}: [{z}] + [{w}] ({verdict})"

    def to_json(self) -> str:
        return json.dumps(
            {
                "fd": str(self.fd),
                "fragments": [sorted(f) for f in self.fragments],
                "lossless": self.lossless,
            },
            sort_keys=True,
        )


def decompose_step(r: Relation, fd: FD, fds: Iterable[FD] | None = None) -> Decomposition:
    """Split ``r`` into ``X ∪ Y`` and ``(sch(r) - Y) ∪ X`` along a literal FD ``X -> Y``.

    The shared attributes are exactly ``X``, which literally determines the
    first fragment, so the join is lossless.  The verdict is recomputed
    rather than assumed.  When ``fds`` is given, ``fd`` must follow from it.
    """
    schema = set(r.attributes)
    r.schema.check(fd.attributes)
    if fds is not None and not implies(list(fds), fd):
        raise PreconditionFailed(f"{fd} is not implied by the given FDs")
    verdict = holds_literal(r, fd)
    if not verdict:
        raise PreconditionFailed(f"{fd} does not hold literally", [verdict.violation])
    if fd.attributes == schema:
        raise PreconditionFailed(f"{fd} covers the whole schema; nothing to split off")
    left = frozenset(fd.attributes)
    right = frozenset((schema - fd.rhs) | fd.lhs)
    report = check_lossless(r, left, right)
    return Decomposition(fd, (left, right), report.lossless)
