"""Command-line front end.

Exit status: 0 when every check passes or the operation succeeds, 1 when a
violation is found, 2 for usage errors, bad input and size-guard refusals.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from typing import Sequence, TextIO

from . import design, enforcement, fds as fdmod, realization, semantics
from .errors import NullFDError, PreconditionFailed
from .fds import FD, FDSet
from .relation import Relation, load_csv

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2

COMMANDS = ("check", "closure", "mincover", "keys", "onerhs", "realize", "enforce", "decompose", "join", "worlds")


@dataclass(frozen=True)
class Config:
    null_token: str = ""
    null_sort: str = "high"
    oracle_cap: int = semantics.DEFAULT_ORACLE_CAP
    output: str = "text"

    def __post_init__(self):
        if self.oracle_cap <= 0:
            raise ValueError("oracle_cap must be positive")


def _compact(fd: FD) -> str:
    return str(fd).replace(" ", "")


def _attr_list(text: str) -> list[str]:
    return [a.strip() for a in text.split(",") if a.strip()]


class _Context:
    def __init__(self, cfg: Config, out: TextIO, err: TextIO):
        self.cfg = cfg
        self.out = out
        self.err = err

    def emit(self, text: str = "") -> None:
        print(text, file=self.out)

    def emit_json(self, payload) -> None:
        print(json.dumps(payload, sort_keys=True), file=self.out)

    @property
    def json(self) -> bool:
        return self.cfg.output == "json"

    def load(self, rel_path: str, fd_path: str | None = None) -> tuple[Relation, FDSet, frozenset[str] | None]:
        nullable = None
        spec = FDSet()
        if fd_path is not None:
            spec, nullable = fdmod.load_fd_spec(fd_path)
        r = load_csv(rel_path, self.cfg.null_token, nullable)
        spec.validate(r.attributes)
        return r, spec, nullable


def _violation_json(v: semantics.Violation | None):
    if v is None:
        return None
    return {"fd": str(v.fd), "witness": list(v.witness), "detail": v.detail}


def cmd_check(ctx: _Context, args) -> int:
    r, spec, _ = ctx.load(args.relation, args.fds)
    mode = semantics.Mode(args.mode)
    results = [(fd, semantics.holds(r, fd, mode)) for fd in spec]
    if ctx.json:
        ctx.emit_json({
            "command": "check",
            "mode": mode.value,
            "results": [
                {
                    "fd": str(fd),
                    "holds": v.holds,
                    "violation": _violation_json(v.violation),
                    "valuation": None if v.valuation is None else {str(k): val for k, val in sorted(v.valuation.assignment.items())},
                }
                for fd, v in results
            ],
        })
    else:
        for fd, v in results:
            if v:
                ctx.emit(f"PASS {fd}")
            else:
                a, b = v.violation.witness
                ctx.emit(f"FAIL {fd}  rows {a},{b}: {v.violation.detail}")
    return EXIT_OK if all(v for _, v in results) else EXIT_VIOLATION


def cmd_closure(ctx: _Context, args) -> int:
    spec, _ = fdmod.load_fd_spec(args.fds)
    attrs = _attr_list(args.attributes)
    closure = sorted(fdmod.attribute_closure(attrs, spec))
    if ctx.json:
        ctx.emit_json({"command": "closure", "attributes": sorted(attrs), "closure": closure})
    else:
        ctx.emit(",".join(closure))
    return EXIT_OK


def cmd_mincover(ctx: _Context, args) -> int:
    spec, _ = fdmod.load_fd_spec(args.fds)
    cover = fdmod.minimal_cover(spec)
    if ctx.json:
        ctx.emit_json({"command": "mincover", "fds": [str(f) for f in cover]})
    else:
        for fd in cover:
            ctx.emit(str(fd))
    return EXIT_OK


def cmd_keys(ctx: _Context, args) -> int:
    r, _, _ = ctx.load(args.relation)
    report = design.literal_keys(r)
    if ctx.json:
        ctx.emit_json({
            "command": "keys",
            "keys": [sorted(k) for k in report.keys],
            "superkeys": [sorted(k) for k in report.superkeys],
        })
    else:
        for key in report.keys:
            ctx.emit(",".join(sorted(key, key=r.attributes.index)))
    return EXIT_OK


def cmd_onerhs(ctx: _Context, args) -> int:
    spec, declared = fdmod.load_fd_spec(args.fds)
    if args.nullable is not None:
        nullable = frozenset(_attr_list(args.nullable))
    elif declared is not None:
        nullable = declared
    else:
        nullable = spec.attributes
    report = fdmod.check_1rhs(spec, nullable)
    if ctx.json:
        ctx.emit_json({
            "command": "onerhs",
            "ok": report.ok,
            "violations": [{"kind": v.kind, "attributes": list(v.attributes)} for v in report.violations],
        })
    else:
        ctx.emit("1RHS ok" if report.ok else "1RHS violated")
        for v in report.violations:
            ctx.emit(f"  {v}")
    return EXIT_OK if report.ok else EXIT_VIOLATION


def cmd_realize(ctx: _Context, args) -> int:
    r, spec, nullable = ctx.load(args.relation, args.fds)
    try:
        if args.semantics == "literal":
            out, plan = realization.realize_literal(r, spec)
        else:
            out, plan = realization.realize_sr_set(r, spec, nullable)
    except PreconditionFailed as exc:
        print(f"cannot realize: {exc}", file=ctx.err)
        return EXIT_VIOLATION
    if ctx.json:
        ctx.emit_json({
            "command": "realize",
            "csv": out.to_csv(ctx.cfg.null_token),
            "plan": [vars(s) for s in plan],
        })
    else:
        ctx.out.write(out.to_csv(ctx.cfg.null_token))
        for line in plan.lines():
            ctx.emit(f"# {line}")
    return EXIT_OK


def cmd_enforce(ctx: _Context, args) -> int:
    r, spec, _ = ctx.load(args.relation, args.fds)
    literal = spec if args.semantics == "literal" else ()
    sr = spec if args.semantics == "sr" else ()
    try:
        ir = enforcement.build(r, literal, sr, ctx.cfg.null_sort)
    except PreconditionFailed as exc:
        print(f"initial relation rejected: {exc}", file=ctx.err)
        return EXIT_VIOLATION
    status = EXIT_OK
    for lineno, rec in enumerate(csv.reader(args.input), start=1):
        if not rec:
            continue
        cells = [None if c == ctx.cfg.null_token else c for c in rec]
        try:
            outcome = ir.try_insert(cells)
        except NullFDError as exc:
            print(f"stdin:{lineno}: {exc}", file=ctx.err)
            status = EXIT_USAGE
            continue
        if outcome:
            ctx.emit("ACCEPT")
        else:
            v = outcome.violations[0]
            ctx.emit(f"REJECT {_compact(v.fd)} {v.witness[0]},{v.witness[1]}")
            if status == EXIT_OK:
                status = EXIT_VIOLATION
    return status


def _pick_split(r: Relation, spec: FDSet) -> FD | None:
    for fd in spec:
        if fd.attributes != set(r.attributes) and semantics.holds_literal(r, fd):
            return fd
    return None


def cmd_decompose(ctx: _Context, args) -> int:
    r, spec, _ = ctx.load(args.relation, args.fds)
    if args.fd:
        left, _, right = args.fd.partition("->")
        fd = FD.of(left, right)
    else:
        fd = _pick_split(r, spec)
        if fd is None:
            print("no FD in the file holds literally and splits the schema", file=ctx.err)
            return EXIT_VIOLATION
    try:
        dec = design.decompose_step(r, fd)
    except PreconditionFailed as exc:
        print(f"cannot decompose: {exc}", file=ctx.err)
        return EXIT_VIOLATION
    ctx.emit(dec.to_json() if ctx.json else str(dec))
    return EXIT_OK if dec.lossless else EXIT_VIOLATION


def cmd_join(ctx: _Context, args) -> int:
    r1, _, _ = ctx.load(args.left)
    r2, _, _ = ctx.load(args.right)
    joined = design.literal_join(r1, r2, _attr_list(args.on))
    if ctx.json:
        ctx.emit_json({"command": "join", "attributes": list(joined.attributes), "rows": joined.records()})
    else:
        ctx.out.write(joined.to_csv(ctx.cfg.null_token))
    return EXIT_OK


def cmd_worlds(ctx: _Context, args) -> int:
    r, spec, _ = ctx.load(args.relation, args.fds)
    quantifier = "forall" if args.forall else "exists"
    verdict = semantics.world_oracle(r, spec, quantifier, ctx.cfg.oracle_cap)
    if ctx.json:
        ctx.emit_json({"command": "worlds", "quantifier": quantifier, "holds": verdict.holds})
    elif quantifier == "exists":
        ctx.emit("joint world exists" if verdict else "no joint world")
    else:
        ctx.emit("holds in every world" if verdict else "fails in some world")
    return EXIT_OK if verdict else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--null-token", default=argparse.SUPPRESS, help="CSV cell text read as a null marker (default: empty)")
    common.add_argument("--null-sort", choices=["high", "low"], default=argparse.SUPPRESS)
    common.add_argument("--oracle-cap", type=int, default=argparse.SUPPRESS, help="maximum number of enumerated worlds")
    common.add_argument("--output", choices=["text", "json"], default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="nullfd", parents=[common], description="FDs over relations with null markers")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="check FDs under one semantics")
    p.add_argument("relation")
    p.add_argument("fds")
    p.add_argument("--mode", choices=[m.value for m in semantics.Mode], default="literal")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("closure", parents=[common], help="attribute closure")
    p.add_argument("fds")
    p.add_argument("attributes", help="comma-separated attribute list")
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("mincover", parents=[common], help="minimal cover")
    p.add_argument("fds")
    p.set_defaults(func=cmd_mincover)

    p = sub.add_parser("keys", parents=[common], help="literal keys of a relation")
    p.add_argument("relation")
    p.set_defaults(func=cmd_keys)

    p = sub.add_parser("onerhs", parents=[common], help="check the 1RHS condition")
    p.add_argument("fds")
    p.add_argument("--nullable", help="override the nullable attributes")
    p.set_defaults(func=cmd_onerhs)

    p = sub.add_parser("realize", parents=[common], help="replace null markers by values")
    p.add_argument("relation")
    p.add_argument("fds")
    p.add_argument("--semantics", choices=["literal", "sr"], default="literal")
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("enforce", parents=[common], help="stream inserts from stdin")
    p.add_argument("relation")
    p.add_argument("fds")
    p.add_argument("--semantics", choices=["literal", "sr"], default="literal")
    p.set_defaults(func=cmd_enforce)

    p = sub.add_parser("decompose", parents=[common], help="one lossless split along a literal FD")
    p.add_argument("relation")
    p.add_argument("fds")
    p.add_argument("--fd", help="split along this FD, e.g. 'chair -> professor'")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("join", parents=[common], help="literal join of two relations")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--on", required=True, help="comma-separated join attributes")
    p.set_defaults(func=cmd_join)

    p = sub.add_parser("worlds", parents=[common], help="possible-worlds oracle")
    p.add_argument("relation")
    p.add_argument("fds")
    q = p.add_mutually_exclusive_group()
    q.add_argument("--exists", action="store_true", default=True)
    q.add_argument("--forall", action="store_true")
    p.set_defaults(func=cmd_worlds)
    return parser


def execute(argv: Sequence[str] | None = None, stdin: TextIO | None = None,
            stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = Config(
            null_token=getattr(args, "null_token", ""),
            null_sort=getattr(args, "null_sort", "high"),
            oracle_cap=getattr(args, "oracle_cap", semantics.DEFAULT_ORACLE_CAP),
            output=getattr(args, "output", "text"),
        )
    except ValueError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    args.input = stdin or sys.stdin
    ctx = _Context(cfg, out, err)
    try:
        return args.func(ctx, args)
    except (NullFDError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE


def main() -> None:
    sys.exit(execute())


if __name__ == "__main__":
    main()
