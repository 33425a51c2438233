"""Core data model: operations, programs, executions, views.

Operations are 4-tuples (kind, process, variable, id).  Each write carries
an implicit unique value identified with its id, so the model has no value
domain: a writes-to map from read ids to write ids captures everything the
read values convey.  A read absent from the map read the initial value.

A view is one process's total order over its own operations plus every
write of the execution; all consistency notions quantify over one view
per process.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from causalrnr.errors import UniverseMismatch
from causalrnr.relations import Pair, Relation

READ = "r"
WRITE = "w"


@dataclass(frozen=True)
class Operation:
    kind: str
    process: int
    variable: str
    id: str

    def __post_init__(self):
        if self.kind not in (READ, WRITE):
            raise ValueError(f"unknown operation kind {self.kind!r}")


@dataclass(frozen=True)
class Program:
    processes: tuple[int, ...]
    listing: tuple[tuple[Operation, ...], ...]  # one tuple per process, in order

    @classmethod
    def of(cls, per_process: Mapping[int, Iterable[Operation]]) -> "Program":
        pids = tuple(sorted(per_process))
        return cls(pids, tuple(tuple(per_process[p]) for p in pids))

    def __post_init__(self):
        if len(set(self.processes)) != len(self.processes):
            raise ValueError("duplicate process id")
        if len(self.listing) != len(self.processes):
            raise ValueError("listing/process count mismatch")
        seen: set[str] = set()
        for pid, ops in zip(self.processes, self.listing):
            for op in ops:
                if op.process != pid:
                    raise ValueError(f"operation {op.id} filed under process {pid}")
                if op.id in seen:
                    raise ValueError(f"duplicate operation id {op.id}")
                seen.add(op.id)

    @cached_property
    def ops(self) -> dict[str, Operation]:
        return {op.id: op for ops in self.listing for op in ops}

    @cached_property
    def all_ops(self) -> tuple[str, ...]:
        return tuple(sorted(self.ops))

    @cached_property
    def writes(self) -> tuple[str, ...]:
        return tuple(o for o in self.all_ops if self.ops[o].kind == WRITE)

    def own(self, process: int) -> tuple[str, ...]:
        """Process `process`'s operations in program order."""
        return tuple(op.id for op in self.listing[self.processes.index(process)])

    def universe_of(self, process: int) -> tuple[str, ...]:
        return tuple(sorted(set(self.own(process)) | set(self.writes)))

    def is_write(self, op_id: str) -> bool:
        return self.ops[op_id].kind == WRITE

    def proc_of(self, op_id: str) -> int:
        return self.ops[op_id].process

    def var_of(self, op_id: str) -> str:
        return self.ops[op_id].variable

    @cached_property
    def po_pairs(self) -> frozenset[Pair]:
        """Program order: the disjoint union of the per-process chains, closed."""
        pairs = set()
        for ops in self.listing:
            ids = [op.id for op in ops]
            for i, a in enumerate(ids):
                for b in ids[i + 1 :]:
                    pairs.add((a, b))
        return frozenset(pairs)

    def po_relation(self) -> Relation:
        return Relation(self.all_ops, self.po_pairs)

    def po_restricted(self, subset: Iterable[str]) -> frozenset[Pair]:
        keep = set(subset)
        return frozenset((a, b) for a, b in self.po_pairs if a in keep and b in keep)

    @cached_property
    def variables(self) -> tuple[str, ...]:
        return tuple(sorted({op.variable for op in self.ops.values()}))


@dataclass(frozen=True)
class Execution:
    program: Program
    writes_to: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "writes_to", dict(self.writes_to))
        ops = self.program.ops
        for read, write in self.writes_to.items():
            if read not in ops or ops[read].kind != READ:
                raise ValueError(f"writes-to source {read} is not a read")
            if write not in ops or ops[write].kind != WRITE:
                raise ValueError(f"writes-to target {write} is not a write")
            if ops[read].variable != ops[write].variable:
                raise ValueError(f"writes-to {read}<-{write} crosses variables")


@dataclass(frozen=True)
class View:
    process: int
    sequence: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "sequence", tuple(self.sequence))

    @cached_property
    def positions(self) -> dict[str, int]:
        return {o: i for i, o in enumerate(self.sequence)}

    def order(self) -> Relation:
        return Relation.total(self.sequence)

    def orders(self, a: str, b: str) -> bool:
        pos = self.positions
        return pos[a] < pos[b]

    def reduction_pairs(self) -> tuple[Pair, ...]:
        """Consecutive pairs: the transitive reduction of a total order."""
        return tuple(zip(self.sequence, self.sequence[1:]))


@dataclass(frozen=True)
class ViewSet:
    views: tuple[View, ...]

    @classmethod
    def of(cls, views: Iterable[View]) -> "ViewSet":
        return cls(tuple(sorted(views, key=lambda v: v.process)))

    def __post_init__(self):
        object.__setattr__(
            self, "views", tuple(sorted(self.views, key=lambda v: v.process))
        )
        pids = [v.process for v in self.views]
        if len(set(pids)) != len(pids):
            raise ValueError("duplicate view for a process")

    @cached_property
    def by_process(self) -> dict[int, View]:
        return {v.process: v for v in self.views}

    def __getitem__(self, process: int) -> View:
        return self.by_process[process]

    def processes(self) -> tuple[int, ...]:
        return tuple(v.process for v in self.views)

    def replace(self, view: View) -> "ViewSet":
        kept = [v for v in self.views if v.process != view.process]
        return ViewSet.of(kept + [view])

    def sort_key(self) -> tuple:
        return tuple(v.sequence for v in self.views)


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    process: int | None = None
    variable: str | None = None
    edge: Pair | None = None

    def __str__(self) -> str:
        return self.message


def check_universe(view: View, program: Program) -> None:
    expected = program.universe_of(view.process)
    if tuple(sorted(view.sequence)) != expected or len(view.sequence) != len(expected):
        raise UniverseMismatch(
            f"view of process {view.process} must order exactly its own operations "
            f"plus all writes; got {list(view.sequence)}"
        )


def data_race_order(view: View, program: Program) -> Relation:
    """Per-variable suborders of the view, unioned: disjoint closed chains."""
    chains: dict[str, list[str]] = {}
    for o in view.sequence:
        chains.setdefault(program.var_of(o), []).append(o)
    pairs = set()
    for ids in chains.values():
        for i, a in enumerate(ids):
            for b in ids[i + 1 :]:
                pairs.add((a, b))
    return Relation(tuple(view.sequence), frozenset(pairs))


def validate_view(view: View, execution: Execution) -> Violation | None:
    """Read-validity: each read of the view's owner returns the last
    preceding same-variable write, or the initial value if unmapped."""
    program = execution.program
    check_universe(view, program)
    last_write: dict[str, str] = {}
    for o in view.sequence:
        op = program.ops[o]
        if op.kind == WRITE:
            last_write[op.variable] = o
            continue
        expected = execution.writes_to.get(o)
        actual = last_write.get(op.variable)
        if expected != actual:
            want = expected if expected is not None else "the initial value"
            got = actual if actual is not None else "the initial value"
            return Violation(
                kind="read-validity",
                process=view.process,
                variable=op.variable,
                edge=(actual or "", o) if actual else None,
                message=(
                    f"read {o} on {op.variable} must return {want} "
                    f"but view of process {view.process} makes it return {got}"
                ),
            )
    return None


def derive_writes_to(views: ViewSet, program: Program) -> Execution:
    """The execution a view set explains: each read maps to the last
    same-variable write preceding it in its owner's view."""
    writes_to: dict[str, str] = {}
    for view in views.views:
        last_write: dict[str, str] = {}
        for o in view.sequence:
            op = program.ops[o]
            if op.kind == WRITE:
                last_write[op.variable] = o
            elif op.process == view.process:
                w = last_write.get(op.variable)
                if w is not None:
                    writes_to[o] = w
    return Execution(program, writes_to)


def write_read_write_order(execution: Execution) -> Relation:
    """WO: (w1, w2) whenever some read of w1 precedes the write w2 in
    program order.  Raw pairs; callers close together with PO."""
    program = execution.program
    pairs = set()
    for read, w1 in execution.writes_to.items():
        proc = program.proc_of(read)
        own = program.own(proc)
        after = own[own.index(read) + 1 :]
        for o in after:
            if program.is_write(o) and w1 != o:
                pairs.add((w1, o))
    return Relation(program.writes, frozenset(pairs))
