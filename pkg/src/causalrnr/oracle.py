"""Brute-force ground truth for record goodness.

`enumerate_certifying` walks every set of replay views that extends a
record under a consistency model, with sound pruning (program order,
record edges, and orderings already forced by fixed views) and a final
authoritative check per candidate.  The goodness verdicts reduce to this
enumeration, so they are independent of the record constructions they
judge.

`extend_to_views` and the two necessity witnesses are the constructive
side: they build, from a record with one edge dropped, a certifying view
set that provably differs from the original.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping

from causalrnr.consistency import (
    CAUSAL,
    STRONG_CAUSAL,
    check_causal,
    check_strong_causal,
    enumeration_cap,
)
from causalrnr.errors import (
    BudgetExceeded,
    InternalInvariant,
    NotStronglyCausal,
    PreconditionViolated,
)
from causalrnr.model import (
    Execution,
    Program,
    READ,
    View,
    ViewSet,
    WRITE,
    data_race_order,
    derive_writes_to,
)
from causalrnr.race_record import RaceAnalysis
from causalrnr.records import Record
from causalrnr.relations import (
    Pair,
    Relation,
    has_cycle,
    transitive_closure,
)
from causalrnr.search import NodeBudget, iter_extensions, preds_from_pairs
from causalrnr.view_record import minimal_view_record

DEFAULT_NODE_BUDGET = 20_000_000


@dataclass(frozen=True)
class Verdict:
    good: bool
    counterexample: ViewSet | None
    original_certifies: bool
    enumerated: int


def certifies(candidate: ViewSet, program: Program, record: Record, model: str) -> bool:
    """Whether `candidate` certifies a replay: it extends the record and
    explains its own derived execution under the model."""
    if model not in (CAUSAL, STRONG_CAUSAL):
        raise ValueError(f"unsupported replay model {model!r}")
    for i in sorted(program.processes):
        view = candidate[i]
        pos = view.positions
        for a, b in record.edges(i):
            if a not in pos or b not in pos:
                raise ValueError(f"record edge ({a}, {b}) escapes process {i}'s view")
            if pos[a] > pos[b]:
                return False
    derived = derive_writes_to(candidate, program)
    check = check_causal if model == CAUSAL else check_strong_causal
    return check(candidate, derived) is None


def _contribution(program: Program, view: View, model: str) -> frozenset[Pair]:
    """Orderings a fixed view forces on every other view of the replay."""
    pairs: set[Pair] = set()
    pos = view.positions
    i = view.process
    if model == STRONG_CAUSAL:
        for b in program.own(i):
            if not program.is_write(b):
                continue
            pb = pos[b]
            for a in program.writes:
                if a != b and pos[a] < pb:
                    pairs.add((a, b))
        return frozenset(pairs)
    # causal: write-read-write edges produced by this view's own reads
    own = program.own(i)
    last_write: dict[str, str] = {}
    for o in view.sequence:
        op = program.ops[o]
        if op.kind == WRITE:
            last_write[op.variable] = o
        elif op.process == i:
            source = last_write.get(op.variable)
            if source is None:
                continue
            after = own[own.index(o) + 1 :]
            for w2 in after:
                if program.is_write(w2) and w2 != source:
                    pairs.add((source, w2))
    return frozenset(pairs)


def _respects(view: View, pairs) -> bool:
    pos = view.positions
    return all(pos[a] < pos[b] for a, b in pairs)


def _descend(
    program: Program,
    record: Record,
    model: str,
    procs: tuple[int, ...],
    fixed: list[View],
    budget: NodeBudget,
) -> Iterator[ViewSet]:
    if len(fixed) == len(procs):
        candidate = ViewSet.of(fixed)
        if certifies(candidate, program, record, model):
            yield candidate
        return
    i = procs[len(fixed)]
    universe = program.universe_of(i)
    forced: set[Pair] = set(program.po_restricted(universe))
    forced |= record.edges(i)
    for view in fixed:
        forced |= _contribution(program, view, model)
    try:
        closed = transitive_closure(Relation(universe, frozenset(forced)))
    except ValueError as exc:
        raise ValueError(f"record for process {i} is malformed: {exc}") from exc
    if has_cycle(closed):
        return
    preds = preds_from_pairs(universe, closed.pairs)
    for seq in iter_extensions(universe, preds, None, budget):
        view = View(i, seq)
        contribution = _contribution(program, view, model)
        if all(_respects(v, contribution) for v in fixed):
            yield from _descend(program, record, model, procs, fixed + [view], budget)


def enumerate_certifying(
    program: Program,
    record: Record,
    model: str,
    *,
    max_ops: int | None = None,
    node_budget: int | None = DEFAULT_NODE_BUDGET,
) -> Iterator[ViewSet]:
    """Every view set certifying a replay of the record, in lexicographic
    order of the per-process sequences."""
    cap = enumeration_cap(max_ops)
    if len(program.all_ops) > cap:
        raise BudgetExceeded(
            f"{len(program.all_ops)} operations exceed the enumeration cap of {cap}"
        )
    budget = NodeBudget(node_budget)
    procs = tuple(sorted(program.processes))
    yield from _descend(program, record, model, procs, [], budget)


def _find_counterexample(
    program: Program,
    record: Record,
    model: str,
    differs,
    prefix: list[View],
    budget: NodeBudget,
) -> tuple[ViewSet | None, int]:
    procs = tuple(sorted(program.processes))
    seen = 0
    for candidate in _descend(program, record, model, procs, prefix, budget):
        seen += 1
        if differs(candidate):
            return candidate, seen
    return None, seen


def _branch_views(
    program: Program, record: Record, model: str, budget: NodeBudget
) -> list[View]:
    """Candidate views for the first process, used to split parallel work."""
    procs = tuple(sorted(program.processes))
    i = procs[0]
    universe = program.universe_of(i)
    forced = set(program.po_restricted(universe)) | record.edges(i)
    closed = transitive_closure(Relation(universe, frozenset(forced)))
    if has_cycle(closed):
        return []
    preds = preds_from_pairs(universe, closed.pairs)
    return [View(i, seq) for seq in iter_extensions(universe, preds, None, budget)]


def _worker(args) -> tuple[ViewSet | None, int]:
    program, record, model, kind, reference, prefix_seq, prefix_proc, node_budget = args
    differs = _difference_test(program, kind, reference)
    budget = NodeBudget(node_budget)
    prefix = [View(prefix_proc, prefix_seq)]
    return _find_counterexample(program, record, model, differs, prefix, budget)


def _difference_test(program: Program, kind: str, reference):
    if kind == "views":
        return lambda candidate: candidate.sort_key() != reference
    original_dro: Mapping[int, frozenset] = reference

    def differs(candidate: ViewSet) -> bool:
        return any(
            data_race_order(candidate[i], program).pairs != original_dro[i]
            for i in sorted(program.processes)
        )

    return differs


def _goodness(
    views: ViewSet,
    program: Program,
    record: Record,
    model: str,
    kind: str,
    *,
    max_ops: int | None,
    node_budget: int | None,
    jobs: int,
) -> Verdict:
    cap = enumeration_cap(max_ops)
    if len(program.all_ops) > cap:
        raise BudgetExceeded(
            f"{len(program.all_ops)} operations exceed the enumeration cap of {cap}"
        )
    if kind == "views":
        reference = views.sort_key()
    else:
        reference = {
            i: data_race_order(views[i], program).pairs
            for i in sorted(program.processes)
        }
    original = certifies(views, program, record, model)
    procs = tuple(sorted(program.processes))
    if jobs <= 1 or len(procs) == 0:
        differs = _difference_test(program, kind, reference)
        counterexample, seen = _find_counterexample(
            program, record, model, differs, [], NodeBudget(node_budget)
        )
        return Verdict(counterexample is None, counterexample, original, seen)

    import concurrent.futures

    branches = _branch_views(program, record, model, NodeBudget(node_budget))
    tasks = [
        (program, record, model, kind, reference, v.sequence, v.process, node_budget)
        for v in branches
    ]
    seen = 0
    counterexample = None
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
        for found, count in pool.map(_worker, tasks):
            seen += count
            if found is not None and counterexample is None:
                counterexample = found
    return Verdict(counterexample is None, counterexample, original, seen)


def is_good_view_record(
    views: ViewSet,
    program: Program,
    record: Record,
    model: str = STRONG_CAUSAL,
    *,
    max_ops: int | None = None,
    node_budget: int | None = DEFAULT_NODE_BUDGET,
    jobs: int = 1,
) -> Verdict:
    """Good iff every certifying replay view set equals the original views."""
    return _goodness(
        views, program, record, model, "views",
        max_ops=max_ops, node_budget=node_budget, jobs=jobs,
    )


def is_good_race_record(
    views: ViewSet,
    program: Program,
    record: Record,
    model: str = STRONG_CAUSAL,
    *,
    max_ops: int | None = None,
    node_budget: int | None = DEFAULT_NODE_BUDGET,
    jobs: int = 1,
) -> Verdict:
    """Good iff every certifying replay view set reproduces each process's
    data-race order."""
    return _goodness(
        views, program, record, model, "dro",
        max_ops=max_ops, node_budget=node_budget, jobs=jobs,
    )


# ---------------------------------------------------------------------------
# Constructive completions and necessity witnesses
# ---------------------------------------------------------------------------


def _extended_sco(orders: Mapping[int, Relation], program: Program) -> frozenset[Pair]:
    """Strong causal order lifted to partial orders: pairs of writes each
    order holds that end at its own process's writes."""
    writes = set(program.writes)
    pairs: set[Pair] = set()
    for i, rel in orders.items():
        for a, b in rel.pairs:
            if a in writes and b in writes and program.proc_of(b) == i:
                pairs.add((a, b))
    return frozenset(pairs)


def _own_sco(rel: Relation, program: Program, process: int) -> frozenset[Pair]:
    writes = set(program.writes)
    return frozenset(
        (a, b)
        for a, b in rel.pairs
        if a in writes and b in writes and program.proc_of(b) == process
    )


def _related(rel: Relation, a: str, b: str) -> bool:
    return (a, b) in rel.pairs or (b, a) in rel.pairs


def _close_with(rel: Relation, pair: Pair) -> Relation:
    return transitive_closure(Relation(rel.universe, rel.pairs | {pair}))


def extend_to_views(partials: Mapping[int, Relation], program: Program) -> ViewSet:
    """Totalise per-process partial orders into a strongly causal view set.

    Each input must be an acyclic order over its process's universe that
    respects program order and the strong causal order the partials
    already hold jointly.  Unordered cross-process write pairs are fixed
    so that no step introduces a new strong causal ordering; remaining
    (write, read) gaps close write-first.
    """
    procs = tuple(sorted(program.processes))
    if set(partials) != set(procs):
        raise PreconditionViolated("one partial order per process is required")
    orders: dict[int, Relation] = {}
    for i in procs:
        universe = program.universe_of(i)
        rel = partials[i]
        if rel.universe != universe:
            raise PreconditionViolated(
                f"partial order of process {i} is not over its own operations "
                f"plus all writes"
            )
        if has_cycle(rel):
            raise PreconditionViolated(f"partial order of process {i} has a cycle")
        orders[i] = transitive_closure(rel)
    committed = _extended_sco(orders, program)
    for i in procs:
        universe = program.universe_of(i)
        need = committed | program.po_restricted(universe)
        missing = sorted(need - orders[i].pairs)
        if missing:
            a, b = missing[0]
            raise PreconditionViolated(
                f"partial order of process {i} does not respect the required "
                f"ordering ({a}, {b})"
            )

    cross = sorted(
        (a, b)
        for a in program.writes
        for b in program.writes
        if program.proc_of(a) != program.proc_of(b)
        and (program.proc_of(a), a) < (program.proc_of(b), b)
    )
    for a, b in cross:
        before = _extended_sco(orders, program)
        pa, pb = program.proc_of(a), program.proc_of(b)
        if not _related(orders[pa], a, b):
            orders[pa] = _close_with(orders[pa], (a, b))
        if not _related(orders[pb], a, b):
            orders[pb] = _close_with(orders[pb], (b, a))
        for k in procs:
            if k in (pa, pb) or _related(orders[k], a, b):
                continue
            keep = _close_with(orders[k], (a, b))
            if _own_sco(keep, program, k) <= _own_sco(orders[k], program, k):
                orders[k] = keep
            else:
                flip = _close_with(orders[k], (b, a))
                if not _own_sco(flip, program, k) <= _own_sco(orders[k], program, k):
                    raise InternalInvariant(
                        f"both orientations of ({a}, {b}) force a new strong "
                        f"causal ordering at process {k}"
                    )
                orders[k] = flip
        for k in procs:
            if has_cycle(orders[k]):
                raise InternalInvariant(
                    f"ordering ({a}, {b}) made process {k}'s order cyclic"
                )
        if _extended_sco(orders, program) != before:
            raise InternalInvariant(
                f"ordering ({a}, {b}) changed the strong causal order"
            )

    for i in procs:
        reads = [o for o in program.own(i) if program.ops[o].kind == READ]
        for r in reads:
            for w in program.writes:
                if not _related(orders[i], w, r):
                    orders[i] = _close_with(orders[i], (w, r))

    out = []
    for i in procs:
        rel = orders[i]
        if not rel.is_total_order():
            raise InternalInvariant(f"completion left process {i}'s order partial")
        out.append(View(i, rel.as_sequence()))
    views = ViewSet.of(out)
    for i in procs:
        pos = views[i].positions
        for a, b in partials[i].pairs:
            if pos[a] > pos[b]:
                raise InternalInvariant(
                    f"completion dropped the input ordering ({a}, {b}) of process {i}"
                )
    derived = derive_writes_to(views, program)
    bad = check_strong_causal(views, derived)
    if bad is not None:
        raise InternalInvariant(f"completion is not strongly causal: {bad}")
    return views


def necessity_witness_view_record(
    views: ViewSet, execution: Execution, process: int, edge: Pair
) -> ViewSet:
    """A strongly causal replay certifying the record without `edge` whose
    views differ from the originals: the edge's endpoints swapped in its
    owner's view."""
    program = execution.program
    record = minimal_view_record(views, execution)
    if edge not in record.edges(process):
        raise PreconditionViolated(
            f"edge {edge} is not a required record edge of process {process}"
        )
    a, b = edge
    seq = list(views[process].sequence)
    idx = seq.index(a)
    if seq[idx + 1] != b:
        raise InternalInvariant(f"record edge {edge} is not consecutive in the view")
    seq[idx], seq[idx + 1] = b, a
    witness = views.replace(View(process, tuple(seq)))
    derived = derive_writes_to(witness, program)
    bad = check_strong_causal(witness, derived)
    if bad is not None:
        raise InternalInvariant(f"swapped views are not strongly causal: {bad}")
    if not certifies(witness, program, record.drop(process, edge), STRONG_CAUSAL):
        raise InternalInvariant("swapped views do not certify the reduced record")
    return witness


def necessity_witness_race_record(
    views: ViewSet, execution: Execution, process: int, edge: Pair
) -> ViewSet:
    """A strongly causal replay certifying the race record without `edge`
    in which `process` resolves that race the other way."""
    program = execution.program
    bad = check_strong_causal(views, execution)
    if bad is not None:
        raise NotStronglyCausal(str(bad))
    analysis = RaceAnalysis(views, program)
    record = analysis.record()
    if edge not in record.edges(process):
        raise PreconditionViolated(
            f"edge {edge} is not a required record edge of process {process}"
        )
    o1, o2 = edge
    cascade = analysis.flip_cascade(process, o1, o2).union
    partials: dict[int, Relation] = {}
    for j in sorted(program.processes):
        universe = program.universe_of(j)
        if j == process:
            # the cascade may echo the dropped edge itself when its target
            # is an own write; re-adding it would cancel the flip
            pairs = (
                (analysis.obligation(j).pairs - {edge})
                | {(o2, o1)}
                | (cascade - {edge})
            )
        else:
            pairs = analysis.obligation(j).pairs | cascade
        partials[j] = transitive_closure(Relation(universe, frozenset(pairs)))
    witness = extend_to_views(partials, program)
    flipped = data_race_order(witness[process], program).pairs
    if flipped == analysis.dro(process).pairs:
        raise InternalInvariant("witness reproduces the original data-race order")
    if not certifies(witness, program, record.drop(process, edge), STRONG_CAUSAL):
        raise InternalInvariant("witness does not certify the reduced record")
    return witness
