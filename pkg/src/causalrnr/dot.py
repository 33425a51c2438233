"""Deterministic DOT export of executions and view sets.

One cluster per view; consecutive view edges are styled by the strongest
class they belong to (record, program order, strong causal order,
write-read-write order, plain view order), with dotted writes-to edges.
"""

from __future__ import annotations

from causalrnr.consistency import strong_causal_order
from causalrnr.model import Execution, Program, ViewSet, write_read_write_order
from causalrnr.records import Record

_STYLES = {
    "record": 'color="red" penwidth=2',
    "po": 'color="black"',
    "sco": 'color="blue"',
    "wo": 'color="darkgreen" style="dashed"',
    "view": 'color="gray50" style="dashed"',
}


def _label(program: Program, op_id: str) -> str:
    op = program.ops[op_id]
    return f"{op.kind}({op.variable})#{op.id}"


def render(
    program: Program,
    execution: Execution | None = None,
    views: ViewSet | None = None,
    record: Record | None = None,
) -> str:
    out = ["digraph execution {", "  rankdir=LR;", '  node [shape=box fontsize=10];']
    wo = write_read_write_order(execution).pairs if execution is not None else frozenset()
    sco = (
        strong_causal_order(views, program).pairs
        if views is not None
        else frozenset()
    )
    po = program.po_pairs

    def classify(process: int, a: str, b: str) -> str:
        if record is not None and (a, b) in record.edges(process):
            return "record"
        if (a, b) in po:
            return "po"
        if (a, b) in sco:
            return "sco"
        if (a, b) in wo:
            return "wo"
        return "view"

    if views is None:
        for pid in sorted(program.processes):
            out.append(f"  subgraph cluster_p{pid} {{")
            out.append(f'    label="process {pid}";')
            own = program.own(pid)
            for o in own:
                out.append(f'    p{pid}_{o} [label="{_label(program, o)}"];')
            for a, b in zip(own, own[1:]):
                out.append(f"    p{pid}_{a} -> p{pid}_{b} [{_STYLES['po']}];")
            out.append("  }")
        if execution is not None:
            for r, w in sorted(execution.writes_to.items()):
                pr, pw = program.proc_of(r), program.proc_of(w)
                out.append(f'  p{pw}_{w} -> p{pr}_{r} [style="dotted"];')
    else:
        for view in views.views:
            pid = view.process
            out.append(f"  subgraph cluster_v{pid} {{")
            out.append(f'    label="view of process {pid}";')
            for o in view.sequence:
                out.append(f'    v{pid}_{o} [label="{_label(program, o)}"];')
            for a, b in zip(view.sequence, view.sequence[1:]):
                kind = classify(pid, a, b)
                out.append(f"    v{pid}_{a} -> v{pid}_{b} [{_STYLES[kind]}];")
            if execution is not None:
                for r, w in sorted(execution.writes_to.items()):
                    if program.proc_of(r) == pid:
                        out.append(f'    v{pid}_{w} -> v{pid}_{r} [style="dotted"];')
            out.append("  }")
    out.append("}")
    return "\n".join(out) + "\n"
