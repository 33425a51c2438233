"""Pure-Python reachability kernels over bitmask adjacency rows.

A relation on n elements is encoded as a list of n integers; bit j of
row i is set iff the edge (i, j) is present.  These three routines are
the hot inner loops of every closure, cycle and reduction query in the
package; `causalrnr._fastkernels` provides a compiled twin.
"""

from __future__ import annotations

BACKEND = "python"


def closure_rows(rows: list[int]) -> list[int]:
    """Reachability by at least one edge (Warshall over bitmasks)."""
    out = list(rows)
    n = len(out)
    for k in range(n):
        row_k = out[k]
        if not row_k:
            continue
        bit = 1 << k
        for i in range(n):
            row_i = out[i]
            if row_i & bit:
                merged = row_i | row_k
                if merged != row_i:
                    out[i] = merged
    return out


def has_cycle_rows(rows: list[int]) -> bool:
    closed = closure_rows(rows)
    return any((closed[i] >> i) & 1 for i in range(len(closed)))


def reduction_rows(closed: list[int]) -> list[int]:
    """Transitive reduction of a transitively closed, acyclic relation.

    An edge (i, j) survives iff no successor of i also reaches j.
    """
    n = len(closed)
    out = [0] * n
    for i in range(n):
        succ = closed[i]
        cover = 0
        rest = succ
        while rest:
            k = (rest & -rest).bit_length() - 1
            cover |= closed[k]
            rest &= rest - 1
        out[i] = succ & ~cover
    return out
