"""Backtracking enumeration of linear extensions.

Single-worker depth-first search; candidates are tried in lexicographic
id order, so every enumeration in the package is deterministic and emits
results in a reproducible order.
"""

from __future__ import annotations

from typing import Callable, Iterator, Optional

from causalrnr.errors import BudgetExceeded

PlaceHook = Callable[[str, list[str]], bool]


class NodeBudget:
    """Counts DFS placements across a whole search."""

    def __init__(self, limit: int | None):
        self.limit = limit
        self.explored = 0

    def spend(self) -> None:
        self.explored += 1
        if self.limit is not None and self.explored > self.limit:
            raise BudgetExceeded(
                f"search exceeded {self.limit} placements", explored=self.explored
            )


def iter_extensions(
    items: tuple[str, ...],
    preds: dict[str, frozenset[str]],
    place_hook: Optional[PlaceHook] = None,
    budget: Optional[NodeBudget] = None,
) -> Iterator[tuple[str, ...]]:
    """Yield all orderings of `items` extending the precedence map.

    `preds[o]` is the set of items that must be placed before `o`.
    `place_hook(o, placed)` may veto a placement; vetoed branches are
    pruned.  Items are tried in the order given.
    """
    n = len(items)
    placed: list[str] = []
    placed_set: set[str] = set()

    def descend() -> Iterator[tuple[str, ...]]:
        if len(placed) == n:
            yield tuple(placed)
            return
        for o in items:
            if o in placed_set or not preds[o] <= placed_set:
                continue
            if place_hook is not None and not place_hook(o, placed):
                continue
            if budget is not None:
                budget.spend()
            placed.append(o)
            placed_set.add(o)
            yield from descend()
            placed.pop()
            placed_set.remove(o)

    yield from descend()


def preds_from_pairs(items: tuple[str, ...], pairs) -> dict[str, frozenset[str]]:
    preds: dict[str, set[str]] = {o: set() for o in items}
    carrier = set(items)
    for a, b in pairs:
        if a in carrier and b in carrier:
            preds[b].add(a)
    return {o: frozenset(s) for o, s in preds.items()}
