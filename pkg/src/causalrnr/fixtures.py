"""Bundled fixture corpus: small executions with pinned expected outcomes.

Each fixture ships as a text file in the package; `load` parses it so the
corpus also exercises the file format.  Counterexample fixtures come in
pairs: the original execution with its views, and a replay view set that
certifies the naive record while differing from the original.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from causalrnr.textio import ParsedExecution, parse_execution


@dataclass(frozen=True)
class Fixture:
    name: str
    description: str
    replay: str | None = None  # companion replay fixture, if any


FIXTURES = (
    Fixture(
        "separation",
        "causally consistent two-process execution with no strongly causal explanation",
    ),
    Fixture(
        "indirect-order",
        "three processes; a third-party agreement makes one record edge redundant",
    ),
    Fixture(
        "write-race",
        "two writers on one variable; smallest own-write race record",
    ),
    Fixture(
        "race-agreement",
        "three processes racing on one variable; redundant race edge",
    ),
    Fixture(
        "naive-view-record",
        "four processes; the naive causal view record admits a differing replay",
        replay="naive-view-record-replay",
    ),
    Fixture(
        "naive-view-record-replay",
        "replay certifying the naive view record with empty write-read-write order",
    ),
    Fixture(
        "naive-race-record",
        "four processes; the naive causal race record admits a race-differing replay",
        replay="naive-race-record-replay",
    ),
    Fixture(
        "naive-race-record-replay",
        "replay certifying the naive race record with all reads initial",
    ),
)


def names() -> tuple[str, ...]:
    return tuple(f.name for f in FIXTURES)


def describe(name: str) -> Fixture:
    for f in FIXTURES:
        if f.name == name:
            return f
    raise KeyError(f"unknown fixture {name!r}")


def text(name: str) -> str:
    describe(name)
    return (
        resources.files("causalrnr")
        .joinpath("fixtures", f"{name}.txt")
        .read_text(encoding="utf-8")
    )


def load(name: str) -> ParsedExecution:
    return parse_execution(text(name))
