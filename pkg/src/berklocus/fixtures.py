"""The shipped fixture corpus."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .parse import MapSpec


@dataclass(frozen=True)
class Fixture:
    name: str
    expression: str
    prime: int
    negative: bool
    expected: dict

    def spec(self, **kw) -> MapSpec:
        return MapSpec.parse(self.expression, self.prime, **kw)

    def map(self, **kw):
        return self.spec(**kw).to_map()


def load_fixtures() -> list:
    raw = json.loads(resources.files("berklocus").joinpath("fixtures.json").read_text())
    return [Fixture(**f) for f in raw["fixtures"]]


def positive_fixtures() -> list:
    return [f for f in load_fixtures() if not f.negative]
