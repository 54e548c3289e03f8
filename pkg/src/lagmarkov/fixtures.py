"""Published reference values shipped with the package (tables and matrices)."""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from .exactcore import AlphaFunction, parse_rational


@lru_cache(maxsize=None)
def load() -> dict:
    with resources.files(__package__).joinpath("data/fixtures.json").open() as fh:
        return json.load(fh)


def _product(spec: dict) -> AlphaFunction:
    a = AlphaFunction.variable()
    out = AlphaFunction.constant(parse_rational(spec["scale"]))
    for coeffs, exp in spec["factors"]:
        poly = AlphaFunction.constant(0)
        for i, c in enumerate(coeffs):
            poly = poly + a ** i * c
        out = out * poly ** exp if exp > 0 else out / poly ** (-exp)
    return out


def table_entry(side: str, k: int) -> tuple[AlphaFunction, Fraction]:
    """``(c, sigma)`` as published for the lower or upper side."""
    row = load()["tables"]["1" if side == "lower" else "2"][str(k)]
    return _product(row["c"]), parse_rational(row["sigma"])


def table3_row(k: int) -> dict:
    return dict(load()["tables"]["3"][str(k)])


def matrices(side: str, k: int) -> tuple[list[list[int]], list[list[int]]]:
    """Printed ``(M, Lambda)`` for one side and k."""
    m = load()["matrices"][side][str(k)]
    return ([[int(x) for x in r] for r in m["M"]],
            [[int(x) for x in r] for r in m["Lambda"]])
