"""Session-wide caches so each expensive oracle object is built once."""

from __future__ import annotations

from functools import lru_cache

from relmckay.chartab import dixon_schneider
from relmckay.matgrp import build_group
from relmckay.mckay import RelativeMcKayCheck
from relmckay.rootdata import build_root_datum

BUILT_TABLES: dict[tuple[str, int], object] = {}


@lru_cache(maxsize=None)
def datum(label: str):
    return build_root_datum(label)


@lru_cache(maxsize=None)
def group(label: str, q: int):
    return build_group(datum(label), q)


@lru_cache(maxsize=None)
def table(label: str, q: int):
    t = dixon_schneider(group(label, q))
    BUILT_TABLES[(label, q)] = t
    return t


@lru_cache(maxsize=None)
def check(label: str, p: int, n: int = 1) -> RelativeMcKayCheck:
    chk = RelativeMcKayCheck(datum(label), p, n)
    BUILT_TABLES[(label, p**n)] = chk.table
    return chk
