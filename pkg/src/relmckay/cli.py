"""Command-line entry point.

Exit codes: 0 pass, 1 verdict failure, 2 unsupported or excluded input,
3 resource bound exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from typing import Sequence

from . import borel, mckay
from .borel import BoundExceededError, ExcludedGroupError, parametrization
from .chartab import InvalidTableError, dixon_schneider
from .finite_field import is_prime
from .matgrp import GroupOrderBoundError, UnsupportedGroupError, build_group
from .rootdata import UnsupportedTypeError, build_root_datum
from .twist import SplitFrobenius

SCHEMA_VERSION = 1
EXIT_PASS, EXIT_FAIL, EXIT_UNSUPPORTED, EXIT_BOUND = 0, 1, 2, 3

log = logging.getLogger("relmckay")


@dataclass(frozen=True)
class RunConfig:
    command: str
    type_label: str
    p: int
    n: int
    nu: str | None
    brute_force: bool
    fmt: str
    out: str | None
    max_order: int | None
    brute_force_bound: int = 10**6

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.max_order is not None and self.max_order < 1:
            raise ValueError("--max-order must be positive")


def _select_nus(all_nus: list[tuple[int, ...]], choice: str | None) -> list[tuple[int, ...]]:
    if choice is None:
        return all_nus
    trivial = tuple(0 for _ in all_nus[0]) if all_nus else ()
    if choice == "trivial":
        return [trivial]
    if choice == "nontrivial":
        return [nu for nu in all_nus if nu != trivial]
    try:
        k = int(choice)
    except ValueError:
        raise ValueError(f"--nu must be trivial, nontrivial or an index, not {choice!r}") from None
    if not 0 <= k < len(all_nus):
        raise ValueError(f"--nu index {k} out of range 0..{len(all_nus) - 1}")
    return [all_nus[k]]


def _nu_key(nu: tuple[int, ...]) -> str:
    return ",".join(map(str, nu)) or "trivial"


def _tsv_from_pairs(rows: list[Sequence]) -> str:
    return "\n".join("\t".join(str(c) for c in r) for r in rows) + "\n"


# --- commands ------------------------------------------------------------------------


def cmd_count_borel(cfg: RunConfig) -> tuple[int, str]:
    d = build_root_datum(cfg.type_label)
    par = parametrization(d, cfg.p, cfg.n)
    total = par.total()
    nus = _select_nus(par.central_characters(), cfg.nu)
    per_nu = {_nu_key(nu): par.per_nu_count(nu) for nu in nus}
    doc = {
        "schema_version": SCHEMA_VERSION,
        "type": d.type_label,
        "p": cfg.p,
        "n": cfg.n,
        "q": par.q,
        "strata": par.contributions(),
        "total": total,
        "per_nu": per_nu,
    }
    code = EXIT_PASS
    if cfg.brute_force:
        oracle = borel.brute_force_count(d, SplitFrobenius(cfg.p, cfg.n), cfg.brute_force_bound)
        doc["brute_force"] = oracle
        doc["agree"] = oracle == total
        if oracle != total:
            code = EXIT_FAIL
    if cfg.fmt == "json":
        return code, json.dumps(doc, sort_keys=True, indent=1) + "\n"
    rows: list[Sequence] = [("# schema_version", SCHEMA_VERSION), ("J", "H_J_fixed", "T_J_fixed", "i", "contribution")]
    for s in doc["strata"]:
        rows.append((",".join(map(str, s["J"])) or "-", s["H_J_fixed"], s["T_J_fixed"], s["i"], s["contribution"]))
    rows.append(("total", total))
    for k, v in per_nu.items():
        rows.append(("per_nu", k, v))
    if cfg.brute_force:
        rows.append(("brute_force", doc["brute_force"]))
    return code, _tsv_from_pairs(rows)


def cmd_check(cfg: RunConfig) -> tuple[int, str]:
    d = build_root_datum(cfg.type_label)
    rep = mckay.check_relative_mckay(d, cfg.p, cfg.n, max_order=cfg.max_order)
    code = EXIT_PASS if rep.verdict == "pass" else EXIT_FAIL
    for f in rep.failures:
        log.error("%s", f)
    if cfg.fmt == "json":
        return code, rep.to_json() + "\n"
    rows: list[Sequence] = [("# schema_version", SCHEMA_VERSION), ("nu", "G", "B", "d", "N1", "Nd", "N1p", "Ndp")]
    for k in rep.per_nu:
        c = rep.census[k]
        rows.append((k, rep.per_nu[k]["G"], rep.per_nu[k]["B"], c["d"], c["N1"], c["Nd"], c["N1p"], c["Ndp"]))
    for k, b in rep.bijection.items():
        rows.append(("bijection", k, "certified" if b.get("certified") else "uncertified"))
    rows.append(("verdict", rep.verdict))
    return code, _tsv_from_pairs(rows)


def cmd_table(cfg: RunConfig) -> tuple[int, str]:
    d = build_root_datum(cfg.type_label)
    g = build_group(d, p=cfg.p, n=cfg.n, max_order=cfg.max_order)
    t = dixon_schneider(g)
    try:
        t.check_orthogonality()
    except InvalidTableError as exc:
        log.error("orthogonality self-check failed: %s", exc)
        code = EXIT_FAIL
    else:
        log.info("orthogonality self-check passed for %s (%d rows)", t.label, t.rows)
        code = EXIT_PASS
    return code, (t.to_json() + "\n") if cfg.fmt == "json" else t.to_tsv()


def cmd_bijection(cfg: RunConfig) -> tuple[int, str]:
    d = build_root_datum(cfg.type_label)
    chk = mckay.RelativeMcKayCheck(d, cfg.p, cfg.n, max_order=cfg.max_order)
    out, code = {}, EXIT_PASS
    for nu in _select_nus(chk.nus, cfg.nu):
        bij = chk.bijection(nu)
        out[_nu_key(nu)] = {
            **bij.as_dict(chk.par),
            "delta_certificate": [list(x) for x in bij.delta_certificate],
            "gamma_certificate": [list(x) for x in bij.gamma_certificate],
        }
        if not bij.certified:
            code = EXIT_FAIL
    doc = {"schema_version": SCHEMA_VERSION, "type": d.type_label, "p": cfg.p, "n": cfg.n, "bijections": out}
    if cfg.fmt == "json":
        return code, json.dumps(doc, sort_keys=True, indent=1) + "\n"
    rows: list[Sequence] = [("# schema_version", SCHEMA_VERSION), ("nu", "row", "degree", "J", "j", "z", "psi")]
    for k, b in out.items():
        for pr in b["pairs"]:
            rows.append((k, pr["row"], pr["degree"], ",".join(map(str, pr["J"])) or "-", pr["j"],
                         ",".join(map(str, pr["z"])) or "-", ",".join(map(str, pr["psi"])) or "-"))
        rows.append(("certified", k, b["certified"]))
    return code, _tsv_from_pairs(rows)


COMMANDS = {
    "count-borel": cmd_count_borel,
    "check": cmd_check,
    "table": cmd_table,
    "bijection": cmd_bijection,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relmckay",
        description="Borel-side p'-character counts checked against exact character tables.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "count-borel": "closed-form count of Irr_p'(B^F), optionally against the brute-force oracle",
        "check": "full relative McKay check against the character-table oracle",
        "table": "export an exact character table",
        "bijection": "build and certify the equivariant bijections",
    }
    for name, text in helps.items():
        sp = sub.add_parser(name, help=text)
        sp.add_argument("--type", required=True, dest="type_label", help="root system type, e.g. A1, C2")
        sp.add_argument("-p", type=int, required=True, help="defining characteristic")
        sp.add_argument("-n", type=int, default=1, help="q = p^n (default 1)")
        sp.add_argument("--nu", default=None, help="trivial, nontrivial or an index into Irr(Z^F)")
        sp.add_argument("--format", dest="fmt", choices=("json", "tsv"), default="json")
        sp.add_argument("--out", default=None, help="write output here instead of stdout")
        sp.add_argument("--max-order", type=int, default=None, help="group order ceiling for enumeration")
        if name == "count-borel":
            sp.add_argument("--brute-force", action="store_true", help="also run the orbit oracle")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = RunConfig(
            command=args.command,
            type_label=args.type_label,
            p=args.p,
            n=args.n,
            nu=args.nu,
            brute_force=getattr(args, "brute_force", False),
            fmt=args.fmt,
            out=args.out,
            max_order=args.max_order,
        )
        code, text = COMMANDS[cfg.command](cfg)
    except (UnsupportedTypeError, UnsupportedGroupError, ExcludedGroupError, mckay.HypothesisError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_UNSUPPORTED
    except (GroupOrderBoundError, BoundExceededError) as exc:
        log.error("%s", exc)
        return EXIT_BOUND
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
