"""Command-line front end.

    robustmc check   -m MODEL -f FORMULA -b VALUE [--engine E] [--json]
    robustmc values  -m MODEL -f FORMULA [--engine E] [--json]
    robustmc gen     N DENSITY NPROPS [--seed SEED]
    robustmc explain -m MODEL -f FORMULA -s STATE [--max-states K] [--json]

FORMULA is formula text or the path of a file holding it.  Exit status of
``check``: 0 if the property holds at every initial state, 1 if it fails,
2 on usage, file, model or formula errors.  ``explain`` exits 1 when the
engine and the brute-force oracle disagree.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from .checker_rctl import InvalidModelError, SatTable, compute_sat, verdict_from_table
from .checker_rctlstar import compute_sat_star
from .formula import (
    Exists, Forall, FragmentError, FragmentTag, ParseError, check_fragment,
    parse, to_text,
)
from .kripke import KripkeStructure, ModelFormatError, dump_model, load_model, random_structure
from .oracle import BruteForce
from .truth import TruthValue

ENGINES = ("auto", "rctl", "rctlstar")


class UsageError(Exception):
    pass


def _read_formula(arg: str) -> str:
    p = Path(arg)
    try:
        if p.is_file():
            return p.read_text(encoding="utf-8")
    except OSError:
        pass
    return arg


def _load(path: str) -> KripkeStructure:
    try:
        m = load_model(path)
    except OSError as exc:
        raise UsageError(f"cannot read model {path}: {exc.strerror or exc}") from None
    if not m.initial:
        print("warning: model has no initial state; checks hold vacuously", file=sys.stderr)
    return m


def _is_rctl(f) -> bool:
    try:
        check_fragment(f, FragmentTag.RCTL)
    except FragmentError:
        return False
    return True


def _engine_for(f, engine: str) -> str:
    if engine == "auto":
        return "rctl" if _is_rctl(f) else "rctlstar"
    return engine


def _table(m, f, engine: str) -> SatTable:
    return compute_sat(m, f) if engine == "rctl" else compute_sat_star(m, f)


def _threshold(text: str) -> TruthValue:
    try:
        return TruthValue.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _ms(seconds: float) -> str:
    return f"{seconds * 1000:.1f} ms"


def cmd_check(args) -> int:
    m = _load(args.model)
    f = parse(_read_formula(args.formula))
    b0 = _threshold(args.value)
    engine = _engine_for(f, args.engine)
    t0 = time.perf_counter()
    table = _table(m, f, engine)
    verdict = verdict_from_table(table, f, b0)
    elapsed = time.perf_counter() - t0
    inits = [s for s in range(len(m)) if m.initial >> s & 1]
    if args.json:
        for s in inits:
            print(json.dumps({"state": m.names[s], "value": str(table.value(f, s))}))
        print(json.dumps({"verdict": "holds" if verdict.holds else "fails",
                          "threshold": str(b0), "engine": engine,
                          "failing": list(verdict.failing)}))
    else:
        print(f"formula:   {to_text(f)}")
        print(f"engine:    {engine}")
        print(f"threshold: {b0}")
        for s in inits:
            print(f"  {m.names[s]}: {table.value(f, s)}")
        if verdict.holds:
            print("verdict:   holds")
        else:
            print(f"verdict:   fails at {', '.join(verdict.failing)}")
        print(f"time:      {_ms(elapsed)}")
    return 0 if verdict.holds else 1


def cmd_values(args) -> int:
    m = _load(args.model)
    f = parse(_read_formula(args.formula))
    engine = _engine_for(f, args.engine)
    table = _table(m, f, engine)
    if args.json:
        for psi in table.formulas:
            for s in range(len(m)):
                print(json.dumps({"formula": to_text(psi), "state": m.names[s],
                                  "value": str(table.value(psi, s))}))
        return 0
    texts = [to_text(psi) for psi in table.formulas]
    width = max(len(t) for t in texts)
    cols = [max(4, len(n)) for n in m.names]
    print(" " * width + "  " + "  ".join(n.rjust(c) for n, c in zip(m.names, cols)))
    for psi, text in zip(table.formulas, texts):
        cells = [str(v).rjust(c) for v, c in zip(table.values(psi), cols)]
        print(text.ljust(width) + "  " + "  ".join(cells))
    return 0


def cmd_gen(args) -> int:
    seed = args.seed
    env = os.environ.get("ROBUSTMC_SEED")
    if env is not None:
        try:
            seed = int(env)
        except ValueError:
            raise UsageError(f"ROBUSTMC_SEED is not an integer: {env!r}") from None
    try:
        m = random_structure(args.n_states, args.density, args.n_props, seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    sys.stdout.write(dump_model(m))
    return 0


def cmd_explain(args) -> int:
    m = _load(args.model)
    if len(m) > args.max_states:
        raise UsageError(f"model has {len(m)} states; the oracle is limited to "
                         f"{args.max_states} (raise it with --max-states)")
    f = parse(_read_formula(args.formula))
    try:
        s = m.index(args.state)
    except (KeyError, IndexError, ValueError):
        raise UsageError(f"unknown state {args.state}") from None
    engine = _engine_for(f, args.engine)
    table = _table(m, f, engine)
    engine_value = table.value(f, s)
    # general path formulas may need cycles that revisit states
    oracle = BruteForce(m, simple_cycles=_is_rctl(f))
    oracle_value = oracle.value(s, f)
    quantified = isinstance(f, (Exists, Forall))
    paths = oracle.path_values(s, f) if quantified else []
    if quantified:
        best, witness = oracle.extremal(s, f)
    if args.json:
        for lasso, v in paths:
            print(json.dumps({"lasso": lasso.render(m), "value": str(v)}))
        out = {"state": m.names[s], "engine": engine, "engine_value": str(engine_value),
               "oracle_value": str(oracle_value)}
        if quantified:
            out["extremal"] = witness.render(m)
        print(json.dumps(out))
    else:
        print(f"formula: {to_text(f)}")
        print(f"state:   {m.names[s]}")
        print(f"engine ({engine}): {engine_value}")
        print(f"oracle:  {oracle_value}")
        if quantified:
            print(f"paths ({len(paths)} lassos):")
            for lasso, v in paths:
                print(f"  {v}  {lasso.render(m)}")
            kind = "max" if isinstance(f, Exists) else "min"
            print(f"extremal ({kind}): {best}  {witness.render(m)}")
        if engine_value != oracle_value:
            print("DISAGREEMENT between engine and oracle")
    return 0 if engine_value == oracle_value else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="robustmc",
                                 description="Robust CTL / CTL* model checker.")
    sub = ap.add_subparsers(dest="command", required=True)

    def model_formula(p):
        p.add_argument("-m", "--model", required=True, help="model file")
        p.add_argument("-f", "--formula", required=True, help="formula text or file")
        p.add_argument("--engine", choices=ENGINES, default="auto")
        p.add_argument("--json", action="store_true", help="JSON-lines output")

    p = sub.add_parser("check", help="decide V(s, phi) >= b at every initial state")
    model_formula(p)
    p.add_argument("-b", "--value", required=True, help="threshold, e.g. 0111")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("values", help="print V(s, psi) for every subformula and state")
    model_formula(p)
    p.set_defaults(func=cmd_values)

    p = sub.add_parser("gen", help="print a random model")
    p.add_argument("n_states", type=int)
    p.add_argument("density", type=float)
    p.add_argument("n_props", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("explain", help="compare the engine with the brute-force oracle")
    model_formula(p)
    p.add_argument("-s", "--state", required=True)
    p.add_argument("--max-states", type=int, default=6)
    p.set_defaults(func=cmd_explain)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
    except ModelFormatError as exc:
        print(f"model format error: {exc}", file=sys.stderr)
    except InvalidModelError as exc:
        print(f"invalid model: {exc}", file=sys.stderr)
    except ParseError as exc:
        print(f"formula syntax error: {exc}", file=sys.stderr)
    except FragmentError as exc:
        print(f"fragment error: {exc}", file=sys.stderr)
    return 2


if __name__ == "__main__":
    raise SystemExit(main())
