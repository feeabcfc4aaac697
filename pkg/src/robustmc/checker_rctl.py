"""rCTL model checking by satisfaction sets.

For every state subformula (smallest first) and every value b, from 1111 down
to 0001, the set Sat(Psi, b) of states where Psi has value at least b is
computed.  Temporal rows are read off ``TEMPORAL_ROWS``, a transcription of
the characterization table: each (operator, value) entry names a fixed-point
schema and its two parameter sets, which ``_temporal_row`` interprets with
the primitives from :mod:`robustmc.fixpoint`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import fixpoint as fp
from .formula import (
    Always, And, Atom, Const, Eventually, Exists, Forall, FragmentTag,
    Formula, Implies, Next, Not, Or, Until, WeakUntil, check_fragment,
    subformulas, to_text,
)
from .kripke import KripkeStructure, StateSet, states_of, validate
from .truth import NONZERO, TRUE, V0001, V0011, V0111, VALUES, TruthValue

__all__ = [
    "SatTable", "Verdict", "InvalidModelError", "TableInvariantError",
    "Schema", "TEMPORAL_ROWS", "compute_sat", "check", "state_value",
]


class InvalidModelError(ValueError):
    pass


class TableInvariantError(RuntimeError):
    pass


class SatTable:
    """Sat(Psi, b) for every subformula Psi and every value b.

    ``rows[i][r]`` is the state set of ``formulas[i]`` at the value of rank
    ``r``; rank 0 is always the full state set.
    """

    def __init__(self, model: KripkeStructure):
        self.model = model
        self.formulas: list = []
        self.rows: list = []
        self._index: dict = {}

    def add(self, f: Formula, row) -> None:
        row = tuple(row)
        _check_antitone(self.model, f, row)
        self._index[f] = len(self.formulas)
        self.formulas.append(f)
        self.rows.append(row)

    def __contains__(self, f):
        return f in self._index

    def row(self, f: Formula) -> tuple:
        try:
            return self.rows[self._index[f]]
        except KeyError:
            raise KeyError(f"subformula not in table: {to_text(f)}") from None

    def sat(self, f: Formula, b: TruthValue) -> StateSet:
        return self.row(f)[b.rank]

    def value(self, f: Formula, state) -> TruthValue:
        s = self.model.index(state)
        row = self.row(f)
        for rank in range(4, 0, -1):
            if row[rank] >> s & 1:
                return VALUES[rank]
        return VALUES[0]

    def values(self, f: Formula) -> list:
        return [self.value(f, s) for s in range(len(self.model))]

    def __eq__(self, other):
        if not isinstance(other, SatTable):
            return NotImplemented
        return (self.model.names == other.model.names
                and dict(zip(self.formulas, self.rows)) == dict(zip(other.formulas, other.rows)))


def _check_antitone(m, f, row):
    if row[0] != m.all:
        raise TableInvariantError(f"Sat({to_text(f)}, 0000) is not the full state set")
    for r in range(1, 5):
        if row[r] & ~row[r - 1]:
            raise TableInvariantError(
                f"Sat({to_text(f)}, {VALUES[r]}) is not contained in Sat(., {VALUES[r - 1]})")


@dataclass(frozen=True)
class Schema:
    """One cell of the temporal table.

    ``kind`` is ``"pre"`` (one-step successor test on ``s1``), ``"lfp"``,
    ``"gfp"`` (F-schema) or ``"lfp_gfp"``, ``"gfp_lfp"`` (G-schema, outer
    variable first).  ``s1``/``s2`` name parameter sets: ``"arg"``,
    ``"left"``, ``"right"``, ``"left|right"`` (operand rows at the same
    value), ``"all"`` or ``"empty"``.
    """
    kind: str
    s1: str
    s2: str = "empty"


def _same(schema):
    return {b: schema for b in NONZERO}


TEMPORAL_ROWS = {
    Next: _same(Schema("pre", "arg")),
    Eventually: _same(Schema("lfp", "arg", "all")),
    Always: {
        TRUE: Schema("gfp", "empty", "arg"),
        V0111: Schema("lfp_gfp", "empty", "arg"),
        V0011: Schema("gfp_lfp", "empty", "arg"),
        V0001: Schema("lfp", "arg", "all"),
    },
    Until: _same(Schema("lfp", "right", "left")),
    WeakUntil: {
        TRUE: Schema("gfp", "right", "left"),
        V0111: Schema("lfp_gfp", "right", "left"),
        V0011: Schema("gfp_lfp", "right", "left"),
        V0001: Schema("lfp", "left|right", "all"),
    },
}


def _param(name, path, b, table, m):
    if name == "empty":
        return 0
    if name == "all":
        return m.all
    if name == "arg":
        return table.sat(path.arg, b)
    if name == "left":
        return table.sat(path.left, b)
    if name == "right":
        return table.sat(path.right, b)
    if name == "left|right":
        return table.sat(path.left, b) | table.sat(path.right, b)
    raise ValueError(f"unknown schema parameter {name!r}")


def _temporal_row(m, quant, path, b, table, debug):
    schema = TEMPORAL_ROWS[type(path)][b]
    s1 = _param(schema.s1, path, b, table, m)
    s2 = _param(schema.s2, path, b, table, m)
    exists = quant is Exists
    if schema.kind == "pre":
        return m.pre_exists(s1) if exists else m.pre_forall(s1)
    f = fp.f_exists if exists else fp.f_forall
    g = fp.g_exists if exists else fp.g_forall
    if schema.kind == "lfp":
        return fp.lfp(lambda t: f(m, t, s1, s2), debug=debug)
    if schema.kind == "gfp":
        return fp.gfp(lambda t: f(m, t, s1, s2), m.all, debug=debug)
    if schema.kind == "lfp_gfp":
        return fp.lfp_gfp(lambda t1, t2: g(m, t1, t2, s1, s2), m.all, debug=debug)
    if schema.kind == "gfp_lfp":
        return fp.gfp_lfp(lambda t1, t2: g(m, t1, t2, s1, s2), m.all, debug=debug)
    raise ValueError(f"unknown schema kind {schema.kind!r}")


def boolean_row(m: KripkeStructure, f: Formula, table: SatTable):
    """Row of an atom, constant or boolean connective, or None for other nodes."""
    full = m.all
    if isinstance(f, Atom):
        s = m.label_mask(f.name)
        return (full, s, s, s, s)
    if isinstance(f, Const):
        s = full if f.value else 0
        return (full, s, s, s, s)
    if isinstance(f, Or):
        a, b = table.row(f.left), table.row(f.right)
        return tuple(x | y for x, y in zip(a, b))
    if isinstance(f, And):
        a, b = table.row(f.left), table.row(f.right)
        return tuple(x & y for x, y in zip(a, b))
    if isinstance(f, Not):
        s = full & ~table.sat(f.arg, TRUE)
        return (full, s, s, s, s)
    if isinstance(f, Implies):
        a, c = table.row(f.left), table.row(f.right)
        top = full
        for r in range(1, 5):
            top &= c[r] | (full & ~a[r])
        return (full,) + tuple(top | c[r] for r in range(1, 4)) + (top,)
    return None


def _require_valid(m):
    errors = [v for v in validate(m) if v.severity == "error"]
    if errors:
        raise InvalidModelError("; ".join(v.message for v in errors))


def compute_sat(m: KripkeStructure, phi: Formula, *, debug: Optional[bool] = None) -> SatTable:
    """Fill the satisfaction table of ``phi`` (an rCTL state formula) over ``m``."""
    check_fragment(phi, FragmentTag.RCTL)
    _require_valid(m)
    table = SatTable(m)
    for psi in subformulas(phi):
        row = boolean_row(m, psi, table)
        if row is None:
            quant, path = type(psi), psi.arg
            row = [m.all, 0, 0, 0, 0]
            for b in NONZERO:
                row[b.rank] = _temporal_row(m, quant, path, b, table, debug)
        table.add(psi, row)
    return table


def state_value(table: SatTable, psi: Formula, state) -> TruthValue:
    """V(s, psi): the largest b with s in Sat(psi, b)."""
    return table.value(psi, state)


@dataclass(frozen=True)
class Verdict:
    holds: bool
    threshold: TruthValue
    failing: tuple          # names of initial states outside Sat(phi, b0)
    table: SatTable

    def __bool__(self):
        return self.holds


def verdict_from_table(table: SatTable, phi: Formula, b0: TruthValue) -> Verdict:
    m = table.model
    outside = m.initial & ~table.sat(phi, b0)
    return Verdict(not outside, b0, tuple(m.names[s] for s in states_of(outside)), table)


def check(m: KripkeStructure, phi: Formula, b0: TruthValue, *,
          debug: Optional[bool] = None) -> Verdict:
    """Does V(s, phi) >= b0 hold at every initial state?"""
    return verdict_from_table(compute_sat(m, phi, debug=debug), phi, b0)
