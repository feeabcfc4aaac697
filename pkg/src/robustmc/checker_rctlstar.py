"""rCTL* model checking through the four bit translations.

A robust formula phi has a 5-valued meaning, but each of its four bits is a
classical CTL* property: the k-th bit of V(pi, phi) equals classical truth of
``translate_tk(phi, k)`` on pi.  Because values are monotone bit vectors,
V(pi, phi) >= b iff bit k(b) is set, where k(b) is the index of the first
1-bit of b.  A quantified row Sat(Q phi, b) is therefore decided by an
ordinary LTL-to-Büchi product on a relabelled model.
"""
from __future__ import annotations

from typing import Callable, Optional

from .buchi import accepting_from, ltl_to_buchi
from .checker_rctl import (
    SatTable, Verdict, _require_valid, boolean_row, verdict_from_table,
)
from .formula import (
    Always, And, Atom, Const, Eventually, Exists, Forall, FragmentTag,
    Formula, Implies, Next, Not, Or, Until, WeakUntil, check_fragment,
    maximal_state_subformulas, subformulas, to_text,
)
from .kripke import KripkeStructure, StateSet
from .truth import FALSE, VALUES, TruthValue, bit_threshold

__all__ = [
    "translate_tk", "bit_index", "sat_quantified", "compute_sat_star", "check_star",
]


def _keep_atom(name: str, k: int) -> Formula:
    return Atom(name)


def translate_tk(f: Formula, k: int,
                 atom: Callable[[str, int], Formula] = _keep_atom) -> Formula:
    """The classical formula capturing bit ``k`` (1..4) of a robust formula.

    ``atom(name, k)`` gives the image of an atomic proposition at bit ``k``;
    the default keeps it unchanged, which is right for two-valued atoms.
    """
    if not 1 <= k <= 4:
        raise ValueError(f"bit index must be 1..4, got {k}")
    t = lambda g, j=k: translate_tk(g, j, atom)  # noqa: E731
    if isinstance(f, Atom):
        return atom(f.name, k)
    if isinstance(f, Const):
        return f
    if isinstance(f, Not):
        return Not(t(f.arg, 1))
    if isinstance(f, Or):
        return Or(t(f.left), t(f.right))
    if isinstance(f, And):
        return And(t(f.left), t(f.right))
    if isinstance(f, Implies):
        here = Implies(t(f.left), t(f.right))
        return here if k == 4 else And(here, t(f, k + 1))
    if isinstance(f, Exists):
        return Exists(t(f.arg))
    if isinstance(f, Forall):
        return Forall(t(f.arg))
    if isinstance(f, Next):
        return Next(t(f.arg))
    if isinstance(f, Until):
        return Until(t(f.left), t(f.right))
    if isinstance(f, Eventually):
        return Eventually(t(f.arg))
    if isinstance(f, Always):
        # always-robustly phi behaves as phi W false
        a = t(f.arg)
        return (Always(a), Eventually(Always(a)), Always(Eventually(a)), Eventually(a))[k - 1]
    if isinstance(f, WeakUntil):
        a, b = t(f.left), t(f.right)
        if k == 1:
            return WeakUntil(a, b)
        if k == 2:
            return Or(Eventually(Always(a)), Eventually(b))
        if k == 3:
            return Or(Always(Eventually(a)), Eventually(b))
        return Or(Eventually(a), Eventually(b))
    raise TypeError(f"not a formula node: {f!r}")


def bit_index(b: TruthValue) -> int:
    """1111 -> 1, 0111 -> 2, 0011 -> 3, 0001 -> 4."""
    if b == FALSE:
        raise ValueError("0000 has no set bit")
    return 5 - b.rank


def _bit_atom(name: str, k: int) -> str:
    return f"{name}.{k}"


def sat_quantified(m: KripkeStructure, qphi: Formula, b: TruthValue,
                   inner: SatTable, *, cache: Optional[dict] = None) -> StateSet:
    """Sat(E phi, b) or Sat(A phi, b), given the rows of phi's state subformulas.

    Every maximal state subformula Psi of phi becomes a fresh atom, split into
    four bit atoms ``a_Psi.j`` that hold exactly on Sat(Psi, bit_threshold(j)).
    """
    if not isinstance(qphi, (Exists, Forall)):
        raise TypeError(f"expected a quantified formula, got {to_text(qphi)}")
    if b == FALSE:
        return m.all
    pairs, rewritten = maximal_state_subformulas(qphi.arg)
    extra = {}
    for psi, name in pairs:
        for j in range(1, 5):
            extra[_bit_atom(name, j)] = inner.sat(psi, bit_threshold(j))
    relabelled = m.relabel(extra)
    k = bit_index(b)
    ltl = translate_tk(rewritten, k, lambda name, j: Atom(_bit_atom(name, j)))
    exists = isinstance(qphi, Exists)
    target = ltl if exists else Not(ltl)
    aut = None if cache is None else cache.get(target)
    if aut is None:
        aut = ltl_to_buchi(target)
        if cache is not None:
            cache[target] = aut
    witnessed = accepting_from(relabelled, aut)
    return witnessed if exists else m.all & ~witnessed


def compute_sat_star(m: KripkeStructure, phi: Formula) -> SatTable:
    """Satisfaction table of an rCTL* state formula."""
    check_fragment(phi, FragmentTag.RCTLSTAR)
    _require_valid(m)
    table = SatTable(m)
    cache: dict = {}
    for psi in subformulas(phi):
        row = boolean_row(m, psi, table)
        if row is None:
            row = [m.all] + [sat_quantified(m, psi, VALUES[r], table, cache=cache)
                             for r in range(1, 5)]
        table.add(psi, row)
    return table


def check_star(m: KripkeStructure, phi: Formula, b0: TruthValue) -> Verdict:
    return verdict_from_table(compute_sat_star(m, phi), phi, b0)
