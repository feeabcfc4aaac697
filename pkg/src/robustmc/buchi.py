"""Classical LTL to generalized Büchi automata, and product emptiness.

The translation is the on-the-fly tableau of Gerth, Peled, Vardi and Wolper:
the formula is put into negation normal form over U / R / X, and tableau
nodes are expanded until only next-step obligations remain.  Each node is an
automaton state that constrains the letter read at that position by the
literals it contains.  There is one acceptance set per until-subformula.

Emptiness of the product with a Kripke structure is decided with strongly
connected components: a product node has an accepting continuation iff it
reaches a nontrivial SCC meeting every acceptance set.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order, connected_components

from .formula import (
    Always, And, Atom, Const, Eventually, Exists, Forall, Formula, Implies,
    Next, Not, Or, Until, WeakUntil, to_text, FALSE_F, TRUE_F, cache_hash,
)
from .kripke import KripkeStructure, StateSet

__all__ = [
    "Release", "nnf", "simplify", "BuchiAutomaton", "ltl_to_buchi", "product_nonempty",
    "accepting_from", "accepts_lasso",
]


@cache_hash
@dataclass(frozen=True)
class Release(Formula):
    """left R right: right holds up to and including the first left (or forever)."""
    left: Formula
    right: Formula


def nnf(f: Formula, negate: bool = False) -> Formula:
    """Negation normal form over atoms, literals, and/or, X, U, R."""
    if isinstance(f, Atom):
        return Not(f) if negate else f
    if isinstance(f, Const):
        return Const(f.value != negate)
    if isinstance(f, Not):
        return nnf(f.arg, not negate)
    if isinstance(f, And):
        cls = Or if negate else And
        return cls(nnf(f.left, negate), nnf(f.right, negate))
    if isinstance(f, Or):
        cls = And if negate else Or
        return cls(nnf(f.left, negate), nnf(f.right, negate))
    if isinstance(f, Implies):
        if negate:
            return And(nnf(f.left), nnf(f.right, True))
        return Or(nnf(f.left, True), nnf(f.right))
    if isinstance(f, Next):
        return Next(nnf(f.arg, negate))
    if isinstance(f, Eventually):
        if negate:
            return Release(FALSE_F, nnf(f.arg, True))
        return Until(TRUE_F, nnf(f.arg))
    if isinstance(f, Always):
        if negate:
            return Until(TRUE_F, nnf(f.arg, True))
        return Release(FALSE_F, nnf(f.arg))
    if isinstance(f, Until):
        if negate:
            return Release(nnf(f.left, True), nnf(f.right, True))
        return Until(nnf(f.left), nnf(f.right))
    if isinstance(f, Release):
        if negate:
            return Until(nnf(f.left, True), nnf(f.right, True))
        return Release(nnf(f.left), nnf(f.right))
    if isinstance(f, WeakUntil):
        # a W b == b R (a | b)
        if negate:
            nb = nnf(f.right, True)
            return Until(nb, And(nnf(f.left, True), nb))
        b = nnf(f.right)
        return Release(b, Or(nnf(f.left), b))
    if isinstance(f, (Exists, Forall)):
        raise ValueError(f"path quantifier in a linear formula: {to_text(f)}")
    raise TypeError(f"not a formula node: {f!r}")


class BuchiAutomaton:
    """Generalized Büchi automaton with state-based letter constraints.

    State ``q`` admits a letter (set of atoms) iff it contains ``pos[q]``
    and avoids ``neg[q]``.  A run reads letter ``w_i`` in state ``q_i`` and
    moves to some ``q_{i+1}`` in ``succ[q_i]``; it is accepting iff it visits
    every set in ``acceptance`` infinitely often.
    """

    def __init__(self, pos, neg, succ, initial, acceptance, atoms):
        self.pos = tuple(frozenset(x) for x in pos)
        self.neg = tuple(frozenset(x) for x in neg)
        self.succ = tuple(tuple(x) for x in succ)
        self.initial = tuple(initial)
        self.acceptance = tuple(frozenset(a) for a in acceptance) or (frozenset(range(len(self.pos))),)
        self.atoms = frozenset(atoms)

    def __len__(self):
        return len(self.pos)

    def admits(self, q: int, letter) -> bool:
        return self.pos[q] <= letter and not (self.neg[q] & letter)

    def __repr__(self):
        return (f"BuchiAutomaton({len(self)} states, {len(self.initial)} initial, "
                f"{len(self.acceptance)} acceptance sets)")


@lru_cache(maxsize=8192)
def _order_key(f) -> str:
    # fixes the expansion order so automata are reproducible across runs;
    # the order never affects the language
    if isinstance(f, Atom):
        return "a:" + f.name
    if isinstance(f, Const):
        return "c:1" if f.value else "c:0"
    parts = [_order_key(getattr(f, n)) for n in ("arg", "left", "right") if hasattr(f, n)]
    return f"{type(f).__name__}({','.join(parts)})"


@lru_cache(maxsize=8192)
def _priority(f):
    # settle literals and conjunctions before branching on disjunctive nodes
    if isinstance(f, (Atom, Const, Not)):
        rank = 0
    elif isinstance(f, (And, Next)):
        rank = 1
    else:
        rank = 2
    return rank, _order_key(f)


def _atoms_of(f, acc):
    if isinstance(f, Atom):
        acc.add(f.name)
    for name in ("arg", "left", "right"):
        sub = getattr(f, name, None)
        if sub is not None:
            _atoms_of(sub, acc)
    return acc


def _untils(f, acc):
    if isinstance(f, Until):
        acc.append(f)
    for name in ("arg", "left", "right"):
        sub = getattr(f, name, None)
        if sub is not None:
            _untils(sub, acc)
    return acc


def _is_eventually(f):
    return isinstance(f, Until) and f.left == TRUE_F


def _is_always(f):
    return isinstance(f, Release) and f.left == FALSE_F


def simplify(f: Formula) -> Formula:
    """Language-preserving cleanup of a negation normal form, bottom-up.

    Removes constants and duplicate operands and collapses stacked
    eventually/always operators (F F a = F a, F G F a = G F a, ...).
    """
    if isinstance(f, (Atom, Const)) or (isinstance(f, Not) and isinstance(f.arg, Atom)):
        return f
    if isinstance(f, Next):
        a = simplify(f.arg)
        return a if isinstance(a, Const) else Next(a)
    if isinstance(f, (And, Or)):
        a, b = simplify(f.left), simplify(f.right)
        unit, zero = (TRUE_F, FALSE_F) if isinstance(f, And) else (FALSE_F, TRUE_F)
        if a == zero or b == zero:
            return zero
        if a == unit:
            return b
        if b == unit or a == b:
            return a
        if isinstance(f, And) and _is_always(a) and _is_always(b):
            return simplify(Release(FALSE_F, And(a.right, b.right)))
        if isinstance(f, Or) and _is_eventually(a) and _is_eventually(b):
            return simplify(Until(TRUE_F, Or(a.right, b.right)))
        if isinstance(a, Next) and isinstance(b, Next):
            return Next(simplify(type(f)(a.arg, b.arg)))
        return type(f)(a, b)
    if isinstance(f, Until):
        a, b = simplify(f.left), simplify(f.right)
        if isinstance(b, Const) or a == b or a == FALSE_F:
            return b
        if a == TRUE_F:
            # F F x = F x;  F G F x = G F x
            if _is_eventually(b):
                return b
            if _is_always(b) and _is_eventually(b.right):
                return b
        return Until(a, b)
    if isinstance(f, Release):
        a, b = simplify(f.left), simplify(f.right)
        if isinstance(b, Const) or a == b or a == TRUE_F:
            return b
        if a == FALSE_F:
            # G G x = G x;  G F G x = F G x
            if _is_always(b):
                return b
            if _is_eventually(b) and _is_always(b.right):
                return b
        return Release(a, b)
    raise TypeError(f"unexpected node in negation normal form: {f!r}")


def _intern(f, table):
    # hash-consing: equal subformulas become one object, so set and dict
    # lookups during the tableau stop at the identity check
    if isinstance(f, (Atom, Const)):
        return table.setdefault(f, f)
    if isinstance(f, (Not, Next)):
        node = type(f)(_intern(f.arg, table))
    else:
        node = type(f)(_intern(f.left, table), _intern(f.right, table))
    return table.setdefault(node, node)


def _is_literal(f):
    return isinstance(f, Atom) or (isinstance(f, Not) and isinstance(f.arg, Atom))


def ltl_to_buchi(f: Formula) -> BuchiAutomaton:
    """Automaton accepting exactly the infinite letter sequences satisfying ``f``."""
    g = _intern(simplify(nnf(f)), {})
    untils = list(dict.fromkeys(_untils(g, [])))
    expansions: dict = {}

    def expand(obligations: frozenset) -> list:
        """Leaves (literals, next obligations, acceptance signature) of the tableau."""
        hit = expansions.get(obligations)
        if hit is not None:
            return hit
        leaves = {}
        seen = set()
        work = [(set(obligations), set(), set())]
        while work:
            new, old, nxt = work.pop()
            if not new:
                lits = frozenset(x for x in old if _is_literal(x))
                sig = tuple(u not in old or u.right in old for u in untils)
                leaves.setdefault((lits, frozenset(nxt), sig), None)
                continue
            state = (frozenset(new), frozenset(old), frozenset(nxt))
            if state in seen:
                continue
            seen.add(state)
            eta = min(new, key=_priority)
            new.discard(eta)
            if eta in old:
                work.append((new, old, nxt))
                continue
            if isinstance(eta, Const):
                if eta.value:
                    work.append((new, old | {eta}, nxt))
                continue
            if _is_literal(eta):
                negation = eta.arg if isinstance(eta, Not) else Not(eta)
                if negation in old:
                    continue
                work.append((new, old | {eta}, nxt))
                continue
            if isinstance(eta, And):
                work.append((new | ({eta.left, eta.right} - old), old | {eta}, nxt))
                continue
            if isinstance(eta, Next):
                work.append((new, old | {eta}, nxt | {eta.arg}))
                continue
            if isinstance(eta, Or):
                if eta.left in old or eta.right in old:
                    # already discharged by an assumption made on this branch
                    work.append((new, old | {eta}, nxt))
                    continue
                first, first_next, second = {eta.left}, set(), {eta.right}
            elif isinstance(eta, Until):
                if eta.right in old:
                    work.append((new, old | {eta}, nxt))
                    continue
                first, first_next, second = {eta.left}, {eta}, {eta.right}
            elif isinstance(eta, Release):
                if eta.left in old and eta.right in old:
                    work.append((new, old | {eta}, nxt))
                    continue
                first, first_next, second = {eta.right}, {eta}, {eta.left, eta.right}
            else:
                raise TypeError(f"unexpected node in negation normal form: {eta!r}")
            o = old | {eta}
            work.append((new | (first - old), o, nxt | first_next))
            work.append((new | (second - old), set(o), set(nxt)))
        out = list(leaves)
        expansions[obligations] = out
        return out

    # a node is a tableau leaf; two leaves with the same literals, next
    # obligations and acceptance signature accept the same suffixes
    ids: dict = {}
    leaves: list = []
    succ: list = []

    def node(leaf):
        nid = ids.get(leaf)
        if nid is None:
            nid = ids[leaf] = len(leaves)
            leaves.append(leaf)
            succ.append(None)
        return nid

    initial = [node(leaf) for leaf in expand(frozenset([g]))]
    q = 0
    while q < len(leaves):
        succ[q] = [node(leaf) for leaf in expand(leaves[q][1])]
        q += 1
    pos = [{x.name for x in lits if isinstance(x, Atom)} for lits, _, _ in leaves]
    neg = [{x.arg.name for x in lits if isinstance(x, Not)} for lits, _, _ in leaves]
    acceptance = [{q for q, leaf in enumerate(leaves) if leaf[2][i]}
                  for i in range(len(untils))]
    return BuchiAutomaton(pos, neg, succ, initial, acceptance, _atoms_of(f, set()))


def product_nonempty(m: KripkeStructure, aut: BuchiAutomaton,
                     labels: Optional[Sequence] = None) -> np.ndarray:
    """Boolean array ``good[s, q]``: product node (s, q) is admissible and has
    an accepting continuation (automaton in ``q`` reading the letter of ``s``)."""
    labels = m.labels if labels is None else labels
    ns, nq = len(m), len(aut)
    ok = np.zeros((ns, nq), dtype=bool)
    for s in range(ns):
        letter = labels[s]
        ok[s] = [aut.admits(q, letter) for q in range(nq)]
    ks = np.fromiter((s for s in range(ns) for _ in m.succ[s]), dtype=np.int64)
    kt = np.fromiter((t for s in range(ns) for t in m.succ[s]), dtype=np.int64)
    aq = np.fromiter((q for q in range(nq) for _ in aut.succ[q]), dtype=np.int64)
    aq2 = np.fromiter((q2 for q in range(nq) for q2 in aut.succ[q]), dtype=np.int64)
    # every (model edge, automaton edge) pair whose endpoints both admit their letters
    rows = (ks[:, None] * nq + aq[None, :]).ravel()
    cols = (kt[:, None] * nq + aq2[None, :]).ravel()
    okf = ok.ravel()
    keep = okf[rows] & okf[cols]
    rows, cols = rows[keep], cols[keep]
    size = ns * nq
    if not len(rows):
        return np.zeros((ns, nq), dtype=bool)
    ones = np.ones(len(rows), dtype=np.int8)
    graph = csr_matrix((ones, (rows, cols)), shape=(size, size))
    ncomp, comp = connected_components(graph, directed=True, connection="strong")
    comp_size = np.bincount(comp, minlength=ncomp)
    fair = comp_size > 1
    fair[comp[rows[rows == cols]]] = True
    q_of = np.arange(size) % nq
    for acc in aut.acceptance:
        in_acc = np.zeros(nq, dtype=bool)
        in_acc[list(acc)] = True
        hit = np.zeros(ncomp, dtype=bool)
        hit[comp[in_acc[q_of] & okf]] = True
        fair &= hit
    seeds = np.flatnonzero(fair[comp] & okf)
    if not len(seeds):
        return np.zeros((ns, nq), dtype=bool)
    # backward reachability: search the reversed graph from an extra root
    # node wired to every node of a fair component
    root = size
    back = csr_matrix(
        (np.ones(len(rows) + len(seeds), dtype=np.int8),
         (np.concatenate([cols, np.full(len(seeds), root)]),
          np.concatenate([rows, seeds]))),
        shape=(size + 1, size + 1))
    order = breadth_first_order(back, root, directed=True, return_predecessors=False)
    good = np.zeros(size + 1, dtype=bool)
    good[order] = True
    return good[:size].reshape(ns, nq)


def accepting_from(m: KripkeStructure, aut: BuchiAutomaton,
                   labels: Optional[Sequence] = None) -> StateSet:
    """States from which some path of ``m`` is accepted by ``aut``."""
    good = product_nonempty(m, aut, labels)
    out = 0
    init = list(aut.initial)
    if not init:
        return 0
    for s in range(len(m)):
        if good[s, init].any():
            out |= 1 << s
    return out


def accepts_lasso(aut: BuchiAutomaton, prefix: Sequence, cycle: Sequence) -> bool:
    """Membership of the ultimately periodic word prefix . cycle^omega."""
    letters = list(prefix) + list(cycle)
    n = len(letters)
    if not cycle:
        raise ValueError("cycle must be nonempty")
    edges = [(i, i + 1) for i in range(n - 1)] + [(n - 1, len(prefix))]
    m = KripkeStructure([str(i) for i in range(n)], [0], edges, letters, sorted(aut.atoms))
    return bool(accepting_from(m, aut) & 1)
