"""Brute-force ground truth, independent of the fixpoint and automaton engines.

Path formulas are evaluated exactly on lassos u.v^omega: a lasso has only
``len(u) + len(v)`` distinct suffixes, so every max/min over positions is a
max/min over those suffix classes, and the "eventually always" and
"infinitely often" components read the cycle positions only.  State
formulas under a quantifier take the join (E) or meet (A) over all lassos
from the state within a size bound.

Also here: a classical CTL evaluator written directly with Python sets, and
a classical LTL evaluator on lasso words (batched over many words at once
with integer bitmasks).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator, Optional, Sequence

from .formula import (
    Always, And, Atom, Const, Eventually, Exists, Forall, Formula, Implies,
    Next, Not, Or, Until, WeakUntil, is_state_formula, to_text,
)
from .kripke import KripkeStructure
from .truth import VALUES, TruthValue

__all__ = [
    "Lasso", "enumerate_lassos", "eval_path", "BruteForce",
    "eval_state_bruteforce", "eval_ctl", "ctl_sat", "eval_ltl_lasso",
    "LassoBatch",
]


@dataclass(frozen=True)
class Lasso:
    """The path prefix . cycle^omega (state indices)."""
    prefix: tuple
    cycle: tuple

    def __post_init__(self):
        if not self.cycle:
            raise ValueError("lasso cycle must be nonempty")

    def __len__(self):
        return len(self.prefix) + len(self.cycle)

    @property
    def states(self) -> tuple:
        return self.prefix + self.cycle

    def successor(self, i: int) -> int:
        """Index of the suffix class following position ``i``."""
        return i + 1 if i + 1 < len(self) else len(self.prefix)

    def is_valid(self, m: KripkeStructure) -> bool:
        seq = self.states + (self.cycle[0],)
        return all(b in m.succ[a] for a, b in zip(seq, seq[1:]))

    def render(self, m: Optional[KripkeStructure] = None) -> str:
        name = (lambda s: m.names[s]) if m is not None else str
        head = " ".join(name(s) for s in self.prefix)
        loop = " ".join(name(s) for s in self.cycle)
        return f"{head} ({loop})^w" if head else f"({loop})^w"


def _primitive(seq) -> bool:
    n = len(seq)
    return not any(n % d == 0 and seq == seq[:d] * (n // d) for d in range(1, n))


def enumerate_lassos(m: KripkeStructure, s: int, max_prefix: int, max_cycle: int,
                     *, simple_cycles: bool = True) -> Iterator[Lasso]:
    """Every lasso from ``s`` with ``len(prefix) < max_prefix`` and
    ``len(cycle) <= max_cycle``, once each, in a deterministic order.

    Lassos are produced in canonical form (shortest prefix, primitive
    cycle), so two results never denote the same path.  With
    ``simple_cycles`` the cycle visits each state at most once; otherwise
    any closed walk is allowed.
    """
    s = m.index(s)

    def walks(start, length):
        # all walks with `length` states beginning at `start`
        if length == 1:
            yield (start,)
            return
        for w in walks(start, length - 1):
            for t in m.succ[w[-1]]:
                yield w + (t,)

    def cycles(start):
        stack = [(start,)]
        while stack:
            w = stack.pop(0)
            if start in m.succ[w[-1]] and _primitive(w):
                yield w
            if len(w) < max_cycle:
                for t in m.succ[w[-1]]:
                    if simple_cycles and t in w:
                        continue
                    stack.append(w + (t,))

    for plen in range(0, max_prefix):
        prefixes = [()] if plen == 0 else list(walks(s, plen))
        for u in prefixes:
            starts = (s,) if plen == 0 else m.succ[u[-1]]
            for c in starts:
                for v in cycles(c):
                    if u and u[-1] == v[-1]:
                        continue
                    yield Lasso(u, v)


# ------------------------------------------------------------ path values

def _from_bits(b1, b2, b3, b4) -> int:
    if not b1 <= b2 <= b3 <= b4:
        raise AssertionError(f"non-monotone path value {(b1, b2, b3, b4)}")
    return b1 + b2 + b3 + b4


@lru_cache(maxsize=None)
def _geometry(start: int, n: int):
    nxt = tuple(i + 1 if i + 1 < n else start for i in range(n))
    # reach[i]: suffix classes visited from i onwards
    reach = tuple(tuple(range(i, n)) if i < start else tuple(range(start, n))
                  for i in range(n))
    return nxt, reach, tuple(range(start, n))


def _path_ranks(lasso: Lasso, f: Formula, state_rank: Callable, memo: dict) -> list:
    """Rank (0..4) of ``f`` at every suffix class of ``lasso``."""
    hit = memo.get(f)
    if hit is not None:
        return hit
    n = len(lasso)
    states = lasso.states
    nxt, reach, cyc = _geometry(len(lasso.prefix), n)
    if is_state_formula(f):
        out = [state_rank(st, f) for st in states]
    elif isinstance(f, Not):
        out = [0 if r == 4 else 4 for r in _path_ranks(lasso, f.arg, state_rank, memo)]
    elif isinstance(f, (And, Or, Implies)):
        a = _path_ranks(lasso, f.left, state_rank, memo)
        b = _path_ranks(lasso, f.right, state_rank, memo)
        if isinstance(f, And):
            out = [min(x, y) for x, y in zip(a, b)]
        elif isinstance(f, Or):
            out = [max(x, y) for x, y in zip(a, b)]
        else:
            out = [4 if x <= y else y for x, y in zip(a, b)]
    elif isinstance(f, Next):
        a = _path_ranks(lasso, f.arg, state_rank, memo)
        out = [a[nxt[i]] for i in range(n)]
    elif isinstance(f, Eventually):
        a = _path_ranks(lasso, f.arg, state_rank, memo)
        out = [max([a[j] for j in reach[i]]) for i in range(n)]
    elif isinstance(f, Always):
        # bit k of a min/max of ranks is the min/max of the bits, so each
        # component is a threshold test on an extremum of the operand ranks;
        # eventually-always and infinitely-often only see the cycle
        a = _path_ranks(lasso, f.arg, state_rank, memo)
        b2 = min([a[j] for j in cyc]) >= 3
        b3 = max([a[j] for j in cyc]) >= 2
        out = []
        for i in range(n):
            seg = [a[j] for j in reach[i]]
            out.append(_from_bits(min(seg) >= 4, b2, b3, max(seg) >= 1))
    elif isinstance(f, Until):
        a = _path_ranks(lasso, f.left, state_rank, memo)
        b = _path_ranks(lasso, f.right, state_rank, memo)
        out = []
        for i in range(n):
            best, guard, p = 0, 4, i
            for _ in range(n):
                r = b[p] if b[p] < guard else guard
                if r > best:
                    best = r
                if a[p] < guard:
                    guard = a[p]
                p = nxt[p]
            out.append(best)
    elif isinstance(f, WeakUntil):
        # W_j = max(a_j, max_{i<=j} b_i) componentwise; again a rank max
        a = _path_ranks(lasso, f.left, state_rank, memo)
        b = _path_ranks(lasso, f.right, state_rank, memo)
        period = len(lasso.cycle)
        walk_len = n + period
        out = []
        for i in range(n):
            w = []
            seen, p = 0, i
            for _ in range(walk_len):
                if b[p] > seen:
                    seen = b[p]
                w.append(a[p] if a[p] > seen else seen)
                p = nxt[p]
            # after n steps every reachable class was seen: the tail is periodic
            tail = w[n:]
            out.append(_from_bits(min(w) >= 4, min(tail) >= 3, max(tail) >= 2, max(w) >= 1))
    else:
        raise TypeError(f"unexpected path formula {to_text(f)}")
    memo[f] = out
    return out


def eval_path(m: KripkeStructure, lasso: Lasso, f: Formula,
              state_values: Optional[Callable] = None) -> TruthValue:
    """V(pi, f) for the lasso path pi.

    ``state_values(s, Psi)`` gives V(s, Psi) for state subformulas; by default
    it is the brute-force evaluator on ``m``.
    """
    if state_values is None:
        bf = BruteForce(m)
        state_rank = bf.state_rank
    else:
        state_rank = lambda s, g: state_values(s, g).rank  # noqa: E731
    return VALUES[_path_ranks(lasso, f, state_rank, {})[0]]


class BruteForce:
    """Memoizing brute-force evaluator of robust state formulas on one model.

    Quantifiers range over every lasso from the state with prefix shorter
    than ``max_prefix`` and cycle of at most ``max_cycle`` states (both
    default to the number of states).
    """

    def __init__(self, m: KripkeStructure, max_prefix: Optional[int] = None,
                 max_cycle: Optional[int] = None, *, simple_cycles: bool = True):
        self.m = m
        self.max_prefix = len(m) if max_prefix is None else max_prefix
        self.max_cycle = len(m) if max_cycle is None else max_cycle
        self.simple_cycles = simple_cycles
        self._lassos: dict = {}
        self._ranks: dict = {}
        self._memos: dict = {}     # lasso -> {path formula: ranks}

    def lassos(self, s: int) -> list:
        got = self._lassos.get(s)
        if got is None:
            got = list(enumerate_lassos(self.m, s, self.max_prefix, self.max_cycle,
                                        simple_cycles=self.simple_cycles))
            if not got:
                raise ValueError(f"lasso bound too small: no lasso from state {self.m.names[s]}")
            self._lassos[s] = got
        return got

    def ranks(self, f: Formula) -> list:
        got = self._ranks.get(f)
        if got is None:
            got = [self._compute(s, f) for s in range(len(self.m))]
            self._ranks[f] = got
        return got

    def state_rank(self, s: int, f: Formula) -> int:
        return self.ranks(f)[s]

    def value(self, s, f: Formula) -> TruthValue:
        return VALUES[self.state_rank(self.m.index(s), f)]

    def path_values(self, s, qf: Formula) -> list:
        """[(lasso, V(lasso, path part))] for a quantified formula ``qf``."""
        s = self.m.index(s)
        return [(l, VALUES[self._path_rank(l, qf.arg)])
                for l in self.lassos(s)]

    def extremal(self, s, qf: Formula):
        """(value, lasso) attaining the max (E) or min (A) at ``s``."""
        pv = self.path_values(s, qf)
        pick = max if isinstance(qf, Exists) else min
        best = pick(v for _, v in pv)
        return best, next(l for l, v in pv if v == best)

    def _path_rank(self, lasso, f):
        memo = self._memos.get(lasso)
        if memo is None:
            memo = self._memos[lasso] = {}
        return _path_ranks(lasso, f, self.state_rank, memo)[0]

    def _compute(self, s, f):
        m = self.m
        if isinstance(f, Atom):
            return 4 if f.name in m.labels[s] else 0
        if isinstance(f, Const):
            return 4 if f.value else 0
        if isinstance(f, Not):
            return 0 if self.state_rank(s, f.arg) == 4 else 4
        if isinstance(f, (And, Or, Implies)):
            a = self.state_rank(s, f.left)
            b = self.state_rank(s, f.right)
            if isinstance(f, And):
                return min(a, b)
            if isinstance(f, Or):
                return max(a, b)
            return 4 if a <= b else b
        if isinstance(f, (Exists, Forall)):
            vals = (self._path_rank(l, f.arg) for l in self.lassos(s))
            return max(vals) if isinstance(f, Exists) else min(vals)
        raise TypeError(f"not a state formula: {to_text(f)}")


def eval_state_bruteforce(m: KripkeStructure, s, f: Formula,
                          bound: Optional[int] = None) -> TruthValue:
    """V(s, f) by exhaustive lasso enumeration (prefix < bound, cycle <= bound)."""
    return BruteForce(m, bound, bound).value(s, f)


# ------------------------------------------------------------ classical CTL

def ctl_sat(m: KripkeStructure, f: Formula) -> set:
    """Classical CTL satisfaction set (temporal operators read undotted)."""
    n = len(m)
    every = set(range(n))
    succ = m.succ

    def ex(t):
        return {s for s in every if any(x in t for x in succ[s])}

    def ax(t):
        return {s for s in every if all(x in t for x in succ[s])}

    def eu(a, b):
        t = set(b)
        while True:
            t2 = t | (a & ex(t))
            if t2 == t:
                return t
            t = t2

    def au(a, b):
        t = set(b)
        while True:
            t2 = t | (a & ax(t))
            if t2 == t:
                return t
            t = t2

    def eg(a):
        t = set(a)
        while True:
            t2 = t & ex(t)
            if t2 == t:
                return t
            t = t2

    def ev(g):
        if isinstance(g, Atom):
            return {s for s in every if g.name in m.labels[s]}
        if isinstance(g, Const):
            return set(every) if g.value else set()
        if isinstance(g, Not):
            return every - ev(g.arg)
        if isinstance(g, And):
            return ev(g.left) & ev(g.right)
        if isinstance(g, Or):
            return ev(g.left) | ev(g.right)
        if isinstance(g, Implies):
            return (every - ev(g.left)) | ev(g.right)
        if isinstance(g, (Exists, Forall)):
            p = g.arg
            exists = isinstance(g, Exists)
            if isinstance(p, Next):
                a = ev(p.arg)
                return ex(a) if exists else ax(a)
            if isinstance(p, Eventually):
                a = ev(p.arg)
                return eu(every, a) if exists else au(every, a)
            if isinstance(p, Always):
                a = ev(p.arg)
                if exists:
                    return eg(a)
                return every - eu(every, every - a)
            if isinstance(p, Until):
                a, b = ev(p.left), ev(p.right)
                return eu(a, b) if exists else au(a, b)
            if isinstance(p, WeakUntil):
                a, b = ev(p.left), ev(p.right)
                if exists:
                    return eu(a, b) | eg(a)
                na, nb = every - a, every - b
                return every - eu(nb, na & nb)
        raise ValueError(f"not a CTL state formula: {to_text(g)}")

    return ev(f)


def eval_ctl(m: KripkeStructure, s, f: Formula) -> bool:
    return m.index(s) in ctl_sat(m, f)


# ------------------------------------------------------- classical LTL

class LassoBatch:
    """Every word u.v^omega over ``atoms`` with fixed ``len(u)``, ``len(v)``.

    Word ``w`` (0 <= w < 2**(len(atoms) * length)) spells position ``i`` as
    the letter whose atom ``j`` is bit ``i * len(atoms) + j`` of ``w``.
    Truth of a formula is an int mask over word indices, one per position.
    """

    def __init__(self, atoms: Sequence[str], prefix_len: int, cycle_len: int):
        if cycle_len < 1:
            raise ValueError("cycle length must be positive")
        self.atoms = tuple(atoms)
        self.prefix_len = prefix_len
        self.cycle_len = cycle_len
        self.length = n = prefix_len + cycle_len
        na = len(self.atoms)
        self.count = 1 << (na * n)
        self.full = (1 << self.count) - 1
        self._atom_masks = {}
        for j, name in enumerate(self.atoms):
            per_pos = []
            for i in range(n):
                bitpos = i * na + j
                # words whose bit `bitpos` is set: a square-wave pattern
                block = (1 << (1 << bitpos)) - 1
                period = 1 << (bitpos + 1)
                pattern = 0
                for start in range(1 << bitpos, self.count, period):
                    pattern |= block << start
                per_pos.append(pattern)
            self._atom_masks[name] = per_pos
        self.nxt = [i + 1 if i + 1 < n else prefix_len for i in range(n)]

    def letters(self, w: int) -> list:
        na = len(self.atoms)
        return [frozenset(a for j, a in enumerate(self.atoms) if w >> (i * na + j) & 1)
                for i in range(self.length)]

    def eval(self, f: Formula) -> int:
        """Mask of the words satisfying ``f`` at position 0."""
        return self._eval(f, {})[0]

    def _eval(self, f, memo):
        hit = memo.get(f)
        if hit is not None:
            return hit
        n, full, nxt = self.length, self.full, self.nxt
        start = self.prefix_len
        reach = [list(range(i, n)) if i < start else list(range(start, n)) for i in range(n)]
        if isinstance(f, Atom):
            out = list(self._atom_masks.get(f.name, [0] * n))
        elif isinstance(f, Const):
            out = [full if f.value else 0] * n
        elif isinstance(f, Not):
            out = [full ^ x for x in self._eval(f.arg, memo)]
        elif isinstance(f, (And, Or, Implies)):
            a = self._eval(f.left, memo)
            b = self._eval(f.right, memo)
            if isinstance(f, And):
                out = [x & y for x, y in zip(a, b)]
            elif isinstance(f, Or):
                out = [x | y for x, y in zip(a, b)]
            else:
                out = [(full ^ x) | y for x, y in zip(a, b)]
        elif isinstance(f, Next):
            a = self._eval(f.arg, memo)
            out = [a[nxt[i]] for i in range(n)]
        elif isinstance(f, Eventually):
            a = self._eval(f.arg, memo)
            out = []
            for i in range(n):
                acc = 0
                for j in reach[i]:
                    acc |= a[j]
                out.append(acc)
        elif isinstance(f, Always):
            a = self._eval(f.arg, memo)
            out = []
            for i in range(n):
                acc = full
                for j in reach[i]:
                    acc &= a[j]
                out.append(acc)
        elif isinstance(f, (Until, WeakUntil)):
            a = self._eval(f.left, memo)
            b = self._eval(f.right, memo)
            out = []
            for i in range(n):
                res, guard, p = 0, full, i
                for _ in range(n):
                    res |= guard & b[p]
                    guard &= a[p]
                    p = nxt[p]
                # guard now holds where `a` held on every reachable class
                out.append(res | guard if isinstance(f, WeakUntil) else res)
        else:
            raise TypeError(f"not a linear formula: {to_text(f)}")
        memo[f] = out
        return out


def eval_ltl_lasso(prefix: Sequence, cycle: Sequence, f: Formula) -> bool:
    """Classical truth of ``f`` on the word prefix . cycle^omega of letters."""
    letters = [frozenset(x) for x in list(prefix) + list(cycle)]
    atoms = sorted(set().union(*letters)) if letters else []
    batch = LassoBatch(atoms, len(prefix), len(cycle))
    na = len(atoms)
    w = 0
    for i, letter in enumerate(letters):
        for j, a in enumerate(atoms):
            if a in letter:
                w |= 1 << (i * na + j)
    return bool(batch.eval(f) >> w & 1)
