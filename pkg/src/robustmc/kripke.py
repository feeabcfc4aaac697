"""Finite Kripke structures, the line-oriented model format, and a seeded
random generator.

State sets are plain ``int`` bitmasks (bit ``i`` set iff state ``i`` is a
member).  Union, intersection and complement are then single integer ops.
"""
from __future__ import annotations

import random
from functools import cached_property
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

__all__ = [
    "StateSet", "KripkeStructure", "Violation", "ModelFormatError",
    "post", "validate", "random_structure", "parse_model", "load_model",
    "dump_model", "mask_of", "states_of",
]

StateSet = int

# Per-state cost of the bit loop relative to one edge of the array path, and
# the array path's fixed overhead in edge units.
_LOOP_WEIGHT = 50
_VECTOR_OVERHEAD = 5000


def mask_of(states: Iterable[int]) -> StateSet:
    m = 0
    for s in states:
        m |= 1 << s
    return m


def states_of(mask: StateSet) -> list:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class ModelFormatError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


class KripkeStructure:
    """M = (S, I, R, L) over the proposition alphabet ``props``.

    ``names[i]`` is the name of state ``i``; ``succ[i]`` its successor
    indices in insertion order; ``labels[i]`` the propositions holding there.
    Instances are treated as immutable.
    """

    def __init__(self, names: Sequence[str], initial: Iterable[int],
                 edges: Iterable[tuple], labels: Sequence[Iterable[str]],
                 props: Optional[Sequence[str]] = None):
        self.names = tuple(names)
        n = len(self.names)
        if len(set(self.names)) != n:
            raise ValueError("duplicate state names")
        self._index = {name: i for i, name in enumerate(self.names)}
        succ = [[] for _ in range(n)]
        for a, b in edges:
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"edge ({a}, {b}) refers to an unknown state")
            if b not in succ[a]:
                succ[a].append(b)
        self.succ = tuple(tuple(x) for x in succ)
        self.labels = tuple(frozenset(l) for l in labels)
        if len(self.labels) != n:
            raise ValueError("one label set per state required")
        if props is None:
            props = sorted(set().union(*self.labels)) if n else []
        self.props = tuple(props)
        self.initial = mask_of(initial)
        self.all = (1 << n) - 1
        self.post_masks = tuple(mask_of(s) for s in self.succ)
        pred = [0] * n
        for a, targets in enumerate(self.succ):
            for b in targets:
                pred[b] |= 1 << a
        self.pred_masks = tuple(pred)
        self._n_edges = sum(len(t) for t in self.succ)

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        if not isinstance(other, KripkeStructure):
            return NotImplemented
        return (self.names == other.names and self.initial == other.initial
                and [set(s) for s in self.succ] == [set(s) for s in other.succ]
                and self.labels == other.labels and set(self.props) == set(other.props))

    def __repr__(self):
        return f"KripkeStructure({len(self)} states, props={list(self.props)})"

    def index(self, state) -> int:
        if isinstance(state, int) and not isinstance(state, bool):
            if 0 <= state < len(self.names):
                return state
            raise KeyError(f"unknown state id {state}")
        try:
            return self._index[state]
        except KeyError:
            raise KeyError(f"unknown state {state!r}") from None

    def post(self, state) -> StateSet:
        return self.post_masks[self.index(state)]

    def label_mask(self, prop: str) -> StateSet:
        return mask_of(i for i, l in enumerate(self.labels) if prop in l)

    @cached_property
    def _edge_arrays(self):
        src = np.fromiter((a for a, t in enumerate(self.succ) for _ in t), dtype=np.intp)
        dst = np.fromiter((b for t in self.succ for b in t), dtype=np.intp)
        return src, dst

    def _pre_exists_vector(self, target: StateSet) -> StateSet:
        n = len(self.names)
        nbytes = (n + 7) // 8
        hit = np.unpackbits(np.frombuffer(target.to_bytes(nbytes, "little"), dtype=np.uint8),
                            bitorder="little")
        src, dst = self._edge_arrays
        out = np.zeros(8 * nbytes, dtype=np.uint8)
        out[src[hit[dst].astype(bool)]] = 1
        return int.from_bytes(np.packbits(out, bitorder="little").tobytes(), "little")

    def pre_exists(self, target: StateSet) -> StateSet:
        """{s | post(s) & target nonempty}, via the reverse adjacency."""
        if _LOOP_WEIGHT * bin(target).count("1") > _VECTOR_OVERHEAD + self._n_edges:
            return self._pre_exists_vector(target)
        out = 0
        pred = self.pred_masks
        while target:
            low = target & -target
            out |= pred[low.bit_length() - 1]
            target ^= low
        return out

    def pre_forall(self, target: StateSet) -> StateSet:
        """{s | post(s) is a subset of target}."""
        return self.all & ~self.pre_exists(self.all & ~target)

    def relabel(self, extra: dict) -> "KripkeStructure":
        """Copy with additional propositions: ``extra`` maps name -> StateSet."""
        labels = [set(l) for l in self.labels]
        for name, mask in extra.items():
            for s in states_of(mask):
                labels[s].add(name)
        edges = [(a, b) for a, t in enumerate(self.succ) for b in t]
        return KripkeStructure(self.names, states_of(self.initial), edges, labels,
                               tuple(self.props) + tuple(extra))


def post(m: KripkeStructure, state) -> StateSet:
    return m.post(state)


@dataclass(frozen=True)
class Violation:
    kind: str        # "totality" | "undeclared-prop" | "no-initial"
    severity: str    # "error" | "warning"
    message: str
    state: Optional[str] = None


def validate(m: KripkeStructure) -> list:
    """Every structural problem of ``m``; an empty list means valid."""
    out = []
    declared = set(m.props)
    for i, name in enumerate(m.names):
        if not m.succ[i]:
            out.append(Violation("totality", "error",
                                 f"state {name} has no successor", name))
        for prop in sorted(m.labels[i] - declared):
            out.append(Violation("undeclared-prop", "error",
                                 f"state {name} is labelled with undeclared proposition {prop}",
                                 name))
    if not m.names:
        out.append(Violation("totality", "error", "structure has no states"))
    if not m.initial:
        out.append(Violation("no-initial", "warning",
                             "no initial state; every check holds vacuously"))
    return out


def _prop_names(n: int) -> list:
    base = ["p", "q", "r"]
    return base[:n] + [f"p{i}" for i in range(len(base), n)]


def random_structure(n_states: int, edge_density: float, n_props: int,
                     seed: int) -> KripkeStructure:
    """Random total structure; state 0 is the only initial state.

    Each ordered pair (including self-loops) is an edge with probability
    ``edge_density``; a state left without successors gets one uniformly
    chosen successor.  Each proposition holds at each state with
    probability 1/2.
    """
    if n_states < 1:
        raise ValueError("n_states must be at least 1")
    if not 0.0 <= edge_density <= 1.0:
        raise ValueError("edge_density must lie in [0, 1]")
    rng = random.Random(seed)
    props = _prop_names(n_props)
    edges = []
    for a in range(n_states):
        targets = [b for b in range(n_states) if rng.random() < edge_density]
        if not targets:
            targets = [rng.randrange(n_states)]
        edges.extend((a, b) for b in targets)
    labels = [{p for p in props if rng.random() < 0.5} for _ in range(n_states)]
    names = [f"s{i}" for i in range(n_states)]
    return KripkeStructure(names, [0], edges, labels, props)


# --------------------------------------------------------------- file format

def parse_model(text: str) -> KripkeStructure:
    """Parse the ``props`` / ``state`` / ``edge`` line format."""
    props: list = []
    names: list = []
    index: dict = {}
    initial: list = []
    labels: list = []
    edges: list = []
    pending_edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        head, args = line[0], line[1:]
        if head == "props":
            for p in args:
                if p not in props:
                    props.append(p)
        elif head == "state":
            if not args:
                raise ModelFormatError("state line needs a name", lineno)
            name = args[0]
            if name in index:
                raise ModelFormatError(f"duplicate state {name}", lineno)
            index[name] = len(names)
            names.append(name)
            label = set()
            for tok in args[1:]:
                if tok == "init":
                    initial.append(index[name])
                else:
                    label.add(tok)
            labels.append(label)
        elif head == "edge":
            if len(args) != 2:
                raise ModelFormatError("edge line needs exactly two states", lineno)
            pending_edges.append((lineno, args[0], args[1]))
        else:
            raise ModelFormatError(f"unknown directive {head!r}", lineno)
    for lineno, a, b in pending_edges:
        for x in (a, b):
            if x not in index:
                raise ModelFormatError(f"edge refers to unknown state {x}", lineno)
        edges.append((index[a], index[b]))
    return KripkeStructure(names, initial, edges, labels, props)


def load_model(path) -> KripkeStructure:
    return parse_model(Path(path).read_text(encoding="utf-8"))


def dump_model(m: KripkeStructure) -> str:
    lines = ["props " + " ".join(m.props) if m.props else "props"]
    for i, name in enumerate(m.names):
        toks = ["state", name]
        if m.initial >> i & 1:
            toks.append("init")
        toks.extend(p for p in m.props if p in m.labels[i])
        toks.extend(sorted(m.labels[i] - set(m.props)))
        lines.append(" ".join(toks))
    for a, targets in enumerate(m.succ):
        for b in targets:
            lines.append(f"edge {m.names[a]} {m.names[b]}")
    return "\n".join(lines) + "\n"
