import random

import pytest

from robustmc.checker_rctl import (
    TEMPORAL_ROWS, InvalidModelError, SatTable, TableInvariantError, check,
    compute_sat, state_value,
)
from robustmc.formula import FragmentError, parse, to_text
from robustmc.kripke import KripkeStructure, mask_of, random_structure
from robustmc.truth import FALSE, NONZERO, TRUE, V0001, V0011, VALUES
from formula_gen import random_rctl

S0, S1, S2 = 1, 2, 4


def val(m, text, state="s0"):
    f = parse(text)
    return state_value(compute_sat(m, f), f, state)


def test_example_values(example):
    assert str(val(example, "A G p")) == "0001"
    assert str(val(example, "A G q")) == "0001"
    assert str(val(example, "A G p -> A G q")) == "1111"
    assert val(example, "p", "s2") == FALSE
    f = parse("A G p")
    table = compute_sat(example, f)
    assert table.sat(f, V0001) & S0 and not table.sat(f, V0011) & S0
    assert [str(v) for v in table.values(f)] == ["0001", "1111", "0000"]


def test_exists_always(example):
    f = parse("E G p")
    assert compute_sat(example, f).sat(f, TRUE) == S0 | S1


def test_atoms_are_two_valued():
    for seed in range(10):
        m = random_structure(4, 0.5, 2, seed)
        f = parse("p")
        row = compute_sat(m, f).row(f)
        assert row[1] == row[2] == row[3] == row[4] == m.label_mask("p")


def test_check_verdicts(example):
    v = check(example, parse("A G p -> A G q"), TRUE)
    assert v.holds and v.failing == ()
    v = check(example, parse("A G p"), V0011)
    assert not v.holds and v.failing == ("s0",)
    rng = random.Random(0)
    for _ in range(20):
        assert check(example, random_rctl(rng, 8), FALSE).holds


def test_table_covers_all_subformulas_and_values(example):
    f = parse("A G p -> A G q")
    table = compute_sat(example, f)
    assert len(table.formulas) == 5 and len(table.rows) == 5
    for row in table.rows:
        assert len(row) == 5 and row[0] == example.all


def test_table_rows_cover_every_temporal_value():
    for op, rows in TEMPORAL_ROWS.items():
        assert set(rows) == set(NONZERO), op


def test_rejects_non_rctl_and_invalid_models(example):
    with pytest.raises(FragmentError):
        compute_sat(example, parse("A (G p -> G q)"))
    broken = KripkeStructure(["a", "b"], [0], [(0, 1)], [set(), set()])
    with pytest.raises(InvalidModelError):
        compute_sat(broken, parse("A G p"))


def test_antitone_invariant_is_enforced(example):
    t = SatTable(example)
    with pytest.raises(TableInvariantError):
        t.add(parse("p"), (example.all, S0, S0 | S1, S0, 0))
    with pytest.raises(TableInvariantError):
        t.add(parse("p"), (S0, S0, S0, S0, S0))


def test_expansion_law():
    rng = random.Random(4)
    for seed in range(60):
        m = random_structure(rng.randint(1, 6), rng.random(), 2, seed)
        inner = random_rctl(rng, 5)
        f = parse(f"E F ({to_text(inner)})")
        table = compute_sat(m, f)
        for b in VALUES:
            s = table.sat(f, b)
            assert s == table.sat(inner, b) | m.pre_exists(s)


def test_semantic_identities():
    # A X / E X duality and the reduction of eventually to until
    rng = random.Random(9)
    for seed in range(60):
        m = random_structure(rng.randint(1, 6), rng.random(), 2, seed)
        a = to_text(random_rctl(rng, 4))
        checks = [
            (f"E F ({a})", f"E (true U ({a}))"),
            (f"A F ({a})", f"A (true U ({a}))"),
            (f"E G ({a})", f"E (({a}) W false)"),
            (f"A G ({a})", f"A (({a}) W false)"),
        ]
        for left, right in checks:
            fl, fr = parse(left), parse(right)
            assert compute_sat(m, fl).values(fl) == compute_sat(m, fr).values(fr), left


def test_debug_mode_runs_clean():
    rng = random.Random(1)
    for seed in range(30):
        m = random_structure(4, 0.5, 2, seed)
        f = random_rctl(rng, 10)
        assert compute_sat(m, f, debug=True) == compute_sat(m, f)


def test_first_bit_is_classical_ctl():
    # first bit of the robust value = classical CTL truth, implication-free
    from robustmc.oracle import ctl_sat
    rng = random.Random(21)
    for seed in range(80):
        m = random_structure(rng.randint(1, 5), rng.random(), 2, seed)
        f = random_rctl(rng, 10, implications=False)
        got = compute_sat(m, f).sat(f, TRUE)
        assert got == mask_of(ctl_sat(m, f)), to_text(f)
