import itertools
import random

import pytest
from hypothesis import given, strategies as st

from pcgen.bitcodec import lex_words
from pcgen.circuits import (
    Budget,
    Circuit,
    budget,
    count_circuits,
    count_up_to,
    enumerate_circuits,
    enumerate_tables,
    fits,
    synthesize_tt,
    tt,
)


def test_tt_examples():
    zero = Circuit(2, (("NOT", 0, None), ("AND", 0, 2)), 3)
    assert tt(zero) == "0000"
    assert tt(Circuit(1, (), 0)) == "01"
    xor = Circuit(2, (("OR", 0, 1), ("AND", 0, 1), ("NOT", 3, None), ("AND", 2, 4)), 5)
    assert tt(xor) == "0110"


def test_tt_agrees_with_evaluate():
    d = Circuit(3, (("AND", 0, 1), ("NOT", 2, None), ("OR", 3, 4)), 5)
    table = tt(d)
    for i, bits in enumerate(itertools.product((0, 1), repeat=3)):
        assert table[i] == "01"[d.evaluate(bits)]


def test_tt_refuses_large_k():
    with pytest.raises(ValueError):
        tt(Circuit(25, (), 0))


def test_acyclicity_enforced():
    with pytest.raises(ValueError):
        Circuit(2, (("AND", 0, 2),), 2)
    with pytest.raises(ValueError):
        Circuit(1, (("XOR", 0, 0),), 1)
    with pytest.raises(ValueError):
        Circuit(0, (), 0)


def test_budget_examples():
    assert budget(256) == Budget(24, 512)
    assert budget(16) == Budget(8, 16)
    assert budget(4) == Budget(2, 2)
    with pytest.raises(ValueError):
        budget(3)


def test_budget_monotone():
    prev = budget(4)
    for n in range(5, 5000):
        b = budget(n)
        assert b.k_max >= prev.k_max and b.size_max >= prev.size_max
        prev = b


def _independent_count(k, size_max):
    """Count canonical gate lists by brute force over all operand tuples."""
    total = k
    for s in range(1, size_max + 1):
        per = []
        for i in range(s):
            m = k + i
            per.append(sum(1 for op in ("NOT", "AND", "OR") for a in range(m) for b in range(m)
                           if (op == "NOT" and a == b) or (op != "NOT" and a < b)))
        prod = 1
        for p in per:
            prod *= p
        total += prod
    return total


@pytest.mark.parametrize("k,s", [(1, 1), (1, 2), (2, 2), (3, 2), (2, 3)])
def test_count_closed_form(k, s):
    stream = list(enumerate_circuits(Budget(k, s), k))
    assert len(stream) == count_up_to(k, s) == _independent_count(k, s)
    assert len({(d.gates, d.output) for d in stream}) == len(stream)


def test_k1_size2_catalog():
    # x0; NOT x0; then NOT x0 followed by NOT x0, NOT g0, AND x0 g0, OR x0 g0
    texts = [d.to_text() for d in enumerate_circuits(Budget(1, 2), 1)]
    assert len(texts) == 6
    assert [tt(d) for d in enumerate_circuits(Budget(1, 2), 1)] == ["01", "10", "10", "01", "00", "11"]
    assert count_circuits(1, 1) == 1 and count_circuits(1, 2) == 4


def test_k1_size1_contains_not():
    stream = list(enumerate_circuits(Budget(1, 1), 1))
    assert Circuit(1, (("NOT", 0, None),), 1) in stream


def test_canonical_order():
    stream = list(enumerate_circuits(Budget(2, 2), 2))
    keys = [(d.size, d.gates) for d in stream]
    sizes = [d.size for d in stream]
    assert sizes == sorted(sizes)
    ops = {"NOT": 0, "AND": 1, "OR": 2}
    for s in (1, 2):
        lists = [[(ops[g[0]], g[1], g[2] or 0) for g in gates] for size, gates in keys if size == s]
        assert lists == sorted(lists)


def test_enumerate_preconditions():
    with pytest.raises(ValueError):
        list(enumerate_circuits(Budget(2, 1), 0))
    with pytest.raises(ValueError):
        list(enumerate_circuits(Budget(2, 1), 3))


def test_fast_tables_match_circuits():
    for (gates, table), d in zip(enumerate_tables(2, 2), enumerate_circuits(Budget(2, 2), 2)):
        assert gates == d.gates and table == d.table()


def test_synthesize_examples():
    assert tt(synthesize_tt("0000")) == "0000" and synthesize_tt("0000").k == 2
    d = synthesize_tt("01")
    assert d.size == 0 and d.output == 0
    assert tt(synthesize_tt("0110")) == "0110"
    with pytest.raises(ValueError):
        synthesize_tt("011")


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_synthesize_exhaustive(k):
    for target in lex_words(2 ** k):
        assert tt(synthesize_tt(target)) == target


def test_synthesize_random_large():
    rng = random.Random(3)
    for k in (6, 8, 10):
        target = "".join(rng.choice("01") for _ in range(2 ** k))
        d = synthesize_tt(target)
        assert tt(d) == target
        assert not fits(d, Budget(k, 4))


@given(st.integers(1, 4), st.data())
def test_text_round_trip(k, data):
    gates = []
    for i in range(data.draw(st.integers(0, 5))):
        m = k + i
        op = data.draw(st.sampled_from(["NOT", "AND", "OR"]))
        if op == "NOT":
            gates.append((op, data.draw(st.integers(0, m - 1)), None))
        else:
            a, b = sorted(data.draw(st.lists(st.integers(0, m - 1), min_size=2, max_size=2)))
            gates.append((op, a, b))
    d = Circuit(k, tuple(gates), data.draw(st.integers(0, k + len(gates) - 1)))
    assert Circuit.from_text(d.to_text()) == d
    assert "= " in d.to_text() or not gates
