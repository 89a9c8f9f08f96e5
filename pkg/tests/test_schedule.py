import pytest
from hypothesis import given
from hypothesis import strategies as st

from swsc.simulator.schedule import PAD, BlockSchedule


def expected_rows(k, b):
    """Hand-built X rows: layer X_q carries m1(j - (k - q)) in block j."""
    rows = {}
    for q in range(1, k + 1):
        cells = []
        for j in range(1, b + 1):
            i = j - (k - q)
            cells.append(f"m1({i})" if 1 <= i <= b - k + 1 else PAD)
        rows[f"X{q}"] = cells
    return rows


@pytest.mark.parametrize("k,b", [(2, 4), (2, 7), (3, 5), (3, 9)])
def test_block_table_patterns(k, b):
    rows = BlockSchedule.for_split(k, 1, b).rows()
    want = expected_rows(k, b)
    for z, cells in want.items():
        assert rows[z] == cells
    assert rows["W"] == [f"m2({j})" for j in range(1, b + 1)]
    # the top layer starts with the message, the bottom one with pads
    assert rows["X1"][: k - 1] == [PAD] * (k - 1)
    assert rows[f"X{k}"][-(k - 1):] == [PAD] * (k - 1)


def test_two_one_dump_text():
    text = BlockSchedule.for_split(2, 1, 4).dump()
    lines = text.splitlines()
    assert lines[0].split() == ["block", "1", "2", "3", "4"]
    assert lines[1].split() == ["X1", "1", "m1(1)", "m1(2)", "m1(3)"]
    assert lines[2].split() == ["X2", "m1(1)", "m1(2)", "m1(3)", "1"]
    assert lines[3].split() == ["W", "m2(1)", "m2(2)", "m2(3)", "m2(4)"]
    assert text.endswith("\n") and "\r" not in text


@given(k=st.integers(1, 4), l=st.integers(1, 4), extra=st.integers(0, 8))
def test_every_message_fills_its_slots_once(k, l, extra):
    b = max(k, l) + extra
    s = BlockSchedule.for_split(k, l, b)
    counts = s.slot_counts()
    for name, size in (("m1", k), ("m2", l)):
        n = s.n_messages(name)
        assert n == b - size + 1
        assert all(counts[(name, i)] == size for i in range(1, n + 1))
        assert len([key for key in counts if key[0] == name]) == n
        for i in range(1, n + 1):
            assert [s.message_at(name, z, j) for j, z in s.blocks_of(name, i)] == [i] * size
    # every slot holds exactly one message or the pad
    rows = s.rows()
    assert len(rows) == k + l
    filled = sum(cell != PAD for cells in rows.values() for cell in cells)
    assert filled == k * s.n_messages("m1") + l * s.n_messages("m2")


def test_too_few_blocks():
    with pytest.raises(ValueError):
        BlockSchedule.for_split(3, 1, 2)
