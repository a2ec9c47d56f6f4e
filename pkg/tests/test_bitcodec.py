import json

import pytest
from hypothesis import given, strategies as st

from pcgen.bitcodec import (
    CodeTable,
    CodeTableError,
    concat,
    decode_formula_prefix,
    default_code_table,
    from_int,
    is_prefix,
    length_lex_words,
    lex_words,
    load_code_table,
    table_to_bits,
    bits_to_table,
    var_pattern,
)

bits = st.text(alphabet="01", max_size=24)


@pytest.mark.parametrize("u,v,out", [("", "101", "101"), ("10", "01", "1001"),
                                     ("1000", "11111", "100011111")])
def test_concat(u, v, out):
    assert concat(u, v) == out


@pytest.mark.parametrize("w,x,out", [("", "101", True), ("10", "101", True), ("11", "101", False),
                                     ("1011", "101", False)])
def test_is_prefix(w, x, out):
    assert is_prefix(w, x) is out


def test_lex_words():
    assert list(lex_words(0)) == [""]
    assert list(lex_words(2)) == ["00", "01", "10", "11"]
    assert next(iter(lex_words(4))) == "0000"
    assert list(length_lex_words(2)) == ["", "0", "1", "00", "01", "10", "11"]


@pytest.mark.parametrize("c", range(0, 9))
def test_lex_words_distinct_sorted(c):
    words = list(lex_words(c))
    assert len(set(words)) == 2 ** c == len(words)
    assert words == sorted(words)


def test_non_bits_rejected():
    with pytest.raises(ValueError):
        concat("012", "1")


def test_from_int_range():
    assert from_int(5, 3) == "101"
    with pytest.raises(ValueError):
        from_int(8, 3)
    with pytest.raises(ValueError):
        from_int(-1, 3)


def test_decode_examples():
    code, u0 = decode_formula_prefix("000" + "10110", 16)
    assert code.template_id == "BEGINS_WITH_1" and u0 == "10110"
    assert decode_formula_prefix("111111", 16) is None
    assert decode_formula_prefix("", 16) is None
    code, u0 = decode_formula_prefix("010" + "101" + "11", 16)
    assert (code.template_id, code.params, u0) == ("BIT_J_IS_1", "101", "11")


def test_decode_respects_length_bound():
    assert decode_formula_prefix("0101011", 5) is None
    assert decode_formula_prefix("0101011", 6) is not None
    # a codeword without its full parameter field does not decode
    assert decode_formula_prefix("01101", 16) is None


def test_decode_unique_exhaustive():
    table = default_code_table()
    for u in length_lex_words(16):
        matches = [e for e in table.entries if u.startswith(e.code) and len(u) >= e.length]
        hit = decode_formula_prefix(u, 64, table)
        assert len(matches) <= 1
        assert (hit is None) == (not matches)


@given(st.sampled_from(default_code_table().entries), st.data(), bits)
def test_encode_decode_round_trip(entry, data, tail):
    params = data.draw(st.text(alphabet="01", min_size=entry.param_bits, max_size=entry.param_bits))
    table = default_code_table()
    enc = table.encode(entry.id, params)
    code, u0 = decode_formula_prefix(enc + tail, 64, table)
    assert (code.template_id, code.params, u0) == (entry.id, params, tail)


@given(bits, bits)
def test_prefix_of_concat(u, v):
    assert is_prefix(u, concat(u, v))


def test_table_rejects_non_prefix_free(tmp_path):
    doc = {"templates": [{"id": "A", "code": "01", "param_bits": 0},
                         {"id": "B", "code": "011", "param_bits": 1}]}
    with pytest.raises(CodeTableError, match="'01'.*'011'"):
        CodeTable.from_dict(doc)
    doc = {"templates": [{"id": "A", "code": "10", "param_bits": 0}], "reserved": ["10"]}
    with pytest.raises(CodeTableError):
        CodeTable.from_dict(doc)


def test_table_json_round_trip(tmp_path):
    table = default_code_table()
    path = tmp_path / "t.json"
    path.write_text(json.dumps(table.to_dict()))
    assert load_code_table(path) == table


def test_truth_table_bits():
    assert table_to_bits(var_pattern(0, 2), 2) == "0011"
    assert table_to_bits(var_pattern(1, 2), 2) == "0101"
    assert bits_to_table("0110") == var_pattern(0, 2) ^ var_pattern(1, 2)
