import logging
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stratest.core import ActionAlphabet, PlaySequence
from stratest.ingest import format_sequence, load_dataset, parse_sequence_file

K3 = ActionAlphabet.of_size(3)
DATA = Path(__file__).parent / "data"


class TestParse:
    def test_commas(self):
        assert parse_sequence_file("0,1,2,0", K3).items == (0, 1, 2, 0)

    def test_newlines(self):
        assert parse_sequence_file("0\n1\n2", K3).items == (0, 1, 2)

    def test_mixed_and_whitespace(self):
        assert parse_sequence_file(" 0, 1\r\n2 ,\n\n1,", K3).items == (0, 1, 2, 1)

    def test_byte_order_mark(self):
        assert parse_sequence_file("\ufeff2,1", K3).items == (2, 1)

    def test_out_of_range(self):
        with pytest.raises(ValueError, match="value 3 out of range at position 2"):
            parse_sequence_file("0,3,1", K3)

    def test_not_an_integer(self):
        with pytest.raises(ValueError, match="position 3"):
            parse_sequence_file("0,1,rock", K3)

    def test_empty(self):
        assert parse_sequence_file("", K3).items == ()

    @given(st.lists(st.integers(0, 2), max_size=100))
    def test_round_trip(self, items):
        seq = PlaySequence(K3, items)
        assert parse_sequence_file(format_sequence(seq), K3) == seq
        assert parse_sequence_file(format_sequence(seq).replace(",", "\n"), K3) == seq


class TestLoadDataset:
    def test_fixture_directory(self, caplog):
        with caplog.at_level(logging.WARNING):
            result = load_dataset(DATA / "mini_dataset")
        assert [r.subject_id for r in result.records] == ["s001", "s002", "s003"]
        assert all(r.sequence.n == 50 for r in result.records)
        assert len(result.failures) == 1
        assert result.failures[0][0] == "s004_bad"
        assert "not an integer" in result.failures[0][1]

    def test_deterministic(self):
        assert load_dataset(DATA / "mini_dataset").records == load_dataset(DATA / "mini_dataset").records

    def test_empty_directory_warns(self, caplog):
        with caplog.at_level(logging.WARNING):
            result = load_dataset(DATA / "empty")
        assert len(result) == 0
        assert "no CSV files" in caplog.text

    def test_missing_directory(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_dataset(tmp_path / "nope")

    def test_length_warning(self, tmp_path, caplog):
        (tmp_path / "short.csv").write_text("0,1,2")
        with caplog.at_level(logging.WARNING):
            result = load_dataset(tmp_path)
        assert result.records[0].sequence.n == 3
        assert "reference length" in caplog.text

    def test_recursive(self, tmp_path):
        (tmp_path / "group").mkdir()
        (tmp_path / "group" / "a.csv").write_text("0,1")
        (tmp_path / "b.csv").write_text("2,2")
        assert [r.subject_id for r in load_dataset(tmp_path).records] == ["b"]
        assert [r.subject_id for r in load_dataset(tmp_path, recursive=True).records] == ["b", "group/a"]

    def test_non_utf8_file_is_a_failure(self, tmp_path):
        (tmp_path / "bad.csv").write_bytes(b"\xff\xfe\x00\x81")
        (tmp_path / "ok.csv").write_text("0,1")
        result = load_dataset(tmp_path)
        assert [r.subject_id for r in result.records] == ["ok"]
        assert [f[0] for f in result.failures] == ["bad"]
