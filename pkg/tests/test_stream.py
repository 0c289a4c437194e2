import numpy as np
import pytest

from conftest import logit_frames
from modules.alphabet import AlphabetConfig
from modules.pipeline import RawScoreFrame
from modules.stream import (
    ManifestEntry,
    StreamFormatError,
    read_manifest,
    read_matrix,
    read_stream,
    write_manifest,
    write_matrix,
    write_stream,
)


def test_stream_file(tmp_path, alphabet):
    frames = logit_frames([12, 10, 3, 11], alphabet)
    path = write_stream(frames, str(tmp_path / "s" / "one.csv"), alphabet)
    lines = open(path, encoding="utf-8").read().splitlines()
    assert lines[0].split(",") == alphabet.class_names()
    assert lines[3].split(",")[3] == "5.0"
    loaded = read_stream(path)
    assert [f.timestamp for f in loaded] == [0, 1, 2, 3]
    np.testing.assert_array_equal(loaded[2].scores, frames[2].scores)


def test_stream_infers_alphabet(tmp_path):
    alphabet = AlphabetConfig(4)
    path = write_stream(logit_frames([0, 5], alphabet), str(tmp_path / "a.csv"), alphabet)
    assert read_stream(path)[0].scores.shape == (7,)
    with pytest.raises(StreamFormatError):
        read_stream(path, AlphabetConfig(10))


def test_stream_bad_rows(tmp_path, alphabet):
    header = ",".join(alphabet.class_names())
    short = tmp_path / "short.csv"
    short.write_text(header + "\n" + ",".join(["0"] * 12) + "\n", encoding="utf-8")
    with pytest.raises(StreamFormatError) as info:
        read_stream(str(short), alphabet)
    assert info.value.line == 2
    text = tmp_path / "text.csv"
    text.write_text(header + "\n" + ",".join(["0"] * 12 + ["x"]) + "\n", encoding="utf-8")
    with pytest.raises(StreamFormatError):
        read_stream(str(text), alphabet)
    empty = tmp_path / "empty.csv"
    empty.write_text("", encoding="utf-8")
    with pytest.raises(StreamFormatError):
        read_stream(str(empty))


def test_stream_keeps_full_precision(tmp_path, rng, alphabet):
    logits = rng.normal(size=(20, alphabet.num_classes)) * 3.0
    frames = [RawScoreFrame(row, t) for t, row in enumerate(logits)]
    path = write_stream(frames, str(tmp_path / "noisy.csv"), alphabet)
    loaded = read_stream(path, alphabet)
    np.testing.assert_array_equal(np.array([f.scores for f in loaded]), logits)


def test_stream_skips_empty_lines(tmp_path, alphabet):
    header = ",".join(alphabet.class_names())
    row = ",".join(["0.0"] * 12 + ["5.0"])
    path = tmp_path / "gaps.csv"
    path.write_text("\n".join([header, row, "", row, row, ""]) + "\n", encoding="utf-8")
    loaded = read_stream(str(path), alphabet)
    assert [f.timestamp for f in loaded] == [0, 1, 2]
    path.write_text("\n".join([header, row, "", "x"]) + "\n", encoding="utf-8")
    with pytest.raises(StreamFormatError) as info:
        read_stream(str(path), alphabet)
    assert info.value.line == 4


def test_stream_corrupt_bytes(tmp_path, alphabet):
    binary = tmp_path / "binary.csv"
    binary.write_bytes(b"\xff\xfe\x00garbage")
    with pytest.raises(StreamFormatError) as info:
        read_stream(str(binary), alphabet)
    assert str(binary) in str(info.value)
    header = ",".join(alphabet.class_names()).encode("utf-8")
    nul = tmp_path / "nul.csv"
    nul.write_bytes(header + b"\n" + b",".join([b"0.0"] * 12 + [b"5\x000"]) + b"\n")
    with pytest.raises(StreamFormatError):
        read_stream(str(nul), alphabet)
    with pytest.raises(StreamFormatError):
        read_matrix(str(binary))


def test_matrix_file(tmp_path):
    P = np.array([[0.0, 1.0], [0.25, 0.75], [1.0 / 3, 2.0 / 3]])
    path = write_matrix(P, str(tmp_path / "m.csv"))
    np.testing.assert_array_equal(read_matrix(path).data, P)


def test_matrix_comments_and_errors(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("# columns\n0.5,0.5\n\n0.2,0.2\n", encoding="utf-8")
    with pytest.raises(StreamFormatError) as info:
        read_matrix(str(path))
    assert info.value.line == 4
    path.write_text("0.5,0.5\n0.2,0.3,0.5\n", encoding="utf-8")
    with pytest.raises(StreamFormatError):
        read_matrix(str(path))
    path.write_text("# nothing\n", encoding="utf-8")
    with pytest.raises(StreamFormatError):
        read_matrix(str(path))


def test_manifest(tmp_path):
    entries = [
        ManifestEntry("streams/a.csv", [5, 1, 3], "slow", 11),
        ManifestEntry("streams/b.csv", [0, 1, 0], "fast", 12),
    ]
    path = write_manifest(entries, str(tmp_path / "manifest.jsonl"))
    assert '"tuple": "5-1-3"' in open(path, encoding="utf-8").readline()
    loaded = read_manifest(path)
    assert loaded == entries
    assert loaded[0].path == "streams/a.csv"
    assert loaded[0].resolve(str(tmp_path)) == str(tmp_path / "streams" / "a.csv")
    absolute = ManifestEntry(str(tmp_path / "x.csv"), [1, 2], "fast", 3)
    assert absolute.resolve("/elsewhere") == str(tmp_path / "x.csv")
    assert loaded[1].ground_truth == [0, 1, 0]
    assert (loaded[1].speed, loaded[1].seed) == ("fast", 12)


def test_manifest_bad_record(tmp_path):
    path = tmp_path / "manifest.jsonl"
    path.write_text('{"path": "a.csv", "tuple": "1-1", "speed": "slow", "seed": 0}\n')
    with pytest.raises(StreamFormatError):
        read_manifest(str(path))
    path.write_text('{"path": "a.csv"}\n')
    with pytest.raises(StreamFormatError):
        read_manifest(str(path))
