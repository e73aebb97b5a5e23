# -*- coding: utf-8 -*-
import json
import logging

import pytest

from conftest import DATASET_DIR
from ptree.main import EXIT_INPUT, EXIT_OK, EXIT_USAGE, create_parser, main
from ptree.models.bands import BandGrid
from ptree.services.storage import write_band
from ptree.services.tables import read_calls


def _count(capsys, trees, *query):
    capsys.readouterr()
    assert main(["count", "--trees", str(trees), *query]) == EXIT_OK
    return int(capsys.readouterr().out.strip())


@pytest.fixture
def example_trees(tmp_path):
    image = tmp_path / "band1.csv"
    image.write_text("254,127\n14,193\n", encoding="utf-8")
    assert main(["encode", "--image", str(image), "--band", "1", "--out", str(tmp_path / "bsq")]) == EXIT_OK
    assert main(["build", "--bsq", str(tmp_path / "bsq"), "--out", str(tmp_path / "trees")]) == EXIT_OK
    return tmp_path / "trees"


def test_encode_writes_eight_planes(example_trees, tmp_path):
    names = sorted(path.name for path in (tmp_path / "bsq").iterdir())
    assert names == [f"band1_bit{k}.bsq" for k in range(1, 9)]
    assert (tmp_path / "bsq" / "band1_bit1.bsq").read_bytes()[12:] == bytes([0b10010000])


def test_build_writes_trees_and_extent(example_trees):
    names = sorted(path.name for path in example_trees.iterdir())
    assert names == sorted([f"band1_bit{k}.pt" for k in range(1, 9)] + ["band1_extent.pt"])


def test_count_queries(example_trees, capsys):
    assert _count(capsys, example_trees, "--band", "1", "--value", "3", "--precision", "2") == 2
    assert _count(capsys, example_trees, "--band", "1", "--value", "1", "--precision", "1") == 2
    assert _count(capsys, example_trees, "--band", "1", "--value", "254", "--precision", "8") == 1
    assert _count(capsys, example_trees, "--band", "1", "--ge", "128", "--precision", "8") == 2
    assert _count(capsys, example_trees, "--band", "1", "--ge", "14", "--le", "193", "--precision", "8") == 3


def test_count_matches_pixel_scan_on_random_images(tmp_path, capsys, rng):
    checks = 0
    for index in range(25):
        width, height = (int(v) for v in rng.integers(1, 20, size=2))
        values = rng.integers(0, 256, size=(height, width))
        image = write_band(BandGrid(3, values), tmp_path / f"image{index}.pgm")
        bsq_dir, tree_dir = tmp_path / f"bsq{index}", tmp_path / f"trees{index}"
        assert main(["encode", "--image", str(image), "--band", "3", "--out", str(bsq_dir)]) == EXIT_OK
        assert main(["build", "--bsq", str(bsq_dir), "--out", str(tree_dir)]) == EXIT_OK
        for _ in range(4):
            k = int(rng.integers(1, 9))
            v = int(rng.integers(0, 2 ** k))
            top = values >> (8 - k)
            if rng.random() < 0.5:
                expected = int((top == v).sum())
                query = ["--value", str(v)]
            else:
                expected = int((top >= v).sum())
                query = ["--ge", str(v)]
            assert _count(capsys, tree_dir, "--band", "3", *query, "--precision", str(k)) == expected
            checks += 1
    assert checks == 100


def _pipeline(out_dir, workers):
    config = str(DATASET_DIR / "pipeline.env")
    for experiment in range(1, 5):
        for channel, band in (("red", "red"), ("green", "green")):
            image = DATASET_DIR / f"exp{experiment}_{channel}.csv"
            bsq_dir = out_dir / f"exp{experiment}_{channel}" / "bsq"
            assert main(["encode", "--image", str(image), "--band", band, "--out", str(bsq_dir)]) == EXIT_OK
            assert main([
                "--workers", str(workers), "build", "--bsq", str(bsq_dir), "--out", str(bsq_dir.parent / "trees"),
            ]) == EXIT_OK
    calls = out_dir / "calls.tsv"
    assert main([
        "--config", config, "--workers", str(workers),
        "call", "--out", str(calls), "--trees-out", str(out_dir / "ep_rp"),
    ]) == EXIT_OK
    assert main([
        "--config", config, "--workers", str(workers),
        "mine", "--calls", str(calls), "--minconf", "0.6", "--out", str(out_dir / "rules.tsv"),
    ]) == EXIT_OK
    assert main([
        "--config", config, "--workers", str(workers),
        "mine", "--calls", str(calls), "--minconf", "0.6", "--format", "json", "--out", str(out_dir / "rules.json"),
    ]) == EXIT_OK


def _snapshot(root):
    return {
        path.relative_to(root).as_posix(): path.read_bytes()
        for path in sorted(root.rglob("*"))
        if path.is_file()
    }


def test_end_to_end_is_reproducible_across_runs_and_workers(tmp_path):
    _pipeline(tmp_path / "first", workers=1)
    _pipeline(tmp_path / "second", workers=1)
    _pipeline(tmp_path / "threaded", workers=4)

    first = _snapshot(tmp_path / "first")
    assert first == _snapshot(tmp_path / "second")
    assert first == _snapshot(tmp_path / "threaded")

    calls = read_calls(tmp_path / "first" / "calls.tsv")
    assert len(calls) == 4 * 16
    assert [call.experiment_id for call in calls[::16]] == ["E1", "E2", "E3", "E4"]
    assert "E1_ep.pt" in {path.name for path in (tmp_path / "first" / "ep_rp").iterdir()}

    lines = first["rules.tsv"].decode("utf-8").splitlines()
    assert lines[0] == "antecedent\tconsequent\tsupport\tconfidence"
    rules = json.loads(first["rules.json"])
    assert len(rules) == len(lines) - 1
    for rule, line in zip(rules, lines[1:]):
        antecedent, consequent, support, confidence = line.split("\t")
        assert "+".join(rule["antecedent"]) == antecedent
        assert "+".join(rule["consequent"]) == consequent
        assert float(support) >= 0.5
        assert float(confidence) >= 0.6


def test_mine_output_is_byte_identical_and_top_limits(tmp_path):
    calls = tmp_path / "calls.tsv"
    calls.write_text(
        "experiment_id\tgene_id\tstate\n"
        "T1\tA\t1\nT1\tB\t1\nT1\tC\t0\n"
        "T2\tA\t1\nT2\tB\t1\nT2\tC\t1\n"
        "T3\tA\t1\nT3\tB\t0\nT3\tC\t1\n"
        "T4\tA\t0\nT4\tB\t1\nT4\tC\t0\n",
        encoding="utf-8",
    )
    args = ["mine", "--calls", str(calls), "--minsup", "0.5", "--minconf", "0.6"]
    assert main(args + ["--out", str(tmp_path / "a.tsv")]) == EXIT_OK
    assert main(args + ["--out", str(tmp_path / "b.tsv")]) == EXIT_OK
    first = (tmp_path / "a.tsv").read_bytes()
    assert first == (tmp_path / "b.tsv").read_bytes()
    assert first.decode("utf-8").splitlines() == [
        "antecedent\tconsequent\tsupport\tconfidence",
        "C:expressed\tA:expressed\t0.500000\t1.000000",
        "A:expressed\tB:expressed\t0.500000\t0.666667",
        "A:expressed\tC:expressed\t0.500000\t0.666667",
        "B:expressed\tA:expressed\t0.500000\t0.666667",
    ]
    assert main(args + ["--top", "1", "--out", str(tmp_path / "top.tsv")]) == EXIT_OK
    assert len((tmp_path / "top.tsv").read_text(encoding="utf-8").splitlines()) == 2


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["count", "--trees", "t", "--band", "1", "--value", "1", "--le", "3", "--precision", "2"],
        ["count", "--trees", "t", "--band", "1", "--value", "1", "--precision", "9"],
        ["count", "--trees", "t", "--band", "1", "--value", "1", "--ge", "1", "--precision", "2"],
        ["mine", "--calls", "c.tsv", "--minsup", "1.5", "--out", "r.tsv"],
        ["mine", "--calls", "c.tsv", "--mode", "sideways", "--out", "r.tsv"],
        ["encode", "--image", "i.csv", "--band", "blue", "--out", "o"],
        ["mine", "--calls", "c.tsv"],
    ],
)
def test_usage_errors_exit_with_two(argv):
    assert main(argv) == EXIT_USAGE


def test_truncated_bsq_exits_with_one_and_names_file(example_trees, tmp_path, caplog):
    broken = tmp_path / "bsq" / "band1_bit3.bsq"
    broken.write_bytes(broken.read_bytes()[:-1])
    with caplog.at_level(logging.ERROR):
        assert main(["build", "--bsq", str(tmp_path / "bsq"), "--out", str(tmp_path / "rebuilt")]) == EXIT_INPUT
    assert str(broken) in caplog.text
    assert "byte 12" in caplog.text


def test_missing_trees_exit_with_one(tmp_path, caplog):
    with caplog.at_level(logging.ERROR):
        code = main(["count", "--trees", str(tmp_path), "--band", "4", "--value", "0", "--precision", "1"])
    assert code == EXIT_INPUT
    assert "band 4" in caplog.text


@pytest.mark.parametrize(
    "content, message",
    [
        (b"\xff\xfe1,2\n", "byte 0"),
        (b"1,2\n99999999999999999999999,1\n", "Line 2"),
        (b"1,-1\n", "Line 1"),
    ],
)
def test_malformed_csv_band_exits_with_one(tmp_path, caplog, content, message):
    image = tmp_path / "band.csv"
    image.write_bytes(content)
    with caplog.at_level(logging.ERROR):
        code = main(["encode", "--image", str(image), "--band", "1", "--out", str(tmp_path / "bsq")])
    assert code == EXIT_INPUT
    assert message in caplog.text


def test_undecodable_spot_map_exits_with_one(tmp_path, caplog):
    spots = tmp_path / "spots.tsv"
    spots.write_bytes(b"gene_id\tx0\ty0\tx1\ty1\tgroup\treference\n\xffa\t0\t0\t0\t0\tX\t0\n")
    args = [
        "call", "--manifest", str(DATASET_DIR / "manifest.tsv"), "--spots", str(spots),
        "--out", str(tmp_path / "calls.tsv"),
    ]
    with caplog.at_level(logging.ERROR):
        assert main(args) == EXIT_INPUT
    assert "byte 36" in caplog.text


def test_undecodable_manifest_exits_with_one(tmp_path, caplog):
    manifest = tmp_path / "manifest.json"
    manifest.write_bytes(b'[{"experiment_id": "\xc3("}]')
    args = [
        "call", "--manifest", str(manifest), "--spots", str(DATASET_DIR / "spots.tsv"),
        "--out", str(tmp_path / "calls.tsv"),
    ]
    with caplog.at_level(logging.ERROR):
        assert main(args) == EXIT_INPUT
    assert "byte 20" in caplog.text


def test_invalid_config_exits_with_one(tmp_path, caplog):
    config = tmp_path / "bad.env"
    config.write_text("MINSUP=3\n", encoding="utf-8")
    with caplog.at_level(logging.ERROR):
        assert main(["--config", str(config), "mine", "--calls", "c.tsv", "--out", "r.tsv"]) == EXIT_INPUT
    assert "minsup" in caplog.text


def test_log_file_receives_diagnostics(example_trees, tmp_path):
    log_file = tmp_path / "logs" / "run.log"
    assert main([
        "--log-level", "INFO", "--log-file", str(log_file),
        "build", "--bsq", str(tmp_path / "bsq"), "--out", str(tmp_path / "again"),
    ]) == EXIT_OK
    assert "Running build" in log_file.read_text(encoding="utf-8")


def test_parser_defaults():
    args = create_parser().parse_args(["mine", "--calls", "a.tsv", "b.tsv", "--out", "r.tsv"])
    assert [str(path) for path in args.calls] == ["a.tsv", "b.tsv"]
    assert args.format == "tsv"
    assert args.minsup is None


def test_out_defaults_to_output_dir(tmp_path):
    calls = tmp_path / "calls.tsv"
    calls.write_text("experiment_id\tgene_id\tstate\nT1\tA\t1\nT2\tA\t1\n", encoding="utf-8")
    config = tmp_path / "run.env"
    config.write_text("OUTPUT_DIR=results\nMINSUP=0.5\n", encoding="utf-8")
    assert main(["--config", str(config), "mine", "--calls", str(calls), "--format", "json"]) == EXIT_OK
    assert json.loads((tmp_path / "results" / "rules.json").read_text(encoding="utf-8")) == []

