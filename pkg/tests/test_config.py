# -*- coding: utf-8 -*-
import logging
import os
from pathlib import Path

import pytest

from conftest import DATASET_DIR
from ptree.utils.config import DEFAULT_MINCONF, PipelineConfig, load_pipeline_config
from ptree.utils.errors import ConfigError, FormatError, InputError, UnknownItemError
from ptree.utils.logger import ArtifactFormatter, setup_logging
from ptree.utils.validators import as_fraction, validate_band_label, validate_fraction, validate_precision


def test_defaults():
    config = load_pipeline_config()
    assert config == PipelineConfig()
    assert (config.rho, config.z, config.pseudocount) == (0.5, 2.0, 1.0)
    assert (config.minsup, config.minconf, config.mode) == (0.5, 0.7, "any")
    assert config.workers == 1
    assert config.max_itemset_size is None


def test_bundled_configuration_resolves_paths():
    config = load_pipeline_config(DATASET_DIR / "pipeline.env")
    assert config.spots == DATASET_DIR / "spots.tsv"
    assert config.manifest == DATASET_DIR / "manifest.tsv"
    assert config.minconf == DEFAULT_MINCONF


def test_configuration_ignores_process_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("MINSUP", "0.9")
    path = tmp_path / "run.env"
    path.write_text("# comment\nMINCONF=0.8\nMODE=XY\nWORKERS=3\nMAX_ITEMSET_SIZE=4\nLOG_LEVEL=debug\n", encoding="utf-8")
    config = load_pipeline_config(path)
    assert config.minsup == 0.5
    assert config.minconf == 0.8
    assert config.mode == "xy"
    assert config.workers == 3
    assert config.max_itemset_size == 4
    assert config.log_level == "DEBUG"


def test_unparsable_number_falls_back_to_default(tmp_path, caplog):
    path = tmp_path / "run.env"
    path.write_text("RHO=half\n", encoding="utf-8")
    with caplog.at_level(logging.WARNING):
        config = load_pipeline_config(path)
    assert config.rho == 0.5
    assert "RHO" in caplog.text


@pytest.mark.parametrize(
    "line",
    ["RHO=0", "Z=-1", "PSEUDOCOUNT=0", "MINCONF=1.5", "MODE=all", "WORKERS=0", "MAX_ITEMSET_SIZE=1", "LOG_LEVEL=LOUD"],
)
def test_out_of_range_values_are_rejected(tmp_path, line):
    path = tmp_path / "run.env"
    path.write_text(line + "\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_pipeline_config(path)


def test_missing_configuration_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_pipeline_config(tmp_path / "absent.env")


def test_override_ignores_none():
    config = PipelineConfig()
    assert config.override(rho=None, z=None) is config
    assert config.override(rho=0.25, mode=None).rho == 0.25


def test_validators():
    assert validate_fraction("0.25", "minsup") == 0.25
    assert validate_fraction(1, "minsup") == 1.0
    for bad in (0, 1.01, "nan", "x"):
        with pytest.raises(InputError):
            validate_fraction(bad, "minsup")
    assert validate_precision(8) == 8
    with pytest.raises(InputError):
        validate_precision(True)
    assert validate_band_label("red") == 1
    assert validate_band_label("Green") == 2
    assert validate_band_label("7") == 7
    with pytest.raises(InputError):
        validate_band_label("256")
    assert as_fraction(0.1) * 10 == 1


def test_error_messages():
    error = FormatError("Truncated bSQ header.", offset=3).with_path("planes/band1_bit1.bsq")
    assert str(error) == "planes/band1_bit1.bsq, byte 3: Truncated bSQ header."
    assert str(FormatError("bad")) == "bad"
    assert isinstance(error, ValueError)
    assert str(UnknownItemError("Item a:expressed is not in the matrix.")) == "Item a:expressed is not in the matrix."


def test_formatter_relativizes_paths_under_cwd():
    absolute = str(Path(os.getcwd()) / "trees" / "band1_bit1.pt")
    record = logging.LogRecord("ptree", logging.ERROR, "/somewhere/else/module.py", 10,
                               "Cannot read %s", (absolute,), None)
    formatted = ArtifactFormatter("%(levelname)s - %(pathname)s - %(message)s").format(record)
    assert formatted == "ERROR - module.py - Cannot read trees/band1_bit1.pt"
    assert record.args == (absolute,)


def test_formatter_keeps_numbers_and_foreign_paths():
    record = logging.LogRecord("ptree", logging.INFO, __file__, 1, "%d pixels in /nonexistent/x.pgm", (5,), None)
    assert ArtifactFormatter("%(message)s").format(record) == "5 pixels in /nonexistent/x.pgm"


def test_setup_logging_is_idempotent(tmp_path):
    root = logging.getLogger()
    logger = setup_logging("INFO", tmp_path / "one.log")
    handlers = len(root.handlers)
    setup_logging("DEBUG", tmp_path / "two.log")
    assert len(root.handlers) == handlers
    assert root.level == logging.DEBUG
    assert logger.name == "ptree"
    logger.info("hello")
    setup_logging()
    assert "hello" in (tmp_path / "two.log").read_text(encoding="utf-8")
    assert root.level == logging.WARNING
