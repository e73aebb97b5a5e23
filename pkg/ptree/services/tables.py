# -*- coding: utf-8 -*-
"""Tab-separated and JSON tables: spot maps, experiment manifests, calls and rules."""
from __future__ import annotations

import csv
import io
import json
import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence

from ptree.models.genes import Experiment, GeneCall, Group, Level, SpotEntry, SpotMap
from ptree.models.mining import Rule
from ptree.services.storage import read_text
from ptree.utils.errors import FormatError, SpotMapError

logger = logging.getLogger(__name__)

SPOT_COLUMNS = ("gene_id", "x0", "y0", "x1", "y1", "group", "reference")
CALL_COLUMNS = ("experiment_id", "gene_id", "state")
RULE_COLUMNS = ("antecedent", "consequent", "support", "confidence")


def _read_tsv(path: Path, required: Sequence[str]) -> List[Dict[str, str]]:
    reader = csv.DictReader(io.StringIO(read_text(path), newline=""), delimiter="\t")
    header = reader.fieldnames or []
    missing = [column for column in required if column not in header]
    if missing:
        raise FormatError(f"Missing columns {', '.join(missing)} in header.", path=path)
    rows = []
    for row in reader:
        if None in row or any(row.get(column) is None for column in required):
            raise FormatError(f"Line {reader.line_num}: wrong number of fields.", path=path)
        rows.append(row)
    return rows


def _write_tsv(path: Path, columns: Sequence[str], rows: Iterable[Sequence[object]]) -> Path:
    buffer = io.StringIO()
    writer = csv.writer(buffer, delimiter="\t", lineterminator="\n")
    writer.writerow(columns)
    writer.writerows(rows)
    path.write_text(buffer.getvalue(), encoding="utf-8")
    return path


def read_spot_map(source: Path | str) -> SpotMap:
    """Read a spot map TSV with header ``gene_id x0 y0 x1 y1 group reference``."""
    path = Path(source)
    entries = []
    for line_number, row in enumerate(_read_tsv(path, SPOT_COLUMNS), start=2):
        try:
            group = Group(row["group"].strip().upper())
            reference = row["reference"].strip()
            if reference not in ("0", "1"):
                raise ValueError(f"reference must be 0 or 1, got {reference!r}")
            entries.append(SpotEntry(
                row["gene_id"].strip(),
                int(row["x0"]), int(row["y0"]), int(row["x1"]), int(row["y1"]),
                group,
                reference == "1",
            ))
        except SpotMapError as exc:
            raise SpotMapError(f"{path}: line {line_number}: {exc}") from None
        except ValueError as exc:
            raise FormatError(f"Line {line_number}: {exc}", path=path) from None
    try:
        return SpotMap(tuple(entries))
    except SpotMapError as exc:
        raise SpotMapError(f"{path}: {exc}") from None


def _optional_float(value: object) -> Optional[float]:
    if value is None or value == "":
        return None
    return float(value)


def read_manifest(source: Path | str) -> List[Experiment]:
    """Read an experiment manifest (``.json`` or TSV); image paths resolve against its directory."""
    path = Path(source)
    base = path.parent
    if path.suffix.lower() == ".json":
        try:
            payload = json.loads(read_text(path))
        except json.JSONDecodeError as exc:
            raise FormatError(f"Invalid JSON: {exc.msg}.", path=path, offset=exc.pos) from None
        rows = payload.get("experiments") if isinstance(payload, dict) else payload
        if not isinstance(rows, list):
            raise FormatError("Manifest JSON must be a list of experiments.", path=path)
    else:
        rows = _read_tsv(path, ("experiment_id", "red", "green"))

    experiments = []
    for position, row in enumerate(rows, start=1):
        try:
            experiments.append(Experiment(
                str(row["experiment_id"]).strip(),
                base / str(row["red"]).strip(),
                base / str(row["green"]).strip(),
                mu=_optional_float(row.get("mu")),
                sigma=_optional_float(row.get("sigma")),
            ))
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise FormatError(f"Experiment {position}: {exc}", path=path) from None
    ids = [experiment.experiment_id for experiment in experiments]
    if len(set(ids)) != len(ids):
        raise FormatError("Manifest lists an experiment id twice.", path=path)
    return experiments


def write_calls(calls: Iterable[GeneCall], destination: Path | str) -> Path:
    rows = ((call.experiment_id, call.gene_id, call.state_label) for call in calls)
    return _write_tsv(Path(destination), CALL_COLUMNS, rows)


def _parse_state(label: str):
    if label in ("0", "1"):
        return Group.X, label == "1"
    return Group.Y, Level(label)


def read_calls(source: Path | str) -> List[GeneCall]:
    """Read a calls TSV; ``0``/``1`` states are X genes, level names are Y genes."""
    path = Path(source)
    calls = []
    for line_number, row in enumerate(_read_tsv(path, CALL_COLUMNS), start=2):
        try:
            group, state = _parse_state(row["state"].strip())
            calls.append(GeneCall(row["experiment_id"].strip(), row["gene_id"].strip(), group, state))
        except ValueError as exc:
            raise FormatError(f"Line {line_number}: {exc}", path=path) from None
    return calls


def _items_label(items) -> str:
    return "+".join(str(item) for item in items)


def write_rules(rules: Sequence[Rule], destination: Path | str, fmt: str = "tsv") -> Path:
    """Write rules as TSV (``antecedent consequent support confidence``) or JSON."""
    path = Path(destination)
    if fmt == "json":
        payload = [
            {
                "antecedent": [str(item) for item in rule.antecedent],
                "consequent": [str(item) for item in rule.consequent],
                "support": round(rule.support, 6),
                "confidence": round(rule.confidence, 6),
            }
            for rule in rules
        ]
        path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        return path
    rows = (
        (_items_label(rule.antecedent), _items_label(rule.consequent), f"{rule.support:.6f}", f"{rule.confidence:.6f}")
        for rule in rules
    )
    return _write_tsv(path, RULE_COLUMNS, rows)
