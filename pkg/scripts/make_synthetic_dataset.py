#!/usr/bin/env python3
"""Regenerate the bundled synthetic microarray dataset.

Each experiment is a 16x16 red/green image pair split into sixteen 4x4 spots.
The first two spots are reference spots with equal channel means; the other
spots cycle through five expression patterns that shift from experiment to
experiment, so the calls differ across experiments and rules can be mined.
All values come from integer formulas, so the output is byte-identical on
every run.

Examples:
    # Rewrite data/synthetic in place
    python scripts/make_synthetic_dataset.py

    # Six experiments of 32x32 pixels into a scratch directory
    python scripts/make_synthetic_dataset.py --experiments 6 --spot-size 8 --out /tmp/chip
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List

import numpy as np

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from ptree.models.bands import BandGrid  # noqa: E402
from ptree.services.storage import write_band  # noqa: E402

SPOTS_PER_SIDE = 4
REFERENCE_SPOTS = 2
LAST_X_SPOT = 8
PATTERNS = [(220, 40), (150, 100), (120, 120), (100, 150), (40, 220)]  # (red, green)
NEUTRAL = (120, 120)


def synthetic_band(experiment: int, channel: str, spot_size: int = 4) -> BandGrid:
    """Return one channel of one experiment (experiments count from 1)."""
    side = SPOTS_PER_SIDE * spot_size
    y, x = np.indices((side, side), dtype=np.int64)
    spot = (y // spot_size) * SPOTS_PER_SIDE + x // spot_size
    pattern = (spot * 3 + experiment * 2) % len(PATTERNS)
    channel_index = 0 if channel == "red" else 1
    base = np.asarray([p[channel_index] for p in PATTERNS])[pattern]
    base = np.where(spot < REFERENCE_SPOTS, NEUTRAL[channel_index], base)
    if channel == "red":
        noise = (x * 7 + y * 3 + experiment * 5) % 21 - 10
    else:
        noise = (x * 5 + y * 11 + experiment * 3) % 21 - 10
    return BandGrid(1 if channel == "red" else 2, base + noise)


def spot_rows(spot_size: int = 4) -> List[str]:
    rows = ["gene_id\tx0\ty0\tx1\ty1\tgroup\treference"]
    for spot in range(SPOTS_PER_SIDE * SPOTS_PER_SIDE):
        x0 = (spot % SPOTS_PER_SIDE) * spot_size
        y0 = (spot // SPOTS_PER_SIDE) * spot_size
        if spot < REFERENCE_SPOTS:
            gene_id = f"ref{spot + 1}"
        elif spot <= LAST_X_SPOT:
            gene_id = f"xg{spot:02d}"
        else:
            gene_id = f"yg{spot:02d}"
        group = "X" if spot <= LAST_X_SPOT else "Y"
        reference = 1 if spot < REFERENCE_SPOTS else 0
        rows.append(f"{gene_id}\t{x0}\t{y0}\t{x0 + spot_size - 1}\t{y0 + spot_size - 1}\t{group}\t{reference}")
    return rows


def write_dataset(out_dir: Path, experiments: int = 4, spot_size: int = 4) -> Path:
    """Write band CSVs, spots.tsv and manifest.tsv; return the manifest path."""
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = ["experiment_id\tred\tgreen"]
    for experiment in range(1, experiments + 1):
        for channel in ("red", "green"):
            write_band(synthetic_band(experiment, channel, spot_size), out_dir / f"exp{experiment}_{channel}.csv")
        manifest.append(f"E{experiment}\texp{experiment}_red.csv\texp{experiment}_green.csv")
    (out_dir / "spots.tsv").write_text("\n".join(spot_rows(spot_size)) + "\n", encoding="utf-8")
    manifest_path = out_dir / "manifest.tsv"
    manifest_path.write_text("\n".join(manifest) + "\n", encoding="utf-8")
    return manifest_path


def parse_args(argv: List[str]) -> argparse.Namespace:
    parser = argparse.ArgumentParser(description="Write the synthetic microarray dataset.")
    parser.add_argument("--out", type=Path, default=ROOT / "data" / "synthetic", help="Output directory.")
    parser.add_argument("--experiments", type=int, default=4, help="Number of experiments.")
    parser.add_argument("--spot-size", type=int, default=4, help="Side of each square spot in pixels.")
    return parser.parse_args(argv)


def main(argv: List[str] | None = None) -> None:
    args = parse_args(sys.argv[1:] if argv is None else argv)
    manifest = write_dataset(args.out, args.experiments, args.spot_size)
    print(f"Wrote {args.experiments} experiments to {manifest.parent}")


if __name__ == "__main__":
    main()
