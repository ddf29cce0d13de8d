#!/usr/bin/env python3
"""Summarize the CSV outputs of a finished experiment directory.

Prints column stats for every CSV plus the run manifest status, so a batch
of runs can be sanity-checked without opening the files.

Usage:
    python scripts/plot_ready_summary.py out/river_barycentre [more dirs...]
"""

import csv
import json
import sys
from pathlib import Path


def summarize(outdir):
    outdir = Path(outdir)
    manifest = outdir / "run_manifest.json"
    if manifest.exists():
        meta = json.loads(manifest.read_text())
        print(f"{outdir}: status={meta['status']} "
              f"wall={meta.get('wall_time_s', float('nan')):.2f}s")
    for path in sorted(outdir.glob("*.csv")):
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            rows = list(reader)
        print(f"  {path.name}: {len(rows)} rows, columns {', '.join(header)}")


def main(argv):
    if len(argv) < 2:
        print(__doc__)
        return 2
    for outdir in argv[1:]:
        summarize(outdir)
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
