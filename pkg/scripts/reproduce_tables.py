"""Recompute both Taylor-Lagrange threshold tables and compare with the reference rows."""

from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass
from pathlib import Path

from cosrigid.realsup import CSV_HEADER, taylor_tables


@dataclass(frozen=True)
class TablesConfig:
    precision_bits: int = 128
    out: Path | None = None


def main(cfg: TablesConfig) -> int:
    f_rows, g_rows = taylor_tables(cfg.precision_bits)
    rows = f_rows + g_rows
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    w.writerows(r.csv_fields() for r in rows)
    if cfg.out:
        cfg.out.write_text(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    worse = [f"{r.family}_{r.s}" for r in rows if not r.within_reference]
    print(f"{len(rows) - len(worse)}/{len(rows)} rows with u_s at most the reference value", file=sys.stderr)
    return 1 if worse else 0


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--precision-bits", type=int, default=TablesConfig.precision_bits)
    p.add_argument("--out", type=Path)
    a = p.parse_args()
    raise SystemExit(main(TablesConfig(a.precision_bits, a.out)))
