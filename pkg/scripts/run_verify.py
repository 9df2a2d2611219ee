"""Run the full reproduction ledger and optionally save it as JSON."""

from __future__ import annotations

import argparse
import json
from dataclasses import dataclass
from pathlib import Path

from cosrigid.verify import run_all


@dataclass(frozen=True)
class VerifyConfig:
    verbose: bool = False
    out: Path | None = None


def main(cfg: VerifyConfig) -> int:
    ledger = run_all()
    print("\n".join(ledger.lines(cfg.verbose)))
    if cfg.out:
        cfg.out.write_text(json.dumps(ledger.to_json(), indent=2))
    print("ALL PASS" if ledger.passed else "FAILURES PRESENT")
    return 0 if ledger.passed else 2


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--verbose", action="store_true")
    p.add_argument("--out", type=Path)
    a = p.parse_args()
    raise SystemExit(main(VerifyConfig(a.verbose, a.out)))
