"""Enumerate Omega(m) and print each member with k(a), its source term, and any reference-list discrepancies."""

from __future__ import annotations

import argparse
import json
from dataclasses import dataclass

from cosrigid.certified import parse_threshold
from cosrigid.kconst import omega


@dataclass(frozen=True)
class OmegaConfig:
    m: str = "three-halves"
    precision_bits: int = 128
    as_json: bool = False


def main(cfg: OmegaConfig) -> int:
    res = omega(parse_threshold(cfg.m), cfg.precision_bits)
    if cfg.as_json:
        print(json.dumps(res.to_json(), indent=2))
        return 0
    print(f"Omega({cfg.m}): {len(res.members)} angles, orders {list(res.orders)}")
    print(f"orders above {res.cutoff_order} are excluded (u0 = {res.u0}); certified = {res.certified}")
    for a, k in res.members:
        form = k.closed_form.name if k.closed_form else "-"
        print(f"  {str(a):>6} pi  order {a.order:>3}  k = {k.value.mid:.12f}  {form:<22} via {k.source}")
    for d in res.discrepancies:
        print(f"  discrepancy {d.angle}: {d.kind} (canonical {d.canonical}, oracle k = {d.oracle_k:.12f})")
    return 0


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--m", default=OmegaConfig.m)
    p.add_argument("--precision-bits", type=int, default=OmegaConfig.precision_bits)
    p.add_argument("--json", action="store_true")
    a = p.parse_args()
    raise SystemExit(main(OmegaConfig(a.m, a.precision_bits, a.json)))
