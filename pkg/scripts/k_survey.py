"""Survey k over orders 1..N: value, attaining term, closed form, and the sqrt(5)/2 floor margin."""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass

from cosrigid.certified import SQRT5_OVER_2
from cosrigid.kconst import k_of_order, sigma, theta


@dataclass(frozen=True)
class SurveyConfig:
    max_order: int = 60
    precision_bits: int = 128


def main(cfg: SurveyConfig) -> int:
    floor = SQRT5_OVER_2.enclose().mid
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["order", "k", "source", "closed_form", "sigma", "theta", "margin_over_sqrt5_2"])
    for u in range(1, cfg.max_order + 1):
        k = k_of_order(u, cfg.precision_bits)
        form = k.closed_form.name if k.closed_form else ""
        w.writerow(
            [
                u,
                f"{k.value.mid:.15f}",
                k.source,
                form,
                f"{sigma(u, cfg.precision_bits).mid:.15f}",
                f"{theta(u, cfg.precision_bits).mid:.15f}",
                f"{k.value.mid - floor:.3e}",
            ]
        )
    return 0


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--max-order", type=int, default=SurveyConfig.max_order)
    p.add_argument("--precision-bits", type=int, default=SurveyConfig.precision_bits)
    a = p.parse_args()
    raise SystemExit(main(SurveyConfig(a.max_order, a.precision_bits)))
