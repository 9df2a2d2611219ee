"""Command-line front end.

Exit codes: 0 success, 1 usage or input error, 2 a verification failed,
3 a comparison could not be certified below the precision cap.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import asdict, dataclass
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .algebra import (
    build,
    conjugated_projections,
    dalembert_residual,
    decompose,
    prop25_truncation,
    sup_distance_to_scalar,
    zero_law_harness,
)
from .angles import IRRATIONAL, parse_angle
from .certified import DEFAULT_BITS, DEFAULT_CAP, MIN_BITS, PrecisionExhausted, parse_threshold
from .cyclic import gamma, reduce_pair, sup_distance
from .kconst import check_triple_angle_classes, k_of_angle, omega
from .realsup import CSV_HEADER, taylor_tables, trig_diff_sup

SCHEMA_VERSION = 1
COMMANDS = (
    "k",
    "sup",
    "gamma",
    "omega",
    "tables",
    "realsup",
    "lemma38",
    "simulate",
    "prop25",
    "harness",
    "verify",
)
ENV_PREFIX = "COSRIGID_"


class UsageError(Exception):
    pass


class VerificationFailed(Exception):
    def __init__(self, report: dict):
        super().__init__("verification failed")
        self.report = report


@dataclass(frozen=True)
class CommandConfig:
    precision_bits: int = DEFAULT_BITS
    precision_cap: int = DEFAULT_CAP
    output_format: str = "json"
    seed: int = 0

    def __post_init__(self):
        if not MIN_BITS <= self.precision_bits <= self.precision_cap:
            raise UsageError(f"need {MIN_BITS} <= --precision-bits <= --precision-cap")
        if self.output_format not in ("json", "csv", "text"):
            raise UsageError("--format must be json, csv or text")


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):
        raise UsageError(f"{message}\nvalid subcommands: {', '.join(COMMANDS)}")


def _env(name: str, default):
    raw = os.environ.get(ENV_PREFIX + name.upper().replace("-", "_"))
    if raw is None:
        return default
    return type(default)(raw)


def make_parser() -> argparse.ArgumentParser:
    # SUPPRESS keeps a subcommand from resetting flags given before it
    common = _Parser(add_help=False)
    common.add_argument("--precision-bits", type=int, default=argparse.SUPPRESS)
    common.add_argument("--precision-cap", type=int, default=argparse.SUPPRESS)
    common.add_argument("--format", dest="output_format", choices=("json", "csv", "text"), default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)

    p = _Parser(prog="cosrigid", description="Rigidity constants of cosine sequences.", parents=[common])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    c = sub.add_parser("k", parents=[common], help="k(a) for a rational angle or the irrational case")
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--angle", help="p/q meaning pi p/q")
    g.add_argument("--irrational", action="store_true")

    c = sub.add_parser("sup", parents=[common], help="sup_n |cos(na) - cos(nb)|")
    c.add_argument("--a", required=True)
    c.add_argument("--b", required=True)

    c = sub.add_parser("gamma", parents=[common], help="Gamma(a, m)")
    c.add_argument("--a", required=True)
    c.add_argument("--m", required=True)

    c = sub.add_parser("omega", parents=[common], help="Omega(m) = {a : k(a) <= m}")
    c.add_argument("--m", required=True)

    sub.add_parser("tables", parents=[common], help="threshold tables for cos x - cos sx and cos 3x - cos sx")

    c = sub.add_parser("realsup", parents=[common], help="sup_x |cos(px) - cos(qx)|")
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--q", type=int, required=True)
    c.add_argument("--width", type=float, default=1e-12)

    c = sub.add_parser("lemma38", parents=[common], help="triple-angle sup classification by order")
    c.add_argument("--max-order", type=int, default=60)

    c = sub.add_parser("simulate", parents=[common], help="matrix cosine sequence vs a scalar one")
    c.add_argument("--angles", required=True, help="comma-separated p/q list")
    c.add_argument("--target", required=True)
    c.add_argument("--dim", type=int, default=None)
    c.add_argument("--horizon", type=int, default=50)

    c = sub.add_parser("prop25", parents=[common], help="the (Z/3Z)^N diagonal cosine family")
    c.add_argument("--n", type=int, required=True)

    c = sub.add_parser("harness", parents=[common], help="zero-law property harness")
    c.add_argument("--trials", type=int, default=100)

    c = sub.add_parser("verify", parents=[common], help="full reproduction ledger")
    c.add_argument("--verbose", action="store_true")
    return p


# commands ------------------------------------------------------------------


def cmd_k(args, cfg: CommandConfig) -> dict:
    if args.irrational:
        return {"angle": "irrational", "k": k_of_angle(IRRATIONAL).to_json()}
    a = parse_angle(args.angle)
    return {"angle": str(a), "order": a.order, "k": k_of_angle(a, cfg.precision_bits).to_json()}


def cmd_sup(args, cfg: CommandConfig) -> dict:
    a, b = parse_angle(args.a), parse_angle(args.b)
    res = sup_distance(a, b, cfg.precision_bits)
    out = res.to_json()
    if a != b:
        red = reduce_pair(a, b)
        out["reduction"] = {"case": red.case.value, "u": red.u, "w": red.w}
    return out


def cmd_gamma(args, cfg: CommandConfig) -> dict:
    return gamma(parse_angle(args.a), parse_threshold(args.m), cfg.precision_bits, cfg.precision_cap).to_json()


def cmd_omega(args, cfg: CommandConfig) -> dict:
    return omega(parse_threshold(args.m), cfg.precision_bits, cfg.precision_cap).to_json()


def cmd_tables(args, cfg: CommandConfig) -> dict:
    f_rows, g_rows = taylor_tables(cfg.precision_bits)
    return {
        "f": [r.to_json() for r in f_rows],
        "g": [r.to_json() for r in g_rows],
        "_csv": [CSV_HEADER] + [r.csv_fields() for r in f_rows + g_rows],
        "passed": all(r.within_reference for r in f_rows + g_rows),
    }


def cmd_realsup(args, cfg: CommandConfig) -> dict:
    return trig_diff_sup(args.p, args.q, args.width, cfg.precision_bits).to_json()


def cmd_triple_angle_classes(args, cfg: CommandConfig) -> dict:
    rep = check_triple_angle_classes(34, args.max_order, cfg.precision_bits, cfg.precision_cap)
    return rep.to_json()


def cmd_simulate(args, cfg: CommandConfig) -> dict:
    angles = [parse_angle(t) for t in args.angles.split(",")]
    target = parse_angle(args.target)
    k = len(angles)
    dim = args.dim or k
    if dim < k:
        raise UsageError("--dim must be at least the number of angles")
    ranks = [1] * k
    ranks[-1] += dim - k
    rng = np.random.default_rng(cfg.seed) if args.dim else None
    C = build(list(zip(angles, conjugated_projections(ranks, rng))), tol=1e-9)
    res = sup_distance_to_scalar(C, target)
    D = decompose(C(1))
    return {
        "angles": [str(b) for b in C.angles],
        "target": str(target),
        "dim": C.dim,
        "dalembert_residual": dalembert_residual(C, args.horizon),
        "sup": res.to_json(),
        "k_target": k_of_angle(target, cfg.precision_bits).to_json(),
        "recovered_angles": [str(b) for b in D.angles],
    }


def cmd_prop25(args, cfg: CommandConfig) -> dict:
    fam = prop25_truncation(args.n)
    s = fam.sup_distance_to_identity()
    return {
        "N": args.n,
        "sup": s.to_json(),
        "idempotents": [np.real(np.diag(p)).tolist() for p in fam.coordinate_idempotents()],
        "separates_coordinates": fam.separates_coordinates(),
    }


def cmd_harness(args, cfg: CommandConfig) -> dict:
    return zero_law_harness(args.trials, cfg.seed).to_json()


def cmd_verify(args, cfg: CommandConfig) -> dict:
    from .verify import run_all

    ledger = run_all()
    out = ledger.to_json()
    out["_text"] = ledger.lines(verbose=args.verbose)
    return out


HANDLERS: dict[str, Callable] = {
    "k": cmd_k,
    "sup": cmd_sup,
    "gamma": cmd_gamma,
    "omega": cmd_omega,
    "tables": cmd_tables,
    "realsup": cmd_realsup,
    "lemma38": cmd_triple_angle_classes,
    "simulate": cmd_simulate,
    "prop25": cmd_prop25,
    "harness": cmd_harness,
    "verify": cmd_verify,
}


# output ----------------------------------------------------------------------


def _flatten(prefix: str, value, rows: list[list[str]]) -> None:
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else k, v, rows)
    elif isinstance(value, list) and value and isinstance(value[0], (dict, list)):
        for i, v in enumerate(value):
            _flatten(f"{prefix}[{i}]", v, rows)
    else:
        rows.append([prefix, json.dumps(value) if isinstance(value, list) else str(value)])


def render(report: dict, fmt: str) -> str:
    text_lines = report.pop("_text", None)
    csv_rows = report.pop("_csv", None)
    if fmt == "json":
        return json.dumps(report, indent=2)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if csv_rows is not None:
            w.writerows(csv_rows)
        else:
            rows: list[list[str]] = []
            _flatten("", report, rows)
            w.writerow(["key", "value"])
            w.writerows(rows)
        return buf.getvalue().rstrip("\n")
    if text_lines is not None:
        return "\n".join(text_lines)
    rows = []
    _flatten("", report, rows)
    return "\n".join(f"{k}: {v}" for k, v in rows)


def _passed(payload: dict) -> bool:
    return payload.get("passed", True) is not False


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = make_parser().parse_args(argv)
        if args.command is None:
            raise UsageError(f"missing subcommand; valid subcommands: {', '.join(COMMANDS)}")
        flags = vars(args)
        cfg = CommandConfig(
            precision_bits=flags.get("precision_bits", _env("precision-bits", DEFAULT_BITS)),
            precision_cap=flags.get("precision_cap", _env("precision-cap", DEFAULT_CAP)),
            output_format=flags.get("output_format", _env("format", "json")),
            seed=flags.get("seed", _env("seed", 0)),
        )
        payload = HANDLERS[args.command](args, cfg)
    except UsageError as e:
        print(f"usage error: {e}", file=stderr)
        return 1
    except PrecisionExhausted as e:
        print(json.dumps({"error": "PrecisionExhausted", "detail": str(e)[:2000]}), file=stderr)
        return 3
    except (ValueError, TypeError) as e:
        print(f"input error: {type(e).__name__}: {e}", file=stderr)
        return 1
    header = {"schema_version": SCHEMA_VERSION, "command": args.command, "config": asdict(cfg)}
    if args.command == "k":
        report = {**header, **payload}
    else:
        report = {**header, "result": payload}
        for key in ("_text", "_csv"):
            if key in payload:
                report[key] = payload.pop(key)
    print(render(report, cfg.output_format), file=stdout)
    return 0 if _passed(payload) else 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
