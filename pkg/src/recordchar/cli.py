"""``recordchar`` command-line runner.

Subcommands::

    recordchar simulate             record values (or raw iid series) per replicate
    recordchar verify-proposition   quadrature / Monte Carlo / Beta comparison sweep
    recordchar verify-identities    divided-difference identity sweeps
    recordchar goftest              record-regression exponentiality test

Exit codes: 0 success (or fail-to-reject), 2 error or failed verification,
3 exponentiality rejected (goftest only).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from importlib import resources
from typing import Sequence

import numpy as np

from .config import ConfigError, ExperimentConfig, load_config
from .diffops import Polynomial
from .distributions import DistributionSpec, sample_iid
from .errors import DomainError, EstimationError, InsufficientDataError, UnreliableNullError
from .goftest import bootstrap_pvalue, collect_triples, estimate_exponential_params
from .records import simulate_records
from .regression import VerificationReport, named_psi, quantile_grid, verify_one
from .seriesio import SeriesFormatError, format_series, read_series
from .sweeps import THRESHOLDS, IdentityRow, run_identity_sweeps

__all__ = ["main", "cmd_simulate", "cmd_verify_proposition", "cmd_verify_identities", "cmd_goftest"]

EXIT_OK, EXIT_ERROR, EXIT_REJECT = 0, 2, 3

# spawn-key namespaces for counter-based seed splitting
_GRID_STREAM, _QUERY_STREAM, _SIM_STREAM, _GOF_STREAM, _IDENT_STREAM = range(1, 6)


def _child(seed: int, stream: int, index: int = 0) -> np.random.SeedSequence:
    return np.random.SeedSequence(seed, spawn_key=(stream, index))


class Output:
    """Collects the files a command produces; writes them under ``--out`` or to stdout."""

    def __init__(self, out_dir: str | None, fmt: str, stdout=None):
        self.out_dir = out_dir
        self.fmt = fmt
        self.stdout = stdout or sys.stdout
        if out_dir:
            os.makedirs(out_dir, exist_ok=True)

    def _write(self, name: str, text: str) -> None:
        path = os.path.join(self.out_dir, name)
        try:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc.strerror}") from exc

    def table(self, stem: str, columns: Sequence[str], rows: Sequence[dict], records: Sequence[dict]) -> None:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _fmt(v) for k, v in row.items()})
        csv_text = buf.getvalue()
        jsonl = "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)
        if self.out_dir:
            self._write(f"{stem}.csv", csv_text)
            self._write(f"{stem}.jsonl", jsonl)
        else:
            self.stdout.write(csv_text if self.fmt == "csv" else jsonl)

    def text(self, name: str, text: str) -> None:
        if self.out_dir:
            self._write(name, text)
        else:
            self.stdout.write(text)

    def config(self, cfg: ExperimentConfig) -> None:
        if self.out_dir:
            self._write("config.json", cfg.to_json())


def _fmt(v):
    return repr(v) if isinstance(v, float) else v


def _provenance(cfg: ExperimentConfig) -> dict:
    return {"config_hash": cfg.digest(), "seed": cfg.seed}


# ---------------------------------------------------------------- simulate

def cmd_simulate(cfg: ExperimentConfig, out: Output) -> int:
    """Record values (``mode="records"``) or raw iid series (``mode="series"``), one block per replicate."""
    blocks = []
    for i in range(cfg.replicates):
        rng = np.random.default_rng(_child(cfg.seed, _SIM_STREAM, i))
        if cfg.mode == "records":
            blocks.append(simulate_records(cfg.distribution, cfg.k, rng))
        else:
            blocks.append(sample_iid(cfg.distribution, rng, cfg.length))
    out.config(cfg)
    out.text("records.txt" if cfg.mode == "records" else "series.txt", format_series(blocks))
    return EXIT_OK


# ---------------------------------------------------------------- verify-proposition

def _grid_for(cfg: ExperimentConfig, t_index: int, n: int, s: int, r: int):
    grid = cfg.grid
    if grid["policy"] == "explicit":
        return [(float(u), float(v)) for u, v in grid["pairs"]]
    if grid["policy"] == "lattice":
        return quantile_grid(cfg.distribution, n, s, r, int(grid.get("size", 3)))
    rng = np.random.default_rng(_child(cfg.seed, _GRID_STREAM, t_index))
    return quantile_grid(cfg.distribution, n, s, r, int(grid.get("count", 20)), rng=rng)


def _run_task(task) -> VerificationReport:
    spec_dict, n, s, r, u, v, psi_ref, N, seed_seq, z = task
    return verify_one(DistributionSpec.from_dict(spec_dict), n, s, r, u, v, psi_ref, N, seed_seq, z)


def cmd_verify_proposition(cfg: ExperimentConfig, out: Output, jobs: int = 1) -> int:
    """Regression-identity sweep; exit 0 iff the verdicts match the config's ``expect`` polarity."""
    for ref in cfg.psi:
        named_psi(ref)  # fail fast on unknown names
    tasks = []
    spec_dict = cfg.distribution.to_dict()
    for t_index, (n, s, r) in enumerate(cfg.indices):
        for u, v in _grid_for(cfg, t_index, n, s, r):
            for psi_ref in cfg.psi:
                seed = _child(cfg.seed, _QUERY_STREAM, len(tasks))
                tasks.append((spec_dict, n, s, r, u, v, psi_ref, cfg.mc_samples, seed, cfg.z))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        reports = [_run_task(t) for t in tasks]

    prov = _provenance(cfg)
    columns = VerificationReport.COLUMNS + ("config_hash", "seed")
    out.config(cfg)
    out.table("proposition", columns, [{**rep.as_row(), **prov} for rep in reports],
              [{**rep.as_record(), **prov} for rep in reports])

    errors = [rep for rep in reports if rep.verdict == "error"]
    violated = [rep for rep in reports if rep.verdict == "violated"]
    print(f"{len(reports)} queries: {len(reports) - len(violated) - len(errors)} consistent, "
          f"{len(violated)} violated, {len(errors)} errors (expect {cfg.expect})", file=sys.stderr)
    for rep in errors[:5]:
        print(f"  error at n={rep.n} s={rep.s} r={rep.r} u={rep.u} v={rep.v}: {rep.error}", file=sys.stderr)
    if errors:
        return EXIT_ERROR
    if cfg.expect == "consistent":
        return EXIT_OK if not violated else EXIT_ERROR
    return EXIT_OK if violated else EXIT_ERROR


# ---------------------------------------------------------------- verify-identities

# added to g on the quadrature side only when fault injection is requested
FAULT = Polynomial.monomial(9)


def cmd_verify_identities(cfg: ExperimentConfig, out: Output) -> int:
    """All identity sweeps; exit 0 iff every maximum residual is within its threshold."""
    rows = run_identity_sweeps(
        cfg.seed, polys=cfg.polys, beta_polys=cfg.beta_polys, intervals=cfg.intervals,
        r_values=cfg.r_values, s_values=cfg.s_values,
        corruption=FAULT if cfg.fault_injection else None)
    prov = _provenance(cfg)
    columns = IdentityRow.COLUMNS + ("config_hash", "seed")
    records = [{**row.as_row(), **prov} for row in rows]
    out.config(cfg)
    out.table("identities", columns, records, records)

    worst: dict[str, IdentityRow] = {}
    for row in rows:
        if row.identity not in worst or row.residual > worst[row.identity].residual:
            worst[row.identity] = row
    ok = True
    for name, row in worst.items():
        passed = row.residual <= THRESHOLDS[name]
        ok &= passed
        print(f"{name:24s} max residual {row.residual:.3e} (threshold {THRESHOLDS[name]:g}) "
              f"{'PASS' if passed else 'FAIL'}", file=sys.stderr)
        if not passed:
            print(f"  worst tuple: g=[{row.poly}] orders=({row.a}, {row.b}) u={row.u} v={row.v}",
                  file=sys.stderr)
    return EXIT_OK if ok else EXIT_ERROR


# ---------------------------------------------------------------- goftest

def resolve_data(ref: str) -> str:
    """Path of a data file; ``bundled:NAME`` names a dataset shipped with the package."""
    if ref.startswith("bundled:"):
        res = resources.files("recordchar") / "data" / f"{ref[len('bundled:'):]}.txt.gz"
        if not res.is_file():
            raise ConfigError(f"no bundled dataset {ref!r}")
        return str(res)
    return ref


def cmd_goftest(cfg: ExperimentConfig, out: Output, data_path: str | None = None) -> int:
    """Exponentiality test on a series file; exit 0 fail-to-reject, 3 reject, 2 data error."""
    ref = data_path or cfg.data
    if not ref:
        raise ConfigError("goftest needs a data file (--data or config 'data')")
    series = read_series(resolve_data(ref))
    if len(cfg.indices) != 1:
        raise ConfigError("goftest takes exactly one (n, s, r) triple")
    n, s, r = cfg.indices[0]
    triples = collect_triples(series, n, s, r)
    fitted = estimate_exponential_params(series)
    report = bootstrap_pvalue(triples, fitted, [len(x) for x in series], cfg.bootstrap,
                              _child(cfg.seed, _GOF_STREAM), cfg.alpha, cfg.centered)
    record = {**report.as_record(), **_provenance(cfg), "data": ref}
    out.config(cfg)
    out.text("goftest.json", json.dumps(record, sort_keys=True) + "\n")
    print(report.summary(), file=sys.stderr)
    return EXIT_REJECT if report.reject else EXIT_OK


# ---------------------------------------------------------------- entry point

def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="config file, or bundled config name (e.g. exp-default)")
    common.add_argument("--seed", type=int, help="unsigned 64-bit seed; overrides the config")
    common.add_argument("--out", help="output directory (default: write to stdout)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes (results do not depend on it)")
    common.add_argument("--format", choices=("csv", "records"), default="csv",
                        help="stdout format when --out is not given")

    parser = argparse.ArgumentParser(prog="recordchar", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("simulate", parents=[common], help="simulate record values")
    p.add_argument("--k", type=int, help="records per replicate")
    p.add_argument("--replicates", type=int)
    sub.add_parser("verify-proposition", parents=[common], help="regression identity sweep")
    p = sub.add_parser("verify-identities", parents=[common], help="divided-difference identity sweeps")
    p.add_argument("--inject-fault", action="store_true", help="corrupt g on one side (harness self-test)")
    p = sub.add_parser("goftest", parents=[common], help="goodness-of-fit test for exponentiality")
    p.add_argument("--data", help="series file (blank-line separated) or bundled:NAME")
    return parser


def build_config(args: argparse.Namespace) -> ExperimentConfig:
    if args.config:
        cfg = load_config(args.config)
        if cfg.command != args.command:
            raise ConfigError(f"config is for {cfg.command!r}, not {args.command!r}")
        data = cfg.to_dict()
    else:
        data = {"command": args.command}
    if args.seed is not None:
        data["seed"] = args.seed
    if args.out is not None:
        data["out"] = args.out
    for name in ("k", "replicates"):
        if getattr(args, name, None) is not None:
            data[name] = getattr(args, name)
    if getattr(args, "inject_fault", False):
        data["fault_injection"] = True
    return ExperimentConfig.from_dict(data)


def main(argv: Sequence[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = build_config(args)
        out = Output(cfg.out, args.format)
        if args.command == "simulate":
            return cmd_simulate(cfg, out)
        if args.command == "verify-proposition":
            return cmd_verify_proposition(cfg, out, jobs=max(1, args.jobs))
        if args.command == "verify-identities":
            return cmd_verify_identities(cfg, out)
        return cmd_goftest(cfg, out, args.data)
    except (ConfigError, SeriesFormatError, InsufficientDataError, EstimationError,
            UnreliableNullError, DomainError, OSError) as exc:
        print(f"recordchar {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
