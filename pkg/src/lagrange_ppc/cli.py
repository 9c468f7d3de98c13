"""Command-line front end.

    lagrange-ppc rate-table --n 5 --k 2 --g 2 --F 8
    lagrange-ppc simulate --scheme general --n 4 --k 2 --g 2 --f 2 --mu 3 --v 1 --out run/
    lagrange-ppc verify --config ex1.yaml --seeds 1000

Exit codes: 0 ok, 2 config error, 3 recovery failure, 4 audit failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path

import yaml

from .analysis import (AuditError, asymptotic_rates, audit_download, audit_privacy,
                       closed_form_report, reports_to_csv)
from .field import smallest_valid_modulus
from .polyspace import (Candidate, CandidateError, default_candidate_set,
                        monomial_count, nonparallel_count)
from .query_engine import audit_plan, plan as make_plan
from .rate_matrix import build_general, build_systematic, validate
from .recovery import DecodeError, ground_truth, run_pipeline, verify_recovery
from .rs_lagrange import ConfigError, make_context

EXIT_OK, EXIT_CONFIG, EXIT_RECOVERY, EXIT_AUDIT = 0, 2, 3, 4


@dataclass
class ExperimentConfig:
    scheme: str = "general"
    n: int = 4
    k: int = 2
    g: int = 2
    f: int = 2
    mu: str | int = "mtilde"
    q: int | None = None
    v: str | int = "all"
    seed: int = 0
    seeds: int = 100
    F: int = 8
    candidates: list = field(default_factory=list)   # extra polynomials, JSON term lists
    out: str | None = None

    def resolved_q(self) -> int:
        return self.q or smallest_valid_modulus(self.n)

    def resolved_mu(self) -> int:
        if self.mu in ("mtilde", "Mtilde"):
            return nonparallel_count(self.f, self.g)
        if self.mu in ("m", "M"):
            return monomial_count(self.f, self.g)
        try:
            return int(self.mu)
        except ValueError:
            raise ConfigError(f"mu must be an integer, 'mtilde' or 'm', got {self.mu!r}")

    def context(self):
        if self.scheme not in ("general", "systematic"):
            raise ConfigError(f"unknown scheme {self.scheme!r}")
        return make_context(self.n, self.k, self.g, self.resolved_q(),
                            systematic=self.scheme == "systematic")

    def candidate_set(self):
        q = self.resolved_q()
        extra = [Candidate.from_json(c, q) for c in self.candidates]
        return default_candidate_set(self.f, self.g, self.resolved_mu(), q, extra)

    def desired(self, mu: int) -> list:
        if self.v in ("all", None):
            return list(range(mu))
        v = int(self.v)
        if not 1 <= v <= mu:
            raise ConfigError(f"v={v} outside [1, {mu}]")
        return [v - 1]


def load_config(path: str | None) -> dict:
    if not path:
        return {}
    data = yaml.safe_load(Path(path).read_text()) or {}
    if not isinstance(data, dict):
        raise ConfigError("config file must hold key/value pairs")
    known = {f.name for f in fields(ExperimentConfig)}
    bad = set(data) - known
    if bad:
        raise ConfigError(f"unknown config keys: {sorted(bad)}")
    return data


def build_config(args) -> ExperimentConfig:
    data = load_config(args.config)
    for name in ("scheme", "n", "k", "g", "f", "mu", "q", "v", "seed", "seeds", "F", "out"):
        val = getattr(args, name, None)
        if val is not None:
            data[name] = val
    if getattr(args, "candidates", None):
        data["candidates"] = json.loads(Path(args.candidates).read_text())
    cfg = ExperimentConfig(**data)
    if cfg.g * (cfg.k - 1) + 1 > cfg.n:
        raise ConfigError(f"g(k-1)+1 = {cfg.g * (cfg.k - 1) + 1} exceeds n = {cfg.n}")
    return cfg


def _emit(text: str, out: str | None, name: str | None = None):
    if out is None:
        sys.stdout.write(text)
        return
    p = Path(out)
    if name is not None:
        p.mkdir(parents=True, exist_ok=True)
        p = p / name
    p.write_text(text)


def rate_table_rows(n, k, g, F, q=None) -> list:
    reports = []
    for f in range(1, F + 1):
        for mu in sorted({nonparallel_count(f, g), monomial_count(f, g)}):
            for scheme in ("general", "systematic"):
                reports.append(closed_form_report(scheme, n, k, g, f, mu, q))
    reports.sort(key=lambda r: (r.scheme, r.f, r.mu))
    return reports


def cmd_rate_table(cfg: ExperimentConfig) -> int:
    reports = rate_table_rows(cfg.n, cfg.k, cfg.g, cfg.F, cfg.q)
    text = reports_to_csv(reports)
    gen, sys_ = asymptotic_rates(cfg.n, cfg.k, cfg.g)
    for name, r in (("general-limit", gen), ("systematic-limit", sys_)):
        text += ",".join([name, str(cfg.n), str(cfg.k), str(cfg.g), "", "",
                          f"{r.numerator}/{r.denominator}", f"{float(r):.9f}", "", ""]) + "\n"
    _emit(text, cfg.out)
    return EXIT_OK


def _table_text(X) -> str:
    return "\n".join(" ".join(str(x) for x in row) for row in X) + "\n"


def cmd_simulate(cfg: ExperimentConfig) -> int:
    ctx = cfg.context()
    cs = cfg.candidate_set()
    status = EXIT_OK
    reports = []
    for v in cfg.desired(cs.mu):
        tag = f"v{v + 1}"
        try:
            p, ms, ans, rec = run_pipeline(ctx, cs, v, cfg.seed, cfg.scheme)
        except DecodeError as e:
            print(f"{tag}: decode error: {e}", file=sys.stderr)
            status = max(status, EXIT_RECOVERY)
            continue
        ok = rec.X == ground_truth(cs, ms, v)
        try:
            rep = audit_download(p)
            problems = audit_plan(p)
            if problems:
                raise AuditError(problems[0])
        except AuditError as e:
            print(f"{tag}: audit failure: {e}", file=sys.stderr)
            status = max(status, EXIT_AUDIT)
            continue
        reports.append(rep)
        if cfg.out:
            _emit(p.trace(), cfg.out, f"trace_{tag}.txt")
            _emit("".join(f"DB{j + 1} " + " ".join(map(str, a)) + "\n" for j, a in enumerate(ans)),
                  cfg.out, f"answers_{tag}.txt")
            _emit(_table_text(rec.X), cfg.out, f"recovered_{tag}.txt")
        r = rep.simulated_rate
        print(f"{tag} candidate={cs[v]} D={rep.simulated_D} L={rep.L} rate={r} ({float(r):.4f}) "
              f"recovery={'pass' if ok else 'FAIL'}")
        if not ok:
            status = max(status, EXIT_RECOVERY)
    if cfg.out and reports:
        _emit(reports_to_csv(reports), cfg.out, "report.csv")
    return status


def cmd_verify(cfg: ExperimentConfig) -> int:
    ctx = cfg.context()
    cs = cfg.candidate_set()
    lam = build_systematic(ctx) if cfg.scheme == "systematic" else build_general(ctx)
    results = {}
    bad = validate(lam, ctx)
    results["rate matrix"] = not bad
    dl_ok = True
    for v in range(cs.mu):
        try:
            audit_download(make_plan(ctx, cs, v, cfg.seed, cfg.scheme))
        except AuditError as e:
            print(f"download audit v={v + 1}: {e}", file=sys.stderr)
            dl_ok = False
    results["download"] = dl_ok
    priv = audit_privacy(ctx, cs, cfg.seeds, cfg.scheme)
    for m in priv.messages:
        print(f"privacy: {m}", file=sys.stderr)
    results["privacy"] = priv.ok
    rec_ok = True
    for v in cfg.desired(cs.mu):
        for seed in range(cfg.seed, cfg.seed + min(cfg.seeds, 20)):
            if not verify_recovery(ctx, cs, v, seed, cfg.scheme):
                print(f"recovery failed v={v + 1} seed={seed}", file=sys.stderr)
                rec_ok = False
                break
    results["recovery"] = rec_ok
    for name, ok in results.items():
        print(f"{name:12s} {'pass' if ok else 'FAIL'}")
    if not rec_ok:
        return EXIT_RECOVERY
    if not all(results.values()):
        return EXIT_AUDIT
    return EXIT_OK


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lagrange-ppc")
    sub = ap.add_subparsers(dest="cmd", required=True)
    for name in ("rate-table", "simulate", "verify"):
        sp = sub.add_parser(name)
        sp.add_argument("--config")
        sp.add_argument("--scheme", choices=["general", "systematic"])
        sp.add_argument("--n", type=int)
        sp.add_argument("--k", type=int)
        sp.add_argument("--g", type=int)
        sp.add_argument("--q", type=int)
        sp.add_argument("--seed", type=int)
        sp.add_argument("--out")
        if name == "rate-table":
            sp.add_argument("--F", type=int, help="largest f in the table")
        else:
            sp.add_argument("--f", type=int)
            sp.add_argument("--mu", help="integer, 'mtilde' or 'm'")
            sp.add_argument("--v", help="1-based desired index or 'all'")
            sp.add_argument("--candidates", help="JSON file with extra candidate polynomials")
        if name == "verify":
            sp.add_argument("--seeds", type=int)
    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = build_config(args)
        if args.cmd == "rate-table":
            return cmd_rate_table(cfg)
        if args.cmd == "simulate":
            return cmd_simulate(cfg)
        return cmd_verify(cfg)
    except (ConfigError, CandidateError, TypeError, ValueError, OSError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
