"""Command-line entry point: ``rnagrowth <subcommand> [options]``.

Exit codes: 0 success, 1 usage or model error, 2 validation failure,
3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from typing import Optional

from . import __version__
from .coeffs import (
    DEFAULT_ORACLE_CAP,
    model_counts,
    implicit_series,
    oracle_count,
    oracle_wc_count,
    phi_on_series,
    recurrence_counts,
    unrestricted_primary,
)
from .errors import ConvergenceError, RNAGrowthError
from .models import FREE_TRANSFER, WC_TRANSFER, get_model, model_names, resolve_model
from .polynomial import discriminant, exact_divides
from .singularity import PUBLISHED_REL_TOL, growth_report

SUBCOMMANDS = ("count", "series", "growth", "validate", "oracle", "report")
REPORT_COLUMNS = (
    "model",
    "R",
    "growth",
    "published_growth",
    "abs_rel_error",
    "tie_count",
    "root_test_verdict",
)
WC_ORACLE_CAP = 8


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    model: Optional[str] = None
    n: Optional[int] = None
    lam: int = 2
    digits: int = 7
    rel_tol: float = 0.01
    oracle_cap: int = DEFAULT_ORACLE_CAP
    strategy: str = "positive-real"
    derived: bool = False
    format: str = "table"
    output: Optional[str] = None

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise UsageError(f"subcommand: unknown {self.subcommand!r}")
        if not 1 <= self.digits <= 30:
            raise UsageError(f"--digits: must be in [1, 30], got {self.digits}")
        if not self.rel_tol > 0:
            raise UsageError(f"--rel-tol: must be positive, got {self.rel_tol}")
        if self.n is not None and self.n < 0:
            raise UsageError(f"--n: must be non-negative, got {self.n}")
        if self.subcommand in ("count", "series", "growth", "validate") and not self.model:
            raise UsageError("--model: required")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="rnagrowth",
        description="Exact RNA structure counts and exponential growth bounds.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def common(p, n_default=None, n_help="largest n"):
        p.add_argument("--n", "--terms", dest="n", type=int, default=n_default, help=n_help)
        p.add_argument("--format", choices=("table", "json", "csv"), default="table")
        p.add_argument("--output", "-o", help="write to this file instead of stdout")

    def modelled(p):
        p.add_argument("--model", required=True, help="preset name or path to a JSON model file")

    def numeric(p):
        p.add_argument("--digits", type=int, default=7, help="decimal places (1-30)")
        p.add_argument("--rel-tol", type=float, default=0.01, help="root-test tolerance")
        p.add_argument(
            "--strategy", choices=("positive-real", "min-modulus"), default="positive-real"
        )
        p.add_argument(
            "--derived",
            action="store_true",
            help="use the derived discriminant even when a published radicand exists",
        )

    p = sub.add_parser("count", help="counting sequence from the recurrence route")
    modelled(p)
    common(p, 20)
    p = sub.add_parser("series", help="coefficients of the implicit equation")
    modelled(p)
    common(p, 20, "truncation order")
    p = sub.add_parser("growth", help="dominant singularity and growth constant")
    modelled(p)
    common(p, 200, "coefficients used by the root test")
    numeric(p)
    p = sub.add_parser("validate", help="cross-validate counts and growth")
    modelled(p)
    common(p, 200, "coefficients used by the root test")
    numeric(p)
    p.add_argument("--oracle-cap", type=int, default=DEFAULT_ORACLE_CAP)
    p = sub.add_parser("oracle", help="brute-force count of secondary structures")
    common(p, None, "number of backbone nodes")
    p.add_argument("--lambda", dest="lam", type=int, default=2, help="minimum arc length")
    p.add_argument("--oracle-cap", type=int, default=DEFAULT_ORACLE_CAP)
    p = sub.add_parser("report", help="growth constants of all presets vs published values")
    common(p, 200, "coefficients used by the root test")
    numeric(p)
    return parser


def parse_config(argv) -> RunConfig:
    ns = build_parser().parse_args(argv)
    values = {k: v for k, v in vars(ns).items() if v is not None}
    if ns.subcommand == "oracle" and ns.n is None:
        raise UsageError("--n: required for oracle")
    return RunConfig(**values)


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _table(rows, header) -> str:
    cells = [list(map(str, header))] + [[("" if c is None else str(c)) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = [
        "  ".join(c.ljust(w) if i == 0 else c.rjust(w) for i, (c, w) in enumerate(zip(r, widths))).rstrip()
        for r in cells
    ]
    return "\n".join(lines) + "\n"


def cmd_count(cfg: RunConfig) -> tuple[str, int]:
    model = resolve_model(cfg.model)
    seq = model_counts(model, cfg.n)
    if cfg.format == "json":
        return _json(seq.to_json()), 0
    rows = list(enumerate(seq.values))
    if cfg.format == "csv":
        return _csv(rows, ("n", "count")), 0
    return _table(rows, ("n", "count")), 0


def cmd_series(cfg: RunConfig) -> tuple[str, int]:
    model = resolve_model(cfg.model)
    s = implicit_series(model, cfg.n)
    if cfg.format == "json":
        return _json({"model": model.name, "order": s.order, "coeffs": s.to_json()}), 0
    rows = list(enumerate(s.to_json()))
    if cfg.format == "csv":
        return _csv(rows, ("n", "coeff")), 0
    return f"# {model.name}: {model.phi} = 0, S(0) = {model.s0}\n" + _table(rows, ("n", "coeff")), 0


def _report(model, cfg: RunConfig):
    return growth_report(
        model,
        n_validate=cfg.n,
        digits=cfg.digits,
        rel_tol=cfg.rel_tol,
        strategy=cfg.strategy,
        prefer_published=not cfg.derived,
    )


def _report_row(r) -> list:
    return [
        r.model,
        r.R,
        r.growth,
        r.published_growth or "",
        "" if r.published_rel_error is None else f"{r.published_rel_error:.3e}",
        r.tie_count,
        r.root_test.verdict if r.root_test else "",
    ]


def cmd_growth(cfg: RunConfig) -> tuple[str, int]:
    r = _report(resolve_model(cfg.model), cfg)
    if cfg.format == "json":
        return _json(r.to_json()), 0
    if cfg.format == "csv":
        return _csv([_report_row(r)], REPORT_COLUMNS), 0
    lines = [
        f"model            {r.model}",
        f"radicand         {r.radicand}  ({r.radicand_source})",
        f"R                {r.R}",
        f"growth 1/R       {r.growth}",
        f"tie count        {r.tie_count}",
    ]
    if r.published_growth:
        lines.append(f"published        {r.published_growth}  (rel. error {r.published_rel_error:.3e})")
    if r.root_test:
        t = r.root_test
        lines.append(
            f"root test        {t.verdict}: max S_n^(1/n) = {t.max_nth_root:.7f} (n={t.argmax}), "
            f"final ratio {t.final_ratio:.7f} over n <= {t.n_used}"
        )
    lines.append(f"certified        {'yes' if r.certified else 'no'}")
    return "\n".join(lines) + "\n", 0


def validation_checks(model, cfg: RunConfig) -> list[dict]:
    checks = []

    def add(name, ok, detail=""):
        checks.append({"check": name, "pass": bool(ok), "detail": detail})

    n = cfg.n
    series = implicit_series(model, n)
    residual = phi_on_series(model.phi, series)
    add("phi-residual", all(c == 0 for c in residual), f"phi(z, S(z)) = 0 mod z^{n + 1}")

    counts = model_counts(model, n)
    if model.lam is not None:
        rec = recurrence_counts(model.lam, n)
        add("recurrence-vs-series", rec.values == tuple(int(c) for c in series), f"n <= {n}")
        m = min(n, cfg.oracle_cap)
        brute = tuple(oracle_count(k, model.lam, cfg.oracle_cap) for k in range(m + 1))
        add("oracle-vs-recurrence", brute == rec.values[: m + 1], f"n <= {m}")
    elif model.transfer is not None:
        add("transfer-vs-series", counts.values == tuple(int(c) for c in series), f"n <= {n}")
        if model.transfer == WC_TRANSFER:
            m = min(n, WC_ORACLE_CAP)
            brute = tuple(oracle_wc_count(k, WC_ORACLE_CAP) for k in range(m + 1))
            add("string-oracle-vs-transfer", brute == counts.values[: m + 1], f"n <= {m}")
        if model.transfer == FREE_TRANSFER:
            ok = all(counts[k] == unrestricted_primary(k) for k in range(1, n + 1))
            add("closed-form-4^n", ok, f"1 <= n <= {n}")

    if model.published_radicand is not None and model.phi.degree("S") >= 2:
        ok, _ = exact_divides(model.published_radicand, discriminant(model.phi, "S"))
        add("published-radicand-divides-discriminant", ok)

    r = _report(model, cfg)
    if r.published_growth is not None:
        add(
            "growth-vs-published",
            r.matches_published,
            f"{r.growth} vs {r.published_growth}, rel. error {r.published_rel_error:.3e} "
            f"(tol {PUBLISHED_REL_TOL:g})",
        )
    t = r.root_test
    add(
        "root-test",
        t.passed,
        f"max S_n^(1/n) = {t.max_nth_root:.7f} at n={t.argmax}; final ratio {t.final_ratio:.7f}; "
        f"growth {r.growth}",
    )
    return checks


def cmd_validate(cfg: RunConfig) -> tuple[str, int]:
    model = resolve_model(cfg.model)
    checks = validation_checks(model, cfg)
    ok = all(c["pass"] for c in checks)
    code = 0 if ok else 2
    if cfg.format == "json":
        return _json({"model": model.name, "pass": ok, "checks": checks}), code
    rows = [[c["check"], "pass" if c["pass"] else "FAIL", c["detail"]] for c in checks]
    if cfg.format == "csv":
        return _csv(rows, ("check", "verdict", "detail")), code
    return _table(rows, ("check", "verdict", "detail")), code


def cmd_oracle(cfg: RunConfig) -> tuple[str, int]:
    count = oracle_count(cfg.n, cfg.lam, cfg.oracle_cap)
    if cfg.format == "json":
        return _json({"n": cfg.n, "lambda": cfg.lam, "count": str(count)}), 0
    if cfg.format == "csv":
        return _csv([[cfg.n, cfg.lam, count]], ("n", "lambda", "count")), 0
    return f"{count}\n", 0


def cmd_report(cfg: RunConfig) -> tuple[str, int]:
    reports = [_report(get_model(name), cfg) for name in model_names()]
    code = 0 if all(r.matches_published is not False for r in reports) else 2
    if cfg.format == "json":
        return _json([r.to_json() for r in reports]), code
    rows = [_report_row(r) for r in reports]
    if cfg.format == "csv":
        return _csv(rows, REPORT_COLUMNS), code
    for row, r in zip(rows, reports):
        row.append({True: "pass", False: "FAIL", None: "-"}[r.matches_published])
    return _table(rows, REPORT_COLUMNS + ("published_match",)), code


COMMANDS = {
    "count": cmd_count,
    "series": cmd_series,
    "growth": cmd_growth,
    "validate": cmd_validate,
    "oracle": cmd_oracle,
    "report": cmd_report,
}


def run(cfg: RunConfig) -> tuple[str, int]:
    return COMMANDS[cfg.subcommand](cfg)


def main(argv=None) -> int:
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:  # argparse: --help, --version or a usage error
        return exc.code if isinstance(exc.code, int) else 1
    except UsageError as exc:
        print(f"rnagrowth: error: {exc}", file=sys.stderr)
        return 1
    try:
        text, code = run(cfg)
    except ConvergenceError as exc:
        print(f"rnagrowth: numeric error: {exc}", file=sys.stderr)
        return 3
    except (RNAGrowthError, OSError) as exc:
        print(f"rnagrowth: error: {exc}", file=sys.stderr)
        return 1
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
