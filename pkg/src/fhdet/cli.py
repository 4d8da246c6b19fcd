"""Command-line driver: ``fhdet <subcommand> --config run.json``."""
from __future__ import annotations

import argparse
import io
import json
import math
import sys
import warnings
from dataclasses import asdict, dataclass, field, fields
from typing import Optional

from . import asymptotics, verification
from .errors import FHDetError, ValidationError
from .symbols import ProblemSpec, SmoothSpec, assemble_pair

SCHEMA = "fhdet-report/1"

DEFAULT_PSI = {"log_coefficients": {"1": [0.2, 0.0], "-1": [-0.2, 0.0]}}
DEFAULT_A = {"log_coefficients": {"1": [0.3, 0.0]}}
DEFAULT_B = {"log_coefficients": {"1": [0.2, 0.0], "-1": [0.1, 0.0]}}


@dataclass
class RunConfig:
    """Everything a run needs. ``spec`` and the smooth symbols are kept in serialized form."""

    spec: dict = field(default_factory=lambda: {"case": 1})
    n_grid: list = field(default_factory=lambda: list(verification.DEFAULT_N_GRID))
    N_list: list = field(default_factory=lambda: [256, 512, 1024])
    n: int = 6
    window_m: int = verification.DEFAULT_WINDOW
    N_work: Optional[int] = None
    series_N: Optional[int] = None
    fourier_N: int = 16
    psi: dict = field(default_factory=lambda: dict(DEFAULT_PSI))
    variants: list = field(default_factory=lambda: list(verification.VARIANTS))
    fundamental_a: dict = field(default_factory=lambda: dict(DEFAULT_A))
    fundamental_b: dict = field(default_factory=lambda: dict(DEFAULT_B))
    format: str = "csv"
    out: Optional[str] = None

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ValidationError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(**data)
        cfg.check()
        return cfg

    @classmethod
    def loads(cls, text: str) -> "RunConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ValidationError("config must be a JSON object")
        return cls.from_dict(data)

    @classmethod
    def load(cls, path: str) -> "RunConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.loads(fh.read())

    def to_dict(self) -> dict:
        return asdict(self)

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def check(self) -> None:
        if self.format not in ("csv", "text"):
            raise ValidationError("format must be 'csv' or 'text'")
        for name in ("n_grid", "N_list"):
            vals = getattr(self, name)
            if not vals or any(int(v) != v or v < 1 for v in vals):
                raise ValidationError(f"{name} must be a nonempty list of positive integers")
        if self.window_m < 1 or self.n < 1:
            raise ValidationError("window_m and n must be positive")
        bad = set(self.variants) - set(verification.VARIANTS)
        if bad:
            raise ValidationError(f"unknown inverse variants: {sorted(bad)}")

    def problem(self) -> ProblemSpec:
        return ProblemSpec.from_dict(self.spec)


# ---------------------------------------------------------------------------
# report emission
# ---------------------------------------------------------------------------


def fmt(x) -> str:
    if isinstance(x, bool) or x is None:
        return str(x)
    if isinstance(x, int):
        return str(x)
    if isinstance(x, complex):
        return f"{fmt(x.real)}{'+' if not x.imag < 0 else '-'}{fmt(abs(x.imag))}j"
    x = float(x) + 0.0
    if math.isinf(x):
        return "-inf" if x < 0 else "inf"
    return format(x, ".17g")


class Report:
    def __init__(self, command: str, columns: list, fmt_name: str = "csv"):
        self.command = command
        self.columns = columns
        self.format = fmt_name
        self.rows = []
        self.meta = []

    def add(self, *values) -> None:
        self.rows.append(values)

    def note(self, key: str, value) -> None:
        self.meta.append((key, value))

    def render(self) -> str:
        buf = io.StringIO()
        buf.write(f"# schema: {SCHEMA}\n# command: {self.command}\n")
        if self.format == "csv":
            buf.write(",".join(self.columns) + "\n")
            for row in self.rows:
                buf.write(",".join(_cell(v) for v in row) + "\n")
            for key, value in self.meta:
                buf.write(f"# {key}: {_cell(value)}\n")
        else:
            for row in self.rows:
                buf.write("  ".join(f"{c}={_cell(v)}" for c, v in zip(self.columns, row)) + "\n")
            for key, value in self.meta:
                buf.write(f"{key}: {_cell(value)}\n")
        return buf.getvalue()


def _cell(v) -> str:
    if isinstance(v, str):
        return '"' + v.replace('"', '""') + '"' if ("," in v or '"' in v) else v
    return fmt(v)


# ---------------------------------------------------------------------------
# subcommands; each returns (report, exit code)
# ---------------------------------------------------------------------------


def cmd_predict(cfg: RunConfig):
    spec = cfg.problem()
    pred = asymptotics.full_prediction(spec)
    rep = Report("predict", ["case", "G_re", "G_im", "p_re", "p_im", "E_re", "E_im"], cfg.format)
    rep.add(pred.case, pred.G.real, pred.G.imag, pred.p.real, pred.p.imag, pred.E.real, pred.E.imag)
    rep.note("summary", f"G={_short(pred.G)} p={_short(pred.p)} E={_short(pred.E)}")
    for row in asymptotics.term_table_rows():
        if row["case"] == pred.case:
            for k, v in row.items():
                rep.note(f"term {k}", str(v))
    for note in pred.notes:
        rep.note("branch", note)
    return rep, 0


def _short(z: complex) -> str:
    z = complex(z)
    z = complex(round(z.real, 12) + 0.0, round(z.imag, 12) + 0.0)
    return format(z.real, ".12g") if z.imag == 0 else format(z, ".12g")


def cmd_detscan(cfg: RunConfig):
    spec = cfg.problem()
    report = verification.det_scan(spec, cfg.n_grid, cfg.series_N, N_work=cfg.N_work)
    rep = Report(
        "detscan",
        ["n", "logdet_true_mod", "logdet_true_phase", "logdet_pred_mod", "logdet_pred_phase", "abs_ratio_minus_1"],
        cfg.format,
    )
    for r in report.rows:
        rep.add(r.n, r.true.log_modulus, r.true.phase, r.pred.log_modulus, r.pred.phase, r.error)
    if report.p_hat is not None:
        rep.note("p_hat", report.p_hat)
        rep.note("G_hat", math.exp(report.log_G_hat))
        rep.note("fit_ok", report.fit_ok)
    rep.note("trend_ok", report.trend_ok)
    return rep, 0


def _curve_report(name: str, curves: dict, fmt_name: str):
    rep = Report(name, ["curve", "N", "residual"], fmt_name)
    ok = True
    for label, curve in curves.items():
        for N, res in curve.rows:
            rep.add(label, N, float(res))
        rep.note(f"{label} decays", curve.decays)
        for note in curve.notes:
            rep.note(label, note)
        ok = ok and curve.decays
    return rep, 0 if ok else 1


def cmd_verify_reduction(cfg: RunConfig):
    curve = verification.check_reduction_identity(cfg.problem(), cfg.n, cfg.N_list)
    return _curve_report("verify-reduction", {"reduction": curve}, cfg.format)


def cmd_verify_fundamental(cfg: RunConfig):
    a = SmoothSpec.from_dict(cfg.fundamental_a)
    b = SmoothSpec.from_dict(cfg.fundamental_b)
    curves = verification.check_fundamental_identities(a, b, cfg.window_m, cfg.N_list)
    return _curve_report("verify-fundamental", curves, cfg.format)


def cmd_verify_inverse(cfg: RunConfig):
    psi = SmoothSpec.from_dict(cfg.psi)
    curves = {v: verification.check_inverse_formula(psi, v, cfg.window_m, cfg.N_list) for v in cfg.variants}
    return _curve_report("verify-inverse", curves, cfg.format)


def cmd_fourier(cfg: RunConfig):
    spec = cfg.problem()
    a, b = assemble_pair(spec, cfg.fourier_N, cfg.N_work)
    rep = Report("fourier", ["k", "a_re", "a_im", "b_re", "b_im"], cfg.format)
    for k in a.indices:
        rep.add(int(k), a[k].real, a[k].imag, b[k].real, b[k].imag)
    rep.note("a_tail_bound", a.tail_bound)
    rep.note("b_tail_bound", b.tail_bound)
    return rep, 0


def cmd_dump_terms(cfg: RunConfig):
    rows = asymptotics.term_table_rows()
    cols = list(rows[0])
    rep = Report("dump-terms", cols, cfg.format)
    for row in rows:
        rep.add(*(v if isinstance(v, (int, float)) else str(v) for v in row.values()))
    return rep, 0


COMMANDS = {
    "predict": cmd_predict,
    "detscan": cmd_detscan,
    "verify-reduction": cmd_verify_reduction,
    "verify-fundamental": cmd_verify_fundamental,
    "verify-inverse": cmd_verify_inverse,
    "fourier": cmd_fourier,
    "dump-terms": cmd_dump_terms,
}


def _int_list(text: str) -> list:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fhdet", description=__doc__)
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", help="JSON run configuration")
    parser.add_argument("--n-grid", type=_int_list, help="matrix sizes, e.g. 32,64,128")
    parser.add_argument("--outer-N", type=_int_list, help="outer truncations, e.g. 256,512,1024")
    parser.add_argument("--window-m", type=int, help="residual window size")
    parser.add_argument("--out", help="write the report here instead of stdout")
    parser.add_argument("--format", choices=("csv", "text"))
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig.load(args.config) if args.config else RunConfig()
        if args.n_grid:
            cfg.n_grid = args.n_grid
        if args.outer_N:
            cfg.N_list = args.outer_N
            if args.command == "detscan":
                cfg.series_N = max(args.outer_N)
        if args.window_m:
            cfg.window_m = args.window_m
        if args.format:
            cfg.format = args.format
        if args.out:
            cfg.out = args.out
        cfg.check()
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            report, code = COMMANDS[args.command](cfg)
        for w in caught:
            report.note("warning", str(w.message))
    except FHDetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    text = report.render()
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
