"""Command-line surface: ``score`` and ``generate``.

``score`` ingests forecast-outcome pairs (CSV or JSONL), runs the
requested decompositions and prints one report document, human-readable
by default or JSON with ``--output json``. ``generate`` writes a
synthetic dataset as CSV. The two compose over a pipe::

    brierdecomp generate --kind perfect --n 10 --seed 7 | brierdecomp score --schemes all

Exit codes: 0 success, 1 internal invariant violation, 2 input error.
Text output renders numbers with Python's shortest round-trip
representation, so the text and JSON forms carry identical values.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from typing import IO, Callable

from . import __version__
from .binning import BinKind, BinningScheme, ReliabilityCurve, binned_urr, make_bins, reliability_curve
from .conditional import excess_correctness, rdc, sanders, urr
from .core import (
    DEFAULT_TOLERANCE,
    Dataset,
    MomentSummary,
    _check_forecast,
    _check_outcome,
    accumulate_moments,
    brier_score,
)
from .decomp import (
    DecompositionReport,
    OptimalityDiagnosis,
    alt_yates,
    bias_variance,
    check_optimality,
    yates,
)
from .errors import (
    DomainError,
    EmptyInputError,
    InputError,
    InternalConsistencyError,
    InvalidTolerance,
    ParseError,
)
from .synthetic import GeneratorKind, GeneratorSpec, generate_with_stats

SCHEME_FLAGS = (
    "bias-variance",
    "yates",
    "alt-yates",
    "sanders",
    "urr",
    "excess-correctness",
    "rdc",
)


# ---------------------------------------------------------------------------
# ingestion


def _split_lines(text: str) -> list[str]:
    # One trailing newline is fine; anything blank beyond that is garbage
    # and gets reported against its line.
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return [line[:-1] if line.endswith("\r") else line for line in lines]


def _parse_csv(lines: list[str], name: str) -> tuple[list[float], list[int]]:
    if not lines:
        raise EmptyInputError(f"{name}: empty input")
    if lines[0].strip() != "forecast,outcome":
        raise ParseError(f"{name}: line 1: expected header 'forecast,outcome', got {lines[0]!r}")
    forecasts: list[float] = []
    outcomes: list[int] = []
    for ln, line in enumerate(lines[1:], start=2):
        if line.strip() == "":
            raise ParseError(f"{name}: line {ln}: blank line")
        fields = line.split(",")
        if len(fields) != 2:
            raise ParseError(f"{name}: line {ln}: expected 2 fields, got {len(fields)}")
        try:
            f = float(fields[0])
        except ValueError:
            raise ParseError(f"{name}: line {ln}: forecast is not a decimal real: {fields[0]!r}") from None
        try:
            y = int(fields[1])
        except ValueError:
            raise ParseError(f"{name}: line {ln}: outcome is not an integer literal: {fields[1]!r}") from None
        _validate_pair(f, y, name, ln, forecasts, outcomes)
    return forecasts, outcomes


def _parse_jsonl(lines: list[str], name: str) -> tuple[list[float], list[int]]:
    forecasts: list[float] = []
    outcomes: list[int] = []
    for ln, line in enumerate(lines, start=1):
        if line.strip() == "":
            raise ParseError(f"{name}: line {ln}: blank line")
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{name}: line {ln}: invalid JSON: {exc.msg}") from None
        if not isinstance(obj, dict):
            raise ParseError(f"{name}: line {ln}: expected an object per line")
        for key in ("f", "y"):
            if key not in obj:
                raise ParseError(f"{name}: line {ln}: missing field {key!r}")
            if isinstance(obj[key], bool) or not isinstance(obj[key], (int, float)):
                raise ParseError(f"{name}: line {ln}: field {key!r} is not numeric")
        _validate_pair(obj["f"], obj["y"], name, ln, forecasts, outcomes)
    return forecasts, outcomes


def _validate_pair(
    f: object, y: object, name: str, ln: int, forecasts: list[float], outcomes: list[int]
) -> None:
    try:
        forecasts.append(_check_forecast(f))
        outcomes.append(_check_outcome(y))
    except DomainError as exc:
        raise DomainError(f"{name}: line {ln}: {exc}") from None


def ingest(source: IO, fmt: str = "csv", name: str = "<stream>") -> Dataset:
    """Parse a CSV or JSONL stream into a validated dataset.

    Diagnostics carry the stream name and the 1-based physical line
    number (the CSV header is line 1). Accepts LF or CRLF endings and a
    single final newline.
    """
    raw = source.read()
    if isinstance(raw, bytes):
        try:
            text = raw.decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise ParseError(f"{name}: not valid UTF-8: {exc}") from None
    else:
        text = raw.lstrip("﻿")
    lines = _split_lines(text)
    if fmt == "csv":
        forecasts, outcomes = _parse_csv(lines, name)
    elif fmt == "jsonl":
        forecasts, outcomes = _parse_jsonl(lines, name)
    else:
        raise ParseError(f"unknown input format: {fmt!r}")
    if not forecasts:
        raise EmptyInputError(f"{name}: no records")
    return Dataset(tuple(forecasts), tuple(outcomes))


def write_csv(dataset: Dataset, sink: IO) -> None:
    """Write a dataset in the ingestible CSV format at full precision."""
    sink.write("forecast,outcome\n")
    for f, y in zip(dataset.forecasts, dataset.outcomes):
        sink.write(f"{f!r},{y}\n")


# ---------------------------------------------------------------------------
# report document


def _fnum(x: float) -> str:
    return repr(float(x))


@dataclass(frozen=True)
class ReportDocument:
    """Everything one ``score`` invocation reports.

    The JSON form round-trips: ``ReportDocument.from_dict(doc.to_dict())``
    reconstructs an equal document, floats included (serialization uses
    shortest round-trip decimal strings).
    """

    tool_version: str
    source: str
    fmt: str
    n: int
    tolerance: float
    moments: MomentSummary
    brier: float
    schemes: tuple[DecompositionReport, ...]
    optimality: OptimalityDiagnosis
    binning: BinningScheme | None = None
    curve: ReliabilityCurve | None = None

    def to_dict(self) -> dict:
        doc: dict = {
            "tool": {"name": "brierdecomp", "version": self.tool_version},
            "input": {"source": self.source, "format": self.fmt, "n": self.n},
            "tolerance": self.tolerance,
            "moments": {
                "n": self.moments.n,
                "mu_f": self.moments.mu_f,
                "mu_y": self.moments.mu_y,
                "var_f": self.moments.var_f,
                "var_y": self.moments.var_y,
                "cov_fy": self.moments.cov_fy,
            },
            "brier_score": self.brier,
            "schemes": [
                {
                    "scheme": r.scheme,
                    "terms": [
                        {"name": name, "value": value, "sign": sign}
                        for (name, value), sign in zip(r.terms, r.signs)
                    ],
                    "term_sum": r.term_sum,
                    "brier": r.brier,
                    "residual": r.residual,
                    "tolerance": r.tolerance,
                }
                for r in self.schemes
            ],
            "optimality": {
                "variance_gap": self.optimality.variance_gap,
                "correlation_gap": self.optimality.correlation_gap,
                "bias_gap": self.optimality.bias_gap,
                "tolerance": self.optimality.tolerance,
                "variance_matched": self.optimality.variance_matched,
                "perfectly_correlated": self.optimality.perfectly_correlated,
                "unbiased": self.optimality.unbiased,
                "is_perfect": self.optimality.is_perfect,
            },
        }
        if self.binning is not None:
            doc["binning"] = {
                "kind": self.binning.kind.value,
                "edges": list(self.binning.edges),
                "bin_count": self.binning.bin_count,
                "requested_bin_count": self.binning.requested_bin_count,
                "degenerate": self.binning.degenerate,
            }
        if self.curve is not None:
            doc["reliability_curve"] = {
                "n": self.curve.n,
                "bins": [
                    {
                        "lower": b.lower,
                        "upper": b.upper,
                        "count": b.count,
                        "mean_forecast": b.mean_forecast,
                        "event_frequency": b.event_frequency,
                    }
                    for b in self.curve.bins
                ],
            }
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "ReportDocument":
        from .binning import ReliabilityBin  # local: only needed when parsing

        moments = MomentSummary(**doc["moments"])
        schemes = tuple(
            DecompositionReport(
                scheme=entry["scheme"],
                terms=tuple((t["name"], t["value"]) for t in entry["terms"]),
                signs=tuple(t["sign"] for t in entry["terms"]),
                brier=entry["brier"],
                tolerance=entry["tolerance"],
            )
            for entry in doc["schemes"]
        )
        opt = doc["optimality"]
        optimality = OptimalityDiagnosis(
            variance_gap=opt["variance_gap"],
            correlation_gap=opt["correlation_gap"],
            bias_gap=opt["bias_gap"],
            tolerance=opt["tolerance"],
        )
        binning = None
        if "binning" in doc:
            b = doc["binning"]
            binning = BinningScheme(
                kind=BinKind(b["kind"]),
                edges=tuple(b["edges"]),
                requested_bin_count=b["requested_bin_count"],
                degenerate=b["degenerate"],
            )
        curve = None
        if "reliability_curve" in doc:
            c = doc["reliability_curve"]
            curve = ReliabilityCurve(
                bins=tuple(
                    ReliabilityBin(
                        lower=e["lower"],
                        upper=e["upper"],
                        count=e["count"],
                        mean_forecast=e["mean_forecast"],
                        event_frequency=e["event_frequency"],
                    )
                    for e in c["bins"]
                ),
                n=c["n"],
            )
        return cls(
            tool_version=doc["tool"]["version"],
            source=doc["input"]["source"],
            fmt=doc["input"]["format"],
            n=doc["input"]["n"],
            tolerance=doc["tolerance"],
            moments=moments,
            brier=doc["brier_score"],
            schemes=schemes,
            optimality=optimality,
            binning=binning,
            curve=curve,
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ReportDocument":
        return cls.from_dict(json.loads(text))

    def render_text(self) -> str:
        out: list[str] = []
        out.append(f"brierdecomp {self.tool_version}")
        out.append(f"input: source={self.source} format={self.fmt} n={self.n}")
        out.append(f"tolerance: {_fnum(self.tolerance)}")
        out.append("")
        out.append("moments")
        m = self.moments
        for label, value in (
            ("n", str(m.n)),
            ("mu_f", _fnum(m.mu_f)),
            ("mu_y", _fnum(m.mu_y)),
            ("var_f", _fnum(m.var_f)),
            ("var_y", _fnum(m.var_y)),
            ("cov_fy", _fnum(m.cov_fy)),
        ):
            out.append(f"  {label:<6} {value}")
        out.append("")
        out.append(f"brier_score {_fnum(self.brier)}")
        for r in self.schemes:
            out.append("")
            header = f"scheme {r.scheme}"
            if r.scheme == "binned_urr" and self.binning is not None:
                header += (
                    f" (bins={self.binning.bin_count} kind={self.binning.kind.value}"
                    f"{' degenerate' if self.binning.degenerate else ''})"
                )
            out.append(header)
            width = max(len(name) for name, _ in r.terms)
            width = max(width, len("residual"))
            for (name, value), sign in zip(r.terms, r.signs):
                mark = "+" if sign >= 0 else "-"
                out.append(f"  {mark} {name:<{width}} {_fnum(value)}")
            out.append(f"    {'sum':<{width}} {_fnum(r.term_sum)}")
            out.append(f"    {'residual':<{width}} {_fnum(r.residual)}")
        o = self.optimality
        out.append("")
        out.append(f"optimality tol={_fnum(o.tolerance)}")
        rows = (
            ("variance_matched", o.variance_matched, o.variance_gap),
            ("perfectly_correlated", o.perfectly_correlated, o.correlation_gap),
            ("unbiased", o.unbiased, o.bias_gap),
        )
        for label, ok, gap in rows:
            out.append(f"  {label:<20} {'yes' if ok else 'no':<3} gap={_fnum(gap)}")
        out.append(f"  {'is_perfect':<20} {'yes' if o.is_perfect else 'no'}")
        if self.curve is not None:
            out.append("")
            out.append(f"reliability_curve n={self.curve.n} bins={len(self.curve.bins)}")
            for i, b in enumerate(self.curve.bins):
                closer = "]" if i == len(self.curve.bins) - 1 else ")"
                span = f"[{_fnum(b.lower)}, {_fnum(b.upper)}{closer}"
                if b.empty:
                    out.append(f"  bin {i} {span} count=0 (empty)")
                else:
                    out.append(
                        f"  bin {i} {span} count={b.count}"
                        f" mean_forecast={_fnum(b.mean_forecast)}"
                        f" event_frequency={_fnum(b.event_frequency)}"
                    )
        out.append("")
        return "\n".join(out)


# ---------------------------------------------------------------------------
# score command

_SchemeRunner = Callable[[Dataset, MomentSummary, float], DecompositionReport]

_SCHEME_RUNNERS: dict[str, _SchemeRunner] = {
    "bias-variance": lambda ds, m, tol: bias_variance(m, tolerance=tol),
    "yates": lambda ds, m, tol: yates(m, tolerance=tol),
    "alt-yates": lambda ds, m, tol: alt_yates(m, tolerance=tol),
    "sanders": lambda ds, m, tol: sanders(ds, tolerance=tol),
    "urr": lambda ds, m, tol: urr(ds, tolerance=tol),
    "excess-correctness": lambda ds, m, tol: excess_correctness(ds, tolerance=tol),
    "rdc": lambda ds, m, tol: rdc(ds, tolerance=tol),
}


def _parse_schemes(raw: str) -> list[str]:
    names = [part.strip() for part in raw.split(",") if part.strip()]
    if not names:
        raise ParseError(f"--schemes got no scheme names: {raw!r}")
    if "all" in names:
        return list(SCHEME_FLAGS)
    for nm in names:
        if nm not in _SCHEME_RUNNERS:
            raise ParseError(
                f"unknown scheme {nm!r}; choose from {', '.join(SCHEME_FLAGS)} or 'all'"
            )
    return names


def _check_tol(tol: float) -> float:
    if math.isnan(tol) or tol <= 0.0:
        raise InvalidTolerance(f"--tol must be a positive real, got {tol!r}")
    return tol


def _run_score(args: argparse.Namespace) -> int:
    tol = _check_tol(args.tol)
    scheme_names = _parse_schemes(args.schemes)
    source_name = "<stdin>" if args.input == "-" else args.input
    if args.reliability_curve and args.bins is None:
        raise ParseError("--reliability-curve requires --bins")
    if args.input == "-":
        dataset = ingest(sys.stdin, args.format, name=source_name)
    else:
        try:
            handle = open(args.input, "rb")
        except OSError as exc:
            raise ParseError(f"{source_name}: cannot open input: {exc.strerror}") from None
        with handle:
            dataset = ingest(handle, args.format, name=source_name)

    moments = accumulate_moments(dataset)
    reports = [_SCHEME_RUNNERS[nm](dataset, moments, tol) for nm in scheme_names]

    binning = None
    curve = None
    if args.bins is not None:
        kind = BinKind.UNIFORM_WIDTH if args.bin_kind == "uniform" else BinKind.QUANTILE
        binning = make_bins(kind, args.bins, dataset)
        reports.append(binned_urr(dataset, binning, tolerance=tol))
        if args.reliability_curve:
            curve = reliability_curve(dataset, binning)

    doc = ReportDocument(
        tool_version=__version__,
        source=source_name,
        fmt=args.format,
        n=len(dataset),
        tolerance=tol,
        moments=moments,
        brier=brier_score(dataset),
        schemes=tuple(reports),
        optimality=check_optimality(moments, tol),
        binning=binning,
        curve=curve,
    )
    rendered = doc.to_json() if args.output == "json" else doc.render_text()
    sys.stdout.write(rendered)
    return 0


# ---------------------------------------------------------------------------
# generate command

_KIND_FLAGS = {
    "perfect": GeneratorKind.PERFECT,
    "constant": GeneratorKind.CONSTANT,
    "calibrated-two-level": GeneratorKind.CALIBRATED_TWO_LEVEL,
    "biased-shift": GeneratorKind.BIASED_SHIFT,
    "variance-scaled": GeneratorKind.VARIANCE_SCALED,
    "anti-correlated": GeneratorKind.ANTI_CORRELATED,
    "random-uniform": GeneratorKind.RANDOM_UNIFORM,
}

_BASE_KIND_FLAGS = {
    k: v
    for k, v in _KIND_FLAGS.items()
    if v not in (GeneratorKind.BIASED_SHIFT, GeneratorKind.VARIANCE_SCALED)
}


def _kind_params(kind: GeneratorKind, args: argparse.Namespace) -> dict:
    if kind is GeneratorKind.CONSTANT:
        return {"c": args.c, "outcome_rate": args.outcome_rate}
    if kind is GeneratorKind.CALIBRATED_TWO_LEVEL:
        return {"p_low": args.p_low, "p_high": args.p_high, "mix": args.mix}
    return {}


def _build_spec(args: argparse.Namespace) -> GeneratorSpec:
    kind = _KIND_FLAGS[args.kind]
    if kind is GeneratorKind.BIASED_SHIFT or kind is GeneratorKind.VARIANCE_SCALED:
        base_kind = _BASE_KIND_FLAGS[args.base_kind]
        base = GeneratorSpec(
            kind=base_kind, n=args.n, seed=args.seed, **_kind_params(base_kind, args)
        )
        param = {"delta": args.delta} if kind is GeneratorKind.BIASED_SHIFT else {"gamma": args.gamma}
        return GeneratorSpec(kind=kind, n=args.n, seed=args.seed, base=base, **param)
    return GeneratorSpec(kind=kind, n=args.n, seed=args.seed, **_kind_params(kind, args))


def _run_generate(args: argparse.Namespace) -> int:
    spec = _build_spec(args)
    dataset, stats = generate_with_stats(spec)
    if stats.clipped:
        print(f"note: clipped {stats.clipped} forecasts into [0, 1]", file=sys.stderr)
    if args.output_path == "-":
        write_csv(dataset, sys.stdout)
    else:
        with open(args.output_path, "w", encoding="utf-8", newline="\n") as handle:
            write_csv(dataset, handle)
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="brierdecomp",
        description="Brier score decompositions for binary forecast-outcome data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    score = sub.add_parser("score", help="decompose a forecast-outcome dataset")
    score.add_argument("--input", default="-", help="input path, or - for stdin (default)")
    score.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    score.add_argument(
        "--schemes",
        default="all",
        help=f"comma-separated list from: {', '.join(SCHEME_FLAGS)}, or 'all' (default)",
    )
    score.add_argument("--bins", type=int, default=None, help="also run binned URR with N bins")
    score.add_argument("--bin-kind", choices=("uniform", "quantile"), default="uniform")
    score.add_argument(
        "--reliability-curve",
        action="store_true",
        help="include the per-bin reliability curve (requires --bins)",
    )
    score.add_argument("--tol", type=float, default=DEFAULT_TOLERANCE, help="identity tolerance")
    score.add_argument("--output", choices=("text", "json"), default="text")

    gen = sub.add_parser("generate", help="write a synthetic dataset as CSV")
    gen.add_argument("--kind", choices=sorted(_KIND_FLAGS), required=True)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--c", type=float, default=None, help="constant forecast value")
    gen.add_argument("--outcome-rate", type=float, default=None, help="event rate for constant kind")
    gen.add_argument("--p-low", type=float, default=0.2)
    gen.add_argument("--p-high", type=float, default=0.8)
    gen.add_argument("--mix", type=float, default=0.5)
    gen.add_argument("--delta", type=float, default=None, help="forecast shift for biased-shift")
    gen.add_argument("--gamma", type=float, default=None, help="spread factor for variance-scaled")
    gen.add_argument(
        "--base-kind",
        choices=sorted(_BASE_KIND_FLAGS),
        default="calibrated-two-level",
        help="base dataset kind for the transform kinds",
    )
    gen.add_argument("--output-path", default="-", help="output path, or - for stdout (default)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "score":
            return _run_score(args)
        return _run_generate(args)
    except InternalConsistencyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
