"""Acceptance suite.

Each test runs one exit criterion end to end at its stated tolerance and
prints a single verdict line (run with ``pytest -s`` to see them on
success). The corpus is 10,000 seeded synthetic datasets of mixed kinds
with sizes in 1..1000, shared across criteria.
"""

import io
import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest

import brierdecomp as bd
from brierdecomp.binning import BinKind
from brierdecomp.cli import main
from brierdecomp.synthetic import GeneratorKind, GeneratorSpec, SplitMix64

from _helpers import D1_PAIRS, within_bin_forecast_variance

GOLDEN_DIR = Path(__file__).parent / "goldens"
D1_CSV = "forecast,outcome\n0.8,1\n0.2,0\n0.6,1\n0.4,0\n"
CTL = dict(p_low=0.2, p_high=0.8, mix=0.5)
TOL = 1e-12


def _verdict(num: int, label: str, ok: bool, detail: str = "") -> None:
    print(f"criterion {num} [{label}]: {'PASS' if ok else 'FAIL'} {detail}".rstrip())
    assert ok, f"criterion {num} ({label}) failed: {detail}"


def _corpus_specs():
    """10,000 deterministic specs cycling through every generator kind."""
    rng = SplitMix64(20260810)
    kinds = list(GeneratorKind)
    base = GeneratorSpec(kind=GeneratorKind.CALIBRATED_TWO_LEVEL, n=1, seed=0, **CTL)
    for i in range(10_000):
        kind = kinds[i % len(kinds)]
        n = 1 if i % 97 == 0 else max(1, int(round(1000 ** rng.uniform())))
        if i % 500 == 3:
            n = 1000  # keep the upper end of the size range exercised
        seed = rng.next_u64()
        if kind is GeneratorKind.CONSTANT:
            yield GeneratorSpec(kind=kind, n=n, seed=seed, c=rng.uniform(), outcome_rate=rng.uniform())
        elif kind is GeneratorKind.CALIBRATED_TWO_LEVEL:
            yield GeneratorSpec(
                kind=kind,
                n=n,
                seed=seed,
                p_low=0.5 * rng.uniform(),
                p_high=0.5 + 0.5 * rng.uniform(),
                mix=rng.uniform(),
            )
        elif kind is GeneratorKind.BIASED_SHIFT:
            yield GeneratorSpec(kind=kind, n=n, seed=seed, delta=0.4 * (rng.uniform() - 0.5), base=base)
        elif kind is GeneratorKind.VARIANCE_SCALED:
            yield GeneratorSpec(kind=kind, n=n, seed=seed, gamma=2.0 * rng.uniform(), base=base)
        else:
            yield GeneratorSpec(kind=kind, n=n, seed=seed)


@pytest.fixture(scope="module")
def corpus():
    t0 = time.monotonic()
    items = [(spec, bd.generate(spec)) for spec in _corpus_specs()]
    build_seconds = time.monotonic() - t0
    return items, build_seconds


def _brute_bs(ds):
    f = np.asarray(ds.forecasts)
    y = np.asarray(ds.outcomes, dtype=float)
    return float(((f - y) ** 2).mean())


def test_criterion_1_rearrangement_identity(corpus):
    items, build_seconds = corpus
    t0 = time.monotonic()
    worst_vs_yates = 0.0
    worst_vs_brute = 0.0
    for _, ds in items:
        m = bd.accumulate_moments(ds)
        y_sum = bd.yates(m).term_sum
        a_sum = bd.alt_yates(m).term_sum
        bs = _brute_bs(ds)
        worst_vs_yates = max(worst_vs_yates, abs(a_sum - y_sum) / max(1.0, abs(y_sum)))
        worst_vs_brute = max(worst_vs_brute, abs(a_sum - bs) / max(1.0, bs, abs(a_sum)))
    elapsed = build_seconds + (time.monotonic() - t0)
    ok = worst_vs_yates <= TOL and worst_vs_brute <= TOL and elapsed < 30.0
    _verdict(
        1,
        "rearrangement identity",
        ok,
        f"max dev vs yates {worst_vs_yates:.2e}, vs brute force {worst_vs_brute:.2e}, "
        f"{len(items)} datasets in {elapsed:.1f}s",
    )


def test_criterion_2_term_nonnegativity(corpus):
    items, _ = corpus
    adversarial = [
        bd.make_dataset([(0.3, 1), (0.3, 0), (0.3, 0)]),  # constant forecast
        bd.make_dataset([(0.2, 1), (0.9, 1), (0.5, 1)]),  # constant outcome
        bd.make_dataset([(0.7, 0)]),  # single record
        bd.make_dataset([(1.0, 0), (0.0, 1)]),  # anti-correlated
        bd.make_dataset([(1.0, 1), (0.0, 0)]),  # perfect
    ]
    violations = 0
    checked = 0
    for ds in [ds for _, ds in items] + adversarial:
        m = bd.accumulate_moments(ds)
        raw_deficit = 2.0 * (m.sigma_f * m.sigma_y - m.cov_fy)
        if raw_deficit < -TOL:
            violations += 1
        for _, value in bd.alt_yates(m).terms:
            checked += 1
            if value < 0.0:
                violations += 1
    _verdict(2, "term non-negativity", violations == 0, f"{checked} terms checked, {violations} violations")


def test_criterion_3_zero_score_characterization(corpus):
    items, _ = corpus
    perfect_specs = [
        GeneratorSpec(kind=GeneratorKind.PERFECT, n=n, seed=s) for n, s in ((1, 5), (10, 6), (1000, 7))
    ]
    perfect_sets = [ds for spec, ds in items if spec.kind is GeneratorKind.PERFECT]
    perfect_sets += [bd.generate(s) for s in perfect_specs]
    forward_ok = True
    for ds in perfect_sets:
        if bd.brier_score(ds) > TOL:
            forward_ok = False
        if any(v > TOL for _, v in bd.alt_yates(bd.accumulate_moments(ds)).terms):
            forward_ok = False

    converse_ok = True
    converse_checked = 0
    imperfect = [ds for _, ds in items if max(abs(f - y) for f, y in zip(ds.forecasts, ds.outcomes)) >= 0.01]
    # near-perfect dataset spoiled by a single off record
    imperfect.append(bd.make_dataset([(1.0, 1)] * 99 + [(0.99, 0)]))
    for ds in imperfect:
        converse_checked += 1
        if bd.brier_score(ds) < 1e-4 / len(ds):
            converse_ok = False
        if max(v for _, v in bd.alt_yates(bd.accumulate_moments(ds)).terms) < TOL:
            converse_ok = False
    ok = forward_ok and converse_ok and converse_checked > 5000
    _verdict(
        3,
        "zero-score characterization",
        ok,
        f"{len(perfect_sets)} perfect and {converse_checked} imperfect datasets",
    )


def test_criterion_4_correlation_form(corpus):
    items, _ = corpus
    defined = degenerate = 0
    worst = 0.0
    ok = True
    for _, ds in items:
        m = bd.accumulate_moments(ds)
        form = bd.covariance_deficit_correlation_form(m)
        deficit = bd.alt_yates(m).value("covariance_deficit")
        if m.var_f > 0.0 and m.var_y > 0.0:
            defined += 1
            if form is None:
                ok = False
            else:
                worst = max(worst, abs(form - deficit) / max(1.0, abs(deficit)))
        else:
            degenerate += 1
            if form is not None or deficit != 0.0:
                ok = False
    ok = ok and worst <= TOL and defined > 0 and degenerate > 0
    _verdict(
        4,
        "correlation form",
        ok,
        f"{defined} defined (max dev {worst:.2e}), {degenerate} degenerate",
    )


def test_criterion_5_conditional_schemes_exact(corpus):
    items, _ = corpus
    worst_recon = 0.0
    worst_ltv = 0.0
    for _, ds in items:
        bs = _brute_bs(ds)
        r_sanders = bd.sanders(ds)
        r_urr = bd.urr(ds)
        r_exc = bd.excess_correctness(ds)
        r_rdc = bd.rdc(ds)
        for r in (r_sanders, r_urr, r_exc, r_rdc):
            worst_recon = max(worst_recon, abs(r.term_sum - bs) / max(1.0, bs))
        worst_ltv = max(
            worst_ltv,
            abs(r_sanders.value("sharpness") - (r_urr.value("uncertainty") - r_urr.value("resolution"))),
            abs(r_exc.value("excess") - (r_rdc.value("refinement") - r_rdc.value("discrimination"))),
        )
    ok = worst_recon <= TOL and worst_ltv <= TOL
    _verdict(
        5,
        "conditional exactness",
        ok,
        f"max reconstruction dev {worst_recon:.2e}, max total-variance dev {worst_ltv:.2e}",
    )


def test_criterion_6_worked_example_goldens(monkeypatch, capsys):
    ds = bd.make_dataset(D1_PAIRS)
    m = bd.accumulate_moments(ds)
    # independent confirmation of every frozen value before golden comparison
    f = np.array([p[0] for p in D1_PAIRS])
    y = np.array([float(p[1]) for p in D1_PAIRS])
    assert abs(bd.brier_score(ds) - 0.1) <= TOL
    assert abs(float(((f - y) ** 2).mean()) - 0.1) <= TOL
    yates_terms = [v for _, v in bd.yates(m).terms]
    for got, want in zip(yates_terms, (0.05, 0.25, -0.2, 0.0)):
        assert abs(got - want) <= TOL
    sf, sy = math.sqrt(float(((f - f.mean()) ** 2).mean())), math.sqrt(float(((y - y.mean()) ** 2).mean()))
    alt_terms = [v for _, v in bd.alt_yates(m).terms]
    for got, want in zip(alt_terms, ((sf - sy) ** 2, 2 * (sf * sy - 0.1), 0.0)):
        assert abs(got - want) <= TOL
    for got, want in zip(alt_terms, (0.0763932022500210, 0.0236067977499790, 0.0)):
        assert abs(got - want) <= TOL
    r_urr = bd.urr(ds)
    for name, want in (("uncertainty", 0.25), ("resolution", 0.25), ("reliability", 0.1)):
        assert abs(r_urr.value(name) - want) <= TOL
    r_rdc = bd.rdc(ds)
    for name, want in (("refinement", 0.05), ("discrimination", 0.04), ("correctness", 0.09)):
        assert abs(r_rdc.value(name) - want) <= TOL

    args = ["score", "--schemes", "all", "--bins", "2", "--reliability-curve"]
    monkeypatch.setattr("sys.stdin", io.StringIO(D1_CSV))
    assert main(args) == 0
    text_out = capsys.readouterr().out
    monkeypatch.setattr("sys.stdin", io.StringIO(D1_CSV))
    assert main(args + ["--output", "json"]) == 0
    json_out = capsys.readouterr().out

    golden_text = (GOLDEN_DIR / "d1_score.txt").read_text()
    golden_json = (GOLDEN_DIR / "d1_score.json").read_text()
    ok = text_out == golden_text and json_out == golden_json
    _verdict(6, "worked example goldens", ok, "text and json bit-identical to goldens")


def test_criterion_7_streaming_robustness():
    t0 = time.monotonic()
    rng = SplitMix64(777)
    forecasts = []
    outcomes = []
    for _ in range(1_000_000):
        forecasts.append(0.5 + (rng.uniform() - 0.5) * 2e-6)
        outcomes.append(1 if rng.uniform() < 0.5 else 0)
    ds = bd.Dataset(tuple(forecasts), tuple(outcomes))

    streamed = bd.accumulate_moments(ds)
    f = np.array(forecasts)
    y = np.array(outcomes, dtype=float)
    mu_f, mu_y = f.mean(), y.mean()
    oracle = {
        "mu_f": float(mu_f),
        "mu_y": float(mu_y),
        "var_f": float(((f - mu_f) ** 2).mean()),
        "var_y": float(((y - mu_y) ** 2).mean()),
        "cov_fy": float(((f - mu_f) * (y - mu_y)).mean()),
    }
    worst_one_pass = max(
        abs(getattr(streamed, k) - v) / abs(v) for k, v in oracle.items()
    )

    k = 16
    step = len(ds) // k
    chunks = [
        bd.Dataset(ds.forecasts[i * step : (i + 1) * step], ds.outcomes[i * step : (i + 1) * step])
        for i in range(k)
    ]
    merged = bd.accumulate_moments(chunks[0])
    for chunk in chunks[1:]:
        merged = bd.merge_moments(merged, bd.accumulate_moments(chunk))
    worst_merge = max(
        abs(getattr(merged, k_) - getattr(streamed, k_))
        / max(1e-300, abs(getattr(streamed, k_)))
        for k_ in ("mu_f", "mu_y", "var_f", "var_y", "cov_fy")
    )
    elapsed = time.monotonic() - t0
    ok = worst_one_pass <= 1e-10 and worst_merge <= 1e-12 and elapsed < 10.0
    _verdict(
        7,
        "streaming robustness",
        ok,
        f"one-pass dev {worst_one_pass:.2e}, 16-chunk merge dev {worst_merge:.2e}, {elapsed:.1f}s",
    )


def test_criterion_8_binned_residual():
    ds = bd.make_dataset(D1_PAIRS)
    two_bins = bd.make_bins(BinKind.UNIFORM_WIDTH, 2)
    r = bd.binned_urr(ds, two_bins)
    residual_ok = abs(r.residual - 0.01) <= TOL
    wbv = within_bin_forecast_variance(D1_PAIRS, two_bins.edges)
    identity_ok = abs(r.residual - wbv) <= TOL

    isolating = bd.BinningScheme(BinKind.UNIFORM_WIDTH, (0.0, 0.3, 0.5, 0.7, 1.0), 4)
    r_iso = bd.binned_urr(ds, isolating)
    iso_ok = abs(r_iso.residual) <= TOL
    ok = residual_ok and identity_ok and iso_ok
    _verdict(
        8,
        "binned residual",
        ok,
        f"2-bin residual {r.residual!r} (within-bin variance {wbv!r}), "
        f"isolating-bin residual {r_iso.residual!r}",
    )
