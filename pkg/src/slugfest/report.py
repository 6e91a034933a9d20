"""End-to-end analysis runs and their persisted artifacts.

``run_full_analysis`` chains detection, gap construction, the global
fit and its goodness-of-fit suite, per-era fits, the era comparison,
and forward predictions.  ``write_run`` persists everything under an
output directory as CSV/JSON plus small static SVG charts, with a
manifest of content hashes so two runs can be compared byte for byte.
Nothing here embeds timestamps: identical inputs produce identical
bytes.
"""

from __future__ import annotations

import hashlib
import json
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .compare import AnovaReport, TukeyInterval, anova_oneway, tukey_hsd, tukey_to_csv
from .counting import (
    CountingConfig,
    compute_iats,
    detect_events,
    events_to_csv,
    iats_to_csv,
)
from .domain import Era, EventOccurrence, ExponentialFit, IatSeries
from .errors import InsufficientDataError, SlugfestError
from .eras import EraFit, default_eras, era_summary_csv, partition_and_fit, worst_fit
from .gof import GofReport, gof_suite
from .ingest import records_to_csv
from .model import EdfPoint, edf, exp_cdf, fit_mle, qq_points
from .predict import Prediction, predict

DEFAULT_SEED = 20090418

DEFAULT_PREDICTION_HORIZONS = (300, 600, 1425, 2430)


def _sig(x: float, digits: int = 9) -> str:
    return f"{x:.{digits}g}"


@dataclass(frozen=True)
class AnalysisConfig:
    """Configuration snapshot for a full analysis run."""

    threshold: int = 20
    first_season_year: int = 1901
    wrap_seasons: bool = True
    eras: tuple[Era, ...] | None = None  # None means the default six
    boundary_gap: str = "later"
    bins: int = 10
    band_level: float = 0.95
    mc_replications: int = 0
    seed: int = DEFAULT_SEED
    prediction_horizons: tuple[int, ...] = DEFAULT_PREDICTION_HORIZONS

    def counting(self) -> CountingConfig:
        return CountingConfig(
            threshold=self.threshold,
            first_season_year=self.first_season_year,
            wrap_seasons=self.wrap_seasons,
        )

    def era_list(self) -> tuple[Era, ...]:
        return self.eras if self.eras is not None else default_eras()

    def to_json_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "first_season_year": self.first_season_year,
            "wrap_seasons": self.wrap_seasons,
            "eras": [
                {"name": e.name, "start_year": e.start_year, "end_year": e.end_year}
                for e in self.era_list()
            ],
            "boundary_gap": self.boundary_gap,
            "bins": self.bins,
            "band_level": self.band_level,
            "mc_replications": self.mc_replications,
            "seed": self.seed,
            "prediction_horizons": list(self.prediction_horizons),
        }


@dataclass
class AnalysisRun:
    """Everything a full run produces, referencing one record snapshot."""

    records_hash: str
    config: AnalysisConfig
    events: list[EventOccurrence]
    iats: IatSeries
    global_fit: ExponentialFit
    global_reports: list[GofReport]
    era_fits: dict[str, EraFit]
    era_reports: dict[str, list[GofReport]]
    anova: AnovaReport
    tukey: list[TukeyInterval]
    season_freq: dict[int, int]
    predictions: list[tuple[str, Prediction]] = field(default_factory=list)


def season_frequency(events, years=None) -> dict[int, int]:
    """Occurrences per calendar year, zero-filled across the given range.

    ``years`` defaults to the span from the first to the last event
    year; pass the corpus season range to zero-fill beyond the events.
    """
    events = list(events)
    if years is None:
        if not events:
            return {}
        years = range(events[0].season, events[-1].season + 1)
    counts = {year: 0 for year in years}
    for e in events:
        counts[e.season] = counts.get(e.season, 0) + 1
    return counts


@contextmanager
def _stage(name: str):
    """Label pipeline errors with the stage that raised them."""
    try:
        yield
    except SlugfestError as exc:
        raise type(exc)(f"{name}: {exc}") from exc


def run_full_analysis(records, config: AnalysisConfig | None = None) -> AnalysisRun:
    """Run the whole pipeline over a sorted game-record list."""
    config = config or AnalysisConfig()
    records = list(records)

    with _stage("detect"):
        if not records:
            raise InsufficientDataError("corpus contains no games")
        events = detect_events(records, config.counting())
        if len(events) < 2:
            raise InsufficientDataError(
                f"corpus yields {len(events)} event(s); need at least 2"
            )

    with _stage("iat"):
        iats = compute_iats(events)

    with _stage("fit"):
        global_fit = fit_mle(iats)

    with _stage("gof"):
        global_reports = gof_suite(
            iats,
            global_fit,
            bins=config.bins,
            mc_replications=config.mc_replications,
            seed=config.seed,
        )

    with _stage("eras"):
        era_fits = partition_and_fit(
            events, config.era_list(), boundary_gap=config.boundary_gap
        )
        era_reports = {}
        for name, ef in era_fits.items():
            if ef.fit is None:
                era_reports[name] = []
                continue
            # The per-era samples are small; ten cells would be hopelessly
            # sparse, so the chi-squared cell count shrinks with the sample.
            era_bins = max(2, min(config.bins, len(ef.iats) // 5)) if len(ef.iats) >= 10 else 2
            era_reports[name] = gof_suite(ef.iats, ef.fit, bins=era_bins)

    with _stage("compare"):
        groups = {
            name: ef.iats for name, ef in era_fits.items() if len(ef.iats) > 0
        }
        anova = anova_oneway(groups)
        tukey = tukey_hsd(groups, family_level=config.band_level)

    with _stage("predict"):
        predictions = []
        for horizon in config.prediction_horizons:
            predictions.append(("global", predict(global_fit.rate, horizon)))
        for name, ef in era_fits.items():
            if ef.fit is None:
                continue
            for horizon in config.prediction_horizons:
                predictions.append((name, predict(ef.fit.rate, horizon)))

    season_years = range(records[0].season, records[-1].season + 1)
    return AnalysisRun(
        records_hash=hashlib.sha256(records_to_csv(records).encode()).hexdigest(),
        config=config,
        events=events,
        iats=iats,
        global_fit=global_fit,
        global_reports=global_reports,
        era_fits=era_fits,
        era_reports=era_reports,
        anova=anova,
        tukey=tukey,
        season_freq=season_frequency(events, season_years),
        predictions=predictions,
    )


# ---------------------------------------------------------------------------
# SVG rendering
# ---------------------------------------------------------------------------

_SVG_W, _SVG_H = 640, 420
_MARGIN = dict(left=60, right=20, top=30, bottom=45)


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _svg_open(title: str) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SVG_W}" height="{_SVG_H}" '
        f'viewBox="0 0 {_SVG_W} {_SVG_H}" font-family="sans-serif" font-size="11">',
        f'<title>{title}</title>',
        f'<rect width="{_SVG_W}" height="{_SVG_H}" fill="white"/>',
    ]


def _plot_box():
    x0 = _MARGIN["left"]
    y0 = _MARGIN["top"]
    x1 = _SVG_W - _MARGIN["right"]
    y1 = _SVG_H - _MARGIN["bottom"]
    return x0, y0, x1, y1


def _scales(x_max: float, y_max: float = 1.0):
    x0, y0, x1, y1 = _plot_box()

    def sx(x: float) -> float:
        return x0 + (x / x_max) * (x1 - x0) if x_max else x0

    def sy(y: float) -> float:
        return y1 - (y / y_max) * (y1 - y0) if y_max else y1

    return sx, sy


def _axes(x_max: float, y_max: float, x_label: str, y_label: str) -> list[str]:
    x0, y0, x1, y1 = _plot_box()
    sx, sy = _scales(x_max, y_max)
    parts = [
        f'<line x1="{x0}" y1="{y1}" x2="{x1}" y2="{y1}" stroke="black"/>',
        f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>',
    ]
    for i in range(6):
        xv = x_max * i / 5
        yv = y_max * i / 5
        parts.append(
            f'<line x1="{_fmt(sx(xv))}" y1="{y1}" x2="{_fmt(sx(xv))}" y2="{y1 + 4}" stroke="black"/>'
            f'<text x="{_fmt(sx(xv))}" y="{y1 + 16}" text-anchor="middle">{_fmt(xv)}</text>'
        )
        parts.append(
            f'<line x1="{x0 - 4}" y1="{_fmt(sy(yv))}" x2="{x0}" y2="{_fmt(sy(yv))}" stroke="black"/>'
            f'<text x="{x0 - 8}" y="{_fmt(sy(yv) + 3)}" text-anchor="end">{_fmt(yv)}</text>'
        )
    parts.append(
        f'<text x="{(x0 + x1) / 2}" y="{_SVG_H - 8}" text-anchor="middle">{x_label}</text>'
    )
    parts.append(
        f'<text x="14" y="{(y0 + y1) / 2}" text-anchor="middle" '
        f'transform="rotate(-90 14 {(y0 + y1) / 2})">{y_label}</text>'
    )
    return parts


def render_edf_cdf(
    edf_points: list[EdfPoint],
    cdf_curve: list[tuple[float, float]],
    title: str = "Observed gaps (EDF) and fitted model (CDF)",
) -> str:
    """Step plot of the EDF with the fitted CDF overlaid.

    Each EDF point contributes exactly one horizontal step segment
    (class ``edf-step``); byte output is deterministic for identical
    inputs.
    """
    if not edf_points or not cdf_curve:
        raise ValueError("point sets must be non-empty")
    x_max = max(max(p.t for p in edf_points), max(t for t, _ in cdf_curve))
    sx, sy = _scales(x_max)
    parts = _svg_open(title)
    parts += _axes(x_max, 1.0, "games between events", "cumulative probability")

    curve = " ".join(f"{_fmt(sx(t))},{_fmt(sy(p))}" for t, p in cdf_curve)
    parts.append(
        f'<polyline points="{curve}" fill="none" stroke="#c0392b" stroke-width="1.5" '
        f'class="model-cdf"/>'
    )

    prev_p = 0.0
    for i, pt in enumerate(edf_points):
        nxt = edf_points[i + 1].t if i + 1 < len(edf_points) else x_max
        parts.append(
            f'<line x1="{_fmt(sx(pt.t))}" y1="{_fmt(sy(pt.empirical_prob))}" '
            f'x2="{_fmt(sx(nxt))}" y2="{_fmt(sy(pt.empirical_prob))}" '
            f'stroke="#2c3e50" stroke-width="1.5" class="edf-step"/>'
        )
        parts.append(
            f'<line x1="{_fmt(sx(pt.t))}" y1="{_fmt(sy(prev_p))}" '
            f'x2="{_fmt(sx(pt.t))}" y2="{_fmt(sy(pt.empirical_prob))}" '
            f'stroke="#2c3e50" stroke-width="0.75" class="edf-riser"/>'
        )
        prev_p = pt.empirical_prob

    x0, y0, _, _ = _plot_box()
    parts.append(
        f'<line x1="{x0 + 10}" y1="{y0 + 10}" x2="{x0 + 40}" y2="{y0 + 10}" '
        f'stroke="#2c3e50" stroke-width="1.5"/>'
        f'<text x="{x0 + 46}" y="{y0 + 14}">observed (EDF)</text>'
        f'<line x1="{x0 + 10}" y1="{y0 + 26}" x2="{x0 + 40}" y2="{y0 + 26}" '
        f'stroke="#c0392b" stroke-width="1.5"/>'
        f'<text x="{x0 + 46}" y="{y0 + 30}">fitted model (CDF)</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_qq(points, title: str = "QQ plot with 95% pointwise bands") -> str:
    """Observed-vs-theoretical quantile scatter with band curves."""
    if not points:
        raise ValueError("point set must be non-empty")
    x_max = max(max(p.observed_quantile for p in points),
                max(p.upper_band for p in points))
    sx, sy = _scales(x_max, x_max)
    parts = _svg_open(title)
    parts += _axes(x_max, x_max, "observed quantile (games)", "model quantile (games)")
    parts.append(
        f'<line x1="{_fmt(sx(0))}" y1="{_fmt(sy(0))}" x2="{_fmt(sx(x_max))}" '
        f'y2="{_fmt(sy(x_max))}" stroke="#7f8c8d" stroke-dasharray="4 3"/>'
    )
    for attr, cls in (("lower_band", "band-lower"), ("upper_band", "band-upper")):
        curve = " ".join(
            f"{_fmt(sx(p.observed_quantile))},{_fmt(sy(getattr(p, attr)))}"
            for p in points
        )
        parts.append(
            f'<polyline points="{curve}" fill="none" stroke="#c0392b" '
            f'stroke-width="0.75" class="{cls}"/>'
        )
    for p in points:
        parts.append(
            f'<circle cx="{_fmt(sx(p.observed_quantile))}" '
            f'cy="{_fmt(sy(p.theoretical_quantile))}" r="2.2" fill="#2c3e50" '
            f'class="qq-point"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_season_frequency(freq: dict[int, int], title: str = "Events per season") -> str:
    if not freq:
        raise ValueError("frequency map must be non-empty")
    years = sorted(freq)
    y_max = max(max(freq.values()), 1)
    x0, y0, x1, y1 = _plot_box()
    bar_w = (x1 - x0) / len(years)
    sy = lambda v: y1 - (v / y_max) * (y1 - y0)  # noqa: E731
    parts = _svg_open(title)
    parts.append(f'<line x1="{x0}" y1="{y1}" x2="{x1}" y2="{y1}" stroke="black"/>')
    for i, year in enumerate(years):
        count = freq[year]
        if count:
            x = x0 + i * bar_w
            parts.append(
                f'<rect x="{_fmt(x)}" y="{_fmt(sy(count))}" width="{_fmt(max(bar_w - 0.5, 0.5))}" '
                f'height="{_fmt(y1 - sy(count))}" fill="#2c3e50" class="season-bar"/>'
            )
        if year % 10 == 0:
            x = x0 + (i + 0.5) * bar_w
            parts.append(
                f'<text x="{_fmt(x)}" y="{y1 + 16}" text-anchor="middle">{year}</text>'
            )
    for v in range(0, y_max + 1, max(1, y_max // 5)):
        parts.append(
            f'<text x="{x0 - 8}" y="{_fmt(sy(v) + 3)}" text-anchor="end">{v}</text>'
        )
    parts.append(
        f'<text x="{(x0 + x1) / 2}" y="{_SVG_H - 8}" text-anchor="middle">season</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_tukey(intervals, title: str = "Family-wise interval chart") -> str:
    if not intervals:
        raise ValueError("interval list must be non-empty")
    x_abs = max(max(abs(t.lower), abs(t.upper)) for t in intervals)
    x0, y0, x1, y1 = _plot_box()
    sx = lambda v: x0 + (v + x_abs) / (2 * x_abs) * (x1 - x0)  # noqa: E731
    row_h = (y1 - y0) / len(intervals)
    parts = _svg_open(title)
    parts.append(
        f'<line x1="{_fmt(sx(0))}" y1="{y0}" x2="{_fmt(sx(0))}" y2="{y1}" '
        f'stroke="#7f8c8d" stroke-dasharray="4 3"/>'
    )
    for i, t in enumerate(intervals):
        y = y0 + (i + 0.5) * row_h
        color = "#c0392b" if t.significant else "#2c3e50"
        parts.append(
            f'<line x1="{_fmt(sx(t.lower))}" y1="{_fmt(y)}" x2="{_fmt(sx(t.upper))}" '
            f'y2="{_fmt(y)}" stroke="{color}" stroke-width="1.5" class="tukey-interval"/>'
        )
        parts.append(
            f'<circle cx="{_fmt(sx(t.mean_difference))}" cy="{_fmt(y)}" r="2.5" '
            f'fill="{color}"/>'
        )
        parts.append(
            f'<text x="{x0 - 8}" y="{_fmt(y + 3)}" text-anchor="end" font-size="9">'
            f"{t.pair[0]}-{t.pair[1]}</text>"
        )
    for v in (-x_abs, -x_abs / 2, 0.0, x_abs / 2, x_abs):
        parts.append(
            f'<text x="{_fmt(sx(v))}" y="{y1 + 16}" text-anchor="middle">{_fmt(v)}</text>'
        )
    parts.append(
        f'<text x="{(x0 + x1) / 2}" y="{_SVG_H - 8}" text-anchor="middle">'
        f"difference in mean gap (games)</text>"
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


# ---------------------------------------------------------------------------
# Persistence
# ---------------------------------------------------------------------------

def _fit_json(fit: ExponentialFit) -> str:
    return json.dumps(
        {
            "rate": fit.rate,
            "n": fit.n,
            "mean": fit.sample_mean,
            "sd": fit.sample_sd,
        },
        sort_keys=True,
    ) + "\n"


def _edf_cdf_csv(iats: IatSeries, fit: ExponentialFit) -> str:
    rows = ["t,edf,cdf"]
    for point in edf(iats):
        model = exp_cdf(point.t, fit.rate)
        rows.append(f"{_sig(point.t)},{_sig(point.empirical_prob)},{_sig(model)}")
    return "\n".join(rows) + "\n"


def _qq_csv(iats: IatSeries, fit: ExponentialFit, band_level: float) -> str:
    rows = ["obs_q,theo_q,lo,hi"]
    for p in qq_points(iats, fit, band_level=band_level):
        rows.append(
            f"{_sig(p.observed_quantile)},{_sig(p.theoretical_quantile)},"
            f"{_sig(p.lower_band)},{_sig(p.upper_band)}"
        )
    return "\n".join(rows) + "\n"


def _cdf_curve(iats: IatSeries, fit: ExponentialFit, points: int = 200):
    t_max = max(iats.values)
    return [
        (t_max * i / (points - 1), exp_cdf(t_max * i / (points - 1), fit.rate))
        for i in range(points)
    ]


def write_run(run: AnalysisRun, outdir) -> dict:
    """Persist a run under ``outdir`` and return the manifest mapping."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    files: dict[str, str] = {}

    def emit(relpath: str, text: str) -> None:
        path = outdir / relpath
        path.parent.mkdir(parents=True, exist_ok=True)
        data = text.encode("utf-8")
        path.write_bytes(data)
        files[relpath] = hashlib.sha256(data).hexdigest()

    emit("events.csv", events_to_csv(run.events))
    emit("iats.csv", iats_to_csv(run.iats))
    emit("fit_global.json", _fit_json(run.global_fit))
    emit(
        "gof_global.jsonl",
        "".join(r.to_json_line() + "\n" for r in run.global_reports),
    )

    for name, ef in run.era_fits.items():
        base = f"eras/{name}"
        emit(f"{base}/iats.csv", iats_to_csv(ef.iats))
        if ef.fit is None:
            continue
        emit(f"{base}/fit.json", _fit_json(ef.fit))
        emit(
            f"{base}/gof.jsonl",
            "".join(r.to_json_line() + "\n" for r in run.era_reports[name]),
        )
        if len(ef.iats) >= 2:
            emit(f"{base}/qq.csv", _qq_csv(ef.iats, ef.fit, run.config.band_level))
            emit(f"{base}/edf_cdf.csv", _edf_cdf_csv(ef.iats, ef.fit))

    emit("anova.json", json.dumps(run.anova.to_json_dict(), sort_keys=True) + "\n")
    emit("tukey.csv", tukey_to_csv(run.tukey))
    emit("era_summary.csv", era_summary_csv(run.era_fits))
    emit(
        "season_frequency.csv",
        "year,count\n"
        + "".join(f"{y},{c}\n" for y, c in sorted(run.season_freq.items())),
    )
    emit(
        "predictions.csv",
        "scope,rate,horizon,probability\n"
        + "".join(
            f"{label},{_sig(p.rate)},{_sig(p.horizon)},{_sig(p.probability)}\n"
            for label, p in run.predictions
        ),
    )
    ranked = worst_fit(run.events, run.global_fit, k=min(10, len(run.events) - 1))
    emit(
        "worst_fit.csv",
        "rank,date,team,runs,iat,survival\n"
        + "".join(
            f"{i},{w.event.date.isoformat()},{w.event.scoring_team},"
            f"{w.event.runs},{w.iat},{_sig(w.survival)}\n"
            for i, w in enumerate(ranked, start=1)
        ),
    )

    emit(
        "figures/edf_cdf.svg",
        render_edf_cdf(edf(run.iats), _cdf_curve(run.iats, run.global_fit)),
    )
    emit(
        "figures/qq.svg",
        render_qq(qq_points(run.iats, run.global_fit, run.config.band_level)),
    )
    emit("figures/season_frequency.svg", render_season_frequency(run.season_freq))
    emit("figures/tukey.svg", render_tukey(run.tukey))

    manifest = {
        "artifact": "slugfest",
        "version": __version__,
        "config": run.config.to_json_dict(),
        "records_hash": run.records_hash,
        "event_count": len(run.events),
        "files": dict(sorted(files.items())),
    }
    (outdir / "manifest.json").write_text(
        json.dumps(manifest, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    return manifest
