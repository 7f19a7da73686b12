"""Monte Carlo evaluation of decoders: failure rates, sweeps, CSV and SVG.

Every trial derives its own random stream from (master_seed, trial_index),
so results are independent of execution order and worker count, and the two
decoders see identical error samples under the same seed (the comparison is
paired by construction).  A trial counts as a failure when the residual
operator is logical or when the final syndrome is nonzero (unresolved).
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from pathlib import Path

import numpy as np

from .channel import NoiseModel, sample_error
from .dqn import QNetwork, rl_decode
from .greedy import GreedyDecoder
from .stabilizer import StabilizerCode

DECODERS = ("greedy", "rl_on_greedy")


@dataclass
class TrialOutcome:
    result: str  # success | logical_failure | unresolved
    greedy_steps: int
    rl_steps: int
    error_weight: int


@dataclass
class SweepRow:
    p: float
    decoder_name: str
    trials: int
    failures: int
    rate: float
    ci_low: float
    ci_high: float


@dataclass
class PairedStats:
    """Bookkeeping from a paired run of both decoders on shared samples."""

    greedy: SweepRow
    rl: SweepRow
    residual_trials: int = 0  # trials where greedy left a nonzero syndrome
    residual_cleared: int = 0  # of those, cleared to zero syndrome by the net
    rl_steps_solved: list[int] = dc_field(default_factory=list)
    greedy_only_failures: int = 0  # failed under greedy, fine under rl
    rl_only_failures: int = 0  # fine under greedy, failed under rl


def wilson_interval(failures: int, trials: int, z: float = 1.959963984540054) -> tuple[float, float]:
    """95% Wilson score interval; well behaved at rates near zero."""
    if trials == 0:
        return 0.0, 1.0
    ph = failures / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    centre = (ph + z2 / (2 * trials)) / denom
    half = z * math.sqrt(ph * (1 - ph) / trials + z2 / (4 * trials * trials)) / denom
    # the bounds are exactly 0 and 1 at the boundary counts; avoid float residue
    lo = 0.0 if failures == 0 else max(0.0, centre - half)
    hi = 1.0 if failures == trials else min(1.0, centre + half)
    return lo, hi


def trial_rng(seed: int, trial_index: int) -> np.random.Generator:
    """The pinned per-trial stream: PCG64 seeded from (seed, trial_index)."""
    return np.random.default_rng([seed, trial_index])


def _classify_outcome(code: StabilizerCode, residual_op: np.ndarray, final_syndrome: np.ndarray) -> str:
    if np.any(final_syndrome):
        return "unresolved"
    cls = code.classify(residual_op)
    if cls in ("identity", "stabilizer"):
        return "success"
    if cls == "logical":
        return "logical_failure"
    return "unresolved"


def run_trial(
    code: StabilizerCode,
    decoder: str,
    noise: NoiseModel,
    net: QNetwork | None,
    rng: np.random.Generator,
    max_rl_steps: int = 10,
) -> TrialOutcome:
    """Sample an error, decode it, classify the residual operator."""
    if decoder not in DECODERS:
        raise ValueError(f"unknown decoder {decoder!r}")
    if decoder == "rl_on_greedy" and net is None:
        raise ValueError("rl_on_greedy requires a trained network")
    gdec = getattr(code, "_greedy_decoder", None)
    if gdec is None:
        gdec = GreedyDecoder(code)
        code._greedy_decoder = gdec

    e = sample_error(noise, code.q, code.n, rng)
    g = gdec.decode(code.syndrome(e))
    correction = g.correction
    s = g.residual
    rl_steps = 0
    if decoder == "rl_on_greedy" and np.any(s):
        rl = rl_decode(code, net, s, max_steps=max_rl_steps)
        correction = (correction + rl.correction) % code.q
        s = rl.final
        rl_steps = rl.steps
    residual_op = (e + correction) % code.q
    return TrialOutcome(
        result=_classify_outcome(code, residual_op, s),
        greedy_steps=g.steps,
        rl_steps=rl_steps,
        error_weight=int(np.count_nonzero(e[: code.n] | e[code.n :])),
    )


def _paired_chunk(args) -> dict:
    """Run trials [start, stop) with both decoders on shared error samples."""
    code, net, noise, seed, start, stop, max_rl_steps = args
    gdec = GreedyDecoder(code)
    q = code.q
    counts = {
        "greedy_failures": 0,
        "rl_failures": 0,
        "residual_trials": 0,
        "residual_cleared": 0,
        "greedy_only": 0,
        "rl_only": 0,
        "rl_steps_solved": [],
    }
    for t in range(start, stop):
        rng = trial_rng(seed, t)
        e = sample_error(noise, q, code.n, rng)
        g = gdec.decode(code.syndrome(e))
        greedy_op = (e + g.correction) % q
        greedy_fail = _classify_outcome(code, greedy_op, g.residual) != "success"

        if np.any(g.residual):
            counts["residual_trials"] += 1
            if net is not None:
                rl = rl_decode(code, net, g.residual, max_steps=max_rl_steps)
                rl_op = (greedy_op + rl.correction) % q
                rl_fail = _classify_outcome(code, rl_op, rl.final) != "success"
                if not np.any(rl.final):
                    counts["residual_cleared"] += 1
                    counts["rl_steps_solved"].append(rl.steps)
            else:
                rl_fail = greedy_fail
        else:
            rl_fail = greedy_fail

        counts["greedy_failures"] += greedy_fail
        counts["rl_failures"] += rl_fail
        counts["greedy_only"] += greedy_fail and not rl_fail
        counts["rl_only"] += rl_fail and not greedy_fail
    return counts


def paired_eval(
    code: StabilizerCode,
    noise: NoiseModel,
    trials: int,
    seed: int,
    net: QNetwork | None,
    max_rl_steps: int = 10,
    workers: int = 1,
) -> PairedStats:
    """Evaluate greedy and rl_on_greedy on identical per-trial streams."""
    if trials < 1:
        raise ValueError("need at least one trial")
    chunks = []
    if workers > 1:
        bounds = np.linspace(0, trials, workers + 1).astype(int)
        jobs = [
            (code, net, noise, seed, int(a), int(b), max_rl_steps)
            for a, b in zip(bounds[:-1], bounds[1:])
            if b > a
        ]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_paired_chunk, jobs))
    else:
        chunks = [_paired_chunk((code, net, noise, seed, 0, trials, max_rl_steps))]

    merged = {k: 0 for k in chunks[0] if k != "rl_steps_solved"}
    steps: list[int] = []
    for c in chunks:
        for k in merged:
            merged[k] += c[k]
        steps.extend(c["rl_steps_solved"])

    def row(name, failures):
        lo, hi = wilson_interval(failures, trials)
        return SweepRow(noise.p, name, trials, failures, failures / trials, lo, hi)

    return PairedStats(
        greedy=row("greedy", merged["greedy_failures"]),
        rl=row("rl_on_greedy", merged["rl_failures"]),
        residual_trials=merged["residual_trials"],
        residual_cleared=merged["residual_cleared"],
        rl_steps_solved=sorted(steps),
        greedy_only_failures=merged["greedy_only"],
        rl_only_failures=merged["rl_only"],
    )


def estimate_failure_rate(
    code: StabilizerCode,
    decoder: str,
    noise: NoiseModel,
    trials: int,
    seed: int,
    net: QNetwork | None = None,
    max_rl_steps: int = 10,
    workers: int = 1,
) -> SweepRow:
    """Failure rate of one decoder with a 95% Wilson interval."""
    if decoder not in DECODERS:
        raise ValueError(f"unknown decoder {decoder!r}")
    if decoder == "rl_on_greedy" and net is None:
        raise ValueError("rl_on_greedy requires a trained network")
    stats = paired_eval(
        code, noise, trials, seed, net if decoder == "rl_on_greedy" else None,
        max_rl_steps=max_rl_steps, workers=workers,
    )
    return stats.greedy if decoder == "greedy" else stats.rl


def sweep(
    code: StabilizerCode,
    decoders: list[str],
    p_list: list[float],
    trials: int,
    seed: int,
    noise_kind: str = "xz3",
    net: QNetwork | None = None,
    max_rl_steps: int = 10,
    workers: int = 1,
    csv_path: str | Path | None = None,
    svg_path: str | Path | None = None,
) -> list[SweepRow]:
    """Rows for each (p, decoder); optionally emits CSV and an SVG chart."""
    if not p_list:
        raise ValueError("p_list must be nonempty")
    for d in decoders:
        if d not in DECODERS:
            raise ValueError(f"unknown decoder {d!r}")
    rows: list[SweepRow] = []
    for p in p_list:
        stats = paired_eval(
            code, NoiseModel(noise_kind, p), trials, seed, net,
            max_rl_steps=max_rl_steps, workers=workers,
        )
        for d in decoders:
            rows.append(stats.greedy if d == "greedy" else stats.rl)
    if csv_path is not None:
        write_csv(rows, csv_path)
    if svg_path is not None:
        write_svg(rows, svg_path)
    return rows


# -- file emission -------------------------------------------------------------

CSV_COLUMNS = ["p", "decoder", "trials", "failures", "rate", "ci_low", "ci_high"]


def write_csv(rows: list[SweepRow], path: str | Path) -> None:
    """Emit the sweep CSV atomically (no partial file on failure)."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    try:
        with open(tmp, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for r in rows:
                writer.writerow(
                    [repr(r.p), r.decoder_name, r.trials, r.failures,
                     repr(r.rate), repr(r.ci_low), repr(r.ci_high)]
                )
        os.replace(tmp, path)
    except OSError:
        tmp.unlink(missing_ok=True)
        raise


def read_csv(path: str | Path) -> list[SweepRow]:
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(r for r in fh if not r.startswith("#"))
        header = next(reader)
        if header != CSV_COLUMNS:
            raise ValueError(f"unexpected CSV header {header}")
        for rec in reader:
            rows.append(
                SweepRow(
                    p=float(rec[0]),
                    decoder_name=rec[1],
                    trials=int(rec[2]),
                    failures=int(rec[3]),
                    rate=float(rec[4]),
                    ci_low=float(rec[5]),
                    ci_high=float(rec[6]),
                )
            )
    return rows


def write_svg(rows: list[SweepRow], path: str | Path) -> None:
    """Self-contained 800x600 line chart, log-scale y, one polyline per decoder.

    Zero rates are clamped to half of one failure per trial count so they
    stay drawable on the log axis.
    """
    path = Path(path)
    by_decoder: dict[str, list[SweepRow]] = {}
    for r in rows:
        by_decoder.setdefault(r.decoder_name, []).append(r)
    for series in by_decoder.values():
        series.sort(key=lambda r: r.p)

    width, height = 800, 600
    ml, mr, mt, mb = 80, 30, 40, 60
    plot_w, plot_h = width - ml - mr, height - mt - mb

    def floor_rate(r: SweepRow) -> float:
        return r.rate if r.rate > 0 else 0.5 / max(1, r.trials)

    xs = sorted({r.p for r in rows})
    ys = [floor_rate(r) for r in rows]
    x_min, x_max = min(xs), max(xs)
    if x_min == x_max:
        x_min, x_max = x_min * 0.9 - 1e-12, x_max * 1.1 + 1e-12
    y_lo = 10 ** math.floor(math.log10(min(ys)))
    y_hi = 10 ** math.ceil(math.log10(max(max(ys), min(ys) * 1.001)))
    if y_lo == y_hi:
        y_hi = y_lo * 10

    def sx(p):
        return ml + plot_w * (p - x_min) / (x_max - x_min)

    def sy(rate):
        t = (math.log10(rate) - math.log10(y_lo)) / (math.log10(y_hi) - math.log10(y_lo))
        return mt + plot_h * (1.0 - t)

    colors = {"greedy": "#c0392b", "rl_on_greedy": "#2563a8"}
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{ml}" y="{mt}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>',
    ]
    # y gridlines at powers of ten
    decade = math.log10(y_lo)
    while decade <= math.log10(y_hi) + 1e-9:
        val = 10**decade
        y = sy(val)
        parts.append(
            f'<line x1="{ml}" y1="{y:.1f}" x2="{ml + plot_w}" y2="{y:.1f}" '
            f'stroke="#cccccc" stroke-width="0.5"/>'
        )
        parts.append(
            f'<text x="{ml - 8}" y="{y + 4:.1f}" text-anchor="end" font-size="12">1e{int(round(decade))}</text>'
        )
        decade += 1
    for p in xs:
        x = sx(p)
        parts.append(
            f'<text x="{x:.1f}" y="{mt + plot_h + 18}" text-anchor="middle" font-size="12">{p:g}</text>'
        )
    parts.append(
        f'<text x="{ml + plot_w / 2:.0f}" y="{height - 15}" text-anchor="middle" '
        f'font-size="14">physical error rate p</text>'
    )
    parts.append(
        f'<text x="20" y="{mt + plot_h / 2:.0f}" text-anchor="middle" font-size="14" '
        f'transform="rotate(-90 20 {mt + plot_h / 2:.0f})">logical failure rate</text>'
    )
    legend_y = mt + 16
    for name, series in sorted(by_decoder.items()):
        color = colors.get(name, "#444444")
        pts = " ".join(f"{sx(r.p):.1f},{sy(floor_rate(r)):.1f}" for r in series)
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="2"/>'
        )
        for r in series:
            parts.append(
                f'<circle cx="{sx(r.p):.1f}" cy="{sy(floor_rate(r)):.1f}" r="3" fill="{color}"/>'
            )
        parts.append(
            f'<line x1="{ml + plot_w - 170}" y1="{legend_y}" x2="{ml + plot_w - 140}" '
            f'y2="{legend_y}" stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{ml + plot_w - 132}" y="{legend_y + 4}" font-size="12">{name}</text>'
        )
        legend_y += 18
    parts.append("</svg>")

    tmp = path.with_name(path.name + ".tmp")
    try:
        tmp.write_text("\n".join(parts))
        os.replace(tmp, path)
    except OSError:
        tmp.unlink(missing_ok=True)
        raise
