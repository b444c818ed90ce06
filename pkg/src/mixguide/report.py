"""Twin-run reports: a delimited timeline plus rendered figures.

Replays an action trace while sampling the twin at a fixed cadence, then
writes timeline.csv (one sampled row per tick plus one per action) and
timeline.png (fill level and mixing progress over the run, with phase
bands) into a report directory.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .twin import (
    Rejection,
    TwinConfig,
    TwinState,
    apply_action,
    new_twin,
    parse_trace,
    phase_of,
    tick,
)

SAMPLE_EVERY_MS = 500

PHASE_COLORS = {
    "Preparation": "#cfe8ff",
    "Assembly": "#ffe9c7",
    "Mixing": "#dcf5dc",
    "Final Steps": "#f3dcf5",
    "Done": "#e8e8e8",
}


@dataclass(frozen=True, slots=True)
class TimelineRow:
    at_ms: int
    event: str  # "sample" or the applied/rejected action name
    detail: str
    phase: str
    fill_level: float
    mix_progress: float

    @staticmethod
    def header() -> list[str]:
        return ["at_ms", "event", "detail", "phase", "fill_level", "mix_progress"]

    def as_list(self) -> list:
        return [
            self.at_ms,
            self.event,
            self.detail,
            self.phase,
            f"{self.fill_level:.4f}",
            f"{self.mix_progress:.4f}",
        ]


def _row(state: TwinState, at_ms: int, event: str, detail: str) -> TimelineRow:
    return TimelineRow(
        at_ms=at_ms,
        event=event,
        detail=detail,
        phase=phase_of(state).label,
        fill_level=state.container.fill_level if state.container else 0.0,
        mix_progress=state.mixture.progress,
    )


def sample_timeline(
    lines: Iterable[str],
    config: TwinConfig | None = None,
    sample_every_ms: int = SAMPLE_EVERY_MS,
) -> tuple[list[TimelineRow], TwinState]:
    """Replay a trace, emitting sampled rows between the action rows."""
    state = new_twin(config)
    rows = [_row(state, 0, "sample", "")]

    def advance_to(target_ms: int):
        nonlocal state
        while state.clock_ms < target_ms:
            step = min(sample_every_ms, target_ms - state.clock_ms)
            state = tick(state, step)
            rows.append(_row(state, state.clock_ms, "sample", ""))

    for entry in parse_trace(lines):
        advance_to(entry.at_ms)
        outcome = apply_action(state, entry.action)
        if isinstance(outcome, Rejection):
            rows.append(
                _row(
                    state,
                    state.clock_ms,
                    f"rejected:{entry.action.type.value}",
                    outcome.reason.value,
                )
            )
        else:
            state = outcome
            rows.append(
                _row(
                    state,
                    state.clock_ms,
                    entry.action.type.value,
                    entry.action.param or "",
                )
            )
    return rows, state


def write_timeline_csv(rows: list[TimelineRow], path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(TimelineRow.header())
        for row in rows:
            writer.writerow(row.as_list())


def render_timeline_figure(rows: list[TimelineRow], path: Path) -> None:
    times = [r.at_ms / 1000.0 for r in rows]
    fig, ax = plt.subplots(figsize=(9, 4.5))

    # Phase bands behind the curves.
    band_start = 0.0
    band_phase = rows[0].phase
    seen = set()
    for r in rows[1:]:
        if r.phase != band_phase:
            ax.axvspan(
                band_start,
                r.at_ms / 1000.0,
                color=PHASE_COLORS[band_phase],
                alpha=0.6,
                label=band_phase if band_phase not in seen else None,
            )
            seen.add(band_phase)
            band_start, band_phase = r.at_ms / 1000.0, r.phase
    ax.axvspan(
        band_start,
        max(times) if times else 1.0,
        color=PHASE_COLORS[band_phase],
        alpha=0.6,
        label=band_phase if band_phase not in seen else None,
    )

    ax.plot(times, [r.fill_level for r in rows], label="fill level", lw=2)
    ax.plot(
        times,
        [r.mix_progress for r in rows],
        label="mixing progress",
        lw=2,
        ls="--",
    )
    for r in rows:
        if r.event not in ("sample",) and not r.event.startswith("rejected:"):
            ax.axvline(r.at_ms / 1000.0, color="grey", lw=0.5, alpha=0.5)

    ax.set_xlabel("twin time (s)")
    ax.set_ylabel("level / progress")
    ax.set_ylim(-0.05, 1.1)
    ax.legend(loc="center left", bbox_to_anchor=(1.01, 0.5), fontsize=8)
    ax.set_title("Twin run timeline")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_report(
    trace_lines: list[str],
    out_dir: Path,
    config: TwinConfig | None = None,
) -> tuple[Path, Path, TwinState]:
    """Write timeline.csv and timeline.png; return their paths and the
    final state."""
    out_dir.mkdir(parents=True, exist_ok=True)
    rows, final_state = sample_timeline(trace_lines, config)
    csv_path = out_dir / "timeline.csv"
    png_path = out_dir / "timeline.png"
    write_timeline_csv(rows, csv_path)
    render_timeline_figure(rows, png_path)
    return csv_path, png_path, final_state
