"""Command-line front end: ingest, guide, validate, serve, replay, twin-sim."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .service.config import load_config
from .service.replay import replay_session_log
from .service.store import ArtifactStore
from .transcript import (
    SegmentationRules,
    TranscriptError,
    parse_subtitle,
    parse_transcript_json,
    segment_into_steps,
)
from .twin import TwinConfig, phase_of


def _detect_format(path: Path, explicit: str) -> str:
    if explicit != "auto":
        return explicit
    suffix = path.suffix.lower().lstrip(".")
    return suffix if suffix in ("srt", "vtt") else "json"


def _parse_file(path: Path, format: str, task_id: str, language_tag: str):
    data = path.read_bytes()
    if format == "json":
        return parse_transcript_json(data)
    return parse_subtitle(data, format, task_id=task_id, language_tag=language_tag)


@click.group()
def main():
    """Compile narrated walkthroughs into guided training sessions."""


@main.command()
@click.argument("file", type=click.Path(exists=True, path_type=Path))
@click.option("--format", default="auto", type=click.Choice(["auto", "json", "srt", "vtt"]))
@click.option("--task-id", default="task", help="Task id for subtitle ingests.")
@click.option("--language-tag", default="und")
@click.option("--data-dir", default="data", type=click.Path(path_type=Path))
@click.option("--media", type=click.Path(exists=True, path_type=Path), default=None,
              help="Expert video file to store alongside the transcript.")
def ingest(file, format, task_id, language_tag, data_dir, media):
    """Parse, validate, and store a transcript (JSON, SRT, or VTT)."""
    fmt = _detect_format(file, format)
    try:
        transcript = _parse_file(file, fmt, task_id, language_tag)
    except TranscriptError as exc:
        raise click.ClickException(f"rejected: {exc}")
    store = ArtifactStore(data_dir)
    transcript_id = store.save_transcript(transcript)
    click.echo(f"transcript {transcript_id} ({len(transcript.segments)} segments, "
               f"{transcript.duration_ms} ms)")
    if media is not None:
        media_id = store.save_media(
            media.read_bytes(),
            "video/mp4" if media.suffix == ".mp4" else "application/octet-stream",
            media.suffix,
        )
        click.echo(f"media {media_id}")


@main.command()
@click.argument("transcript_id")
@click.option("--marker", multiple=True, help="Marker phrase starting a new step.")
@click.option("--boundary", multiple=True, help="Segment id starting a new step.")
@click.option("--data-dir", default="data", type=click.Path(path_type=Path))
def guide(transcript_id, marker, boundary, data_dir):
    """Compile a stored transcript into a step guide."""
    store = ArtifactStore(data_dir)
    try:
        transcript = store.load_transcript(transcript_id)
    except KeyError:
        raise click.ClickException(f"unknown transcript {transcript_id}")
    rules = None
    if marker or boundary:
        rules = SegmentationRules.from_phrases(list(marker), set(boundary))
    compiled = segment_into_steps(transcript, rules)
    guide_id = store.save_guide(compiled)
    click.echo(f"guide {guide_id}")
    for step in compiled.steps:
        click.echo(
            f"  {step.index}: {step.title}  "
            f"[{step.window.start_ms}..{step.window.end_ms} ms]  "
            f"{len(step.segment_ids)} segments"
        )


@main.command()
@click.argument("file", type=click.Path(exists=True, path_type=Path))
@click.option("--format", default="auto", type=click.Choice(["auto", "json", "srt", "vtt"]))
def validate(file, format):
    """Check a transcript document; exit nonzero when it is rejected."""
    fmt = _detect_format(file, format)
    try:
        transcript = _parse_file(file, fmt, "task", "und")
    except TranscriptError as exc:
        click.echo(f"INVALID: {exc}")
        sys.exit(1)
    click.echo(
        f"OK: {len(transcript.segments)} segments, {transcript.duration_ms} ms"
    )


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True, path_type=Path),
              default=None)
@click.option("--host", default=None)
@click.option("--port", default=None, type=int)
def serve(config_path, host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service.app import create_app

    config = load_config(config_path)
    app = create_app(config)
    uvicorn.run(app, host=host or config.host, port=port or config.port)


@main.command()
@click.argument("session_log", type=click.Path(exists=True, path_type=Path))
@click.option("--data-dir", default="data", type=click.Path(path_type=Path))
def replay(session_log, data_dir):
    """Re-run a session log against the scripted responder and diff."""
    entries = [
        json.loads(line)
        for line in session_log.read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    store = ArtifactStore(data_dir)
    report = replay_session_log(entries, store)
    click.echo(
        f"session {report.session_id}: {report.turns_replayed} turns, "
        f"{report.twin_events_replayed} twin events replayed"
    )
    if report.identical:
        click.echo("replay identical")
        return
    for diff in report.diffs:
        click.echo(f"  seq {diff.seq} {diff.field}:")
        click.echo(f"    recorded: {diff.recorded!r}")
        click.echo(f"    replayed: {diff.replayed!r}")
    sys.exit(1)


@main.command("twin-sim")
@click.argument("trace_file", type=click.Path(exists=True, path_type=Path))
@click.option("--config", "config_path", type=click.Path(exists=True, path_type=Path),
              default=None, help="Service config supplying the twin constants.")
@click.option("--report", "report_dir", type=click.Path(path_type=Path), default=None,
              help="Directory for timeline.csv and timeline.png.")
def twin_sim(trace_file, config_path, report_dir):
    """Replay an action trace; print the final twin state and phase."""
    twin_config = load_config(config_path).twin if config_path else TwinConfig()
    lines = trace_file.read_text(encoding="utf-8").splitlines()

    from .report import sample_timeline, write_report
    from .twin import TraceError

    try:
        if report_dir is not None:
            csv_path, png_path, final_state = write_report(
                lines, report_dir, twin_config
            )
            click.echo(f"report: {csv_path}")
            click.echo(f"report: {png_path}")
        else:
            _, final_state = sample_timeline(lines, twin_config)
    except (TraceError, ValueError) as exc:
        raise click.ClickException(str(exc))
    click.echo(json.dumps(final_state.to_dict(), indent=2, sort_keys=True))
    click.echo(f"phase: {phase_of(final_state).label}")


if __name__ == "__main__":
    main()
