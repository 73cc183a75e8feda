"""Command-line interface; every command is a thin adapter over the library.

Exit codes: 0 success, 1 domain error (printed as ``error[code]: message``),
2 usage error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .errors import DefectDepError
from .graph import count, extract_defect_flow
from .emitter import emit_istarml
from .metric import ensure_metric, recompute_all, render_ratio
from .parser import parse_istarml
from .prioritize import PriorityConfig
from .store import DefectReport, ModelStore
from .validation import validate
from .workflow import rank_defects, triage_report

DEFAULT_STORE = "./defectdep-store"


def _fail(error: DefectDepError) -> None:
    click.echo(f"error[{error.code}]: {error.message}", err=True)
    sys.exit(1)


def _counts_line(counts) -> str:
    return f"actors={counts.actors} dependees={counts.dependees} dependers={counts.dependers}"


@click.group()
@click.option(
    "--store",
    "store_root",
    envvar="DEFECTDEP_STORE",
    default=DEFAULT_STORE,
    show_default=True,
    help="Store root directory (env: DEFECTDEP_STORE).",
)
@click.pass_context
def main(ctx: click.Context, store_root: str) -> None:
    """Defect dependency analysis over istarml SD models."""
    ctx.obj = store_root


def _store(ctx: click.Context) -> ModelStore:
    return ModelStore(ctx.obj)


@main.command("validate")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
def validate_cmd(file: str) -> None:
    """Parse FILE tolerantly and print its validation report."""
    try:
        model = parse_istarml(Path(file).read_bytes())
    except DefectDepError as exc:
        _fail(exc)
    report = validate(model)
    click.echo(f"ok: {'true' if report.ok else 'false'}")
    for finding in report.findings:
        click.echo(f"{finding.severity} {finding.code} {finding.location}: {finding.message}")
    if not report.ok:
        sys.exit(1)


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
def counts(file: str) -> None:
    """Print actor/dependee/depender counts for FILE."""
    try:
        model = parse_istarml(Path(file).read_bytes())
    except DefectDepError as exc:
        _fail(exc)
    click.echo(_counts_line(count(model)))


@main.command("ingest-model")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--version", required=True, help="Version id to register.")
@click.pass_context
def ingest_model(ctx: click.Context, file: str, version: str) -> None:
    """Validate FILE and store it as a product model version."""
    try:
        entry = _store(ctx).put_model(Path(file).read_bytes(), version)
    except DefectDepError as exc:
        _fail(exc)
    click.echo(f"stored model {entry.version}: {_counts_line(entry.counts)}")


@main.command("ingest-defect")
@click.option("--file", "file_", type=click.Path(exists=True, dir_okay=False),
              help="Defect report as a JSON document.")
@click.option("--id", "defect_id", default=None, help="Defect id (unless --file).")
@click.option("--title", default="")
@click.option("--module", default="")
@click.option("--product", default="")
@click.option("--severity", default="low", show_default=True)
@click.option("--seed", "seeds", multiple=True, help="Seed actor id (repeatable).")
@click.option("--depth", default=1, show_default=True, type=int)
@click.option("--factor", "factors", multiple=True, metavar="NAME=LEVEL",
              help="Additional factor level (repeatable).")
@click.pass_context
def ingest_defect(ctx, file_, defect_id, title, module, product, severity, seeds, depth, factors):
    """Store a defect report from a JSON file or from flags."""
    if file_:
        report = DefectReport.from_record(json.loads(Path(file_).read_text("utf-8")))
    elif defect_id:
        factor_values = []
        for item in factors:
            name, sep, level = item.partition("=")
            if not sep:
                raise click.UsageError(f"--factor expects NAME=LEVEL, got {item!r}")
            factor_values.append((name, level))
        report = DefectReport(
            defect_id=defect_id,
            title=title,
            module=module,
            product=product,
            severity=severity,
            factor_values=tuple(factor_values),
            seed_actors=tuple(seeds),
            depth=depth,
        )
    else:
        raise click.UsageError("provide --file or --id")
    try:
        stored = _store(ctx).put_defect(report)
    except DefectDepError as exc:
        _fail(exc)
    click.echo(f"stored defect {stored.defect_id} (status {stored.status})")


@main.command()
@click.option("--version", required=True, help="Product model version.")
@click.option("--defect", "defect_id", default=None, help="Use a stored defect's seeds.")
@click.option("--seed", "seeds", multiple=True, help="Seed actor id (repeatable).")
@click.option("--depth", default=None, type=int, help="Closure depth (default 1).")
@click.option("--out", type=click.Path(dir_okay=False), help="Write the subgraph XML here.")
@click.pass_context
def extract(ctx, version, defect_id, seeds, depth, out):
    """Extract a defect-flow subgraph and print its counts."""
    store = _store(ctx)
    try:
        product = store.get_model(version)
        if defect_id:
            defect = store.get_defect(defect_id)
            seeds = defect.seed_actors
            depth = depth or defect.depth
        flow = extract_defect_flow(product, list(seeds), depth or 1, defect_id=defect_id or "")
    except DefectDepError as exc:
        _fail(exc)
    for seed in flow.unknown_seeds:
        click.echo(f"warning: seed {seed!r} not in model version {version}", err=True)
    click.echo(_counts_line(count(flow.subgraph)))
    if out:
        Path(out).write_bytes(emit_istarml(flow.subgraph, check=False))


@main.command()
@click.option("--defect", "defect_id", required=True)
@click.option("--version", required=True)
@click.option("--format", "fmt", type=click.Choice(["human", "records"]), default="human",
              show_default=True)
@click.option("--no-timestamps", is_flag=True, help="Omit computed_at for byte-stable output.")
@click.pass_context
def metric(ctx, defect_id, version, fmt, no_timestamps):
    """Compute (or fetch) a defect's dependency metric for a version."""
    try:
        result = ensure_metric(_store(ctx), defect_id, version)
    except DefectDepError as exc:
        _fail(exc)
    record = result.to_record()
    if no_timestamps:
        record.pop("computed_at")
    if fmt == "records":
        click.echo(json.dumps(record, sort_keys=True))
        return
    click.echo(f"defect={result.defect_id} version={result.product_version}")
    click.echo(f"a={record['a']} b={record['b']} D={record['D']} ({record['D_percent']})")
    if not no_timestamps:
        click.echo(f"computed_at={record['computed_at']}")


@main.command()
@click.option("--version", required=True, help="Recompute against this product version.")
@click.option("--include-fixed", is_flag=True, help="Also recompute fixed defects.")
@click.option("--format", "fmt", type=click.Choice(["human", "records"]), default="human",
              show_default=True)
@click.pass_context
def recompute(ctx, version, include_fixed, fmt):
    """Recompute stored defects against a product version and print deltas."""
    try:
        entries = recompute_all(_store(ctx), version, include_fixed=include_fixed)
    except DefectDepError as exc:
        _fail(exc)
    for entry in entries:
        if fmt == "records":
            click.echo(json.dumps({
                "defect_id": entry.defect_id,
                "result": entry.result.to_record() if entry.result else None,
                "previous": entry.previous.to_record() if entry.previous else None,
                "unknown_seeds": list(entry.unknown_seeds),
                "error": entry.error,
            }, sort_keys=True))
            continue
        for seed in entry.unknown_seeds:
            click.echo(f"warning: {entry.defect_id} seed {seed!r} not in version {version}", err=True)
        if entry.error:
            click.echo(f"{entry.defect_id} error[{entry.error}]")
            continue
        new = entry.result.ratio
        if entry.previous is None:
            click.echo(f"{entry.defect_id} D - -> {render_ratio(new)}")
        else:
            old = entry.previous.ratio
            delta = new - old
            sign = "+" if delta >= 0 else "-"
            click.echo(
                f"{entry.defect_id} D {render_ratio(old)} -> {render_ratio(new)} "
                f"({sign}{render_ratio(abs(delta))})"
            )


@main.command()
@click.option("--version", default=None, help="Rank against this version (default: latest).")
@click.option("--config", "config_file", type=click.Path(exists=True, dir_okay=False),
              help="Priority config JSON overriding the stored one.")
@click.option("--status", default="open", show_default=True,
              help="Defect status filter; 'all' ranks everything.")
@click.option("--format", "fmt", type=click.Choice(["human", "records"]), default="human",
              show_default=True)
@click.pass_context
def rank(ctx, version, config_file, status, fmt):
    """Rank stored defects by score (ratio plus weighted factors)."""
    store = _store(ctx)
    try:
        config = (
            PriorityConfig.from_dict(json.loads(Path(config_file).read_text("utf-8")))
            if config_file
            else None
        )
        rows = rank_defects(store, version, config, status=status)
    except DefectDepError as exc:
        _fail(exc)
    if fmt == "records":
        for row in rows:
            click.echo(json.dumps(row.to_record(), sort_keys=True))
        return
    if not rows:
        click.echo("no defects to rank")
        return
    factor_names = sorted({name for row in rows for name, _ in row.factor_values})
    header = ["rank", "defect", "score", "D", "D%"] + factor_names
    table = [header]
    for row in rows:
        record = row.to_record()
        values = dict(row.factor_values)
        table.append(
            [str(row.rank), row.defect_id, record["score"], record["D"], record["D_percent"]]
            + [values.get(name, "-") for name in factor_names]
        )
    widths = [max(len(line[i]) for line in table) for i in range(len(header))]
    for line in table:
        click.echo("  ".join(cell.ljust(width) for cell, width in zip(line, widths)).rstrip())


@main.command()
@click.option("--version", default=None, help="Version for the ranking section.")
@click.pass_context
def report(ctx, version):
    """Print a plain-text triage summary of the store."""
    try:
        click.echo(triage_report(_store(ctx), version), nl=False)
    except DefectDepError as exc:
        _fail(exc)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8571, show_default=True, type=int)
@click.option("--ui", "ui_dir", type=click.Path(file_okay=False), default=None,
              help="Serve a built dashboard from this directory at /.")
@click.pass_context
def serve(ctx, host, port, ui_dir):
    """Run the HTTP service API."""
    import uvicorn

    from .service import create_app

    app = create_app(ctx.obj, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
