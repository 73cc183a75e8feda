"""Store-aware orchestration shared by the CLI and the HTTP service."""

from __future__ import annotations

from .errors import NotFound
from .metric import ensure_metric
from .prioritize import PriorityConfig, RankedDefect, rank
from .store import ModelStore


def latest_version(store: ModelStore) -> str:
    versions = store.list_versions()
    if not versions:
        raise NotFound("store has no product model versions")
    return versions[-1].version


def rank_defects(
    store: ModelStore,
    version: str | None = None,
    config: PriorityConfig | None = None,
    *,
    status: str = "open",
) -> list[RankedDefect]:
    """Rank stored defects against one product version.

    Metrics missing for that version are computed (and persisted) on the fly.
    """
    version = version or latest_version(store)
    config = config or store.load_priority_config()
    defects = store.list_defects(status=None if status == "all" else status)
    pairs = []
    titles = {}
    for defect in defects:
        result = ensure_metric(store, defect.defect_id, version)
        pairs.append((result, defect.factors()))
        titles[defect.defect_id] = defect.title
    return rank(pairs, config, titles=titles)


def triage_report(store: ModelStore, version: str | None = None) -> str:
    """Plain-text triage summary: versions, defect tallies, current ranking."""
    lines = []
    versions = store.list_versions()
    lines.append("defect dependency triage report")
    lines.append("")
    lines.append(f"product versions ({len(versions)}):")
    for entry in versions:
        c = entry.counts
        lines.append(
            f"  {entry.version}: actors={c.actors} dependees={c.dependees} "
            f"dependers={c.dependers} (ingested {entry.ingested_at})"
        )
    defects = store.list_defects()
    by_status: dict[str, int] = {}
    for defect in defects:
        by_status[defect.status] = by_status.get(defect.status, 0) + 1
    tally = ", ".join(f"{k}={v}" for k, v in sorted(by_status.items())) or "none"
    lines.append("")
    lines.append(f"defects ({len(defects)}): {tally}")
    if versions and any(d.status == "open" for d in defects):
        version = version or versions[-1].version
        lines.append("")
        lines.append(f"open defects ranked against version {version}:")
        for row in rank_defects(store, version):
            record = row.to_record()
            lines.append(
                f"  {row.rank}. {row.defect_id} score={record['score']} "
                f"D={record['D']} ({record['D_percent']})"
            )
    return "\n".join(lines) + "\n"
