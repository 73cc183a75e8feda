"""Embedded file-based document store.

On-disk layout under the store root::

    models/index                      ordered list of ingested versions
    models/<version>/original.xml     document exactly as uploaded
    models/<version>/canonical.xml    canonical re-emission of the same model
    models/<version>/meta             version metadata and counts
    defects/<id>                      one defect report per file
    results/<defect_id>/<version>     one metric result per (defect, version)
    config/priority                   active priority configuration

Records are JSON with sorted keys, so files are diffable and field order is
stable.  Writes go through a temp file plus rename and are serialized by a
process-wide lock (single-writer, multi-reader).
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .emitter import emit_istarml
from .errors import (
    DefectDepError,
    DuplicateDefect,
    DuplicateVersion,
    InvalidDefect,
    InvalidModel,
    NotFound,
    UnknownSeverityLevel,
)
from .graph import DEFAULT_FLOW_DEPTH, DependencyCounts, count
from .metric import MetricResult
from .model import SDModel
from .parser import parse_istarml
from .prioritize import PriorityConfig, default_config
from .validation import validate

DEFECT_STATUSES = ("open", "fixed", "closed")


def _key_ok(value: str) -> bool:
    return bool(value) and not value.startswith(".") and not any(c in value for c in "/\\\0")


def _check_key(value: str, error: type[DefectDepError], kind: str) -> str:
    if not _key_ok(value):
        raise error(f"{kind} {value!r} is not usable as a store key")
    return value


@dataclass(frozen=True)
class DefectReport:
    defect_id: str
    title: str = ""
    module: str = ""
    product: str = ""
    cause: str = ""
    fix: str = ""
    severity: str = "low"
    factor_values: tuple[tuple[str, str], ...] = ()
    seed_actors: tuple[str, ...] = ()
    depth: int = DEFAULT_FLOW_DEPTH
    status: str = "open"

    def factors(self) -> dict[str, str]:
        """Factor levels for scoring; severity rides along as a factor."""
        merged = dict(self.factor_values)
        merged.setdefault("severity", self.severity)
        return merged

    def to_record(self) -> dict:
        return {
            "defect_id": self.defect_id,
            "title": self.title,
            "module": self.module,
            "product": self.product,
            "cause": self.cause,
            "fix": self.fix,
            "severity": self.severity,
            "factor_values": dict(self.factor_values),
            "seed_actors": list(self.seed_actors),
            "depth": self.depth,
            "status": self.status,
        }

    @classmethod
    def from_record(cls, record: dict) -> "DefectReport":
        return cls(
            defect_id=record["defect_id"],
            title=record.get("title", ""),
            module=record.get("module", ""),
            product=record.get("product", ""),
            cause=record.get("cause", ""),
            fix=record.get("fix", ""),
            severity=record.get("severity", "low"),
            factor_values=tuple(sorted(record.get("factor_values", {}).items())),
            seed_actors=tuple(record.get("seed_actors", [])),
            depth=int(record.get("depth", DEFAULT_FLOW_DEPTH)),
            status=record.get("status", "open"),
        )


@dataclass(frozen=True)
class CatalogEntry:
    version: str
    ingested_at: str
    counts: DependencyCounts

    def to_record(self) -> dict:
        return {
            "version": self.version,
            "ingested_at": self.ingested_at,
            "counts": self.counts.as_dict(),
        }


@dataclass(frozen=True)
class StoreCatalog:
    product_versions: tuple[CatalogEntry, ...]
    defects: tuple[DefectReport, ...]
    results: tuple[MetricResult, ...] = field(default=())


class ModelStore:
    """Single-directory store; all mutations hold one process-wide lock."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self._lock = threading.RLock()
        for sub in ("models", "defects", "results", "config"):
            (self.root / sub).mkdir(parents=True, exist_ok=True)

    # -- internal plumbing -------------------------------------------------

    def _write(self, path: Path, data: bytes) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_bytes(data)
        os.replace(tmp, path)

    def _write_record(self, path: Path, record: dict) -> None:
        text = json.dumps(record, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
        self._write(path, text.encode("utf-8"))

    def _read_record(self, path: Path, missing: str) -> dict:
        try:
            return json.loads(path.read_text("utf-8"))
        except FileNotFoundError:
            raise NotFound(missing) from None

    def _index_path(self) -> Path:
        return self.root / "models" / "index"

    def _version_index(self) -> list[str]:
        try:
            return json.loads(self._index_path().read_text("utf-8"))
        except FileNotFoundError:
            return []

    # -- product models ----------------------------------------------------

    def put_model(self, document: bytes | str, version: str) -> CatalogEntry:
        _check_key(version, InvalidModel, "version")
        data = document.encode("utf-8") if isinstance(document, str) else bytes(document)
        try:
            model = parse_istarml(data, source_id=version)
        except DefectDepError as exc:
            raise InvalidModel(f"document for version {version!r} does not parse: {exc}") from exc
        report = validate(model)
        if not report.ok:
            first = report.errors()[0]
            raise InvalidModel(
                f"document for version {version!r} fails validation: "
                f"{first.code} at {first.location}: {first.message}"
            )
        with self._lock:
            index = self._version_index()
            if version in index:
                raise DuplicateVersion(f"model version {version!r} already stored")
            entry = CatalogEntry(
                version=version,
                ingested_at=_utcnow(),
                counts=count(model),
            )
            vdir = self.root / "models" / version
            self._write(vdir / "original.xml", data)
            self._write(vdir / "canonical.xml", emit_istarml(model, check=False))
            self._write_record(vdir / "meta", entry.to_record())
            index.append(version)
            self._write(self._index_path(), json.dumps(index).encode("utf-8"))
        return entry

    def get_model(self, version: str) -> SDModel:
        _check_key(version, NotFound, "version")
        path = self.root / "models" / version / "canonical.xml"
        try:
            data = path.read_bytes()
        except FileNotFoundError:
            raise NotFound(f"model version {version!r} not in store") from None
        return parse_istarml(data, source_id=version)

    def get_model_bytes(self, version: str, *, canonical: bool = True) -> bytes:
        _check_key(version, NotFound, "version")
        name = "canonical.xml" if canonical else "original.xml"
        path = self.root / "models" / version / name
        try:
            return path.read_bytes()
        except FileNotFoundError:
            raise NotFound(f"model version {version!r} not in store") from None

    def list_versions(self) -> list[CatalogEntry]:
        entries = []
        for version in self._version_index():
            record = self._read_record(
                self.root / "models" / version / "meta",
                f"model version {version!r} not in store",
            )
            entries.append(
                CatalogEntry(
                    version=record["version"],
                    ingested_at=record["ingested_at"],
                    counts=DependencyCounts(**record["counts"]),
                )
            )
        return entries

    # -- defects -------------------------------------------------------------

    def put_defect(self, report: DefectReport) -> DefectReport:
        _check_key(report.defect_id, InvalidDefect, "defect id")
        if report.status not in DEFECT_STATUSES:
            raise InvalidDefect(
                f"status {report.status!r} is not one of {'/'.join(DEFECT_STATUSES)}"
            )
        if report.status != "open" and not report.seed_actors:
            raise InvalidDefect(
                f"defect {report.defect_id!r} is {report.status} but has no seed actors; "
                "only open defects may be unmapped"
            )
        scale = self.load_priority_config().scale("severity")
        if report.severity not in scale:
            raise UnknownSeverityLevel(
                f"severity {report.severity!r} is not on the configured scale {list(scale)}"
            )
        path = self.root / "defects" / report.defect_id
        with self._lock:
            if path.exists():
                raise DuplicateDefect(f"defect {report.defect_id!r} already stored")
            self._write_record(path, report.to_record())
        return report

    def get_defect(self, defect_id: str) -> DefectReport:
        _check_key(defect_id, NotFound, "defect id")
        record = self._read_record(
            self.root / "defects" / defect_id, f"defect {defect_id!r} not in store"
        )
        return DefectReport.from_record(record)

    def list_defects(self, status: str | None = None) -> list[DefectReport]:
        reports = []
        root = self.root / "defects"
        for path in sorted(p for p in root.iterdir() if p.is_file()):
            report = DefectReport.from_record(json.loads(path.read_text("utf-8")))
            if status is None or report.status == status:
                reports.append(report)
        reports.sort(key=lambda r: r.defect_id)
        return reports

    # -- metric results ------------------------------------------------------

    def put_result(self, result: MetricResult) -> MetricResult:
        _check_key(result.defect_id, NotFound, "defect id")
        _check_key(result.product_version, NotFound, "version")
        if result.product_version not in self._version_index():
            raise NotFound(f"model version {result.product_version!r} not in store")
        if not (self.root / "defects" / result.defect_id).exists():
            raise NotFound(f"defect {result.defect_id!r} not in store")
        path = self.root / "results" / result.defect_id / result.product_version
        with self._lock:
            self._write_record(path, result.to_record())
        return result

    def get_results(self, defect_id: str) -> list[MetricResult]:
        """All stored results for a defect, newest product version first."""
        _check_key(defect_id, NotFound, "defect id")
        if not (self.root / "defects" / defect_id).exists():
            raise NotFound(f"defect {defect_id!r} not in store")
        order = {version: i for i, version in enumerate(self._version_index())}
        results = []
        rdir = self.root / "results" / defect_id
        if rdir.is_dir():
            for path in rdir.iterdir():
                if path.is_file():
                    results.append(MetricResult.from_record(json.loads(path.read_text("utf-8"))))
        results.sort(key=lambda r: order.get(r.product_version, -1), reverse=True)
        return results

    def find_result(self, defect_id: str, version: str) -> MetricResult | None:
        if not (_key_ok(defect_id) and _key_ok(version)):
            return None
        path = self.root / "results" / defect_id / version
        if not path.is_file():
            return None
        return MetricResult.from_record(json.loads(path.read_text("utf-8")))

    # -- priority config -------------------------------------------------------

    def load_priority_config(self) -> PriorityConfig:
        path = self.root / "config" / "priority"
        if not path.is_file():
            return default_config()
        return PriorityConfig.from_dict(json.loads(path.read_text("utf-8")))

    def save_priority_config(self, config: PriorityConfig) -> PriorityConfig:
        with self._lock:
            self._write_record(self.root / "config" / "priority", config.to_dict())
        return config

    # -- snapshots ---------------------------------------------------------------

    def catalog(self) -> StoreCatalog:
        results = []
        for defect in self.list_defects():
            results.extend(self.get_results(defect.defect_id))
        return StoreCatalog(
            product_versions=tuple(self.list_versions()),
            defects=tuple(self.list_defects()),
            results=tuple(results),
        )

    def digest(self) -> str:
        """Content hash of every stored file; changes iff the catalog changes."""
        h = hashlib.sha256()
        for path in sorted(self.root.rglob("*")):
            if path.is_file():
                h.update(str(path.relative_to(self.root)).encode("utf-8"))
                h.update(b"\0")
                h.update(path.read_bytes())
                h.update(b"\0")
        return h.hexdigest()


def _utcnow() -> str:
    return datetime.now(timezone.utc).replace(microsecond=0).isoformat().replace("+00:00", "Z")
