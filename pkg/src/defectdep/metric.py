"""Defect dependency metric.

For defect counts (dc, de, dr) and product counts (Pc, Pe, Pr):

    a = dc * (de + dr)        spread of the defect model
    b = Pc * (Pe + Pr)        spread of the whole product model
    D = 1 - (b - a) / b  ==  a / b

D is kept as an exact rational throughout; decimal rendering (4 places,
round half to even) and the percent form happen only at output boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from typing import TYPE_CHECKING

from .errors import DefectExceedsProduct, EmptyProductModel, NotFound, UnknownVersion
from .graph import DefectFlow, DependencyCounts, count, extract_defect_flow
from .model import SDModel

if TYPE_CHECKING:
    from .store import ModelStore


def spread(counts: DependencyCounts) -> int:
    """Dependency weightage of a model: actors times endpoint entries."""
    return counts.actors * (counts.dependees + counts.dependers)


@dataclass(frozen=True)
class MetricResult:
    defect_id: str
    product_version: str
    defect_spread: int  # a
    product_spread: int  # b
    ratio: Fraction  # D
    computed_at: str = field(default="", compare=False)

    def to_record(self) -> dict[str, object]:
        return {
            "defect_id": self.defect_id,
            "product_version": self.product_version,
            "a": self.defect_spread,
            "b": self.product_spread,
            "D": render_ratio(self.ratio),
            "D_percent": render_percent(self.ratio),
            "computed_at": self.computed_at,
        }

    @classmethod
    def from_record(cls, record: dict) -> "MetricResult":
        a = int(record["a"])
        b = int(record["b"])
        return cls(
            defect_id=record["defect_id"],
            product_version=record["product_version"],
            defect_spread=a,
            product_spread=b,
            ratio=Fraction(a, b),
            computed_at=record.get("computed_at", ""),
        )


def defect_dependency(
    defect_counts: DependencyCounts, product_counts: DependencyCounts
) -> MetricResult:
    """Compute (a, b, D) from raw counts; identity fields are left blank."""
    a = spread(defect_counts)
    b = spread(product_counts)
    if b == 0:
        raise EmptyProductModel(
            "product model has no dependency spread (b = 0); the ratio is undefined"
        )
    if a > b:
        raise DefectExceedsProduct(
            f"defect spread a={a} exceeds product spread b={b}; "
            "the defect flow was not extracted from this product version"
        )
    return MetricResult(
        defect_id="",
        product_version="",
        defect_spread=a,
        product_spread=b,
        ratio=Fraction(a, b),
        computed_at=_utcnow(),
    )


def compute_metric(product: SDModel, flow: DefectFlow, *, product_version: str = "") -> MetricResult:
    """Metric for an extracted defect flow against its product model."""
    result = defect_dependency(count(flow.subgraph), count(product))
    return replace(
        result,
        defect_id=flow.defect_id,
        product_version=product_version or product.source_id,
    )


@dataclass(frozen=True)
class RecomputeEntry:
    """Outcome of recomputing one defect: a result or a typed error code."""

    defect_id: str
    result: MetricResult | None
    previous: MetricResult | None = None
    unknown_seeds: tuple[str, ...] = ()
    error: str | None = None


def recompute_all(
    store: "ModelStore", new_product_version: str, *, include_fixed: bool = False
) -> list[RecomputeEntry]:
    """Recompute every open defect against a product version.

    Each defect's flow is re-extracted from its stored seeds and depth, the
    fresh result is persisted alongside prior versions, and per-defect
    failures are collected without aborting the batch.
    """
    try:
        product = store.get_model(new_product_version)
    except NotFound as exc:
        raise UnknownVersion(str(exc)) from exc

    statuses = ("open", "fixed") if include_fixed else ("open",)
    entries = []
    for defect in store.list_defects():
        if defect.status not in statuses:
            continue
        previous = _latest_result(store, defect.defect_id, exclude=new_product_version)
        flow = extract_defect_flow(
            product, defect.seed_actors, defect.depth, defect_id=defect.defect_id
        )
        try:
            result = compute_metric(product, flow, product_version=new_product_version)
        except (EmptyProductModel, DefectExceedsProduct) as exc:
            entries.append(
                RecomputeEntry(
                    defect_id=defect.defect_id,
                    result=None,
                    previous=previous,
                    unknown_seeds=flow.unknown_seeds,
                    error=exc.code,
                )
            )
            continue
        store.put_result(result)
        entries.append(
            RecomputeEntry(
                defect_id=defect.defect_id,
                result=result,
                previous=previous,
                unknown_seeds=flow.unknown_seeds,
            )
        )
    entries.sort(key=lambda e: e.defect_id)
    return entries


def ensure_metric(
    store: "ModelStore", defect_id: str, version: str, *, persist: bool = True
) -> MetricResult:
    """Return the stored result for (defect, version), computing it if absent.

    ``persist=False`` computes without writing (used by side-effect-free reads).
    """
    existing = store.find_result(defect_id, version)
    if existing is not None:
        return existing
    defect = store.get_defect(defect_id)
    product = store.get_model(version)
    flow = extract_defect_flow(product, defect.seed_actors, defect.depth, defect_id=defect_id)
    result = compute_metric(product, flow, product_version=version)
    if persist:
        store.put_result(result)
    return result


def _latest_result(store: "ModelStore", defect_id: str, exclude: str = ""):
    for result in store.get_results(defect_id):
        if result.product_version != exclude:
            return result
    return None


def render_ratio(value: Fraction, places: int = 4) -> str:
    """Decimal string with fixed places, round half to even."""
    quantum = Decimal(1).scaleb(-places)
    with localcontext() as ctx:
        ctx.prec = 60
        dec = Decimal(value.numerator) / Decimal(value.denominator)
        return str(dec.quantize(quantum, rounding=ROUND_HALF_EVEN))


def render_percent(value: Fraction) -> str:
    """Percentage form of the ratio, trimmed of trailing zeros: '6%', '12.34%'."""
    hundred = value * 100
    if hundred.denominator == 1:
        return f"{hundred.numerator}%"
    text = render_ratio(hundred, places=2).rstrip("0").rstrip(".")
    return f"{text}%"


def _utcnow() -> str:
    return datetime.now(timezone.utc).replace(microsecond=0).isoformat().replace("+00:00", "Z")
