"""Defect ranking: the dependency ratio combined with additive business factors.

The score is a normalized weighted sum

    score = (w_D * D + sum_f w_f * norm_f) / (w_D + sum_f w_f)

where each factor level at index i of an m-level ordered scale normalizes to
i / (m - 1) (a single-level scale maps to 1, a missing value to 0).  Scaling
all weights by a positive constant therefore never changes a score.  Ties are
broken by the configured field order, descending for metric and factor
fields and ascending for the final defect_id, giving a total order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import EmptyConfig, InvalidPriorityConfig, UnknownFactorLevel
from .metric import MetricResult, render_percent, render_ratio

DEFAULT_SEVERITY_SCALE = ("low", "medium", "high", "critical")
DEFAULT_CRITICALITY_SCALE = ("low", "medium", "high")


def _as_fraction(value) -> Fraction:
    # floats go through str() so "0.3" stays 3/10 rather than a binary float
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(value)


@dataclass(frozen=True)
class PriorityConfig:
    weight_ratio: Fraction = Fraction(1, 2)
    factor_weights: tuple[tuple[str, Fraction], ...] = ()
    factor_scales: tuple[tuple[str, tuple[str, ...]], ...] = ()
    tie_break_order: tuple[str, ...] = ("D", "severity", "defect_id")

    def __post_init__(self):
        if self.weight_ratio < 0 or any(w < 0 for _, w in self.factor_weights):
            raise InvalidPriorityConfig("weights must be non-negative")
        if self.weight_ratio + sum(w for _, w in self.factor_weights) == 0:
            raise EmptyConfig("all weights are zero; scores would be undefined")
        if not self.tie_break_order or self.tie_break_order[-1] != "defect_id":
            raise InvalidPriorityConfig("tie_break_order must end with 'defect_id'")
        scales = dict(self.factor_scales)
        for name, _ in self.factor_weights:
            if name not in scales or not scales[name]:
                raise InvalidPriorityConfig(f"factor {name!r} has no level scale configured")

    def scale(self, factor: str) -> tuple[str, ...]:
        return dict(self.factor_scales).get(factor, ())

    def to_dict(self) -> dict:
        return {
            "weight_D": str(self.weight_ratio),
            "factor_weights": {name: str(w) for name, w in self.factor_weights},
            "factor_scales": {name: list(levels) for name, levels in self.factor_scales},
            "tie_break_order": list(self.tie_break_order),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PriorityConfig":
        base = default_config()
        weight = (
            _as_fraction(data["weight_D"]) if "weight_D" in data else base.weight_ratio
        )
        weights = (
            tuple((k, _as_fraction(v)) for k, v in data["factor_weights"].items())
            if "factor_weights" in data
            else base.factor_weights
        )
        scales = dict(base.factor_scales)
        for name, levels in data.get("factor_scales", {}).items():
            scales[name] = tuple(levels)
        order = tuple(data.get("tie_break_order", base.tie_break_order))
        return cls(
            weight_ratio=weight,
            factor_weights=weights,
            factor_scales=tuple(scales.items()),
            tie_break_order=order,
        )


def default_config() -> PriorityConfig:
    return PriorityConfig(
        weight_ratio=Fraction(1, 2),
        factor_weights=(
            ("severity", Fraction(3, 10)),
            ("customer_criticality", Fraction(1, 5)),
        ),
        factor_scales=(
            ("severity", DEFAULT_SEVERITY_SCALE),
            ("customer_criticality", DEFAULT_CRITICALITY_SCALE),
        ),
        tie_break_order=("D", "severity", "defect_id"),
    )


@dataclass(frozen=True)
class RankedDefect:
    defect_id: str
    ratio: Fraction
    factor_values: tuple[tuple[str, str], ...]
    score: Fraction
    rank: int
    title: str = ""

    def to_record(self) -> dict:
        return {
            "rank": self.rank,
            "defect_id": self.defect_id,
            "title": self.title,
            "D": render_ratio(self.ratio),
            "D_percent": render_percent(self.ratio),
            "score": render_ratio(self.score),
            "factor_values": dict(self.factor_values),
        }


def normalized_level(config: PriorityConfig, factor: str, level: str | None) -> Fraction:
    """Position of a level on its ordered scale, mapped into [0, 1]."""
    if level is None:
        return Fraction(0)
    scale = config.scale(factor)
    if level not in scale:
        raise UnknownFactorLevel(
            f"level {level!r} is not on the {factor!r} scale {list(scale)}"
        )
    if len(scale) == 1:
        return Fraction(1)
    return Fraction(scale.index(level), len(scale) - 1)


def score(
    result: MetricResult, factor_values: dict[str, str], config: PriorityConfig
) -> Fraction:
    """Normalized weighted combination of the ratio and factor levels."""
    total = config.weight_ratio
    acc = config.weight_ratio * result.ratio
    for name, weight in config.factor_weights:
        total += weight
        acc += weight * normalized_level(config, name, factor_values.get(name))
    return acc / total


def rank(
    defects: list[tuple[MetricResult, dict[str, str]]],
    config: PriorityConfig,
    *,
    titles: dict[str, str] | None = None,
) -> list[RankedDefect]:
    """Total order over defects: score descending, then the tie-break chain."""
    titles = titles or {}
    scored = []
    for result, factors in defects:
        s = score(result, factors, config)
        scored.append((result, factors, s))

    def sort_key(item):
        result, factors, s = item
        key: list = [-s]
        for fld in config.tie_break_order:
            if fld == "defect_id":
                key.append(result.defect_id)
            elif fld == "D":
                key.append(-result.ratio)
            else:
                key.append(-normalized_level(config, fld, factors.get(fld)))
        return tuple(key)

    scored.sort(key=sort_key)
    return [
        RankedDefect(
            defect_id=result.defect_id,
            ratio=result.ratio,
            factor_values=tuple(sorted(factors.items())),
            score=s,
            rank=position,
            title=titles.get(result.defect_id, ""),
        )
        for position, (result, factors, s) in enumerate(scored, start=1)
    ]
