"""Score FOS tags against the SDG->FOS map and label the overlap per SDG.

For each SDG the overlap is the intersection between the text's FOS tags
and the SDGs linked FOS set; the share normalizes by the tag count. The
share is interpreted through per-SDG thresholds into strong/moderate/none,
with boundaries inclusive (share == threshold earns the label).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Sequence

from .errors import ThresholdConfigError
from .fostag import FosIndex, FosTag, tag_fos
from .ontology import ALL_SDGS, validate_sdg


class Label(str, Enum):
    STRONG = "strong"
    MODERATE = "moderate"
    NONE = "none"


@dataclass(frozen=True)
class SdgScore:
    sdg: int
    overlap_count: int
    overlap_share: float
    label: Label


@dataclass(frozen=True)
class ThresholdConfig:
    """Per-SDG (moderate, strong) share thresholds with a default fallback."""

    default: tuple[float, float] = (0.1, 0.3)
    per_sdg: dict[int, tuple[float, float]] | None = None

    def __post_init__(self) -> None:
        entries = {"default": self.default, **(self.per_sdg or {})}
        for key, (moderate, strong) in entries.items():
            if not 0.0 <= moderate < strong <= 1.0:
                raise ThresholdConfigError(
                    f"thresholds for {key}: need 0 <= moderate < strong <= 1, "
                    f"got moderate={moderate}, strong={strong}"
                )

    def thresholds_for(self, sdg: int) -> tuple[float, float]:
        if self.per_sdg and sdg in self.per_sdg:
            return self.per_sdg[sdg]
        return self.default

    def to_dict(self) -> dict:
        payload = {
            "default": {"moderate": self.default[0], "strong": self.default[1]}
        }
        for sdg in sorted(self.per_sdg or {}):
            moderate, strong = self.per_sdg[sdg]
            payload[str(sdg)] = {"moderate": moderate, "strong": strong}
        return payload

    def digest(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def load_threshold_config(path: str | Path) -> ThresholdConfig:
    """Load thresholds JSON; a ``"default"`` entry is mandatory."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ThresholdConfigError(f"cannot load thresholds from {path}: {exc}") from exc
    if not isinstance(data, dict) or "default" not in data:
        raise ThresholdConfigError(f"{path}: threshold config must contain a 'default' entry")

    def pair(key: str) -> tuple[float, float]:
        entry = data[key]
        try:
            return float(entry["moderate"]), float(entry["strong"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ThresholdConfigError(f"{path}: bad entry for {key!r}: {exc}") from exc

    per_sdg = {
        validate_sdg(key): pair(key) for key in data if key != "default"
    }
    return ThresholdConfig(default=pair("default"), per_sdg=per_sdg)


@dataclass
class Classification:
    """Full result of classifying one text: FOS tags plus 17 labeled scores."""

    input_digest: str
    fos_tags: list[FosTag]
    scores: list[SdgScore]
    engine_version: str

    def to_dict(self) -> dict:
        return {
            "input_digest": self.input_digest,
            "engine_version": self.engine_version,
            "fos_tags": [
                {"fos_id": tag.fos_id, "similarity": tag.similarity}
                for tag in self.fos_tags
            ],
            "scores": [
                {
                    "sdg": score.sdg,
                    "overlap_count": score.overlap_count,
                    "overlap_share": score.overlap_share,
                    "label": score.label.value,
                }
                for score in self.scores
            ],
        }


def input_digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def score_sdgs(
    tags: Sequence[FosTag],
    sdg_fos_map: dict[int, set[str]],
) -> list[tuple[int, int, float]]:
    """Per-SDG (sdg, overlap_count, overlap_share) for all 17 SDGs.

    overlap_count is the intersection between the tagged fos_ids and the
    SDG's linked set; the share divides by max(1, tag count) so an empty
    tag list scores zero everywhere instead of dividing by zero.
    """
    tagged_ids = {tag.fos_id for tag in tags}
    denominator = max(1, len(tags))
    result = []
    for sdg in ALL_SDGS:
        count = len(tagged_ids & sdg_fos_map.get(sdg, set()))
        result.append((sdg, count, count / denominator))
    return result


def interpret_score(share: float, sdg: int, config: ThresholdConfig) -> Label:
    """Map an overlap share to strong/moderate/none via the SDG's thresholds."""
    moderate, strong = config.thresholds_for(sdg)
    if share >= strong:
        return Label.STRONG
    if share >= moderate:
        return Label.MODERATE
    return Label.NONE


def classify_text(
    text: str,
    index: FosIndex,
    sdg_fos_map: dict[int, set[str]],
    config: ThresholdConfig,
    top_k: int = 20,
    min_sim: float = 0.1,
    engine_version: str = "unversioned",
) -> Classification:
    """Tag the text with FOS, score every SDG and label the shares."""
    tags = tag_fos(text, index, top_k=top_k, min_sim=min_sim)
    scores = [
        SdgScore(
            sdg=sdg,
            overlap_count=count,
            overlap_share=share,
            label=interpret_score(share, sdg, config),
        )
        for sdg, count, share in score_sdgs(tags, sdg_fos_map)
    ]
    return Classification(
        input_digest=input_digest(text),
        fos_tags=tags,
        scores=scores,
        engine_version=engine_version,
    )
