import json
import random

import pytest
from hypothesis import given, strategies as st

from sdgtag.errors import ThresholdConfigError
from sdgtag.fostag import FosTag
from sdgtag.sdgscore import (
    Classification,
    Label,
    ThresholdConfig,
    classify_text,
    interpret_score,
    load_threshold_config,
    score_sdgs,
)


def triple_loop_scores(tags, sdg_fos_map):
    """Independent oracle: iterate every (tag, sdg, fos) triple."""
    result = []
    for sdg in range(1, 18):
        count = 0
        for tag in tags:
            for fos_id in sdg_fos_map.get(sdg, set()):
                if tag.fos_id == fos_id:
                    count += 1
        result.append((sdg, count, count / max(1, len(tags))))
    return result


def tags_of(*fos_ids):
    return [FosTag(fos_id, 0.5) for fos_id in fos_ids]


class TestScoreSdgs:
    def test_hand_computed_intersection(self):
        tags = tags_of("fA", "fB", "fC")
        mapping = {7: {"fB", "fC", "fD"}}
        scores = dict((s, (c, share)) for s, c, share in score_sdgs(tags, mapping))
        assert scores[7] == (2, pytest.approx(2 / 3))
        assert all(scores[s] == (0, 0.0) for s in range(1, 18) if s != 7)

    def test_empty_tags(self):
        scores = score_sdgs([], {7: {"fA"}})
        assert len(scores) == 17
        assert all(count == 0 and share == 0.0 for _, count, share in scores)

    def test_one_fos_may_serve_multiple_sdgs(self):
        tags = tags_of("fA")
        mapping = {1: {"fA"}, 2: {"fA"}}
        scores = {s: c for s, c, _ in score_sdgs(tags, mapping)}
        assert scores[1] == 1 and scores[2] == 1

    def test_against_triple_loop_oracle(self):
        rng = random.Random(5)
        fos_pool = [f"f{i}" for i in range(30)]
        for _ in range(50):
            tags = tags_of(*rng.sample(fos_pool, rng.randint(0, 12)))
            mapping = {
                sdg: set(rng.sample(fos_pool, rng.randint(0, 10)))
                for sdg in rng.sample(range(1, 18), rng.randint(0, 17))
            }
            assert score_sdgs(tags, mapping) == triple_loop_scores(tags, mapping)

    def test_count_bounded_by_tags_and_map(self):
        tags = tags_of("fA", "fB")
        mapping = {3: {"fA", "fB", "fC", "fD"}}
        for sdg, count, share in score_sdgs(tags, mapping):
            assert count <= min(len(tags), len(mapping.get(sdg, set())))
            assert 0.0 <= share <= 1.0


class TestInterpret:
    CFG = ThresholdConfig(default=(0.30, 0.60))

    def test_strong(self):
        assert interpret_score(0.70, 1, self.CFG) is Label.STRONG

    def test_moderate_boundary_inclusive(self):
        assert interpret_score(0.30, 1, self.CFG) is Label.MODERATE

    def test_strong_boundary_inclusive(self):
        assert interpret_score(0.60, 1, self.CFG) is Label.STRONG

    def test_none_below_moderate(self):
        assert interpret_score(0.0, 1, self.CFG) is Label.NONE

    def test_per_sdg_override(self):
        cfg = ThresholdConfig(default=(0.1, 0.3), per_sdg={13: (0.05, 0.2)})
        assert interpret_score(0.25, 13, cfg) is Label.STRONG
        assert interpret_score(0.25, 12, cfg) is Label.MODERATE

    @given(st.floats(min_value=0, max_value=1), st.floats(min_value=0, max_value=1))
    def test_label_monotone_in_share(self, a, b):
        order = {Label.NONE: 0, Label.MODERATE: 1, Label.STRONG: 2}
        low, high = sorted((a, b))
        assert (
            order[interpret_score(low, 5, self.CFG)]
            <= order[interpret_score(high, 5, self.CFG)]
        )


class TestThresholdConfig:
    def test_invalid_ordering_rejected(self):
        with pytest.raises(ThresholdConfigError):
            ThresholdConfig(default=(0.5, 0.5))
        with pytest.raises(ThresholdConfigError):
            ThresholdConfig(default=(0.1, 1.5))
        with pytest.raises(ThresholdConfigError):
            ThresholdConfig(default=(0.1, 0.3), per_sdg={7: (0.9, 0.2)})

    def test_load_with_default_fallback(self, tmp_path):
        path = tmp_path / "thresholds.json"
        path.write_text(
            json.dumps({"default": {"moderate": 0.1, "strong": 0.3},
                        "7": {"moderate": 0.2, "strong": 0.5}}),
            encoding="utf-8",
        )
        cfg = load_threshold_config(path)
        assert cfg.thresholds_for(7) == (0.2, 0.5)
        assert cfg.thresholds_for(8) == (0.1, 0.3)

    def test_missing_default_rejected(self, tmp_path):
        path = tmp_path / "thresholds.json"
        path.write_text(json.dumps({"7": {"moderate": 0.1, "strong": 0.3}}))
        with pytest.raises(ThresholdConfigError):
            load_threshold_config(path)

    def test_digest_stable(self):
        assert ThresholdConfig().digest() == ThresholdConfig().digest()
        assert ThresholdConfig().digest() != ThresholdConfig(default=(0.2, 0.4)).digest()


class TestClassify:
    def test_sdg13_text_is_uniquely_strong(self, sdg_world):
        text = " ".join(sdg_world.doc_texts(13))
        result = classify_text(
            text,
            sdg_world.index,
            sdg_world.sdg_fos_map,
            sdg_world.thresholds,
        )
        labels = {score.sdg: score.label for score in result.scores}
        assert labels[13] is Label.STRONG
        assert all(label is Label.NONE for sdg, label in labels.items() if sdg != 13)
        assert {t.fos_id for t in result.fos_tags} == {"F131", "F132", "F133"}

    def test_empty_text_all_none(self, sdg_world):
        result = classify_text(
            "", sdg_world.index, sdg_world.sdg_fos_map, sdg_world.thresholds
        )
        assert result.fos_tags == []
        assert all(score.label is Label.NONE for score in result.scores)
        assert len(result.scores) == 17

    def test_deterministic(self, sdg_world):
        text = " ".join(sdg_world.doc_texts(13))
        first = classify_text(
            text, sdg_world.index, sdg_world.sdg_fos_map, sdg_world.thresholds
        )
        second = classify_text(
            text, sdg_world.index, sdg_world.sdg_fos_map, sdg_world.thresholds
        )
        assert first.to_dict() == second.to_dict()

    def test_scores_cover_all_17_in_order(self, sdg_world):
        result = classify_text(
            "anything", sdg_world.index, sdg_world.sdg_fos_map, sdg_world.thresholds
        )
        assert [score.sdg for score in result.scores] == list(range(1, 18))

    def test_monotone_adding_mapped_tag(self):
        mapping = {5: {"fA", "fB"}}
        base = {s: c for s, c, _ in score_sdgs(tags_of("fA"), mapping)}
        extended = {s: c for s, c, _ in score_sdgs(tags_of("fA", "fB"), mapping)}
        assert extended[5] >= base[5]

    def test_to_dict_shape(self, sdg_world):
        result = classify_text(
            "x", sdg_world.index, sdg_world.sdg_fos_map, sdg_world.thresholds,
            engine_version="1.2.3",
        )
        payload = result.to_dict()
        assert payload["engine_version"] == "1.2.3"
        assert len(payload["scores"]) == 17
        assert set(payload["scores"][0]) == {"sdg", "overlap_count", "overlap_share", "label"}
        assert isinstance(Classification(**{
            "input_digest": payload["input_digest"],
            "fos_tags": [],
            "scores": [],
            "engine_version": "1.2.3",
        }), Classification)
