import numpy as np

from cellgt.utils import canonical_json, config_digest, make_rng, restore_rng, rng_state, tree_digest

__all__ = (
    "TestDigests",
    "TestRngStreams",
)


class TestDigests:
    def test_config_digest_ignores_key_order(self):
        assert config_digest({"a": 1, "b": [1, 2]}) == config_digest({"b": [1, 2], "a": 1})
        assert canonical_json({"b": 1, "a": 2}) == '{"a":2,"b":1}'

    def test_tree_digest_skips_run_bookkeeping(self, tmp_path):
        (tmp_path / "data").mkdir()
        (tmp_path / "data" / "x.json").write_text("1")
        before = tree_digest(tmp_path)
        (tmp_path / "manifest.json").write_text("{}")
        (tmp_path / "run.log").write_text("INFO - started")
        assert tree_digest(tmp_path) == before
        (tmp_path / "data" / "x.json").write_text("2")
        assert tree_digest(tmp_path) != before

    def test_tree_digest_sees_renames(self, tmp_path):
        (tmp_path / "a").write_text("same")
        before = tree_digest(tmp_path)
        (tmp_path / "a").rename(tmp_path / "b")
        assert tree_digest(tmp_path) != before


class TestRngStreams:
    def test_streams_are_independent_and_repeatable(self):
        assert make_rng(3, 1).random() == make_rng(3, 1).random()
        assert make_rng(3, 1).random() != make_rng(3, 2).random()

    def test_state_round_trip(self):
        rng = make_rng(5)
        rng.random(7)
        restored = restore_rng(rng_state(rng))
        assert np.array_equal(restored.random(4), rng.random(4))
