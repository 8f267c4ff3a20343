import numpy as np
import pytest

from cellgt.exceptions import CheckpointError, CheckpointMismatchError
from cellgt.gradcore import ParameterSet
from cellgt.train import CHECKPOINT_MAGIC, Checkpoint, load_into
from cellgt.utils import make_rng, rng_state

__all__ = (
    "TestCheckpointBytes",
    "TestLoadInto",
)


def checkpoint():
    return Checkpoint(
        config={"stage": "finetune", "model": {"k": 2}},
        tensors={"w": np.arange(6.0).reshape(2, 3) * 0.5, "b": np.array([1.0, -1.5])},
        step=7,
        rng_state=rng_state(make_rng(1)),
    )


class TestCheckpointBytes:
    def test_save_load_save_is_byte_identical(self, tmp_path):
        first = checkpoint().save(tmp_path / "a.ckpt")
        second = Checkpoint.load(first).save(tmp_path / "b.ckpt")
        assert first.read_bytes() == second.read_bytes()

    def test_contents_survive(self):
        loaded = Checkpoint.from_bytes(checkpoint().to_bytes())
        assert loaded.step == 7
        assert loaded.config == {"stage": "finetune", "model": {"k": 2}}
        assert loaded.shapes() == {"b": (2,), "w": (2, 3)}
        assert np.array_equal(loaded.tensors["w"], np.arange(6.0).reshape(2, 3) * 0.5)
        assert loaded.config_digest == checkpoint().config_digest

    def test_header_line(self):
        assert checkpoint().to_bytes().startswith(f"{CHECKPOINT_MAGIC} 1\n".encode())

    def test_subset(self):
        assert list(checkpoint().subset("w")) == ["w"]

    @pytest.mark.parametrize(
        ("damage", "message"),
        [
            (lambda data: b"X" + data[1:], "not a cellgt checkpoint"),
            (lambda data: data + b"\0" * 8, "trailing payload"),
            (lambda data: data[:-8], "outside the payload"),
            (lambda data: data.replace(b'"k":2', b'"k":3', 1), "config digest"),
            (lambda data: data[:10], "truncated"),
            (lambda data: data.replace(f"{CHECKPOINT_MAGIC} 1".encode(), f"{CHECKPOINT_MAGIC} 9".encode()), "version"),
        ],
    )
    def test_damaged_bytes_are_rejected(self, damage, message):
        with pytest.raises(CheckpointError, match=message):
            Checkpoint.from_bytes(damage(checkpoint().to_bytes()))

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            Checkpoint.load(tmp_path / "absent.ckpt")


class TestLoadInto:
    def test_copies_matching_tensors(self):
        params = ParameterSet()
        params.add("w", np.zeros((2, 3)))
        params.add("b", np.zeros(2))
        assert sorted(load_into(params, checkpoint().tensors)) == ["b", "w"]
        assert params["b"].values.tolist() == [1.0, -1.5]

    def test_every_offending_tensor_is_listed(self):
        params = ParameterSet()
        params.add("w", np.zeros((3, 2)))
        params.add("extra", np.zeros(1))
        params.add("b", np.zeros(2))
        with pytest.raises(CheckpointMismatchError) as info:
            load_into(params, checkpoint().tensors)
        assert info.value.mismatches == {"w": ((2, 3), (3, 2)), "extra": (None, (1,))}
        assert "w: checkpoint (2, 3) vs model (3, 2)" in info.value.detail
        assert params["w"].values.sum() == 0.0

    def test_partial_load(self):
        params = ParameterSet()
        params.add("w", np.zeros((2, 3)))
        params.add("other", np.zeros(4))
        assert load_into(params, {"w": checkpoint().tensors["w"]}, require_all=False) == ["w"]
