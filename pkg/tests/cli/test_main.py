import json

import pytest

from cellgt.cli import EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, main, read_manifest
from cellgt.data import Corpus, read_corpus, write_corpus
from cellgt.exceptions import NumericFailureError
from cellgt.graph import read_graph_dump
from cellgt.testing.builders import SampleBuilder, tiny_corpus_config
from cellgt.utils import tree_digest

__all__ = (
    "TestGen",
    "TestGraph",
    "TestParser",
    "TestTrainingCommands",
)


def run(*argv):
    return main([str(a) for a in argv])


def digest_line(out):
    return next(line for line in out.splitlines() if line.startswith("digest: "))


class TestParser:
    def test_version(self, capsys):
        assert run("--version") == EXIT_OK
        assert capsys.readouterr().out.startswith("cellgt ")

    def test_unknown_command_is_a_usage_error(self):
        assert run("fly") == EXIT_USAGE

    def test_axis_needs_values(self, corpus_dir, tmp_path, capsys):
        assert run("sweep", "--corpus", corpus_dir, "--out", tmp_path / "sw", "--axis", "E") == EXIT_USAGE
        assert "--values" in capsys.readouterr().err


class TestGen:
    def test_writes_corpus_and_manifest(self, config_file, tmp_path, capsys):
        out = tmp_path / "corpus"
        assert run("gen", "--config", config_file, "--out", out, "--workers", 2) == EXIT_OK
        printed = capsys.readouterr().out
        assert "samples: train=8  val=1  test=1" in printed
        assert digest_line(printed) == f"digest: {tree_digest(out)}"
        assert len(read_corpus(out)) == 10
        manifest = read_manifest(out)
        assert manifest.command == "gen"
        assert manifest.corpus_digest is None
        assert manifest.config["corpus"]["num_samples"] == 10

    def test_same_seed_same_digest(self, config_file, tmp_path, capsys):
        digests = []
        for name in ("a", "b"):
            assert run("gen", "--config", config_file, "--out", tmp_path / name, "--seed", 7) == EXIT_OK
            digests.append(digest_line(capsys.readouterr().out))
        assert digests[0] == digests[1]
        assert read_manifest(tmp_path / "a").seeds == [7]

    def test_refuses_to_overwrite_without_force(self, config_file, tmp_path, capsys):
        out = tmp_path / "corpus"
        assert run("gen", "--config", config_file, "--out", out) == EXIT_OK
        assert run("gen", "--config", config_file, "--out", out) == EXIT_USAGE
        assert "--force" in capsys.readouterr().err
        assert run("gen", "--config", config_file, "--out", out, "--force") == EXIT_OK

    def test_log_file_is_created_with_its_directory(self, config_file, tmp_path):
        log_file = tmp_path / "logs" / "gen.log"
        assert run("--log-file", log_file, "gen", "--config", config_file, "--out", tmp_path / "corpus") == EXIT_OK
        assert log_file.is_file()

    def test_bad_fractions_name_the_field(self, tmp_path, capsys):
        config = {"corpus": {**tiny_corpus_config().to_dict(), "fractions": [0.5, 0.1, 0.1]}}
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(config))
        assert run("gen", "--config", path, "--out", tmp_path / "corpus") == EXIT_USAGE
        assert "fractions" in capsys.readouterr().err
        assert not (tmp_path / "corpus").exists()

    def test_unknown_config_section(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"optimizer": {}}))
        assert run("gen", "--config", path, "--out", tmp_path / "corpus") == EXIT_USAGE
        assert "optimizer" in capsys.readouterr().err


class TestGraph:
    def test_single_nucleus_dump(self, tmp_path):
        lone = SampleBuilder.build(centroids=((16.0, 16.0),), labels=(2,))
        corpus = Corpus(num_classes=3, splits={"train": [lone], "val": [], "test": []})
        corpus_dir = write_corpus(corpus, tmp_path / "c")
        target = tmp_path / "graph.json"
        assert run("graph", "--corpus", corpus_dir, "--image", "s00000", "--out", target) == EXIT_OK
        dump = read_graph_dump(target)
        assert (dump.n, dump.k, dump.k_effective) == (1, 4, 0)
        assert dump.edge_list == []

    def test_flags_reach_the_graph(self, corpus, corpus_dir, tmp_path):
        sample_id = corpus.train[0].sample_id
        target = tmp_path / "graph.json"
        assert run("graph", "--corpus", corpus_dir, "--image", sample_id, "--out", target, "--k", 2, "--cl", 3) == 0
        dump = read_graph_dump(target)
        assert dump.k == 2
        assert all(len(row) == 3 for row in dump.markers)
        assert run("graph", "--corpus", corpus_dir, "--image", sample_id, "--out", target) == EXIT_USAGE

    def test_unknown_sample(self, corpus_dir, tmp_path, capsys):
        assert run("graph", "--corpus", corpus_dir, "--image", "s99999", "--out", tmp_path / "g.json") == EXIT_USAGE
        assert "s99999" in capsys.readouterr().err

    def test_missing_corpus(self, tmp_path, capsys):
        code = run("graph", "--corpus", tmp_path / "nowhere", "--image", "s00000", "--out", tmp_path / "g.json")
        assert code == EXIT_USAGE
        assert "corpus directory not found" in capsys.readouterr().err

    def test_corrupt_image_is_a_usage_error(self, corpus, corpus_dir, tmp_path, capsys):
        sample_id = corpus.train[0].sample_id
        (corpus_dir / "train" / f"{sample_id}.png").write_bytes(b"\x89PNG broken")
        code = run("graph", "--corpus", corpus_dir, "--image", sample_id, "--out", tmp_path / "g.json")
        assert code == EXIT_USAGE
        assert "unreadable image" in capsys.readouterr().err


class TestTrainingCommands:
    def test_pretrain_then_train(self, config_file, corpus_dir, tmp_path, capsys):
        pre = tmp_path / "pre"
        assert run("pretrain", "--config", config_file, "--corpus", corpus_dir, "--out", pre) == EXIT_OK
        assert (pre / "pretrained.ckpt").is_file()
        assert (pre / "curve.jsonl").is_file()

        scratch, tap = tmp_path / "scratch", tmp_path / "tap"
        assert run("train", "--config", config_file, "--corpus", corpus_dir, "--out", scratch) == EXIT_OK
        init = pre / "pretrained.ckpt"
        assert run("train", "--config", config_file, "--corpus", corpus_dir, "--out", tap, "--init", init) == EXIT_OK
        assert (tap / "model.ckpt").is_file()
        assert (tap / "report.json").is_file()

        first, second = read_manifest(scratch), read_manifest(tap)
        assert first.config.pop("init") == "none"
        assert second.config.pop("init") == str(init)
        assert first.config == second.config
        assert first.corpus_digest == second.corpus_digest == tree_digest(corpus_dir)
        assert "F_avg=" in capsys.readouterr().out

    def test_flags_override_the_config_file(self, config_file, corpus_dir, tmp_path):
        out = tmp_path / "run"
        argv = ("train", "--config", config_file, "--corpus", corpus_dir, "--out", out, "--epochs", 0, "--lr", 0.5)
        assert run(*argv, "--layers", 2, "--seed", 4) == EXIT_OK
        manifest = read_manifest(out)
        assert manifest.config["finetune"]["epochs"] == 0
        assert manifest.config["finetune"]["lr"] == 0.5
        assert manifest.config["model"]["layers"] == 2
        assert manifest.seeds == [4]

    def test_eval_is_repeatable(self, config_file, corpus_dir, tmp_path):
        train = tmp_path / "train"
        assert run("train", "--config", config_file, "--corpus", corpus_dir, "--out", train) == EXIT_OK
        reports = []
        for name in ("e1", "e2"):
            out = tmp_path / name
            argv = ("eval", "--checkpoint", train / "model.ckpt", "--corpus", corpus_dir, "--split", "val")
            code = run(*argv, "--out", out)
            assert code == EXIT_OK
            reports.append((out / "report.json").read_bytes())
        assert reports[0] == reports[1]
        assert json.loads(reports[0])["split"] == "val"
        assert read_manifest(tmp_path / "e1").config["split"] == "val"

    def test_missing_checkpoint(self, corpus_dir, tmp_path):
        code = run("eval", "--checkpoint", tmp_path / "no.ckpt", "--corpus", corpus_dir, "--out", tmp_path / "e")
        assert code == EXIT_USAGE

    def test_non_finite_loss_exits_with_the_numeric_code(self, config_file, corpus_dir, tmp_path, monkeypatch, capsys):
        def explode(*args, **kwargs):
            raise NumericFailureError(step=3, seed=0, stage="finetune")

        monkeypatch.setattr("cellgt.cli.commands.run_finetune", explode)
        assert run("train", "--config", config_file, "--corpus", corpus_dir, "--out", tmp_path / "t") == EXIT_NUMERIC
        assert "non-finite loss at step 3" in capsys.readouterr().err

    def test_sweep_writes_one_row_per_value(self, config_file, corpus_dir, tmp_path, capsys):
        out = tmp_path / "sweep"
        argv = ("sweep", "--config", config_file, "--corpus", corpus_dir, "--out", out)
        assert run(*argv, "--axis", "L", "--values", "1,2", "--init", "scratch", "--seeds", "0") == EXIT_OK
        table = json.loads((out / "sweep.json").read_text())
        assert [row["setting"] for row in table["rows"]] == ["1", "2"]
        assert table["seeds"] == [0]
        assert capsys.readouterr().out.splitlines()[0].split()[0] == "L"

    @pytest.mark.parametrize("command", ["pretrain", "train", "sweep"])
    def test_missing_corpus(self, command, config_file, tmp_path):
        assert run(command, "--config", config_file, "--corpus", tmp_path / "none", "--out", tmp_path / "o") == 2
