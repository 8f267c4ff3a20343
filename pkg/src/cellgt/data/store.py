from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np
from PIL import Image, UnidentifiedImageError

from cellgt.data.sample import Sample
from cellgt.data.split import SPLIT_NAMES, Corpus
from cellgt.exceptions import CorpusParseError

__all__ = (
    "CORPUS_FORMAT_VERSION",
    "read_corpus",
    "read_sample",
    "write_corpus",
    "write_sample",
)

CORPUS_FORMAT_VERSION = 1

_SAMPLE_FIELDS = ("format_version", "id", "height", "width", "centroids", "labels", "mask")


def write_sample(sample: Sample, directory: Path) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    pixels = np.round(sample.image.transpose(1, 2, 0) * 255.0).astype(np.uint8)
    Image.fromarray(pixels).save(directory / f"{sample.sample_id}.png")
    document = {
        "format_version": CORPUS_FORMAT_VERSION,
        "id": sample.sample_id,
        "height": sample.height,
        "width": sample.width,
        "centroids": sample.centroids.tolist(),
        "labels": sample.labels.tolist(),
        "mask": sample.mask.tolist(),
    }
    (directory / f"{sample.sample_id}.json").write_text(json.dumps(document) + "\n", encoding="utf-8")


def _load_json(path: Path, sample_id: str) -> dict[str, Any]:
    if not path.is_file():
        raise CorpusParseError(f"missing label file for sample {sample_id!r}", path=str(path))
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CorpusParseError(f"invalid JSON ({exc.msg})", path=str(path)) from exc
    except (OSError, UnicodeDecodeError) as exc:
        raise CorpusParseError(f"unreadable file ({exc})", path=str(path)) from exc
    if not isinstance(document, dict):
        raise CorpusParseError("expected a JSON object", path=str(path))
    return document


def read_sample(directory: Path, sample_id: str) -> Sample:
    meta_path = directory / f"{sample_id}.json"
    image_path = directory / f"{sample_id}.png"
    meta = _load_json(meta_path, sample_id)
    for name in _SAMPLE_FIELDS:
        if name not in meta:
            raise CorpusParseError("missing field", path=str(meta_path), field=name)
    if meta["format_version"] != CORPUS_FORMAT_VERSION:
        raise CorpusParseError(
            f"unsupported version {meta['format_version']!r}", path=str(meta_path), field="format_version"
        )
    if meta["id"] != sample_id:
        raise CorpusParseError(f"id {meta['id']!r} does not match file name", path=str(meta_path), field="id")
    if not image_path.is_file():
        raise CorpusParseError(f"missing image for sample {sample_id!r}", path=str(image_path))

    try:
        with Image.open(image_path) as handle:
            pixels = np.asarray(handle.convert("RGB"), dtype=np.float64)
    except (UnidentifiedImageError, OSError) as exc:
        raise CorpusParseError(f"unreadable image ({exc})", path=str(image_path)) from exc
    height, width = int(meta["height"]), int(meta["width"])
    if pixels.shape != (height, width, 3):
        raise CorpusParseError(
            f"image is {pixels.shape[1]}x{pixels.shape[0]}, metadata says {width}x{height}",
            path=str(image_path),
            field="height",
        )

    try:
        centroids = np.asarray(meta["centroids"], dtype=np.float64).reshape(-1, 2)
    except ValueError as exc:
        raise CorpusParseError("centroids must be (x, y) pairs", path=str(meta_path), field="centroids") from exc
    labels = np.asarray(meta["labels"], dtype=np.int64).reshape(-1)
    if labels.shape[0] != centroids.shape[0]:
        raise CorpusParseError("one label per centroid required", path=str(meta_path), field="labels")
    mask = np.asarray(meta["mask"], dtype=np.int64)
    if mask.shape != (height // 4, width // 4):
        raise CorpusParseError(f"mask shape {mask.shape} is not stride 4", path=str(meta_path), field="mask")

    return Sample(
        sample_id=sample_id,
        image=pixels.transpose(2, 0, 1) / 255.0,
        centroids=centroids,
        labels=labels,
        mask=mask,
    )


def write_corpus(corpus: Corpus, root: str | Path) -> Path:
    """Write ``corpus.json`` plus one directory per split holding ``<id>.png`` / ``<id>.json``."""
    base = Path(root)
    base.mkdir(parents=True, exist_ok=True)
    for name in SPLIT_NAMES:
        split_dir = base / name
        split_dir.mkdir(exist_ok=True)
        for sample in corpus.splits[name]:
            write_sample(sample, split_dir)
    index = {
        "format_version": CORPUS_FORMAT_VERSION,
        "num_classes": corpus.num_classes,
        "config": corpus.config,
        "splits": {name: [s.sample_id for s in corpus.splits[name]] for name in SPLIT_NAMES},
        "train_class_frequencies": corpus.train_class_frequencies,
    }
    (base / "corpus.json").write_text(json.dumps(index, indent=1, sort_keys=True) + "\n", encoding="utf-8")
    return base


def read_corpus(root: str | Path) -> Corpus:
    base = Path(root)
    index_path = base / "corpus.json"
    if not index_path.is_file():
        raise CorpusParseError("corpus index not found", path=str(index_path))
    try:
        index = json.loads(index_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CorpusParseError(f"invalid JSON ({exc.msg})", path=str(index_path)) from exc
    except (OSError, UnicodeDecodeError) as exc:
        raise CorpusParseError(f"unreadable file ({exc})", path=str(index_path)) from exc
    for name in ("format_version", "num_classes", "splits"):
        if name not in index:
            raise CorpusParseError("missing field", path=str(index_path), field=name)
    if index["format_version"] != CORPUS_FORMAT_VERSION:
        raise CorpusParseError(
            f"unsupported version {index['format_version']!r}", path=str(index_path), field="format_version"
        )

    splits = {
        name: [read_sample(base / name, str(sample_id)) for sample_id in index["splits"].get(name, [])]
        for name in SPLIT_NAMES
    }
    return Corpus(num_classes=int(index["num_classes"]), splits=splits, config=dict(index.get("config", {})))
