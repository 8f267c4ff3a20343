from .config import DEFAULT_PALETTE, CorpusConfig
from .generator import generate_sample, place_nuclei, quantize_image, render_mask
from .parallel import THREADS_ENV_VAR, build_corpus, generate_samples, generate_samples_async, worker_count
from .sample import Sample, flip_sample
from .split import SPLIT_NAMES, Corpus, class_frequencies, split, split_sizes
from .store import CORPUS_FORMAT_VERSION, read_corpus, read_sample, write_corpus, write_sample

__all__ = [
    "CORPUS_FORMAT_VERSION",
    "DEFAULT_PALETTE",
    "SPLIT_NAMES",
    "THREADS_ENV_VAR",
    "Corpus",
    "CorpusConfig",
    "Sample",
    "build_corpus",
    "class_frequencies",
    "flip_sample",
    "generate_sample",
    "generate_samples",
    "generate_samples_async",
    "place_nuclei",
    "quantize_image",
    "read_corpus",
    "read_sample",
    "render_mask",
    "split",
    "split_sizes",
    "worker_count",
    "write_corpus",
    "write_sample",
]
