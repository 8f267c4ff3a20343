from .commands import cmd_eval, cmd_gen, cmd_graph, cmd_pretrain, cmd_sweep, cmd_train, resolve_experiment
from .experiment import EXPERIMENT_SECTIONS, ExperimentConfig, load_experiment_config
from .main import EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, build_parser, main
from .manifest import MANIFEST_NAME, RunManifest, prepare_output, read_manifest, tool_version

__all__ = [
    "EXIT_NUMERIC",
    "EXIT_OK",
    "EXIT_USAGE",
    "EXPERIMENT_SECTIONS",
    "MANIFEST_NAME",
    "ExperimentConfig",
    "RunManifest",
    "build_parser",
    "cmd_eval",
    "cmd_gen",
    "cmd_graph",
    "cmd_pretrain",
    "cmd_sweep",
    "cmd_train",
    "load_experiment_config",
    "main",
    "prepare_output",
    "read_manifest",
    "resolve_experiment",
    "tool_version",
]
