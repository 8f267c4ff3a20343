from .digest import canonical_json, config_digest, tree_digest
from .rng import make_rng, restore_rng, rng_state

__all__ = [
    "canonical_json",
    "config_digest",
    "make_rng",
    "restore_rng",
    "rng_state",
    "tree_digest",
]
