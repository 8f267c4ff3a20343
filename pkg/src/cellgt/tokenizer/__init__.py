from .tokens import Projection, TokenMarkers, TokenSet, tokenize, tokenize_nodes

__all__ = [
    "Projection",
    "TokenMarkers",
    "TokenSet",
    "tokenize",
    "tokenize_nodes",
]
