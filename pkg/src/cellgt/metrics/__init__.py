from .fscore import FScores, MetricsReport, confusion_matrix, fscores, fscores_from_confusion

__all__ = [
    "FScores",
    "MetricsReport",
    "confusion_matrix",
    "fscores",
    "fscores_from_confusion",
]
