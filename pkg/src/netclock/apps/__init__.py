from .completion import (
    CompletionInstance,
    CompletionResult,
    complete,
    completion_batch,
    hide,
    write_completion_csv,
)
from .features import (
    FEATURE_NAMES,
    SizeFeatureRow,
    extract_size_features,
    write_feature_csv,
)

__all__ = [
    "CompletionInstance",
    "CompletionResult",
    "complete",
    "completion_batch",
    "hide",
    "write_completion_csv",
    "FEATURE_NAMES",
    "SizeFeatureRow",
    "extract_size_features",
    "write_feature_csv",
]
