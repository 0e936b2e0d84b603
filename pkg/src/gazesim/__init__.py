"""Eye-movement similarity toolkit.

Elastic trajectory distances (TWED, DTW, lock-step), per-window similarity
matrices, multi-scale community clustering, answer-correctness correlation,
and a read-only exploration service.
"""

from .models import (
    AnswerSheet,
    CohortDataset,
    CouplingGraph,
    EegRecording,
    FixationSeries,
    Partition,
    PenaltyMatrix,
    PreprocessConfig,
    RawFixationRecord,
    ScaleSweep,
    ScreenGeometry,
    SimilarityMatrix,
    SweepGrid,
    TwedParams,
    WindowSpec,
)

__all__ = [
    "AnswerSheet",
    "CohortDataset",
    "CouplingGraph",
    "EegRecording",
    "FixationSeries",
    "Partition",
    "PenaltyMatrix",
    "PreprocessConfig",
    "RawFixationRecord",
    "ScaleSweep",
    "ScreenGeometry",
    "SimilarityMatrix",
    "SweepGrid",
    "TwedParams",
    "WindowSpec",
]

__version__ = "0.1.0"
