# lasserre/app/models/__init__.py

from app.models.embedding import Embedding, SpectralReport
from app.models.instance import GlobalConstraint, LabelingInstance, Term
from app.models.moments import (
    AssignmentIndex,
    MomentMatrix,
    MomentStructure,
    SdpProblem,
    SdpSolution,
)
from app.models.rounding import ConditionalTable, RoundingResult, SeedSet

__all__ = [
    "AssignmentIndex",
    "ConditionalTable",
    "Embedding",
    "GlobalConstraint",
    "LabelingInstance",
    "MomentMatrix",
    "MomentStructure",
    "RoundingResult",
    "SdpProblem",
    "SdpSolution",
    "SeedSet",
    "SpectralReport",
    "Term",
]
