"""Kernel SVM detection of coincidentally correct tests for spectrum-based
fault localization."""

__version__ = "0.1.0"

from .detector import CCReport, Verdict, detect_cc, localize_after_cc
from .evalkit import exam, prf, safety_precision, wilcoxon_one_tailed
from .sbfl import Ranking, naish, ochiai, rank, tarantula
from .seqkernel import GramMatrix, build_gram, find_runs, select_nonoverlapping, similarity
from .svm import SvmConfig, SvmModel, decision_value, train
from .synth import SynthConfig, generate
from .traces import (
    ExecutionTrace,
    Outcome,
    TestSuite,
    compute_spectrum,
    flip_outcomes,
    parse_suite,
    serialize_suite,
)

__all__ = [
    "CCReport",
    "ExecutionTrace",
    "GramMatrix",
    "Outcome",
    "Ranking",
    "SvmConfig",
    "SvmModel",
    "SynthConfig",
    "TestSuite",
    "Verdict",
    "build_gram",
    "compute_spectrum",
    "decision_value",
    "detect_cc",
    "exam",
    "find_runs",
    "flip_outcomes",
    "generate",
    "localize_after_cc",
    "naish",
    "ochiai",
    "parse_suite",
    "prf",
    "rank",
    "safety_precision",
    "select_nonoverlapping",
    "serialize_suite",
    "similarity",
    "tarantula",
    "train",
    "wilcoxon_one_tailed",
]
