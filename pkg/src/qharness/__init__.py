"""
qharness - coefficient recurrences of martingale orthogonal polynomials of quadratic harnesses.

This package solves, verifies and classifies the recurrence system for the
polynomials, including its closed-form special cases.
"""

from qharness.qharness import ClassificationReport, KnownProcess, QHarness
from qharness.recurrences import Mode, QHParams

__all__ = [
    "ClassificationReport",
    "KnownProcess",
    "Mode",
    "QHParams",
    "QHarness",
]
