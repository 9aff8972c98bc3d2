"""Certified, training-free upper bounds on quantum-kernel regression MSE.

Pauli feature maps are simulated exactly; each Pauli axis is scored by a
closed-form single-feature least-squares fit, and an adaptive Monte Carlo
loop certifies the best sampled axis without scanning all ``4**n`` axes.
"""
from . import backend
from .axis_bound import AxisScore, LabeledFeatures, exact_scan, score_axis
from .certify import CertificationResult, CertifyParams, StopReason, adaptive_certify
from .errors import (
    ArgumentError,
    ConstructionError,
    DataError,
    NumericalError,
    PauliBoundError,
    SizeError,
)
from .feature_map import FeatureMapConfig, config_grid, feature_matrix, kernel_matrix
from .quantum_core import PauliString, Statevector

__version__ = "0.1.0"
