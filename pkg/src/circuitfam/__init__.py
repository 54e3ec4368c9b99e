"""Classify IQP / Clifford / Clifford+T circuits from polynomially many shots.

Pipeline: random circuits -> dense statevector simulation -> four shot
acquisition strategies under an s = lambda n^2 budget -> feature vectors ->
four classifiers evaluated over repeated stratified holdouts. The ``theory``
module checks the basis-concentration and variance results with the exact
statevector oracle.
"""
from ._accel import backend_name
from .circuits import Circuit, Family, Gate, GateKind, generate_circuit, parse_circuit, serialize_circuit
from .features import FeatureVector, feature_dim, featurize
from .measurement import MeasurementSet, Strategy, measure, shot_budget
from .simulator import PauliString, Statevector, apply_basis_rotation, exact_expectation, run, sample

__version__ = "0.1.0"

__all__ = [
    "Circuit",
    "FeatureVector",
    "Family",
    "Gate",
    "GateKind",
    "MeasurementSet",
    "PauliString",
    "Statevector",
    "Strategy",
    "apply_basis_rotation",
    "backend_name",
    "exact_expectation",
    "feature_dim",
    "featurize",
    "generate_circuit",
    "measure",
    "parse_circuit",
    "run",
    "sample",
    "serialize_circuit",
    "shot_budget",
]
