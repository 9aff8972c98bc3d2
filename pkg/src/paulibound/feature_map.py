"""Pauli feature maps: the configuration grid and the data-to-state encoding.

A configuration is one point of preprocessing x Pauli sequence x data map x
entanglement x repetitions (3*3*3*2*2 = 108 maps for a fixed qubit count).
The circuit is ``(U(x) H^n)^r`` where ``U(x)`` is realised as the ordered
product of ``exp(i*phi_S(x)*P_S)`` over the term list.
"""
import itertools
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from . import backend
from .errors import ArgumentError, ConstructionError, DataError, NumericalError
from .quantum_core import (
    NORM_TOL,
    PauliString,
    Statevector,
    _check_n,
    batch_expectations,
)


class Preprocessing(Enum):
    ID = "id"
    TANH = "tanh"
    RBF_S1 = "rbf-s1"


class PauliSequence(Enum):
    Z_ZZ = "Z+ZZ"
    Y_YY = "Y+YY"
    ALL_PAIRS = "all_pairs"


class DataMap(Enum):
    PROD = "prod"
    PI_PROD = "pi*prod"
    SUM_PROD = "sum+prod"


class Entanglement(Enum):
    LINEAR = "lin"
    FULL = "full"


REPS = (1, 2)

# two-body types of all_pairs; letter 0 acts on the lower qubit of the pair
_PAIR_TYPES = ("XX", "XY", "XZ", "YY", "YZ", "ZZ")


def _lookup(enum_cls, value):
    if isinstance(value, enum_cls):
        return value
    for member in enum_cls:
        if value in (member.value, member.name, member.name.lower()):
            return member
    raise ArgumentError(f"unknown {enum_cls.__name__} {value!r}")


@dataclass(frozen=True)
class FeatureMapConfig:
    preprocessing: Preprocessing
    pauli_sequence: PauliSequence
    data_map: DataMap
    entanglement: Entanglement
    reps: int
    n_qubits: int

    def __post_init__(self):
        object.__setattr__(self, "preprocessing", _lookup(Preprocessing, self.preprocessing))
        object.__setattr__(self, "pauli_sequence", _lookup(PauliSequence, self.pauli_sequence))
        object.__setattr__(self, "data_map", _lookup(DataMap, self.data_map))
        object.__setattr__(self, "entanglement", _lookup(Entanglement, self.entanglement))
        if self.reps not in REPS:
            raise ArgumentError(f"reps must be one of {REPS}, got {self.reps!r}")
        _check_n(self.n_qubits)

    @property
    def name(self):
        """Canonical string, e.g. ``"rbf-s1 | prod | Z+ZZ | lin | r=2"``."""
        return " | ".join(
            (
                self.preprocessing.value,
                self.data_map.value,
                self.pauli_sequence.value,
                self.entanglement.value,
                f"r={self.reps}",
            )
        )

    @classmethod
    def from_name(cls, name, n_qubits):
        parts = [p.strip() for p in name.split("|")]
        if len(parts) != 5 or not parts[4].startswith("r="):
            raise ArgumentError(f"malformed config string {name!r}")
        prep, dmap, seq, ent, reps = parts
        try:
            reps = int(reps[2:])
        except ValueError:
            raise ArgumentError(f"malformed repetition field in {name!r}") from None
        return cls(prep, seq, dmap, ent, reps, n_qubits)

    def to_dict(self):
        return {
            "name": self.name,
            "preprocessing": self.preprocessing.value,
            "data_map": self.data_map.value,
            "pauli_sequence": self.pauli_sequence.value,
            "entanglement": self.entanglement.value,
            "reps": self.reps,
            "n_qubits": self.n_qubits,
        }

    def __str__(self):
        return self.name


def config_grid(n_qubits):
    """All 108 configurations for ``n_qubits``, in canonical enumeration order."""
    return [
        FeatureMapConfig(prep, seq, dmap, ent, reps, n_qubits)
        for prep, dmap, seq, ent, reps in itertools.product(
            Preprocessing, DataMap, PauliSequence, Entanglement, REPS
        )
    ]


@dataclass(frozen=True)
class Term:
    pauli: PauliString
    subset: tuple


def preprocess(x, kind):
    x = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(x)):
        raise DataError("non-finite input passed to preprocess")
    kind = _lookup(Preprocessing, kind)
    if kind is Preprocessing.ID:
        return x.copy()
    if kind is Preprocessing.TANH:
        return np.tanh(x)
    return np.exp(-0.5 * x * x)


def phase(x_sub, data_map):
    """Encoding angle for one term from the coordinates of its subset.

    Works on the last axis, so ``x_sub`` may be a batch of shape ``(N, |S|)``.
    A single coordinate maps to ``x`` (``pi*x`` for pi*prod).
    """
    x_sub = np.asarray(x_sub, dtype=np.float64)
    if x_sub.shape[-1] == 0:
        raise ConstructionError("phase of an empty qubit subset")
    data_map = _lookup(DataMap, data_map)
    prod = np.prod(x_sub, axis=-1)
    if data_map is DataMap.PI_PROD:
        out = math.pi * prod
    elif data_map is DataMap.SUM_PROD and x_sub.shape[-1] > 1:
        out = np.sum(x_sub, axis=-1) + prod
    else:
        out = prod
    return float(out) if np.ndim(out) == 0 else out


def _pairs(n_qubits, entanglement):
    if entanglement is Entanglement.LINEAR:
        return [(k, k + 1) for k in range(n_qubits - 1)]
    return list(itertools.combinations(range(n_qubits), 2))


def build_terms(config):
    return list(_build_terms(config.pauli_sequence, config.entanglement, config.n_qubits))


@lru_cache(maxsize=None)
def _build_terms(sequence, entanglement, n):
    if n < 2:
        raise ConstructionError(f"{sequence.value} needs at least 2 qubits, got {n}")
    if sequence is PauliSequence.Z_ZZ:
        singles, pair_types = "Z", ("ZZ",)
    elif sequence is PauliSequence.Y_YY:
        singles, pair_types = "Y", ("YY",)
    else:
        singles, pair_types = "XYZ", _PAIR_TYPES
    terms = [
        Term(PauliString.on_qubits(n, {k: letter}), (k,))
        for k in range(n)
        for letter in singles
    ]
    for i, j in _pairs(n, entanglement):
        for kind in pair_types:
            terms.append(Term(PauliString.on_qubits(n, {i: kind[0], j: kind[1]}), (i, j)))
    return tuple(terms)


def _as_batch(X, n_qubits):
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2 or X.shape[1] != n_qubits:
        raise DataError(f"expected {n_qubits} features per row, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise DataError("non-finite input to the feature map")
    return X


def term_angles(X, config):
    """Angle matrix ``(N, n_terms)`` for already-preprocessed inputs."""
    X = _as_batch(X, config.n_qubits)
    terms = build_terms(config)
    return np.column_stack([phase(X[:, list(t.subset)], config.data_map) for t in terms])


def encode_batch(X, config):
    """Amplitude matrix ``(N, 2**n)`` for preprocessed inputs ``X``."""
    terms = build_terms(config)
    angles = term_angles(X, config)
    xmasks = np.array([t.pauli.xmask for t in terms], dtype=np.int64)
    zmasks = np.array([t.pauli.zmask for t in terms], dtype=np.int64)
    states = backend.kernels().encode_batch(angles, xmasks, zmasks, config.n_qubits, config.reps)
    drift = np.abs(np.linalg.norm(states, axis=1) - 1.0)
    if drift.size and drift.max() > NORM_TOL:
        raise NumericalError(f"encoded state norm drifted by {drift.max():.3e}")
    return states


def encode(x, config):
    """Statevector for one preprocessed input vector."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise DataError("encode takes a single input vector")
    return Statevector(encode_batch(x, config)[0], config.n_qubits)


def feature_matrix(X, config):
    """Pauli feature matrix ``A[k, code] = a_code(x_k)`` (preprocessing applied)."""
    X = _as_batch(X, config.n_qubits)
    states = encode_batch(preprocess(X, config.preprocessing), config)
    return batch_expectations(states, config.n_qubits)


def pauli_features(x, config):
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise DataError("pauli_features takes a single input vector")
    return feature_matrix(x, config)[0]


def kernel_matrix(X, config):
    """Fidelity kernel ``K[j, k] = |<phi(x_j)|phi(x_k)>|^2`` (preprocessing applied)."""
    X = _as_batch(X, config.n_qubits)
    states = encode_batch(preprocess(X, config.preprocessing), config)
    gram = np.abs(states.conj() @ states.T) ** 2
    gram = 0.5 * (gram + gram.T)
    # rounding can push overlaps a hair above one
    return np.where((gram > 1.0) & (gram <= 1.0 + 1e-12), 1.0, gram)
