"""Dense statevectors and exact Pauli-string algebra for small registers.

Conventions used throughout the package:

* A Pauli string on ``n`` qubits is a base-4 integer ``code`` in
  ``[0, 4**n)``; digit ``k`` (``code // 4**k % 4``) acts on qubit ``k`` with
  ``0=I, 1=X, 2=Y, 3=Z``.
* Qubit ``k`` is bit ``k`` of the amplitude index (qubit 0 is the least
  significant bit).
* ``Y = [[0, -1j], [1j, 0]] = iXZ``.
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import backend
from .errors import ArgumentError, ConstructionError, NumericalError, SizeError

MAX_QUBITS = 12
NORM_TOL = 1e-10
IMAG_TOL = 1e-10

_LETTERS = "IXYZ"


def _check_n(n_qubits):
    if not isinstance(n_qubits, (int, np.integer)) or not 1 <= n_qubits <= MAX_QUBITS:
        raise SizeError(f"n_qubits must be an integer in [1, {MAX_QUBITS}], got {n_qubits!r}")
    return int(n_qubits)


def encode_digits(digits):
    """Base-4 code of a per-qubit digit sequence (digit k is qubit k)."""
    code = 0
    for k, digit in enumerate(digits):
        if digit not in (0, 1, 2, 3):
            raise ArgumentError(f"Pauli digit must be 0..3, got {digit!r} at qubit {k}")
        code += int(digit) * 4**k
    return code


def decode_code(code, n_qubits):
    """Inverse of :func:`encode_digits`."""
    return tuple((code // 4**k) % 4 for k in range(n_qubits))


@dataclass(frozen=True)
class PauliString:
    """Tensor product of single-qubit Paulis, stored as a base-4 code."""

    code: int
    n_qubits: int

    def __post_init__(self):
        _check_n(self.n_qubits)
        if not 0 <= self.code < 4**self.n_qubits:
            raise ArgumentError(
                f"Pauli code {self.code} out of range for {self.n_qubits} qubits"
            )

    @classmethod
    def from_digits(cls, digits):
        return cls(encode_digits(digits), len(digits))

    @classmethod
    def from_label(cls, label):
        """Build from a letter string; character k acts on qubit k (``"XIZ"``)."""
        try:
            digits = [_LETTERS.index(ch) for ch in label.upper()]
        except ValueError:
            raise ArgumentError(f"invalid Pauli label {label!r}") from None
        return cls.from_digits(digits)

    @classmethod
    def on_qubits(cls, n_qubits, ops):
        """Build from a ``{qubit: letter}`` mapping, identity elsewhere."""
        digits = [0] * n_qubits
        for qubit, letter in ops.items():
            digits[qubit] = _LETTERS.index(letter)
        return cls.from_digits(digits)

    @property
    def digits(self):
        return decode_code(self.code, self.n_qubits)

    @property
    def label(self):
        return "".join(_LETTERS[d] for d in self.digits)

    @property
    def support(self):
        return tuple(k for k, d in enumerate(self.digits) if d)

    @property
    def xmask(self):
        return sum(1 << k for k, d in enumerate(self.digits) if d in (1, 2))

    @property
    def zmask(self):
        return sum(1 << k for k, d in enumerate(self.digits) if d in (2, 3))

    @property
    def is_identity(self):
        return self.code == 0

    def __str__(self):
        return self.label


@dataclass(frozen=True, eq=False)
class Statevector:
    """Normalized amplitude vector of length ``2**n_qubits`` (read-only)."""

    amplitudes: np.ndarray
    n_qubits: int

    def __post_init__(self):
        n = _check_n(self.n_qubits)
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.shape != (1 << n,):
            raise ArgumentError(f"expected {1 << n} amplitudes, got {amps.shape[0]}")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_array(cls, amplitudes):
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        n = amps.shape[0].bit_length() - 1
        if amps.shape[0] != 1 << n:
            raise ArgumentError(f"length {amps.shape[0]} is not a power of two")
        return cls(amps, n)

    @property
    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amplitudes, dtype=dtype)


def _same_size(state, pauli):
    if state.n_qubits != pauli.n_qubits:
        raise ArgumentError(
            f"Pauli string acts on {pauli.n_qubits} qubits, state has {state.n_qubits}"
        )


@lru_cache(maxsize=None)
def pauli_tables(n_qubits):
    """Mask tables for all ``4**n`` strings.

    Returns ``(xmask, zmask, code_of)`` where ``xmask[c]``/``zmask[c]`` are
    the masks of code ``c`` and ``code_of[x, z]`` is the inverse map.
    """
    n = _check_n(n_qubits)
    codes = np.arange(4**n, dtype=np.int64)
    xmask = np.zeros_like(codes)
    zmask = np.zeros_like(codes)
    for k in range(n):
        digit = (codes >> (2 * k)) & 3
        xmask |= ((digit == 1) | (digit == 2)).astype(np.int64) << k
        zmask |= ((digit == 2) | (digit == 3)).astype(np.int64) << k
    code_of = np.empty((1 << n, 1 << n), dtype=np.int64)
    code_of[xmask, zmask] = codes
    for arr in (xmask, zmask, code_of):
        arr.flags.writeable = False
    return xmask, zmask, code_of


def pauli_labels(n_qubits):
    return [PauliString(c, n_qubits).label for c in range(4**n_qubits)]


def zero_state(n):
    n = _check_n(n)
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[0] = 1.0
    return Statevector(amps, n)


def apply_hadamard_all(state):
    out = backend.kernels().hadamard_all(state.amplitudes[None, :])[0]
    return Statevector(out, state.n_qubits)


def apply_pauli(state, p):
    _same_size(state, p)
    out = backend.kernels().apply_pauli(state.amplitudes[None, :], p.xmask, p.zmask)[0]
    return Statevector(out, state.n_qubits)


def apply_pauli_exponential(state, p, theta):
    """Return ``exp(i*theta*P)|state>`` for a non-identity Pauli string."""
    _same_size(state, p)
    if p.is_identity:
        raise ConstructionError("exponential of the identity string requested")
    out = backend.kernels().apply_pauli_rotation(
        state.amplitudes[None, :], p.xmask, p.zmask, np.array([float(theta)])
    )[0]
    return Statevector(out, state.n_qubits)


def expectation(state, p):
    _same_size(state, p)
    moved = backend.kernels().apply_pauli(state.amplitudes[None, :], p.xmask, p.zmask)[0]
    value = np.vdot(state.amplitudes, moved)
    if abs(value.imag) > IMAG_TOL:
        raise NumericalError(
            f"<psi|{p.label}|psi> has imaginary part {value.imag:.3e}; state or operator is inconsistent"
        )
    return float(value.real)


def batch_expectations(amplitudes, n_qubits):
    """All-axes expectations for a batch of amplitude rows, shape ``(N, 4**n)``."""
    amps = np.atleast_2d(np.asarray(amplitudes, dtype=np.complex128))
    n = _check_n(n_qubits)
    if amps.shape[1] != 1 << n:
        raise ArgumentError(f"expected rows of length {1 << n}, got {amps.shape[1]}")
    _, _, code_of = pauli_tables(n)
    values, max_imag = backend.kernels().pauli_expectations(amps, n, code_of)
    if max_imag > IMAG_TOL:
        raise NumericalError(f"Pauli expectation imaginary part {max_imag:.3e} exceeds {IMAG_TOL}")
    return values


def all_expectations(state):
    """Vector ``a`` with ``a[code] = <psi|P_code|psi>`` for every Pauli string."""
    return batch_expectations(state.amplitudes[None, :], state.n_qubits)[0]


def fidelity(a, b):
    if a.n_qubits != b.n_qubits:
        raise ArgumentError("states act on different numbers of qubits")
    value = abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2
    if -1e-12 <= value - 1.0 <= 1e-12:
        value = min(value, 1.0)
    return float(value)
