"""NumPy implementations of the hot kernels.

Same signatures and semantics as the compiled ``_ckernels`` module; used
whenever the extension is unavailable or explicitly selected.

Bit conventions: qubit ``k`` is bit ``k`` of the amplitude index.  A Pauli
string is described by ``(xmask, zmask)`` with ``Y = iXZ``, so its action is
``P|j> = i^ny (-1)^popcount(j & zmask) |j ^ xmask>`` where
``ny = popcount(xmask & zmask)``.
"""
import numpy as np

NAME = "python"

# chunk limit (complex entries) for the all-axes expectation buffer
_CHUNK_ENTRIES = 1 << 22


def _fwht_last_axis(v):
    """Unnormalized Walsh-Hadamard transform along the last axis (copy)."""
    dim = v.shape[-1]
    lead = v.shape[:-1]
    out = v.reshape(-1, dim).copy()
    h = 1
    while h < dim:
        blocks = out.reshape(-1, dim // (2 * h), 2, h)
        a = blocks[:, :, 0, :].copy()
        b = blocks[:, :, 1, :]
        blocks[:, :, 0, :] = a + b
        blocks[:, :, 1, :] = a - b
        h *= 2
    return out.reshape(*lead, dim)


def hadamard_all(states):
    states = np.asarray(states, dtype=np.complex128)
    dim = states.shape[-1]
    return _fwht_last_axis(states) / np.sqrt(dim)


def apply_pauli(states, xmask, zmask):
    states = np.asarray(states, dtype=np.complex128)
    dim = states.shape[-1]
    idx = np.arange(dim)
    src = idx ^ xmask
    ny = bin(xmask & zmask).count("1")
    sign = 1.0 - 2.0 * (_popcount(src & zmask) & 1)
    return (1j**ny) * sign * states[..., src]


def apply_pauli_rotation(states, xmask, zmask, thetas):
    """exp(i*theta*P) applied row-wise, one angle per row."""
    states = np.asarray(states, dtype=np.complex128)
    thetas = np.asarray(thetas, dtype=np.float64).reshape(-1, 1)
    return np.cos(thetas) * states + 1j * np.sin(thetas) * apply_pauli(states, xmask, zmask)


def encode_batch(angles, xmasks, zmasks, n_qubits, reps):
    """Run ``reps`` layers of (H on all qubits, then each term rotation)."""
    angles = np.asarray(angles, dtype=np.float64)
    n_rows = angles.shape[0]
    dim = 1 << n_qubits
    states = np.zeros((n_rows, dim), dtype=np.complex128)
    states[:, 0] = 1.0
    for _ in range(reps):
        states = hadamard_all(states)
        for t in range(len(xmasks)):
            states = apply_pauli_rotation(states, int(xmasks[t]), int(zmasks[t]), angles[:, t])
    return states


def pauli_expectations(states, n_qubits, code_of):
    """All 4^n Pauli expectations for each row of ``states``.

    ``code_of[x, z]`` maps a mask pair to the base-4 Pauli code.  Returns the
    real expectations, shape ``(rows, 4**n)``, and the largest absolute
    imaginary part encountered.
    """
    states = np.atleast_2d(np.asarray(states, dtype=np.complex128))
    n_rows, dim = states.shape
    idx = np.arange(dim)
    # jx[x, j] = j ^ x
    jx = idx[None, :] ^ idx[:, None]
    ny = _popcount(idx[:, None] & idx[None, :])
    phase = (1j) ** ny  # phase[x, z]
    code_flat = np.asarray(code_of).reshape(-1)
    out = np.empty((n_rows, dim * dim), dtype=np.float64)
    max_imag = 0.0
    step = max(1, _CHUNK_ENTRIES // (dim * dim))
    for start in range(0, n_rows, step):
        psi = states[start:start + step]
        v = np.conj(psi[:, jx]) * psi[:, None, :]
        w = _fwht_last_axis(v) * phase[None, :, :]
        w = w.reshape(len(psi), -1)
        out[start:start + step, code_flat] = w.real
        if w.size:
            max_imag = max(max_imag, float(np.abs(w.imag).max()))
    return out, max_imag


def _popcount(arr):
    arr = np.asarray(arr, dtype=np.int64).copy()
    count = np.zeros_like(arr)
    while arr.any():
        count += arr & 1
        arr >>= 1
    return count


def axis_moments(features, labels):
    """Population mean, variance and covariance with the labels, per column."""
    features = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    n_rows = features.shape[0]
    mean = features.mean(axis=0)
    centered = features - mean
    var = np.einsum("ij,ij->j", centered, centered) / n_rows
    cov = centered.T @ (labels - labels.mean()) / n_rows
    return mean, var, cov


def fisher_yates_swaps(perm, start, picks):
    """Partial Fisher-Yates: swap position ``start + k`` with ``picks[k]``."""
    for k, j in enumerate(picks):
        i = start + k
        perm[i], perm[j] = perm[j], perm[i]
