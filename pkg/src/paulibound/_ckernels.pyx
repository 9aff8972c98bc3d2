# cython: language_level=3
"""Compiled versions of the hot kernels in ``_pykernels``.

Signatures and conventions match the NumPy module exactly; see its
docstring for the bit layout of Pauli strings.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, sqrt, fabs

cnp.import_array()

NAME = "compiled"

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


cdef inline int _pc(long long v) noexcept nogil:
    return __builtin_popcountll(<unsigned long long>v)


cdef inline double complex _ipow(int k) noexcept nogil:
    k &= 3
    if k == 0:
        return 1.0
    elif k == 1:
        return 1j
    elif k == 2:
        return -1.0
    return -1j


cdef void _fwht(double complex* v, Py_ssize_t dim) noexcept nogil:
    cdef Py_ssize_t h = 1, i, j
    cdef double complex a, b
    while h < dim:
        i = 0
        while i < dim:
            for j in range(i, i + h):
                a = v[j]
                b = v[j + h]
                v[j] = a + b
                v[j + h] = a - b
            i += 2 * h
        h *= 2


cdef void _rotate_row(double complex* psi, Py_ssize_t dim, long long xmask,
                      long long zmask, double theta) noexcept nogil:
    cdef double c = cos(theta), s = sin(theta)
    cdef int ny = _pc(xmask & zmask)
    cdef double complex isp = _ipow(ny + 1) * s  # i * i^ny * sin
    cdef Py_ssize_t k, k2
    cdef double complex a, b
    cdef double sgn_k, sgn_k2
    if xmask == 0:
        for k in range(dim):
            if _pc(k & zmask) & 1:
                psi[k] = psi[k] * (c - 1j * s)
            else:
                psi[k] = psi[k] * (c + 1j * s)
        return
    for k in range(dim):
        k2 = k ^ xmask
        if k2 < k:
            continue
        a = psi[k]
        b = psi[k2]
        sgn_k = -1.0 if (_pc(k & zmask) & 1) else 1.0
        sgn_k2 = -1.0 if (_pc(k2 & zmask) & 1) else 1.0
        psi[k] = c * a + isp * sgn_k2 * b
        psi[k2] = c * b + isp * sgn_k * a


def hadamard_all(states):
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] out = np.array(
        np.atleast_2d(states), dtype=np.complex128, order="C", copy=True)
    cdef Py_ssize_t rows = out.shape[0], dim = out.shape[1], r, k
    cdef double scale = 1.0 / sqrt(<double>dim)
    cdef double complex* row
    with nogil:
        for r in range(rows):
            row = &out[r, 0]
            _fwht(row, dim)
            for k in range(dim):
                row[k] = row[k] * scale
    return out.reshape(np.shape(states))


def apply_pauli(states, long long xmask, long long zmask):
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] src = np.ascontiguousarray(
        np.atleast_2d(states), dtype=np.complex128)
    cdef Py_ssize_t rows = src.shape[0], dim = src.shape[1], r, j
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] out = np.empty((rows, dim), dtype=np.complex128)
    cdef double complex ph = _ipow(_pc(xmask & zmask))
    with nogil:
        for r in range(rows):
            for j in range(dim):
                # P|j> = ph * sign(j) |j ^ x>
                if _pc(j & zmask) & 1:
                    out[r, j ^ xmask] = -ph * src[r, j]
                else:
                    out[r, j ^ xmask] = ph * src[r, j]
    return out.reshape(np.shape(states))


def apply_pauli_rotation(states, long long xmask, long long zmask, thetas):
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] out = np.array(
        np.atleast_2d(states), dtype=np.complex128, order="C", copy=True)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] th = np.ascontiguousarray(
        np.broadcast_to(np.asarray(thetas, dtype=np.float64).reshape(-1), (out.shape[0],)))
    cdef Py_ssize_t rows = out.shape[0], dim = out.shape[1], r
    with nogil:
        for r in range(rows):
            _rotate_row(&out[r, 0], dim, xmask, zmask, th[r])
    return out.reshape(np.shape(states))


def encode_batch(angles, xmasks, zmasks, int n_qubits, int reps):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] ang = np.ascontiguousarray(angles, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] xm = np.ascontiguousarray(xmasks, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] zm = np.ascontiguousarray(zmasks, dtype=np.int64)
    cdef Py_ssize_t rows = ang.shape[0], n_terms = xm.shape[0]
    cdef Py_ssize_t dim = (<Py_ssize_t>1) << n_qubits
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] out = np.zeros((rows, dim), dtype=np.complex128)
    cdef double scale = 1.0 / sqrt(<double>dim)
    cdef Py_ssize_t r, t, k
    cdef int rep
    cdef double complex* row
    with nogil:
        for r in range(rows):
            row = &out[r, 0]
            row[0] = 1.0
            for rep in range(reps):
                _fwht(row, dim)
                for k in range(dim):
                    row[k] = row[k] * scale
                for t in range(n_terms):
                    _rotate_row(row, dim, xm[t], zm[t], ang[r, t])
    return out


def pauli_expectations(states, int n_qubits, code_of):
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] psi = np.ascontiguousarray(
        np.atleast_2d(states), dtype=np.complex128)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] codes = np.ascontiguousarray(code_of, dtype=np.int64)
    cdef Py_ssize_t rows = psi.shape[0], dim = psi.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((rows, dim * dim), dtype=np.float64)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] buf_arr = np.empty(dim, dtype=np.complex128)
    cdef double complex* buf = &buf_arr[0]
    cdef double complex w, a
    cdef double max_imag = 0.0
    cdef Py_ssize_t r, x, j, z
    with nogil:
        for r in range(rows):
            for x in range(dim):
                for j in range(dim):
                    a = psi[r, j ^ x]
                    buf[j] = (a.real - 1j * a.imag) * psi[r, j]
                _fwht(buf, dim)
                for z in range(dim):
                    w = _ipow(_pc(x & z)) * buf[z]
                    out[r, codes[x, z]] = w.real
                    if fabs(w.imag) > max_imag:
                        max_imag = fabs(w.imag)
    return out, max_imag


def axis_moments(features, labels):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] a = np.ascontiguousarray(features, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] y = np.ascontiguousarray(labels, dtype=np.float64)
    cdef Py_ssize_t n = a.shape[0], d = a.shape[1], k, i
    cdef cnp.ndarray[cnp.float64_t, ndim=1] mean = np.zeros(d)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] var = np.zeros(d)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cov = np.zeros(d)
    cdef double ybar = 0.0, dev, yc
    with nogil:
        for k in range(n):
            ybar += y[k]
        ybar /= n
        for k in range(n):
            for i in range(d):
                mean[i] += a[k, i]
        for i in range(d):
            mean[i] /= n
        for k in range(n):
            yc = y[k] - ybar
            for i in range(d):
                dev = a[k, i] - mean[i]
                var[i] += dev * dev
                cov[i] += dev * yc
        for i in range(d):
            var[i] /= n
            cov[i] /= n
    return mean, var, cov


def fisher_yates_swaps(cnp.int64_t[::1] perm, Py_ssize_t start, picks):
    cdef cnp.int64_t[::1] p = np.ascontiguousarray(picks, dtype=np.int64)
    cdef Py_ssize_t k, i, j
    cdef cnp.int64_t tmp
    for k in range(p.shape[0]):
        i = start + k
        j = p[k]
        tmp = perm[i]
        perm[i] = perm[j]
        perm[j] = tmp
