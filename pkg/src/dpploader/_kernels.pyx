# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled statevector kernels; see _kernels_py for the reference API."""
import numpy as np

from libc.math cimport cos, sin

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


cdef inline unsigned long long _insert_zero(unsigned long long x, int pos) nogil:
    cdef unsigned long long low = x & ((1ULL << pos) - 1ULL)
    return ((x >> pos) << (pos + 1)) | low


def apply_1q(double complex[::1] psi, int w, int q,
             double complex m00, double complex m01,
             double complex m10, double complex m11):
    cdef int pos = w - 1 - q
    cdef unsigned long long stride = 1ULL << pos
    cdef unsigned long long half = 1ULL << (w - 1)
    cdef unsigned long long k, i0, i1
    cdef double complex a, b
    with nogil:
        for k in range(half):
            i0 = _insert_zero(k, pos)
            i1 = i0 | stride
            a = psi[i0]
            b = psi[i1]
            psi[i0] = m00 * a + m01 * b
            psi[i1] = m10 * a + m11 * b


def apply_diag1(double complex[::1] psi, int w, int q,
                double complex d0, double complex d1):
    cdef int pos = w - 1 - q
    cdef unsigned long long stride = 1ULL << pos
    cdef unsigned long long half = 1ULL << (w - 1)
    cdef unsigned long long k, i0
    with nogil:
        for k in range(half):
            i0 = _insert_zero(k, pos)
            psi[i0] = d0 * psi[i0]
            psi[i0 | stride] = d1 * psi[i0 | stride]


def apply_givens(double complex[::1] psi, int w, int i, int j,
                 double c, double s, bint parity):
    cdef int pi = w - 1 - i
    cdef int pj = w - 1 - j
    cdef int lo = pi if pi < pj else pj
    cdef int hi = pi if pi > pj else pj
    cdef unsigned long long bi = 1ULL << pi
    cdef unsigned long long bj = 1ULL << pj
    cdef unsigned long long between = ((1ULL << hi) - 1ULL) & ~((1ULL << (lo + 1)) - 1ULL)
    cdef unsigned long long quarter = 1ULL << (w - 2)
    cdef unsigned long long k, base, ia, ib
    cdef double ss
    cdef double complex a, b
    with nogil:
        for k in range(quarter):
            base = _insert_zero(_insert_zero(k, lo), hi)
            ia = base | bi
            ib = base | bj
            ss = s
            if parity and (__builtin_popcountll(base & between) & 1):
                ss = -s
            a = psi[ia]
            b = psi[ib]
            psi[ia] = c * a - ss * b
            psi[ib] = ss * a + c * b


def apply_cnot(double complex[::1] psi, int w, int ctrl, int target):
    cdef int pc = w - 1 - ctrl
    cdef int pt = w - 1 - target
    cdef int lo = pc if pc < pt else pt
    cdef int hi = pc if pc > pt else pt
    cdef unsigned long long bc = 1ULL << pc
    cdef unsigned long long bt = 1ULL << pt
    cdef unsigned long long quarter = 1ULL << (w - 2)
    cdef unsigned long long k, base
    cdef double complex tmp
    with nogil:
        for k in range(quarter):
            base = _insert_zero(_insert_zero(k, lo), hi) | bc
            tmp = psi[base]
            psi[base] = psi[base | bt]
            psi[base | bt] = tmp


def apply_sign_mask(double complex[::1] psi, int w, unsigned long long mask):
    cdef unsigned long long n = 1ULL << w
    cdef unsigned long long idx
    with nogil:
        for idx in range(n):
            if (idx & mask) == mask:
                psi[idx] = -psi[idx]


def apply_crz(double complex[::1] psi, int w, int ctrl, int target, double phi):
    cdef unsigned long long bc = 1ULL << (w - 1 - ctrl)
    cdef unsigned long long bt = 1ULL << (w - 1 - target)
    cdef unsigned long long n = 1ULL << w
    cdef unsigned long long idx
    cdef double complex e0 = cos(0.5 * phi) - 1j * sin(0.5 * phi)
    cdef double complex e1 = cos(0.5 * phi) + 1j * sin(0.5 * phi)
    with nogil:
        for idx in range(n):
            if idx & bc:
                if idx & bt:
                    psi[idx] = e1 * psi[idx]
                else:
                    psi[idx] = e0 * psi[idx]


def hamming_weights(int w):
    cdef unsigned long long n = 1ULL << w
    out = np.empty(n, dtype=np.uint8)
    cdef unsigned char[::1] o = out
    cdef unsigned long long idx
    with nogil:
        for idx in range(n):
            o[idx] = <unsigned char>__builtin_popcountll(idx)
    return out
