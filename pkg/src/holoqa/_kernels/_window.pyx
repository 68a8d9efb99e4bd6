# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Cython implementation of the sliding-window moment kernel.

Two separable passes with running-sum updates, so the cost per pixel is
independent of the window size. Boundary handling is symmetric padding
("reflect with edge repeat"), matching scipy.ndimage mode="reflect".
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef inline Py_ssize_t _sym(Py_ssize_t i, Py_ssize_t n) nogil:
    # symmetric extension: ... 2 1 0 | 0 1 2 ... n-1 | n-1 n-2 ...
    cdef Py_ssize_t period = 2 * n
    i %= period
    if i < 0:
        i += period
    if i >= n:
        i = period - 1 - i
    return i


def local_moments(object img_in, int window_h, int window_w):
    """Local mean and variance over a sliding window with symmetric padding."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] img = np.ascontiguousarray(img_in, dtype=np.float64)
    cdef Py_ssize_t rows = img.shape[0]
    cdef Py_ssize_t cols = img.shape[1]
    cdef Py_ssize_t hh = window_h // 2
    cdef Py_ssize_t hw = window_w // 2
    cdef double inv_n = 1.0 / (window_h * window_w)

    cdef cnp.ndarray[cnp.float64_t, ndim=2] s1 = np.empty((rows, cols))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] s2 = np.empty((rows, cols))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] mean = np.empty((rows, cols))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] var = np.empty((rows, cols))

    # symmetric index maps for the padded ranges of both axes
    cdef cnp.ndarray[cnp.int64_t, ndim=1] cmap = np.empty(cols + window_w - 1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] rmap = np.empty(rows + window_h - 1, dtype=np.int64)
    cdef Py_ssize_t i
    for i in range(cols + window_w - 1):
        cmap[i] = _sym(i - hw, cols)
    for i in range(rows + window_h - 1):
        rmap[i] = _sym(i - hh, rows)

    cdef Py_ssize_t r, c
    cdef double acc1, acc2, v

    # horizontal pass: sliding row sums of values and squares
    for r in range(rows):
        acc1 = 0.0
        acc2 = 0.0
        for i in range(window_w):
            v = img[r, cmap[i]]
            acc1 += v
            acc2 += v * v
        s1[r, 0] = acc1
        s2[r, 0] = acc2
        for c in range(1, cols):
            v = img[r, cmap[c + window_w - 1]]
            acc1 += v
            acc2 += v * v
            v = img[r, cmap[c - 1]]
            acc1 -= v
            acc2 -= v * v
            s1[r, c] = acc1
            s2[r, c] = acc2

    # vertical pass: sliding column sums of the row sums
    cdef cnp.ndarray[cnp.float64_t, ndim=1] col1 = np.empty(cols)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] col2 = np.empty(cols)
    for c in range(cols):
        col1[c] = 0.0
        col2[c] = 0.0
    for i in range(window_h):
        r = rmap[i]
        for c in range(cols):
            col1[c] += s1[r, c]
            col2[c] += s2[r, c]
    for c in range(cols):
        acc1 = col1[c] * inv_n
        acc2 = col2[c] * inv_n - acc1 * acc1
        mean[0, c] = acc1
        var[0, c] = acc2 if acc2 > 0.0 else 0.0
    for r in range(1, rows):
        i = rmap[r + window_h - 1]
        for c in range(cols):
            col1[c] += s1[i, c]
            col2[c] += s2[i, c]
        i = rmap[r - 1]
        for c in range(cols):
            col1[c] -= s1[i, c]
            col2[c] -= s2[i, c]
        for c in range(cols):
            acc1 = col1[c] * inv_n
            acc2 = col2[c] * inv_n - acc1 * acc1
            mean[r, c] = acc1
            var[r, c] = acc2 if acc2 > 0.0 else 0.0

    return mean, var
