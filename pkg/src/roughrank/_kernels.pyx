# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops. Must stay operation-for-operation identical to
``_kernels_py`` so both backends return bit-identical results."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()


def hinge_sgd(const double[:, ::1] X, const double[::1] y, int epochs,
              double eta0, double lam):
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t d = X.shape[1]
    cdef Py_ssize_t i, k
    cdef int epoch
    cdef long long t = 0
    cdef double eta, score, b = 0.0
    w_arr = np.zeros(d, dtype=np.float64)
    cdef double[::1] w = w_arr
    with nogil:
        for epoch in range(epochs):
            for i in range(n):
                t += 1
                eta = eta0 / sqrt(<double>t)
                score = b
                for k in range(d):
                    score = score + w[k] * X[i, k]
                if y[i] * score < 1.0:
                    for k in range(d):
                        w[k] = w[k] - eta * (lam * w[k] - y[i] * X[i, k])
                    b = b + eta * y[i]
                else:
                    for k in range(d):
                        w[k] = w[k] - eta * (lam * w[k])
    return w_arr, b
