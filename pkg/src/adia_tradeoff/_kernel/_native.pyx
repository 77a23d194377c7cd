# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled SU(2) stepping loop for the interpolating two-level family.

Same contract as pure.su2_interp_propagate: f_sub1/f_sub2 hold the two
effective schedule values per step, theta = T * h / 2 is the angle per
substep, and the state is recorded after each step index in marks.
"""
import numpy as np

cimport numpy as cnp

from libc.math cimport cos, sin, sqrt

cnp.import_array()


def su2_interp_propagate(
    cnp.complex128_t[:, ::1] h_i,
    cnp.complex128_t[:, ::1] h_f,
    double[::1] f_sub1,
    double[::1] f_sub2,
    double theta,
    cnp.complex128_t[::1] psi0,
    long[::1] marks,
):
    cdef Py_ssize_t n_steps = f_sub1.shape[0]
    cdef Py_ssize_t n_marks = marks.shape[0]
    out = np.empty((n_marks, 2), dtype=np.complex128)
    cdef cnp.complex128_t[:, ::1] out_view = out

    cdef double hi00 = h_i[0, 0].real
    cdef double hi11 = h_i[1, 1].real
    cdef double hf00 = h_f[0, 0].real
    cdef double hf11 = h_f[1, 1].real
    cdef double complex hi01 = h_i[0, 1]
    cdef double complex hf01 = h_f[0, 1]
    cdef double complex imag_unit = 1j

    cdef double complex p0 = psi0[0]
    cdef double complex p1 = psi0[1]
    cdef Py_ssize_t k, sub, j = 0
    cdef double f, h00, h11, tr, az, r, cs, fac
    cdef double complex b, phase, u00, u01, u10, u11, q0, q1

    for k in range(n_steps):
        for sub in range(2):
            f = f_sub1[k] if sub == 0 else f_sub2[k]
            h00 = (1.0 - f) * hi00 + f * hf00
            h11 = (1.0 - f) * hi11 + f * hf11
            b = (1.0 - f) * hi01 + f * hf01
            tr = 0.5 * (h00 + h11)
            az = h00 - tr
            r = sqrt(az * az + b.real * b.real + b.imag * b.imag)
            if r > 0.0:
                cs = cos(theta * r)
                fac = sin(theta * r) / r
            else:
                cs = 1.0
                fac = theta
            phase = cos(theta * tr) - imag_unit * sin(theta * tr)
            u00 = phase * (cs - imag_unit * fac * az)
            u01 = phase * (-imag_unit * fac * b)
            u10 = phase * (-imag_unit * fac * b.conjugate())
            u11 = phase * (cs + imag_unit * fac * az)
            q0 = u00 * p0 + u01 * p1
            q1 = u10 * p0 + u11 * p1
            p0 = q0
            p1 = q1
        if j < n_marks and marks[j] == k + 1:
            out_view[j, 0] = p0
            out_view[j, 1] = p1
            j += 1
    return out
