# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled force and kinematics kernels.

Mirrors ``_kernels_py`` operation for operation so both backends produce
bit-identical doubles; keep the loop structure in lockstep.
"""

from libc.math cimport sqrt


def accumulate_forces(double[:, ::1] pos, double[::1] masses,
                      long long[::1] members, double g, double tau,
                      double[:, :, ::1] rand, double[:, ::1] out):
    cdef Py_ssize_t n = pos.shape[0]
    cdef Py_ssize_t d = pos.shape[1]
    cdef Py_ssize_t k = members.shape[0]
    cdef Py_ssize_t i, slot, a, j
    cdef double s, diff, dist, coef
    for i in range(n):
        for slot in range(k):
            j = <Py_ssize_t> members[slot]
            if j == i:
                continue
            s = 0.0
            for a in range(d):
                diff = pos[j, a] - pos[i, a]
                s += diff * diff
            dist = sqrt(s)
            coef = g * masses[i] * masses[j] / (dist + tau)
            for a in range(d):
                out[i, a] += rand[i, slot, a] * coef * (pos[j, a] - pos[i, a])


def apply_kinematics(double[:, ::1] pos, double[:, ::1] vel,
                     double[:, ::1] forces, double[::1] masses, double tau,
                     double[:, ::1] rand, double[::1] lower,
                     double[::1] upper):
    cdef Py_ssize_t n = pos.shape[0]
    cdef Py_ssize_t d = pos.shape[1]
    cdef Py_ssize_t i, a
    cdef double denom, acc, u, x
    for i in range(n):
        if masses[i] == 0.0:
            denom = masses[i] + tau
        else:
            denom = masses[i]
        for a in range(d):
            acc = forces[i, a] / denom
            u = rand[i, a] * vel[i, a] + acc
            x = pos[i, a] + u
            if x < lower[a]:
                x = lower[a]
            elif x > upper[a]:
                x = upper[a]
            vel[i, a] = u
            pos[i, a] = x
