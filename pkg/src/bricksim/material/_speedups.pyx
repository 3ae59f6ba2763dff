# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled transient integration loop (hot kernel).

Argument-for-argument twin of ``_transient_py.run_transient``; selected
at import by ``backend.py`` when the extension built successfully.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, isfinite

from ..errors import InstabilityError, SolverError

cnp.import_array()

BACKEND_NAME = "compiled"


cdef int _lu_solve(double[:, ::1] A, double[::1] b, Py_ssize_t n,
                   Py_ssize_t[::1] piv) nogil:
    """In-place LU with partial pivoting; solution left in b.

    Returns nonzero when a pivot is numerically zero.
    """
    cdef Py_ssize_t i, j, k, p
    cdef double amax, tmp, factor
    for k in range(n):
        p = k
        amax = fabs(A[k, k])
        for i in range(k + 1, n):
            if fabs(A[i, k]) > amax:
                amax = fabs(A[i, k])
                p = i
        if amax < 1e-300:
            return 1
        if p != k:
            for j in range(n):
                tmp = A[k, j]
                A[k, j] = A[p, j]
                A[p, j] = tmp
            tmp = b[k]
            b[k] = b[p]
            b[p] = tmp
        for i in range(k + 1, n):
            factor = A[i, k] / A[k, k]
            A[i, k] = factor
            for j in range(k + 1, n):
                A[i, j] -= factor * A[k, j]
            b[i] -= factor * b[k]
    for i in range(n - 1, -1, -1):
        tmp = b[i]
        for j in range(i + 1, n):
            tmp -= A[i, j] * b[j]
        b[i] = tmp / A[i, i]
    return 0


def run_transient(
    cnp.ndarray A0m_in, cnp.ndarray B0m_in, cnp.ndarray A0s_in, cnp.ndarray B0s_in,
    cnp.ndarray cap_a_in, cnp.ndarray cap_b_in, cnp.ndarray cap_ra_in,
    cnp.ndarray cap_rb_in, cnp.ndarray geqm_in, cnp.ndarray geqs_in,
    cnp.ndarray mem_a_in, cnp.ndarray mem_b_in, cnp.ndarray mem_ra_in,
    cnp.ndarray mem_rb_in, cnp.ndarray mem_da_in, cnp.ndarray mem_db_in,
    cnp.ndarray mem_ron_in, cnp.ndarray mem_roff_in, cnp.ndarray mem_rate_in,
    cnp.ndarray free_in, cnp.ndarray driven_in, cnp.ndarray dvals_in,
    cnp.ndarray v0, cnp.ndarray w0, cnp.ndarray ic0,
    double dt, Py_ssize_t record_stride, cnp.ndarray record_nodes_in,
    int trap, int startup,
):
    cdef double[:, ::1] A0m = np.ascontiguousarray(A0m_in, dtype=np.float64)
    cdef double[:, ::1] B0m = np.ascontiguousarray(B0m_in, dtype=np.float64)
    cdef double[:, ::1] A0s = np.ascontiguousarray(A0s_in, dtype=np.float64)
    cdef double[:, ::1] B0s = np.ascontiguousarray(B0s_in, dtype=np.float64)
    cdef Py_ssize_t[::1] cap_a = np.ascontiguousarray(cap_a_in, dtype=np.intp)
    cdef Py_ssize_t[::1] cap_b = np.ascontiguousarray(cap_b_in, dtype=np.intp)
    cdef Py_ssize_t[::1] cap_ra = np.ascontiguousarray(cap_ra_in, dtype=np.intp)
    cdef Py_ssize_t[::1] cap_rb = np.ascontiguousarray(cap_rb_in, dtype=np.intp)
    cdef double[::1] geqm = np.ascontiguousarray(geqm_in, dtype=np.float64)
    cdef double[::1] geqs = np.ascontiguousarray(geqs_in, dtype=np.float64)
    cdef Py_ssize_t[::1] mem_a = np.ascontiguousarray(mem_a_in, dtype=np.intp)
    cdef Py_ssize_t[::1] mem_b = np.ascontiguousarray(mem_b_in, dtype=np.intp)
    cdef Py_ssize_t[::1] mem_ra = np.ascontiguousarray(mem_ra_in, dtype=np.intp)
    cdef Py_ssize_t[::1] mem_rb = np.ascontiguousarray(mem_rb_in, dtype=np.intp)
    cdef Py_ssize_t[::1] mem_da = np.ascontiguousarray(mem_da_in, dtype=np.intp)
    cdef Py_ssize_t[::1] mem_db = np.ascontiguousarray(mem_db_in, dtype=np.intp)
    cdef double[::1] mem_ron = np.ascontiguousarray(mem_ron_in, dtype=np.float64)
    cdef double[::1] mem_roff = np.ascontiguousarray(mem_roff_in, dtype=np.float64)
    cdef double[::1] mem_rate = np.ascontiguousarray(mem_rate_in, dtype=np.float64)
    cdef Py_ssize_t[::1] free = np.ascontiguousarray(free_in, dtype=np.intp)
    cdef Py_ssize_t[::1] driven = np.ascontiguousarray(driven_in, dtype=np.intp)
    cdef double[:, ::1] dvals = np.ascontiguousarray(dvals_in, dtype=np.float64)
    cdef Py_ssize_t[::1] record_nodes = np.ascontiguousarray(record_nodes_in, dtype=np.intp)

    cdef Py_ssize_t n_steps = dvals.shape[0]
    cdef Py_ssize_t nd = dvals.shape[1]
    cdef Py_ssize_t nf = A0m.shape[0]
    cdef Py_ssize_t nc = cap_a.shape[0]
    cdef Py_ssize_t nm = mem_a.shape[0]
    cdef Py_ssize_t nn = v0.shape[0]
    cdef Py_ssize_t nr_nodes = record_nodes.shape[0]
    cdef Py_ssize_t n_rec = n_steps // record_stride

    v_arr = np.array(v0, dtype=np.float64)
    w_arr = np.array(w0, dtype=np.float64)
    ic_arr = np.array(ic0, dtype=np.float64)
    rec_v_arr = np.empty((n_rec, nr_nodes), dtype=np.float64)
    rec_w_arr = np.empty((n_rec, nm), dtype=np.float64)
    cdef double[::1] v = v_arr
    cdef double[::1] w = w_arr
    cdef double[::1] ic = ic_arr
    cdef double[:, ::1] rec_v = rec_v_arr
    cdef double[:, ::1] rec_w = rec_w_arr

    cdef double[:, ::1] A = np.empty((nf, nf), dtype=np.float64)
    cdef double[::1] rhs = np.empty(nf, dtype=np.float64)
    cdef double[::1] v_new = np.empty(nn, dtype=np.float64)
    cdef double[::1] g_mem = np.empty(nm, dtype=np.float64)
    cdef Py_ssize_t[::1] piv = np.empty(nf, dtype=np.intp)

    cdef Py_ssize_t k, i, j, ra, rb, r
    cdef int use_be, use_iold, bad, info
    cdef double g, ieq, vdiff, dvj, cur, wj, geq_j

    bad = 0
    info = 0
    for k in range(n_steps):
        use_be = 1 if (startup and k == 0) else 0
        use_iold = 1 if (trap and not use_be) else 0
        # A = base copy; rhs = -B0 @ vd
        for i in range(nf):
            rhs[i] = 0.0
            for j in range(nf):
                A[i, j] = A0s[i, j] if use_be else A0m[i, j]
            for j in range(nd):
                if use_be:
                    rhs[i] -= B0s[i, j] * dvals[k, j]
                else:
                    rhs[i] -= B0m[i, j] * dvals[k, j]

        for j in range(nc):
            geq_j = geqs[j] if use_be else geqm[j]
            vdiff = v[cap_a[j]] - v[cap_b[j]]
            ieq = geq_j * vdiff
            if use_iold:
                ieq += ic[j]
            if cap_ra[j] >= 0:
                rhs[cap_ra[j]] += ieq
            if cap_rb[j] >= 0:
                rhs[cap_rb[j]] -= ieq

        for j in range(nm):
            g = 1.0 / (mem_ron[j] * w[j] + mem_roff[j] * (1.0 - w[j]))
            g_mem[j] = g
            ra = mem_ra[j]
            rb = mem_rb[j]
            if ra >= 0:
                A[ra, ra] += g
                if rb >= 0:
                    A[ra, rb] -= g
                elif mem_db[j] >= 0:
                    rhs[ra] += g * dvals[k, mem_db[j]]
            if rb >= 0:
                A[rb, rb] += g
                if ra >= 0:
                    A[rb, ra] -= g
                elif mem_da[j] >= 0:
                    rhs[rb] += g * dvals[k, mem_da[j]]

        if nf > 0:
            info = _lu_solve(A, rhs, nf, piv)
            if info != 0:
                raise SolverError(
                    "singular conductance matrix at t=%g s "
                    "(disconnected subgraph?)" % ((k + 1) * dt))

        for i in range(nn):
            v_new[i] = 0.0
        for i in range(nf):
            v_new[free[i]] = rhs[i]
        for i in range(nd):
            v_new[driven[i]] = dvals[k, i]
        bad = 0
        for i in range(nn):
            if not isfinite(v_new[i]):
                bad = 1
        if bad:
            raise InstabilityError(
                "non-finite node voltage at t=%g s; reduce dt" % ((k + 1) * dt))

        for j in range(nc):
            geq_j = geqs[j] if use_be else geqm[j]
            dvj = (v_new[cap_a[j]] - v_new[cap_b[j]]) - (v[cap_a[j]] - v[cap_b[j]])
            if use_iold:
                ic[j] = geq_j * dvj - ic[j]
            else:
                ic[j] = geq_j * dvj
        for j in range(nm):
            cur = g_mem[j] * (v_new[mem_a[j]] - v_new[mem_b[j]])
            wj = w[j] + dt * mem_rate[j] * cur * w[j] * (1.0 - w[j])
            if wj < 0.0:
                wj = 0.0
            elif wj > 1.0:
                wj = 1.0
            w[j] = wj

        for i in range(nn):
            v[i] = v_new[i]
        if (k + 1) % record_stride == 0:
            r = (k + 1) // record_stride - 1
            for i in range(nr_nodes):
                rec_v[r, i] = v[record_nodes[i]]
            for j in range(nm):
                rec_w[r, j] = w[j]

    return rec_v_arr, rec_w_arr, v_arr, w_arr, ic_arr
