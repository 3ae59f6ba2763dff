"""Pure-numpy transient integration loop (fallback backend).

Mirrors the compiled kernel in ``_speedups.pyx`` argument-for-argument;
``backend.py`` picks whichever is importable.  The loop advances a
modified-nodal-analysis system with companion models: resistors and
capacitor equivalent conductances are pre-stamped into A0, memristors are
re-stamped every step at their current state, and driven pins enter as
Dirichlet nodes eliminated into the right-hand side.
"""
from __future__ import annotations

import numpy as np

from ..errors import InstabilityError, SolverError

BACKEND_NAME = "pure-python"


def run_transient(
    A0m, B0m, A0s, B0s,
    cap_a, cap_b, cap_ra, cap_rb, geqm, geqs,
    mem_a, mem_b, mem_ra, mem_rb, mem_da, mem_db,
    mem_ron, mem_roff, mem_rate,
    free, driven, dvals,
    v0, w0, ic0,
    dt, record_stride, record_nodes,
    trap, startup,
):
    n_steps, nd = dvals.shape
    nf = A0m.shape[0]
    nc = len(cap_a)
    nm = len(mem_a)
    n_rec = n_steps // record_stride

    v = np.array(v0, dtype=float)
    w = np.array(w0, dtype=float)
    ic = np.array(ic0, dtype=float)

    rec_v = np.empty((n_rec, len(record_nodes)))
    rec_w = np.empty((n_rec, nm))

    for k in range(n_steps):
        use_be = bool(startup) and k == 0
        A = np.array(A0s if use_be else A0m)
        geq = geqs if use_be else geqm
        vd = dvals[k]
        rhs = -(B0s if use_be else B0m) @ vd if nd else np.zeros(nf)

        # capacitor companion current sources
        use_iold = bool(trap) and not use_be
        for j in range(nc):
            vdiff = v[cap_a[j]] - v[cap_b[j]]
            ieq = geq[j] * vdiff + (ic[j] if use_iold else 0.0)
            if cap_ra[j] >= 0:
                rhs[cap_ra[j]] += ieq
            if cap_rb[j] >= 0:
                rhs[cap_rb[j]] -= ieq

        # memristors: linearize at current state
        g_mem = np.empty(nm)
        for j in range(nm):
            g = 1.0 / (mem_ron[j] * w[j] + mem_roff[j] * (1.0 - w[j]))
            g_mem[j] = g
            ra, rb = mem_ra[j], mem_rb[j]
            if ra >= 0:
                A[ra, ra] += g
                if rb >= 0:
                    A[ra, rb] -= g
                elif mem_db[j] >= 0:
                    rhs[ra] += g * vd[mem_db[j]]
            if rb >= 0:
                A[rb, rb] += g
                if ra >= 0:
                    A[rb, ra] -= g
                elif mem_da[j] >= 0:
                    rhs[rb] += g * vd[mem_da[j]]

        if nf:
            try:
                x = np.linalg.solve(A, rhs)
            except np.linalg.LinAlgError as exc:
                raise SolverError(
                    f"singular conductance matrix at t={(k + 1) * dt:g} s "
                    "(disconnected subgraph?)") from exc
        else:
            x = np.empty(0)

        v_new = np.zeros_like(v)
        v_new[free] = x
        v_new[driven] = vd
        if not np.all(np.isfinite(v_new)):
            raise InstabilityError(
                f"non-finite node voltage at t={(k + 1) * dt:g} s; reduce dt")

        for j in range(nc):
            dvj = (v_new[cap_a[j]] - v_new[cap_b[j]]) - (v[cap_a[j]] - v[cap_b[j]])
            ic[j] = geq[j] * dvj - (ic[j] if use_iold else 0.0)
        for j in range(nm):
            i = g_mem[j] * (v_new[mem_a[j]] - v_new[mem_b[j]])
            wj = w[j] + dt * mem_rate[j] * i * w[j] * (1.0 - w[j])
            w[j] = min(1.0, max(0.0, wj))

        v = v_new
        if (k + 1) % record_stride == 0:
            r = (k + 1) // record_stride - 1
            rec_v[r] = v[record_nodes]
            rec_w[r] = w

    return rec_v, rec_w, v, w, ic
