# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; behaviour must match ``_kernels_py`` exactly."""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp

ctypedef long long i64

cnp.import_array()

# mode 0: single cyclic factor, 1: elementary abelian 2-group, 2: mixed radix
cdef inline i64 _add(i64 a, i64 b, int mode, const i64[::1] mods) noexcept nogil:
    cdef i64 out = 0, stride = 1, m, da, db
    cdef Py_ssize_t i
    if mode == 0:
        return (a + b) % mods[0]
    if mode == 1:
        return a ^ b
    for i in range(mods.shape[0]):
        m = mods[i]
        da = (a // stride) % m
        db = (b // stride) % m
        out += ((da + db) % m) * stride
        stride *= m
    return out


cdef int _mode(const i64[::1] mods):
    cdef Py_ssize_t i
    if mods.shape[0] == 1:
        return 0
    for i in range(mods.shape[0]):
        if mods[i] != 2:
            return 2
    return 1


def count_sums(eu, ev, labels, moduli):
    cdef const i64[::1] mods = np.ascontiguousarray(moduli, dtype=np.int64)
    cdef const i64[::1] a = np.ascontiguousarray(eu, dtype=np.int64)
    cdef const i64[::1] b = np.ascontiguousarray(ev, dtype=np.int64)
    cdef const i64[::1] lab = np.ascontiguousarray(labels, dtype=np.int64)
    cdef int mode = _mode(mods)
    cdef i64 order = 1
    cdef Py_ssize_t i
    for i in range(mods.shape[0]):
        order *= mods[i]
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] seen = np.zeros(order, dtype=np.uint8)
    cdef int distinct = 0
    cdef i64 s
    for i in range(a.shape[0]):
        s = _add(lab[a[i]], lab[b[i]], mode, mods)
        if not seen[s]:
            seen[s] = 1
            distinct += 1
    return distinct


def greedy_labeling(indptr, nbr, order, i64 n_cand, moduli, i64 order_size):
    cdef const i64[::1] mods = np.ascontiguousarray(moduli, dtype=np.int64)
    cdef const i64[::1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const i64[::1] nb = np.ascontiguousarray(nbr, dtype=np.int64)
    cdef const i64[::1] od = np.ascontiguousarray(order, dtype=np.int64)
    cdef int mode = _mode(mods)
    cdef Py_ssize_t n = ip.shape[0] - 1
    out = np.full(n, -1, dtype=np.int64)
    cdef i64[::1] lab = out
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] used = np.zeros(n_cand, dtype=np.uint8)
    cdef i64[::1] cnt = np.zeros(order_size, dtype=np.int64)
    cdef i64[::1] nbl = np.zeros(max(n, 1), dtype=np.int64)
    cdef Py_ssize_t t, j, k, nn
    cdef i64 v, x, best_x, best_new, new
    for t in range(od.shape[0]):
        v = od[t]
        nn = 0
        for j in range(ip[v], ip[v + 1]):
            if lab[nb[j]] >= 0:
                nbl[nn] = lab[nb[j]]
                nn += 1
        best_x = -1
        best_new = -1
        for x in range(n_cand):
            if used[x]:
                continue
            new = 0
            for k in range(nn):
                if cnt[_add(x, nbl[k], mode, mods)] == 0:
                    new += 1
            if best_new < 0 or new < best_new:
                best_x = x
                best_new = new
                if new == 0:
                    break
        lab[v] = best_x
        used[best_x] = 1
        for k in range(nn):
            cnt[_add(best_x, nbl[k], mode, mods)] += 1
    return out


cdef i64 _rebuild(const i64[::1] ip, const i64[::1] nb, i64[::1] lab, i64[::1] cnt,
                  int mode, const i64[::1] mods) noexcept nogil:
    cdef Py_ssize_t u, j
    cdef i64 s, distinct = 0
    cnt[:] = 0
    for u in range(ip.shape[0] - 1):
        for j in range(ip[u], ip[u + 1]):
            if u < nb[j]:
                s = _add(lab[u], lab[nb[j]], mode, mods)
                if cnt[s] == 0:
                    distinct += 1
                cnt[s] += 1
    return distinct


cdef i64 _touch(i64 a, i64 b, int sign, const i64[::1] ip, const i64[::1] nb,
                i64[::1] lab, i64[::1] cnt, int mode, const i64[::1] mods) noexcept nogil:
    cdef i64 delta = 0, s, w
    cdef Py_ssize_t j
    for j in range(ip[a], ip[a + 1]):
        s = _add(lab[a], lab[nb[j]], mode, mods)
        if sign < 0:
            cnt[s] -= 1
            if cnt[s] == 0:
                delta -= 1
        else:
            if cnt[s] == 0:
                delta += 1
            cnt[s] += 1
    if b >= 0:
        for j in range(ip[b], ip[b + 1]):
            w = nb[j]
            if w == a:
                continue
            s = _add(lab[b], lab[w], mode, mods)
            if sign < 0:
                cnt[s] -= 1
                if cnt[s] == 0:
                    delta -= 1
            else:
                if cnt[s] == 0:
                    delta += 1
                cnt[s] += 1
    return delta


def anneal(indptr, nbr, labels, i64 n_cand, moduli, i64 order_size,
           kinds, va, vb, xs, us, double t0, double alpha, double t_min, i64 stagnation):
    cdef const i64[::1] mods = np.ascontiguousarray(moduli, dtype=np.int64)
    cdef const i64[::1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const i64[::1] nb = np.ascontiguousarray(nbr, dtype=np.int64)
    cdef const i64[::1] kd = np.ascontiguousarray(kinds, dtype=np.int64)
    cdef const i64[::1] A = np.ascontiguousarray(va, dtype=np.int64)
    cdef const i64[::1] Bv = np.ascontiguousarray(vb, dtype=np.int64)
    cdef const i64[::1] X = np.ascontiguousarray(xs, dtype=np.int64)
    cdef const double[::1] Us = np.ascontiguousarray(us, dtype=np.float64)
    cdef int mode = _mode(mods)
    cdef Py_ssize_t n = ip.shape[0] - 1
    lab_arr = np.array(labels, dtype=np.int64)
    best_arr = lab_arr.copy()
    cdef i64[::1] lab = lab_arr
    cdef i64[::1] best_lab = best_arr
    cdef i64[::1] owner = np.full(n_cand, -1, dtype=np.int64)
    cdef i64[::1] cnt = np.zeros(order_size, dtype=np.int64)
    cdef Py_ssize_t v, step, nsteps = kd.shape[0]
    cdef i64 a, b, x = 0, o, old_a, old_b, cur, best, new, d
    cdef i64 since = 0, accepted = 0, restarts = 0
    cdef double T = t0
    with nogil:
        for v in range(n):
            owner[lab[v]] = v
        cur = _rebuild(ip, nb, lab, cnt, mode, mods)
        best = cur
        for step in range(nsteps):
            a = A[step]
            if kd[step] == 0:
                b = Bv[step]
                if b == a:
                    b = -2
            else:
                x = X[step]
                o = owner[x]
                if o == a:
                    b = -2
                else:
                    b = o
            if b != -2:
                old_a = lab[a]
                old_b = lab[b] if b >= 0 else -1
                new = cur + _touch(a, b, -1, ip, nb, lab, cnt, mode, mods)
                if b >= 0:
                    lab[a] = old_b
                    lab[b] = old_a
                else:
                    lab[a] = x
                new += _touch(a, b, 1, ip, nb, lab, cnt, mode, mods)
                d = new - cur
                if d <= 0 or Us[step] < exp(-(<double>d) / T):
                    cur = new
                    accepted += 1
                    if b >= 0:
                        owner[lab[a]] = a
                        owner[lab[b]] = b
                    else:
                        owner[old_a] = -1
                        owner[x] = a
                else:
                    _touch(a, b, -1, ip, nb, lab, cnt, mode, mods)
                    lab[a] = old_a
                    if b >= 0:
                        lab[b] = old_b
                    _touch(a, b, 1, ip, nb, lab, cnt, mode, mods)
            if cur < best:
                best = cur
                best_lab[:] = lab
                since = 0
            else:
                since += 1
            T *= alpha
            if T < t_min:
                T = t_min
            if since >= stagnation:
                owner[:] = -1
                lab[:] = best_lab
                for v in range(n):
                    owner[lab[v]] = v
                cur = _rebuild(ip, nb, lab, cnt, mode, mods)
                T = t0
                since = 0
                restarts += 1
    return best, best_arr, accepted, restarts


def sum_graph_walks(start_v, start_u, sidx, uval, S, i64 q):
    cdef const i64[::1] sv = np.ascontiguousarray(start_v, dtype=np.int64)
    cdef const i64[::1] su = np.ascontiguousarray(start_u, dtype=np.int64)
    cdef const i64[:, ::1] si = np.ascontiguousarray(sidx, dtype=np.int64)
    cdef const i64[:, ::1] uv = np.ascontiguousarray(uval, dtype=np.int64)
    cdef const i64[::1] gens = np.ascontiguousarray(S, dtype=np.int64)
    cdef Py_ssize_t B = si.shape[0], L = si.shape[1], b, j
    Vout = np.zeros((B, L), dtype=np.int64)
    Uout = np.zeros((B, L), dtype=np.int64)
    cdef i64[:, ::1] V = Vout
    cdef i64[:, ::1] U = Uout
    cdef i64 v, u
    with nogil:
        for b in range(B):
            v = sv[b]
            u = su[b]
            V[b, 0] = v
            U[b, 0] = u
            for j in range(1, L):
                v = gens[si[b, j]] ^ v
                u = ((uv[b, j] - u) % q + q) % q
                V[b, j] = v
                U[b, j] = u
    return Vout, Uout
