"""Pure-Python kernels. Reference behaviour for ``_kernels.pyx``.

Group elements are integer codes in mixed radix over ``moduli`` (first
modulus varies fastest). Random numbers are always drawn by the caller so
both backends consume identical streams.
"""

import math

import numpy as np


def _adder(moduli):
    moduli = [int(m) for m in moduli]
    if len(moduli) == 1:
        m0 = moduli[0]
        return lambda a, b: (a + b) % m0
    if all(m == 2 for m in moduli):
        return lambda a, b: a ^ b

    def add(a, b):
        out, stride = 0, 1
        for m in moduli:
            da = (a // stride) % m
            db = (b // stride) % m
            out += ((da + db) % m) * stride
            stride *= m
        return out

    return add


def count_sums(eu, ev, labels, moduli):
    add = _adder(moduli)
    return len({add(int(labels[u]), int(labels[v])) for u, v in zip(eu, ev)})


def greedy_labeling(indptr, nbr, order, n_cand, moduli, order_size):
    add = _adder(moduli)
    n = len(indptr) - 1
    labels = [-1] * n
    used = [False] * n_cand
    cnt = [0] * order_size
    for v in order:
        v = int(v)
        lab_nb = [labels[w] for w in nbr[indptr[v] : indptr[v + 1]] if labels[w] >= 0]
        best_x, best_new = -1, None
        for x in range(n_cand):
            if used[x]:
                continue
            new = 0
            for lw in lab_nb:
                if cnt[add(x, lw)] == 0:
                    new += 1
            if best_new is None or new < best_new:
                best_x, best_new = x, new
                if new == 0:
                    break
        labels[v] = best_x
        used[best_x] = True
        for lw in lab_nb:
            cnt[add(best_x, lw)] += 1
    return np.asarray(labels, dtype=np.int64)


def anneal(indptr, nbr, labels, n_cand, moduli, order_size,
           kinds, va, vb, xs, us, t0, alpha, t_min, stagnation):
    """Simulated annealing on the number of distinct edge sums.

    Returns ``(best_size, best_labels, accepted, restarts)``.
    """
    add = _adder(moduli)
    indptr = [int(x) for x in indptr]
    nbr = [int(x) for x in nbr]
    n = len(indptr) - 1
    lab = [int(x) for x in labels]
    owner = [-1] * n_cand
    for v, x in enumerate(lab):
        owner[x] = v
    cnt = [0] * order_size

    def rebuild():
        for i in range(order_size):
            cnt[i] = 0
        distinct = 0
        for u in range(n):
            for j in range(indptr[u], indptr[u + 1]):
                w = nbr[j]
                if u < w:
                    s = add(lab[u], lab[w])
                    if cnt[s] == 0:
                        distinct += 1
                    cnt[s] += 1
        return distinct

    def touch(a, b, sign):
        # add (sign=+1) or remove (sign=-1) the sums of edges at a and b
        delta = 0
        for j in range(indptr[a], indptr[a + 1]):
            s = add(lab[a], lab[nbr[j]])
            if sign < 0:
                cnt[s] -= 1
                if cnt[s] == 0:
                    delta -= 1
            else:
                if cnt[s] == 0:
                    delta += 1
                cnt[s] += 1
        if b >= 0:
            for j in range(indptr[b], indptr[b + 1]):
                w = nbr[j]
                if w == a:
                    continue
                s = add(lab[b], lab[w])
                if sign < 0:
                    cnt[s] -= 1
                    if cnt[s] == 0:
                        delta -= 1
                else:
                    if cnt[s] == 0:
                        delta += 1
                    cnt[s] += 1
        return delta

    cur = rebuild()
    best = cur
    best_lab = list(lab)
    T = float(t0)
    since = 0
    accepted = 0
    restarts = 0
    for step in range(len(kinds)):
        a = int(va[step])
        if kinds[step] == 0:
            b = int(vb[step])
            if b == a:
                b = -2
        else:
            x = int(xs[step])
            o = owner[x]
            if o == a:
                b = -2
            else:
                b = o  # -1 means relabel to the free element x
        if b != -2:
            old_a = lab[a]
            old_b = lab[b] if b >= 0 else -1
            new = cur + touch(a, b, -1)
            if b >= 0:
                lab[a], lab[b] = old_b, old_a
            else:
                lab[a] = x
            new += touch(a, b, 1)
            d = new - cur
            if d <= 0 or us[step] < math.exp(-d / T):
                cur = new
                accepted += 1
                if b >= 0:
                    owner[lab[a]] = a
                    owner[lab[b]] = b
                else:
                    owner[old_a] = -1
                    owner[x] = a
            else:
                touch(a, b, -1)
                lab[a] = old_a
                if b >= 0:
                    lab[b] = old_b
                touch(a, b, 1)
        if cur < best:
            best = cur
            best_lab = list(lab)
            since = 0
        else:
            since += 1
        T *= alpha
        if T < t_min:
            T = t_min
        if since >= stagnation:
            for x in range(n_cand):
                owner[x] = -1
            lab = list(best_lab)
            for v, x in enumerate(lab):
                owner[x] = v
            cur = rebuild()
            T = float(t0)
            since = 0
            restarts += 1
    return best, np.asarray(best_lab, dtype=np.int64), accepted, restarts


def sum_graph_walks(start_v, start_u, sidx, uval, S, q):
    """Random walks on the Cayley sum-graph of ``Z_2^p x Z_q`` with connection
    set ``S x Z_q``: each step maps ``(v, u)`` to ``(s ^ v, t - u)``.

    ``sidx``/``uval`` have shape ``(blocks, length)``; column 0 is unused.
    Returns arrays ``(V, U)`` of the same shape.
    """
    B, L = sidx.shape
    V = np.zeros((B, L), dtype=np.int64)
    U = np.zeros((B, L), dtype=np.int64)
    for b in range(B):
        v, u = int(start_v[b]), int(start_u[b])
        V[b, 0], U[b, 0] = v, u
        for j in range(1, L):
            v = int(S[sidx[b, j]]) ^ v
            u = (int(uval[b, j]) - u) % q
            V[b, j], U[b, j] = v, u
    return V, U
