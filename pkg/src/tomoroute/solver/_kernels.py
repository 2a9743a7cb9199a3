"""Compiled inner loops for the tour solvers.

Tours are int64 arrays ``tour`` with the inverse permutation ``pos``.
All moves keep the orientation of untouched parts of the tour unless the
matrix is symmetric, so the same code serves directed instances.
"""

import numpy as np
from numba import njit

EPS = 1e-9


@njit(cache=True, nogil=True)
def tour_cost(d, tour):
    n = tour.shape[0]
    total = 0.0
    for i in range(n - 1):
        total += d[tour[i], tour[i + 1]]
    total += d[tour[n - 1], tour[0]]
    return total


@njit(cache=True, nogil=True)
def neighbor_lists(d, k, incoming):
    """``k`` cheapest partners per node; ties go to the lower index."""
    n = d.shape[0]
    out = np.empty((n, k), dtype=np.int64)
    vals = np.empty(k)
    for i in range(n):
        cnt = 0
        for j in range(n):
            if j == i:
                continue
            w = d[j, i] if incoming else d[i, j]
            if cnt == k and w >= vals[k - 1]:
                continue
            p = cnt if cnt < k else k - 1
            while p > 0 and vals[p - 1] > w:
                if p < k:
                    vals[p] = vals[p - 1]
                    out[i, p] = out[i, p - 1]
                p -= 1
            vals[p] = w
            out[i, p] = j
            if cnt < k:
                cnt += 1
    return out


@njit(cache=True, nogil=True)
def nearest_neighbor(d, start):
    n = d.shape[0]
    tour = np.empty(n, dtype=np.int64)
    used = np.zeros(n, dtype=np.bool_)
    cur = start
    tour[0] = cur
    used[cur] = True
    for step in range(1, n):
        best = -1
        bw = np.inf
        for j in range(n):
            if not used[j] and d[cur, j] < bw:
                bw = d[cur, j]
                best = j
        tour[step] = best
        used[best] = True
        cur = best
    return tour


@njit(cache=True, nogil=True)
def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


@njit(cache=True, nogil=True)
def greedy_edge(d, cand, symmetric):
    """Greedy matching over candidate edges, fragments joined by nearest endpoint.

    For directed instances an edge i->j needs a free exit at i and a free
    entry at j; for symmetric ones either end of a fragment may be used.
    """
    n = d.shape[0]
    k = cand.shape[1]
    m = n * k
    eu = np.empty(m, dtype=np.int64)
    ev = np.empty(m, dtype=np.int64)
    ew = np.empty(m)
    for i in range(n):
        for t in range(k):
            eu[i * k + t] = i
            ev[i * k + t] = cand[i, t]
            ew[i * k + t] = d[i, cand[i, t]]
    order = np.argsort(ew, kind="mergesort")
    parent = np.arange(n)
    # symmetric: adjacency slots; directed: succ/pred
    a0 = -np.ones(n, dtype=np.int64)
    a1 = -np.ones(n, dtype=np.int64)
    added = 0
    for idx in order:
        if added == n - 1:
            break
        u = eu[idx]
        v = ev[idx]
        if symmetric:
            if a1[u] >= 0 or a1[v] >= 0:
                continue
        else:
            if a0[u] >= 0 or a1[v] >= 0:
                continue
        ru = _find(parent, u)
        rv = _find(parent, v)
        if ru == rv:
            continue
        parent[ru] = rv
        if symmetric:
            if a0[u] < 0:
                a0[u] = v
            else:
                a1[u] = v
            if a0[v] < 0:
                a0[v] = u
            else:
                a1[v] = u
        else:
            a0[u] = v  # succ
            a1[v] = u  # pred
        added += 1
    # walk fragments; join each tail to the nearest free head
    tour = np.empty(n, dtype=np.int64)
    used = np.zeros(n, dtype=np.bool_)
    # fragment ends: degree < 2 (symmetric) or no predecessor (directed)
    cur = 0
    for i in range(n):
        if a1[i] < 0:
            cur = i
            break
    pos = 0
    while pos < n:
        # traverse the fragment starting at cur
        prev = -1
        node = cur
        while True:
            tour[pos] = node
            used[node] = True
            pos += 1
            if symmetric:
                nxt = a0[node] if a0[node] != prev and a0[node] >= 0 and not used[a0[node]] else -1
                if nxt < 0 and a1[node] >= 0 and a1[node] != prev and not used[a1[node]]:
                    nxt = a1[node]
            else:
                nxt = a0[node]
                if nxt >= 0 and used[nxt]:
                    nxt = -1
            if nxt < 0:
                break
            prev = node
            node = nxt
        if pos >= n:
            break
        tail = node
        best = -1
        bw = np.inf
        for j in range(n):
            if used[j]:
                continue
            if symmetric:
                ok = a1[j] < 0
            else:
                ok = a1[j] < 0 or used[a1[j]]
            if ok and d[tail, j] < bw:
                bw = d[tail, j]
                best = j
        if best < 0:
            for j in range(n):
                if not used[j] and d[tail, j] < bw:
                    bw = d[tail, j]
                    best = j
        cur = best
    return tour


@njit(cache=True, nogil=True)
def reverse_range(tour, pos, i, j):
    """Reverse the cyclic position range i..j (forward, inclusive)."""
    n = tour.shape[0]
    length = (j - i) % n + 1
    for s in range(length // 2):
        a = (i + s) % n
        b = (j - s) % n
        ta = tour[a]
        tb = tour[b]
        tour[a] = tb
        tour[b] = ta
        pos[tb] = a
        pos[ta] = b


@njit(cache=True, nogil=True)
def reverse_path_sym(tour, pos, i, j):
    # equivalent reversal of the complement when it is shorter
    n = tour.shape[0]
    length = (j - i) % n + 1
    if 2 * length > n and length < n:
        reverse_range(tour, pos, (j + 1) % n, (i - 1) % n)
    else:
        reverse_range(tour, pos, i, j)


@njit(cache=True, nogil=True)
def move_segment(tour, pos, i, seg_len, k, reverse):
    """Move the segment at positions i..i+seg_len-1 to just after position k."""
    n = tour.shape[0]
    L = seg_len
    len_y = (k - (i + L)) % n + 1
    len_z = n - L - len_y
    if len_y <= len_z:
        last = (i + L - 1 + len_y) % n
        reverse_range(tour, pos, i, last)
        reverse_range(tour, pos, i, (i + len_y - 1) % n)
        s0 = (i + len_y) % n
        if not reverse:
            reverse_range(tour, pos, s0, last)
    else:
        first = (k + 1) % n
        last = (i + L - 1) % n
        reverse_range(tour, pos, first, last)
        if not reverse:
            reverse_range(tour, pos, first, (first + L - 1) % n)
        reverse_range(tour, pos, (first + L) % n, last)


@njit(cache=True, nogil=True)
def _push(queue, inq, head_tail, node):
    if not inq[node]:
        n = queue.shape[0]
        queue[head_tail[1] % n] = node
        head_tail[1] += 1
        inq[node] = True


@njit(cache=True, nogil=True)
def _try_two_opt(d, tour, pos, nb, a, queue, inq, ht):
    n = tour.shape[0]
    k = nb.shape[1]
    pa = pos[a]
    for direction in range(2):
        if direction == 0:
            b = tour[(pa + 1) % n]
        else:
            b = tour[(pa - 1) % n]
        dab = d[a, b]
        for t in range(k):
            c = nb[a, t]
            g1 = dab - d[a, c]
            if g1 <= EPS:
                break
            pc = pos[c]
            if direction == 0:
                dd = tour[(pc + 1) % n]
            else:
                dd = tour[(pc - 1) % n]
            if c == b or dd == a:
                continue
            delta = d[a, c] + d[b, dd] - dab - d[c, dd]
            if delta < -EPS:
                if direction == 0:
                    reverse_path_sym(tour, pos, (pa + 1) % n, pc)
                else:
                    reverse_path_sym(tour, pos, pa, (pc - 1) % n)
                _push(queue, inq, ht, a)
                _push(queue, inq, ht, b)
                _push(queue, inq, ht, c)
                _push(queue, inq, ht, dd)
                return delta
    return 0.0


@njit(cache=True, nogil=True)
def _or_gain(d, tour, pos, i, L, k, symmetric):
    """Best delta of inserting the segment (positions i..) after position k."""
    n = tour.shape[0]
    s = tour[i]
    e = tour[(i + L - 1) % n]
    p = tour[(i - 1) % n]
    nx = tour[(i + L) % n]
    u = tour[k]
    v = tour[(k + 1) % n]
    base = d[p, nx] - d[p, s] - d[e, nx] - d[u, v]
    fwd = base + d[u, s] + d[e, v]
    if symmetric:
        rev = base + d[u, e] + d[s, v]
        if rev < fwd - EPS:
            return rev, True
    return fwd, False


@njit(cache=True, nogil=True)
def _in_segment(i, L, k, n):
    return (k - i) % n < L


@njit(cache=True, nogil=True)
def _apply_or(tour, pos, i, L, k, rev, queue, inq, ht):
    n = tour.shape[0]
    _push(queue, inq, ht, tour[(i - 1) % n])
    _push(queue, inq, ht, tour[i])
    _push(queue, inq, ht, tour[(i + L - 1) % n])
    _push(queue, inq, ht, tour[(i + L) % n])
    _push(queue, inq, ht, tour[k])
    _push(queue, inq, ht, tour[(k + 1) % n])
    move_segment(tour, pos, i, L, k, rev)


@njit(cache=True, nogil=True)
def _try_or_opt(d, tour, pos, nb_out, nb_in, a, symmetric, max_seg, queue, inq, ht):
    n = tour.shape[0]
    kk = nb_out.shape[1]
    for L in range(1, max_seg + 1):
        if n < L + 3:
            break
        i = pos[a]
        s = a
        e = tour[(i + L - 1) % n]
        p = tour[(i - 1) % n]
        nx = tour[(i + L) % n]
        removal = d[p, s] + d[e, nx] - d[p, nx]
        if removal <= EPS:
            continue
        # u -> s is a cheap entry edge: insert after u
        for t in range(kk):
            u = nb_in[s, t]
            if d[u, s] >= removal:
                break
            ku = pos[u]
            if u == p or _in_segment(i, L, ku, n):
                continue
            delta, rev = _or_gain(d, tour, pos, i, L, ku, symmetric)
            if delta < -EPS:
                _apply_or(tour, pos, i, L, ku, rev, queue, inq, ht)
                return delta
        # e -> v is a cheap exit edge: insert before v
        for t in range(kk):
            v = nb_out[e, t]
            if d[e, v] >= removal:
                break
            kv = pos[v]
            ku = (kv - 1) % n
            if _in_segment(i, L, kv, n) or tour[ku] == p or _in_segment(i, L, ku, n):
                continue
            delta, rev = _or_gain(d, tour, pos, i, L, ku, symmetric)
            if delta < -EPS:
                _apply_or(tour, pos, i, L, ku, rev, queue, inq, ht)
                return delta
        if symmetric:
            # reversed placements: s next to v, or e next to u
            for t in range(kk):
                v = nb_out[s, t]
                if d[s, v] >= removal:
                    break
                kv = pos[v]
                ku = (kv - 1) % n
                if _in_segment(i, L, kv, n) or tour[ku] == p or _in_segment(i, L, ku, n):
                    continue
                delta, rev = _or_gain(d, tour, pos, i, L, ku, symmetric)
                if delta < -EPS:
                    _apply_or(tour, pos, i, L, ku, rev, queue, inq, ht)
                    return delta
            for t in range(kk):
                u = nb_in[e, t]
                if d[u, e] >= removal:
                    break
                ku = pos[u]
                if u == p or _in_segment(i, L, ku, n):
                    continue
                delta, rev = _or_gain(d, tour, pos, i, L, ku, symmetric)
                if delta < -EPS:
                    _apply_or(tour, pos, i, L, ku, rev, queue, inq, ht)
                    return delta
    return 0.0


@njit(cache=True, nogil=True)
def queue_local_search(d, tour, pos, nb_out, nb_in, symmetric, max_seg, queue, inq, ht):
    """Drain the active-node queue; returns the accumulated cost change."""
    n = tour.shape[0]
    total = 0.0
    while ht[0] < ht[1]:
        a = queue[ht[0] % n]
        ht[0] += 1
        inq[a] = False
        delta = 0.0
        if symmetric:
            delta = _try_two_opt(d, tour, pos, nb_out, a, queue, inq, ht)
        if delta == 0.0:
            delta = _try_or_opt(d, tour, pos, nb_out, nb_in, a, symmetric, max_seg, queue, inq, ht)
        if delta != 0.0:
            total += delta
            _push(queue, inq, ht, a)
    return total


@njit(cache=True, nogil=True)
def full_two_opt_pass(d, tour, pos):
    """One exhaustive first-improvement 2-exchange sweep; returns #moves."""
    n = tour.shape[0]
    moves = 0
    for i in range(n - 2):
        a = tour[i]
        b = tour[i + 1]
        dab = d[a, b]
        jmax = n if i > 0 else n - 1
        j = i + 2
        while j < jmax:
            c = tour[j]
            dd = tour[(j + 1) % n]
            delta = d[a, c] + d[b, dd] - dab - d[c, dd]
            if delta < -EPS:
                reverse_range(tour, pos, i + 1, j)
                moves += 1
                b = tour[i + 1]
                dab = d[a, b]
            j += 1
    return moves


@njit(cache=True, nogil=True)
def _edge_weights(d, tour, w):
    n = tour.shape[0]
    for k in range(n):
        w[k] = d[tour[k], tour[(k + 1) % n]]


@njit(cache=True, nogil=True)
def full_or_opt_pass(d, dt, tour, pos, symmetric, max_seg):
    """One exhaustive segment-insertion sweep; returns #moves.

    ``dt`` is the transpose of ``d`` (``d`` itself when symmetric) so that
    costs into the segment are read along rows.
    """
    n = tour.shape[0]
    moves = 0
    w = np.empty(n)
    _edge_weights(d, tour, w)
    for L in range(1, max_seg + 1):
        if n < L + 3:
            break
        for node in range(n):
            i = pos[node]
            s = tour[i]
            e = tour[(i + L - 1) % n]
            p = tour[(i - 1) % n]
            nx = tour[(i + L) % n]
            removal = d[p, s] + d[e, nx] - d[p, nx] - EPS
            if removal <= 0.0:
                continue
            into_s = dt[s]
            out_e = d[e]
            into_e = dt[e]
            out_s = d[s]
            for off in range(L, n - 1):
                k = (i + off) % n
                u = tour[k]
                v = tour[(k + 1) % n]
                fwd = into_s[u] + out_e[v] - w[k]
                if fwd < removal:
                    move_segment(tour, pos, i, L, k, False)
                    moves += 1
                    _edge_weights(d, tour, w)
                    break
                if symmetric:
                    rev = into_e[u] + out_s[v] - w[k]
                    if rev < removal:
                        move_segment(tour, pos, i, L, k, True)
                        moves += 1
                        _edge_weights(d, tour, w)
                        break
    return moves


@njit(cache=True, nogil=True)
def local_optimum(d, dt, tour, nb_out, nb_in, symmetric, max_seg, exhaustive):
    """Neighbor-list descent, then exhaustive sweeps until none improves."""
    n = tour.shape[0]
    pos = np.empty(n, dtype=np.int64)
    for i in range(n):
        pos[tour[i]] = i
    queue = np.empty(n, dtype=np.int64)
    inq = np.zeros(n, dtype=np.bool_)
    ht = np.zeros(2, dtype=np.int64)
    for i in range(n):
        _push(queue, inq, ht, tour[i])
    queue_local_search(d, tour, pos, nb_out, nb_in, symmetric, max_seg, queue, inq, ht)
    if exhaustive:
        while True:
            moves = 0
            if symmetric:
                moves += full_two_opt_pass(d, tour, pos)
            moves += full_or_opt_pass(d, dt, tour, pos, symmetric, max_seg)
            if moves == 0:
                break
            for i in range(n):
                _push(queue, inq, ht, tour[i])
            queue_local_search(d, tour, pos, nb_out, nb_in, symmetric, max_seg, queue, inq, ht)
    return tour


@njit(cache=True, nogil=True)
def perturb_local_search(d, tour, nb_out, nb_in, symmetric, max_seg, iterations, seed, max_block):
    """Iterated local search with random adjacent-block swaps.

    Each kick exchanges two short neighboring blocks (a double bridge),
    the touched nodes are re-optimized, and the result is kept when it is
    no worse.  Returns the best tour seen.
    """
    np.random.seed(seed)
    n = tour.shape[0]
    pos = np.empty(n, dtype=np.int64)
    for i in range(n):
        pos[tour[i]] = i
    queue = np.empty(n, dtype=np.int64)
    inq = np.zeros(n, dtype=np.bool_)
    ht = np.zeros(2, dtype=np.int64)
    cur = tour_cost(d, tour)
    best = tour.copy()
    best_cost = cur
    saved = tour.copy()
    mb = min(max_block, (n - 1) // 2)
    if mb < 1 or n < 5:
        return best
    for it in range(iterations):
        saved[:] = tour
        q = np.random.randint(0, n)
        lb = np.random.randint(1, mb + 1)
        lc = np.random.randint(1, mb + 1)
        x = tour[(q - 1) % n]
        b0 = tour[q]
        b1 = tour[(q + lb - 1) % n]
        c0 = tour[(q + lb) % n]
        c1 = tour[(q + lb + lc - 1) % n]
        y = tour[(q + lb + lc) % n]
        kick = d[x, c0] + d[c1, b0] + d[b1, y] - d[x, b0] - d[b1, c0] - d[c1, y]
        last = (q + lb + lc - 1) % n
        reverse_range(tour, pos, q, last)
        reverse_range(tour, pos, q, (q + lc - 1) % n)
        reverse_range(tour, pos, (q + lc) % n, last)
        for node in (x, b0, b1, c0, c1, y):
            _push(queue, inq, ht, node)
        delta = kick + queue_local_search(d, tour, pos, nb_out, nb_in, symmetric, max_seg, queue, inq, ht)
        if delta <= EPS:
            cur += delta
            if cur < best_cost - EPS:
                cur = tour_cost(d, tour)
                best_cost = cur
                best[:] = tour
        else:
            tour[:] = saved
            for i in range(n):
                pos[tour[i]] = i
    return best


@njit(cache=True, nogil=True)
def held_karp(d):
    """Exact directed cycle DP over subsets; node 0 is the fixed start."""
    n = d.shape[0]
    m = n - 1
    full = (1 << m) - 1
    dp = np.full((1 << m, m), np.inf)
    parent = np.full((1 << m, m), -1, dtype=np.int8)
    for j in range(m):
        dp[1 << j, j] = d[0, j + 1]
    for mask in range(1, full + 1):
        for j in range(m):
            if not (mask >> j) & 1:
                continue
            prev = mask ^ (1 << j)
            if prev == 0:
                continue
            bv = np.inf
            bk = -1
            for k in range(m):
                if (prev >> k) & 1:
                    v = dp[prev, k] + d[k + 1, j + 1]
                    if v < bv:
                        bv = v
                        bk = k
            dp[mask, j] = bv
            parent[mask, j] = bk
    best = np.inf
    last = -1
    for j in range(m):
        v = dp[full, j] + d[j + 1, 0]
        if v < best:
            best = v
            last = j
    tour = np.zeros(n, dtype=np.int64)
    mask = full
    j = last
    for slot in range(n - 1, 0, -1):
        tour[slot] = j + 1
        pj = parent[mask, j]
        mask ^= 1 << j
        j = pj
    return tour, best
