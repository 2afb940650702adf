# Compiled inner loops.  Callers in solvers/oracle/distributions own all
# argument checking; these functions trust their inputs.
import numba as nb
import numpy as np


@nb.njit(cache=True)
def ppz_trials(lits, occ_ptr, occ_clause, occ_lit, n, coins, abort, stop_first, target, out):
    """Run one Simple-PPZ pass per row of ``coins``.

    ``coins[t, i]`` is the value given to variable ``i`` if trial ``t`` has to
    guess it.  Returns ``(successes, target_hits, first_success_row)`` and
    writes the first satisfying assignment into ``out``.
    """
    m, w = lits.shape
    widths = np.zeros(m, np.int32)
    for c in range(m):
        for j in range(w):
            if lits[c, j] != 0:
                widths[c] += 1
    check_target = target.shape[0] == n
    val = np.empty(n, np.int8)
    nunset = np.empty(m, np.int32)
    nsat = np.empty(m, np.int32)
    n_success = 0
    n_target = 0
    first = -1
    for t in range(coins.shape[0]):
        units = 0
        dead = False
        for v in range(n):
            val[v] = -1
        for c in range(m):
            nunset[c] = widths[c]
            nsat[c] = 0
            if widths[c] == 1:
                units += 1
            elif widths[c] == 0:
                dead = True
        i = 0
        while i < n:
            if dead and abort:
                break
            if units > 0:
                # first unit clause in clause order
                c = 0
                while not (nsat[c] == 0 and nunset[c] == 1):
                    c += 1
                lit = 0
                for j in range(w):
                    lit = lits[c, j]
                    if lit != 0 and val[abs(lit) - 1] < 0:
                        break
                v = abs(lit) - 1
                b = 1 if lit > 0 else 0
            elif val[i] < 0:
                v = i
                b = coins[t, i]
                i += 1
            else:
                i += 1
                continue
            val[v] = b
            for q in range(occ_ptr[v], occ_ptr[v + 1]):
                c = occ_clause[q]
                if nsat[c] == 0 and nunset[c] == 1:
                    units -= 1
                nunset[c] -= 1
                if (occ_lit[q] > 0) == (b == 1):
                    nsat[c] += 1
                elif nsat[c] == 0:
                    if nunset[c] == 1:
                        units += 1
                    elif nunset[c] == 0:
                        dead = True
        if dead:
            continue
        n_success += 1
        if check_target:
            hit = True
            for v in range(n):
                if val[v] != target[v]:
                    hit = False
                    break
            if hit:
                n_target += 1
        if first < 0:
            first = t
            for v in range(n):
                out[v] = val[v]
            if stop_first:
                break
    return n_success, n_target, first


@nb.njit(cache=True)
def _satisfies(a, pos, neg):
    for c in range(pos.shape[0]):
        if (a & pos[c]) == 0 and (~a & neg[c]) == 0:
            return False
    return True


@nb.njit(cache=True)
def count_models(pos, neg, n):
    """Count assignments (as integers, bit v-1 = variable v) satisfying every clause."""
    total = 0
    for a in range(np.int64(1) << n):
        if _satisfies(a, pos, neg):
            total += 1
    return total


@nb.njit(cache=True)
def first_model(pos, neg, n):
    """Smallest integer-encoded model, or -1."""
    for a in range(np.int64(1) << n):
        if _satisfies(a, pos, neg):
            return a
    return -1


@nb.njit(cache=True)
def hits_in_rows(pos, neg, rows):
    """Index of the first row (integer-encoded assignment) that is a model, or -1."""
    for t in range(rows.shape[0]):
        if _satisfies(rows[t], pos, neg):
            return t
    return -1


@nb.njit(cache=True)
def partial_fisher_yates(draws, out):
    """Map partial Fisher-Yates draws to k-subsets of ``0..n-1``.

    Row ``c`` of ``draws`` holds ``r_j`` uniform on ``[j, n)``; the chosen
    element at step ``j`` is the current content of slot ``r_j`` of a
    virtual identity array, which is then overwritten by slot ``j``.
    Only touched slots are stored.
    """
    m, k = draws.shape
    keys = np.empty(k, np.int64)
    vals = np.empty(k, np.int64)
    for c in range(m):
        nt = 0
        for j in range(k):
            r = draws[c, j]
            at_r = r
            at_j = j
            slot_r = -1
            for q in range(nt):
                if keys[q] == r:
                    at_r = vals[q]
                    slot_r = q
                if keys[q] == j:
                    at_j = vals[q]
            out[c, j] = at_r
            if slot_r >= 0:
                vals[slot_r] = at_j
            else:
                keys[nt] = r
                vals[nt] = at_j
                nt += 1


@nb.njit(cache=True)
def signed_literals(var_sets, positive_ref, flip):
    """lits[c, j] = +v if positive_ref[v - 1] == flip[c, j] else -v, for v = var_sets[c, j]."""
    m, k = var_sets.shape
    out = np.empty((m, k), np.int32)
    for c in range(m):
        for j in range(k):
            v = var_sets[c, j]
            out[c, j] = v if positive_ref[v - 1] == flip[c, j] else -v
    return out


@nb.njit(cache=True)
def critical_max_witness(lits, sigma, n):
    """Per variable, the first clause critical for it with it as the largest index (-1 if none)."""
    m, w = lits.shape
    wit = np.full(n, -1, np.int64)
    for c in range(m):
        n_sat = 0
        last = 0
        last_sat = False
        for j in range(w):
            lit = lits[c, j]
            if lit == 0:
                break
            v = abs(lit)
            s = (sigma[v - 1] == 1) == (lit > 0)
            if s:
                n_sat += 1
            last = v
            last_sat = s
        if n_sat == 1 and last_sat and wit[last - 1] < 0:
            wit[last - 1] = c
    return wit
