"""Compiled enumeration of connected clusters and their interface statistics.

Connected vertex sets containing the root are generated with Redelmeier's
untried-set recursion (run iteratively), so every set appears exactly once.
For each set the kernel labels the cofacial components around it as escaping
(reaching a layer deeper than the set) or enclosed, and from those labels
derives |M|, |B|, |B_o|, |K|, the unzipped boundary length and two round-trip
checks.  Sets with enclosed holes are either duplicates of a smaller hole-free
set (when |K| fits under the cap) or are handed back to Python for dedup.
"""

from __future__ import annotations

import numpy as np
from numba import njit

# counter slots
SETS, STAMP, VSTAMP, SKIPPED, HOLEY, ROUNDTRIP_FAIL, OVERFLOW, PAIRS = range(8)


@njit(cache=True)
def _escape(start, off, nbr, layer, blocked, bstamp, depth, labst, labval, cs, vis, vs, stack, vlist):
    """Search from ``start`` avoiding blocked vertices; label everything touched.

    Returns (escaped, number of visited vertices); visited ids are in ``vlist``.
    """
    top = 0
    stack[0] = start
    vis[start] = vs
    nv = 1
    vlist[0] = start
    escaped = False
    while top >= 0:
        v = stack[top]
        top -= 1
        if layer[v] > depth or (labst[v] == cs and labval[v] == 1):
            escaped = True
            break
        for e in range(off[v], off[v + 1]):
            w = nbr[e]
            if blocked[w] != bstamp and vis[w] != vs:
                vis[w] = vs
                top += 1
                stack[top] = w
                vlist[nv] = w
                nv += 1
    val = 1 if escaped else 2
    for j in range(nv):
        labst[vlist[j]] = cs
        labval[vlist[j]] = val
    return escaped, nv


@njit(cache=True)
def _process(S, s, adj_off, adj, cof_off, cof, layer, inS, ctr, work, lab, hists, ext_m, ext_set, kbuf, kpos):
    (vis, stack, vlist, holebuf, Bl, Ml, bmark, mmark, dmark) = work
    (lab1st, lab1val, lab2st, lab2val, lab3st, lab3val) = lab
    (hist4, histL, sethist) = hists
    cap = ext_set.shape[1]
    nmax = hist4.shape[1] - 1
    ctr[SETS] += 1
    ctr[STAMP] += 1
    cs = ctr[STAMP]
    D = 0
    for i in range(s):
        if layer[S[i]] > D:
            D = layer[S[i]]
        inS[S[i]] = cs
    # label the cofacial neighbourhood of S
    nholes = 0
    for i in range(s):
        c = S[i]
        for e in range(cof_off[c], cof_off[c + 1]):
            u = cof[e]
            if inS[u] == cs or lab1st[u] == cs:
                continue
            ctr[VSTAMP] += 1
            esc, nv = _escape(u, cof_off, cof, layer, inS, cs, D, lab1st, lab1val, cs,
                              vis, ctr[VSTAMP], stack, vlist)
            if not esc:
                for j in range(nv):
                    holebuf[nholes + j] = vlist[j]
                nholes += nv
    # outer boundary, full vertex boundary, outer interface
    n = 0
    dS = 0
    for i in range(s):
        c = S[i]
        for e in range(adj_off[c], adj_off[c + 1]):
            u = adj[e]
            if inS[u] == cs or dmark[u] == cs:
                continue
            dmark[u] = cs
            dS += 1
            if lab1val[u] == 1:
                bmark[u] = cs
                Bl[n] = u
                n += 1
    m = 0
    for i in range(s):
        c = S[i]
        for e in range(cof_off[c], cof_off[c + 1]):
            u = cof[e]
            if inS[u] != cs and lab1val[u] == 1:
                mmark[c] = cs
                Ml[m] = c
                m += 1
                break
    k = s + nholes
    if dS <= nmax:
        sethist[s, dS] += 1
    else:
        ctr[OVERFLOW] += 1
    if nholes > 0:
        if k <= cap:
            ctr[SKIPPED] += 1
            return kpos
        if kpos + 1 + k > kbuf.shape[0]:
            ctr[OVERFLOW] += 1
            return kpos
        kbuf[kpos] = k
        for i in range(s):
            kbuf[kpos + 1 + i] = S[i]
        for j in range(nholes):
            kbuf[kpos + 1 + s + j] = holebuf[j]
        ctr[HOLEY] += 1
        return kpos + 1 + k
    ctr[PAIRS] += 1
    # minimal-cut part: B vertices adjacent to a rim-reaching component of host - B
    DB = 0
    for i in range(n):
        if layer[Bl[i]] > DB:
            DB = layer[Bl[i]]
    bo = 0
    for i in range(n):
        b = Bl[i]
        found = False
        for e in range(adj_off[b], adj_off[b + 1]):
            u = adj[e]
            if bmark[u] == cs:
                continue
            if lab2st[u] == cs:
                if lab2val[u] == 1:
                    found = True
                    break
                continue
            ctr[VSTAMP] += 1
            esc, nv = _escape(u, adj_off, adj, layer, bmark, cs, DB, lab2st, lab2val, cs,
                              vis, ctr[VSTAMP], stack, vlist)
            if esc:
                found = True
                break
        if found:
            bo += 1
    # round trip from B: the root's component in host - B is exactly S
    ok = True
    ctr[VSTAMP] += 1
    vs = ctr[VSTAMP]
    root = S[0]
    top = 0
    stack[0] = root
    vis[root] = vs
    count = 1
    while top >= 0 and ok:
        v = stack[top]
        top -= 1
        if inS[v] != cs:
            ok = False
            break
        for e in range(adj_off[v], adj_off[v + 1]):
            w = adj[e]
            if bmark[w] != cs and vis[w] != vs:
                vis[w] = vs
                count += 1
                top += 1
                stack[top] = w
    if count != s:
        ok = False
    # round trip from M: outer region of M, restricted to neighbours of M, is B
    if ok:
        DM = 0
        for i in range(m):
            if layer[Ml[i]] > DM:
                DM = layer[Ml[i]]
        nb = 0
        for i in range(m):
            c = Ml[i]
            for e in range(adj_off[c], adj_off[c + 1]):
                u = adj[e]
                if mmark[u] == cs or dmark[u] == -cs:
                    continue
                if lab3st[u] != cs:
                    ctr[VSTAMP] += 1
                    _escape(u, cof_off, cof, layer, mmark, cs, DM, lab3st, lab3val, cs,
                            vis, ctr[VSTAMP], stack, vlist)
                if lab3val[u] == 1:
                    dmark[u] = -cs
                    nb += 1
                    if bmark[u] != cs:
                        ok = False
        if nb != n:
            ok = False
    if not ok:
        ctr[ROUNDTRIP_FAIL] += 1
    # unzipped boundary length: runs of S-neighbours around each vertex of B
    L = 0
    for i in range(n):
        b = Bl[i]
        lo = adj_off[b]
        hi = adj_off[b + 1]
        runs = 0
        full = True
        for e in range(lo, hi):
            prev = e - 1 if e > lo else hi - 1
            if inS[adj[e]] == cs:
                if inS[adj[prev]] != cs:
                    runs += 1
            else:
                full = False
        if full:
            runs = 1
        L += runs
    if n > nmax or L > 2 * nmax:
        ctr[OVERFLOW] += 1
        return kpos
    hist4[m, n, bo, k] += 1
    histL[n, bo, L] += 1
    if m > ext_m[n]:
        ext_m[n] = m
        for i in range(cap):
            ext_set[n, i] = S[i] if i < s else -1
    return kpos


@njit(cache=True)
def census_kernel(adj_off, adj, cof_off, cof, layer, root, cap, max_layer, nmax, kbuf_size, max_sets):
    V = layer.shape[0]
    maxdeg = 0
    for v in range(V):
        if adj_off[v + 1] - adj_off[v] > maxdeg:
            maxdeg = adj_off[v + 1] - adj_off[v]
    inS = np.zeros(V, np.int64)
    seen = np.zeros(V, np.bool_)
    work = (np.zeros(V, np.int64), np.empty(V + 1, np.int64), np.empty(V + 1, np.int64),
            np.empty(V + 1, np.int64), np.empty(V + 1, np.int64), np.empty(V + 1, np.int64),
            np.zeros(V, np.int64), np.zeros(V, np.int64), np.zeros(V, np.int64))
    lab = (np.zeros(V, np.int64), np.zeros(V, np.int8), np.zeros(V, np.int64),
           np.zeros(V, np.int8), np.zeros(V, np.int64), np.zeros(V, np.int8))
    hists = (np.zeros((cap + 1, nmax + 1, nmax + 1, cap + 1), np.int64),
             np.zeros((nmax + 1, nmax + 1, 2 * nmax + 1), np.int64),
             np.zeros((cap + 1, nmax + 1), np.int64))
    ext_m = np.full(nmax + 1, -1, np.int64)
    ext_set = np.full((nmax + 1, cap), -1, np.int64)
    kbuf = np.empty(kbuf_size, np.int64)
    ctr = np.zeros(8, np.int64)
    S = np.empty(cap, np.int64)
    U = np.empty(cap * (maxdeg * cap + maxdeg) + 16, np.int64)
    lo = np.zeros(cap, np.int64)
    hi = np.zeros(cap, np.int64)
    pos = np.zeros(cap, np.int64)
    newlo = np.zeros(cap, np.int64)

    S[0] = root
    size = 1
    seen[root] = True
    kpos = _process(S, size, adj_off, adj, cof_off, cof, layer, inS, ctr, work, lab, hists, ext_m, ext_set, kbuf, 0)
    if cap > 1:
        t = 0
        k = 0
        for e in range(adj_off[root], adj_off[root + 1]):
            u = adj[e]
            if layer[u] <= max_layer and not seen[u]:
                seen[u] = True
                U[k] = u
                k += 1
        lo[0] = 0
        hi[0] = k
        pos[0] = 0
        newlo[0] = 0
        while t >= 0:
            if ctr[SETS] > max_sets:
                ctr[OVERFLOW] += 1
                break
            if pos[t] == hi[t]:
                for j in range(newlo[t], hi[t]):
                    seen[U[j]] = False
                if t == 0:
                    break
                t -= 1
                size -= 1
                continue
            v = U[pos[t]]
            pos[t] += 1
            S[size] = v
            size += 1
            kpos = _process(S, size, adj_off, adj, cof_off, cof, layer, inS, ctr, work, lab, hists,
                            ext_m, ext_set, kbuf, kpos)
            if size < cap:
                base = hi[t]
                nl = base
                for j in range(pos[t], hi[t]):
                    U[nl] = U[j]
                    nl += 1
                nstart = nl
                for e in range(adj_off[v], adj_off[v + 1]):
                    u = adj[e]
                    if layer[u] <= max_layer and not seen[u]:
                        seen[u] = True
                        U[nl] = u
                        nl += 1
                t += 1
                lo[t] = base
                hi[t] = nl
                pos[t] = base
                newlo[t] = nstart
            else:
                size -= 1
    return ctr, hists[0], hists[1], hists[2], ext_m, ext_set, kbuf[:kpos].copy()
