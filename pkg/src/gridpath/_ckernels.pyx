# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled search kernels.

Mirrors ``_pykernels`` name for name; both must produce identical results,
expansion for expansion.  The open list is a binary heap of plain structs
ordered exactly (``a + b*sqrt(2)`` compared with integers).
"""
from libc.stdlib cimport malloc, realloc, free
from libc.stdint cimport uint64_t, uint8_t, int64_t, int32_t

import numpy as np

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil
    int __builtin_clzll(unsigned long long) nogil

BACKEND = "cython"

WORD = 64
PAD = 64
JUMP_POINT, DEAD_END, TARGET = 0, 1, 2
DIAGONAL_CACHING = 1
BACKWARDS_SCANNING = 2
INTERSECTION_PRUNING = 4
ALGO_ASTAR, ALGO_JPS, ALGO_CJPS = 0, 1, 2
DX = (0, 1, 1, 1, 0, -1, -1, -1)
DY = (-1, -1, 0, 1, 1, 1, 0, -1)
START_BIT = 1 << 8

cdef int64_t CPAD = 64
cdef int C_JUMP = 0
cdef int C_DEAD = 1
cdef int C_TARGET = 2
cdef int F_CACHING = 1
cdef int F_BACKWARDS = 2
cdef int F_INTERSECT = 4
cdef int K_UNSEEN = 0
cdef int K_LABEL = 1
cdef int K_GENERATED = 2

cdef int CDX[8]
cdef int CDY[8]
CDX[:] = [0, 1, 1, 1, 0, -1, -1, -1]
CDY[:] = [-1, -1, 0, 1, 1, 1, 0, -1]

cdef uint64_t LOW63 = (<uint64_t>1 << 63) - 1


cdef inline int csign(int64_t a, int64_t b) nogil:
    if a >= 0 and b >= 0:
        return 0 if (a == 0 and b == 0) else 1
    if a <= 0 and b <= 0:
        return -1
    if a > 0:
        return 1 if a * a > 2 * b * b else -1
    return 1 if 2 * b * b > a * a else -1


def sign(a, b):
    """Sign of ``a + b*sqrt(2)``, exactly."""
    return csign(a, b)


cdef int64_t climit(int64_t gac, int64_t gad, int64_t gvc, int64_t gvd, int64_t dist) nogil:
    cdef int64_t lo, hi, mid
    if csign(gac + dist - gvc, gad - gvd) <= 0:
        return 0
    if csign(gac - gvc - dist, gad + dist - gvd) > 0:
        return dist
    lo = 0
    hi = dist + 1
    while lo < hi:
        mid = (lo + hi) // 2
        if csign(gac + dist - 2 * mid - gvc, gad + mid - gvd) < 0:
            hi = mid
        else:
            lo = mid + 1
    return lo if lo <= dist else dist


def compute_limit(gac, gad, gvc, gvd, dist):
    """Number of diagonal steps from ``a`` over which the constraint applies."""
    return climit(gac, gad, gvc, gvd, dist)


# ------------------------------------------------------------------ scanning

cdef inline uint64_t window(uint64_t* words, int64_t pos) nogil:
    cdef int64_t i = pos >> 6
    cdef int off = pos & 63
    if off == 0:
        return words[i]
    return (words[i] >> off) | (words[i + 1] << (64 - off))


cdef inline int64_t scan_up(uint64_t* prev, uint64_t* cur, uint64_t* nxt, int64_t pos0, int* kind) nogil:
    cdef int64_t pos = pos0
    cdef uint64_t a, b, c, stop
    cdef int k
    while True:
        a = window(prev, pos)
        c = window(cur, pos)
        b = window(nxt, pos)
        stop = (((a << 1) & ~a) | ((b << 1) & ~b) | c) & ~(<uint64_t>1)
        if stop:
            k = __builtin_ctzll(stop)
            if (c >> k) & 1:
                kind[0] = C_DEAD
                return pos + k - 1 - pos0
            kind[0] = C_JUMP
            return pos + k - pos0
        pos += 63


cdef inline int64_t scan_down(uint64_t* prev, uint64_t* cur, uint64_t* nxt, int64_t pos0, int* kind) nogil:
    cdef int64_t pos = pos0, lo
    cdef uint64_t a, b, c, stop
    cdef int k
    while True:
        lo = pos - 63
        a = window(prev, lo)
        c = window(cur, lo)
        b = window(nxt, lo)
        stop = (((a >> 1) & ~a) | ((b >> 1) & ~b) | c) & LOW63
        if stop:
            k = 63 - __builtin_clzll(stop)
            if (c >> k) & 1:
                kind[0] = C_DEAD
                return pos0 - (lo + k) - 1
            kind[0] = C_JUMP
            return pos0 - (lo + k)
        pos -= 63


cdef int64_t cscan(uint64_t[:, ::1] rb, uint64_t[:, ::1] cb, int64_t x, int64_t y, int d,
                   int64_t tx, int64_t ty, int* kind) except? -2:
    cdef int64_t steps
    if d == 2:
        steps = scan_up(&rb[y, 0], &rb[y + 1, 0], &rb[y + 2, 0], CPAD + x, kind)
        if ty == y and tx > x and tx - x <= steps:
            kind[0] = C_TARGET
            return tx - x
    elif d == 6:
        steps = scan_down(&rb[y, 0], &rb[y + 1, 0], &rb[y + 2, 0], CPAD + x, kind)
        if ty == y and tx < x and x - tx <= steps:
            kind[0] = C_TARGET
            return x - tx
    elif d == 4:
        steps = scan_up(&cb[x, 0], &cb[x + 1, 0], &cb[x + 2, 0], CPAD + y, kind)
        if tx == x and ty > y and ty - y <= steps:
            kind[0] = C_TARGET
            return ty - y
    elif d == 0:
        steps = scan_down(&cb[x, 0], &cb[x + 1, 0], &cb[x + 2, 0], CPAD + y, kind)
        if tx == x and ty < y and y - ty <= steps:
            kind[0] = C_TARGET
            return y - ty
    else:
        raise ValueError("scan direction must be cardinal")
    return steps


def scan(row_bits, col_bits, x, y, d, tx, ty):
    """Block scan from (x, y) in cardinal ``d``; returns (kind, steps)."""
    cdef int kind = 0
    cdef int64_t steps = cscan(row_bits, col_bits, x, y, d, tx, ty, &kind)
    return kind, steps


cdef inline void flip(uint8_t[:, ::1] op, uint64_t[:, ::1] rb, uint64_t[:, ::1] cb,
                      int64_t x, int64_t y, bint blocked) noexcept nogil:
    cdef int64_t rpos = CPAD + x, cpos = CPAD + y
    cdef uint64_t rm = (<uint64_t>1) << (rpos & 63)
    cdef uint64_t cm = (<uint64_t>1) << (cpos & 63)
    if blocked:
        op[y + 1, x + 1] = 0
        rb[y + 1, rpos >> 6] |= rm
        cb[x + 1, cpos >> 6] |= cm
    else:
        op[y + 1, x + 1] = 1
        rb[y + 1, rpos >> 6] &= ~rm
        cb[x + 1, cpos >> 6] &= ~cm


cdef int64_t cscan_limited(uint8_t[:, ::1] op, uint64_t[:, ::1] rb, uint64_t[:, ::1] cb,
                           int64_t x, int64_t y, int d, int64_t tx, int64_t ty, int64_t limit,
                           int* kind, bint* hit) except? -2:
    cdef int64_t bx = x + CDX[d] * (limit + 1), by = y + CDY[d] * (limit + 1)
    cdef int64_t h = op.shape[0], w = op.shape[1]
    cdef bint was_open = 0 <= bx < w - 2 and 0 <= by < h - 2 and op[by + 1, bx + 1] != 0
    cdef int64_t steps
    if was_open:
        flip(op, rb, cb, bx, by, True)
    steps = cscan(rb, cb, x, y, d, tx, ty, kind)
    if was_open:
        flip(op, rb, cb, bx, by, False)
    hit[0] = kind[0] == C_DEAD and steps == limit and was_open
    return steps


def scan_limited(open_, row_bits, col_bits, x, y, d, tx, ty, limit):
    """Scan at most ``limit`` cells by blocking cell ``limit + 1`` for the duration.

    Returns (kind, steps, limit_hit).
    """
    cdef int kind = 0
    cdef bint hit = False
    cdef int64_t steps = cscan_limited(open_, row_bits, col_bits, x, y, d, tx, ty, limit, &kind, &hit)
    return kind, steps, bool(hit)


# ------------------------------------------------------------------ open list

cdef struct Entry:
    double fkey
    double gkey
    int64_t fc
    int64_t fd
    int64_t gc
    int64_t gd
    int64_t idx


cdef double SQRT2 = 1.4142135623730951
# distinct values c + d*sqrt(2) with |c|, |d| < 1e6 are at least ~1e-7 apart, far
# more than double rounding error, so the float keys decide all but near-ties
cdef double TIE = 1e-8


cdef inline bint entry_lt(Entry* a, Entry* b) nogil:
    cdef double diff = a.fkey - b.fkey
    if diff < -TIE:
        return True
    if diff > TIE:
        return False
    diff = a.gkey - b.gkey
    if diff > TIE:
        return True
    if diff < -TIE:
        return False
    cdef int s = csign(a.fc - b.fc, a.fd - b.fd)
    if s:
        return s < 0
    s = csign(a.gc - b.gc, a.gd - b.gd)
    if s:
        return s > 0
    return a.idx < b.idx


cdef class Heap:
    cdef Entry* data
    cdef Py_ssize_t size
    cdef Py_ssize_t cap

    def __cinit__(self):
        self.cap = 1024
        self.size = 0
        self.data = <Entry*>malloc(self.cap * sizeof(Entry))
        if self.data == NULL:
            raise MemoryError()

    def __dealloc__(self):
        free(self.data)

    cdef int push(self, Entry e) except -1:
        cdef Entry* grown
        cdef Py_ssize_t i, p
        if self.size == self.cap:
            grown = <Entry*>realloc(self.data, 2 * self.cap * sizeof(Entry))
            if grown == NULL:
                raise MemoryError()
            self.data = grown
            self.cap *= 2
        i = self.size
        self.size += 1
        while i > 0:
            p = (i - 1) >> 1
            if entry_lt(&e, &self.data[p]):
                self.data[i] = self.data[p]
                i = p
            else:
                break
        self.data[i] = e
        return 0

    cdef Entry pop(self):
        cdef Entry top = self.data[0]
        cdef Entry last
        cdef Py_ssize_t i = 0, c, n
        self.size -= 1
        n = self.size
        if n > 0:
            last = self.data[n]
            while True:
                c = 2 * i + 1
                if c >= n:
                    break
                if c + 1 < n and entry_lt(&self.data[c + 1], &self.data[c]):
                    c += 1
                if entry_lt(&self.data[c], &last):
                    self.data[i] = self.data[c]
                    i = c
                else:
                    break
            self.data[i] = last
        return top


# ------------------------------------------------------------------ search

cdef struct Constraint:
    bint active
    int64_t step
    int64_t vx
    int64_t vy
    int64_t gvc
    int64_t gvd
    int64_t dist
    int64_t limit


cdef class Engine:
    """Per-map search state.  Owns the map's arrays for the duration of a query."""
    cdef uint8_t[:, ::1] op
    cdef uint64_t[:, ::1] rb
    cdef uint64_t[:, ::1] cb
    cdef uint8_t[:, ::1] succ
    cdef uint8_t[::1] corner
    cdef readonly int64_t W, H
    cdef int64_t[::1] gc
    cdef int64_t[::1] gd
    cdef int64_t[::1] stamp
    cdef uint8_t[::1] kind
    cdef int64_t[::1] parent
    cdef int64_t[::1] pgc
    cdef int64_t[::1] pgd
    cdef int32_t[::1] arrive
    cdef int64_t[::1] closed
    cdef int64_t version
    cdef int64_t tx, ty
    cdef int flags
    cdef Heap heap
    cdef int64_t expansions, insertions, scan_steps, pruned, labels
    cdef object _keep

    def __init__(self, open_, row_bits, col_bits, width, height, succ_table, corner_table):
        self.op = open_
        self.rb = row_bits
        self.cb = col_bits
        self.W = width
        self.H = height
        n = width * height
        self.succ = np.ascontiguousarray(succ_table, dtype=np.uint8)
        self.corner = np.ascontiguousarray(corner_table, dtype=np.uint8)
        self.gc = np.zeros(n, dtype=np.int64)
        self.gd = np.zeros(n, dtype=np.int64)
        self.stamp = np.zeros(n, dtype=np.int64)
        self.kind = np.zeros(n, dtype=np.uint8)
        self.parent = np.full(n, -1, dtype=np.int64)
        self.pgc = np.zeros(n, dtype=np.int64)
        self.pgd = np.zeros(n, dtype=np.int64)
        self.arrive = np.zeros(n, dtype=np.int32)
        self.closed = np.zeros(n, dtype=np.int64)
        self.version = 0
        self.heap = Heap()

    # -------------------------------------------------------- helpers

    cdef inline int nbmask(self, int64_t x, int64_t y) noexcept:
        cdef int m = 0, k
        for k in range(8):
            if self.op[y + 1 + CDY[k], x + 1 + CDX[k]]:
                m |= 1 << k
        return m

    cdef inline bint can_step(self, int64_t x, int64_t y, int d) noexcept:
        cdef int64_t nx = x + CDX[d], ny = y + CDY[d]
        if not self.op[ny + 1, nx + 1]:
            return False
        if d & 1:
            return self.op[y + 1, nx + 1] != 0 and self.op[ny + 1, x + 1] != 0
        return True

    cdef int push(self, int64_t idx, int64_t gc, int64_t gd) except -1:
        cdef int64_t x = idx % self.W, y = idx // self.W
        cdef int64_t dx = x - self.tx, dy = y - self.ty
        cdef Entry e
        if dx < 0:
            dx = -dx
        if dy < 0:
            dy = -dy
        e.fc = gc + (dx - dy if dx > dy else dy - dx)
        e.fd = gd + (dx if dx < dy else dy)
        e.gc = gc
        e.gd = gd
        e.idx = idx
        e.fkey = e.fc + e.fd * SQRT2
        e.gkey = gc + gd * SQRT2
        self.heap.push(e)
        self.insertions += 1
        return 0

    cdef int generate(self, int64_t idx, int64_t gc, int64_t gd, int64_t parent,
                      int64_t pgc, int64_t pgd, int arrival) except -1:
        cdef int s
        if self.stamp[idx] == self.version:
            s = csign(gc - self.gc[idx], gd - self.gd[idx])
            if s > 0:
                return 0
            # a label only prunes when strictly better: its diagonal may have been
            # cut short by a constraint that itself relied on a tie
            if s == 0 and self.kind[idx] != K_LABEL:
                if (self.flags & F_INTERSECT and self.kind[idx] == K_GENERATED
                        and self.closed[idx] != self.version):
                    self.arrive[idx] |= 1 << arrival
                return 0
        self.stamp[idx] = self.version
        self.gc[idx] = gc
        self.gd[idx] = gd
        self.kind[idx] = K_GENERATED
        self.parent[idx] = parent
        self.pgc[idx] = pgc
        self.pgd[idx] = pgd
        self.arrive[idx] = 1 << arrival
        self.push(idx, gc, gd)
        return 1

    cdef void label(self, int64_t idx, int64_t gc, int64_t gd) noexcept:
        if self.stamp[idx] == self.version and csign(gc - self.gc[idx], gd - self.gd[idx]) >= 0:
            return
        self.stamp[idx] = self.version
        self.gc[idx] = gc
        self.gd[idx] = gd
        self.kind[idx] = K_LABEL
        self.labels += 1

    cdef inline int64_t do_scan(self, int64_t x, int64_t y, int d, int* kind) except? -2:
        cdef int64_t steps = cscan(self.rb, self.cb, x, y, d, self.tx, self.ty, kind)
        self.scan_steps += steps
        return steps

    cdef inline int64_t do_scan_limited(self, int64_t x, int64_t y, int d, int64_t limit,
                                        int* kind, bint* hit) except? -2:
        cdef int64_t steps = cscan_limited(self.op, self.rb, self.cb, x, y, d, self.tx, self.ty,
                                           limit, kind, hit)
        self.scan_steps += steps
        return steps

    # -------------------------------------------------------- queries

    def search(self, int algo, int64_t sx, int64_t sy, int64_t tx, int64_t ty, int flags=0, record=False):
        """Run one query.  Returns (found, gc, gd, jump_point_indices, stats, log)."""
        cdef int64_t W = self.W, s, t, idx, i, ver
        cdef Entry e
        cdef bint found = False
        cdef bint rec = bool(record)
        self.version += 1
        ver = self.version
        self.tx = tx
        self.ty = ty
        self.flags = flags
        self.heap.size = 0
        self.expansions = self.insertions = self.scan_steps = 0
        self.pruned = self.labels = 0
        log = [] if rec else None
        s = sy * W + sx
        t = ty * W + tx
        self.stamp[s] = ver
        self.gc[s] = 0
        self.gd[s] = 0
        self.kind[s] = K_GENERATED
        self.parent[s] = -1
        self.pgc[s] = 0
        self.pgd[s] = 0
        self.arrive[s] = START_BIT
        self.push(s, 0, 0)
        while self.heap.size > 0:
            e = self.heap.pop()
            idx = e.idx
            if (self.closed[idx] == ver or self.kind[idx] != K_GENERATED
                    or e.gc != self.gc[idx] or e.gd != self.gd[idx]):
                continue
            self.closed[idx] = ver
            self.expansions += 1
            if rec:
                log.append((idx, e.gc, e.gd, self.parent[idx], self.pgc[idx], self.pgd[idx]))
            if idx == t:
                found = True
                break
            if algo == 0:
                self.expand_astar(idx, e.gc, e.gd)
            else:
                self.expand_jps(idx, e.gc, e.gd, algo == 2)
        path = []
        if found:
            i = t
            while i != -1:
                path.append(i)
                i = self.parent[i]
            path.reverse()
        stats = {
            "expansions": self.expansions,
            "insertions": self.insertions,
            "scan_steps": self.scan_steps,
            "pruned": self.pruned,
            "labels": self.labels,
        }
        gc = self.gc[t] if found else -1
        gd = self.gd[t] if found else -1
        return found, gc, gd, path, stats, log

    cdef int expand_astar(self, int64_t idx, int64_t gc, int64_t gd) except -1:
        cdef int64_t W = self.W, x = idx % W, y = idx // W, n
        cdef int d
        for d in range(8):
            if self.can_step(x, y, d):
                n = (y + CDY[d]) * W + x + CDX[d]
                if d & 1:
                    self.generate(n, gc, gd + 1, idx, gc, gd, d)
                else:
                    self.generate(n, gc + 1, gd, idx, gc, gd, d)
        return 0

    cdef int expand_jps(self, int64_t idx, int64_t gc, int64_t gd, bint constrained) except -1:
        cdef int64_t W = self.W, x = idx % W, y = idx // W
        cdef int nb = self.nbmask(x, y)
        cdef int arrive = self.arrive[idx]
        cdef int succ = 0xFF, k, d
        cdef int fkind[8]
        cdef int64_t fsteps[8]
        cdef int kind = 0
        cdef int64_t steps
        for k in range(9):
            if arrive & (1 << k):
                succ &= self.succ[k, nb]
        for k in range(8):
            fkind[k] = -1
            fsteps[k] = 0
        for d in range(0, 8, 2):
            if succ & (1 << d):
                steps = self.do_scan(x, y, d, &kind)
                fkind[d] = kind
                fsteps[d] = steps
                self.on_scan(x, y, d, kind, steps, gc, gd, idx, gc, gd)
        for d in range(1, 8, 2):
            if succ & (1 << d):
                self.diagonal(idx, x, y, gc, gd, d, fkind, fsteps, constrained)
        return 0

    cdef int on_scan(self, int64_t ox, int64_t oy, int d, int kind, int64_t steps, int64_t ogc,
                     int64_t ogd, int64_t parent, int64_t pgc, int64_t pgd) except -1:
        cdef int64_t nx, ny
        if kind == C_DEAD:
            return 0
        nx = ox + CDX[d] * steps
        ny = oy + CDY[d] * steps
        self.generate(ny * self.W + nx, ogc + steps, ogd, parent, pgc, pgd, d)
        if kind == C_JUMP and self.flags & F_BACKWARDS:
            self.scan_back(nx, ny, d, steps, ogc, ogd)
        return 0

    cdef int scan_back(self, int64_t nx, int64_t ny, int d, int64_t steps, int64_t ogc,
                       int64_t ogd) except -1:
        cdef int back = (d + 4) & 7, rep, kind = 0
        cdef int64_t x = nx, y = ny, dist = steps, k
        cdef bint hit = False
        for rep in range(2):
            if dist <= 1:
                return 0
            k = self.do_scan_limited(x, y, back, dist - 1, &kind, &hit)
            if kind != C_JUMP:
                return 0
            x += CDX[back] * k
            y += CDY[back] * k
            dist -= k
            self.label(y * self.W + x, ogc + dist, ogd)
        return 0

    cdef bint make_constraint(self, Constraint* con, int64_t x, int64_t y, int64_t gc, int64_t gd,
                              int64_t step, int d, int64_t steps) noexcept:
        cdef int64_t vx, vy, v, limit
        con.active = False
        if steps < 1:
            return False
        vx = x + CDX[d] * steps
        vy = y + CDY[d] * steps
        v = vy * self.W + vx
        # only nodes that were put on the open list vouch for the region behind
        # them; a label is a bound on g, nobody will expand from it
        if self.stamp[v] != self.version or self.kind[v] != K_GENERATED:
            return False
        limit = climit(gc, gd, self.gc[v], self.gd[v], steps)
        if limit == 0:
            return False
        con.active = True
        con.step = step
        con.vx = vx
        con.vy = vy
        con.gvc = self.gc[v]
        con.gvd = self.gd[v]
        con.dist = steps
        con.limit = limit
        return True

    cdef void gbar(self, int64_t px, int64_t py, int64_t qx, int64_t qy, Constraint* con,
                   int64_t* bc, int64_t* bd) noexcept:
        cdef int64_t dx = qx - con.vx, dy = qy - con.vy, ec, ed, p
        if dx < 0:
            dx = -dx
        if dy < 0:
            dy = -dy
        ec = con.gvc + (dx - dy if dx > dy else dy - dx) + 1
        ed = con.gvd + (dx if dx < dy else dy)
        p = py * self.W + px
        if (self.stamp[p] == self.version and self.kind[p] == K_GENERATED
                and csign(self.gc[p] - ec, self.gd[p] - ed) < 0):
            bc[0] = self.gc[p]
            bd[0] = self.gd[p]
        else:
            bc[0] = ec
            bd[0] = ed

    cdef int diagonal(self, int64_t parent, int64_t ax, int64_t ay, int64_t agc, int64_t agd,
                      int dd, int* fkind, int64_t* fsteps, bint constrained) except -1:
        cdef int64_t W = self.W
        cdef int comps[2]
        cdef Constraint cons[2]
        cdef int k, d, other, kind = 0
        cdef bint caching = (self.flags & F_CACHING) != 0, hit = False
        cdef int64_t x = ax, y = ay, gc = agc, gd = agd, i = 0, steps, limit, px, py, qx, qy
        cdef int64_t bc = 0, bd = 0, limit2
        comps[0] = (dd - 1) & 7
        comps[1] = (dd + 1) & 7
        cons[0].active = False
        cons[1].active = False
        if constrained:
            for k in range(2):
                if fkind[comps[k]] == C_JUMP:
                    self.make_constraint(&cons[k], ax, ay, agc, agd, 0, comps[k], fsteps[comps[k]])
        while self.can_step(x, y, dd):
            x += CDX[dd]
            y += CDY[dd]
            gd += 1
            i += 1
            self.scan_steps += 1
            if x == self.tx and y == self.ty:
                self.generate(y * W + x, gc, gd, parent, agc, agd, dd)
                return 0
            if caching and self.corner[self.nbmask(x, y)]:
                self.label(y * W + x, gc, gd)
            for k in range(2):
                d = comps[k]
                other = comps[1 - k]
                # at step L itself the route through a_i is strictly cheaper at the
                # blockage than the one through v, so the limit only holds before it
                if cons[k].active and i - cons[k].step >= cons[k].limit:
                    cons[k].active = False
                if not cons[k].active:
                    steps = self.do_scan(x, y, d, &kind)
                    self.on_scan(x, y, d, kind, steps, gc, gd, parent, agc, agd)
                    if constrained and kind == C_JUMP:
                        self.make_constraint(&cons[k], x, y, gc, gd, i, d, steps)
                    continue
                limit = cons[k].dist - (i - cons[k].step)
                steps = self.do_scan_limited(x, y, d, limit, &kind, &hit)
                px = x + CDX[d] * steps
                py = y + CDY[d] * steps
                if hit:
                    qx = px - CDX[other]
                    qy = py - CDY[other]
                    self.gbar(px, py, qx, qy, &cons[k], &bc, &bd)
                    if csign(bc + steps - gc, bd - gd) < 0:
                        return 0
                    continue
                if kind == C_TARGET:
                    self.on_scan(x, y, d, kind, steps, gc, gd, parent, agc, agd)
                    cons[k].active = False
                    continue
                qx = px - CDX[other]
                qy = py - CDY[other]
                self.gbar(px, py, qx, qy, &cons[k], &bc, &bd)
                if kind == C_JUMP:
                    if csign(bc - gc - steps, bd - gd) < 0:
                        self.pruned += 1
                    else:
                        self.on_scan(x, y, d, kind, steps, gc, gd, parent, agc, agd)
                limit2 = climit(gc, gd, bc, bd, steps) if steps >= 1 else 0
                if limit2 > 0:
                    cons[k].active = True
                    cons[k].step = i
                    cons[k].vx = px
                    cons[k].vy = py
                    cons[k].gvc = bc
                    cons[k].gvd = bd
                    cons[k].dist = steps
                    cons[k].limit = limit2
                else:
                    cons[k].active = False
        return 0

    # -------------------------------------------------------- oracle

    def dijkstra(self, int64_t sx, int64_t sy):
        """Exact distances from (sx, sy); returns flat arrays (cardinals, diagonals), -1 unreachable."""
        cdef int64_t W = self.W, n = self.W * self.H, s = sy * W + sx, u, v, x, y, nc, nd
        cdef int d
        cdef Entry e, f
        dc_arr = np.full(n, -1, dtype=np.int64)
        dd_arr = np.full(n, -1, dtype=np.int64)
        done_arr = np.zeros(n, dtype=np.uint8)
        cdef int64_t[::1] dc = dc_arr
        cdef int64_t[::1] dd = dd_arr
        cdef uint8_t[::1] done = done_arr
        cdef Heap heap = Heap()
        dc[s] = 0
        dd[s] = 0
        e.fc = e.fd = e.gc = e.gd = 0
        e.fkey = e.gkey = 0.0
        e.idx = s
        heap.push(e)
        while heap.size > 0:
            e = heap.pop()
            u = e.idx
            if done[u] or e.fc != dc[u] or e.fd != dd[u]:
                continue
            done[u] = 1
            x = u % W
            y = u // W
            for d in range(8):
                if not self.can_step(x, y, d):
                    continue
                v = (y + CDY[d]) * W + x + CDX[d]
                if done[v]:
                    continue
                if d & 1:
                    nc = e.fc
                    nd = e.fd + 1
                else:
                    nc = e.fc + 1
                    nd = e.fd
                if dc[v] < 0 or csign(nc - dc[v], nd - dd[v]) < 0:
                    dc[v] = nc
                    dd[v] = nd
                    f.fc = f.gc = nc
                    f.fd = f.gd = nd
                    f.idx = v
                    f.fkey = f.gkey = nc + nd * SQRT2
                    heap.push(f)
        return dc_arr, dd_arr
