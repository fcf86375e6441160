"""Pure-Python search kernels.

Used when the compiled extension is unavailable (or ``GRIDPATH_PURE=1``).  The
compiled module exposes the same names and must produce identical results,
expansion for expansion.
"""
from heapq import heappop, heappush

WORD = 64
MASK = (1 << WORD) - 1
LOW63 = (1 << 63) - 1
PAD = 64

JUMP_POINT, DEAD_END, TARGET = 0, 1, 2

DIAGONAL_CACHING = 1
BACKWARDS_SCANNING = 2
INTERSECTION_PRUNING = 4

ALGO_ASTAR, ALGO_JPS, ALGO_CJPS = 0, 1, 2

DX = (0, 1, 1, 1, 0, -1, -1, -1)
DY = (-1, -1, 0, 1, 1, 1, 0, -1)
START_BIT = 1 << 8

_UNSEEN, _LABEL, _GENERATED = 0, 1, 2

BACKEND = "python"


def sign(a, b):
    """Sign of ``a + b*sqrt(2)``, exactly."""
    if a >= 0 and b >= 0:
        return 0 if a == 0 and b == 0 else 1
    if a <= 0 and b <= 0:
        return -1
    if a > 0:
        return 1 if a * a > 2 * b * b else -1
    return 1 if 2 * b * b > a * a else -1


def compute_limit(gac, gad, gvc, gvd, dist):
    """Number of diagonal steps from ``a`` over which the constraint applies."""
    # case (i): reaching the blockage straight from a is no worse than via v
    if sign(gac + dist - gvc, gad - gvd) <= 0:
        return 0
    # case (ii): even the far end of the diagonal is better reached from v
    if sign(gac - gvc - dist, gad + dist - gvd) > 0:
        return dist
    # case (iii): smallest L with g_a + sqrt2*L + (dist - L) < g_v + L;
    # the left side minus the right side strictly decreases in L
    lo, hi = 0, dist + 1
    while lo < hi:
        mid = (lo + hi) // 2
        if sign(gac + dist - 2 * mid - gvc, gad + mid - gvd) < 0:
            hi = mid
        else:
            lo = mid + 1
    return lo if lo <= dist else dist


# ------------------------------------------------------------------ scanning


def _window(words, pos):
    i, off = divmod(pos, WORD)
    w = int(words[i])
    if off:
        w = (w >> off) | ((int(words[i + 1]) << (WORD - off)) & MASK)
    return w


def _scan_up(prev, cur, nxt, pos0):
    """Scan towards increasing bit index; returns (kind, steps)."""
    pos = pos0
    while True:
        a = _window(prev, pos)
        c = _window(cur, pos)
        b = _window(nxt, pos)
        # bit k set where the side row turns from blocked (k-1) to free (k)
        stop = (((a << 1) & ~a) | ((b << 1) & ~b) | c) & MASK & ~1
        if stop:
            k = (stop & -stop).bit_length() - 1
            if (c >> k) & 1:
                return DEAD_END, pos + k - 1 - pos0
            return JUMP_POINT, pos + k - pos0
        pos += WORD - 1


def _scan_down(prev, cur, nxt, pos0):
    """Scan towards decreasing bit index; returns (kind, steps)."""
    pos = pos0
    while True:
        lo = pos - (WORD - 1)
        a = _window(prev, lo)
        c = _window(cur, lo)
        b = _window(nxt, lo)
        stop = ((a >> 1) & ~a) | ((b >> 1) & ~b) | c
        stop &= LOW63
        if stop:
            k = stop.bit_length() - 1
            if (c >> k) & 1:
                return DEAD_END, pos0 - (lo + k) - 1
            return JUMP_POINT, pos0 - (lo + k)
        pos -= WORD - 1


def scan(row_bits, col_bits, x, y, d, tx, ty):
    """Block scan from (x, y) in cardinal ``d``; returns (kind, steps)."""
    if d == 2:
        kind, steps = _scan_up(row_bits[y], row_bits[y + 1], row_bits[y + 2], PAD + x)
        if ty == y and tx > x and tx - x <= steps:
            return TARGET, tx - x
    elif d == 6:
        kind, steps = _scan_down(row_bits[y], row_bits[y + 1], row_bits[y + 2], PAD + x)
        if ty == y and tx < x and x - tx <= steps:
            return TARGET, x - tx
    elif d == 4:
        kind, steps = _scan_up(col_bits[x], col_bits[x + 1], col_bits[x + 2], PAD + y)
        if tx == x and ty > y and ty - y <= steps:
            return TARGET, ty - y
    elif d == 0:
        kind, steps = _scan_down(col_bits[x], col_bits[x + 1], col_bits[x + 2], PAD + y)
        if tx == x and ty < y and y - ty <= steps:
            return TARGET, y - ty
    else:
        raise ValueError("scan direction must be cardinal")
    return kind, steps


def _flip(open_, row_bits, col_bits, x, y, blocked):
    open_[y + 1, x + 1] = 0 if blocked else 1
    rb = PAD + x
    cb = PAD + y
    rw = int(row_bits[y + 1, rb >> 6])
    cw = int(col_bits[x + 1, cb >> 6])
    if blocked:
        rw |= 1 << (rb & 63)
        cw |= 1 << (cb & 63)
    else:
        rw &= ~(1 << (rb & 63)) & MASK
        cw &= ~(1 << (cb & 63)) & MASK
    row_bits[y + 1, rb >> 6] = rw
    col_bits[x + 1, cb >> 6] = cw


def scan_limited(open_, row_bits, col_bits, x, y, d, tx, ty, limit):
    """Scan at most ``limit`` cells by blocking cell ``limit + 1`` for the duration.

    Returns (kind, steps, limit_hit).
    """
    bx, by = x + DX[d] * (limit + 1), y + DY[d] * (limit + 1)
    # past the border the scan stops on padding anyway
    h, w = open_.shape
    was_open = 0 <= bx < w - 2 and 0 <= by < h - 2 and bool(open_[by + 1, bx + 1])
    if was_open:
        _flip(open_, row_bits, col_bits, bx, by, True)
    try:
        kind, steps = scan(row_bits, col_bits, x, y, d, tx, ty)
    finally:
        if was_open:
            _flip(open_, row_bits, col_bits, bx, by, False)
    return kind, steps, (kind == DEAD_END and steps == limit and was_open)


# ------------------------------------------------------------------ search


class _Entry:
    __slots__ = ("fc", "fd", "gc", "gd", "idx")

    def __init__(self, fc, fd, gc, gd, idx):
        self.fc = fc
        self.fd = fd
        self.gc = gc
        self.gd = gd
        self.idx = idx

    def __lt__(self, other):
        s = sign(self.fc - other.fc, self.fd - other.fd)
        if s:
            return s < 0
        s = sign(self.gc - other.gc, self.gd - other.gd)
        if s:
            return s > 0
        return self.idx < other.idx


class _Constraint:
    __slots__ = ("step", "vx", "vy", "gvc", "gvd", "dist", "limit")

    def __init__(self, step, vx, vy, gvc, gvd, dist, limit):
        self.step = step
        self.vx = vx
        self.vy = vy
        self.gvc = gvc
        self.gvd = gvd
        self.dist = dist
        self.limit = limit


class Engine:
    """Per-map search state.  Owns the map's arrays for the duration of a query."""

    def __init__(self, open_, row_bits, col_bits, width, height, succ_table, corner_table):
        self.open = open_
        self.row_bits = row_bits
        self.col_bits = col_bits
        self.W = width
        self.H = height
        n = width * height
        self.succ = [list(map(int, row)) for row in succ_table]
        self.corner = list(map(int, corner_table))
        self.gc = [0] * n
        self.gd = [0] * n
        self.stamp = [0] * n
        self.kind = [0] * n
        self.parent = [-1] * n
        self.pgc = [0] * n
        self.pgd = [0] * n
        self.arrive = [0] * n
        self.closed = [0] * n
        self.version = 0

    # -------------------------------------------------------- helpers

    def _nbmask(self, x, y):
        op = self.open
        m = 0
        for k in range(8):
            if op[y + 1 + DY[k], x + 1 + DX[k]]:
                m |= 1 << k
        return m

    def _can_step(self, x, y, d):
        op = self.open
        nx, ny = x + DX[d], y + DY[d]
        if not op[ny + 1, nx + 1]:
            return False
        if d & 1:
            return bool(op[y + 1, nx + 1] and op[ny + 1, x + 1])
        return True

    def _push(self, idx, gc, gd):
        x, y = idx % self.W, idx // self.W
        dx, dy = abs(x - self.tx), abs(y - self.ty)
        hc, hd = abs(dx - dy), min(dx, dy)
        heappush(self.heap, _Entry(gc + hc, gd + hd, gc, gd, idx))
        self.insertions += 1

    def _stored(self, idx):
        return self.stamp[idx] == self.version

    def _generate(self, idx, gc, gd, parent, pgc, pgd, arrival):
        if self.stamp[idx] == self.version:
            s = sign(gc - self.gc[idx], gd - self.gd[idx])
            if s > 0:
                return False
            # a label only prunes when strictly better: its diagonal may have been
            # cut short by a constraint that itself relied on a tie
            if s == 0 and self.kind[idx] != _LABEL:
                if (self.flags & INTERSECTION_PRUNING and self.kind[idx] == _GENERATED
                        and self.closed[idx] != self.version):
                    self.arrive[idx] |= 1 << arrival
                return False
        self.stamp[idx] = self.version
        self.gc[idx] = gc
        self.gd[idx] = gd
        self.kind[idx] = _GENERATED
        self.parent[idx] = parent
        self.pgc[idx] = pgc
        self.pgd[idx] = pgd
        self.arrive[idx] = 1 << arrival
        self._push(idx, gc, gd)
        return True

    def _label(self, idx, gc, gd):
        if self.stamp[idx] == self.version and sign(gc - self.gc[idx], gd - self.gd[idx]) >= 0:
            return
        self.stamp[idx] = self.version
        self.gc[idx] = gc
        self.gd[idx] = gd
        self.kind[idx] = _LABEL
        self.labels += 1

    def _scan(self, x, y, d):
        kind, steps = scan(self.row_bits, self.col_bits, x, y, d, self.tx, self.ty)
        self.scan_steps += steps
        return kind, steps

    def _scan_limited(self, x, y, d, limit):
        kind, steps, hit = scan_limited(self.open, self.row_bits, self.col_bits,
                                        x, y, d, self.tx, self.ty, limit)
        self.scan_steps += steps
        return kind, steps, hit

    # -------------------------------------------------------- queries

    def search(self, algo, sx, sy, tx, ty, flags=0, record=False):
        """Run one query.  Returns (found, gc, gd, jump_point_indices, stats, log)."""
        self.version += 1
        ver = self.version
        W = self.W
        self.tx, self.ty = tx, ty
        self.flags = flags
        self.heap = []
        self.expansions = self.insertions = self.scan_steps = 0
        self.pruned = self.labels = 0
        log = [] if record else None
        s, t = sy * W + sx, ty * W + tx
        self.stamp[s] = ver
        self.gc[s] = self.gd[s] = 0
        self.kind[s] = _GENERATED
        self.parent[s] = -1
        self.pgc[s] = self.pgd[s] = 0
        self.arrive[s] = START_BIT
        self._push(s, 0, 0)
        found = False
        heap = self.heap
        while heap:
            e = heappop(heap)
            idx = e.idx
            if (self.closed[idx] == ver or self.kind[idx] != _GENERATED
                    or e.gc != self.gc[idx] or e.gd != self.gd[idx]):
                continue
            self.closed[idx] = ver
            self.expansions += 1
            if record:
                log.append((idx, e.gc, e.gd, self.parent[idx], self.pgc[idx], self.pgd[idx]))
            if idx == t:
                found = True
                break
            if algo == ALGO_ASTAR:
                self._expand_astar(idx, e.gc, e.gd)
            else:
                self._expand_jps(idx, e.gc, e.gd, algo == ALGO_CJPS)
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

    def _expand_astar(self, idx, gc, gd):
        W = self.W
        x, y = idx % W, idx // W
        for d in range(8):
            if self._can_step(x, y, d):
                n = (y + DY[d]) * W + x + DX[d]
                if d & 1:
                    self._generate(n, gc, gd + 1, idx, gc, gd, d)
                else:
                    self._generate(n, gc + 1, gd, idx, gc, gd, d)

    def _expand_jps(self, idx, gc, gd, constrained):
        W = self.W
        x, y = idx % W, idx // W
        nb = self._nbmask(x, y)
        arrive = self.arrive[idx]
        succ = 0xFF
        for k in range(9):
            if arrive & (1 << k):
                succ &= self.succ[k][nb]
        found = [None] * 8
        for d in (0, 2, 4, 6):
            if succ & (1 << d):
                kind, steps = self._scan(x, y, d)
                found[d] = (kind, steps)
                self._on_scan(x, y, d, kind, steps, gc, gd, idx, gc, gd)
        for d in (1, 3, 5, 7):
            if succ & (1 << d):
                self._diagonal(idx, x, y, gc, gd, d, found, constrained)

    def _on_scan(self, ox, oy, d, kind, steps, ogc, ogd, parent, pgc, pgd):
        if kind == DEAD_END:
            return
        nx, ny = ox + DX[d] * steps, oy + DY[d] * steps
        self._generate(ny * self.W + nx, ogc + steps, ogd, parent, pgc, pgd, d)
        if kind == JUMP_POINT and self.flags & BACKWARDS_SCANNING:
            self._scan_back(nx, ny, d, steps, ogc, ogd)

    def _scan_back(self, nx, ny, d, steps, ogc, ogd):
        """Label up to two corner points between a found jump point and the scan origin."""
        back = (d + 4) & 7
        # dist: cells from (x, y) back to the origin; only cells strictly between are visited
        x, y, dist = nx, ny, steps
        for _ in range(2):
            if dist <= 1:
                return
            kind, k, _hit = self._scan_limited(x, y, back, dist - 1)
            if kind != JUMP_POINT:
                return
            x, y, dist = x + DX[back] * k, y + DY[back] * k, dist - k
            self._label(y * self.W + x, ogc + dist, ogd)

    def _make_constraint(self, x, y, gc, gd, step, d, steps):
        if steps < 1:
            return None
        vx, vy = x + DX[d] * steps, y + DY[d] * steps
        v = vy * self.W + vx
        # only nodes that were put on the open list vouch for the region behind
        # them; a label is a bound on g, nobody will expand from it
        if self.stamp[v] != self.version or self.kind[v] != _GENERATED:
            return None
        gvc, gvd = self.gc[v], self.gd[v]
        limit = compute_limit(gc, gd, gvc, gvd, steps)
        if limit == 0:
            return None
        return _Constraint(step, vx, vy, gvc, gvd, steps, limit)

    def _gbar(self, px, py, qx, qy, con):
        """Upper bound on g at p: its stored g, or a detour from v through p' = q."""
        dx, dy = abs(qx - con.vx), abs(qy - con.vy)
        ec, ed = con.gvc + abs(dx - dy) + 1, con.gvd + min(dx, dy)
        p = py * self.W + px
        if (self.stamp[p] == self.version and self.kind[p] == _GENERATED
                and sign(self.gc[p] - ec, self.gd[p] - ed) < 0):
            return self.gc[p], self.gd[p]
        return ec, ed

    def _diagonal(self, parent, ax, ay, agc, agd, dd, found, constrained):
        W = self.W
        comps = ((dd - 1) & 7, (dd + 1) & 7)
        cons = [None, None]
        if constrained:
            for k in (0, 1):
                r = found[comps[k]]
                if r is not None and r[0] == JUMP_POINT:
                    cons[k] = self._make_constraint(ax, ay, agc, agd, 0, comps[k], r[1])
        caching = self.flags & DIAGONAL_CACHING
        x, y, gc, gd, i = ax, ay, agc, agd, 0
        while self._can_step(x, y, dd):
            x += DX[dd]
            y += DY[dd]
            gd += 1
            i += 1
            self.scan_steps += 1
            if x == self.tx and y == self.ty:
                self._generate(y * W + x, gc, gd, parent, agc, agd, dd)
                return
            if caching and self.corner[self._nbmask(x, y)]:
                self._label(y * W + x, gc, gd)
            for k in (0, 1):
                d = comps[k]
                other = comps[1 - k]
                con = cons[k]
                # at step L itself the route through a_i is strictly cheaper at the
                # blockage than the one through v, so the limit only holds before it
                if con is not None and i - con.step >= con.limit:
                    con = cons[k] = None
                if con is None:
                    kind, steps = self._scan(x, y, d)
                    self._on_scan(x, y, d, kind, steps, gc, gd, parent, agc, agd)
                    if constrained and kind == JUMP_POINT:
                        cons[k] = self._make_constraint(x, y, gc, gd, i, d, steps)
                    continue
                limit = con.dist - (i - con.step)
                kind, steps, hit = self._scan_limited(x, y, d, limit)
                px, py = x + DX[d] * steps, y + DY[d] * steps
                if hit:
                    qx, qy = px - DX[other], py - DY[other]
                    bc, bd = self._gbar(px, py, qx, qy, con)
                    if sign(bc + steps - gc, bd - gd) < 0:
                        # this diagonal cell is better reached through v: stop here
                        return
                    continue
                if kind == TARGET:
                    self._on_scan(x, y, d, kind, steps, gc, gd, parent, agc, agd)
                    cons[k] = None
                    continue
                qx, qy = px - DX[other], py - DY[other]
                bc, bd = self._gbar(px, py, qx, qy, con)
                if kind == JUMP_POINT:
                    if sign(bc - gc - steps, bd - gd) < 0:
                        self.pruned += 1
                    else:
                        self._on_scan(x, y, d, kind, steps, gc, gd, parent, agc, agd)
                limit2 = compute_limit(gc, gd, bc, bd, steps) if steps >= 1 else 0
                cons[k] = _Constraint(i, px, py, bc, bd, steps, limit2) if limit2 > 0 else None

    # -------------------------------------------------------- oracle

    def dijkstra(self, sx, sy):
        """Exact distances from (sx, sy); returns flat lists (cardinals, diagonals), -1 unreachable."""
        W, H = self.W, self.H
        n = W * H
        dc = [-1] * n
        dd = [-1] * n
        done = [False] * n
        s = sy * W + sx
        dc[s] = dd[s] = 0
        heap = [_Entry(0, 0, 0, 0, s)]
        while heap:
            e = heappop(heap)
            u = e.idx
            if done[u] or e.fc != dc[u] or e.fd != dd[u]:
                continue
            done[u] = True
            x, y = u % W, u // W
            for d in range(8):
                if not self._can_step(x, y, d):
                    continue
                v = (y + DY[d]) * W + x + DX[d]
                if done[v]:
                    continue
                nc, nd = (e.fc, e.fd + 1) if d & 1 else (e.fc + 1, e.fd)
                if dc[v] < 0 or sign(nc - dc[v], nd - dd[v]) < 0:
                    dc[v], dd[v] = nc, nd
                    heappush(heap, _Entry(nc, nd, nc, nd, v))
        return dc, dd
