"""Compiled inner loops for cell construction, residual-region queries and
grid coverage.  Everything here works on flat float64 arrays so it can be
compiled with numba; the public wrappers live in ``geometry`` and
``coverage``.
"""

import math

import numpy as np
from numba import njit

EPS = 1e-9
MAXV = 96

# edge labels for the four sides of the rectangular AoI (bottom, right, top, left)
AOI_BOTTOM, AOI_RIGHT, AOI_TOP, AOI_LEFT = -1, -2, -3, -4


@njit(cache=True)
def clip_halfplane(xs, ys, labs, n, ax, ay, b, lab, ox, oy, olab):
    """Clip a CCW polygon to ``ax*x + ay*y <= b``.

    ``labs[k]`` names the edge leaving vertex k.  New edges created along the
    clipping line get ``lab``.  Returns the new vertex count, or -1 when the
    output buffer would overflow.
    """
    m = 0
    cap = ox.shape[0]
    for k in range(n):
        k1 = k + 1 if k + 1 < n else 0
        sx = xs[k]
        sy = ys[k]
        ex = xs[k1]
        ey = ys[k1]
        ds = ax * sx + ay * sy - b
        de = ax * ex + ay * ey - b
        s_in = ds <= EPS
        e_in = de <= EPS
        if s_in:
            if m >= cap:
                return -1
            ox[m] = sx
            oy[m] = sy
            olab[m] = labs[k]
            m += 1
            if not e_in:
                t = ds / (ds - de)
                if m >= cap:
                    return -1
                ox[m] = sx + t * (ex - sx)
                oy[m] = sy + t * (ey - sy)
                olab[m] = lab
                m += 1
        elif e_in:
            t = ds / (ds - de)
            if m >= cap:
                return -1
            ox[m] = sx + t * (ex - sx)
            oy[m] = sy + t * (ey - sy)
            olab[m] = labs[k]
            m += 1
    # collapse edges shorter than EPS
    q = 0
    for k in range(m):
        if q > 0 and abs(ox[k] - ox[q - 1]) < EPS and abs(oy[k] - oy[q - 1]) < EPS:
            olab[q - 1] = olab[k]
            continue
        ox[q] = ox[k]
        oy[q] = oy[k]
        olab[q] = olab[k]
        q += 1
    while q > 1 and abs(ox[q - 1] - ox[0]) < EPS and abs(oy[q - 1] - oy[0]) < EPS:
        q -= 1
    if q < 3:
        return 0
    return q


@njit(cache=True)
def polygon_area(xs, ys, n):
    s = 0.0
    for k in range(n):
        k1 = k + 1 if k + 1 < n else 0
        s += xs[k] * ys[k1] - xs[k1] * ys[k]
    return 0.5 * s


@njit(cache=True)
def _max_dist(xs, ys, n, cx, cy):
    best = 0.0
    for k in range(n):
        d = (xs[k] - cx) ** 2 + (ys[k] - cy) ** 2
        if d > best:
            best = d
    return math.sqrt(best)


@njit(cache=True)
def bucket_points(px, py, x0, y0, h, nbx, nby):
    n = px.shape[0]
    nb = nbx * nby
    start = np.zeros(nb + 1, np.int64)
    home = np.empty(n, np.int64)
    for i in range(n):
        bx = min(max(int((px[i] - x0) / h), 0), nbx - 1)
        by = min(max(int((py[i] - y0) / h), 0), nby - 1)
        home[i] = by * nbx + bx
        start[home[i] + 1] += 1
    for b in range(nb):
        start[b + 1] += start[b]
    fill = start[:-1].copy()
    items = np.empty(n, np.int64)
    for i in range(n):
        items[fill[home[i]]] = i
        fill[home[i]] += 1
    return start, items, home


@njit(cache=True)
def power_cells(px, py, w, active, targets, x0, y0, x1, y1, h):
    """Power cells (clipped to the rectangle) for the generators in ``targets``.

    ``w`` holds squared radii; generators with ``active`` False are ignored.
    Candidates are visited in growing rings of a
    bucket grid; a ring is skipped once no generator that far away can cut the
    current polygon.

    Returns vertex arrays (T, MAXV), the edge-label array and vertex counts.
    A count of 0 is a null cell; -1 signals buffer overflow.
    """
    nbx = max(1, int(math.ceil((x1 - x0) / h)))
    nby = max(1, int(math.ceil((y1 - y0) / h)))
    start, items, home = bucket_points(px, py, x0, y0, h, nbx, nby)
    wmax = 0.0
    for j in range(w.shape[0]):
        if active[j] and w[j] > wmax:
            wmax = w[j]
    T = targets.shape[0]
    VX = np.zeros((T, MAXV))
    VY = np.zeros((T, MAXV))
    VL = np.zeros((T, MAXV), np.int64)
    NV = np.zeros(T, np.int64)
    ax_ = np.empty(MAXV)
    ay_ = np.empty(MAXV)
    al_ = np.empty(MAXV, np.int64)
    bx_ = np.empty(MAXV)
    by_ = np.empty(MAXV)
    bl_ = np.empty(MAXV, np.int64)
    maxring = max(nbx, nby)
    for t in range(T):
        i = targets[t]
        cx = px[i]
        cy = py[i]
        ax_[0] = x0
        ay_[0] = y0
        al_[0] = AOI_BOTTOM
        ax_[1] = x1
        ay_[1] = y0
        al_[1] = AOI_RIGHT
        ax_[2] = x1
        ay_[2] = y1
        al_[2] = AOI_TOP
        ax_[3] = x0
        ay_[3] = y1
        al_[3] = AOI_LEFT
        n = 4
        R = _max_dist(ax_, ay_, n, cx, cy)
        hb = home[i]
        hx = hb % nbx
        hy = hb // nbx
        ring = 0
        flip = False
        while n > 0:
            for gy in range(hy - ring, hy + ring + 1):
                if gy < 0 or gy >= nby:
                    continue
                step = 1 if (gy == hy - ring or gy == hy + ring) else 2 * ring
                if step == 0:
                    step = 1
                gx = hx - ring
                while gx <= hx + ring:
                    if 0 <= gx < nbx:
                        b = gy * nbx + gx
                        for q in range(start[b], start[b + 1]):
                            j = items[q]
                            if j == i or n <= 0 or not active[j]:
                                continue
                            dx = px[j] - cx
                            dy = py[j] - cy
                            d = math.sqrt(dx * dx + dy * dy)
                            if d > R:
                                rhs = R * R - w[i] + w[j]
                                if rhs <= 0.0 or (d - R) ** 2 >= rhs:
                                    continue
                            # 2 P.(cj-ci) <= |cj|^2 - |ci|^2 + wi - wj
                            hx_ = 2.0 * dx
                            hy_ = 2.0 * dy
                            hb_ = dx * (px[j] + cx) + dy * (py[j] + cy) + w[i] - w[j]
                            nrm = math.sqrt(hx_ * hx_ + hy_ * hy_)
                            if flip:
                                n = clip_halfplane(bx_, by_, bl_, n, hx_ / nrm, hy_ / nrm,
                                                   hb_ / nrm, j, ax_, ay_, al_)
                            else:
                                n = clip_halfplane(ax_, ay_, al_, n, hx_ / nrm, hy_ / nrm,
                                                   hb_ / nrm, j, bx_, by_, bl_)
                            flip = not flip
                            if n < 0:
                                NV[t] = -1
                                break
                            if n > 0:
                                if flip:
                                    R = _max_dist(bx_, by_, n, cx, cy)
                                else:
                                    R = _max_dist(ax_, ay_, n, cx, cy)
                    gx += step
            if n <= 0:
                break
            bound = R + math.sqrt(max(0.0, R * R - w[i] + wmax))
            if ring * h >= bound or ring > maxring:
                break
            ring += 1
        if n < 0:
            continue
        if n > 0:
            if flip:
                area = polygon_area(bx_, by_, n)
            else:
                area = polygon_area(ax_, ay_, n)
            if area < 1e-12:
                n = 0
        NV[t] = n
        for k in range(n):
            if flip:
                VX[t, k] = bx_[k]
                VY[t, k] = by_[k]
                VL[t, k] = bl_[k]
            else:
                VX[t, k] = ax_[k]
                VY[t, k] = ay_[k]
                VL[t, k] = al_[k]
    return VX, VY, VL, NV


# ---------------------------------------------------------------------------
# residual region: convex polygon, optionally intersected with a disk, minus
# a union of closed covering disks


@njit(cache=True)
def _norm_angle(a):
    tau = 2.0 * math.pi
    a = a - tau * math.floor(a / tau)
    if a >= tau:
        a -= tau
    return a


@njit(cache=True)
def _seg_circle_ts(ax, ay, bx, by, cx, cy, r, out, cnt):
    dx = bx - ax
    dy = by - ay
    fx = ax - cx
    fy = ay - cy
    A = dx * dx + dy * dy
    if A <= 0.0:
        return cnt
    B = 2.0 * (fx * dx + fy * dy)
    C = fx * fx + fy * fy - r * r
    disc = B * B - 4.0 * A * C
    if disc < 0.0:
        return cnt
    sq = math.sqrt(disc)
    for s in (-1.0, 1.0):
        t = (-B + s * sq) / (2.0 * A)
        if 0.0 < t < 1.0:
            out[cnt] = t
            cnt += 1
    return cnt


@njit(cache=True)
def _line_circle_angles(ax, ay, bx, by, cx, cy, r, out, cnt):
    dx = bx - ax
    dy = by - ay
    fx = ax - cx
    fy = ay - cy
    A = dx * dx + dy * dy
    if A <= 0.0:
        return cnt
    B = 2.0 * (fx * dx + fy * dy)
    C = fx * fx + fy * fy - r * r
    disc = B * B - 4.0 * A * C
    if disc < 0.0:
        return cnt
    sq = math.sqrt(disc)
    for s in (-1.0, 1.0):
        t = (-B + s * sq) / (2.0 * A)
        out[cnt] = _norm_angle(math.atan2(fy + t * dy, fx + t * dx))
        cnt += 1
    return cnt


@njit(cache=True)
def _circle_circle_angles(c1x, c1y, r1, c2x, c2y, r2, out, cnt):
    dx = c2x - c1x
    dy = c2y - c1y
    d = math.sqrt(dx * dx + dy * dy)
    if d <= 0.0 or d > r1 + r2 or d < abs(r1 - r2):
        return cnt
    a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d)
    h2 = r1 * r1 - a * a
    h = math.sqrt(h2) if h2 > 0.0 else 0.0
    base = math.atan2(dy, dx)
    half = math.atan2(h, a)
    out[cnt] = _norm_angle(base + half)
    out[cnt + 1] = _norm_angle(base - half)
    return cnt + 2


@njit(cache=True)
def _poly_margin(xs, ys, n, x, y):
    """Smallest signed distance from (x, y) to the edges (positive inside)."""
    best = np.inf
    for k in range(n):
        k1 = k + 1 if k + 1 < n else 0
        ex = xs[k1] - xs[k]
        ey = ys[k1] - ys[k]
        L = math.sqrt(ex * ex + ey * ey)
        if L <= 0.0:
            continue
        s = (ex * (y - ys[k]) - ey * (x - xs[k])) / L
        if s < best:
            best = s
    return best


@njit(cache=True)
def _covered(cx, cy, cr, m, x, y, skip):
    for k in range(m):
        if k == skip:
            continue
        dx = x - cx[k]
        dy = y - cy[k]
        rr = cr[k] + EPS
        if dx * dx + dy * dy <= rr * rr:
            return True
    return False


@njit(cache=True)
def _angle_in_arc(phi, t0, t1):
    # arc runs counter-clockwise from t0 to t1 (t1 may exceed 2pi)
    p = phi
    while p < t0:
        p += 2.0 * math.pi
    return p <= t1


@njit(cache=True)
def _arc_extrema(ccx, ccy, r, t0, t1, gx, gy, res):
    """Update res = [far_d, far_x, far_y, near_d, near_x, near_y] with the
    extreme distances from (gx, gy) over the arc [t0, t1]."""
    for t in (t0, t1):
        x = ccx + r * math.cos(t)
        y = ccy + r * math.sin(t)
        d = math.sqrt((x - gx) ** 2 + (y - gy) ** 2)
        if d > res[0]:
            res[0] = d
            res[1] = x
            res[2] = y
        if d < res[3]:
            res[3] = d
            res[4] = x
            res[5] = y
    vx = ccx - gx
    vy = ccy - gy
    L = math.sqrt(vx * vx + vy * vy)
    if L <= 1e-15:
        return
    phi_far = _norm_angle(math.atan2(vy, vx))
    phi_near = _norm_angle(phi_far + math.pi)
    if _angle_in_arc(phi_far, t0, t1):
        d = L + r
        if d > res[0]:
            res[0] = d
            res[1] = ccx + r * vx / L
            res[2] = ccy + r * vy / L
    if _angle_in_arc(phi_near, t0, t1):
        d = abs(L - r)
        if d < res[3]:
            res[3] = d
            res[4] = ccx - r * vx / L
            res[5] = ccy - r * vy / L


@njit(cache=True)
def residual_extrema(xs, ys, n, has_disk, dx0, dy0, dr, cx, cy, cr, gx, gy, early):
    """Extreme distances from (gx, gy) over the residual region.

    The region is the convex polygon (xs, ys, n), intersected with the disk
    (dx0, dy0, dr) when ``has_disk``, minus the closed disks (cx, cy, cr).
    Its boundary is split into pieces at every crossing; a piece counts when
    its midpoint lies on the region boundary and outside every covering disk.
    The farthest point of a bounded region is always on its boundary; the
    closest is either on the boundary or the generator itself.

    Returns (nonempty, far_d, far_x, far_y, near_d, near_x, near_y).  With
    ``early`` the scan stops at the first uncovered piece (coverage test).
    """
    m = cx.shape[0]
    res = np.empty(6)
    res[0] = -1.0
    res[1] = np.nan
    res[2] = np.nan
    res[3] = np.inf
    res[4] = np.nan
    res[5] = np.nan
    found = False
    if has_disk and dr <= 0.0:
        return False, -1.0, np.nan, np.nan, np.inf, np.nan, np.nan
    buf = np.empty(2 * (n + m + 1) + 4)

    # polygon edges
    for k in range(n):
        k1 = k + 1 if k + 1 < n else 0
        ax = xs[k]
        ay = ys[k]
        bx = xs[k1]
        by = ys[k1]
        L = math.sqrt((bx - ax) ** 2 + (by - ay) ** 2)
        if L <= EPS:
            continue
        cnt = 0
        buf[cnt] = 0.0
        cnt += 1
        buf[cnt] = 1.0
        cnt += 1
        if has_disk:
            cnt = _seg_circle_ts(ax, ay, bx, by, dx0, dy0, dr, buf, cnt)
        for j in range(m):
            cnt = _seg_circle_ts(ax, ay, bx, by, cx[j], cy[j], cr[j], buf, cnt)
        ts = np.sort(buf[:cnt])
        for q in range(cnt - 1):
            t0 = ts[q]
            t1 = ts[q + 1]
            if (t1 - t0) * L <= EPS:
                continue
            tm = 0.5 * (t0 + t1)
            mx = ax + tm * (bx - ax)
            my = ay + tm * (by - ay)
            if has_disk:
                if (mx - dx0) ** 2 + (my - dy0) ** 2 > (dr + EPS) ** 2:
                    continue
            if _covered(cx, cy, cr, m, mx, my, -1):
                continue
            found = True
            if early:
                return True, -1.0, np.nan, np.nan, np.inf, np.nan, np.nan
            for t in (t0, t1):
                x = ax + t * (bx - ax)
                y = ay + t * (by - ay)
                d = math.sqrt((x - gx) ** 2 + (y - gy) ** 2)
                if d > res[0]:
                    res[0] = d
                    res[1] = x
                    res[2] = y
            tp = ((gx - ax) * (bx - ax) + (gy - ay) * (by - ay)) / (L * L)
            tp = min(max(tp, t0), t1)
            x = ax + tp * (bx - ax)
            y = ay + tp * (by - ay)
            d = math.sqrt((x - gx) ** 2 + (y - gy) ** 2)
            if d < res[3]:
                res[3] = d
                res[4] = x
                res[5] = y

    # arcs of the region disk and of every covering disk
    for arc in range(-1 if has_disk else 0, m):
        if arc < 0:
            ccx = dx0
            ccy = dy0
            r = dr
        else:
            ccx = cx[arc]
            ccy = cy[arc]
            r = cr[arc]
        if r <= EPS:
            continue
        cnt = 0
        for k in range(n):
            k1 = k + 1 if k + 1 < n else 0
            cnt = _line_circle_angles(xs[k], ys[k], xs[k1], ys[k1], ccx, ccy, r, buf, cnt)
        if arc >= 0 and has_disk:
            cnt = _circle_circle_angles(ccx, ccy, r, dx0, dy0, dr, buf, cnt)
        for j in range(m):
            if j == arc:
                continue
            cnt = _circle_circle_angles(ccx, ccy, r, cx[j], cy[j], cr[j], buf, cnt)
        if cnt == 0:
            buf[0] = 0.0
            cnt = 1
        ang = np.sort(buf[:cnt])
        for q in range(cnt):
            t0 = ang[q]
            t1 = ang[q + 1] if q + 1 < cnt else ang[0] + 2.0 * math.pi
            if (t1 - t0) * r <= EPS:
                continue
            tm = 0.5 * (t0 + t1)
            mx = ccx + r * math.cos(tm)
            my = ccy + r * math.sin(tm)
            if arc < 0:
                if _poly_margin(xs, ys, n, mx, my) < -EPS:
                    continue
            else:
                if _poly_margin(xs, ys, n, mx, my) <= EPS:
                    continue
                if has_disk and (mx - dx0) ** 2 + (my - dy0) ** 2 >= (dr - EPS) ** 2:
                    continue
            if _covered(cx, cy, cr, m, mx, my, arc):
                continue
            found = True
            if early:
                return True, -1.0, np.nan, np.nan, np.inf, np.nan, np.nan
            _arc_extrema(ccx, ccy, r, t0, t1, gx, gy, res)

    if found:
        inside = _poly_margin(xs, ys, n, gx, gy) > EPS
        if inside and has_disk:
            inside = (gx - dx0) ** 2 + (gy - dy0) ** 2 < (dr - EPS) ** 2
        if inside and not _covered(cx, cy, cr, m, gx, gy, -1):
            res[3] = 0.0
            res[4] = gx
            res[5] = gy
    return found, res[0], res[1], res[2], res[3], res[4], res[5]


# ---------------------------------------------------------------------------
# grid coverage


@njit(cache=True)
def grid_mask(cx, cy, cr, x0, y0, nx, ny, pitch):
    """Cell-centred sample mask: True where a sample lies in some closed disk."""
    mask = np.zeros((ny, nx), np.bool_)
    for k in range(cx.shape[0]):
        r = cr[k]
        if r <= 0.0:
            continue
        j0 = max(0, int(math.ceil((cy[k] - r - y0) / pitch - 0.5)))
        j1 = min(ny - 1, int(math.floor((cy[k] + r - y0) / pitch - 0.5)))
        for j in range(j0, j1 + 1):
            yj = y0 + (j + 0.5) * pitch
            h2 = r * r - (yj - cy[k]) ** 2
            if h2 < 0.0:
                continue
            hw = math.sqrt(h2)
            i0 = max(0, int(math.ceil((cx[k] - hw - x0) / pitch - 0.5)))
            i1 = min(nx - 1, int(math.floor((cx[k] + hw - x0) / pitch - 0.5)))
            for i in range(i0, i1 + 1):
                mask[j, i] = True
    return mask


# ---------------------------------------------------------------------------
# protocol batch steps (indices are local to the awake set)

KIND_NOTHING, KIND_PARTIAL, KIND_INTERIOR, KIND_STRICT, KIND_LOOSE = 0, 1, 2, 3, 4
STEP_KEEP, STEP_SHRINK, STEP_SLEEP, STEP_WAIT = 0, 1, 2, 3


@njit(cache=True)
def dist_to_polygon(xs, ys, n, x, y):
    if _poly_margin(xs, ys, n, x, y) >= 0.0:
        return 0.0
    best = np.inf
    for k in range(n):
        k1 = k + 1 if k + 1 < n else 0
        ax = xs[k]
        ay = ys[k]
        ex = xs[k1] - ax
        ey = ys[k1] - ay
        L2 = ex * ex + ey * ey
        t = 0.0
        if L2 > 0.0:
            t = min(max(((x - ax) * ex + (y - ay) * ey) / L2, 0.0), 1.0)
        d = math.sqrt((ax + t * ex - x) ** 2 + (ay + t * ey - y) ** 2)
        if d < best:
            best = d
    return best


@njit(cache=True)
def _sense(a, b, c, r):
    if r <= 0.0:
        return 0.0
    return a * r ** c + b


@njit(cache=True)
def assess_cells(targets, vx, vy, nv, ptr, idx, px, py, r, decided, rmin, tol, a, b, c):
    """Classify each target against the residual of its cell.

    Returns kind codes, target distances, energy gains (per unit time) and a
    CSR list of the undecided neighbors each loose sensor relies on.
    """
    T = targets.shape[0]
    kind = np.empty(T, np.int64)
    dbar = np.zeros(T)
    gain = np.zeros(T)
    sup_ptr = np.zeros(T + 1, np.int64)
    sup = np.empty(idx.shape[0] + 1, np.int64)
    ns = 0
    maxdeg = 1
    for i in range(ptr.shape[0] - 1):
        if ptr[i + 1] - ptr[i] > maxdeg:
            maxdeg = ptr[i + 1] - ptr[i]
    cx = np.empty(maxdeg)
    cy = np.empty(maxdeg)
    cr = np.empty(maxdeg)
    for t in range(T):
        i = targets[t]
        ri = r[i]
        full = _sense(a, b, c, ri)
        sup_ptr[t] = ns
        n = nv[i]
        if n == 0:
            kind[t] = KIND_NOTHING
            gain[t] = full
            sup_ptr[t + 1] = ns
            continue
        xs = vx[i, :n]
        ys = vy[i, :n]
        m = 0
        for q in range(ptr[i], ptr[i + 1]):
            j = idx[q]
            if decided[j]:
                cx[m] = px[j]
                cy[m] = py[j]
                cr[m] = r[j]
                m += 1
        found, fd, _, _, nd, _, _ = residual_extrema(xs, ys, n, False, 0.0, 0.0, 0.0,
                                                     cx[:m], cy[:m], cr[:m], px[i], py[i], False)
        if not found or nd >= ri - tol:
            kind[t] = KIND_NOTHING
            gain[t] = full
        elif fd > ri + tol:
            kind[t] = KIND_PARTIAL
        elif fd >= ri - tol:
            m = 0
            for q in range(ptr[i], ptr[i + 1]):
                j = idx[q]
                cx[m] = px[j]
                cy[m] = py[j]
                cr[m] = r[j]
                m += 1
            found2, fd2, _, _, _, _, _ = residual_extrema(xs, ys, n, False, 0.0, 0.0, 0.0,
                                                          cx[:m], cy[:m], cr[:m], px[i], py[i],
                                                          False)
            target = 0.0
            if found2:
                target = max(fd2, rmin[i])
            if found2 and target >= ri - tol:
                kind[t] = KIND_STRICT
            else:
                kind[t] = KIND_LOOSE
                dbar[t] = target
                gain[t] = full - _sense(a, b, c, target)
                for q in range(ptr[i], ptr[i + 1]):
                    j = idx[q]
                    if not decided[j] and dist_to_polygon(xs, ys, n, px[j], py[j]) <= r[j] + EPS:
                        sup[ns] = j
                        ns += 1
        else:
            kind[t] = KIND_INTERIOR
            dbar[t] = fd
            gain[t] = full - _sense(a, b, c, max(fd, rmin[i]))
        sup_ptr[t + 1] = ns
    return kind, dbar, gain, sup_ptr, sup[:ns]


@njit(cache=True)
def alpha_batch(targets, ptr, idx, pending, value, higher_first, alpha_min):
    """Normalised priority of each target over its pending neighborhood
    (the target itself included)."""
    T = targets.shape[0]
    out = np.empty(T)
    for t in range(T):
        i = targets[t]
        lo = value[i]
        hi = value[i]
        for q in range(ptr[i], ptr[i + 1]):
            j = idx[q]
            if pending[j]:
                v = value[j]
                if v < lo:
                    lo = v
                if v > hi:
                    hi = v
        if hi == lo:
            out[t] = 1.0
            continue
        if higher_first:
            al = (value[i] - lo) / (hi - lo)
        else:
            al = (hi - value[i]) / (hi - lo)
        out[t] = min(1.0, max(al, alpha_min))
    return out


@njit(cache=True)
def radius_update(kind, r, dbar, alpha, rmin, eps):
    """One radius step; returns (step code, new radius, decided)."""
    if kind == KIND_PARTIAL or kind == KIND_STRICT:
        return STEP_KEEP, r, True
    if kind == KIND_LOOSE:
        return STEP_WAIT, r, False
    if r <= 0.0:
        return STEP_SLEEP, 0.0, True
    if kind == KIND_NOTHING:
        new = r - alpha * r
        if new < max(rmin, eps):
            return STEP_SLEEP, 0.0, True
        return STEP_SHRINK, new, False
    target = max(dbar, rmin)
    new = r - alpha * (r - target)
    if r - new < eps:
        return STEP_KEEP, target, True
    if new - target < eps:
        new = target
    return STEP_SHRINK, new, False


@njit(cache=True)
def radius_update_batch(kind, r, dbar, alpha, rmin, eps):
    T = kind.shape[0]
    code = np.empty(T, np.int64)
    new = np.empty(T)
    dec = np.empty(T, np.bool_)
    for t in range(T):
        code[t], new[t], dec[t] = radius_update(kind[t], r[t], dbar[t], alpha[t], rmin[t], eps)
    return code, new, dec


@njit(cache=True)
def _exposed_arc(ax, ay, ra, a, x, y, r, cx, cy, cr, x0, y0, x1, y1):
    """Whether circle ``a`` (-1 for the query circle itself) has a stretch
    inside the query region that no other disk covers."""
    m = cx.shape[0]
    tau = 2.0 * math.pi
    cap = 2 * m + 12
    ang = np.empty(cap)
    dlt = np.empty(cap, np.int64)
    ne = 0
    wraps = 0
    for j in range(m):
        if j == a:
            continue
        dx = cx[j] - ax
        dy = cy[j] - ay
        d = math.sqrt(dx * dx + dy * dy)
        rj = cr[j] + EPS
        if d + ra <= rj:
            return False  # circle a lies inside disk j
        if d >= ra + rj or d + rj <= ra:
            continue
        c = (d * d + ra * ra - rj * rj) / (2.0 * d * ra)
        c = min(1.0, max(-1.0, c))
        phi = math.acos(c)
        s = _norm_angle(math.atan2(dy, dx) - phi)
        e = s + 2.0 * phi
        if e >= tau:
            e -= tau
            wraps += 1
        ang[ne] = s
        dlt[ne] = 1
        ang[ne + 1] = e
        dlt[ne + 1] = -1
        ne += 2
    # places where the arc enters or leaves the query region
    if a >= 0:
        dx = x - ax
        dy = y - ay
        d = math.sqrt(dx * dx + dy * dy)
        if d < ra + r and d > abs(ra - r):
            c = (d * d + ra * ra - r * r) / (2.0 * d * ra)
            phi = math.acos(min(1.0, max(-1.0, c)))
            th = math.atan2(dy, dx)
            ang[ne] = _norm_angle(th - phi)
            ang[ne + 1] = _norm_angle(th + phi)
            dlt[ne] = 0
            dlt[ne + 1] = 0
            ne += 2
    for side in range(4):
        if side < 2:
            c = ((x0 if side == 0 else x1) - ax) / ra
        else:
            c = ((y0 if side == 2 else y1) - ay) / ra
        if abs(c) < 1.0:
            if side < 2:
                t = math.acos(c)
                ang[ne] = _norm_angle(t)
                ang[ne + 1] = _norm_angle(-t)
            else:
                t = math.asin(c)
                ang[ne] = _norm_angle(t)
                ang[ne + 1] = _norm_angle(math.pi - t)
            dlt[ne] = 0
            dlt[ne + 1] = 0
            ne += 2
    order = np.argsort(ang[:ne])
    count = wraps
    prev = 0.0
    for q in range(ne + 1):
        nxt = ang[order[q]] if q < ne else tau
        if nxt - prev > 1e-12 and count <= 0:
            mid = 0.5 * (prev + nxt)
            px = ax + ra * math.cos(mid)
            py = ay + ra * math.sin(mid)
            inside = x0 + EPS < px < x1 - EPS and y0 + EPS < py < y1 - EPS
            if inside and a >= 0:
                ddx = px - x
                ddy = py - y
                inside = ddx * ddx + ddy * ddy < (r - EPS) * (r - EPS)
            if inside:
                return True
        if q < ne:
            count += dlt[order[q]]
            prev = nxt
    return False


@njit(cache=True)
def _side_exposed(x, y, r, cx, cy, cr, fixed, lo, hi, vertical):
    """Uncovered stretch on the AoI side x = fixed (vertical) or y = fixed,
    restricted to the query disk and to [lo, hi]."""
    off = fixed - (x if vertical else y)
    h2 = r * r - off * off
    if h2 <= 0.0:
        return False
    h = math.sqrt(h2)
    mid0 = y if vertical else x
    t0 = max(lo, mid0 - h)
    t1 = min(hi, mid0 + h)
    if t1 - t0 <= EPS:
        return False
    m = cx.shape[0]
    ts = np.empty(2 * m + 2)
    nt = 0
    ts[nt] = t0
    ts[nt + 1] = t1
    nt += 2
    for j in range(m):
        o = fixed - (cx[j] if vertical else cy[j])
        g2 = cr[j] * cr[j] - o * o
        if g2 > 0.0:
            g = math.sqrt(g2)
            c0 = cy[j] if vertical else cx[j]
            for t in (c0 - g, c0 + g):
                if t0 < t < t1:
                    ts[nt] = t
                    nt += 1
    ts = np.sort(ts[:nt])
    for q in range(nt - 1):
        if ts[q + 1] - ts[q] <= 1e-12:
            continue
        t = 0.5 * (ts[q] + ts[q + 1])
        px = fixed if vertical else t
        py = t if vertical else fixed
        if not _covered(cx, cy, cr, m, px, py, -1):
            return True
    return False


@njit(cache=True)
def disk_union_covers(x, y, r, cx, cy, cr, x0, y0, x1, y1):
    """True when the closed disk (x, y, r) clipped to the rectangle lies in
    the union of the closed disks (cx, cy, cr).

    The clipped disk is covered exactly when its own boundary is covered and
    no covering circle has an exposed stretch inside it.  Each circle is
    checked by sweeping the sorted angular intervals the other disks cover.
    """
    m = cx.shape[0]
    if r <= 0.0:
        return True
    if x + r <= x0 or x - r >= x1 or y + r <= y0 or y - r >= y1:
        return True  # nothing of the disk inside the rectangle
    if m == 0:
        return False
    for k in range(m):
        dx = x - cx[k]
        dy = y - cy[k]
        if math.sqrt(dx * dx + dy * dy) + r <= cr[k] + EPS:
            return True
    if _exposed_arc(x, y, r, -1, x, y, r, cx, cy, cr, x0, y0, x1, y1):
        return False
    for a in range(m):
        dx = cx[a] - x
        dy = cy[a] - y
        d = math.sqrt(dx * dx + dy * dy)
        if cr[a] <= 0.0 or d >= cr[a] + r or d + r <= cr[a]:
            continue
        if _exposed_arc(cx[a], cy[a], cr[a], a, x, y, r, cx, cy, cr, x0, y0, x1, y1):
            return False
    if x - r < x0 and _side_exposed(x, y, r, cx, cy, cr, x0, y0, y1, True):
        return False
    if x + r > x1 and _side_exposed(x, y, r, cx, cy, cr, x1, y0, y1, True):
        return False
    if y - r < y0 and _side_exposed(x, y, r, cx, cy, cr, y0, x0, x1, False):
        return False
    if y + r > y1 and _side_exposed(x, y, r, cx, cy, cr, y1, x0, x1, False):
        return False
    return True
