"""Compiled inner loop of the switched flow integrator."""

from numba import njit

DONE = 0
NEED_HOLDS = 1
BLOWUP = 2

# populations below this are set to zero; subnormal arithmetic is very slow
FLUSH = 1e-300

# state layout
T, X, Y, GX, GY, SEG_END, MODE = range(7)


@njit(cache=True, nogil=True)
def _rhs(p, x, y):
    a, b, c, d, al, be = p[0], p[1], p[2], p[3], p[4], p[5]
    gx = al * (1.0 - a * x - b * y)
    gy = be * (1.0 - c * x - d * y)
    return gx * x, gy * y, gx, gy


@njit(cache=True, nogil=True)
def _record(out, marks, mark_idx, t, x, y, gx, gy, mode):
    while mark_idx < marks.shape[0] and marks[mark_idx] <= t:
        out[mark_idx, 0] = t
        out[mark_idx, 1] = x
        out[mark_idx, 2] = y
        out[mark_idx, 3] = gx
        out[mark_idx, 4] = gy
        out[mark_idx, 5] = mode
        mark_idx += 1
    return mark_idx


@njit(cache=True, nogil=True)
def advance(state, params, lam, holds, seg_ends, h_idx, dt_max, t_end,
            marks, mark_idx, out, bound):
    """Integrate until ``t_end``, blow-up, or the holding times run out.

    ``state[GX]`` and ``state[GY]`` accumulate the per-capita growth rates of
    x and y, integrated with the same RK4 stages as the populations.
    ``holds`` are unit exponentials, scaled by the rate of the mode they start.
    Returns ``(status, h_idx, mark_idx)``.
    """
    t = state[T]
    x = state[X]
    y = state[Y]
    gx = state[GX]
    gy = state[GY]
    seg_end = state[SEG_END]
    mode = int(state[MODE])
    n_holds = holds.shape[0]
    n_marks = marks.shape[0]
    status = DONE

    if t < seg_end:
        mark_idx = _record(out, marks, mark_idx, t, x, y, gx, gy, mode)

    while t < t_end:
        if t >= seg_end:
            if h_idx == n_holds:
                status = NEED_HOLDS
                break
            mode = 1 - mode
            seg_end += holds[h_idx] / lam[mode]
            seg_ends[h_idx] = seg_end
            h_idx += 1
            mark_idx = _record(out, marks, mark_idx, t, x, y, gx, gy, mode)
            continue
        target = min(t + dt_max, seg_end, t_end)
        if mark_idx < n_marks and marks[mark_idx] < target:
            target = marks[mark_idx]
        h = target - t
        p = params[mode]
        k1x, k1y, k1gx, k1gy = _rhs(p, x, y)
        k2x, k2y, k2gx, k2gy = _rhs(p, x + 0.5 * h * k1x, y + 0.5 * h * k1y)
        k3x, k3y, k3gx, k3gy = _rhs(p, x + 0.5 * h * k2x, y + 0.5 * h * k2y)
        k4x, k4y, k4gx, k4gy = _rhs(p, x + h * k3x, y + h * k3y)
        x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        gx += h / 6.0 * (k1gx + 2.0 * k2gx + 2.0 * k3gx + k4gx)
        gy += h / 6.0 * (k1gy + 2.0 * k2gy + 2.0 * k3gy + k4gy)
        t = target

        mark_idx = _record(out, marks, mark_idx, t, x, y, gx, gy, mode)

        if not (x >= 0.0 and y >= 0.0 and x <= bound and y <= bound):
            status = BLOWUP
            break
        if x < FLUSH:
            x = 0.0
        if y < FLUSH:
            y = 0.0

    state[T] = t
    state[X] = x
    state[Y] = y
    state[GX] = gx
    state[GY] = gy
    state[SEG_END] = seg_end
    state[MODE] = mode
    return status, h_idx, mark_idx
