"""Pure-Python kernels.  Same signatures and results as the compiled ``_ext``.

Everything here works on plain sequences in tour order; the public modules
handle indexing by point, validation and result objects.
"""
import math

import numpy as np

TWO_PI = 2.0 * math.pi
_FULL_TURN_SLACK = 1e-12
ARMIJO = 1e-4
# Relative size of rounding noise in a tour length.
LENGTH_NOISE = 64.0 * 2.220446049250313e-16
MIN_STEP_RATIO = 1e-30


def _m2pi(a):
    r = a % TWO_PI
    if r >= TWO_PI - _FULL_TURN_SLACK:
        return 0.0
    return r


def best_csc(dx, dy, th1, th2):
    """Shortest unit-radius CSC: ``(length, code, arc1, arc2, psi)``.

    ``code`` indexes LSL, LSR, RSL, RSR; ``-1`` when nothing exists.
    """
    s1, c1 = math.sin(th1), math.cos(th1)
    s2, c2 = math.sin(th2), math.cos(th2)
    best = (math.inf, -1, 0.0, 0.0, 0.0)

    ex, ey = dx - s2 + s1, dy + c2 - c1
    psi = math.atan2(ey, ex)
    a1, a2 = _m2pi(psi - th1), _m2pi(th2 - psi)
    length = a1 + math.hypot(ex, ey) + a2
    if length < best[0]:
        best = (length, 0, a1, a2, psi)

    ex, ey = dx + s2 + s1, dy - c2 - c1
    d2 = ex * ex + ey * ey
    if d2 >= 4.0:
        ell = math.sqrt(d2 - 4.0)
        psi = math.atan2(ey, ex) + math.atan2(2.0, ell)
        a1, a2 = _m2pi(psi - th1), _m2pi(psi - th2)
        length = a1 + ell + a2
        if length < best[0]:
            best = (length, 1, a1, a2, psi)

    ex, ey = dx - s2 - s1, dy + c2 + c1
    d2 = ex * ex + ey * ey
    if d2 >= 4.0:
        ell = math.sqrt(d2 - 4.0)
        psi = math.atan2(ey, ex) - math.atan2(2.0, ell)
        a1, a2 = _m2pi(th1 - psi), _m2pi(th2 - psi)
        length = a1 + ell + a2
        if length < best[0]:
            best = (length, 2, a1, a2, psi)

    ex, ey = dx + s2 - s1, dy - c2 + c1
    psi = math.atan2(ey, ex)
    a1, a2 = _m2pi(th1 - psi), _m2pi(psi - th2)
    length = a1 + math.hypot(ex, ey) + a2
    if length < best[0]:
        best = (length, 3, a1, a2, psi)
    return best


# Turn sign of the first and second arc for each subtype code.
_FIRST_SIGN = (1.0, 1.0, -1.0, -1.0)
_SECOND_SIGN = (1.0, -1.0, 1.0, -1.0)


def tour_eval(xs, ys, th, rho):
    """Length, torques (tour order) and largest arc of a closed tour."""
    n = len(xs)
    inv = 1.0 / rho
    tau = np.zeros(n)
    total = 0.0
    max_arc = 0.0
    for k in range(n):
        j = k + 1 if k + 1 < n else 0
        length, code, a1, a2, _ = best_csc(
            (xs[j] - xs[k]) * inv, (ys[j] - ys[k]) * inv, th[k], th[j]
        )
        total += length
        h1 = math.sin(0.5 * a1)
        h2 = math.sin(0.5 * a2)
        tau[k] += _FIRST_SIGN[code] * 2.0 * h1 * h1
        tau[j] -= _SECOND_SIGN[code] * 2.0 * h2 * h2
        if a1 > max_arc:
            max_arc = a1
        if a2 > max_arc:
            max_arc = a2
    tau *= rho
    return total * rho, tau, max_arc


def _converged(length, g2, n, eps, rel_tol):
    g = math.sqrt(g2)
    if eps > 0.0 and g <= eps:
        return True
    return rel_tol > 0.0 and 2.0 * math.sqrt(n) * math.pi * g <= rel_tol * length


def descend(xs, ys, th0, rho, alpha0, eps, rel_tol, max_iters, fixed_step):
    """Torque-following descent from ``th0``.

    Returns ``(theta, lengths, gnorms, max_arcs, converged)``; the trace
    arrays hold one entry per iterate, the starting point included.
    """
    n = len(xs)
    th = np.array(th0, dtype=float)
    length, tau, marc = tour_eval(xs, ys, th, rho)
    g2 = float(tau @ tau)
    lengths, gnorms, arcs = [length], [math.sqrt(g2)], [marc]
    converged = _converged(length, g2, n, eps, rel_tol)
    it = 0
    while not converged and it < max_iters:
        it += 1
        if fixed_step:
            th = th + alpha0 * tau
            length, tau, marc = tour_eval(xs, ys, th, rho)
            g2 = float(tau @ tau)
        else:
            a = alpha0
            noise = LENGTH_NOISE * length
            while True:
                cand = th + a * tau
                c_len, c_tau, c_marc = tour_eval(xs, ys, cand, rho)
                if c_len <= length - ARMIJO * a * g2:
                    break
                # Decrease below rounding: fall back to the slope along tau.
                if abs(c_len - length) <= noise and float(c_tau @ tau) >= -0.5 * g2:
                    break
                a *= 0.5
                if a < MIN_STEP_RATIO * alpha0:
                    cand = None
                    break
            if cand is None:
                break
            th, length, tau, marc = cand, c_len, c_tau, c_marc
            g2 = float(tau @ tau)
        lengths.append(length)
        gnorms.append(math.sqrt(g2))
        arcs.append(marc)
        converged = _converged(length, g2, n, eps, rel_tol)
    return th, np.array(lengths), np.array(gnorms), np.array(arcs), converged


def _mst(nodes, D):
    # Prim over a small node list.
    m = len(nodes)
    if m < 2:
        return 0.0
    key = [D[nodes[0]][v] for v in nodes]
    used = [False] * m
    used[0] = True
    total = 0.0
    for _ in range(m - 1):
        best, bi = math.inf, -1
        for i in range(m):
            if not used[i] and key[i] < best:
                best, bi = key[i], i
        used[bi] = True
        total += best
        row = D[nodes[bi]]
        for i in range(m):
            if not used[i]:
                w = row[nodes[i]]
                if w < key[i]:
                    key[i] = w
    return total


def etsp_search(D, lower, upper, inc_len, inc_seq):
    """Shortest canonical tour with ``lower < length <= upper``.

    Tours start at node 0 with ``seq[1] < seq[-1]``; the length is the
    left-to-right sum along that sequence.  Ties go to the lexicographically
    smaller sequence.  ``inc_len``/``inc_seq`` seed the incumbent (use
    ``inf``/``None`` for none).  Returns ``(length, seq)`` or ``None``.
    """
    D = [list(map(float, row)) for row in np.asarray(D)]
    n = len(D)
    order = [sorted((j for j in range(n) if j != i), key=lambda j: D[i][j]) for i in range(n)]
    best = [inc_len, list(inc_seq) if inc_seq is not None else None]
    seq = [0] * n
    visited = [False] * n
    visited[0] = True
    slack = 1.0 + 1e-12

    def bound():
        return min(upper, best[0]) * slack

    def rec(depth, cur, partial):
        if depth == n:
            if seq[1] > seq[n - 1]:
                return
            total = partial + D[cur][0]
            if total <= lower or total > upper:
                return
            if total < best[0] or (total == best[0] and (best[1] is None or seq < best[1])):
                best[0] = total
                best[1] = list(seq)
            return
        rest = [v for v in range(n) if not visited[v]]
        if depth >= 2 and seq[1] > max(rest):
            return
        if partial + _mst(rest + [cur, 0], D) > bound():
            return
        for v in order[cur]:
            if visited[v]:
                continue
            step = partial + D[cur][v]
            if step > bound():
                continue
            visited[v] = True
            seq[depth] = v
            rec(depth + 1, v, step)
            visited[v] = False

    rec(1, 0, 0.0)
    if best[1] is None:
        return None
    return best[0], best[1]


def hardcore_sweeps(pts, box, sep, u):
    """Systematic-scan Metropolis sweeps of a hard-core process, in place.

    ``u`` has shape ``(sweeps, n, 2)`` of uniforms in ``[0, 1)``; each entry
    proposes a uniform displacement of half the separation in each axis.
    Returns the number of accepted moves.
    """
    n = pts.shape[0]
    step = 0.5 * sep
    sep2 = sep * sep * (1.0 + 1e-12)
    accepted = 0
    for s in range(u.shape[0]):
        for i in range(n):
            nx = pts[i, 0] + (2.0 * u[s, i, 0] - 1.0) * step
            ny = pts[i, 1] + (2.0 * u[s, i, 1] - 1.0) * step
            if nx < 0.0 or nx > box or ny < 0.0 or ny > box:
                continue
            ok = True
            for j in range(n):
                if j != i:
                    dx = nx - pts[j, 0]
                    dy = ny - pts[j, 1]
                    if dx * dx + dy * dy < sep2:
                        ok = False
                        break
            if ok:
                pts[i, 0] = nx
                pts[i, 1] = ny
                accepted += 1
    return accepted
