# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels.  Mirrors ``_pure`` function for function."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sin, cos, atan2, sqrt, hypot, fmod, fabs, INFINITY, M_PI

cnp.import_array()

cdef double TWO_PI = 2.0 * M_PI
cdef double FULL_TURN_SLACK = 1e-12
cdef double ARMIJO = 1e-4
cdef double LENGTH_NOISE = 64.0 * 2.220446049250313e-16
cdef double MIN_STEP_RATIO = 1e-30

cdef double[4] FIRST_SIGN = [1.0, 1.0, -1.0, -1.0]
cdef double[4] SECOND_SIGN = [1.0, -1.0, 1.0, -1.0]


cdef inline double m2pi(double a) nogil:
    # Python's float modulo: result carries the sign of the divisor.
    cdef double r = fmod(a, TWO_PI)
    if r < 0.0:
        r += TWO_PI
        if r == TWO_PI:
            r = 0.0
    if r >= TWO_PI - FULL_TURN_SLACK:
        return 0.0
    return r


cdef struct Csc:
    double length
    int code
    double a1
    double a2
    double psi


cdef inline Csc best_csc_c(double dx, double dy, double th1, double th2) nogil:
    cdef double s1 = sin(th1), c1 = cos(th1), s2 = sin(th2), c2 = cos(th2)
    cdef double ex, ey, d2, ell, psi, a1, a2, length
    cdef Csc best
    best.length = INFINITY
    best.code = -1
    best.a1 = 0.0
    best.a2 = 0.0
    best.psi = 0.0

    ex = dx - s2 + s1
    ey = dy + c2 - c1
    psi = atan2(ey, ex)
    a1 = m2pi(psi - th1)
    a2 = m2pi(th2 - psi)
    length = a1 + hypot(ex, ey) + a2
    if length < best.length:
        best.length = length; best.code = 0; best.a1 = a1; best.a2 = a2; best.psi = psi

    ex = dx + s2 + s1
    ey = dy - c2 - c1
    d2 = ex * ex + ey * ey
    if d2 >= 4.0:
        ell = sqrt(d2 - 4.0)
        psi = atan2(ey, ex) + atan2(2.0, ell)
        a1 = m2pi(psi - th1)
        a2 = m2pi(psi - th2)
        length = a1 + ell + a2
        if length < best.length:
            best.length = length; best.code = 1; best.a1 = a1; best.a2 = a2; best.psi = psi

    ex = dx - s2 - s1
    ey = dy + c2 + c1
    d2 = ex * ex + ey * ey
    if d2 >= 4.0:
        ell = sqrt(d2 - 4.0)
        psi = atan2(ey, ex) - atan2(2.0, ell)
        a1 = m2pi(th1 - psi)
        a2 = m2pi(th2 - psi)
        length = a1 + ell + a2
        if length < best.length:
            best.length = length; best.code = 2; best.a1 = a1; best.a2 = a2; best.psi = psi

    ex = dx + s2 - s1
    ey = dy - c2 + c1
    psi = atan2(ey, ex)
    a1 = m2pi(th1 - psi)
    a2 = m2pi(psi - th2)
    length = a1 + hypot(ex, ey) + a2
    if length < best.length:
        best.length = length; best.code = 3; best.a1 = a1; best.a2 = a2; best.psi = psi
    return best


def best_csc(double dx, double dy, double th1, double th2):
    cdef Csc b = best_csc_c(dx, dy, th1, th2)
    return (b.length, b.code, b.a1, b.a2, b.psi)


cdef double eval_c(const double[:] xs, const double[:] ys, const double[:] th,
                   double rho, double* tau, double* max_arc) nogil:
    cdef Py_ssize_t n = xs.shape[0], k, j
    cdef double inv = 1.0 / rho, total = 0.0, h1, h2, marc = 0.0
    cdef Csc b
    for k in range(n):
        tau[k] = 0.0
    for k in range(n):
        j = k + 1 if k + 1 < n else 0
        b = best_csc_c((xs[j] - xs[k]) * inv, (ys[j] - ys[k]) * inv, th[k], th[j])
        total += b.length
        h1 = sin(0.5 * b.a1)
        h2 = sin(0.5 * b.a2)
        tau[k] += FIRST_SIGN[b.code] * 2.0 * h1 * h1
        tau[j] -= SECOND_SIGN[b.code] * 2.0 * h2 * h2
        if b.a1 > marc:
            marc = b.a1
        if b.a2 > marc:
            marc = b.a2
    for k in range(n):
        tau[k] *= rho
    max_arc[0] = marc
    return total * rho


def tour_eval(xs, ys, th, double rho):
    cdef double[:] X = np.ascontiguousarray(xs, dtype=np.float64)
    cdef double[:] Y = np.ascontiguousarray(ys, dtype=np.float64)
    cdef double[:] T = np.ascontiguousarray(th, dtype=np.float64)
    out = np.empty(X.shape[0])
    cdef double[:] tau = out
    cdef double marc = 0.0, length
    length = eval_c(X, Y, T, rho, &tau[0], &marc)
    return length, out, marc


cdef inline double dot(const double* a, const double* b, Py_ssize_t n) nogil:
    cdef double s = 0.0
    cdef Py_ssize_t i
    for i in range(n):
        s += a[i] * b[i]
    return s


cdef inline bint is_converged(double length, double g2, Py_ssize_t n,
                              double eps, double rel_tol) nogil:
    cdef double g = sqrt(g2)
    if eps > 0.0 and g <= eps:
        return True
    return rel_tol > 0.0 and 2.0 * sqrt(<double>n) * M_PI * g <= rel_tol * length


def descend(xs, ys, th0, double rho, double alpha0, double eps, double rel_tol,
            int max_iters, bint fixed_step):
    cdef double[:] X = np.ascontiguousarray(xs, dtype=np.float64)
    cdef double[:] Y = np.ascontiguousarray(ys, dtype=np.float64)
    theta_arr = np.array(th0, dtype=np.float64)
    cand_arr = np.empty_like(theta_arr)
    tau_arr = np.empty_like(theta_arr)
    ctau_arr = np.empty_like(theta_arr)
    cdef double[:] th = theta_arr
    cdef double[:] cand = cand_arr
    cdef double[:] tau = tau_arr
    cdef double[:] ctau = ctau_arr
    lengths_arr = np.empty(max_iters + 1)
    gnorms_arr = np.empty(max_iters + 1)
    arcs_arr = np.empty(max_iters + 1)
    cdef double[:] lengths = lengths_arr
    cdef double[:] gnorms = gnorms_arr
    cdef double[:] arcs = arcs_arr
    cdef Py_ssize_t n = X.shape[0], i, it = 0, count = 1
    cdef double length, g2, marc, c_len, c_marc, a, noise
    cdef bint converged, accepted

    length = eval_c(X, Y, th, rho, &tau[0], &marc)
    g2 = dot(&tau[0], &tau[0], n)
    lengths[0] = length
    gnorms[0] = sqrt(g2)
    arcs[0] = marc
    converged = is_converged(length, g2, n, eps, rel_tol)
    with nogil:
        while not converged and it < max_iters:
            it += 1
            if fixed_step:
                for i in range(n):
                    th[i] += alpha0 * tau[i]
                length = eval_c(X, Y, th, rho, &tau[0], &marc)
                g2 = dot(&tau[0], &tau[0], n)
            else:
                a = alpha0
                noise = LENGTH_NOISE * length
                accepted = False
                while True:
                    for i in range(n):
                        cand[i] = th[i] + a * tau[i]
                    c_len = eval_c(X, Y, cand, rho, &ctau[0], &c_marc)
                    if c_len <= length - ARMIJO * a * g2:
                        accepted = True
                        break
                    if fabs(c_len - length) <= noise and dot(&ctau[0], &tau[0], n) >= -0.5 * g2:
                        accepted = True
                        break
                    a *= 0.5
                    if a < MIN_STEP_RATIO * alpha0:
                        break
                if not accepted:
                    break
                for i in range(n):
                    th[i] = cand[i]
                    tau[i] = ctau[i]
                length = c_len
                marc = c_marc
                g2 = dot(&tau[0], &tau[0], n)
            lengths[count] = length
            gnorms[count] = sqrt(g2)
            arcs[count] = marc
            count += 1
            converged = is_converged(length, g2, n, eps, rel_tol)
    return (theta_arr, lengths_arr[:count].copy(), gnorms_arr[:count].copy(),
            arcs_arr[:count].copy(), bool(converged))


cdef struct Search:
    int n
    double* D
    int* order
    int* seq
    int* best_seq
    signed char* visited
    int* nodes
    double* key
    signed char* used
    double lower
    double upper
    double best
    bint have_best


cdef double mst_c(Search* s, int m) nogil:
    cdef int i, bi, r
    cdef double total = 0.0, b, w
    if m < 2:
        return 0.0
    for i in range(m):
        s.key[i] = s.D[s.nodes[0] * s.n + s.nodes[i]]
        s.used[i] = 0
    s.used[0] = 1
    for r in range(m - 1):
        b = INFINITY
        bi = -1
        for i in range(m):
            if not s.used[i] and s.key[i] < b:
                b = s.key[i]
                bi = i
        s.used[bi] = 1
        total += b
        for i in range(m):
            if not s.used[i]:
                w = s.D[s.nodes[bi] * s.n + s.nodes[i]]
                if w < s.key[i]:
                    s.key[i] = w
    return total


cdef inline bint lex_less(int* a, int* b, int n) nogil:
    cdef int i
    for i in range(n):
        if a[i] != b[i]:
            return a[i] < b[i]
    return False


cdef void rec_c(Search* s, int depth, int cur, double partial) nogil:
    cdef int n = s.n, v, m, i, mx
    cdef double total, bound, step
    if depth == n:
        if s.seq[1] > s.seq[n - 1]:
            return
        total = partial + s.D[cur * n]
        if total <= s.lower or total > s.upper:
            return
        if (total < s.best or
                (total == s.best and (not s.have_best or lex_less(s.seq, s.best_seq, n)))):
            s.best = total
            s.have_best = True
            for i in range(n):
                s.best_seq[i] = s.seq[i]
        return
    m = 0
    mx = -1
    for v in range(n):
        if not s.visited[v]:
            s.nodes[m] = v
            m += 1
            if v > mx:
                mx = v
    if depth >= 2 and s.seq[1] > mx:
        return
    bound = (s.upper if s.upper < s.best else s.best) * (1.0 + 1e-12)
    s.nodes[m] = cur
    s.nodes[m + 1] = 0
    if partial + mst_c(s, m + 2) > bound:
        return
    for i in range(n - 1):
        v = s.order[cur * (n - 1) + i]
        if s.visited[v]:
            continue
        step = partial + s.D[cur * n + v]
        bound = (s.upper if s.upper < s.best else s.best) * (1.0 + 1e-12)
        if step > bound:
            continue
        s.visited[v] = 1
        s.seq[depth] = v
        rec_c(s, depth + 1, v, step)
        s.visited[v] = 0


def etsp_search(D, double lower, double upper, double inc_len, inc_seq):
    cdef double[:, ::1] Dm = np.ascontiguousarray(D, dtype=np.float64)
    cdef int n = Dm.shape[0], i, j
    order = np.empty((n, n - 1), dtype=np.intc)
    for i in range(n):
        row = [j for j in range(n) if j != i]
        row.sort(key=lambda j: Dm[i, j])
        order[i, :] = row
    cdef int[:, ::1] Om = order
    seq = np.zeros(n, dtype=np.intc)
    best_seq = np.zeros(n, dtype=np.intc)
    visited = np.zeros(n, dtype=np.int8)
    nodes = np.zeros(n + 2, dtype=np.intc)
    key = np.zeros(n + 2)
    used = np.zeros(n + 2, dtype=np.int8)
    cdef int[::1] seq_v = seq, best_v = best_seq, nodes_v = nodes
    cdef signed char[::1] vis_v = visited, used_v = used
    cdef double[::1] key_v = key
    cdef Search s
    s.n = n
    s.D = &Dm[0, 0]
    s.order = &Om[0, 0]
    s.seq = &seq_v[0]
    s.best_seq = &best_v[0]
    s.visited = &vis_v[0]
    s.nodes = &nodes_v[0]
    s.key = &key_v[0]
    s.used = &used_v[0]
    s.lower = lower
    s.upper = upper
    s.best = inc_len
    s.have_best = inc_seq is not None
    if inc_seq is not None:
        best_seq[:] = inc_seq
    vis_v[0] = 1
    with nogil:
        rec_c(&s, 1, 0, 0.0)
    if not s.have_best:
        return None
    return s.best, [int(v) for v in best_seq]


def hardcore_sweeps(double[:, ::1] pts, double box, double sep, const double[:, :, ::1] u):
    cdef Py_ssize_t n = pts.shape[0], sweeps = u.shape[0], s, i, j
    cdef double step = 0.5 * sep, sep2 = sep * sep * (1.0 + 1e-12)
    cdef double nx, ny, dx, dy
    cdef long accepted = 0
    cdef bint ok
    with nogil:
        for s in range(sweeps):
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
