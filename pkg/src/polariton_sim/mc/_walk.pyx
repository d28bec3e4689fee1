# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled walker kernel.

Sequential per-walker mirror of reference.simulate_walkers: identical
Philox stream addressing, identical branch structure and event
conventions, with intervals emitted on the fly instead of reconstructed
afterwards. See the reference module for the contract.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, exp, fabs, hypot, isfinite, log, sin, sqrt
from libc.stdint cimport uint32_t, uint64_t

cnp.import_array()

cdef double TWO_PI = 6.283185307179586
cdef double INV_2_32 = 1.0 / 4294967296.0

cdef int END_DARK = 0
cdef int END_BRIGHT = 1
cdef int END_WALL = 2


cdef inline void philox4(uint32_t step, uint32_t walker, uint32_t key0,
                         uint32_t key1, uint32_t* out) noexcept nogil:
    cdef uint32_t x0 = step, x1 = walker, x2 = 0, x3 = 0
    cdef uint32_t k0 = key0, k1 = key1
    cdef uint32_t hi0, lo0, hi1, lo1
    cdef uint64_t p0, p1
    cdef int r
    for r in range(10):
        p0 = (<uint64_t>0xD2511F53) * x0
        p1 = (<uint64_t>0xCD9E8D57) * x2
        hi0 = <uint32_t>(p0 >> 32)
        lo0 = <uint32_t>p0
        hi1 = <uint32_t>(p1 >> 32)
        lo1 = <uint32_t>p1
        x0 = hi1 ^ x1 ^ k0
        x1 = lo1
        x2 = hi0 ^ x3 ^ k1
        x3 = lo0
        k0 += <uint32_t>0x9E3779B9
        k1 += <uint32_t>0xBB67AE85
    out[0] = x0
    out[1] = x1
    out[2] = x2
    out[3] = x3


def simulate_walkers(int dim, double a, double b, double D, double t_max,
                     double dt_base, double eta, object n_walkers, object seed):
    if dim != 1 and dim != 2:
        raise ValueError("dim must be 1 or 2")
    cdef Py_ssize_t n = int(n_walkers)
    cdef uint64_t key = int(seed) & 0xFFFFFFFFFFFFFFFF
    cdef uint32_t key0 = <uint32_t>(key & 0xFFFFFFFF)
    cdef uint32_t key1 = <uint32_t>(key >> 32)

    offsets_arr = np.empty(n + 1, dtype=np.int64)
    codes_arr = np.empty(n, dtype=np.uint8)
    cdef Py_ssize_t capacity = 8 * n + 1024
    durations_arr = np.empty(capacity, dtype=np.float64)
    cdef cnp.int64_t[::1] offsets = offsets_arr
    cdef cnp.uint8_t[::1] codes = codes_arr
    cdef double[::1] dur = durations_arr

    cdef bint walled = isfinite(b)
    cdef bint edge_is_wall = walled and (b - a <= 1e-12 * (a if a > 1.0 else 1.0))
    cdef double sigma_base = sqrt(2.0 * D * dt_base)
    cdef long max_iter = <long>(t_max / dt_base) + 17

    cdef uint32_t blk[4]
    cdef Py_ssize_t w, cursor = 0
    cdef long k
    cdef double x, y, r, rn, xn, yn, th
    cdef double u0, u1, z0, z1, u_edge, u_wall, rad
    cdef double t, t_prev, dt, sigma, d_beam, d1_beam, d_near, frac
    cdef double t_cross, p_graze, w0, w1, p_wall, t_kill, t_event, gh
    cdef bint inside0, inside1, crossed, graze, killed, hit, capped
    cdef int code

    offsets[0] = 0
    for w in range(n):
        philox4(0, <uint32_t>w, key0, key1, blk)
        u0 = (blk[0] + 0.5) * INV_2_32
        if dim == 1:
            x = (2.0 * u0 - 1.0) * a
            y = 0.0
        else:
            u1 = (blk[1] + 0.5) * INV_2_32
            rad = a * sqrt(u0)
            th = TWO_PI * u1
            x = rad * cos(th)
            y = rad * sin(th)
        t = 0.0
        t_prev = 0.0
        code = -1
        k = 0
        while True:
            k += 1
            if k > max_iter:
                raise RuntimeError(
                    "walker stepping failed to terminate within the iteration bound"
                )
            philox4(<uint32_t>k, <uint32_t>w, key0, key1, blk)
            u0 = (blk[0] + 0.5) * INV_2_32
            u1 = (blk[1] + 0.5) * INV_2_32
            rad = sqrt(-2.0 * log(u0))
            z0 = rad * cos(TWO_PI * u1)
            z1 = rad * sin(TWO_PI * u1)
            u_edge = (blk[2] + 0.5) * INV_2_32
            u_wall = (blk[3] + 0.5) * INV_2_32

            r = fabs(x) if dim == 1 else hypot(x, y)
            d_beam = r - a
            if d_beam < 0.0:
                d_beam = -d_beam
            d_near = d_beam
            if walled and b - r < d_near:
                d_near = b - r
            sigma = eta * d_near
            if sigma < sigma_base:
                sigma = sigma_base
            dt = sigma * sigma / (2.0 * D)
            capped = dt >= t_max - t
            if capped:
                dt = t_max - t
            sigma = sqrt(2.0 * D * dt)

            if dim == 1:
                xn = x + sigma * z0
                rn = xn if xn >= 0.0 else -xn
            else:
                xn = x + sigma * z0
                yn = y + sigma * z1
                rn = hypot(xn, yn)

            inside0 = r < a
            inside1 = rn < a
            crossed = inside0 != inside1
            d1_beam = rn - a
            if d1_beam < 0.0:
                d1_beam = -d1_beam
            if d_beam + d1_beam > 0.0:
                frac = d_beam / (d_beam + d1_beam)
            else:
                frac = 0.5
            t_cross = t + frac * dt
            p_graze = exp(-d_beam * d1_beam / (D * dt))
            graze = (not crossed) and (u_edge < p_graze)
            if edge_is_wall:
                # the beam edge and the wall are the same boundary; the
                # wall draw below is the single authoritative decision
                graze = False

            killed = False
            t_kill = 0.0
            if walled:
                w0 = b - r
                w1 = b - rn
                hit = w1 <= 0.0
                if hit:
                    p_wall = 1.0
                else:
                    p_wall = exp(-w0 * (w1 if w1 > 0.0 else 0.0) / (D * dt))
                killed = hit or (u_wall < p_wall)
                if hit:
                    t_kill = t + (w0 / ((w0 - w1) if w0 - w1 > 1e-300 else 1e-300)) * dt
                else:
                    t_kill = t + 0.5 * dt

            if cursor + 4 > capacity:
                capacity = 2 * capacity
                durations_arr = np.concatenate(
                    [durations_arr, np.empty(capacity - durations_arr.size)]
                )
                dur = durations_arr

            if crossed and ((not killed) or t_cross < t_kill):
                dur[cursor] = t_cross - t_prev
                cursor += 1
                t_prev = t_cross
            elif graze and not killed:
                t_event = t + 0.5 * dt
                gh = dt / 12.0
                dur[cursor] = t_event - gh - t_prev
                dur[cursor + 1] = 2.0 * gh
                cursor += 2
                t_prev = t_event + gh

            x = xn
            if dim == 2:
                y = yn
            if killed:
                dur[cursor] = t_kill - t_prev
                cursor += 1
                code = END_WALL
                break
            t = t_max if capped else t + dt
            if t >= t_max:
                dur[cursor] = t_max - t_prev
                cursor += 1
                code = END_BRIGHT if inside1 else END_DARK
                break
        codes[w] = <cnp.uint8_t>code
        offsets[w + 1] = cursor

    return durations_arr[:cursor].copy(), offsets_arr, codes_arr
