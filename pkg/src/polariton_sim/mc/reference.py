"""Pure-numpy walker kernel: the fallback backend.

Simulates Brownian walkers crossing a stepwise beam (slab of half-width
a in 1d, disk of radius a in 2d) inside a domain bounded by a
coherence-destroying wall at radius b (infinite for no walls), and
records for each walker the alternating bright/dark interval durations,
starting bright (walkers begin uniformly distributed in the beam).

All walkers advance in lockstep; a walker's n-th step consumes the
Philox block (n, walker_id), the same addressing the compiled kernel
uses, so both backends consume identical uniform streams. Steps adapt to
the distance from the nearest boundary (sigma = max(sigma_base,
eta * distance)), and sub-step boundary touching is detected with the
Brownian-bridge hitting probability exp(-d0 d1 / (D dt)); a detected
graze inserts a short excursion of duration dt/6 centered mid-step, and
a sign change places the transition at the linear-interpolation fraction
d0/(d0 + d1) of the step. Trajectories end at t_max (the coherence
cutoff) or at wall contact.

End codes: 0 = reached t_max in the dark, 1 = reached t_max lit,
2 = wall contact.
"""

from __future__ import annotations

import math

import numpy as np

from .philox import normals_from_u32, philox_4x32, seed_to_key, uniform_from_u32

END_DARK = 0
END_BRIGHT = 1
END_WALL = 2


def simulate_walkers(
    dim: int,
    a: float,
    b: float,
    D: float,
    t_max: float,
    dt_base: float,
    eta: float,
    n_walkers: int,
    seed: int,
):
    """Run the walk; return (durations, offsets, end_codes).

    durations holds every walker's intervals back to back, first
    interval bright, strictly alternating; walker w owns
    durations[offsets[w]:offsets[w + 1]]. Durations sum to t_max for
    time-censored walkers and to the contact time for wall-terminated
    ones. Zero-length intervals are possible (a transition resolved at a
    step edge) and carry no weight downstream.
    """
    if dim not in (1, 2):
        raise ValueError("dim must be 1 or 2")
    key0, key1 = seed_to_key(seed)
    ids = np.arange(n_walkers, dtype=np.uint32)
    blk = philox_4x32(np.uint32(0), ids, key0, key1)
    if dim == 1:
        x = (2.0 * uniform_from_u32(blk[0]) - 1.0) * a
        y = None
    else:
        r0 = a * np.sqrt(uniform_from_u32(blk[0]))
        th = 2.0 * math.pi * uniform_from_u32(blk[1])
        x = r0 * np.cos(th)
        y = r0 * np.sin(th)

    t = np.zeros(n_walkers)
    alive = np.ones(n_walkers, dtype=bool)
    end_code = np.zeros(n_walkers, dtype=np.uint8)
    ev_walker: list[np.ndarray] = []
    ev_time: list[np.ndarray] = []
    sigma_base = math.sqrt(2.0 * D * dt_base)
    walled = math.isfinite(b)
    edge_is_wall = walled and (b - a <= 1e-12 * max(a, 1.0))
    max_iter = int(math.ceil(t_max / dt_base)) + 16

    for k in range(1, max_iter + 1):
        act = np.flatnonzero(alive)
        if act.size == 0:
            break
        blk = philox_4x32(np.uint32(k), ids[act], key0, key1)
        z0, z1 = normals_from_u32(blk[0], blk[1])
        u_edge = uniform_from_u32(blk[2])
        u_wall = uniform_from_u32(blk[3])

        xa = x[act]
        ta = t[act]
        if dim == 1:
            r = np.abs(xa)
        else:
            ya = y[act]
            r = np.hypot(xa, ya)
        d_beam = np.abs(r - a)
        d_near = np.minimum(d_beam, b - r) if walled else d_beam
        sigma = np.maximum(sigma_base, eta * d_near)
        dt = sigma * sigma / (2.0 * D)
        cap = dt >= (t_max - ta)
        dt = np.where(cap, t_max - ta, dt)
        sigma = np.sqrt(2.0 * D * dt)

        if dim == 1:
            xn = xa + sigma * z0
            rn = np.abs(xn)
        else:
            xn = xa + sigma * z0
            yn = ya + sigma * z1
            rn = np.hypot(xn, yn)

        inside0 = r < a
        inside1 = rn < a
        crossed = inside0 != inside1
        d1_beam = np.abs(rn - a)
        with np.errstate(divide="ignore"):
            frac = d_beam / (d_beam + d1_beam)
        frac = np.where(np.isfinite(frac), frac, 0.5)
        t_cross = ta + frac * dt
        p_graze = np.exp(-d_beam * d1_beam / (D * dt))
        graze = (~crossed) & (u_edge < p_graze)
        if edge_is_wall:
            # the beam edge and the wall are the same boundary; the wall
            # draw below is the single authoritative touch decision
            graze[:] = False

        if walled:
            w0 = b - r
            w1 = b - rn
            hit = w1 <= 0
            p_wall = np.where(hit, 1.0, np.exp(-w0 * np.maximum(w1, 0.0) / (D * dt)))
            killed = hit | (u_wall < p_wall)
            t_kill = np.where(
                hit, ta + (w0 / np.maximum(w0 - w1, 1e-300)) * dt, ta + 0.5 * dt
            )
        else:
            killed = np.zeros(act.size, dtype=bool)
            t_kill = np.zeros(act.size)

        # single transitions: beam crossings, and for killed walkers only
        # those resolved before the contact time
        emit_cross = crossed & (~killed | (t_cross < t_kill))
        if np.any(emit_cross):
            ev_walker.append(act[emit_cross].astype(np.int64))
            ev_time.append(t_cross[emit_cross])
        # grazing: a dt/6 excursion to the other side, centered mid-step
        emit_graze = graze & ~killed
        if np.any(emit_graze):
            gw = act[emit_graze].astype(np.int64)
            gt = ta[emit_graze] + 0.5 * dt[emit_graze]
            gh = dt[emit_graze] / 12.0
            ev_walker.append(np.repeat(gw, 2))
            ev_time.append(np.column_stack([gt - gh, gt + gh]).ravel())

        tn = np.where(cap, t_max, ta + dt)
        x[act] = xn
        if dim == 2:
            y[act] = yn
        if walled and np.any(killed):
            kidx = act[killed]
            t[kidx] = t_kill[killed]
            alive[kidx] = False
            end_code[kidx] = END_WALL
            live = ~killed
        else:
            live = np.ones(act.size, dtype=bool)
        lived = act[live]
        t[lived] = tn[live]
        done = lived[tn[live] >= t_max]
        if done.size:
            alive[done] = False
    if np.any(alive):
        raise RuntimeError(
            "walker stepping failed to terminate within the iteration bound"
        )

    # time-censored walkers: final state from transition-count parity
    if ev_walker:
        all_w = np.concatenate(ev_walker)
        all_t = np.concatenate(ev_time)
    else:
        all_w = np.empty(0, dtype=np.int64)
        all_t = np.empty(0)
    n_ev = np.bincount(all_w, minlength=n_walkers)
    time_censored = end_code != END_WALL
    end_code[time_censored & (n_ev % 2 == 0)] = END_BRIGHT
    end_code[time_censored & (n_ev % 2 == 1)] = END_DARK

    order = np.argsort(all_w, kind="stable")
    grouped_t = all_t[order]
    ev_starts = np.concatenate([[0], np.cumsum(n_ev)])[:-1]
    n_int = n_ev + 1
    offsets = np.concatenate([[0], np.cumsum(n_int)]).astype(np.int64)
    total = int(offsets[-1])
    upper = np.empty(total)
    lower = np.empty(total)
    within = np.arange(all_w.size) - np.repeat(ev_starts, n_ev)
    pos = offsets[:-1][all_w[order]] + within
    upper[pos] = grouped_t
    upper[offsets[:-1] + n_ev] = t
    lower[offsets[:-1]] = 0.0
    lower[pos + 1] = grouped_t
    durations = upper - lower
    return durations, offsets, end_code
