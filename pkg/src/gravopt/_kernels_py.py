"""Pure-Python force and kinematics kernels.

Fallback for environments without the compiled extension. Both backends
execute the same scalar operations in the same order, so they produce
bit-identical results; keep any change here in lockstep with
``_kernels_c.pyx``.
"""

import math


def accumulate_forces(pos, masses, members, g, tau, rand, out):
    """Add gravitational pulls from the ``members`` particles into ``out``.

    pos: (n, d) positions, masses: (n,) normalized masses, members: sorted
    attractor indices, rand: (n, len(members), d) uniform weights drawn in
    row-major order. ``out`` must be a zeroed (n, d) array.
    """
    n, d = pos.shape
    k = len(members)
    p = pos.tolist()
    m = masses.tolist()
    idx = [int(j) for j in members]
    r3 = rand.tolist()
    acc = out.tolist()
    for i in range(n):
        pi = p[i]
        mi = m[i]
        oi = acc[i]
        ri = r3[i]
        for slot in range(k):
            j = idx[slot]
            if j == i:
                continue
            pj = p[j]
            s = 0.0
            for a in range(d):
                diff = pj[a] - pi[a]
                s += diff * diff
            dist = math.sqrt(s)
            coef = g * mi * m[j] / (dist + tau)
            rij = ri[slot]
            for a in range(d):
                oi[a] += rij[a] * coef * (pj[a] - pi[a])
    out[:] = acc


def apply_kinematics(pos, vel, forces, masses, tau, rand, lower, upper):
    """Advance velocities and positions in place, saturating at the bounds.

    Acceleration is force over mass; exactly-zero masses divide by tau
    instead so the worst particle keeps moving. New velocity is the old one
    scaled by a fresh uniform draw plus the acceleration.
    """
    n, d = pos.shape
    p = pos.tolist()
    v = vel.tolist()
    f = forces.tolist()
    m = masses.tolist()
    r2 = rand.tolist()
    lo = lower.tolist()
    hi = upper.tolist()
    for i in range(n):
        mi = m[i]
        denom = mi + tau if mi == 0.0 else mi
        pi, vi, fi, ri = p[i], v[i], f[i], r2[i]
        for a in range(d):
            acc = fi[a] / denom
            u = ri[a] * vi[a] + acc
            x = pi[a] + u
            if x < lo[a]:
                x = lo[a]
            elif x > hi[a]:
                x = hi[a]
            vi[a] = u
            pi[a] = x
    pos[:] = p
    vel[:] = v
