"""Pure NumPy implementations of the hot kernels (fallback for the compiled core)."""
import numpy as np

BACKEND = "python"


def lagrange_weights(t):
    """Cubic Lagrange weights on nodes -1, 0, 1, 2 and their t-derivatives."""
    tm, t1, t2 = t + 1.0, t - 1.0, t - 2.0
    w = np.stack([-t * t1 * t2 / 6.0, tm * t1 * t2 / 2.0, -tm * t * t2 / 2.0, tm * t * t1 / 6.0])
    dw = np.stack(
        [
            -(3 * t * t - 6 * t + 2) / 6.0,
            (3 * t * t - 4 * t - 1) / 2.0,
            -(3 * t * t - 2 * t - 2) / 2.0,
            (3 * t * t - 1) / 6.0,
        ]
    )
    return w, dw


def quintic_weights(t):
    """Quintic Hermite basis on ``[0, 1]``: ``w[a, p]`` weighs the ``p``-th derivative at end ``a``.

    Returns weights and their first derivatives, shapes ``(2, 3) + t.shape``.
    """
    t2 = t * t
    t3, t4, t5 = t2 * t, t2 * t2, t2 * t2 * t
    w = np.array([
        [1 - 10 * t3 + 15 * t4 - 6 * t5, t - 6 * t3 + 8 * t4 - 3 * t5, 0.5 * (t2 - 3 * t3 + 3 * t4 - t5)],
        [10 * t3 - 15 * t4 + 6 * t5, -4 * t3 + 7 * t4 - 3 * t5, 0.5 * (t3 - 2 * t4 + t5)],
    ])
    dw = np.array([
        [-30 * t2 + 60 * t3 - 30 * t4, 1 - 18 * t2 + 32 * t3 - 15 * t4, 0.5 * (2 * t - 9 * t2 + 12 * t3 - 5 * t4)],
        [30 * t2 - 60 * t3 + 30 * t4, -12 * t2 + 28 * t3 - 15 * t4, 0.5 * (3 * t2 - 8 * t3 + 5 * t4)],
    ])
    return w, dw


def hermite5(D, x0, y0, h, x, y):
    """C2 quintic Hermite value and gradient at points.

    ``D[p, q, j, i]`` holds ``h^(p+q) d^p/dx^p d^q/dy^q f`` at node ``(x0 + i h, y0 + j h)``.
    """
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    sx = (x - x0) / h
    sy = (y - y0) / h
    i0 = np.floor(sx).astype(np.int64)
    j0 = np.floor(sy).astype(np.int64)
    wx, dwx = quintic_weights(sx - i0)
    wy, dwy = quintic_weights(sy - j0)
    v = np.zeros(x.shape, dtype=complex)
    vx = np.zeros_like(v)
    vy = np.zeros_like(v)
    for b in range(2):
        for a in range(2):
            jj, ii = j0 + b, i0 + a
            for p in range(3):
                for q in range(3):
                    f = D[p, q, jj, ii]
                    v += wx[a, p] * wy[b, q] * f
                    vx += dwx[a, p] * wy[b, q] * f
                    vy += wx[a, p] * dwy[b, q] * f
    return v, vx / h, vy / h


def _angle_rate(psi, m):
    c, s = np.cos(psi), np.sin(psi)
    return m[..., 1, 0] * c * c + (m[..., 1, 1] - m[..., 0, 0]) * s * c - m[..., 0, 1] * s * s


def riccati_angle(mats, dt, psi0, direction):
    """RK4 for the line angle of ``x' = M(t) x``.

    ``mats`` holds ``M`` on a half-step grid (``2 K + 1`` samples, spacing ``dt/2``).
    ``direction=+1`` starts at sample 0, ``-1`` starts at the last sample.  Returns
    the angle at every full step, indexed like the full-step grid.
    """
    mats = np.asarray(mats, dtype=float)
    K = (mats.shape[0] - 1) // 2
    out = np.empty(K + 1)
    psi = float(psi0)
    if direction > 0:
        out[0] = psi
        for k in range(K):
            m0, mh, m1 = mats[2 * k], mats[2 * k + 1], mats[2 * k + 2]
            k1 = _angle_rate(psi, m0)
            k2 = _angle_rate(psi + 0.5 * dt * k1, mh)
            k3 = _angle_rate(psi + 0.5 * dt * k2, mh)
            k4 = _angle_rate(psi + dt * k3, m1)
            psi += dt * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0
            out[k + 1] = psi
    else:
        out[K] = psi
        for k in range(K, 0, -1):
            m0, mh, m1 = mats[2 * k], mats[2 * k - 1], mats[2 * k - 2]
            k1 = _angle_rate(psi, m0)
            k2 = _angle_rate(psi - 0.5 * dt * k1, mh)
            k3 = _angle_rate(psi - 0.5 * dt * k2, mh)
            k4 = _angle_rate(psi - dt * k3, m1)
            psi -= dt * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0
            out[k - 1] = psi
    return out


def cocycle_rk4(mats, dt, renorm_every):
    """RK4 for ``Psi' = M(t) Psi``, ``Psi(0) = I`` on the half-step grid of ``mats``.

    Returns ``(psi, logscale)`` at full steps with ``Psi_true = exp(logscale) * psi``;
    rescaling happens every ``renorm_every`` steps or when the norm exceeds 1e100.
    """
    mats = np.asarray(mats, dtype=float)
    K = (mats.shape[0] - 1) // 2
    out = np.empty((K + 1, 2, 2))
    logs = np.empty(K + 1)
    P = np.eye(2)
    ls = 0.0
    out[0] = P
    logs[0] = 0.0
    for k in range(K):
        m0, mh, m1 = mats[2 * k], mats[2 * k + 1], mats[2 * k + 2]
        k1 = m0 @ P
        k2 = mh @ (P + 0.5 * dt * k1)
        k3 = mh @ (P + 0.5 * dt * k2)
        k4 = m1 @ (P + dt * k3)
        P = P + dt * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0
        nrm = np.abs(P).max()
        if (renorm_every > 0 and (k + 1) % renorm_every == 0) or nrm > 1e100:
            P = P / nrm
            ls += np.log(nrm)
        out[k + 1] = P
        logs[k + 1] = ls
    return out, logs
