"""Compare the compiled and pure-Python kernels on representative inputs.

Run with ``python3 benchmarks/bench_kernels.py``.
"""
import timeit

import numpy as np

from vortexlab import _kernels_py as py
from vortexlab.grid import Grid

try:
    from vortexlab import _kernels as cy
except ImportError:
    cy = None


def cases():
    g = Grid(0.02)
    I = g.interpolant(np.exp(1.3 * g.z))
    rng = np.random.default_rng(0)
    z = rng.uniform(-0.4, 0.4, 20000) + 1j * rng.uniform(-0.4, 0.4, 20000)
    t = np.linspace(0, 50, 20001)
    mats = np.zeros((t.size, 2, 2))
    mats[:, 0, 1] = 1.0
    mats[:, 1, 0] = 1.0 + 0.3 * np.sin(t)
    mats[:, 1, 1] = 0.2 * np.cos(t)
    return {
        "hermite5 (20k points)": lambda k: k.hermite5(I.D, g.x0, g.y0, g.h, z.real, z.imag),
        "riccati_angle (10k steps)": lambda k: k.riccati_angle(mats, 0.005, np.pi / 2, 1),
        "cocycle_rk4 (10k steps)": lambda k: k.cocycle_rk4(mats, 0.005, 100),
    }


def main():
    print(f"{'kernel':28s} {'python [ms]':>12s} {'cython [ms]':>12s} {'speedup':>8s}")
    for name, fn in cases().items():
        tp = min(timeit.repeat(lambda: fn(py), number=1, repeat=3)) * 1e3
        if cy is None:
            print(f"{name:28s} {tp:12.2f} {'n/a':>12s}")
            continue
        a, b = fn(py), fn(cy)
        for x, y in zip(a if isinstance(a, tuple) else (a,), b if isinstance(b, tuple) else (b,)):
            assert np.allclose(x, y, rtol=1e-12, atol=1e-12), name
        tc = min(timeit.repeat(lambda: fn(cy), number=1, repeat=5)) * 1e3
        print(f"{name:28s} {tp:12.2f} {tc:12.2f} {tp / tc:8.1f}")


if __name__ == "__main__":
    main()
