"""Timing comparison of the compiled and pure-Python kernels.

Runs the force-accumulation and kinematics passes on swarms of growing
size with both backends, verifies the outputs are bit-identical, and
prints a speedup table.

    python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from gravopt import _kernels_py

try:
    from gravopt import _kernels_c
except ImportError:
    _kernels_c = None


def make_problem(rng, n, d):
    pos = np.ascontiguousarray(rng.uniform(-5, 5, size=(n, d)))
    vel = np.ascontiguousarray(rng.normal(size=(n, d)))
    masses = rng.uniform(size=n)
    masses /= masses.sum()
    k = max(1, n // 2)
    members = np.sort(np.argsort(rng.uniform(size=n))[:k]).astype(np.int64)
    force_rand = np.ascontiguousarray(rng.random((n, k, d)))
    vel_rand = np.ascontiguousarray(rng.random((n, d)))
    lower, upper = np.full(d, -5.0), np.full(d, 5.0)
    return pos, vel, masses, members, force_rand, vel_rand, lower, upper


def one_pass(impl, problem):
    pos, vel, masses, members, force_rand, vel_rand, lower, upper = problem
    pos, vel = pos.copy(), vel.copy()
    forces = np.zeros_like(pos)
    impl.accumulate_forces(pos, masses, members, 9.8, 1e-12, force_rand, forces)
    impl.apply_kinematics(pos, vel, forces, masses, 1e-12, vel_rand, lower, upper)
    return pos, vel, forces


def timed(impl, problem, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        one_pass(impl, problem)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    rng = np.random.default_rng(0)
    print(f"{'N':>6} {'dims':>5} {'python':>12} {'compiled':>12} {'speedup':>8}  identical")
    for n, d in [(30, 3), (100, 5), (300, 10), (1000, 10)]:
        problem = make_problem(rng, n, d)
        repeats = 5 if n >= 300 else 20
        t_py = timed(_kernels_py, problem, repeats)
        if _kernels_c is None:
            print(f"{n:>6} {d:>5} {t_py * 1e3:>10.2f}ms {'(not built)':>12}")
            continue
        t_c = timed(_kernels_c, problem, repeats)
        same = all(
            np.array_equal(a, b)
            for a, b in zip(one_pass(_kernels_py, problem), one_pass(_kernels_c, problem))
        )
        print(f"{n:>6} {d:>5} {t_py * 1e3:>10.2f}ms {t_c * 1e3:>10.3f}ms "
              f"{t_py / t_c:>7.1f}x  {same}")


if __name__ == "__main__":
    main()
