"""Compare the compiled SDP kernels with the numpy fallback.

Times the two hot kernels on the coefficient stacks of real separability
problems, then whole solves with each backend.  Run from the repository
root after building the extension::

    python3 benchmarks/bench_kernels.py [--modes 2 4 6 8] [--repeat 20]
"""
import argparse
import timeit

import numpy as np

from gaussrt import cone_spec
from gaussrt.cones import kappa_problem
from gaussrt.harness.sampling import bipartite_partition, random_qcm
from gaussrt.sdp import BACKEND, solve
from gaussrt.sdp._backend import BlockData, inner_products, schur_accumulate


def problem_for(modes, rng):
    na = modes // 2
    part = bipartite_partition(na, modes - na)
    V = random_qcm(modes, rng)
    return kappa_problem(V, cone_spec("separability", part))


def kernel_times(problem, repeat):
    rows = {}
    for backend in ("python", "compiled"):
        blocks = [BlockData(*b.real_form()) for b in problem.blocks]
        m = problem.m
        Ms = np.zeros((m, m))
        g = np.zeros(m)
        mats = [np.eye(b.dim) + 0.1 * np.ones((b.dim, b.dim)) for b in blocks]

        def schur():
            Ms[:] = 0.0
            for W, b in zip(mats, blocks):
                schur_accumulate(W, b, Ms, backend)

        def inner():
            g[:] = 0.0
            for X, b in zip(mats, blocks):
                inner_products(X, b, g, backend)

        rows[backend] = (
            min(timeit.repeat(schur, number=1, repeat=repeat)),
            min(timeit.repeat(inner, number=1, repeat=repeat)),
            Ms.copy(),
        )
    agree = float(np.max(np.abs(rows["python"][2] - rows["compiled"][2])))
    return rows, agree


def solve_time(problem, backend, repeat):
    return min(timeit.repeat(lambda: solve(problem, backend=backend), number=1, repeat=repeat))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--modes", type=int, nargs="+", default=[2, 4, 6, 8])
    parser.add_argument("--repeat", type=int, default=20)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()
    if BACKEND != "compiled":
        raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation`")

    rng = np.random.default_rng(args.seed)
    print(f"{'modes':>5} {'m':>4} {'dim':>4} {'schur py':>10} {'schur c':>10} "
          f"{'inner py':>10} {'inner c':>10} {'solve py':>10} {'solve c':>10} {'max diff':>9}")
    for modes in args.modes:
        prob = problem_for(modes, rng)
        rows, agree = kernel_times(prob, args.repeat)
        reps = max(1, args.repeat // 10)
        t_py = solve_time(prob, "python", reps)
        t_c = solve_time(prob, "compiled", reps)
        dim = sum(b.real_form()[0].shape[0] for b in prob.blocks)
        print(f"{modes:>5} {prob.m:>4} {dim:>4} "
              f"{rows['python'][0] * 1e3:>8.3f}ms {rows['compiled'][0] * 1e3:>8.3f}ms "
              f"{rows['python'][1] * 1e3:>8.3f}ms {rows['compiled'][1] * 1e3:>8.3f}ms "
              f"{t_py * 1e3:>8.1f}ms {t_c * 1e3:>8.1f}ms {agree:>9.1e}")


if __name__ == "__main__":
    main()
