"""Compare the compiled and numpy kernel backends on typical problem sizes.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``.
"""

import argparse
import timeit

import numpy as np

from lempert_lab.kernels import backends


def problems(rng):
    for n, m in ((256, 1000), (1024, 1000), (1024, 20000)):
        t = np.arange(n) / n
        nodes = (2 * np.cos(2 * np.pi * t) + 1j * np.sin(2 * np.pi * t)).astype(complex)
        tangents = 2j * np.pi * (-2 * np.sin(2 * np.pi * t) / 1j + np.cos(2 * np.pi * t))
        weights = tangents / n
        values = np.exp(1j * 2 * np.pi * t)
        r = np.sqrt(rng.random(m)) * 0.99
        a = 2 * np.pi * rng.random(m)
        points = r * (2 * np.cos(a) + 1j * np.sin(a))
        speed = np.abs(tangents)
        yield f"cauchy_eval N={n} M={m}", "cauchy_eval", (nodes, weights, values, points)
        yield f"nearest_samples N={n} M={m}", "nearest_samples", (nodes, points)
        if m == 1000:
            yield f"kerzman_stein_system N={n}", "kerzman_stein_system", (nodes, tangents / speed, speed / n)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    impls = backends()
    rng = np.random.default_rng(0)
    names = list(impls)
    print(f"{'kernel':40s}" + "".join(f"{n:>12s}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for label, fn, data in problems(rng):
        times = {}
        outs = {}
        for name, mod in impls.items():
            f = getattr(mod, fn)
            outs[name] = f(*data)
            times[name] = min(timeit.repeat(lambda: f(*data), number=1, repeat=args.repeat))
        line = f"{label:40s}" + "".join(f"{times[n] * 1e3:10.2f}ms" for n in names)
        if len(names) > 1:
            line += f"{times['python'] / times['cython']:11.1f}x"
            a, b = outs["python"], outs["cython"]
            a = a if isinstance(a, tuple) else (a,)
            b = b if isinstance(b, tuple) else (b,)
            err = max(float(np.max(np.abs(np.asarray(x) - np.asarray(y)))) for x, y in zip(a, b))
            line += f"   max diff {err:.1e}"
        print(line)


if __name__ == "__main__":
    main()
