"""Compare the numba-accelerated kernels against the pure-numpy fallback.

Runs itself twice in subprocesses (with and without SONOLENS_NO_NUMBA=1) so
each measurement uses the dispatch path a user would actually get, then
prints a side-by-side table.

Usage: python3 benchmarks/compare_accel.py [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys
import time


def run_workloads(repeat: int) -> dict:
    import numpy as np

    from sonolens import kernels
    from sonolens._accel import HAVE_NUMBA
    from sonolens.clips import AudioClip
    from sonolens.transforms import TransformParams, compute_cqt, compute_swt, compute_wavelet_packet
    from sonolens.wavelets import quadrature_pair

    rng = np.random.default_rng(0)
    fs = 22050
    clip = AudioClip(id="bench", samples=rng.standard_normal(2 * fs),
                     sample_rate_hz=fs)
    h, g = quadrature_pair("sym8")
    x = rng.standard_normal(2 ** 16)

    def timeit(fn):
        fn()  # warm-up (numba compilation, caches)
        best = float("inf")
        for _ in range(repeat):
            t0 = time.perf_counter()
            fn()
            best = min(best, time.perf_counter() - t0)
        return best

    results = {
        "numba": HAVE_NUMBA,
        "cqt_full_transform": timeit(
            lambda: compute_cqt(clip, TransformParams(method="CQT", fmin_hz=55.0))),
        "wavelet_packet_transform": timeit(
            lambda: compute_wavelet_packet(clip, TransformParams(method="WAVE"))),
        "swt_transform": timeit(
            lambda: compute_swt(clip, TransformParams(method="SWT"))),
        "dwt_step_64k": timeit(lambda: kernels.dwt_periodic_step(x, h, g)),
        "atrous_step_64k": timeit(lambda: kernels.atrous_step(x, h, g, 8)),
    }
    return results


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()

    if args.child:
        print(json.dumps(run_workloads(args.repeat)))
        return

    rows = {}
    for label, env_extra in [("numba", {}), ("numpy", {"SONOLENS_NO_NUMBA": "1"})]:
        env = dict(os.environ, **env_extra)
        out = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--child",
             "--repeat", str(args.repeat)],
            env=env, capture_output=True, text=True, check=True)
        rows[label] = json.loads(out.stdout.strip().splitlines()[-1])

    if not rows["numba"]["numba"]:
        print("note: numba is not importable; both columns use the numpy path\n")

    names = [k for k in rows["numba"] if k != "numba"]
    print(f"{'workload':<28}{'numba (s)':>12}{'numpy (s)':>12}{'speedup':>10}")
    for name in names:
        a, b = rows["numba"][name], rows["numpy"][name]
        print(f"{name:<28}{a:>12.5f}{b:>12.5f}{b / a:>9.2f}x")


if __name__ == "__main__":
    main()
