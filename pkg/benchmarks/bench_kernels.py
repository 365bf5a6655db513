"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat N]

Also times one full leave-one-out selection run per backend.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from netprep.kernels import _fallback

try:
    from netprep.kernels import _core
except ImportError:
    _core = None


def _cases(rng):
    m = 20_000
    ys = rng.integers(0, 2, m).astype(np.int8)
    codes = rng.integers(0, 70, m).astype(np.int32)
    xs = np.sort(rng.lognormal(3, 2, m).round(1))
    train = rng.random((5000, 25))
    labels = rng.integers(0, 2, 5000).astype(np.int8)
    test = rng.random((1000, 25))
    return {
        "contingency (20k rows, 70 codes)": lambda mod: mod.contingency(codes, ys, 70),
        "best_numeric_split (20k rows)": lambda mod: mod.best_numeric_split(xs, ys),
        "knn_predict (5000 x 1000, d=25, k=5)": lambda mod: mod.knn_predict(train, labels, test, 5),
    }


_SBS = """
import time
from netprep.sbs import run_modified_sbs
from netprep.synthetic import nslkdd_like_split
from netprep.dataset import MVF, project
fs = MVF.renamed({"error_rate": "serror_rate"})
tr, te = nslkdd_like_split(3000, 1000, 0)
tr, te = project(tr, fs), project(te, fs)
t = time.perf_counter()
run_modified_sbs(tr, te, ["nb", "dt", "knn"])
print(time.perf_counter() - t)
"""


def _sbs_seconds(pure: bool) -> float:
    env = dict(os.environ, NETPREP_PURE="1" if pure else "0")
    out = subprocess.run([sys.executable, "-c", _SBS], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout)


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _core is None:
        sys.exit("compiled kernels are not built; run `pip install -e . --no-build-isolation` first")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<40}{'cython ms':>12}{'numpy ms':>12}{'speedup':>10}")
    for name, call in _cases(rng).items():
        fast = min(timeit.repeat(lambda: call(_core), number=1, repeat=args.repeat)) * 1e3
        slow = min(timeit.repeat(lambda: call(_fallback), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<40}{fast:>12.2f}{slow:>12.2f}{slow / fast:>9.1f}x")
    fast, slow = _sbs_seconds(False), _sbs_seconds(True)
    print(f"{'SBS, MVF, nb+dt+knn, 3000/1000':<40}{fast * 1e3:>12.0f}{slow * 1e3:>12.0f}{slow / fast:>9.1f}x")


if __name__ == "__main__":
    main()
