"""Seeded random datasets for round-trip and property tests."""
import numpy as np

from netprep.dataset import Dataset, FeatureDescriptor, FeatureKind

_AWKWARD = ["tcp", "udp", "a b", "x,y", "it's", "{br}", "50%", "back\\slash", "?q", 'dq"', "SF", "S0", "?", ""]


def random_dataset(rng: np.random.Generator, max_rows: int = 25, max_features: int = 6) -> Dataset:
    m = int(rng.integers(0, max_rows + 1))
    n = int(rng.integers(0, max_features + 1))
    descs, cols = [], []
    for j in range(n):
        name = f"f{j}" if rng.random() < 0.8 else f"feat {j}"
        if rng.random() < 0.4:
            k = int(rng.integers(1, 5))
            domain = tuple(rng.choice(_AWKWARD, size=k, replace=False).tolist())
            descs.append(FeatureDescriptor(name, j, FeatureKind.NOMINAL, domain))
            cols.append(rng.integers(0, k, m))
        else:
            kind = rng.integers(0, 3)
            if kind == 0:
                col = rng.integers(0, 1000, m).astype(float)
            elif kind == 1:
                col = rng.normal(0, 1, m) * 10.0 ** rng.integers(-300, 300)
            else:
                col = rng.uniform(-1, 1, m)
            descs.append(FeatureDescriptor(name, j, FeatureKind.NUMERIC))
            cols.append(col)
    labels = rng.integers(0, 2, m)
    return Dataset(descs, cols, labels, name=f"rel{int(rng.integers(0, 100))}")
