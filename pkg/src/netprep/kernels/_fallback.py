"""Numpy implementations with the same results as the compiled ``_core``."""
import numpy as np

TIE_EPS = 1e-12
_CHUNK_CELLS = 1 << 22


def contingency(codes, labels, n_codes):
    flat = np.bincount(
        np.asarray(codes, dtype=np.int64) * 2 + labels, minlength=2 * n_codes
    )
    return flat.reshape(n_codes, 2).astype(np.int64)


def _h2(a, b):
    """Binary entropy of counts ``a`` and ``b`` (arrays), 0 log 0 = 0."""
    n = a + b
    with np.errstate(divide="ignore", invalid="ignore"):
        pa = np.where(a > 0, a / n, 1.0)
        pb = np.where(b > 0, b / n, 1.0)
        return -(pa * np.log2(pa)) - pb * np.log2(pb)


def best_numeric_split(xs, ys):
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    n = xs.shape[0]
    if n < 2:
        return 0.0, -1
    total_pos = ys.sum()
    parent = float(_h2(np.float64(n) - total_pos, total_pos))
    left_pos = np.cumsum(ys)[:-1]
    pos = np.arange(1, n, dtype=np.float64)
    valid = xs[1:] != xs[:-1]
    if not valid.any():
        return 0.0, -1
    nl = pos[valid]
    lp = left_pos[valid]
    nr = n - nl
    rp = total_pos - lp
    gains = parent - (nl / n * _h2(nl - lp, lp) + nr / n * _h2(nr - rp, rp))
    best = float(gains.max())
    first = int(np.argmax(gains >= best - TIE_EPS))
    return best, int(nl[first])


def knn_predict(train, labels, test, k):
    train = np.ascontiguousarray(train, dtype=np.float64)
    test = np.ascontiguousarray(test, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    n, m = train.shape[0], test.shape[0]
    out = np.zeros(m, dtype=np.int8)
    if n == 0 or m == 0:
        return out
    kk = min(k, n)
    step = max(1, _CHUNK_CELLS // n)
    for start in range(0, m, step):
        block = test[start:start + step]
        d = np.zeros((block.shape[0], n))
        for j in range(train.shape[1]):
            diff = block[:, j, None] - train[None, :, j]
            d += diff * diff
        nearest = np.argsort(d, axis=1, kind="stable")[:, :kk]
        votes = labels[nearest].sum(axis=1)
        out[start:start + step] = (2 * votes > kk).astype(np.int8)
    return out
