"""Reference computations that share no code with the package."""
import math
from collections import Counter
from fractions import Fraction


def entropy_direct(counts):
    total = sum(counts)
    return -sum((c / total) * math.log2(c / total) for c in counts if c)


def info_gain_partition(values, labels):
    """Materialize every D_Attr subset and sum the gain term by term."""
    n = len(labels)
    h_d = entropy_direct(list(Counter(labels).values()))
    total = 0.0
    for attr in set(values):
        subset = [y for v, y in zip(values, labels) if v == attr]
        total += len(subset) / n * entropy_direct(list(Counter(subset).values()))
    return h_d - total


def mean_std_two_pass(xs):
    xs = [Fraction(x) for x in xs]
    n = len(xs)
    mu = sum(xs) / n
    var = sum((x - mu) ** 2 for x in xs) / (n - 1)
    return float(mu), math.sqrt(float(var))


def relative_frequencies(column):
    n = len(column)
    return {s: Fraction(c, n) for s, c in Counter(column).items()}


def bin_counts(bins):
    return Counter(int(b) for b in bins)
