"""Seeded synthetic datasets.

``nslkdd_like`` produces records with the 41 NSL-KDD feature names and kinds.
Its class structure is loosely modelled on the real data: attacks favour a few
services, half-open (S0) or rejected (REJ) connections and low
same-service rates. Byte counts are heavy tailed and overlap between classes,
so unscaled distances are dominated by them. Use it when the real dataset is
not available; it is no substitute for benchmarking.
"""
from __future__ import annotations

import numpy as np

from netprep.dataset import (
    NSL_KDD_FEATURES,
    Dataset,
    FeatureDescriptor,
    FeatureKind,
)

PROTOCOLS = ("tcp", "udp", "icmp")
FLAGS = ("SF", "S0", "REJ", "RSTO", "RSTR", "SH", "S1", "OTH")
SERVICES = (
    "http", "smtp", "ftp_data", "domain_u", "private", "ftp", "other", "telnet",
    "urp_i", "ecr_i", "eco_i", "pop_3", "finger", "auth", "imap4", "ntp_u",
    "tftp_u", "Z39_50", "uucp", "courier", "bgp", "whois", "sunrpc", "link",
)
_ICMP_SERVICES = {"urp_i", "ecr_i", "eco_i"}
_UDP_SERVICES = {"domain_u", "ntp_u", "tftp_u"}

_SERVICE_WEIGHTS = {
    0: dict(http=45, smtp=12, ftp_data=10, domain_u=10, private=4, ftp=4, other=4,
            telnet=2, urp_i=2, ecr_i=2, eco_i=1, pop_3=2, auth=1, imap4=1, ntp_u=1,
            tftp_u=0.5, finger=0.5),
    1: dict(private=34, ecr_i=14, other=7, http=7, eco_i=6, telnet=5, ftp_data=4,
            finger=3, Z39_50=3, uucp=3, courier=3, bgp=3, whois=2, sunrpc=2, link=2,
            smtp=2, ftp=2, imap4=1, auth=1),
}
_FLAG_WEIGHTS = {
    0: dict(SF=90, REJ=4, S0=2, RSTO=2, SH=1, S1=1),
    1: dict(S0=45, SF=30, REJ=15, RSTR=5, RSTO=4, OTH=1),
}


def _choice(rng, symbols, weights: dict, size: int) -> np.ndarray:
    w = np.array([weights.get(s, 0.0) for s in symbols], dtype=float)
    return rng.choice(len(symbols), size=size, p=w / w.sum())


def nslkdd_like(n: int, seed: int = 0, anomaly_fraction: float = 0.47, name: str = "nslkdd_like") -> Dataset:
    rng = np.random.default_rng(seed)
    y = (rng.random(n) < anomaly_fraction).astype(np.int8)
    anom = y == 1

    service = np.where(anom, _choice(rng, SERVICES, _SERVICE_WEIGHTS[1], n),
                       _choice(rng, SERVICES, _SERVICE_WEIGHTS[0], n)).astype(np.int32)
    flag = np.where(anom, _choice(rng, FLAGS, _FLAG_WEIGHTS[1], n),
                    _choice(rng, FLAGS, _FLAG_WEIGHTS[0], n)).astype(np.int32)
    svc = np.array(SERVICES)[service]
    proto = np.zeros(n, dtype=np.int32)
    proto[np.isin(svc, list(_UDP_SERVICES))] = 1
    loose = np.isin(svc, ["private", "other"]) & (rng.random(n) < 0.3)
    proto[loose] = 1
    proto[np.isin(svc, list(_ICMP_SERVICES))] = 2
    flag[proto == 2] = 0  # icmp records carry SF
    s0 = np.array(FLAGS)[flag] == "S0"
    rej = np.array(FLAGS)[flag] == "REJ"

    def u(lo, hi):
        return rng.uniform(lo, hi, n)

    def small_rate():
        return np.where(rng.random(n) < 0.1, u(0.0, 0.2), 0.0).round(2)

    cols: dict[str, np.ndarray] = {}
    cols["duration"] = np.where(rng.random(n) < 0.1, rng.exponential(2000, n), 0.0).round()
    src = rng.lognormal(5.5, 2.2, n)
    src = np.where(anom & (rng.random(n) < 0.4), 0.0, np.where(anom, rng.lognormal(5.0, 2.8, n), src))
    cols["src_bytes"] = src.round()
    dst = np.where(anom, np.where(rng.random(n) < 0.6, 0.0, rng.lognormal(4.0, 3.0, n)),
                   rng.lognormal(7.0, 2.5, n))
    cols["dst_bytes"] = dst.round()
    cols["land"] = (rng.random(n) < 0.001).astype(float)
    cols["wrong_fragment"] = np.where(anom & (proto != 0) & (rng.random(n) < 0.08),
                                      rng.integers(1, 4, n), 0).astype(float)
    cols["urgent"] = np.zeros(n)
    cols["hot"] = np.where(rng.random(n) < np.where(anom, 0.06, 0.03), rng.integers(1, 30, n), 0).astype(float)
    cols["num_failed_logins"] = np.where(anom & (rng.random(n) < 0.02), rng.integers(1, 5, n), 0).astype(float)
    cols["logged_in"] = (rng.random(n) < np.where(anom, 0.1, 0.75)).astype(float) * (proto == 0)
    cols["num_compromised"] = np.where(rng.random(n) < np.where(anom, 0.03, 0.01), rng.integers(1, 10, n), 0).astype(float)
    cols["root_shell"] = (rng.random(n) < np.where(anom, 0.01, 0.001)).astype(float)
    cols["su_attempted"] = (rng.random(n) < 0.001).astype(float)
    cols["num_root"] = np.where(rng.random(n) < 0.01, rng.integers(1, 10, n), 0).astype(float)
    cols["num_file_creations"] = np.where(rng.random(n) < 0.01, rng.integers(1, 5, n), 0).astype(float)
    cols["num_shells"] = (rng.random(n) < 0.001).astype(float)
    cols["num_access_files"] = np.where(rng.random(n) < np.where(anom, 0.02, 0.005), rng.integers(1, 4, n), 0).astype(float)
    cols["num_outbound_cmds"] = np.zeros(n)
    cols["is_host_login"] = np.zeros(n)
    cols["is_guest_login"] = (rng.random(n) < np.where(anom, 0.02, 0.01)).astype(float)
    cols["count"] = np.where(anom & (rng.random(n) < 0.5), rng.integers(100, 512, n),
                             rng.poisson(8, n) + 1).astype(float)
    cols["srv_count"] = np.where(anom, rng.integers(1, 30, n), rng.poisson(10, n) + 1).astype(float)
    for key in ("serror_rate", "srv_serror_rate", "dst_host_serror_rate", "dst_host_srv_serror_rate"):
        cols[key] = np.where(s0, u(0.8, 1.0).round(2), small_rate())
    for key in ("rerror_rate", "srv_rerror_rate", "dst_host_rerror_rate", "dst_host_srv_rerror_rate"):
        cols[key] = np.where(rej, u(0.7, 1.0).round(2), small_rate())
    cols["same_srv_rate"] = np.where(anom & (rng.random(n) < 0.6), u(0.0, 0.3), u(0.7, 1.0)).round(2)
    cols["diff_srv_rate"] = np.where(anom & (rng.random(n) < 0.3), u(0.3, 0.8), u(0.0, 0.1)).round(2)
    cols["srv_diff_host_rate"] = np.where(rng.random(n) < 0.2, u(0.0, 1.0), 0.0).round(2)
    cols["dst_host_count"] = rng.integers(0, 256, n).astype(float)
    cols["dst_host_srv_count"] = np.where(rng.random(n) < 0.6,
                                          np.where(anom, rng.integers(0, 30, n), rng.integers(150, 256, n)),
                                          rng.integers(0, 256, n)).astype(float)
    cols["dst_host_same_srv_rate"] = np.where(anom, u(0.0, 0.5), u(0.5, 1.0)).round(2)
    cols["dst_host_diff_srv_rate"] = np.where(anom, u(0.0, 0.3), u(0.0, 0.1)).round(2)
    cols["dst_host_same_src_port_rate"] = u(0.0, 1.0).round(2)
    cols["dst_host_srv_diff_host_rate"] = np.where(rng.random(n) < np.where(anom, 0.3, 0.15),
                                                   u(0.0, 0.5), 0.0).round(2)

    nominal = {"protocol_type": (PROTOCOLS, proto), "service": (SERVICES, service), "flag": (FLAGS, flag)}
    descs, columns = [], []
    for i, fname in enumerate(NSL_KDD_FEATURES):
        if fname in nominal:
            domain, codes = nominal[fname]
            descs.append(FeatureDescriptor(fname, i, FeatureKind.NOMINAL, domain))
            columns.append(codes)
        else:
            descs.append(FeatureDescriptor(fname, i, FeatureKind.NUMERIC))
            columns.append(cols[fname])
    return Dataset(descs, columns, y, name=name)


def nslkdd_like_split(n_train: int, n_test: int, seed: int = 0) -> tuple[Dataset, Dataset]:
    """Independent train and test draws (distinct seeds derived from ``seed``)."""
    a, b = np.random.SeedSequence(seed).spawn(2)
    train = nslkdd_like(n_train, seed=int(a.generate_state(1)[0]), name="train")
    test = nslkdd_like(n_test, seed=int(b.generate_state(1)[0]), name="test")
    return train, test


def signal_and_noise(n: int, seed: int = 0, n_noise: int = 4, name: str = "signal_noise") -> Dataset:
    """Two uniform features whose sum decides the label, plus uniform noise."""
    rng = np.random.default_rng(seed)
    a, b = rng.random(n), rng.random(n)
    data = {"signal_a": a, "signal_b": b}
    for i in range(1, n_noise + 1):
        data[f"noise_{i}"] = rng.random(n)
    labels = (a + b > 1.0).astype(np.int8)
    return Dataset.from_dict(data, labels, name=name)
