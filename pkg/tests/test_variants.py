import json

import numpy as np
import pytest

from netprep import variants
from netprep.dataset import MVF, Dataset, project
from netprep.variants import VariantSpec, parse_variant_name, variant_name
from netprep.io import read_arff
from netprep.normalize import Method
from netprep.synthetic import nslkdd_like_split

RENAME = {"error_rate": "serror_rate"}


def test_known_names():
    assert variant_name(VariantSpec("L", "MVF", True, Method.DECIMAL)) == "L_MVF+PMF+DN"
    assert variant_name(VariantSpec("T", "MVRF", False, None)) == "T_MVRF-PMF-N"


def test_grid_is_a_bijection():
    specs = variants.all_specs()
    names = [s.name for s in specs]
    assert len(specs) == 20 and len(set(names)) == 20
    assert all(parse_variant_name(n) == s for n, s in zip(names, specs))


@pytest.mark.parametrize(
    "bad", ["L_MVF", "X_MVF+PMF-N", "L_MVF-PMF+MN", "L_ALL+PMF-N", "l_mvf+pmf-n", "L_MVF+PMF+MN "]
)
def test_malformed_names(bad):
    with pytest.raises(ValueError):
        parse_variant_name(bad)


def test_spec_validation():
    with pytest.raises(ValueError):
        VariantSpec("L", "MVF", False, Method.MINMAX)
    with pytest.raises(ValueError):
        VariantSpec("V", "MVF", True, None)


@pytest.fixture(scope="module")
def grid(tmp_path_factory):
    out = tmp_path_factory.mktemp("grid")
    train, test = nslkdd_like_split(600, 200, seed=4)
    manifest = variants.generate_variants(train, test, out, rename=RENAME)
    variants.generate_baseline_iana(train, test, out, MVF, rename=RENAME)
    return out, train, test, manifest


def test_grid_files(grid):
    out, _, _, manifest = grid
    assert len(manifest["datasets"]) == 20
    assert sorted(p.stem for p in out.glob("*_MV*PMF*.arff")) == sorted(s.name for s in variants.all_specs())
    for e in manifest["datasets"]:
        ds = read_arff(out / e["path"])
        assert ds.n_instances == e["rows"] and ds.n_features == e["features"]
        if e["pmf"]:
            assert ds.nominal_names() == []
        if e["normalization"] == "MN" and e["split"] == "L":
            for name in ds.names:
                col = ds.column(name)
                assert col.min() >= 0.0 and col.max() <= 1.0


def test_t_files_share_l_parameters(grid):
    out, _, _, manifest = grid
    by_name = {e["name"]: e for e in manifest["datasets"]}
    for e in manifest["datasets"]:
        if e["split"] != "T":
            continue
        l_entry = by_name[e["fitted_on"]]
        assert l_entry["split"] == "L"
        assert e["params"].keys() == l_entry["params"].keys()
        for ext, info in e["params"].items():
            assert info["sha256"] == l_entry["params"][ext]["sha256"]


def test_unnormalized_files_are_plain_projections(grid, tmp_path):
    out, train, test, _ = grid
    from netprep.io import dumps_arff

    for split, ds in (("L", train), ("T", test)):
        for fs_name in ("MVF", "MVRF"):
            name = f"{split}_{fs_name}-PMF-N"
            fs = variants.PRESETS[fs_name].renamed(RENAME)
            assert (out / f"{name}.arff").read_text() == dumps_arff(project(ds, fs).renamed(name))


def test_missing_rename_hint(tmp_path):
    train, test = nslkdd_like_split(50, 20, seed=1)
    with pytest.raises(KeyError, match="error_rate=serror_rate"):
        variants.generate_variants(train, test, tmp_path)


def test_iana_numbers():
    table = variants.load_iana_table()
    assert (table["protocol"]["tcp"], table["protocol"]["udp"], table["protocol"]["icmp"]) == (6, 17, 1)
    ds = Dataset.from_dict({"protocol_type": ["tcp", "udp", "icmp"], "service": ["http", "domain_u", "ecr_i"]},
                           labels=[0, 1, 0])
    enc = variants.iana_encode(ds, table)
    assert enc.nominal_names() == []
    assert enc.column("protocol_type").tolist() == [6.0, 17.0, 1.0]
    assert enc.column("service").tolist() == [80.0, 53.0, 0.0]  # echo reply is ICMP type 0


def test_iana_errors():
    with pytest.raises(KeyError):
        variants.iana_encode(Dataset.from_dict({"flag": ["SF", "S0"]}, labels=[0, 1]))
    with pytest.raises(KeyError):
        variants.iana_encode(Dataset.from_dict({"protocol_type": ["tcp", "sctp?"]}, labels=[0, 1]))


def test_baseline_files(grid):
    out, _, _, _ = grid
    manifest = json.loads((out / "manifest.json").read_text())
    names = [b["name"] for b in manifest["baseline"]]
    assert names == ["L_MVF+IANA+MN", "T_MVF+IANA+MN"]
    l_ds = read_arff(out / "L_MVF+IANA+MN.arff")
    assert l_ds.nominal_names() == []
    m = l_ds.numeric_matrix()
    assert m.min() >= 0.0 and m.max() <= 1.0
    assert np.isfinite(read_arff(out / "T_MVF+IANA+MN.arff").numeric_matrix()).all()
