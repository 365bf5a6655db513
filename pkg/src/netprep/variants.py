"""Generate the named grid of learning/testing dataset variants.

Names follow ``{L|T}_{MVF|MVRF}{+PMF|-PMF}{+DN|+MN|+SN|-N}``. Transforms are
always fitted on the learning (L) split and re-applied to the testing (T) split.

Output layout::

    <out>/<name>.arff
    <out>/params/<name>.pmf     (variants with +PMF)
    <out>/params/<name>.norm    (variants with a numeric normalization)
    <out>/manifest.json
"""
from __future__ import annotations

import hashlib
import json
import os
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Mapping

import numpy as np

from netprep import pmf
from netprep.dataset import MVF, MVRF, PRESETS, Dataset, FeatureDescriptor, FeatureKind, FeatureSet, project
from netprep.io import write_arff
from netprep.normalize import (
    Method,
    apply_fitted,
    hybrid_normalize,
    normalize_numeric,
    write_params,
)


@dataclass(frozen=True)
class VariantSpec:
    split: str  # "L" or "T"
    feature_set: str  # "MVF" or "MVRF"
    pmf: bool
    normalization: Method | None

    def __post_init__(self):
        if self.split not in ("L", "T"):
            raise ValueError(f"split must be L or T, not {self.split!r}")
        if self.feature_set not in PRESETS:
            raise ValueError(f"unknown feature set {self.feature_set!r}")
        if self.normalization is not None and not self.pmf:
            raise ValueError("normalized variants always include the PMF mapping")

    @property
    def name(self) -> str:
        return variant_name(self)

    def counterpart(self, split: str) -> "VariantSpec":
        return VariantSpec(split, self.feature_set, self.pmf, self.normalization)


def variant_name(spec: VariantSpec) -> str:
    pmf_part = "+PMF" if spec.pmf else "-PMF"
    norm_part = "-N" if spec.normalization is None else "+" + spec.normalization.value
    return f"{spec.split}_{spec.feature_set}{pmf_part}{norm_part}"


_NAME = re.compile(r"^([LT])_(MVF|MVRF)([+-])PMF(-N|\+DN|\+MN|\+SN)$")


def parse_variant_name(name: str) -> VariantSpec:
    m = _NAME.match(name)
    if not m:
        raise ValueError(f"malformed dataset name {name!r}")
    split, fs, pmf_sign, norm = m.groups()
    method = None if norm == "-N" else Method(norm[1:])
    return VariantSpec(split, fs, pmf_sign == "+", method)


def all_specs() -> list[VariantSpec]:
    """The 20 variants, learning split first within each pair."""
    out = []
    for norm_pmf in ((False, None), (True, None), (True, Method.DECIMAL),
                     (True, Method.MINMAX), (True, Method.STATISTICAL)):
        for fs in ("MVF", "MVRF"):
            for split in ("L", "T"):
                out.append(VariantSpec(split, fs, *norm_pmf))
    return out


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _entry(path: Path, ds: Dataset, spec: VariantSpec | None = None) -> dict:
    e = {
        "name": ds.name,
        "path": path.name,
        "rows": ds.n_instances,
        "features": ds.n_features,
        "nominal_attributes": len(ds.nominal_names()),
    }
    if spec is not None:
        e.update(
            split=spec.split,
            feature_set=spec.feature_set,
            pmf=spec.pmf,
            normalization=None if spec.normalization is None else spec.normalization.value,
        )
    return e


def _preset(name: str, rename: Mapping[str, str] | None) -> FeatureSet:
    fs = PRESETS[name]
    return fs.renamed(rename) if rename else fs


def generate_variants(
    train: Dataset,
    test: Dataset,
    out: str | os.PathLike,
    rename: Mapping[str, str] | None = None,
) -> dict:
    """Write the 20 variant files plus fitted parameters; return the manifest."""
    out = Path(out)
    params_dir = out / "params"
    params_dir.mkdir(parents=True, exist_ok=True)
    entries = []
    for fs_name in ("MVF", "MVRF"):
        fs = _preset(fs_name, rename)
        base = {"L": project(train, fs), "T": project(test, fs)}
        for spec in (s for s in all_specs() if s.feature_set == fs_name and s.split == "L"):
            l_name = spec.name
            t_spec = spec.counterpart("T")
            t_name = t_spec.name
            param_files: dict[str, str] = {}
            if not spec.pmf:
                pair = {"L": base["L"], "T": base["T"]}
            else:
                l_ds, tables, params = hybrid_normalize(base["L"], spec.normalization)
                t_ds = apply_fitted(tables, params, base["T"], spec.normalization is not None)
                pair = {"L": l_ds, "T": t_ds}
                for nm in (l_name, t_name):
                    pmf.write_tables(tables, params_dir / f"{nm}.pmf")
                    if spec.normalization is not None:
                        write_params(params, params_dir / f"{nm}.norm")
            for split, sp in (("L", spec), ("T", t_spec)):
                nm = sp.name
                ds = pair[split].renamed(nm)
                path = out / f"{nm}.arff"
                write_arff(ds, path)
                e = _entry(path, ds, sp)
                files = {}
                for ext in ("pmf", "norm"):
                    p = params_dir / f"{nm}.{ext}"
                    if p.exists():
                        files[ext] = {"path": f"params/{p.name}", "sha256": _sha256(p)}
                e["params"] = files
                e["fitted_on"] = l_name
                entries.append(e)
    manifest = {
        "datasets": entries,
        "rename": dict(rename or {}),
        "train": {"name": train.name, "rows": train.n_instances},
        "test": {"name": test.name, "rows": test.n_instances},
    }
    _write_manifest(out, manifest)
    return manifest


def _write_manifest(out: Path, manifest: dict) -> None:
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")


def load_manifest(out: str | os.PathLike) -> dict:
    return json.loads((Path(out) / "manifest.json").read_text(encoding="utf-8"))


def load_iana_table() -> dict[str, dict[str, int]]:
    """``{"protocol": {...}, "service": {...}}`` from the bundled data file."""
    table: dict[str, dict[str, int]] = {}
    text = resources.files("netprep").joinpath("data/iana_numbers.tsv").read_text(encoding="utf-8")
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        kind, symbol, number = line.split("\t")
        table.setdefault(kind, {})[symbol] = int(number)
    return table


_IANA_KIND = {"protocol_type": "protocol", "service": "service"}


def iana_encode(dataset: Dataset, table: Mapping[str, Mapping[str, int]] | None = None) -> Dataset:
    """Replace protocol/service symbols by their assigned numbers."""
    table = table or load_iana_table()
    out = dataset
    for d in dataset.descriptors:
        if not d.is_nominal:
            continue
        kind = _IANA_KIND.get(d.name)
        if kind is None:
            raise KeyError(f"no assigned-number table for nominal feature {d.name!r}")
        numbers = []
        for s in d.domain:
            if s not in table[kind]:
                raise KeyError(f"{kind} symbol {s!r} missing from the assigned-number table")
            numbers.append(table[kind][s])
        values = np.array(numbers, dtype=np.float64)[dataset.column(d.name)]
        out = out.with_column(d.name, FeatureDescriptor(d.name, d.index, FeatureKind.NUMERIC), values)
    return out


def generate_baseline_iana(
    train: Dataset,
    test: Dataset,
    out: str | os.PathLike,
    feature_set: FeatureSet = MVF,
    rename: Mapping[str, str] | None = None,
) -> list[dict]:
    """Assigned-number encoding followed by min-max scaling fitted on L."""
    out = Path(out)
    (out / "params").mkdir(parents=True, exist_ok=True)
    fs = feature_set.renamed(rename) if rename else feature_set
    table = load_iana_table()
    l_ds = iana_encode(project(train, fs), table)
    t_ds = iana_encode(project(test, fs), table)
    l_norm, params = normalize_numeric(l_ds, Method.MINMAX)
    t_norm = apply_fitted([], params, t_ds)
    entries = []
    for split, ds in (("L", l_norm), ("T", t_norm)):
        nm = f"{split}_{feature_set.name}+IANA+MN"
        ds = ds.renamed(nm)
        path = out / f"{nm}.arff"
        write_arff(ds, path)
        norm_path = out / "params" / f"{nm}.norm"
        write_params(params, norm_path)
        e = _entry(path, ds)
        e.update(split=split, feature_set=feature_set.name, baseline="IANA", normalization="MN")
        e["params"] = {"norm": {"path": f"params/{norm_path.name}", "sha256": _sha256(norm_path)}}
        e["fitted_on"] = f"L_{feature_set.name}+IANA+MN"
        entries.append(e)
    manifest_path = out / "manifest.json"
    if manifest_path.exists():
        manifest = load_manifest(out)
        names = {e["name"] for e in entries}
        manifest["baseline"] = [b for b in manifest.get("baseline", []) if b["name"] not in names] + entries
        _write_manifest(out, manifest)
    return entries


__all__ = [
    "MVF",
    "MVRF",
    "VariantSpec",
    "variant_name",
    "parse_variant_name",
    "all_specs",
    "generate_variants",
    "generate_baseline_iana",
    "iana_encode",
    "load_iana_table",
    "load_manifest",
]
