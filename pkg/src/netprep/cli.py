"""Command-line front end: ``netprep <subcommand> [flags]``.

Settings can also come from a ``key=value`` config file (``--config`` or the
``NETPREP_CONFIG`` environment variable). Keys are flag names without the
leading dashes; flags given on the command line win.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import shutil
import sys
from pathlib import Path

from netprep import __version__, pmf
from netprep import classifiers as clf
from netprep.dataset import PRESETS, Dataset, FeatureSet, project
from netprep.discretize import DEFAULT_BINS, apply as apply_bins, fit_equal_frequency
from netprep.variants import generate_baseline_iana, generate_variants, load_manifest, parse_variant_name
from netprep.info_gain import rank
from netprep.io import read_arff, read_dataset, write_dataset
from netprep.normalize import Method, apply_fitted, hybrid_normalize, normalize_numeric, write_params
from netprep.sbs import MetricRule, Mode, run_modified_sbs
from netprep.synthetic import nslkdd_like_split

log = logging.getLogger("netprep")

DEFAULTS = {
    "bins": DEFAULT_BINS,
    "method": "mn",
    "pmf": "on",
    "classifiers": "nb,dt,knn",
    "mode": "strict",
    "metric_rule": "either",
    "workers": 1,
    "seed": 0,
    "train_size": 5000,
    "test_size": 1000,
    "log_level": "warning",
}
_INT_KEYS = {"bins", "workers", "seed", "train_size", "test_size"}


class CliError(Exception):
    pass


def read_config(path: str | os.PathLike) -> dict:
    cfg = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise CliError(f"{path}: line {lineno}: expected key=value")
            key, value = (p.strip() for p in line.split("=", 1))
            cfg[key.lstrip("-").replace("-", "_")] = value
    return cfg


def _settings(args: argparse.Namespace) -> dict:
    config_path = args.config or os.environ.get("NETPREP_CONFIG")
    cfg = read_config(config_path) if config_path else {}
    merged = dict(DEFAULTS)
    merged.update(cfg)
    for key, value in vars(args).items():
        if value is not None and key not in ("command", "func", "config"):
            merged[key] = value
    for key in _INT_KEYS:
        if merged.get(key) is not None:
            merged[key] = int(merged[key])
    return merged


def _need(s: dict, *keys: str) -> None:
    missing = [k for k in keys if not s.get(k)]
    if missing:
        raise CliError("missing required setting(s): " + ", ".join("--" + k.replace("_", "-") for k in missing))


def _parse_rename(text) -> dict:
    if not text:
        return {}
    if isinstance(text, dict):
        return text
    out = {}
    for item in str(text).split(","):
        if item.strip():
            old, new = item.split("=", 1)
            out[old.strip()] = new.strip()
    return out


def _feature_set(s: dict, dataset: Dataset) -> FeatureSet:
    choice = s.get("set")
    rename = _parse_rename(s.get("rename"))
    if not choice:
        return FeatureSet.custom(dataset.names)
    if choice.lower().startswith("custom:"):
        text = Path(choice[7:]).read_text(encoding="utf-8")
        names = [n.strip() for n in text.replace(",", "\n").splitlines() if n.strip()]
        fs = FeatureSet.custom(names)
    else:
        try:
            fs = PRESETS[choice.upper()]
        except KeyError:
            raise CliError(f"unknown feature set {choice!r}") from None
    return fs.renamed(rename) if rename else fs


def _load(path: str, s: dict) -> Dataset:
    schema = None
    if path.lower().endswith(".csv"):
        if not s.get("schema"):
            raise CliError("CSV input needs --schema <file.arff> (header supplying the feature kinds)")
        schema = read_arff(s["schema"]).descriptors
    return read_dataset(path, schema)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _classifiers(s: dict) -> list[clf.Algorithm]:
    return [clf.Algorithm.parse(c) for c in str(s["classifiers"]).split(",") if c.strip()]


def _method(s: dict) -> Method | None:
    m = str(s.get("method") or "").lower()
    return None if m in ("", "none", "n") else Method.parse(m)


def _pmf_on(s: dict) -> bool:
    v = str(s.get("pmf")).lower()
    if v not in ("on", "off", "true", "false", "1", "0"):
        raise CliError(f"--pmf must be on or off, not {v!r}")
    return v in ("on", "true", "1")


# ---------------------------------------------------------------- commands


def cmd_convert(s: dict) -> None:
    _need(s, "in", "out")
    write_dataset(_load(s["in"], s), s["out"])


def cmd_discretize(s: dict) -> None:
    _need(s, "in", "out")
    ds = _load(s["in"], s)
    cuts = {}
    out = ds
    for name in ds.numeric_names():
        model = fit_equal_frequency(ds.column(name), s["bins"], feature=name)
        cuts[name] = list(model.cut_points)
        out = out.with_column(name, ds.feature(name), apply_bins(model, ds.column(name)).astype(float))
    write_dataset(out, s["out"])
    sys.stdout.write(json.dumps({"bins": s["bins"], "cut_points": cuts}, indent=2) + "\n")


def cmd_rank(s: dict) -> None:
    _need(s, "in")
    ds = _load(s["in"], s)
    ds = project(ds, _feature_set(s, ds))
    ranking = rank(ds, ds.names, s["bins"])
    _emit(json.dumps(ranking.to_dict(), indent=2) + "\n", s.get("out"))


def _outputs_dir(s: dict) -> Path:
    _need(s, "out")
    out = Path(s["out"])
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_pmf(s: dict) -> None:
    src = s.get("train") or s.get("in")
    if not src:
        raise CliError("missing required setting(s): --in or --train")
    train = _load(src, s)
    out = _outputs_dir(s)
    mapped, tables = pmf.fit_transform_dataset(train)
    write_dataset(mapped, out / f"{train.name}.arff")
    pmf.write_tables(tables, out / f"{train.name}.pmf")
    if s.get("test"):
        test = _load(s["test"], s)
        write_dataset(pmf.transform_dataset(test, tables), out / f"{test.name}.arff")


def cmd_normalize(s: dict) -> None:
    src = s.get("train") or s.get("in")
    if not src:
        raise CliError("missing required setting(s): --in or --train")
    train = _load(src, s)
    out = _outputs_dir(s)
    method = _method(s)
    if _pmf_on(s):
        norm, tables, params = hybrid_normalize(train, method)
        pmf.write_tables(tables, out / f"{train.name}.pmf")
    else:
        tables = []
        norm, params = normalize_numeric(train, method) if method else (train, [])
    write_dataset(norm, out / f"{train.name}.arff")
    if params:
        write_params(params, out / f"{train.name}.norm")
    if s.get("test"):
        test = _load(s["test"], s)
        if _pmf_on(s):
            t = apply_fitted(tables, params, test, method is not None)
        else:
            t = test
            by_name = {p.feature: p for p in params}
            for name in test.numeric_names() if method else []:
                t = t.with_column(name, test.feature(name), by_name[name].apply(test.column(name)))
        write_dataset(t, out / f"{test.name}.arff")


def cmd_select(s: dict) -> None:
    _need(s, "train", "test")
    train, test = _load(s["train"], s), _load(s["test"], s)
    fs = _feature_set(s, train)
    train, test = project(train, fs), project(test, fs)
    result = run_modified_sbs(
        train,
        test,
        _classifiers(s),
        mode=Mode(s["mode"]),
        k_bins=s["bins"],
        metric_rule=MetricRule(s["metric_rule"]),
        workers=s["workers"],
    )
    _emit(result.to_json(), s.get("out"))
    sys.stderr.write(result.report())


def cmd_generate(s: dict) -> None:
    _need(s, "train", "test", "out")
    train, test = _load(s["train"], s), _load(s["test"], s)
    rename = _parse_rename(s.get("rename"))
    manifest = generate_variants(train, test, s["out"], rename=rename)
    if str(s.get("baseline", "off")).lower() in ("on", "true", "1"):
        for fs in PRESETS.values():
            generate_baseline_iana(train, test, s["out"], fs, rename=rename)
    log.info("wrote %d datasets to %s", len(manifest["datasets"]), s["out"])


def cmd_evaluate(s: dict) -> None:
    _need(s, "out")
    algos = _classifiers(s)
    pairs = []
    if s.get("in"):
        root = Path(s["in"])
        manifest = load_manifest(root)
        entries = manifest["datasets"] + manifest.get("baseline", [])
        by_name = {e["name"]: e for e in entries}
        for e in entries:
            if e["split"] == "T":
                pairs.append((root / by_name[e["fitted_on"]]["path"], root / e["path"]))
    else:
        _need(s, "train", "test")
        pairs.append((Path(s["train"]), Path(s["test"])))
    reports = []
    for l_path, t_path in pairs:
        train, test = _load(str(l_path), s), _load(str(t_path), s)
        for a in algos:
            model = clf.train(a, train)
            reports.append(clf.evaluate(model, test))
            log.info("%s on %s done", a.value, test.name)
    clf.write_reports(reports, s["out"])


_VARIANT_ORDER = ["-PMF-N", "+PMF-N", "+PMF+DN", "+PMF+SN", "+PMF+MN", "+IANA+MN"]


def _split_name(name: str) -> tuple[str, str]:
    """``T_MVF+PMF+DN`` -> (``MVF``, ``+PMF+DN``); other names pass through."""
    try:
        spec = parse_variant_name(name)
        return spec.feature_set, name.split("_", 1)[1][len(spec.feature_set):]
    except ValueError:
        if "_" in name:
            rest = name.split("_", 1)[1]
            for fs in PRESETS:
                if rest.startswith(fs) and rest[len(fs):] in _VARIANT_ORDER:
                    return fs, rest[len(fs):]
        return name, ""


def summary_table(reports: list[clf.EvaluationReport]) -> str:
    """Rows: classifier x feature set x metric; columns: variant."""
    cells: dict[tuple[str, str, str], dict[str, float]] = {}
    variants: list[str] = []
    for r in reports:
        fs, variant = _split_name(r.dataset)
        if variant not in variants:
            variants.append(variant)
        for metric in ("detection_rate", "false_positive_rate", "test_time"):
            cells.setdefault((r.classifier, fs, metric), {})[variant] = getattr(r, metric)
    variants.sort(key=lambda v: (_VARIANT_ORDER.index(v) if v in _VARIANT_ORDER else len(_VARIANT_ORDER), v))
    lines = ["\t".join(["classifier", "feature_set", "metric", *variants])]
    for (c, fs, metric), row in cells.items():
        vals = [f"{row[v]:.6f}" if v in row else "" for v in variants]
        lines.append("\t".join([c, fs, metric, *vals]))
    return "\n".join(lines) + "\n"


def cmd_report(s: dict) -> None:
    _need(s, "in")
    reports = []
    for path in str(s["in"]).split(","):
        reports.extend(clf.read_reports(path))
    _emit(summary_table(reports), s.get("out"))


def cmd_synth(s: dict) -> None:
    out = _outputs_dir(s)
    train, test = nslkdd_like_split(s["train_size"], s["test_size"], s["seed"])
    write_dataset(train, out / "train.arff")
    write_dataset(test, out / "test.arff")


COMMANDS = {
    "convert": (cmd_convert, "convert between ARFF and CSV (by file extension)"),
    "discretize": (cmd_discretize, "equal-frequency binning of numeric features"),
    "rank": (cmd_rank, "information-gain ranking as JSON"),
    "pmf": (cmd_pmf, "map nominal features to relative frequencies"),
    "normalize": (cmd_normalize, "hybrid normalization (PMF + numeric method)"),
    "select": (cmd_select, "modified sequential backward search"),
    "generate": (cmd_generate, "generate the L/T dataset variant grid"),
    "evaluate": (cmd_evaluate, "train/evaluate classifiers, write JSON-lines reports"),
    "report": (cmd_report, "summarize reports into a tab-separated table"),
    "synth": (cmd_synth, "write a synthetic NSL-KDD-shaped train/test pair"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--in", dest="in")
    common.add_argument("--train")
    common.add_argument("--test")
    common.add_argument("--out")
    common.add_argument("--schema", help="ARFF file whose header describes CSV input")
    common.add_argument("--bins", type=int)
    common.add_argument("--set", help="mvf | mvrf | custom:<file>")
    common.add_argument("--rename", help="old=new[,old=new...] applied to preset names")
    common.add_argument("--method", help="dn | mn | sn | none")
    common.add_argument("--pmf", help="on | off")
    common.add_argument("--classifiers", help="comma-separated: nb,dt,knn")
    common.add_argument("--mode", choices=[m.value for m in Mode])
    common.add_argument("--metric-rule", dest="metric_rule", choices=[m.value for m in MetricRule])
    common.add_argument("--workers", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--baseline", help="on | off: also emit the assigned-number baseline")
    common.add_argument("--train-size", dest="train_size", type=int)
    common.add_argument("--test-size", dest="test_size", type=int)
    common.add_argument("--config")
    common.add_argument("--log-level", dest="log_level")

    parser = argparse.ArgumentParser(prog="netprep", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text)
    return parser


def _snapshot(paths) -> set[Path]:
    seen = set()
    for p in paths:
        p = Path(p)
        if p.is_dir():
            seen.update(p.rglob("*"))
            seen.add(p)
        elif p.exists():
            seen.add(p)
    return seen


def _cleanup(paths, before: set[Path]) -> None:
    for p in paths:
        p = Path(p)
        if p.is_dir():
            new = sorted((q for q in p.rglob("*") if q not in before), key=lambda q: len(q.parts), reverse=True)
            for q in new:
                shutil.rmtree(q) if q.is_dir() else q.unlink()
            if p not in before:
                shutil.rmtree(p, ignore_errors=True)
        elif p.exists() and p not in before:
            p.unlink()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        s = _settings(args)
    except Exception as exc:  # noqa: BLE001
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 2
    logging.basicConfig(level=str(s["log_level"]).upper(), stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    outputs = [s["out"]] if s.get("out") else []
    before = _snapshot(outputs)
    try:
        COMMANDS[args.command][0](s)
    except Exception as exc:  # noqa: BLE001
        _cleanup(outputs, before)
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        msg = str(msg).replace("\n", " ")
        sys.stderr.write(f"error: {type(exc).__name__}: {msg}\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
