"""ARFF (dense subset) and header-less CSV reading and writing.

Supported ARFF: ``@relation``, ``@attribute <name> numeric|real|integer``,
``@attribute <name> {a,b,...}``, ``@data`` and comma-separated rows. ``%``
starts a comment. The last attribute must be named ``class``; any class symbol
other than ``normal`` becomes Anomaly.
"""
from __future__ import annotations

import csv
import io
import math
import os
import re
from contextlib import contextmanager
from typing import BinaryIO, Sequence

import numpy as np

from netprep.dataset import (
    Dataset,
    FeatureDescriptor,
    FeatureKind,
    Label,
    is_boolean_domain,
)


class ParseError(ValueError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        where = f"line {lineno}: " if lineno is not None else ""
        super().__init__(where + message)


_NUMERIC_TYPES = {"numeric", "real", "integer"}
_SPECIAL = re.compile(r"[\s,{}'\"%\\]")


@contextmanager
def _open(target, mode):
    if isinstance(target, (str, os.PathLike)):
        with open(target, mode) as fh:
            yield fh
    else:
        yield target


def _decode(source) -> list[str]:
    with _open(source, "rb") as fh:
        raw = fh.read()
    if isinstance(raw, str):
        text = raw
    else:
        text = raw.decode("utf-8")
    return text.splitlines()


def _unquote(token: str, lineno: int) -> str:
    token = token.strip()
    if len(token) >= 2 and token[0] == token[-1] and token[0] in "'\"":
        body = token[1:-1]
        out = []
        it = iter(body)
        for ch in it:
            if ch == "\\":
                try:
                    out.append(next(it))
                except StopIteration:
                    raise ParseError("dangling escape", lineno) from None
            else:
                out.append(ch)
        return "".join(out)
    if token[:1] in ("'", '"'):
        raise ParseError(f"unterminated quote in {token!r}", lineno)
    return token


def _split_values(text: str, lineno: int, data_row: bool = False) -> list[str]:
    """Split on commas outside quotes; tokens are unquoted and stripped.

    In data rows an unquoted ``?`` or empty cell is a missing value (an error).
    """
    if "'" not in text and '"' not in text:
        tokens = [t.strip() for t in text.split(",")]
        if data_row:
            _check_missing(tokens, lineno)
        return tokens
    tokens, buf, quote, escaped = [], [], None, False
    for ch in text:
        if escaped:
            buf.append(ch)
            escaped = False
        elif ch == "\\" and quote:
            buf.append(ch)
            escaped = True
        elif quote:
            buf.append(ch)
            if ch == quote:
                quote = None
        elif ch in "'\"":
            buf.append(ch)
            quote = ch
        elif ch == ",":
            tokens.append("".join(buf))
            buf = []
        else:
            buf.append(ch)
    if quote:
        raise ParseError("unterminated quote", lineno)
    tokens.append("".join(buf))
    if data_row:
        _check_missing([t.strip() for t in tokens], lineno)
    return [_unquote(t, lineno) for t in tokens]


def _check_missing(tokens: list[str], lineno: int) -> None:
    for j, t in enumerate(tokens):
        if t == "?" or t == "":
            raise ParseError(f"missing value in column {j + 1}", lineno)


def _quote(symbol: str) -> str:
    if symbol and not _SPECIAL.search(symbol) and symbol != "?":
        return symbol
    escaped = symbol.replace("\\", "\\\\").replace("'", "\\'")
    return f"'{escaped}'"


def _format_number(v: float) -> str:
    # repr is the shortest string that round-trips exactly
    if v.is_integer() and abs(v) < 1e15 and math.copysign(1.0, v) > 0:
        return str(int(v))
    return repr(v)


def _parse_attribute(rest: str, lineno: int):
    rest = rest.strip()
    if rest[:1] in ("'", '"'):
        q = rest[0]
        end = 1
        while end < len(rest):
            if rest[end] == "\\":
                end += 2
                continue
            if rest[end] == q:
                break
            end += 1
        if end >= len(rest):
            raise ParseError("unterminated attribute name", lineno)
        name = _unquote(rest[: end + 1], lineno)
        type_part = rest[end + 1 :].strip()
    else:
        parts = rest.split(None, 1)
        if len(parts) != 2:
            raise ParseError("attribute declaration needs a name and a type", lineno)
        name, type_part = parts[0], parts[1].strip()
    if type_part.startswith("{"):
        if not type_part.endswith("}"):
            raise ParseError("unterminated nominal domain", lineno)
        inner = type_part[1:-1].strip()
        domain = tuple(_split_values(inner, lineno)) if inner else ()
        if len(set(domain)) != len(domain):
            raise ParseError(f"duplicate symbol in domain of {name!r}", lineno)
        return name, domain
    if type_part.lower() in _NUMERIC_TYPES:
        return name, None
    raise ParseError(f"unsupported attribute type {type_part!r}", lineno)


def read_arff(source: BinaryIO | str | os.PathLike) -> Dataset:
    """Parse an ARFF byte stream (or path) into a :class:`Dataset`."""
    lines = _decode(source)
    relation = None
    attrs: list[tuple[str, tuple[str, ...] | None, int]] = []
    data_start = None
    for lineno, line in enumerate(lines, 1):
        s = line.strip()
        if not s or s.startswith("%"):
            continue
        low = s.lower()
        if low.startswith("@relation"):
            rel = s[len("@relation"):].strip()
            if not rel:
                raise ParseError("@relation needs a name", lineno)
            relation = _unquote(rel, lineno)
        elif low.startswith("@attribute"):
            name, domain = _parse_attribute(s[len("@attribute"):], lineno)
            attrs.append((name, domain, lineno))
        elif low.startswith("@data"):
            data_start = lineno
            break
        else:
            raise ParseError(f"unexpected header line {s!r}", lineno)
    if relation is None:
        raise ParseError("missing @relation")
    if data_start is None:
        raise ParseError("missing @data section")
    if not attrs or attrs[-1][0].lower() != "class":
        raise ParseError("last attribute must be the class attribute", attrs[-1][2] if attrs else None)
    class_name, class_domain, class_line = attrs[-1]
    if class_domain is None:
        raise ParseError("class attribute must be nominal", class_line)
    features = attrs[:-1]
    names = [a[0] for a in features]
    if len(set(names)) != len(names):
        raise ParseError("duplicate attribute names")

    n = len(features)
    raw_cols: list[list[str]] = [[] for _ in range(n)]
    raw_labels: list[str] = []
    linenos: list[int] = []
    for lineno in range(data_start + 1, len(lines) + 1):
        s = lines[lineno - 1].strip()
        if not s or s.startswith("%"):
            continue
        if s.startswith("{"):
            raise ParseError("sparse ARFF rows are not supported", lineno)
        values = _split_values(s, lineno, data_row=True)
        if len(values) != n + 1:
            raise ParseError(f"expected {n + 1} values, found {len(values)}", lineno)
        for j in range(n):
            raw_cols[j].append(values[j])
        raw_labels.append(values[n])
        linenos.append(lineno)

    class_lookup = set(class_domain)
    for sym, ln in zip(raw_labels, linenos):
        if sym not in class_lookup:
            raise ParseError(f"class symbol {sym!r} not declared", ln)
    labels = [Label.from_symbol(s) for s in raw_labels]

    descs, cols = [], []
    for j, (name, domain, _) in enumerate(features):
        if domain is not None and not is_boolean_domain(domain):
            descs.append(FeatureDescriptor(name, j, FeatureKind.NOMINAL, domain))
            cols.append(_encode_nominal(name, domain, raw_cols[j], linenos))
        else:
            if domain is not None:
                _check_members(name, domain, raw_cols[j], linenos)
            descs.append(FeatureDescriptor(name, j, FeatureKind.NUMERIC))
            cols.append(_parse_numeric(name, raw_cols[j], linenos))
    return Dataset(descs, cols, labels, name=relation)


def _check_members(name, domain, values, linenos):
    allowed = set(domain)
    for v, ln in zip(values, linenos):
        if v not in allowed:
            raise ParseError(f"symbol {v!r} not in domain of {name!r}", ln)


def _encode_nominal(name, domain, values, linenos) -> np.ndarray:
    lookup = {s: k for k, s in enumerate(domain)}
    out = np.empty(len(values), dtype=np.int32)
    for i, (v, ln) in enumerate(zip(values, linenos)):
        try:
            out[i] = lookup[v]
        except KeyError:
            raise ParseError(f"symbol {v!r} not in domain of {name!r}", ln) from None
    return out


def _parse_numeric(name, values, linenos) -> np.ndarray:
    try:
        out = np.array(values, dtype=np.float64)
    except ValueError:
        out = None
    if out is not None and np.isfinite(out).all():
        return out
    for v, ln in zip(values, linenos):
        try:
            x = float(v)
        except ValueError:
            raise ParseError(f"non-numeric value {v!r} in {name!r}", ln) from None
        if not np.isfinite(x):
            raise ParseError(f"non-finite value {v!r} in {name!r}", ln)
    raise AssertionError("unreachable")


def _cell_strings(dataset: Dataset) -> list[list[str]]:
    cols = []
    for d, col in zip(dataset.descriptors, dataset.columns):
        if d.is_nominal:
            quoted = [_quote(s) for s in d.domain]
            cols.append([quoted[c] for c in col])
        else:
            cols.append([_format_number(float(v)) for v in col])
    cols.append([Label(int(v)).symbol for v in dataset.labels])
    return cols


def dumps_arff(dataset: Dataset) -> str:
    out = io.StringIO()
    out.write(f"@relation {_quote(dataset.name)}\n\n")
    for d in dataset.descriptors:
        if d.is_nominal:
            out.write(f"@attribute {_quote(d.name)} {{{','.join(_quote(s) for s in d.domain)}}}\n")
        else:
            out.write(f"@attribute {_quote(d.name)} numeric\n")
    out.write("@attribute class {normal,anomaly}\n\n@data\n")
    cols = _cell_strings(dataset)
    for row in zip(*cols):
        out.write(",".join(row))
        out.write("\n")
    return out.getvalue()


def write_arff(dataset: Dataset, sink: BinaryIO | str | os.PathLike) -> None:
    data = dumps_arff(dataset).encode("utf-8")
    with _open(sink, "wb") as fh:
        fh.write(data)


def read_csv(
    source: BinaryIO | str | os.PathLike,
    schema: Sequence[FeatureDescriptor],
    name: str = "dataset",
) -> Dataset:
    """Read header-less CSV rows of ``len(schema)`` features plus a class column.

    The schema is authoritative: nominal descriptors fix the symbol domain.
    Boolean-like nominal descriptors are read as numeric 0/1.
    """
    lines = _decode(source)
    n = len(schema)
    raw_cols: list[list[str]] = [[] for _ in range(n)]
    raw_labels, linenos = [], []
    reader = csv.reader(lines)
    for row in reader:
        lineno = reader.line_num
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != n + 1:
            raise ParseError(f"expected {n + 1} values, found {len(row)}", lineno)
        # CSV loses quoting, so "?" and "" are only missing where no symbol can match
        for j, v in enumerate(row):
            if j < n and schema[j].is_nominal and v in schema[j].domain:
                continue
            if v.strip() in ("", "?"):
                raise ParseError(f"missing value in column {j + 1}", lineno)
        for j in range(n):
            raw_cols[j].append(row[j])
        raw_labels.append(row[n])
        linenos.append(lineno)

    descs, cols = [], []
    for j, d in enumerate(schema):
        if d.is_nominal and not is_boolean_domain(d.domain):
            descs.append(FeatureDescriptor(d.name, j, FeatureKind.NOMINAL, tuple(d.domain)))
            cols.append(_encode_nominal(d.name, d.domain, raw_cols[j], linenos))
        else:
            if d.is_nominal:
                _check_members(d.name, d.domain, raw_cols[j], linenos)
            descs.append(FeatureDescriptor(d.name, j, FeatureKind.NUMERIC))
            cols.append(_parse_numeric(d.name, raw_cols[j], linenos))
    labels = [Label.from_symbol(s) for s in raw_labels]
    return Dataset(descs, cols, labels, name=name)


def dumps_csv(dataset: Dataset) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    cols = []
    for d, col in zip(dataset.descriptors, dataset.columns):
        if d.is_nominal:
            cols.append([d.domain[c] for c in col])
        else:
            cols.append([_format_number(float(v)) for v in col])
    cols.append([Label(int(v)).symbol for v in dataset.labels])
    for row in zip(*cols):
        writer.writerow(row)
    return out.getvalue()


def write_csv(dataset: Dataset, sink: BinaryIO | str | os.PathLike) -> None:
    data = dumps_csv(dataset).encode("utf-8")
    with _open(sink, "wb") as fh:
        fh.write(data)


def read_dataset(path: str | os.PathLike, schema=None) -> Dataset:
    """Dispatch on extension: ``.arff`` or ``.csv`` (the latter needs a schema)."""
    path = os.fspath(path)
    if path.lower().endswith(".csv"):
        if schema is None:
            raise ValueError("reading CSV needs a schema (e.g. from an ARFF header)")
        name = os.path.splitext(os.path.basename(path))[0]
        return read_csv(path, schema, name=name)
    return read_arff(path)


def write_dataset(dataset: Dataset, path: str | os.PathLike) -> None:
    if os.fspath(path).lower().endswith(".csv"):
        write_csv(dataset, path)
    else:
        write_arff(dataset, path)
