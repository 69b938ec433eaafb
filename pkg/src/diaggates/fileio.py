"""Matrix text files and record datasets.

Matrix files: first non-comment line is the order ``N``; then ``N`` lines of
``N`` whitespace-separated entries in Python complex syntax (``0.5``,
``1+2j``, ``-0.25j``). ``#`` starts a comment.

Datasets hold flat records (dicts of scalars) in one of two formats:

``jsonl``
    First line ``{"manifest": {...}}``, then one JSON object per record.
``csv``
    First line ``# manifest: {...}``, then a header row and one row per
    record. Floats are written with 17 significant digits, ``None`` as an
    empty cell.

Both formats round-trip: ``read_dataset(write_dataset(...))`` returns the
same manifest and records.
"""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from .errors import InvalidInputError
from .linalg_core import HERMITIAN_TOL

FORMATS = ("jsonl", "csv")
_MANIFEST_PREFIX = "# manifest: "


def format_complex(z: complex) -> str:
    z = complex(z)
    return f"{z.real:.17g}{z.imag:+.17g}j"


def parse_matrix(text: str, *, hermitian: bool = False, source: str = "<input>") -> np.ndarray:
    """Parse the matrix text format; optionally require a Hermitian matrix."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append((lineno, line.split()))
    if not rows:
        raise InvalidInputError(f"{source}: empty matrix file")
    lineno, head = rows[0]
    try:
        (N,) = head
        N = int(N)
        if N < 1:
            raise ValueError
    except ValueError:
        raise InvalidInputError(f"{source}:{lineno}: header must be a single positive integer N")
    body = rows[1:]
    if len(body) != N:
        raise InvalidInputError(f"{source}: expected {N} matrix rows, found {len(body)}")
    M = np.empty((N, N), dtype=complex)
    for i, (lineno, tokens) in enumerate(body):
        if len(tokens) != N:
            raise InvalidInputError(
                f"{source}:{lineno}: row {i} has {len(tokens)} entries, expected {N}")
        for j, tok in enumerate(tokens):
            try:
                M[i, j] = complex(tok)
            except ValueError:
                raise InvalidInputError(
                    f"{source}:{lineno}: cannot parse entry (row {i}, col {j}): {tok!r}")
    if not np.all(np.isfinite(M)):
        raise InvalidInputError(f"{source}: matrix has non-finite entries")
    if hermitian:
        diff = np.abs(M - M.conj().T)
        i, j = np.unravel_index(np.argmax(diff), diff.shape)
        if diff[i, j] > HERMITIAN_TOL:
            raise InvalidInputError(
                f"{source}: matrix is not Hermitian: entry (row {i}, col {j}) = {M[i, j]} "
                f"but conj of (row {j}, col {i}) = {M[j, i].conjugate()}")
    return M


def read_matrix(path, *, hermitian: bool = False) -> np.ndarray:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise OSError(f"cannot read matrix file {path}: {exc.strerror or exc}") from exc
    return parse_matrix(text, hermitian=hermitian, source=str(path))


def format_matrix(M) -> str:
    M = np.asarray(M)
    lines = [str(M.shape[0])]
    lines += [" ".join(format_complex(z) for z in row) for row in M]
    return "\n".join(lines) + "\n"


def write_matrix(path, M) -> None:
    Path(path).write_text(format_matrix(M))


def matrix_to_json(M) -> list:
    """Nested ``[[re, im], ...]`` rows for JSON output."""
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(M, dtype=complex)]


def matrix_from_json(rows) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in rows])


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _csv_value(s: str):
    if s == "":
        return None
    if s in ("true", "false"):
        return s == "true"
    try:
        return int(s)
    except ValueError:
        pass
    try:
        return float(s)
    except ValueError:
        return s


def _plain(v):
    if isinstance(v, np.bool_):
        return bool(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.floating):
        return float(v)
    return v


def format_payload(records, fmt: str) -> str:
    """Serialise records (no manifest)."""
    if fmt == "jsonl":
        return "".join(json.dumps({k: _plain(v) for k, v in r.items()}) + "\n" for r in records)
    if fmt == "csv":
        fields = []
        for r in records:
            fields += [k for k in r if k not in fields]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(fields)
        for r in records:
            w.writerow([_csv_cell(_plain(r.get(k))) for k in fields])
        return buf.getvalue()
    raise InvalidInputError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def format_dataset(manifest: dict, records, fmt: str) -> str:
    payload = format_payload(records, fmt)
    if fmt == "jsonl":
        head = json.dumps({"manifest": manifest}) + "\n"
    else:
        head = _MANIFEST_PREFIX + json.dumps(manifest) + "\n"
    return head + payload


def write_dataset(path, manifest: dict, records, fmt: str = "jsonl") -> None:
    text = format_dataset(manifest, list(records), fmt)
    path = Path(path)
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def parse_dataset(text: str) -> tuple[dict, list[dict]]:
    """Inverse of :func:`format_dataset`; the format is detected from the first line."""
    first, _, rest = text.partition("\n")
    if first.startswith(_MANIFEST_PREFIX):
        manifest = json.loads(first[len(_MANIFEST_PREFIX):])
        reader = csv.reader(io.StringIO(rest))
        rows = list(reader)
        if not rows:
            return manifest, []
        header = rows[0]
        return manifest, [{k: _csv_value(v) for k, v in zip(header, row)} for row in rows[1:]]
    manifest = json.loads(first)["manifest"]
    return manifest, [json.loads(line) for line in rest.splitlines() if line.strip()]


def read_dataset(path) -> tuple[dict, list[dict]]:
    path = Path(path)
    try:
        return parse_dataset(path.read_text())
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror or exc}") from exc


def payload_of(text: str) -> str:
    """Dataset text without its manifest line (the reproducible part)."""
    return text.partition("\n")[2]
