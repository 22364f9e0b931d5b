"""File formats: enumeration CSV, JSON reports and key=value configuration."""

from __future__ import annotations

import csv
import json
import os
from fractions import Fraction
from typing import IO, Iterable

from .census import FieldRecord
from .errors import ConfigError, QShapeError
from .fields import Type

ENUM_COLUMNS = (
    "m", "a", "b", "c", "sign", "type", "disc", "lambda1_sq_num", "lambda1_sq_den", "b_param",
)
SUMMARY_PREFIX = "# summary"
FLOAT_DIGITS = 12


def fmt_float(x: float) -> str:
    return f"{x:.{FLOAT_DIGITS}g}"


def round_floats(obj):
    """Recursively round floats to 12 significant digits for stable output."""
    if isinstance(obj, float):
        return float(fmt_float(obj)) if obj == obj and abs(obj) != float("inf") else obj
    if isinstance(obj, dict):
        return {k: round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(v) for v in obj]
    if hasattr(obj, "item") and callable(obj.item):  # numpy scalar
        return round_floats(obj.item())
    return obj


def dumps(obj) -> str:
    return json.dumps(round_floats(obj), indent=2, sort_keys=False)


# -- enumeration CSV --------------------------------------------------------------


def _row(r: FieldRecord) -> list:
    q = r.lambda1_sq
    return [r.m, r.a, r.b, r.c, "+" if r.sign > 0 else "-", r.typ.value, r.disc,
            q.numerator, q.denominator, r.b]


def write_fields_csv(records: Iterable[FieldRecord], out: IO[str], excluded_8divm: int) -> int:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(ENUM_COLUMNS)
    n = 0
    for r in records:
        w.writerow(_row(r))
        n += 1
    out.write(f"{SUMMARY_PREFIX} total={n} excluded_8divm={excluded_8divm}\n")
    return n


def read_fields_csv(stream: IO[str]) -> tuple[list[FieldRecord], dict]:
    lines = stream.read().splitlines()
    summary = {}
    body = []
    for line in lines:
        if line.startswith(SUMMARY_PREFIX):
            for part in line[len(SUMMARY_PREFIX):].split():
                k, v = part.split("=")
                summary[k] = int(v)
        elif line:
            body.append(line)
    reader = csv.reader(body)
    header = next(reader, None)
    if tuple(header or ()) != ENUM_COLUMNS:
        raise QShapeError(f"unexpected CSV header {header}")
    records = []
    for row in reader:
        m, a, b, c = (int(v) for v in row[:4])
        sign = 1 if row[4] == "+" else -1
        rec = FieldRecord(m, a, b, c, sign, Type(row[5]), int(row[6]))
        if rec.lambda1_sq != Fraction(int(row[7]), int(row[8])) or int(row[9]) != b:
            raise QShapeError(f"inconsistent row {row}")
        records.append(rec)
    return records, summary


# -- configuration ----------------------------------------------------------------

CONFIG_KEYS = {
    "threads": int,
    "format": str,
    "boundary_tol": float,
    "rel_tol": float,
}


def load_config(path: str) -> dict:
    """Parse a key=value file; blank lines and '#' comments are ignored."""
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as e:
        raise ConfigError(f"{path}: {e.strerror}") from None
    out = {}
    for no, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{no}: expected key=value")
        k, v = (s.strip() for s in line.split("=", 1))
        if k not in CONFIG_KEYS:
            raise ConfigError(f"{path}:{no}: unknown key {k!r}")
        try:
            out[k] = CONFIG_KEYS[k](v)
        except ValueError:
            raise ConfigError(f"{path}:{no}: bad value for {k}: {v!r}") from None
    return out


def resolve_threads(flag: int | None, config: dict, env=None) -> int:
    """Flag, then config file, then QSHAPE_THREADS, then 1."""
    env = os.environ if env is None else env
    if flag is not None:
        val = flag
    elif "threads" in config:
        val = config["threads"]
    elif env.get("QSHAPE_THREADS"):
        try:
            val = int(env["QSHAPE_THREADS"])
        except ValueError:
            raise ConfigError(f"QSHAPE_THREADS={env['QSHAPE_THREADS']!r} is not an integer") from None
    else:
        val = 1
    if val < 1:
        raise ConfigError(f"thread count must be positive, got {val}")
    return val
