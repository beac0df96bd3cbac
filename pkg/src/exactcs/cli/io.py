"""Deterministic CSV/JSON writers and key=value config files."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Sequence


def fmt(v) -> str:
    # 17 significant digits round-trips any double
    if isinstance(v, (int,)) and not isinstance(v, bool):
        return str(v)
    return "%.17g" % float(v)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_json(path: Path, obj) -> None:
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(dumps(obj))


def sidecar_path(output: Path) -> Path:
    return output.with_name(output.name + ".meta.json")


def read_config(path: Path) -> dict[str, str]:
    """Parse ``key = value`` lines; blank lines and ``#`` comments are skipped.

    Keys use flag spelling without the leading dashes; ``-`` and ``_`` are
    interchangeable.
    """
    out = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out
