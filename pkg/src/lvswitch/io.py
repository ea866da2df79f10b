"""File formats: JSON environment pairs, atomic writes, command-line tuples."""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from .envmodel import Environment, EnvPair


def parse_env(text: str) -> Environment:
    """Parse ``a,b,c,d,alpha,beta``."""
    try:
        values = [float(x) for x in text.split(",")]
    except ValueError as exc:
        raise ValueError(f"cannot parse environment {text!r}: {exc}") from exc
    return Environment.from_sequence(values)


def read_pair(path) -> EnvPair:
    with open(path) as fh:
        return EnvPair.from_dict(json.load(fh))


def pair_to_json(pair: EnvPair) -> str:
    return json.dumps(pair.to_dict(), indent=2) + "\n"


def dumps(data) -> str:
    # float repr is the shortest string that round-trips, at most 17 significant digits
    return json.dumps(data, indent=2, allow_nan=False) + "\n"


def write_atomic(path, text: str) -> None:
    """Write through a temporary file in the target directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
