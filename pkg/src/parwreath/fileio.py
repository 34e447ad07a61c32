"""Element-set files.

Line 1 holds the degree k; every further non-empty line holds the k
space-separated 0-based images of one transformation.  Lines starting with
``#`` are comments; ``# label: <name>`` names the element that follows it.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import ParseError
from .structures import GeneratorSet
from .transform import Transformation

_LABEL = "# label:"


def parse_generator_set(text: str) -> GeneratorSet:
    degree = None
    elements: list[Transformation] = []
    labels: list[str] = []
    pending = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if line.startswith(_LABEL):
                pending = line[len(_LABEL):].strip()
            continue
        try:
            values = [int(v) for v in line.split()]
        except ValueError:
            raise ParseError(f"expected integers, got {line!r}", lineno) from None
        if degree is None:
            if len(values) != 1 or values[0] < 1:
                raise ParseError("first line must be a single positive degree", lineno)
            degree = values[0]
            continue
        if len(values) != degree:
            raise ParseError(f"expected {degree} images, got {len(values)}", lineno)
        bad = [v for v in values if not 0 <= v < degree]
        if bad:
            raise ParseError(f"image {bad[0]} is outside [0, {degree - 1}]", lineno)
        elements.append(Transformation(values))
        label = pending or f"g{len(elements) - 1}"
        if label in labels:
            raise ParseError(f"duplicate label {label!r}", lineno)
        labels.append(label)
        pending = None
    if degree is None:
        raise ParseError("missing degree line")
    return GeneratorSet(degree, tuple(elements), tuple(labels))


def read_generator_set(path: str | Path) -> GeneratorSet:
    return parse_generator_set(Path(path).read_text())


def format_generator_set(gens: GeneratorSet) -> str:
    lines = [str(gens.degree)]
    for label, f in zip(gens.labels, gens.elements):
        lines.append(f"{_LABEL} {label}")
        lines.append(str(f))
    return "\n".join(lines) + "\n"


def write_generator_set(path: str | Path, gens: GeneratorSet) -> None:
    Path(path).write_text(format_generator_set(gens))


def write_rows(path: str | Path, degree: int, rows: np.ndarray | Iterable[Iterable[int]]) -> None:
    with open(path, "w") as fh:
        fh.write(f"{degree}\n")
        for row in rows:
            fh.write(" ".join(str(int(v)) for v in row) + "\n")
