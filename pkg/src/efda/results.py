"""Tabular results with byte-reproducible CSV round trips.

Cells are stored as strings: floats are rendered once, at insertion,
in shortest round-trip decimal form, so identical runs emit identical
bytes and parsing an emitted CSV reproduces the table exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DataFormatError


def fmt(value) -> str:
    """Canonical cell text: shortest round-trip decimals for floats."""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


@dataclass
class BenchmarkTable:
    columns: tuple[str, ...]
    rows: list[tuple[str, ...]] = field(default_factory=list)

    def append(self, *values) -> None:
        if len(values) != len(self.columns):
            raise ValueError(f"expected {len(self.columns)} cells, got {len(values)}")
        self.rows.append(tuple(fmt(v) for v in values))

    def column(self, name: str) -> list[str]:
        idx = self.columns.index(name)
        return [row[idx] for row in self.rows]

    def floats(self, name: str) -> np.ndarray:
        return np.array([float(v) for v in self.column(name)])

    def select(self, **match: str) -> "BenchmarkTable":
        """Rows whose cells equal the given strings, e.g. select(method='efda')."""
        idx = [self.columns.index(k) for k in match]
        vals = [fmt(v) for v in match.values()]
        kept = [r for r in self.rows if all(r[i] == v for i, v in zip(idx, vals))]
        return BenchmarkTable(self.columns, kept)

    def to_csv_text(self) -> str:
        lines = [",".join(self.columns)]
        lines.extend(",".join(row) for row in self.rows)
        return "\n".join(lines) + "\n"

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_csv_text())

    @classmethod
    def from_csv_text(cls, text: str) -> "BenchmarkTable":
        lines = [ln for ln in text.splitlines() if ln]
        if not lines:
            raise DataFormatError("empty CSV")
        columns = tuple(lines[0].split(","))
        rows = []
        for ln in lines[1:]:
            cells = tuple(ln.split(","))
            if len(cells) != len(columns):
                raise DataFormatError(f"row has {len(cells)} cells, header has {len(columns)}")
            rows.append(cells)
        return cls(columns, rows)

    @classmethod
    def read_csv(cls, path) -> "BenchmarkTable":
        with open(path, encoding="utf-8") as fh:
            return cls.from_csv_text(fh.read())
