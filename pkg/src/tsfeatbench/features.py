"""Feature matrix container shared by every transform."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import WidthMismatch


@dataclass(frozen=True)
class FeatureMatrix:
    """n x F real matrix with per-column names carrying provenance.

    Column names encode the extractor and its parameters, e.g.
    ``minirocket[p12_d2_q3]_ppv`` or ``intervals[7:43]_mean``.
    """

    values: np.ndarray
    names: tuple

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim != 2:
            raise WidthMismatch(f"feature values must be 2-d, got ndim={arr.ndim}")
        if len(self.names) != arr.shape[1]:
            raise WidthMismatch(
                f"{len(self.names)} names for {arr.shape[1]} columns"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "names", tuple(self.names))

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    def hstack(self, other: "FeatureMatrix") -> "FeatureMatrix":
        if other.n != self.n:
            raise WidthMismatch(f"row counts differ: {self.n} vs {other.n}")
        return FeatureMatrix(
            values=np.hstack([self.values, other.values]),
            names=self.names + other.names,
        )

    def to_csv(self) -> str:
        """Deterministic CSV rendering with a header row."""
        lines = [",".join(self.names)]
        for row in self.values:
            lines.append(",".join(repr(float(v)) for v in row))
        return "\n".join(lines) + "\n"
