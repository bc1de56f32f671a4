"""Uniform fixed-step quantizer applied independently per coordinate.

Step size is ``interval_length / 2**bits``.  For inputs whose offset
from the midpoint stays within half the interval, the per-coordinate
error never exceeds ``interval_length / 2**(bits + 1)``.  Out-of-range
coordinates saturate to the end-of-range level; callers can detect this
via :meth:`UniformQuantizer.saturates` since saturation silently breaks
the error bound otherwise.

``interval_length == 0`` is the degenerate exact quantizer: inputs pass
through unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class UniformQuantizer:
    bits: int
    interval_length: float
    midpoint: float | np.ndarray = 0.0

    def __post_init__(self):
        if int(self.bits) != self.bits or self.bits < 1:
            raise ValueError(f"bits must be a positive integer, got {self.bits}")
        if self.interval_length < 0:
            raise ValueError(f"interval length must be >= 0, got {self.interval_length}")
        mid = np.asarray(self.midpoint, dtype=float)
        object.__setattr__(self, "midpoint", mid)

    @property
    def step(self) -> float:
        return self.interval_length / 2**self.bits

    def _offsets(self, x) -> tuple:
        x = np.asarray(x, dtype=float)
        mid = self.midpoint
        if mid.ndim > 0 and mid.shape != x.shape:
            raise ValueError(f"midpoint shape {mid.shape} does not match input {x.shape}")
        return x, x - mid

    def quantize(self, x) -> np.ndarray:
        """Nearest quantization level per coordinate, ties resolved by floor.

        Levels are ``midpoint + m * step`` with ``|m| <= 2**(bits-1)``;
        out-of-range offsets clamp to the outermost level.
        """
        x, offset = self._offsets(x)
        if self.interval_length == 0:
            return x.copy()
        steps = np.floor(np.abs(offset) / self.step + 0.5)
        steps = np.minimum(steps, 2 ** (self.bits - 1))
        return self.midpoint + np.sign(offset) * self.step * steps

    def quantization_error(self, x) -> np.ndarray:
        """Signed error ``x - quantize(x)``."""
        x, _ = self._offsets(x)
        return x - self.quantize(x)

    def error_bound(self) -> float:
        """Worst per-coordinate error magnitude for in-range inputs."""
        return self.interval_length / 2 ** (self.bits + 1)

    def in_range(self, x) -> np.ndarray:
        """Per-coordinate mask of inputs inside the quantization interval."""
        _, offset = self._offsets(x)
        if self.interval_length == 0:
            return np.ones_like(offset, dtype=bool)
        return np.abs(offset) <= self.interval_length / 2

    def saturates(self, x) -> bool:
        """True when any coordinate falls outside the quantization interval."""
        return not bool(np.all(self.in_range(x)))
