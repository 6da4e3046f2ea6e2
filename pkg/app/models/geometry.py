from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

from app.exceptions import ParameterError, StructuralError


@dataclass(frozen=True)
class Window:
    """Диск радиуса r_max с центром в начале координат."""

    r_max: float

    def __post_init__(self):
        if not self.r_max > 0:
            raise ParameterError(f"Window radius must be positive, got {self.r_max}")

    @property
    def area(self) -> float:
        return float(np.pi * self.r_max ** 2)

    def inflated(self, margin: float) -> "Window":
        return Window(self.r_max + margin)

    def contains(self, points: np.ndarray) -> np.ndarray:
        return np.hypot(points[:, 0], points[:, 1]) <= self.r_max


@dataclass
class PointPattern:
    """Realization of base-station locations inside a window.

    ``mother_index[k]`` is the row of ``mothers`` that spawned point ``k``; both are
    ``None`` for a homogeneous PPP.
    """

    points: np.ndarray
    window: Window
    mother_index: Optional[np.ndarray] = None
    mothers: Optional[np.ndarray] = None
    intensity_meta: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float).reshape(-1, 2)
        if self.mother_index is not None:
            self.mother_index = np.asarray(self.mother_index, dtype=np.int64)
            if self.mothers is None or len(self.mother_index) != len(self.points):
                raise StructuralError("mother_index needs a mothers array and one entry per point")
            if len(self.mother_index) and (self.mother_index.min() < 0 or self.mother_index.max() >= len(self.mothers)):
                raise StructuralError("mother_index points outside the mother list")

    def __len__(self) -> int:
        return len(self.points)

    @property
    def distances(self) -> np.ndarray:
        return np.hypot(self.points[:, 0], self.points[:, 1])

    @property
    def has_mothers(self) -> bool:
        return self.mother_index is not None


@dataclass
class SegmentSet:
    """Boolean model of line-segment obstacles (centers, common length, orientations)."""

    centers: np.ndarray
    length: float
    angles: np.ndarray
    center_intensity: float

    def __post_init__(self):
        self.centers = np.asarray(self.centers, dtype=float).reshape(-1, 2)
        self.angles = np.asarray(self.angles, dtype=float).reshape(-1)
        if not self.length > 0:
            raise ParameterError(f"Segment length must be positive, got {self.length}")
        if len(self.angles) != len(self.centers):
            raise StructuralError("one angle per segment center is required")
        if len(self.angles) and (self.angles.min() < 0 or self.angles.max() >= np.pi):
            raise ParameterError("segment angles must lie in [0, pi)")

    def __len__(self) -> int:
        return len(self.centers)

    def endpoints(self) -> tuple[np.ndarray, np.ndarray]:
        half = 0.5 * self.length * np.column_stack([np.cos(self.angles), np.sin(self.angles)])
        return self.centers - half, self.centers + half

    def concat(self, other: "SegmentSet") -> "SegmentSet":
        if other.length != self.length:
            raise StructuralError("can only merge segment sets with a common length")
        return SegmentSet(
            centers=np.vstack([self.centers, other.centers]),
            length=self.length,
            angles=np.concatenate([self.angles, other.angles]),
            center_intensity=self.center_intensity + other.center_intensity,
        )
