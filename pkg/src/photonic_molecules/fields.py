"""Grids and field containers shared by the spectral, dynamics and greens modules."""

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameterError

MIN_GRID_POINTS = 64


class Boundary(str, enum.Enum):
    PERIODIC = "periodic"
    DIRICHLET = "dirichlet"


class Frame(str, enum.Enum):
    LAB2D = "lab2d"
    RELATIVE_K0 = "relativeK0"
    SCALAR = "scalar"


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid on [r_min, r_max) in R_B units, symmetric about r = 0.

    Points are r_j = r_min + j * spacing, so r = 0 sits at index n_points // 2.
    """

    r_min: float
    r_max: float
    n_points: int
    boundary: Boundary = Boundary.PERIODIC

    def __post_init__(self):
        if self.n_points < MIN_GRID_POINTS or self.n_points % 2:
            raise InvalidParameterError(
                "n_points", self.n_points, "Grids need an even number of at least {} points.".format(MIN_GRID_POINTS)
            )
        if not (self.r_max > 0 and math.isclose(self.r_min, -self.r_max, rel_tol=1e-12)):
            raise InvalidParameterError("r_min", self.r_min, "Grids must be symmetric about r = 0.")
        object.__setattr__(self, "boundary", Boundary(self.boundary))

    @classmethod
    def symmetric(cls, length, n_points, boundary=Boundary.PERIODIC) -> "Grid1D":
        return cls(-length / 2.0, length / 2.0, n_points, boundary)

    @classmethod
    def for_xi(cls, xi: float, boundary=Boundary.PERIODIC) -> "Grid1D":
        """Default grid: 400 R_B / 4096 points for xi <= 0.5, 40 R_B / 2048 points for xi >= 1.

        Below xi = 0.5 the length grows to 16 bound-state sizes when that exceeds 400 R_B;
        in between 0.5 and 1 a 100 R_B / 2048 point grid is used.
        """
        if xi <= 0.5:
            length = max(400.0, 16.0 * 3.0 / (math.pi * xi**2))
            return cls.symmetric(length, 4096, boundary)
        if xi < 1.0:
            return cls.symmetric(100.0, 2048, boundary)
        return cls.symmetric(40.0, 2048, boundary)

    @property
    def length(self) -> float:
        return self.r_max - self.r_min

    @property
    def spacing(self) -> float:
        return self.length / self.n_points

    @property
    def origin_index(self) -> int:
        return self.n_points // 2

    def points(self) -> np.ndarray:
        return self.r_min + self.spacing * np.arange(self.n_points)

    def momenta(self) -> np.ndarray:
        """Angular wavenumbers in FFT order."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.spacing)

    def mirror_indices(self) -> np.ndarray:
        """Index of -r_j for every j (periodic wrap for the unpaired r_min)."""
        return (2 * self.origin_index - np.arange(self.n_points)) % self.n_points

    def as_record(self) -> dict:
        return {
            "r_min": self.r_min,
            "r_max": self.r_max,
            "n_points": self.n_points,
            "spacing": self.spacing,
            "boundary": self.boundary.value,
        }


@dataclass
class PairField:
    """Four-component two-excitation amplitude.

    Components are ordered EE, ES, SE, SS. In the relativeK0 frame they live on
    a Grid1D of the relative coordinate; in lab2d on a (z1, z2) mesh with
    `axes = (z1, z2)`. The scalar frame only fills EE.
    """

    EE: np.ndarray
    ES: np.ndarray
    SE: np.ndarray
    SS: np.ndarray
    time: float
    frame: Frame
    axes: tuple = field(default=())
    grid: Grid1D | None = None

    @classmethod
    def from_stack(cls, stack, time, frame, axes=(), grid=None) -> "PairField":
        return cls(stack[0].copy(), stack[1].copy(), stack[2].copy(), stack[3].copy(), time, Frame(frame), axes, grid)

    def stack(self) -> np.ndarray:
        return np.stack([self.EE, self.ES, self.SE, self.SS])

    def exchange_asymmetry(self) -> float:
        """Largest violation of the bosonic exchange symmetry."""
        if self.frame == Frame.LAB2D:
            return float(
                max(
                    np.max(np.abs(self.EE - self.EE.T)),
                    np.max(np.abs(self.SS - self.SS.T)),
                    np.max(np.abs(self.ES - self.SE.T)),
                )
            )
        if self.frame == Frame.RELATIVE_K0:
            mirror = self.grid.mirror_indices()
            return float(
                max(
                    np.max(np.abs(self.EE - self.EE[mirror])),
                    np.max(np.abs(self.SS - self.SS[mirror])),
                    np.max(np.abs(self.ES - self.SE[mirror])),
                )
            )
        return 0.0


@dataclass(frozen=True)
class TimeSeries:
    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        if times.ndim != 1 or np.any(np.diff(times) <= 0):
            raise InvalidParameterError("times", None, "TimeSeries needs strictly increasing times.")
        values = np.asarray(self.values)
        if values.shape != times.shape:
            raise InvalidParameterError("values", None, "TimeSeries values must match the times.")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    def window(self, t_min=-np.inf, t_max=np.inf) -> "TimeSeries":
        keep = (self.times >= t_min) & (self.times <= t_max)
        return TimeSeries(self.times[keep], self.values[keep])
