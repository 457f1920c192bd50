# ABOUTME: Samples w_{s,(0,0,k)} on a planar grid and writes it as CSV for contour plotting
# ABOUTME: Also measures how far the far-field wavefronts near the +z axis deviate from planes

import csv
import math
import os
from typing import List, Optional, Tuple

import numpy as np

from app.errors import DomainError, IoError
from app.models import GridRequest, Plane, Quantity
from app.services.eigenmode_service import eigenmode_service
from logging_config import get_logger

logger = get_logger(__name__)

FAR_FIELD_RADIUS = 20.0
AXIS_BAND = 0.1


def _format(value: Optional[float]) -> str:
    return "" if value is None or not math.isfinite(value) else f"{value:.17g}"


class GridService:
    """Planar samples of the quasi-plane wave w."""

    def axes(self, request: GridRequest) -> np.ndarray:
        return np.linspace(-request.extent, request.extent, request.n)

    def points(self, request: GridRequest) -> np.ndarray:
        """(n, n, 3) array indexed [i_first, i_second]."""
        ax = self.axes(request)
        first, second = np.meshgrid(ax, ax, indexing="ij")
        zero = np.zeros_like(first)
        if request.plane == Plane.xz:
            return np.stack([first, zero, second], axis=-1)
        return np.stack([first, second, zero], axis=-1)

    def values(self, request: GridRequest) -> np.ndarray:
        """Requested quantity per cell; nan where the phase is undefined (z axis, s != 0)."""
        pts = self.points(request)
        flat = pts.reshape(-1, 3)
        if request.quantity == Quantity.abs:
            w = eigenmode_service.eval_w(request.s, request.k, flat, azimuthal=False)
            return np.abs(w).reshape(pts.shape[:-1])

        w = np.asarray(eigenmode_service.eval_w(request.s, request.k, flat, azimuthal=False), dtype=complex)
        if request.s.two_s:
            rho = np.hypot(flat[:, 0], flat[:, 1])
            on_axis = rho == 0.0
            phase = np.full(len(flat), np.nan, dtype=complex)
            phase[~on_axis] = ((flat[~on_axis, 0] + 1j * flat[~on_axis, 1]) / rho[~on_axis]) ** request.s.two_s
            w = w * phase
        if request.quantity == Quantity.re:
            out = w.real
        elif request.quantity == Quantity.im:
            out = w.imag
        else:
            out = np.where(np.isnan(w.real), np.nan, np.angle(w))
        return out.reshape(pts.shape[:-1])

    def emit_grid(self, request: GridRequest) -> str:
        """Write `x,coord2,value` rows, coord2 being z (xz plane) or y (xy plane)."""
        if request.s.two_s < 0:
            raise DomainError("the closed form of w covers s >= 0")
        ax = self.axes(request)
        values = self.values(request)
        directory = os.path.dirname(request.output_path)
        try:
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(request.output_path, "w", newline="", encoding="ascii") as handle:
                writer = csv.writer(handle, lineterminator="\n")
                writer.writerow(["x", "coord2", "value"])
                for i, x in enumerate(ax):
                    for j, c2 in enumerate(ax):
                        writer.writerow([_format(x), _format(c2), _format(float(values[i, j]))])
        except OSError as e:
            raise IoError(f"cannot write grid to {request.output_path}: {e}") from e
        empty = int(np.count_nonzero(np.isnan(values)))
        logger.info(f"Wrote {request.n}x{request.n} grid of {request.quantity.value}(w) to {request.output_path}"
                    f" ({empty} empty cells)")
        return request.output_path

    def wavefront_deviation(self, request: GridRequest) -> Tuple[float, int]:
        """Largest wavefront displacement, in wavelengths, of far-field cells near the +z axis.

        The displacement of a cell is its phase offset from the axis point at the same z,
        divided by k; the azimuthal factor is left out.
        """
        if request.plane != Plane.xz:
            raise DomainError("wavefront planarity is measured in the xz plane")
        pts = self.points(request).reshape(-1, 3)
        x, z = pts[:, 0], pts[:, 2]
        band = (z > 0.0) & (np.hypot(x, z) > FAR_FIELD_RADIUS) & (np.abs(x) <= AXIS_BAND * z)
        if not band.any():
            raise DomainError(f"grid extent {request.extent:g} does not reach the far field r > {FAR_FIELD_RADIUS:g}")
        cells = pts[band]
        axis = np.stack([np.zeros_like(cells[:, 2]), np.zeros_like(cells[:, 2]), cells[:, 2]], axis=-1)
        w_cell = eigenmode_service.eval_w(request.s, request.k, cells, azimuthal=False)
        w_axis = eigenmode_service.eval_w(request.s, request.k, axis, azimuthal=False)
        offset = np.angle(w_cell * np.conj(w_axis))
        wavelength = 2.0 * math.pi / request.k
        deviation = float(np.max(np.abs(offset) / request.k) / wavelength)
        logger.info(f"wavefront deviation over {int(band.sum())} far-field cells: {deviation:.4f} wavelengths")
        return deviation, int(band.sum())

    def read_grid(self, path: str) -> List[Tuple[float, float, Optional[float]]]:
        try:
            with open(path, newline="", encoding="ascii") as handle:
                reader = csv.reader(handle)
                next(reader)
                return [(float(a), float(b), float(c) if c else None) for a, b, c in reader]
        except OSError as e:
            raise IoError(f"cannot read grid {path}: {e}") from e


grid_service = GridService()
