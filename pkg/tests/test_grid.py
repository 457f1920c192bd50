import math

import numpy as np
import pytest

from app.errors import DomainError, IoError
from app.models import GridRequest, Helicity, Plane, Quantity
from app.services.eigenmode_service import eigenmode_service
from app.services.grid_service import grid_service


def _request(tmp_path, **overrides) -> GridRequest:
    values = dict(s=Helicity(two_s=0), k=1.0, plane=Plane.xz, extent=40.0, n=16, quantity=Quantity.re,
                  output_path=str(tmp_path / "grid.csv"))
    values.update(overrides)
    return GridRequest(**values)


def test_emit_grid_writes_header_and_rows(tmp_path):
    path = grid_service.emit_grid(_request(tmp_path))
    with open(path, encoding="ascii") as handle:
        lines = handle.read().split("\n")
    assert lines[0] == "x,coord2,value"
    assert lines[-1] == ""
    assert len(lines) == 1 + 16 * 16 + 1
    assert "\r" not in "".join(lines)


def test_rows_round_trip_through_reader(tmp_path):
    request = _request(tmp_path, n=17)
    rows = grid_service.read_grid(grid_service.emit_grid(request))
    values = grid_service.values(request)
    assert len(rows) == 17 * 17
    # origin cell: Re(w0) = Re(-i / 8 pi) = 0
    x, z, value = rows[8 * 17 + 8]
    assert (x, z) == (0.0, 0.0)
    assert abs(value) < 1e-15
    assert rows[5 * 17 + 3][2] == float(values[5, 3])


def test_phase_is_empty_on_axis_for_helicity(tmp_path):
    request = _request(tmp_path, s=Helicity(two_s=1), n=17, quantity=Quantity.phase)
    rows = grid_service.read_grid(grid_service.emit_grid(request))
    on_axis = [v for x, _, v in rows if x == 0.0]
    off_axis = [v for x, _, v in rows if x != 0.0]
    assert len(on_axis) == 17 and all(v is None for v in on_axis)
    assert all(v is not None for v in off_axis)


def test_abs_is_rotationally_symmetric_in_xy(tmp_path):
    values = grid_service.values(_request(tmp_path, plane=Plane.xy, quantity=Quantity.abs, n=32))
    assert np.max(np.abs(values - values.T)) <= 1e-10
    assert np.max(np.abs(values - values[::-1, :])) <= 1e-10


def test_phase_advances_with_k_along_the_axis(tmp_path):
    request = _request(tmp_path, s=Helicity(two_s=1), n=33, extent=16.0, quantity=Quantity.phase)
    pts = grid_service.points(request)
    z = pts[16, :, 2]
    # on the axis the s = 1/2 wave is proportional to e^{i k z}
    w = eigenmode_service.eval_w(request.s, request.k, pts[16, z > 0], azimuthal=False)
    slope = np.polyfit(z[z > 0], np.unwrap(np.angle(w)), 1)[0]
    assert slope == pytest.approx(1.0, abs=1e-9)


def test_far_field_wavefronts_are_planar(tmp_path):
    deviation, cells = grid_service.wavefront_deviation(_request(tmp_path, n=256, quantity=Quantity.phase))
    assert cells > 0
    assert deviation <= 0.05


def test_wavefront_measurement_needs_far_field_xz_grid(tmp_path):
    with pytest.raises(DomainError):
        grid_service.wavefront_deviation(_request(tmp_path, plane=Plane.xy))
    with pytest.raises(DomainError):
        grid_service.wavefront_deviation(_request(tmp_path, extent=10.0))


def test_unwritable_path(tmp_path):
    with pytest.raises(IoError):
        grid_service.emit_grid(_request(tmp_path, output_path=str(tmp_path)))


def test_negative_helicity_rejected(tmp_path):
    with pytest.raises(DomainError):
        grid_service.emit_grid(_request(tmp_path, s=Helicity(two_s=-1)))


def test_small_grids_rejected(tmp_path):
    with pytest.raises(ValueError):
        _request(tmp_path, n=8)


def test_values_are_finite_off_axis(tmp_path):
    values = grid_service.values(_request(tmp_path, s=Helicity(two_s=2), quantity=Quantity.im))
    assert np.all(np.isfinite(values))
    assert not math.isnan(float(values[0, 0]))
