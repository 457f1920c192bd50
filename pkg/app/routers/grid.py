# ABOUTME: `grid` command: exports w_{s,(0,0,k)} on a planar grid as CSV for contour plots
# ABOUTME: Optionally measures far-field wavefront planarity on the written grid

import argparse
import os

from pydantic import ValidationError

from app.errors import ConfigError
from app.models import GridRequest, Helicity, Plane, Quantity
from app.services.grid_service import grid_service
from config import settings
from logging_config import get_logger

logger = get_logger(__name__)

PLANARITY_TOLERANCE = 0.05


def register(subparsers) -> None:
    parser = subparsers.add_parser("grid", help="write a CSV grid of w for k along +z")
    parser.add_argument("--s", type=int, required=True, dest="two_s", help="twice the helicity (0, 1, 2, ...)")
    parser.add_argument("--k", type=float, default=1.0)
    parser.add_argument("--plane", choices=[p.value for p in Plane], default=Plane.xz.value)
    parser.add_argument("--extent", type=float, default=40.0)
    parser.add_argument("--n", type=int, default=256)
    parser.add_argument("--quantity", choices=[q.value for q in Quantity], default=Quantity.re.value)
    parser.add_argument("--out", default=os.path.join(settings.OUTPUT_DIR, "grid.csv"))
    parser.add_argument("--verify-planar", action="store_true",
                        help="fail unless far-field wavefronts near +z stay within 5%% of a wavelength")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    try:
        request = GridRequest(
            s=Helicity(two_s=args.two_s),
            k=args.k,
            plane=Plane(args.plane),
            extent=args.extent,
            n=args.n,
            quantity=Quantity(args.quantity),
            output_path=args.out,
        )
    except ValidationError as e:
        raise ConfigError(f"invalid grid request: {e.errors()[0]['msg']}") from e

    path = grid_service.emit_grid(request)
    print(path)
    if not args.verify_planar:
        return 0

    deviation, cells = grid_service.wavefront_deviation(request)
    ok = deviation <= PLANARITY_TOLERANCE
    print(f"wavefront deviation {deviation:.4f} wavelengths over {cells} cells: {'pass' if ok else 'fail'}")
    if not ok:
        logger.warning(f"far-field wavefronts deviate by {deviation:.4f} wavelengths")
    return 0 if ok else 1
