# ABOUTME: `eval` command: prints u_{s,k} at a point, and w for k along +z
# ABOUTME: With --via-transform also prints V u computed by ray quadrature

import argparse

from pydantic import ValidationError

from app.errors import ConfigError
from app.models import Helicity, WaveMode
from app.services.eigenmode_service import eigenmode_service
from app.services.ray_transform_service import ray_transform_service
from logging_config import get_logger

logger = get_logger(__name__)


def _fmt(value: complex) -> str:
    return f"{value.real:.17g} {value.imag:+.17g}j"


def register(subparsers) -> None:
    parser = subparsers.add_parser("eval", help="evaluate u (and w) at a point")
    parser.add_argument("--s", type=int, required=True, dest="two_s", help="twice the helicity")
    for name in ("kx", "ky", "kz", "x", "y", "z"):
        parser.add_argument(f"--{name}", type=float, default=1.0 if name == "kz" else 0.0)
    parser.add_argument("--via-transform", action="store_true", help="also compute V u numerically")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    try:
        s = Helicity(two_s=args.two_s)
        mode = WaveMode(s=s, k=(args.kx, args.ky, args.kz))
    except ValidationError as e:
        raise ConfigError(f"invalid mode: {e.errors()[0]['msg']}") from e

    point = (args.x, args.y, args.z)
    u = complex(eigenmode_service.eval_u(mode, point))
    print(f"u = {_fmt(u)}")
    if not mode.along_z:
        return 0

    w = complex(eigenmode_service.eval_w(s, mode.k0, point))
    print(f"w = {_fmt(w)}")
    if args.via_transform:
        logger.info(f"Computing V u for s={s} at {point}")
        vu = ray_transform_service.apply_V(eigenmode_service.u_field(mode)).at(*point)
        print(f"V u = {_fmt(vu)}  (|V u - w| = {abs(vu - w):.3e})")
    return 0
