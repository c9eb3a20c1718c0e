"""
Command line for the Lelek fan dynamics toolkit

Exit statuses: 0 success, 1 usage error, 2 validation failure, 3 inconclusive.
"""
import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, Field, ValidationError, field_validator

from config import configure_logging, settings
from models.errors import CapExceeded, LelekError, UndecidableBound
from models.intervals import IntervalUnion
from models.rational import format_rational, parse_rational
from models.relation import Profile, SlopeSet
from models.schemas import (
    SlopeSetModel,
    SpecificationModel,
    TraceCertificateModel,
    TruncatedPointModel,
    export_schemas,
)
from services.dynamics_service import DynamicsService
from services.export import export_certificate

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_INCONCLUSIVE = 3

COMMANDS = (
    "validate", "image", "iterate", "hausdorff-series", "nc-check", "diag-power",
    "trace", "verify-trace", "pseudo-orbit", "no-shadow", "fan-svg", "periodic",
    "endpoint", "arcs", "schemas",
)

RATIONAL_FIELDS = ("eps", "delta", "a", "r", "rho")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


class CommandConfig(BaseModel):
    """One parsed command line; rational parameters stay as exact "p/q" strings"""
    command: Literal[COMMANDS]
    slopes: Optional[str] = None
    slopes_file: Optional[str] = None
    interval: List[str] = []
    direction: Literal["forward", "inverse"] = "forward"
    profile: Profile = Profile.LF_INDUCING
    r: Optional[str] = None
    rho: Optional[str] = None
    eps: Optional[str] = None
    delta: Optional[str] = None
    a: Optional[str] = None
    n: Optional[int] = Field(default=None, ge=0)
    n0: Optional[int] = Field(default=None, ge=1)
    depth: Optional[int] = Field(default=None, ge=1)
    horizon: Optional[int] = Field(default=None, ge=1)
    kind: Literal["staircase", "diagonal"] = "staircase"
    word: Optional[str] = None
    spec: Optional[str] = None
    point: Optional[str] = None
    certificate: Optional[str] = None
    interval_cap: Optional[int] = Field(default=None, gt=0)
    arc_cap: Optional[int] = Field(default=None, gt=0)
    branch_cap: Optional[int] = Field(default=None, gt=0)
    out: Optional[str] = None

    @field_validator(*RATIONAL_FIELDS)
    @classmethod
    def _exact(cls, v: Optional[str]) -> Optional[str]:
        if v is not None:
            parse_rational(v)
        return v

    def rational(self, name: str) -> Fraction:
        value = getattr(self, name)
        if value is None:
            raise UsageError(f"{self.command} needs --{name.replace('_', '-')}")
        return parse_rational(value)

    def integer(self, name: str) -> int:
        value = getattr(self, name)
        if value is None:
            raise UsageError(f"{self.command} needs --{name.replace('_', '-')}")
        return value

    def slope_set(self, default: Optional[str] = None) -> SlopeSet:
        if self.slopes_file:
            text = Path(self.slopes_file).read_text()
            if self.slopes_file.endswith(".json"):
                return SlopeSetModel.model_validate_json(text).to_domain()
            return SlopeSet.parse(text.strip())
        if self.slopes or default:
            return SlopeSet.parse(self.slopes or default)
        raise UsageError(f"{self.command} needs --slopes or --slopes-file")

    def intervals(self) -> IntervalUnion:
        if not self.interval:
            raise UsageError(f"{self.command} needs --interval lo,hi")
        pairs = []
        for text in self.interval:
            parts = text.split(",")
            if len(parts) != 2:
                raise UsageError(f"Interval {text!r} must be lo,hi")
            pairs.append((parse_rational(parts[0]), parse_rational(parts[1])))
        return IntervalUnion.of(pairs)

    def path(self, name: str) -> Path:
        value = getattr(self, name)
        if value is None:
            raise UsageError(f"{self.command} needs --{name}")
        return Path(value)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lelek", description="Exact dynamics on Mahavier products of finite unions of lines.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name: str, help_text: str, slopes: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        if slopes:
            p.add_argument("--slopes", help='Slope set such as "3,1,1/2"')
            p.add_argument("--slopes-file", help="Slope set file (.json wire model or one line of text)")
        p.add_argument("--out", help="Write the artifact here instead of stdout")
        p.add_argument("--interval-cap", type=int)
        p.add_argument("--arc-cap", type=int)
        p.add_argument("--branch-cap", type=int)
        return p

    p = command("validate", "Check a slope set against a profile")
    p.add_argument("--profile", choices=[profile.value for profile in Profile], default=Profile.LF_INDUCING.value)

    for name in ("image", "iterate"):
        p = command(name, "Exact image of an interval union")
        p.add_argument("--interval", action="append", default=[], help="lo,hi (repeatable)")
        p.add_argument("--direction", choices=["forward", "inverse"], default="forward")
        if name == "iterate":
            p.add_argument("--n", type=int, required=True)

    p = command("hausdorff-series", "Hausdorff distance of F^n(A) to [0,1] as CSV")
    p.add_argument("--interval", action="append", default=[])
    p.add_argument("--n", type=int, required=True)

    p = command("nc-check", "Never-connect test for a pair of slopes", slopes=False)
    p.add_argument("r")
    p.add_argument("rho")

    p = command("diag-power", "Does the diagonal lie in F^n")
    p.add_argument("--n", type=int, required=True)

    p = command("trace", "Trace a specification with one orbit")
    p.add_argument("--spec", required=True)
    p.add_argument("--eps", required=True)

    p = command("verify-trace", "Re-check a trace certificate against its specification")
    p.add_argument("--spec", required=True)
    p.add_argument("--certificate", required=True)

    for name in ("pseudo-orbit", "no-shadow"):
        p = command(name, "Build a pseudo-orbit" if name == "pseudo-orbit" else "Finite-horizon shadowing search")
        p.add_argument("--kind", choices=["staircase", "diagonal"], default="staircase")
        p.add_argument("--n0", type=int)
        p.add_argument("--word", help='Slope values such as "1/2,2"')
        p.add_argument("--a")
        p.add_argument("--delta")
        if name == "no-shadow":
            p.add_argument("--eps", required=True)
            p.add_argument("--horizon", type=int, required=True)
            p.add_argument("--depth", type=int, required=True)

    for name in ("fan-svg", "arcs"):
        p = command(name, "Render the fan as SVG" if name == "fan-svg" else "List arcs as CSV")
        p.add_argument("--depth", type=int, required=True)

    for name in ("periodic", "endpoint"):
        p = command(name, "Periodic approximant" if name == "periodic" else "Nearby endpoint")
        p.add_argument("--point", required=True, help="Point JSON file")
        p.add_argument("--eps", required=True)

    p = command("schemas", "Write the JSON schemas of the wire models", slopes=False)
    return parser


def _service(config: CommandConfig) -> DynamicsService:
    overrides = {
        name: getattr(config, name)
        for name in ("interval_cap", "arc_cap", "branch_cap")
        if getattr(config, name) is not None
    }
    return DynamicsService(settings.model_copy(update=overrides))


def _json(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def _pseudo_orbit(service: DynamicsService, config: CommandConfig, omega: SlopeSet):
    word = [parse_rational(w) for w in config.word.split(",")] if config.word else None
    return service.pseudo_orbit(
        config.kind,
        omega,
        n0=config.n0,
        word=word,
        a=config.rational("a") if config.a else None,
        delta=config.rational("delta") if config.delta else None,
    )


def dispatch(service: DynamicsService, config: CommandConfig) -> Tuple[str, int]:
    """Run one command and return its artifact text and exit status"""
    command = config.command

    if command == "nc-check":
        result = service.nc_check(config.rational("r"), config.rational("rho"))
        return f"never-connect: {str(result['never_connect']).lower()}\n", EXIT_OK

    if command == "schemas":
        written = export_schemas(config.out or "schemas")
        return "".join(f"{path}\n" for path in written), EXIT_OK

    omega = config.slope_set("3,1,1/2" if command in ("trace", "verify-trace", "pseudo-orbit", "no-shadow") else None)

    if command == "validate":
        report = service.validate(omega, config.profile)
        return _json(report.to_json()), EXIT_OK if report.passed else EXIT_INVALID

    if command in ("image", "iterate"):
        n = 1 if command == "image" else config.integer("n")
        result = service.iterate(omega, config.intervals(), n, config.direction)
        return _json({"n": n, "image": result.to_json(), "text": str(result)}), EXIT_OK

    if command == "hausdorff-series":
        series = service.hausdorff_series(omega, config.intervals(), config.integer("n"))
        logger.info(f"verdict: {series.verdict}")
        return service.series_csv(series), EXIT_OK

    if command == "diag-power":
        result = service.diag_power(omega, config.integer("n"))
        lines = [f"{n}: {str(hit).lower()}" for n, hit in result["powers"].items()]
        lines.append(f"eventual-threshold: {result['eventual_threshold']}")
        return "\n".join(lines) + "\n", EXIT_OK

    if command == "trace":
        spec = SpecificationModel.model_validate_json(config.path("spec").read_text()).to_domain()
        _, certificate = service.trace(omega, spec, config.rational("eps"))
        return export_certificate(certificate), EXIT_OK

    if command == "verify-trace":
        spec = SpecificationModel.model_validate_json(config.path("spec").read_text()).to_domain()
        certificate = TraceCertificateModel.model_validate_json(config.path("certificate").read_text()).to_domain(omega)
        valid = service.verify_trace(spec, certificate)
        return f"trace: {'valid' if valid else 'invalid'}\n", EXIT_OK if valid else EXIT_INVALID

    if command == "pseudo-orbit":
        po, valid = _pseudo_orbit(service, config, omega)
        body = {"delta": format_rational(po.delta), "valid": valid, "points": [p.to_json() for p in po.points]}
        return _json(body), EXIT_OK if valid else EXIT_INVALID

    if command == "no-shadow":
        po, _ = _pseudo_orbit(service, config, omega)
        result = service.no_shadow(omega, po, config.rational("eps"), config.integer("horizon"), config.integer("depth"))
        if result.feasible:
            return _json({"status": "SAT", "witness": result.witness.to_json()}), EXIT_OK
        return export_certificate(result.certificate), EXIT_OK

    if command == "fan-svg":
        return service.fan(omega, config.integer("depth")).svg(), EXIT_OK

    if command == "arcs":
        return service.arcs(omega, config.integer("depth")), EXIT_OK

    if command in ("periodic", "endpoint"):
        p = TruncatedPointModel.model_validate_json(config.path("point").read_text()).to_domain(omega)
        if command == "periodic":
            z, period = service.periodic(omega, p, config.rational("eps"))
            return _json({"period": period, "point": z.to_json()}), EXIT_OK
        return _json({"point": service.endpoint(omega, p, config.rational("eps")).to_json()}), EXIT_OK

    raise UsageError(f"Unknown command {command!r}")


def run(config: CommandConfig) -> int:
    try:
        text, status = dispatch(_service(config), config)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (CapExceeded, UndecidableBound) as e:
        print(f"inconclusive: {e}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except (LelekError, ValidationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    if config.out and config.command != "schemas":
        Path(config.out).write_text(text)
    else:
        sys.stdout.write(text)
    return status


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        config = CommandConfig(**{k: v for k, v in vars(args).items() if v is not None})
    except (UsageError, ValidationError, LelekError) as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    configure_logging()
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
