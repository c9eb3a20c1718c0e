"""
Service facade shared by the command line and the HTTP API
"""
import logging
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from config import Settings, settings as default_settings
from models.errors import CapExceeded, LelekError, PseudoOrbitError
from models.intervals import IntervalUnion
from models.rational import exponent_vector, never_connect
from models.relation import (
    Profile,
    SlopeSet,
    ValidationReport,
    diagonal_in_power,
    eventual_diagonal_threshold,
    iterate_image,
    validate_slope_set,
)
from models.shift_space import TruncatedPoint, endpoint_approx, periodic_approximant
from models.specification import Specification, TraceCertificate
from services.export import FanRendering, arcs_csv, render_fan, series_csv
from services.shadowing import (
    PseudoOrbit,
    SeriesResult,
    ShadowResult,
    diagonal_pseudo_orbit,
    growing_images_series,
    shadow_feasible,
    staircase_pseudo_orbit,
    verify_pseudo_orbit,
)
from services.tracer import trace_specification, verify_trace

logger = logging.getLogger(__name__)


class DynamicsService:
    """
    Runs the exact pipelines with caps taken from settings

    Domain errors are logged and re-raised unchanged so callers can map
    cap errors to "inconclusive" and the rest to validation failures.
    """

    def __init__(self, config: Optional[Settings] = None):
        self.settings = config or default_settings
        logger.info(
            f"DynamicsService ready: interval_cap={self.settings.interval_cap}, "
            f"arc_cap={self.settings.arc_cap}, branch_cap={self.settings.branch_cap}"
        )

    def _run(self, label: str, fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except CapExceeded as e:
            logger.warning(f"{label} inconclusive: {e}")
            raise
        except LelekError as e:
            logger.warning(f"{label} rejected: {e}")
            raise
        except Exception as e:
            logger.error(f"{label} failed: {e}")
            raise

    def nc_check(self, r: Fraction, rho: Fraction) -> Dict:
        result = self._run("nc-check", never_connect, r, rho)
        return {
            "never_connect": result,
            "exponents": {
                "r": {str(p): e for p, e in sorted(exponent_vector(r).items())},
                "rho": {str(p): e for p, e in sorted(exponent_vector(rho).items())},
            },
        }

    def validate(self, omega: SlopeSet, profile: Profile = Profile.LF_INDUCING) -> ValidationReport:
        return self._run("validate", validate_slope_set, omega, profile)

    def iterate(self, omega: SlopeSet, A: IntervalUnion, n: int = 1, direction: str = "forward") -> IntervalUnion:
        return self._run("iterate", iterate_image, omega, A, n, self.settings.interval_cap, direction)

    def hausdorff_series(self, omega: SlopeSet, A: IntervalUnion, n_max: int) -> SeriesResult:
        return self._run(
            "hausdorff-series", growing_images_series, omega, A, n_max,
            self.settings.stall_window, self.settings.interval_cap,
        )

    def series_csv(self, series: SeriesResult) -> str:
        return series_csv(series, self.settings.decimal_digits)

    def diag_power(self, omega: SlopeSet, n_max: int) -> Dict:
        def compute():
            powers = {n: diagonal_in_power(omega, n) for n in range(1, n_max + 1)}
            return {"powers": powers, "eventual_threshold": eventual_diagonal_threshold(omega, n_max)}

        return self._run("diag-power", compute)

    def trace(self, omega: SlopeSet, spec: Specification, eps: Fraction) -> Tuple[TruncatedPoint, TraceCertificate]:
        return self._run("trace", trace_specification, omega, spec, eps, self.settings.interval_cap)

    def verify_trace(self, spec: Specification, certificate: TraceCertificate) -> bool:
        return self._run("verify-trace", verify_trace, spec, certificate.point, certificate.eps)

    def pseudo_orbit(
        self,
        kind: str,
        omega: SlopeSet,
        n0: Optional[int] = None,
        word: Optional[List[Fraction]] = None,
        a: Optional[Fraction] = None,
        delta: Optional[Fraction] = None,
    ) -> Tuple[PseudoOrbit, bool]:
        def build():
            if kind == "staircase":
                if n0 is None:
                    raise PseudoOrbitError("The staircase needs n0")
                po = staircase_pseudo_orbit(n0, delta, omega=omega)
            elif kind == "diagonal":
                if word is None or a is None or delta is None:
                    raise PseudoOrbitError("The diagonal pseudo-orbit needs word, a and delta")
                po = diagonal_pseudo_orbit(omega, word, a, delta)
            else:
                raise PseudoOrbitError(f"Unknown pseudo-orbit kind {kind!r}")
            return po, verify_pseudo_orbit(po, self.settings.metric_scan_limit)

        return self._run("pseudo-orbit", build)

    def no_shadow(self, omega: SlopeSet, po: PseudoOrbit, eps: Fraction, horizon: int, depth: int) -> ShadowResult:
        return self._run("no-shadow", shadow_feasible, omega, po, eps, horizon, depth, self.settings.branch_cap)

    def periodic(self, omega: SlopeSet, p: TruncatedPoint, eps: Fraction) -> Tuple[TruncatedPoint, int]:
        return self._run("periodic", periodic_approximant, omega, p, eps, self.settings.metric_scan_limit)

    def endpoint(self, omega: SlopeSet, p: TruncatedPoint, eps: Fraction) -> TruncatedPoint:
        return self._run(
            "endpoint", endpoint_approx, omega, p, eps,
            self.settings.endpoint_search_cap, self.settings.metric_scan_limit,
        )

    def fan(self, omega: SlopeSet, depth: int, style: Optional[Dict] = None) -> FanRendering:
        return self._run("fan-svg", render_fan, omega, depth, style, cap=self.settings.arc_cap)

    def arcs(self, omega: SlopeSet, depth: int) -> str:
        return self._run("arcs", arcs_csv, omega, depth, self.settings.arc_cap)
