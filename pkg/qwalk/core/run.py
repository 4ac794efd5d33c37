import logging
import os
import time
from functools import partial
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from memory_profiler import memory_usage
from monty.json import MSONable
from tabulate import tabulate

from qwalk import __version__
from qwalk.continuation.continuation import DeltaValues, continue_r_y
from qwalk.continuation.poles import algebraicity_test, fx_poles, fy_poles
from qwalk.continuation.series import SeriesConfig, SeriesSolution
from qwalk.elliptic.curve import curve_data
from qwalk.elliptic.rationality import detect_ratio, pin_ratio
from qwalk.elliptic.uniformization import periods, uniformize
from qwalk.elliptic.weierstrass import legendre_residual, wp, wp_prime
from qwalk.io import load_settings, make_report, write_report, write_settings
from qwalk.log import (
    fancy_logo,
    initialize_qwalk_logger,
    log_banner,
    log_list,
    timestamp,
)
from qwalk.util import check_z, validate_settings
from qwalk.walk.oracle import boundary_gf, count, truncation_bound
from qwalk.walk.stepset import (
    StepSet,
    check_functional_equation,
    classify,
    kernel_eval,
    parse_stepset,
)

__author__ = "Alex Ganose"
__maintainer__ = "Alex Ganose"
__email__ = "aganose@lbl.gov"

logger = logging.getLogger(__name__)

_identity_tol = 1e-8
_series_samples = 4
_x_sample = 0.3


class Check(MSONable):
    """A single comparison in a verification run.

    Args:
        name: Name of the check.
        residual: The observed discrepancy.
        threshold: Largest acceptable discrepancy.
        status: "passed", "failed" or "skipped".
        note: Optional explanation, e.g. why a check was skipped.
    """

    def __init__(
        self,
        name: str,
        residual: Optional[float],
        threshold: Optional[float],
        status: Optional[str] = None,
        note: str = "",
    ):
        self.name = name
        self.residual = residual
        self.threshold = threshold
        if status is None:
            status = "passed" if residual <= threshold else "failed"
        self.status = status
        self.note = note

    @classmethod
    def skipped(cls, name: str, note: str) -> "Check":
        return cls(name, None, None, status="skipped", note=note)

    @property
    def passed(self) -> bool:
        return self.status != "failed"

    def to_report(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "residual": self.residual,
            "threshold": self.threshold,
            "status": self.status,
            "note": self.note,
        }


class Verifier(MSONable):
    """Cross-validation of the series pipeline against the exact counts.

    The stages are run in the order curve, periods, poles, oracle, series and
    checks. Each stage is timed and the peak memory usage is reported.

    Args:
        steps: The step set, or its string form (e.g., "NE,W,S").
        z: The step weight. Must be None if a ratio is to be pinned.
        settings: qwalk settings. Missing values are taken from the defaults.
        ratio: Optional (k, l). If given, z is found such that ω₃/ω₂ = k/l.
    """

    def __init__(
        self,
        steps: Union[StepSet, str],
        z: Optional[float] = None,
        settings: Optional[Dict[str, Any]] = None,
        ratio: Optional[Tuple[int, int]] = None,
    ):
        if isinstance(steps, str):
            steps = parse_stepset(steps)

        if (z is None) == (ratio is None):
            raise ValueError("Exactly one of z and ratio must be given")

        self.steps = steps
        self.z = z
        self.ratio = tuple(ratio) if ratio is not None else None
        self.settings = validate_settings(settings or {})

        if self.settings["tol"] < 1e-12:
            raise ValueError(f"tol must be at least 1e-12, got {self.settings['tol']}")

        if z is not None:
            check_z(z, steps.size)

    def run(
        self,
        directory: Optional[Union[str, Path]] = None,
        return_usage_stats: bool = False,
        prefix: Optional[str] = None,
    ):
        """Run the verification.

        Args:
            directory: If given, the report and settings are written here.
            return_usage_stats: Whether to also return the timing and memory use.
            prefix: Prefix for the output files.

        Returns:
            The verification report, and optionally the usage statistics.
        """
        mem_usage, (report, usage_stats) = memory_usage(
            partial(self._run_wrapper, directory=directory, prefix=prefix),
            max_usage=True,
            retval=True,
            interval=0.1,
            include_children=False,
            multiprocess=True,
        )
        log_banner("END")

        logger.info("Timing and memory usage:")
        timing_info = [f"{n} time: {t:.4f} s" for n, t in usage_stats.items()]
        log_list(timing_info + [f"max memory: {mem_usage:.1f} MB"])

        logger.info(f"qwalk exiting on {timestamp()}")

        if return_usage_stats:
            usage_stats["max_memory"] = mem_usage
            return report, usage_stats
        else:
            return report

    def _run_wrapper(
        self, directory: Optional[Union[str, Path]] = None, prefix: Optional[str] = None
    ):
        if self.settings["print_log"] or self.settings["write_log"]:
            if self.settings["write_log"] and directory is not None:
                log_file = f"{prefix}_qwalk.log" if prefix else "qwalk.log"
                os.makedirs(directory, exist_ok=True)
            else:
                log_file = False

            initialize_qwalk_logger(
                directory=directory or ".",
                filename=log_file,
                print_log=self.settings["print_log"],
            )

        tt = time.perf_counter()
        _log_qwalk_intro()
        _log_settings(self)

        data: Dict[str, Any] = {"checks": []}

        data, curve_time = self._do_curve(data)
        timing = {"curve": curve_time}

        data, periods_time = self._do_periods(data)
        timing["periods"] = periods_time

        data, poles_time = self._do_poles(data)
        timing["poles"] = poles_time

        data, oracle_time = self._do_oracle(data)
        timing["oracle"] = oracle_time

        data, series_time = self._do_series(data)
        timing["series"] = series_time

        report, checks_time = self._do_checks(data)
        timing["checks"] = checks_time

        if directory is not None:
            _, writing_time = self._do_writing(report, directory, prefix)
            timing["writing"] = writing_time

        timing["total"] = time.perf_counter() - tt
        return report, timing

    def _do_curve(self, data):
        log_banner("CURVE")
        t0 = time.perf_counter()
        settings = self.settings

        classification = classify(
            self.steps, bound=settings["group_bound"], seed=settings["seed"]
        )
        if classification.kind != "non-singular":
            raise ValueError(
                f"Step set {self.steps} is {classification.kind}; verification "
                "requires a non-singular step set"
            )

        if self.ratio is not None:
            k, l = self.ratio  # noqa: E741
            self.z = pin_ratio(self.steps, k, l)
            logger.info(f"Pinned ω₃/ω₂ = {k}/{l} at z = {self.z:.12f}")

        curve = curve_data(self.steps, self.z)
        data.update({"classification": classification, "curve": curve})

        logger.info("Curve information:")
        log_list(
            [
                f"steps: {self.steps}",
                f"z: {self.z:.12g}",
                f"class: {classification.kind}",
                f"group order: {classification.group_order}",
                "x branch points: "
                + ", ".join(f"{_fmt(b)}" for b in curve.x_branch),
                "y branch points: "
                + ", ".join(f"{_fmt(b)}" for b in curve.y_branch),
            ]
        )
        return data, time.perf_counter() - t0

    def _do_periods(self, data):
        log_banner("PERIODS")
        t0 = time.perf_counter()
        settings = self.settings

        curve_periods = periods(data["curve"])
        U = uniformize(data["curve"], curve_periods)
        ratio = detect_ratio(
            curve_periods, l_max=settings["l_max"], tol=settings["ratio_tol"]
        )
        data.update({"periods": curve_periods, "uniformization": U, "ratio": ratio})

        logger.info("Periods:")
        log_list(
            [
                f"ω₁: {_fmt(curve_periods.w1)}",
                f"ω₂: {curve_periods.w2:.12g}",
                f"ω₃: {curve_periods.w3:.12g}",
                f"ω₃/ω₂: {curve_periods.ratio:.12g}",
                f"rational: {ratio}",
            ]
        )

        rng = np.random.default_rng(settings["seed"])
        samples = _cell_samples(U, rng, 200)
        x, y = U.x(samples), U.y(samples)
        mask = U.finite(x) & U.finite(y)
        x, y = x[mask], y[mask]
        kernel = np.abs(kernel_eval(self.steps, x, y, self.z))
        # relative to the size of the monomials x²y²
        scale = np.maximum(np.abs(x), 1) ** 2 * np.maximum(np.abs(y), 1) ** 2
        data["checks"].append(
            Check("kernel on curve", float(np.max(kernel / scale)), _identity_tol)
        )

        lat = U.lattice
        g2, g3 = lat.invariants
        p = wp(lat, samples[:20])
        ode = np.abs(wp_prime(lat, samples[:20]) ** 2 - (4 * p**3 - g2 * p - g3))
        ode_scale = np.maximum(np.abs(p), 1) ** 3
        data["checks"].append(
            Check(
                "℘ differential equation", float(np.max(ode / ode_scale)), _identity_tol
            )
        )
        data["checks"].append(
            Check("Legendre relation", float(legendre_residual(lat)), _identity_tol)
        )
        return data, time.perf_counter() - t0

    def _do_poles(self, data):
        log_banner("POLES")
        t0 = time.perf_counter()
        U = data["uniformization"]
        n_points = self.settings["contour_points"]
        radius = self.settings["contour_radius"]

        fy_parts = fy_poles(U, n_points=n_points, radius_factor=radius)
        fx_parts = fx_poles(U, n_points=n_points, radius_factor=radius)
        data.update({"fy_poles": fy_parts, "fx_poles": fx_parts})

        for name, parts in (("f_y", fy_parts), ("f_x", fx_parts)):
            logger.info(f"Poles of {name}:")
            log_list(
                [f"{_fmt(p.pole)}: order {p.order}, residue {_fmt(p.residue)}" for p in parts]
            )
            residue_sum = abs(sum(p.residue for p in parts))
            scale = max((p.scale() for p in parts), default=1.0)
            data["checks"].append(
                Check(
                    f"{name} residue sum", residue_sum, _identity_tol * max(scale, 1.0)
                )
            )

        ratio = data["ratio"]
        if ratio.detected:
            data["algebraicity"] = algebraicity_test(
                U,
                ratio.k,
                ratio.l,
                poles=fy_parts,
                n_samples=self.settings["n_samples"],
                seed=self.settings["seed"],
            )
        else:
            data["algebraicity"] = None
        return data, time.perf_counter() - t0

    def _do_oracle(self, data):
        log_banner("ORACLE")
        t0 = time.perf_counter()
        settings = self.settings
        depth = settings["depth"]

        table = count(self.steps, depth, progress_bar=settings["print_log"])
        q00 = boundary_gf(table, "origin", 0, self.z).real
        tail = truncation_bound(self.steps, 0, 0, self.z, depth)
        data.update({"table": table, "oracle_q00": q00, "oracle_tail": tail})

        logger.info("Enumeration:")
        log_list(
            [
                f"depth: {depth}",
                f"walks of length {depth}: {table.total(depth)}",
                f"Q(0,0) truncated: {q00:.15g}",
                f"tail bound: {tail:.2e}",
            ]
        )

        residual = check_functional_equation(
            self.steps,
            self.z,
            depth,
            n_samples=settings["n_samples"],
            seed=settings["seed"],
            table=table,
        )
        data["checks"].append(Check("functional equation", residual, _identity_tol))
        return data, time.perf_counter() - t0

    def _do_series(self, data):
        log_banner("SERIES")
        t0 = time.perf_counter()
        settings = self.settings
        ratio = data["ratio"]
        checks: List[Check] = data["checks"]

        if not ratio.detected:
            logger.info("ω₃/ω₂ is not rational within l_max, series checks skipped")
            note = f"ω₃/ω₂ = {ratio.ratio:.12g} is not detected as rational"
            checks.append(Check.skipped("series Q(0,0) vs oracle", note))
            checks.append(Check.skipped("series vs continuation", note))
            checks.append(Check.skipped("series orderings", note))
            data["series_q00"] = None
            return data, time.perf_counter() - t0

        U = data["uniformization"]
        k, l = ratio.k, ratio.l  # noqa: E741
        config = SeriesConfig.from_settings(settings)
        solution = SeriesSolution(
            U, k, l, config, fy_parts=data["fy_poles"], fx_parts=data["fx_poles"]
        )
        data["series"] = solution

        q00 = solution.q00()
        data["series_q00"] = q00
        logger.info("Series:")
        log_list(
            [
                f"ordering: {config.ordering}",
                f"Q(0,0): {_fmt(q00)}",
                f"anchor spread: {solution.anchors['consistency']:.2e}",
            ]
        )

        tol = settings["tol"]
        checks.append(
            Check(
                "series Q(0,0) vs oracle",
                abs(q00 - data["oracle_q00"]),
                tol + data["oracle_tail"],
            )
        )

        rng = np.random.default_rng(settings["seed"])
        samples = _series_points(U, solution, rng, _series_samples)
        base = DeltaValues(U, data["table"]).r_y
        continued = np.array([continue_r_y(U, w, base) for w in samples])
        series_values = np.atleast_1d(solution.r_y(samples))
        checks.append(
            Check(
                "series vs continuation",
                float(np.max(np.abs(series_values - continued))),
                tol,
            )
        )

        other = "columns" if config.ordering == "rows" else "rows"
        other_config = SeriesConfig(
            ordering=other, tol=config.tol, p_max=config.p_max, n_max=config.n_max
        )
        other_solution = SeriesSolution(
            U, k, l, other_config, fy_parts=data["fy_poles"], fx_parts=data["fx_poles"]
        )
        difference = np.abs(
            solution.a_series(samples) - other_solution.a_series(samples)
        )
        checks.append(
            Check("series orderings", float(np.max(difference)), max(tol, 2 * config.tol))
        )
        return data, time.perf_counter() - t0

    def _do_checks(self, data):
        log_banner("CHECKS")
        t0 = time.perf_counter()
        checks: List[Check] = data["checks"]

        from qwalk.models.kreweras import (
            constants_check,
            is_kreweras,
            q00_closed,
            qx0_closed,
        )

        tol = self.settings["tol"]
        if is_kreweras(self.steps):
            closed = q00_closed(self.z)
            checks.append(
                Check(
                    "oracle Q(0,0) vs closed form",
                    abs(data["oracle_q00"] - closed),
                    tol + data["oracle_tail"],
                )
            )
            oracle_qx0 = boundary_gf(data["table"], "x-axis", _x_sample, self.z)
            checks.append(
                Check(
                    "oracle Q(x,0) vs closed form",
                    abs(complex(oracle_qx0) - qx0_closed(self.z, _x_sample)),
                    tol + truncation_bound(self.steps, _x_sample, 0, self.z, self.settings["depth"]),
                )
            )
            if data["series_q00"] is not None:
                checks.append(
                    Check(
                        "series Q(0,0) vs closed form",
                        abs(data["series_q00"] - closed),
                        tol,
                    )
                )
                checks.append(
                    Check(
                        "series Q(x,0) vs closed form",
                        abs(data["series"].q_x0(_x_sample) - qx0_closed(self.z, _x_sample)),
                        tol,
                    )
                )
            residuals = constants_check(data["uniformization"])
            data["kreweras_constants"] = residuals
            checks.append(
                Check(
                    "Kreweras constants",
                    max(residuals["defining"].values()),
                    max(tol, 1e-7),
                )
            )

        report = _make_verification_report(self, data)

        logger.info("Check summary:")
        table = [
            (
                c.name,
                "-" if c.residual is None else f"{c.residual:.2e}",
                "-" if c.threshold is None else f"{c.threshold:.2e}",
                c.status,
            )
            for c in checks
        ]
        logger.info(
            tabulate(
                table,
                headers=("check", "residual", "threshold", "status"),
                numalign="right",
                stralign="center",
                floatfmt=(".2e", ".2e", ".2e", ""),
            )
        )
        verdict = "all checks passed" if report["passed"] else "some checks FAILED"
        logger.info(f"\n{verdict}")
        return report, time.perf_counter() - t0

    def _do_writing(self, report, directory, prefix):
        log_banner("RESULTS")
        abs_dir = os.path.abspath(directory)
        t0 = time.perf_counter()

        if not os.path.exists(abs_dir):
            os.makedirs(abs_dir)

        self.write_settings(abs_dir, prefix=prefix)

        prefix = "" if prefix is None else f"{prefix}_"
        extension = self.settings["file_format"]
        full_filename = Path(abs_dir) / f"{prefix}qwalk_verify.{extension}"
        write_report(self.to_report(report), full_filename)
        logger.info(f"Results written to:\n{full_filename}")
        return full_filename, time.perf_counter() - t0

    @property
    def inputs(self) -> Dict[str, Any]:
        return {
            "steps": str(self.steps),
            "z": self.z,
            "pin_ratio": f"{self.ratio[0]}/{self.ratio[1]}" if self.ratio else None,
            "depth": self.settings["depth"],
            "tol": self.settings["tol"],
            "seed": self.settings["seed"],
        }

    def to_report(self, verification: Dict[str, Any]) -> Dict[str, Any]:
        """The machine-readable document for a verification result."""
        results = {k: v for k, v in verification.items() if k != "diagnostics"}
        return make_report(
            "verify", self.inputs, results, verification.get("diagnostics")
        )

    @staticmethod
    def from_directory(
        directory: Union[str, Path] = ".",
        steps: Union[StepSet, str] = None,
        z: Optional[float] = None,
        ratio: Optional[Tuple[int, int]] = None,
        settings_file: Optional[Union[str, Path]] = None,
        settings_override: Optional[Dict[str, Any]] = None,
    ) -> "Verifier":
        """Initialize a Verifier using the settings file in a directory.

        Args:
            directory: A directory.
            steps: The step set.
            z: The step weight.
            ratio: Optional (k, l) to pin instead of z.
            settings_file: Path to settings file. Defaults to settings.yaml in the
                directory.
            settings_override: Settings that will be used to override the settings
                in the settings file.

        Returns:
            A Verifier instance.
        """
        directory = Path(directory)

        if not settings_file:
            settings_file = directory / "settings.yaml"
        settings = load_settings(settings_file)

        if settings_override:
            settings.update(settings_override)

        return Verifier(steps, z=z, settings=settings, ratio=ratio)

    def write_settings(self, directory: str = ".", prefix: Optional[str] = None):
        prefix = "" if prefix is None else f"{prefix}_"
        filename = Path(directory) / f"{prefix}qwalk_settings.yaml"
        write_settings(self.settings, filename)


def _fmt(value) -> str:
    value = complex(value)
    if abs(value.imag) < 1e-14 * max(1.0, abs(value.real)):
        return f"{value.real:.10g}"
    return f"{value.real:.10g}{value.imag:+.10g}i"


def _cell_samples(U, rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.uniform(0, 1, n) * U.w2 + rng.uniform(0, 1, n) * U.w1


def _series_points(U, solution: SeriesSolution, rng: np.random.Generator, n: int):
    # points away from the series poles with |Im ω| below |ω₁|/4
    points = []
    limit = 0.05 * U.w2
    while len(points) < n:
        w = complex(
            rng.uniform(0, 1) * U.w2 + (rng.uniform(-0.25, 0.25) * U.w1),
        )
        if min(solution.pole_distance(w, "y"), solution.pole_distance(w, "x")) > limit:
            points.append(w)
    return np.array(points)


def _make_verification_report(verifier: Verifier, data) -> Dict[str, Any]:
    checks: List[Check] = data["checks"]
    ratio = data["ratio"]
    curve_periods = data["periods"]
    algebraicity = data["algebraicity"]

    results = {
        "classification": {
            "kind": data["classification"].kind,
            "group_order": data["classification"].group_order,
        },
        "z": verifier.z,
        "periods": {
            "w1": curve_periods.w1,
            "w2": curve_periods.w2,
            "w3": curve_periods.w3,
            "ratio": curve_periods.ratio,
        },
        "rational": str(ratio),
        "q00": {"oracle": data["oracle_q00"], "series": data["series_q00"]},
        "algebraicity": None if algebraicity is None else algebraicity.verdict,
        "checks": [c.to_report() for c in checks],
        "passed": all(c.passed for c in checks),
    }
    results["diagnostics"] = {
        "oracle_tail": data["oracle_tail"],
        "series_tol": verifier.settings["series_tol"],
        "series_ordering": verifier.settings["series_ordering"],
        "fy_poles": [p.to_report() for p in data["fy_poles"]],
        "fx_poles": [p.to_report() for p in data["fx_poles"]],
    }
    if "kreweras_constants" in data:
        results["diagnostics"]["kreweras_constants"] = data["kreweras_constants"]
    return results


def _log_qwalk_intro():
    logger.info(
        f"""
{fancy_logo}
                                                  v{__version__}

    Generating functions of quarter-plane walks by
    elliptic uniformization and pole series.


qwalk starting on {timestamp()}"""
    )


def _log_settings(verifier: Verifier):
    log_banner("SETTINGS")
    logger.info("Run parameters:")
    p = [f"{k}: {v}" for k, v in verifier.settings.items() if v is not None]
    log_list(p)
