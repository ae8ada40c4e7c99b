"""
fig8asym 명령행 드라이버
jones / tv / aef / saddle / verify / sweep 명령을 실행하고 결과를 CSV 또는 JSON 으로 출력
"""

import argparse
import json
import logging
import logging.config
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from . import config
from .aef import (
    aef_fixed_a,
    aef_fixed_a_u0,
    aef_kashaev,
    aef_murakami,
    aef_s_near_1,
    aef_tv,
    aef_upper_bound_half,
    aef_window_half,
    aef_window_s1,
    ratio_sweep,
)
from .errors import ConfigError, Fig8Error, exit_code_for
from .jones import colored_jones_exact, required_precision
from .models import PrecisionContext, RootSpec, SaddleSolution, SweepRow, TheoremTag
from .potentials import FamilyKind, build_family, s_saddle, solve_saddle_half, solve_saddle_quadratic
from .services import JonesService, ReportService
from .special_functions import (
    contour_cr_integral,
    functional_equation_residual,
    hyperbolic_volume,
    quantum_dilog,
    s_ratio_center,
    s_ratio_kashaev_point,
)
from .turaev_viro import WINDOW_HALF, WINDOW_S1
from .utils import ValidationUtils
from .verify import (
    contour_jones,
    laplace_estimate,
    line_integral,
    riemann_vs_integral,
    window_dominance_report,
)

# ================= Logging =================
LOGGING_CONFIG = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "simple": {"format": "%(levelname)s: %(asctime)s     %(message)s", "datefmt": "%Y-%m-%d %H:%M:%S"}
    },
    "handlers": {
        "console": {"class": "logging.StreamHandler", "formatter": "simple", "stream": "ext://sys.stderr"},
    },
    "loggers": {
        "fig8asym": {"handlers": ["console"], "level": config.LOG_LEVEL, "propagate": False},
    },
}

_logging_ready = False
logger = logging.getLogger("fig8asym")


def setup_logging(path: Optional[Path] = None) -> None:
    """FIG8_LOG_CONFIG 파일이 있으면 그것으로, 없으면 내장 설정으로 한 번만 구성"""
    global _logging_ready
    if _logging_ready:
        return
    path = Path(path) if path is not None else config.LOG_CONFIG_PATH
    if path.is_file():
        with open(path, "r", encoding="utf-8") as f:
            logging.config.dictConfig(json.load(f))
    else:
        logging.config.dictConfig(LOGGING_CONFIG)
    _logging_ready = True


# ================= Run config =================
COMMANDS = ("jones", "tv", "aef", "saddle", "verify", "sweep")
SUITES = ("identities", "contour", "laplace", "riemann", "windows")
FAMILIES = ("s", "half", "fixed-a")


class RunConfig(BaseModel):
    """명령 하나의 실행 설정"""

    model_config = ConfigDict(frozen=True)

    command: str
    precision_bits: int = Field(default=config.DEFAULT_PRECISION_BITS, ge=64)
    zeta: float = config.DEFAULT_ZETA
    delta: float = config.DEFAULT_DELTA
    output_format: str = config.DEFAULT_OUTPUT_FORMAT
    output_path: Optional[Path] = None
    workers: int = Field(default=1, ge=1)

    M: Optional[int] = Field(default=None, ge=1)
    N: Optional[int] = Field(default=None, ge=1)
    a: Optional[float] = Field(default=None, ge=0.0)
    u: float = Field(default=0.0, ge=0.0)
    kashaev: bool = False
    M_list: List[int] = Field(default_factory=list)
    N_list: List[int] = Field(default_factory=list)
    r_list: List[int] = Field(default_factory=list)
    offset: Optional[int] = Field(default=None, ge=0)
    theorem: Optional[str] = None
    family: str = "s"
    suite: str = "identities"

    @field_validator("command")
    @classmethod
    def _check_command(cls, value: str) -> str:
        if value not in COMMANDS:
            raise ValueError(f"알 수 없는 명령: {value}")
        return value

    @field_validator("output_format")
    @classmethod
    def _check_format(cls, value: str) -> str:
        if value not in ("csv", "json"):
            raise ValueError(f"output_format 은 csv 또는 json: {value}")
        return value

    @field_validator("theorem")
    @classmethod
    def _check_theorem(cls, value: Optional[str]) -> Optional[str]:
        if value is not None:
            TheoremTag(value)
        return value

    @model_validator(mode="after")
    def _check_ranges(self) -> "RunConfig":
        ok, message = ValidationUtils.validate_windows(self.zeta, self.delta)
        if not ok:
            raise ValueError(message)
        ok, message = ValidationUtils.validate_deformation(self.u)
        if not ok:
            raise ValueError(message)
        if self.family not in FAMILIES:
            raise ValueError(f"family 는 {FAMILIES} 중 하나: {self.family}")
        if self.suite not in SUITES:
            raise ValueError(f"suite 는 {SUITES} 중 하나: {self.suite}")
        if any(r < 3 or r % 2 == 0 for r in self.r_list):
            raise ValueError(f"r 은 3 이상의 홀수여야 합니다: {self.r_list}")
        return self

    @property
    def a_value(self) -> float:
        return 0.0 if self.a is None else self.a

    @property
    def largest_M(self) -> int:
        candidates = [self.M or 1, self.N or 1, *self.M_list, *self.N_list, *((r - 1) // 2 for r in self.r_list)]
        return max(candidates)

    @property
    def effective_precision(self) -> int:
        """Jones 최소 정밀도 정책을 반영한 작업 정밀도"""
        return max(self.precision_bits, required_precision(self.largest_M))

    def context(self) -> PrecisionContext:
        return PrecisionContext(precision_bits=self.effective_precision)


# ================= Commands =================

def _spec_from_config(cfg: RunConfig) -> RootSpec:
    if cfg.kashaev:
        level = cfg.N or cfg.M
        if level is None:
            raise ConfigError("--kashaev 에는 --N 또는 --M 이 필요합니다")
        return RootSpec.kashaev(level)
    if cfg.M is None:
        raise ConfigError("--M 이 필요합니다")
    if cfg.N is not None:
        try:
            return RootSpec.from_color_level(cfg.M, cfg.N)
        except ValueError as e:
            raise ConfigError(str(e)) from e
    return RootSpec(M=cfg.M, a=cfg.a_value, u=cfg.u)


def _cmd_jones(cfg: RunConfig, ctx: PrecisionContext) -> List[SweepRow]:
    service = JonesService(ctx, workers=cfg.workers)
    if cfg.M_list:
        specs = [RootSpec(M=M, a=cfg.a_value, u=cfg.u) for M in cfg.M_list]
        return service.sweep(specs)
    return [service.row(_spec_from_config(cfg))]


def _cmd_tv(cfg: RunConfig, ctx: PrecisionContext) -> List[SweepRow]:
    if not cfg.r_list:
        raise ConfigError("--r 이 필요합니다")
    return JonesService(ctx, workers=cfg.workers).tv_rows(cfg.r_list, cfg.zeta, cfg.delta)


def _require(value: Any, flag: str) -> Any:
    if value is None:
        raise ConfigError(f"{flag} 이 필요합니다")
    return value


def _single_grid(cfg: RunConfig, tag: TheoremTag) -> List[Dict[str, Any]]:
    """명령행 인자로 격자 구성"""
    if tag is TheoremTag.CVC2:
        return [{"N": N} for N in (cfg.N_list or [_require(cfg.N, "--N")])]
    if tag is TheoremTag.ASYMSU2:
        return [{"u": cfg.u, "N": N} for N in (cfg.N_list or [_require(cfg.N, "--N")])]
    if tag is TheoremTag.MAINTHM1:
        return [{"u": cfg.u, "a": cfg.a_value, "M": M} for M in (cfg.M_list or [_require(cfg.M, "--M")])]
    if tag is TheoremTag.MAINTHM1_5:
        return [{"a": cfg.a_value, "M": M} for M in (cfg.M_list or [_require(cfg.M, "--M")])]
    if tag in (TheoremTag.MAINTHM2, TheoremTag.MAINTHM3_BOUND):
        N_values = cfg.N_list or [_require(cfg.N, "--N")]
        if cfg.offset is not None:
            M_values = [N - cfg.offset for N in N_values]
        else:
            M_values = cfg.M_list or [_require(cfg.M, "--M")] * len(N_values)
        if len(M_values) != len(N_values):
            raise ConfigError("--M 과 --N 목록의 길이가 다릅니다")
        return [{"M": M, "N": N} for M, N in zip(M_values, N_values)]
    return [{"r": r} for r in (cfg.r_list or [_require(None, "--r")])]


def _estimate_for(tag: TheoremTag, p: Dict[str, Any], ctx: PrecisionContext, cfg: RunConfig):
    if tag is TheoremTag.CVC2:
        return aef_kashaev(p["N"], ctx)
    if tag is TheoremTag.ASYMSU2:
        return aef_murakami(p["u"], p["N"], ctx)
    if tag is TheoremTag.MAINTHM1:
        return aef_fixed_a(p["u"], p["a"], p["M"], ctx)
    if tag is TheoremTag.MAINTHM1_5:
        return aef_fixed_a_u0(p["a"], p["M"], ctx)
    if tag is TheoremTag.MAINTHM2:
        return aef_s_near_1(p["M"], p["N"], ctx, zeta=cfg.zeta)
    if tag is TheoremTag.MAINTHM3_BOUND:
        return aef_upper_bound_half(p["M"], p["N"], ctx, delta=cfg.delta)
    if tag is TheoremTag.MAINTHM4:
        return aef_tv(p["r"], ctx)
    if tag is TheoremTag.WINDOW_S1:
        return aef_window_s1((p["r"] - 1) // 2, ctx)
    return aef_window_half((p["r"] - 1) // 2, ctx)


def _cmd_aef(cfg: RunConfig, ctx: PrecisionContext) -> List[SweepRow]:
    tag = TheoremTag(_require(cfg.theorem, "--theorem"))
    rows = []
    for params in _single_grid(cfg, tag):
        estimate = _estimate_for(tag, params, ctx, cfg)
        rows.append(SweepRow(params=params, aef=estimate.value, extra={"prefactor": estimate.prefactor}))
    return rows


def _saddle_row(params: Dict[str, Any], saddle: SaddleSolution) -> SweepRow:
    return SweepRow(
        params=params,
        extra={
            "z": saddle.z,
            "omega": saddle.omega,
            "potential_value": saddle.potential_value,
            "second_derivative": saddle.second_derivative,
            "residual": saddle.residual,
            "branch": saddle.branch,
        },
    )


def _cmd_saddle(cfg: RunConfig, ctx: PrecisionContext) -> List[SweepRow]:
    if cfg.family == "fixed-a":
        M = _require(cfg.M, "--M")
        family = build_family(FamilyKind.FIXED_A, ctx, u=cfg.u, a=cfg.a_value, M=M)
        return [_saddle_row({"u": cfg.u, "a": cfg.a_value, "M": M}, solve_saddle_quadratic(family))]
    M, N = _require(cfg.M, "--M"), _require(cfg.N, "--N")
    if cfg.family == "half":
        return [_saddle_row({"M": M, "N": N}, solve_saddle_half(M, N, ctx, delta=cfg.delta))]
    family = build_family(FamilyKind.S_FAMILY, ctx, M=M, N=N)
    return [_saddle_row({"M": M, "N": N}, solve_saddle_quadratic(family))]


def _check_row(name: str, value: Any, target: Any, tolerance: float) -> SweepRow:
    deviation = abs(value - target)
    return SweepRow(
        params={"check": name},
        extra={"value": value, "target": target, "deviation": deviation, "passed": bool(deviation < tolerance)},
    )


def _suite_identities(cfg: RunConfig, ctx: PrecisionContext) -> List[SweepRow]:
    m = ctx.mp
    N = cfg.N or 10
    gamma = m.pi / (N + m.mpf(0.5))
    vol = hyperbolic_volume(ctx)
    half_step = contour_cr_integral(lambda t: 1 / (t * m.sinh(m.pi * t)), m.mpf(0.5), m.pi, -m.pi, ctx)
    kashaev_ratio = quantum_dilog(-m.pi + gamma, gamma, ctx) / quantum_dilog(m.pi - gamma, gamma, ctx)
    center_ratio = quantum_dilog(gamma, gamma, ctx) / quantum_dilog(-gamma, gamma, ctx)
    return [
        _check_row("functional_equation", functional_equation_residual(m.mpc(0.3, 0.2), gamma, ctx), 0, 1e-10),
        _check_row("s_ratio_kashaev_point", kashaev_ratio, s_ratio_kashaev_point(N, ctx), 1e-6 * (N + 0.5)),
        _check_row("s_ratio_center", center_ratio, s_ratio_center(ctx), 1e-8),
        _check_row("cr_integral_log2", half_step, -2 * m.ln2, 1e-8),
        _check_row("volume", vol, m.mpf("2.0298832128193072500"), 1e-15),
    ]


def _contour_spec(cfg: RunConfig) -> RootSpec:
    """--a 가 없으면 a = 1/2"""
    return RootSpec(M=cfg.M or 3, a=0.5 if cfg.a is None else cfg.a, u=cfg.u)


def _suite_contour(cfg: RunConfig, ctx: PrecisionContext) -> List[SweepRow]:
    spec = _contour_spec(cfg)
    exact = colored_jones_exact(spec, PrecisionContext(precision_bits=max(required_precision(spec.M), ctx.precision_bits))).value
    contour = contour_jones(spec, ctx=ctx)
    relative = abs(contour - exact) / abs(exact)
    return [_check_row(f"contour_jones_M{spec.M}", relative, 0, 1e-5)]


def _suite_laplace(cfg: RunConfig, ctx: PrecisionContext) -> List[SweepRow]:
    m = ctx.mp
    N = cfg.N or 40
    scale = N + m.mpf(0.5)
    saddle = s_saddle(1, ctx)
    family = build_family(FamilyKind.LIMIT_S, ctx, s=1)
    estimate = laplace_estimate(family, saddle, scale=scale).to_complex(m)
    direct = line_integral(family, [m.mpf(0.5), saddle.z, m.one], scale, ctx)
    return [_check_row(f"laplace_s1_N{N}", abs(direct / estimate - 1), 0, 0.05)]


def _suite_riemann(cfg: RunConfig, ctx: PrecisionContext) -> List[SweepRow]:
    m = ctx.mp
    rows = []
    for N in cfg.N_list or [100, 400]:
        result = riemann_vs_integral(lambda x: -(x - m.mpf(0.4)) ** 2, lambda x: m.one, 0, 1, N, ctx)
        rows.append(_check_row(f"riemann_N{N}", abs(result.ratio - 1), 0, 1e-3))
    return rows


def _suite_windows(cfg: RunConfig, ctx: PrecisionContext) -> List[SweepRow]:
    rows = []
    for r in cfg.r_list or [101]:
        report = window_dominance_report(r, ctx, zeta=cfg.zeta, delta=cfg.delta, workers=cfg.workers)
        rows.append(SweepRow(
            params={"r": r},
            log_ratio=report.log_empirical_ratio - report.log_predicted_ratio,
            extra={
                "log_empirical_ratio": report.log_empirical_ratio,
                "log_predicted_ratio": report.log_predicted_ratio,
                "s1_dominates": report.s1_dominates,
                "bulk_exceeds_half": report.bulk_exceeds_half,
                "ratio_within_3": report.ratio_within(3),
                "half_growth_rate": report.growth_rates[WINDOW_HALF],
                "s1_growth_rate": report.growth_rates[WINDOW_S1],
            },
        ))
    return rows


_SUITES = {
    "identities": _suite_identities,
    "contour": _suite_contour,
    "laplace": _suite_laplace,
    "riemann": _suite_riemann,
    "windows": _suite_windows,
}


def _cmd_verify(cfg: RunConfig, ctx: PrecisionContext) -> List[SweepRow]:
    return _SUITES[cfg.suite](cfg, ctx)


def _cmd_sweep(cfg: RunConfig, ctx: PrecisionContext) -> List[SweepRow]:
    tag = TheoremTag(_require(cfg.theorem, "--theorem"))
    return ratio_sweep(tag, _single_grid(cfg, tag), ctx, workers=cfg.workers)


_COMMANDS = {
    "jones": _cmd_jones,
    "tv": _cmd_tv,
    "aef": _cmd_aef,
    "saddle": _cmd_saddle,
    "verify": _cmd_verify,
    "sweep": _cmd_sweep,
}


def run(cfg: RunConfig, stdout=None) -> int:
    """명령 실행. 성공 0, 설정 오류 2, 수치 오류 3"""
    stdout = stdout or sys.stdout
    ctx = cfg.context()
    logger.info(f"[CLI] {cfg.command} bits={ctx.precision_bits} workers={cfg.workers}")
    try:
        rows = _COMMANDS[cfg.command](cfg, ctx)
        text = ReportService(ctx.precision_bits, cfg.output_format).write(rows, cfg.output_path)
    except Fig8Error as e:
        logger.error(f"[CLI] {e.code}: {e.detail}")
        print(json.dumps(e.to_record(), ensure_ascii=False), file=sys.stderr)
        return e.exit_code
    except (ValueError, ValidationError) as e:
        error = ConfigError(str(e))
        print(json.dumps(error.to_record(), ensure_ascii=False), file=sys.stderr)
        return exit_code_for(error)
    except Exception as e:
        error = Fig8Error(f"{type(e).__name__}: {e}", command=cfg.command)
        logger.error(f"[ERROR] [CLI] {cfg.command} 처리 중 예외: {error.detail}", exc_info=True)
        print(json.dumps(error.to_record(), ensure_ascii=False), file=sys.stderr)
        return exit_code_for(error)
    if cfg.output_path is None:
        stdout.write(text)
    return 0


# ================= Argument parsing =================

def _int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"정수 목록이 아닙니다: {text}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fig8asym", description="8자 매듭 양자 불변량 점근 계산")
    parser.add_argument("--precision-bits", type=int, default=config.DEFAULT_PRECISION_BITS)
    parser.add_argument("--zeta", type=float, default=config.DEFAULT_ZETA)
    parser.add_argument("--delta", type=float, default=config.DEFAULT_DELTA)
    parser.add_argument("--format", dest="output_format", choices=("csv", "json"), default=config.DEFAULT_OUTPUT_FORMAT)
    parser.add_argument("--output", dest="output_path", type=Path, default=None)
    parser.add_argument("--workers", type=int, default=config.DEFAULT_WORKERS)
    sub = parser.add_subparsers(dest="command", required=True)

    def level_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--M", type=_int_list, default=None)
        p.add_argument("--N", type=_int_list, default=None)
        p.add_argument("--a", type=float, default=None)
        p.add_argument("--u", type=float, default=0.0)

    p = sub.add_parser("jones", help="J_M(4₁; q) 정확값")
    level_args(p)
    p.add_argument("--kashaev", action="store_true", help="q = e^{2πi/N}, M = N")

    p = sub.add_parser("tv", help="Turaev–Viro 불변량")
    p.add_argument("--r", type=_int_list, required=True)

    for name in ("aef", "sweep"):
        p = sub.add_parser(name, help="AEF 값" if name == "aef" else "정확값/AEF 비 스윕")
        level_args(p)
        p.add_argument("--r", type=_int_list, default=None)
        p.add_argument("--theorem", choices=[t.value for t in TheoremTag], required=True)
        p.add_argument("--offset", type=int, default=None, help="M = N − offset")

    p = sub.add_parser("saddle", help="안장점")
    level_args(p)
    p.add_argument("--family", choices=FAMILIES, default="s")

    p = sub.add_parser("verify", help="독립 검증")
    level_args(p)
    p.add_argument("--r", type=_int_list, default=None)
    p.add_argument("--suite", choices=SUITES, default="identities")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """argparse 결과 → RunConfig. 목록 인자는 길이 1 이면 단일 값으로도 씀"""
    values = vars(args)
    data: Dict[str, Any] = {
        key: values[key]
        for key in ("command", "precision_bits", "zeta", "delta", "output_format", "output_path", "workers")
    }
    for key in ("a", "u", "kashaev", "theorem", "offset", "family", "suite"):
        if values.get(key) is not None:
            data[key] = values[key]
    for key in ("M", "N"):
        items = values.get(key) or []
        if len(items) == 1:
            data[key] = items[0]
        elif items:
            data[f"{key}_list"] = items
    if values.get("r"):
        data["r_list"] = values["r"]
    try:
        return RunConfig(**data)
    except ValidationError as e:
        raise ConfigError(str(e)) from e


def main(argv: Optional[Sequence[str]] = None) -> int:
    setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
    except ConfigError as e:
        print(json.dumps(e.to_record(), ensure_ascii=False), file=sys.stderr)
        return e.exit_code
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
