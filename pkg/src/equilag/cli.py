"""Command-line front end: derive | verify | sample | classify | sweep.

Configuration lives in an INI-style file (sections and key = value lines;
exact grammar in the README); command-line flags override file values.
Exit codes: 0 ok, 2 config error, 3 degenerate surface class,
4 verification failure.

All numeric output is formatted to 17 significant digits, so identical
configurations reproduce byte-identical files.
"""

from __future__ import annotations

import argparse
import cmath
import configparser
import json
import math
import sys
from dataclasses import dataclass, field, replace

import numpy as np

from . import immersion, periodicity, verification
from .potential import (
    SurfaceClass,
    SurfaceClassError,
    SurfaceParams,
    classify,
    derive_constants,
    eigensystem,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DEGENERATE = 3
EXIT_VERIFY = 4


class ConfigError(ValueError):
    pass


def _fmt(x: float) -> str:
    return f"{x:.17g}"


@dataclass(frozen=True)
class GridSpec:
    x_min: float = 0.0
    x_max: float = 1.0
    y_min: float = 0.0
    y_max: float = 1.0
    nx: int = 16
    ny: int = 16


@dataclass(frozen=True)
class JobConfig:
    a1: float
    psi: complex
    lam: complex = 1.0 + 0.0j
    sweep_count: int = 0          # > 0 selects a sweep instead of a single lambda
    sweep_start: float = 0.0
    sweep_end: float = 2.0 * math.pi
    grid: GridSpec = field(default_factory=GridSpec)
    quadrature_tol: float = 1e-11
    phase_tol: float = 1e-8
    rational_tol: float = 1e-8
    max_den: int = 64
    out_format: str = "csv"
    out_path: str = ""

    def validate(self) -> None:
        for name, v in (
            ("quadrature", self.quadrature_tol),
            ("phase", self.phase_tol),
            ("rational_tol", self.rational_tol),
        ):
            if not v > 0.0:
                raise ConfigError(f"tolerance {name} must be > 0, got {v}")
        if self.max_den < 1:
            raise ConfigError(f"max_den must be >= 1, got {self.max_den}")
        if self.sweep_count == 0 and abs(abs(self.lam) - 1.0) > 1e-9:
            raise ConfigError(f"|lambda| = 1 required, got |lambda| = {abs(self.lam)!r}")
        if self.grid.nx < 2 or self.grid.ny < 2:
            raise ConfigError("grid needs nx >= 2 and ny >= 2")
        if self.out_format not in ("csv", "obj", "json"):
            raise ConfigError(f"unknown output format {self.out_format!r}")
        if self.sweep_count < 0:
            raise ConfigError("sweep count must be >= 1")


def parse_config(text: str) -> JobConfig:
    """Parse the INI-style configuration grammar into a JobConfig."""
    cp = configparser.ConfigParser()
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config: {exc}") from exc
    if "surface" not in cp or "a1" not in cp["surface"]:
        raise ConfigError("config must contain [surface] with a1 and psi")
    surf = cp["surface"]
    try:
        a1 = surf.getfloat("a1")
        if "psi_re" in surf or "psi_im" in surf:
            psi = complex(surf.getfloat("psi_re", 0.0), surf.getfloat("psi_im", 0.0))
        elif "psi_mod" in surf:
            psi = cmath.rect(surf.getfloat("psi_mod"), surf.getfloat("psi_arg", 0.0))
        else:
            raise ConfigError("psi must be given as psi_re/psi_im or psi_mod/psi_arg")
        kw: dict = {"a1": a1, "psi": psi}
        if "lambda" in cp:
            lab = cp["lambda"]
            if "count" in lab:
                kw["sweep_count"] = lab.getint("count")
                kw["sweep_start"] = lab.getfloat("arc_start", 0.0)
                kw["sweep_end"] = lab.getfloat("arc_end", 2.0 * math.pi)
            else:
                kw["lam"] = complex(lab.getfloat("re", 1.0), lab.getfloat("im", 0.0))
        if "grid" in cp:
            g = cp["grid"]
            kw["grid"] = GridSpec(
                x_min=g.getfloat("x_min", 0.0),
                x_max=g.getfloat("x_max", 1.0),
                y_min=g.getfloat("y_min", 0.0),
                y_max=g.getfloat("y_max", 1.0),
                nx=g.getint("nx", 16),
                ny=g.getint("ny", 16),
            )
        if "tolerances" in cp:
            t = cp["tolerances"]
            kw["quadrature_tol"] = t.getfloat("quadrature", 1e-11)
            kw["phase_tol"] = t.getfloat("phase", 1e-8)
            kw["rational_tol"] = t.getfloat("rational_tol", 1e-8)
            kw["max_den"] = t.getint("max_den", 64)
        if "output" in cp:
            o = cp["output"]
            kw["out_format"] = o.get("format", "csv")
            kw["out_path"] = o.get("path", "")
    except (ValueError, configparser.Error) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad config value: {exc}") from exc
    cfg = JobConfig(**kw)
    cfg.validate()
    return cfg


def render_config(cfg: JobConfig) -> str:
    """Serialize a JobConfig back to the config grammar (round-trip stable)."""
    lines = [
        "[surface]",
        f"a1 = {_fmt(cfg.a1)}",
        f"psi_re = {_fmt(cfg.psi.real)}",
        f"psi_im = {_fmt(cfg.psi.imag)}",
        "",
        "[lambda]",
    ]
    if cfg.sweep_count > 0:
        lines += [
            f"count = {cfg.sweep_count}",
            f"arc_start = {_fmt(cfg.sweep_start)}",
            f"arc_end = {_fmt(cfg.sweep_end)}",
        ]
    else:
        lines += [f"re = {_fmt(cfg.lam.real)}", f"im = {_fmt(cfg.lam.imag)}"]
    g = cfg.grid
    lines += [
        "",
        "[grid]",
        f"x_min = {_fmt(g.x_min)}",
        f"x_max = {_fmt(g.x_max)}",
        f"y_min = {_fmt(g.y_min)}",
        f"y_max = {_fmt(g.y_max)}",
        f"nx = {g.nx}",
        f"ny = {g.ny}",
        "",
        "[tolerances]",
        f"quadrature = {_fmt(cfg.quadrature_tol)}",
        f"phase = {_fmt(cfg.phase_tol)}",
        f"rational_tol = {_fmt(cfg.rational_tol)}",
        f"max_den = {cfg.max_den}",
        "",
        "[output]",
        f"format = {cfg.out_format}",
        f"path = {cfg.out_path}",
        "",
    ]
    return "\n".join(lines)


def _config_dict(cfg: JobConfig) -> dict:
    d = {
        "a1": cfg.a1,
        "psi_re": cfg.psi.real,
        "psi_im": cfg.psi.imag,
        "grid": vars(cfg.grid).copy(),
        "tolerances": {
            "quadrature": cfg.quadrature_tol,
            "phase": cfg.phase_tol,
            "rational_tol": cfg.rational_tol,
            "max_den": cfg.max_den,
        },
        "output": {"format": cfg.out_format, "path": cfg.out_path},
    }
    if cfg.sweep_count > 0:
        d["lambda"] = {
            "count": cfg.sweep_count,
            "arc_start": cfg.sweep_start,
            "arc_end": cfg.sweep_end,
        }
    else:
        d["lambda"] = {"re": cfg.lam.real, "im": cfg.lam.imag}
    return d


def _json_dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _load(args) -> JobConfig:
    """Config file plus flag overrides; raises ConfigError on any defect."""
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                cfg = parse_config(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
    else:
        if args.a1 is None or args.psi is None:
            raise ConfigError("either --config or both --a1 and --psi are required")
        cfg = JobConfig(a1=args.a1, psi=args.psi)
    if args.a1 is not None:
        cfg = replace(cfg, a1=args.a1)
    if args.psi is not None:
        cfg = replace(cfg, psi=args.psi)
    if args.lam is not None:
        cfg = replace(cfg, lam=args.lam, sweep_count=0)
    if args.max_den is not None:
        cfg = replace(cfg, max_den=args.max_den)
    if args.tol is not None:
        cfg = replace(cfg, rational_tol=args.tol)
    if getattr(args, "out", None):
        cfg = replace(cfg, out_path=args.out)
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------
# commands

def cmd_derive(cfg: JobConfig, as_json: bool) -> int:
    params = SurfaceParams(cfg.a1, cfg.psi)
    tag = classify(params, cfg.lam)
    if tag is not SurfaceClass.GENERIC:
        print(f"degenerate surface class: {tag.value}", file=sys.stderr)
        return EXIT_DEGENERATE
    c = derive_constants(params)
    es = eigensystem(c, cfg.lam)
    regime = immersion.regime_of(c, cfg.lam)
    if as_json:
        payload = {
            "config": _config_dict(cfg),
            "classification": tag.value,
            "regime": regime,
            "constants": {
                "beta": c.beta, "a1": c.a1, "a2": c.a2, "a3": c.a3,
                "k": c.k, "q2": c.q2, "r": c.r, "T": c.T,
                "a_re": c.a.real, "a_im": c.a.imag,
                "b_re": c.b.real, "b_im": c.b.imag,
            },
            "eigenvalues": list(es.d),
        }
        sys.stdout.write(_json_dumps(payload))
        return EXIT_OK
    print(f"classification : {tag.value} (cubic form regime: {regime})")
    for name in ("beta", "a1", "a2", "a3", "k", "q2", "r", "T"):
        print(f"{name:<5} = {_fmt(getattr(c, name))}")
    print(f"a     = {_fmt(c.a.real)} + {_fmt(c.a.imag)}i")
    print(f"b     = {_fmt(c.b.real)} + {_fmt(c.b.imag)}i")
    for j, dj in enumerate(es.d, start=1):
        print(f"d_{j}   = {_fmt(dj)}")
    return EXIT_OK


def cmd_verify(
    cfg: JobConfig, as_json: bool, corrupt_kappa: bool = False,
    suites: list[str] | None = None,
) -> int:
    params = SurfaceParams(cfg.a1, cfg.psi)
    if classify(params) is not SurfaceClass.GENERIC:
        print(f"degenerate surface class: {classify(params).value}", file=sys.stderr)
        return EXIT_DEGENERATE
    try:
        report = verification.run_suites(params, corrupt_kappa=corrupt_kappa, names=suites)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if as_json:
        payload = {
            "config": _config_dict(cfg),
            "passed": report.passed,
            "suites": [
                {
                    "name": s.name,
                    "passed": s.passed,
                    "residuals": s.residuals,
                    "thresholds": s.thresholds,
                    "note": s.note,
                    "seconds": s.seconds,
                }
                for s in report.suites
            ],
        }
        sys.stdout.write(_json_dumps(payload))
    else:
        for s in report.suites:
            status = "PASS" if s.passed else "FAIL"
            worst = max(
                (k for k in s.thresholds), key=lambda k: s.residuals[k] / s.thresholds[k]
            )
            print(
                f"[suite:{s.name}] {status}  worst {worst} = {s.residuals[worst]:.3e} "
                f"(threshold {s.thresholds[worst]:.0e}, {s.seconds:.2f}s)"
                + (f"  note: {s.note}" if s.note else "")
            )
        print("verification:", "PASS" if report.passed else "FAIL")
    return EXIT_OK if report.passed else EXIT_VERIFY


def _csv_value(x: float) -> str:
    return "nan" if math.isnan(x) else _fmt(x)


def cmd_sample(cfg: JobConfig) -> int:
    params = SurfaceParams(cfg.a1, cfg.psi)
    if classify(params, cfg.lam) is not SurfaceClass.GENERIC:
        print(f"degenerate surface class: {classify(params, cfg.lam).value}", file=sys.stderr)
        return EXIT_DEGENERATE
    c = derive_constants(params)
    g = cfg.grid
    grid = immersion.sample_grid(
        c, cfg.lam, (g.x_min, g.x_max), (g.y_min, g.y_max), g.nx, g.ny,
        tol=cfg.quadrature_tol,
    )
    if not cfg.out_path:
        raise ConfigError("sample requires an output path ([output] path or --out)")
    try:
        if cfg.out_format == "csv":
            _write_csv(cfg.out_path, grid)
        elif cfg.out_format == "obj":
            _write_obj(cfg.out_path, grid)
        else:
            _write_json(cfg.out_path, cfg, grid)
    except OSError as exc:
        print(f"cannot write {cfg.out_path}: {exc}", file=sys.stderr)
        return 1
    return EXIT_OK


def _write_csv(path: str, grid: immersion.GridSample) -> None:
    cols = (
        "x,y,re_F1,im_F1,re_F2,im_F2,re_F3,im_F3,"
        "re_w1,im_w1,re_w2,im_w2,e_u,flag"
    )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(cols + "\n")
        for iy, y in enumerate(grid.ys):
            for ix, x in enumerate(grid.xs):
                F = grid.F[iy, ix]
                w = grid.chart[iy, ix]
                row = [x, y]
                for comp in F:
                    row += [comp.real, comp.imag]
                row += [w[0].real, w[0].imag, w[1].real, w[1].imag, grid.e_u[iy]]
                fh.write(",".join(_csv_value(v) for v in row))
                fh.write(f",{int(grid.flags[iy, ix])}\n")


def _write_obj(path: str, grid: immersion.GridSample) -> None:
    """Chart embedding (Re w1, Im w1, Re w2); faces skip flagged corners."""
    ny, nx = grid.flags.shape
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# equilag surface sample\n")
        for iy in range(ny):
            for ix in range(nx):
                if grid.flags[iy, ix]:
                    fh.write("v 0 0 0\n")  # placeholder keeps grid indexing
                else:
                    w = grid.chart[iy, ix]
                    fh.write(
                        f"v {_fmt(w[0].real)} {_fmt(w[0].imag)} {_fmt(w[1].real)}\n"
                    )
        for iy in range(ny - 1):
            for ix in range(nx - 1):
                corners = (
                    (iy, ix), (iy, ix + 1), (iy + 1, ix + 1), (iy + 1, ix),
                )
                if any(grid.flags[r, s] for r, s in corners):
                    continue
                idx = [r * nx + s + 1 for r, s in corners]
                fh.write("f {} {} {} {}\n".format(*idx))


def _write_json(path: str, cfg: JobConfig, grid: immersion.GridSample) -> None:
    def c2l(z: complex) -> list[float]:
        return [z.real, z.imag]

    payload = {
        "config": _config_dict(cfg),
        "xs": list(grid.xs),
        "ys": list(grid.ys),
        "e_u": list(grid.e_u),
        "F": [[[c2l(z) for z in cell] for cell in row] for row in grid.F],
        "chart": [
            [None if grid.flags[iy, ix] else [c2l(grid.chart[iy, ix, 0]), c2l(grid.chart[iy, ix, 1])]
             for ix in range(len(grid.xs))]
            for iy in range(len(grid.ys))
        ],
        "flags": [[int(v) for v in row] for row in grid.flags],
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(_json_dumps(payload))


def _verdict_dict(v: periodicity.PeriodVerdict) -> dict:
    d: dict = {"tag": v.tag, "lambda": [v.lam.real, v.lam.imag]}
    if v.omega is not None:
        d["omega"] = [v.omega.real, v.omega.imag]
    if v.lattice is not None:
        d["p_f"] = v.lattice[0].real
        d["omega_f"] = [v.lattice[1].real, v.lattice[1].imag]
    d["certificates"] = {
        name: {"num": cert.num, "den": cert.den, "value": cert.value, "residual": cert.residual}
        for name, cert in v.certificates.items()
    }
    return d


def cmd_classify(cfg: JobConfig, as_json: bool) -> int:
    params = SurfaceParams(cfg.a1, cfg.psi)
    tag = classify(params, cfg.lam)
    if tag is not SurfaceClass.GENERIC:
        print(f"degenerate surface class: {tag.value}", file=sys.stderr)
        return EXIT_DEGENERATE
    c = derive_constants(params)
    verdict = periodicity.classify_torus(
        c, cfg.lam, max_den=cfg.max_den, tol=cfg.rational_tol,
        phase_tol=cfg.phase_tol, quad_tol=cfg.quadrature_tol,
    )
    if as_json:
        sys.stdout.write(_json_dumps({"config": _config_dict(cfg), "verdict": _verdict_dict(verdict)}))
        return EXIT_OK
    print(f"verdict: {verdict.tag}")
    if verdict.lattice is not None:
        p_f, omega_f = verdict.lattice
        print(f"p_f     = {_fmt(p_f.real)}")
        print(f"omega_f = {_fmt(omega_f.real)} + {_fmt(omega_f.imag)}i")
    elif verdict.omega is not None:
        print(f"omega   = {_fmt(verdict.omega.real)} + {_fmt(verdict.omega.imag)}i")
    for name, cert in verdict.certificates.items():
        print(f"certificate {name}: {cert.num}/{cert.den} (residual {cert.residual:.3e})")
    return EXIT_OK


def cmd_sweep(cfg: JobConfig) -> int:
    params = SurfaceParams(cfg.a1, cfg.psi)
    if classify(params) is not SurfaceClass.GENERIC:
        print(f"degenerate surface class: {classify(params).value}", file=sys.stderr)
        return EXIT_DEGENERATE
    if cfg.sweep_count < 1:
        raise ConfigError("sweep requires [lambda] count >= 1")
    if not cfg.out_path:
        raise ConfigError("sweep requires an output path ([output] path or --out)")
    c = derive_constants(params)
    thetas = np.linspace(cfg.sweep_start, cfg.sweep_end, cfg.sweep_count, endpoint=False)
    rows = []
    for i, theta in enumerate(thetas):
        lam = complex(np.exp(1j * theta))
        row: dict = {"index": i, "theta": float(theta), "lam_re": lam.real, "lam_im": lam.imag}
        try:
            row["regime"] = immersion.regime_of(c, lam)
            verdict = periodicity.classify_torus(
                c, lam, max_den=cfg.max_den, tol=cfg.rational_tol,
                phase_tol=cfg.phase_tol, quad_tol=cfg.quadrature_tol,
            )
            row["verdict"] = verdict.tag
            if verdict.lattice is not None:
                row["p_f"] = verdict.lattice[0].real
            row["error"] = ""
        except SurfaceClassError as exc:
            row["regime"] = "imaginary"
            row["verdict"] = ""
            row["error"] = type(exc).__name__
        except ArithmeticError as exc:
            row["verdict"] = ""
            row["error"] = f"{type(exc).__name__}: {exc}"
        rows.append(row)
    try:
        if cfg.out_format == "json":
            with open(cfg.out_path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(_json_dumps({"config": _config_dict(cfg), "samples": rows}))
        else:
            with open(cfg.out_path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write("index,theta,lam_re,lam_im,regime,verdict,p_f,error\n")
                for row in rows:
                    fh.write(
                        f"{row['index']},{_fmt(row['theta'])},{_fmt(row['lam_re'])},"
                        f"{_fmt(row['lam_im'])},{row.get('regime','')},{row['verdict']},"
                        f"{_fmt(row['p_f']) if 'p_f' in row else ''},{row['error']}\n"
                    )
    except OSError as exc:
        print(f"cannot write {cfg.out_path}: {exc}", file=sys.stderr)
        return 1
    return EXIT_OK


# ---------------------------------------------------------------------------

def _complex_flag(text: str) -> complex:
    try:
        re_s, im_s = text.split(",")
        return complex(float(re_s), float(im_s))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="equilag",
        description="Equivariant minimal Lagrangian surfaces in CP^2: "
        "derive constants, verify identities, sample lifts, classify periods.",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("derive", "print derived constants and the eigenvalue table"),
        ("verify", "run the residual verification suites"),
        ("sample", "evaluate the lift on a grid and export csv/obj/json"),
        ("classify", "cylinder/torus classification at one lambda"),
        ("sweep", "classification catalog over a lambda arc"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", help="path to an INI config file")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--out", help="output file path (overrides [output] path)")
        p.add_argument("--lambda", dest="lam", type=_complex_flag, metavar="RE,IM",
                       help="spectral parameter on the unit circle")
        p.add_argument("--a1", type=float, help="metric scale e^{u(0)}")
        p.add_argument("--psi", type=_complex_flag, metavar="RE,IM",
                       help="cubic form coefficient")
        p.add_argument("--max-den", dest="max_den", type=int,
                       help="rational certificate denominator cap")
        p.add_argument("--tol", type=float, help="rational certificate tolerance")
        if name == "verify":
            p.add_argument("--debug-corrupt-kappa", action="store_true",
                           help="negative control: mis-normalize the Iwasawa factor")
            p.add_argument("--suites", help="comma-separated subset of suites to run")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _load(args)
        if args.command == "derive":
            return cmd_derive(cfg, args.json)
        if args.command == "verify":
            suites = args.suites.split(",") if getattr(args, "suites", None) else None
            return cmd_verify(cfg, args.json, getattr(args, "debug_corrupt_kappa", False), suites)
        if args.command == "sample":
            return cmd_sample(cfg)
        if args.command == "classify":
            return cmd_classify(cfg, args.json)
        if args.command == "sweep":
            return cmd_sweep(cfg)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SurfaceClassError as exc:
        print(f"degenerate surface class: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
