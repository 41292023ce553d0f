"""Command-line front end.

    szegomap map     --domain circle --zeta 0.5,0 --degree 40 --out out/
    szegomap rates   --domain square --degree 48 --ref-degree 64 --study tail --study interior
    szegomap fourier --domain circle --function cauchy-pole --pole 2,0 --degree 30

Exit status: 0 on success, 2 for configuration errors, 3 for numerical
failures.  Outputs are staged and renamed only after every computation
succeeded.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import analysis, szego
from .boundary import (
    BoundaryCurve,
    Location,
    contains,
    distance_to_boundary,
    exterior_angles,
    locate,
    quadrature,
)
from .domains import load_domain
from .errors import ConfigError, NumericalError, SzegoError
from .export import basis_csv, kernel_csv, map_grid_csv, csv_text, to_json, write_atomic
from .orthopoly import orthonormalize
from .reference import ReferenceMap, invert_psi

STUDIES = ("tail", "interior", "basis", "fourier")
_REGIME = {"tail": "global-tail", "interior": "interior", "basis": "basis-decay"}


@dataclass
class RunConfig:
    domain: str
    zeta: Optional[complex]
    degree: int
    ref_degree: Optional[int]
    studies: list = field(default_factory=list)
    out: Path = Path("out")
    seed: int = 0
    grid: int = 41
    panels: int = 4
    min_degree: int = analysis.DEFAULT_N_MIN
    probes: list = field(default_factory=list)
    function: str = "cauchy-pole"
    pole: complex = 2 + 0j
    trials: int = 200
    auto_orient: bool = False


class Stage:
    """Tracks which operation is running so failures can name it."""

    name = "startup"

    def __call__(self, name: str) -> None:
        self.name = name


def parse_complex(text: str) -> complex:
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected re,im but got {text!r}") from None
    if len(parts) == 1:
        return complex(parts[0], 0.0)
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected re,im but got {text!r}")
    return complex(parts[0], parts[1])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="szegomap", description="Conformal maps via the Szego kernel.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--domain", default="circle", help="builtin (circle, square, lshape, poly-image) or JSON file")
    common.add_argument("--zeta", type=parse_complex, default=None, help="base point re,im (default: node centroid)")
    common.add_argument("--degree", type=int, required=True, help="kernel degree n")
    common.add_argument("--ref-degree", type=int, default=None, help="reference degree N > n")
    common.add_argument("--out", type=Path, default=Path("out"))
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--panels", type=int, default=4, help="quadrature panels per arc")
    common.add_argument("--auto-orient", action="store_true", help="reverse clockwise domain files")

    p = sub.add_parser("map", parents=[common], help="evaluate the map approximant on a grid")
    p.add_argument("--grid", type=int, default=41, help="lattice points per side")

    p = sub.add_parser("rates", parents=[common], help="convergence-rate studies")
    p.add_argument("--study", action="append", choices=STUDIES, default=None)
    p.add_argument("--min-degree", type=int, default=analysis.DEFAULT_N_MIN)
    p.add_argument("--probe", type=parse_complex, action="append", default=None,
                   help="interior probe re,im (repeatable)")
    p.add_argument("--trials", type=int, default=200, help="randomized Fourier bound checks")

    p = sub.add_parser("fourier", parents=[common], help="Fourier expansion of a builtin function")
    p.add_argument("--function", default="cauchy-pole", help="cauchy-pole or poly-K")
    p.add_argument("--pole", type=parse_complex, default=2 + 0j)
    return parser


def config_from_args(args) -> RunConfig:
    cfg = RunConfig(args.domain, args.zeta, args.degree, args.ref_degree, out=args.out,
                    seed=args.seed, panels=args.panels, auto_orient=args.auto_orient)
    if args.command == "map":
        cfg.grid = args.grid
    elif args.command == "rates":
        cfg.studies = args.study or ["tail"]
        cfg.min_degree = args.min_degree
        cfg.probes = args.probe or []
        cfg.trials = args.trials
    else:
        cfg.function = args.function
        cfg.pole = args.pole
    if cfg.degree < 0:
        raise ConfigError("--degree must be nonnegative")
    if cfg.ref_degree is not None and cfg.ref_degree <= cfg.degree:
        raise ConfigError("--ref-degree must exceed --degree")
    if cfg.seed < 0 or cfg.seed >= 2 ** 64:
        raise ConfigError("--seed must be an unsigned 64-bit integer")
    return cfg


def _setup(cfg: RunConfig, capacity: int, stage: Stage):
    stage("domains.load_domain")
    boundary, oracle = load_domain(cfg.domain, auto_orient=cfg.auto_orient)
    stage("boundary.quadrature")
    rule = quadrature(boundary, capacity, cfg.panels)
    stage("orthopoly.orthonormalize")
    basis = orthonormalize(rule, capacity)
    stage("szego.expand")
    zeta = cfg.zeta
    if zeta is None and oracle is not None:
        zeta = oracle.zeta
    exp = szego.expand(basis, zeta)
    if oracle is None and cfg.domain == "circle":
        oracle = ReferenceMap.moebius(exp.zeta)
    elif oracle is not None and oracle.zeta != exp.zeta:
        stage("reference.invert_psi")
        oracle = ReferenceMap.poly_image(oracle.coeffs, invert_psi(oracle, exp.zeta))
    return boundary, oracle, basis, exp


def _lattice(boundary: BoundaryCurve, m: int) -> np.ndarray:
    pts = np.concatenate([a.point(np.linspace(0, 1, 65)) for a in boundary.arcs])
    xs = np.linspace(pts.real.min(), pts.real.max(), m)
    ys = np.linspace(pts.imag.min(), pts.imag.max(), m)
    z = (xs[None, :] + 1j * ys[:, None]).ravel()
    return z[locate(boundary, z) == Location.INSIDE.value]


def cmd_map(cfg: RunConfig, stage: Stage) -> dict:
    n = cfg.degree
    N = cfg.ref_degree if cfg.ref_degree is not None else szego.default_reference_degree(n)
    boundary, oracle, basis, exp = _setup(cfg, N, stage)
    stage("szego.map_approximant")
    J = szego.map_approximant(exp, n)
    stage("szego.eval_map")
    z = _lattice(boundary, cfg.grid)
    values = szego.eval_map(J, z)
    stage("szego.sup_error_bound")
    lams, lam_min = exterior_angles(boundary)
    summary = {
        "domain": cfg.domain,
        "zeta": exp.zeta,
        "degree": n,
        "ref_degree": N,
        "length": boundary.length,
        "lambda_min": lam_min,
        "corner_lambdas": lams,
        "phi_prime": szego.phi_prime_at_base(exp, n),
        "energy": float(exp.partial_energy[n]),
        "kernel_diagonal": boundary.length / (2 * math.pi) * szego.phi_prime_at_base(exp, n),
        "tail_norm": szego.tail_norm(exp, n, N),
        "sup_bound": szego.sup_error_bound(exp, n, N),
        "sup_bound_label": "reference-truncated bound",
        "gram_residual": basis.gram_residual(),
        "grid_points": int(z.size),
    }
    if oracle is not None and z.size:
        stage("reference.phi")
        summary["oracle"] = oracle.kind
        summary["oracle_max_error"] = float(np.max(np.abs(values - oracle.phi(z))))
    return {
        "map_grid.csv": map_grid_csv(z, values),
        "kernel.csv": kernel_csv(exp),
        "basis.csv": basis_csv(basis),
        "summary.json": to_json(summary) + "\n",
    }


def _default_probes(boundary: BoundaryCurve, zeta: complex) -> np.ndarray:
    rho = 0.3 * float(distance_to_boundary(boundary, np.array([zeta]))[0])
    return zeta + rho * np.exp(1j * np.pi * np.arange(8) / 4)


def _fourier_trials(basis, boundary, rng, trials: int, N: int) -> dict:
    """Randomized Cauchy-Schwarz checks on builtin analytic functions."""
    nodes = basis.rule.nodes
    pts = np.concatenate([a.point(np.linspace(0, 1, 65)) for a in boundary.arcs])
    lo, hi = pts.real.min(), pts.real.max()
    bo, to = pts.imag.min(), pts.imag.max()
    size = max(hi - lo, to - bo)
    failures, worst = 0, 0.0
    for _ in range(trials):
        if rng.random() < 0.5:
            ang = rng.uniform(0, 2 * np.pi)
            pole = 0.5 * (lo + hi) + 0.5j * (bo + to) + size * rng.uniform(0.9, 2.0) * np.exp(1j * ang)
            f = 1.0 / (nodes - pole)
        else:
            f = basis.node_values[:, int(rng.integers(0, N + 1))]
        fe = analysis.fourier_project(basis, f, N)
        while True:
            z = complex(rng.uniform(lo, hi), rng.uniform(bo, to))
            if contains(boundary, z):
                break
        check = analysis.fourier_pointwise_bound_check(fe, z, int(rng.integers(0, N)), N)
        failures += not check["holds"]
        if check["rhs"] > 0:
            worst = max(worst, check["lhs"] / check["rhs"])
    return {"trials": trials, "failures": failures, "max_ratio": worst}


def cmd_rates(cfg: RunConfig, stage: Stage) -> dict:
    if cfg.ref_degree is None:
        raise ConfigError("rate studies need --ref-degree")
    n, N = cfg.degree, cfg.ref_degree
    boundary, oracle, basis, exp = _setup(cfg, N, stage)
    degrees = list(range(cfg.min_degree, n + 1))
    files = {}
    for study in cfg.studies:
        stage(f"analysis.{study}_study")
        if study == "tail":
            report = analysis.tail_decay_study(exp, degrees, N, cfg.min_degree)
        elif study == "basis":
            report = analysis.basis_decay_study(exp, degrees, cfg.min_degree)
        elif study == "interior":
            probes = np.array(cfg.probes) if cfg.probes else _default_probes(boundary, exp.zeta)
            report = analysis.interior_error_study(exp, probes, degrees, N, n_min=cfg.min_degree)
        else:
            rng = np.random.default_rng(cfg.seed)
            result = _fourier_trials(basis, boundary, rng, cfg.trials, N)
            result.update({"domain": cfg.domain, "ref_degree": N, "seed": cfg.seed})
            files["fourier_check.json"] = to_json(result) + "\n"
            continue
        data = report.to_dict()
        data["domain"] = cfg.domain
        data["zeta"] = exp.zeta
        files[f"rate_{_REGIME[study]}.json"] = to_json(data) + "\n"
    return files


def _fourier_function(cfg: RunConfig, boundary: BoundaryCurve, basis):
    name = cfg.function
    if name == "cauchy-pole":
        if contains(boundary, cfg.pole) is not Location.OUTSIDE:
            raise ConfigError(f"pole {cfg.pole} lies in the closed domain; 1/(z - c) is not in E2(G)")
        return 1.0 / (basis.rule.nodes - cfg.pole)
    if name.startswith("poly-"):
        try:
            k = int(name[5:])
        except ValueError:
            raise ConfigError(f"bad function {name!r}") from None
        if not 0 <= k <= basis.max_degree:
            raise ConfigError(f"poly-{k} needs --degree >= {k}")
        return basis.node_values[:, k]
    raise ConfigError(f"unknown function {name!r}; use cauchy-pole or poly-K")


def cmd_fourier(cfg: RunConfig, stage: Stage) -> dict:
    n = cfg.degree
    N = cfg.ref_degree if cfg.ref_degree is not None else n
    boundary, _, basis, exp = _setup(cfg, max(n, N), stage)
    stage("analysis.fourier_project")
    f = _fourier_function(cfg, boundary, basis)
    fe = analysis.fourier_project(basis, f, max(n, N))
    coeffs = fe.coefficients
    rows = [(k, a.real, a.imag, abs(a)) for k, a in enumerate(coeffs[: n + 1])]
    stage("analysis.fourier_pointwise_bound_check")
    checks = [analysis.fourier_pointwise_bound_check(fe, exp.zeta, m, N) for m in range(N)]
    summary = {
        "domain": cfg.domain,
        "function": cfg.function,
        "zeta": exp.zeta,
        "degree": n,
        "ref_degree": N,
        "partial_sum_at_zeta": complex(analysis.fourier_eval(fe, exp.zeta, n)),
        "coefficient_energy": float(np.sum(np.abs(coeffs) ** 2)),
        "norm_squared": fe.norm_squared(),
        "bound_checks": [[m, c["lhs"], c["rhs"]] for m, c in enumerate(checks)],
        "bound_holds": all(c["holds"] for c in checks),
    }
    if cfg.function == "cauchy-pole":
        summary["exact_at_zeta"] = 1.0 / (exp.zeta - cfg.pole)
    return {
        "fourier_coeffs.csv": csv_text(["k", "re_a", "im_a", "abs_a"], rows),
        "fourier_summary.json": to_json(summary) + "\n",
    }


COMMANDS = {"map": cmd_map, "rates": cmd_rates, "fourier": cmd_fourier}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    stage = Stage()
    try:
        cfg = config_from_args(args)
        files = COMMANDS[args.command](cfg, stage)
        stage("export.write_atomic")
        write_atomic(cfg.out, files)
    except ConfigError as exc:
        print(f"szegomap: {stage.name}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"szegomap: {stage.name}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except SzegoError as exc:  # pragma: no cover - every error subclasses one of the above
        print(f"szegomap: {stage.name}: {exc}", file=sys.stderr)
        return 3
    for name in sorted(files):
        print(cfg.out / name)
    return 0


if __name__ == "__main__":
    sys.exit(main())
