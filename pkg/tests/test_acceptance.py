"""Exit criteria.  Each test records one PASS/FAIL line shown in the summary."""

import math
import time

import numpy as np
import pytest

from conftest import record_acceptance
from szegomap import domains
from szegomap.analysis import (
    basis_decay_study,
    fourier_pointwise_bound_check,
    fourier_project,
    interior_error_study,
    tail_decay_study,
)
from szegomap.boundary import contains, quadrature
from szegomap.cli import main
from szegomap.orthopoly import eval_basis, orthonormalize
from szegomap.reference import moebius_eval
from szegomap.szego import (
    eval_map,
    eval_q,
    expand,
    kernel_partial_sum,
    map_approximant,
    phi_prime_at_base,
    sup_error_bound,
)

pytestmark = pytest.mark.acceptance


def check(number, title, ok, detail):
    record_acceptance(f"[{'PASS' if ok else 'FAIL'}] {number}. {title}: {detail}")
    assert ok, detail


def disk_points(count, radius=1.0, seed=1):
    """Deterministic points filling the disk of the given radius."""
    rng = np.random.default_rng(seed)
    return radius * np.sqrt(rng.random(count)) * np.exp(2j * np.pi * rng.random(count))


def test_1_disk_identity():
    start = time.perf_counter()
    basis = orthonormalize(quadrature(domains.circle(), 10), 10)
    exp = expand(basis, 0)
    z = np.concatenate([disk_points(150), np.exp(2j * np.pi * np.arange(50) / 50)])
    worst = max(float(np.max(np.abs(eval_map(map_approximant(exp, n), z) - z))) for n in range(11))
    elapsed = time.perf_counter() - start
    check(1, "disk identity", worst <= 1e-12 and elapsed < 1.0,
          f"max|J-z| = {worst:.2e} (<= 1e-12), {elapsed:.2f}s (< 1s)")


def test_2_moebius_equivalence():
    start = time.perf_counter()
    basis = orthonormalize(quadrature(domains.circle(), 40), 40)
    exp = expand(basis, 0.5)
    z = disk_points(200, radius=0.99)
    exact = moebius_eval(0.5, z)
    errors = {n: float(np.max(np.abs(eval_map(map_approximant(exp, n), z) - exact))) for n in range(8, 41)}
    dphi = abs(phi_prime_at_base(exp, 40) - 4 / 3)
    ratios = [errors[n] / errors[n - 4] for n in range(12, 41)]
    elapsed = time.perf_counter() - start
    ok = errors[40] <= 1e-7 and dphi <= 1e-9 and max(ratios) <= 0.25 and elapsed < 5.0
    check(2, "Moebius oracle", ok,
          f"err(40) = {errors[40]:.2e} (<= 1e-7), |phi'-4/3| = {dphi:.1e} (<= 1e-9), "
          f"max err(n)/err(n-4) = {max(ratios):.3f} (<= 0.25), {elapsed:.2f}s (< 5s)")


def test_3_norm_identities():
    start = time.perf_counter()
    rng = np.random.default_rng(3)
    worst_q = worst_gram = worst_rep = 0.0
    monotone = True
    min_diag = math.inf
    for name, zeta in (("circle", 0.5), ("square", 0.3 + 0.2j), ("lshape", None)):
        boundary = domains.builtin(name)[0]
        basis = orthonormalize(quadrature(boundary, 60), 60)
        exp = expand(basis, zeta)
        rule = basis.rule
        worst_gram = max(worst_gram, basis.gram_residual())
        target = math.sqrt(2 * math.pi / exp.length)
        for n in range(61):
            q = eval_q(map_approximant(exp, n), rule.nodes)
            worst_q = max(worst_q, abs(rule.norm(q) - target))
        zeta_vals = eval_basis(basis, exp.zeta)
        for n in (0, 1, 2, 5, 20, 60):
            s = kernel_partial_sum(exp, rule.nodes, n)
            c = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
            f = basis.node_values[:, : n + 1] @ c
            worst_rep = max(worst_rep, abs(rule.inner(f, s) - zeta_vals[: n + 1] @ c))
            for g, g_zeta in ((np.ones(rule.size), 1.0), (rule.nodes ** min(n, 2), exp.zeta ** min(n, 2))):
                worst_rep = max(worst_rep, abs(rule.inner(g, s) - g_zeta))
        monotone &= bool(np.all(np.diff(exp.partial_energy) >= -1e-14))
        min_diag = min(min_diag, exp.length / (2 * math.pi) * exp.partial_energy[60])
    elapsed = time.perf_counter() - start
    ok = (worst_q <= 1e-10 and worst_gram <= 1e-10 and worst_rep <= 1e-9 and monotone
          and min_diag >= 0.99 * 0.25 and elapsed < 30.0)
    check(3, "norm identities", ok,
          f"||Q_n|| dev {worst_q:.1e}, Gram {worst_gram:.1e}, reproducing {worst_rep:.1e}, "
          f"monotone={monotone}, min (l/2pi)E_60 = {min_diag:.3f} (>= 0.2475), {elapsed:.2f}s (< 30s)")


def test_4_sup_norm_bound():
    start = time.perf_counter()
    basis = orthonormalize(quadrature(domains.circle(), 60), 60)
    exp = expand(basis, 0.5)
    t = np.exp(2j * np.pi * np.arange(512) / 512)
    exact = moebius_eval(0.5, t)
    worst_ratio = 0.0
    ok = True
    for n in range(2, 21):
        err = float(np.max(np.abs(eval_map(map_approximant(exp, n), t) - exact)))
        bound = 8 * math.pi * 2.0 ** -n / math.sqrt(3)
        # the computed truncated bound matches the exact geometric tail
        ok &= abs(sup_error_bound(exp, n, 60) - bound) <= 1e-8 * bound
        ok &= err <= bound
        worst_ratio = max(worst_ratio, err / bound)
    elapsed = time.perf_counter() - start
    check(4, "sup-norm bound 8*pi*tail", ok and elapsed < 5.0,
          f"max error/bound = {worst_ratio:.3f} (<= 1, zero slack), {elapsed:.2f}s (< 5s)")


def test_5_square_rates():
    start = time.perf_counter()
    basis = orthonormalize(quadrature(domains.builtin("square")[0], 64), 64)
    exp = expand(basis, 0)
    tail = tail_decay_study(exp, range(8, 49), 64)
    probes = 0.3 * np.exp(1j * np.pi * np.arange(8) / 4)
    interior = interior_error_study(exp, probes, range(8, 41), 64)
    elapsed = time.perf_counter() - start
    ok = (abs(tail.fitted_slope + 1.5) <= 0.35 and tail.r_squared >= 0.97
          and abs(interior.fitted_slope + 3.0) <= 0.5 and elapsed < 120.0)
    check(5, "square rates (lambda = 3/2)", ok,
          f"tail slope {tail.fitted_slope:.3f} (-1.5 +/- 0.35), R^2 {tail.r_squared:.4f} (>= 0.97); "
          f"interior slope {interior.fitted_slope:.3f} (-3.0 +/- 0.5), {elapsed:.2f}s (< 120s)")


def test_6_lshape_rate():
    start = time.perf_counter()
    basis = orthonormalize(quadrature(domains.builtin("lshape")[0], 80), 80)
    exp = expand(basis)
    tail = tail_decay_study(exp, range(12, 61), 80, n_min=12)
    elapsed = time.perf_counter() - start
    ok = tail.fitted_slope <= -0.10 and abs(tail.fitted_slope + 1 / 6) <= 0.10 and elapsed < 180.0
    check(6, "lshape rate (lambda = 1/2)", ok,
          f"tail slope {tail.fitted_slope:.3f} (<= -0.10 and -1/6 +/- 0.10), "
          f"R^2 {tail.r_squared:.3f}, zeta {exp.zeta}, {elapsed:.2f}s (< 180s)")


def test_7_basis_decay():
    start = time.perf_counter()
    basis = orthonormalize(quadrature(domains.builtin("square")[0], 48), 48)
    exp = expand(basis, 0.3 + 0.2j)
    report = basis_decay_study(exp, range(8, 49))
    elapsed = time.perf_counter() - start
    check(7, "|p_n(zeta)| decay", report.fitted_slope <= -1.0 and elapsed < 60.0,
          f"slope {report.fitted_slope:.3f} (<= -1.0, bound -1.5), {elapsed:.2f}s (< 60s)")


def test_8_fourier_bound():
    start = time.perf_counter()
    rng = np.random.default_rng(8)
    N = 40
    failures = trials = 0
    worst_parseval = 0.0
    for name in ("circle", "square", "lshape"):
        boundary = domains.builtin(name)[0]
        basis = orthonormalize(quadrature(boundary, N), N)
        nodes = basis.rule.nodes
        center = basis.center
        reach = float(np.max(np.abs(nodes - center)))
        for _ in range(334 if name != "lshape" else 332):
            if rng.random() < 0.5:
                pole = center + reach * rng.uniform(1.05, 2.5) * np.exp(2j * np.pi * rng.random())
                f = 1.0 / (nodes - pole)
            else:
                f = basis.node_values[:, int(rng.integers(0, N + 1))]
            fe = fourier_project(basis, f, N)
            while True:
                z = center + reach * math.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
                if contains(boundary, z):
                    break
            failures += not fourier_pointwise_bound_check(fe, z, int(rng.integers(0, N)), N)["holds"]
            trials += 1
        for n in (5, 20, N):
            c = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
            fe = fourier_project(basis, basis.node_values[:, : n + 1] @ c, N)
            resid = abs(np.sum(np.abs(fe.coefficients) ** 2) - fe.norm_squared()) / fe.norm_squared()
            worst_parseval = max(worst_parseval, resid)
    elapsed = time.perf_counter() - start
    ok = failures == 0 and trials == 1000 and worst_parseval <= 1e-10 and elapsed < 60.0
    check(8, "Fourier pointwise bound", ok,
          f"{trials - failures}/{trials} trials hold, Parseval residual {worst_parseval:.1e} (<= 1e-10), "
          f"{elapsed:.2f}s (< 60s)")


def test_9_determinism(tmp_path):
    args = ["rates", "--domain", "square", "--zeta", "0,0", "--degree", "40", "--ref-degree", "64",
            "--study", "tail", "--study", "interior", "--study", "basis", "--seed", "11"]
    codes = [main(args + ["--out", str(tmp_path / d)]) for d in ("a", "b")]
    names = sorted(p.name for p in (tmp_path / "a").iterdir())
    same = all((tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes() for f in names)
    check(9, "determinism", codes == [0, 0] and same and len(names) == 3,
          f"exit codes {codes}, {len(names)} JSON files byte-identical={same}")
