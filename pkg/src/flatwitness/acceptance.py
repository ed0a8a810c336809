"""Desk-scale acceptance battery.

Each criterion function runs a self-contained randomized or fixed check and
returns a result carrying the measured numbers next to the tolerances that
judge them, so a report is verifiable on its own.  ``run_suite`` executes
all criteria; the environment variable FLATWITNESS_THREADS caps how many
run concurrently (they are independent and deterministic, so the combined
result does not depend on scheduling).
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np

from .bezout_ops import principal_generator, sampled_function
from .halfplane_transfer import (
    disk_to_halfplane_h2,
    halfplane_to_disk_h2,
    transfer_factorization,
)
from .hardy_engine import (
    GridFunction,
    constant_function,
    coordinate_function,
    grid_thetas,
    hardy_factor,
    neg_mode_leakage,
    outer_from_modulus,
    project_onto_bH2,
)
from .layered_factor import factor, preset_l2, verify_star_bound
from .pointwise_witness import (
    pointwise_relation,
    synthesize_witness,
    verify_witness,
)
from .seq_core import tail_profile, verify_olympiad_bound
from .ultralimits import (
    Membership,
    bounded_sequence,
    ideal_membership_nonprincipal,
    principal_limit,
)

__all__ = ["CriterionResult", "run_suite"] + [f"criterion_{i}" for i in range(1, 10)]

DEFAULT_SEED = 20250811
EPS = np.finfo(float).eps


@dataclass(frozen=True)
class CriterionResult:
    index: int
    name: str
    passed: bool
    elapsed_s: float
    checks: Dict[str, bool]
    details: Dict[str, object]


def _result(index, name, t0, checks, details) -> CriterionResult:
    return CriterionResult(
        index=index,
        name=name,
        passed=all(checks.values()),
        elapsed_s=time.perf_counter() - t0,
        checks=checks,
        details=details,
    )


def criterion_1(seed: int = DEFAULT_SEED) -> CriterionResult:
    """Weighted tail-series bound on random square-summable sequences."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    n = 10_000
    grid = np.unique(np.concatenate([2 ** np.arange(0, 14), [n]]))
    worst_excess = -np.inf
    windows = 0
    ok = True
    for _ in range(100):
        power = rng.uniform(0.6, 1.5)
        decay = np.arange(1, n + 1, dtype=float) ** -power
        a = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) * decay
        profile = tail_profile(a)
        tol = 1e-12 * (1.0 + profile.head)
        for i, m in enumerate(grid[:-1]):
            for nn in grid[i + 1:]:
                rep = verify_olympiad_bound(profile, int(m), int(nn), tol_abs=tol)
                windows += 1
                worst_excess = max(worst_excess, rep.lhs - rep.rhs)
                ok = ok and rep.holds
    checks = {"bound_holds_all_windows": ok}
    details = {"sequences": 100, "windows": windows, "worst_lhs_minus_rhs": worst_excess}
    return _result(1, "olympiad bound suite", t0, checks, details)


def criterion_2(seed: int = DEFAULT_SEED) -> CriterionResult:
    """Synthesize-and-verify on random manufactured pointwise relations."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed + 2)
    worst_coeff = worst_recon = worst_rho = 0.0
    mu_ok = True
    for _ in range(200):
        n = int(rng.integers(1, 6))
        p = int(rng.integers(1, 513))
        weights = rng.uniform(size=p)
        weights[rng.uniform(size=p) < 0.1] = 0.0
        r = rng.standard_normal((p, n)) + 1j * rng.standard_normal((p, n))
        r[rng.uniform(size=p) < 0.1] = 0.0
        raw_m = rng.standard_normal((p, n)) + 1j * rng.standard_normal((p, n))
        # project each module row so the bilinear pairing with r vanishes
        c = np.conj(r)
        cc = np.einsum("pi,pi->p", c, np.conj(c)).real
        coef = np.where(cc > 0, np.einsum("pi,pi->p", raw_m, r) / np.where(cc > 0, cc, 1), 0)
        m = raw_m - coef[:, None] * c
        rel = pointwise_relation(weights, r, m)
        cert = synthesize_witness(rel)
        rep = verify_witness(rel, cert)
        worst_coeff = max(worst_coeff, rep.max_coeff_residual / (1e-10 * rep.coeff_scale))
        worst_recon = max(
            worst_recon, rep.max_reconstruction_residual / (1e-10 * rep.reconstruction_scale)
        )
        worst_rho = max(worst_rho, float(np.max(np.abs(cert.rho))))
        mu_ok = mu_ok and rep.mu_norm_ok
    checks = {
        "coeff_residuals": worst_coeff <= 1.0,
        "reconstruction_residuals": worst_recon <= 1.0,
        "rho_bound": worst_rho <= 1.0 + 1e-12,
        "mu_norm_bound": mu_ok,
    }
    details = {
        "relations": 200,
        "worst_coeff_residual_over_scale": worst_coeff,
        "worst_reconstruction_residual_over_scale": worst_recon,
        "max_abs_rho": worst_rho,
    }
    return _result(2, "witness suite", t0, checks, details)


def criterion_3(seed: int = DEFAULT_SEED) -> CriterionResult:
    """Pointwise generator identities at two ulp on random pairs."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed + 3)
    ulp_budget = 2.0 * EPS
    worst = {"f_eq_Fd": 0.0, "g_eq_Gd": 0.0, "d_membership": 0.0,
             "F_bound": 0.0, "cf_unimodular": 0.0}
    for _ in range(100):
        p = 1000
        fv = rng.standard_normal(p) + 1j * rng.standard_normal(p)
        gv = rng.standard_normal(p) + 1j * rng.standard_normal(p)
        fv[rng.uniform(size=p) < 0.05] = 0.0
        gv[rng.uniform(size=p) < 0.05] = 0.0
        f = sampled_function(fv)
        g = sampled_function(gv)
        gen = principal_generator(f, g)
        d = gen.d.values.real

        def rel_err(lhs, target, scale):
            err = np.abs(lhs - target)
            out = err / np.maximum(scale, 1e-300)
            out[scale == 0] = err[scale == 0]
            return float(out.max())

        worst["f_eq_Fd"] = max(worst["f_eq_Fd"],
                               rel_err(gen.F.values * d, fv, np.abs(fv)))
        worst["g_eq_Gd"] = max(worst["g_eq_Gd"],
                               rel_err(gen.G.values * d, gv, np.abs(gv)))
        worst["d_membership"] = max(
            worst["d_membership"],
            rel_err(fv * gen.cf.values + gv * gen.cg.values, d, d),
        )
        worst["F_bound"] = max(worst["F_bound"], float(np.abs(gen.F.values).max() - 1.0))
        worst["cf_unimodular"] = max(
            worst["cf_unimodular"], float(np.abs(np.abs(gen.cf.values) - 1.0).max())
        )
    checks = {
        "f_eq_Fd": worst["f_eq_Fd"] <= ulp_budget,
        "g_eq_Gd": worst["g_eq_Gd"] <= ulp_budget,
        "d_membership": worst["d_membership"] <= ulp_budget,
        "F_bound": worst["F_bound"] <= ulp_budget,
        "cf_unimodular": worst["cf_unimodular"] <= ulp_budget,
    }
    details = {"pairs": 100, "atoms": 1000, "ulp_budget": ulp_budget,
               "worst_errors": worst}
    return _result(3, "bezout suite", t0, checks, details)


def criterion_4(seed: int = DEFAULT_SEED) -> CriterionResult:
    """Layered factorization closed forms at the geometric preset."""
    t0 = time.perf_counter()
    n_shells = 64
    f, layout, tail = preset_l2(n_shells, ratio=0.5)
    res = factor(f, layout, tail_sum_sq=tail)
    k = np.arange(1, n_shells + 1, dtype=float)
    g_expected = 2.0 ** (-(k - 1) / 4.0)
    g_err = float(np.max(np.abs(res.g_shell_values - g_expected)))
    x = 2.0 ** -0.5
    h_norm_closed = float(0.5 * (1.0 - x**n_shells) / (1.0 - x))  # sum 2^-(k+1)/2, k<=64
    h_err = abs(res.h_norm_sq - h_norm_closed)
    star = verify_star_bound(res)

    compact_f = sampled_function(
        np.concatenate([[1.0], np.zeros(n_shells - 1)]), layout.flat_weights
    )
    compact = factor(compact_f, layout)
    w_compact_exact = bool(
        np.array_equal(compact.w_values, np.arange(1, n_shells + 1, dtype=float))
    )
    checks = {
        "g_matches_closed_form": g_err <= 1e-12,
        "h_norm_matches_closed_form": h_err <= 1e-10,
        "star_bound_holds": star.holds,
        "compact_weights_exact": w_compact_exact and compact.mode == "compact",
    }
    details = {
        "g_max_error": g_err,
        "h_norm_sq": res.h_norm_sq,
        "h_norm_closed_form": h_norm_closed,
        "star_lhs": star.lhs,
        "star_rhs": star.rhs,
    }
    return _result(4, "layered factorization", t0, checks, details)


def criterion_5(seed: int = DEFAULT_SEED) -> CriterionResult:
    """Outer-function fixtures on the 2^14 grid."""
    t0 = time.perf_counter()
    n = 2**14
    c = 2.5
    fix_a = outer_from_modulus(np.full(n, np.log(c)))
    a_err = float(np.max(np.abs(fix_a.boundary.samples - c)))
    a_leak = neg_mode_leakage(fix_a.boundary)

    theta = grid_thetas(n)
    fix_b = outer_from_modulus(np.log(2.0 * np.abs(np.sin(theta / 2.0))))
    target = np.zeros(16, dtype=complex)
    target[0] = 1.0
    target[1] = -1.0
    b_err = float(np.max(np.abs(fix_b.taylor[:16] - target)))

    checks = {
        "constant_reproduced": a_err <= 1e-10,
        "one_minus_z_coefficients": b_err <= 1e-3,
        "constant_leakage": a_leak <= 1e-8,
    }
    details = {
        "constant_error": a_err,
        "one_minus_z_coeff_error": b_err,
        "constant_leakage": a_leak,
        "clamp_counts": [fix_a.clamp_count, fix_b.clamp_count],
    }
    return _result(5, "outer-function fixtures", t0, checks, details)


def criterion_6(seed: int = DEFAULT_SEED) -> CriterionResult:
    """Full boundary factorization pipeline on the constant function."""
    t0 = time.perf_counter()
    n, m = 2**14, 256
    res = hardy_factor(constant_function(n), m)
    radial = res.radial_profile(depths=12)
    diffs = np.diff(radial.values[3:])
    checks = {
        "g_matches_reciprocal_weight": res.gw_deviation <= 1e-10,
        "h_norm_bounded": res.h_norm_sq <= res.star_rhs + 1e-8,
        "h_leakage": res.h_leakage <= 1e-6,
        "radial_strictly_decreasing_from_4": bool(np.all(diffs < 0)),
        "radial_ratio": radial.ratio <= 0.1,
    }
    details = {
        "gw_deviation": res.gw_deviation,
        "h_norm_sq": res.h_norm_sq,
        "star_rhs": res.star_rhs,
        "h_leakage": res.h_leakage,
        "radial_values": radial.values.tolist(),
        "radial_ratio": radial.ratio,
        "log_integral": res.log_report.integral_value,
        "log_bound": res.log_report.comparison_bound,
    }
    return _result(6, "boundary factorization pipeline", t0, checks, details)


def criterion_7(seed: int = DEFAULT_SEED) -> CriterionResult:
    """Projection onto shifted analytic subspaces: distances and operator laws."""
    t0 = time.perf_counter()
    n = 2**14
    one = constant_function(n)
    z = coordinate_function(n)
    proj_z = project_onto_bH2(one, z)
    dist_z_err = abs(proj_z.distance - 1.0)

    worst_dist = 0.0
    worst_idem = 0.0
    worst_adj = 0.0
    zs = z.samples
    probe = GridFunction(0.5 * zs + 0.25 * zs**3)
    for a in (0.3, 0.5, 0.9):
        b = GridFunction((zs - a) / (1.0 - a * zs))
        proj = project_onto_bH2(one, b)
        worst_dist = max(worst_dist, abs(proj.distance**2 - (1.0 - a * a)))
        again = project_onto_bH2(proj.projection, b)
        idem = float(np.sqrt(np.mean(np.abs(again.projection.samples - proj.projection.samples) ** 2)))
        worst_idem = max(worst_idem, idem)
        lhs = np.mean(proj.projection.samples * np.conj(probe.samples))
        rhs = np.mean(one.samples * np.conj(project_onto_bH2(probe, b).projection.samples))
        worst_adj = max(worst_adj, abs(lhs - rhs))
    checks = {
        "distance_to_shifted_space": dist_z_err <= 1e-12,
        "blaschke_distances": worst_dist <= 1e-8,
        "idempotent": worst_idem <= 1e-10,
        "self_adjoint": worst_adj <= 1e-10,
    }
    details = {
        "dist_one_zH2_error": dist_z_err,
        "worst_blaschke_distance_error": worst_dist,
        "worst_idempotence_residual": worst_idem,
        "worst_self_adjointness_residual": worst_adj,
    }
    return _result(7, "projection strictness", t0, checks, details)


def criterion_8(seed: int = DEFAULT_SEED) -> CriterionResult:
    """Disk/half-plane correspondence: round trips, fixture, transferred factorization."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed + 8)
    worst_round = 0.0
    for _ in range(100):
        coeffs = rng.standard_normal(30) + 1j * rng.standard_normal(30)
        zpts = 0.95 * np.sqrt(rng.uniform(size=100)) * np.exp(2j * np.pi * rng.uniform(size=100))
        forward = disk_to_halfplane_h2(coeffs)
        back = halfplane_to_disk_h2(forward)
        direct = np.polyval(coeffs[::-1], zpts)
        worst_round = max(worst_round, float(np.max(np.abs(back(zpts) - direct))))

    spts = rng.uniform(0.05, 4.0, size=100) + 1j * rng.uniform(-4.0, 4.0, size=100)
    fixture = disk_to_halfplane_h2(np.array([0.5, -0.5]))  # (1 - z)/2
    fix_err = float(np.max(np.abs(fixture(spts) - 1.0 / (1.0 + spts) ** 2)))

    res = hardy_factor(constant_function(2**14), 256)
    f_eval, g_eval, h_eval = res.evaluators()
    transfer = transfer_factorization(f_eval, g_eval, h_eval, spts)

    checks = {
        "round_trip": worst_round <= 1e-10,
        "fixture": fix_err <= 1e-12,
        "transferred_identity": transfer.max_identity_residual <= 1e-8,
    }
    details = {
        "worst_round_trip_error": worst_round,
        "fixture_error": fix_err,
        "transferred_identity_residual": transfer.max_identity_residual,
        "disk_side_residual": transfer.disk_residual,
    }
    return _result(8, "half-plane transfer", t0, checks, details)


def criterion_9(seed: int = DEFAULT_SEED) -> CriterionResult:
    """Limit contracts: evaluations, decay classification, oscillation verdict."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed + 9)
    vals = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    seq = bounded_sequence(vals)
    exact = all(principal_limit(seq, i + 1) == complex(vals[i]) for i in range(64))

    k = np.arange(1, 65, dtype=float)
    decaying = bounded_sequence(2.0 ** (-(k - 1) / 4.0))
    verdict_decay = ideal_membership_nonprincipal(decaying, tol=1e-3)
    alternating = bounded_sequence((-1.0) ** np.arange(1, 65))
    verdict_alt = ideal_membership_nonprincipal(alternating, tol=1e-3)

    checks = {
        "principal_limits_exact": exact,
        "decaying_in_ideal": verdict_decay is Membership.YES,
        "alternating_undecidable": verdict_alt is Membership.UNDECIDABLE,
    }
    details = {
        "decaying_verdict": verdict_decay.value,
        "alternating_verdict": verdict_alt.value,
    }
    return _result(9, "ultralimit contracts", t0, checks, details)


_CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
             criterion_6, criterion_7, criterion_8, criterion_9]


def thread_cap() -> int:
    raw = os.environ.get("FLATWITNESS_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_suite(seed: int = DEFAULT_SEED,
              max_workers: Optional[int] = None) -> List[CriterionResult]:
    workers = thread_cap() if max_workers is None else max(1, max_workers)
    if workers == 1:
        return [fn(seed) for fn in _CRITERIA]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda fn: fn(seed), _CRITERIA))
