"""Named verification suites behind `hamcube verify`.

Each suite returns a VerificationReport.  Deterministic accuracy checks
(spectral, operator) compare against independent slow references at
tight absolute tolerances; probabilistic checks replicate over `seeds`
trials with consecutive trial seeds and assert a pass fraction, using
the calibrated constants from acceptance.cfg.
"""

import itertools
import math
import time

import numpy as np

from . import spectral
from .complexity import PointSet, greedy_net, k_support_norm
from .config import load_acceptance
from .operators import build_double_circulant, build_gaussian
from .quantize import dither_scale_and_net_scale, make_dither, plan_parameters
from .verify import (
    CheckResult,
    SparseSampler,
    VerificationReport,
    check_block_regularity,
    check_l1_concentration,
    check_strong_regularity,
    check_well_spread,
    measure_binary_distortion,
    measure_l2l1_distortion,
    trial_map,
)

_TAG_POINTS = 21
_TAG_PROBE = 22


def sphere_points(count, n, seed):
    """Uniform points on the unit sphere, reproducible per seed."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(_TAG_POINTS,))
    pts = np.random.default_rng(ss).standard_normal((count, n))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    return PointSet(pts)


def _probe_vectors(count, n, seed):
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(_TAG_PROBE,))
    return np.random.default_rng(ss).standard_normal((count, n))


def _timed(name, parameters, seeds, observed, threshold, passed, started):
    return CheckResult(
        name=name,
        parameters=parameters,
        seeds=seeds,
        observed=float(observed),
        threshold=float(threshold),
        passed=bool(passed),
        wall_time_s=round(time.perf_counter() - started, 4),
    )


def _fraction_check(name, parameters, base_seed, seeds, trial_fn, required):
    """Replicated pass/fail trials summarized as a pass fraction."""
    started = time.perf_counter()
    trial_seeds = [base_seed + t for t in range(seeds)]
    outcomes = trial_map(trial_fn, trial_seeds)
    fraction = sum(bool(o) for o in outcomes) / len(outcomes)
    parameters = dict(parameters, trials=seeds, comparison=">=")
    return _timed(name, parameters, trial_seeds, fraction, required, fraction >= required, started)


def _direct_circular(x, y):
    """Quadratic-time circular convolution by direct summation."""
    full = np.convolve(x, y, mode="full")
    n = len(x)
    out = full[:n].copy()
    out[: n - 1] += full[n:]
    return out


def suite_spectral(seeds=100, base_seed=0, acceptance=None):
    report = VerificationReport()
    for n in (8, 12, 64, 512, 4096):
        started = time.perf_counter()
        rng = np.random.default_rng(np.random.SeedSequence(entropy=base_seed, spawn_key=(_TAG_PROBE, n)))
        worst = 0.0
        for _ in range(100):
            x = rng.standard_normal(n)
            y = rng.standard_normal(n)
            ref = _direct_circular(x, y)
            err = np.abs(spectral.circ_convolve(x, y) - ref).max()
            worst = max(worst, err / max(np.abs(ref).max(), 1e-300))
        report.checks.append(_timed(
            "spectral.convolution_vs_direct",
            {"n": n, "pairs": 100, "comparison": "<="},
            [base_seed], worst, 1e-9, worst <= 1e-9, started,
        ))
    started = time.perf_counter()
    worst = 0.0
    for n, pairs in ((8, 100), (64, 100), (512, 20)):
        rng = np.random.default_rng(np.random.SeedSequence(entropy=base_seed, spawn_key=(_TAG_PROBE, 10_000 + n)))
        for _ in range(pairs):
            res = spectral.diagonalization_residual(rng.standard_normal(n), rng.standard_normal(n))
            worst = max(worst, res.value)
    report.checks.append(_timed(
        "spectral.diagonalization_residual",
        {"sizes": [8, 64, 512], "comparison": "<="},
        [base_seed], worst, 1e-9, worst <= 1e-9, started,
    ))
    return report


def suite_operator(seeds=100, base_seed=0, acceptance=None):
    report = VerificationReport()
    cases = [(16, "fixed"), (64, "fixed"), (256, "fixed"), (64, "selectors"), (256, "selectors")]
    started = time.perf_counter()
    worst_apply = 0.0
    worst_scaled = 0.0
    for n, mode in cases:
        m = n // 4
        op = build_double_circulant(n, m, mode=mode, seed=base_seed + n)
        dense = op.materialize()
        x = _probe_vectors(50, n, base_seed + n)
        got = op.apply(x)
        worst_apply = max(worst_apply, np.abs(got - x @ dense.T).max())
        scaled = math.sqrt(op.rows) * op.apply_scaled(x * op.sign_in)
        worst_scaled = max(worst_scaled, np.abs(got - scaled).max())
    report.checks.append(_timed(
        "operator.apply_matches_materialize",
        {"cases": [list(c) for c in cases], "vectors": 50, "comparison": "<="},
        [base_seed], worst_apply, 1e-9, worst_apply <= 1e-9, started,
    ))
    report.checks.append(_timed(
        "operator.scaled_view_identity",
        {"cases": [list(c) for c in cases], "vectors": 50, "comparison": "<="},
        [base_seed], worst_scaled, 1e-10, worst_scaled <= 1e-10, started,
    ))
    return report


def suite_l1(seeds=100, base_seed=0, acceptance=None):
    acc = acceptance or load_acceptance()
    report = VerificationReport()

    started = time.perf_counter()
    n, m, ops = 1024, 256, 200
    x = _probe_vectors(1, n, base_seed)[0]
    x /= np.linalg.norm(x)
    values = [
        np.abs(build_double_circulant(n, m, seed=base_seed + t).apply_l1(x)).sum()
        for t in range(ops)
    ]
    mean = float(np.mean(values))
    report.checks.append(_timed(
        "l1.normalization_mean",
        {"n": n, "m": m, "operators": ops, "mean": mean, "comparison": "<="},
        [base_seed + t for t in range(ops)],
        abs(mean - 1.0), 0.05, abs(mean - 1.0) <= 0.05, started,
    ))

    eps = 0.25
    count, n = 64, 4096
    m_jl = math.ceil(acc["jl_c"] * eps**-2 * math.log(count))
    T = sphere_points(count, n, seed=base_seed)
    params = {"n": n, "points": count, "m": m_jl, "eps": eps, "c": acc["jl_c"]}

    def dc_trial(seed):
        op = build_double_circulant(n, m_jl, mode="selectors", seed=seed)
        return measure_l2l1_distortion(op.apply_l1, T) <= eps

    def gauss_trial(seed):
        op = build_gaussian(n, m_jl, seed=seed)
        return measure_l2l1_distortion(op.apply_l1, T) <= eps

    report.checks.append(_fraction_check(
        "l1.jl_distortion_double_circulant", params, base_seed, seeds, dc_trial, 0.85))
    report.checks.append(_fraction_check(
        "l1.jl_distortion_gaussian", params, base_seed, seeds, gauss_trial, 0.95))
    return report


def binary_embedding_plan(base_seed, acceptance=None):
    """The shared 32-point setup used by the distortion and spread suites."""
    acc = acceptance or load_acceptance()
    constants = {
        "c0": acc["binary_c0"], "c1": acc["binary_c1"],
        "c2": acc["binary_c2"], "c3": acc["binary_c3"],
    }
    T = sphere_points(32, 2048, seed=base_seed + 1)
    delta = 0.25
    _, theta = dither_scale_and_net_scale(T.radius(), delta, constants)
    net = greedy_net(T, theta)
    plan = plan_parameters(
        T.radius(), delta,
        net_size=math.log(net.count),
        local_width_sq=0.0,
        constants=constants,
    )
    return T, net, plan


def suite_distortion(seeds=100, base_seed=0, acceptance=None):
    T, _, plan = binary_embedding_plan(base_seed, acceptance)
    n = T.n
    params = {"n": n, "points": T.count, "m": plan.m, "k": plan.k,
              "lambda": plan.lam, "delta": plan.delta}

    def dc_trial(seed):
        op = build_double_circulant(n, plan.m, seed=seed)
        tau = make_dither(op.rows, plan.lam, seed=seed)
        return measure_binary_distortion(op, tau, plan, T) <= plan.delta

    def gauss_trial(seed):
        op = build_gaussian(n, plan.m, seed=seed)
        tau = make_dither(op.rows, plan.lam, seed=1_000_000 + seed)
        return measure_binary_distortion(op, tau, plan, T) <= plan.delta

    report = VerificationReport()
    report.checks.append(_fraction_check(
        "distortion.binary_double_circulant", params, base_seed, seeds, dc_trial, 0.85))
    report.checks.append(_fraction_check(
        "distortion.binary_gaussian", params, base_seed, seeds, gauss_trial, 0.90))
    return report


def suite_spread(seeds=100, base_seed=0, acceptance=None):
    T, net, plan = binary_embedding_plan(base_seed, acceptance)
    n = T.n
    localized = PointSet(np.zeros((1, n)))  # net separation exceeds theta
    params = {"n": n, "net": net.count, "m": plan.m, "k": plan.k,
              "lambda": plan.lam, "delta": plan.delta}

    def trial(seed):
        op = build_double_circulant(n, plan.m, seed=seed)
        ws = check_well_spread(op, net, localized, plan.k, plan.lam, plan.delta)
        l1 = check_l1_concentration(op, net, plan.kappa)
        return ws.passed and l1 <= plan.delta

    report = VerificationReport()
    report.checks.append(_fraction_check(
        "spread.embedding_conditions_double_circulant", params, base_seed, seeds, trial, 0.85))

    started = time.perf_counter()
    dim = 8
    vectors = _probe_vectors(100, dim, base_seed + 3)
    worst = 0.0
    for x in vectors:
        sq = x * x
        for k in range(1, dim + 1):
            brute = max(
                math.sqrt(sq[list(sub)].sum())
                for sub in itertools.combinations(range(dim), k)
            )
            worst = max(worst, abs(k_support_norm(x, k) - brute))
    report.checks.append(_timed(
        "spread.k_support_vs_bruteforce",
        {"n": dim, "vectors": 100, "comparison": "<="},
        [base_seed + 3], worst, 1e-12, worst <= 1e-12, started,
    ))
    return report


def suite_regularity(seeds=100, base_seed=0, acceptance=None):
    acc = acceptance or load_acceptance()
    report = VerificationReport()
    n, m_small, m_big, r_max = 4096, 256, 1024, 256
    samples = int(acc["regularity_samples"])
    envelope = acc["regularity_envelope"] * math.log(n) ** 2.5

    def profile_pair(seed):
        sampler = SparseSampler(1, n, samples, seed=seed)
        small = check_strong_regularity(
            build_double_circulant(n, m_small, seed=seed).apply_scaled, r_max, sampler)
        big = check_strong_regularity(
            build_double_circulant(n, m_big, seed=seed).apply_scaled, r_max, sampler)
        return small.rho_hat, big.rho_hat

    started = time.perf_counter()
    trial_seeds = [base_seed + t for t in range(seeds)]
    pairs = trial_map(profile_pair, trial_seeds)
    env_frac = sum(rho * math.sqrt(m_small) <= envelope for rho, _ in pairs) / len(pairs)
    report.checks.append(_timed(
        "regularity.envelope_double_circulant",
        {"n": n, "m": m_small, "samples": samples, "envelope": envelope,
         "trials": seeds, "comparison": ">="},
        trial_seeds, env_frac, 0.90, env_frac >= 0.90, started,
    ))
    dec_frac = sum(big < small for small, big in pairs) / len(pairs)
    report.checks.append(_timed(
        "regularity.rate_decreases_with_m",
        {"n": n, "m_pair": [m_small, m_big], "trials": seeds, "comparison": ">="},
        trial_seeds, dec_frac, 0.80, dec_frac >= 0.80, started,
    ))

    nb, mb = 128, 64
    block_samples = int(acc["block_samples"])
    tolerance = acc["block_tolerance"]

    def block_trial(seed):
        op = build_double_circulant(nb, mb, seed=seed)
        for r in (1, 2, 4, 8):
            sampler = SparseSampler(r, nb, block_samples, seed=seed)
            if not check_block_regularity(op.apply_scaled, mb, r, sampler, tolerance).passed:
                return False
        return True

    report.checks.append(_fraction_check(
        "regularity.block_augmentation",
        {"n": nb, "m": mb, "r_grid": [1, 2, 4, 8], "samples": block_samples,
         "tolerance": tolerance},
        base_seed, seeds, block_trial, 0.95,
    ))
    return report


def suite_all(seeds=100, base_seed=0, acceptance=None):
    report = VerificationReport()
    for fn in (suite_spectral, suite_operator, suite_l1, suite_spread,
               suite_regularity, suite_distortion):
        report.extend(fn(seeds=seeds, base_seed=base_seed, acceptance=acceptance))
    return report


SUITES = {
    "spectral": suite_spectral,
    "operator": suite_operator,
    "l1": suite_l1,
    "spread": suite_spread,
    "regularity": suite_regularity,
    "distortion": suite_distortion,
    "all": suite_all,
}


def run_suite(name, seeds=100, base_seed=0, acceptance=None):
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name](seeds=seeds, base_seed=base_seed, acceptance=acceptance)
