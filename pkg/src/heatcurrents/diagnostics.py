"""Statistical verification: marginal law, covariance, convergence orders,
regularity across grid refinement, and group-manifold drift.

Every check emits StatReport records with a uniform pass rule
|estimate - target| <= max(4 * stderr, absolute tolerance) (one-sided
variants note it in tolerance_rule).  Convergence ladders use common
random numbers: coarse increments are block sums of fine ones, so level
differences estimate pure discretization effects with the Monte Carlo
noise mostly cancelled.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .brownian import (
    CovarianceSpec,
    covariance_kernel,
    gram_sqrt,
    kernel_gram,
    pointwise_variance,
)
from .lie import build_basis, exp_batch, log_batch
from .rng import RngStream, diagnostic_stream
from .sde import FieldState, SdeConfig, initial_state, sample_marginal
from .torus import build_spectrum

__all__ = [
    "StatReport",
    "make_report",
    "one_sided_report",
    "character_target",
    "character_test",
    "covariance_test",
    "weak_order_test",
    "strong_convergence_test",
    "regularity_probe",
    "drift_report",
    "fd_variance_target",
    "default_config",
    "run_check",
    "CHECK_NAMES",
    "reports_to_json",
]


@dataclass(frozen=True)
class StatReport:
    """One verified statistic with its pass/fail resolution."""

    name: str
    estimate: float
    target: float
    stderr: float
    n_samples: int
    passed: bool
    tolerance_rule: str

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "estimate": self.estimate,
            "target": self.target,
            "stderr": self.stderr,
            "n_samples": self.n_samples,
            "pass": self.passed,
            "tolerance_rule": self.tolerance_rule,
        }


def make_report(
    name: str,
    estimate: float,
    target: float,
    stderr: float,
    n_samples: int,
    atol: float = 0.0,
) -> StatReport:
    band = max(4.0 * stderr, atol)
    rule = f"|estimate - target| <= max(4*stderr, {atol:g})"
    return StatReport(
        name=name,
        estimate=float(estimate),
        target=float(target),
        stderr=float(stderr),
        n_samples=int(n_samples),
        passed=bool(abs(estimate - target) <= band),
        tolerance_rule=rule,
    )


def one_sided_report(
    name: str,
    estimate: float,
    bound: float,
    stderr: float,
    n_samples: int,
    direction: str,
) -> StatReport:
    if direction == "min":
        ok = estimate >= bound
        rule = f"one-sided: estimate >= {bound:g}"
    else:
        ok = estimate <= bound
        rule = f"one-sided: estimate <= {bound:g}"
    return StatReport(
        name=name,
        estimate=float(estimate),
        target=float(bound),
        stderr=float(stderr),
        n_samples=int(n_samples),
        passed=bool(ok),
        tolerance_rule=rule,
    )


def reports_to_json(reports: list) -> bytes:
    """Deterministic JSON array of report objects."""
    doc = [r.to_dict() for r in reports]
    return (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode("utf-8")


def default_config(
    k: int = 2,
    m_max: int = 16,
    p: int = 64,
    n: int = 2,
    d: int = 1,
    n_steps: int = 256,
    t_end: float = 1.0,
    seed: int = 0,
    allow_rough: bool = False,
) -> SdeConfig:
    """The package-wide reference configuration."""
    basis = build_spectrum(d, p, m_max)
    lie = build_basis(n)
    spec = CovarianceSpec(k=k, basis=basis, lie=lie, allow_rough=allow_rough)
    return SdeConfig(spec=spec, n_steps=n_steps, t_end=t_end, seed=seed)


# ---------------------------------------------------------------------------
# marginal law at one point


def character_target(c: float, t: float) -> float:
    """E[Re tr g_t(S)] for SU(2): 2 exp(-(3/8) c t).

    3/8 = (1/2) * (3/4) * (1/2)... spelled out: the quadratic Casimir of the
    orthonormal su(2) basis is sum_a T_a^2 = -(3/4) I and the per-direction
    variance rate is c, giving d/dt E[g] = -(3/8) c E[g].
    """
    return 2.0 * np.exp(-0.375 * c * t)


def character_test(
    cfg: SdeConfig,
    point=None,
    n_samples: int = 200_000,
    stream: RngStream | None = None,
) -> StatReport:
    """Empirical E[Re tr g_1(S)] against the closed-form heat-kernel value.

    Uses the restricted-marginal sampler at the single point, whose law
    matches the full-field restriction exactly.
    """
    if cfg.spec.lie.n != 2:
        raise ValueError("analytic character target implemented for SU(2) only")
    if point is None:
        point = np.zeros(cfg.spec.basis.grid.dim)
    point = np.atleast_1d(np.asarray(point, dtype=float))
    if stream is None:
        stream = diagnostic_stream(cfg.seed, 0)
    mats = sample_marginal(cfg, point[np.newaxis, :], n_samples, stream=stream)
    vals = np.real(np.trace(mats[:, 0], axis1=-2, axis2=-1))
    c = covariance_kernel(cfg.spec, point, point)
    est = float(vals.mean())
    se = float(vals.std(ddof=1) / np.sqrt(n_samples))
    return make_report(
        "character", est, character_target(c, cfg.t_end), se, n_samples
    )


# ---------------------------------------------------------------------------
# spatial covariance of the log-field at small time

_LOG_BRANCH_LIMIT = 1.0  # exclude ||g - I||_F >= 1 from log statistics


def covariance_test(
    cfg: SdeConfig,
    pairs: list,
    n_samples: int = 100_000,
    stream: RngStream | None = None,
) -> list:
    """Log-field covariance vs t_end * C_k(S, S') * delta_ab at given pairs.

    `pairs` is a list of (S, S') coordinate pairs.  Emits one diagonal
    (a = b, pooled over directions) and one cross (a != b) report per pair,
    plus a log-branch failure-rate report; failures above 1% fail.
    """
    if stream is None:
        stream = diagnostic_stream(cfg.seed, 1)
    pts = []
    index = {}
    for s, sp in pairs:
        for q in (tuple(np.atleast_1d(s)), tuple(np.atleast_1d(sp))):
            if q not in index:
                index[q] = len(pts)
                pts.append(q)
    points = np.asarray(pts, dtype=float)
    mats = sample_marginal(cfg, points, n_samples, stream=stream)

    eye = np.eye(cfg.spec.lie.n)
    dist = np.sqrt(np.sum(np.abs(mats - eye) ** 2, axis=(-2, -1)))
    good = dist < _LOG_BRANCH_LIMIT  # (n_samples, n_pts)
    coeffs = log_batch(cfg.spec.lie, mats)  # (n_samples, n_pts, dim_g)

    fail_rate = float(1.0 - good.all(axis=1).mean())
    reports = [
        one_sided_report(
            "covariance_log_failure_rate",
            fail_rate,
            0.01,
            np.sqrt(max(fail_rate, 1.0 / n_samples) / n_samples),
            n_samples,
            "max",
        )
    ]

    dim_g = cfg.spec.dim_g
    for s, sp in pairs:
        i = index[tuple(np.atleast_1d(s))]
        j = index[tuple(np.atleast_1d(sp))]
        keep = good[:, i] & good[:, j]
        x = coeffs[keep, i, :]
        y = coeffs[keep, j, :]
        m = int(keep.sum())
        target = cfg.t_end * covariance_kernel(
            cfg.spec, np.atleast_1d(s), np.atleast_1d(sp)
        )
        label = f"({np.atleast_1d(s)},{np.atleast_1d(sp)})"

        # diagonal a = b, pooled over the dim_g directions
        prod = x * y  # (m, dim_g)
        est = float(prod.mean())
        se = float(prod.mean(axis=1).std(ddof=1) / np.sqrt(m))
        reports.append(
            make_report(
                f"covariance_diag_{label}",
                est,
                target,
                se,
                m,
                atol=0.05 * abs(target),
            )
        )

        # cross directions a != b: independent, zero mean
        iu, ju = np.triu_indices(dim_g, k=1)
        cross = 0.5 * (x[:, iu] * y[:, ju] + x[:, ju] * y[:, iu])
        cest = float(cross.mean())
        cse = float(cross.mean(axis=1).std(ddof=1) / np.sqrt(m))
        reports.append(
            make_report(f"covariance_cross_{label}", cest, 0.0, cse, m)
        )
    return reports


# ---------------------------------------------------------------------------
# convergence orders under common random numbers


def _slope_fit(x: np.ndarray, y: np.ndarray, yvar: np.ndarray) -> tuple:
    """OLS slope of y on x with delta-method variance from var(y)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    dx = x - x.mean()
    denom = np.sum(dx * dx)
    slope = float(np.sum(dx * y) / denom)
    var = float(np.sum((dx / denom) ** 2 * yvar))
    return slope, np.sqrt(var)


def weak_order_test(
    cfg: SdeConfig,
    step_ladder: tuple = (8, 16, 32, 64),
    n_samples: int = 1_000_000,
    point=None,
    stream: RngStream | None = None,
    chunk: int = 50_000,
) -> StatReport:
    """Log-log slope of the character bias vs step size, via level differences.

    Coarse increments are block sums of the finest level's (one Brownian
    path per sample), so the Richardson differences f_l - f_{l+1} have the
    Monte Carlo noise nearly cancelled and estimate bias(h_l) - bias(h_{l+1});
    for a weak order-p scheme they scale like h_l^p.  If any difference is
    within 2 standard errors of zero the result is inconclusive and fails.
    """
    ladder = sorted(int(v) for v in step_ladder)
    if len(ladder) < 3:
        raise ValueError(f"need at least 3 ladder levels, got {len(ladder)}")
    for a, b in zip(ladder, ladder[1:]):
        if b % a != 0:
            raise ValueError(f"ladder levels must nest by integer factors, got {ladder}")
    if cfg.spec.lie.n != 2:
        raise ValueError("character observable requires SU(2)")
    if point is None:
        point = np.zeros(cfg.spec.basis.grid.dim)
    point = np.atleast_1d(np.asarray(point, dtype=float))
    if stream is None:
        stream = diagnostic_stream(cfg.seed, 2)

    c = covariance_kernel(cfg.spec, point, point)
    n_fine = ladder[-1]
    h_fine = cfg.t_end / n_fine
    dim_g = cfg.spec.dim_g
    lie = cfg.spec.lie

    n_levels = len(ladder)
    sums = np.zeros(n_levels - 1)
    sqsums = np.zeros(n_levels - 1)
    total = 0
    for lo in range(0, n_samples, chunk):
        m = min(chunk, n_samples - lo)
        incr = np.sqrt(h_fine * c) * stream.normal(size=(m, n_fine, dim_g))
        traces = np.empty((n_levels, m))
        for li, n_steps in enumerate(ladder):
            block = n_fine // n_steps
            coarse = incr.reshape(m, n_steps, block, dim_g).sum(axis=2)
            g = np.broadcast_to(np.eye(2, dtype=complex), (m, 2, 2)).copy()
            for s in range(n_steps):
                g = g @ exp_batch(lie, coarse[:, s, :])
            traces[li] = np.real(g[:, 0, 0] + g[:, 1, 1])
        diffs = traces[:-1] - traces[1:]  # (n_levels-1, m)
        sums += diffs.sum(axis=1)
        sqsums += (diffs**2).sum(axis=1)
        total += m

    mean_d = sums / total
    var_d = (sqsums / total - mean_d**2) / total
    se_d = np.sqrt(var_d)
    if np.any(np.abs(mean_d) < 2.0 * se_d):
        return StatReport(
            name="weak_order",
            estimate=float("nan"),
            target=1.0,
            stderr=float("nan"),
            n_samples=total,
            passed=False,
            tolerance_rule="inconclusive: level bias below 2 standard errors",
        )

    h = cfg.t_end / np.asarray(ladder[:-1], dtype=float)
    logd = np.log(np.abs(mean_d))
    logd_var = (se_d / mean_d) ** 2
    slope, slope_se = _slope_fit(np.log(h), logd, logd_var)
    return make_report("weak_order", slope, 1.0, slope_se, total, atol=0.3)


def strong_convergence_test(
    cfg: SdeConfig,
    step_ladder: tuple = (64, 128, 256, 512, 1024),
    n_samples: int = 4096,
    point=None,
    stream: RngStream | None = None,
) -> StatReport:
    """Rate exponent of coupled coarse/fine pathwise differences.

    RMS ||g^(l) - g^(l+1)||_F over samples scales like h_l^rho with rho =
    1/2 for this scheme; reports the fitted rho with band [0.4, 0.6].
    """
    ladder = sorted(int(v) for v in step_ladder)
    if len(ladder) < 3:
        raise ValueError(f"need at least 3 ladder levels, got {len(ladder)}")
    for a, b in zip(ladder, ladder[1:]):
        if b % a != 0:
            raise ValueError(f"ladder levels must nest by integer factors, got {ladder}")
    if point is None:
        point = np.zeros(cfg.spec.basis.grid.dim)
    point = np.atleast_1d(np.asarray(point, dtype=float))
    if stream is None:
        stream = diagnostic_stream(cfg.seed, 3)

    c = covariance_kernel(cfg.spec, point, point)
    n_fine = ladder[-1]
    h_fine = cfg.t_end / n_fine
    dim_g = cfg.spec.dim_g
    lie = cfg.spec.lie
    n = lie.n

    incr = np.sqrt(h_fine * c) * stream.normal(size=(n_samples, n_fine, dim_g))
    terminal = []
    for n_steps in ladder:
        block = n_fine // n_steps
        coarse = incr.reshape(n_samples, n_steps, block, dim_g).sum(axis=2)
        g = np.broadcast_to(np.eye(n, dtype=complex), (n_samples, n, n)).copy()
        for s in range(n_steps):
            g = g @ exp_batch(lie, coarse[:, s, :])
        terminal.append(g)

    rms = np.empty(len(ladder) - 1)
    log_rms_var = np.empty(len(ladder) - 1)
    for li in range(len(ladder) - 1):
        sq = np.sum(np.abs(terminal[li] - terminal[li + 1]) ** 2, axis=(-2, -1))
        mean_sq = sq.mean()
        rms[li] = np.sqrt(mean_sq)
        # log rms = log(mean_sq)/2, so var = var(mean_sq) / (2 mean_sq)^2
        log_rms_var[li] = sq.var(ddof=1) / n_samples / (2.0 * mean_sq) ** 2

    h = cfg.t_end / np.asarray(ladder[:-1], dtype=float)
    slope, slope_se = _slope_fit(np.log(h), np.log(rms), log_rms_var)
    return make_report("strong_order", slope, 0.5, slope_se, n_samples, atol=0.1)


# ---------------------------------------------------------------------------
# regularity across grid refinement


def fd_variance_target(spec: CovarianceSpec, t: float, r: int) -> float:
    """Closed spectral sum for Var of the order-r forward difference.

    d=1 only: t * (2pi)^{-1} * [w_0 1_{r=0} + 2 sum_m w_m (2 sin(m h/2)/h)^{2r}]
    with h the grid spacing; the finite-difference symbol is evaluated
    exactly, so this is the discrete-operator target, not a continuum limit.
    """
    grid = spec.basis.grid
    if grid.dim != 1:
        raise ValueError("closed finite-difference sums implemented for d=1 only")
    h = grid.spacing
    w = spec.weights
    m_values = spec.basis.frequencies[:, 0].astype(float)
    w_pairs = spec.weights[1::2]
    gain = (2.0 * np.abs(np.sin(m_values * h / 2.0)) / h) ** (2 * r)
    const = w[0] if r == 0 else 0.0
    return float(t * (const + 2.0 * np.sum(w_pairs * gain)) / (2.0 * np.pi))


def _forward_difference(arr: np.ndarray, axis: int, h: float, order: int) -> np.ndarray:
    out = arr
    for _ in range(order):
        out = (np.roll(out, -1, axis=axis) - out) / h
    return out


def _sample_log_fields(
    spec: CovarianceSpec,
    t: float,
    n_steps: int,
    n_samples: int,
    stream: RngStream,
) -> np.ndarray:
    """Batched full-grid sampling of log g_t coefficients: (N, *shape, dim_g)."""
    grid = spec.basis.grid
    n = spec.lie.n
    dim_g = spec.dim_g
    dt = t / n_steps
    w = spec.weights
    values = spec.basis.values.reshape(spec.basis.n_modes, -1)  # (modes, pts)
    amp = np.sqrt(dt * w)

    g = np.broadcast_to(
        np.eye(n, dtype=complex), (n_samples, values.shape[1], n, n)
    ).copy()
    for _ in range(n_steps):
        xi = stream.normal(size=(n_samples, spec.basis.n_modes, dim_g))
        xi *= amp[np.newaxis, :, np.newaxis]
        coeffs = np.einsum("mp,sma->spa", values, xi)
        g = g @ exp_batch(spec.lie, coeffs)
    coeffs = log_batch(spec.lie, g)
    return coeffs.reshape((n_samples,) + grid.shape + (dim_g,))


def regularity_probe(
    d: int = 1,
    r: int = 1,
    k_values: tuple = (2, 0),
    grid_ladder: tuple = (16, 32, 64, 128),
    n_samples: int = 4096,
    t: float = 0.01,
    n_steps: int = 8,
    seed: int = 0,
) -> list:
    """Variance of the order-r difference of the log-field across refinement.

    Each level P carries M_max = P/4, so refinement genuinely adds modes.
    Smooth noise (2k > d + 2r) plateaus; k = 0 must diverge.  Emits
    per-level variance reports against the closed sums and one final-ratio
    report per k.
    """
    if d != 1:
        raise ValueError("probe implemented for d=1")
    lie = build_basis(2)
    reports = []
    for ki, k in enumerate(k_values):
        stream = diagnostic_stream(seed, 16 + ki)
        level_vars = []
        level_ses = []
        for p in grid_ladder:
            basis = build_spectrum(d, p, p // 4)
            spec = CovarianceSpec(k=k, basis=basis, lie=lie, allow_rough=(k < 1))
            coeffs = _sample_log_fields(spec, t, n_steps, n_samples, stream)
            fd = _forward_difference(coeffs, axis=1, h=basis.grid.spacing, order=r)
            per_sample = np.mean(fd**2, axis=tuple(range(1, fd.ndim)))
            est = float(per_sample.mean())
            se = float(per_sample.std(ddof=1) / np.sqrt(n_samples))
            target = fd_variance_target(spec, t, r)
            level_vars.append(est)
            level_ses.append(se)
            reports.append(
                make_report(
                    f"regularity_variance_k{k}_P{p}",
                    est,
                    target,
                    se,
                    n_samples,
                    atol=0.10 * target,
                )
            )
        ratio = level_vars[-1] / level_vars[-2]
        ratio_se = ratio * np.sqrt(
            (level_ses[-1] / level_vars[-1]) ** 2
            + (level_ses[-2] / level_vars[-2]) ** 2
        )
        if k >= 1:
            reports.append(
                make_report(
                    f"regularity_ratio_k{k}",
                    ratio,
                    1.0,
                    ratio_se,
                    n_samples,
                    atol=0.1,
                )
            )
        else:
            reports.append(
                one_sided_report(
                    f"regularity_ratio_k{k}", ratio, 1.5, ratio_se, n_samples, "min"
                )
            )
    return reports


# ---------------------------------------------------------------------------
# group-manifold drift


def drift_report(state: FieldState, atol: float = 1e-10) -> StatReport:
    """Max unitarity and determinant defects over the grid."""
    est = max(state.unitarity_defect(), state.det_defect())
    return make_report("drift", est, 0.0, 0.0, state.mats.size // state.group_n**2, atol=atol)


# ---------------------------------------------------------------------------
# named checks for the command line


def _check_drift(seed: int, n_samples: int | None) -> list:
    from .sde import sample_field

    cfg = default_config(n_steps=1000, seed=seed)
    state = sample_field(cfg)
    return [drift_report(state)]


def _check_character(seed: int, n_samples: int | None) -> list:
    cfg = default_config(n_steps=256, seed=seed)
    return [character_test(cfg, n_samples=n_samples or 200_000)]


def _check_covariance(seed: int, n_samples: int | None) -> list:
    cfg = default_config(n_steps=32, t_end=0.05, seed=seed)
    h = cfg.spec.basis.grid.spacing
    pairs = [(np.array([0.0]), np.array([sep * h])) for sep in (0, 4, 8, 12)]
    return covariance_test(cfg, pairs, n_samples=n_samples or 100_000)


def _check_weak_order(seed: int, n_samples: int | None) -> list:
    cfg = default_config(n_steps=64, seed=seed)
    return [weak_order_test(cfg, n_samples=n_samples or 1_000_000)]


def _check_strong_order(seed: int, n_samples: int | None) -> list:
    cfg = default_config(n_steps=1024, seed=seed)
    return [strong_convergence_test(cfg, n_samples=n_samples or 4096)]


def _check_regularity(seed: int, n_samples: int | None) -> list:
    return regularity_probe(seed=seed, n_samples=n_samples or 4096)


def _check_cocycle(seed: int, n_samples: int | None) -> list:
    from .cocycle_checks import cocycle_suite

    return cocycle_suite(seed=seed, n_triples=n_samples or 100)


def _check_haar(seed: int, n_samples: int | None) -> list:
    from .cocycle_checks import haar_suite

    return haar_suite(seed=seed, n_samples=n_samples or 10_000)


CHECK_NAMES = {
    "drift": _check_drift,
    "character": _check_character,
    "covariance": _check_covariance,
    "weak_order": _check_weak_order,
    "strong_order": _check_strong_order,
    "regularity": _check_regularity,
    "cocycle": _check_cocycle,
    "haar": _check_haar,
}


def run_check(name: str, seed: int = 0, n_samples: int | None = None) -> list:
    """Run one named diagnostic; returns its StatReport list."""
    if name not in CHECK_NAMES:
        raise KeyError(
            f"unknown check {name!r}; available: {', '.join(sorted(CHECK_NAMES))}"
        )
    return CHECK_NAMES[name](seed, n_samples)
