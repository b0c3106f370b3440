"""Quantitative proof skeletons as verifiable inequality chains.

Each experiment evaluates the named factors of one argument row by row in log
domain, records a verdict per row, and reports whether the chain's divergent
lower bound crossed the configured threshold.  Nothing here claims proof-level
verification; the chains are checked at finite index ranges only.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import (CapabilityError, PreconditionError, RegimeError,
                     SearchExhaustedError)
from .fdb import Jet, compose_jet, faa_di_bruno, single_jet_compose
from .functions import ModelFunction, jet_log_abs
from .grids import GridSpec
from .logdomain import LOG_ZERO, LogReal, log_sum_exp
from .reports import ChainReport
from .weights import (ConjugateEvaluator, WeightFunction,
                      find_log_scaling_constant, scaled_weight,
                      verify_log_scaling_constant)

DEFAULT_THRESHOLD = 1e6  # linear scale; log crossing at ~13.8


# ---------------------------------------------------------------------------
# Compactness: the blow-up sup_n |psi'(x0)|^n
# ---------------------------------------------------------------------------

def compactness_blowup(psi: ModelFunction, x0: float, p: int,
                       w: WeightFunction, nmax: int,
                       threshold: float = DEFAULT_THRESHOLD) -> ChainReport:
    """Single-order jets b_n(n) = exp(p phi*(n/p)) pushed through the
    composition; the full expansion must match the one-term shortcut exactly,
    and |psi'(x0)|^n must cross the divergence threshold."""
    psi_jet = psi.jet(x0, nmax).to_log()
    psi1 = psi_jet.values[1]
    if psi1.is_zero() or psi1.log_abs <= 0.0:
        raise PreconditionError(
            f"|psi'(x0)| = {abs(psi_jet.entry_float(1)):g} <= 1 at x0={x0:g}; "
            "rescale the argument (sigma(x) = psi(a x)) first")
    conj = ConjugateEvaluator(w)
    log_thresh = math.log(threshold)
    report = ChainReport(
        experiment="compactness",
        params={"psi": psi.label, "x0": x0, "p": p, "weight": w.label,
                "nmax": nmax, "threshold": threshold},
        columns=["n", "log_b_n", "log_full_fdb", "log_shortcut",
                 "log_deriv_power", "verdict"])
    base = psi_jet.values[0].to_float()
    first_cross = None
    for n in range(1, nmax + 1):
        bn = LogReal.from_log(1, p * conj(n / p))
        h_vals = [LogReal.zero()] * (nmax + 1)
        h_vals[n] = bn
        h_jet = Jet.from_logreals(base, h_vals)
        full = faa_di_bruno(h_jet, psi_jet, n)
        short = single_jet_compose(h_jet, psi_jet, n)
        agree = (full.sign == short.sign
                 and abs(full.log_abs - short.log_abs)
                 <= 1e-10 * max(1.0, abs(short.log_abs)))
        power = n * psi1.log_abs
        if first_cross is None and power > log_thresh:
            first_cross = n
        report.add_row({"n": n, "log_b_n": bn.log_abs,
                        "log_full_fdb": full.log_abs,
                        "log_shortcut": short.log_abs,
                        "log_deriv_power": power, "verdict": agree})
    report.verdict = report.all_hold() and first_cross is not None
    report.first_crossing_index = first_cross
    return report


# ---------------------------------------------------------------------------
# The loss-of-regularity chain (Gevrey scale)
# ---------------------------------------------------------------------------

def _block_threshold(c_sigma: ConjugateEvaluator, c_tilde: ConjugateEvaluator,
                     L: int, n: int, s_cap: int = 10 ** 12) -> int:
    """Smallest integer s0 with phi_sigma*(s) <= 2Ln phi_tilde*(s/(2Ln)) for
    all s >= s0.  The per-unit margin (rhs - lhs)/s is increasing in log s, so
    the violation set is an initial segment of the integers: exponential climb
    to a holding point, then bisect the boundary."""
    c = 2 * L * n

    def holds(s: int) -> bool:
        return c_sigma(s) <= c * c_tilde(s / c) + 1e-12

    if holds(1):
        return 1
    hi = 2
    while not holds(hi):
        hi *= 2
        if hi > s_cap:
            raise RegimeError(
                f"block threshold exceeds {s_cap}; weights too close")
    lo = hi // 2  # holds(hi), not holds(lo)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if holds(mid):
            hi = mid
        else:
            lo = mid
    # guard against stray non-monotonicity just past the boundary
    probe = hi
    for s in range(hi, hi + 64):
        if not holds(s):
            probe = s + 1
    if probe != hi:
        raise RegimeError("block boundary not clean; condition not monotone")
    return hi


def negative_chain(d: float, k: float, d_prime: float, jmax: int,
                   threshold: float = DEFAULT_THRESHOLD,
                   tol: float = 1e-9) -> ChainReport:
    """Loss-of-regularity chain for omega = t^(1/d), sigma = t^(1/d'),
    psi' >= psi^k: block construction, stationary points x_j, and the
    divergent lower bound exp(j - 2 lambda_j L), all checked row by row."""
    if not (d <= d_prime < (k + 1) * d):
        raise RegimeError(
            f"need d <= d' < (k+1)d, got d={d:g}, d'={d_prime:g}, "
            f"(k+1)d={(k + 1) * d:g}: the little-o comparison fails")
    omega = WeightFunction.gevrey(d)
    sigma = WeightFunction.gevrey(d_prime)
    tilde = WeightFunction.gevrey((k + 1) * d)
    c_omega = ConjugateEvaluator(omega)
    c_omega_num = ConjugateEvaluator(omega, method="numeric-sup")
    c_sigma = ConjugateEvaluator(sigma)
    c_tilde = ConjugateEvaluator(tilde)
    L = find_log_scaling_constant(tilde)

    # blocks I_m = (j_{m-1}, j_m] with j_n = max(2^n, s_{n+1}); the report
    # covers the first jmax indices of the construction, j in (j_0, j_0+jmax]
    s_thresholds = {1: _block_threshold(c_sigma, c_tilde, L, 1)}
    j_bounds = []  # j_bounds[n] = j_n
    n = 0
    while True:
        s_thresholds.setdefault(n + 1,
                                _block_threshold(c_sigma, c_tilde, L, n + 1))
        j_bounds.append(max(2 ** n, s_thresholds[n + 1]))
        if j_bounds[-1] >= j_bounds[0] + jmax:
            break
        n += 1

    def block_of(j: int) -> int:
        for m in range(1, len(j_bounds)):
            if j_bounds[m - 1] < j <= j_bounds[m]:
                return m
        raise RegimeError(f"index {j} not covered by blocks")

    log_thresh = math.log(threshold)
    report = ChainReport(
        experiment="negative-chain",
        params={"d": d, "k": k, "d_prime": d_prime, "jmax": jmax, "L": L,
                "j0": j_bounds[0], "threshold": threshold, "tol": tol,
                "blocks": [int(b) for b in j_bounds]},
        columns=["j", "lambda", "x_j", "log_a_j", "stationarity_lhs",
                 "stationarity_rhs", "numeric_conjugate", "convexity_lhs",
                 "convexity_rhs", "shift_lhs", "shift_rhs", "block_lhs",
                 "block_rhs", "log_lower_bound", "verdict"])
    first_cross = None
    for j in range(j_bounds[0] + 1, j_bounds[0] + jmax + 1):
        lam = float(block_of(j))
        x_j = (k * j * d / lam) ** d
        st_lhs = k * j * math.log(x_j) - lam * omega(x_j)
        st_rhs = lam * c_omega(k * j / lam)
        st_num = lam * c_omega_num(k * j / lam)
        ok_st = (abs(st_lhs - st_rhs) <= 1e-9 * max(1.0, abs(st_rhs))
                 and abs(st_num - st_rhs) <= 1e-9 * max(1.0, abs(st_rhs)))
        conv_lhs = lam * c_omega(j / lam) + lam * c_omega(k * j / lam)
        conv_rhs = 2 * lam * c_omega((k + 1) * j / (2 * lam))
        tilde_same = 2 * lam * c_tilde(j / (2 * lam))
        ok_conv = (conv_lhs >= conv_rhs - tol
                   and abs(conv_rhs - tilde_same) <= 1e-9 * max(1.0, abs(conv_rhs)))
        shift_lhs = 2 * lam * c_tilde(j / (2 * lam))
        shift_rhs = 2 * L * lam * c_tilde(j / (2 * L * lam)) + j - 2 * lam * L
        ok_shift = shift_lhs >= shift_rhs - tol
        block_lhs = 2 * L * lam * c_tilde(j / (2 * L * lam))
        block_rhs = c_sigma(j)
        ok_block = block_lhs >= block_rhs - tol
        log_lb = j - 2 * lam * L
        if first_cross is None and log_lb > log_thresh:
            first_cross = j
        log_a_j = lam * c_omega(j / lam)
        report.add_row({
            "j": j, "lambda": lam, "x_j": x_j, "log_a_j": log_a_j,
            "stationarity_lhs": st_lhs, "stationarity_rhs": st_rhs,
            "numeric_conjugate": st_num,
            "convexity_lhs": conv_lhs, "convexity_rhs": conv_rhs,
            "shift_lhs": shift_lhs, "shift_rhs": shift_rhs,
            "block_lhs": block_lhs, "block_rhs": block_rhs,
            "log_lower_bound": log_lb,
            "verdict": ok_st and ok_conv and ok_shift and ok_block})
    report.verdict = report.all_hold() and first_cross is not None
    report.first_crossing_index = first_cross
    return report


# ---------------------------------------------------------------------------
# Bounded-derivative chain
# ---------------------------------------------------------------------------

def bounded_derivative_chain(d: float, psi: ModelFunction, mmax: int,
                             threshold: float = DEFAULT_THRESHOLD,
                             y_cap: float = 1e12) -> ChainReport:
    """For each m find a witness y_m with |psi'(y_m)| >= 2^(m d), bracket
    x_m = psi(y_m) on the grid x_{m,j} = (j d / m)^d, and track the divergent
    term (2^m / (m e))^(j(m) d)."""
    log_thresh = math.log(threshold)
    report = ChainReport(
        experiment="bounded-derivative",
        params={"d": d, "psi": psi.label, "mmax": mmax, "threshold": threshold},
        columns=["m", "y_m", "x_m", "j_m", "x_bracket_lo", "x_bracket_hi",
                 "log_term", "verdict"])
    first_cross = None
    for m in range(1, mmax + 1):
        target = 2.0 ** (m * d)
        y_m = None
        lo = 1e-3
        while lo < y_cap:
            hi = lo * 10.0
            ys = np.geomspace(lo, hi, 200)
            for y in ys:
                if abs(psi.jet(float(y), 1).entry_float(1)) >= target and psi.value(float(y)) > 0:
                    y_m = float(y)
                    break
            if y_m is not None:
                break
            lo = hi
        if y_m is None:
            raise SearchExhaustedError(
                f"no y with |psi'(y)| >= 2^(md)={target:g} below {y_cap:g}")
        x_m = psi.value(y_m)
        j_m = int(m * x_m ** (1.0 / d) / d)
        b_lo = (j_m * d / m) ** d
        b_hi = ((j_m + 1) * d / m) ** d
        ok = b_lo <= x_m < b_hi
        log_term = j_m * d * (m * math.log(2.0) - math.log(m) - 1.0)
        if first_cross is None and log_term > log_thresh:
            first_cross = m
        report.add_row({"m": m, "y_m": y_m, "x_m": x_m, "j_m": j_m,
                        "x_bracket_lo": b_lo, "x_bracket_hi": b_hi,
                        "log_term": log_term, "verdict": ok})
    report.verdict = report.all_hold() and first_cross is not None
    report.first_crossing_index = first_cross
    return report


# ---------------------------------------------------------------------------
# Sufficiency: measured constants for conditions (a) and (b)
# ---------------------------------------------------------------------------

@dataclass
class SufficientConditionReport:
    psi: str
    weight: str
    a: float
    p: float
    C0: float
    per_m: dict = field(default_factory=dict)  # m -> {"log_C_m", "witness", "growing"}

    def any_growing(self) -> bool:
        return any(rec["growing"] for rec in self.per_m.values())

    def to_dict(self) -> dict:
        return {"psi": self.psi, "weight": self.weight, "a": self.a,
                "p": self.p, "C0": self.C0, "per_m": self.per_m}


def sufficient_condition_check(psi: ModelFunction, w: WeightFunction, a: float,
                               m_list: Sequence[int], grid: GridSpec,
                               jmax: int) -> SufficientConditionReport:
    """Measure C0 in |x| <= C0 (1+|psi(x)|)^a and, for each m, the minimal C_m
    dominating |psi^(j)(x)| by exp(m phi_sigma*(j/m)) (1+|psi(x)|)^p with
    sigma(t) = omega(t^(1/a)) and p = a-1.  A growing C_m trend across the
    upper half of the order range flags a likely failure."""
    sigma = scaled_weight(w, a)
    conj = ConjugateEvaluator(sigma)
    p = a - 1.0
    xs = grid.symmetric_points()
    psis = [psi.value(float(x)) for x in xs]
    c0 = max(abs(float(x)) / (1.0 + abs(v)) ** a for x, v in zip(xs, psis))
    rep = SufficientConditionReport(psi=psi.label, weight=w.label, a=a, p=p,
                                    C0=c0)
    tables = [jet_log_abs(psi.jet(float(x), jmax)) for x in xs]
    for m in m_list:
        best, best_half, witness = -math.inf, -math.inf, None
        for xi, x in enumerate(xs):
            logs = tables[xi]
            lp = p * math.log1p(abs(psis[xi]))
            for j in range(1, jmax + 1):
                if logs[j] == LOG_ZERO:
                    continue
                v = logs[j] - m * conj(j / m) - lp
                if v > best:
                    best, witness = v, {"j": j, "x": float(x)}
                if j <= jmax // 2 and v > best_half:
                    best_half = v
        rep.per_m[int(m)] = {"log_C_m": best, "witness": witness,
                             "growing": best > best_half + 1e-6}
    return rep


# ---------------------------------------------------------------------------
# Composed seminorm sup
# ---------------------------------------------------------------------------

@dataclass
class ComposedSeminormResult:
    f: str
    psi: str
    sigma: str
    m: int
    grid: str
    jq_cap: int
    value_log: float
    witness: Optional[dict]
    stable: Optional[bool] = None


def composed_jet_log_table(f: ModelFunction, psi: ModelFunction,
                           xs: Sequence[float], J: int) -> list:
    """Per grid point, log |(f o psi)^(j)(x)| for j = 0..J via full FdB."""
    table = []
    for x in xs:
        psi_jet = psi.jet(float(x), J).to_log()
        h_jet = f.jet(psi.value(float(x)), J).to_log()
        composed = compose_jet(h_jet, psi_jet, J)
        table.append(jet_log_abs(composed))
    return table


def _composed_sup(xs, table, conj, m, J_cap, Q_cap, jq_cap) -> tuple:
    best, witness = LOG_ZERO, None
    for xi, x in enumerate(xs):
        lx = LOG_ZERO if x == 0 else math.log(abs(float(x)))
        logs = table[xi]
        for j in range(min(J_cap, len(logs) - 1) + 1):
            if logs[j] == LOG_ZERO:
                continue
            for q in range(min(Q_cap, jq_cap - j) + 1):
                if q and lx == LOG_ZERO:
                    continue
                v = logs[j] - m * conj((j + q) / m)
                if q:
                    v += q * lx
                if v > best:
                    best, witness = v, {"j": j, "q": q, "x": float(x)}
    return best, witness


def composed_seminorm_bound(f: ModelFunction, psi: ModelFunction,
                            sigma: WeightFunction, m: int, grid: GridSpec,
                            Jmax: int, Qmax: int, jq_cap: int = None,
                            check_stability: bool = False,
                            jet_table: list = None,
                            xs: Sequence[float] = None) -> ComposedSeminormResult:
    """sup over (j <= Jmax, q <= Qmax, grid x) of
    |x^q (f o psi)^(j)(x)| exp(-m phi_sigma*((j+q)/m)), in log domain.

    A precomputed (xs, jet_table) pair may be supplied to amortize the FdB
    work across several m values."""
    if jq_cap is None:
        jq_cap = Jmax + Qmax
    conj = ConjugateEvaluator(sigma)
    if xs is None:
        xs = grid.symmetric_points()
    if jet_table is None:
        jet_table = composed_jet_log_table(f, psi, xs, Jmax)
    best, witness = _composed_sup(xs, jet_table, conj, m, Jmax, Qmax, jq_cap)
    stable = None
    if check_stability:
        J2 = math.ceil(Jmax * 1.25)
        xs2 = grid.scaled(1.25).symmetric_points()
        table2 = composed_jet_log_table(f, psi, xs2, J2)
        b2, _ = _composed_sup(xs2, table2, conj, m, J2,
                              math.ceil(Qmax * 1.25), math.ceil(jq_cap * 1.25))
        stable = abs(b2 - best) < 1e-6 * max(1.0, abs(best))
    return ComposedSeminormResult(f=f.label, psi=psi.label, sigma=sigma.label,
                                  m=m, grid=grid.spec_string(), jq_cap=jq_cap,
                                  value_log=best, witness=witness,
                                  stable=stable)


# ---------------------------------------------------------------------------
# Necessary growth comparison sigma(x) <= C (1 + omega(psi(x)))
# ---------------------------------------------------------------------------

@dataclass
class NecessaryGrowthResult:
    psi: str
    sigma: str
    omega: str
    C: float
    argmax_x: float
    grows_with_radius: bool


def necessary_growth(psi: ModelFunction, w_sigma: WeightFunction,
                     w_omega: WeightFunction,
                     grid: GridSpec) -> NecessaryGrowthResult:
    """Measured C = max over the grid of sigma(x) / (1 + omega(psi(x))),
    with a trend flag comparing against the inner half-radius maximum."""
    xs = grid.symmetric_points()
    best, best_x = -math.inf, 0.0
    inner_best = -math.inf
    half = grid.hi / 2.0
    for x in xs:
        ratio = w_sigma(float(x)) / (1.0 + w_omega(psi.value(float(x))))
        if ratio > best:
            best, best_x = ratio, float(x)
        if abs(x) <= half and ratio > inner_best:
            inner_best = ratio
    return NecessaryGrowthResult(psi=psi.label, sigma=w_sigma.label,
                                 omega=w_omega.label, C=best, argmax_x=best_x,
                                 grows_with_radius=best > inner_best + 1e-9)


# ---------------------------------------------------------------------------
# Nuclearity: summability of the weight-ratio series
# ---------------------------------------------------------------------------

def nuclearity_sum(w: WeightFunction, m: int, L: int, jmax: int,
                   tol: float = 1e-10) -> ChainReport:
    """Partial sums of sum_j v_m(j)/v_l(j) with v_n(j) = exp(-n phi*(j/n)) and
    l = L m, checked against the geometric cap e^(mL)/(e-1)."""
    verify_log_scaling_constant(w, L)
    conj = ConjugateEvaluator(w)
    ell = L * m
    bound = math.exp(m * L) / (math.e - 1.0)
    report = ChainReport(
        experiment="nuclearity",
        params={"weight": w.label, "m": m, "L": L, "ell": ell, "jmax": jmax,
                "bound": bound, "tol": tol},
        columns=["j", "log_ratio", "partial_sum", "verdict"])
    log_ratios = []
    for j in range(1, jmax + 1):
        log_ratios.append(ell * conj(j / ell) - m * conj(j / m))
        partial = math.exp(log_sum_exp(log_ratios)) if log_ratios else 0.0
        report.add_row({"j": j, "log_ratio": log_ratios[-1],
                        "partial_sum": partial,
                        "verdict": partial <= bound + tol})
    report.verdict = report.all_hold()
    return report


# ---------------------------------------------------------------------------
# Equicontinuity constant for scaled translations
# ---------------------------------------------------------------------------

@dataclass
class EquicontinuityResult:
    log_C_n: float
    C_n: float
    argmax_j: int
    m: int
    lambda_warning: bool
    spot_rows: list = field(default_factory=list)


def equicontinuity_constant(x_seq: Sequence[float], lambda_seq: Sequence[float],
                            w: WeightFunction, n: int, K: int,
                            f: ModelFunction = None, grid: GridSpec = None,
                            J: int = 16) -> EquicontinuityResult:
    """C_n = sup_j exp((-lambda_j + m) omega(x_j) + m) with m = K n, plus spot
    checks that the scaled translations satisfy
    pi_{n,n}(U_j f) <= C_n pi_{m,m}(f) on a finite box."""
    if len(x_seq) != len(lambda_seq) or not x_seq:
        raise PreconditionError("x and lambda sequences must be equal-length, nonempty")
    m = K * n
    warning = all(lam <= m for lam in lambda_seq)
    best, best_j = -math.inf, 0
    for j, (x_j, lam_j) in enumerate(zip(x_seq, lambda_seq), start=1):
        v = (-lam_j + m) * w(x_j) + m
        if v > best:
            best, best_j = v, j
    result = EquicontinuityResult(
        log_C_n=best, C_n=math.exp(best) if best < 700 else math.inf,
        argmax_j=best_j, m=m, lambda_warning=warning)

    if f is not None:
        if grid is None:
            grid = GridSpec("lin", 0.05, 8.0, 160)
        conj = ConjugateEvaluator(w)
        us = grid.symmetric_points()
        logs_f = [jet_log_abs(f.jet(float(u), J)) for u in us]
        # pi_{m,m}(f) on the box
        pi_m = LOG_ZERO
        for ui, u in enumerate(us):
            for jj in range(J + 1):
                if logs_f[ui][jj] == LOG_ZERO:
                    continue
                pi_m = max(pi_m, logs_f[ui][jj] - m * conj(jj / m) + m * w(float(u)))
        idxs = sorted({1, len(x_seq) // 2 + 1, len(x_seq)})
        for j in idxs:
            x_j, lam_j = x_seq[j - 1], lambda_seq[j - 1]
            pi_n = LOG_ZERO
            for ui, u in enumerate(us):
                x = float(u) + x_j  # translated argument
                for jj in range(J + 1):
                    if logs_f[ui][jj] == LOG_ZERO:
                        continue
                    pi_n = max(pi_n, logs_f[ui][jj] - n * conj(jj / n) + n * w(x))
            lhs = pi_n - lam_j * w(x_j)
            rhs = best + pi_m
            result.spot_rows.append({"j": j, "log_lhs": lhs, "log_rhs": rhs,
                                     "verdict": lhs <= rhs + 1e-9})
    return result


# ---------------------------------------------------------------------------
# Cauchy-type derivative bounds for analytic argument functions
# ---------------------------------------------------------------------------

@dataclass
class CauchyBoundResult:
    psi: str
    delta: float
    B: float
    log_B: float
    witness: Optional[dict]
    max_excess_vs_prediction: float  # log-scale; <= 0 means within prediction


def cauchy_derivative_bound(psi: ModelFunction, delta: float,
                            x_grid: GridSpec, jmax: int) -> CauchyBoundResult:
    """Minimal measured B with |psi^(j)(x)| <= j! B^(j+1) on the grid, and the
    comparison with the radius-based Cauchy prediction
    j! (1+|x|+r_x)/r_x^j, r_x = delta |x|."""
    if psi.analytic not in ("cone", "strip"):
        raise CapabilityError(
            f"{psi.label} carries no analyticity metadata; Cauchy bound n/a")
    if not 0.0 < delta < 1.0:
        raise PreconditionError("delta must lie in (0, 1)")
    xs = [float(x) for x in x_grid.symmetric_points() if abs(x) >= 1.0]
    if not xs:
        raise PreconditionError("grid must contain points with |x| >= 1")
    best, witness = -math.inf, None
    excess = -math.inf
    for x in xs:
        logs = jet_log_abs(psi.jet(x, jmax))
        for j in range(jmax + 1):
            if logs[j] == LOG_ZERO:
                continue
            lb = (logs[j] - math.lgamma(j + 1)) / (j + 1)
            if lb > best:
                best, witness = lb, {"j": j, "x": x}
            r_x = delta * abs(x)
            pred = math.lgamma(j + 1) + math.log1p(abs(x) + r_x) - j * math.log(r_x)
            excess = max(excess, logs[j] - pred)
    return CauchyBoundResult(psi=psi.label, delta=delta,
                             B=math.exp(best), log_B=best, witness=witness,
                             max_excess_vs_prediction=excess)
