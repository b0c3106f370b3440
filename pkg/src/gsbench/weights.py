"""Weight functions, their defining conditions, and Young conjugates.

A weight is a continuous increasing gauge omega on [0, inf) extended to the
real line by omega(x) = omega(|x|).  The Young conjugate of
phi(t) = omega(e^t) is

    phi*(s) = sup { s t - omega(e^t) : t >= 0 },

computed in closed form for the Gevrey family and by bracketing plus
golden-section search otherwise (phi is convex, so the objective is concave
and unimodal).
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad

from .errors import BracketError, PreconditionError, RangeError
from .grids import DEFAULT_T_GRID, GridSpec
from .reports import ChainReport

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class WeightFunction:
    """Evaluator for a weight omega(t) with parsed metadata.

    Builtin kinds:
      gevrey(d):  omega(t) = t^(1/d), d > 0
      logpow(s):  omega(t) = (log t)^s for t > 1, else 0; s > 1
      tabulated:  monotone piecewise-linear interpolation in (log t, omega)
      custom:     arbitrary callable (used for associated weights and
                  rescalings); assumed to satisfy the weight conditions
    """

    def __init__(self, kind: str, *, d: float = None, s: float = None,
                 table: tuple = None, fn: Callable[[float], float] = None,
                 label: str = None):
        self.kind = kind
        self.d = d
        self.s = s
        self.label = label or kind
        if kind == "gevrey":
            if d is None or d <= 0:
                raise PreconditionError("gevrey weight requires d > 0")
        elif kind == "logpow":
            if s is None or s <= 1:
                raise PreconditionError("logpow weight requires s > 1")
        elif kind == "tabulated":
            ts, vals = table
            ts = np.asarray(ts, dtype=float)
            vals = np.asarray(vals, dtype=float)
            if ts.ndim != 1 or ts.shape != vals.shape or len(ts) < 2:
                raise PreconditionError("table must be two equal 1-d columns")
            if not np.all(np.diff(ts) > 0):
                raise PreconditionError("table t-column must be strictly increasing")
            if np.any(ts <= 0):
                raise PreconditionError("table t values must be positive")
            if np.any(np.diff(vals) < 0):
                raise PreconditionError("table omega values must be nondecreasing")
            self._log_ts = np.log(ts)
            self._vals = vals
        elif kind == "custom":
            if fn is None:
                raise PreconditionError("custom weight requires a callable")
            self._fn = fn
        else:
            raise PreconditionError(f"unknown weight kind {kind!r}")

    # omega(x) = omega(|x|)
    def __call__(self, t: float) -> float:
        t = abs(float(t))
        if self.kind == "gevrey":
            return t ** (1.0 / self.d)
        if self.kind == "logpow":
            if t <= 1.0:
                return 0.0
            return math.log(t) ** self.s
        if self.kind == "custom":
            return self._fn(t)
        # tabulated
        if t == 0.0:
            lt = -math.inf
        else:
            lt = math.log(t)
        if lt < self._log_ts[0] - 1e-12 or lt > self._log_ts[-1] + 1e-12:
            raise RangeError(
                f"t={t:g} outside tabulated range "
                f"[{math.exp(self._log_ts[0]):g}, {math.exp(self._log_ts[-1]):g}]")
        return float(np.interp(lt, self._log_ts, self._vals))

    def phi(self, t: float) -> float:
        """phi(t) = omega(e^t); overflow of e^t reported as +inf."""
        try:
            et = math.exp(t)
        except OverflowError:
            return math.inf
        return self(et)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def gevrey(d: float) -> "WeightFunction":
        return WeightFunction("gevrey", d=d, label=f"gevrey:d={d:g}")

    @staticmethod
    def logpow(s: float) -> "WeightFunction":
        return WeightFunction("logpow", s=s, label=f"logpow:s={s:g}")

    @staticmethod
    def tabulated(ts, vals) -> "WeightFunction":
        return WeightFunction("tabulated", table=(ts, vals), label="table")

    @staticmethod
    def custom(fn: Callable[[float], float], label: str = "custom") -> "WeightFunction":
        return WeightFunction("custom", fn=fn, label=label)

    @staticmethod
    def from_csv(path: str) -> "WeightFunction":
        ts, vals = [], []
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].lstrip().startswith("#"):
                    continue
                if row[0].strip().lower() in ("t", "x"):
                    continue
                ts.append(float(row[0]))
                vals.append(float(row[1]))
        return WeightFunction.tabulated(ts, vals)


def parse_weight(spec: str) -> WeightFunction:
    """Parse the weight mini-language: gevrey:d=2 | logpow:s=2 | table:file.csv"""
    head, _, rest = spec.partition(":")
    if head == "gevrey":
        key, _, val = rest.partition("=")
        if key != "d":
            raise PreconditionError(f"gevrey spec needs d=<real>, got {spec!r}")
        return WeightFunction.gevrey(float(val))
    if head == "logpow":
        key, _, val = rest.partition("=")
        if key != "s":
            raise PreconditionError(f"logpow spec needs s=<real>, got {spec!r}")
        return WeightFunction.logpow(float(val))
    if head == "table":
        return WeightFunction.from_csv(rest)
    raise PreconditionError(f"unknown weight spec {spec!r}")


def scaled_weight(w: WeightFunction, a: float) -> WeightFunction:
    """sigma(t) = omega(t^(1/a)).  For gevrey(d) this is gevrey(a*d)."""
    if a <= 0:
        raise PreconditionError("scaling exponent must be positive")
    if w.kind == "gevrey":
        return WeightFunction.gevrey(w.d * a)
    return WeightFunction.custom(lambda t, _w=w, _a=a: _w(t ** (1.0 / _a)),
                                 label=f"{w.label}^(1/{a:g})")


def eval_weight(w: WeightFunction, t: float) -> float:
    return w(t)


class ConjugateEvaluator:
    """Young conjugate phi*(s) with a per-s cache.

    method "closed-form" is available for the Gevrey family:
        phi*(s) = s d log(s d / e)   if s d >= 1
        phi*(s) = -1                 if s d <= 1 (maximizer pinned at t = 0)
    method "numeric-sup" maximizes the concave t -> s t - omega(e^t) by
    geometric bracketing plus golden-section refinement.
    """

    def __init__(self, weight: WeightFunction, method: str = None,
                 rel_tol: float = 1e-12, t_cap: float = 1e8):
        if method is None:
            method = "closed-form" if weight.kind == "gevrey" else "numeric-sup"
        if method == "closed-form" and weight.kind != "gevrey":
            raise PreconditionError("closed form only available for gevrey weights")
        self.weight = weight
        self.method = method
        self.rel_tol = rel_tol
        self.t_cap = t_cap
        self._cache: dict = {}

    def __call__(self, s: float) -> float:
        if s < 0:
            raise PreconditionError(f"conjugate argument must be >= 0, got {s}")
        v = self._cache.get(s)
        if v is None:
            if self.method == "closed-form":
                v = self._closed_form(s)
            else:
                v = self._numeric_sup(s)
            self._cache[s] = v
        return v

    def _closed_form(self, s: float) -> float:
        sd = s * self.weight.d
        if sd <= 1.0:
            return -1.0
        return sd * (math.log(sd) - 1.0)

    def _objective(self, s: float, t: float) -> float:
        p = self.weight.phi(t)
        if math.isinf(p):
            return -math.inf
        return s * t - p

    def _numeric_sup(self, s: float) -> float:
        g = lambda t: self._objective(s, t)
        # expand until the objective has turned down
        hi = 1.0
        while g(hi) >= g(hi / 2.0):
            hi *= 2.0
            if hi > self.t_cap:
                raise BracketError(
                    f"no bracket for s={s:g} below t={self.t_cap:g}; "
                    "weight appears to violate condition (gamma)")
        a, b = 0.0, hi
        c = b - _GOLDEN * (b - a)
        d = a + _GOLDEN * (b - a)
        fc, fd = g(c), g(d)
        while (b - a) > self.rel_tol * max(1.0, b):
            if fc >= fd:
                b, d, fd = d, c, fc
                c = b - _GOLDEN * (b - a)
                fc = g(c)
            else:
                a, c, fc = c, d, fd
                d = a + _GOLDEN * (b - a)
                fd = g(d)
        t_star = 0.5 * (a + b)
        return max(g(t_star), g(0.0))


def young_conjugate(c: ConjugateEvaluator, s: float) -> float:
    return c(s)


# ---------------------------------------------------------------------------
# Condition checks
# ---------------------------------------------------------------------------

@dataclass
class ConditionRecord:
    condition: str
    verdict: bool
    witness: Optional[dict] = None
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"condition": self.condition, "verdict": self.verdict,
                "witness": self.witness, "detail": self.detail}


@dataclass
class WeightConditionReport:
    weight: str
    grid: str
    alpha: ConditionRecord
    beta: ConditionRecord
    gamma: ConditionRecord
    delta: ConditionRecord
    epsilon: ConditionRecord
    doubling: ConditionRecord

    def records(self) -> list:
        return [self.alpha, self.beta, self.gamma, self.delta,
                self.epsilon, self.doubling]

    def to_dict(self) -> dict:
        return {"weight": self.weight, "grid": self.grid,
                "conditions": [r.to_dict() for r in self.records()]}


def _beta_integral(w: WeightFunction) -> tuple:
    f = lambda t: w(t) / (1.0 + t * t)
    v1, e1 = quad(f, 0.0, 1.0, limit=200)
    v2, e2 = quad(f, 1.0, np.inf, limit=200)
    return v1 + v2, e1 + e2


def check_weight_conditions(w: WeightFunction, grid: GridSpec = None,
                            k_bound: int = 1000, c_bound: int = 1000,
                            h_bound: int = 10 ** 6) -> WeightConditionReport:
    """Numerically audit Definition-level conditions (alpha)-(epsilon) plus the
    doubling inequality 2 omega(t) <= omega(H t) + H.

    Witness constants are the smallest integers that satisfy the inequality at
    every grid point; failures are recorded in the report, never raised.
    """
    if grid is None:
        grid = DEFAULT_T_GRID
    ts = np.concatenate([[0.0], grid.points()])
    om = np.array([w(t) for t in ts])

    # (alpha): omega(2t) <= K (omega(t) + 1)
    om2 = np.array([w(2.0 * t) for t in ts])
    k_req = math.ceil(np.max(om2 / (om + 1.0)) - 1e-12)
    alpha = ConditionRecord(
        "alpha", k_req <= k_bound,
        witness={"K": int(k_req)} if k_req <= k_bound else None,
        detail={"max_ratio": float(np.max(om2 / (om + 1.0)))})

    # (beta): integral of omega(t)/(1+t^2)
    beta_val, beta_err = _beta_integral(w)
    beta = ConditionRecord("beta", math.isfinite(beta_val) and beta_err < 1e-8 * max(1.0, beta_val),
                           witness={"integral": float(beta_val)},
                           detail={"abs_error": float(beta_err)})

    # (gamma): log(1+t^2) = o(omega(t)) -- ratio trend only
    tail = [t for t in grid.points() if t >= 10.0]
    samples = [(float(t), float(w(t) / math.log1p(t * t))) for t in tail[:: max(1, len(tail) // 12)]]
    ratios = [r for _, r in samples]
    gamma = ConditionRecord("gamma", bool(ratios and ratios[-1] > ratios[0]),
                            detail={"ratio_samples": samples,
                                    "note": "little-o not certifiable from finite samples"})

    # (delta): midpoint convexity of phi(t) = omega(e^t) on a t-grid
    tgrid = np.linspace(0.0, math.log(grid.hi), 400)
    ph = np.array([w.phi(t) for t in tgrid])
    mid = np.array([w.phi(0.5 * (tgrid[i] + tgrid[i + 2])) for i in range(len(tgrid) - 2)])
    viol = int(np.sum(mid > 0.5 * (ph[:-2] + ph[2:]) + 1e-9 * (1.0 + np.abs(ph[:-2]) + np.abs(ph[2:]))))
    delta = ConditionRecord("delta", viol == 0, detail={"violations": viol})

    # (epsilon): int_1^inf omega(y t)/t^2 dt <= C omega(y) + C
    ys = np.logspace(math.log10(max(grid.lo, 1e-2)), math.log10(grid.hi), 30)
    c_req = 0.0
    eps_ok = True
    for y in ys:
        val, _ = quad(lambda t: w(y * t) / (t * t), 1.0, np.inf, limit=200)
        c_req = max(c_req, val / (w(y) + 1.0))
    c_int = math.ceil(c_req - 1e-12)
    eps_ok = c_int <= c_bound
    epsilon = ConditionRecord("epsilon", eps_ok,
                              witness={"C": int(c_int)} if eps_ok else None,
                              detail={"max_ratio": float(c_req)})

    # doubling: 2 omega(t) <= omega(H t) + H; monotone in H, so bisect
    def doubling_holds(H: int) -> bool:
        return all(2.0 * om[i] <= w(H * ts[i]) + H + 1e-12 for i in range(len(ts)))

    h_witness = None
    if doubling_holds(h_bound):
        lo, hi = 1, h_bound
        while lo < hi:
            midh = (lo + hi) // 2
            if doubling_holds(midh):
                hi = midh
            else:
                lo = midh + 1
        h_witness = lo
    doubling = ConditionRecord(
        "doubling", h_witness is not None,
        witness={"H": int(h_witness)} if h_witness is not None else None,
        detail={"search_bound": h_bound})

    return WeightConditionReport(weight=w.label, grid=grid.spec_string(),
                                 alpha=alpha, beta=beta, gamma=gamma,
                                 delta=delta, epsilon=epsilon, doubling=doubling)


# ---------------------------------------------------------------------------
# Log-scaling constant and the seminorm-shift inequality
# ---------------------------------------------------------------------------

def find_log_scaling_constant(w: WeightFunction, grid: GridSpec = None,
                              bound: int = 64) -> int:
    """Smallest integer L with omega(e t) <= L (1 + omega(t)) on the grid."""
    if grid is None:
        grid = DEFAULT_T_GRID
    ts = np.concatenate([[0.0], grid.points()])
    ratios = [w(math.e * t) / (1.0 + w(t)) for t in ts]
    L = math.ceil(max(ratios) - 1e-12)
    if L > bound:
        raise BracketError(f"no L <= {bound} scales the weight (max ratio {max(ratios):g})")
    return max(1, L)


def verify_log_scaling_constant(w: WeightFunction, L: int,
                                grid: GridSpec = None) -> None:
    """Raise with a witness t if omega(e t) <= L (1 + omega(t)) fails."""
    if grid is None:
        grid = DEFAULT_T_GRID
    for t in np.concatenate([[0.0], grid.points()]):
        if w(math.e * t) > L * (1.0 + w(t)) + 1e-9:
            raise PreconditionError(
                f"L={L} invalid: omega(e*t)={w(math.e * t):g} > "
                f"L(1+omega(t))={L * (1.0 + w(t)):g} at t={t:g}")


def conjugate_shift_bound(c: ConjugateEvaluator, lam: float, N: int, L: int,
                          jmax: int, tol: float = 1e-9,
                          grid: GridSpec = None) -> ChainReport:
    """Row-by-row check of the conjugate shift inequality

        mu phi*(j/mu) + N j <= lam phi*(j/lam) + lam sum_{k=1}^N L^k

    with mu = L^N lam, after verifying that L scales the weight."""
    verify_log_scaling_constant(c.weight, L, grid)
    mu = (L ** N) * lam
    slack = lam * sum(L ** k for k in range(1, N + 1))
    report = ChainReport(
        experiment="conjugate-shift",
        params={"weight": c.weight.label, "lambda": lam, "N": N, "L": L,
                "mu": mu, "jmax": jmax, "tol": tol},
        columns=["j", "lhs", "rhs", "margin", "verdict"])
    for j in range(jmax + 1):
        lhs = mu * c(j / mu) + N * j
        rhs = lam * c(j / lam) + slack
        ok = lhs <= rhs + tol
        report.add_row({"j": j, "lhs": lhs, "rhs": rhs,
                        "margin": rhs - lhs, "verdict": ok})
    report.verdict = report.all_hold()
    return report


@dataclass
class FactorialDominationResult:
    log_C: float
    C: float
    argmax_j: int


def factorial_domination(c: ConjugateEvaluator, A: float, lam: float,
                         jmax: int) -> FactorialDominationResult:
    """Witness C for A^j j! <= C exp(lam phi*(j/lam)), via a log-domain scan."""
    best, best_j = -math.inf, 0
    logA = math.log(A)
    for j in range(jmax + 1):
        v = j * logA + math.lgamma(j + 1) - lam * c(j / lam)
        if v > best:
            best, best_j = v, j
    C = math.exp(best) if best < 700 else math.inf
    return FactorialDominationResult(log_C=best, C=C, argmax_j=best_j)
