import logging
import math
from dataclasses import dataclass, field

import numpy as np

from app.config import get_settings
from app.errors import DomainError, NumericError, ResourceError
from app.galsets import prime_power_construction
from app.gcdsums import log_gcd_sum_tail
from app.numtheory import FactoredInteger, IntegerSet, theta_tail_bound
from app.schemas import M1Moment, MainTermRatio, ResonanceExperiment, ResonanceParams, ZetaLineValue

logger = logging.getLogger(__name__)

_MAX_BUCKETS = 10**4
_ROW_BUDGET = 4 * 10**6


@dataclass(frozen=True)
class Bucket:
    u: int
    m: FactoredInteger
    count: int

    @property
    def r(self) -> float:
        return math.sqrt(self.count)


@dataclass(frozen=True)
class Resonator:
    T: float
    ratio: float
    buckets: tuple[Bucket, ...] = field(repr=False)
    source_size: int

    @property
    def c(self) -> float:
        return self.T / math.log(self.T)

    @property
    def weights(self) -> np.ndarray:
        return np.sqrt(np.array([b.count for b in self.buckets], dtype=np.float64))

    @property
    def log_m(self) -> np.ndarray:
        return np.array([b.m.log() for b in self.buckets], dtype=np.float64)

    def r0_squared(self) -> float:
        return math.fsum(self.weights) ** 2

    def evaluate(self, t: np.ndarray) -> np.ndarray:
        """R(t) = sum_u r_u m_u^{-it}."""
        t = np.atleast_1d(np.asarray(t, dtype=np.float64))
        w, log_m = self.weights, self.log_m
        out = np.empty(t.size, dtype=complex)
        step = max(1, _ROW_BUDGET // max(1, w.size))
        for start in range(0, t.size, step):
            chunk = t[start:start + step]
            out[start:start + step] = np.exp(-1j * np.outer(chunk, log_m)) @ w
        return out

    def diagonal_inequality_holds(self) -> bool:
        """min(|M_u|, |M_v|) <= r_u r_v for every bucket pair."""
        counts = np.array([b.count for b in self.buckets], dtype=np.float64)
        w = np.sqrt(counts)
        return bool(np.all(np.minimum.outer(counts, counts) <= np.outer(w, w) * (1 + 1e-12)))


@dataclass(frozen=True)
class GaussianKernel:
    """Phi(t) = e^{-t^2/(4A)} / sqrt(4 A pi) with transform Phi^(xi) = e^{-A xi^2}."""

    A: float

    def __post_init__(self):
        if self.A <= 0:
            raise DomainError(f"kernel width A must be positive, got {self.A}")

    def phi(self, t):
        return np.exp(-np.square(t) / (4.0 * self.A)) / math.sqrt(4.0 * self.A * math.pi)

    def phi_hat(self, xi):
        return np.exp(-self.A * np.square(xi))

    def theta_constant(self, tol: float = 1e-16) -> float:
        """Upper bound for 1 + 2 sum_{n>=0} Phi^(n)."""
        K = 1
        while theta_tail_bound(self.A, K) > tol and K < 10**6:
            K += 1
        partial = math.fsum(math.exp(-self.A * n * n) for n in range(1, K + 1))
        return 1.0 + 2.0 * (1.0 + partial + theta_tail_bound(self.A, K))


def build_resonator(M: IntegerSet, T: float) -> Resonator:
    if T < 10:
        raise DomainError(f"T must be >= 10, got {T}")
    if len(M) == 0:
        raise DomainError("cannot build a resonator from an empty set")
    log_ratio = math.log1p(math.log(T) / T)
    groups: dict[int, list[FactoredInteger]] = {}
    for element, log_m in zip(M.elements, M.logs.tolist()):
        groups.setdefault(int(math.floor(log_m / log_ratio)), []).append(element)
    buckets = tuple(Bucket(u=u, m=members[0], count=len(members)) for u, members in sorted(groups.items()))
    logger.debug("resonator over %d elements: %d buckets", len(M), len(buckets))
    return Resonator(T=T, ratio=math.exp(log_ratio), buckets=buckets, source_size=len(M))


def _quadratic_phi_hat(points: np.ndarray, weights: np.ndarray, kernel: GaussianKernel, c: float) -> float:
    """sum_{i,j} w_i w_j Phi^(c (x_i - x_j)), reduced row by row."""
    rows = []
    step = max(1, _ROW_BUDGET // max(1, points.size))
    for start in range(0, points.size, step):
        block = slice(start, start + step)
        kernel_block = kernel.phi_hat(c * (points[block, None] - points[None, :]))
        rows.extend((weights[block] * (kernel_block @ weights)).tolist())
    return math.fsum(rows)


def moment_m1_closed(res: Resonator, kernel: GaussianKernel) -> M1Moment:
    if len(res.buckets) > _MAX_BUCKETS:
        raise ResourceError(f"{len(res.buckets)} buckets exceed the closed-form limit", _MAX_BUCKETS)
    c = res.c
    exact = c * _quadratic_phi_hat(res.log_m, res.weights, kernel, c)
    return M1Moment(exact=exact, theta_bound=kernel.theta_constant() * c * res.source_size)


def moment_i_closed(res: Resonator, kernel: GaussianKernel, ell: int, cutoff: int) -> float:
    """c sum_{j,k<=cutoff} (log j log k)^ell/(jk) sum_{u,v} r_u r_v Phi^(c log(k m_u / (j m_v)))."""
    if ell < 0 or cutoff < 1:
        raise DomainError("need ell >= 0 and cutoff >= 1")
    cap = get_settings().work_cap
    work = cutoff ** 2 * len(res.buckets) ** 2
    if work > cap:
        raise ResourceError(f"double sum of {work} kernel evaluations exceeds the work cap", cap)
    k = np.arange(1, cutoff + 1, dtype=np.float64)
    log_k = np.log(k)
    k_weight = (log_k ** ell if ell else np.ones_like(k)) / k
    keep = k_weight > 0
    # one point per (k, u): position log k + log m_u, weight r_u (log k)^ell / k
    points = (log_k[keep, None] + res.log_m[None, :]).ravel()
    weights = (k_weight[keep, None] * res.weights[None, :]).ravel()
    if points.size == 0:
        return 0.0
    return res.c * _quadratic_phi_hat(points, weights, kernel, res.c)


def resonance_tail(M: IntegerSet, T: float, ell: int, cutoff: int, A: float) -> float:
    """Phi^(1) c times the log-type GCD terms whose cofactors exceed the cutoff."""
    kernel = GaussianKernel(A)
    return float(kernel.phi_hat(1.0)) * (T / math.log(T)) * log_gcd_sum_tail(M, 1.0, ell, cutoff)


def _epsilon(t: float) -> float:
    return 1.0 / math.log(math.log(t + 20.0))


def zeta_deriv_values(ell: int, ts, T_cut: float) -> np.ndarray:
    """(-1)^ell sum_{k <= T_cut} (log k)^ell k^{-1-it} for every t in ts."""
    if ell < 0:
        raise DomainError(f"ell must be >= 0, got {ell}")
    if T_cut < 2:
        raise DomainError(f"T_cut must be >= 2, got {T_cut}")
    ts = np.atleast_1d(np.asarray(ts, dtype=np.float64))
    n = int(math.floor(T_cut))
    k = np.arange(1, n + 1, dtype=np.float64)
    log_k = np.log(k)
    coeff = (log_k ** ell if ell else np.ones_like(k)) / k
    partials = []
    step = max(1, _ROW_BUDGET // max(1, ts.size))
    for start in range(0, n, step):
        block = slice(start, start + step)
        partials.append(np.exp(-1j * np.outer(ts, log_k[block])) @ coeff[block])
    stacked = np.stack(partials, axis=1)
    values = np.array([complex(math.fsum(row.real), math.fsum(row.imag)) for row in stacked])
    return values if ell % 2 == 0 else -values


def zeta_deriv_line(ell: int, t: float, T_cut: float) -> ZetaLineValue:
    value = complex(zeta_deriv_values(ell, [t], T_cut)[0])
    eps = _epsilon(t)
    error_scale = math.factorial(ell) / eps ** ell * T_cut ** eps / t if t > 0 else math.inf
    return ZetaLineValue(value=value, error_scale=error_scale)


def _legendre_panels(lo: float, hi: float, width: float, total_points: int, min_order: int = 8):
    panels = max(1, int(math.ceil((hi - lo) / width)))
    order = max(min_order, int(math.ceil(total_points / panels)))
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def m1_full_line_quadrature(res: Resonator, kernel: GaussianKernel, order: int = 16) -> float:
    """int_{-L}^{L} |R(t)|^2 Phi(t / c) dt with L = 50 sqrt(A) c, by Gauss-Legendre panels."""
    c = res.c
    spread = float(np.ptp(res.log_m)) if len(res.buckets) > 1 else 0.0
    # panels resolve both the kernel scale c and the fastest oscillation of |R|^2
    width = min(c, math.pi / spread) if spread > 0 else c
    half = 50.0 * math.sqrt(kernel.A) * c
    panels = int(math.ceil(2 * half / width))
    nodes, weights = _legendre_panels(-half, half, width, panels * order, min_order=order)
    values = np.abs(res.evaluate(nodes)) ** 2 * kernel.phi(nodes / c)
    return math.fsum(weights * values)


def resonance_experiment(
    M: IntegerSet, params: ResonanceParams, T: float, quad_points: int = 4096
) -> ResonanceExperiment:
    """M1, M2 over [T^beta, T] and their ratio, a lower bound for max |zeta^(ell)(1+it)|^2."""
    if T > 1e6:
        raise DomainError(f"T = {T:g} beyond desk scale (1e6)")
    if quad_points < 1000:
        raise DomainError(f"quad_points must be >= 1000, got {quad_points}")
    res = build_resonator(M, T)
    kernel = GaussianKernel(params.A)
    c = res.c
    nodes, weights = _legendre_panels(T ** params.beta, T, c, quad_points)
    kernel_weights = weights * kernel.phi(nodes / c) * np.abs(res.evaluate(nodes)) ** 2
    zeta_sq = np.abs(zeta_deriv_values(params.ell, nodes, T)) ** 2
    M1 = math.fsum(kernel_weights)
    if M1 < 1e-300:
        raise NumericError(f"degenerate first moment M1 = {M1:.3g}")
    M2 = math.fsum(kernel_weights * zeta_sq)
    logger.info("resonance T=%g ell=%d: M2/M1 = %.6g over %d nodes", T, params.ell, M2 / M1, nodes.size)
    return ResonanceExperiment(
        M1=M1, M2=M2, ratio=M2 / M1, sampled_max_sq=float(zeta_sq.max()), nodes=int(nodes.size)
    )


def main_term_ratio(x: float, b: int, sigma: float) -> MainTermRatio:
    construction = prime_power_construction(x, b, sigma)
    return MainTermRatio(ratio=construction.ratio, factors=construction.factors)
