"""Reference limit laws and statistical machinery.

Closed forms and series for the Brownian path laws G1 (sup), G2 (sup of
modulus), seeded Monte Carlo oracle tables for G3 (integral of the square)
and G4 (integral of the modulus), one- and two-sample Kolmogorov-Smirnov
distances, empirical characteristic functions, the Brownian dispersion
matrix min(t_i, t_j), and numeric evaluation of the limiting joint
characteristic function

    chf(u, w) = exp(c(u, w)),
    c(u, w) = 2 r int_0^inf (exp(i w t^(p/a) y^p) cos(u t^(1/a) y) - 1) y^(-a-1) dy

for symmetric Paretian tails with Levy density constant r on each side and
p > alpha. The quadrature splits off the cosine part, which has the exact
closed form -2 r Cal(a) |u t^(1/a)|^a, integrates the remaining oscillatory
part over phase-bounded Gauss-Legendre panels with a power substitution at
the origin, and closes the tails with two-term integration-by-parts
asymptotics; panels and cutoff are refined until successive estimates agree
to the requested relative tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Callable

import numpy as np
from scipy.special import gamma as _gamma
from scipy.special import ndtr

from .errors import InternalConsistencyError, OracleMissingError, ParameterDomainError
from .families import FamilySpec
from .rng import SeededStream

__all__ = [
    "ReferenceLaw",
    "TailConstants",
    "QuadSpec",
    "std_normal_law",
    "scaled_normal_law",
    "g1_cdf",
    "g2_cdf",
    "g1_law",
    "g2_law",
    "brownian_functional_oracle",
    "save_oracle",
    "load_oracle",
    "ks_statistic",
    "ks_two_sample",
    "empirical_chf",
    "tail_constants",
    "chf_exponent",
    "limit_chf",
    "dispersion_matrix",
]


# ---------------------------------------------------------------------------
# reference laws


@dataclass(frozen=True, eq=False)
class ReferenceLaw:
    """An evaluable CDF with provenance (closed form, series, or oracle table)."""

    kind: str
    provenance: str
    cdf_fn: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    table: np.ndarray | None = field(default=None, repr=False)
    meta: dict | None = None

    def cdf(self, x):
        out = self.cdf_fn(np.asarray(x, dtype=float))
        return out

    def mean_and_stderr(self) -> tuple[float, float]:
        if self.table is None:
            raise ParameterDomainError(f"{self.kind} is not table-backed")
        t = self.table
        return float(t.mean()), float(t.std(ddof=1) / math.sqrt(t.size))


def std_normal_law() -> ReferenceLaw:
    return ReferenceLaw(kind="StdNormal", provenance="closed_form", cdf_fn=ndtr)


def scaled_normal_law(sigma: float) -> ReferenceLaw:
    if sigma <= 0:
        raise ParameterDomainError(f"sigma must be positive, got {sigma}")
    return ReferenceLaw(
        kind=f"ScaledNormal({sigma!r})",
        provenance="closed_form",
        cdf_fn=lambda x: ndtr(x / sigma),
    )


def g1_cdf(x) -> np.ndarray:
    """P(sup W < x) = 2 Phi(x) - 1 for x > 0 (reflection principle), else 0."""
    x = np.asarray(x, dtype=float)
    return np.where(x > 0, 2.0 * ndtr(x) - 1.0, 0.0)


def _g2_terms(x: np.ndarray, terms: int) -> np.ndarray:
    # alternating series (4/pi) sum (-1)^k/(2k+1) exp(-(2k+1)^2 pi^2/(8 x^2))
    k = np.arange(terms)
    coef = (-1.0) ** k / (2 * k + 1)
    with np.errstate(divide="ignore"):
        expo = np.exp(-((2 * k + 1) ** 2) * np.pi**2 / (8.0 * x[..., None] ** 2))
    return (4.0 / np.pi) * coef * expo


def g2_cdf(x, terms: int = 64) -> np.ndarray:
    """P(sup |W| < x), theta-type alternating series truncated at `terms`."""
    if not isinstance(terms, (int, np.integer)) or terms < 1:
        raise ParameterDomainError(f"terms must be a positive integer, got {terms}")
    x = np.asarray(x, dtype=float)
    pos = x > 0
    out = np.zeros_like(x, dtype=float)
    if np.any(pos):
        out[pos] = _g2_terms(x[pos], terms).sum(axis=-1)
    return np.clip(out, 0.0, 1.0)


def g1_law() -> ReferenceLaw:
    return ReferenceLaw(kind="G1", provenance="closed_form", cdf_fn=g1_cdf)


def g2_law(terms: int = 64) -> ReferenceLaw:
    return ReferenceLaw(kind="G2", provenance="series", cdf_fn=lambda x: g2_cdf(x, terms))


_ORACLE_KINDS = ("G1", "G2", "G3", "G4")
_ORACLE_CHUNK = 2048  # fixed so tables are bit-reproducible regardless of memory


def _table_law(kind: str, table: np.ndarray, meta: dict) -> ReferenceLaw:
    table = np.sort(np.asarray(table, dtype=float))

    def cdf_fn(x, _t=table):
        return np.searchsorted(_t, x, side="right") / _t.size

    return ReferenceLaw(kind=kind, provenance="oracle_table", cdf_fn=cdf_fn, table=table, meta=meta)


def brownian_functional_oracle(kind: str, paths: int, steps: int, stream: SeededStream) -> ReferenceLaw:
    """Empirical CDF table of a Brownian path functional over simulated paths.

    kind: G1 = sup W, G2 = sup |W|, G3 = int W^2, G4 = int |W|, each on [0,1]
    via Gaussian increments of variance 1/steps and right-endpoint Riemann
    sums. Bit-reproducible given (kind, paths, steps, stream).
    """
    if kind not in _ORACLE_KINDS:
        raise ParameterDomainError(f"oracle kind must be one of {_ORACLE_KINDS}, got {kind!r}")
    if paths < 1 or steps < 1:
        raise ParameterDomainError("paths and steps must be >= 1")
    g = stream.generator()
    sd = 1.0 / math.sqrt(steps)
    vals = np.empty(paths)
    done = 0
    while done < paths:
        m = min(_ORACLE_CHUNK, paths - done)
        w = np.cumsum(g.standard_normal((m, steps)) * sd, axis=1)
        if kind == "G1":
            v = w.max(axis=1)
        elif kind == "G2":
            v = np.abs(w).max(axis=1)
        elif kind == "G3":
            v = np.mean(w * w, axis=1)
        else:
            v = np.abs(w).mean(axis=1)
        vals[done:done + m] = v
        done += m
    meta = {
        "kind": kind,
        "paths": int(paths),
        "steps": int(steps),
        "master_seed": int(stream.master_seed),
        "stream_index": int(stream.stream_index),
        "built": datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ"),
    }
    return _table_law(kind, vals, meta)


_ORACLE_FORMAT = "selfnorm-oracle v1"


def save_oracle(law: ReferenceLaw, path) -> None:
    """Versioned flat text file: header, then sorted (x, cdf) pairs per line."""
    if law.table is None or law.meta is None:
        raise ParameterDomainError("only table-backed oracle laws can be saved")
    t = law.table
    m = t.size
    lines = [f"# {_ORACLE_FORMAT}"]
    for key in ("kind", "paths", "steps", "master_seed", "stream_index", "built"):
        if key in law.meta:
            lines.append(f"# {key}: {law.meta[key]}")
    lines.extend(f"{x!r} {(i + 1) / m!r}" for i, x in enumerate(t.tolist()))
    lines.append("")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines))


def load_oracle(path) -> ReferenceLaw:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = fh.read().splitlines()
    except FileNotFoundError:
        raise OracleMissingError(
            f"oracle table {path} not found; build it with `selfnorm oracle-build`"
        ) from None
    if not raw or raw[0] != f"# {_ORACLE_FORMAT}":
        raise OracleMissingError(f"{path} is not a {_ORACLE_FORMAT} table")
    meta: dict = {}
    body_at = 1
    for line in raw[1:]:
        if not line.startswith("# "):
            break
        body_at += 1
        key, _, val = line[2:].partition(": ")
        meta[key] = int(val) if val.lstrip("-").isdigit() else val
    table = np.array([float(line.split()[0]) for line in raw[body_at:] if line])
    if table.size == 0 or "kind" not in meta:
        raise OracleMissingError(f"{path} is truncated or missing its header")
    return _table_law(meta["kind"], table, meta)


# ---------------------------------------------------------------------------
# Kolmogorov-Smirnov machinery


def ks_statistic(sample, law: ReferenceLaw) -> float:
    """One-sample sup distance between the empirical CDF and a reference law."""
    s = np.sort(np.asarray(sample, dtype=float))
    m = s.size
    if m == 0:
        raise ParameterDomainError("empty sample")
    f = np.asarray(law.cdf(s), dtype=float)
    i = np.arange(1, m + 1)
    return float(max(np.max(i / m - f), np.max(f - (i - 1) / m)))


def ks_two_sample(a, b) -> float:
    """Two-sample sup distance between empirical CDFs."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    if a.size == 0 or b.size == 0:
        raise ParameterDomainError("empty sample")
    grid = np.concatenate([a, b])
    fa = np.searchsorted(a, grid, side="right") / a.size
    fb = np.searchsorted(b, grid, side="right") / b.size
    return float(np.abs(fa - fb).max())


# ---------------------------------------------------------------------------
# characteristic functions


def empirical_chf(samples, point) -> complex:
    """(1/m) sum exp(i (u a_j + w b_j)) over sample pairs (a_j, b_j)."""
    arr = np.asarray(samples, dtype=float)
    if arr.size == 0:
        raise ParameterDomainError("empty sample")
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ParameterDomainError(f"expected pairs of shape (m, 2), got {arr.shape}")
    u, w = float(point[0]), float(point[1])
    return complex(np.exp(1j * (u * arr[:, 0] + w * arr[:, 1])).mean())


@dataclass(frozen=True)
class TailConstants:
    """Levy density constants: P(X > y) tail behaves like (r/alpha) y^(-alpha)."""

    r: float
    s: float

    def __post_init__(self):
        if self.r < 0 or self.s < 0 or self.r + self.s <= 0:
            raise ParameterDomainError(f"need r, s >= 0 with r + s > 0, got r={self.r}, s={self.s}")


def tail_constants(spec: FamilySpec) -> TailConstants:
    """Two-sided Levy density constants of a declared family.

    The constant r is defined by density(x) ~ r x^(-alpha-1) as x -> +inf
    (equivalently alpha * lim x^alpha P(X > x)); all families here are
    symmetric so r = s.
    """
    a = spec.alpha
    if spec.kind == "SymStable":
        if a >= 2:
            raise ParameterDomainError("alpha = 2 stable is Gaussian: no Paretian tail")
        r = _gamma(a + 1.0) * math.sin(math.pi * a / 2.0) / math.pi * spec.scale**a
    elif spec.kind == "SymPareto":
        r = a / 2.0 * spec.scale**a
    elif spec.kind == "StudentT":
        r = _gamma((a + 1.0) / 2.0) * a ** (a / 2.0) / (math.sqrt(math.pi) * _gamma(a / 2.0)) * spec.scale**a
    else:
        raise ParameterDomainError(f"{spec.kind} has no Paretian tail")
    return TailConstants(r=float(r), s=float(r))


@dataclass(frozen=True)
class QuadSpec:
    """Tuning knobs of the oscillatory quadrature behind limit_chf."""

    rel_tol: float = 1e-10
    phase_per_panel: float = 1.5
    growth_per_panel: float = 0.25
    cutoff_floor: float = 12.0
    ibp_phase_floor: float = 40.0
    max_refinements: int = 7


def _cos_tail_const(alpha: float) -> float:
    # -int_0^inf (cos y - 1) y^(-a-1) dy = pi / (2 Gamma(1+a) sin(pi a/2))
    return math.pi / (2.0 * _gamma(1.0 + alpha) * math.sin(math.pi * alpha / 2.0))


def _j_closed_w_only(beta: float, alpha: float, p: float) -> complex:
    # int_0^inf (e^{i beta y^p} - 1) y^(-a-1) dy by substitution z = beta y^p
    b0 = alpha / p
    return (1.0 / p) * _gamma(-b0) * beta**b0 * complex(math.cos(math.pi * b0 / 2.0), -math.sin(math.pi * b0 / 2.0))


def _j_single_freq(delta: float, alpha: float) -> complex:
    # int_0^inf (e^{i delta y} - 1) y^(-a-1) dy for 0 < a < 1
    if delta == 0.0:
        return 0.0 + 0.0j
    mag = _gamma(-alpha) * abs(delta) ** alpha
    ph = math.pi * alpha / 2.0
    val = mag * complex(math.cos(ph), -math.sin(ph))
    return val if delta > 0 else val.conjugate()


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


def _gl_panels(f, edges: np.ndarray) -> complex:
    # fixed-order Gauss-Legendre on a batch of panels, fully vectorized
    a = edges[:-1][:, None]
    b = edges[1:][:, None]
    half = 0.5 * (b - a)
    y = 0.5 * (a + b) + half * _GL_NODES[None, :]
    vals = f(y)
    return complex((vals * _GL_WEIGHTS[None, :] * half).sum())


def _head_edges(y_lo: float, y_hi: float, beta: float, gamma: float, p: float,
                phase_step: float, growth: float) -> np.ndarray:
    # panel edges keeping both total phase and envelope variation small
    edges = [y_lo]
    y = y_lo
    while y < y_hi:
        dphi = p * beta * y ** (p - 1.0) + gamma
        step = min(phase_step / dphi, growth * y) if dphi > 0 else growth * y
        y = min(y + step, y_hi)
        edges.append(y)
    return np.array(edges)


def _ibp_tail(coef: complex, sign: float, beta: float, gamma: float,
              alpha: float, p: float, y0: float, n_terms: int = 6) -> tuple[complex, float]:
    """Integration-by-parts tail of coef * int_{y0}^inf e^{i phi} y^(-a-1) dy.

    phi(y) = beta y^p + sign * gamma y. Iterates B_{j+1} = i (B_j / phi')'
    symbolically: each B_j is a sum of c * y^e / phi'^m terms, closed under
    differentiation since phi'' = (p - 1)(phi' - sign gamma) / y.
    Returns (value, error estimate from the first omitted order).
    """
    sg = sign * gamma
    phi = beta * y0**p + sg * y0
    dphi = p * beta * y0 ** (p - 1.0) + sg

    def over_dphi(terms):
        return {(e, m + 1): c for (e, m), c in terms.items()}

    def ev(terms):
        return sum(c * y0**e / dphi**m for (e, m), c in terms.items())

    e_iphi = complex(math.cos(phi), math.sin(phi))
    terms: dict = {(-alpha - 1.0, 0): 1.0 + 0.0j}
    total = 0.0 + 0.0j
    for _ in range(n_terms):
        quot = over_dphi(terms)
        total += 1j * ev(quot) * e_iphi
        nxt: dict = {}
        for (e, m), c in quot.items():
            nxt[(e - 1.0, m)] = nxt.get((e - 1.0, m), 0.0) + 1j * c * (e - m * (p - 1.0))
            nxt[(e - 1.0, m + 1)] = nxt.get((e - 1.0, m + 1), 0.0) + 1j * c * m * (p - 1.0) * sg
        terms = nxt
    err = abs(ev(over_dphi(terms))) * y0 / (alpha + n_terms)
    return coef * total, abs(coef) * err


_PANEL_BUDGET = 300_000


def _j_quad_once(beta: float, gamma: float, alpha: float, p: float,
                 phase_step: float, growth: float, cutoff: float,
                 quad: QuadSpec) -> tuple[complex, float, float]:
    def f(y):
        # e^(i th) - 1 = -2 sin^2(th/2) + i sin th, cancellation-free near 0
        th = beta * y**p
        osc = -2.0 * np.sin(0.5 * th) ** 2 + 1j * np.sin(th)
        return osc * np.cos(gamma * y) * y ** (-alpha - 1.0)

    # the minus-frequency piece e^{i(beta y^p - gamma y)} has a stationary
    # point at ystat with contribution ~ 0.5 sqrt(2 pi / phi'') ystat^(-a-1);
    # if negligible, book it as tail error; if affordable, integrate through
    # it; otherwise add the leading stationary-phase value analytically (its
    # next-order correction is ~ 1/(phi'' ystat^2) relative, tiny exactly when
    # integrating through is unaffordable) and keep the cutoff well below it
    hump_err = 0.0
    sp_term = None
    try:
        ystat = (gamma / (p * beta)) ** (1.0 / (p - 1.0))
    except OverflowError:
        ystat = math.inf  # stationary point beyond any cutoff: hump vanishes
    if math.isfinite(ystat) and ystat > 0:
        # log space: the direct product inf * 0 -> nan for extreme ystat
        log_ystat = math.log(ystat)
        log_phi2 = math.log(p * abs(p - 1.0) * beta) + (p - 2.0) * log_ystat
        log_hump = (math.log(0.5) + 0.5 * (math.log(2.0 * math.pi) - log_phi2)
                    - (alpha + 1.0) * log_ystat)
        hump = math.exp(log_hump) if log_hump < 700.0 else math.inf
        scale0 = max(_cos_tail_const(alpha) * gamma**alpha,
                     abs(_j_closed_w_only(beta, alpha, p)), 1e-6)
        if hump <= 0.01 * quad.rel_tol * scale0 and cutoff < ystat / 4.0:
            hump_err = hump
        else:
            through = max(cutoff, 4.0 * ystat)
            panels = (beta * through**p + 2.0 * gamma * through) / phase_step
            if panels <= 0.9 * _PANEL_BUDGET:
                cutoff = through
            else:
                theta = (beta * ystat**p - gamma * ystat
                         + math.copysign(0.25 * math.pi, p - 1.0))
                sp_term = hump * complex(math.cos(theta), math.sin(theta))
                hump_err = 10.0 * math.exp(log_hump - log_phi2 - 2.0 * log_ystat)
                cutoff = min(cutoff, ystat / 4.0)
    # both exponential tail pieces must oscillate fast enough at the cutoff
    # for the integration-by-parts asymptotics
    while cutoff < 1e12:
        d_plus = p * beta * cutoff ** (p - 1.0) + gamma
        d_minus = abs(p * beta * cutoff ** (p - 1.0) - gamma)
        if min(d_plus, d_minus) * cutoff >= quad.ibp_phase_floor:
            break
        if sp_term is not None and 2.0 * cutoff > ystat / 4.0:
            break
        cutoff *= 2.0

    n_panels = (beta * cutoff**p + 2.0 * gamma * cutoff) / phase_step \
        + 2.0 * math.log(max(cutoff, 2.0)) / math.log1p(growth)
    if n_panels > _PANEL_BUDGET:
        raise InternalConsistencyError(
            f"oscillatory quadrature needs ~{n_panels:.0f} panels at "
            f"beta={beta:g}, gamma={gamma:g}, alpha={alpha:g}, p={p:g}; "
            "parameters are too extreme for the tail expansion")

    # singular origin: substitute y = z^m so the integrand vanishes at 0
    m = max(1, math.ceil(2.0 / (p - alpha)))
    try:
        bturn = beta ** (-1.0 / p)
    except OverflowError:
        bturn = math.inf  # beta phase turns on beyond any relevant scale
    y0 = min(1.0, cutoff, bturn, 0.5 / gamma)

    def f_sub(z):
        y = z**m
        return f(y) * m * z ** (m - 1.0)

    z_edges = np.linspace(0.0, y0 ** (1.0 / m), 9)
    total = _gl_panels(f_sub, z_edges)
    total += _gl_panels(f, _head_edges(y0, cutoff, beta, gamma, p, phase_step, growth))

    # the pure-cosine tail piece is removed exactly (its 2-term expansion
    # decays too slowly):
    #   -int_Y^inf cos(gy) y^(-a-1) dy = C(a) g^a + H(Y) - Y^(-a)/a,
    #   H(Y) = int_0^Y (cos(gy) - 1) y^(-a-1) dy
    def h(y):
        return -2.0 * np.sin(0.5 * gamma * y) ** 2 * y ** (-alpha - 1.0) + 0.0j

    mh = max(1, math.ceil(2.0 / (2.0 - alpha)))
    y0h = min(1.0, cutoff, 0.5 / gamma)

    def h_sub(z):
        y = z**mh
        return h(y) * mh * z ** (mh - 1.0)

    zh_edges = np.linspace(0.0, y0h ** (1.0 / mh), 9)
    h_val = _gl_panels(h_sub, zh_edges)
    h_val += _gl_panels(h, _head_edges(y0h, cutoff, 0.0, gamma, p, phase_step, growth))
    total += _cos_tail_const(alpha) * gamma**alpha + h_val.real - cutoff ** (-alpha) / alpha

    err = hump_err
    for coef, sign in ((0.5, 1.0), (0.5, -1.0)):
        v, e = _ibp_tail(coef, sign, beta, gamma, alpha, p, cutoff)
        total += v
        err += e
    if sp_term is not None:
        # branch coefficient 0.5 times the stationary-phase value 2 hump e^{i theta}
        total += sp_term
    return total, err, cutoff


def _cross_bound(beta: float, gamma: float, alpha: float, p: float) -> float:
    # rigorous bound on |int (e^{i beta y^p} - 1)(cos(gamma y) - 1) y^(-a-1) dy|
    # from |e^{i th} - 1| <= min(|th|, 2) and |cos th - 1| <= min(th^2/2, 2),
    # integrated piecewise across the two phase turn-on scales (log space: the
    # direct powers overflow long before the bound stops being meaningful)
    lb = math.log(beta)
    lg = math.log(gamma)
    l_yb = -lb / p

    def ex(x: float) -> float:
        return math.inf if x > 700.0 else math.exp(x)

    if l_yb <= -lg:
        head = ex(2.0 * lg + (2.0 - alpha) * l_yb) / (2.0 * (p + 2.0 - alpha))
        mid = ex(alpha * lg) / (2.0 - alpha)
        tail = 4.0 * ex(alpha * lg) / alpha
    else:
        head = ex(lb - (p - alpha) * lg) / (2.0 * (p + 2.0 - alpha))
        mid = 2.0 * ex(alpha / p * lb) / (p - alpha)
        tail = 4.0 * ex(alpha / p * lb) / alpha
    return head + mid + tail


def _j_quad(beta: float, gamma: float, alpha: float, p: float, quad: QuadSpec) -> complex:
    closed = _j_closed_w_only(beta, alpha, p)
    scale = max(abs(closed), _cos_tail_const(alpha) * gamma**alpha, 1e-6)
    if _cross_bound(beta, gamma, alpha, p) <= 0.1 * quad.rel_tol * scale:
        # both phases dormant at every reachable cutoff: the cosine factor is
        # 1 to within the bound and the w-only closed form applies
        return closed
    # fixed panel density (already near machine precision per panel); each
    # refinement doubles the cutoff the previous pass actually used (the
    # stationary-point clamp and phase-floor loop may have grown it), so the
    # integration-by-parts tail error shrinks geometrically until successive
    # estimates agree
    cutoff = quad.cutoff_floor
    prev = None
    for _ in range(quad.max_refinements):
        est, tail_err, cutoff = _j_quad_once(
            beta, gamma, alpha, p,
            phase_step=quad.phase_per_panel,
            growth=quad.growth_per_panel,
            cutoff=cutoff,
            quad=quad,
        )
        if prev is not None:
            scale = max(abs(est), _cos_tail_const(alpha) * gamma**alpha, 1e-6)
            if abs(est - prev) + tail_err <= quad.rel_tol * scale:
                return est
        prev = est
        cutoff *= 2.0
    raise InternalConsistencyError(
        f"chf quadrature did not converge to rel_tol={quad.rel_tol:g} at "
        f"beta={beta:g}, gamma={gamma:g}, alpha={alpha:g}, p={p:g}")


def chf_exponent(u: float, w: float, alpha: float, p: float, tails: TailConstants,
                 t1: float = 1.0, quad: QuadSpec | None = None) -> complex:
    """The exponent c(u, w) with chf = exp(c); non-positive real part."""
    alpha = float(alpha)
    p = float(p)
    if not 0 < alpha < 2:
        raise ParameterDomainError(f"alpha must lie in (0, 2), got {alpha}")
    if not p > alpha:
        raise ParameterDomainError(f"need p > alpha (the integral diverges at 0), got p={p}, alpha={alpha}")
    if tails.r != tails.s:
        raise ParameterDomainError("skewed tails (r != s) are not supported")
    if not 0 < t1 <= 1:
        raise ParameterDomainError(f"t1 must lie in (0, 1], got {t1}")
    if quad is None:
        quad = QuadSpec()
    r = tails.r
    gamma = abs(float(u)) * t1 ** (1.0 / alpha)
    beta = abs(float(w)) * t1 ** (p / alpha)

    c_cos = -_cos_tail_const(alpha) * gamma**alpha if gamma > 0 else 0.0
    if beta == 0.0:
        j = 0.0 + 0.0j
    elif gamma == 0.0:
        j = _j_closed_w_only(beta, alpha, p)
    elif p == 1.0:
        # product-to-sum: every term is a pure frequency with a closed form
        j = 0.5 * (_j_single_freq(beta + gamma, alpha) + _j_single_freq(beta - gamma, alpha)) \
            - 0.5 * (_j_single_freq(gamma, alpha) + _j_single_freq(-gamma, alpha))
    else:
        j = _j_quad(beta, gamma, alpha, p, quad)
    c = 2.0 * r * (c_cos + j)
    if w < 0:
        c = c.conjugate()
    return complex(c)


def limit_chf(u: float, w: float, alpha: float, p: float, tails: TailConstants,
              t1: float = 1.0, quad: QuadSpec | None = None) -> complex:
    """Limiting joint chf value exp(c(u, w)); modulus at most 1."""
    c = chf_exponent(u, w, alpha, p, tails, t1, quad)
    return complex(np.exp(c))


def dispersion_matrix(t_grid) -> np.ndarray:
    """Brownian dispersion matrix v_ij = min(t_i, t_j) on an increasing grid."""
    t = np.asarray(t_grid, dtype=float)
    if t.size == 0:
        raise ParameterDomainError("empty time grid")
    if np.any(t <= 0) or np.any(t > 1) or np.any(np.diff(t) <= 0):
        raise ParameterDomainError("t grid must be strictly increasing within (0, 1]")
    return np.minimum.outer(t, t)
