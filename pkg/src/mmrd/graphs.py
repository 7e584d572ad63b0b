"""Scalar maximal monotone graphs.

A graph is represented by a closed domain interval, a single-valued
nondecreasing selection ``g`` on that interval, and optional vertical
segments attached at finite endpoints: ``(-inf, g(lo)]`` at the left
endpoint and ``[g(hi), +inf)`` at the right one.  This covers every graph
used by the boundary/interior laws in this package (Dirichlet, Neumann,
power-law flux, their one-sided extensions to ``[0, inf)``, and obstacle
graphs); general multivalued behaviour in the interior is out of scope.

The central operation is the resolvent ``r -> x`` solving
``x + lam * gamma(x) ∋ r``, available in closed form for the built-in
kinds and by monotone bisection otherwise, including for weighted sums of
several graphs (needed by boundary rows of the implicit stepper, where the
interior and boundary graphs act on the same node).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigurationError, InvariantViolation

__all__ = [
    "MonotoneGraph",
    "GraphSpec",
    "DominationVerdict",
    "make_graph",
    "zero_graph",
    "linear_graph",
    "power_graph",
    "dirichlet_graph",
    "extended_power_graph",
    "extended_neumann_graph",
    "obstacle_graph",
    "custom_graph",
    "extend_nonneg",
    "eval_graph",
    "minimal_section",
    "resolvent",
    "resolve_terms",
    "yosida",
    "dominates",
]

BISECT_TOL = 1e-12
BISECT_MAX_ITER = 200

# Kinds whose resolvents / value sets are known in closed form.  Domination
# verdicts are only certified (as opposed to "inconclusive") for these.
CLOSED_FORM_KINDS = frozenset(
    {"zero", "linear", "power", "dirichlet", "extended_power", "extended_neumann", "obstacle"}
)


@dataclass(frozen=True)
class MonotoneGraph:
    """A maximal monotone graph on R x R (see module docstring).

    ``selection`` must be vectorized (ndarray in, ndarray out), nondecreasing
    on the closed domain, and evaluable at finite endpoints where it returns
    the one-sided limit.
    """

    domain_lo: float
    domain_hi: float
    selection: Callable[[np.ndarray], np.ndarray]
    seg_lo: bool
    seg_hi: bool
    kind: str
    params: tuple[float, ...] = ()

    def __post_init__(self):
        if not self.domain_lo <= self.domain_hi:
            raise ConfigurationError(f"empty graph domain [{self.domain_lo}, {self.domain_hi}]")
        if self.seg_lo and math.isinf(self.domain_lo):
            raise ConfigurationError("vertical segment attached at an infinite left endpoint")
        if self.seg_hi and math.isinf(self.domain_hi):
            raise ConfigurationError("vertical segment attached at an infinite right endpoint")

    def contains(self, r: float) -> bool:
        return self.domain_lo <= r <= self.domain_hi

    def g(self, r):
        """Selection value(s); accepts scalars or arrays."""
        return self.selection(np.asarray(r, dtype=float))


@dataclass(frozen=True)
class GraphSpec:
    """Serializable constructor recipe for a MonotoneGraph."""

    kind: str
    alpha: float = 1.0
    q: float = 2.0
    level: float = 1.0
    slope: float = 1.0

    def to_dict(self) -> dict:
        d: dict = {"kind": self.kind}
        if self.kind in ("power", "extended_power"):
            d["alpha"] = self.alpha
            d["q"] = self.q
        elif self.kind == "obstacle":
            d["level"] = self.level
        elif self.kind == "linear":
            d["slope"] = self.slope
        return d


def zero_graph() -> MonotoneGraph:
    return MonotoneGraph(-math.inf, math.inf, lambda r: np.zeros_like(r), False, False, "zero")


def linear_graph(slope: float = 1.0) -> MonotoneGraph:
    if slope < 0:
        raise ConfigurationError(f"linear graph needs slope >= 0, got {slope}")
    return MonotoneGraph(-math.inf, math.inf, lambda r: slope * r, False, False, "linear", (slope,))


def power_graph(alpha: float, q: float) -> MonotoneGraph:
    """g(r) = alpha * sign(r) * |r|^(q-1) on all of R."""
    _check_power_params(alpha, q)
    return MonotoneGraph(
        -math.inf,
        math.inf,
        lambda r: alpha * np.sign(r) * np.abs(r) ** (q - 1.0),
        False,
        False,
        "power",
        (alpha, q),
    )


def dirichlet_graph() -> MonotoneGraph:
    """Domain {0}, value set R at 0: the homogeneous Dirichlet boundary law."""
    return MonotoneGraph(0.0, 0.0, lambda r: np.zeros_like(r), True, True, "dirichlet")


def extended_power_graph(alpha: float, q: float) -> MonotoneGraph:
    """Power-law flux restricted to [0, inf) with value set (-inf, 0] at 0."""
    _check_power_params(alpha, q)
    return MonotoneGraph(
        0.0,
        math.inf,
        lambda r: alpha * np.maximum(r, 0.0) ** (q - 1.0),
        True,
        False,
        "extended_power",
        (alpha, q),
    )


def extended_neumann_graph() -> MonotoneGraph:
    """Zero flux on (0, inf) with value set (-inf, 0] at 0."""
    return MonotoneGraph(0.0, math.inf, lambda r: np.zeros_like(r), True, False, "extended_neumann")


def obstacle_graph(level: float) -> MonotoneGraph:
    """Subdifferential of the indicator of [-level, level]."""
    if level <= 0:
        raise ConfigurationError(f"obstacle graph needs level > 0, got {level}")
    return MonotoneGraph(-level, level, lambda r: np.zeros_like(r), True, True, "obstacle", (level,))


def custom_graph(
    selection: Callable[[np.ndarray], np.ndarray],
    domain_lo: float = -math.inf,
    domain_hi: float = math.inf,
    seg_lo: bool = False,
    seg_hi: bool = False,
) -> MonotoneGraph:
    return MonotoneGraph(domain_lo, domain_hi, selection, seg_lo, seg_hi, "custom")


def extend_nonneg(base: MonotoneGraph) -> MonotoneGraph:
    """Restrict ``base`` to [0, inf) and attach (-inf, 0] to its value set at 0.

    Requires 0 in base's domain with g(0) = 0 (i.e. 0 in gamma(0)); the result
    is again monotone and agrees with ``base`` on r > 0.
    """
    if not base.contains(0.0) or abs(float(base.g(0.0))) > 1e-14:
        raise ConfigurationError("extension requires a base graph with 0 in gamma(0)")
    sel = base.selection
    return MonotoneGraph(
        0.0,
        base.domain_hi,
        lambda r: sel(np.maximum(r, 0.0)),
        True,
        base.seg_hi,
        "custom",
    )


def _check_power_params(alpha: float, q: float) -> None:
    if q <= 1:
        raise ConfigurationError(f"power graph needs exponent q > 1, got {q}")
    if alpha < 0:
        raise ConfigurationError(f"power graph needs alpha >= 0, got {alpha}")


def make_graph(spec: GraphSpec) -> MonotoneGraph:
    """Build the graph described by ``spec``; raises ConfigurationError on bad parameters."""
    kind = spec.kind
    if kind == "zero":
        return zero_graph()
    if kind == "linear":
        return linear_graph(spec.slope)
    if kind == "power":
        return power_graph(spec.alpha, spec.q)
    if kind == "dirichlet":
        return dirichlet_graph()
    if kind == "extended_power":
        return extended_power_graph(spec.alpha, spec.q)
    if kind == "extended_neumann":
        return extended_neumann_graph()
    if kind == "obstacle":
        return obstacle_graph(spec.level)
    raise ConfigurationError(f"unknown graph kind {kind!r}")


# ---------------------------------------------------------------------------
# set-valued evaluation
# ---------------------------------------------------------------------------


def _value_bounds(G: MonotoneGraph, r: float) -> tuple[float, float]:
    """(inf, sup) of gamma(r) for r in the closed domain."""
    g = float(G.g(r))
    lo = -math.inf if (r == G.domain_lo and G.seg_lo) else g
    hi = math.inf if (r == G.domain_hi and G.seg_hi) else g
    return lo, hi


def eval_graph(G: MonotoneGraph, r: float) -> tuple[float, float] | None:
    """Value set gamma(r) as a closed interval (vmin, vmax), or None if empty.

    Endpoints may be infinite when a vertical segment is attached.
    """
    if not G.contains(r):
        return None
    return _value_bounds(G, r)


def minimal_section(G: MonotoneGraph, r: float) -> float:
    """Minimal-absolute-value element of gamma(r); used where a single flux
    value must be reported for a multivalued graph."""
    iv = eval_graph(G, r)
    if iv is None:
        raise InvariantViolation(f"value requested outside graph domain: r={r}")
    vmin, vmax = iv
    if vmin <= 0.0 <= vmax:
        return 0.0
    return vmin if vmin > 0.0 else vmax


# ---------------------------------------------------------------------------
# resolvents
# ---------------------------------------------------------------------------


def _power_root(t: np.ndarray, beta: float, q: float) -> np.ndarray:
    """Solve xi + beta * xi^(q-1) = t for xi >= 0, elementwise (t >= 0).

    For q >= 2 the map is convex with bounded slope near 0, so Newton from
    xi = t converges monotonically; for 1 < q < 2 the slope of xi^(q-1) is
    unbounded at 0 and monotone bisection is used instead.
    """
    if beta == 0.0:
        return t.copy()
    if q == 2.0:
        return t / (1.0 + beta)
    if q == 3.0:
        # stable root of beta*xi^2 + xi - t = 0
        return 2.0 * t / (1.0 + np.sqrt(1.0 + 4.0 * beta * t))
    if q > 2.0:
        xi = t.copy()
        for _ in range(60):
            f = xi + beta * xi ** (q - 1.0) - t
            xi_new = np.maximum(xi - f / (1.0 + beta * (q - 1.0) * xi ** (q - 2.0)), 0.0)
            if np.max(np.abs(xi_new - xi)) <= BISECT_TOL:
                return xi_new
            xi = xi_new
        return xi
    lo = np.zeros_like(t)
    hi = t.copy()
    for _ in range(BISECT_MAX_ITER):
        if np.max(hi - lo) <= BISECT_TOL:
            break
        mid = 0.5 * (lo + hi)
        high = mid + beta * mid ** (q - 1.0) > t
        hi = np.where(high, mid, hi)
        lo = np.where(high, lo, mid)
    return 0.5 * (lo + hi)


def _merge_terms(terms: Sequence[tuple[float, MonotoneGraph]]) -> list[tuple[float, MonotoneGraph]]:
    merged: list[tuple[float, MonotoneGraph]] = []
    for lam, G in terms:
        if lam < 0:
            raise ConfigurationError(f"graph weight must be >= 0, got {lam}")
        if lam == 0.0 or G.kind == "zero":
            continue
        for i, (lam0, G0) in enumerate(merged):
            if G0 is G:
                merged[i] = (lam0 + lam, G0)
                break
        else:
            merged.append((lam, G))
    return merged


def resolve_terms(r, terms: Sequence[tuple[float, MonotoneGraph]]) -> np.ndarray:
    """Solve x + sum_i lam_i * gamma_i(x) ∋ r elementwise.

    ``terms`` is a sequence of (lam_i, graph_i) with lam_i >= 0.  Raises
    InvariantViolation when some entry of ``r`` is not attained (the graph
    sum is then not a maximal monotone representation).
    """
    r = np.asarray(r, dtype=float)
    terms = _merge_terms(terms)
    if not terms:
        return r.copy()
    if len(terms) == 1:
        lam, G = terms[0]
        k = G.kind
        if k == "linear":
            return r / (1.0 + lam * G.params[0])
        if k == "dirichlet":
            return np.zeros_like(r)
        if k == "obstacle":
            return np.clip(r, -G.params[0], G.params[0])
        if k == "extended_neumann":
            return np.maximum(r, 0.0)
        if k == "power":
            alpha, q = G.params
            return np.sign(r) * _power_root(np.abs(r), lam * alpha, q)
        if k == "extended_power":
            alpha, q = G.params
            return np.where(r <= 0.0, 0.0, _power_root(np.maximum(r, 0.0), lam * alpha, q))
    return _resolve_generic(r, terms)


def _resolve_generic(r: np.ndarray, terms: list[tuple[float, MonotoneGraph]]) -> np.ndarray:
    lo = max(G.domain_lo for _, G in terms)
    hi = min(G.domain_hi for _, G in terms)
    if lo > hi:
        raise ConfigurationError("graphs with disjoint domains combined in one inclusion")

    def hsum(x: np.ndarray) -> np.ndarray:
        acc = x.astype(float, copy=True)
        for lam, G in terms:
            acc += lam * G.selection(x)
        return acc

    def bounds_at(point: float) -> tuple[float, float]:
        vmin = vmax = point
        for lam, G in terms:
            b_lo, b_hi = _value_bounds(G, point)
            vmin += lam * b_lo
            vmax += lam * b_hi
        return vmin, vmax

    x = np.empty_like(r)
    solve = np.ones(r.shape, dtype=bool)

    if lo == hi:
        vmin, vmax = bounds_at(lo)
        if np.any((r < vmin) | (r > vmax)):
            bad = r[(r < vmin) | (r > vmax)].flat[0]
            raise InvariantViolation(
                f"inclusion has no solution at r={bad}: graph not maximal at {lo}"
            )
        x.fill(lo)
        return x

    if math.isfinite(lo):
        vmin_lo, vmax_lo = bounds_at(lo)
        cap = r <= vmax_lo
        if np.any(cap & (r < vmin_lo)):
            bad = r[cap & (r < vmin_lo)].flat[0]
            raise InvariantViolation(
                f"inclusion has no solution at r={bad}: graph not maximal at {lo}"
            )
        x[cap] = lo
        solve &= ~cap
    if math.isfinite(hi):
        vmin_hi, vmax_hi = bounds_at(hi)
        cap = solve & (r >= vmin_hi)
        if np.any(cap & (r > vmax_hi)):
            bad = r[cap & (r > vmax_hi)].flat[0]
            raise InvariantViolation(
                f"inclusion has no solution at r={bad}: graph not maximal at {hi}"
            )
        x[cap] = hi
        solve &= ~cap
    if not np.any(solve):
        return x

    rs = r[solve]
    # bracket the strictly increasing x + sum lam*g(x)
    if math.isfinite(lo):
        a = np.full(rs.shape, lo)
    else:
        a = np.minimum(rs, 0.0)
        w = 1.0
        for _ in range(BISECT_MAX_ITER):
            open_ = hsum(a) > rs
            if not np.any(open_):
                break
            a = np.where(open_, a - w, a)
            w *= 8.0
        else:
            raise InvariantViolation("failed to bracket resolvent from below")
    if math.isfinite(hi):
        b = np.full(rs.shape, hi)
    else:
        b = np.maximum(rs, 0.0)
        w = 1.0
        for _ in range(BISECT_MAX_ITER):
            open_ = hsum(b) < rs
            if not np.any(open_):
                break
            b = np.where(open_, b + w, b)
            w *= 8.0
        else:
            raise InvariantViolation("failed to bracket resolvent from above")

    for _ in range(BISECT_MAX_ITER):
        if np.max(b - a) <= BISECT_TOL:
            break
        mid = 0.5 * (a + b)
        stalled = (mid <= a) | (mid >= b)
        high = hsum(mid) > rs
        a2 = np.where(high, a, mid)
        b2 = np.where(high, mid, b)
        a = np.where(stalled, a, a2)
        b = np.where(stalled, b, b2)
        if np.all(stalled):
            break
    x[solve] = 0.5 * (a + b)
    return x


def resolvent(G: MonotoneGraph, lam: float, r: float) -> float:
    """The unique x in the closed domain with x + lam * gamma(x) ∋ r (lam > 0)."""
    if lam <= 0:
        raise ConfigurationError(f"resolvent needs lam > 0, got {lam}")
    return float(resolve_terms(np.asarray([r], dtype=float), [(lam, G)])[0])


def yosida(G: MonotoneGraph, lam: float, r: float) -> float:
    """Yosida approximation (r - resolvent(G, lam, r)) / lam."""
    return (r - resolvent(G, lam, r)) / lam


# ---------------------------------------------------------------------------
# domination (hypothesis checks for the ordering of boundary/interior laws)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DominationVerdict:
    """Outcome of ``dominates``: status in {'holds', 'fails', 'inconclusive'},
    mode in {'i', 'ii', 'iii'} when it holds, witness (r1, r2, inf1, sup2) on failure."""

    status: str
    mode: str | None = None
    witness: tuple | None = None

    @property
    def holds(self) -> bool:
        return self.status == "holds"


def _sample_domain(G: MonotoneGraph, span: float, n: int) -> np.ndarray:
    lo = max(G.domain_lo, -span)
    hi = min(G.domain_hi, span)
    if lo > hi:  # window missed the domain; fall back to the nearest endpoint
        lo = hi = G.domain_lo if G.domain_lo > span else G.domain_hi
    pts = [np.linspace(lo, hi, n)]
    for end in (G.domain_lo, G.domain_hi):
        if math.isfinite(end):
            pts.append(np.asarray([end]))
    return np.unique(np.concatenate(pts))


def dominates(
    G1: MonotoneGraph,
    G2: MonotoneGraph,
    r_grid: tuple[float, int] | None = None,
    modes: Sequence[str] = ("i", "iii", "ii"),
    tol: float = 1e-9,
) -> DominationVerdict:
    """Check whether the pair (G1, G2) satisfies one of the ordering modes.

    (i)   the graphs are identical;
    (iii) sup D(G1) <= inf D(G2) (disjoint/touching domains, G1 below G2);
    (ii)  sup gamma2(r2) <= inf gamma1(r1) whenever r1 > r2 in the
          respective domains (checked on a sample grid).

    ``r_grid`` is (span, count) for the sampling window per graph.  For
    graphs without closed-form kinds a passing sampled check is reported as
    'inconclusive' rather than 'holds'.
    """
    span, count = r_grid if r_grid is not None else (50.0, 201)

    if "i" in modes:
        same_structure = (
            G1.kind == G2.kind
            and G1.kind != "custom"
            and G1.params == G2.params
            and (G1.domain_lo, G1.domain_hi, G1.seg_lo, G1.seg_hi)
            == (G2.domain_lo, G2.domain_hi, G2.seg_lo, G2.seg_hi)
        )
        if G1 is G2 or same_structure:
            return DominationVerdict("holds", "i")

    if "iii" in modes and G1.domain_hi <= G2.domain_lo:
        return DominationVerdict("holds", "iii")

    if "ii" not in modes:
        return DominationVerdict("fails")

    r1s = _sample_domain(G1, span, count)
    r2s = _sample_domain(G2, span, count)
    inf1 = np.array([_value_bounds(G1, float(r))[0] for r in r1s])
    sup2 = np.array([_value_bounds(G2, float(r))[1] for r in r2s])
    # monotone running max of sup2 over r2 < r1
    run_max = np.maximum.accumulate(sup2)
    pos = np.searchsorted(r2s, r1s, side="left") - 1  # last r2 strictly below r1
    for i, j in enumerate(pos):
        if j < 0:
            continue
        if sup2[j] > inf1[i] + tol or run_max[j] > inf1[i] + tol:
            k = int(np.argmax(sup2[: j + 1]))
            return DominationVerdict(
                "fails", None, (float(r1s[i]), float(r2s[k]), float(inf1[i]), float(sup2[k]))
            )
    certified = G1.kind in CLOSED_FORM_KINDS and G2.kind in CLOSED_FORM_KINDS
    return DominationVerdict("holds" if certified else "inconclusive", "ii" if certified else None)
