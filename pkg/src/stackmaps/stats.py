"""Map observables, exact degree/subtree/urn laws, and the Monte-Carlo
experiment harness.

The harness is seed-deterministic: replica r of an experiment run with seed
s draws from Generator(PCG64(SeedSequence((s, r)))), and all reductions are
order-independent, so reports are bit-for-bit reproducible.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, log

import numpy as np
from scipy import stats as sps

from . import maps as maps_mod
from . import trees as trees_mod
from .counting import count_forests, count_trees
from .maps import StackMap, distance_matrix
from .passage import GammaState, gamma_prime_literal
from .trees import OrderedTree, rng_from_seed

#: renewal rate of the block count on uniform ternary letters
GAMMA_RATE_TRI = 2.0 / 11.0
#: renewal rate of the two-letter block count (both variants), derived from
#: the mean block length 5; the constant 1/3 is kept as the alternative
#: reference
GAMMA_RATE_QUAD_DERIVED = 1.0 / 5.0
GAMMA_RATE_QUAD_CLAIMED = 1.0 / 3.0


# ---------------------------------------------------------------------------
# map observables


def profile(m: StackMap) -> list[tuple[int, int]]:
    """Cumulative vertex counts by distance to the root vertex."""
    d = distance_matrix(m, sources=[0])[0]
    out = []
    for t in range(int(d.max()) + 1):
        out.append((t, int((d <= t).sum())))
    return out


def radius(m: StackMap) -> int:
    """Largest distance from the root vertex."""
    return int(distance_matrix(m, sources=[0])[0].max())


def default_scale(family: str, n_internal: int) -> float:
    if family == maps_mod.TRIANGULATION:
        return GAMMA_RATE_TRI * math.sqrt(3.0 * n_internal / 2.0)
    return GAMMA_RATE_QUAD_DERIVED * math.sqrt(2.0 * n_internal)


def normalized_distance_matrix(m: StackMap, grid, scale: float | None = None):
    """Pairwise BFS distances between the internal vertices of lex rank
    floor(n*s) for s in grid, divided by ``scale``."""
    words = sorted(m.word_of(v) for v in m.internal_vertex_ids())
    n = len(words)
    ids = [m.vertex_of(words[min(int(n * s), n - 1)]) for s in grid]
    if scale is None:
        scale = default_scale(m.family, n)
    sub = distance_matrix(m, sources=ids)[:, ids]
    return sub / scale


# ---------------------------------------------------------------------------
# exact distributions


def _log_comb(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def pmf_limit_deg_first(k: int) -> float:
    """Large-n degree law of the first-inserted vertex under the uniform
    law: P(X = k+3)."""
    if k <= 0:
        return 0.0
    lg = (
        math.log(k / (k + 3))
        + _log_comb(2 * k + 2, k)
        + (k + 3) * math.log(2)
        - (2 * k + 3) * math.log(3)
    )
    return math.exp(lg)


def pmf_limit_deg_uniform(k: int) -> float:
    """Large-n degree law of a uniformly chosen internal vertex under the
    uniform law: P(Y = k+3)."""
    if k < 0:
        return 0.0
    lg = (
        -math.log(k + 3)
        + _log_comb(2 * k + 2, k)
        + (k + 3) * math.log(2)
        - (2 * k + 2) * math.log(3)
    )
    return math.exp(lg)


def pmf_finite_deg_first_exact(n: int, k: int) -> Fraction:
    """Degree law of the first-inserted vertex of a uniform triangulation
    with 2n faces: P(deg = k+3), exact.

    The internal nodes contributing to the degree form a 3-root binary
    forest grafted on the tree root; the complement is a k-root ternary
    forest.
    """
    if not 0 <= k < n - 1:
        return Fraction(0)
    num = count_forests(2, 3, 2 * k + 3) * count_forests(3, k, 3 * n - 2 * k - 6)
    return Fraction(num, count_trees(3, n - 1))


def pmf_finite_deg_first(n: int, k: int) -> float:
    return float(pmf_finite_deg_first_exact(n, k))


def pmf_subtree_size(k: int) -> float:
    """Limit law of the fringe-subtree size over a uniform internal node of
    a large uniform ternary tree: P(size = 3k+1), supported on k >= 1
    (internal nodes carry at least their three children)."""
    if k < 1:
        return 0.0
    lg = (
        (2 * k + 1) * math.log(2)
        - 3 * k * math.log(3)
        - math.log(3 * k + 1)
        + _log_comb(3 * k + 1, k)
    )
    return math.exp(lg)


def _gbinom(a: Fraction, b: int) -> Fraction:
    """Generalized binomial a(a-1)...(a-b+1)/b!."""
    num = Fraction(1)
    for i in range(b):
        num *= a - i
    return num / math.factorial(b)


def pmf_urn_exact(n: int, j: int, k: int) -> Fraction:
    """Degree law of the j-th inserted vertex after n insertion rounds of
    the growth law: P(deg = k+3), for n > j and 0 <= k <= n-j.  Exact
    rational evaluation of the urn formula (half-integer gamma ratios are
    rational)."""
    if not (n > j >= 1 and 0 <= k <= n - j):
        return Fraction(0)
    # Gamma(n-j+1) * Gamma(j+1/2) / Gamma(n+1/2)
    pref = Fraction(math.factorial(n - j))
    for i in range(j, n):
        pref /= Fraction(2 * i + 1, 2)
    s = Fraction(0)
    for i in range(k + 1):
        s += (-1) ** i * comb(k, i) * _gbinom(Fraction(2 * n - i - 4, 2), n - j)
    return pref * comb(k + 2, k) * s


def urn_index_shift(max_n: int = 5) -> int:
    """Compare pmf_urn_exact against exhaustive history enumeration and
    report the time-index shift d such that pmf_urn_exact(n-d, j, k)
    reproduces the degree law of vertex j in the map after n-1 insertions
    (the map with 2n faces).  Raises if no shift in {0, 1, 2} matches."""
    for d in (0, 1, 2):
        if all(
            pmf_urn_exact(n - d, j, k) == p
            for n in range(3, max_n + 1)
            for j in range(1, n - 1)
            for k, p in enumerate_urn_pmf(n, j).items()
        ):
            return d
    raise AssertionError("no index shift in {0,1,2} matches the exhaustive law")


def enumerate_urn_pmf(n: int, j: int) -> dict[int, Fraction]:
    """Exhaustive degree law of the j-th inserted vertex of the growth-law
    triangulation with n-1 insertions (all insertion histories are equally
    likely).  Exponential in n; intended for n <= 7."""
    out: dict[int, Fraction] = {}

    def rec(m: maps_mod.StackMap, step: int, prob: Fraction):
        if step == n - 1:
            deg = m.degree(m.n_boundary + j - 1)
            out[deg - 3] = out.get(deg - 3, Fraction(0)) + prob
            return
        leaves = m.leaf_faces()
        for f in leaves:
            rec(maps_mod.grow(m, f), step + 1, prob / len(leaves))

    rec(maps_mod.theta(), 0, Fraction(1))
    return out


def expected_degree_growth_exact(n: int, j: int) -> Fraction:
    """Expected degree of the j-th inserted vertex in the growth-law map
    with n-1 insertions: 3 * prod_{k=j+1}^{n-1} 2k/(2k-1).

    The vertex is born with degree 3 at round j and gains an edge at round
    k -> k+1 with probability deg/(2k-1), the map holding 2k-1 finite
    faces."""
    out = Fraction(3)
    for k in range(j + 1, n):
        out *= Fraction(2 * k, 2 * k - 1)
    return out


def expected_degree_growth(n: int, j: int) -> float:
    return float(expected_degree_growth_exact(n, j))


# ---------------------------------------------------------------------------
# empirical distributions and chi-square fitting


@dataclass
class EmpiricalPMF:
    counts: dict[int, int] = field(default_factory=dict)

    @classmethod
    def from_samples(cls, xs) -> "EmpiricalPMF":
        c: dict[int, int] = {}
        for x in xs:
            x = int(x)
            c[x] = c.get(x, 0) + 1
        return cls(c)

    @property
    def n(self) -> int:
        return sum(self.counts.values())

    def add(self, x: int, w: int = 1) -> None:
        self.counts[x] = self.counts.get(x, 0) + w

    def chisquare_pvalue(self, pmf, support_start: int = 0, min_expected: float = 5.0) -> float:
        """Goodness of fit against ``pmf(k)``, merging the upper tail so
        every expected count is at least ``min_expected``."""
        n = self.n
        kmax = max(self.counts)
        obs, exp = [], []
        acc_o, acc_e = 0.0, 0.0
        tail_mass = 1.0
        for k in range(support_start, kmax + 1):
            p = pmf(k)
            tail_mass -= p
            acc_o += self.counts.get(k, 0)
            acc_e += n * p
            if acc_e >= min_expected:
                obs.append(acc_o)
                exp.append(acc_e)
                acc_o, acc_e = 0.0, 0.0
        # everything beyond kmax plus any unflushed remainder
        acc_e += n * max(tail_mass, 0.0)
        if exp and acc_e < min_expected:
            obs[-1] += acc_o
            exp[-1] += acc_e
        else:
            obs.append(acc_o)
            exp.append(acc_e)
        stat, p = sps.chisquare(obs, exp)
        return float(p)


# ---------------------------------------------------------------------------
# experiment harness


@dataclass
class ExperimentReport:
    name: str
    params: dict
    seed: int
    replicates: int
    estimates: dict
    stderrs: dict
    references: list
    passed: bool | None = None

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "params": self.params,
            "seed": self.seed,
            "replicates": self.replicates,
            "estimates": self.estimates,
            "stderrs": self.stderrs,
            "references": self.references,
            "passed": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    def to_csv(self) -> str:
        lines = ["key,value"]
        for k in sorted(self.estimates):
            lines.append(f"estimate.{k},{self.estimates[k]}")
        for k in sorted(self.stderrs):
            lines.append(f"stderr.{k},{self.stderrs[k]}")
        for ref in self.references:
            lines.append(f"reference.{ref['name']},{ref['value']}")
        lines.append(f"passed,{self.passed}")
        return "\n".join(lines)


def _mean_se(xs) -> tuple[float, float]:
    a = np.asarray(xs, dtype=float)
    se = a.std(ddof=1) / math.sqrt(len(a)) if len(a) > 1 else 0.0
    return float(a.mean()), float(se)


def _exp_gamma_rate(params, seed):
    n = int(params.get("n", 10**6))
    reps = int(params.get("reps", 30))
    vals = []
    for r in range(reps):
        rng = rng_from_seed(seed, r)
        letters = rng.integers(1, 4, size=n)
        st = GammaState()
        push = st.push
        for x in letters.tolist():
            push(x)
        vals.append((st.count - 1) / n)
    mean, se = _mean_se(vals)
    tol = float(params.get("tol", 0.005))
    return ExperimentReport(
        "gamma-rate", {"n": n, "reps": reps}, seed, reps,
        {"rate": mean}, {"rate": se},
        [{"name": "renewal_rate", "value": GAMMA_RATE_TRI, "provenance": "analytic-renewal"}],
        passed=abs(mean - GAMMA_RATE_TRI) <= tol,
    )


def _exp_quad_rate(params, seed):
    n = int(params.get("n", 10**6))
    reps = int(params.get("reps", 10))
    auto_vals, lit_vals = [], []
    for r in range(reps):
        rng = rng_from_seed(seed, r)
        letters = rng.integers(1, 3, size=n).tolist()
        a, b, c, d = 1, 2, 1, 0
        for x in letters:
            m = 1 + (b if b < d else d)
            if x == 1:
                a, b, c, d = b, m, d, a
            else:
                a, b, c, d = b, m, d, c
        auto_vals.append((1 + min(b, d)) / n)
        lit_vals.append((gamma_prime_literal(tuple(letters)) - 1) / n)
    mean_a, se_a = _mean_se(auto_vals)
    mean_l, se_l = _mean_se(lit_vals)
    tol = float(params.get("tol", 0.005))
    matches = {
        "automaton_vs_1_5": abs(mean_a - GAMMA_RATE_QUAD_DERIVED) <= tol,
        "automaton_vs_1_3": abs(mean_a - GAMMA_RATE_QUAD_CLAIMED) <= tol,
        "literal_vs_1_5": abs(mean_l - GAMMA_RATE_QUAD_DERIVED) <= tol,
        "literal_vs_1_3": abs(mean_l - GAMMA_RATE_QUAD_CLAIMED) <= tol,
    }
    return ExperimentReport(
        "quad-rate", {"n": n, "reps": reps}, seed, reps,
        {"automaton_rate": mean_a, "literal_rate": mean_l, **matches},
        {"automaton_rate": se_a, "literal_rate": se_l},
        [
            {"name": "derived_rate", "value": GAMMA_RATE_QUAD_DERIVED,
             "provenance": "analytic-renewal"},
            {"name": "claimed_rate", "value": GAMMA_RATE_QUAD_CLAIMED,
             "provenance": "reference-constant"},
        ],
        passed=matches["automaton_vs_1_5"],
    )


def _exp_typical_distance(params, seed):
    sizes = [int(s) for s in params.get("sizes", [10**3, 10**4, 10**5])]
    reps = int(params.get("reps", 30))
    ratios = {}
    ses = {}
    for si, n in enumerate(sizes):
        vals = []
        for r in range(reps):
            rng = rng_from_seed(seed, si * 10**6 + r)
            t = trees_mod.sample_increasing_tree(3, n, rng)
            off = trees_mod.offspring_from_internal_words(3, t.skeleton)
            adj = maps_mod.adjacency_from_offspring(off, maps_mod.TRIANGULATION)
            nb = maps_mod._N_BOUNDARY[maps_mod.TRIANGULATION]
            ids = rng.integers(nb, len(adj), size=2)
            d = int(maps_mod.bfs_distances_from(adj, int(ids[0]))[int(ids[1])])
            vals.append(d / ((6.0 / 11.0) * log(n)))
        ratios[str(n)], ses[str(n)] = _mean_se(vals)
    ordered = [ratios[str(n)] for n in sizes]
    spread = [ses[str(n)] for n in sizes]
    # monotone trend up to Monte-Carlo noise: allow two combined standard
    # errors of slack in each comparison
    toward_one = all(
        abs(ordered[i + 1] - 1)
        <= abs(ordered[i] - 1) + 2.0 * math.hypot(spread[i], spread[i + 1])
        for i in range(len(ordered) - 1)
    )
    final_ok = 0.7 <= ordered[-1] <= 1.2
    return ExperimentReport(
        "typical-distance", {"sizes": sizes, "reps": reps}, seed, reps,
        {"ratio": ratios, "monotone_toward_1": toward_one, "final_in_band": final_ok},
        {"ratio": ses},
        [{"name": "normalization", "value": 6.0 / 11.0, "provenance": "analytic-renewal"}],
        passed=toward_one and final_ok,
    )


def _increasing_depth_samples(arity: int, n: int, window: int, rng) -> np.ndarray:
    """Depths of the last ``window`` inserted internal nodes of one
    leaf-growth tree with n internal nodes (flat-array construction)."""
    depths = np.zeros(n, dtype=np.int32)
    leaf_depth = [1] * arity
    picks = rng.integers(0, 1 + (arity - 1) * np.arange(1, n), dtype=np.int64)
    for k in range(1, n):
        j = int(picks[k - 1])
        d = leaf_depth[j]
        depths[k] = d
        leaf_depth[j] = leaf_depth[-1]
        leaf_depth.pop()
        leaf_depth.extend([d + 1] * arity)
    return depths[n - window:] if window < n else depths


def _exp_depth(arity, name, params, seed):
    n = int(params.get("n", 10**5))
    reps = int(params.get("reps", 30))
    window = int(params.get("window", 3000))
    all_means = []
    for r in range(reps):
        rng = rng_from_seed(seed, r)
        ds = _increasing_depth_samples(arity, n, window, rng)
        all_means.append(float(ds.mean()))
    mean, se = _mean_se(all_means)
    if arity == 3:
        refs = [{"name": "centering", "value": 1.5 * log(n), "provenance": "analytic-clt"}]
        ratio = mean / (1.5 * log(n))
        est = {"mean_depth": mean, "ratio_to_3halves_ln_n": ratio}
        passed = 0.95 <= ratio <= 1.05
    else:
        est = {
            "mean_depth": mean,
            "fitted_constant": mean / log(n),
            "ratio_to_2_ln_n": mean / (2 * log(n)),
            "ratio_to_4_ln_n": mean / (4 * log(n)),
        }
        refs = [
            {"name": "2_ln_n", "value": 2 * log(n), "provenance": "analytic-clt"},
            {"name": "4_ln_n", "value": 4 * log(n), "provenance": "reference-constant"},
        ]
        passed = None  # reported, not asserted: conflicting reference constants
    return ExperimentReport(
        name, {"n": n, "reps": reps, "window": window}, seed, reps,
        est, {"mean_depth": se}, refs, passed=passed,
    )


def _exp_radius_scaling(params, seed):
    sizes = [int(s) for s in params.get("sizes", [2500, 10**4])]
    reps = int(params.get("reps", 200))
    means = {}
    ses = {}
    for si, n in enumerate(sizes):
        vals = []
        for r in range(reps):
            rng = rng_from_seed(seed, si * 10**6 + r)
            off = trees_mod.sample_offspring_sequence(3, n, rng)
            adj = maps_mod.adjacency_from_offspring(off, maps_mod.TRIANGULATION)
            vals.append(int(maps_mod.bfs_distances_from(adj, 0).max()))
        means[str(n)], ses[str(n)] = _mean_se(vals)
    ratio = means[str(sizes[-1])] / means[str(sizes[0])]
    lo, hi = params.get("band", (1.8, 2.2))
    return ExperimentReport(
        "radius-scaling", {"sizes": sizes, "reps": reps}, seed, reps,
        {"mean_radius": means, "ratio": ratio},
        {"mean_radius": ses},
        [{"name": "sqrt_scaling", "value": math.sqrt(sizes[-1] / sizes[0]),
          "provenance": "analytic-scaling"}],
        passed=lo <= ratio <= hi,
    )


def _uniform_internal_pick(offspring: np.ndarray, rng) -> int:
    internal = np.flatnonzero(offspring)
    return int(internal[rng.integers(len(internal))])


def _exp_degree_uniform(params, seed):
    n = int(params.get("n", 2000))
    reps = int(params.get("reps", 10**5))
    emp = EmpiricalPMF()
    rng = rng_from_seed(seed)
    for _ in range(reps):
        off = trees_mod.sample_offspring_sequence(3, n, rng)
        i = _uniform_internal_pick(off, rng)
        emp.add(degree_from_offspring(off, i, maps_mod.TRIANGULATION) - 3)
    p = emp.chisquare_pvalue(pmf_limit_deg_uniform)
    return ExperimentReport(
        "degree-uniform", {"n": n, "reps": reps}, seed, reps,
        {"chi2_pvalue": p, "mean_degree": 3 + sum(k * c for k, c in emp.counts.items()) / reps,
         "histogram": {str(k): emp.counts[k] for k in sorted(emp.counts)}},
        {},
        [{"name": "pmf", "value": "limit_deg_uniform", "provenance": "analytic-formula"}],
        passed=p > 0.01,
    )


def _exp_subtree_size(params, seed):
    """Fringe-subtree sizes versus their limit law.

    The limit holds pointwise for fixed k; sizes comparable to n (including
    the 1/n atom at the full tree) deviate for every finite n, so the fit
    is restricted to k <= kmax with both laws renormalized.
    """
    n = int(params.get("n", 3000))
    reps = int(params.get("reps", 10**5))
    kmax = int(params.get("kmax", 50))
    emp = EmpiricalPMF()
    dropped = 0
    rng = rng_from_seed(seed)
    for _ in range(reps):
        off = trees_mod.sample_offspring_sequence(3, n, rng)
        i = _uniform_internal_pick(off, rng)
        k = (_subtree_size(off, i) - 1) // 3
        if k <= kmax:
            emp.add(k)
        else:
            dropped += 1
    mass = sum(pmf_subtree_size(k) for k in range(1, kmax + 1))
    p = emp.chisquare_pvalue(
        lambda k: pmf_subtree_size(k) / mass if k <= kmax else 0.0, support_start=1
    )
    return ExperimentReport(
        "subtree-size", {"n": n, "reps": reps, "kmax": kmax}, seed, reps,
        {"chi2_pvalue": p, "dropped_beyond_kmax": dropped},
        {},
        [{"name": "pmf", "value": "subtree_size", "provenance": "analytic-formula"}],
        passed=p > 0.01,
    )


def _subtree_size(offspring, i: int) -> int:
    depth = 1
    j = i
    while depth:
        depth += offspring[j] - 1
        j += 1
    return j - i


def degree_from_offspring(offspring, i: int, family: str) -> int:
    """Map degree of the vertex of internal node i, walking only the
    subtree of i on the flat offspring array (no tree object built)."""
    arity = 3 if family == maps_mod.TRIANGULATION else 2
    step = maps_mod._tri_step if arity == 3 else maps_mod._quad_step
    base = 3 if arity == 3 else 2
    count = 0
    # stack of (state, children_left) per open ancestor inside the subtree
    stack = [(maps_mod._START, offspring[i])]
    j = i
    while stack:
        j += 1
        state, left = stack[-1]
        letter = arity - left + 1
        stack[-1] = (state, left - 1)
        c = offspring[j]
        if c:
            new_state, accept = step(state, letter)
            if new_state is None:
                # skip the whole subtree of j
                depth = 1
                while depth:
                    depth += offspring[j] - 1
                    j += 1
                j -= 1
            else:
                if accept:
                    count += 1
                stack.append((new_state, c))
        while stack and stack[-1][1] == 0:
            stack.pop()
    return base + count


EXPERIMENTS = {
    "gamma-rate": _exp_gamma_rate,
    "quad-rate": _exp_quad_rate,
    "typical-distance": _exp_typical_distance,
    "tri-depth": lambda p, s: _exp_depth(3, "tri-depth", p, s),
    "bin-depth": lambda p, s: _exp_depth(2, "bin-depth", p, s),
    "radius-scaling": _exp_radius_scaling,
    "degree-uniform": _exp_degree_uniform,
    "subtree-size": _exp_subtree_size,
}


def run_experiment(name: str, params: dict | None = None, seed: int = 0) -> ExperimentReport:
    if name not in EXPERIMENTS:
        raise KeyError(f"unknown experiment {name!r}; known: {sorted(EXPERIMENTS)}")
    return EXPERIMENTS[name](params or {}, seed)
