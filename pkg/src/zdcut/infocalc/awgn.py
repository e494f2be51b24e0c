"""Cut-set region of networks of independent AWGN edges under power caps.

A rate tuple is inside the region when some power allocation ``S`` (one
average power per edge, within the per-edge, per-node and total caps) makes
every cut inequality

    sum_{i in T} R_i  <=  sum_{(i,j) in T x T^c} 1/2 log2(1 + S_ij / sigma2_ij)

hold.  Membership is decided by maximizing the smallest cut slack over the
allocation polytope.  The objective is a minimum of concave functions, so
the problem is concave; it is solved in epigraph form with SLSQP from several
feasible starting points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from ..network import MulticastDemand, PowerConstraints
from .regions import MEMBERSHIP_TOL, CutBound, Membership, check_rates, enumerate_cuts

LN2 = np.log(2.0)


def awgn_capacity(S, sigma2) -> float:
    """``1/2 log2(1 + max(S, 0) / sigma2)``."""
    if not sigma2 > 0:
        raise ValueError("noise variance must be positive")
    return 0.5 * float(np.log2(1.0 + max(float(S), 0.0) / float(sigma2)))


def cut_values(allocation, sigmas, cuts) -> np.ndarray:
    """Right-hand side of every cut inequality for an ``(N, N)`` allocation."""
    S = np.clip(np.asarray(allocation, dtype=float), 0.0, None)
    sig = np.asarray(sigmas, dtype=float)
    with np.errstate(divide="ignore"):
        rates = np.where(np.isfinite(sig), 0.5 * np.log2(1.0 + S / sig), 0.0)
    n = S.shape[0]
    out = np.empty(len(cuts))
    for k, T in enumerate(cuts):
        inside = np.zeros(n, dtype=bool)
        inside[[v - 1 for v in T]] = True
        out[k] = rates[np.ix_(inside, ~inside)].sum()
    return out


@dataclass(frozen=True)
class SlackSearch:
    slack: float
    allocation: np.ndarray
    start_slacks: tuple


class _Problem:
    """Epigraph form over the edges that cross at least one cut."""

    def __init__(self, rates, power: PowerConstraints, sigmas, cuts):
        self.n = power.n_nodes
        self.power = power
        self.sigmas = np.asarray(sigmas, dtype=float)
        self.cuts = cuts
        self.rate_sums = np.array([sum(rates[v - 1] for v in T) for T in cuts])
        crossing = set()
        for T in cuts:
            crossing |= {(i, j) for i in T for j in range(1, self.n + 1) if j not in T}
        self.edges = [
            (i, j)
            for (i, j) in sorted(crossing)
            if np.isfinite(self.sigmas[i - 1, j - 1]) and power.per_edge[i - 1, j - 1] > 0
        ]
        k = len(self.edges)
        self.sig = np.array([self.sigmas[i - 1, j - 1] for i, j in self.edges])
        self.cap = np.array([power.per_edge[i - 1, j - 1] for i, j in self.edges])
        # incidence of edges in cuts and in node rows
        self.cross = np.zeros((len(cuts), k))
        for c, T in enumerate(cuts):
            for e, (i, j) in enumerate(self.edges):
                if i in T and j not in T:
                    self.cross[c, e] = 1.0
        self.rows = np.zeros((self.n, k))
        for e, (i, _) in enumerate(self.edges):
            self.rows[i - 1, e] = 1.0

    def slacks(self, s: np.ndarray) -> np.ndarray:
        r = 0.5 * np.log2(1.0 + np.clip(s, 0.0, None) / self.sig)
        return self.cross @ r - self.rate_sums

    def to_matrix(self, s: np.ndarray) -> np.ndarray:
        S = np.zeros((self.n, self.n))
        for e, (i, j) in enumerate(self.edges):
            S[i - 1, j - 1] = s[e]
        return S

    def repair(self, s: np.ndarray) -> np.ndarray:
        """Push a near-feasible point into the polytope by clipping and scaling."""
        s = np.clip(s, 0.0, self.cap)
        row = self.rows @ s
        for i in range(self.n):
            if row[i] > self.power.per_node[i]:
                s = np.where(self.rows[i] > 0, s * self.power.per_node[i] / row[i], s)
        if s.sum() > self.power.total:
            s = s * (self.power.total / s.sum())
        return s

    def proportional_start(self) -> np.ndarray:
        """Each node spends its budget on its crossing edges in proportion to their caps."""
        node_room = np.minimum(self.power.per_node, self.rows @ self.cap)
        scale = min(1.0, self.power.total / node_room.sum()) if node_room.sum() > 0 else 0.0
        s = np.zeros(len(self.edges))
        for i in range(self.n):
            mask = self.rows[i] > 0
            capsum = self.cap[mask].sum()
            if capsum > 0:
                s[mask] = node_room[i] * scale * self.cap[mask] / capsum
        return self.repair(s)

    def random_start(self, rng) -> np.ndarray:
        s = np.zeros(len(self.edges))
        for i in range(self.n):
            mask = self.rows[i] > 0
            if mask.any():
                w = rng.dirichlet(np.ones(mask.sum()))
                s[mask] = rng.uniform() * self.power.per_node[i] * w
        return self.repair(s)

    def solve(self, s0: np.ndarray, tol: float) -> np.ndarray:
        k = len(self.edges)
        x0 = np.append(s0, self.slacks(s0).min())
        g = 0.5 / LN2

        def cut_con(x):
            return self.slacks(x[:k]) - x[k]

        def cut_jac(x):
            d = g / (self.sig + np.clip(x[:k], 0.0, None))
            return np.hstack([self.cross * d[None, :], -np.ones((len(self.cuts), 1))])

        lin = np.vstack([self.rows, np.ones((1, k))])
        lin_rhs = np.append(self.power.per_node, self.power.total)
        constraints = [
            {"type": "ineq", "fun": cut_con, "jac": cut_jac},
            {
                "type": "ineq",
                "fun": lambda x: lin_rhs - lin @ x[:k],
                "jac": lambda x: np.hstack([-lin, np.zeros((lin.shape[0], 1))]),
            },
        ]
        bounds = [(0.0, c) for c in self.cap] + [(None, None)]
        res = minimize(
            lambda x: -x[k],
            x0,
            jac=lambda x: np.append(np.zeros(k), -1.0),
            bounds=bounds,
            constraints=constraints,
            method="SLSQP",
            options={"ftol": min(tol, 1e-7) * 1e-3, "maxiter": 1000},
        )
        return self.repair(res.x[:k])


def awgn_max_min_slack(
    rates, power: PowerConstraints, sigmas, demand: MulticastDemand, starts: int = 8, tol: float = 1e-7, seed: int = 0
) -> SlackSearch:
    """Best smallest cut slack over the power polytope, with its allocation."""
    n = power.n_nodes
    r = check_rates(rates, n, demand)
    cuts = enumerate_cuts(n, demand)
    if not cuts:
        return SlackSearch(np.inf, np.zeros((n, n)), ())
    prob = _Problem(r, power, sigmas, cuts)
    if not prob.edges:
        s = np.zeros(0)
        return SlackSearch(float(prob.slacks(s).min()), np.zeros((n, n)), ())
    rng = np.random.default_rng(seed)
    inits = [prob.proportional_start()] + [prob.random_start(rng) for _ in range(starts - 1)]
    results = []
    for s0 in inits:
        s = prob.solve(s0, tol)
        results.append((float(prob.slacks(s).min()), s))
    best_slack, best_s = max(results, key=lambda t: t[0])
    return SlackSearch(best_slack, prob.to_matrix(best_s), tuple(v for v, _ in results))


def awgn_region_membership(
    rates,
    power: PowerConstraints,
    sigmas,
    demand: MulticastDemand,
    starts: int = 8,
    tol: float = 1e-7,
    seed: int = 0,
) -> Membership:
    """Decide whether ``rates`` lies in the AWGN cut-set region.

    ``inside`` verdicts carry a feasible witness allocation.  ``outside`` is
    reported when the best slack is negative and at least two starts agree on
    it within ``tol``; otherwise the verdict is ``undecided``.
    """
    r = check_rates(rates, power.n_nodes, demand)
    search = awgn_max_min_slack(r, power, sigmas, demand, starts, tol, seed)
    cuts = enumerate_cuts(power.n_nodes, demand)
    values = cut_values(search.allocation, sigmas, cuts)
    bounds = tuple(
        CutBound(T, float(sum(r[v - 1] for v in T)), float(v)) for T, v in zip(cuts, values)
    )
    worst = min(bounds, key=lambda b: b.slack) if bounds else None
    slack = worst.slack if worst else np.inf
    if slack >= -MEMBERSHIP_TOL:
        verdict = "inside"
    elif sum(abs(v - search.slack) <= tol for v in search.start_slacks) >= 2:
        verdict = "outside"
    else:
        verdict = "undecided"
    return Membership(
        verdict,
        float(slack),
        worst.cut if worst else None,
        bounds,
        search.allocation if verdict == "inside" else None,
    )


def network_awgn_membership(rates, network, **kwargs) -> Membership:
    """Convenience wrapper taking caps and noise variances from ``network``."""
    if not network.is_awgn:
        raise ValueError("network has no AWGN channels")
    return awgn_region_membership(
        rates, network.power, network.noise_variances(), network.demand, **kwargs
    )
