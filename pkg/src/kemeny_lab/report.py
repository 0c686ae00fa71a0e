"""Run the analysis pipeline and turn its results into JSON-ready documents.

Exact scalars are written as ``"a/b"`` strings so no precision is lost;
float scalars are JSON numbers, except non-finite ones which become strings.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import basis, chain, kemeny, mfpt
from . import evolution as evo
from . import montecarlo as mc
from . import numerics as nx

SCHEMA = "kemeny-lab/1"


def encode(x):
    if isinstance(x, np.ndarray):
        return [encode(v) for v in x]
    if isinstance(x, (list, tuple)):
        return [encode(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": encode(float(x.real)), "im": encode(float(x.imag))}
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    return x


def _mode(p: chain.TransitionMatrix) -> str:
    return "exact" if p.exact else "float"


class Analysis:
    """All intermediate objects of one pass through the pipeline."""

    def __init__(self, p: chain.TransitionMatrix):
        self.p = p
        self.primitivity = chain.require_regular(p)
        self.pi = chain.stationary(p)
        self.z = mfpt.fundamental(p, self.pi)
        self.m = mfpt.mfpt_from_fundamental(self.z, self.pi)
        self.m_direct = mfpt.mfpt_direct(p)
        self.mbar = mfpt.deleted_diagonal(self.m)
        self.d = mfpt.return_diagonal(self.pi)
        self.eigs = None if p.exact else nx.eigenvalues(p.matrix)
        self.kemeny = kemeny.certify(p, self.m, self.mbar, self.z, self.pi, self.eigs)
        self.basis = basis.certificate(self.mbar, self.pi, self.kemeny.K)

    def chain_section(self):
        pr = self.primitivity
        return {
            "n": self.p.n,
            "mode": _mode(self.p),
            "P": encode(self.p.matrix),
            "primitivity": {
                "is_regular": pr.is_regular,
                "witness_exponent": pr.witness_exponent,
                "checked_bound": pr.checked_bound,
            },
        }

    def kemeny_section(self):
        k = self.kemeny
        out = {
            "K": encode(k.K),
            "K_minus_1": encode(k.kbar_level),
            "kemeny_vector": encode(k.kemeny_vector),
            "kbar": encode(k.kbar),
            "K_from_vector": encode(k.K_from_vector),
            "K_trace": encode(k.K_trace),
            "K_eigen": encode(k.K_eigen),
            "constancy_spread": encode(k.constancy_spread),
            "route_max_discrepancy": encode(k.route_max_discrepancy),
        }
        if self.eigs is not None:
            out["spectrum"] = encode(self.eigs)
        return out

    def basis_section(self, fmt=str):
        b = self.basis
        t = b.tableau
        return {
            "mbar_inverse": encode(b.mbar_inverse),
            "reconstruction": encode(b.reconstruction),
            "pullback_vector": encode(b.pullback_vector),
            "normalization_factor": encode(b.normalization_factor),
            "normalized_pullback": encode(b.normalization_factor * b.pullback_vector),
            "tableau": {
                "initial": encode(t.initial),
                "final": encode(t.final),
                "pivots": [{"row": v.row, "col": v.col, "value": encode(v.value)} for v in t.pivots],
                "text": basis.format_tableau(t, fmt).split("\n"),
            },
        }

    def diagnostics(self):
        p, n, exact = self.p, self.p.n, self.p.exact
        b = self.basis
        return {
            "stationary_residual": encode(chain.stationary_residual(p, self.pi)),
            "mfpt_route_discrepancy": encode(nx.max_abs(self.m - self.m_direct)),
            "pmd_identity_residual": encode(nx.max_abs(mfpt.verify_pmd_identity(p, self.m, self.d))),
            "d_minus_e_residual": encode(nx.max_abs(mfpt.d_minus_e_check(self.d, self.pi))),
            "fundamental_row_sum_residual": encode(nx.max_abs(self.z @ nx.ones(n, exact) - 1)),
            "constancy_spread": encode(self.kemeny.constancy_spread),
            "route_max_discrepancy": encode(self.kemeny.route_max_discrepancy),
            "kbar_invariance_residual": encode(self.kemeny.invariance_residual),
            "mbar_inverse_residual": encode(
                nx.max_abs(self.mbar @ b.mbar_inverse - nx.identity(n, exact))
            ),
            "tableau_replay_residual": encode(nx.max_abs(b.tableau.replay() - b.tableau.final)),
            "reconstruction_residual": encode(b.reconstruction_residual),
            "pullback_residual": encode(b.pullback_residual),
        }


def evolution_section(p, pi, steps, include_mfpt=False):
    series = evo.evolve(p, steps, pi)
    rows = []
    for s in series.steps:
        row = {
            "m": s.m,
            "K_eigen": encode(s.K_eigen),
            "K_pipeline": encode(s.K_pipeline),
            "projector_gap": encode(s.projector_gap),
            "invariance_residual": encode(s.invariance_residual),
        }
        if include_mfpt:
            row["M"] = encode(s.mfpt)
        rows.append(row)
    return {
        "steps": rows,
        "K_limit": series.K_limit,
        "M_limit": encode(series.M_limit),
        "Mbar_limit_pi": encode(series.Mbar_limit @ pi),
        "M_last": encode(series.steps[-1].mfpt),
    }, series


def simulation_section(p, pi, m_exact, cfg: mc.SimulationConfig, threads=None):
    emp = mc.empirical_mfpt(p, cfg, threads)
    analytic = nx.to_float(m_exact)
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(np.isinf(emp.stderrs), 0.0, (emp.means - analytic) / emp.stderrs)
    z = np.where(np.isnan(z), 0.0, z)
    est = mc.empirical_kemeny(emp, pi)
    k = float(pi @ m_exact @ pi)
    with np.errstate(divide="ignore", invalid="ignore"):
        kz = np.where(np.isinf(est.stderrs), 0.0, (est.values - k) / est.stderrs)
    kz = np.where(np.isnan(kz), 0.0, kz)
    return {
        "config": {"trials": cfg.trials, "max_steps": cfg.max_steps, "seed": cfg.seed},
        "empirical_mfpt": encode(emp.means),
        "stderrs": encode(emp.stderrs),
        "censored": encode(emp.censored_counts),
        "z_scores": encode(z),
        "max_abs_z": encode(float(np.max(np.abs(z)))),
        "empirical_kemeny": {
            "K": encode(k),
            "values": encode(est.values),
            "stderrs": encode(est.stderrs),
            "z_scores": encode(kz),
            "spread": encode(est.spread),
        },
    }


def analyze_document(p, steps=10, sim_cfg=None, threads=None, fmt=str):
    a = Analysis(p)
    evolution, series = evolution_section(p, a.pi, steps)
    doc = {
        "schema": SCHEMA,
        "command": "analyze",
        "chain": a.chain_section(),
        "stationary": {"pi": encode(a.pi)},
        "mfpt": {
            "fundamental_matrix": encode(a.z),
            "from_fundamental": encode(a.m),
            "direct": encode(a.m_direct),
            "deleted_diagonal": encode(a.mbar),
            "return_times": encode(np.diagonal(a.d)),
        },
        "kemeny": a.kemeny_section(),
        "basis": a.basis_section(fmt),
        "evolution": evolution,
    }
    if sim_cfg is not None:
        doc["montecarlo"] = simulation_section(p, a.pi, a.m, sim_cfg, threads)
    diagnostics = a.diagnostics()
    diagnostics["limit_identity_residual"] = encode(
        nx.max_abs(series.Mbar_limit @ a.pi - (p.n - 1) * nx.ones(p.n, p.exact))
    )
    doc["diagnostics"] = diagnostics
    return doc
