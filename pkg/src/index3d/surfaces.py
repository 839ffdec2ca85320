"""Admissible-cone vertex enumeration and 1-efficiency reports.

The closed cone {x >= 0, Bx = 0, omega(M_k, x) = omega(L_k, x) = 0} holds
the closed normal classes; a nonzero admissible extreme ray with chi >= 0
witnesses failure of 1-efficiency.  Absence of such rays is reported at
vertex resolution, upgraded to a proof when a strict angle structure
certifies it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import angles, qnormal
from .linalg import StrictSolution, dd_vertex_enumeration, integer_kernel
from .series import HalfInt
from .tri import GluingData, Triangulation, cmap, gluing_data_from_triangulation, qmatching_matrix

VERDICT_VIOLATOR = "violator"
VERDICT_CERTIFIED = "certified-clean"
VERDICT_VERTEX_CLEAN = "clean-at-vertex-resolution"


@dataclass
class RayInfo:
    vector: list
    chi: Fraction
    delta: int
    admissible: bool


@dataclass
class EfficiencyReport:
    closed_rays: list
    spun_rays: list
    verdict_closed: str
    verdict_spun: str
    closed_violator: list | None
    spun_violator: list | None

    @property
    def one_efficient_at_vertex_resolution(self):
        return self.verdict_closed != VERDICT_VIOLATOR


def is_admissible(S):
    """At most one nonzero quad slot per tetrahedron (embeddable)."""
    for j in range(0, len(S), 3):
        if sum(1 for x in S[j:j + 3] if x != 0) > 1:
            return False
    return True


def full_cone_rays(g: GluingData, dimension_cap=24):
    """Extreme rays of {x >= 0, Bx = 0}: all nonnegative Q-normal directions."""
    return dd_vertex_enumeration(qmatching_matrix(g), 3 * g.n, dimension_cap)


def closed_cone_rays(g: GluingData, dimension_cap=24):
    """Extreme rays of the closed cone {x >= 0, Bx = 0, omega(M,x) = omega(L,x) = 0}."""
    if not g.has_cusp_rows:
        return closed_cone_rays_from_span(g, dimension_cap)
    eqs = qmatching_matrix(g)
    for k in range(g.r):
        eqs.append(cmap(g.meridian(k)))
        eqs.append(cmap(g.longitude(k)))
    return dd_vertex_enumeration(eqs, 3 * g.n, dimension_cap)


def closed_cone_rays_from_span(g: GluingData, dimension_cap=24):
    """The closed cone carved out without cusp rows: intersect {x >= 0, Bx = 0}
    with the span of the edge and tetrahedral solutions."""
    eqs = qmatching_matrix(g)
    span_rows = [list(r) for r in g.edge_rows] + qnormal.tet_solutions(g.n)
    for u in integer_kernel(span_rows):
        eqs.append(u)
    return dd_vertex_enumeration(eqs, 3 * g.n, dimension_cap)


def _ray_info(g, alpha, ray):
    chi = -sum(Fraction(a) * x for a, x in zip(alpha, ray))
    return RayInfo(vector=list(ray), chi=chi, delta=qnormal.double_arc(ray),
                   admissible=is_admissible(ray))


def efficiency_report(g: GluingData, dimension_cap=24) -> EfficiencyReport:
    """Scan the closed and full cones for admissible chi >= 0 violators.

    Verdicts: a violator disproves (spun) 1-efficiency; with no violator the
    verdict is clean at vertex resolution, upgraded to certified when a
    strict vanishing-holonomy angle structure exists.
    """
    if g.has_cusp_rows:
        alpha = angles.solve_vanishing_holonomy(g)
        cert = isinstance(angles.strict_exists_vanishing_holonomy(g), StrictSolution)
    else:
        alpha = angles.generalized_angle_structure(g)
        cert = isinstance(angles.strict_angle_structure(g), StrictSolution)

    closed = [_ray_info(g, alpha, r) for r in closed_cone_rays(g, dimension_cap)]
    spun = [_ray_info(g, alpha, r) for r in full_cone_rays(g, dimension_cap)]

    def verdict(rays):
        for info in rays:
            if info.admissible and info.chi >= 0 and any(x != 0 for x in info.vector):
                return VERDICT_VIOLATOR, info.vector
        return (VERDICT_CERTIFIED if cert else VERDICT_VERTEX_CLEAN), None

    v_closed, w_closed = verdict(closed)
    v_spun, w_spun = verdict(spun)
    return EfficiencyReport(closed_rays=closed, spun_rays=spun,
                            verdict_closed=v_closed, verdict_spun=v_spun,
                            closed_violator=w_closed, spun_violator=w_spun)


def triangulation_efficiency(t: Triangulation, dimension_cap=24) -> EfficiencyReport:
    """Efficiency report for a bare triangulation (no peripheral data); the
    closed cone is carved out by the span of edge and tetrahedral solutions."""
    return efficiency_report(gluing_data_from_triangulation(t), dimension_cap)


def gen_surface_degree(p, q, chi_tilde):
    """Index-term degree of an embedded generalised normal surface.

    d = -chi + sum_i (p_i q_i - p_i - q_i + gcd(p_i, q_i)) in q^(1/2)-units,
    where (p_i, q_i) are the two quad multiplicities in tetrahedron i.
    """
    if len(p) != len(q):
        raise ValueError("p and q must have equal length")
    total = -chi_tilde
    for pi, qi in zip(p, q):
        if pi < 0 or qi < 0:
            raise ValueError("quad counts must be nonnegative")
        if pi and qi:
            total += pi * qi - pi - qi + gcd(pi, qi)
    return HalfInt(total)


def render_report(report: EfficiencyReport):
    """Plain-text table of the efficiency report."""
    lines = []
    for name, rays, verdict, violator in (
            ("closed", report.closed_rays, report.verdict_closed, report.closed_violator),
            ("spun", report.spun_rays, report.verdict_spun, report.spun_violator)):
        lines.append("[%s cone] verdict: %s" % (name, verdict))
        if violator is not None:
            lines.append("  violator: %s" % " ".join(str(x) for x in violator))
        lines.append("  ray | chi | delta | admissible")
        for info in rays:
            lines.append("  %s | %s | %d | %s" % (
                " ".join(str(x) for x in info.vector), info.chi, info.delta,
                "yes" if info.admissible else "no"))
    return "\n".join(lines)
