"""End-to-end certificate pipelines for the illumination and ball-cover bounds."""

import math

import numpy as np

from .certify import (
    ball_cover_number,
    illumination_lower_bound,
    multiplicity_exact,
)
from .construct import ConstructionParams, construct_separated
from .sphere import angles_between
from .witness import (
    build_witness,
    check_lemma3_i,
    check_lemma3_ii,
    diameter,
    witness_diameter,
)

ILLUM_ALPHA = math.pi / 14
ILLUM_PSI = 6 * math.pi / 14
BALL_ALPHA = math.pi / 6
BALL_PSI = math.pi / 3
DEFAULT_EPSILON = 0.05
# constant in the cited covering-multiplicity bound; reported, never enforced
BW_CONSTANT = 400


def theorem1_pipeline(n, epsilon=DEFAULT_EPSILON, seed=0, mode="exact", *,
                      samples_per_ring=64, mc_samples=100_000, exact_limit=64,
                      n_override=None, extra_candidates=256):
    """Separated set -> witness set -> illumination lower bound.

    Returns ``(certificate, report)``.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if not 0.0 < epsilon < ILLUM_ALPHA:
        raise ValueError("epsilon must lie in (0, pi/14)")
    alpha = ILLUM_ALPHA
    psi, phi = ILLUM_PSI, ILLUM_PSI + epsilon
    config = construct_separated(ConstructionParams(n, psi, phi, seed, n_override))
    x = config.points
    if not check_lemma3_ii(x, alpha):
        raise AssertionError("separated set fails the witness-diameter hypothesis")
    w = build_witness(x, alpha, samples_per_ring, seed)
    wd = witness_diameter(w)
    target = 2 * math.cos(alpha)
    if wd > target + 1e-9 or (samples_per_ring and wd < target - 1e-9):
        raise AssertionError(f"witness diameter {wd!r} differs from 2 cos(alpha)")

    cert = illumination_lower_bound(x, alpha, mode, exact_limit, mc_samples,
                                    extra_candidates, seed)
    cone_radius = math.pi / 2 - alpha
    report = {
        "n": n,
        "seed": int(seed),
        "epsilon": epsilon,
        "psi": psi,
        "phi": phi,
        "alpha": alpha,
        "candidate_count": config.candidate_count,
        "deleted_count": config.deleted_count,
        "size": len(config),
        "markov_success": config.markov_success,
        "witness_points": int(w.all_points().shape[0]),
        "witness_diameter": wd,
        "witness_diameter_target": target,
        "cone_radius": cone_radius,
        "cone_radius_equals_psi": abs(cone_radius - psi) <= 1e-12,
        "multiplicity": cert.extras.get("multiplicity"),
        "lower_bound": cert.lower_bound,
        "greedy_upper": cert.upper_bound,
        "reference_rate": math.cos(alpha - epsilon) ** (-n),
        "reference_multiplicity_cap": BW_CONSTANT * n * math.log(n),
    }
    if mode == "exact" and len(config):
        # the counting step uses the wider caps C(-x_i, phi); so does -X
        m_neg, _, _, _ = multiplicity_exact(-x, phi, exact_limit)
        m_pos, _, _, _ = multiplicity_exact(x, phi, exact_limit)
        report["multiplicity_phi"] = m_neg
        report["multiplicity_phi_reflected"] = m_pos
        report["reflection_symmetric"] = m_neg == m_pos
    return cert, report


def theorem3_pipeline(n, epsilon=DEFAULT_EPSILON, seed=0, mode="exact", *,
                      exact_limit=24, n_override=None):
    """Separated set -> rescaled diameter-1 set -> ball-cover certificate.

    Returns ``(certificate, report)``.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if not 0.0 < epsilon < math.pi / 6:
        raise ValueError("epsilon must lie in (0, pi/6)")
    psi, phi = BALL_PSI, BALL_PSI + epsilon
    config = construct_separated(ConstructionParams(n, psi, phi, seed, n_override))
    x = config.points
    if not check_lemma3_i(x, BALL_ALPHA):
        raise AssertionError("separated set exceeds diameter sqrt(3)")
    scale = 1.0 / math.sqrt(3.0)
    p = x * scale
    diam = diameter(p) if len(config) else 0.0
    if diam > 1 + 1e-9:
        raise AssertionError(f"rescaled diameter {diam!r} exceeds 1")
    cert = ball_cover_number(p, 1.0, mode, exact_limit)

    # informational: does each ball's center direction lie within phi of the points it covers?
    membership = []
    for center, covered in zip(cert.extras["centers"], cert.extras["assignments"]):
        c = np.asarray(center) / scale
        norm = float(np.linalg.norm(c))
        if norm == 0.0:
            membership.append(None)
            continue
        theta = angles_between(x[covered], c / norm)
        membership.append(bool(np.all(theta <= phi + 1e-9)))

    report = {
        "n": n,
        "seed": int(seed),
        "epsilon": epsilon,
        "psi": psi,
        "phi": phi,
        "candidate_count": config.candidate_count,
        "deleted_count": config.deleted_count,
        "size": len(config),
        "markov_success": config.markov_success,
        "sphere_diameter": diameter(x) if len(config) else 0.0,
        "scaled_diameter": diam,
        "lower_bound": cert.lower_bound,
        "upper_bound": cert.upper_bound,
        "packing_bound": cert.extras["packing_bound"],
        "multiplicity_bound": cert.extras["multiplicity_bound"],
        "greedy_upper": cert.extras["greedy_upper"],
        "cap_membership": membership,
        "reference_rate": (1.0 / math.sin(phi)) ** n,
    }
    return cert, report
