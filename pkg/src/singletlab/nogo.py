"""Exact counting obstruction to two-uniformity on balanced supports.

For any normalized state whose every multi-index occupies each label
exactly ``K = n // d`` times, the equal-label diagonal entries of the
two-site marginals obey a counting identity: summed over all site pairs
and labels they always total ``d * C(K, 2)``.  Two-uniformity would
force that same sum to ``C(n, 2) / d``.  The shortfall is

    gap = C(n, 2) / d - d * C(K, 2) = K * (d - 1) / 2,

strictly positive whenever ``d >= 2``, so no such state can be
two-uniform, and by Cauchy-Schwarz its pair deficit is at least
``gap**2 / (d * C(n, 2))``.  Everything here is exact rational
arithmetic; the numerical checker replays both facts on sampled states.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np

from .singlet import SingletBasis, verify_invariance
from .states import DEFAULT_TOL, PureState, SystemShape, partial_trace
from .uniformity import pair_deficit

__all__ = [
    "CertificateViolationError",
    "NoGoCertificate",
    "CertificateCheck",
    "counting_sum",
    "certify",
    "verify_certificate_numerically",
    "certificate_to_dict",
    "check_to_dict",
]


class CertificateViolationError(RuntimeError):
    """A sampled state contradicted the certificate's guaranteed bounds."""


def counting_sum(state: PureState, tol: float = DEFAULT_TOL) -> float:
    """Equal-label diagonal mass of all two-site marginals.

    Sums ``tau_{ab}(l, l; l, l)`` over all site pairs ``a < b`` and all
    labels ``l``.  Requires a normalized state with balanced support;
    every such state gives exactly ``d * C(K, 2)`` regardless of its
    amplitudes, because each stored index contributes ``C(K, 2)`` equal
    pairs per label.
    """
    if not state.has_uniform_support():
        raise ValueError("counting sum requires a balanced (uniform-profile) support")
    n, d = state.shape.n, state.shape.d
    total = 0.0
    for sites in combinations(range(n), 2):
        marginal = partial_trace(state, sites, tol)
        for label in range(d):
            total += marginal.entry((label, label), (label, label)).real
    return total


@dataclass(frozen=True)
class NoGoCertificate:
    """Exact rational comparison between required and attainable diagonal mass.

    ``required`` is what two-uniformity would demand of the counting
    sum, ``actual`` what balanced support forces, and ``gap`` their
    difference.  ``deficit_floor`` is the guaranteed lower bound on the
    pair deficit of any normalized balanced-support state.  All values
    are exact fractions; ``actual``, ``gap`` and ``deficit_floor`` are
    None when ``d`` does not divide ``n`` (no balanced support exists,
    hence no invariant states at all).
    """

    n: int
    d: int
    divisible: bool
    copies: int | None
    required: Fraction
    actual: Fraction | None
    gap: Fraction | None
    deficit_floor: Fraction | None
    two_uniform_possible: bool
    ame_possible: bool
    verdict: str


def certify(shape: SystemShape) -> NoGoCertificate:
    """Build the exact certificate for one system shape."""
    n, d = shape.n, shape.d
    pairs = comb(n, 2)
    required = Fraction(pairs, d)
    if not shape.divisible:
        return NoGoCertificate(
            n=n,
            d=d,
            divisible=False,
            copies=None,
            required=required,
            actual=None,
            gap=None,
            deficit_floor=None,
            two_uniform_possible=False,
            ame_possible=False,
            verdict=(
                f"d={d} does not divide n={n}: no multi-index can occupy every "
                "label equally, so no collectively invariant states exist."
            ),
        )
    copies = shape.copies
    actual = d * Fraction(comb(copies, 2))
    gap = required - actual
    floor = gap * gap / (d * pairs) if pairs else Fraction(0)
    two_uniform_possible = gap == 0
    ame_possible = n <= 3 or two_uniform_possible
    if d == 1:
        verdict = (
            "Degenerate single-level system: the only invariant state is the "
            "product state and every marginal is trivially maximally mixed; "
            "the counting argument is vacuous here."
        )
    elif n < 4:
        verdict = (
            f"Counting gap {gap} > 0: no invariant state of this shape is "
            f"two-uniform. Absolute maximal entanglement only requires "
            f"{n // 2}-uniformity at n={n}, which invariant states do satisfy."
        )
    else:
        verdict = (
            f"Counting gap {gap} > 0: no invariant state of this shape is "
            f"two-uniform, hence none is absolutely maximally entangled; "
            f"every such state has pair deficit at least {floor}."
        )
    return NoGoCertificate(
        n=n,
        d=d,
        divisible=True,
        copies=copies,
        required=required,
        actual=actual,
        gap=gap,
        deficit_floor=floor,
        two_uniform_possible=two_uniform_possible,
        ame_possible=ame_possible,
        verdict=verdict,
    )


@dataclass(frozen=True)
class CertificateCheck:
    """Outcome of replaying the certificate on sampled subspace states."""

    trials: int
    seed: int
    max_identity_residual: float
    min_pair_deficit: float
    deficit_floor: float
    passed: bool


def verify_certificate_numerically(
    basis: SingletBasis,
    trials: int = 100,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
) -> CertificateCheck:
    """Replay the counting identity and deficit floor on random subspace states.

    First validates that the basis really spans an invariant subspace
    (balanced supports, orthonormal members, small invariance residual),
    then draws ``trials`` seeded random combinations and checks that the
    counting sum matches the certificate's exact value within ``tol``
    and the pair deficit never drops below the floor minus ``tol``.

    Raises :class:`CertificateViolationError` on any failure; for an
    honest basis the bounds hold by construction, so a violation means
    the input does not span the subspace it claims to.
    """
    if trials < 1:
        raise ValueError(f"need at least one trial, got {trials}")
    if basis.dimension == 0:
        raise ValueError("basis is empty")
    certificate = certify(basis.shape)
    assert certificate.actual is not None and certificate.deficit_floor is not None
    for position, member in enumerate(basis):
        if not member.has_uniform_support():
            raise CertificateViolationError(
                f"basis member {position} does not have balanced support"
            )
    gram_defect = float(np.abs(basis.gram() - np.eye(basis.dimension)).max())
    if gram_defect > max(tol, 1e-12) * 100:
        raise CertificateViolationError(
            f"basis is not orthonormal (Gram defect {gram_defect:.3e})"
        )
    for position, member in enumerate(basis):
        residual = verify_invariance(member, samples=4, seed=seed + position)
        if residual > max(tol, 1e-12) * 100:
            raise CertificateViolationError(
                f"basis member {position} is not collectively invariant "
                f"(residual {residual:.3e})"
            )
    actual = float(certificate.actual)
    floor = float(certificate.deficit_floor)
    rng = np.random.default_rng(seed)
    worst_identity = 0.0
    least_deficit = float("inf")
    for trial in range(trials):
        state = basis.random_state(rng)
        identity_residual = abs(counting_sum(state, tol) - actual)
        worst_identity = max(worst_identity, identity_residual)
        if identity_residual > tol:
            raise CertificateViolationError(
                f"trial {trial}: counting sum off by {identity_residual:.3e}"
            )
        deficit = pair_deficit(state, tol)
        least_deficit = min(least_deficit, deficit)
        if deficit < floor - tol:
            raise CertificateViolationError(
                f"trial {trial}: pair deficit {deficit:.12g} below floor {floor:.12g}"
            )
    return CertificateCheck(
        trials=trials,
        seed=seed,
        max_identity_residual=worst_identity,
        min_pair_deficit=least_deficit,
        deficit_floor=floor,
        passed=True,
    )


def _fraction_to_dict(value: Fraction | None) -> dict | None:
    if value is None:
        return None
    return {"num": value.numerator, "den": value.denominator}


def certificate_to_dict(certificate: NoGoCertificate) -> dict:
    """Plain-dict form with exact rationals as ``{"num", "den"}`` pairs."""
    return {
        "n": certificate.n,
        "d": certificate.d,
        "divisible": certificate.divisible,
        "K": certificate.copies,
        "required": _fraction_to_dict(certificate.required),
        "required_decimal": float(certificate.required),
        "actual": _fraction_to_dict(certificate.actual),
        "actual_decimal": None if certificate.actual is None else float(certificate.actual),
        "gap": _fraction_to_dict(certificate.gap),
        "gap_decimal": None if certificate.gap is None else float(certificate.gap),
        "deficit_floor": _fraction_to_dict(certificate.deficit_floor),
        "deficit_floor_decimal": (
            None if certificate.deficit_floor is None else float(certificate.deficit_floor)
        ),
        "two_uniform_possible": certificate.two_uniform_possible,
        "ame_possible": certificate.ame_possible,
        "verdict": certificate.verdict,
    }


def check_to_dict(check: CertificateCheck) -> dict:
    return {
        "trials": check.trials,
        "seed": check.seed,
        "max_identity_residual": check.max_identity_residual,
        "min_pair_deficit": check.min_pair_deficit,
        "deficit_floor": check.deficit_floor,
        "passed": check.passed,
    }
