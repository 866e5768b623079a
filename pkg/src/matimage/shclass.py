"""Randomized image classification for semi-homogeneous polynomials.

For a semi-homogeneous polynomial the image is (up to Zariski closure) one
of eight sets, decided by the behavior of g = det/trace^2 on the image:
non-constant g means a dense image; constant g pins the values to scalars
or to trace-zero matrices, refined by observed signs (of the scalar, or of
the discriminant) and by the parity of the weighted degree (odd degree
makes the image a cone, so both signs come for free).

Decisions are Monte Carlo: N seeded generic rational samples, evaluated
exactly.  "All samples zero/scalar/trace-zero" is reported as the identity
holding; with the enforced degree and size caps a false positive requires
hitting a proper subvariety N times, which Schwartz-Zippel makes
vanishingly unlikely.  The signature records the evidence and never claims
exactness for sign-pattern labels the underlying theory leaves open.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import (
    NoWeightProfileError,
    StructuralViolationError,
    SeedFailureError,
    TooLargeError,
    ZeroTraceError,
)
from .mat2 import GenericSampler, Matrix2, RATIONAL
from .ncpoly import NCPoly, evaluate, weight_profile

DEFAULT_SAMPLES = 32
MAX_SH_VARS = 8
MAX_SH_TOTAL_DEGREE = 64
SAMPLE_HEIGHT = 1000


class SHLabel(str, Enum):
    ZERO = "ZERO"
    SCALARS_NONNEG = "SCALARS_NONNEG"
    SCALARS_NONPOS = "SCALARS_NONPOS"
    SCALARS_ALL = "SCALARS_ALL"
    SL2_POSDISC = "SL2_POSDISC"
    SL2_NEGDISC = "SL2_NEGDISC"
    SL2_ALL = "SL2_ALL"
    DENSE = "DENSE"


@dataclass(frozen=True)
class SHSignature:
    """Classification record: label, evidence, and reproducibility data."""

    label: SHLabel
    evidence: dict
    sample_count: int
    seed: int
    confidence_note: str

    def to_json_dict(self) -> dict:
        return {
            "label": self.label.value,
            "evidence": self.evidence,
            "sample_count": self.sample_count,
            "seed": self.seed,
            "confidence_note": self.confidence_note,
        }


def g_ratio(p: NCPoly, args) -> Fraction:
    """det/trace^2 of p evaluated at args, exact over the rationals."""
    v = evaluate(p, tuple(args), domain=RATIONAL)
    t = v.trace()
    if t == 0:
        raise ZeroTraceError("evaluation has zero trace; g is undefined there")
    return v.det() / (t * t)


def _sample_tuple(p: NCPoly, sampler: GenericSampler) -> tuple[Matrix2, ...]:
    return tuple(sampler.matrix() for _ in range(p.num_vars))


def _check_caps(p: NCPoly) -> None:
    if p.num_vars > MAX_SH_VARS:
        raise TooLargeError(f"m={p.num_vars} exceeds the sampling cap of {MAX_SH_VARS}")
    max_deg = max(p.total_degrees(), default=0)
    if max_deg > MAX_SH_TOTAL_DEGREE:
        raise TooLargeError(
            f"total degree {max_deg} exceeds the sampling cap of {MAX_SH_TOTAL_DEGREE}"
        )


def classify_sh(p: NCPoly, samples: int = DEFAULT_SAMPLES, seed: int = 0) -> SHSignature:
    """Eight-way Monte Carlo classification of a semi-homogeneous image.

    Raises NoWeightProfileError when no weight vector with nonzero common
    weighted degree exists.  Deterministic given (p, samples, seed).
    """
    profile = weight_profile(p)
    if profile is None:
        raise NoWeightProfileError(f"{p!r} is not semi-homogeneous of nonzero weighted degree")
    _check_caps(p)
    sampler = GenericSampler(seed, height=SAMPLE_HEIGHT, domain=RATIONAL)
    values = []
    for _ in range(samples):
        args = _sample_tuple(p, sampler)
        values.append(evaluate(p, args, domain=RATIONAL))

    note_base = (
        f"Monte Carlo over {samples} generic rational samples (height {SAMPLE_HEIGHT}); "
        "identities reported without exactness claims"
    )
    if all(v.is_zero() for v in values):
        return SHSignature(
            SHLabel.ZERO,
            {"weights": list(profile.weights), "weighted_degree": profile.weighted_degree},
            samples,
            seed,
            note_base,
        )

    g_seen: dict[Fraction, int] = {}
    for k, v in enumerate(values):
        if v.trace() != 0:
            g = v.det() / (v.trace() * v.trace())
            if g not in g_seen:
                g_seen[g] = k
            if len(g_seen) == 2:
                (g1, k1), (g2, k2) = sorted(g_seen.items(), key=lambda kv: kv[1])
                return SHSignature(
                    SHLabel.DENSE,
                    {
                        "g_values": [str(g1), str(g2)],
                        "sample_indices": [k1, k2],
                        "weights": list(profile.weights),
                        "weighted_degree": profile.weighted_degree,
                    },
                    samples,
                    seed,
                    note_base + "; two distinct g-values certify Zariski density",
                )

    if all(v.is_scalar() for v in values):
        signs = {1 if v.a11 > 0 else -1 for v in values if v.a11 != 0}
        evidence = {
            "scalar_signs": sorted(signs),
            "weights": list(profile.weights),
            "weighted_degree": profile.weighted_degree,
        }
        if profile.weighted_degree % 2 == 1 or signs == {1, -1}:
            label = SHLabel.SCALARS_ALL
            note = note_base
            if signs != {1, -1}:
                note += "; odd weighted degree makes the image a cone, so both signs follow"
        elif signs == {1}:
            label, note = SHLabel.SCALARS_NONNEG, note_base
        else:
            label, note = SHLabel.SCALARS_NONPOS, note_base
        return SHSignature(label, evidence, samples, seed, note)

    if all(v.trace() == 0 for v in values):
        pos = sum(1 for v in values if v.discriminant() > 0)
        neg = sum(1 for v in values if v.discriminant() < 0)
        zero = samples - pos - neg
        evidence = {
            "discriminant_signs": {"positive": pos, "negative": neg, "zero": zero},
            "weights": list(profile.weights),
            "weighted_degree": profile.weighted_degree,
        }
        if pos == 0 and neg == 0:
            raise StructuralViolationError(
                "all sampled values nilpotent: a nonzero polynomial cannot be nilpotent-valued",
                diagnostics=evidence,
            )
        if pos and neg:
            return SHSignature(SHLabel.SL2_ALL, evidence, samples, seed, note_base)
        label = SHLabel.SL2_POSDISC if pos else SHLabel.SL2_NEGDISC
        return SHSignature(
            label,
            evidence,
            samples,
            seed,
            note_base
            + "; observed signature only: whether a trace-zero polynomial can have "
            "single-sign discriminant image is open",
        )

    # mixed shapes with no second g-value: g cannot be constant, so dense
    shapes = {
        "zero": sum(1 for v in values if v.is_zero()),
        "scalar_nonzero": sum(1 for v in values if v.is_scalar() and not v.is_zero()),
        "trace_zero_nonscalar": sum(1 for v in values if v.trace() == 0 and not v.is_scalar()),
        "nonzero_trace": sum(1 for v in values if v.trace() != 0),
    }
    return SHSignature(
        SHLabel.DENSE,
        {
            "shape_mix": shapes,
            "weights": list(profile.weights),
            "weighted_degree": profile.weighted_degree,
        },
        samples,
        seed,
        note_base + "; mixed value shapes imply g is non-constant",
    )


def dense_witness_pair(p: NCPoly, seed: int = 0):
    """Two input tuples with exactly computed distinct g-values.

    Certifies non-constancy of g and hence Zariski density of the image.
    Precondition: classify_sh reports DENSE.
    """
    _check_caps(p)
    sampler = GenericSampler(seed, height=SAMPLE_HEIGHT, domain=RATIONAL)
    first: tuple | None = None
    first_g: Fraction | None = None
    for _ in range(256):
        args = _sample_tuple(p, sampler)
        v = evaluate(p, args, domain=RATIONAL)
        if v.trace() == 0:
            continue
        g = v.det() / (v.trace() * v.trace())
        if first is None:
            first, first_g = args, g
        elif g != first_g:
            return first, args
    raise SeedFailureError(
        "no pair with distinct g-values found; is the polynomial actually DENSE-classified?"
    )
