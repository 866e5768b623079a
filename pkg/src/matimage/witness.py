"""Constructive witness synthesis for multilinear polynomial images.

Given a multilinear polynomial p and a target matrix A inside the
classified image, produce an input tuple realizing A together with a
re-verifiable certificate.  The constructions split by target type:

* trace-zero, nilpotent, scalar, and plane targets are linear-algebraic
  and yield exact rational (or GF(p)) certificates with residual zero;
* targets with nonzero trace and generic spectrum need a continuity
  argument: build a path of evaluations whose det/trace^2 ratio straddles
  the target's, bisect to the crossing, rescale one slot to match traces,
  and conjugate the result onto the target.  Those certificates are float
  with honest residuals.

All randomness flows through seeded samplers, so every certificate is
reproducible from (polynomial, target, seed).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import (
    BisectionStallError,
    DegeneratePathError,
    DomainError,
    NoPlaneError,
    NotInImageError,
    StructuralViolationError,
    SeedFailureError,
)
from .mat2 import (
    Domain,
    FLOAT64,
    GenericSampler,
    GFDomain,
    Matrix2,
    RATIONAL,
    _cyclic_basis,
)
from .mlclass import (
    ImageClassML,
    ImageLabel,
    SpanLabel,
    chi_flip,
    chi_index,
    classify,
    locate_offdiagonal,
    unit_matrix,
    unit_table,
)
from .ncpoly import NCPoly, evaluate

# Centralized tolerances.  The zero-discriminant target sits on the
# discriminant surface where conditioning is worst, hence its looser bound.
BISECT_TOL = 1e-12
DISCR_TOL = 1e-10
RESIDUAL_TOL_DISTINCT = 1e-6
RESIDUAL_TOL_ZERO_DISCR = 1e-5
SEED_EPSILON = 1e-3
SEED_RETRIES = 40
CHAIN_RETRIES = 10
BISECT_MAX_ITER = 200

DEFAULT_SEED = 101


@dataclass(frozen=True)
class WitnessCertificate:
    """Input tuple, achieved matrix, target, residual, and construction log."""

    poly: NCPoly
    inputs: tuple[Matrix2, ...]
    achieved: Matrix2
    target: Matrix2
    residual: object
    transcript: tuple[dict, ...]

    def reevaluate(self) -> Matrix2:
        return evaluate(self.poly, self.inputs, domain=self.achieved.domain)

    def verify(self) -> bool:
        """Re-evaluate the inputs and check them against achieved and residual."""
        fresh = self.reevaluate()
        dom = fresh.domain
        if isinstance(dom, GFDomain):
            return fresh == self.achieved == self.target and self.residual == 0
        if dom.exact:
            if fresh != self.achieved:
                return False
            return (fresh - self.target).max_norm() == self.residual
        scale = max(1.0, self.achieved.max_norm())
        if (fresh - self.achieved).max_norm() > 1e-12 * scale:
            return False
        return abs((fresh - self.target).max_norm() - self.residual) <= 1e-12 * max(1.0, self.residual)

    def to_json_dict(self) -> dict:
        residual = str(self.residual) if isinstance(self.residual, Fraction) else self.residual
        return {
            "domain": self.achieved.domain.name,
            "inputs": [m.to_json() for m in self.inputs],
            "achieved": self.achieved.to_json(),
            "target": self.target.to_json(),
            "residual": residual,
            "transcript": list(self.transcript),
        }


def _certificate(p, inputs, target, transcript) -> WitnessCertificate:
    achieved = evaluate(p, tuple(inputs), domain=target.domain)
    if isinstance(target.domain, GFDomain):
        if achieved != target:
            raise StructuralViolationError(
                "exact GF construction missed its target",
                diagnostics={"achieved": achieved.entries(), "target": target.entries()},
            )
        residual = 0
    else:
        residual = (achieved - target).max_norm()
    return WitnessCertificate(p, tuple(inputs), achieved, target, residual, tuple(transcript))


def _zero_tuple_certificate(p: NCPoly, target: Matrix2) -> WitnessCertificate:
    inputs = tuple(Matrix2.zero(target.domain) for _ in range(p.num_vars))
    return _certificate(p, inputs, target, [{"step": "zero-tuple"}])


# ---------------------------------------------------------------------------
# plane realizers (2-dimensional exact images inside the off-diagonal or
# diagonal plane, built from a minimal-distance pair of flip vertices)


@dataclass(frozen=True)
class PlaneRealizer:
    """Exactly realizes the plane <e12,e21> or <e11,e22> inside Image p.

    base_units fixes one matrix-unit tuple; vertices are its per-slot
    chi-flips, indexed by bitmask.  mask_a/mask_b name the minimal-distance
    pair of vertices with non-proportional values v1, v2; minimality forces
    every strictly intermediate vertex between them to vanish, which is
    what makes the two-parameter combination land exactly on a*v1 + b*v2.
    """

    poly: NCPoly
    domain: Domain
    plane: str  # "offdiagonal" | "diagonal"
    base_units: tuple[int, ...]
    mask_a: int
    mask_b: int
    v1: Matrix2
    v2: Matrix2

    @property
    def diff_mask(self) -> int:
        return self.mask_a ^ self.mask_b

    def basis_targets(self) -> tuple[Matrix2, Matrix2]:
        dom = self.domain
        if self.plane == "offdiagonal":
            return Matrix2.unit(dom, 1, 2), Matrix2.unit(dom, 2, 1)
        return Matrix2.unit(dom, 1, 1), Matrix2.unit(dom, 2, 2)


def _flip_units(base: tuple[int, ...], mask: int) -> tuple[int, ...]:
    return tuple(chi_index(u) if (mask >> s) & 1 else u for s, u in enumerate(base))


def _plane_coords(v: Matrix2, plane: str):
    if plane == "offdiagonal":
        return (v.a12, v.a21)
    return (v.a11, v.a22)


def _in_plane(v: Matrix2, plane: str) -> bool:
    dom = v.domain
    if plane == "offdiagonal":
        return dom.is_zero(v.a11) and dom.is_zero(v.a22)
    return dom.is_zero(v.a12) and dom.is_zero(v.a21)


def _direction(coords, dom: Domain):
    c1, c2 = coords
    if not dom.is_zero(c1):
        return ("x", c2 / c1)
    return ("y",)


def _min_distance_pair(vertices: list[tuple[int, tuple]], dom: Domain):
    """Minimal Hamming-distance pair of non-proportional vertex values."""
    by_dir: dict = {}
    for mask, coords in vertices:
        by_dir.setdefault(_direction(coords, dom), []).append(mask)
    dirs = list(by_dir.values())
    if len(dirs) < 2:
        return None
    best = None
    for i in range(len(dirs)):
        for j in range(i + 1, len(dirs)):
            for ma in dirs[i]:
                for mb in dirs[j]:
                    a, b = (ma, mb) if ma < mb else (mb, ma)
                    key = ((a ^ b).bit_count(), a, b)
                    if best is None or key < best:
                        best = key
    return (best[1], best[2]) if best else None


def _proper_submasks(mask: int):
    sub = (mask - 1) & mask
    while sub:
        yield sub
        sub = (sub - 1) & mask


def plane_realizer(p: NCPoly, plane: str, domain: Domain = RATIONAL) -> PlaneRealizer:
    """Build a plane realizer for the requested plane.

    Scans chi-flip orbits of unit tuples whose value lies in the plane (a
    nonzero off-diagonal value, or a non-scalar diagonal value), finds the
    minimal-distance non-proportional vertex pair inside the orbit, and
    verifies that all strictly intermediate vertices vanish.  Raises
    NoPlaneError when no orbit supplies a non-proportional pair.
    """
    if plane not in ("offdiagonal", "diagonal"):
        raise ValueError(f"unknown plane {plane!r}")
    table = unit_table(p, domain)
    dom = table.domain
    cls = classify(p, domain)
    if cls.label is ImageLabel.ZERO:
        raise NoPlaneError("the zero polynomial realizes no plane", evidence=cls.to_json_dict())
    seen_orbits: set = set()
    qualifying = 0
    for units in table.tuples():
        v = table.value_at(units)
        if v.is_zero():
            continue
        if plane == "offdiagonal":
            ok = not _in_plane(v, "diagonal")
        else:
            ok = _in_plane(v, "diagonal") and not v.is_scalar()
        if not ok:
            continue
        qualifying += 1
        orbit_key = tuple(min(u, chi_index(u)) for u in units)
        if orbit_key in seen_orbits:
            continue
        seen_orbits.add(orbit_key)
        m = table.num_vars
        vertices = []
        for mask in range(1 << m):
            val = table.value_at(_flip_units(units, mask))
            if val.is_zero():
                continue
            if not _in_plane(val, plane):
                raise StructuralViolationError(
                    "orbit mixes diagonal and off-diagonal values",
                    diagnostics={"base": units, "mask": mask, "value": val.entries()},
                )
            vertices.append((mask, _plane_coords(val, plane)))
        pair = _min_distance_pair(vertices, dom)
        if pair is None:
            continue
        mask_a, mask_b = pair
        diff = mask_a ^ mask_b
        for sub in _proper_submasks(diff):
            inter = table.value_at(_flip_units(units, mask_a ^ sub))
            if not inter.is_zero():
                raise StructuralViolationError(
                    "strict intermediate vertex of a minimal pair is nonzero",
                    diagnostics={"base": units, "pair": pair, "sub": sub, "value": inter.entries()},
                )
        return PlaneRealizer(
            p,
            dom,
            plane,
            units,
            mask_a,
            mask_b,
            table.value_at(_flip_units(units, mask_a)),
            table.value_at(_flip_units(units, mask_b)),
        )
    raise NoPlaneError(
        f"no unit-tuple orbit realizes the {plane} plane",
        evidence={"class": cls.to_json_dict(), "qualifying_tuples": qualifying},
    )


def realize_in_plane(realizer: PlaneRealizer, c1, c2) -> WitnessCertificate:
    """Exact witness for c1*e12 + c2*e21 (or c1*e11 + c2*e22), residual zero."""
    dom = realizer.domain
    c1, c2 = dom.coerce(c1), dom.coerce(c2)
    v1c = _plane_coords(realizer.v1, realizer.plane)
    v2c = _plane_coords(realizer.v2, realizer.plane)
    den = v1c[0] * v2c[1] - v1c[1] * v2c[0]
    # non-proportionality of v1, v2 guarantees den != 0
    a = (c1 * v2c[1] - c2 * v2c[0]) / den
    b = (v1c[0] * c2 - v1c[1] * c1) / den
    diff = realizer.diff_mask
    anchor = (diff & -diff).bit_length() - 1
    inputs = []
    for s, u in enumerate(realizer.base_units):
        bit = 1 << s
        ua = chi_index(u) if realizer.mask_a & bit else u
        ub = chi_index(u) if realizer.mask_b & bit else u
        if not diff & bit:
            inputs.append(unit_matrix(dom, ua))
        elif s == anchor:
            inputs.append(unit_matrix(dom, ua).scale(a) + unit_matrix(dom, ub).scale(b))
        else:
            inputs.append(unit_matrix(dom, ua) + unit_matrix(dom, ub))
    e1, e2 = realizer.basis_targets()
    target = e1.scale(c1) + e2.scale(c2)
    cert = _certificate(
        realizer.poly,
        inputs,
        target,
        [
            {
                "step": "plane-combination",
                "plane": realizer.plane,
                "a": dom.to_json(a),
                "b": dom.to_json(b),
                "mask_a": realizer.mask_a,
                "mask_b": realizer.mask_b,
            }
        ],
    )
    if cert.achieved != target:
        raise StructuralViolationError(
            "plane combination failed to land on the target exactly",
            diagnostics={"achieved": cert.achieved.entries(), "target": target.entries()},
        )
    return cert


# ---------------------------------------------------------------------------
# exact constructions


def _exactify(a: Matrix2) -> Matrix2:
    return a.to_domain(RATIONAL) if a.domain is FLOAT64 else a


def _span_at_least_sl2(p: NCPoly, domain: Domain) -> ImageClassML:
    cls = classify(p, domain)
    if cls.span_label not in (SpanLabel.SL2, SpanLabel.FULL):
        raise NotInImageError(
            f"image class {cls.label.value} contains no non-scalar trace-zero matrices",
            image_class=cls,
        )
    return cls


def _conjugation_matrix_for_tracezero(a: Matrix2) -> Matrix2:
    """Q whose basis (v, Av) rewrites the trace-zero target as c1*e12 + c2*e21."""
    dom = a.domain
    z, o = dom.zero(), dom.one()
    for v in ((o, z), (z, o), (o, o)):
        w = a.apply(v)
        det = v[0] * w[1] - v[1] * w[0]
        if not dom.is_zero(det):
            return Matrix2(dom, v[0], w[0], v[1], w[1])
    raise NotInImageError("target is scalar; no cyclic vector exists")


def witness_trace_zero(p: NCPoly, a: Matrix2) -> WitnessCertificate:
    """Exact witness for a trace-zero target (zero residual).

    Realizes -det(A)*e12 + e21 in the off-diagonal plane and conjugates by
    the basis (v, Av) for a non-eigenvector v.  Works over any exact
    domain; float targets are converted losslessly to rationals first.
    """
    a = _exactify(a)
    dom = a.domain
    if not dom.is_zero(a.trace()):
        raise NotInImageError("target has nonzero trace; route to the general paths")
    if a.is_zero():
        return _zero_tuple_certificate(p, a)
    if a.is_scalar():
        raise NotInImageError("scalar trace-zero target; route to the scalar path")
    _span_at_least_sl2(p, dom)
    realizer = plane_realizer(p, "offdiagonal", dom)
    base = realize_in_plane(realizer, -a.det(), dom.one())
    q = _conjugation_matrix_for_tracezero(a)
    qinv = q.inverse()
    inputs = tuple(q * x * qinv for x in base.inputs)
    transcript = base.transcript + ({"step": "basis-conjugation", "P": q.to_json()},)
    cert = _certificate(p, inputs, a, transcript)
    if cert.residual != 0:
        raise StructuralViolationError(
            "trace-zero construction missed its target",
            diagnostics={"achieved": cert.achieved.entries(), "target": a.entries()},
        )
    return cert


def _scalar_witness(p: NCPoly, a: Matrix2, exact_domain: Domain) -> WitnessCertificate:
    """Exact witness for a nonzero scalar target.

    Prefers the diagonal plane realizer; when no diagonal plane exists
    (central polynomials) falls back to rescaling a unit tuple whose value
    is already scalar.
    """
    if a.domain != exact_domain:
        raise DomainError("scalar witness target must live in the construction domain")
    c = a.a11
    try:
        realizer = plane_realizer(p, "diagonal", exact_domain)
        return realize_in_plane(realizer, c, c)
    except NoPlaneError as no_plane:
        table = unit_table(p, exact_domain)
        for units in table.tuples():
            v = table.value_at(units)
            if v.is_scalar() and not v.is_zero():
                s = v.a11
                inputs = [unit_matrix(exact_domain, u) for u in units]
                inputs[0] = inputs[0].scale(c / s)
                target = Matrix2.scalar(exact_domain, c)
                return _certificate(
                    p,
                    inputs,
                    target,
                    [
                        {
                            "step": "scalar-rescale",
                            "units": list(units),
                            "factor": exact_domain.to_json(c / s),
                        }
                    ],
                )
        raise NotInImageError(
            "no scalar value reachable from unit tuples", image_class=no_plane.evidence
        )


# ---------------------------------------------------------------------------
# float continuity paths


def _ratio(v: Matrix2) -> float:
    t = v.trace()
    return v.det() / (t * t)


def _perturb_until(
    p: NCPoly,
    base: tuple[Matrix2, ...],
    predicate: Callable[[Matrix2], bool],
    sampler: GenericSampler,
    what: str,
):
    """Add shrinking random perturbations to a float tuple until the
    evaluated value satisfies the predicate; SEED_RETRIES halvings."""
    eps = SEED_EPSILON
    last = None
    for _ in range(SEED_RETRIES):
        cand = tuple(b + sampler.matrix().scale(eps) for b in base)
        val = evaluate(p, cand, domain=FLOAT64)
        if predicate(val):
            return cand, val, eps
        last = val
        eps /= 2.0
    ratio = _ratio(last) if last is not None and last.trace() != 0 else None
    raise SeedFailureError(
        f"could not seed {what} after {SEED_RETRIES} halvings; last value {last!r} "
        f"(ratio {ratio}, discriminant {None if last is None else last.discriminant()})"
    )


def _float_inputs(cert_inputs: Sequence[Matrix2]) -> tuple[Matrix2, ...]:
    return tuple(m.to_domain(FLOAT64) for m in cert_inputs)


def _exact_sl2_anchor_inputs(p: NCPoly):
    """Float copies of exact witnesses for diag(1,-1) and e12 - e21."""
    omega = Matrix2.of(RATIONAL, 1, 0, 0, -1)
    upsilon = Matrix2.of(RATIONAL, 0, 1, -1, 0)
    wom = witness_trace_zero(p, omega)
    wup = witness_trace_zero(p, upsilon)
    return _float_inputs(wom.inputs), _float_inputs(wup.inputs)


def _require_full(p: NCPoly) -> ImageClassML:
    cls = classify(p, FLOAT64)
    if cls.label is not ImageLabel.FULL:
        raise NotInImageError(
            f"image class is {cls.label.value}; the continuity paths need FULL",
            image_class=cls,
        )
    return cls


def ratio_seed_tuples(p: NCPoly, q: float, seed: int = DEFAULT_SEED):
    """Two float tuples whose det/trace^2 ratios straddle q.

    Perturbs exact witnesses of diag(1,-1) (ratio -> -inf as the trace
    vanishes) and e12 - e21 (ratio -> +inf), shrinking the perturbation
    until the straddle and nonzero traces hold.
    """
    _require_full(p)
    q = float(q)
    xs, ys, _ = _ratio_seeds(p, q, GenericSampler(seed, domain=FLOAT64))
    return xs, ys


def _ratio_seeds(p: NCPoly, q: float, sampler: GenericSampler):
    base_x, base_y = _exact_sl2_anchor_inputs(p)
    xs, xval, eps_x = _perturb_until(
        p,
        base_x,
        lambda v: v.trace() != 0.0 and _ratio(v) <= q,
        sampler.fork(1),
        f"the low-ratio side (target ratio <= {q})",
    )
    ys, yval, eps_y = _perturb_until(
        p,
        base_y,
        lambda v: v.trace() != 0.0 and _ratio(v) >= q,
        sampler.fork(2),
        f"the high-ratio side (target ratio >= {q})",
    )
    return xs, ys, {"epsilon_x": eps_x, "epsilon_y": eps_y, "ratio_x": _ratio(xval), "ratio_y": _ratio(yval)}


def _bisect(f: Callable[[float], float], lo: float, hi: float, tol: float):
    """First crossing of f inside [lo, hi] to |f| <= tol; f(lo), f(hi) must
    have opposite signs (or already satisfy the tolerance)."""
    flo, fhi = f(lo), f(hi)
    if abs(flo) <= tol:
        return lo, flo, 0
    if abs(fhi) <= tol:
        return hi, fhi, 0
    if (flo > 0) == (fhi > 0):
        raise BisectionStallError(f"no sign change on the segment: f={flo!r}..{fhi!r}")
    for it in range(1, BISECT_MAX_ITER + 1):
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if abs(fmid) <= tol:
            return mid, fmid, it
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi, fhi = mid, fmid
    raise BisectionStallError(f"bisection did not reach |f| <= {tol} in {BISECT_MAX_ITER} iterations")


def _lerp(a: Matrix2, b: Matrix2, t: float) -> Matrix2:
    return a.scale(1.0 - t) + b.scale(t)


def _companion_conjugator(b: Matrix2, a: Matrix2) -> Matrix2 | None:
    """P with P*B*P^-1 ~= A via cyclic bases; no characteristic-poly gate."""
    qb = _cyclic_basis(b)
    qa = _cyclic_basis(a)
    if qa is None or qb is None:
        return None
    return qa * qb.inverse()


def witness_distinct_eigs(p: NCPoly, a: Matrix2, seed: int = DEFAULT_SEED) -> WitnessCertificate:
    """Float witness for a target with nonzero trace and distinct eigenvalues.

    Pipeline: set q = det A / tr^2 A; seed tuples whose ratios straddle q;
    walk the chain that swaps in the high-side entries one slot at a time
    (sign-flipping each replacement to keep traces positive, which keeps
    the ratio defined along every affine segment); bisect the straddling
    segment to |ratio - q| <= BISECT_TOL; rescale slot one to match traces;
    conjugate onto the target.
    """
    a = a.to_domain(FLOAT64) if a.domain is not FLOAT64 else a
    _require_full(p)
    tr_a = a.trace()
    if tr_a == 0.0:
        raise NotInImageError("trace-zero target; use the exact trace-zero path")
    if _exactify(a).discriminant() == 0:
        raise NotInImageError("zero-discriminant target; use witness_zero_discr")
    q = a.det() / (tr_a * tr_a)
    m = p.num_vars
    root = GenericSampler(seed, domain=FLOAT64)
    last_error: Exception | None = None
    for attempt in range(CHAIN_RETRIES):
        sampler = root.fork(attempt)
        try:
            xs, ys, seed_info = _ratio_seeds(p, q, sampler)
            current = list(xs)
            v = evaluate(p, current, domain=FLOAT64)
            if v.trace() == 0.0:
                raise SeedFailureError("chain node with exactly zero trace")
            signs = []
            if v.trace() < 0.0:
                current[0] = -current[0]
                v = -v
                signs.append(-1)
            else:
                signs.append(1)
            psis = [_ratio(v)]
            segments = []  # (tuple before swap, slot, old value, new value)
            for j in range(m):
                old = current[j]
                new = ys[j]
                cand = list(current)
                cand[j] = new
                v = evaluate(p, cand, domain=FLOAT64)
                if v.trace() == 0.0:
                    raise SeedFailureError("chain node with exactly zero trace")
                if v.trace() < 0.0:
                    new = -new
                    cand[j] = new
                    v = -v
                    signs.append(-1)
                else:
                    signs.append(1)
                segments.append((tuple(current), j, old, new))
                current = cand
                psis.append(_ratio(v))
            seg_index = None
            for j in range(m):
                if (psis[j] - q) * (psis[j + 1] - q) <= 0.0:
                    seg_index = j
                    break
            if seg_index is None:
                raise SeedFailureError(f"no ratio straddle along the chain: {psis} vs q={q}")
            base_tuple, slot, old, new = segments[seg_index]

            def path_value(t: float) -> Matrix2:
                tup = list(base_tuple)
                tup[slot] = _lerp(old, new, t)
                return evaluate(p, tup, domain=FLOAT64)

            tau, f_tau, iters = _bisect(lambda t: _ratio(path_value(t)) - q, 0.0, 1.0, BISECT_TOL)
            witness_inputs = list(base_tuple)
            witness_inputs[slot] = _lerp(old, new, tau)
            path_inputs = [x.to_json() for x in witness_inputs]
            m_tau = evaluate(p, witness_inputs, domain=FLOAT64)
            c = tr_a / m_tau.trace()
            witness_inputs[0] = witness_inputs[0].scale(c)
            b = evaluate(p, witness_inputs, domain=FLOAT64)
            conj = _companion_conjugator(b, a)
            if conj is None:
                raise DegeneratePathError("path value or target unexpectedly scalar")
            conj_inv = conj.inverse()
            final_inputs = tuple(conj * x * conj_inv for x in witness_inputs)
            transcript = (
                {"step": "seed", **seed_info},
                {"step": "chain", "index": seg_index, "signs": signs, "ratios": psis},
                {
                    "step": "bisection",
                    "slot": slot,
                    "tau": tau,
                    "psi_at_tau": f_tau + q,
                    "iterations": iters,
                    "segment_old": old.to_json(),
                    "segment_new": new.to_json(),
                    "path_inputs": path_inputs,
                },
                {"step": "scale", "slot": 1, "factor": c},
                {"step": "conjugate", "P": conj.to_json()},
            )
            cert = _certificate(p, final_inputs, a, transcript)
            if cert.residual <= RESIDUAL_TOL_DISTINCT * max(1.0, a.max_norm()):
                return cert
            last_error = SeedFailureError(
                f"residual {cert.residual} above tolerance on attempt {attempt}"
            )
        except (SeedFailureError, BisectionStallError, DegeneratePathError) as exc:
            last_error = exc
    raise last_error if last_error is not None else SeedFailureError("no attempt succeeded")


def _nilpotent_witness(p: NCPoly, a: Matrix2) -> WitnessCertificate:
    """Exact witness for a nonzero nilpotent target via the e12 route."""
    dom = a.domain
    units, c, pos = locate_offdiagonal(p, dom)
    inputs = list(units)
    if pos == (2, 1):
        inputs = list(chi_flip(inputs))
    inputs[0] = inputs[0].scale(dom.one() / c)
    e12 = Matrix2.unit(dom, 1, 2)
    base_val = evaluate(p, inputs, domain=dom)
    if base_val != e12:
        raise StructuralViolationError(
            "normalized off-diagonal tuple did not evaluate to e12",
            diagnostics={"value": base_val.entries()},
        )
    # basis (Av, v) for any v outside ker A rewrites A as e12
    z, o = dom.zero(), dom.one()
    for v in ((o, z), (z, o)):
        w = a.apply(v)
        if not (dom.is_zero(w[0]) and dom.is_zero(w[1])):
            qmat = Matrix2(dom, w[0], v[0], w[1], v[1])
            break
    else:
        raise NotInImageError("zero target; use the zero tuple")
    qinv = qmat.inverse()
    final = tuple(qmat * x * qinv for x in inputs)
    transcript = (
        {"step": "offdiagonal-normalize", "scale": dom.to_json(dom.one() / c), "chi": pos == (2, 1)},
        {"step": "basis-conjugation", "P": qmat.to_json()},
    )
    cert = _certificate(p, final, a, transcript)
    if cert.residual != 0:
        raise StructuralViolationError("nilpotent construction missed its target")
    return cert


def witness_zero_discr(p: NCPoly, a: Matrix2, seed: int = DEFAULT_SEED) -> WitnessCertificate:
    """Witness for a non-scalar target with zero discriminant.

    Nilpotent targets get an exact certificate (conjugate the e12 witness).
    Otherwise follow a float path from a positive-discriminant evaluation
    to a negative-discriminant one, bisect the discriminant to
    |discr| <= DISCR_TOL, reject scalar or near-nilpotent crossings by
    resampling, rescale slot one to match the repeated eigenvalue, and
    conjugate onto the target.
    """
    if a.is_scalar():
        raise NotInImageError("scalar target; use the scalar path")
    exact_target = _exactify(a)
    if exact_target.discriminant() != 0:
        raise NotInImageError("target has nonzero discriminant; use witness_distinct_eigs")
    if exact_target.trace() == 0 and exact_target.det() == 0:
        _span_at_least_sl2(p, exact_target.domain)
        return _nilpotent_witness(p, exact_target)
    _require_full(p)
    a = a.to_domain(FLOAT64) if a.domain is not FLOAT64 else a
    tr_a = a.trace()
    root = GenericSampler(seed, domain=FLOAT64)
    base_x, base_y = _exact_sl2_anchor_inputs(p)
    m = p.num_vars
    last_error: Exception | None = None
    for attempt in range(CHAIN_RETRIES):
        sampler = root.fork(attempt)
        try:
            xs, _, eps_x = _perturb_until(
                p, base_x, lambda v: v.discriminant() > 0.0, sampler.fork(1), "the positive-discriminant side"
            )
            ys, _, eps_y = _perturb_until(
                p, base_y, lambda v: v.discriminant() < 0.0, sampler.fork(2), "the negative-discriminant side"
            )
            current = list(xs)
            discrs = [evaluate(p, current, domain=FLOAT64).discriminant()]
            segments = []
            for j in range(m):
                old = current[j]
                cand = list(current)
                cand[j] = ys[j]
                segments.append((tuple(current), j, old, ys[j]))
                current = cand
                discrs.append(evaluate(p, current, domain=FLOAT64).discriminant())
            seg_index = None
            for j in range(m):
                if discrs[j] * discrs[j + 1] <= 0.0:
                    seg_index = j
                    break
            if seg_index is None:
                raise SeedFailureError(f"no discriminant straddle: {discrs}")
            base_tuple, slot, old, new = segments[seg_index]

            def path_value(t: float) -> Matrix2:
                tup = list(base_tuple)
                tup[slot] = _lerp(old, new, t)
                return evaluate(p, tup, domain=FLOAT64)

            # bisect well below DISCR_TOL: the slot rescale multiplies the
            # discriminant by c^2 and conjugation adds float noise
            tau, d_tau, iters = _bisect(
                lambda t: path_value(t).discriminant(), 0.0, 1.0, DISCR_TOL * 1e-4
            )
            m_tau = path_value(tau)
            scale = max(1.0, m_tau.max_norm())
            if (m_tau - Matrix2.scalar(FLOAT64, m_tau.trace() / 2.0)).max_norm() <= 1e-9 * scale:
                raise DegeneratePathError("path crossed the discriminant surface at a scalar")
            if abs(m_tau.trace()) <= 1e-6 * scale:
                raise DegeneratePathError("path crossed near a nilpotent matrix")
            c = tr_a / m_tau.trace()
            witness_inputs = list(base_tuple)
            witness_inputs[slot] = _lerp(old, new, tau)
            witness_inputs[0] = witness_inputs[0].scale(c)
            b = evaluate(p, witness_inputs, domain=FLOAT64)
            conj = _companion_conjugator(b, a)
            if conj is None:
                raise DegeneratePathError("degenerate cyclic basis at the crossing")
            conj_inv = conj.inverse()
            final_inputs = tuple(conj * x * conj_inv for x in witness_inputs)
            transcript = (
                {"step": "seed", "epsilon_x": eps_x, "epsilon_y": eps_y},
                {"step": "chain", "index": seg_index, "discriminants": discrs},
                {
                    "step": "bisection",
                    "slot": slot,
                    "tau": tau,
                    "discr_at_tau": d_tau,
                    "iterations": iters,
                    "segment_old": old.to_json(),
                    "segment_new": new.to_json(),
                },
                {"step": "scale", "slot": 1, "factor": c},
                {"step": "conjugate", "P": conj.to_json()},
            )
            cert = _certificate(p, final_inputs, a, transcript)
            # the discriminant scales with the square of the norm
            if (
                cert.residual <= RESIDUAL_TOL_ZERO_DISCR * max(1.0, a.max_norm())
                and abs(cert.achieved.discriminant()) <= DISCR_TOL * max(1.0, a.max_norm()) ** 2
            ):
                return cert
            last_error = DegeneratePathError(
                f"residual {cert.residual} or achieved discriminant "
                f"{cert.achieved.discriminant()} above tolerance on attempt {attempt}"
            )
        except (SeedFailureError, BisectionStallError, DegeneratePathError) as exc:
            last_error = exc
    raise last_error if last_error is not None else DegeneratePathError("no attempt succeeded")


# ---------------------------------------------------------------------------
# dispatch


def synthesize(
    p: NCPoly, a: Matrix2, domain: Domain | None = None, seed: int = DEFAULT_SEED
) -> WitnessCertificate:
    """Witness any target in the classified image; NotInImageError otherwise.

    Dispatch: zero target -> zero tuple; nonzero scalar -> diagonal plane
    (or direct rescale for central polynomials); trace-zero non-scalar ->
    exact construction; remaining targets need the float continuity paths,
    split on the discriminant.  Over exact domains those last targets are
    not certifiable and raise NotInImageError directing to the float
    domain.
    """
    if domain is None:
        domain = a.domain
    if a.domain != domain:
        if domain is FLOAT64:
            a = a.to_domain(FLOAT64)
        elif a.domain is FLOAT64:
            a = a.to_domain(RATIONAL) if domain is RATIONAL else a
        if a.domain != domain:
            raise DomainError("target matrix domain disagrees with the requested domain")
    cls = classify(p, domain)
    if a.is_zero():
        return _zero_tuple_certificate(p, a)
    # exact membership precheck against the span
    if cls.span_label is SpanLabel.ZERO:
        raise NotInImageError("the polynomial is an identity; only the zero matrix is reachable", image_class=cls)
    exact_domain = RATIONAL if domain in (RATIONAL, FLOAT64) else domain
    exact_a = _exactify(a) if domain in (RATIONAL, FLOAT64) else a
    if exact_a.is_scalar():
        if cls.span_label is SpanLabel.SL2 and not exact_domain.is_zero(exact_a.trace()):
            raise NotInImageError("scalar target outside the trace-zero span", image_class=cls)
        cert = _scalar_witness(p, exact_a, exact_domain)
        return cert
    if cls.span_label is SpanLabel.SCALARS:
        raise NotInImageError("central polynomial: image holds scalars only", image_class=cls)
    if exact_domain.is_zero(exact_a.trace()):
        return witness_trace_zero(p, exact_a)
    if cls.span_label is SpanLabel.SL2:
        raise NotInImageError("target has nonzero trace but the image is trace-zero", image_class=cls)
    # span is full and the target is non-scalar with nonzero trace
    if domain is not FLOAT64:
        raise NotInImageError(
            "membership of generic nonzero-trace targets is only certified over the "
            "float domain (the construction is a continuity argument)",
            image_class=cls,
        )
    if exact_a.discriminant() == 0:
        return witness_zero_discr(p, a, seed=seed)
    return witness_distinct_eigs(p, a, seed=seed)
