"""Exhaustive ground-truth images over M2(GF(q)) for small q.

Enumerates p(a_1,...,a_m) over every tuple of 2x2 matrices mod q and
collects the exact image set, encoded as 4-digit base-q integers.  Over a
finite field the image of a zero-constant-term polynomial is precisely a
conjugation-invariant set containing 0, so closure under GL2(GF(q))
conjugation is the sanity check, and the set's linear span is an
independent oracle for the multilinear classifier.

The enumeration is vectorized: multilinear polynomials contract the
matrix-unit value table against the coordinate array of all q^4 matrices
(one tensordot per slot); general polynomials build per-word product
tensors over the axes of the variables that actually occur.  Work is
chunked along the first axis so memory stays bounded regardless of q^4m.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

import numpy as np

from .errors import TooLargeError
from .mat2 import GF, GFDomain, Matrix2
from .mlclass import SpanLabel, classify, span_label_of_values, unit_table
from .ncpoly import NCPoly, is_multilinear

ENUM_CAP = 10**8
CHUNK_TUPLES = 1 << 21  # tuples materialized per chunk; bounds peak memory
CONJ_CHECK_CAP = 10**7


def encode_matrix(a11: int, a12: int, a21: int, a22: int, q: int) -> int:
    return ((a11 * q + a12) * q + a21) * q + a22


def decode_matrix(e: int, q: int) -> Matrix2:
    a22 = e % q
    e //= q
    a21 = e % q
    e //= q
    a12 = e % q
    a11 = e // q
    return Matrix2.of(GF(q), a11, a12, a21, a22)


def _all_matrices(q: int) -> np.ndarray:
    """All q^4 matrices mod q, shape (q^4, 2, 2), index = encoded value."""
    idx = np.arange(q**4, dtype=np.int64)
    a22 = idx % q
    a21 = (idx // q) % q
    a12 = (idx // q**2) % q
    a11 = idx // q**3
    return np.stack(
        [np.stack([a11, a12], axis=-1), np.stack([a21, a22], axis=-1)], axis=-2
    )


def _encode_array(vals: np.ndarray, q: int) -> np.ndarray:
    return ((vals[..., 0, 0] * q + vals[..., 0, 1]) * q + vals[..., 1, 0]) * q + vals[..., 1, 1]


@dataclass(frozen=True)
class FFImage:
    """Exact image of p over M2(GF(q)): sorted encoded values."""

    q: int
    num_vars: int
    image: tuple[int, ...]
    tuple_count: int

    @cached_property
    def members(self) -> frozenset[int]:
        return frozenset(self.image)

    def __contains__(self, item) -> bool:
        if isinstance(item, Matrix2):
            g = item.domain
            if not isinstance(g, GFDomain) or g.p != self.q:
                return False
            item = encode_matrix(*[e.value for e in item.entries()], self.q)
        return item in self.members

    def matrices(self) -> Iterator[Matrix2]:
        for e in self.image:
            yield decode_matrix(e, self.q)

    def to_json_dict(self) -> dict:
        return {
            "q": self.q,
            "num_vars": self.num_vars,
            "size": len(self.image),
            "tuple_count": self.tuple_count,
            "values": list(self.image),
        }


def _coeffs_mod(p: NCPoly, q: int) -> dict:
    dom = GF(q)
    return {word: dom.from_fraction(c).value for word, c in p.terms.items()}


def _collect_codes(vals: np.ndarray, q: int, found: set[int]) -> None:
    codes = _encode_array(vals, q)
    counts = np.bincount(codes.reshape(-1).astype(np.int64), minlength=q**4)
    found.update(np.nonzero(counts)[0].tolist())


def _enumerate_multilinear(p: NCPoly, q: int) -> set[int]:
    # contractions run in float64 (exact: every intermediate stays far below
    # 2**53) because BLAS makes them much faster than integer tensordot
    table = unit_table(p, GF(q))
    m = p.num_vars
    core = np.array(
        [[e.value for e in v.entries()] for v in table.values], dtype=np.float64
    ).reshape((4,) * m + (2, 2))
    coords = _all_matrices(q).reshape(q**4, 4).astype(np.float64)
    per_axis = max(1, CHUNK_TUPLES // max(1, (q**4) ** (m - 1)))
    found: set[int] = set()
    for start in range(0, q**4, per_axis):
        sub = coords[start : start + per_axis]
        r = np.tensordot(core, sub, axes=([0], [1])) % q  # (4,)*(m-1) + (2,2) + (n,)
        for _ in range(m - 1):
            r = np.tensordot(r, coords, axes=([0], [1])) % q
        # axes now: (2, 2, n_1, n_2, ..., n_m)
        vals = np.moveaxis(r, (0, 1), (-2, -1))
        _collect_codes(vals, q, found)
    return found


def _enumerate_general(p: NCPoly, q: int) -> set[int]:
    coeffs = _coeffs_mod(p, q)
    active = sorted({v for word in p.terms for v in word})
    letters = "abcdefghijkl"
    if len(active) > len(letters):  # unreachable under ENUM_CAP
        raise TooLargeError("too many active variables")
    axis_letter = {v: letters[i] for i, v in enumerate(active)}
    mats = _all_matrices(q).astype(np.float64)
    n4 = q**4
    per_axis = max(1, CHUNK_TUPLES // max(1, n4 ** (len(active) - 1)))
    found: set[int] = set()
    first = active[0]
    for start in range(0, n4, per_axis):
        grids = {v: (mats[start : start + per_axis] if v == first else mats) for v in active}
        total = np.zeros([grids[v].shape[0] for v in active] + [2, 2], dtype=np.float64)
        for word, c in coeffs.items():
            sub = ""
            r = None
            for v in word:
                if r is None:
                    r = grids[v]
                    sub = axis_letter[v]
                elif axis_letter[v] in sub:
                    r = np.einsum(f"{sub}xy,{axis_letter[v]}yz->{sub}xz", r, grids[v]) % q
                else:
                    r = (
                        np.einsum(f"{sub}xy,{axis_letter[v]}yz->{sub}{axis_letter[v]}xz", r, grids[v])
                        % q
                    )
                    sub += axis_letter[v]
            # align to the full active-axis layout (size-1 axes broadcast)
            want = "".join(axis_letter[v] for v in active if axis_letter[v] in sub)
            r = np.einsum(f"{sub}xy->{want}xy", r)
            shape = [1] * len(active) + [2, 2]
            for pos, v in enumerate(active):
                if axis_letter[v] in want:
                    shape[pos] = r.shape[want.index(axis_letter[v])]
            total = (total + c * r.reshape(shape)) % q
        _collect_codes(total, q, found)
    return found


def enumerate_image(p: NCPoly, q: int) -> FFImage:
    """Exact image set of p over M2(GF(q)) by full enumeration.

    Deterministic; TooLargeError when q^(4m) exceeds the 10^8 cap.
    """
    GF(q)  # validates primality and size
    m = p.num_vars
    count = q ** (4 * m)
    if count > ENUM_CAP:
        raise TooLargeError(f"q^(4m) = {count} exceeds the enumeration cap {ENUM_CAP}")
    coeffs = _coeffs_mod(p, q)  # validates coefficients are definable mod q
    if m == 0 or not coeffs or all(c == 0 for c in coeffs.values()):
        return FFImage(q, m, (0,), count)
    if is_multilinear(p):
        found = _enumerate_multilinear(p, q)
    else:
        found = _enumerate_general(p, q)
    return FFImage(q, m, tuple(sorted(found)), count)


def _gl2(q: int) -> tuple[np.ndarray, np.ndarray]:
    """All invertible matrices mod q and their inverses, stacked."""
    mats = _all_matrices(q)
    det = (mats[:, 0, 0] * mats[:, 1, 1] - mats[:, 0, 1] * mats[:, 1, 0]) % q
    inv_mask = det != 0
    g = mats[inv_mask]
    dets = det[inv_mask]
    det_inv = np.array([pow(int(d), q - 2, q) for d in dets], dtype=np.int64)
    adj = np.empty_like(g)
    adj[:, 0, 0] = g[:, 1, 1]
    adj[:, 0, 1] = (-g[:, 0, 1]) % q
    adj[:, 1, 0] = (-g[:, 1, 0]) % q
    adj[:, 1, 1] = g[:, 0, 0]
    ginv = (adj * det_inv[:, None, None]) % q
    return g, ginv


def check_conjugation_closed(img: FFImage) -> bool:
    """True iff P V P^-1 stays in the image for every V and invertible P."""
    q = img.q
    g, ginv = _gl2(q)
    if len(img.image) * len(g) > CONJ_CHECK_CAP:
        raise TooLargeError("conjugation-closure check too large; shrink q or the image")
    mats = _all_matrices(q)
    members = img.members
    for e in img.image:
        conj = np.einsum("gij,jk,gkl->gil", g, mats[e], ginv) % q
        codes = np.unique(_encode_array(conj, q))
        if not set(codes.tolist()) <= members:
            return False
    return True


@dataclass(frozen=True)
class CrosscheckReport:
    """Enumerated image versus classifier, over one GF(q)."""

    q: int
    image_size: int
    tuple_count: int
    conjugation_closed: bool
    span_enumerated: SpanLabel
    span_classifier: SpanLabel
    spans_match: bool
    sl2_nonscalar_contained: bool | None

    def to_json_dict(self) -> dict:
        return {
            "q": self.q,
            "image_size": self.image_size,
            "tuple_count": self.tuple_count,
            "conjugation_closed": self.conjugation_closed,
            "span_enumerated": self.span_enumerated.value,
            "span_classifier": self.span_classifier.value,
            "spans_match": self.spans_match,
            "sl2_nonscalar_contained": self.sl2_nonscalar_contained,
        }


def crosscheck_multilinear(p: NCPoly, q: int) -> CrosscheckReport:
    """Compare the enumerated GF(q) image against the exact classifier.

    Reports the span of the enumerated image, the classifier's span, their
    agreement, conjugation closure, and (odd q, non-identity non-central p)
    whether every non-scalar trace-zero matrix landed in the image.
    """
    img = enumerate_image(p, q)
    closed = check_conjugation_closed(img)
    dom = GF(q)
    values = [decode_matrix(e, q) for e in img.image]
    span_enum = span_label_of_values(values, dom)
    cls = classify(p, dom)
    sl2_contained: bool | None = None
    if q % 2 == 1 and cls.span_label in (SpanLabel.SL2, SpanLabel.FULL):
        members = set(img.image)
        sl2_contained = True
        for e in range(q**4):
            a22 = e % q
            a21 = (e // q) % q
            a12 = (e // q**2) % q
            a11 = e // q**3
            if (a11 + a22) % q != 0:
                continue
            if a12 == 0 and a21 == 0 and a11 == a22:
                continue  # scalar
            if e not in members:
                sl2_contained = False
                break
    return CrosscheckReport(
        q,
        len(img.image),
        img.tuple_count,
        closed,
        span_enum,
        cls.span_label,
        span_enum == cls.span_label,
        sl2_contained,
    )
