"""Command-line front end with deterministic JSON output.

Subcommands: classify (exact multilinear classification), witness
(synthesize and verify a certificate for a target matrix), classify-sh
(randomized semi-homogeneous classification), ff-image (exhaustive image
over GF(q)).  Identical request and seed produce byte-identical JSON.

Exit codes: 0 success; 1 semantic negative (target not in the image, no
realizable plane); 2 usage errors, including polynomial syntax errors
(echoed with their position) and inputs a subcommand cannot accept.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import __version__
from .errors import (
    MatImageError,
    NoPlaneError,
    NotInImageError,
    PolyParseError,
)
from .fforacle import crosscheck_multilinear, enumerate_image
from .mat2 import Domain, Matrix2, domain_from_name
from .mlclass import classify
from .ncpoly import NCPoly, parse
from .shclass import DEFAULT_SAMPLES, classify_sh
from .witness import DEFAULT_SEED, synthesize

_USAGE_EXIT = 2
_SEMANTIC_EXIT = 1


@dataclass(frozen=True)
class CliRequest:
    """Validated request: everything run() needs, flags resolved."""

    subcommand: str
    polynomial: str
    domain: Domain
    seed: int
    target: str | None = None
    samples: int = DEFAULT_SAMPLES
    q: int = 2
    pretty: bool = False
    out: str | None = None


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="matimage",
        description="Classify images of noncommutative polynomials on 2x2 matrices "
        "and synthesize witness tuples.",
    )
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="subcommand", required=True)

    def common(sp, domain_default="rational"):
        sp.add_argument("polynomial", help="polynomial text, e.g. '[x,y]' or 'x*y+y*x'")
        sp.add_argument(
            "--domain",
            default=domain_default,
            help="rational | float | real | gf:<p>  (real is an alias for float)",
        )
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"default {DEFAULT_SEED}")
        sp.add_argument("--pretty", action="store_true", help="indent the JSON output")
        sp.add_argument("--out", default=None, help="also write the JSON document to this path")

    sp = sub.add_parser("classify", help="exact multilinear classification")
    common(sp)

    sp = sub.add_parser("witness", help="synthesize a witness certificate for a target")
    common(sp)
    sp.add_argument("--target", required=True, help='target matrix, e.g. "[[1,0],[0,2]]"')

    sp = sub.add_parser("classify-sh", help="randomized semi-homogeneous classification")
    common(sp)
    sp.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)

    sp = sub.add_parser("ff-image", help="exhaustive image over GF(q)")
    common(sp)
    sp.add_argument("--q", type=int, default=2, help="prime field size")
    sp.add_argument(
        "--crosscheck",
        action="store_true",
        help="also compare the enumerated span against the classifier (multilinear input)",
    )
    return ap


def _request_from_args(args: argparse.Namespace) -> CliRequest:
    return CliRequest(
        subcommand=args.subcommand,
        polynomial=args.polynomial,
        domain=domain_from_name(args.domain),
        seed=args.seed,
        target=getattr(args, "target", None),
        samples=getattr(args, "samples", DEFAULT_SAMPLES),
        q=getattr(args, "q", 2),
        pretty=args.pretty,
        out=args.out,
    )


def _doc_base(poly: NCPoly, request: CliRequest) -> dict:
    return {"polynomial": str(poly), "seed": request.seed, "version": __version__}


def execute(request: CliRequest, crosscheck: bool = False) -> tuple[int, dict]:
    """Run one request; returns (exit code, JSON document)."""
    poly = parse(request.polynomial)
    doc = _doc_base(poly, request)
    try:
        if request.subcommand == "classify":
            cls = classify(poly, request.domain)
            doc["class"] = cls.label.value
            doc["evidence"] = cls.to_json_dict()
            return 0, doc
        if request.subcommand == "witness":
            target = Matrix2.from_json(request.domain, json.loads(request.target))
            cls = classify(poly, request.domain)
            cert = synthesize(poly, target, request.domain, seed=request.seed)
            if not cert.verify():  # pragma: no cover - defends the output contract
                raise MatImageError("certificate failed re-verification; refusing to print")
            doc["class"] = cls.label.value
            doc["witness"] = cert.to_json_dict()
            return 0, doc
        if request.subcommand == "classify-sh":
            sig = classify_sh(poly, samples=request.samples, seed=request.seed)
            doc["signature"] = sig.to_json_dict()
            return 0, doc
        if request.subcommand == "ff-image":
            img = enumerate_image(poly, request.q)
            doc["image"] = img.to_json_dict()
            if crosscheck:
                doc["evidence"] = crosscheck_multilinear(poly, request.q).to_json_dict()
            return 0, doc
        raise MatImageError(f"unknown subcommand {request.subcommand!r}")  # pragma: no cover
    except (NotInImageError, NoPlaneError) as exc:
        error: dict = {"kind": type(exc).__name__.removesuffix("Error"), "reason": str(exc)}
        image_class = getattr(exc, "image_class", None)
        if image_class is not None and hasattr(image_class, "to_json_dict"):
            error["class"] = image_class.to_json_dict()
        doc["error"] = error
        return _SEMANTIC_EXIT, doc


def _emit(doc: dict, request: CliRequest) -> None:
    text = json.dumps(doc, sort_keys=True, indent=2 if request.pretty else None)
    print(text)
    if request.out:
        with open(request.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def run(argv: list[str] | None = None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    try:
        request = _request_from_args(args)
        code, doc = execute(request, crosscheck=getattr(args, "crosscheck", False))
    except PolyParseError as exc:
        print(f"matimage: polynomial syntax error: {exc}", file=sys.stderr)
        return _USAGE_EXIT
    except (MatImageError, json.JSONDecodeError, ValueError) as exc:
        print(f"matimage: {exc}", file=sys.stderr)
        return _USAGE_EXIT
    _emit(doc, request)
    return code


def main() -> None:
    sys.exit(run())
