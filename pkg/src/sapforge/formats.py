"""Certificate and script files.

Certificates are JSON objects (``schema_version`` 1).  Rationals are written
as ``"num/den"`` strings so nothing ever passes through a float.  Entries in
a real algebraic field are lists of such strings: the coefficients of the
field generator, lowest power first, with the field itself stored once as its
minimal polynomial plus a rational isolating interval.
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import ArgumentError, ParseError
from .extensions import ConditionReport, ExtensionSpec, check_conditions
from .inertia import IapCertificate, RefinedInertia, certify_iap
from .jacobian import SapCertificate, Status, certify_sap
from .numbers import AlgebraicField, AlgebraicNumber, common_field, format_rational, parse_rational
from .pattern import ExactMatrix, Pattern

SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# scalars and matrices

def _encode_scalar(x):
    if isinstance(x, AlgebraicNumber):
        if x.is_rational:
            return format_rational(x.to_fraction())
        return [format_rational(c) for c in x.coeffs]
    return format_rational(x)


def encode_matrix(A: ExactMatrix) -> dict:
    field_ = common_field(x for r in A.rows for x in r)
    out = {"field": None, "entries": [[_encode_scalar(x) for x in r] for r in A.rows]}
    if field_ is not None:
        out["field"] = {"minpoly": [format_rational(c) for c in field_.minpoly],
                        "interval": [format_rational(c) for c in field_.interval]}
    return out


def decode_matrix(d: dict) -> ExactMatrix:
    try:
        fd = d.get("field")
        field_ = None
        if fd:
            field_ = AlgebraicField([parse_rational(c) for c in fd["minpoly"]],
                                    [parse_rational(c) for c in fd["interval"]])
        rows = []
        for r in d["entries"]:
            row = []
            for x in r:
                if isinstance(x, list):
                    if field_ is None:
                        raise ArgumentError("algebraic entry without a field")
                    row.append(field_.element([parse_rational(c) for c in x]))
                else:
                    row.append(parse_rational(x))
            rows.append(row)
        return ExactMatrix.from_rows(rows)
    except (KeyError, TypeError) as exc:
        raise ArgumentError(f"malformed realization: {exc}") from exc


# ---------------------------------------------------------------------------
# certificates

def _pattern_rows(P: Pattern) -> list[str]:
    return P.to_text().splitlines()


def _pattern_from_rows(rows) -> Pattern:
    if not isinstance(rows, list):
        raise ArgumentError("pattern must be a list of row strings")
    return Pattern.from_text("\n".join(rows))


def certificate_to_dict(cert) -> dict:
    kind = "iap" if isinstance(cert, IapCertificate) else "sap"
    d = {
        "schema_version": SCHEMA_VERSION,
        "type": kind,
        "pattern": _pattern_rows(cert.pattern),
        "realization": encode_matrix(cert.realization) if cert.realization is not None else None,
        "placement": [list(p) for p in cert.placement],
        "jacobian_rank": cert.rank,
        "witness_minor": ({"rows": list(cert.witness_minor[0]), "cols": list(cert.witness_minor[1])}
                          if cert.witness_minor else None),
        "status": cert.status.value,
        "failed_check": cert.failed_check,
        "note": cert.note,
        "conditions": [c.to_dict() for c in cert.conditions],
        "chain": [s.to_dict() for s in cert.chain],
    }
    if kind == "iap":
        ri = cert.refined_inertia
        d["refined_inertia"] = list(ri.as_tuple()) if ri is not None else None
    if cert.base is not None:
        P, A = cert.base
        d["base"] = {"pattern": _pattern_rows(P), "realization": encode_matrix(A)}
    return d


def certificate_from_dict(d: dict):
    """Rebuild a certificate object exactly as stored (no re-verification)."""
    if not isinstance(d, dict):
        raise ArgumentError("certificate must be a JSON object")
    if d.get("schema_version") != SCHEMA_VERSION:
        raise ArgumentError(f"unsupported schema_version {d.get('schema_version')!r}")
    try:
        P = _pattern_from_rows(d["pattern"])
        A = decode_matrix(d["realization"]) if d.get("realization") else None
        placement = tuple(tuple(p) for p in d["placement"])
        wm = d.get("witness_minor")
        witness = (tuple(wm["rows"]), tuple(wm["cols"])) if wm else None
        status = Status(d["status"])
        chain = tuple(ExtensionSpec.from_dict(s) for s in d.get("chain", []))
        base = None
        if d.get("base"):
            base = (_pattern_from_rows(d["base"]["pattern"]),
                    decode_matrix(d["base"]["realization"]))
        conditions = tuple(_condition_from_dict(c) for c in d.get("conditions", []))
        common = dict(note=d.get("note", ""), failed_check=d.get("failed_check"),
                      witness_minor=witness, conditions=conditions, chain=chain, base=base)
        if d.get("type", "sap") == "iap":
            ri = d.get("refined_inertia")
            ri = RefinedInertia(*ri) if ri else None
            return IapCertificate(P, A, placement, ri, int(d["jacobian_rank"]), status, **common)
        if d.get("type", "sap") != "sap":
            raise ArgumentError(f"unknown certificate type {d.get('type')!r}")
        return SapCertificate(P, A, placement, int(d["jacobian_rank"]), status, **common)
    except (KeyError, ValueError, TypeError) as exc:
        if isinstance(exc, ArgumentError):
            raise
        raise ArgumentError(f"malformed certificate: {exc}") from exc


def _condition_from_dict(c: dict) -> ConditionReport:
    det = c.get("det_minor")
    try:
        det = parse_rational(det)
    except (ValueError, AttributeError):
        pass
    cycle = tuple(c["cycle"]) if c.get("cycle") else None
    return ConditionReport(ExtensionSpec.from_dict(c["spec"]), c.get("cond_i"), cycle,
                           bool(c.get("cond_ii")), det)


def dumps_certificate(cert) -> str:
    return json.dumps(certificate_to_dict(cert), indent=2) + "\n"


def write_certificate(cert, path) -> None:
    Path(path).write_text(dumps_certificate(cert))


def read_certificate(path):
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    return certificate_from_dict(data)


def recheck(cert):
    """Re-verify a stored certificate from its own data alone.

    Returns a fresh certificate computed from scratch.  Condition rejections
    are replayed from the stored base pattern and realization.
    """
    if cert.failed_check == "conditions":
        if cert.base is None or not cert.chain:
            raise ArgumentError("condition rejection stored without its base")
        P, A = cert.base
        report = check_conditions(P, A, cert.chain[-1])
        status = Status.REJECTED if not report.overall else Status.VERIFIED
        return type(cert)(**{**_fields(cert), "status": status, "conditions": (report,)})
    if cert.realization is None:
        raise ArgumentError("certificate carries no realization to re-verify")
    if isinstance(cert, IapCertificate):
        return certify_iap(cert.pattern, cert.realization, strict=False)
    return certify_sap(cert.pattern, cert.realization, strict=False)


def _fields(cert) -> dict:
    from dataclasses import fields

    return {f.name: getattr(cert, f.name) for f in fields(cert)}


def same_outcome(a, b) -> bool:
    return a.status is b.status and a.rank == b.rank


# ---------------------------------------------------------------------------
# scripts and text grids

def parse_script(text: str) -> list[ExtensionSpec]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(data, list):
        raise ArgumentError("an extension script is a JSON list of steps")
    return [ExtensionSpec.from_dict(s) for s in data]


def dumps_script(script) -> str:
    return json.dumps([s.to_dict() for s in script], indent=2) + "\n"


def read_pattern(path) -> Pattern:
    return Pattern.from_text(Path(path).read_text())


def read_matrix(path) -> ExactMatrix:
    return ExactMatrix.from_text(Path(path).read_text())


__all__ = [
    "SCHEMA_VERSION", "certificate_from_dict", "certificate_to_dict", "decode_matrix",
    "dumps_certificate", "dumps_script", "encode_matrix", "parse_script", "read_certificate",
    "read_matrix", "read_pattern", "recheck", "same_outcome", "write_certificate",
]
