"""JSON certificate files for the fractional matching."""

from __future__ import annotations

import json

from . import __version__
from .hall_matching import MatchingCertificate, certificate_problem
from .partitions import is_partition, partition_count
from .weights import WeightTable, build_weight_table, fraction_str, parse_fraction

SCHEMA_VERSION = 1


class MalformedCertificate(ValueError):
    """The file cannot be interpreted as a certificate at all."""


def to_document(cert: MatchingCertificate, table: WeightTable, method: str = "flow") -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "d": table.d,
        "q": table.q,
        "A": fraction_str(table.A),
        "partitions": [list(ell) for ell in table.partitions],
        "omega": [fraction_str(w) for w in table.omegas],
        "N_indices": list(table.N),
        "P_indices": list(table.P),
        "tau": [{"n": n, "p": p, "value": fraction_str(v)} for n, p, v in cert.tau],
        "table_digest": table.digest(),
        "generator": {"method": method, "version": __version__},
    }


def dumps(cert: MatchingCertificate, table: WeightTable, method: str = "flow") -> str:
    return json.dumps(to_document(cert, table, method), indent=1) + "\n"


def write(path, cert: MatchingCertificate, table: WeightTable, method: str = "flow") -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(cert, table, method))


_REQUIRED = ("schema_version", "d", "q", "A", "partitions", "omega", "N_indices", "P_indices", "tau")


def parse(text: str) -> dict:
    """Structural validation only; raises :class:`MalformedCertificate`."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedCertificate(f"not JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise MalformedCertificate("top level must be an object")
    missing = [k for k in _REQUIRED if k not in doc]
    if missing:
        raise MalformedCertificate(f"missing fields: {', '.join(missing)}")
    if doc["schema_version"] != SCHEMA_VERSION:
        raise MalformedCertificate(f"unsupported schema_version {doc['schema_version']!r}")
    d, q = doc["d"], doc["q"]
    if not (isinstance(d, int) and isinstance(q, int)) or d < 2 or q <= d:
        raise MalformedCertificate(f"bad header d={d!r}, q={q!r}")
    parts = doc["partitions"]
    if not isinstance(parts, list) or len(parts) != partition_count(d):
        raise MalformedCertificate(f"partition list length does not match d={d}")
    if any(not isinstance(ell, list) or len(ell) != d for ell in parts):
        raise MalformedCertificate(f"partition vectors must have length d={d}")
    if any(not isinstance(x, int) for ell in parts for x in ell):
        raise MalformedCertificate("partition entries must be integers")
    if not isinstance(doc["omega"], list) or len(doc["omega"]) != len(parts):
        raise MalformedCertificate("omega list length does not match partitions")
    try:
        doc["A"] = parse_fraction(doc["A"])
        doc["omega"] = [parse_fraction(w) for w in doc["omega"]]
        doc["tau"] = [(int(t["n"]), int(t["p"]), parse_fraction(t["value"])) for t in doc["tau"]]
    except (TypeError, KeyError, ValueError, AttributeError) as exc:
        raise MalformedCertificate(f"bad rational field: {exc}") from None
    return doc


def check_document(doc: dict) -> str | None:
    """First mismatch against a freshly recomputed weight table, or None."""
    table = build_weight_table(doc["d"], doc["q"])
    parts = [tuple(ell) for ell in doc["partitions"]]
    for i, ell in enumerate(parts):
        if not is_partition(ell, doc["d"]):
            return f"entry {i} of the partition list is not a partition of d: {list(ell)}"
    if parts != list(table.partitions):
        i = next(k for k, (a, b) in enumerate(zip(parts, table.partitions)) if a != b)
        return f"partition list differs from canonical order at index {i}"
    if doc["A"] != table.A:
        return "A does not match the recomputed constant"
    for i, (w, ref) in enumerate(zip(doc["omega"], table.omegas)):
        if w != ref:
            return f"omega mismatch at {list(parts[i])}"
    if list(doc["N_indices"]) != list(table.N) or list(doc["P_indices"]) != list(table.P):
        return "N/P split does not match the recomputed weights"
    digest = doc.get("table_digest")
    if digest is not None and digest != table.digest():
        return "table digest mismatch"
    cert = MatchingCertificate(doc["d"], doc["q"], tuple(doc["tau"]), table.digest())
    return certificate_problem(cert, table)

