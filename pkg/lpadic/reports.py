"""
Machine-readable documents (schema "lpadic/1") and aligned plain-text tables.

Numbers are never written as floats: p-adic values become {p, valuation, digits, precision} with the
digits of the unit part least significant first, rationals become strings.
"""

import json
import logging
import os
import sys
from collections.abc import Sequence
from fractions import Fraction
from typing import Any

import yaml

from lpadic.cyclotomic import CyclotomicPadic
from lpadic.errors import ConfigError
from lpadic.padic import PadicNumber

log = logging.getLogger(__name__)

SCHEMA = "lpadic/1"

RESET = "\033[0m"
STYLES = {"ok": "\033[1;32m", "failed": "\033[1;31m", "warning": "\033[1;33m"}


def padic_json(x: PadicNumber) -> dict:
    if x.is_zero():
        return {"p": x.p, "valuation": None, "digits": [], "precision": x.absprec}
    return {"p": x.p, "valuation": x.val, "digits": x.digits(), "precision": x.prec}


def padic_from_json(doc: dict) -> PadicNumber:
    p = doc["p"]
    if doc["valuation"] is None:
        return PadicNumber.zero(p, doc["precision"])
    unit = sum(d * p**i for i, d in enumerate(doc["digits"]))
    return PadicNumber(p, doc["valuation"], unit, doc["precision"])


def value_json(x: Any) -> Any:
    if isinstance(x, PadicNumber):
        return padic_json(x)
    if isinstance(x, CyclotomicPadic):
        if x.is_rational():
            return padic_json(x.to_padic())
        return {"p": x.p, "n": x.n, "coeffs": [padic_json(c) for c in x.coeffs]}
    if isinstance(x, (int, Fraction)):
        return str(x)
    if isinstance(x, dict):
        return {str(k): value_json(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [value_json(v) for v in x]
    return x


def document(kind: str, body: dict) -> dict:
    return {"schema": SCHEMA, "kind": kind, **body}


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True)


def load_document(path: str, kind: str | None = None) -> dict:
    """
    Read a document back; JSON is read through the YAML loader.
    """
    try:
        with open(path) as f:
            doc = yaml.safe_load(f)
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e}") from e
    if not isinstance(doc, dict) or doc.get("schema") != SCHEMA:
        raise ConfigError(f"{path}: not an {SCHEMA} document")
    if kind is not None and doc.get("kind") != kind:
        raise ConfigError(f"{path}: expected a {kind!r} document, got {doc.get('kind')!r}")
    return doc


def series_family_from_json(doc: dict) -> dict:
    """
    {tame: IwasawaSeries} from a "series" document with a list of branches.
    """
    from lpadic.iwasawa import IwasawaSeries

    family = {}
    for branch in doc["branches"]:
        coeffs = tuple(padic_from_json(c) for c in branch["coeffs"])
        family[branch["t"]] = IwasawaSeries(branch["p"], branch["t"], coeffs, branch["N"])
    return family


def format_padic(x: PadicNumber | CyclotomicPadic | Any) -> str:
    if isinstance(x, CyclotomicPadic) and x.is_rational():
        x = x.to_padic()
    if isinstance(x, PadicNumber):
        if x.is_zero():
            return f"O({x.p}^{x.absprec})"
        sep = "" if x.p < 10 else ","
        digits = sep.join(str(d) for d in reversed(x.digits()))
        return f"{x.p}^{x.val} * ...{digits} (+O({x.p}^{x.absprec}))"
    return str(x)


def use_color() -> bool:
    isatty = getattr(sys.stdout, "isatty", None)
    return bool(isatty and isatty()) and "NO_COLOR" not in os.environ


def styled(style: str, text: str) -> str:
    """
    Wrap text in the ANSI escape for style when stdout is a terminal and NO_COLOR is unset.
    """
    if not use_color():
        return text
    return f"{STYLES[style]}{text}{RESET}"


def verdict(ok: bool) -> str:
    return styled("ok", "ok") if ok else styled("failed", "FAILED")


def error(msg: str) -> str:
    return styled("failed", f"Error: {msg}")


def warning(msg: str) -> str:
    return styled("warning", f"Warning: {msg}")


def table(headers: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    cells = [[str(c) for c in row] for row in rows]
    widths = [max([len(h)] + [len(r[i]) for r in cells]) for i, h in enumerate(headers)]
    lines = [" | ".join(f"{h:<{w}}" for h, w in zip(headers, widths))]
    lines.append("-+-".join("-" * w for w in widths))
    for r in cells:
        lines.append(" | ".join(f"{c:<{w}}" for c, w in zip(r, widths)))
    return "\n".join(lines)
