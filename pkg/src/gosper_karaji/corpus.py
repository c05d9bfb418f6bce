"""Append-only JSON-lines store of generated identities."""

from __future__ import annotations

import json
import os
from typing import Iterator

from .errors import GosperKarajiError
from .lsum import PrefixPair, PresentedIdentity, RawIdentity
from .parser import parse_term
from .poly import parse_rational

SCHEMA_VERSION = 1
CORPUS_ENV = "GOSPER_KARAJI_CORPUS"


class CorpusError(GosperKarajiError):
    """A corpus line that cannot be decoded."""

    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


def identity_record(raw: RawIdentity, presented: PresentedIdentity) -> dict:
    rec = {"schema_version": SCHEMA_VERSION}
    rec.update(raw.to_json())
    rec["presented"] = presented.to_json()
    rec["text"] = presented.to_text()
    rec["latex"] = presented.to_latex()
    return rec


def decode_record(rec: dict, line_no: int = 0) -> tuple[RawIdentity, PresentedIdentity]:
    try:
        if rec.get("schema_version") != SCHEMA_VERSION:
            raise CorpusError(line_no, f"unsupported schema_version {rec.get('schema_version')!r}")
        pair = PrefixPair(parse_term(rec["t"]), parse_term(rec["s"]), int(rec["lower"]), "corpus")
        monos = tuple(
            (parse_rational(m["coeff"]), int(m["s_pow"]), int(m["t_pow"])) for m in rec["summand_monomials"]
        )
        raw = RawIdentity(int(rec["m"]), monos, pair)
        p = rec["presented"]
        lhs = tuple((parse_rational(x["coeff"]), parse_term(x["summand"])) for x in p["lhs_terms"])
        rhs = tuple((parse_rational(x["coeff"]), parse_term(x["expr"])) for x in p["rhs_terms"])
        moved = tuple(
            (parse_rational(x["coeff"]), parse_term(x["summand"]), parse_term(x["closed_form"]))
            for x in p.get("moved", [])
        )
        presented = PresentedIdentity(lhs, rhs, raw, p.get("basis", ""), parse_rational(p.get("scale", "1")), moved)
    except CorpusError:
        raise
    except (KeyError, TypeError, ValueError, GosperKarajiError) as exc:
        raise CorpusError(line_no, f"malformed identity record ({type(exc).__name__}: {exc})") from None
    return raw, presented


def append_records(path: str, records: list[dict]) -> None:
    with open(path, "a", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


def read_corpus(path: str) -> Iterator[tuple[int, RawIdentity, PresentedIdentity]]:
    """Yield ``(line_no, raw, presented)``; blank lines are skipped."""
    if not os.path.exists(path):
        return
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(line_no, f"invalid JSON ({exc.msg})") from None
            if not isinstance(rec, dict):
                raise CorpusError(line_no, "expected a JSON object")
            raw, presented = decode_record(rec, line_no)
            yield line_no, raw, presented


def default_corpus_path() -> str | None:
    return os.environ.get(CORPUS_ENV)

