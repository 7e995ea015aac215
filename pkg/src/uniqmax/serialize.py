"""Deterministic text output: '#'-prefixed metadata, then CSV or JSON lines.

Every file written here round-trips: parse_output followed by
serialize_output reproduces the original bytes.  Data rows are pure
functions of the inputs; volatile details (timestamps) only ever appear in
metadata lines.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Sequence


def _meta_lines(metadata: Sequence[tuple[str, str]]) -> list[str]:
    return [f"# {key}={value}" for key, value in metadata]


def csv_text(metadata: Sequence[tuple[str, str]], header: Sequence[str],
             rows: Sequence[Sequence[str]]) -> str:
    buf = io.StringIO()
    for line in _meta_lines(metadata):
        buf.write(line + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def records_text(metadata: Sequence[tuple[str, str]],
                 records: Sequence[dict]) -> str:
    lines = _meta_lines(metadata)
    lines.extend(json.dumps(rec) for rec in records)
    return "".join(line + "\n" for line in lines)


@dataclass
class ParsedOutput:
    meta: list[str]          # raw '#'-prefixed lines, verbatim
    header: list[str] | None  # CSV header, None for JSON-record files
    rows: list[list[str]]     # CSV data rows as string fields
    records: list[dict]       # JSON records, in file order


def parse_output(text: str) -> ParsedOutput:
    lines = text.splitlines()
    meta = []
    body_start = 0
    for line in lines:
        if line.startswith("#"):
            meta.append(line)
            body_start += 1
        else:
            break
    body = lines[body_start:]
    if body and body[0].lstrip().startswith("{"):
        records = [json.loads(line) for line in body if line]
        return ParsedOutput(meta=meta, header=None, rows=[], records=records)
    parsed = list(csv.reader(body))
    header = parsed[0] if parsed else None
    return ParsedOutput(meta=meta, header=header, rows=parsed[1:], records=[])


def serialize_output(parsed: ParsedOutput) -> str:
    buf = io.StringIO()
    for line in parsed.meta:
        buf.write(line + "\n")
    if parsed.header is not None:
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(parsed.header)
        writer.writerows(parsed.rows)
    else:
        for rec in parsed.records:
            buf.write(json.dumps(rec) + "\n")
    return buf.getvalue()


def data_lines(text: str) -> list[str]:
    """Non-metadata lines: the byte-stable part of an output file."""
    return [line for line in text.splitlines() if not line.startswith("#")]
