"""Census records: the persisted, self-describing unit of output, plus a file cache."""
from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import os
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Optional

from . import __version__

SCHEMA_VERSION = 1
CACHE_ENV = "GSPCENSUS_CACHE_DIR"

log = logging.getLogger(__name__)


def _now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass
class CensusRecord:
    command: str
    params: dict[str, Any]
    exact_counts: dict[str, int] = field(default_factory=dict)
    exact_ratios: dict[str, Fraction] = field(default_factory=dict)
    estimates: list[dict[str, Any]] = field(default_factory=list)
    metrics: dict[str, float] = field(default_factory=dict)
    provenance: dict[str, str] = field(default_factory=dict)
    timestamp: str = field(default_factory=_now)
    tool_version: str = __version__
    schema_version: int = SCHEMA_VERSION

    def count(self, name: str, value: int, source: str) -> None:
        self.exact_counts[name] = int(value)
        self.provenance[name] = source

    def ratio(self, name: str, value, source: str) -> None:
        self.exact_ratios[name] = Fraction(value)
        self.provenance[name] = source

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema_version": self.schema_version,
            "command": self.command,
            "params": dict(self.params),
            "exact_counts": {k: str(v) for k, v in self.exact_counts.items()},
            "exact_ratios": {
                k: {"num": str(v.numerator), "den": str(v.denominator)}
                for k, v in self.exact_ratios.items()
            },
            "estimates": [dict(e) for e in self.estimates],
            "metrics": dict(self.metrics),
            "provenance": dict(self.provenance),
            "timestamp": self.timestamp,
            "tool_version": self.tool_version,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "CensusRecord":
        return cls(
            command=d["command"],
            params=dict(d["params"]),
            exact_counts={k: int(v) for k, v in d["exact_counts"].items()},
            exact_ratios={
                k: Fraction(int(v["num"]), int(v["den"])) for k, v in d["exact_ratios"].items()
            },
            estimates=[dict(e) for e in d.get("estimates", [])],
            metrics={k: float(v) for k, v in d.get("metrics", {}).items()},
            provenance=dict(d["provenance"]),
            timestamp=d["timestamp"],
            tool_version=d["tool_version"],
            schema_version=int(d["schema_version"]),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "CensusRecord":
        return cls.from_dict(json.loads(text))

    def csv_rows(self) -> list[dict[str, str]]:
        """One row per named quantity: command, params..., name, num, den, provenance."""
        base = {"command": self.command}
        base.update({k: str(v) for k, v in sorted(self.params.items())})
        rows = []
        for name, v in self.exact_counts.items():
            rows.append({**base, "name": name, "num": str(v), "den": "1",
                         "provenance": self.provenance.get(name, "")})
        for name, v in self.exact_ratios.items():
            rows.append({**base, "name": name, "num": str(v.numerator), "den": str(v.denominator),
                         "provenance": self.provenance.get(name, "")})
        for e in self.estimates:
            rows.append({**base, "name": f"estimate[{e['tag']}]", "num": str(e["hits"]),
                         "den": str(e["n_samples"]), "provenance": "montecarlo"})
        for name, v in self.metrics.items():
            rows.append({**base, "name": name, "num": repr(v), "den": "",
                         "provenance": self.provenance.get(name, "")})
        return rows


def to_csv(records: Iterable[CensusRecord]) -> str:
    rows = [r for rec in records for r in rec.csv_rows()]
    cols: list[str] = ["command"]
    for r in rows:
        for k in r:
            if k not in cols and k not in ("name", "num", "den", "provenance"):
                cols.append(k)
    cols += ["name", "num", "den", "provenance"]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def cache_key(command: str, params: dict[str, Any], schema_version: int = SCHEMA_VERSION) -> str:
    canon = json.dumps(
        {"command": command, "params": params, "schema_version": schema_version},
        sort_keys=True, separators=(",", ":"),
    )
    return hashlib.sha256(canon.encode()).hexdigest()


class ResultCache:
    """Directory of ``<key>.json`` records written by atomic rename."""

    def __init__(self, directory: os.PathLike | str, schema_version: int = SCHEMA_VERSION):
        self.directory = Path(directory)
        self.schema_version = schema_version

    @classmethod
    def from_env(cls, directory: Optional[str] = None) -> Optional["ResultCache"]:
        directory = directory or os.environ.get(CACHE_ENV)
        return cls(directory) if directory else None

    def path(self, command: str, params: dict[str, Any]) -> Path:
        return self.directory / f"{cache_key(command, params, self.schema_version)}.json"

    def lookup(self, command: str, params: dict[str, Any]) -> Optional[CensusRecord]:
        p = self.path(command, params)
        if not p.exists():
            return None
        try:
            rec = CensusRecord.from_json(p.read_text(encoding="utf-8"))
        except (ValueError, KeyError, TypeError) as exc:
            log.warning("ignoring corrupt cache entry %s: %s", p, exc)
            return None
        if (rec.schema_version != self.schema_version or rec.command != command
                or rec.params != params):
            return None
        return rec

    def store(self, record: CensusRecord) -> Path:
        self.directory.mkdir(parents=True, exist_ok=True)
        p = self.path(record.command, record.params)
        fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=p.stem, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as f:
                f.write(record.to_json())
                f.flush()
                os.fsync(f.fileno())
            os.replace(tmp, p)
        finally:
            if os.path.exists(tmp):
                os.remove(tmp)
        return p
