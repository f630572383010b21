"""Service records, the classification index, and registry persistence.

On disk a registry is line-delimited JSON::

    {"format": "svcdisco-registry", "version": 1, "count": N, "next_seq": K}
    {...record 1...}
    ...
    {"sha256": "<hex digest of every preceding byte>"}
"""

from __future__ import annotations

import hashlib
import json
import threading
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime, timezone
from functools import cached_property
from pathlib import Path

import numpy as np

from .taxonomy import BEHAVIORS, COST_MODES, Classification, decode, encode
from .wsdl import WsdlDocument, tokenize, tokenize_name

FORMAT_NAME = "svcdisco-registry"
FORMAT_VERSION = 1

_BEHAVIOR_INDEX = {b: i for i, b in enumerate(BEHAVIORS)}
_MODE_INDEX = {m: i for i, m in enumerate(COST_MODES)}


class RegistryError(Exception):
    pass


class DuplicateRegistrationError(RegistryError):
    pass


class RegistryFormatError(RegistryError):
    pass


class ChecksumError(RegistryFormatError):
    pass


@dataclass(frozen=True)
class ServiceRecord:
    record_id: str
    name: str
    documentation_tokens: dict[str, int]
    classification: str
    wsdl_uri: str
    registered_at: str

    def __post_init__(self) -> None:
        # raises on malformed or wildcard ids
        decode(self.classification)

    @cached_property
    def decoded(self) -> Classification:
        return decode(self.classification)

    @cached_property
    def name_tokens(self) -> frozenset[str]:
        return frozenset(tokenize_name(self.name))

    @cached_property
    def match_tokens(self) -> frozenset[str]:
        """Name tokens plus documentation tokens; what keyword matching sees."""
        return self.name_tokens | frozenset(self.documentation_tokens)

    def to_json(self) -> dict:
        return {
            "record_id": self.record_id,
            "name": self.name,
            "classification": self.classification,
            "wsdl_uri": self.wsdl_uri,
            "registered_at": self.registered_at,
            "documentation_tokens": dict(sorted(self.documentation_tokens.items())),
        }

    @classmethod
    def from_json(cls, obj: dict) -> ServiceRecord:
        return cls(
            record_id=obj["record_id"],
            name=obj["name"],
            documentation_tokens={str(k): int(v) for k, v in obj["documentation_tokens"].items()},
            classification=obj["classification"],
            wsdl_uri=obj["wsdl_uri"],
            registered_at=obj["registered_at"],
        )


@dataclass(frozen=True)
class ScanColumns:
    """Columnar copy of the registry consumed by the scan kernels."""

    behavior: np.ndarray  # uint8, index into BEHAVIORS
    mode: np.ndarray  # uint8, index into COST_MODES
    indptr: np.ndarray  # int64, CSR row pointers
    tokens: np.ndarray  # int32, sorted unique token ids per row
    vocab: dict[str, int] = field(repr=False)

    def keyword_ids(self, keywords) -> np.ndarray:
        ids = {self.vocab[k] for k in keywords if k in self.vocab}
        return np.array(sorted(ids), dtype=np.int32)


class Registry:
    """Append-only store of :class:`ServiceRecord` with a classification index.

    Reads may run concurrently; ``register`` and ``save`` take the writer lock.
    """

    def __init__(self) -> None:
        self.records: list[ServiceRecord] = []
        self.class_index: dict[str, list[str]] = {}
        self._by_id: dict[str, ServiceRecord] = {}
        self._position: dict[str, int] = {}
        self._keys: set[tuple[str, str]] = set()
        self._next_seq = 1
        self._columns: ScanColumns | None = None
        self._lock = threading.RLock()

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Registry):
            return NotImplemented
        return self.records == other.records and self.class_index == other.class_index

    def get(self, record_id: str) -> ServiceRecord:
        return self._by_id[record_id]

    def position(self, record_id: str) -> int:
        return self._position[record_id]

    def register(
        self,
        doc: WsdlDocument,
        c: Classification,
        *,
        wsdl_uri: str | None = None,
        registered_at: str | None = None,
    ) -> ServiceRecord:
        cid = encode(c)
        uri = doc.source_uri if wsdl_uri is None else wsdl_uri
        with self._lock:
            if (uri, doc.service_name) in self._keys:
                raise DuplicateRegistrationError(
                    f"service {doc.service_name!r} from {uri!r} is already registered"
                )
            record = ServiceRecord(
                record_id=f"svc-{self._next_seq:08d}",
                name=doc.service_name,
                documentation_tokens=dict(Counter(tokenize(doc.all_documentation()))),
                classification=cid,
                wsdl_uri=uri,
                registered_at=registered_at
                or datetime.now(timezone.utc).isoformat(timespec="microseconds"),
            )
            self._append(record)
            return record

    def _append(self, record: ServiceRecord) -> None:
        if record.record_id in self._by_id:
            raise RegistryFormatError(f"duplicate record id {record.record_id!r}")
        key = (record.wsdl_uri, record.name)
        if key in self._keys:
            raise DuplicateRegistrationError(f"duplicate service {record.name!r} from {record.wsdl_uri!r}")
        self._position[record.record_id] = len(self.records)
        self.records.append(record)
        self._by_id[record.record_id] = record
        self._keys.add(key)
        self.class_index.setdefault(record.classification, []).append(record.record_id)
        seq = _seq_of(record.record_id)
        if seq is not None and seq >= self._next_seq:
            self._next_seq = seq + 1
        self._columns = None

    def list_by_classification(self, cid: str) -> list[str]:
        return list(self.class_index.get(cid, ()))

    def list_by_selection(self, sel) -> list[str]:
        """Record ids whose classification satisfies ``sel``, in insertion order."""
        buckets = [ids for cid, ids in self.class_index.items() if sel.matches_id(cid)]
        merged = [rid for ids in buckets for rid in ids]
        merged.sort(key=self._position.__getitem__)
        return merged

    def columns(self) -> ScanColumns:
        cols = self._columns
        if cols is not None:
            return cols
        with self._lock:
            n = len(self.records)
            vocab: dict[str, int] = {}
            behavior = np.empty(n, dtype=np.uint8)
            mode = np.empty(n, dtype=np.uint8)
            indptr = np.zeros(n + 1, dtype=np.int64)
            rows = []
            for i, rec in enumerate(self.records):
                c = rec.decoded
                behavior[i] = _BEHAVIOR_INDEX[c.behavior]
                mode[i] = _MODE_INDEX[c.mode]
                ids = sorted(vocab.setdefault(t, len(vocab)) for t in rec.match_tokens)
                rows.append(ids)
                indptr[i + 1] = indptr[i] + len(ids)
            tokens = np.fromiter((t for row in rows for t in row), dtype=np.int32, count=int(indptr[-1]))
            cols = ScanColumns(behavior, mode, indptr, tokens, vocab)
            self._columns = cols
            return cols

    def check_index(self) -> None:
        """Raise ``RegistryError`` unless the index matches a full scan."""
        expected: dict[str, list[str]] = {}
        for rec in self.records:
            expected.setdefault(rec.classification, []).append(rec.record_id)
        if expected != self.class_index:
            raise RegistryError("classification index is out of sync with records")

    def save(self, path: str | Path) -> None:
        path = Path(path)
        with self._lock:
            header = {
                "format": FORMAT_NAME,
                "version": FORMAT_VERSION,
                "count": len(self.records),
                "next_seq": self._next_seq,
            }
            lines = [json.dumps(header, sort_keys=True)]
            lines += [json.dumps(r.to_json(), sort_keys=True) for r in self.records]
            body = ("\n".join(lines) + "\n").encode("utf-8")
            digest = hashlib.sha256(body).hexdigest()
            tmp = path.with_name(path.name + ".tmp")
            tmp.write_bytes(body + json.dumps({"sha256": digest}).encode("utf-8") + b"\n")
            tmp.replace(path)

    @classmethod
    def load(cls, path: str | Path) -> Registry:
        raw = Path(path).read_bytes()
        if not raw.endswith(b"\n"):
            raise RegistryFormatError(f"{path}: truncated registry file")
        cut = raw.rstrip(b"\n").rfind(b"\n") + 1
        body, trailer_line = raw[:cut], raw[cut:]
        try:
            trailer = json.loads(trailer_line)
            digest = trailer["sha256"]
        except (ValueError, KeyError, TypeError):
            raise RegistryFormatError(f"{path}: missing checksum trailer") from None
        if hashlib.sha256(body).hexdigest() != digest:
            raise ChecksumError(f"{path}: checksum mismatch")
        lines = body.decode("utf-8").splitlines()
        if not lines:
            raise RegistryFormatError(f"{path}: missing header")
        header = json.loads(lines[0])
        if header.get("format") != FORMAT_NAME:
            raise RegistryFormatError(f"{path}: not a registry file")
        if header.get("version") != FORMAT_VERSION:
            raise RegistryFormatError(
                f"{path}: format version {header.get('version')} unsupported (expected {FORMAT_VERSION})"
            )
        if header.get("count") != len(lines) - 1:
            raise RegistryFormatError(f"{path}: header count {header.get('count')} != {len(lines) - 1} records")
        reg = cls()
        for line in lines[1:]:
            reg._append(ServiceRecord.from_json(json.loads(line)))
        reg._next_seq = max(reg._next_seq, int(header.get("next_seq", 1)))
        return reg

    @classmethod
    def load_or_new(cls, path: str | Path) -> Registry:
        return cls.load(path) if Path(path).exists() else cls()


def _seq_of(record_id: str) -> int | None:
    prefix, _, num = record_id.partition("-")
    if prefix == "svc" and num.isdigit():
        return int(num)
    return None
