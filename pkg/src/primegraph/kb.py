"""Persistent store of classified graphs.

File layout (tab separated, one record per line, insertion order kept so
that parse -> format is byte-exact)::

    %primegraph-kb v1
    <key>\t<status>\t<closure flags or ->\t<provenance>

Keys are ``spec:<family spec>``, ``form:<canonical certificate hex>`` or
``sweep:<family spec>@<vertex>``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path

from .families import FamilySpec, Gamma, SigmaR, parse_spec

MAGIC = "%primegraph-kb v1"

SPANNING = "spanning"
VERTEX_SWEEP = "vertex-set-sweep"
CLOSURE_FLAGS = (SPANNING, VERTEX_SWEEP)

EXTERNAL_AXIOM = "external axiom"


class Status(str, enum.Enum):
    OCCURRING = "Occurring"
    NON_OCCURRING = "NonOccurring"
    UNKNOWN = "Unknown"

    def __str__(self) -> str:
        return self.value


class KBError(ValueError):
    pass


class ContradictionError(KBError):
    """An update tried to change the status of an existing entry."""


@dataclass
class KBEntry:
    key: str
    status: Status
    closure: tuple[str, ...] = ()
    provenance: str = ""

    def __post_init__(self):
        self.status = Status(self.status)
        self.closure = tuple(sorted(set(self.closure)))
        for flag in self.closure:
            if flag not in CLOSURE_FLAGS:
                raise KBError(f"{self.key}: unknown closure flag {flag!r}")
        if self.closure and self.status is not Status.NON_OCCURRING:
            raise KBError(f"{self.key}: closure flags require a NonOccurring entry")
        if self.status is Status.NON_OCCURRING and not self.provenance:
            raise KBError(f"{self.key}: NonOccurring entry without provenance")
        if any(ch in self.provenance for ch in "\t\n"):
            raise KBError(f"{self.key}: provenance may not contain tabs or newlines")
        kind, _, rest = self.key.partition(":")
        if kind not in ("spec", "form", "sweep") or not rest:
            raise KBError(f"bad key {self.key!r}")
        if kind == "spec":
            parse_spec(rest)
        if kind == "sweep":
            spec_text, at, vertex = rest.partition("@")
            if not at or not vertex:
                raise KBError(f"sweep key {self.key!r} needs '@vertex'")
            parse_spec(spec_text)

    @property
    def kind(self) -> str:
        return self.key.partition(":")[0]

    @property
    def spec(self) -> FamilySpec | None:
        if self.kind == "spec":
            return parse_spec(self.key[5:])
        if self.kind == "sweep":
            return parse_spec(self.key[6:].partition("@")[0])
        return None

    @property
    def sweep_vertex(self) -> str | None:
        return self.key.partition("@")[2] if self.kind == "sweep" else None

    @property
    def is_external_axiom(self) -> bool:
        return self.provenance.startswith(EXTERNAL_AXIOM)

    def to_line(self) -> str:
        flags = ",".join(self.closure) if self.closure else "-"
        return f"{self.key}\t{self.status.value}\t{flags}\t{self.provenance}"


def spec_key(spec: FamilySpec) -> str:
    return f"spec:{spec.to_string()}"


def sweep_key(spec: FamilySpec, vertex) -> str:
    return f"sweep:{spec.to_string()}@{vertex}"


def form_key(form) -> str:
    return f"form:{form.hex()}"


@dataclass
class KnowledgeBase:
    entries: dict[str, KBEntry] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, key: str) -> bool:
        return key in self.entries

    def get(self, key: str) -> KBEntry | None:
        return self.entries.get(key)

    def status_of(self, spec: FamilySpec) -> Status:
        e = self.entries.get(spec_key(spec))
        return e.status if e else Status.UNKNOWN

    def add(self, entry: KBEntry) -> KBEntry:
        """Insert ``entry``; re-adding an existing key may only widen its closure."""
        old = self.entries.get(entry.key)
        if old is None:
            self.entries[entry.key] = entry
            return entry
        if old.status is not entry.status:
            raise ContradictionError(
                f"{entry.key}: attempted to change status {old.status} -> {entry.status}"
            )
        if set(entry.closure) - set(old.closure):
            old.closure = tuple(sorted(set(old.closure) | set(entry.closure)))
        return old

    def copy(self) -> "KnowledgeBase":
        return KnowledgeBase({k: KBEntry(e.key, e.status, e.closure, e.provenance) for k, e in self.entries.items()})

    def dumps(self) -> str:
        return "\n".join([MAGIC] + [e.to_line() for e in self.entries.values()]) + "\n"

    @classmethod
    def loads(cls, text: str) -> "KnowledgeBase":
        lines = text.split("\n")
        if not lines or lines[0] != MAGIC:
            raise KBError(f"knowledge base must start with {MAGIC!r}")
        kb = cls()
        for lineno, line in enumerate(lines[1:], start=2):
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise KBError(f"line {lineno}: expected 4 tab-separated fields")
            key, status, flags, prov = parts
            try:
                st = Status(status)
            except ValueError:
                raise KBError(f"line {lineno}: bad status {status!r}") from None
            closure = () if flags == "-" else tuple(flags.split(","))
            try:
                entry = KBEntry(key, st, closure, prov)
            except ValueError as exc:
                raise KBError(f"line {lineno}: {exc}") from None
            if key in kb.entries:
                raise KBError(f"line {lineno}: duplicate key {key}")
            kb.entries[key] = entry
        return kb

    def save(self, path) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8")

    @classmethod
    def load(cls, path) -> "KnowledgeBase":
        return cls.loads(Path(path).read_text(encoding="utf-8"))

    def validate(self) -> list[str]:
        """Problems found by re-checking every entry's invariants."""
        problems = []
        for key, e in self.entries.items():
            try:
                KBEntry(e.key, e.status, e.closure, e.provenance)
            except ValueError as exc:
                problems.append(str(exc))
            if key != e.key:
                problems.append(f"entry stored under {key} has key {e.key}")
        return problems


GAMMA_PROVENANCE = "Gamma_{k,t} classification: occurs iff t = 1 or k = t = 2; connected proper subgraphs never occur"


def seeded_kb(gamma_kmax: int = 12) -> KnowledgeBase:
    """Knowledge base with the Gamma_{k,t} theorem and the literature statuses of
    Sigma^R_{1,1}, Sigma^R_{2,1}, Sigma^R_{2,2}; no other Sigma facts."""
    kb = KnowledgeBase()
    for k in range(1, gamma_kmax + 1):
        for t in range(1, k + 1):
            if t == 1 or k == t == 2:
                kb.add(KBEntry(spec_key(Gamma(k, t)), Status.OCCURRING, (), f"{EXTERNAL_AXIOM}: {GAMMA_PROVENANCE}"))
            else:
                kb.add(KBEntry(spec_key(Gamma(k, t)), Status.NON_OCCURRING, (SPANNING,), GAMMA_PROVENANCE))
    kb.add(KBEntry(spec_key(SigmaR(1, 1)), Status.OCCURRING, (), f"{EXTERNAL_AXIOM}: Sigma^R_{{1,1}} is realized by a known solvable group"))
    kb.add(KBEntry(spec_key(SigmaR(2, 1)), Status.UNKNOWN, (), "open: disconnected spanning subgraph (2,4) meets Palfy's inequality"))
    kb.add(KBEntry(spec_key(SigmaR(2, 2)), Status.UNKNOWN, (), "open: disconnected spanning subgraph (2,5) meets Palfy's inequality"))
    return kb
