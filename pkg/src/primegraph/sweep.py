"""Exhaustive enumeration of connected spanning subgraphs.

Edge subsets of a fixed host are encoded as integer masks and screened in
numpy chunks: one pass drops disconnected masks, another settles every mask
whose complement contains a triangle (Palfy's condition).  Only the residue is
turned into graphs and handed to the prover.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .families import FamilySpec, generate
from .graph import LabeledGraph, _bits, _from_rows, complement_triangle_indices, induced_subgraph, is_connected
from .kb import VERTEX_SWEEP, KBEntry, KnowledgeBase, Status, sweep_key
from .rules import PALFY, Prover, sweep_members

DEFAULT_EDGE_CAP = 24
CHUNK = 1 << 18


class SweepCapError(ValueError):
    """The induced host has more edges than the enumeration cap allows."""


@dataclass
class VertexSetRow:
    vertex_set: tuple[str, ...]
    edges: int
    subsets: int
    connected: int
    palfy: int
    residue: int


@dataclass
class SweepReport:
    instance: str
    mode: str = "exhaustive"
    enumerated: int = 0
    subsets_scanned: int = 0
    certified: dict[str, int] = field(default_factory=dict)
    uncertified: list[str] = field(default_factory=list)
    rows: list[VertexSetRow] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.uncertified

    def reconciles(self) -> bool:
        return self.enumerated == sum(self.certified.values()) + len(self.uncertified)

    def to_dict(self) -> dict:
        return {
            "instance": self.instance,
            "mode": self.mode,
            "enumerated": self.enumerated,
            "subsets_scanned": self.subsets_scanned,
            "certified": dict(sorted(self.certified.items())),
            "uncertified": list(self.uncertified),
        }

    def text(self) -> str:
        unit = "connected proper spanning subgraphs" if self.mode == "exhaustive" else "settled edge subsets"
        lines = [f"sweep {self.instance} [{self.mode}]: {self.enumerated} {unit} "
                 f"(of {self.subsets_scanned} edge subsets, {self.wall_time:.1f}s)"]
        for rule, count in sorted(self.certified.items()):
            lines.append(f"  {rule:<16} {count}")
        lines.append(f"  uncertified      {len(self.uncertified)}")
        lines.extend(f"    {u}" for u in self.uncertified)
        return "\n".join(lines)


def _screen(args) -> tuple[int, np.ndarray]:
    """Masks in ``[lo, hi)`` that are connected and satisfy Palfy's condition."""
    lo, hi, n, ends, triple_masks, skip = args
    masks = np.arange(lo, hi, dtype=np.int64)
    rows = [np.zeros(len(masks), dtype=np.int64) for _ in range(n)]
    for e, (i, j) in enumerate(ends):
        bit = (masks >> e) & 1
        rows[i] |= bit << j
        rows[j] |= bit << i
    full = (1 << n) - 1
    reach = np.ones(len(masks), dtype=np.int64)
    while True:
        grown = reach.copy()
        for v in range(n):
            grown |= np.where((reach >> v) & 1 == 1, rows[v], 0)
        if np.array_equal(grown, reach):
            break
        reach = grown
    keep = reach == full
    for tm in triple_masks:
        keep &= (masks & tm) != 0
    if skip is not None:
        keep &= masks != skip
    connected = int(np.count_nonzero(reach == full))
    return connected, masks[keep]


def _spanning_sweep(sub: LabeledGraph, prover: Prover, report: SweepReport, proper_only: bool,
                    edge_cap: int, jobs: int) -> None:
    ends = [(i, j) for i in range(sub.n) for j in _bits(sub.rows[i]) if i < j]
    E = len(ends)
    if E > edge_cap:
        raise SweepCapError(f"{E} edges exceeds the sweep cap of {edge_cap}")
    eidx = {pair: e for e, pair in enumerate(ends)}
    triple_masks = []
    for a, b, c in combinations(range(sub.n), 3):
        tm = 0
        for pair in ((a, b), (a, c), (b, c)):
            if pair in eidx:
                tm |= 1 << eidx[pair]
        triple_masks.append(tm)
    total = 1 << E
    skip = total - 1 if proper_only else None
    tasks = [(lo, min(lo + CHUNK, total), sub.n, ends, triple_masks, skip) for lo in range(0, total, CHUNK)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_screen, tasks))
    else:
        results = [_screen(t) for t in tasks]
    connected = sum(c for c, _ in results)
    if proper_only:
        connected -= 1  # the host itself is connected and never an obligation
    residue = [int(m) for _, arr in results for m in arr]
    palfy = connected - len(residue)
    report.subsets_scanned += total
    report.enumerated += connected
    report.certified[PALFY] = report.certified.get(PALFY, 0) + palfy
    for mask in residue:
        rows = [0] * sub.n
        for e in _bits(mask):
            i, j = ends[e]
            rows[i] |= 1 << j
            rows[j] |= 1 << i
        _record(_from_rows(sub.labels, rows), prover, report)
    report.rows.append(VertexSetRow(tuple(map(str, sub.labels)), E, total, connected, palfy, len(residue)))


def _pruned_sweep(sub: LabeledGraph, prover: Prover, report: SweepReport, proper_only: bool) -> None:
    """Walk edge-deletion sets in a set-enumeration tree.  Deleting further
    edges keeps a graph disconnected and keeps an independent triple
    independent, so both outcomes settle a whole subtree at once."""
    ends = [(i, j) for i in range(sub.n) for j in _bits(sub.rows[i]) if i < j]
    E = len(ends)
    counts = {"palfy": 0, "residue": 0}

    def visit(rows: list[int], last: int) -> None:
        subtree = 1 << (E - 1 - last)
        g = _from_rows(sub.labels, rows)
        if not is_connected(g):
            return
        if complement_triangle_indices(g) is not None:
            counts["palfy"] += subtree
            return
        if last >= 0 or not proper_only:
            counts["residue"] += 1
            _record(g, prover, report)
        for j in range(last + 1, E):
            a, b = ends[j]
            child = list(rows)
            child[a] &= ~(1 << b)
            child[b] &= ~(1 << a)
            visit(child, j)

    visit(list(sub.rows), -1)
    settled = counts["palfy"] + counts["residue"]
    report.subsets_scanned += 1 << E
    report.enumerated += settled
    report.certified[PALFY] = report.certified.get(PALFY, 0) + counts["palfy"]
    report.rows.append(VertexSetRow(tuple(map(str, sub.labels)), E, 1 << E, settled,
                                    counts["palfy"], counts["residue"]))


def _record(g: LabeledGraph, prover: Prover, report: SweepReport) -> None:
    v = prover.certify(g)
    if v.non_occurring:
        report.certified[v.rule] = report.certified.get(v.rule, 0) + 1
    else:
        desc = " ".join(f"{a}{b}" for a, b in g.edges())
        report.uncertified.append(f"on {{{','.join(map(str, g.labels))}}}: {desc} -> {v.status.value}")


def default_jobs() -> int:
    return os.cpu_count() or 1


def spanning_sweep(spec: FamilySpec, prover: Prover, edge_cap: int = DEFAULT_EDGE_CAP,
                   jobs: int = 1) -> SweepReport:
    """Every connected proper spanning subgraph of ``generate(spec)``."""
    t0 = time.perf_counter()
    report = SweepReport(f"{spec.notation()} spanning")
    _spanning_sweep(generate(spec), prover, report, True, edge_cap, jobs)
    report.wall_time = time.perf_counter() - t0
    return report


MODES = ("auto", "exhaustive", "pruned")


def vertex_set_sweep(spec: FamilySpec, p, prover: Prover, kb: KnowledgeBase | None = None,
                     edge_cap: int = DEFAULT_EDGE_CAP, jobs: int = 1,
                     install: bool = True, mode: str = "auto") -> SweepReport:
    """For every non-empty ``π* ⊆ π`` certify each connected proper spanning
    subgraph on ``{p} ∪ π* ∪ ρ``; on success record a sweep closure entry.

    ``exhaustive`` scans every edge subset (bounded by ``edge_cap``);
    ``pruned`` walks deletion sets and skips settled subtrees, so its
    ``enumerated`` count is in edge subsets rather than connected graphs.
    ``auto`` picks exhaustive whenever the cap allows.
    """
    if mode not in MODES:
        raise ValueError(f"unknown sweep mode {mode!r}")
    t0 = time.perf_counter()
    host = generate(spec)
    pbit, pi, rho = sweep_members(host, p)
    induced = []
    pis = list(_bits(pi))
    for size in range(1, len(pis) + 1):
        for chosen in combinations(pis, size):
            mask = pbit | rho | sum(1 << i for i in chosen)
            induced.append((mask, induced_subgraph(host, mask)))
    worst = max(sub.edge_count for _, sub in induced)
    if mode == "auto":
        mode = "exhaustive" if worst <= edge_cap else "pruned"
    if mode == "exhaustive" and worst > edge_cap:
        raise SweepCapError(f"{spec.notation()}: induced host has {worst} edges, cap is {edge_cap}")
    report = SweepReport(f"{spec.notation()} p={p}", mode=mode)
    for mask, sub in induced:
        if mode == "exhaustive":
            _spanning_sweep(sub, prover, report, mask == host.full_mask, edge_cap, jobs)
        else:
            _pruned_sweep(sub, prover, report, mask == host.full_mask)
    report.wall_time = time.perf_counter() - t0
    kb = kb if kb is not None else prover.kb
    if install and report.ok:
        kb.add(KBEntry(sweep_key(spec, p), Status.NON_OCCURRING, (VERTEX_SWEEP,),
                       f"{mode} sweep: {report.enumerated} obligations certified"))
    return report
