"""Admissibility audits and the combinatorial witness searches that feed the
normal-Sylow arguments.

An audit of vertex ``p`` certifies three obligation families:

(i)   ``G[p]``;
(ii)  ``G[S]`` for every non-empty set ``S`` of edges at ``p``;
(iii) ``G[p, T]`` for every non-empty set ``T`` of edges between neighbours of ``p``.

Subsets are walked in a set-enumeration tree.  Once a subset is settled by a
monotone rule (Palfy's condition survives further edge deletion) its whole
subtree, and any later superset, inherits the verdict and is only counted.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .families import deletion_notation
from .graph import (
    LabeledGraph,
    VertexLabel,
    _bits,
    complement_triangle,
    component_masks,
    delete_edge_indices,
    delete_vertex,
    induced_subgraph,
    maximal_clique_masks,
    parse_label,
)
from .rules import MONOTONE_RULES, Prover, Verdict

DEFAULT_DEGREE_CAP = 20


class Level(str, enum.Enum):
    NOT_ESTABLISHED = "NotEstablished"
    ADMISSIBLE = "Admissible"
    STRONGLY_ADMISSIBLE = "StronglyAdmissible"

    def __str__(self) -> str:
        return self.value


@dataclass
class Obligation:
    condition: str
    description: str
    verdict: Verdict
    inherited: int = 0
    deleted: tuple = ()

    def to_dict(self) -> dict:
        return {
            "condition": self.condition,
            "subgraph": self.description,
            "verdict": self.verdict.to_dict(),
            "inherited": self.inherited,
        }


@dataclass
class AdmissibilityReport:
    vertex: VertexLabel
    level: Level
    obligations: list[Obligation] = field(default_factory=list)
    enumerated: int = 0
    pruned: int = 0
    capped: bool = False

    @property
    def unknown(self) -> list[Obligation]:
        return [o for o in self.obligations if not o.verdict.non_occurring]

    @property
    def admissible(self) -> bool:
        return self.level is not Level.NOT_ESTABLISHED

    def find(self, description_suffix: str) -> Obligation | None:
        for o in self.obligations:
            if o.description.endswith(description_suffix):
                return o
        return None

    def to_dict(self) -> dict:
        return {
            "vertex": str(self.vertex),
            "level": self.level.value,
            "enumerated": self.enumerated,
            "pruned": self.pruned,
            "capped": self.capped,
            "obligations": [o.to_dict() for o in self.obligations],
        }

    def table(self) -> str:
        lines = [f"{self.vertex}: {self.level.value}  (obligations {self.enumerated}, pruned {self.pruned})"]
        for o in self.obligations:
            extra = f" +{o.inherited} inherited" if o.inherited else ""
            lines.append(f"  ({o.condition:>3}) {o.description:<40} {o.verdict.summary()}{extra}")
        return "\n".join(lines)


def _subset_walk(edges, make_graph, items, name: str, prover: Prover, condition: str,
                 out: list[Obligation], stop_on_unknown: bool) -> tuple[int, int, bool]:
    """Certify every non-empty subset of ``edges``; returns (total, pruned, all_ok)."""
    E = len(edges)
    minimal: list[tuple[int, Obligation]] = []
    total = pruned = 0
    ok = True

    def visit(mask: int, last: int) -> bool:
        nonlocal total, pruned, ok
        subtree = 1 << (E - 1 - last)
        for m, ob in minimal:
            if mask & m == m:
                ob.inherited += subtree
                total += subtree
                pruned += subtree
                return True
        chosen = [edges[i] for i in _bits(mask)]
        v = prover.certify(make_graph(chosen))
        deleted = tuple(items(chosen))
        ob = Obligation(condition, deletion_notation(name, deleted), v, deleted=deleted)
        out.append(ob)
        total += 1
        if not v.non_occurring:
            ok = False
            if stop_on_unknown:
                return False
        if v.non_occurring and v.rule in MONOTONE_RULES:
            minimal.append((mask, ob))
            ob.inherited += subtree - 1
            total += subtree - 1
            pruned += subtree - 1
            return True
        for j in range(last + 1, E):
            if not visit(mask | 1 << j, j) and stop_on_unknown:
                return False
        return True

    for j in range(E):
        if not visit(1 << j, j) and stop_on_unknown:
            break
    return total, pruned, ok


def audit(g: LabeledGraph, p, prover: Prover, level: str = "strong",
          name: str = "Γ", degree_cap: int = DEFAULT_DEGREE_CAP,
          stop_on_unknown: bool = False) -> AdmissibilityReport:
    """Check admissibility (``level="admissible"``) or strong admissibility of ``p``."""
    p = parse_label(p)
    pi = g.index(p)
    report = AdmissibilityReport(p, Level.NOT_ESTABLISHED)
    incident = [(pi, j) for j in _bits(g.rows[pi])]
    if not incident:
        return report
    g_minus_p = delete_vertex(g, p)
    nmask = 0
    for j in _bits(g.rows[pi]):
        nmask |= 1 << g_minus_p.index(g.labels[j])
    among = [(i, j) for i in _bits(nmask) for j in _bits(g_minus_p.rows[i] & nmask) if i < j]
    if len(incident) > degree_cap:
        report.capped = True
        return report

    v = prover.certify(g_minus_p)
    report.obligations.append(Obligation("i", deletion_notation(name, [p]), v, deleted=(p,)))
    report.enumerated = 1
    ok = v.non_occurring
    if not ok and stop_on_unknown:
        return report

    def edge_labels(pairs, h):
        return [(h.labels[i], h.labels[j]) for i, j in pairs]

    tot, pr, ok2 = _subset_walk(
        incident,
        lambda chosen: delete_edge_indices(g, chosen),
        lambda chosen: edge_labels(chosen, g),
        name, prover, "ii", report.obligations, stop_on_unknown,
    )
    report.enumerated += tot
    report.pruned += pr
    ok = ok and ok2
    if not ok:
        return report
    if level != "strong":
        report.level = Level.ADMISSIBLE
        return report
    if among:
        tot, pr, ok3 = _subset_walk(
            among,
            lambda chosen: delete_edge_indices(g_minus_p, chosen),
            lambda chosen: [p] + edge_labels(chosen, g_minus_p),
            name, prover, "iii", report.obligations, stop_on_unknown,
        )
        report.enumerated += tot
        report.pruned += pr
    else:
        ok3 = True
    report.level = Level.STRONGLY_ADMISSIBLE if ok3 else Level.ADMISSIBLE
    return report


AdmissibilityOracle = Callable[[VertexLabel], bool]


def oracle_from_reports(reports: Iterable[AdmissibilityReport]) -> AdmissibilityOracle:
    good = {r.vertex for r in reports if r.admissible}
    return lambda v: parse_label(v) in good


# --- Lemma "pi" witnesses (normal Sylow q-subgroups) -----------------------------------

@dataclass(frozen=True)
class PiWitness:
    q: VertexLabel
    pi1: frozenset
    pi2: frozenset
    v: VertexLabel
    s: VertexLabel
    w: VertexLabel

    def to_dict(self) -> dict:
        return {
            "q": str(self.q),
            "pi1": [str(x) for x in sorted(self.pi1)],
            "pi2": [str(x) for x in sorted(self.pi2)],
            "v": str(self.v), "s": str(self.s), "w": str(self.w),
        }


def validate_pi_witness(g: LabeledGraph, wit: PiWitness, admissible: AdmissibilityOracle) -> bool:
    if complement_triangle(g) is not None:
        return False
    q = wit.q
    pi = set(g.neighbors(q))
    rho = set(g.labels) - pi - {q}
    pi1, pi2 = set(wit.pi1), set(wit.pi2)
    if not pi1 or not pi2 or pi1 & pi2 or pi1 | pi2 != pi:
        return False
    if any(g.has_edge(x, y) for x in pi1 for y in pi2):
        return False
    return (wit.v in pi2 and wit.s in rho and g.has_edge(wit.v, wit.s) and admissible(wit.s)
            and wit.w in rho and wit.w != wit.s and not g.has_edge(wit.v, wit.w))


def pi_witnesses(g: LabeledGraph, q, admissible: AdmissibilityOracle):
    """All witnesses in deterministic order (grouping, then v, s, w)."""
    q = parse_label(q)
    if complement_triangle(g) is not None:
        return
    qi = g.index(q)
    pi = g.rows[qi]
    rho = g.full_mask & ~pi & ~(1 << qi)
    sub = induced_subgraph(g, pi)
    comps = []
    for cm in component_masks(sub):
        comps.append(frozenset(sub.labels[i] for i in _bits(cm)))
    comps.sort(key=lambda c: sorted(x.sort_key for x in c))
    ordered_rho = sorted(g.labels[i] for i in _bits(rho))
    for sel in range(1, (1 << len(comps)) - 1):
        pi2 = frozenset().union(*(comps[i] for i in range(len(comps)) if sel >> i & 1))
        pi1 = frozenset().union(*(comps[i] for i in range(len(comps)) if not sel >> i & 1))
        for v in sorted(pi2):
            for s in ordered_rho:
                if not g.has_edge(v, s) or not admissible(s):
                    continue
                for w in ordered_rho:
                    if w != s and not g.has_edge(v, w):
                        yield PiWitness(q, pi1, pi2, v, s, w)


def find_pi_witness(g: LabeledGraph, q, admissible: AdmissibilityOracle,
                    prefer: PiWitness | None = None) -> PiWitness | None:
    if prefer is not None and validate_pi_witness(g, prefer, admissible):
        return prefer
    return next(iter(pi_witnesses(g, q, admissible)), None)


# --- four-vertex witness for the final contradiction --------------------------------

@dataclass(frozen=True)
class Lemma3Witness:
    a: VertexLabel
    b: VertexLabel
    c: VertexLabel
    d: VertexLabel

    def to_dict(self) -> dict:
        return {"a": str(self.a), "b": str(self.b), "c": str(self.c), "d": str(self.d)}


def validate_lemma3_witness(g: LabeledGraph, wit: Lemma3Witness, admissible: AdmissibilityOracle) -> bool:
    a, b, c, d = wit.a, wit.b, wit.c, wit.d
    if g.n < 5 or complement_triangle(g) is not None or len({a, b, c, d}) != 4:
        return False
    if not all(x in g for x in (a, b, c, d)):
        return False
    return (admissible(c) and admissible(d) and g.has_edge(a, c)
            and not g.has_edge(b, c) and not g.has_edge(a, d))


def find_lemma3_witness(g: LabeledGraph, admissible: AdmissibilityOracle,
                        prefer: Lemma3Witness | None = None) -> Lemma3Witness | None:
    """First valid witness in lexicographic label order; ``prefer`` is returned
    instead when it is itself valid."""
    if g.n < 5 or complement_triangle(g) is not None:
        return None
    if prefer is not None and validate_lemma3_witness(g, prefer, admissible):
        return prefer
    labs = sorted(g.labels)
    adm = [x for x in labs if admissible(x)]
    for a in labs:
        for c in adm:
            if c == a or not g.has_edge(a, c):
                continue
            for b in labs:
                if b in (a, c) or g.has_edge(b, c):
                    continue
                for d in adm:
                    if d in (a, b, c) or g.has_edge(a, d):
                        continue
                    return Lemma3Witness(a, b, c, d)
    return None


# --- maximal-clique case analysis --------------------------------------------------------

@dataclass(frozen=True)
class CliqueCase:
    clique: frozenset
    kind: str  # "closed-neighbourhood" | "non-neighbourhood" | "straddling"
    in_pi: frozenset
    in_rho: frozenset

    def to_dict(self) -> dict:
        return {
            "clique": [str(x) for x in sorted(self.clique)],
            "kind": self.kind,
            "in_pi": [str(x) for x in sorted(self.in_pi)],
            "in_rho": [str(x) for x in sorted(self.in_rho)],
        }


def clique_case_analysis(g: LabeledGraph, p) -> list[CliqueCase]:
    p = parse_label(p)
    pi = frozenset(g.neighbors(p))
    rho = frozenset(g.labels) - pi - {p}
    cases = []
    masks = maximal_clique_masks(g)
    cliques = sorted((sorted(g.labels[i] for i in _bits(m)) for m in masks),
                     key=lambda c: [x.sort_key for x in c])
    for c in cliques:
        cs = frozenset(c)
        if p in cs:
            kind = "closed-neighbourhood"
        elif cs <= rho:
            kind = "non-neighbourhood"
        else:
            kind = "straddling"
        cases.append(CliqueCase(cs, kind, cs & pi, cs & rho))
    return cases
