"""Replay of the non-occurrence induction for the Σ^R family as a checkable
certificate tree, plus the layered exhaustive oracle sweeps.

A certificate node carries a claim, a status and a role.  Obligation nodes
must be discharged for their parent to hold; remark nodes record facts worth
keeping (equality cases, literature statuses) without carrying weight.

Leaves come in five kinds:

``rule``     a prover verdict on a rebuildable subgraph
``kb``       a knowledge-base entry that must exist with the stated status
``axiom``    an imported group-theoretic step, identified by a registry key
``witness``  a combinatorial witness re-checked by adjacency lookups
``sweep``    a vertex-set sweep whose closure entry must be in the KB
``ref``      a pointer to a node established earlier in the same tree
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

from .admissibility import (
    AdmissibilityReport,
    Lemma3Witness,
    Level,
    PiWitness,
    audit,
    clique_case_analysis,
    find_lemma3_witness,
    find_pi_witness,
    validate_lemma3_witness,
    validate_pi_witness,
)
from .families import (
    C_FIXED,
    FamilySpec,
    Gamma,
    SigmaR,
    SigmaRStar,
    generate,
    parse_spec,
)
from .graph import (
    LabeledGraph,
    V,
    delete_edges,
    delete_vertices,
    parse_label,
)
from .kb import (
    SPANNING,
    KBEntry,
    KnowledgeBase,
    Status,
    spec_key,
    sweep_key,
)
from .rules import (
    DEFAULT_ORDER,
    DiameterBoundParams,
    Prover,
    Verdict,
    check_gamma_theorem,
    check_two_component_inequality,
    revalidate,
)
from .sweep import (
    DEFAULT_EDGE_CAP,
    SweepReport,
    spanning_sweep,
    vertex_set_sweep,
)

OBLIGATION = "obligation"
REMARK = "remark"

NON_OCCURRING = Status.NON_OCCURRING.value
VALID = "Valid"
IMPORTED = "Imported"
DISCHARGED = {NON_OCCURRING, Level.STRONGLY_ADMISSIBLE.value, Level.ADMISSIBLE.value, VALID, IMPORTED}

# Imported group-theoretic steps.  Keys are stable identifiers used in
# certificates; the statements are what a reader has to accept on trust.
AXIOMS = {
    "admissible-perfect":
        "If p is an admissible vertex of Δ(G), G solvable, and Δ(N) is a proper subgraph for every "
        "proper normal N, then O^p(G) = G.",
    "strongly-admissible-sylow":
        "If p is strongly admissible and Δ(G/N) is a proper subgraph for every nontrivial normal N, "
        "then a Sylow p-subgroup of G is not normal.",
    "pi-lemma":
        "Under Palfy's condition, a split of the neighbourhood of q into two mutually non-adjacent "
        "parts, with v adjacent to an admissible s and non-adjacent to some w outside the "
        "neighbourhood, rules out a normal nonabelian Sylow q-subgroup.",
    "four-vertex":
        "A graph on at least five vertices satisfying Palfy's condition, with a adjacent to an "
        "admissible c, b not adjacent to c and a not adjacent to an admissible d, is not Δ(G) for "
        "a minimal counterexample whose Fitting subgroup is minimal normal.",
    "frattini-trivial":
        "With no normal nonabelian Sylow subgroups, ρ(G) = ρ(G/Φ(G)); if neither the connected "
        "proper subgraphs nor the disconnected subgraph on ρ(G) occur, minimality forces Φ(G) = 1.",
    "complement-exists":
        "If Φ(G) = 1 then the Fitting subgroup F has a complement H with G = HF and H ∩ F = 1 "
        "(Huppert, Endliche Gruppen I, III.4.4).",
    "fitting-splits":
        "Every normal subgroup N of G inside F has a normal complement M in F with F = N × M "
        "(Huppert, Endliche Gruppen I, III.4.5).",
    "central-sylow":
        "A solvable group with disconnected character degree graph of the listed shape has a "
        "central Sylow subgroup for a prime of the smaller side (classification of disconnected "
        "degree graphs).",
    "gallagher":
        "Gallagher's theorem: an irreducible character extending to G multiplies against Irr(G/N) "
        "to give distinct irreducible constituents.",
    "normal-sylow-hypothesis":
        "The vertex c satisfies the imported technical hypothesis excluding a normal nonabelian "
        "Sylow c-subgroup, given non-occurrence of the listed dependency graphs.",
    "fitting-minimal-normal":
        "With no normal nonabelian Sylow subgroups and the non-occurrence of the listed subgraphs, "
        "Φ(G) = 1, F has a complement, and F is minimal normal in G.",
    "analogous-step":
        "The disconnected subgraph on ρ(G) attains equality in Palfy's inequality, so the base-case "
        "argument for Φ(G) = 1 does not apply verbatim; this step is imported as stated.",
}


KMAX_CAP = 6


class ReplayError(RuntimeError):
    """An obligation could not be discharged; the message names the subgraph."""


class KmaxCapError(ValueError):
    """The requested replay depth is above the configured cap."""


@dataclass
class Certificate:
    node_id: str
    claim: str
    status: str
    kind: str = "claim"
    role: str = OBLIGATION
    payload: dict = field(default_factory=dict)
    children: list["Certificate"] = field(default_factory=list)

    def to_dict(self) -> dict:
        d = {"id": self.node_id, "claim": self.claim, "status": self.status, "kind": self.kind, "role": self.role}
        if self.payload:
            d["payload"] = self.payload
        if self.children:
            d["children"] = [c.to_dict() for c in self.children]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Certificate":
        return cls(d["id"], d["claim"], d["status"], d.get("kind", "claim"), d.get("role", OBLIGATION),
                   d.get("payload", {}), [cls.from_dict(c) for c in d.get("children", [])])

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()

    def find(self, node_id: str) -> "Certificate | None":
        return next((n for n in self.walk() if n.node_id == node_id), None)

    @property
    def discharged(self) -> bool:
        return self.status in DISCHARGED


# --- graph references ------------------------------------------------------------------

def _item_text(item) -> str:
    if isinstance(item, tuple):
        a, b = sorted(item)
        return f"{a}-{b}"
    return str(item)


def graph_ref(spec: FamilySpec, items: Iterable = ()) -> dict:
    return {"base": spec.to_string(), "delete": [_item_text(x) for x in items]}


def build_ref(ref: dict) -> LabeledGraph:
    g = generate(parse_spec(ref["base"]))
    vertices = [x for x in ref["delete"] if "-" not in x]
    edges = [tuple(x.split("-")) for x in ref["delete"] if "-" in x]
    return delete_edges(delete_vertices(g, vertices), edges)


def _rule_leaf(node_id: str, claim: str, ref: dict, verdict: Verdict, role: str = OBLIGATION,
               **extra) -> Certificate:
    return Certificate(node_id, claim, verdict.status.value, "rule", role,
                       {"graph": ref, "verdict": verdict.to_dict(), **extra})


def _axiom(node_id: str, key: str, children=()) -> Certificate:
    return Certificate(node_id, key, IMPORTED, "axiom", OBLIGATION,
                       {"axiom": key, "statement": AXIOMS[key]}, list(children))


def _kb_leaf(node_id: str, key: str, status: Status, role: str = OBLIGATION) -> Certificate:
    return Certificate(node_id, key, status.value, "kb", role, {"entry": key})


# --- replay ----------------------------------------------------------------------------

class Replayer:
    """Sequential replay against one knowledge base (single writer)."""

    def __init__(self, kb: KnowledgeBase, rule_order=DEFAULT_ORDER, diameter: DiameterBoundParams | None = None,
                 edge_cap: int = DEFAULT_EDGE_CAP, jobs: int = 1, sweep_mode: str = "auto"):
        self.kb = kb
        self.prover = Prover(kb, rule_order, diameter)
        self.edge_cap = edge_cap
        self.jobs = jobs
        self.sweep_mode = sweep_mode
        self.nodes: dict[str, Certificate] = {}
        self.sweeps: list[SweepReport] = []

    # shared pieces

    def _install(self, key: str, closure=(), provenance: str = "") -> None:
        self.kb.add(KBEntry(key, Status.NON_OCCURRING, closure, provenance))

    def _audits(self, spec: FamilySpec, vertices, node_id: str, required: bool = True,
                level: str = "strong") -> tuple[Certificate, dict]:
        g = generate(spec)
        name = spec.notation()
        children, reports = [], {}
        for v in vertices:
            rep = audit(g, v, self.prover, level=level, name=name)
            reports[v] = rep
            want = Level.STRONGLY_ADMISSIBLE if level == "strong" else Level.ADMISSIBLE
            ok = rep.level is want or (want is Level.ADMISSIBLE and rep.admissible)
            if required and not ok:
                bad = [o.description for o in rep.unknown] or ["degree cap exceeded"]
                raise ReplayError(f"{name}: vertex {v} is {rep.level.value}; undischarged: {', '.join(bad)}")
            children.append(self._audit_node(spec, rep, f"{node_id}/{v}", OBLIGATION if ok else REMARK))
        group = Certificate(node_id, f"audited vertices of {name}", VALID, "claim", OBLIGATION,
                            {"spec": spec.to_string()}, children)
        if required:
            group.children.append(_axiom(f"{node_id}/sylow", "strongly-admissible-sylow"))
        return group, reports

    def _audit_node(self, spec: FamilySpec, rep: AdmissibilityReport, node_id: str, role: str) -> Certificate:
        leaves = []
        for i, ob in enumerate(rep.obligations):
            leaves.append(_rule_leaf(f"{node_id}/{i}", ob.description, graph_ref(spec, ob.deleted), ob.verdict,
                                     role, condition=ob.condition, inherited=ob.inherited))
        return Certificate(node_id, f"{rep.vertex} is {rep.level.value} in {spec.notation()}", rep.level.value,
                           "audit", role,
                           {"spec": spec.to_string(), "vertex": str(rep.vertex), "enumerated": rep.enumerated,
                            "pruned": rep.pruned},
                           leaves)

    def _pi_group(self, spec: FamilySpec, admissible: set, node_id: str, prefer=None) -> Certificate:
        g = generate(spec)
        oracle = admissible.__contains__
        children = []
        for j in range(1, spec.k + 1):
            q = V(f"a{j}")
            wit = find_pi_witness(g, q, oracle, (prefer or {}).get(q))
            if wit is None:
                raise ReplayError(f"{spec.notation()}: no neighbourhood-split witness for {q}")
            children.append(self._witness("pi", f"{node_id}/{q}", f"{q} has a neighbourhood-split witness",
                                          spec, wit.to_dict(), [wit.s]))
        children.append(_axiom(f"{node_id}/lemma", "pi-lemma"))
        return Certificate(node_id, f"no normal nonabelian Sylow subgroup at the A-vertices of {spec.notation()}",
                           VALID, "claim", OBLIGATION, {"spec": spec.to_string()}, children)

    def _witness(self, kind: str, node_id: str, claim: str, spec: FamilySpec, data, admissible) -> Certificate:
        return Certificate(node_id, claim, VALID, "witness", OBLIGATION,
                           {"type": kind, "graph": graph_ref(spec), "data": data,
                            "admissible": sorted(str(x) for x in admissible)})

    def _lemma3(self, spec: FamilySpec, admissible: set, node_id: str, prefer=None) -> Certificate:
        g = generate(spec)
        wit = find_lemma3_witness(g, admissible.__contains__, prefer)
        if wit is None:
            raise ReplayError(f"{spec.notation()}: no four-vertex witness")
        return Certificate(node_id, f"four-vertex contradiction for {spec.notation()}", VALID, "claim", OBLIGATION,
                           {"spec": spec.to_string()},
                           [self._witness("lemma3", f"{node_id}/witness", "four-vertex witness", spec,
                                          wit.to_dict(), [wit.c, wit.d]),
                            _axiom(f"{node_id}/lemma", "four-vertex")])

    def _split_leaf(self, spec: FamilySpec, node_id: str, role: str) -> Certificate:
        """The disconnected subgraph on the same vertices: A against everything else."""
        g = generate(spec)
        a_side = {x for x in g.labels if x.role == "A"}
        cross = [(x, y) for x, y in g.edges() if (x in a_side) != (y in a_side)]
        ref = graph_ref(spec, cross)
        v = check_two_component_inequality(build_ref(ref))
        sizes = v.witness.get("sizes", [])
        claim = f"disconnected split {tuple(sizes)} of {spec.notation()}"
        if v.witness.get("equality"):
            claim += f": equality {sizes[1]} = 2^{sizes[0]} - 1"
        return _rule_leaf(node_id, claim, ref, v, role, rule="two-component")

    def _sweep(self, spec: FamilySpec, p, node_id: str) -> Certificate:
        key = sweep_key(spec, p)
        if key in self.kb:
            rep = None
        else:
            rep = vertex_set_sweep(spec, p, self.prover, self.kb, edge_cap=self.edge_cap, jobs=self.jobs,
                                   mode=self.sweep_mode)
            self.sweeps.append(rep)
            if not rep.ok:
                raise ReplayError(f"{spec.notation()} sweep at {p}: uncertified {rep.uncertified[:5]}")
        payload = {"entry": key}
        if rep is not None:
            payload["report"] = rep.to_dict()
        return Certificate(node_id, f"no proper connected subgraph on {{{p}}} ∪ π* ∪ ρ of {spec.notation()} occurs",
                           NON_OCCURRING, "sweep", OBLIGATION, payload)

    # Σ^R_{k,n}

    def sigma_r(self, k: int, n: int) -> Certificate:
        spec = SigmaR(k, n)
        nid = spec.to_string()
        if nid in self.nodes:
            return Certificate(f"{nid}#ref", f"see {nid}", NON_OCCURRING, "ref", OBLIGATION, {"ref": nid})
        name = spec.notation()
        children = []
        bs = [V(f"b{i}") for i in range(1, k + n + 1)]
        group, reports = self._audits(spec, bs, f"{nid}/audits")
        c_group, c_reports = self._audits(spec, [C_FIXED], f"{nid}/audit-c", required=False, level="admissible")
        children.append(group)
        admissible = {v for v, r in reports.items() if r.admissible}
        if c_reports[C_FIXED].admissible:
            admissible.add(C_FIXED)
            group.children.insert(len(bs), c_group.children[0])
        else:
            c_group.role = REMARK
            children.append(c_group)
        children.append(self._pi_group(spec, admissible, f"{nid}/pi"))
        if n == 1:
            children.append(self._sweep(spec, C_FIXED, f"{nid}/sweep"))
        deps = [self._gamma_leaf(Gamma(k + n, k), f"{nid}/hyp/gamma")]
        for i in range(1, n):
            dep = SigmaRStar(k, n - i, i + 1)
            if self.kb.status_of(dep) is not Status.NON_OCCURRING:
                raise ReplayError(f"{name}: dependency {dep.notation()} is not established")
            deps.append(_kb_leaf(f"{nid}/hyp/{dep.to_string()}", spec_key(dep), Status.NON_OCCURRING))
        children.append(_axiom(f"{nid}/hyp", "normal-sylow-hypothesis", deps))
        children.append(self._split_leaf(spec, f"{nid}/split", REMARK))
        children.append(_axiom(f"{nid}/fitting", "fitting-minimal-normal"))
        children.append(self._lemma3(spec, admissible, f"{nid}/final"))
        node = Certificate(nid, f"{name} does not occur", NON_OCCURRING, "claim", OBLIGATION,
                           {"spec": nid}, children)
        self._install(spec_key(spec), (SPANNING,) if n == 1 else (), f"replay certificate {nid}")
        self.nodes[nid] = node
        return node

    def _gamma_leaf(self, spec: FamilySpec, node_id: str) -> Certificate:
        v = check_gamma_theorem(generate(spec))
        if not v.non_occurring:
            raise ReplayError(f"{spec.notation()} is not excluded by the Γ theorem")
        return _rule_leaf(node_id, f"{spec.notation()} does not occur", graph_ref(spec), v)

    # Σ^{R*}_{k,n,m}

    def sigma_rstar(self, k: int, n: int, m: int) -> Certificate:
        spec = SigmaRStar(k, n, m)
        nid = spec.to_string()
        if nid in self.nodes:
            return Certificate(f"{nid}#ref", f"see {nid}", NON_OCCURRING, "ref", OBLIGATION, {"ref": nid})
        name = spec.notation()
        verts = [V(f"b{i}") for i in range(1, k + n + 1)] + [V(f"c{j}") for j in range(1, m + 1)]
        group, reports = self._audits(spec, verts, f"{nid}/audits")
        admissible = set(reports)
        children = [group, self._sweep(spec, V("c1"), f"{nid}/sweep")]
        prefer = {}
        if n == 1 and k >= 3:
            a, b, c1 = (lambda i: V(f"a{i}")), (lambda i: V(f"b{i}")), V("c1")
            others = lambda i: frozenset(a(j) for j in range(1, k + 1) if j != i)
            prefer[a(1)] = PiWitness(a(1), frozenset({b(1), b(k + 1)}), others(1), a(2), b(2), c1)
            for i in range(2, k + 1):
                prefer[a(i)] = PiWitness(a(i), frozenset({b(i)}), others(i), a(1), b(1), c1)
        children.append(self._pi_group(spec, admissible, f"{nid}/pi", prefer))
        children.append(self._minimal_normal(spec, f"{nid}/fitting"))
        children.append(self._lemma3(spec, admissible, f"{nid}/final",
                                     Lemma3Witness(V("a1"), V("a2"), V("b1"), V("c1"))))
        node = Certificate(nid, f"{name} does not occur", NON_OCCURRING, "claim", OBLIGATION,
                           {"spec": nid}, children)
        self._install(spec_key(spec), (SPANNING,), f"replay certificate {nid}")
        self.nodes[nid] = node
        return node

    def _minimal_normal(self, spec: FamilySpec, node_id: str) -> Certificate:
        g = generate(spec)
        cases = [c.to_dict() for c in clique_case_analysis(g, V("c1"))]
        split = self._split_leaf(spec, f"{node_id}/split", OBLIGATION)
        children = []
        if split.status == NON_OCCURRING:
            children += [split, _axiom(f"{node_id}/frattini", "frattini-trivial")]
        else:
            split.role = REMARK
            children += [split, _axiom(f"{node_id}/frattini", "analogous-step")]
        children += [
            _axiom(f"{node_id}/complement", "complement-exists"),
            _axiom(f"{node_id}/splits", "fitting-splits"),
            Certificate(f"{node_id}/cliques", f"maximal cliques of {spec.notation()} relative to c1", VALID,
                        "witness", OBLIGATION,
                        {"type": "cliques", "graph": graph_ref(spec), "data": {"p": "c1", "cases": cases},
                         "admissible": []}),
            _axiom(f"{node_id}/central", "central-sylow"),
            _axiom(f"{node_id}/perfect", "admissible-perfect"),
            _axiom(f"{node_id}/gallagher", "gallagher"),
        ]
        return Certificate(node_id, f"the Fitting subgroup is minimal normal for {spec.notation()}", VALID,
                           "claim", OBLIGATION, {"spec": spec.to_string()}, children)

    # assembly

    def base(self, k: int) -> Certificate:
        if k < 3:
            raise ReplayError("the base case needs k >= 3")
        return Certificate(f"base:{k}", f"base case k={k}", NON_OCCURRING, "claim", OBLIGATION, {"k": k},
                           [self.sigma_r(k, 1), self.sigma_rstar(k, 1, 2)])

    def chain(self, k: int, t: int) -> Certificate:
        if self.kb.status_of(SigmaR(k, t)) is not Status.NON_OCCURRING:
            raise ReplayError(f"chain ({k},{t}) needs {SigmaR(k, t).notation()} established first")
        steps = []
        for i in range(1, t + 1):
            spec = SigmaRStar(k, i, t + 2 - i)
            if spec.to_string() in self.nodes or (t == 1 and self.kb.status_of(spec) is Status.NON_OCCURRING):
                if spec.to_string() in self.nodes:
                    steps.append(Certificate(f"chain:{k},{t}/{spec}", f"see {spec}", NON_OCCURRING, "ref",
                                             OBLIGATION, {"ref": spec.to_string()}))
                else:
                    steps.append(_kb_leaf(f"chain:{k},{t}/{spec}", spec_key(spec), Status.NON_OCCURRING))
            else:
                steps.append(self.sigma_rstar(k, i, t + 2 - i))
        return Certificate(f"chain:{k},{t}", f"chain of implications for k={k}, t={t}", NON_OCCURRING, "claim",
                           OBLIGATION, {"k": k, "t": t, "chain": [SigmaRStar(k, i, t + 2 - i).to_string()
                                                                   for i in range(1, t + 1)]}, steps)

    def family(self, k: int) -> Certificate:
        children = [self.base(k)]
        for t in range(1, k):
            step = Certificate(f"step:{k},{t + 1}", f"inductive step to {SigmaR(k, t + 1).notation()}",
                               NON_OCCURRING, "claim", OBLIGATION, {"k": k, "t": t},
                               [self.chain(k, t), self.sigma_r(k, t + 1)])
            children.append(step)
        return Certificate(f"family:{k}", f"Σ^R_{{{k},n}} does not occur for 1 ≤ n ≤ {k}", NON_OCCURRING,
                           "claim", OBLIGATION, {"k": k}, children)

    def theorem(self, kmax: int, kmax_cap: int = KMAX_CAP) -> Certificate:
        if kmax > kmax_cap:
            raise KmaxCapError(f"kmax {kmax} exceeds the cap of {kmax_cap}")
        children = [self._literature(1, 1), self._literature(2, 1), self._literature(2, 2)]
        for k in range(3, kmax + 1):
            children.append(self.family(k))
        status = NON_OCCURRING if kmax >= 3 else VALID
        return Certificate("theorem", f"classification of Σ^R_{{k,n}} for k ≤ {kmax}", status, "claim",
                           OBLIGATION, {"kmax": kmax}, children)

    def _literature(self, k: int, n: int) -> Certificate:
        spec = SigmaR(k, n)
        status = self.kb.status_of(spec)
        nid = f"literature:{spec}"
        kids = [_kb_leaf(f"{nid}/kb", spec_key(spec), status, REMARK)] if spec_key(spec) in self.kb else []
        if k == 2:
            kids.append(self._split_leaf(spec, f"{nid}/split", REMARK))
        return Certificate(nid, f"{spec.notation()} is {status.value}", status.value, "claim", REMARK,
                           {"spec": spec.to_string()}, kids)


def replay_base(k: int, kb: KnowledgeBase, **options) -> Certificate:
    return Replayer(kb, **options).base(k)


def replay_chain(k: int, t: int, kb: KnowledgeBase, **options) -> Certificate:
    return Replayer(kb, **options).chain(k, t)


def replay_theorem(kmax: int, kb: KnowledgeBase, **options) -> Certificate:
    return Replayer(kb, **options).theorem(kmax)


# --- oracles ---------------------------------------------------------------------------

def oracle_sweep(spec: FamilySpec, p, prover: Prover, kb: KnowledgeBase | None = None,
                 edge_cap: int = DEFAULT_EDGE_CAP, jobs: int = 1, mode: str = "exhaustive") -> SweepReport:
    return vertex_set_sweep(spec, p, prover, kb, edge_cap=edge_cap, jobs=jobs, mode=mode)


def layered_oracle(k: int, kb: KnowledgeBase, prover: Prover | None = None, edge_cap: int = DEFAULT_EDGE_CAP,
                   jobs: int = 1, mode: str = "exhaustive") -> list[SweepReport]:
    """Γ closures, then Σ^R_{k,1} at c, then Σ^{R*}_{k,1,2} at c1.

    Between the two vertex-set sweeps Σ^R_{k,1} is recorded as non-occurring,
    which is what the base case establishes before the second sweep cites it.
    """
    prover = prover or Prover(kb)
    reports = [spanning_sweep(Gamma(k + 2, k), prover, edge_cap, jobs),
               spanning_sweep(Gamma(k + 3, k), prover, edge_cap, jobs)]
    reports.append(oracle_sweep(SigmaR(k, 1), C_FIXED, prover, kb, edge_cap, jobs, mode))
    if reports[-1].ok and kb.status_of(SigmaR(k, 1)) is not Status.NON_OCCURRING:
        kb.add(KBEntry(spec_key(SigmaR(k, 1)), Status.NON_OCCURRING, (),
                       "oracle layer: base case established before the starred sweep"))
    reports.append(oracle_sweep(SigmaRStar(k, 1, 2), V("c1"), prover, kb, edge_cap, jobs, mode))
    return reports


# --- validation ------------------------------------------------------------------------

def certificate_problems(cert: Certificate, kb: KnowledgeBase, deep: bool = True) -> list[str]:
    """Every failed check, each prefixed with the path of the offending node."""
    problems: list[str] = []
    seen: dict[str, Certificate] = {}
    admissible: dict[str, set] = {}
    prover = Prover(kb)

    def fail(path: str, msg: str) -> None:
        problems.append(f"{path}: {msg}")

    def check(node: Certificate) -> None:
        path = node.node_id
        if node.node_id in seen:
            fail(path, "duplicate node id")
        if node.role not in (OBLIGATION, REMARK):
            fail(path, f"unknown role {node.role!r}")
        kind = node.kind
        try:
            if kind == "rule":
                _check_rule(node, path)
            elif kind == "kb":
                e = kb.get(node.payload["entry"])
                if e is None or e.status.value != node.status:
                    fail(path, f"knowledge base lacks {node.payload['entry']} as {node.status}")
            elif kind == "axiom":
                key = node.payload.get("axiom")
                if key not in AXIOMS or node.payload.get("statement") != AXIOMS[key]:
                    fail(path, f"unknown or altered axiom {key!r}")
            elif kind == "witness":
                _check_witness(node, path)
            elif kind == "sweep":
                e = kb.get(node.payload["entry"])
                if e is None or e.status is not Status.NON_OCCURRING:
                    fail(path, f"knowledge base lacks sweep entry {node.payload['entry']}")
                rep = node.payload.get("report")
                if rep is not None:
                    if rep["uncertified"]:
                        fail(path, "sweep report lists uncertified subgraphs")
                    if rep["enumerated"] != sum(rep["certified"].values()) + len(rep["uncertified"]):
                        fail(path, "sweep counts do not reconcile")
            elif kind == "ref":
                target = seen.get(node.payload.get("ref"))
                if target is None:
                    fail(path, f"reference to {node.payload.get('ref')!r} which is not established earlier")
                elif target.status != node.status:
                    fail(path, "reference status differs from its target")
            elif kind == "audit":
                pass
            elif kind != "claim":
                fail(path, f"unknown node kind {kind!r}")
        except (KeyError, ValueError, TypeError) as exc:
            fail(path, f"malformed payload ({exc})")
        for child in node.children:
            check(child)
        if kind == "audit":
            _check_audit(node, path)
        if node.role == OBLIGATION and node.discharged:
            for child in node.children:
                if child.role == OBLIGATION and not child.discharged:
                    fail(child.node_id, f"undischarged obligation ({child.status})")
        seen[node.node_id] = node

    def _check_rule(node: Certificate, path: str) -> None:
        g = build_ref(node.payload["graph"])
        verdict = Verdict.from_dict(node.payload["verdict"])
        if verdict.status.value != node.status:
            fail(path, "node status differs from its verdict")
            return
        if node.payload.get("rule") == "two-component":
            if check_two_component_inequality(g).to_dict() != verdict.to_dict():
                fail(path, "two-component check does not reproduce")
            return
        if not verdict.unknown and not revalidate(g, verdict, kb):
            fail(path, f"{verdict.rule} witness does not re-check")

    def _check_audit(node: Certificate, path: str) -> None:
        spec = parse_spec(node.payload["spec"])
        vertex = parse_label(node.payload["vertex"])
        if node.status in (Level.ADMISSIBLE.value, Level.STRONGLY_ADMISSIBLE.value):
            conds = {c.payload.get("condition") for c in node.children}
            need = {"i", "ii"} | ({"iii"} if node.status == Level.STRONGLY_ADMISSIBLE.value else set())
            need &= _conditions_present(spec, vertex)
            if not need <= conds:
                fail(path, f"missing obligations for conditions {sorted(need - conds)}")
            if any(not c.discharged for c in node.children):
                fail(path, "audit claims admissibility with an undischarged obligation")
            if deep:
                level = "strong" if node.status == Level.STRONGLY_ADMISSIBLE.value else "admissible"
                rep = audit(generate(spec), vertex, prover, level=level, name=spec.notation())
                if rep.level.value != node.status:
                    fail(path, f"re-running the audit gives {rep.level.value}")
            if node.role == OBLIGATION:
                admissible.setdefault(spec.to_string(), set()).add(str(vertex))

    def _check_witness(node: Certificate, path: str) -> None:
        ref = node.payload["graph"]
        g = build_ref(ref)
        backed = admissible.get(ref["base"], set())
        claimed = set(node.payload["admissible"])
        if not claimed <= backed:
            fail(path, f"admissibility of {sorted(claimed - backed)} is not backed by an audit")
        oracle = lambda v: str(v) in claimed
        data = node.payload["data"]
        typ = node.payload["type"]
        if typ == "pi":
            wit = PiWitness(V(data["q"]), frozenset(map(V, data["pi1"])), frozenset(map(V, data["pi2"])),
                            V(data["v"]), V(data["s"]), V(data["w"]))
            if not validate_pi_witness(g, wit, oracle):
                fail(path, "neighbourhood-split witness does not re-check")
        elif typ == "lemma3":
            wit = Lemma3Witness(*(V(data[x]) for x in "abcd"))
            if not validate_lemma3_witness(g, wit, oracle):
                fail(path, "four-vertex witness does not re-check")
        elif typ == "cliques":
            if [c.to_dict() for c in clique_case_analysis(g, V(data["p"]))] != data["cases"]:
                fail(path, "clique cases do not reproduce")
        else:
            fail(path, f"unknown witness type {typ!r}")

    check(cert)
    return problems


def _conditions_present(spec: FamilySpec, vertex) -> set:
    g = generate(spec)
    nbrs = g.neighbors(vertex)
    among = any(g.has_edge(x, y) for x in nbrs for y in nbrs if x < y)
    return {"i", "ii"} | ({"iii"} if among else set())


def validate_certificate(cert: Certificate, kb: KnowledgeBase, deep: bool = True) -> bool:
    return not certificate_problems(cert, kb, deep)


# --- rendering -------------------------------------------------------------------------

def emit(cert: Certificate, fmt: str = "json") -> bytes:
    if fmt == "json":
        return (json.dumps(cert.to_dict(), sort_keys=True, indent=1, ensure_ascii=False) + "\n").encode()
    if fmt == "text":
        return _text(cert).encode()
    if fmt == "dot":
        return implication_dot(cert).encode()
    raise ValueError(f"unknown certificate format {fmt!r}")


def _text(cert: Certificate) -> str:
    lines = []

    def walk(node: Certificate, depth: int) -> None:
        tag = "" if node.role == OBLIGATION else " (remark)"
        detail = ""
        if node.kind == "rule":
            v = node.payload["verdict"]
            detail = f" via {v.get('rule') or node.payload.get('rule', 'no rule')}"
        elif node.kind == "axiom":
            detail = f" [{node.payload['axiom']}]"
        elif node.kind in ("kb", "sweep"):
            detail = f" [{node.payload['entry']}]"
        elif node.kind == "ref":
            detail = f" -> {node.payload['ref']}"
        lines.append(f"{'  ' * depth}{node.claim}: {node.status}{detail}{tag}")
        for c in node.children:
            walk(c, depth + 1)

    walk(cert, 0)
    return "\n".join(lines) + "\n"


def implication_edges(cert: Certificate) -> list[tuple[str, str]]:
    """(premise, conclusion) pairs between family members named in the tree."""
    edges = set()

    def cited(node: Certificate):
        if node.kind == "rule":
            v = node.payload["verdict"]
            w = v.get("witness", {})
            if v.get("rule") == "gamma-theorem" and node.role == OBLIGATION:
                yield w["host"]
            entry = w.get("entry", "")
            if entry.startswith("spec:"):
                yield entry[5:]
            if entry.startswith("sweep:"):
                yield entry[6:].partition("@")[0]
        elif node.kind == "kb" and node.payload["entry"].startswith("spec:"):
            yield node.payload["entry"][5:]
        elif node.kind == "ref":
            yield node.payload["ref"]
        for c in node.children:
            if c.kind == "claim" and "spec" in c.payload and c.payload["spec"] != node.payload.get("spec"):
                continue
            yield from cited(c)

    for node in cert.walk():
        if node.kind == "claim" and node.node_id == node.payload.get("spec") and node.role == OBLIGATION:
            for premise in cited(node):
                if premise != node.node_id:
                    edges.add((premise, node.node_id))
    return sorted(edges)


def _dot_label(spec_text: str) -> str:
    return parse_spec(spec_text).notation()


def implication_dot(cert: Certificate) -> str:
    edges = implication_edges(cert)
    names = sorted({x for e in edges for x in e} | {n.node_id for n in cert.walk()
                                                    if n.kind == "claim" and n.node_id == n.payload.get("spec")})
    lines = ["digraph implications {", "  rankdir=LR;", "  node [shape=box];"]
    for name in names:
        lines.append(f'  "{name}" [label="{_dot_label(name)}"];')
    for a, b in edges:
        lines.append(f'  "{a}" -> "{b}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
