"""The parametric graph families: Gamma_{k,t}, Sigma^L_{k,n}, Sigma^R_{k,n}
and Sigma^{R*}_{k,n,m}, with generation, recognition up to isomorphism and
single-deletion catalogues.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from math import comb

from .graph import (
    CanonicalForm,
    GraphError,
    LabeledGraph,
    VertexLabel,
    build_graph,
    canonical_form,
    delete_edges,
    delete_vertex,
)

FAMILIES = ("GammaKT", "SigmaL", "SigmaR", "SigmaRStar")

_SPEC_RE = re.compile(r"^\s*([A-Za-z*]+)\s*:\s*([\d,\s]+)$")
_FAMILY_NAMES = {
    "gamma": "GammaKT",
    "sigmal": "SigmaL",
    "sigmar": "SigmaR",
    "sigmarstar": "SigmaRStar",
    "sigmar*": "SigmaRStar",
}


class SpecError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class FamilySpec:
    family: str
    k: int
    n: int = 0
    m: int = 0
    t: int = 0

    def __post_init__(self):
        f, k, n, m, t = self.family, self.k, self.n, self.m, self.t
        if f not in FAMILIES:
            raise SpecError(f"unknown family {f!r}")
        if k < 1:
            raise SpecError(f"k must be positive, got {k}")
        if f == "GammaKT":
            if not (k >= t >= 1) or n or m:
                raise SpecError(f"Gamma_{{k,t}} needs k >= t >= 1 (got k={k}, t={t})")
        elif f in ("SigmaL", "SigmaR"):
            if not (1 <= n <= k) or m or t:
                raise SpecError(f"{f} needs 1 <= n <= k (got k={k}, n={n})")
        else:
            if not (1 <= n <= k) or m < 1 or t:
                raise SpecError(f"SigmaRStar needs 1 <= n <= k and m >= 1 (got k={k}, n={n}, m={m})")

    @property
    def params(self) -> tuple[int, ...]:
        if self.family == "GammaKT":
            return self.k, self.t
        if self.family == "SigmaRStar":
            return self.k, self.n, self.m
        return self.k, self.n

    def to_string(self) -> str:
        """CLI spelling, e.g. ``sigmaRstar:3,1,2``."""
        name = {"GammaKT": "gamma", "SigmaL": "sigmaL", "SigmaR": "sigmaR", "SigmaRStar": "sigmaRstar"}[self.family]
        return f"{name}:{','.join(map(str, self.params))}"

    def notation(self) -> str:
        """Mathematical spelling, e.g. ``Σ^{R*}_{3,1,2}``."""
        p = ",".join(map(str, self.params))
        return {
            "GammaKT": f"Γ_{{{p}}}",
            "SigmaL": f"Σ^L_{{{p}}}",
            "SigmaR": f"Σ^R_{{{p}}}",
            "SigmaRStar": f"Σ^{{R*}}_{{{p}}}",
        }[self.family]

    def __str__(self) -> str:
        return self.to_string()


def Gamma(k: int, t: int) -> FamilySpec:
    return FamilySpec("GammaKT", k, t=t)


def SigmaL(k: int, n: int) -> FamilySpec:
    return FamilySpec("SigmaL", k, n)


def SigmaR(k: int, n: int) -> FamilySpec:
    return FamilySpec("SigmaR", k, n)


def SigmaRStar(k: int, n: int, m: int) -> FamilySpec:
    return FamilySpec("SigmaRStar", k, n, m)


def parse_spec(text: str) -> FamilySpec:
    m = _SPEC_RE.match(text)
    if not m:
        raise SpecError(f"cannot parse family spec {text!r} (expected e.g. 'sigmaR:3,1')")
    name, nums = m.group(1).lower(), m.group(2)
    if "ml" in name:
        raise SpecError("the Sigma^{mL} variant (C joined to A) is not supported by this toolkit")
    if name not in _FAMILY_NAMES:
        raise SpecError(f"unknown family {m.group(1)!r}; use gamma, sigmaL, sigmaR or sigmaRstar")
    family = _FAMILY_NAMES[name]
    try:
        vals = [int(x) for x in nums.split(",")]
    except ValueError:
        raise SpecError(f"bad parameters in {text!r}") from None
    want = 3 if family == "SigmaRStar" else 2
    if len(vals) != want:
        raise SpecError(f"{family} takes {want} parameters, got {len(vals)}")
    if family == "GammaKT":
        return Gamma(*vals)
    if family == "SigmaRStar":
        return SigmaRStar(*vals)
    return FamilySpec(family, vals[0], vals[1])


def _a(i): return VertexLabel("A", i)
def _b(i): return VertexLabel("B", i)
def _c(i): return VertexLabel("C", i)


C_FIXED = VertexLabel("Cfixed", 1)


def _clique(vs):
    return [(vs[i], vs[j]) for i in range(len(vs)) for j in range(i + 1, len(vs))]


@lru_cache(maxsize=None)
def generate(spec: FamilySpec) -> LabeledGraph:
    k = spec.k
    A = [_a(i) for i in range(1, k + 1)]
    if spec.family == "GammaKT":
        B = [_b(i) for i in range(1, spec.t + 1)]
        edges = _clique(A) + _clique(B) + [(A[i], B[i]) for i in range(spec.t)]
        return build_graph(A + B, edges)
    n = spec.n
    B = [_b(i) for i in range(1, k + n + 1)]
    edges = _clique(A) + _clique(B)
    edges += [(A[i], B[i]) for i in range(k)]
    edges += [(A[i], B[k + i]) for i in range(n)]
    if spec.family == "SigmaRStar":
        C = [_c(j) for j in range(1, spec.m + 1)]
        edges += _clique(C) + [(b, c) for b in B for c in C]
        return build_graph(A + B + C, edges)
    side = A if spec.family == "SigmaL" else B
    edges += [(C_FIXED, x) for x in side]
    return build_graph(A + B + [C_FIXED], edges)


def vertex_count(spec: FamilySpec) -> int:
    if spec.family == "GammaKT":
        return spec.k + spec.t
    if spec.family == "SigmaRStar":
        return 2 * spec.k + spec.n + spec.m
    return 2 * spec.k + spec.n + 1


def edge_count(spec: FamilySpec) -> int:
    k, n, m, t = spec.k, spec.n, spec.m, spec.t
    if spec.family == "GammaKT":
        return comb(k, 2) + comb(t, 2) + t
    base = comb(k, 2) + comb(k + n, 2) + k + n
    if spec.family == "SigmaL":
        return base + k
    if spec.family == "SigmaR":
        return base + k + n
    return base + m * (k + n) + comb(m, 2)


@lru_cache(maxsize=None)
def _form(spec: FamilySpec) -> CanonicalForm:
    return canonical_form(generate(spec))


def candidate_specs(nv: int):
    """Every valid spec on ``nv`` vertices, in normalization preference order."""
    for k in range(1, nv):
        t = nv - k
        if k >= t >= 1:
            yield Gamma(k, t)
    for family in ("SigmaL", "SigmaR"):
        for k in range(1, nv):
            n = nv - 1 - 2 * k
            if 1 <= n <= k:
                yield FamilySpec(family, k, n)
    for k in range(1, nv):
        for n in range(1, k + 1):
            m = nv - 2 * k - n
            if m >= 2:
                yield SigmaRStar(k, n, m)


def recognize(g: LabeledGraph) -> FamilySpec | None:
    """Family member isomorphic to ``g``, or ``None``.

    Overlaps resolve to the first match in ``candidate_specs`` order, so
    Gamma beats Sigma and Sigma^R_{k,n} beats Sigma^{R*}_{k,n,1}.
    """
    ne, degs = g.edge_count, g.degree_sequence()
    form = None
    for spec in candidate_specs(g.n):
        if edge_count(spec) != ne:
            continue
        h = generate(spec)
        if h.degree_sequence() != degs:
            continue
        if form is None:
            form = canonical_form(g)
        if _form(spec) == form:
            return spec
    return None


def normalize(spec: FamilySpec) -> FamilySpec:
    if spec.family == "SigmaRStar" and spec.m == 1:
        return SigmaR(spec.k, spec.n)
    found = recognize(generate(spec))
    return found if found is not None else spec


def deletion_notation(base: str, items) -> str:
    parts = []
    for it in items:
        if isinstance(it, tuple):
            a, b = sorted(it)
            parts.append(f"ε({a},{b})")
        else:
            parts.append(str(it))
    return f"{base}[{','.join(parts)}]"


def deletion_catalog(spec: FamilySpec) -> list[tuple[str, LabeledGraph]]:
    """All single-vertex and single-edge deletions of ``generate(spec)``."""
    g = generate(spec)
    base = spec.notation()
    out = [(deletion_notation(base, [v]), delete_vertex(g, v)) for v in sorted(g.labels)]
    out += [(deletion_notation(base, [e]), delete_edges(g, [e])) for e in g.edges()]
    return out


def format_graph_file(g: LabeledGraph) -> str:
    lines = ["%primegraph-graph v1"]
    lines += [f"vertex {lab}" for lab in g.labels]
    lines += [f"edge {a} {b}" for a, b in g.edges()]
    return "\n".join(lines) + "\n"


def parse_graph_file(text: str) -> LabeledGraph:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or lines[0] != "%primegraph-graph v1":
        raise GraphError("graph file must start with '%primegraph-graph v1'")
    labels, edges = [], []
    for ln in lines[1:]:
        parts = ln.split()
        if parts[0] == "vertex" and len(parts) == 2:
            labels.append(parts[1])
        elif parts[0] == "edge" and len(parts) == 3:
            edges.append((parts[1], parts[2]))
        else:
            raise GraphError(f"bad graph file line: {ln!r}")
    return build_graph(labels, edges)
