"""Dual graphs of marked degenerations: components, nodes, marks.

A model records the combinatorial fiber of a one-parameter family over a
punctured disk: irreducible components with genus and multiplicity, nodes
as edges between distinct components (never loops), and marked points with
integer coefficients.  Everything is immutable and all derived quantities
(valency, edge lengths, genus) are recomputed from scratch, so values can
be shared freely across threads.

Edge lengths are 1/(a*b) for endpoint multiplicities a, b, kept as exact
fractions throughout.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ModelValidationError

__all__ = [
    "ModelParams",
    "MarkedPoint",
    "Component",
    "Edge",
    "DualGraphModel",
    "Violation",
    "ValidationReport",
    "make_model",
    "validate",
    "require_valid",
    "arithmetic_genus",
    "total_mark_degree",
    "is_inessential",
    "canonical_form",
    "is_isomorphic",
]


@dataclass(frozen=True)
class ModelParams:
    """Global parameters: the tensor power m of the relative dualizing sheaf."""

    m: int

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 1:
            raise ValueError(f"m must be a positive integer, got {self.m!r}")
        # m == 1 is representable but reported by validate(); the measures
        # here are only defined for m >= 2.


@dataclass(frozen=True)
class MarkedPoint:
    """A horizontal mark restricted to the special fiber.

    ``merge_group`` is None for a mark at its own generic point; marks that
    were pushed to a common point by a contraction share a group id.
    """

    id: str
    host: str
    coefficient: int
    merge_group: str | None = None

    def __post_init__(self):
        if not isinstance(self.coefficient, int) or self.coefficient < 1:
            raise ValueError(
                f"mark {self.id}: coefficient must be a positive integer"
            )


@dataclass(frozen=True)
class Component:
    """An irreducible component of the special fiber."""

    id: str
    genus: int = 0
    multiplicity: int = 1

    def __post_init__(self):
        if not isinstance(self.genus, int) or self.genus < 0:
            raise ValueError(f"component {self.id}: genus must be >= 0")
        if not isinstance(self.multiplicity, int) or self.multiplicity < 1:
            raise ValueError(f"component {self.id}: multiplicity must be >= 1")


@dataclass(frozen=True)
class Edge:
    """A node of the fiber, joining two distinct components.

    Endpoints are stored in declaration order; positions along the edge are
    measured from ``endpoints[0]``.  Loops are rejected: a self-node must be
    presented after blowup as two components.
    """

    id: str
    endpoints: tuple[str, str]

    def __post_init__(self):
        a, b = self.endpoints
        if a == b:
            raise ValueError(f"edge {self.id}: loop on {a} forbidden")


@dataclass(frozen=True)
class DualGraphModel:
    """Immutable dual graph of a degenerate fiber with marks.

    ``provenance`` records the blowup/contraction events that produced the
    model; it is metadata and excluded from equality.
    """

    params: ModelParams
    components: tuple[Component, ...]
    edges: tuple[Edge, ...] = ()
    marks: tuple[MarkedPoint, ...] = ()
    provenance: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        by_id = {}
        for c in self.components:
            if c.id in by_id:
                raise ValueError(f"duplicate component id {c.id}")
            by_id[c.id] = c
        edge_by_id = {}
        for e in self.edges:
            if e.id in by_id or e.id in edge_by_id:
                raise ValueError(f"duplicate id {e.id}")
            for v in e.endpoints:
                if v not in by_id:
                    raise ValueError(f"edge {e.id}: unknown component {v}")
            edge_by_id[e.id] = e
        mark_by_id = {}
        for p in self.marks:
            if p.id in by_id or p.id in edge_by_id or p.id in mark_by_id:
                raise ValueError(f"duplicate id {p.id}")
            if p.host not in by_id:
                raise ValueError(f"mark {p.id}: unknown host {p.host}")
            mark_by_id[p.id] = p
        object.__setattr__(self, "_components", by_id)
        object.__setattr__(self, "_edges", edge_by_id)
        object.__setattr__(self, "_marks", mark_by_id)

    # -- lookups ---------------------------------------------------------

    def component(self, cid: str) -> Component:
        return self._components[cid]

    def edge(self, eid: str) -> Edge:
        return self._edges[eid]

    def mark(self, pid: str) -> MarkedPoint:
        return self._marks[pid]

    def component_ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.components)

    def edges_at(self, cid: str) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if cid in e.endpoints)

    def valency(self, cid: str) -> int:
        """Number of nodes on the component, counting multi-edges."""
        return sum(e.endpoints.count(cid) for e in self.edges)

    def marks_on(self, cid: str) -> tuple[MarkedPoint, ...]:
        return tuple(p for p in self.marks if p.host == cid)

    def mark_degree(self, cid: str) -> int:
        """Total mark coefficient carried by the component."""
        return sum(p.coefficient for p in self.marks if p.host == cid)

    def edge_length(self, eid: str) -> Fraction:
        e = self._edges[eid]
        a = self._components[e.endpoints[0]].multiplicity
        b = self._components[e.endpoints[1]].multiplicity
        return Fraction(1, a * b)

    def is_semistable(self) -> bool:
        """True when the fiber is reduced (all multiplicities 1)."""
        return all(c.multiplicity == 1 for c in self.components)

    def with_params(self, m: int) -> "DualGraphModel":
        """Same marked graph, reinterpreted at a different tensor power."""
        if m == self.params.m:
            return self
        return DualGraphModel(
            ModelParams(m), self.components, self.edges, self.marks,
            self.provenance,
        )

    def mark_locations(self) -> dict[tuple[str, str | None], list[MarkedPoint]]:
        """Marks grouped by coincident location.

        Ungrouped marks sit at their own generic points and come back as
        singleton entries keyed by their own id.
        """
        out: dict[tuple[str, str | None], list[MarkedPoint]] = {}
        for p in self.marks:
            key = (p.host, p.merge_group if p.merge_group else p.id)
            out.setdefault(key, []).append(p)
        return out


def make_model(m, vertices, edges=(), marks=(), provenance=()) -> DualGraphModel:
    """Compact constructor used throughout tests and demos.

    vertices: (id, genus) or (id, genus, multiplicity)
    edges:    (a, b) with an auto id, or (id, a, b)
    marks:    (id, host, coefficient) or (id, host, coefficient, group)
    """
    comps = []
    for v in vertices:
        if len(v) == 2:
            comps.append(Component(v[0], v[1]))
        else:
            comps.append(Component(v[0], v[1], v[2]))
    used = {c.id for c in comps}
    es = []
    auto = itertools.count(1)
    for e in edges:
        if len(e) == 2:
            eid = f"e{next(auto)}"
            while eid in used:
                eid = f"e{next(auto)}"
            es.append(Edge(eid, (e[0], e[1])))
        else:
            es.append(Edge(e[0], (e[1], e[2])))
        used.add(es[-1].id)
    ms = []
    for p in marks:
        if len(p) == 3:
            ms.append(MarkedPoint(p[0], p[1], p[2]))
        else:
            ms.append(MarkedPoint(p[0], p[1], p[2], p[3]))
    return DualGraphModel(ModelParams(m), tuple(comps), tuple(es), tuple(ms),
                          tuple(provenance))


# -- basic invariants ------------------------------------------------------


def _connected(model: DualGraphModel) -> bool:
    if not model.components:
        return False
    adj: dict[str, set[str]] = {c.id: set() for c in model.components}
    for e in model.edges:
        a, b = e.endpoints
        adj[a].add(b)
        adj[b].add(a)
    seen = {model.components[0].id}
    stack = [model.components[0].id]
    while stack:
        for u in adj[stack.pop()]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == len(model.components)


def arithmetic_genus(model: DualGraphModel) -> int:
    """Genus of the fiber: sum of component genera plus independent cycles."""
    if not _connected(model):
        raise ModelValidationError("arithmetic genus needs a connected model")
    return (sum(c.genus for c in model.components)
            + len(model.edges) - len(model.components) + 1)


def total_mark_degree(model: DualGraphModel) -> int:
    return sum(p.coefficient for p in model.marks)


def is_inessential(genus: int, valency: int, mark_degree: int) -> bool:
    """Genus-0 components with two nodes and no marks carry no sections."""
    return genus == 0 and valency == 2 and mark_degree == 0


# -- validation ------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    subject: str | None = None


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple[Violation, ...] = ()
    warnings: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.errors

    def describe(self) -> str:
        lines = [f"error[{v.code}] {v.message}" for v in self.errors]
        lines += [f"warning[{v.code}] {v.message}" for v in self.warnings]
        return "\n".join(lines) if lines else "ok"


def validate(model: DualGraphModel) -> ValidationReport:
    """Structured validity check; never raises.

    Errors cover: m below 2, mark coefficients outside [1, m-1],
    disconnection, the excluded genus-1 unmarked family, underweighted
    genus-0 total fibers, and all components inessential.  Coincident marks
    whose combined coefficient reaches m produce a warning, not an error.
    """
    errors: list[Violation] = []
    warnings: list[Violation] = []
    m = model.params.m

    if not model.components:
        return ValidationReport((Violation("empty-model", "model has no components"),))

    if m < 2:
        errors.append(Violation("m-below-2", f"m must be at least 2, got {m}"))

    for p in model.marks:
        if not (1 <= p.coefficient <= m - 1):
            errors.append(Violation(
                "mark-coefficient-range",
                f"mark {p.id}: coefficient {p.coefficient} outside [1, {m - 1}]",
                p.id,
            ))

    if not _connected(model):
        errors.append(Violation("disconnected", "model must be connected"))
        return ValidationReport(tuple(errors), tuple(warnings))

    g = (sum(c.genus for c in model.components)
         + len(model.edges) - len(model.components) + 1)

    if g == 1 and not model.marks:
        errors.append(Violation(
            "excluded-family",
            "genus-1 fibers without marks admit no sections for any m",
        ))

    if g == 0:
        deg = total_mark_degree(model)
        if deg < 2 * m:
            errors.append(Violation(
                "genus0-mark-degree",
                f"genus-0 family needs total mark degree >= {2 * m}, got {deg}",
            ))
        if len(model.marks) < 3:
            errors.append(Violation(
                "genus0-mark-count",
                f"genus-0 family needs at least 3 marks, got {len(model.marks)}",
            ))

    if len(model.components) > 0 and all(
        is_inessential(c.genus, model.valency(c.id), model.mark_degree(c.id))
        for c in model.components
    ):
        errors.append(Violation(
            "all-inessential-cycle",
            "every component is inessential; no such fiber exists",
        ))

    for (host, loc), group in model.mark_locations().items():
        if len(group) > 1:
            total = sum(p.coefficient for p in group)
            if total >= m:
                warnings.append(Violation(
                    "merged-marks-exceed-m",
                    f"marks {sorted(p.id for p in group)} share a point on "
                    f"{host} with combined coefficient {total} >= m = {m}",
                    host,
                ))

    return ValidationReport(tuple(errors), tuple(warnings))


def require_valid(model: DualGraphModel) -> None:
    report = validate(model)
    if not report.ok:
        raise ModelValidationError(report.describe(), report)


# -- canonical form and isomorphism ----------------------------------------


def _color(model: DualGraphModel, cid: str):
    c = model.component(cid)
    # Mark partition by coincident location; singleton groups are the same
    # shape as never-moved marks, so both normalize to singletons.
    groups = sorted(
        tuple(sorted(p.coefficient for p in grp))
        for (host, _), grp in model.mark_locations().items()
        if host == cid
    )
    return (c.genus, c.multiplicity, tuple(groups))


def canonical_form(model: DualGraphModel):
    """A relabeling-invariant encoding of the marked graph.

    Brute force over color-respecting relabelings with incremental pruning;
    models here are small, and colors cut the search hard.
    """
    ids = sorted(model.component_ids())
    colors = {cid: _color(model, cid) for cid in ids}
    classes: dict[object, list[str]] = {}
    for cid in ids:
        classes.setdefault(colors[cid], []).append(cid)
    ordered_classes = [classes[k] for k in sorted(classes.keys())]

    work = 1
    for cls in ordered_classes:
        for k in range(2, len(cls) + 1):
            work *= k
    if work > 500_000:
        raise ValueError(
            "canonical form is brute force and this model's color classes "
            "are too symmetric; intended for small models only"
        )

    edge_mult: dict[tuple[str, str], int] = {}
    for e in model.edges:
        key = tuple(sorted(e.endpoints))
        edge_mult[key] = edge_mult.get(key, 0) + 1

    best = None
    for perms in itertools.product(
        *(itertools.permutations(cls) for cls in ordered_classes)
    ):
        number: dict[str, int] = {}
        n = 0
        for cls in perms:
            for cid in cls:
                number[cid] = n
                n += 1
        enc = tuple(sorted(
            (min(number[a], number[b]), max(number[a], number[b]), k)
            for (a, b), k in edge_mult.items()
        ))
        if best is None or enc < best:
            best = enc
    color_sig = tuple(sorted(colors.values()))
    return (model.params.m, color_sig, best)


def is_isomorphic(a: DualGraphModel, b: DualGraphModel) -> bool:
    """Color- and multiplicity-respecting multigraph isomorphism."""
    if a.params.m != b.params.m:
        return False
    if (len(a.components), len(a.edges), len(a.marks)) != (
            len(b.components), len(b.edges), len(b.marks)):
        return False
    return canonical_form(a) == canonical_form(b)
