"""Model reduction, blowups, and measure transport between models.

Two models of the same family are compared through a DominationMap: an
ordered list of collapse steps leading from the more blown-up model (the
source) to the smaller one (the target).  Contraction to the minimal model
produces such a map; each blowup produces the one-step map back down.
Measures push forward along the steps and lift against them.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .bundles import ComponentClass, classify_component
from .errors import LiftError, ModelValidationError
from .measures import (
    Atom,
    CCMeasure,
    ComponentPoint,
    EdgePoint,
    mass_add,
    mass_is_zero,
    zero_descriptor,
)
from .model import (
    Component,
    DualGraphModel,
    Edge,
    MarkedPoint,
    is_inessential,
    require_valid,
)

__all__ = [
    "SmoothCollapse",
    "NodeCollapse",
    "DominationMap",
    "compose_maps",
    "minimal_snc_model",
    "classify",
    "ChainEdge",
    "StableDualGraph",
    "stable_dual_graph",
    "stable_graph",
    "Skeleton",
    "essential_skeleton",
    "blowup_smooth_point",
    "blowup_node",
    "pushforward_measure",
    "lift_measure",
]


# -- collapse steps ----------------------------------------------------------


@dataclass(frozen=True)
class SmoothCollapse:
    """One component and its single edge collapse to a point on the host."""

    component: str
    edge: str
    host: str
    location: str  # point id on the host
    moved_marks: tuple[str, ...] = ()


@dataclass(frozen=True)
class NodeCollapse:
    """A two-edge exceptional component collapses back into one node.

    The two source edges merge into ``merged_edge`` between endpoint_a and
    endpoint_b; positions on the merged edge run from endpoint_a, and the
    collapsed component sits at distance ``length_a`` from it.
    """

    component: str
    edge_a: str
    endpoint_a: str
    length_a: Fraction
    edge_b: str
    endpoint_b: str
    length_b: Fraction
    merged_edge: str


@dataclass(frozen=True)
class DominationMap:
    """Ordered collapse steps from ``source`` (blown up) down to ``target``."""

    source: DualGraphModel
    target: DualGraphModel
    steps: tuple[object, ...]

    def component_fate(self, cid: str) -> str:
        for s in self.steps:
            if s.component == cid:
                if isinstance(s, SmoothCollapse):
                    return f"collapsed-to-point({s.host}:{s.location})"
                return f"collapsed-to-point({s.merged_edge}@{s.length_a})"
        return "kept"

    def edge_fate(self, eid: str) -> str:
        for s in self.steps:
            if isinstance(s, SmoothCollapse) and s.edge == eid:
                return "collapsed"
            if isinstance(s, NodeCollapse) and eid in (s.edge_a, s.edge_b):
                return f"merged-into({s.merged_edge})"
        return "kept"

    def subdivision_of(self, eid: str) -> tuple[str, ...]:
        """Source edges a target edge is subdivided into (inverse fate)."""
        parts = [eid]
        for s in reversed(self.steps):
            if isinstance(s, NodeCollapse) and s.merged_edge in parts:
                i = parts.index(s.merged_edge)
                parts[i:i + 1] = [s.edge_a, s.edge_b]
        return tuple(parts)


def compose_maps(outer: DominationMap, inner: DominationMap) -> DominationMap:
    """Compose source->mid with mid->target into source->target."""
    if outer.target != inner.source:
        raise ValueError("maps do not chain: outer.target != inner.source")
    return DominationMap(outer.source, inner.target, outer.steps + inner.steps)


def _identity_map(model: DualGraphModel) -> DominationMap:
    return DominationMap(model, model, ())


def _fresh_id(base: str, used: set[str]) -> str:
    if base not in used:
        return base
    for k in itertools.count(2):
        cand = f"{base}_{k}"
        if cand not in used:
            return cand


def _all_ids(model: DualGraphModel) -> set[str]:
    out = {c.id for c in model.components}
    out |= {e.id for e in model.edges}
    out |= {p.id for p in model.marks}
    return out


# -- contraction to the minimal model ---------------------------------------


def _contractible(model: DualGraphModel, m: int, cid: str) -> bool:
    c = model.component(cid)
    return (c.genus == 0
            and model.valency(cid) == 1
            and model.mark_degree(cid) < m)


def _contract_leaf(model: DualGraphModel, cid: str) -> tuple[DualGraphModel, SmoothCollapse]:
    edge = model.edges_at(cid)[0]
    host = edge.endpoints[0] if edge.endpoints[1] == cid else edge.endpoints[1]
    location = _fresh_id(f"pt_{cid}", _all_ids(model))
    moved = tuple(p.id for p in model.marks_on(cid))
    marks = []
    for p in model.marks:
        if p.host == cid:
            # everything on the leaf lands at one point of the host
            marks.append(MarkedPoint(p.id, host, p.coefficient, location))
        else:
            marks.append(p)
    out = DualGraphModel(
        model.params,
        tuple(c for c in model.components if c.id != cid),
        tuple(e for e in model.edges if e.id != edge.id),
        tuple(marks),
        model.provenance + (f"contract:{cid}->{host}@{location}",),
    )
    return out, SmoothCollapse(cid, edge.id, host, location, moved)


def minimal_snc_model(model: DualGraphModel, m: int | None = None) -> tuple[DualGraphModel, DominationMap]:
    """Contract unmarked-enough rational tails until none remain.

    Repeatedly removes a genus-0, valency-1 component whose mark degree is
    below m, lowest id first; its marks land together at one point of the
    neighbor.  Returns the reduced model and the map from the input onto it.
    """
    if m is not None:
        model = model.with_params(m)
    require_valid(model)
    if not model.is_semistable():
        raise ModelValidationError(
            "contraction needs a semistable (multiplicity-1) model"
        )
    current = model
    steps: list[SmoothCollapse] = []
    mm = current.params.m
    while True:
        todo = sorted(
            c.id for c in current.components if _contractible(current, mm, c.id)
        )
        if not todo:
            break
        current, step = _contract_leaf(current, todo[0])
        steps.append(step)
    if len(current.components) == 1:
        only = current.components[0]
        if only.genus == 0 and current.mark_degree(only.id) < 2 * mm:
            raise ModelValidationError(
                "contraction ended on a single rational component with "
                "total mark degree below 2m; no minimal model exists"
            )
    return current, DominationMap(model, current, tuple(steps))


def is_minimal(model: DualGraphModel, m: int | None = None) -> bool:
    mm = model.params.m if m is None else m
    return not any(_contractible(model, mm, c.id) for c in model.components)


def classify(model: DualGraphModel, m: int | None = None) -> dict[str, ComponentClass]:
    """Per-component classification; requires a valid model."""
    if m is not None:
        model = model.with_params(m)
    require_valid(model)
    return {c.id: classify_component(model, c.id) for c in model.components}


# -- stable dual graph -------------------------------------------------------


@dataclass(frozen=True)
class ChainEdge:
    """A maximal chain of edges through inessential components.

    Closed chains (both endpoints equal) are allowed; they arise from
    cycles of inessential components hanging on one essential vertex.
    """

    id: str
    endpoints: tuple[str, str]
    model_edges: tuple[str, ...]
    interior: tuple[str, ...]
    length: Fraction


@dataclass(frozen=True)
class StableDualGraph:
    """Essential components with inessential chains shrunk to single edges.

    As a metric graph this is isometric to the full dual graph; only the
    two-valent unmarked rational vertices are forgotten.
    """

    m: int
    vertices: tuple[str, ...]
    genus: dict[str, int]
    mark_degree: dict[str, int]
    chains: tuple[ChainEdge, ...]

    def valency(self, vid: str) -> int:
        return sum(ch.endpoints.count(vid) for ch in self.chains)

    def chain_length(self, chain_id: str) -> Fraction:
        for ch in self.chains:
            if ch.id == chain_id:
                return ch.length
        raise KeyError(chain_id)


def stable_graph(m, vertices, edges) -> StableDualGraph:
    """Directly build a stable graph; closed edges (self-nodes) allowed.

    vertices: (id, genus) pairs; edges: (a, b) pairs, possibly a == b.
    """
    vids = tuple(v[0] for v in vertices)
    genus = {v[0]: v[1] for v in vertices}
    chains = tuple(
        ChainEdge(f"ch{i}", (a, b), (f"ch{i}",), (), Fraction(1))
        for i, (a, b) in enumerate(edges)
    )
    return StableDualGraph(m, vids, genus, {v: 0 for v in vids}, chains)


def stable_dual_graph(model: DualGraphModel, m: int | None = None) -> StableDualGraph:
    """Forget inessential components, merging their chains into edges."""
    if m is not None:
        model = model.with_params(m)
    require_valid(model)
    inessential = {
        c.id for c in model.components
        if is_inessential(c.genus, model.valency(c.id), model.mark_degree(c.id))
    }
    essential = [c.id for c in model.components if c.id not in inessential]
    if not essential:
        raise ModelValidationError("all components are inessential")

    incident: dict[str, list[Edge]] = {c.id: [] for c in model.components}
    for e in model.edges:
        incident[e.endpoints[0]].append(e)
        if e.endpoints[1] != e.endpoints[0]:
            incident[e.endpoints[1]].append(e)

    used: set[str] = set()
    chains: list[ChainEdge] = []
    counter = itertools.count(0)
    for v0 in sorted(essential):
        for first in sorted(incident[v0], key=lambda e: e.id):
            if first.id in used:
                continue
            # walk away from v0 through inessential vertices
            edges_in_chain = [first.id]
            interior: list[str] = []
            cur = first.endpoints[0] if first.endpoints[1] == v0 else first.endpoints[1]
            last_edge = first
            while cur in inessential:
                interior.append(cur)
                nxt = None
                for cand in sorted(incident[cur], key=lambda x: x.id):
                    if cand.id != last_edge.id:
                        nxt = cand
                        break
                if nxt is None:
                    raise ModelValidationError(
                        f"inessential component {cur} has a dangling chain"
                    )
                edges_in_chain.append(nxt.id)
                cur = nxt.endpoints[0] if nxt.endpoints[1] == cur else nxt.endpoints[1]
                last_edge = nxt
            used.update(edges_in_chain)
            length = sum((model.edge_length(eid) for eid in edges_in_chain),
                         Fraction(0))
            chains.append(ChainEdge(
                f"ch{next(counter)}", (v0, cur), tuple(edges_in_chain),
                tuple(interior), length,
            ))
    if len(used) != len(model.edges):
        # can only happen for cycles made purely of inessential components,
        # which validation already rejects
        raise ModelValidationError("inessential cycle not attached to any "
                                   "essential component")
    return StableDualGraph(
        model.params.m,
        tuple(sorted(essential)),
        {cid: model.component(cid).genus for cid in essential},
        {cid: model.mark_degree(cid) for cid in essential},
        tuple(chains),
    )


@dataclass(frozen=True)
class Skeleton:
    """The dual graph of the minimal model, flagged as essential skeleton."""

    model: DualGraphModel
    is_essential_skeleton: bool = True

    def edge_lengths(self) -> dict[str, Fraction]:
        return {e.id: self.model.edge_length(e.id) for e in self.model.edges}

    def total_length(self) -> Fraction:
        return sum(self.edge_lengths().values(), Fraction(0))


def essential_skeleton(model: DualGraphModel, m: int | None = None) -> Skeleton:
    """Reduce to the minimal model; its dual graph is the essential skeleton."""
    reduced, _ = minimal_snc_model(model, m)
    return Skeleton(reduced)


# -- blowups -----------------------------------------------------------------


def blowup_smooth_point(model: DualGraphModel, cid: str,
                        mark_group: tuple[str, ...] = ()) -> tuple[DualGraphModel, DominationMap]:
    """Blow up a smooth point of a component of multiplicity a.

    Inserts a rational component of the same multiplicity joined by an edge
    of length 1/a^2.  Marks listed in ``mark_group`` (all hosted on the
    component) move onto the new component.
    """
    host = model.component(cid)
    used = _all_ids(model)
    exc_id = _fresh_id(f"exc_{cid}", used)
    used.add(exc_id)
    edge_id = _fresh_id(f"e_{exc_id}", used)
    for pid in mark_group:
        if model.mark(pid).host != cid:
            raise ValueError(f"mark {pid} is not on component {cid}")
    marks = tuple(
        MarkedPoint(p.id, exc_id, p.coefficient, p.merge_group)
        if p.id in mark_group else p
        for p in model.marks
    )
    blown = DualGraphModel(
        model.params,
        model.components + (Component(exc_id, 0, host.multiplicity),),
        model.edges + (Edge(edge_id, (cid, exc_id)),),
        marks,
        model.provenance + (f"blowup-smooth:{cid}->{exc_id}",),
    )
    location = _fresh_id(f"pt_{exc_id}", _all_ids(blown))
    step = SmoothCollapse(exc_id, edge_id, cid, location, tuple(mark_group))
    return blown, DominationMap(blown, model, (step,))


def blowup_node(model: DualGraphModel, eid: str) -> tuple[DualGraphModel, DominationMap]:
    """Blow up the node of an edge with endpoint multiplicities a, b.

    The exceptional component has multiplicity a+b; the edge of length
    1/(a*b) is subdivided into pieces of lengths 1/(a*(a+b)) and
    1/(b*(a+b)) meeting at the new component.
    """
    e = model.edge(eid)
    va, vb = e.endpoints
    a = model.component(va).multiplicity
    b = model.component(vb).multiplicity
    used = _all_ids(model)
    exc_id = _fresh_id(f"exc_{eid}", used)
    used.add(exc_id)
    ea_id = _fresh_id(f"{eid}_a", used)
    used.add(ea_id)
    eb_id = _fresh_id(f"{eid}_b", used)
    blown = DualGraphModel(
        model.params,
        model.components + (Component(exc_id, 0, a + b),),
        tuple(x for x in model.edges if x.id != eid)
        + (Edge(ea_id, (va, exc_id)), Edge(eb_id, (exc_id, vb))),
        model.marks,
        model.provenance + (f"blowup-node:{eid}->{exc_id}",),
    )
    step = NodeCollapse(
        component=exc_id,
        edge_a=ea_id, endpoint_a=va, length_a=Fraction(1, a * (a + b)),
        edge_b=eb_id, endpoint_b=vb, length_b=Fraction(1, b * (a + b)),
        merged_edge=eid,
    )
    return blown, DominationMap(blown, model, (step,))


# -- measure transport -------------------------------------------------------


def _push_step(measure: CCMeasure, step) -> CCMeasure:
    comps = dict(measure.components)
    edges = dict(measure.edges)
    atoms = list(measure.atoms)

    if isinstance(step, SmoothCollapse):
        gone = comps.pop(step.component)
        collapsed_mass = gone.total
        collapsed_mass = mass_add(collapsed_mass, edges.pop(step.edge))
        new_atoms = []
        for a in atoms:
            loc = a.location
            on_gone = (isinstance(loc, ComponentPoint) and loc.component == step.component) \
                or (isinstance(loc, EdgePoint) and loc.edge == step.edge)
            if on_gone:
                collapsed_mass = mass_add(collapsed_mass, a.mass)
            else:
                new_atoms.append(a)
        atoms = new_atoms
        target_loc = ComponentPoint(step.host, step.location)
        if not mass_is_zero(collapsed_mass):
            merged = False
            for i, a in enumerate(atoms):
                if a.location == target_loc:
                    atoms[i] = Atom(target_loc, mass_add(a.mass, collapsed_mass))
                    merged = True
            if not merged:
                atoms.append(Atom(target_loc, collapsed_mass))
        return CCMeasure(None, measure.kind, comps, edges, tuple(atoms))

    if isinstance(step, NodeCollapse):
        gone = comps.pop(step.component)
        mass_a = edges.pop(step.edge_a)
        mass_b = edges.pop(step.edge_b)
        point_mass = gone.total
        new_atoms = []
        for a in atoms:
            loc = a.location
            if isinstance(loc, ComponentPoint) and loc.component == step.component:
                point_mass = mass_add(point_mass, a.mass)
            elif isinstance(loc, EdgePoint) and loc.edge == step.edge_a:
                new_atoms.append(Atom(EdgePoint(step.merged_edge, loc.position), a.mass))
            elif isinstance(loc, EdgePoint) and loc.edge == step.edge_b:
                new_atoms.append(Atom(
                    EdgePoint(step.merged_edge, step.length_a + loc.position), a.mass))
            else:
                new_atoms.append(a)
        atoms = new_atoms
        edges[step.merged_edge] = mass_add(mass_a, mass_b)
        if not mass_is_zero(point_mass):
            atoms.append(Atom(EdgePoint(step.merged_edge, step.length_a), point_mass))
        return CCMeasure(None, measure.kind, comps, edges, tuple(atoms))

    raise TypeError(f"unknown step {step!r}")


def pushforward_measure(measure: CCMeasure, dmap: DominationMap) -> CCMeasure:
    """Push a measure on the source model down to the target model.

    Collapsed components contribute their (finite) total as an atom at the
    collapse location; a zero measure on a collapsed component leaves no
    atom.  Subdivided edges re-merge with summed masses.
    """
    if measure.model != dmap.source:
        raise ValueError("measure does not live on the source model of the map")
    out = measure
    for step in dmap.steps:
        out = _push_step(out, step)
    return CCMeasure(dmap.target, out.kind, out.components, out.edges, out.atoms)


def _lift_step(measure: CCMeasure, step) -> CCMeasure:
    comps = dict(measure.components)
    edges = dict(measure.edges)
    atoms = list(measure.atoms)

    if isinstance(step, SmoothCollapse):
        loc = ComponentPoint(step.host, step.location)
        for a in atoms:
            if a.location == loc and not mass_is_zero(a.mass):
                raise LiftError(
                    f"measure has an atom of mass {a.mass} at the collapse "
                    f"point {step.location} on {step.host}; no lift exists"
                )
        atoms = [a for a in atoms if a.location != loc]
        comps[step.component] = zero_descriptor()
        edges[step.edge] = Fraction(0)
        return CCMeasure(None, measure.kind, comps, edges, tuple(atoms))

    if isinstance(step, NodeCollapse):
        if step.merged_edge not in edges:
            raise LiftError(f"edge {step.merged_edge} missing from measure")
        total_len = step.length_a + step.length_b
        mass = edges.pop(step.merged_edge)
        if isinstance(mass, Fraction):
            edges[step.edge_a] = mass * step.length_a / total_len
            edges[step.edge_b] = mass * step.length_b / total_len
        else:
            raise LiftError("cannot split a non-exact edge mass")
        new_atoms = []
        for a in atoms:
            loc = a.location
            if isinstance(loc, EdgePoint) and loc.edge == step.merged_edge:
                if loc.position == step.length_a and not mass_is_zero(a.mass):
                    raise LiftError(
                        f"atom of mass {a.mass} at the blown-up point of "
                        f"edge {step.merged_edge}; no lift exists"
                    )
                if loc.position < step.length_a:
                    new_atoms.append(Atom(EdgePoint(step.edge_a, loc.position), a.mass))
                else:
                    new_atoms.append(Atom(
                        EdgePoint(step.edge_b, loc.position - step.length_a), a.mass))
            else:
                new_atoms.append(a)
        atoms = new_atoms
        comps[step.component] = zero_descriptor()
        return CCMeasure(None, measure.kind, comps, edges, tuple(atoms))

    raise TypeError(f"unknown step {step!r}")


def lift_measure(measure: CCMeasure, dmap: DominationMap) -> CCMeasure:
    """Lift a measure on the target model up to the source model.

    The lift exists iff the measure has no atoms at collapse locations; it
    is zero on collapsed components and spreads each subdivided edge's mass
    proportionally to the piece lengths.
    """
    if measure.model != dmap.target:
        raise ValueError("measure does not live on the target model of the map")
    out = measure
    for step in reversed(dmap.steps):
        out = _lift_step(out, step)
    return CCMeasure(dmap.source, out.kind, out.components, out.edges, out.atoms)
