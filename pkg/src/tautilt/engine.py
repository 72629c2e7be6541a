"""Support tau-tilting pairs: certification, order, mutation, enumeration.

A pair is stored as sorted tuples of registry ids (basic by construction).
Certification runs two independent checks and insists they agree:

* counting: a tau-rigid module M is support tau-tilting iff the number of
  its summand classes plus the number of projective classes with no homs
  into M equals the number of simples;
* approximation: iff the cokernel of a minimal left add(M)-approximation
  of the (block) regular module lies in add(M).

Enumeration is the downward mutation closure from the top pair; upward
mutation goes through the order-reversing dual-pair construction, making
mutation at a fixed summand an involution.  The Hasse diagram is
cross-checkable against the covering relations recomputed from the order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field

from . import homalg
from .algebra import Block, GroupAlgebra
from .modules import (
    ModuleRegistry,
    RepModule,
    block_regular_module,
    lies_in_block,
    regular_module,
)


class EngineError(RuntimeError):
    pass


class CriteriaDisagree(EngineError):
    """The counting and approximation criteria returned different verdicts;
    this signals an engine bug, never a property of the input."""


class MutationDirectionError(EngineError):
    """The requested mutation direction does not exist at this summand."""


class PosetCapExceeded(EngineError):
    pass


class TiltingContext:
    """A group algebra or one of its blocks, with the caches the engine
    needs (simples, projectives, hom data, certificates)."""

    def __init__(self, algebra: GroupAlgebra, block: Block | None = None):
        self.algebra = algebra
        self.block = block
        self.registry = algebra.registry or ModuleRegistry(algebra)
        self._lambda = None
        self._simple_ids = None
        self._pim_ids = None
        self._tau_ids: dict[int, list[int]] = {}
        self._hom_tau: dict[tuple[int, int], int] = {}
        self._certificates: dict = {}
        self._gen_cache: dict = {}
        self._mutation_cache: dict = {}
        self._delta_indec: dict[int, tuple[str, int]] = {}

    # ---- bookkeeping

    def simple_ids(self) -> list[int]:
        if self._simple_ids is None:
            ids = self.registry.simple_ids()
            if self.block is not None:
                ids = [
                    s
                    for s in ids
                    if lies_in_block(self.registry.module(s), self.block)
                ]
            self._simple_ids = ids
        return self._simple_ids

    def pim_ids(self) -> list[int]:
        if self._pim_ids is None:
            self._pim_ids = [
                self.registry.pim_of_simple(s) for s in self.simple_ids()
            ]
        return self._pim_ids

    @property
    def n_simples(self) -> int:
        return len(self.simple_ids())

    def lambda_module(self) -> RepModule:
        if self._lambda is None:
            if self.block is None:
                self._lambda = regular_module(self.algebra)
            else:
                self._lambda = block_regular_module(self.block)
        return self._lambda

    def tau_ids(self, idx: int) -> list[int]:
        if idx not in self._tau_ids:
            t = homalg.tau_indec_cached(self.registry, idx)
            self._tau_ids[idx] = self.registry.ids_of(t) if t.dim else []
        return self._tau_ids[idx]

    def hom_to_tau_dim(self, a: int, b: int) -> int:
        """dim Hom(M_a, tau M_b)."""
        key = (a, b)
        if key not in self._hom_tau:
            self._hom_tau[key] = sum(
                self.registry.hom_dim_ids(a, t) for t in self.tau_ids(b)
            )
        return self._hom_tau[key]

    def module_of_ids(self, ids) -> RepModule:
        return self.registry.direct_sum_of_ids(list(ids))

    def dims_of(self, ids) -> int:
        return sum(self.registry.module(i).dim for i in ids)

    def describe(self) -> str:
        name = self.algebra.group.name
        if self.block is not None:
            return f"{name}:{self.block.label()}"
        return name


@dataclass(frozen=True)
class STauTiltPair:
    """A support pair: sorted registry ids of the module and projective
    parts.  Built basic (each class once)."""

    ctx: TiltingContext = dc_field(compare=False, repr=False)
    m_ids: tuple[int, ...] = ()
    p_ids: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "m_ids", tuple(sorted(set(self.m_ids))))
        object.__setattr__(self, "p_ids", tuple(sorted(set(self.p_ids))))

    @property
    def key(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return (self.m_ids, self.p_ids)

    def module(self) -> RepModule:
        return self.ctx.module_of_ids(self.m_ids)

    def projective(self) -> RepModule:
        return self.ctx.module_of_ids(self.p_ids)

    def label(self) -> str:
        reg = self.ctx.registry
        if not self.m_ids:
            return "0"
        return " + ".join(sorted(reg.label(i) for i in self.m_ids))

    def support_label(self) -> str:
        reg = self.ctx.registry
        if not self.p_ids:
            return ""
        return " + ".join(sorted(reg.label(i) for i in self.p_ids))

    def __repr__(self):
        sup = self.support_label()
        return f"Pair({self.label()}" + (f" | {sup})" if sup else ")")


def pair_from_modules(ctx: TiltingContext, M: RepModule, P: RepModule | None = None) -> STauTiltPair:
    """Basicify arbitrary module data into a pair."""
    m_ids = tuple(sorted(set(ctx.registry.ids_of(M)))) if M.dim else ()
    p_ids = ()
    if P is not None and P.dim:
        p_ids = tuple(sorted(set(ctx.registry.ids_of(P))))
    return STauTiltPair(ctx, m_ids, p_ids)


@dataclass
class Certificate:
    tau_rigid: bool
    hom_pm_zero: bool
    support_pims: tuple[int, ...]
    counting_ok: bool
    approx_ok: bool
    approx_coker_ids: tuple[int, ...]
    pair_counting_ok: bool
    p_is_full_support: bool
    n_simples: int

    @property
    def valid(self) -> bool:
        return (
            self.tau_rigid
            and self.hom_pm_zero
            and self.counting_ok
            and self.approx_ok
            and self.pair_counting_ok
        )

    def to_json(self) -> dict:
        return {
            "tau_rigid": self.tau_rigid,
            "hom_pm_zero": self.hom_pm_zero,
            "counting_ok": self.counting_ok,
            "approx_ok": self.approx_ok,
            "pair_counting_ok": self.pair_counting_ok,
            "p_is_full_support": self.p_is_full_support,
            "n_simples": self.n_simples,
            "valid": self.valid,
        }


def is_tau_rigid(ctx: TiltingContext, M: RepModule) -> bool:
    if M.dim == 0:
        return True
    ids = ctx.registry.ids_of(M)
    return _ids_tau_rigid(ctx, ids)


def _ids_tau_rigid(ctx: TiltingContext, ids) -> bool:
    for a in ids:
        for b in ids:
            if ctx.hom_to_tau_dim(a, b):
                return False
    return True


def _support_pims(ctx: TiltingContext, m_ids) -> tuple[int, ...]:
    out = []
    for q in ctx.pim_ids():
        if all(ctx.registry.hom_dim_ids(q, m) == 0 for m in m_ids):
            out.append(q)
    return tuple(out)


def certify_support_tau_tilting(pair: STauTiltPair) -> Certificate:
    ctx = pair.ctx
    cached = ctx._certificates.get(pair.key)
    if cached is not None:
        return cached
    reg = ctx.registry
    m_ids = list(pair.m_ids)
    tau_rigid = _ids_tau_rigid(ctx, m_ids)
    hom_pm_zero = all(
        reg.hom_dim_ids(q, m) == 0 for q in pair.p_ids for m in m_ids
    )
    support = _support_pims(ctx, m_ids)
    n = ctx.n_simples
    counting_ok = tau_rigid and (len(m_ids) + len(support) == n)
    # approximation criterion (independent of the counting data)
    approx_ok = False
    coker_ids: tuple[int, ...] = ()
    if tau_rigid:
        lam = ctx.lambda_module()
        f, target, _ = homalg.minimal_left_approximation(lam, m_ids, reg)
        coker, _ = homalg.cokernel(f, target)
        coker_ids = tuple(sorted(reg.ids_of(coker))) if coker.dim else ()
        approx_ok = set(coker_ids) <= set(m_ids)
        if approx_ok != counting_ok:
            raise CriteriaDisagree(
                f"counting={counting_ok} vs approximation={approx_ok} "
                f"for {pair!r} (coker classes {coker_ids}, support {support})"
            )
    cert = Certificate(
        tau_rigid=tau_rigid,
        hom_pm_zero=hom_pm_zero,
        support_pims=support,
        counting_ok=counting_ok,
        approx_ok=approx_ok,
        approx_coker_ids=coker_ids,
        pair_counting_ok=len(m_ids) + len(pair.p_ids) == n,
        p_is_full_support=set(pair.p_ids) == set(support),
        n_simples=n,
    )
    ctx._certificates[pair.key] = cert
    return cert


# -- the order ---------------------------------------------------------------


def _generates(ctx: TiltingContext, source_ids: tuple[int, ...], target_id: int) -> bool:
    """Whether the target class lies in Gen(sum of source classes): the
    trace of the sources fills the target."""
    key = (source_ids, target_id)
    cached = ctx._gen_cache.get(key)
    if cached is not None:
        return cached
    reg = ctx.registry
    target = reg.module(target_id)
    images = []
    for s in source_ids:
        images.extend(reg.hom_basis_ids(s, target_id))
    if images:
        stacked = images[0]
        for h in images[1:]:
            stacked = stacked.hstack(h)
        ok = stacked.rank() == target.dim
    else:
        ok = target.dim == 0
    ctx._gen_cache[key] = ok
    return ok


def geq(x: STauTiltPair, y: STauTiltPair) -> bool:
    """x >= y in the support tau-tilting order: every summand of y.M is a
    quotient of a finite direct sum of copies of x.M."""
    if x.ctx is not y.ctx:
        raise EngineError("pairs live over different contexts")
    return all(_generates(x.ctx, x.m_ids, t) for t in y.m_ids)


# -- mutation ------------------------------------------------------------------


@dataclass
class MutationResult:
    pair: STauTiltPair
    direction: str  # "down" or "up"
    exchanged_out: tuple[str, int]
    exchanged_in: tuple[str, int]


def _down_mutation(pair: STauTiltPair, removed: int) -> STauTiltPair | None:
    """The lower completion after removing a module summand, or None when
    the exchange at this summand goes upward."""
    ctx = pair.ctx
    reg = ctx.registry
    u_ids = tuple(sorted(set(pair.m_ids) - {removed}))
    candidates: list[STauTiltPair] = []
    z_mod = reg.module(removed)
    f, target, _ = homalg.minimal_left_approximation(z_mod, list(u_ids), reg)
    coker, _ = homalg.cokernel(f, target)
    if coker.dim:
        for y in sorted(set(reg.ids_of(coker)) - set(u_ids)):
            candidates.append(
                STauTiltPair(ctx, tuple(sorted(u_ids + (y,))), pair.p_ids)
            )
    for q in ctx.pim_ids():
        if q in pair.p_ids:
            continue
        if all(reg.hom_dim_ids(q, u) == 0 for u in u_ids):
            candidates.append(
                STauTiltPair(ctx, u_ids, tuple(sorted(pair.p_ids + (q,))))
            )
    winners = []
    for cand in candidates:
        if cand.key == pair.key:
            continue
        if certify_support_tau_tilting(cand).valid:
            winners.append(cand)
    keys = sorted({w.key for w in winners})
    if not keys:
        return None
    if len(keys) > 1:
        raise EngineError(
            f"multiple certified completions after removing {removed}: {keys}"
        )
    out = next(w for w in winners if w.key == keys[0])
    return out


def _delta_indec(ctx: TiltingContext, idx: int, part: str) -> tuple[str, int]:
    """Image of one summand class under the dual-pair construction.

    part is 'm' or 'p'; returns (new part, new id).  Non-projective module
    summands go to their transpose-dual; projective module summands move to
    the support side as duals; support summands come back as dual
    projectives."""
    key = (idx, part)
    cached = ctx._delta_indec.get(key)
    if cached is not None:
        return cached
    reg = ctx.registry
    if part == "m" and not reg.is_projective_id(idx):
        td = homalg.transpose_dual_indec(reg, idx)
        out = ("m", reg.find_or_register(td))
    else:
        dual = homalg.dual_module(reg.module(idx))
        did = reg.find_or_register(dual)
        if not reg.is_projective_id(did):
            raise EngineError("dual of a projective failed to be projective")
        out = (("p", did) if part == "m" else ("m", did))
    ctx._delta_indec[key] = out
    return out


def delta_pair(pair: STauTiltPair) -> STauTiltPair:
    """The order-reversing involution on pairs (dual of a minimal
    presentation, support and projective module parts swapping roles)."""
    ctx = pair.ctx
    new_m, new_p = [], []
    for i in pair.m_ids:
        part, j = _delta_indec(ctx, i, "m")
        (new_m if part == "m" else new_p).append(j)
    for q in pair.p_ids:
        part, j = _delta_indec(ctx, q, "p")
        (new_m if part == "m" else new_p).append(j)
    return STauTiltPair(ctx, tuple(sorted(new_m)), tuple(sorted(new_p)))


def _down_mutation_cached(pair: STauTiltPair, removed: int) -> STauTiltPair | None:
    key = (pair.key, removed)
    ctx = pair.ctx
    if key not in ctx._mutation_cache:
        ctx._mutation_cache[key] = _down_mutation(pair, removed)
    return ctx._mutation_cache[key]


def mutate(pair: STauTiltPair, summand_index: int, direction: str = "auto") -> MutationResult:
    """Exchange the chosen indecomposable summand for the unique other
    completion of the remaining almost-complete pair.

    summand_index indexes the concatenation m_ids + p_ids.  direction
    'down'/'up' demands that direction and raises MutationDirectionError if
    the exchange goes the other way; 'auto' follows the exchange."""
    all_ids = list(pair.m_ids) + list(pair.p_ids)
    if not 0 <= summand_index < len(all_ids):
        raise EngineError(f"summand index {summand_index} out of range")
    in_m = summand_index < len(pair.m_ids)
    removed = all_ids[summand_index]
    ctx = pair.ctx
    if in_m:
        down = _down_mutation_cached(pair, removed)
        if down is not None:
            if direction == "up":
                raise MutationDirectionError(
                    f"exchange at summand {removed} goes down, not up"
                )
            return MutationResult(
                down, "down", ("m", removed), _exchanged_summand(pair, down)
            )
    if direction == "down":
        raise MutationDirectionError(
            f"exchange at summand {removed} goes up, not down"
        )
    # upward: run the downward exchange in the dual poset
    dpair = delta_pair(pair)
    dpart, dremoved = _delta_indec(ctx, removed, "m" if in_m else "p")
    if dpart != "m":
        raise EngineError("dual image of the removed summand left the module part")
    ddown = _down_mutation_cached(dpair, dremoved)
    if ddown is None:
        raise EngineError(
            f"no exchange found at summand {removed} in either direction"
        )
    up = delta_pair(ddown)
    if not certify_support_tau_tilting(up).valid:
        raise EngineError("dual route produced an uncertified pair")
    if up.key == pair.key:
        raise EngineError("dual route returned the original pair")
    return MutationResult(
        up, "up", ("m" if in_m else "p", removed), _exchanged_summand(pair, up)
    )


def _exchanged_summand(old: STauTiltPair, new: STauTiltPair) -> tuple[str, int]:
    dm = set(new.m_ids) - set(old.m_ids)
    if dm:
        return ("m", sorted(dm)[0])
    dp = set(new.p_ids) - set(old.p_ids)
    if dp:
        return ("p", sorted(dp)[0])
    return ("none", -1)


# -- enumeration -----------------------------------------------------------------


class HassePoset:
    """Enumerated poset with mutation edges, top-first node order."""

    def __init__(self, ctx: TiltingContext, pairs: list[STauTiltPair], edges: set):
        def sort_key(p: STauTiltPair):
            return (-len(p.m_ids), -ctx.dims_of(p.m_ids), p.m_ids, p.p_ids)

        self.ctx = ctx
        self.nodes = sorted(pairs, key=sort_key)
        index = {p.key: i for i, p in enumerate(self.nodes)}
        self.edges = sorted((index[a], index[b]) for a, b in edges)
        self._index = index
        self.top_index = index[
            (tuple(sorted(ctx.pim_ids())), ())
        ]
        self.bottom_index = index[((), tuple(sorted(ctx.pim_ids())))]

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def node_index(self, pair: STauTiltPair) -> int:
        return self._index[pair.key]

    def successors(self, i: int) -> list[int]:
        return [b for a, b in self.edges if a == i]

    def order_matrix(self) -> list[list[bool]]:
        n = len(self.nodes)
        return [
            [geq(self.nodes[i], self.nodes[j]) for j in range(n)] for i in range(n)
        ]

    def covering_edges_from_order(self) -> list[tuple[int, int]]:
        """Hasse arrows recomputed independently from the order relation by
        transitive reduction."""
        ge = self.order_matrix()
        n = len(self.nodes)
        strict = [[ge[i][j] and i != j and not ge[j][i] for j in range(n)] for i in range(n)]
        out = []
        for i in range(n):
            for j in range(n):
                if not strict[i][j]:
                    continue
                if any(strict[i][k] and strict[k][j] for k in range(n)):
                    continue
                out.append((i, j))
        return sorted(out)

    def is_connected_from_top(self) -> bool:
        seen = {self.top_index}
        frontier = [self.top_index]
        while frontier:
            nxt = []
            for a, b in self.edges:
                if a in seen and b not in seen:
                    seen.add(b)
                    nxt.append(b)
            if not nxt:
                break
            frontier = nxt
        return len(seen) == len(self.nodes)

    def maxima(self) -> list[int]:
        ge = self.order_matrix()
        n = len(self.nodes)
        return [
            i
            for i in range(n)
            if all(not (ge[j][i] and not ge[i][j]) for j in range(n))
        ]

    def minima(self) -> list[int]:
        ge = self.order_matrix()
        n = len(self.nodes)
        return [
            i
            for i in range(n)
            if all(not (ge[i][j] and not ge[j][i]) for j in range(n))
        ]

    # ---- export

    def to_json(self) -> dict:
        ctx = self.ctx
        field = ctx.algebra.field
        nodes = []
        for p in self.nodes:
            cert = certify_support_tau_tilting(p)
            nodes.append(
                {
                    "m_classes": sorted(ctx.registry.label(i) for i in p.m_ids),
                    "p_classes": sorted(ctx.registry.label(i) for i in p.p_ids),
                    "m_ids": list(p.m_ids),
                    "p_ids": list(p.p_ids),
                    "dim": ctx.dims_of(p.m_ids),
                    "certificate": cert.to_json(),
                }
            )
        return {
            "context": ctx.describe(),
            "field": {"p": field.p, "m": field.m, "modulus": list(field.modulus)},
            "n_nodes": self.n_nodes,
            "n_edges": self.n_edges,
            "top": self.top_index,
            "bottom": self.bottom_index,
            "nodes": nodes,
            "edges": [list(e) for e in self.edges],
        }

    def to_dot(self) -> str:
        lines = ["digraph stt {", '  rankdir="TB";']
        for i, p in enumerate(self.nodes):
            label = p.label()
            sup = p.support_label()
            if sup:
                label += f" | {sup}"
            lines.append(f'  n{i} [label="{label}"];')
        for a, b in self.edges:
            lines.append(f"  n{a} -> n{b};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def enumerate_poset(
    ctx: TiltingContext, node_cap: int = 512, require_agreement: bool = True
) -> HassePoset:
    """Breadth-first downward mutation closure from the top pair."""
    top = STauTiltPair(ctx, tuple(sorted(ctx.pim_ids())), ())
    if not certify_support_tau_tilting(top).valid:
        raise EngineError("the regular pair failed certification")
    seen: dict = {top.key: top}
    edges = set()
    frontier = [top]
    while frontier:
        frontier.sort(key=lambda p: (p.m_ids, p.p_ids))
        nxt = []
        for node in frontier:
            for removed in node.m_ids:
                down = _down_mutation_cached(node, removed)
                if down is None:
                    continue
                edges.add((node.key, down.key))
                if down.key not in seen:
                    if len(seen) >= node_cap:
                        raise PosetCapExceeded(
                            f"poset exceeds the configured cap of {node_cap} nodes"
                        )
                    seen[down.key] = down
                    nxt.append(down)
        frontier = nxt
    pairs = list(seen.values())
    if require_agreement:
        for p in pairs:
            cert = certify_support_tau_tilting(p)
            if not cert.valid:
                raise EngineError(f"enumerated node fails certification: {p!r}")
    return HassePoset(ctx, pairs, edges)


def poset_json_bytes(poset: HassePoset) -> bytes:
    return (json.dumps(poset.to_json(), sort_keys=True, separators=(",", ":")) + "\n").encode()
