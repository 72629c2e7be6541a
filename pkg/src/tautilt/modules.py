"""Modules over group algebras as matrix representations.

A RepModule stores one action matrix per group generator; matrices for the
remaining elements are derived through cached generator words.  Submodules,
quotients, direct sums, hom spaces, isomorphism testing and the splitting
into indecomposable summands all live here, together with the per-algebra
registry of isomorphism classes that the tilting engine keys everything on.
"""

from __future__ import annotations

import json

import numpy as np

from . import rings
from .algebra import Block, GroupAlgebra
from .ff import FFMatrix, FieldSpec, block_diag, solve_intertwiner_system
from .groups import group_from_json, group_to_json

_CODE_DTYPE = np.int16


class ModuleError(ValueError):
    pass


class RepModule:
    """A finitely generated left module given by generator action matrices."""

    def __init__(self, algebra: GroupAlgebra, gen_mats, label: str = "", verify: bool = False):
        self.algebra = algebra
        self.gen_mats = tuple(gen_mats)
        if len(self.gen_mats) != len(algebra.group.generators):
            raise ModuleError("one action matrix per group generator is required")
        dims = {m.rows for m in self.gen_mats} | {m.cols for m in self.gen_mats}
        if len(dims) > 1:
            raise ModuleError("action matrices must be square of equal size")
        self.dim = dims.pop() if dims else 0
        for m in self.gen_mats:
            if m.field is not algebra.field:
                raise ModuleError("action matrices live over the wrong field")
        self.label = label
        self.lambda_inclusion = None  # set for direct summands of the regular module
        self.sum_parts = None  # set by direct_sum: list of (part, offset)
        self._elt_mats: dict[int, FFMatrix] = {}
        self._registry_id = None
        if verify:
            self.verify_action()

    @property
    def field(self) -> FieldSpec:
        return self.algebra.field

    def is_zero(self) -> bool:
        return self.dim == 0

    def action_of(self, elt_idx: int) -> FFMatrix:
        cached = self._elt_mats.get(elt_idx)
        if cached is not None:
            return cached
        word = self.algebra.group.generator_words()[elt_idx]
        acc = FFMatrix.identity(self.field, self.dim)
        for pos in word:
            acc = acc @ self.gen_mats[pos]
        self._elt_mats[elt_idx] = acc
        return acc

    def apply_algebra_vector(self, vec) -> FFMatrix:
        """Action matrix of an algebra element (coefficient vector)."""
        out = FFMatrix.zeros(self.field, self.dim, self.dim)
        for i, c in enumerate(vec):
            if c:
                out = out + self.action_of(i).scale(c)
        return out

    def verify_action(self):
        """Check the matrices define a representation: compatible with every
        product (element, generator), which propagates to all products."""
        g = self.algebra.group
        for i in range(g.order):
            mi = self.action_of(i)
            for pos, s in enumerate(g.gen_indices):
                left = self.gen_mats[pos] @ mi
                if left != self.action_of(g.mul(s, i)):
                    raise ModuleError(
                        f"action matrices violate the relation gen*{i} in {g.name}"
                    )

    def relabel(self, label: str) -> "RepModule":
        self.label = label
        return self

    def __repr__(self):
        tag = self.label or f"dim {self.dim}"
        return f"RepModule({self.algebra.group.name}, {tag})"


def zero_module(algebra: GroupAlgebra) -> RepModule:
    mats = [FFMatrix.zeros(algebra.field, 0, 0) for _ in algebra.group.generators]
    return RepModule(algebra, mats, label="0")


def trivial_module(algebra: GroupAlgebra) -> RepModule:
    mats = [FFMatrix.identity(algebra.field, 1) for _ in algebra.group.generators]
    return RepModule(algebra, mats, label="k")


def regular_module(algebra: GroupAlgebra) -> RepModule:
    mats = [algebra.left_mult_matrix(i) for i in algebra.group.gen_indices]
    mod = RepModule(algebra, mats, label="regular")
    mod.lambda_inclusion = FFMatrix.identity(algebra.field, algebra.dim)
    return mod


def direct_sum(*mods: RepModule) -> RepModule:
    if not mods:
        raise ModuleError("direct sum of nothing (pass the algebra's zero module)")
    algebra = mods[0].algebra
    for m in mods:
        if m.algebra is not algebra:
            raise ModuleError("direct sum across different algebras")
    mats = []
    for pos in range(len(algebra.group.generators)):
        mats.append(block_diag(algebra.field, [m.gen_mats[pos] for m in mods]))
    label = " + ".join(m.label for m in mods if m.label)
    out = RepModule(algebra, mats, label=label)
    parts = []
    offset = 0
    for m in mods:
        parts.append((m, offset))
        offset += m.dim
    out.sum_parts = parts
    return out


def submodule(M: RepModule, basis: FFMatrix) -> tuple[RepModule, FFMatrix]:
    """The submodule spanned by the (independent, invariant) columns of
    ``basis``; returns (module, inclusion matrix)."""
    d = basis.cols
    if d == 0:
        return zero_module(M.algebra), FFMatrix.zeros(M.field, M.dim, 0)
    mats = []
    for g in M.gen_mats:
        sol = basis.solve(g @ basis)
        if sol is None:
            raise ModuleError("spanning columns are not invariant under the action")
        mats.append(sol)
    sub = RepModule(M.algebra, mats)
    return sub, basis


def spanned_submodule(M: RepModule, vectors: FFMatrix) -> tuple[RepModule, FFMatrix]:
    """Submodule generated by arbitrary column vectors: close under the
    generator actions, then reduce to a basis."""
    span = vectors
    while True:
        new_cols = [span]
        for g in M.gen_mats:
            new_cols.append(g @ span)
        stacked = new_cols[0]
        for c in new_cols[1:]:
            stacked = stacked.hstack(c)
        reduced = stacked.column_space_basis()
        if reduced.cols == span.cols:
            return submodule(M, reduced)
        span = reduced


def quotient_module(M: RepModule, sub_basis: FFMatrix) -> tuple[RepModule, FFMatrix]:
    """The quotient by the invariant subspace spanned by ``sub_basis``;
    returns (module, projection matrix)."""
    d = sub_basis.cols
    q_dim = M.dim - d
    if q_dim == 0:
        return zero_module(M.algebra), FFMatrix.zeros(M.field, 0, M.dim)
    # extend to a full basis with standard vectors, deterministically
    cols = sub_basis
    complement = []
    for k in range(M.dim):
        if cols.cols == M.dim:
            break
        e = FFMatrix.zeros(M.field, M.dim, 1).data.copy()
        e[k, 0] = 1
        cand = cols.hstack(FFMatrix(M.field, e))
        if cand.rank() == cols.cols + 1:
            cols = cand
            complement.append(k)
    T = cols
    T_inv = T.inverse()
    proj = T_inv.take_rows(range(d, M.dim))
    lift = T.take_columns(range(d, M.dim))
    mats = [proj @ g @ lift for g in M.gen_mats]
    quot = RepModule(M.algebra, mats)
    return quot, proj


def block_component(M: RepModule, block: Block) -> tuple[RepModule, FFMatrix]:
    """The direct summand e_B * M with its inclusion."""
    e = M.apply_algebra_vector(block.idempotent)
    return submodule(M, e.column_space_basis())


def block_regular_module(block: Block) -> RepModule:
    """The block B as a left module over kG (a summand of the regular
    module, so the fast hom path applies)."""
    reg = regular_module(block.parent)
    mod, inc = block_component(reg, block)
    mod.lambda_inclusion = inc
    return mod.relabel(f"B{block.index}")


def lies_in_block(M: RepModule, block: Block) -> bool:
    if M.is_zero():
        return True
    e = M.apply_algebra_vector(block.idempotent)
    return e == FFMatrix.identity(M.field, M.dim)


# -- hom spaces ---------------------------------------------------------------


def hom_basis(M: RepModule, N: RepModule) -> list[FFMatrix]:
    """Basis of Hom(M, N) as matrices of shape (N.dim, M.dim).

    Uses the free-module shortcut (columns are orbit images) when M carries
    an inclusion into the regular module, otherwise the intertwiner solver."""
    if M.algebra is not N.algebra:
        raise ModuleError("hom space across different algebras")
    if M.dim == 0 or N.dim == 0:
        return []
    if M.sum_parts is not None:
        out = []
        for part, offset in M.sum_parts:
            for h in hom_basis(part, N):
                lifted = np.zeros((N.dim, M.dim), dtype=_CODE_DTYPE)
                lifted[:, offset : offset + part.dim] = h.data
                out.append(FFMatrix(M.field, lifted))
        return out
    if M.lambda_inclusion is not None:
        return rings.reduce_span(M.field, _hom_from_regular_summand(M, N))
    constraints = list(zip(M.gen_mats, N.gen_mats))
    return solve_intertwiner_system(M.field, constraints, (N.dim, M.dim))


def _hom_from_regular_summand(M: RepModule, N: RepModule) -> list[FFMatrix]:
    """Spanning set of Hom(M, N) for M a summand of the regular module with
    inclusion iota: the maps (a |-> a . v) restricted along iota."""
    algebra = M.algebra
    out = []
    iota = M.lambda_inclusion
    order = algebra.group.order
    for j in range(N.dim):
        cols = np.zeros((N.dim, order), dtype=_CODE_DTYPE)
        for g in range(order):
            cols[:, g] = N.action_of(g).data[:, j]
        out.append(FFMatrix(N.field, cols) @ iota)
    return out


def hom_dim(M: RepModule, N: RepModule) -> int:
    return len(hom_basis(M, N))


class HomSpace:
    """Hom(source, target) with a cached basis of intertwiner matrices."""

    def __init__(self, source: RepModule, target: RepModule):
        self.source = source
        self.target = target
        self.basis = hom_basis(source, target)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __repr__(self):
        return f"HomSpace(dim={self.dim})"


def hom_space(M: RepModule, N: RepModule) -> HomSpace:
    return HomSpace(M, N)


def end_basis(M: RepModule) -> list[FFMatrix]:
    if M.dim == 0:
        return []
    constraints = list(zip(M.gen_mats, M.gen_mats))
    return solve_intertwiner_system(M.field, constraints, (M.dim, M.dim))


# -- isomorphism --------------------------------------------------------------


def _indec_iso_witness(M: RepModule, N: RepModule):
    """Witness isomorphism between two indecomposables, or None.  Complete
    because End of an indecomposable is local: if all pairwise composites of
    hom bases are non-invertible they span the radical, so no iso exists."""
    if M.dim != N.dim:
        return None
    if M.dim == 0:
        return FFMatrix.zeros(M.field, 0, 0)
    fwd = hom_basis(M, N)
    bwd = hom_basis(N, M)
    for f in fwd:
        for g in bwd:
            if (g @ f).is_invertible():
                return f
    return None


def is_isomorphic(M: RepModule, N: RepModule, registry: "ModuleRegistry | None" = None):
    """(bool, witness matrix or None).  For general modules the witness is
    assembled from matched indecomposable summands."""
    if M.algebra is not N.algebra:
        return False, None
    if M.dim != N.dim:
        return False, None
    if M.dim == 0:
        return True, FFMatrix.zeros(M.field, 0, 0)
    reg = registry or M.algebra.registry
    if reg is None:
        reg = ModuleRegistry(M.algebra)
    dm = reg.decompose(M)
    dn = reg.decompose(N)
    if sorted(dm.part_ids) != sorted(dn.part_ids):
        return False, None
    # match parts id by id and build a block witness
    remaining = list(range(len(dn.part_ids)))
    order = []
    for i, pid in enumerate(dm.part_ids):
        for pos in remaining:
            if dn.part_ids[pos] == pid:
                order.append(pos)
                remaining.remove(pos)
                break
    blocks = []
    for i, pos in enumerate(order):
        w = _indec_iso_witness(dm.parts[i][0], dn.parts[pos][0])
        if w is None:
            raise AssertionError("registry matched parts that fail to be isomorphic")
        blocks.append(w)
    W = block_diag(M.field, blocks)
    T_m = dm.change_of_basis()
    # target change of basis, with columns permuted into the matching order
    cols = []
    for pos in order:
        cols.append(dn.parts[pos][1])
    T_n = cols[0]
    for c in cols[1:]:
        T_n = T_n.hstack(c)
    witness = T_n @ W @ T_m.inverse()
    for gm, gn in zip(M.gen_mats, N.gen_mats):
        if (witness @ gm) != (gn @ witness):
            raise AssertionError("assembled isomorphism witness fails to intertwine")
    return True, witness


# -- decomposition and registry ----------------------------------------------


class Decomposition:
    """Indecomposable summands with inclusions and registry identities."""

    def __init__(self, module: RepModule, parts, part_ids):
        self.module = module
        self.parts = parts  # list of (RepModule, inclusion FFMatrix)
        self.part_ids = list(part_ids)

    def multiplicities(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for pid in self.part_ids:
            out[pid] = out.get(pid, 0) + 1
        return out

    @property
    def n_iso_classes(self) -> int:
        return len(set(self.part_ids))

    def change_of_basis(self) -> FFMatrix:
        if not self.parts:
            return FFMatrix.zeros(self.module.field, 0, 0)
        T = self.parts[0][1]
        for _, inc in self.parts[1:]:
            T = T.hstack(inc)
        return T

    def __repr__(self):
        return f"Decomposition({self.multiplicities()})"


class ModuleRegistry:
    """Per-algebra registry of indecomposable isomorphism classes.

    Fingerprints prune candidate classes; a hom-witness search decides.
    The registry also memoizes hom dimensions, hom bases, endomorphism
    radicals and semisimple bookkeeping (simples, projectives)."""

    def __init__(self, algebra: GroupAlgebra, seed: int = 20240801):
        self.algebra = algebra
        self.seed = seed
        self.entries: list[RepModule] = []
        self._fingerprints: list[tuple] = []
        self._by_fingerprint: dict[tuple, list[int]] = {}
        self._hom_dims: dict[tuple[int, int], int] = {}
        self._hom_bases: dict[tuple[int, int], list[FFMatrix]] = {}
        self._rad_end: dict[int, list[FFMatrix]] = {}
        self._decompose_cache: dict[int, Decomposition] = {}
        self._simple_ids = None
        self._pim_ids = None
        self._pim_of_simple = {}
        self._labels: dict[int, str] = {}
        algebra.registry = self

    # ---- identification

    def fingerprint(self, M: RepModule) -> tuple:
        cps = tuple(sorted(g.charpoly() for g in M.gen_mats))
        word = None
        if M.gen_mats:
            prod = M.gen_mats[0]
            for g in M.gen_mats[1:]:
                prod = prod @ g
            word = prod.charpoly()
        return (M.dim, cps, word)

    def find_or_register(self, M: RepModule) -> int:
        """Registry id of the indecomposable M (inserting if new)."""
        if M._registry_id is not None:
            return M._registry_id
        fp = self.fingerprint(M)
        for idx in self._by_fingerprint.get(fp, []):
            if _indec_iso_witness(self.entries[idx], M) is not None:
                M._registry_id = idx
                return idx
        idx = len(self.entries)
        self.entries.append(M)
        self._fingerprints.append(fp)
        self._by_fingerprint.setdefault(fp, []).append(idx)
        M._registry_id = idx
        return idx

    def module(self, idx: int) -> RepModule:
        return self.entries[idx]

    # ---- decomposition

    def decompose(self, M: RepModule) -> Decomposition:
        cached = self._decompose_cache.get(id(M))
        if cached is not None and cached.module is M:
            return cached
        if M._registry_id is not None:
            dec = Decomposition(
                M, [(M, FFMatrix.identity(M.field, M.dim))], [M._registry_id]
            )
            self._decompose_cache[id(M)] = dec
            return dec
        if M.sum_parts is not None and all(
            p._registry_id is not None for p, _ in M.sum_parts
        ):
            # direct sums assembled from registered indecomposables split
            # along their construction
            parts = []
            ids = []
            for p, offset in M.sum_parts:
                inc = np.zeros((M.dim, p.dim), dtype=_CODE_DTYPE)
                inc[offset : offset + p.dim, :] = np.eye(p.dim, dtype=_CODE_DTYPE)
                parts.append((p, FFMatrix(M.field, inc)))
                ids.append(p._registry_id)
            order = sorted(
                range(len(parts)), key=lambda i: (parts[i][0].dim, ids[i])
            )
            dec = Decomposition(
                M, [parts[i] for i in order], [ids[i] for i in order]
            )
            self._decompose_cache[id(M)] = dec
            return dec
        parts = []
        stack = [(M, FFMatrix.identity(M.field, M.dim))]
        while stack:
            X, inc = stack.pop()
            if X.dim == 0:
                continue
            E = end_basis(X)
            e = rings.find_splitting_idempotent(X.field, E, seed=self.seed)
            if e is None:
                parts.append((X, inc))
                continue
            img = e.column_space_basis()
            ker = e.nullspace()
            sub1, inc1 = submodule(X, img)
            sub2, inc2 = submodule(X, ker)
            if sub1.dim == 0 or sub2.dim == 0:
                raise AssertionError("idempotent splitting produced a trivial piece")
            stack.append((sub1, inc @ inc1))
            stack.append((sub2, inc @ inc2))
        keyed = []
        for part, inc in parts:
            pid = self.find_or_register(part)
            keyed.append((pid, part, inc))
        keyed.sort(key=lambda t: (self.entries[t[0]].dim, t[0]))
        dec = Decomposition(
            M, [(p, i) for _, p, i in keyed], [pid for pid, _, _ in keyed]
        )
        self._decompose_cache[id(M)] = dec
        return dec

    def ids_of(self, M: RepModule) -> list[int]:
        return self.decompose(M).part_ids

    # ---- cached hom data

    def hom_dim_ids(self, a: int, b: int) -> int:
        key = (a, b)
        if key not in self._hom_dims:
            self._hom_dims[key] = len(self.hom_basis_ids(a, b))
        return self._hom_dims[key]

    def hom_basis_ids(self, a: int, b: int) -> list[FFMatrix]:
        key = (a, b)
        if key not in self._hom_bases:
            self._hom_bases[key] = hom_basis(self.entries[a], self.entries[b])
            self._hom_dims[key] = len(self._hom_bases[key])
        return self._hom_bases[key]

    def rad_end_basis(self, idx: int) -> list[FFMatrix]:
        if idx not in self._rad_end:
            E = end_basis(self.entries[idx])
            self._rad_end[idx] = rings.algebra_radical(self.algebra.field, E)
        return self._rad_end[idx]

    # ---- semisimple bookkeeping

    def _bootstrap(self):
        if self._simple_ids is not None:
            return
        from . import homalg  # cycle: top() needs the algebra radical helpers

        reg_mod = regular_module(self.algebra)
        pim_dec = self.decompose(reg_mod)
        # summands of the regular module keep their inclusion: the free-hom
        # shortcut applies to them
        for part, inc in pim_dec.parts:
            if part.lambda_inclusion is None:
                part.lambda_inclusion = inc
        top_mod, _ = homalg.top(reg_mod)
        simple_dec = self.decompose(top_mod)
        simple_ids = sorted(set(simple_dec.part_ids), key=self._simple_sort_key)
        self._simple_ids = simple_ids
        pim_ids = []
        for pid in set(pim_dec.part_ids):
            pim_ids.append(pid)
        # match each PIM to its simple top
        for pid in pim_ids:
            t, _ = homalg.top(self.entries[pid])
            tid = self.decompose(t).part_ids
            if len(tid) != 1:
                raise AssertionError("projective indecomposable with decomposable top")
            self._pim_of_simple[tid[0]] = pid
        self._pim_ids = [self._pim_of_simple[s] for s in simple_ids]
        for pos, sid in enumerate(simple_ids):
            self._labels[sid] = str(pos + 1)
            self._labels[self._pim_of_simple[sid]] = f"P{pos + 1}"

    def _simple_sort_key(self, sid: int):
        mod = self.entries[sid]
        is_trivial = mod.dim == 1 and all(
            g == FFMatrix.identity(mod.field, 1) for g in mod.gen_mats
        )
        return (not is_trivial, mod.dim, self._fingerprints[sid])

    def simple_ids(self) -> list[int]:
        self._bootstrap()
        return list(self._simple_ids)

    def pim_ids(self) -> list[int]:
        self._bootstrap()
        return list(self._pim_ids)

    def pim_of_simple(self, sid: int) -> int:
        self._bootstrap()
        return self._pim_of_simple[sid]

    def is_projective_id(self, idx: int) -> bool:
        return idx in set(self.pim_ids())

    def n_simples(self) -> int:
        return len(self.simple_ids())

    def composition_vector(self, M: RepModule) -> list[int]:
        """Composition multiplicities [M : S] = dim Hom(P(S), M), ordered
        like simple_ids()."""
        self._bootstrap()
        out = []
        for sid in self._simple_ids:
            pim = self.entries[self._pim_of_simple[sid]]
            out.append(len(hom_basis(pim, M)))
        return out

    def label(self, idx: int) -> str:
        self._bootstrap()
        if idx not in self._labels:
            from . import homalg

            self._labels[idx] = homalg.loewy_label(self, self.entries[idx])
        return self._labels[idx]

    def direct_sum_of_ids(self, ids) -> RepModule:
        if not ids:
            return zero_module(self.algebra)
        return direct_sum(*[self.entries[i] for i in ids])


# -- serialization -------------------------------------------------------------


def module_to_json(M: RepModule) -> dict:
    return {
        "field": {"p": M.field.p, "m": M.field.m, "modulus": list(M.field.modulus)},
        "group": group_to_json(M.algebra.group),
        "dim": M.dim,
        "generator_matrices": [g.entries() for g in M.gen_mats],
        "label": M.label,
    }


def module_from_json(data, algebra: GroupAlgebra | None = None) -> RepModule:
    if isinstance(data, str):
        data = json.loads(data)
    fld = data["field"]
    field = FieldSpec(fld["p"], fld["m"], tuple(fld["modulus"]))
    if algebra is None:
        group = group_from_json(data["group"])
        algebra = GroupAlgebra(group, field)
    else:
        if algebra.field is not field:
            raise ModuleError("module JSON field differs from the session field")
    dim = data["dim"]
    mats = []
    for entries in data["generator_matrices"]:
        arr = np.array(entries, dtype=_CODE_DTYPE).reshape(dim, dim)
        mats.append(FFMatrix(field, arr))
    return RepModule(algebra, mats, label=data.get("label", ""), verify=True)
