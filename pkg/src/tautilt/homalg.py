"""Homological operations: radicals, projective covers, syzygies, the AR
translate (two independent pipelines), duals and minimal approximations.

Group algebras are symmetric, so the translate is the double syzygy on
projective-free parts; the independent cross-check runs the Nakayama
construction (dual of the hom-into-the-algebra functor) on a minimal
presentation and compares kernels up to isomorphism.
"""

from __future__ import annotations

import numpy as np

from . import rings
from .ff import FFMatrix
from .modules import (
    ModuleRegistry,
    RepModule,
    direct_sum,
    hom_basis,
    quotient_module,
    regular_module,
    submodule,
    zero_module,
)

_CODE_DTYPE = np.int16


# -- radical series ------------------------------------------------------------


def radical_submodule_basis(M: RepModule) -> FFMatrix:
    """Basis of rad(Lambda) * M as columns."""
    if M.dim == 0:
        return FFMatrix.zeros(M.field, 0, 0)
    rad_vecs = M.algebra.radical_vectors()
    if not rad_vecs:
        return FFMatrix.zeros(M.field, M.dim, 0)
    stacked = None
    for v in rad_vecs:
        mat = M.apply_algebra_vector(v)
        stacked = mat if stacked is None else stacked.hstack(mat)
    return stacked.column_space_basis()


def radical(M: RepModule) -> tuple[RepModule, FFMatrix]:
    """(rad M, inclusion)."""
    return submodule(M, radical_submodule_basis(M))


def top(M: RepModule) -> tuple[RepModule, FFMatrix]:
    """(M / rad M, projection)."""
    return quotient_module(M, radical_submodule_basis(M))


def radical_series(M: RepModule) -> list[RepModule]:
    """Successive radical layers (semisimple), top first."""
    layers = []
    current = M
    while current.dim > 0:
        rad_basis = radical_submodule_basis(current)
        layer, _ = quotient_module(current, rad_basis)
        layers.append(layer)
        current, _ = submodule(current, rad_basis)
    return layers


def loewy_label(registry: ModuleRegistry, M: RepModule) -> str:
    """Radical-filtration label: layers joined by '/', simples of one layer
    joined by ','."""
    if M.dim == 0:
        return "0"
    parts = []
    for layer in radical_series(M):
        ids = registry.decompose(layer).part_ids
        names = sorted(registry.label(i) for i in ids)
        parts.append(",".join(names))
    return "/".join(parts)


# -- projective covers and syzygies --------------------------------------------


def projective_cover(M: RepModule) -> tuple[RepModule, FFMatrix]:
    """(P, pi) with pi: P -> M an essential epimorphism from a direct sum
    of projective indecomposables matching top(M)."""
    registry = _registry(M)
    if M.dim == 0:
        return zero_module(M.algebra), FFMatrix.zeros(M.field, 0, 0)
    T, q = top(M)
    dec = registry.decompose(T)
    pim_mods = []
    pi_columns = []
    for (part_mod, inc), sid in zip(dec.parts, dec.part_ids):
        pim = registry.module(registry.pim_of_simple(sid))
        pim_top, pim_q = top(pim)
        w = _iso_witness_strict(pim_top, registry.module(sid))
        w2 = _iso_witness_strict(registry.module(sid), part_mod)
        rho = inc @ w2 @ w @ pim_q  # PIM -> T hitting this summand
        # lift along q: find pi_c in Hom(pim, M) with q . pi_c = rho
        span = hom_basis(pim, M)
        if not span:
            raise AssertionError("no homomorphisms from the covering projective")
        sys_cols = [(q @ h).data.ravel() for h in span]
        A = FFMatrix(M.field, np.array(sys_cols, dtype=_CODE_DTYPE).T)
        b = FFMatrix(M.field, rho.data.reshape(-1, 1))
        sol = A.solve(b)
        if sol is None:
            raise AssertionError("projective cover lift is infeasible")
        pi_c = FFMatrix.zeros(M.field, M.dim, pim.dim)
        for c, h in zip([int(x) for x in sol.data.ravel()], span):
            if c:
                pi_c = pi_c + h.scale(c)
        pim_mods.append(pim)
        pi_columns.append(pi_c)
    P = direct_sum(*pim_mods)
    pi = pi_columns[0]
    for c in pi_columns[1:]:
        pi = pi.hstack(c)
    if pi.rank() != M.dim:
        raise AssertionError("projective cover map is not surjective")
    return P, pi


def syzygy(M: RepModule) -> tuple[RepModule, FFMatrix, RepModule, FFMatrix]:
    """(Omega M, inclusion into P, P, pi)."""
    P, pi = projective_cover(M)
    if P.dim == 0:
        return zero_module(M.algebra), FFMatrix.zeros(M.field, 0, 0), P, pi
    K = pi.nullspace()
    om, inc = submodule(P, K)
    return om, inc, P, pi


def syzygy_module(M: RepModule) -> RepModule:
    return syzygy(M)[0]


def minimal_presentation(M: RepModule) -> tuple[RepModule, RepModule, FFMatrix]:
    """(P1, P0, d) with P1 -> P0 -> M -> 0 minimal."""
    om, inc, P0, _ = syzygy(M)
    om1, inc1, P1, pi1 = syzygy(om)
    d = inc @ pi1
    return P1, P0, d


def strip_projectives(M: RepModule) -> tuple[RepModule, RepModule]:
    """(non-projective part, projective part), both basic-free direct sums
    of the decomposition parts."""
    registry = _registry(M)
    if M.dim == 0:
        z = zero_module(M.algebra)
        return z, z
    dec = registry.decompose(M)
    nonproj = [p for (p, _), pid in zip(dec.parts, dec.part_ids)
               if not registry.is_projective_id(pid)]
    proj = [p for (p, _), pid in zip(dec.parts, dec.part_ids)
            if registry.is_projective_id(pid)]
    np_mod = direct_sum(*nonproj) if nonproj else zero_module(M.algebra)
    pr_mod = direct_sum(*proj) if proj else zero_module(M.algebra)
    return np_mod, pr_mod


def tau(M: RepModule, cross_check: bool = False) -> RepModule:
    """Auslander-Reiten translate: double syzygy of the projective-free
    part.  With cross_check=True the Nakayama-presentation construction is
    run as well and compared up to isomorphism."""
    registry = _registry(M)
    core, _ = strip_projectives(M)
    if core.dim == 0:
        return zero_module(M.algebra)
    pieces = [tau_indec_cached(registry, pid) for pid in registry.ids_of(core)]
    pieces = [p for p in pieces if p.dim > 0]
    out = direct_sum(*pieces) if pieces else zero_module(M.algebra)
    if cross_check:
        other = nakayama_tau(core)
        from .modules import is_isomorphic

        ok, _ = is_isomorphic(out, other, registry)
        if not ok:
            raise AssertionError(
                "translate mismatch: double syzygy vs Nakayama presentation "
                f"(dims {out.dim} vs {other.dim})"
            )
    return out


def tau_indec_cached(registry: ModuleRegistry, pid: int) -> RepModule:
    cache = getattr(registry, "_tau_cache", None)
    if cache is None:
        cache = {}
        registry._tau_cache = cache
    if pid not in cache:
        mod = registry.module(pid)
        if registry.is_projective_id(pid):
            cache[pid] = zero_module(registry.algebra)
        else:
            cache[pid] = syzygy_module(syzygy_module(mod))
    return cache[pid]


# -- Nakayama construction ------------------------------------------------------


def _right_mult_matrix(algebra, elt_idx: int) -> FFMatrix:
    g = algebra.group
    mat = np.zeros((algebra.dim, algebra.dim), dtype=_CODE_DTYPE)
    for j in range(algebra.dim):
        mat[g.mul(j, elt_idx), j] = 1
    return FFMatrix(algebra.field, mat)


def nu_of_projective(P: RepModule) -> tuple[RepModule, list[FFMatrix]]:
    """Nakayama image of a projective: the dual of Hom(P, Lambda).

    Returns (nu P, hom basis of Hom(P, Lambda) fixing the coordinates)."""
    algebra = P.algebra
    reg = regular_module(algebra)
    basis = rings.reduce_span(P.field, hom_basis(P, reg))
    if not basis:
        return zero_module(algebra), []
    s = len(basis)
    # right action of a generator g on Hom(P, Lambda): f |-> (x -> f(x) g)
    gen_mats = []
    stacked = FFMatrix(
        P.field, np.array([b.data.ravel() for b in basis], dtype=_CODE_DTYPE)
    ).transpose()
    for gi in algebra.group.gen_indices:
        Rg = _right_mult_matrix(algebra, gi)
        cols = []
        for f in basis:
            rf = Rg @ f
            sol = stacked.solve(FFMatrix(P.field, rf.data.reshape(-1, 1)))
            if sol is None:
                raise AssertionError("right action left the hom space")
            cols.append([int(x) for x in sol.data.ravel()])
        C = FFMatrix(P.field, np.array(cols, dtype=_CODE_DTYPE).T)
        gen_mats.append(C.transpose())  # dual of a right module is a left module
    return RepModule(algebra, gen_mats), basis


def nakayama_tau(M: RepModule) -> RepModule:
    """The translate as the kernel of nu(d) for a minimal presentation
    P1 -d-> P0 of the projective-free part of M."""
    core, _ = strip_projectives(M)
    if core.dim == 0:
        return zero_module(M.algebra)
    P1, P0, d = minimal_presentation(core)
    nu1, basis1 = nu_of_projective(P1)
    nu0, basis0 = nu_of_projective(P0)
    # Hom(d, Lambda): Hom(P0, L) -> Hom(P1, L), f -> f d; nu(d) is its dual
    stacked1 = FFMatrix(
        M.field, np.array([b.data.ravel() for b in basis1], dtype=_CODE_DTYPE)
    ).transpose()
    cols = []
    for f in basis0:
        fd = f @ d
        sol = stacked1.solve(FFMatrix(M.field, fd.data.reshape(-1, 1)))
        if sol is None:
            raise AssertionError("hom functor image left the hom space")
        cols.append([int(x) for x in sol.data.ravel()])
    H = FFMatrix(M.field, np.array(cols, dtype=_CODE_DTYPE).T)  # (s1, s0)
    nud = H.transpose()  # nu P1 -> nu P0
    ker = nud.nullspace()
    out, _ = submodule(nu1, ker)
    return out


# -- duals ----------------------------------------------------------------------


def dual_module(M: RepModule) -> RepModule:
    """k-dual as a left module: g acts by the transpose of the inverse."""
    g = M.algebra.group
    mats = []
    for pos, gi in enumerate(g.gen_indices):
        inv_mat = M.action_of(g.inv(gi))
        mats.append(inv_mat.transpose())
    return RepModule(M.algebra, mats)


def dual_map(f: FFMatrix) -> FFMatrix:
    """The dual of a module map, as a map between the dual modules (matrix
    transpose in dual coordinates)."""
    return f.transpose()


def transpose_dual_indec(registry: ModuleRegistry, pid: int) -> RepModule:
    """The dual-transpose of a non-projective indecomposable: the cokernel
    of the dualized minimal presentation."""
    M = registry.module(pid)
    P1, P0, d = minimal_presentation(M)
    DP0 = dual_module(P0)
    dd = dual_map(d)  # D(P0) -> D(P1)
    DP1 = dual_module(P1)
    cok, _ = quotient_module(DP1, dd.column_space_basis())
    return cok


# -- approximations --------------------------------------------------------------


def minimal_left_approximation(
    X: RepModule, target_ids: list[int], registry: ModuleRegistry
) -> tuple[FFMatrix, RepModule, list[int]]:
    """Minimal left add(T)-approximation of X, T = sum of the registry
    classes in target_ids.  Returns (f, target module, component ids).

    Components into each class are coset representatives of Hom(X, T_i)
    modulo maps that factor through the radical of add(T); the approximation
    property is verified before returning."""
    field = X.field
    ids = sorted(set(target_ids))
    chosen: list[tuple[int, FFMatrix]] = []
    hom_to = {i: hom_basis(X, registry.module(i)) for i in ids}
    for ti in ids:
        Ti = registry.module(ti)
        rad_span: list[FFMatrix] = []
        for ui in ids:
            hs = hom_to[ui]
            if not hs:
                continue
            if ui == ti:
                connecting = registry.rad_end_basis(ti)
            else:
                connecting = registry.hom_basis_ids(ui, ti)
            for g in connecting:
                for h in hs:
                    rad_span.append(g @ h)
        rad_basis = rings.reduce_span(field, rad_span)
        # complete rad_basis to the full hom space with members of hom_to[ti]
        current = list(rad_basis)
        for h in hom_to[ti]:
            if rings.in_span(field, current, h) is None:
                chosen.append((ti, h))
                current.append(h)
    if not chosen:
        target = zero_module(X.algebra)
        f = FFMatrix.zeros(field, 0, X.dim)
        _assert_left_approximation(X, f, [], ids, registry)
        return f, target, []
    comp_ids = [t for t, _ in chosen]
    target = direct_sum(*[registry.module(t) for t in comp_ids])
    f = chosen[0][1]
    for _, h in chosen[1:]:
        f = f.vstack(h)
    _assert_left_approximation(X, f, comp_ids, ids, registry)
    return f, target, comp_ids


def _assert_left_approximation(X, f, comp_ids, ids, registry):
    """Hom(f, T): Hom(target, T) -> Hom(X, T) must be onto for all T."""
    field = X.field
    offsets = []
    pos = 0
    for t in comp_ids:
        d = registry.module(t).dim
        offsets.append((pos, pos + d, t))
        pos += d
    for ti in ids:
        full = hom_basis(X, registry.module(ti))
        if not full:
            continue
        images = []
        for start, end, t in offsets:
            comp_f = f.take_rows(range(start, end))  # X -> T_t component
            for g in registry.hom_basis_ids(t, ti):
                images.append(g @ comp_f)
        got = len(rings.reduce_span(field, images))
        want = len(rings.reduce_span(field, full))
        if got != want:
            raise AssertionError(
                f"left approximation not surjective onto Hom(X, class {ti})"
            )


def cokernel(f: FFMatrix, target: RepModule) -> tuple[RepModule, FFMatrix]:
    """(coker f, projection) for a module map into target."""
    img = f.column_space_basis()
    return quotient_module(target, img)


# -- Cartan data -----------------------------------------------------------------


def cartan_matrix(registry: ModuleRegistry) -> list[list[int]]:
    """C[i][j] = multiplicity of simple i in PIM j = dim Hom(P_i, P_j)."""
    pims = registry.pim_ids()
    return [
        [registry.hom_dim_ids(pi, pj) for pj in pims]
        for pi in pims
    ]


def _registry(M: RepModule) -> ModuleRegistry:
    reg = M.algebra.registry
    if reg is None:
        reg = ModuleRegistry(M.algebra)
    return reg


def _iso_witness_strict(A: RepModule, B: RepModule) -> FFMatrix:
    from .modules import _indec_iso_witness

    if A.dim == 0 and B.dim == 0:
        return FFMatrix.zeros(A.field, 0, 0)
    w = _indec_iso_witness(A, B)
    if w is None:
        raise AssertionError("expected isomorphic indecomposables")
    return w
