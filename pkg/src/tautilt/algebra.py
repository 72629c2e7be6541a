"""Group algebras kG over GF(p^m), their centers and block decompositions.

A group algebra element is a coefficient vector indexed by the canonical
element order of the group.  Blocks are central primitive idempotents,
found by splitting the separable part of the center (conjugacy-class sums)
and ordered deterministically: principal block first, then by dimension,
then by idempotent coefficient vector.
"""

from __future__ import annotations

from math import lcm

import numpy as np

from . import rings
from .ff import FFMatrix, FieldSpec, field_create
from .groups import FiniteGroup, SubgroupEmbedding

_CODE_DTYPE = np.int16


class AlgebraError(ValueError):
    pass


def splitting_field_degree(p: int, groups) -> int:
    """Degree m such that GF(p^m) contains the e-th roots of unity for e the
    p'-part of the largest exponent among the given groups."""
    from .ff import FFError, _is_prime

    if not _is_prime(p):
        raise FFError(f"characteristic {p} is not prime")
    e = 1
    for g in groups:
        e = lcm(e, g.exponent())
    while e % p == 0:
        e //= p
    if e == 1:
        return 1
    m = 1
    while pow(p, m, e) != 1:
        m += 1
    return m


def splitting_field(p: int, groups) -> FieldSpec:
    return field_create(p, splitting_field_degree(p, groups))


class GroupAlgebra:
    """kG with vector arithmetic on coefficient lists."""

    def __init__(self, group: FiniteGroup, field: FieldSpec):
        self.group = group
        self.field = field
        self.dim = group.order
        self._blocks = None
        self._left_mult = {}
        self._radical = None
        self.registry = None  # set lazily by modules.ModuleRegistry

    def zero(self) -> list[int]:
        return [0] * self.dim

    def unit(self) -> list[int]:
        v = self.zero()
        v[self.group.identity] = 1
        return v

    def basis_vector(self, elt_idx: int) -> list[int]:
        v = self.zero()
        v[elt_idx] = 1
        return v

    def mul_vec(self, a, b) -> list[int]:
        F = self.field
        g = self.group
        out = self.zero()
        for i, ca in enumerate(a):
            if not ca:
                continue
            for j, cb in enumerate(b):
                if not cb:
                    continue
                k = g.mul(i, j)
                out[k] = F.add(out[k], F.mul(ca, cb))
        return out

    def left_mult_matrix(self, elt_idx: int) -> FFMatrix:
        """Permutation matrix of left multiplication by a group element on
        the element basis (the regular representation)."""
        if elt_idx not in self._left_mult:
            g = self.group
            mat = np.zeros((self.dim, self.dim), dtype=_CODE_DTYPE)
            for j in range(self.dim):
                mat[g.mul(elt_idx, j), j] = 1
            self._left_mult[elt_idx] = FFMatrix(self.field, mat)
        return self._left_mult[elt_idx]

    def vector_mult_matrix(self, vec) -> FFMatrix:
        """Left multiplication by an algebra element on the element basis."""
        out = FFMatrix.zeros(self.field, self.dim, self.dim)
        for i, c in enumerate(vec):
            if c:
                out = out + self.left_mult_matrix(i).scale(c)
        return out

    def conjugate_vector(self, vec, x_idx: int) -> list[int]:
        """x * a * x^-1 coefficientwise (coefficients move to conjugated
        group elements)."""
        g = self.group
        out = self.zero()
        for i, c in enumerate(vec):
            if c:
                out[g.conjugate(x_idx, i)] = c
        return out

    def center_basis(self) -> list[list[int]]:
        """Conjugacy class sums."""
        out = []
        for cls in self.group.conjugacy_classes():
            v = self.zero()
            for i in cls:
                v[i] = 1
            out.append(v)
        return out

    def radical_vectors(self) -> list[list[int]]:
        """Basis of the Jacobson radical of kG as coefficient vectors
        (computed once and cached)."""
        if self._radical is None:
            mats = [self.left_mult_matrix(i) for i in range(self.dim)]
            rad = rings.algebra_radical(self.field, mats)
            # a multiplication matrix is recovered as a vector by its action on 1
            ident = self.group.identity
            self._radical = [[int(c) for c in m.data[:, ident]] for m in rad]
        return self._radical

    def blocks(self) -> list["Block"]:
        if self._blocks is None:
            self._blocks = block_decomposition(self)
        return self._blocks

    def __repr__(self):
        return f"GroupAlgebra({self.group.name}, {self.field})"


class Block:
    """A block of kG: a central primitive idempotent with bookkeeping."""

    def __init__(self, parent: GroupAlgebra, idempotent, index: int = -1):
        self.parent = parent
        self.idempotent = list(idempotent)
        self.index = index
        mult = parent.vector_mult_matrix(self.idempotent)
        self.dim = mult.rank()
        F = parent.field
        s = 0
        for c in self.idempotent:
            s = F.add(s, c)
        self.is_principal = s != 0  # nonzero action on the trivial module
        self._simple_ids = None

    @property
    def field(self) -> FieldSpec:
        return self.parent.field

    @property
    def group(self) -> FiniteGroup:
        return self.parent.group

    def contains_vector(self, vec) -> bool:
        prod = self.parent.mul_vec(self.idempotent, vec)
        return prod == list(vec)

    @property
    def simple_count(self) -> int:
        """Number of simple modules lying in the block (needs the module
        registry, so it is computed on first access)."""
        if self._simple_ids is None:
            from .modules import ModuleRegistry, lies_in_block

            registry = self.parent.registry or ModuleRegistry(self.parent)
            self._simple_ids = [
                s
                for s in registry.simple_ids()
                if lies_in_block(registry.module(s), self)
            ]
        return len(self._simple_ids)

    def label(self) -> str:
        return f"B{self.index}" + ("*" if self.is_principal else "")

    def __repr__(self):
        kind = "principal, " if self.is_principal else ""
        return f"Block({self.parent.group.name}, {kind}dim={self.dim})"


def block_decomposition(algebra: GroupAlgebra) -> list[Block]:
    """Central primitive idempotents, deterministically ordered: principal
    first, then ascending dimension, then idempotent coefficient codes."""
    field = algebra.field
    center = algebra.center_basis()
    separable = rings.frobenius_stable_part(field, center, algebra.mul_vec)
    idems = rings.commutative_primitive_idempotents(
        field, algebra.unit(), separable, algebra.mul_vec
    )
    blocks = [Block(algebra, e) for e in idems]
    # sanity: orthogonal decomposition of 1
    total = algebra.zero()
    for b in blocks:
        total = [field.add(x, y) for x, y in zip(total, b.idempotent)]
    if total != algebra.unit():
        raise AssertionError("block idempotents do not sum to 1")
    blocks.sort(key=lambda b: (not b.is_principal, b.dim, tuple(b.idempotent)))
    for i, b in enumerate(blocks):
        b.index = i
    return blocks


def principal_block(algebra: GroupAlgebra) -> Block:
    for b in algebra.blocks():
        if b.is_principal:
            return b
    raise AssertionError("no principal block found")


def covers(btilde: Block, b: Block, emb: SubgroupEmbedding) -> bool:
    """Whether the overgroup block covers the subgroup block: the product
    of the two idempotents inside the overgroup algebra is nonzero."""
    if not emb.normal:
        raise AlgebraError("covering is defined along a normal embedding")
    amb_alg = btilde.parent
    if amb_alg.group is not emb.amb or b.parent.group is not emb.sub:
        raise AlgebraError("blocks do not match the embedding")
    lifted = amb_alg.zero()
    for i, c in enumerate(b.idempotent):
        if c:
            lifted[emb.element_map[i]] = c
    prod = amb_alg.mul_vec(lifted, btilde.idempotent)
    return any(prod)


def covering_blocks(b: Block, emb: SubgroupEmbedding, amb_algebra: GroupAlgebra) -> list[Block]:
    return [bt for bt in amb_algebra.blocks() if covers(bt, b, emb)]


class InertialGroup:
    """The stabilizer of a block of the normal subgroup inside the
    overgroup, presented with its embeddings in both directions."""

    def __init__(self, block: Block, emb: SubgroupEmbedding):
        if not emb.normal:
            raise AlgebraError("inertial groups need a normal embedding")
        amb = emb.amb
        alg = GroupAlgebra(amb, block.field)
        lifted = alg.zero()
        for i, c in enumerate(block.idempotent):
            if c:
                lifted[emb.element_map[i]] = c
        members = []
        stable_reps = []
        for rep in emb.coset_reps:
            if alg.conjugate_vector(lifted, rep) == lifted:
                stable_reps.append(rep)
        image = set(emb.element_map)
        for rep in stable_reps:
            for h in image:
                members.append(amb.mul(rep, h))
        self.block = block
        self.emb = emb
        self.group = emb.amb.subgroup(sorted(set(members)), name=f"I({block.label()})")
        self.stable_coset_reps = tuple(stable_reps)
        self.into_amb = SubgroupEmbedding(self.group, emb.amb)
        self.sub_in_inertial = SubgroupEmbedding(emb.sub, self.group)

    @property
    def order(self) -> int:
        return self.group.order

    def __repr__(self):
        return f"InertialGroup({self.block!r}, order={self.order})"


def inertial_group(block: Block, emb: SubgroupEmbedding) -> InertialGroup:
    return InertialGroup(block, emb)
