"""Structure computations for small matrix algebras over GF(p^m).

The two workhorses:

* ``algebra_radical``: the Jacobson radical of a unital algebra A given by a
  matrix basis, via the characteristic-p descending chain
  ``J_0 = A``, ``J_{k+1} = {x in J_k : e_{p^k}(x b) = 0 for all b in J_k}``
  where ``e_i`` is the i-th elementary symmetric function of eigenvalues
  (trace of the i-th exterior power).  On each stage the map is additive and
  p^k-semilinear, so the solve happens in Frobenius-twisted coordinates.

* ``find_splitting_idempotent``: either certifies that an endomorphism
  algebra is local or produces a proper idempotent, by coprime splits of
  minimal polynomials, passing to the semisimple quotient when needed, and
  lifting idempotents along the radical by p-th powering.
"""

from __future__ import annotations

import numpy as np

from . import polys
from .ff import FFMatrix, FieldSpec

_CODE_DTYPE = np.int16


class DecompositionError(RuntimeError):
    """Splitting search hit its iteration cap."""


class FieldNotSplittingError(RuntimeError):
    """An endomorphism ring has a residue field bigger than the ground
    field; the session field does not split the algebra."""


def matrix_power(A: FFMatrix, e: int) -> FFMatrix:
    out = FFMatrix.identity(A.field, A.rows)
    base = A
    while e:
        if e & 1:
            out = out @ base
        base = base @ base
        e >>= 1
    return out


def reduce_span(field: FieldSpec, mats: list[FFMatrix]) -> list[FFMatrix]:
    """Canonical basis (reduced row echelon vectors) of the span of the
    given matrices, each reshaped back to the common shape."""
    mats = [m for m in mats if not m.is_zero()]
    if not mats:
        return []
    shape = mats[0].shape
    stacked = FFMatrix(field, np.array([m.data.ravel() for m in mats], dtype=_CODE_DTYPE))
    basis = stacked.row_space_basis()
    return [FFMatrix(field, basis.data[i].reshape(shape)) for i in range(basis.rows)]


def in_span(field: FieldSpec, basis: list[FFMatrix], target: FFMatrix):
    """Coordinates of target in the span of basis, or None."""
    if target.is_zero():
        return FFMatrix.zeros(field, max(len(basis), 0), 1) if basis else FFMatrix.zeros(field, 0, 1)
    if not basis:
        return None
    S = FFMatrix(
        field, np.array([m.data.ravel() for m in basis], dtype=_CODE_DTYPE)
    ).transpose()
    v = FFMatrix(field, target.data.reshape(-1, 1))
    return S.solve(v)


def algebra_radical(field: FieldSpec, basis: list[FFMatrix]) -> list[FFMatrix]:
    """Jacobson radical of the matrix algebra spanned by ``basis``.

    The basis must span an algebra (closed under products).  Returns a
    canonical basis of the radical.  Every returned element is checked to be
    nilpotent as a matrix; the full ideal property is exercised in tests."""
    J = reduce_span(field, basis)
    if not J:
        return []
    n = J[0].rows
    p = field.p
    k = 0
    pk = 1
    while pk <= n and J:
        # e_{pk}(x b) = 0 for x = sum t_i u_i, all b in J; unknowns s_i = t_i^{pk}
        rows = []
        for b in J:
            row = [(u @ b).charpoly_esym(pk) for u in J]
            rows.append(row)
        C = FFMatrix(field, np.array(rows, dtype=_CODE_DTYPE))
        sol = C.nullspace()  # columns: s-coordinate solutions
        newJ = []
        for j in range(sol.cols):
            coords = [field.frobenius_inv(int(s), k) for s in sol.data[:, j]]
            mat = FFMatrix.zeros(field, n, n)
            for t, u in zip(coords, J):
                if t:
                    mat = mat + u.scale(t)
            newJ.append(mat)
        J = reduce_span(field, newJ)
        k += 1
        pk *= p
    for x in J:
        if not matrix_power(x, n).is_zero():
            raise AssertionError("radical computation produced a non-nilpotent element")
    return J


def lift_idempotent(field: FieldSpec, e0: FFMatrix) -> FFMatrix:
    """Given e0 whose image in the semisimple quotient is idempotent,
    produce an idempotent of the algebra congruent to it mod the radical
    (p-th power iteration inside the commutative subalgebra k[e0])."""
    n = e0.rows
    pK = 1
    while pK < max(n, 2):
        pK *= field.p
    e = matrix_power(e0, pK)
    if not ((e @ e) == e):
        # one more round covers nilpotency index up to pK^2
        e = matrix_power(e, pK)
    if not ((e @ e) == e):
        raise AssertionError("idempotent lifting failed to stabilize")
    return e


def _coprime_split_idempotent(x: FFMatrix):
    """A proper idempotent polynomial in x, if its minimal polynomial has
    at least two distinct irreducible factors; None otherwise."""
    F = x.field
    mu = x.minimal_polynomial()
    facs = polys.factor(F, mu)
    if len(facs) < 2:
        return None
    g, mult = facs[0]
    part = g
    for _ in range(mult - 1):
        part = polys.mul(F, part, g)
    ecoeffs = polys.crt_idempotent_coeffs(F, mu, part)
    e = x.apply_poly(ecoeffs)
    n = x.rows
    if e.is_zero() or e == FFMatrix.identity(F, n):
        raise AssertionError("CRT idempotent degenerated")
    return e


class QuotientAlgebra:
    """E / rad(E) presented by structure constants, with its left regular
    representation for minimal-polynomial work."""

    def __init__(self, field: FieldSpec, alg_basis: list[FFMatrix], rad_basis: list[FFMatrix]):
        self.field = field
        rad_reduced = reduce_span(field, rad_basis)
        full = reduce_span(field, rad_reduced + alg_basis)
        # complement representatives: extend the radical basis to the full
        # algebra; quotient coordinates are read off via the combined solve
        self.rad = rad_reduced
        lifts = []
        current = list(rad_reduced)
        for m in alg_basis:
            if in_span(field, current, m) is None:
                lifts.append(m)
                current.append(m)
        self.lifts = lifts
        self.dim = len(lifts)
        self._solver_basis = rad_reduced + lifts
        unit_coords = self.coords(FFMatrix.identity(field, alg_basis[0].rows))
        self.unit = unit_coords
        # left regular representation: columns are coords of lift_i * lift_j
        self._regular = []
        for i in range(self.dim):
            cols = []
            for j in range(self.dim):
                cols.append(self.coords(lifts[i] @ lifts[j]))
            self._regular.append(
                FFMatrix(field, np.array(cols, dtype=_CODE_DTYPE).T)
            )

    def coords(self, m: FFMatrix):
        """Quotient coordinates (w.r.t. lifts) of an algebra element."""
        sol = in_span(self.field, self._solver_basis, m)
        if sol is None:
            raise AssertionError("element not in the algebra span")
        return [int(c) for c in sol.data.ravel()[len(self.rad) :]]

    def regular_matrix(self, coords) -> FFMatrix:
        out = FFMatrix.zeros(self.field, self.dim, self.dim)
        for c, R in zip(coords, self._regular):
            if c:
                out = out + R.scale(c)
        return out

    def lift(self, coords) -> FFMatrix:
        n = self.lifts[0].rows
        out = FFMatrix.zeros(self.field, n, n)
        for c, u in zip(coords, self.lifts):
            if c:
                out = out + u.scale(c)
        return out

def find_splitting_idempotent(
    field: FieldSpec, end_basis: list[FFMatrix], seed: int = 20240801, max_tries: int = 400
):
    """Either a proper idempotent of the algebra spanned by ``end_basis``
    (an endomorphism algebra, acting faithfully), or None if the algebra is
    local.  Raises FieldNotSplittingError when the residue division ring is
    a proper field extension of the ground field."""
    basis = reduce_span(field, end_basis)
    if len(basis) <= 1:
        return None
    n = basis[0].rows
    ident = FFMatrix.identity(field, n)

    def scalar(m):
        d = m.data
        return bool((d == d[0, 0] * np.eye(n, dtype=_CODE_DTYPE)).all())

    # stage 1: direct coprime splits on cheap candidates
    candidates = [b for b in basis if not scalar(b)]
    for i in range(min(len(basis), 8)):
        for j in range(min(len(basis), 8)):
            prod = basis[i] @ basis[j]
            if not scalar(prod) and not prod.is_zero():
                candidates.append(prod)
    for x in candidates:
        e = _coprime_split_idempotent(x)
        if e is not None:
            return e

    # stage 2: decide via the semisimple quotient
    rad = algebra_radical(field, basis)
    if len(basis) - len(rad) == 1:
        return None
    Q = QuotientAlgebra(field, basis, rad)
    rng = np.random.default_rng(seed)

    def try_coords(coords):
        R = Q.regular_matrix(coords)
        mu = R.minimal_polynomial()
        facs = polys.factor(field, mu)
        if len(facs) >= 2:
            g, mult = facs[0]
            part = g
            for _ in range(mult - 1):
                part = polys.mul(field, part, g)
            ecoeffs = polys.crt_idempotent_coeffs(field, mu, part)
            # evaluate the idempotent polynomial at the element, inside the quotient
            ebar = _eval_poly_in_quotient(Q, coords, ecoeffs)
            e0 = Q.lift(ebar)
            e = lift_idempotent(field, e0)
            if e.is_zero() or e == ident:
                raise AssertionError("lifted idempotent degenerated")
            return e
        if facs[0][1] == 1 and polys.degree(facs[0][0]) == Q.dim:
            # the quotient is a field strictly bigger than the ground field
            raise FieldNotSplittingError(
                f"endomorphism residue field has degree {Q.dim} over the ground field"
            )
        return None

    unit_basis = [list(c) for c in np.eye(Q.dim, dtype=int).tolist()]
    pool = unit_basis + [
        [int(a) for a in rng.integers(0, field.q, size=Q.dim)] for _ in range(max_tries)
    ]
    for coords in pool:
        out = try_coords(coords)
        if out is not None:
            return out
    raise DecompositionError(
        f"no splitting idempotent found in {max_tries} tries (dim quotient {Q.dim})"
    )


def _eval_poly_in_quotient(Q: QuotientAlgebra, coords, poly_coeffs):
    """Evaluate a polynomial at the quotient element with the given
    coordinates, returning quotient coordinates of the value."""
    field = Q.field
    acc = [0] * Q.dim
    R = Q.regular_matrix(coords)
    for c in reversed(list(poly_coeffs)):
        acc_v = FFMatrix(field, np.array(acc, dtype=_CODE_DTYPE).reshape(-1, 1))
        acc = [int(x) for x in (R @ acc_v).data.ravel()]
        if c:
            acc = [field.add(a, field.mul(c, u)) for a, u in zip(acc, Q.unit)]
    return acc


# -- commutative (center) machinery -----------------------------------------


def frobenius_stable_part(field: FieldSpec, vectors, mul_vec):
    """Basis of the maximal separable (etale) subalgebra of a commutative
    algebra: the stable image of the p-th power map.  ``mul_vec`` multiplies
    two coefficient vectors."""

    def reduce_vecs(vecs):
        vecs = [list(v) for v in vecs if any(v)]
        if not vecs:
            return []
        M = FFMatrix(field, np.array(vecs, dtype=_CODE_DTYPE))
        return [list(r) for r in M.row_space_basis().data.tolist()]

    def pth_power(v):
        out = v
        for _ in range(field.p - 1):
            out = mul_vec(out, v)
        return out

    basis = reduce_vecs(vectors)
    while True:
        powered = reduce_vecs([pth_power(v) for v in basis])
        if len(powered) == len(basis):
            # the p-power map is now bijective on the span, hence stable
            return powered
        basis = powered


def commutative_primitive_idempotents(field: FieldSpec, unit, basis, mul_vec):
    """Primitive idempotents of a split etale commutative algebra.

    ``basis`` spans the algebra, ``unit`` is its identity, ``mul_vec``
    multiplies two vectors.  Splitting is by minimal polynomials of basis
    elements; over a splitting field this terminates without search."""

    def reduce_vecs(vecs):
        vecs = [list(v) for v in vecs if any(v)]
        if not vecs:
            return []
        M = FFMatrix(field, np.array(vecs, dtype=_CODE_DTYPE))
        return [list(r) for r in M.row_space_basis().data.tolist()]

    def mult_matrix(v, sub_basis):
        cols = []
        S = FFMatrix(field, np.array(sub_basis, dtype=_CODE_DTYPE)).transpose()
        for b in sub_basis:
            prod = mul_vec(v, b)
            sol = S.solve(FFMatrix(field, np.array(prod, dtype=_CODE_DTYPE).reshape(-1, 1)))
            if sol is None:
                raise AssertionError("multiplication left the subalgebra")
            cols.append([int(x) for x in sol.data.ravel()])
        return FFMatrix(field, np.array(cols, dtype=_CODE_DTYPE).T)

    def eval_poly(coeffs, v, local_unit):
        acc = [0] * len(v)
        for c in reversed(list(coeffs)):
            acc = mul_vec(acc, v)
            if c:
                acc = [field.add(a, field.mul(c, u)) for a, u in zip(acc, local_unit)]
        return acc

    def split(local_unit, sub_basis):
        if len(sub_basis) == 1:
            return [local_unit]
        for b in sub_basis:
            R = mult_matrix(b, sub_basis)
            mu = R.minimal_polynomial()
            facs = polys.factor(field, mu)
            if len(facs) < 2:
                continue
            g, _ = facs[0]
            ecoeffs = polys.crt_idempotent_coeffs(field, mu, g)
            e = eval_poly(ecoeffs, b, local_unit)
            if not any(e):
                continue
            rest = [field.sub(u, x) for u, x in zip(local_unit, e)]
            left = reduce_vecs([mul_vec(e, v) for v in sub_basis])
            right = reduce_vecs([mul_vec(rest, v) for v in sub_basis])
            return split(e, left) + split(rest, right)
        raise FieldNotSplittingError(
            "commutative algebra does not split over the ground field"
        )

    return split(list(unit), reduce_vecs(basis))
