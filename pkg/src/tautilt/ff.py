"""Exact arithmetic in GF(p^m) and the dense matrix kernel.

Field elements are stored as integer codes in ``range(q)`` with ``q = p**m``:
the code of an element with polynomial coordinates ``(c_0, ..., c_{m-1})``
is ``sum(c_i * p**i)``.  All arithmetic goes through precomputed lookup
tables, so matrix operations vectorize over numpy integer arrays.

Everything here is immutable after construction; operations are pure
functions and safe to share across workers.
"""

from __future__ import annotations

import functools
from typing import Iterable, Sequence

import numpy as np

_CODE_DTYPE = np.int16
_TABLE_CAP = 4096  # largest q for which we build q*q tables


class FFError(ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _poly_mul_mod(a, b, modulus, p):
    """Multiply coefficient tuples mod (p, modulus).  Little-endian coeffs."""
    m = len(modulus) - 1
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] = (out[i + j] + ca * cb) % p
    # reduce degrees >= m using x^m = -(modulus[:-1])
    for d in range(len(out) - 1, m - 1, -1):
        c = out[d]
        if c:
            out[d] = 0
            for j in range(m):
                out[d - m + j] = (out[d - m + j] - c * modulus[j]) % p
    out = out[:m] + [0] * max(0, m - len(out))
    return tuple(out[:m])


class FieldSpec:
    """The field GF(p^m) with a fixed monic irreducible modulus over GF(p).

    Instances are immutable and interned per (p, m, modulus); one FieldSpec
    is shared by every object of a computation session.
    """

    _cache: dict = {}

    def __new__(cls, p: int, m: int, modulus: tuple[int, ...]):
        key = (p, m, tuple(modulus))
        inst = cls._cache.get(key)
        if inst is not None:
            return inst
        inst = super().__new__(cls)
        inst._init(p, m, tuple(modulus))
        cls._cache[key] = inst
        return inst

    def _init(self, p: int, m: int, modulus: tuple[int, ...]):
        if not _is_prime(p):
            raise FFError(f"characteristic {p} is not prime")
        if m < 1:
            raise FFError(f"extension degree {m} must be >= 1")
        q = p**m
        if q > _TABLE_CAP:
            raise FFError(f"field size {q} exceeds table cap {_TABLE_CAP}")
        if len(modulus) != m + 1 or modulus[m] != 1:
            raise FFError("modulus must be monic of degree m")
        self.p = p
        self.m = m
        self.q = q
        self.modulus = modulus
        self._build_tables()

    def _build_tables(self):
        p, m, q = self.p, self.m, self.q
        mod = self.modulus

        def decode(code):
            c = []
            for _ in range(m):
                c.append(code % p)
                code //= p
            return tuple(c)

        def encode(coeffs):
            code = 0
            for c in reversed(coeffs):
                code = code * p + (c % p)
            return code

        self._decode = decode
        self._encode = encode
        add = np.zeros((q, q), dtype=_CODE_DTYPE)
        mul = np.zeros((q, q), dtype=_CODE_DTYPE)
        neg = np.zeros(q, dtype=_CODE_DTYPE)
        coeffs = [decode(i) for i in range(q)]
        for a in range(q):
            ca = coeffs[a]
            neg[a] = encode(tuple((-c) % p for c in ca))
            for b in range(a, q):
                cb = coeffs[b]
                s = encode(tuple((x + y) % p for x, y in zip(ca, cb)))
                add[a, b] = add[b, a] = s
                pr = encode(_poly_mul_mod(ca, cb, mod, p))
                mul[a, b] = mul[b, a] = pr
        inv = np.zeros(q, dtype=_CODE_DTYPE)
        for a in range(1, q):
            hits = np.nonzero(mul[a] == 1)[0]
            if hits.size == 0:
                raise FFError("modulus is not irreducible: element without inverse")
            inv[a] = hits[0]
        frob = np.zeros(q, dtype=_CODE_DTYPE)
        for a in range(q):
            acc = a
            for _ in range(self.p - 1):
                acc = int(mul[acc, a])
            frob[a] = acc
        for t in (add, mul, neg, inv, frob):
            t.flags.writeable = False
        self.add_table = add
        self.mul_table = mul
        self.neg_table = neg
        self.inv_table = inv
        self.frob_table = frob  # x -> x^p

    # -- scalar helpers -------------------------------------------------

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def sub(self, a: int, b: int) -> int:
        return int(self.add_table[a, self.neg_table[b]])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero field element")
        return int(self.inv_table[a])

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        acc, base = 1, a
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            e >>= 1
        return acc

    def frobenius(self, a: int, k: int = 1) -> int:
        """a^(p^k); k may be reduced mod m since Frobenius has order m."""
        out = a
        for _ in range(k % self.m):
            out = int(self.frob_table[out])
        return out

    def frobenius_inv(self, a: int, k: int = 1) -> int:
        return self.frobenius(a, (-k) % self.m)

    def element_from_int(self, n: int) -> int:
        """The image of the integer n under Z -> GF(p^m)."""
        return n % self.p

    def __repr__(self):
        return f"GF({self.p}^{self.m})" if self.m > 1 else f"GF({self.p})"

    def __reduce__(self):
        return (FieldSpec, (self.p, self.m, self.modulus))


def _poly_is_irreducible_gfp(coeffs: Sequence[int], p: int) -> bool:
    """Irreducibility over GF(p) of a monic poly (little-endian coeffs)."""
    deg = len(coeffs) - 1
    if deg == 1:
        return True
    # no roots in GF(p)
    for x in range(p):
        acc = 0
        for c in reversed(coeffs):
            acc = (acc * x + c) % p
        if acc == 0:
            return False
    if deg <= 3:
        return True
    # trial division by monic polys of degree 2..deg//2
    def polys_of_degree(d):
        for code in range(p**d):
            body = []
            c = code
            for _ in range(d):
                body.append(c % p)
                c //= p
            yield body + [1]

    def divides(g, f):
        f = list(f)
        dg = len(g) - 1
        while len(f) - 1 >= dg and any(f):
            if f[-1] == 0:
                f.pop()
                continue
            lead = f[-1]
            shift = len(f) - 1 - dg
            for i, gc in enumerate(g):
                f[shift + i] = (f[shift + i] - lead * gc) % p
            while f and f[-1] == 0:
                f.pop()
        return not any(f)

    for d in range(2, deg // 2 + 1):
        for g in polys_of_degree(d):
            if divides(g, coeffs):
                return False
    return True


def _least_primitive_root(p: int) -> int:
    if p == 2:
        return 1
    for g in range(2, p):
        seen = set()
        x = 1
        for _ in range(p - 1):
            x = (x * g) % p
            seen.add(x)
        if len(seen) == p - 1:
            return g
    raise AssertionError("no primitive root found")


@functools.lru_cache(maxsize=None)
def canonical_modulus(p: int, m: int) -> tuple[int, ...]:
    """Deterministic irreducible modulus of degree m over GF(p).

    For m >= 2: the monic irreducible whose coefficient tuple
    (c_{m-1}, ..., c_0) is lexicographically least.  For m == 1: x - g with
    g the least primitive root (so GF(2) gets x + 1)."""
    if m == 1:
        g = _least_primitive_root(p)
        return ((-g) % p, 1)
    for code in range(p**m):
        c = code
        digits = []
        for _ in range(m):
            digits.append(c % p)
            c //= p
        # code = sum(c_{m-1-i} p^(m-1-i)): the base-p digits of code, least
        # significant first, are exactly the little-endian coefficients, and
        # ascending code order is lex order on (c_{m-1}, ..., c_0).
        le = tuple(digits) + (1,)
        if _poly_is_irreducible_gfp(le, p):
            return le
    raise FFError(f"no irreducible polynomial of degree {m} over GF({p})")


def field_create(p: int, m: int) -> FieldSpec:
    """GF(p^m) with the canonical modulus.  Raises FFError on bad input."""
    if not _is_prime(p):
        raise FFError(f"characteristic {p} is not prime")
    if m < 1:
        raise FFError(f"extension degree {m} must be >= 1")
    return FieldSpec(p, m, canonical_modulus(p, m))


class FFMatrix:
    """Dense matrix over a FieldSpec.  Entries are field codes in an int16
    numpy array of shape (rows, cols); the array is frozen at construction."""

    __slots__ = ("field", "data")

    def __init__(self, field: FieldSpec, data):
        arr = np.asarray(data, dtype=_CODE_DTYPE)
        if arr.ndim != 2:
            raise FFError(f"matrix data must be 2-dimensional, got shape {arr.shape}")
        if arr.size and (arr.min() < 0 or arr.max() >= field.q):
            raise FFError("entry out of range for field")
        arr = np.ascontiguousarray(arr)
        arr.flags.writeable = False
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "data", arr)

    def __setattr__(self, name, value):
        raise AttributeError("FFMatrix is immutable")

    # -- constructors ----------------------------------------------------

    @staticmethod
    def zeros(field: FieldSpec, rows: int, cols: int) -> "FFMatrix":
        return FFMatrix(field, np.zeros((rows, cols), dtype=_CODE_DTYPE))

    @staticmethod
    def identity(field: FieldSpec, n: int) -> "FFMatrix":
        return FFMatrix(field, np.eye(n, dtype=_CODE_DTYPE))

    @staticmethod
    def from_rows(field: FieldSpec, rows: Iterable[Iterable[int]]) -> "FFMatrix":
        rows = [list(r) for r in rows]
        return FFMatrix(field, np.array(rows, dtype=_CODE_DTYPE))

    @staticmethod
    def column(field: FieldSpec, entries: Iterable[int]) -> "FFMatrix":
        v = np.array(list(entries), dtype=_CODE_DTYPE).reshape(-1, 1)
        return FFMatrix(field, v)

    # -- basics ----------------------------------------------------------

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def is_zero(self) -> bool:
        return not self.data.any()

    def __eq__(self, other):
        return (
            isinstance(other, FFMatrix)
            and self.field is other.field
            and self.shape == other.shape
            and bool(np.array_equal(self.data, other.data))
        )

    def __hash__(self):
        return hash((self.field.p, self.field.m, self.shape, self.data.tobytes()))

    def __repr__(self):
        return f"FFMatrix({self.field}, {self.data.tolist()})"

    def entries(self) -> list[int]:
        """Row-major entry codes."""
        return [int(x) for x in self.data.ravel()]

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "FFMatrix") -> "FFMatrix":
        self._check_same(other)
        return FFMatrix(self.field, self.field.add_table[self.data, other.data])

    def __sub__(self, other: "FFMatrix") -> "FFMatrix":
        self._check_same(other)
        f = self.field
        return FFMatrix(f, f.add_table[self.data, f.neg_table[other.data]])

    def __neg__(self) -> "FFMatrix":
        return FFMatrix(self.field, self.field.neg_table[self.data])

    def scale(self, c: int) -> "FFMatrix":
        return FFMatrix(self.field, self.field.mul_table[c, self.data])

    def __matmul__(self, other: "FFMatrix") -> "FFMatrix":
        if self.field is not other.field:
            raise FFError("field mismatch in matrix product")
        if self.cols != other.rows:
            raise FFError(f"shape mismatch {self.shape} @ {other.shape}")
        f = self.field
        r, s = self.shape
        c = other.cols
        out = np.zeros((r, c), dtype=_CODE_DTYPE)
        A, B = self.data, other.data
        for k in range(s):
            col = A[:, k]
            if not col.any():
                continue
            out = f.add_table[out, f.mul_table[col[:, None], B[k, :][None, :]]]
        return FFMatrix(f, out)

    def transpose(self) -> "FFMatrix":
        return FFMatrix(self.field, self.data.T)

    def kron(self, other: "FFMatrix") -> "FFMatrix":
        """Kronecker product (self tensor other)."""
        f = self.field
        a, b = self.data, other.data
        out = f.mul_table[a[:, None, :, None], b[None, :, None, :]]
        out = out.reshape(self.rows * other.rows, self.cols * other.cols)
        return FFMatrix(f, out)

    def hstack(self, other: "FFMatrix") -> "FFMatrix":
        return FFMatrix(self.field, np.hstack([self.data, other.data]))

    def vstack(self, other: "FFMatrix") -> "FFMatrix":
        return FFMatrix(self.field, np.vstack([self.data, other.data]))

    def submatrix(self, row_idx, col_idx) -> "FFMatrix":
        return FFMatrix(self.field, self.data[np.ix_(list(row_idx), list(col_idx))])

    def take_columns(self, col_idx) -> "FFMatrix":
        return FFMatrix(self.field, self.data[:, list(col_idx)])

    def take_rows(self, row_idx) -> "FFMatrix":
        return FFMatrix(self.field, self.data[list(row_idx), :])

    def _check_same(self, other):
        if self.field is not other.field or self.shape != other.shape:
            raise FFError("incompatible matrices")

    # -- elimination -------------------------------------------------------

    def rref(self) -> tuple["FFMatrix", tuple[int, ...]]:
        """Reduced row echelon form with deterministic first-nonzero pivoting.

        Returns (R, pivot_columns)."""
        f = self.field
        A = self.data.copy()
        nrows, ncols = A.shape
        pivots = []
        r = 0
        for c in range(ncols):
            if r == nrows:
                break
            nz = np.nonzero(A[r:, c])[0]
            if nz.size == 0:
                continue
            i = r + int(nz[0])
            if i != r:
                A[[r, i]] = A[[i, r]]
            pv = A[r, c]
            if pv != 1:
                A[r] = f.mul_table[f.inv_table[pv], A[r]]
            rows_nz = np.nonzero(A[:, c])[0]
            rows_nz = rows_nz[rows_nz != r]
            if rows_nz.size:
                factors = f.neg_table[A[rows_nz, c]]
                A[rows_nz] = f.add_table[
                    A[rows_nz], f.mul_table[factors[:, None], A[r][None, :]]
                ]
            pivots.append(c)
            r += 1
        return FFMatrix(f, A), tuple(pivots)

    def rank(self) -> int:
        _, pivots = self.rref()
        return len(pivots)

    def nullspace(self) -> "FFMatrix":
        """Basis of {v : self @ v = 0}, one basis vector per column.

        Deterministic: free columns in ascending order, each basis vector has
        a 1 in its own free coordinate."""
        f = self.field
        R, pivots = self.rref()
        ncols = self.cols
        pivset = set(pivots)
        free = [c for c in range(ncols) if c not in pivset]
        basis = np.zeros((ncols, len(free)), dtype=_CODE_DTYPE)
        Rd = R.data
        for j, fc in enumerate(free):
            basis[fc, j] = 1
            for i, pc in enumerate(pivots):
                basis[pc, j] = f.neg_table[Rd[i, fc]]
        return FFMatrix(f, basis)

    def column_space_basis(self) -> "FFMatrix":
        """Columns of self restricted to a basis of the column space (the
        pivot columns, in ascending order)."""
        _, pivots = self.rref()
        return self.take_columns(pivots)

    def row_space_basis(self) -> "FFMatrix":
        R, pivots = self.rref()
        return R.take_rows(range(len(pivots)))

    def inverse(self) -> "FFMatrix":
        if self.rows != self.cols:
            raise FFError("only square matrices are invertible")
        n = self.rows
        aug = self.hstack(FFMatrix.identity(self.field, n))
        R, pivots = aug.rref()
        if len(pivots) < n or pivots[n - 1] != n - 1:
            raise FFError("matrix is singular")
        return FFMatrix(self.field, R.data[:, n:])

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows

    def solve(self, rhs: "FFMatrix"):
        """One solution X of self @ X = rhs, or None if inconsistent."""
        f = self.field
        aug = self.hstack(rhs)
        R, pivots = aug.rref()
        n = self.cols
        if any(p >= n for p in pivots):
            return None
        X = np.zeros((n, rhs.cols), dtype=_CODE_DTYPE)
        Rd = R.data
        for i, pc in enumerate(pivots):
            X[pc, :] = Rd[i, n:]
        return FFMatrix(f, X)

    # -- polynomial data ---------------------------------------------------

    def apply_poly(self, coeffs: Sequence[int]) -> "FFMatrix":
        """Evaluate a polynomial (little-endian field-code coeffs) at self."""
        n = self.rows
        f = self.field
        out = FFMatrix.zeros(f, n, n)
        for c in reversed(list(coeffs)):
            out = out @ self
            if c:
                out = out + FFMatrix.identity(f, n).scale(c)
        return out

    def minimal_polynomial(self) -> tuple[int, ...]:
        """Monic minimal polynomial, little-endian codes."""
        if self.rows != self.cols:
            raise FFError("minimal polynomial needs a square matrix")
        n = self.rows
        f = self.field
        if n == 0:
            return (1,)  # unit polynomial for the empty matrix
        powers = [FFMatrix.identity(f, n)]
        flat = [powers[0].data.ravel()]
        for k in range(1, n + 1):
            powers.append(powers[-1] @ self)
            flat.append(powers[-1].data.ravel())
            stacked = FFMatrix(f, np.array(flat, dtype=_CODE_DTYPE))
            # rows 0..k; find dependence of last row on previous
            M = stacked.take_rows(range(k)).transpose()
            rhs = FFMatrix(f, flat[k].reshape(-1, 1))
            sol = M.solve(rhs)
            if sol is not None:
                coeffs = [f.neg(int(c)) for c in sol.data.ravel()]
                return tuple(coeffs + [1])
        raise AssertionError("minimal polynomial of degree > n")

    def charpoly(self) -> tuple[int, ...]:
        """Characteristic polynomial det(xI - A), little-endian, via
        Hessenberg reduction (exact, any field)."""
        if self.rows != self.cols:
            raise FFError("characteristic polynomial needs a square matrix")
        n = self.rows
        f = self.field
        if n == 0:
            return (1,)
        H = self.data.copy()
        addt, mult, negt, invt = f.add_table, f.mul_table, f.neg_table, f.inv_table
        for k in range(n - 2):
            nz = np.nonzero(H[k + 1 :, k])[0]
            if nz.size == 0:
                continue
            i = k + 1 + int(nz[0])
            if i != k + 1:
                H[[k + 1, i]] = H[[i, k + 1]]
                H[:, [k + 1, i]] = H[:, [i, k + 1]]
            pv = H[k + 1, k]
            pv_inv = invt[pv]
            rows = np.nonzero(H[k + 2 :, k])[0] + k + 2
            if rows.size:
                factors = mult[pv_inv, H[rows, k]]
                # row_r -= factor * row_{k+1}
                H[rows] = addt[H[rows], mult[negt[factors][:, None], H[k + 1][None, :]]]
                # col_{k+1} += factor * col_r  (inverse similarity op)
                for r, fac in zip(rows, factors):
                    H[:, k + 1] = addt[H[:, k + 1], mult[fac, H[:, r]]]
        # charpoly recurrence on Hessenberg matrix
        polys = [np.array([1], dtype=_CODE_DTYPE)]  # p_0 = 1
        for k in range(1, n + 1):
            hkk = H[k - 1, k - 1]
            prev = polys[k - 1]
            cur = np.zeros(k + 1, dtype=_CODE_DTYPE)
            cur[1:] = prev  # x * p_{k-1}
            cur[:-1] = addt[cur[:-1], mult[negt[hkk], prev]]
            run = 1
            for i in range(k - 1, 0, -1):
                run = mult[run, H[i, i - 1]]
                if run == 0:
                    break
                coeff = mult[run, H[i - 1, k - 1]]
                if coeff:
                    contrib = mult[negt[coeff], polys[i - 1]]
                    cur[: len(contrib)] = addt[cur[: len(contrib)], contrib]
            polys.append(cur)
        return tuple(int(c) for c in polys[n])

    def charpoly_esym(self, i: int) -> int:
        """Degree-i elementary symmetric function of the eigenvalues,
        i.e. the trace of the i-th exterior power."""
        cp = self.charpoly()
        n = self.rows
        if i > n:
            return 0
        c = cp[n - i]
        # det(xI - A) = sum_i (-1)^i e_i x^(n-i)
        return self.field.neg(c) if i % 2 else c

    def trace(self) -> int:
        f = self.field
        t = 0
        for i in range(min(self.rows, self.cols)):
            t = f.add(t, int(self.data[i, i]))
        return t


def rank_and_nullspace(A: FFMatrix) -> tuple[int, FFMatrix]:
    """Rank and a nullspace basis (columns).  rank + nullity == cols."""
    ns = A.nullspace()
    return A.cols - ns.cols, ns


def solve_intertwiner_system(
    field: FieldSpec,
    constraints: Sequence[tuple[FFMatrix, FFMatrix]],
    dims: tuple[int, int],
) -> list[FFMatrix]:
    """Basis of {X (r x c) : X @ L_i == R_i @ X for all i}.

    Each constraint pair is (L_i, R_i) with L_i square of size c and R_i
    square of size r.  Solved by vectorization and one nullspace call; an
    empty constraint list yields the full r*c-dimensional space."""
    r, c = dims
    blocks = []
    for L, R in constraints:
        if L.rows != c or L.cols != c or R.rows != r or R.cols != r:
            raise FFError(
                f"constraint dimensions {L.shape}, {R.shape} do not match X of shape {(r, c)}"
            )
        if L.field is not field or R.field is not field:
            raise FFError("field mismatch among constraints")
        I_r = FFMatrix.identity(field, r)
        I_c = FFMatrix.identity(field, c)
        # row-major vec: vec(X @ L) = (I_r kron L^T) vec(X); vec(R @ X) = (R kron I_c) vec(X)
        blocks.append(I_r.kron(L.transpose()) - R.kron(I_c))
    if not blocks:
        ns = FFMatrix.identity(field, r * c)
    else:
        stacked = blocks[0]
        for b in blocks[1:]:
            stacked = stacked.vstack(b)
        ns = stacked.nullspace()
    return [FFMatrix(field, ns.data[:, j].reshape(r, c)) for j in range(ns.cols)]


def stack_columns(field: FieldSpec, mats: Sequence[FFMatrix]) -> FFMatrix:
    """Vectorize matrices (row-major) into the columns of one matrix."""
    if not mats:
        return FFMatrix.zeros(field, 0, 0)
    cols = [m.data.ravel() for m in mats]
    return FFMatrix(field, np.array(cols, dtype=_CODE_DTYPE).T)


def block_diag(field: FieldSpec, mats: Sequence[FFMatrix]) -> FFMatrix:
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = np.zeros((rows, cols), dtype=_CODE_DTYPE)
    r = c = 0
    for m in mats:
        out[r : r + m.rows, c : c + m.cols] = m.data
        r += m.rows
        c += m.cols
    return FFMatrix(field, out)
