"""Graded Smith normal form over K[t]/(t^P) with a Z/ell grading, t in degree 1.

A graded matrix carries residues mod ell for its target generators (rows) and
source generators (cols); homogeneity means every monomial c*t^v in entry
(i, j) has v = row_deg[i] - col_deg[j] (mod ell).  The reduction uses only
graded elementary operations, so the transforms U, V are graded units and
U*A*V = D holds exactly in K[t]/(t^P).  Pivots whose valuation reaches the
truncation bound cannot be certified and are reported, never guessed.

Shift-label bookkeeping: a free summand with label a has its degree-zero
graded piece spanned by the monomials t^v with v = a (mod ell); for a torsion
summand R/t^n(a) those v additionally satisfy v < n.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fields import PrimeField, RationalField, field_from_json

FieldT = RationalField | PrimeField


class PrecisionError(ValueError):
    """A valuation could not be certified below the truncation bound."""

    def __init__(self, message: str, required: int):
        super().__init__(message)
        self.required = required


# -- truncated polynomial helpers (lists of exactly P field elements) --------

def tp_make(field, coeffs, precision: int):
    out = [field.zero] * precision
    for i, c in enumerate(coeffs):
        if i >= precision:
            break
        out[i] = c
    return out


def tp_val(poly, field) -> int | None:
    """Valuation, or None when zero to the stored precision."""
    for i, c in enumerate(poly):
        if c != field.zero:
            return i
    return None


def tp_add(a, b, field):
    return [field.add(x, y) for x, y in zip(a, b)]


def tp_sub(a, b, field):
    return [field.sub(x, y) for x, y in zip(a, b)]


def tp_scale(a, c, field):
    return [field.mul(x, c) for x in a]


def tp_mul(a, b, field):
    P = len(a)
    out = [field.zero] * P
    for i, x in enumerate(a):
        if x == field.zero:
            continue
        for j in range(P - i):
            y = b[j]
            if y != field.zero:
                out[i + j] = field.add(out[i + j], field.mul(x, y))
    return out


def tp_shift_down(a, v, field):
    """Divide by t^v; requires the low coefficients to vanish."""
    assert all(c == field.zero for c in a[:v])
    return a[v:] + [field.zero] * v


def tp_inv_unit(a, field):
    """Inverse of a unit (a[0] != 0) in K[t]/(t^P)."""
    P = len(a)
    inv0 = field.inv(a[0])
    out = [field.zero] * P
    out[0] = inv0
    for k in range(1, P):
        s = field.zero
        for i in range(1, k + 1):
            if a[i] != field.zero:
                s = field.add(s, field.mul(a[i], out[k - i]))
        out[k] = field.neg(field.mul(inv0, s))
    return out


@dataclass(frozen=True)
class GradedMatrix:
    field: FieldT
    ell: int
    precision: int
    row_degrees: tuple[int, ...]
    col_degrees: tuple[int, ...]
    entries: tuple[tuple[tuple, ...], ...]

    def __post_init__(self):
        if self.ell < 1 or self.precision < 1:
            raise ValueError("need ell >= 1 and precision >= 1")
        if len(self.entries) != len(self.row_degrees):
            raise ValueError("row count mismatch")
        for row in self.entries:
            if len(row) != len(self.col_degrees):
                raise ValueError("column count mismatch")
            for e in row:
                if len(e) != self.precision:
                    raise ValueError("entry truncation length mismatch")
        if any(not 0 <= d < self.ell for d in self.row_degrees + self.col_degrees):
            raise ValueError("degrees must be residues in [0, ell)")
        self._check_homogeneous()

    def _check_homogeneous(self):
        for i, ri in enumerate(self.row_degrees):
            for j, cj in enumerate(self.col_degrees):
                need = (ri - cj) % self.ell
                for v, c in enumerate(self.entries[i][j]):
                    if c != self.field.zero and v % self.ell != need:
                        raise ValueError(
                            f"entry ({i},{j}) not homogeneous: t^{v} present, "
                            f"needs v = {need} mod {self.ell}")

    @property
    def nrows(self) -> int:
        return len(self.row_degrees)

    @property
    def ncols(self) -> int:
        return len(self.col_degrees)

    @staticmethod
    def build(field, ell, precision, row_degrees, col_degrees, entries) -> "GradedMatrix":
        rows = tuple(
            tuple(tuple(tp_make(field, e, precision)) for e in row) for row in entries)
        return GradedMatrix(field, ell, precision,
                            tuple(d % ell for d in row_degrees),
                            tuple(d % ell for d in col_degrees), rows)

    @staticmethod
    def zeros(field, ell, precision, row_degrees, col_degrees) -> "GradedMatrix":
        z = tuple([field.zero] * precision)
        rows = tuple(tuple(z for _ in col_degrees) for _ in row_degrees)
        return GradedMatrix(field, ell, precision,
                            tuple(d % ell for d in row_degrees),
                            tuple(d % ell for d in col_degrees), rows)

    @staticmethod
    def identity(field, ell, precision, degrees) -> "GradedMatrix":
        rows = []
        for i in range(len(degrees)):
            row = []
            for j in range(len(degrees)):
                e = [field.zero] * precision
                if i == j:
                    e[0] = field.one
                row.append(tuple(e))
            rows.append(tuple(row))
        return GradedMatrix(field, ell, precision, tuple(d % ell for d in degrees),
                            tuple(d % ell for d in degrees), tuple(rows))

    def truncated(self, precision: int) -> "GradedMatrix":
        """Forget coefficients at and above the given (smaller) precision."""
        if precision > self.precision:
            raise ValueError("cannot extend precision")
        if precision == self.precision:
            return self
        rows = tuple(tuple(e[:precision] for e in row) for row in self.entries)
        return GradedMatrix(self.field, self.ell, precision,
                            self.row_degrees, self.col_degrees, rows)

    def matmul(self, other: "GradedMatrix") -> "GradedMatrix":
        if self.ncols != other.nrows or self.field != other.field:
            raise ValueError("matrix shapes or fields incompatible")
        if self.col_degrees != other.row_degrees:
            raise ValueError("inner degree labels do not match")
        f, P = self.field, min(self.precision, other.precision)
        rows = []
        for i in range(self.nrows):
            row = []
            for j in range(other.ncols):
                acc = [f.zero] * P
                for k in range(self.ncols):
                    a, b = self.entries[i][k], other.entries[k][j]
                    if tp_val(a, f) is None or tp_val(b, f) is None:
                        continue
                    acc = tp_add(acc, tp_mul(list(a[:P]), list(b[:P]), f), f)
                row.append(tuple(acc))
            rows.append(tuple(row))
        return GradedMatrix(f, self.ell, P, self.row_degrees, other.col_degrees, tuple(rows))

    def to_json(self) -> dict:
        f = self.field
        return {
            "field": f.to_json(),
            "ell": self.ell,
            "precision": self.precision,
            "row_degrees": list(self.row_degrees),
            "col_degrees": list(self.col_degrees),
            "entries": [[[f.element_to_json(c) for c in e] for e in row]
                        for row in self.entries],
        }

    @staticmethod
    def from_json(obj: dict) -> "GradedMatrix":
        field = field_from_json(obj["field"])
        P = int(obj["precision"])
        entries = [[[field.element_from_json(c) for c in e] for e in row]
                   for row in obj["entries"]]
        return GradedMatrix.build(field, int(obj["ell"]), P,
                                  obj["row_degrees"], obj["col_degrees"], entries)


@dataclass(frozen=True)
class GradedModuleDecomp:
    """Decomposition sum of free shifts R(a_i) and torsion pieces R/t^n (b_j)."""

    ell: int
    free_shifts: tuple[int, ...]
    torsion: tuple[tuple[int, int], ...]  # (n_j, b_j), sorted
    precision: int

    def rank(self) -> int:
        return len(self.free_shifts)

    def torsion_length(self) -> int:
        return sum(n for n, _ in self.torsion)

    def graded_piece_dim(self, d: int, ambient_precision: int) -> int:
        """dim_K of the degree-d piece after tensoring down to K[t]/(t^ambient_precision)."""
        total = 0
        for a in self.free_shifts:
            total += _count_congruent(ambient_precision, (a + d) % self.ell, self.ell)
        for n, b in self.torsion:
            total += _count_congruent(min(n, ambient_precision), (b + d) % self.ell, self.ell)
        return total


def _count_congruent(bound: int, residue: int, ell: int) -> int:
    """#{v in [0, bound) : v = residue mod ell}."""
    if bound <= residue:
        return 0
    return 1 + (bound - 1 - residue) // ell


def dim_degree0(n: int, c: int, ell: int) -> int:
    """Closed-form dim of the degree-0 piece of R/t^n with shift label c in [0, ell).

    Equals 1 + floor((n - c - 1)/ell); the brute-force monomial count
    #{v in [0, n) : v = c mod ell} is its oracle.
    """
    if not 0 <= c < ell:
        raise ValueError("shift label must lie in [0, ell)")
    return 1 + (n - c - 1) // ell


@dataclass(frozen=True)
class SmithResult:
    pivots: tuple[tuple[int, int, int], ...]  # (valuation, row residue, col residue)
    U: GradedMatrix
    V: GradedMatrix
    D: GradedMatrix
    valid_precision: int
    unresolved: int  # diagonal positions that are zero to the stored precision

    def verify(self, A: GradedMatrix) -> bool:
        return self.U.matmul(A).matmul(self.V).entries == self.D.entries

    def pivot_multiset(self):
        return tuple(sorted(self.pivots))


def graded_smith(A: GradedMatrix, require_all_pivots: bool = False) -> SmithResult:
    """Diagonalize a homogeneous matrix by graded row/column units.

    Returns diag entries t^(v_k) with transforms; positions where every
    remaining entry vanishes to the stored precision are counted in
    `unresolved` (their pivots, if any, sit at exponent >= precision).
    With require_all_pivots=True such positions raise PrecisionError instead.
    """
    f, P, ell = A.field, A.precision, A.ell
    m, n = A.nrows, A.ncols
    M = [[list(e) for e in row] for row in A.entries]
    rlab, clab = list(A.row_degrees), list(A.col_degrees)
    U = [[list(e) for e in row] for row in GradedMatrix.identity(f, ell, P, A.row_degrees).entries]
    V = [[list(e) for e in row] for row in GradedMatrix.identity(f, ell, P, A.col_degrees).entries]

    pivots = []
    k = 0
    while k < min(m, n):
        best = None
        for i in range(k, m):
            for j in range(k, n):
                v = tp_val(M[i][j], f)
                if v is not None and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            break
        v, pi, pj = best

        if pi != k:
            M[k], M[pi] = M[pi], M[k]
            U[k], U[pi] = U[pi], U[k]
            rlab[k], rlab[pi] = rlab[pi], rlab[k]
        if pj != k:
            for row in M:
                row[k], row[pj] = row[pj], row[k]
            for row in V:
                row[k], row[pj] = row[pj], row[k]
            clab[k], clab[pj] = clab[pj], clab[k]

        g = tp_shift_down(M[k][k], v, f)  # unit part of the pivot
        ginv = tp_inv_unit(g, f)

        for i in range(m):
            if i == k:
                continue
            w = tp_val(M[i][k], f)
            if w is None:
                continue
            q = tp_mul(tp_shift_down(M[i][k], v, f), ginv, f)
            for j in range(n):
                M[i][j] = tp_sub(M[i][j], tp_mul(q, M[k][j], f), f)
            for j in range(m):
                U[i][j] = tp_sub(U[i][j], tp_mul(q, U[k][j], f), f)
        for j in range(n):
            if j == k:
                continue
            w = tp_val(M[k][j], f)
            if w is None:
                continue
            q = tp_mul(tp_shift_down(M[k][j], v, f), ginv, f)
            for i in range(m):
                M[i][j] = tp_sub(M[i][j], tp_mul(M[i][k], q, f), f)
            for i in range(n):
                V[i][j] = tp_sub(V[i][j], tp_mul(V[i][k], q, f), f)
        # rescale the pivot column so the diagonal entry is exactly t^v
        for i in range(m):
            M[i][k] = tp_mul(M[i][k], ginv, f)
        for i in range(n):
            V[i][k] = tp_mul(V[i][k], ginv, f)

        pivots.append((v, rlab[k], clab[k]))
        k += 1

    unresolved = min(m, n) - len(pivots)
    if unresolved and require_all_pivots:
        raise PrecisionError(
            f"{unresolved} pivot(s) not certified below t^{P}; "
            f"required precision at least {P + 1}", required=P + 1)

    def freeze(rows):
        return tuple(tuple(tuple(e) for e in row) for row in rows)

    Umat = GradedMatrix(f, ell, P, tuple(rlab), A.row_degrees, freeze(U))
    Vmat = GradedMatrix(f, ell, P, A.col_degrees, tuple(clab), freeze(V))
    Dmat = GradedMatrix(f, ell, P, tuple(rlab), tuple(clab), freeze(M))
    return SmithResult(tuple(pivots), Umat, Vmat, Dmat, P, unresolved)


def module_decomposition(presentation: GradedMatrix, ambient_degrees=None,
                         require_all_pivots: bool = False) -> GradedModuleDecomp:
    """Decompose the cokernel of a homogeneous presentation (rows = ambient generators).

    Pivots t^0 cancel a generator, pivots t^v with 0 < v < precision give
    torsion R/t^v shifted by the target label, and target generators not hit
    by any pivot stay free.  Diagonal positions that vanish to the stored
    precision contribute free summands certified only at this precision.
    """
    if ambient_degrees is not None and tuple(
            d % presentation.ell for d in ambient_degrees) != presentation.row_degrees:
        raise ValueError("ambient degrees disagree with the presentation's row degrees")
    res = graded_smith(presentation, require_all_pivots=require_all_pivots)
    return _coker_of_smith(res, presentation)


def _coker_of_smith(res: SmithResult, A: GradedMatrix) -> GradedModuleDecomp:
    torsion = []
    pivot_rows = len(res.pivots)
    for v, rdeg, _ in res.pivots:
        if v > 0:
            torsion.append((v, rdeg))
    free = list(res.D.row_degrees[pivot_rows:])
    return GradedModuleDecomp(A.ell, tuple(sorted(free)), tuple(sorted(torsion)),
                              res.valid_precision)


def _kernel_of_smith(res: SmithResult, A: GradedMatrix) -> GradedModuleDecomp:
    # kernel of a map of free modules over a PID is free: the source basis
    # vectors (columns of V) beyond the pivot block map to zero
    free = list(res.V.col_degrees[len(res.pivots):])
    return GradedModuleDecomp(A.ell, tuple(sorted(free)), (), res.valid_precision)


def two_term_cohomology(alpha: GradedMatrix):
    """(H0, H1) of the two-term complex [source -> target] given by alpha.

    H0 is the kernel (always free over K[[t]]), H1 the cokernel; both are
    read off one graded Smith reduction.
    """
    res = graded_smith(alpha)
    return _kernel_of_smith(res, alpha), _coker_of_smith(res, alpha)


def h0_dim_closed_fiber(decomp: GradedModuleDecomp) -> int:
    """dim of the degree-0 piece of a rank-r locally free sheaf on the level-0 twisted disc.

    The input must decompose into summands (K[s]/(s^ell))(a): torsion pieces of
    length exactly ell, or free summands certified at precision ell (the two
    present the same truncated module).  Each contributes exactly one
    degree-0 monomial, so the answer equals the rank.
    """
    ell = decomp.ell
    for n, _ in decomp.torsion:
        if n != ell:
            raise ValueError(
                f"summand of length {n} != ell={ell}: not locally free on the "
                "level-0 twisted disc")
    if decomp.free_shifts and decomp.precision != ell:
        raise ValueError("free summands must be certified at precision ell")
    total = 0
    for a in decomp.free_shifts:
        total += dim_degree0(ell, a % ell, ell)
    for n, b in decomp.torsion:
        total += dim_degree0(n, b % ell, ell)
    return total


def random_graded_invertible(field, ell, precision, degrees, rng, steps=6,
                             side: str = "left") -> GradedMatrix:
    """Random graded unit matrix: permutations, unit scalings, homogeneous transvections.

    side="left" builds a left multiplier for matrices with these row labels
    (its column labels stay `degrees`); side="right" builds a right
    multiplier for matrices with these column labels (row labels stay).
    """
    n = len(degrees)
    M = GradedMatrix.identity(field, ell, precision, degrees)
    if n == 0:
        return M
    rows = [[list(e) for e in row] for row in M.entries]
    lab = [d % ell for d in degrees]
    for _ in range(steps * n):
        op = rng.randrange(3) if n >= 2 else 1
        if op == 0:
            i, j = rng.sample(range(n), 2)
            if side == "left":
                rows[i], rows[j] = rows[j], rows[i]
            else:
                for r in rows:
                    r[i], r[j] = r[j], r[i]
            lab[i], lab[j] = lab[j], lab[i]
        elif op == 1:
            i = rng.randrange(n)
            c = field.random_nonzero(rng)
            if side == "left":
                rows[i] = [tp_scale(e, c, field) for e in rows[i]]
            else:
                for r in rows:
                    r[i] = tp_scale(r[i], c, field)
        else:
            i, j = rng.sample(range(n), 2)
            # row_i += shift*row_j needs exp = lab_i - lab_j; columns the reverse
            exp = (lab[i] - lab[j]) % ell if side == "left" else (lab[j] - lab[i]) % ell
            if exp + ell < precision and rng.random() < 0.5:
                exp += ell * rng.randrange(1, (precision - 1 - exp) // ell + 1)
            if exp >= precision:
                continue
            shift = [field.zero] * precision
            shift[exp] = field.random(rng)
            if side == "left":
                rows[i] = [tp_add(a, tp_mul(shift, b, field), field)
                           for a, b in zip(rows[i], rows[j])]
            else:
                for r in rows:
                    r[i] = tp_add(r[i], tp_mul(shift, r[j], field), field)
    frozen = tuple(tuple(tuple(e) for e in row) for row in rows)
    if side == "left":
        return GradedMatrix(field, ell, precision, tuple(lab),
                            tuple(d % ell for d in degrees), frozen)
    return GradedMatrix(field, ell, precision, tuple(d % ell for d in degrees),
                        tuple(lab), frozen)
