"""Cotangent-complex pullbacks along twisted arcs and height functions.

For the implemented quotients the pullback of the cotangent complex along the
equivariant lift of a twisted arc is a two-term complex of graded modules over
K[s]/(s^P): [Omega -> 0] for finite groups, [Omega -> g^dual] with the action
covector row (w_1 y_1(s), ..., w_n y_n(s)) for G_m.  Heights of the relative
cotangent complex against the good moduli space are read off graded Smith
data:

  het^1 = (1/ell) * sum(n_j)   from the torsion of H^1 of the pullback,
  het^0 = (1/ell) * sum(m_k)   from the cokernel of the comparison map into
                               the dual of the pulled-back differentials of Y,

and the degree-0 Ext dimensions entering the height-weight identity come from
the closed-form counter dim(S/u^n(c))_0 = 1 + floor((n-c-1)/ell).

The grading labels here force the default cotangent twist convention: with
the opposite convention the comparison matrices stop being homogeneous, so
this module always uses "cotangent".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arcs import TwistedArc, mp_eval_series, omega_on_model, sv_val
from .gradedsmith import (GradedMatrix, PrecisionError, dim_degree0, graded_smith,
                          two_term_cohomology)
from .quotient import AffineModelY, CyclicQuotientStack, MPoly, mp_diff
from .weights import cotangent_label, weight_of_sector


class NonGenericArcError(ValueError):
    """The arc misses the locus where the identity applies (or looks like it at this precision)."""


@dataclass(frozen=True)
class InfiniteHeight:
    """Sentinel: the relevant cohomology keeps a free summand, so the height is infinite."""

    free_rank: int

    def __str__(self):
        return f"infinite (free rank {self.free_rank})"


@dataclass(frozen=True)
class ArcCotangentData:
    """Graded Smith bookkeeping of one twisted arc.

    a_shifts are the free shifts of H^0 of the pulled-back cotangent complex,
    (n_j, b_j) the torsion of H^1, and m_k the pivots of the comparison map
    whose cokernel computes het^0 of the relative complex.  Residue
    representatives are normalized to a, b, r in (0, ell] and c in [0, ell).
    """

    ell: int
    a_shifts: tuple[int, ...]
    h1_torsion: tuple[tuple[int, int], ...]
    h1_free: tuple[int, ...]
    m_list: tuple[int, ...] | None
    c_list: tuple[int, ...]
    s_precision: int

    @property
    def n_list(self) -> tuple[int, ...]:
        return tuple(n for n, _ in self.h1_torsion)

    @property
    def b_list(self) -> tuple[int, ...]:
        return tuple(_rep(b, self.ell) for _, b in self.h1_torsion)

    def qr_lists(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """q_j and r_j in (0, ell] with b_j - n_j = q_j*ell + r_j."""
        qs, rs = [], []
        for n, b in zip(self.n_list, self.b_list):
            q = (b - n - 1) // self.ell
            r = b - n - q * self.ell
            qs.append(q)
            rs.append(r)
        return tuple(qs), tuple(rs)


def _rep(residue: int, ell: int) -> int:
    r = residue % ell
    return r if r else ell


def _dense(series, fld, precision: int):
    out = [fld.zero] * precision
    for e, c in series.items():
        if e < precision:
            out[e] = c
    return out


def cotangent_complex_matrix(stack: CyclicQuotientStack, arc: TwistedArc) -> GradedMatrix:
    """The two-term complex [Omega -> g^dual] pulled back along the arc's lift."""
    ell, P, fld = arc.sector.ell, arc.s_precision, arc.fld
    col_labels = [cotangent_label(k, ell, "cotangent") for k in arc.sector.eigen_exponents]
    if stack.kind == "mu":
        return GradedMatrix.zeros(fld, ell, P, [], col_labels)
    row = []
    for i, w in enumerate(stack.weights):
        entry = _dense({e: fld.mul(c, fld.from_int(w)) for e, c in arc.series[i].items()
                        if fld.mul(c, fld.from_int(w)) != fld.zero}, fld, P)
        row.append(entry)
    return GradedMatrix.build(fld, ell, P, [0], col_labels, [row])


def pullback_LX(stack: CyclicQuotientStack, arc: TwistedArc):
    """H^0 free shifts and H^1 decomposition of the pulled-back cotangent complex."""
    alpha = cotangent_complex_matrix(stack, arc)
    h0, h1 = two_term_cohomology(alpha)
    return h0, h1


def relative_cotangent_data(stack: CyclicQuotientStack, y_model: AffineModelY,
                            arc: TwistedArc) -> ArcCotangentData:
    """Full Smith bookkeeping of L_X| and of the comparison map against Y.

    The comparison map sends a vector field along the arc to its pairing with
    the pulled-back generator differentials, written in a basis of the dual
    of the pulled-back Y-differentials (the kernel of the transposed relation
    Jacobian, computed at t-level and stretched to s).  Its cokernel pivots
    are the m_k.
    """
    if stack.kind != "mu":
        raise ValueError("relative heights are implemented for mu_N quotients only")
    if len(y_model.generators) > y_model.dim and not y_model.relations:
        raise ValueError("Y model lacks relation data: heights need a presentation of Y")
    fld, ell = arc.fld, arc.sector.ell
    P, Tt = arc.s_precision, arc.t_precision
    n = stack.n

    h0, h1 = pullback_LX(stack, arc)
    a_shifts = tuple(sorted(_rep(a, ell) for a in h0.free_shifts))
    h1_torsion = tuple(sorted((nj, _rep(bj, ell)) for nj, bj in h1.torsion))
    h1_free = tuple(sorted(h1.free_shifts))

    y_series = omega_on_model(arc, y_model)  # t-series per generator
    gens = y_model.generators

    # transposed relation Jacobian at t-level: rows = relations, cols = generators
    rel_rows = []
    for rel in y_model.relations:
        rel_rows.append([_dense(mp_eval_series(mp_diff(rel, a), y_series, fld, Tt), fld, Tt)
                         for a in range(len(gens))])
    RT = GradedMatrix.build(fld, 1, Tt, [0] * len(y_model.relations),
                            [0] * len(gens), rel_rows)
    res = graded_smith(RT)
    kernel_cols = list(range(len(res.pivots), len(gens)))
    if len(kernel_cols) != y_model.dim:
        raise NonGenericArcError(
            f"pulled-back relations have rank {len(res.pivots)}; expected "
            f"{len(gens) - y_model.dim} (arc too degenerate or precision too low)")
    # the truncated kernel basis agrees with a true one only below the
    # relation pivots: account the precision loss ell * max(v) now
    vloss = ell * max((v for v, _, _ in res.pivots), default=0)
    if vloss >= P:
        raise PrecisionError("relation pivots eat the whole arc precision",
                             required=P + vloss)
    # kernel basis of RT, stretched from t to s (t = s^ell)
    B_rows = []
    for a in range(len(gens)):
        row = []
        for j in kernel_cols:
            ent = [fld.zero] * P
            for v, c in enumerate(res.V.entries[a][j]):
                if v * ell < P and c != fld.zero:
                    ent[v * ell] = c
            row.append(ent)
        B_rows.append(row)
    B = GradedMatrix.build(fld, ell, P, [0] * len(gens), [0] * y_model.dim, B_rows)

    # pairing of coordinate vector fields with the generator differentials
    jt_rows = []
    for a, g in enumerate(gens):
        row = []
        for i in range(n):
            mono: MPoly = {tuple(g): 1}
            dg = mp_diff(mono, i)
            row.append(_dense(mp_eval_series(dg, list(arc.series), fld, P), fld, P))
        jt_rows.append(row)
    sigma = [(-cotangent_label(k, ell, "cotangent")) % ell
             for k in arc.sector.eigen_exponents]
    JT = GradedMatrix.build(fld, ell, P, [0] * len(gens), sigma, jt_rows)

    C = _solve_in_basis(B, JT, valid_precision=P - vloss)
    resC = graded_smith(C)
    if resC.unresolved:
        raise PrecisionError(
            "comparison-map pivot not certified at this arc precision; "
            f"increase the arc precision beyond {P}", required=P + ell)
    m_list = tuple(sorted(v for v, _, _ in resC.pivots))
    if len(m_list) < y_model.dim:
        raise NonGenericArcError("comparison map is not generically surjective here")
    c_list = tuple(sorted((-m) % ell for m in m_list))
    if sorted(m % ell for m in m_list) != sorted(a % ell for a in a_shifts):
        raise AssertionError(
            "comparison pivots break the residue bookkeeping {m_k} = {a_i} mod ell")
    return ArcCotangentData(ell, a_shifts, h1_torsion, h1_free, m_list, c_list, P)


def _solve_in_basis(B: GradedMatrix, RHS: GradedMatrix,
                    valid_precision: int | None = None) -> GradedMatrix:
    """Solve B*C = RHS for C, with B a saturated basis matrix (unit Smith pivots).

    The residual check and the solution are certified only below
    valid_precision (the basis itself may carry noise above it); the returned
    matrix is truncated there.
    """
    fld = B.field
    if valid_precision is None:
        valid_precision = B.precision
    res = graded_smith(B)
    r = B.ncols
    if len(res.pivots) != r or any(v != 0 for v, _, _ in res.pivots):
        raise NonGenericArcError("basis matrix is not saturated at this precision")
    lifted = res.U.matmul(RHS)
    for i in range(r, B.nrows):
        for j in range(RHS.ncols):
            v = sv_val({k: c for k, c in enumerate(lifted.entries[i][j])
                        if c != fld.zero})
            if v is not None and v < valid_precision:
                raise NonGenericArcError(
                    "right-hand side does not lie in the span of the basis")
    top = GradedMatrix(fld, B.ell, lifted.precision, res.D.row_degrees[:r],
                       lifted.col_degrees, lifted.entries[:r])
    return res.V.matmul(top).truncated(valid_precision)


def het_i(data: ArcCotangentData, i: int):
    """(1/ell) times the total torsion length of H^i of the relative complex.

    Returns the infinite sentinel when a free summand survives where torsion
    is required.
    """
    if i == 1:
        if data.h1_free:
            return InfiniteHeight(len(data.h1_free))
        return Fraction(sum(data.n_list), data.ell)
    if i == 0:
        if data.m_list is None:
            raise ValueError("no comparison data: compute relative_cotangent_data first")
        return Fraction(sum(data.m_list), data.ell)
    raise ValueError("i must be 0 or 1")


@dataclass(frozen=True)
class HeightReport:
    het0: Fraction
    het1: Fraction
    torsion_coker: Fraction
    het_xy: Fraction


def compute_height_report(stack: CyclicQuotientStack, y_model: AffineModelY,
                          arc: TwistedArc) -> HeightReport:
    """het_{X/Y} of a twisted arc via the smooth-case formula het^0 - het^1.

    The torsion-cokernel correction of the general relative height vanishes
    identically here: H^0 of the pulled-back cotangent complex of a smooth
    quotient is a submodule of a free module, hence torsion-free.
    """
    data = relative_cotangent_data(stack, y_model, arc)
    h0 = het_i(data, 0)
    h1 = het_i(data, 1)
    if isinstance(h0, InfiniteHeight) or isinstance(h1, InfiniteHeight):
        raise NonGenericArcError("height infinite along this arc")
    return HeightReport(h0, h1, Fraction(0), h0 - h1)


@dataclass(frozen=True)
class IdentityLedger:
    """Both sides of the degree-0 height-weight identity plus the full bookkeeping."""

    lhs_ext1_dim0: int
    lhs_ext0_tors_dim0: int
    rhs_het: Fraction
    rhs_wt: Fraction
    equal: bool
    a_list: tuple[int, ...]
    b_list: tuple[int, ...]
    n_list: tuple[int, ...]
    q_list: tuple[int, ...]
    r_list: tuple[int, ...]
    m_list: tuple[int, ...]
    c_list: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "lhs": self.lhs_ext1_dim0 - self.lhs_ext0_tors_dim0,
            "ext1_dim0": self.lhs_ext1_dim0,
            "ext0_tors_dim0": self.lhs_ext0_tors_dim0,
            "het": str(self.rhs_het),
            "wt": str(self.rhs_wt),
            "rhs": str(self.rhs_het + self.rhs_wt),
            "equal": self.equal,
            "a": list(self.a_list), "b": list(self.b_list), "n": list(self.n_list),
            "q": list(self.q_list), "r": list(self.r_list),
            "m": list(self.m_list), "c": list(self.c_list),
        }


def check_height_weight_identity(stack: CyclicQuotientStack, y_model: AffineModelY,
                                 arc: TwistedArc) -> IdentityLedger:
    """Degree-0 identity: dim Ext^1(rel, O)_0 - dim Ext^0(L_X|, O)_tors,0 = het + wt.

    Both sides are computed independently: the left from the closed-form
    degree-0 counters on the Smith data, the right from the scaled torsion
    lengths and the sector weight.  Requires ell > 1 and a generically
    nondegenerate arc.
    """
    if arc.sector.ell <= 1:
        raise ValueError("the identity concerns genuinely twisted arcs (ell > 1)")
    if all(sv_val(s) is None for s in arc.series):
        raise NonGenericArcError(
            "arc vanishes to its precision: cannot certify genericity")
    data = relative_cotangent_data(stack, y_model, arc)
    ell = data.ell
    qs, rs = data.qr_lists()

    ext1_dim0 = sum(dim_degree0(m, 0, ell) for m in data.m_list)
    ext0_tors_dim0 = sum(dim_degree0(n, (ell - r) % ell, ell)
                         for n, r in zip(data.n_list, rs))
    lhs = ext1_dim0 - ext0_tors_dim0

    h0, h1 = het_i(data, 0), het_i(data, 1)
    if isinstance(h0, InfiniteHeight) or isinstance(h1, InfiniteHeight):
        raise NonGenericArcError("height infinite along this arc")
    het = h0 - h1
    wt = weight_of_sector(stack, arc.sector, "cotangent").wt
    rhs = het + wt
    return IdentityLedger(ext1_dim0, ext0_tors_dim0, het, wt,
                          Fraction(lhs) == rhs,
                          data.a_shifts, data.b_list, data.n_list,
                          qs, rs, data.m_list, data.c_list)
