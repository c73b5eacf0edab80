"""The Lusztig-Shoji system for a block: Omega from fake degrees, then P and Lambda.

Indexing: pairs are ordered by decreasing a-value, ties broken by the row of
E_iota in the character table of W_G(L).  ``P[i][j]`` is P_{iota_i, iota_j}
(rows iota', columns iota), so P is upper unitriangular and the system reads
``P^t Lambda P = Omega``; equivalently X_iota = sum_{iota'} P_{iota',iota} Y_iota'.

Two normalisations of Omega are provided:

``kostka``
    Omega_{ij} = R_{E_i (x) E_j}(q), the fake degree of the tensor product on
    V_G / V_L.  For GL_n this yields P_{iota', iota} = K_{lambda, lambda'}(q),
    the Kostka-Foulkes polynomials.
``stalk``
    Omega_{ij} = q^{-(a_i + a_j)/2} R_{E_i (x) E_j}(q^{-1}).  This yields the
    normalisation in which P_{iota', iota}(q) records stalks of intersection
    cohomology complexes (P = 1 along closures in GL_2), and is the one used
    when assembling character-sheaf values.

They are related by P^kostka_{i'i}(q) = q^{(dim O_i - dim O_i')/2} P^stalk_{i'i}(q^{-1}).
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from .arith import LaurentPoly, RationalFunction, scalar_str
from .chartab import ClassFunction
from .errors import InconsistencyError, ValidationError
from .molien import DegreesDatum, basic_degrees, fake_degree
from .springer import BlockDatum, GSpringerPair, dump_json

NORMALIZATIONS = ("kostka", "stalk")

ZERO = LaurentPoly((), 0, "q")
ONE = LaurentPoly.constant(1, "q")


@dataclass
class GreenTransition:
    block: Optional[BlockDatum]
    labels: List[str]
    a_values: List[int]
    omega: List[List[LaurentPoly]]
    P: List[List[LaurentPoly]]
    Lam: List[List[LaurentPoly]]
    normalization: str

    @property
    def size(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def entry(self, row_label: str, col_label: str) -> LaurentPoly:
        return self.P[self.index(row_label)][self.index(col_label)]

    def check(self):
        check_solution(self.omega, self.P, self.Lam, self.a_values)

    def to_json(self) -> dict:
        def mat(m):
            return {"entries": [[str(x) for x in row] for row in m],
                    "coefficients": [[x.to_json() for x in row] for row in m]}
        return {
            "block": self.block.id if self.block else None,
            "normalization": self.normalization,
            "order": self.labels,
            "a_values": self.a_values,
            "convention": "X_iota = sum_iota' P[iota'][iota] Y_iota'; P^t Lambda P = Omega",
            "Omega": mat(self.omega),
            "P": mat(self.P),
            "Lambda": mat(self.Lam),
        }

    def dumps(self) -> str:
        return dump_json(self.to_json())


def ordered_pairs(block: BlockDatum) -> List[GSpringerPair]:
    """Pairs sorted by decreasing a-value, then by character-table row."""
    return sorted(block.pairs, key=lambda p: (-block.ab(p)[0], p.correspondent_index))


def compute_omega(block: BlockDatum, normalization: str = "kostka",
                  degrees: DegreesDatum = None) -> List[List[LaurentPoly]]:
    if normalization not in NORMALIZATIONS:
        raise ValidationError(f"unknown normalization {normalization!r}")
    W = block.relative_group
    if degrees is None:
        degrees = basic_degrees(W, W)
    pairs = ordered_pairs(block)
    chars = [block.correspondent(p) for p in pairs]
    avals = [block.ab(p)[0] for p in pairs]
    n = len(pairs)
    omega = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            r = fake_degree_of(chars[i] * chars[j], W, degrees)
            if normalization == "stalk":
                s = -(avals[i] + avals[j])
                if s % 2:
                    raise InconsistencyError("a-values of one block differ in parity")
                r = r.invert_variable().shift(s // 2)
            omega[i][j] = omega[j][i] = r
    return omega


def fake_degree_of(chi: ClassFunction, W, degrees: DegreesDatum) -> LaurentPoly:
    if W.rank == 0:
        return LaurentPoly.constant(chi.degree, "q")
    return fake_degree(chi, W, degrees)


def _solve(A: List[List[RationalFunction]], B: List[List[RationalFunction]]) -> List[List[RationalFunction]]:
    """Solve A X = B over the field of rational functions."""
    n = len(A)
    m = len(B[0]) if B else 0
    M = [list(A[i]) + list(B[i]) for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not M[r][col].is_zero()), None)
        if piv is None:
            raise InconsistencyError("Lambda block is singular")
        M[col], M[piv] = M[piv], M[col]
        inv = M[col][col].inverse()
        M[col] = [x * inv for x in M[col]]
        for r in range(n):
            if r != col and not M[r][col].is_zero():
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [[M[i][n + j] for j in range(m)] for i in range(n)]


def solve_green_system(omega: Sequence[Sequence[LaurentPoly]], a_values: Sequence[int],
                       block_ids: Sequence = None):
    """Unique (P, Lambda) with P^t Lambda P = Omega, P unitriangular along decreasing a."""
    n = len(omega)
    if any(len(r) != n for r in omega) or len(a_values) != n:
        raise ValidationError("Omega must be square and match the a-values")
    for i in range(n):
        for j in range(n):
            if omega[i][j] != omega[j][i]:
                raise ValidationError("Omega is not symmetric")
    if any(a_values[i] < a_values[i + 1] for i in range(n - 1)):
        raise ValidationError("indices must be sorted by decreasing a-value")
    strata: List[List[int]] = []
    for i in range(n):
        if strata and a_values[strata[-1][0]] == a_values[i]:
            strata[-1].append(i)
        else:
            strata.append([i])
    R = lambda p: RationalFunction(p)
    zero = R(ZERO)
    Om = [[R(x) for x in row] for row in omega]
    P = [[R(ONE) if i == j else zero for j in range(n)] for i in range(n)]
    L = [[zero] * n for _ in range(n)]
    done: List[int] = []

    def correction(i, j):
        total = zero
        for k in done:
            if P[k][i].is_zero():
                continue
            for l in done:
                if L[k][l].is_zero() or P[l][j].is_zero():
                    continue
                total = total + P[k][i] * L[k][l] * P[l][j]
        return total

    for s, stratum in enumerate(strata):
        for i in stratum:
            for j in stratum:
                L[i][j] = Om[i][j] - correction(i, j)
        later = [j for t in strata[s + 1:] for j in t]
        if later:
            rhs = [[Om[m][j] - correction(m, j) for j in later] for m in stratum]
            block = [[L[i][m] for m in stratum] for i in stratum]
            try:
                X = _solve(block, rhs)
            except InconsistencyError:
                raise InconsistencyError(f"Lusztig-Shoji system fails at stratum a = {a_values[stratum[0]]}") from None
            for r, i in enumerate(stratum):
                for c, j in enumerate(later):
                    P[i][j] = X[r][c]
        done.extend(stratum)
    out_P, out_L = [], []
    for M, out in ((P, out_P), (L, out_L)):
        for row in M:
            new = []
            for x in row:
                if not x.is_laurent():
                    raise InconsistencyError(f"entry {x} is not a Laurent polynomial")
                new.append(x.to_laurent())
            out.append(new)
    check_solution(omega, out_P, out_L, a_values)
    if block_ids is not None:
        for i in range(n):
            for j in range(n):
                if block_ids[i] != block_ids[j] and (i != j) and (out_P[i][j] or out_L[i][j]):
                    raise InconsistencyError("P or Lambda couples two different blocks")
    return out_P, out_L


def check_solution(omega, P, L, a_values):
    n = len(omega)
    for i in range(n):
        if P[i][i] != ONE:
            raise InconsistencyError("P is not unitriangular")
        for j in range(n):
            if i != j and P[i][j] and not a_values[i] > a_values[j]:
                raise InconsistencyError("P violates the a-value order")
            if L[i][j] != L[j][i]:
                raise InconsistencyError("Lambda is not symmetric")
            if L[i][j] and a_values[i] != a_values[j]:
                raise InconsistencyError("Lambda couples different a-values")
    for i in range(n):
        for j in range(n):
            total = ZERO
            for k in range(n):
                if not P[k][i]:
                    continue
                for l in range(n):
                    if L[k][l] and P[l][j]:
                        total = total + P[k][i] * L[k][l] * P[l][j]
            if total != omega[i][j]:
                raise InconsistencyError(f"P^t Lambda P differs from Omega at ({i}, {j})")


def green_transition(block: BlockDatum, normalization: str = "kostka") -> GreenTransition:
    pairs = ordered_pairs(block)
    omega = compute_omega(block, normalization)
    avals = [block.ab(p)[0] for p in pairs]
    P, L = solve_green_system(omega, avals)
    return GreenTransition(block, [p.label for p in pairs], avals, omega, P, L, normalization)


def green_for_blocks(blocks: Sequence[BlockDatum], normalization: str = "kostka") -> GreenTransition:
    """Solve the combined system of several blocks of one group; cross-block entries must vanish."""
    entries = []
    for b in blocks:
        om = compute_omega(b, normalization)
        for k, p in enumerate(ordered_pairs(b)):
            entries.append((b, p, k, om))
    entries.sort(key=lambda e: (-e[0].ab(e[1])[0], e[0].id, e[1].correspondent_index))
    n = len(entries)
    omega = [[ZERO] * n for _ in range(n)]
    for i, (bi, pi, ki, om) in enumerate(entries):
        for j, (bj, pj, kj, _) in enumerate(entries):
            if bi is bj:
                omega[i][j] = om[ki][kj]
    avals = [e[0].ab(e[1])[0] for e in entries]
    P, L = solve_green_system(omega, avals, [e[0].id for e in entries])
    return GreenTransition(None, [f"{e[0].id}/{e[1].label}" for e in entries], avals, omega, P, L, normalization)


def convert_normalization(gt: GreenTransition, dims: Sequence[int]) -> List[List[LaurentPoly]]:
    """P^kostka_{i'i}(q) = q^{(dim O_i - dim O_i')/2} P^stalk_{i'i}(q^-1) and conversely."""
    n = gt.size
    out = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            x = gt.P[i][j]
            if not x:
                continue
            d = dims[j] - dims[i]
            if gt.normalization == "stalk":
                out[i][j] = x.invert_variable().shift(d // 2)
            else:
                out[i][j] = x.shift(-(d // 2)).invert_variable()
    return out


def x_from_y(P: Sequence[Sequence[LaurentPoly]], Y: Sequence[Sequence]) -> List[List]:
    """X_iota = sum_{iota'} P_{iota', iota} Y_iota' (rows of Y indexed like P)."""
    n = len(P)
    if len(Y) != n:
        raise ValidationError("Y-table rows do not match the P index")
    width = len(Y[0]) if Y else 0
    X = []
    for i in range(n):
        row = []
        for c in range(width):
            total = ZERO
            for k in range(n):
                if P[k][i] and Y[k][c]:
                    total = total + P[k][i] * Y[k][c]
            row.append(total)
        X.append(row)
    return X


def matrix_strings(M) -> List[List[str]]:
    return [[scalar_str(x) if not isinstance(x, LaurentPoly) else str(x) for x in row] for row in M]
