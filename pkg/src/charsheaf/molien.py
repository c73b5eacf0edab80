"""Molien series of characters, b-invariants, j-induction, basic and fake degrees.

A *representation* here is any object with ``rank`` and ``matrix(w)`` giving
an exact square matrix for every element index ``w`` of the underlying group;
rooted groups (Weyl groups, relative Weyl groups, extended groups) qualify.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import sympy

from .arith import LaurentPoly, conj, series_inverse, simplify
from .chartab import ClassFunction, CharacterTable, character_table, induce, inner_product
from .coxeter import FiniteGroup, RootedGroup, Subgroup
from .errors import InconsistencyError, ValidationError


@dataclass(frozen=True)
class MolienProfile:
    coefficients: Tuple
    gamma: Optional[int]
    b: Optional[int]
    order: int

    @property
    def is_zero(self) -> bool:
        return self.b is None


@dataclass(frozen=True)
class DegreesDatum:
    degrees: Tuple[int, ...]

    @property
    def order(self) -> int:
        out = 1
        for d in self.degrees:
            out *= d
        return out

    @property
    def nreflections(self) -> int:
        return sum(d - 1 for d in self.degrees)


class MatrixRepresentation:
    """An explicit representation given by a function from element indices to matrices."""

    def __init__(self, group: FiniteGroup, rank: int, matrix_fn):
        self.group = group
        self.rank = rank
        self._fn = matrix_fn
        self._cache: Dict[int, tuple] = {}

    def matrix(self, w: int):
        if w not in self._cache:
            self._cache[w] = self._fn(w)
        return self._cache[w]


def _det_one_minus_t(m) -> Tuple:
    """Coefficients (constant first) of det(1 - t*M)."""
    n = len(m)
    if n == 0:
        return (1,)
    x = sympy.Symbol("x")
    cp = sympy.Matrix(m).charpoly(x).all_coeffs()
    return tuple(simplify(Fraction(int(sympy.numer(c)), int(sympy.denom(c)))) for c in cp)


_det_cache: Dict[Tuple, Tuple] = {}


def det_one_minus_t(m) -> Tuple:
    key = tuple(tuple(r) for r in m)
    if key not in _det_cache:
        _det_cache[key] = _det_one_minus_t(key)
    return _det_cache[key]


def _rep_of(chi: ClassFunction, V):
    if V is None:
        V = chi.group
    if not hasattr(V, "matrix"):
        raise ValidationError("representation must provide matrix(w)")
    return V


def _profile(coeffs: List, order: int) -> MolienProfile:
    coeffs = tuple(simplify(c) for c in coeffs)
    for k, c in enumerate(coeffs):
        if c:
            if not isinstance(c, int) or c < 0:
                raise InconsistencyError(f"Molien coefficient {c} at t^{k} is not a nonnegative integer")
            return MolienProfile(coeffs, c, k, order)
    return MolienProfile(coeffs, None, None, order)


def molien_series(chi: ClassFunction, V=None, order: int = None) -> MolienProfile:
    """Truncated sum (1/|G|) sum_g chi(g^-1) / det(1 - t g|V), computed class by class."""
    V = _rep_of(chi, V)
    g = chi.group
    if order is None:
        order = reflection_count(V) + 1
    if order < 0:
        raise ValidationError("order must be nonnegative")
    total = [0] * (order + 1)
    inv_class = g.inverse_class
    for k, c in enumerate(g.classes):
        val = chi.values[inv_class[k]]
        if not val:
            continue
        det = det_one_minus_t(V.matrix(c.representative))
        if not any(det[1:]) and det[0] == 0:
            raise InconsistencyError("det(1 - tA) vanishes identically")
        ser = series_inverse(list(det), order)
        weight = val * c.size
        for i, s in enumerate(ser):
            if s:
                total[i] += weight * s
    scale = Fraction(1, g.order)
    return _profile([t * scale for t in total], order)


def reflection_count(V) -> int:
    """Number of elements acting on V as reflections (rank(A - 1) = 1, A^2 = 1)."""
    cached = getattr(V, "_nrefl", None)
    if cached is not None:
        return cached
    if isinstance(V, RootedGroup):
        return len(V.reflections)
    g = V.group if hasattr(V, "group") and isinstance(getattr(V, "group"), FiniteGroup) else V
    n = 0
    for w in range(g.order):
        m = sympy.Matrix(V.matrix(w))
        if m * m == sympy.eye(V.rank) and (m - sympy.eye(V.rank)).rank() == 1:
            n += 1
    try:
        V._nrefl = n
    except AttributeError:
        pass
    return n


def b_invariant(chi: ClassFunction, V=None, adaptive: bool = False) -> Tuple[int, int]:
    """(gamma, b) from the lowest nonzero term of the Molien series of chi on V."""
    V = _rep_of(chi, V)
    order = reflection_count(V) + 1
    prof = molien_series(chi, V, order)
    if prof.is_zero and adaptive:
        limit = 8 * order + 8
        while prof.is_zero and order < limit:
            order *= 2
            prof = molien_series(chi, V, order)
    if prof.is_zero:
        raise InconsistencyError(f"Molien series vanishes up to t^{order}")
    return prof.gamma, prof.b


# ---------------------------------------------------------------------------
# j-induction
# ---------------------------------------------------------------------------

def _sympy_frac(x) -> Fraction:
    x = sympy.nsimplify(x)
    return Fraction(int(sympy.numer(x)), int(sympy.denom(x)))


def quotient_module(sub: Subgroup, V) -> MatrixRepresentation:
    """H acting on U = V / Fix_H(V), realised on the complement spanned by the images of A_h - 1."""
    H = sub.group
    n = V.rank
    eye = sympy.eye(n)
    cols = []
    for h in H.generators:
        m = sympy.Matrix(V.matrix(sub.embedding[h])) - eye
        cols.extend(m.columnspace())
    if cols:
        basis = sympy.Matrix.hstack(*cols).columnspace()
    else:
        basis = []
    d = len(basis)
    if d == 0:
        return MatrixRepresentation(H, 0, lambda h: ())
    B = sympy.Matrix.hstack(*basis)
    left = (B.T * B).inv() * B.T

    def fn(h):
        A = sympy.Matrix(V.matrix(sub.embedding[h]))
        X = left * A * B
        if A * B != B * X:
            raise InconsistencyError("complement of the fixed space is not H-stable")
        return tuple(tuple(_sympy_frac(X[i, j]) for j in range(d)) for i in range(d))

    return MatrixRepresentation(H, d, fn)


def j_induce(sub: Subgroup, chi: ClassFunction, V=None, table: CharacterTable = None,
             U=None) -> ClassFunction:
    """The unique constituent psi of Ind_H^G chi with multiplicity one and b_psi^V = b_chi^U."""
    G = sub.ambient
    if V is None:
        V = G
    if U is None:
        U = quotient_module(sub, V)
    if sub.group.order == G.order:
        return ClassFunction.from_element_function(G, lambda x: chi(sub.image[x]))
    gamma_u, b_u = b_invariant(chi, U)
    if gamma_u != 1:
        raise ValidationError(f"j-induction needs gamma = 1, found {gamma_u}")
    if table is None:
        table = character_table(G)
    ind = induce(sub, chi)
    matches = []
    constituents = []
    for psi in table:
        m = inner_product(ind, psi)
        if m:
            # b_psi >= b_chi for every constituent, so the series up to t^b_chi decides
            prof = molien_series(psi, V, b_u)
            b_psi = prof.b if prof.b is not None else f">{b_u}"
            constituents.append((table.index(psi), m, b_psi))
            if prof.b == b_u and m == 1:
                matches.append(psi)
            if prof.b is not None and prof.b < b_u:
                raise InconsistencyError(f"constituent with b = {b_psi} below b_chi = {b_u}")
    if len(matches) != 1:
        raise InconsistencyError(
            f"j-induction: expected one constituent with b = {b_u}, got {len(matches)}; "
            f"constituents (index, multiplicity, b) = {constituents}")
    return matches[0]


# ---------------------------------------------------------------------------
# coset Molien series
# ---------------------------------------------------------------------------

def coset_molien_series(chi_ext: ClassFunction, eg, order: int = None) -> MolienProfile:
    """Molien series of a character of the extended group G~ on V with the sigma action.

    Computes the full sum over G~ and, independently, the decomposition along the
    cosets G.phi^i with one term per phi^i-twisted class of G weighted by the
    inverse twisted-centraliser order; raises InconsistencyError if they differ.
    """
    from .coset import twisted_classes
    if chi_ext.group is not eg:
        raise ValidationError("character is not on the extended group")
    eg.check_equivariance()
    if order is None:
        order = reflection_count(eg.base_rep) + 1
    full = molien_series(chi_ext, eg, order)
    base = eg.base
    total = [0] * (order + 1)
    for i in range(eg.n):
        tc = twisted_classes(base, eg.phi_perm, i)
        for rep, cent in zip(tc.representatives, tc.centralizer_orders):
            x = eg.element(rep, i)
            val = chi_ext(eg.inv(x))
            if not val:
                continue
            det = det_one_minus_t(eg.matrix(x))
            ser = series_inverse(list(det), order)
            w = val * Fraction(1, cent)
            for k, s in enumerate(ser):
                if s:
                    total[k] += w * s
    split = _profile([t * Fraction(1, eg.n) for t in total], order)
    if split.coefficients != full.coefficients:
        raise InconsistencyError("coset decomposition of the Molien series disagrees with the full sum")
    return full


# ---------------------------------------------------------------------------
# basic and fake degrees
# ---------------------------------------------------------------------------

def basic_degrees(g: FiniteGroup, V=None) -> DegreesDatum:
    """Degrees d_i read off by factoring the invariant series as prod 1/(1 - t^d_i)."""
    if V is None:
        V = g
    triv = ClassFunction(g, [1] * len(g.classes))
    n = V.rank
    order = g.order + 1
    series = list(molien_series(triv, V, order).coefficients)
    degrees = []
    for _ in range(n):
        d = next((k for k in range(1, order + 1) if series[k]), None)
        if d is None or series[d] < 0:
            raise ValidationError("invariant series does not factor into reflection degrees")
        for _ in range(series[d]):
            degrees.append(d)
            series = [series[k] - (series[k - d] if k >= d else 0) for k in range(order + 1)]
        if len(degrees) >= n:
            break
    degrees = sorted(degrees)[:n]
    prod = 1
    for d in degrees:
        prod *= d
    if len(degrees) != n or prod != g.order:
        raise ValidationError(f"degrees {degrees} do not multiply to |W| = {g.order}")
    return DegreesDatum(tuple(degrees))


def fake_degree(chi: ClassFunction, V=None, degrees: DegreesDatum = None) -> LaurentPoly:
    """R_chi(q) = P_chi(q) * prod (1 - q^d_i), an honest polynomial."""
    g = chi.group
    if V is None:
        V = g
    if degrees is None:
        degrees = basic_degrees(g, V)
    top = degrees.nreflections
    order = top + max(degrees.degrees) + 1
    series = list(molien_series(chi, V, order).coefficients)
    for d in degrees.degrees:
        series = [series[k] - (series[k - d] if k >= d else 0) for k in range(order + 1)]
    if any(series[top + 1:]):
        raise InconsistencyError("fake degree is not a polynomial of degree <= #reflections")
    poly = LaurentPoly(series[:top + 1], 0, "q")
    if poly.evaluate(1) != chi.degree:
        raise InconsistencyError("fake degree does not evaluate to chi(1) at q = 1")
    if any(not isinstance(c, int) or c < 0 for c in poly.coeffs):
        raise InconsistencyError("fake degree has a negative or non-integral coefficient")
    return poly
