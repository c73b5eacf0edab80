"""Ordinary character tables of enumerated groups by Dixon's modular method."""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import isqrt
from typing import Callable, List, Optional, Sequence

import sympy

from .arith import Cyclotomic, conj, scalar_key, scalar_str, simplify
from .coxeter import CoxeterGroupTable, FiniteGroup, Subgroup
from .errors import InconsistencyError, ValidationError


class ClassFunction:
    """A function on the conjugacy classes of ``group``, one value per class."""

    __slots__ = ("group", "values")

    def __init__(self, group: FiniteGroup, values: Sequence):
        if len(values) != len(group.classes):
            raise ValidationError("one value per conjugacy class is required")
        self.group = group
        self.values = tuple(simplify(v) for v in values)

    @classmethod
    def from_element_function(cls, group: FiniteGroup, f: Callable[[int], object]) -> "ClassFunction":
        return cls(group, [f(c.representative) for c in group.classes])

    def __call__(self, element: int):
        return self.values[self.group.class_of[element]]

    @property
    def degree(self):
        return self.values[self.group.class_of[0]]

    def _check(self, other: "ClassFunction"):
        if other.group is not self.group:
            raise ValidationError("class functions live on different groups")

    def __add__(self, other):
        self._check(other)
        return ClassFunction(self.group, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other):
        self._check(other)
        return ClassFunction(self.group, [a - b for a, b in zip(self.values, other.values)])

    def __neg__(self):
        return ClassFunction(self.group, [-a for a in self.values])

    def __mul__(self, other):
        if isinstance(other, ClassFunction):
            self._check(other)
            return ClassFunction(self.group, [a * b for a, b in zip(self.values, other.values)])
        return ClassFunction(self.group, [a * other for a in self.values])

    __rmul__ = __mul__

    def conjugate(self) -> "ClassFunction":
        return ClassFunction(self.group, [conj(v) for v in self.values])

    def __eq__(self, other):
        if not isinstance(other, ClassFunction):
            return NotImplemented
        return self.group is other.group and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def __repr__(self):
        return "ClassFunction(" + ", ".join(scalar_str(v) for v in self.values) + ")"

    def is_rational_integral(self) -> bool:
        return all(isinstance(v, int) for v in self.values)


def inner_product(f: ClassFunction, h: ClassFunction):
    """(1/|G|) sum_g f(g) conj(h(g))."""
    f._check(h)
    g = f.group
    total = 0
    for c, a, b in zip(g.classes, f.values, h.values):
        if a and b:
            total += c.size * a * conj(b)
    return simplify(total * Fraction(1, g.order))


def trivial_character(g: FiniteGroup) -> ClassFunction:
    return ClassFunction(g, [1] * len(g.classes))


def regular_character(g: FiniteGroup) -> ClassFunction:
    return ClassFunction.from_element_function(g, lambda x: g.order if x == 0 else 0)


def restrict(sub: Subgroup, f: ClassFunction) -> ClassFunction:
    if f.group is not sub.ambient:
        raise ValidationError("class function is not on the ambient group")
    return ClassFunction.from_element_function(sub.group, lambda h: f(sub.embedding[h]))


def induce(sub: Subgroup, f: ClassFunction) -> ClassFunction:
    """Ind_H^G f, via Ind f(g) = |C_G(g)|/|H| * sum over H-classes inside the class of g."""
    if f.group is not sub.group:
        raise ValidationError("class function is not on the subgroup")
    G, H = sub.ambient, sub.group
    sums = [0] * len(G.classes)
    for hc, val in zip(H.classes, f.values):
        if val:
            sums[G.class_of[sub.embedding[hc.representative]]] += hc.size * val
    out = []
    for k, c in enumerate(G.classes):
        out.append(simplify(sums[k] * Fraction(G.order, H.order * c.size)) if sums[k] else 0)
    return ClassFunction(G, out)


# ---------------------------------------------------------------------------
# Dixon's method
# ---------------------------------------------------------------------------

def class_multiplication_coefficients(g: FiniteGroup) -> List[List[List[int]]]:
    """c[j][i][k] = #{x in C_j : x^-1 z_k in C_i} for class representatives z_k."""
    r = len(g.classes)
    c = [[[0] * r for _ in range(r)] for _ in range(r)]
    for k, ck in enumerate(g.classes):
        z = ck.representative
        for j, cj in enumerate(g.classes):
            for x in cj.elements:
                i = g.class_of[g.mul(g.inv(x), z)]
                c[j][i][k] += 1
    return c


def _choose_prime(exponent: int, order: int) -> int:
    bound = 2 * isqrt(order) + 2
    p = exponent + 1
    while p <= bound or not sympy.isprime(p):
        p += exponent
    return p


def _nullspace_mod(rows: List[List[int]], ncols: int, p: int) -> List[List[int]]:
    """Basis of {x : rows . x = 0} over F_p."""
    m = [list(r) for r in rows]
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col] % p), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][col], -1, p)
        m[rank] = [(v * inv) % p for v in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col] % p:
                f = m[i][col]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[rank])]
        pivots.append(col)
        rank += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        x = [0] * ncols
        x[fcol] = 1
        for i, pc in enumerate(pivots):
            x[pc] = (-m[i][fcol]) % p
        basis.append(x)
    return basis


def _matvec(m, v, p):
    return [sum(a * b for a, b in zip(row, v)) % p for row in m]


def _split_spaces(mats: List[List[List[int]]], r: int, p: int) -> List[List[int]]:
    """Common eigenvectors (right) of the given matrices over F_p."""
    spaces = [[[1 if i == j else 0 for i in range(r)] for j in range(r)]]
    for m in mats:
        new = []
        for basis in spaces:
            if len(basis) == 1:
                new.append(basis)
                continue
            # image of basis vectors under m, restricted to the span of the basis
            d = len(basis)
            imgs = [_matvec(m, b, p) for b in basis]
            found = []
            for lam in range(p):
                # coefficient vectors c with sum c_i (m - lam) b_i = 0
                rows = [[(imgs[i][k] - lam * basis[i][k]) % p for i in range(d)] for k in range(r)]
                ns = _nullspace_mod(rows, d, p)
                if ns:
                    vecs = [[sum(c[i] * basis[i][k] for i in range(d)) % p for k in range(r)] for c in ns]
                    found.append(vecs)
                    if sum(len(f) for f in found) == d:
                        break
            if sum(len(f) for f in found) != d:
                raise InconsistencyError("class matrices are not diagonalisable mod p")
            new.extend(found)
        spaces = new
        if all(len(s) == 1 for s in spaces):
            break
    if not all(len(s) == 1 for s in spaces):
        raise InconsistencyError("class matrices failed to separate the characters")
    return [s[0] for s in spaces]


def _dixon(g: FiniteGroup) -> List[List]:
    r = len(g.classes)
    order = g.order
    e = g.exponent
    p = _choose_prime(e, order)
    coeffs = class_multiplication_coefficients(g)
    mats = [[[coeffs[j][i][k] % p for k in range(r)] for i in range(r)] for j in range(r)]
    # order matrices so that those with many distinct entries come first
    vectors = _split_spaces(mats[1:] if r > 1 else mats, r, p)
    sizes = g.class_sizes
    ident_class = g.class_of[0]
    inv_class = g.inverse_class
    root = sympy.primitive_root(p)
    zeta_p = pow(root, (p - 1) // e, p)
    power_classes = [[g.power_class(k, j) for j in range(e)] for k in range(r)]
    rows = []
    for v in vectors:
        scale = pow(v[ident_class], -1, p)
        omega = [(x * scale) % p for x in v]
        s = sum(omega[k] * omega[inv_class[k]] * pow(sizes[k], -1, p) for k in range(r)) % p
        deg_sq = (order * pow(s, -1, p)) % p
        deg = next((d for d in range(1, isqrt(order) + 1) if (d * d - deg_sq) % p == 0), None)
        if deg is None:
            raise InconsistencyError("no integer degree found in Dixon lift")
        chi_mod = [(deg * omega[k] * pow(sizes[k], -1, p)) % p for k in range(r)]
        values = []
        inv_e = pow(e, -1, p)
        for k in range(r):
            mult = {}
            for s_ in range(e):
                m = sum(chi_mod[power_classes[k][j]] * pow(zeta_p, (-j * s_) % e, p) for j in range(e)) * inv_e % p
                if m > deg:
                    raise InconsistencyError("eigenvalue multiplicity out of range in Dixon lift")
                if m:
                    mult[s_] = m
            if sum(mult.values()) != deg:
                raise InconsistencyError("eigenvalue multiplicities do not sum to the degree")
            values.append(simplify(Cyclotomic.from_exponents(e, mult)))
        rows.append(values)
    return rows


@dataclass
class CharacterTable:
    group: FiniteGroup
    characters: List[ClassFunction]

    @property
    def class_sizes(self) -> List[int]:
        return self.group.class_sizes

    @property
    def class_reps(self) -> List[int]:
        return self.group.class_reps

    def __len__(self):
        return len(self.characters)

    def __getitem__(self, i) -> ClassFunction:
        return self.characters[i]

    def __iter__(self):
        return iter(self.characters)

    @property
    def degrees(self) -> List:
        return [c.degree for c in self.characters]

    def index(self, chi: ClassFunction) -> int:
        for i, c in enumerate(self.characters):
            if c == chi:
                return i
        raise ValidationError("class function is not an irreducible character of this table")

    def decompose(self, f: ClassFunction) -> List:
        return [inner_product(f, chi) for chi in self.characters]

    def trivial_index(self) -> int:
        return self.index(trivial_character(self.group))

    @cached_property
    def b_invariants(self) -> Optional[List[int]]:
        return _b_invariants(self.group, self.characters)

    def to_tsv(self) -> str:
        g = self.group
        head = ["chi"] + [c.label for c in g.classes]
        lines = ["\t".join(head), "\t".join(["size"] + [str(c.size) for c in g.classes])]
        for i, chi in enumerate(self.characters):
            lines.append("\t".join([f"X{i + 1}"] + [scalar_str(v) for v in chi.values]))
        return "\n".join(lines) + "\n"


def _b_invariants(g: FiniteGroup, chars: Sequence[ClassFunction]) -> Optional[List[int]]:
    if not hasattr(g, "matrix") or getattr(g, "rank", 0) == 0:
        return None
    from .molien import b_invariant
    return [b_invariant(chi, g, adaptive=True)[1] for chi in chars]


def check_orthogonality(t: CharacterTable):
    """Exact row and column orthogonality; raises InconsistencyError on failure."""
    chars = t.characters
    for i, a in enumerate(chars):
        for j, b in enumerate(chars):
            ip = inner_product(a, b)
            if ip != (1 if i == j else 0):
                raise InconsistencyError(f"rows {i}, {j} are not orthonormal")
    g = t.group
    for k in range(len(g.classes)):
        for l in range(len(g.classes)):
            s = simplify(sum(chi.values[k] * conj(chi.values[l]) for chi in chars))
            expected = g.centralizer_order(k) if k == l else 0
            if s != expected:
                raise InconsistencyError(f"columns {k}, {l} are not orthogonal")


def character_table(g: FiniteGroup, with_b: bool = True) -> CharacterTable:
    """The irreducible characters of g, sorted by degree, b-invariant, then values."""
    attr = "_character_table" if with_b else "_character_table_plain"
    cached = getattr(g, attr, None)
    if cached is not None:
        return cached
    rows = _dixon(g)
    chars = [ClassFunction(g, r) for r in rows]
    if isinstance(g, CoxeterGroupTable) and not all(c.is_rational_integral() for c in chars):
        raise InconsistencyError("Weyl group character with a non-integer value")
    if sum(c.degree ** 2 for c in chars) != g.order:
        raise InconsistencyError("sum of squared degrees differs from the group order")
    bs = _b_invariants(g, chars) if with_b else None
    keys = []
    for i, c in enumerate(chars):
        vals = tuple(_neg_key(v) for v in c.values)
        keys.append((c.degree, bs[i] if bs else 0, vals))
    order = sorted(range(len(chars)), key=lambda i: keys[i])
    table = CharacterTable(g, [chars[i] for i in order])
    setattr(g, attr, table)
    return table


def _neg_key(v):
    """Sort key placing larger values first so the trivial character precedes the sign."""
    k = scalar_key(v)
    if k[0] == 0:
        return (0, -k[1])
    return k


def sign_character(g) -> ClassFunction:
    """w -> (-1)^length(w) for a group with a length function."""
    return ClassFunction.from_element_function(g, lambda w: -1 if g.length(w) % 2 else 1)


def reflection_character(g) -> ClassFunction:
    """Trace of the matrix of each element of a rooted group."""
    return ClassFunction.from_element_function(g, lambda w: sum(g.matrix(w)[i][i] for i in range(g.rank)))
