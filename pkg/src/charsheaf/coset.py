"""Extended groups G x| <phi>, twisted classes and class functions on cosets.

Notation: ``phi`` is an automorphism of an enumerated group G, given as the list
``phi[x]`` of images of element indices.  The element (x, phi^i) of the
extended group has index ``i*|G| + x``.  A coset ``H.phi g`` of a subgroup H is
the set of pairs (h phi(g), phi), h in H, on which H acts by conjugation
(h', (x, phi)) -> (h' x phi(h')^-1, phi).
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .arith import conj, cyclo_embed, scalar_key, scalar_str, simplify
from .chartab import ClassFunction, character_table
from .coxeter import Automorphism, FiniteGroup, RootedGroup, Subgroup
from .errors import InconsistencyError, ValidationError


def _compose(p: Sequence[int], q: Sequence[int]) -> List[int]:
    return [p[x] for x in q]


def automorphism_power(phi: Sequence[int], i: int) -> List[int]:
    out = list(range(len(phi)))
    for _ in range(i):
        out = _compose(phi, out)
    return out


def automorphism_order(phi: Sequence[int]) -> int:
    ident = list(range(len(phi)))
    cur = list(phi)
    k = 1
    while cur != ident:
        cur = _compose(phi, cur)
        k += 1
    return k


def check_automorphism(G: FiniteGroup, phi: Sequence[int]):
    if sorted(phi) != list(range(G.order)) or phi[0] != 0:
        raise ValidationError("phi is not a bijection fixing the identity")
    for a in G.generators:
        for b in range(G.order):
            if phi[G.mul(a, b)] != G.mul(phi[a], phi[b]):
                raise ValidationError("phi is not multiplicative")


def inner_automorphism(G: FiniteGroup, g: int) -> List[int]:
    """x -> g x g^-1."""
    return [G.conj(g, x) for x in range(G.order)]


# ---------------------------------------------------------------------------
# extended groups
# ---------------------------------------------------------------------------

class ExtendedGroup(FiniteGroup):
    """G x| <phi> with phi of order dividing n, acting regularly on G x Z/n.

    If a representation of G (``base_rep``, with ``matrix``) and a matrix ``S``
    with S A_g S^-1 = A_phi(g) are supplied, the extended group acts on the
    same space by (g, phi^i) -> A_g S^i.
    """

    def __init__(self, base: FiniteGroup, phi: Sequence[int], n: Optional[int] = None,
                 S=None, base_rep=None, name: str = "G~"):
        phi = list(phi)
        check_automorphism(base, phi)
        order = automorphism_order(phi)
        if n is None:
            n = order
        if n % order:
            raise ValidationError("n must be a multiple of the order of phi")
        self.base = base
        self.phi_perm = phi
        self.n = n
        N = base.order
        tab = base.multiplication_table
        pows = [np.asarray(automorphism_power(phi, i), dtype=np.int64) for i in range(n)]
        perms = np.empty((n * N, n * N), dtype=np.int32)
        points_i = np.repeat(np.arange(n), N)
        points_h = np.tile(np.arange(N), n)
        for i in range(n):
            for g in range(N):
                perms[i * N + g] = ((points_i + i) % n) * N + tab[g][pows[i][points_h]]
        gens = list(base.generators) + ([N] if n > 1 else [])
        nb = len(base.generators)
        words = [base.words[g] + (nb,) * i for i in range(n) for g in range(N)]
        super().__init__(perms, gens, words, name)
        self.S = tuple(tuple(r) for r in S) if S is not None else None
        if base_rep is None and hasattr(base, "matrix"):
            base_rep = base
        self.base_rep = base_rep
        self.rank = base_rep.rank if base_rep is not None else 0
        self._spow = None

    @classmethod
    def from_automorphism(cls, a: Automorphism, name: str = "G~") -> "ExtendedGroup":
        g = a.group
        r = g.rank
        S = [[0] * r for _ in range(r)]
        for i, j in enumerate(a.label_perm):
            S[j][i] = 1
        return cls(g, a.element_perm, a.order, S=S, base_rep=g, name=name)

    def element(self, g: int, i: int) -> int:
        return (i % self.n) * self.base.order + g

    def split(self, x: int) -> Tuple[int, int]:
        return x % self.base.order, x // self.base.order

    @property
    def base_embedding(self) -> List[int]:
        return list(range(self.base.order))

    def base_subgroup(self) -> Subgroup:
        return Subgroup(self.base, self, self.base_embedding)

    def _s_power(self, i: int):
        if self._spow is None:
            r = self.rank
            ident = tuple(tuple(1 if a == b else 0 for b in range(r)) for a in range(r))
            pows = [ident]
            for _ in range(1, self.n):
                pows.append(_matmul(pows[-1], self.S))
            self._spow = pows
        return self._spow[i]

    def matrix(self, x: int):
        if self.base_rep is None or self.S is None:
            raise ValidationError("extended group has no representation attached")
        g, i = self.split(x)
        return _matmul(self.base_rep.matrix(g), self._s_power(i))

    def check_equivariance(self):
        if self.S is None:
            raise ValidationError("no sigma action attached to the extended group")
        Sinv = self._s_power(self.n - 1)
        if _matmul(self.S, Sinv) != self._s_power(0):
            raise ValidationError("S^n is not the identity")
        for g in self.base.generators:
            lhs = _matmul(_matmul(self.S, self.base_rep.matrix(g)), Sinv)
            if lhs != tuple(tuple(r) for r in self.base_rep.matrix(self.phi_perm[g])):
                raise ValidationError("sigma is not equivariant for V")


def _matmul(a, b):
    n, m, k = len(a), len(b), len(b[0]) if b else 0
    return tuple(tuple(simplify(sum(a[i][t] * b[t][j] for t in range(m))) for j in range(k)) for i in range(n))


# ---------------------------------------------------------------------------
# twisted classes
# ---------------------------------------------------------------------------

@dataclass
class TwistedClassSet:
    power: int
    representatives: List[int]
    sizes: List[int]
    centralizer_orders: List[int]
    class_of: List[int]

    def __len__(self):
        return len(self.representatives)


def twisted_classes(G: FiniteGroup, phi: Sequence[int], i: int = 1) -> TwistedClassSet:
    """Orbits of x -> z x phi^i(z)^-1, with twisted-centraliser orders."""
    if isinstance(phi, Automorphism):
        phi = phi.element_perm
    phi_i = automorphism_power(phi, i)
    moves = []
    for z in G.generators:
        left = G.mul_many(z, range(G.order))
        right = G.inv(phi_i[z])
        moves.append([G.mul(x, right) for x in left])
    label = [-1] * G.order
    reps, sizes = [], []
    for start in range(G.order):
        if label[start] >= 0:
            continue
        idx = len(reps)
        orbit = [start]
        label[start] = idx
        pos = 0
        while pos < len(orbit):
            x = orbit[pos]
            pos += 1
            for m in moves:
                y = m[x]
                if label[y] < 0:
                    label[y] = idx
                    orbit.append(y)
        reps.append(start)
        sizes.append(len(orbit))
    cents = [G.order // s for s in sizes]
    for rep, c in zip(reps, cents):
        direct = sum(1 for z in range(G.order) if G.mul(G.mul(z, rep), G.inv(phi_i[z])) == rep)
        if direct != c:
            raise InconsistencyError("orbit-stabiliser identity fails for a twisted class")
    return TwistedClassSet(i, reps, sizes, cents, label)


def twisted_to_extended_classes(eg: ExtendedGroup, i: int) -> List[int]:
    """The G~-class of (x, phi^i) for each phi^i-twisted class representative x."""
    tc = twisted_classes(eg.base, eg.phi_perm, i)
    return [eg.class_of[eg.element(x, i)] for x in tc.representatives]


# ---------------------------------------------------------------------------
# cosets and class functions on them
# ---------------------------------------------------------------------------

class Coset:
    """The coset H.phi g of G x| <phi>, stored as the set H phi(g) of G-elements."""

    def __init__(self, G: FiniteGroup, phi: Sequence[int], H: Sequence[int] = None, g: int = 0):
        self.G = G
        self.phi = list(phi)
        self.H = sorted(set(H)) if H is not None else list(range(G.order))
        self.g = g
        hs = set(self.H)
        if not G.is_subgroup(self.H):
            raise ValidationError("H is not a subgroup")
        image = {self.phi[G.mul(G.mul(g, h), G.inv(g))] for h in self.H}
        if image != hs:
            raise ValidationError("phi(g H g^-1) = H fails")
        pg = self.phi[g]
        self.elements = sorted(G.mul(h, pg) for h in self.H)

    @cached_property
    def member(self) -> set:
        return set(self.elements)

    def act(self, h: int, x: int) -> int:
        G = self.G
        return G.mul(G.mul(h, x), G.inv(self.phi[h]))

    @cached_property
    def orbit_data(self) -> Tuple[List[List[int]], Dict[int, int]]:
        G = self.G
        sub = G.subgroup(self.H)
        gens = [sub.embedding[s] for s in sub.group.generators]
        orbit_of: Dict[int, int] = {}
        orbits: List[List[int]] = []
        for x in self.elements:
            if x in orbit_of:
                continue
            idx = len(orbits)
            orb = [x]
            orbit_of[x] = idx
            pos = 0
            while pos < len(orb):
                y = orb[pos]
                pos += 1
                for h in gens:
                    z = self.act(h, y)
                    if z not in orbit_of:
                        orbit_of[z] = idx
                        orb.append(z)
            orbits.append(sorted(orb))
        return orbits, orbit_of

    @property
    def orbits(self) -> List[List[int]]:
        return self.orbit_data[0]

    def orbit_index(self, x: int) -> int:
        try:
            return self.orbit_data[1][x]
        except KeyError:
            raise ValidationError("element is not in the coset") from None

    def same_as(self, other: "Coset") -> bool:
        return (self.G is other.G and self.phi == other.phi and self.H == other.H
                and self.elements == other.elements)


class CosetClassFunction:
    """A function on the coset H.phi g, constant on H-orbits."""

    __slots__ = ("coset", "values")

    def __init__(self, coset: Coset, values: Sequence):
        if len(values) != len(coset.orbits):
            raise ValidationError("one value per H-orbit is required")
        self.coset = coset
        self.values = tuple(simplify(v) for v in values)

    @classmethod
    def from_function(cls, coset: Coset, f: Callable[[int], object], check: bool = True) -> "CosetClassFunction":
        vals = []
        for orb in coset.orbits:
            v = simplify(f(orb[0]))
            if check:
                for y in orb[1:]:
                    if simplify(f(y)) != v:
                        raise ValidationError("function is not invariant under H-conjugation")
            vals.append(v)
        return cls(coset, vals)

    def __call__(self, x: int):
        return self.values[self.coset.orbit_index(x)]

    def _check(self, other):
        if not self.coset.same_as(other.coset):
            raise ValidationError("coset descriptors differ")

    def __add__(self, other):
        self._check(other)
        return CosetClassFunction(self.coset, [a + b for a, b in zip(self.values, other.values)])

    def __mul__(self, c):
        return CosetClassFunction(self.coset, [a * c for a in self.values])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, CosetClassFunction):
            return NotImplemented
        return self.coset.same_as(other.coset) and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def __repr__(self):
        return "CosetClassFunction(" + ", ".join(scalar_str(v) for v in self.values) + ")"


def coset_inner_product(f: CosetClassFunction, f2: CosetClassFunction):
    """(1/|H|) sum over the coset of f * conj(f2)."""
    f._check(f2)
    total = 0
    for orb, a, b in zip(f.coset.orbits, f.values, f2.values):
        if a and b:
            total += len(orb) * a * conj(b)
    return simplify(total * Fraction(1, len(f.coset.H)))


def coset_induce(f: CosetClassFunction, ambient: Coset = None) -> CosetClassFunction:
    """Induction from H.phi g to G.phi:  x -> (1/|H|) sum_{y : y^-1 x phi(y) in H phi(g)} f(y^-1 x phi(y))."""
    sub = f.coset
    G, phi = sub.G, sub.phi
    if ambient is None:
        ambient = Coset(G, phi)
    if ambient.G is not G or ambient.phi != phi or len(ambient.H) != G.order:
        raise ValidationError("ambient coset must be G.phi for the same G and phi")
    inv = G.inverses
    vals = []
    for orb in ambient.orbits:
        x = orb[0]
        total = 0
        for y in range(G.order):
            z = G.mul(G.mul(inv[y], x), phi[y])
            if z in sub.member:
                v = f(z)
                if v:
                    total += v
        vals.append(simplify(total * Fraction(1, len(sub.H))))
    return CosetClassFunction(ambient, vals)


def coset_restrict(F: CosetClassFunction, sub: Coset) -> CosetClassFunction:
    """Restriction of a function on G.phi to the sub-coset H.phi g."""
    return CosetClassFunction.from_function(sub, lambda x: F(x), check=False)


def transport_psi_g(f: CosetClassFunction) -> CosetClassFunction:
    """Carry f on H.phi g to H.phi' with phi' = phi o ad(g):  f'(h) = f(h phi(g))."""
    c = f.coset
    G, g = c.G, c.g
    gi = G.inv(g)
    phi2 = [c.phi[G.mul(G.mul(g, x), gi)] for x in range(G.order)]
    target = Coset(G, phi2, c.H, 0)
    pg = c.phi[g]
    return CosetClassFunction.from_function(target, lambda h: f(G.mul(h, pg)), check=False)


def transport_ambient(F: CosetClassFunction, g: int) -> CosetClassFunction:
    """The same transport on the whole group: F'(x) = F(x phi(g)) on G.(phi o ad g)."""
    c = F.coset
    G = c.G
    gi = G.inv(g)
    phi2 = [c.phi[G.mul(G.mul(g, x), gi)] for x in range(G.order)]
    target = Coset(G, phi2)
    pg = c.phi[g]
    return CosetClassFunction.from_function(target, lambda x: F(G.mul(x, pg)), check=False)


# ---------------------------------------------------------------------------
# extensions of phi-stable characters
# ---------------------------------------------------------------------------

def is_phi_stable(chi: ClassFunction, phi: Sequence[int]) -> bool:
    G = chi.group
    return all(chi(phi[c.representative]) == v for c, v in zip(G.classes, chi.values))


def extension_characters(chi: ClassFunction, eg: ExtendedGroup) -> List[ClassFunction]:
    """The n irreducible characters of G~ restricting to chi, ordered base * lambda^k.

    lambda is the linear character (g, phi^i) -> zeta_n^i; the base extension
    is the one with the smallest value key on the coset G.phi.
    """
    if chi.group is not eg.base:
        raise ValidationError("character is not on the base group")
    if not is_phi_stable(chi, eg.phi_perm):
        raise ValidationError("character is not phi-stable")
    table = character_table(eg, with_b=False)
    N = eg.base.order
    exts = [psi for psi in table if all(psi(x) == chi(x) for x in _class_sample(eg.base))]
    exts = [psi for psi in exts if all(psi(x) == chi(x) for x in range(N))]
    if len(exts) != eg.n:
        raise InconsistencyError(f"expected {eg.n} extensions, found {len(exts)}")
    coset_key = lambda psi: tuple(_sort_key(psi(eg.element(c.representative, 1))) for c in eg.base.classes)
    base = min(exts, key=coset_key)
    ordered = []
    for k in range(eg.n):
        lam = ClassFunction.from_element_function(eg, lambda x, k=k: cyclo_embed(eg.n, k * (x // N)))
        psi = base * lam
        if psi not in exts:
            raise InconsistencyError("extensions are not related by linear characters")
        ordered.append(psi)
    return ordered


def _class_sample(G: FiniteGroup) -> List[int]:
    return [c.representative for c in G.classes]


def _sort_key(v):
    k = scalar_key(v)
    return (k[0], -k[1]) if k[0] == 0 else k


def coset_restriction(psi: ClassFunction, eg: ExtendedGroup, i: int = 1) -> CosetClassFunction:
    """Values of a class function of G~ on the coset G.phi^i."""
    phi_i = automorphism_power(eg.phi_perm, i)
    c = Coset(eg.base, phi_i)
    return CosetClassFunction.from_function(c, lambda x: psi(eg.element(x, i)), check=False)


def extend_character(chi: ClassFunction, eg: ExtendedGroup) -> List[CosetClassFunction]:
    """All n extensions of chi, restricted to the coset G.phi (root-of-unity parameter k)."""
    if eg.n == 1:
        return [CosetClassFunction.from_function(Coset(eg.base, eg.phi_perm), chi, check=False)]
    return [coset_restriction(psi, eg) for psi in extension_characters(chi, eg)]


def b_preferred_character(chi: ClassFunction, eg: ExtendedGroup) -> ClassFunction:
    """The unique extension of chi to G~ whose b-invariant on V equals that of chi."""
    from .molien import b_invariant
    if eg.base_rep is None or eg.S is None:
        raise ValidationError("b-preferred extension needs a sigma-equivariant representation")
    eg.check_equivariance()
    _, b_chi = b_invariant(chi, eg.base_rep)
    if eg.n == 1:
        return ClassFunction.from_element_function(eg, lambda x: chi(eg.split(x)[0]))
    exts = extension_characters(chi, eg)
    found = []
    bs = []
    for psi in exts:
        _, b = b_invariant(psi, eg, adaptive=True)
        bs.append(b)
        if b == b_chi:
            found.append(psi)
    if len(found) != 1:
        raise InconsistencyError(f"no unique extension with b = {b_chi}; extension b-values {bs}")
    return found[0]


def b_preferred_extension(chi: ClassFunction, eg: ExtendedGroup) -> CosetClassFunction:
    return coset_restriction(b_preferred_character(chi, eg), eg)


# ---------------------------------------------------------------------------
# cyclic products
# ---------------------------------------------------------------------------

@dataclass
class CyclicProduct:
    """G = G1^n with phi(g_1, ..., g_n) = (psi(g_n), g_1, ..., g_{n-1})."""

    factor: RootedGroup
    psi: Automorphism
    n: int
    group: RootedGroup
    automorphism: Automorphism

    @cached_property
    def extended(self) -> ExtendedGroup:
        return ExtendedGroup.from_automorphism(self.automorphism)

    @cached_property
    def factor_extended(self) -> ExtendedGroup:
        return ExtendedGroup.from_automorphism(self.psi)

    @cached_property
    def _factor_lookup(self) -> Dict[tuple, int]:
        return {self.factor.matrix(w): w for w in range(self.factor.order)}

    def components(self, x: int) -> List[int]:
        r = self.factor.rank
        m = self.group.matrix(x)
        out = []
        for k in range(self.n):
            block = tuple(tuple(m[k * r + i][k * r + j] for j in range(r)) for i in range(r))
            out.append(self._factor_lookup[block])
        return out

    def compose(self, comps: Sequence[int]) -> int:
        r = self.factor.rank
        R = r * self.n
        m = [[0] * R for _ in range(R)]
        for k, w in enumerate(comps):
            b = self.factor.matrix(w)
            for i in range(r):
                for j in range(r):
                    m[k * r + i][k * r + j] = b[i][j]
        target = tuple(tuple(row) for row in m)
        for x in range(self.group.order):
            if self.group.matrix(x) == target:
                return x
        raise ValidationError("components do not form an element")

    def outer_character(self, chars: Sequence[ClassFunction]) -> ClassFunction:
        """The character chi_1 (x) ... (x) chi_n of the product group."""
        def value(x):
            v = 1
            for c, w in zip(chars, self.components(x)):
                v = v * c(w)
            return v
        return ClassFunction.from_element_function(self.group, value)

    def folded_extension(self, ext1: ClassFunction) -> CosetClassFunction:
        """From an extension of chi_1 to G1 x| <psi>, the extension of chi_1^n on G.phi.

        Value at (x_1, ..., x_n; phi) is ext1(x_1 psi(x_n) psi(x_{n-1}) ... psi(x_2); psi).
        """
        G1 = self.factor
        eg1 = self.factor_extended
        coset = Coset(self.group, self.automorphism.element_perm)

        def value(x):
            c = self.components(x)
            y = c[0]
            for k in range(self.n - 1, 0, -1):
                y = G1.mul(y, self.psi.element_perm[c[k]])
            return ext1(eg1.element(y, 1 % eg1.n))

        return CosetClassFunction.from_function(coset, value, check=False)


def cyclic_product_setting(factor_type: str, psi_perm: Sequence[int], n: int) -> CyclicProduct:
    """Build G1^n with the cyclic automorphism twisted by the diagram automorphism psi."""
    from .coxeter import build_group
    G1 = build_group(factor_type)
    r = G1.rank
    psi = Automorphism(G1, tuple(psi_perm))
    G = build_group("x".join([G1.type_label] * n))
    perm = [0] * (r * n)
    for k in range(n):
        for i in range(r):
            if k < n - 1:
                perm[k * r + i] = (k + 1) * r + i
            else:
                perm[k * r + i] = psi.label_perm[i]
    a = Automorphism(G, tuple(perm))
    return CyclicProduct(G1, psi, n, G, a)
